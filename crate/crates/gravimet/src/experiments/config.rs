//! Flat `key = value` sweep configuration.
//!
//! One assignment per line, dotted keys, `#` comments, and comma-separated
//! lists — trivially parsed in any language. Unset keys take the
//! documented defaults, so an empty file is a valid config.

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::dynamics::PhysicalParams;
use crate::gaussian::ProbeSpec;

/// Default probe set: one representative of each preparation family, all
/// tuned to mean excitation n₀ = 4 (|α| = 2; n_th = 4; sinh²r ≈ 4;
/// and the (n_th, r) = (1, 0.8814) squeezed-thermal pair).
pub const DEFAULT_COHERENT_ALPHA: f64 = 2.0;
pub const DEFAULT_THERMAL_N: f64 = 4.0;
pub const DEFAULT_SQUEEZED_R: f64 = 1.4436;
pub const DEFAULT_SQUEEZED_THERMAL_N: f64 = 1.0;
pub const DEFAULT_SQUEEZED_THERMAL_R: f64 = 0.8814;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue {
        line: usize,
        key: String,
        value: String,
        reason: String,
    },
    #[error("invalid configuration field `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("missing configuration field `{field}`: {reason}")]
    Missing { field: &'static str, reason: String },
}

/// Axis grid for time or Λ_g sweeps. `n_points` includes both endpoints;
/// a log grid needs `min > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub n_points: usize,
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

impl fmt::Display for Spacing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spacing::Linear => write!(f, "linear"),
            Spacing::Log => write!(f, "log"),
        }
    }
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.n_points == 1 {
            return vec![self.min];
        }
        let n = self.n_points as f64 - 1.0;
        (0..self.n_points)
            .map(|i| {
                let frac = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.min + frac * (self.max - self.min),
                    Spacing::Log => self.min * (self.max / self.min).powf(frac),
                }
            })
            .collect()
    }

    fn validate(&self, field: &'static str) -> Result<(), ConfigError> {
        let fail = |reason: String| Err(ConfigError::Invalid { field, reason });
        if !(self.min.is_finite() && self.max.is_finite()) {
            return fail("grid endpoints must be finite".into());
        }
        if self.min > self.max {
            return fail(format!("min = {} exceeds max = {}", self.min, self.max));
        }
        if self.n_points == 0 {
            return fail("grid needs at least one point".into());
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return fail("log spacing needs min > 0".into());
        }
        Ok(())
    }
}

/// A probe preparation with the name used in output tables.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedProbe {
    pub name: String,
    pub spec: ProbeSpec<f64>,
}

/// Everything a sweep run needs. Construct via [`Default`], [`parse_config`]
/// or [`load_config`].
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub params: PhysicalParams<f64>,
    pub probes: Vec<NamedProbe>,
    pub time_grid: Grid,
    /// Second axis for `qfi-contour`; required there, unused elsewhere.
    pub lambda_g_grid: Option<Grid>,
    /// Extra squeezed-vacuum probes appended to purity/QFI sweeps, one per
    /// squeezing value.
    pub r_grid: Vec<f64>,
    /// Probe used for the contour sweep.
    pub contour_probe: String,
    pub output_path: PathBuf,
    pub n_repetitions: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            params: PhysicalParams::new(1.0, 0.1, 0.5, 1e-8, 0.0)
                .expect("default parameters are valid"),
            probes: default_probes(),
            time_grid: Grid {
                min: 0.0,
                max: 200.0,
                n_points: 201,
                spacing: Spacing::Linear,
            },
            lambda_g_grid: None,
            r_grid: Vec::new(),
            contour_probe: "squeezed_vacuum".into(),
            output_path: PathBuf::from("sweep.csv"),
            n_repetitions: 1,
        }
    }
}

pub fn default_probes() -> Vec<NamedProbe> {
    vec![
        NamedProbe {
            name: "coherent".into(),
            spec: ProbeSpec::Coherent {
                alpha_re: DEFAULT_COHERENT_ALPHA,
                alpha_im: 0.0,
            },
        },
        NamedProbe {
            name: "thermal".into(),
            spec: ProbeSpec::Thermal {
                n_th0: DEFAULT_THERMAL_N,
            },
        },
        NamedProbe {
            name: "squeezed_vacuum".into(),
            spec: ProbeSpec::SqueezedVacuum {
                r: DEFAULT_SQUEEZED_R,
                phi: 0.0,
            },
        },
        NamedProbe {
            name: "squeezed_thermal".into(),
            spec: ProbeSpec::SqueezedThermal {
                n_th0: DEFAULT_SQUEEZED_THERMAL_N,
                r: DEFAULT_SQUEEZED_THERMAL_R,
                phi: 0.0,
            },
        },
    ]
}

/// Raw key-value assignments accumulated before validation.
#[derive(Debug, Default)]
struct RawConfig {
    values: Vec<(usize, String, String)>,
}

/// A lambda_g_grid under construction; all three range fields must be set
/// by the end of the file.
#[derive(Debug)]
struct PartialGrid {
    min: Option<f64>,
    max: Option<f64>,
    n_points: Option<usize>,
    spacing: Spacing,
}

impl Default for PartialGrid {
    fn default() -> Self {
        Self {
            min: None,
            max: None,
            n_points: None,
            spacing: Spacing::Log,
        }
    }
}

pub fn load_config(path: &Path) -> Result<SweepConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let mut raw = RawConfig::default();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let stripped = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let stripped = stripped.trim();
        if stripped.is_empty() {
            continue;
        }
        let Some((key, value)) = stripped.split_once('=') else {
            return Err(ConfigError::Syntax {
                line: line_no,
                text: stripped.to_string(),
            });
        };
        raw.values
            .push((line_no, key.trim().to_string(), value.trim().to_string()));
    }
    build(raw)
}

fn build(raw: RawConfig) -> Result<SweepConfig, ConfigError> {
    let mut cfg = SweepConfig::default();
    // the params and grids are rebuilt at the end so later keys can
    // override earlier ones without ordering constraints
    let mut omega_m = cfg.params.omega_m();
    let mut gamma = cfg.params.gamma();
    let mut n_th = cfg.params.n_th();
    let mut lambda_g = cfg.params.lambda_g();
    let mut lambda_t = cfg.params.lambda_t();
    let mut probe_names: Vec<String> = cfg.probes.iter().map(|p| p.name.clone()).collect();
    let mut coherent = (DEFAULT_COHERENT_ALPHA, 0.0);
    let mut thermal_n = DEFAULT_THERMAL_N;
    let mut sv = (DEFAULT_SQUEEZED_R, 0.0);
    let mut st = (DEFAULT_SQUEEZED_THERMAL_N, DEFAULT_SQUEEZED_THERMAL_R, 0.0);
    let mut lambda_grid: Option<PartialGrid> = None;

    for (line, key, value) in &raw.values {
        let line = *line;
        let parse_f64 = || -> Result<f64, ConfigError> {
            value.parse::<f64>().map_err(|e| ConfigError::InvalidValue {
                line,
                key: key.clone(),
                value: value.clone(),
                reason: e.to_string(),
            })
        };
        let parse_usize = || -> Result<usize, ConfigError> {
            value
                .parse::<usize>()
                .map_err(|e| ConfigError::InvalidValue {
                    line,
                    key: key.clone(),
                    value: value.clone(),
                    reason: e.to_string(),
                })
        };
        let parse_spacing = || -> Result<Spacing, ConfigError> {
            match value.as_str() {
                "linear" => Ok(Spacing::Linear),
                "log" => Ok(Spacing::Log),
                other => Err(ConfigError::InvalidValue {
                    line,
                    key: key.clone(),
                    value: other.to_string(),
                    reason: "expected `linear` or `log`".into(),
                }),
            }
        };
        match key.as_str() {
            "params.omega_m" => omega_m = parse_f64()?,
            "params.gamma" => gamma = parse_f64()?,
            "params.n_th" => n_th = parse_f64()?,
            "params.lambda_g" => lambda_g = parse_f64()?,
            "params.lambda_t" => lambda_t = parse_f64()?,
            "time_grid.t_min" => cfg.time_grid.min = parse_f64()?,
            "time_grid.t_max" => cfg.time_grid.max = parse_f64()?,
            "time_grid.n_points" => cfg.time_grid.n_points = parse_usize()?,
            "time_grid.spacing" => cfg.time_grid.spacing = parse_spacing()?,
            "lambda_g_grid.min" => {
                lambda_grid.get_or_insert_with(PartialGrid::default).min = Some(parse_f64()?)
            }
            "lambda_g_grid.max" => {
                lambda_grid.get_or_insert_with(PartialGrid::default).max = Some(parse_f64()?)
            }
            "lambda_g_grid.n_points" => {
                lambda_grid
                    .get_or_insert_with(PartialGrid::default)
                    .n_points = Some(parse_usize()?)
            }
            "lambda_g_grid.spacing" => {
                lambda_grid.get_or_insert_with(PartialGrid::default).spacing = parse_spacing()?
            }
            "r_grid" => {
                cfg.r_grid = parse_list_f64(value).map_err(|reason| ConfigError::InvalidValue {
                    line,
                    key: key.clone(),
                    value: value.clone(),
                    reason,
                })?
            }
            "probes" => {
                probe_names = value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            }
            "probe.coherent.alpha_re" => coherent.0 = parse_f64()?,
            "probe.coherent.alpha_im" => coherent.1 = parse_f64()?,
            "probe.thermal.n_th0" => thermal_n = parse_f64()?,
            "probe.squeezed_vacuum.r" => sv.0 = parse_f64()?,
            "probe.squeezed_vacuum.phi" => sv.1 = parse_f64()?,
            "probe.squeezed_thermal.n_th0" => st.0 = parse_f64()?,
            "probe.squeezed_thermal.r" => st.1 = parse_f64()?,
            "probe.squeezed_thermal.phi" => st.2 = parse_f64()?,
            "contour_probe" => cfg.contour_probe = value.clone(),
            "output_path" => cfg.output_path = PathBuf::from(value),
            "n_repetitions" => {
                cfg.n_repetitions = value
                    .parse::<u64>()
                    .map_err(|e| ConfigError::InvalidValue {
                        line,
                        key: key.clone(),
                        value: value.clone(),
                        reason: e.to_string(),
                    })?
            }
            _ => {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.clone(),
                })
            }
        }
    }

    cfg.params = PhysicalParams::new(omega_m, gamma, n_th, lambda_g, lambda_t).map_err(|e| {
        ConfigError::Invalid {
            field: "params",
            reason: e.to_string(),
        }
    })?;

    if cfg.time_grid.min < 0.0 {
        return Err(ConfigError::Invalid {
            field: "time_grid.t_min",
            reason: format!("must be nonnegative, got {}", cfg.time_grid.min),
        });
    }
    cfg.time_grid.validate("time_grid")?;

    if let Some(partial) = lambda_grid {
        let min = partial.min.ok_or_else(|| ConfigError::Missing {
            field: "lambda_g_grid.min",
            reason: "a partial lambda_g_grid was given".into(),
        })?;
        let max = partial.max.ok_or_else(|| ConfigError::Missing {
            field: "lambda_g_grid.max",
            reason: "a partial lambda_g_grid was given".into(),
        })?;
        let n_points = partial.n_points.ok_or_else(|| ConfigError::Missing {
            field: "lambda_g_grid.n_points",
            reason: "a partial lambda_g_grid was given".into(),
        })?;
        let grid = Grid {
            min,
            max,
            n_points,
            spacing: partial.spacing,
        };
        grid.validate("lambda_g_grid")?;
        if min < 0.0 {
            return Err(ConfigError::Invalid {
                field: "lambda_g_grid.min",
                reason: "diffusion rates are nonnegative".into(),
            });
        }
        cfg.lambda_g_grid = Some(grid);
    }

    for r in &cfg.r_grid {
        if !r.is_finite() {
            return Err(ConfigError::Invalid {
                field: "r_grid",
                reason: "squeezing values must be finite".into(),
            });
        }
    }

    if cfg.n_repetitions == 0 {
        return Err(ConfigError::Invalid {
            field: "n_repetitions",
            reason: "need at least one repetition".into(),
        });
    }

    let catalog: Vec<NamedProbe> = vec![
        NamedProbe {
            name: "coherent".into(),
            spec: ProbeSpec::Coherent {
                alpha_re: coherent.0,
                alpha_im: coherent.1,
            },
        },
        NamedProbe {
            name: "thermal".into(),
            spec: ProbeSpec::Thermal { n_th0: thermal_n },
        },
        NamedProbe {
            name: "squeezed_vacuum".into(),
            spec: ProbeSpec::SqueezedVacuum { r: sv.0, phi: sv.1 },
        },
        NamedProbe {
            name: "squeezed_thermal".into(),
            spec: ProbeSpec::SqueezedThermal {
                n_th0: st.0,
                r: st.1,
                phi: st.2,
            },
        },
    ];
    cfg.probes = probe_names
        .iter()
        .map(|name| {
            catalog.iter().find(|p| &p.name == name).cloned().ok_or_else(|| ConfigError::Invalid {
                field: "probes",
                reason: format!(
                    "unknown probe `{name}`; expected one of coherent, thermal, squeezed_vacuum, squeezed_thermal"
                ),
            })
        })
        .collect::<Result<_, _>>()?;
    if cfg.probes.is_empty() {
        return Err(ConfigError::Invalid {
            field: "probes",
            reason: "probe list is empty".into(),
        });
    }
    for probe in &cfg.probes {
        probe.spec.build().map_err(|e| ConfigError::Invalid {
            field: "probes",
            reason: format!("probe `{}`: {e}", probe.name),
        })?;
    }

    Ok(cfg)
}

fn parse_list_f64(value: &str) -> Result<Vec<f64>, String> {
    let items: Result<Vec<f64>, _> = value
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|e| e.to_string()))
        .collect();
    let items = items?;
    if items.is_empty() {
        return Err("empty list".into());
    }
    Ok(items)
}
