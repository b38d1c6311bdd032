//! Human-readable stationary-state summary.

use crate::dynamics::{steady_shape, steady_state, PhysicalParams};
use crate::metrology::steady_qfi;

/// Stationary-state diagnostics for the given parameters: effective
/// occupation, the (A∞, B∞) shape pair and their −2Q ratio, purity and
/// QFI. Every number is printed with the same 12-significant-digit format
/// the sweep CSVs use, so the report can be diffed against direct library
/// calls.
pub fn report_steady_state(p: &PhysicalParams<f64>) -> String {
    let (a_inf, b_inf) = steady_shape(p);
    let state = steady_state(p);
    let purity = state.cov.purity().expect("steady state is physical");
    let mut out = String::new();
    out.push_str("stationary state\n");
    out.push_str(&format!("  omega_m      = {:.11e} s^-1\n", p.omega_m()));
    out.push_str(&format!("  gamma        = {:.11e} s^-1\n", p.gamma()));
    out.push_str(&format!("  n_th         = {:.11e}\n", p.n_th()));
    out.push_str(&format!("  lambda_g     = {:.11e} s^-1\n", p.lambda_g()));
    out.push_str(&format!("  lambda_t     = {:.11e} s^-1\n", p.lambda_t()));
    out.push_str(&format!("  Q            = {:.11e}\n", p.quality_factor()));
    out.push_str(&format!("  n_eff        = {:.11e}\n", p.n_eff()));
    out.push_str(&format!("  A_inf        = {:.11e}\n", a_inf));
    out.push_str(&format!("  B_inf        = {:.11e}\n", b_inf));
    if a_inf != 0.0 {
        out.push_str(&format!(
            "  B_inf/A_inf  = {:.11e}  (-2Q = {:.11e})\n",
            b_inf / a_inf,
            -2.0 * p.quality_factor()
        ));
    } else {
        out.push_str("  B_inf/A_inf  = n/a (no diffusion)\n");
    }
    out.push_str(&format!("  purity       = {:.11e}\n", purity));
    match steady_qfi(p) {
        Ok(b) => {
            out.push_str(&format!("  qfi_total    = {:.11e}\n", b.total));
            out.push_str(&format!("  qfi_term_cov = {:.11e}\n", b.term_cov));
            out.push_str(&format!("  qfi_term_pur = {:.11e}\n", b.term_purity));
        }
        Err(err) => out.push_str(&format!("  qfi_total    = undefined ({err})\n")),
    }
    out
}
