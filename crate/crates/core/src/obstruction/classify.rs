use serde::{Deserialize, Serialize};

use super::{a3_form, a4_form, QuarticMinimum};
use crate::error::Result;
use crate::geometry::{second_variation_check, ProductConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    StrictLocalMin,
    Inconclusive,
    NotLocalMin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    ClosedForm,
    NumericHeuristic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizerReport {
    #[serde(rename = "A3_zero")]
    pub a3_zero: bool,
    pub a3_max_abs: f64,
    pub second_var_nonneg: bool,
    #[serde(rename = "A4_min")]
    pub a4_min: f64,
    pub certificate: Certificate,
    /// Minimum found by multi-start descent, reported alongside the closed form.
    pub a4_min_numeric: f64,
    pub verdict: Verdict,
}

/// Sign of `A₄` on the unit sphere, exact when certified in closed form.
fn sign_of(min: &QuarticMinimum) -> i8 {
    if let Some(s) = min.exact_sign {
        return s;
    }
    if min.value.abs() <= 1e-10 {
        0
    } else if min.value > 0.0 {
        1
    } else {
        -1
    }
}

/// Degenerate strict-local-minimizer test for the constant solution.
///
/// `seed` drives the numeric minimizer; `l_max` is accepted for symmetry
/// with the other entry points and must be at least 4.
pub fn classify_minimizer(cfg: &ProductConfig, l_max: usize, seed: u64) -> Result<MinimizerReport> {
    if l_max < 4 {
        return Err(crate::error::Error::InvalidArgument(format!(
            "the minimizer test needs A₄, so L_max ≥ 4 (got {l_max})"
        )));
    }
    let a3 = a3_form(cfg)?;
    let second = second_variation_check(cfg)?;
    let form = a4_form(cfg)?;
    let numeric = form.minimize_numeric(seed);
    let min = form.minimize_closed_form().unwrap_or_else(|| numeric.clone());
    let a3_zero = a3.is_zero();
    let verdict = match (a3_zero, second.nonnegative, sign_of(&min)) {
        (false, _, _) | (_, _, -1) => Verdict::NotLocalMin,
        (true, true, 1) => Verdict::StrictLocalMin,
        _ => Verdict::Inconclusive,
    };
    Ok(MinimizerReport {
        a3_zero,
        a3_max_abs: a3.max_abs(),
        second_var_nonneg: second.nonnegative,
        a4_min: min.value,
        certificate: min.certificate,
        a4_min_numeric: numeric.value,
        verdict,
    })
}
