//! Obstruction forms on the kernel `K₀` and the minimizer verdict.
//!
//! Quantities on `M = S^d(r) × M₂` built from functions lifted from the
//! sphere factor are all of the shape `K · u₀^e · Vol(M)` with `K` an exact
//! rational, because `u₀^{2★-2} = h` is rational and the sphere integrals
//! are rational multiples of `Vol(S^d(r))`. The exact part `K` is kept so
//! that vanishing statements are decided exactly.

mod classify;
mod expansion;
mod functionals;
mod quartic;

pub use classify::{classify_minimizer, Certificate, MinimizerReport, Verdict};
pub use expansion::{a_l_eval, a_l_exact, norm_expansion_check, u_kq, u_kq_exact, NormExpansionCheck};
pub use functionals::{functionals_eval, ray_eval, Functionals, RayEvaluation, RayProfile, ScaledSum};
pub use quartic::{a4_eval, a4_form, A4Paths, QuarticForm, QuarticMinimum};

use serde::Serialize;

use crate::error::Result;
use crate::geometry::{kernel_basis, ProductConfig};
use crate::poly::HomPoly;
use crate::rational::{binomial, int, to_f64, Rational};

/// `K · u₀^e · Vol(M)` in floating point.
pub(crate) fn lift(cfg: &ProductConfig, k: &Rational, u0_power: i32) -> f64 {
    to_f64(k) * cfg.u0().powi(u0_power) * cfg.volume()
}

/// Flat index of `(i₁, …, i_r)` in a row-major `m^r` array.
pub(crate) fn flat(idx: &[usize], m: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * m + i)
}

/// Symmetric cubic form on the kernel coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CubicForm {
    pub kernel_dim: usize,
    /// Row-major `m³` coefficients in floating point.
    pub values: Vec<f64>,
    /// Exact coefficients `K` with `values = K · u₀^{-1} · Vol(M)`.
    #[serde(skip)]
    pub exact: Vec<Rational>,
}

impl CubicForm {
    pub fn eval(&self, a: &[f64]) -> f64 {
        let m = self.kernel_dim;
        let mut s = 0.0;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    s += self.values[flat(&[i, j, k], m)] * a[i] * a[j] * a[k];
                }
            }
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.exact.iter().all(|c| *c == int(0))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `A₃(φ) = -((2★-1)(2★-2)/2) ∫_M u₀^{2★-3} φ³`, with `u₀^{2★-3} = h/u₀`.
pub fn a3_form(cfg: &ProductConfig) -> Result<CubicForm> {
    let basis = kernel_basis(cfg)?.basis;
    let m = basis.len();
    let p = cfg.two_star() - int(1);
    let pre = -binomial(&p, 2) * cfg.h();
    let mut exact = vec![int(0); m * m * m];
    for i in 0..m {
        for j in i..m {
            let xij = basis[i].pointwise_multiply(&basis[j])?;
            for k in j..m {
                let v = &pre * xij.l2_inner(&basis[k])?;
                for perm in permutations3(i, j, k) {
                    exact[flat(&perm, m)] = v.clone();
                }
            }
        }
    }
    let values = exact.iter().map(|k| lift(cfg, k, -1)).collect();
    Ok(CubicForm { kernel_dim: m, values, exact })
}

fn permutations3(i: usize, j: usize, k: usize) -> [[usize; 3]; 6] {
    [[i, j, k], [i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]]
}

/// Rational approximation (denominator `10^digits`) of a real direction,
/// used to feed random or user-supplied real directions to the exact layer.
pub fn rationalize(direction: &[f64], digits: u32) -> Vec<Rational> {
    let scale = 10i64.pow(digits);
    direction.iter().map(|x| Rational::new(((x * scale as f64).round() as i64).into(), scale.into())).collect()
}

/// `∫_{S^d(r)} x₁⁴` as a multiple of `Vol(S^d(r))`, which equals `∫(a·x)⁴`
/// for every unit vector `a`.
pub(crate) fn quartic_moment(cfg: &ProductConfig) -> Result<Rational> {
    let n = cfg.sphere.ambient_dim();
    let x1_4 = HomPoly::monomial((0..n).map(|i| if i == 0 { 4 } else { 0 }).collect(), int(1));
    crate::poly::integrate_poly(&x1_4, cfg.sphere.d, &cfg.sphere.r_sq)
}
