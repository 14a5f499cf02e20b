//! The analytic glueing series of a constant solution along a kernel ray.
//!
//! Writing `u = u₀ + ϕ + Σ_{L≥2} P_L(ϕ)` and expanding
//! `f(u) = u^{2★-1}` around `u₀`, the `K₀^⊥`-projected equation fixes
//! every `P_L` from `P₁ = ϕ, …, P_{L-1}`. With `p = 2★-1` and
//! `h = u₀^{p-1}`, the Taylor coefficients are `a_k = h·C(p,k)·u₀^{1-k}`,
//! so the substitution `P_L = u₀^{1-L} R_L` turns the recursion into one
//! with rational coefficients:
//!
//! `R_L = T[ h Σ_{k=2}^{L} C(p,k) Q_{k,L,L}(R_1, …, R_{L-1}) ]`
//!
//! where `T` drops the degree-1 component and divides the degree-`k`
//! component by `λ_k - λ₁`. Every `R_L` is therefore an exact
//! [`SphereFunction`] even when `u₀` is irrational.

mod residual;

pub use residual::glueing_residual;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{kernel_basis, ProductConfig};
use crate::rational::{binomial, factorial, int, to_f64, Rational};
use crate::spectral::SphereFunction;

/// Taylor coefficients of `u ↦ u^{2★-1}` at `u₀`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaylorCoeffs {
    pub two_star: f64,
    pub u0: f64,
    /// `a_0, …, a_{L_max}`.
    pub a: Vec<f64>,
}

pub fn taylor_coeffs(u0: f64, two_star: &Rational, l_max: usize) -> Result<TaylorCoeffs> {
    if !(u0 > 0.0 && u0.is_finite()) {
        return Err(Error::InvalidArgument(format!("u₀ must be positive, got {u0}")));
    }
    let p = two_star - int(1);
    let pf = to_f64(&p);
    let a = (0..=l_max as u32).map(|k| to_f64(&binomial(&p, k)) * u0.powf(pf - k as f64)).collect();
    Ok(TaylorCoeffs { two_star: to_f64(two_star), u0, a })
}

/// One term `(r_1, …, r_L) ↦ coeff · ∏ X_l^{r_l}` of `Q_{k,L,j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QTerm {
    pub exponents: Vec<u32>,
    pub coeff: Rational,
}

/// Terms of `(Σ_{l≤L} X_l)^k` of weighted degree `j`: all `(r_l)` with
/// `Σ r_l = k` and `Σ l·r_l = j`, with multinomial coefficient
/// `k!/∏ r_l!`.
pub fn multinomial_q(k: u32, l: u32, j: u32) -> Vec<QTerm> {
    let mut out = Vec::new();
    if k == 0 || l == 0 {
        return out;
    }
    let mut current = vec![0u32; l as usize];
    fill(&mut current, 0, k, j, &mut out, k);
    out
}

fn fill(r: &mut Vec<u32>, idx: usize, left: u32, weight_left: u32, out: &mut Vec<QTerm>, k: u32) {
    let weight = idx as u32 + 1;
    if idx + 1 == r.len() {
        if left * weight == weight_left {
            r[idx] = left;
            let coeff = r.iter().fold(factorial(k), |acc, &ri| acc / factorial(ri));
            out.push(QTerm { exponents: r.clone(), coeff });
            r[idx] = 0;
        }
        return;
    }
    for m in 0..=left {
        if m * weight > weight_left {
            break;
        }
        r[idx] = m;
        fill(r, idx + 1, left - m, weight_left - m * weight, out, k);
    }
    r[idx] = 0;
}

/// `P_L(ϕ) = u₀^{1-L} · shape`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTerm {
    pub order: u32,
    pub shape: SphereFunction,
}

impl SeriesTerm {
    pub fn scale(&self, u0: f64) -> f64 {
        u0.powi(1 - self.order as i32)
    }

    /// The exact term when `u₀` is rational.
    pub fn exact(&self, u0: &Rational) -> SphereFunction {
        self.shape.scale(&crate::rational::pow(&(int(1) / u0), self.order - 1))
    }
}

/// `P_1, …, P_{L_max}` along a fixed kernel direction.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesExpansion {
    pub direction: Vec<Rational>,
    pub l_max: usize,
    pub u0: f64,
    /// `R_1 = ϕ, R_2, …, R_{L_max}`.
    shapes: Vec<SphereFunction>,
}

impl SeriesExpansion {
    pub fn term(&self, order: u32) -> SeriesTerm {
        SeriesTerm { order, shape: self.shapes[order as usize - 1].clone() }
    }

    /// `R_L` with `P_L = u₀^{1-L} R_L`.
    pub fn shape(&self, order: u32) -> &SphereFunction {
        &self.shapes[order as usize - 1]
    }

    pub fn shapes(&self) -> &[SphereFunction] {
        &self.shapes
    }

    /// `u₀ + Σ_{L≤L_max} P_L` at a point of the sphere factor.
    pub fn eval_truncated(&self, x: &[f64]) -> f64 {
        self.u0
            + self.shapes.iter().enumerate().map(|(i, r)| self.u0.powi(-(i as i32)) * r.eval_f64(x)).sum::<f64>()
    }
}

fn rhs(cfg: &ProductConfig, shapes: &[SphereFunction], l: u32) -> Result<SphereFunction> {
    let sphere = shapes[0].sphere();
    let p = cfg.two_star() - int(1);
    let mut acc = SphereFunction::zero(sphere);
    for k in 2..=l {
        let c = binomial(&p, k);
        if c.is_zero() {
            continue;
        }
        for term in multinomial_q(k, l, l) {
            debug_assert_eq!(term.exponents[l as usize - 1], 0);
            let mut prod = SphereFunction::constant(sphere, &c * &term.coeff);
            for (idx, &e) in term.exponents.iter().enumerate() {
                if e > 0 {
                    prod = prod.pointwise_multiply(&shapes[idx].pow(e)?)?;
                }
            }
            acc = acc.add(&prod)?;
        }
    }
    Ok(acc.scale(&cfg.h()))
}

/// Applies `L₀^{-1} ∘ Π_{K₀^⊥} ∘ (Δ+h)^{-1}` to `h·g` written in normalized
/// form.
///
/// On a degree-`k` eigencomponent, `(Δ+h)^{-1}` multiplies by
/// `1/(λ_k+h)` and `L₀ = Id - (2★-1)h(Δ+h)^{-1}` by
/// `(λ_k - (2★-2)h)/(λ_k+h)`. Since `(2★-2)h = λ₁` the composition is
/// `1/(λ_k - λ₁)`, and the projection removes exactly the degree-1
/// component where this would be singular.
fn solve_component(g: &SphereFunction, lambda1: &Rational) -> Result<SphereFunction> {
    let projected = g.without_component(1);
    projected.resolvent_shifted(lambda1).map_err(|e| Error::Consistency(format!("projected resolvent failed: {e}")))
}

fn check_direction(cfg: &ProductConfig, direction: &[Rational]) -> Result<SphereFunction> {
    let k = kernel_basis(cfg)?;
    k.element(direction)
}

/// The full series `P_1, …, P_{L_max}` along `ϕ = Σ direction_i x_i`.
pub fn compute_series(cfg: &ProductConfig, direction: &[Rational], l_max: usize) -> Result<SeriesExpansion> {
    if l_max == 0 {
        return Err(Error::InvalidArgument("series order must be at least 1".into()));
    }
    let phi = check_direction(cfg, direction)?;
    let lambda1 = cfg.lambda1();
    let mut shapes = vec![phi];
    for l in 2..=l_max as u32 {
        let r = solve_component(&rhs(cfg, &shapes, l)?, &lambda1)?;
        debug_assert!(r.max_degree().map_or(true, |m| m <= l));
        shapes.push(r);
    }
    Ok(SeriesExpansion { direction: direction.to_vec(), l_max, u0: cfg.u0(), shapes })
}

/// `P_L(ϕ)` as `u₀^{1-L}` times an exact shape.
pub fn compute_p(cfg: &ProductConfig, direction: &[Rational], l: usize) -> Result<SeriesTerm> {
    if l < 2 {
        return Err(Error::InvalidArgument(format!("P_L is defined by the recursion for L ≥ 2, got {l}")));
    }
    Ok(compute_series(cfg, direction, l)?.term(l as u32))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GlueingEval {
    pub series: SeriesExpansion,
    /// `‖P_L‖_{L²(M)}` for `L = 1, …, L_max`.
    pub norm_decay: Vec<f64>,
}

impl GlueingEval {
    /// Successive ratios `‖P_{L+1}‖/‖P_L‖`.
    pub fn decay_ratios(&self) -> Vec<f64> {
        self.norm_decay.windows(2).map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 }).collect()
    }
}

pub fn glueing_eval(cfg: &ProductConfig, direction: &[Rational], l_max: usize) -> Result<GlueingEval> {
    if l_max < 2 {
        return Err(Error::InvalidArgument(format!("glueing order must be at least 2, got {l_max}")));
    }
    let series = compute_series(cfg, direction, l_max)?;
    let vol = cfg.volume();
    let u0 = cfg.u0();
    let norm_decay = series
        .shapes
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let sq = to_f64(&r.l2_inner(r)?);
            Ok(u0.powi(-(i as i32)) * (sq.abs() * vol).sqrt())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GlueingEval { series, norm_decay })
}

/// `‖ϕ‖_{L²(M)}` for a kernel direction.
pub fn direction_l2_norm(cfg: &ProductConfig, direction: &[Rational]) -> Result<f64> {
    let phi = check_direction(cfg, direction)?;
    let sq = phi.l2_inner(&phi)?;
    debug_assert!(!sq.is_negative());
    Ok((to_f64(&sq) * cfg.volume()).sqrt())
}

#[cfg(test)]
mod tests;
