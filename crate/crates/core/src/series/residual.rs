use num_traits::One;

use super::compute_series;
use crate::error::Result;
use crate::geometry::ProductConfig;
use crate::rational::{binomial, int, pow, to_f64, Rational};
use crate::spectral::SphereFunction;

/// `‖Π_{K₀^⊥}(u - (Δ+h)^{-1} u^{2★-1})‖_{L²(M)}` for the truncated series
/// `u = u₀ + Σ_{L≤L_max} P_L(s ϕ)` with `s = σ·u₀`.
///
/// In normalized form `u = u₀ w` with `w = 1 + Σ σ^L R_L`, and
/// `h u₀ = u₀^{2★-1}` gives `(Δ+h)^{-1} u^{2★-1} = u₀ (Δ+h)^{-1}(h w^{2★-1})`.
/// For integer `2★` the power `w^{2★-1}` is expanded exactly. Otherwise the
/// binomial series is truncated after `L_max + 2` powers of `w - 1`, which
/// perturbs the residual only at order `σ^{L_max+3}`.
pub fn glueing_residual(cfg: &ProductConfig, direction: &[Rational], l_max: usize, sigma: &Rational) -> Result<f64> {
    let series = compute_series(cfg, direction, l_max)?;
    let sphere = series.shape(1).sphere().clone();
    let mut v = SphereFunction::zero(&sphere);
    for (i, r) in series.shapes().iter().enumerate() {
        v = v.add(&r.scale(&pow(sigma, i as u32 + 1)))?;
    }
    let one = SphereFunction::constant(&sphere, Rational::one());
    let w = one.add(&v)?;
    let p = cfg.two_star() - int(1);
    let w_pow = if p.is_integer() {
        w.pow(p.to_integer().try_into().expect("2★-1 is a small positive integer"))?
    } else {
        let mut acc = SphereFunction::zero(&sphere);
        let mut v_k = one;
        for k in 0..=(l_max as u32 + 2) {
            acc = acc.add(&v_k.scale(&binomial(&p, k)))?;
            v_k = v_k.pointwise_multiply(&v)?;
        }
        acc
    };
    let h = cfg.h();
    let inverted = w_pow.scale(&h).resolvent_shifted(&-h)?;
    let residual = w.sub(&inverted)?.without_component(1);
    let sq = to_f64(&residual.l2_inner(&residual)?);
    Ok(cfg.u0() * (sq * cfg.volume()).sqrt())
}
