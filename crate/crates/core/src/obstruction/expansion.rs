use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::lift;
use crate::error::{Error, Result};
use crate::geometry::ProductConfig;
use crate::quadrature::SphereQuadrature;
use crate::rational::{binomial, factorial, int, to_f64, Rational};
use crate::series::{compute_series, multinomial_q, SeriesExpansion};
use crate::spectral::{CompiledFunction, SphereFunction};

/// Exact part `U` of `u_{k,q}(ϕ) = U · u₀^{2-k-q} · Vol(M)`.
///
/// With `u₀^{2★-1-j} = h·u₀^{1-j}` and `P_l = u₀^{1-l} R_l`, every term of
/// the defining sum carries the same power of `u₀`.
pub fn u_kq_exact(cfg: &ProductConfig, series: &SeriesExpansion, k: usize, q: usize) -> Result<Rational> {
    if k < 1 || q < 1 || k.max(q) > series.l_max {
        return Err(Error::InvalidArgument(format!(
            "u_{{k,q}} needs 1 ≤ k, q ≤ {} (got k={k}, q={q})",
            series.l_max
        )));
    }
    let two_star = cfg.two_star();
    let sphere = series.shape(1).sphere().clone();
    let r_q = series.shape(q as u32);
    let mut total = Rational::zero();
    let mut falling = Rational::one();
    for j in 1..=k as u32 {
        falling *= &two_star - int(j as i64);
        if j < 2 || falling.is_zero() {
            continue;
        }
        let mut inner = SphereFunction::zero(&sphere);
        for term in multinomial_q(j, k as u32, k as u32) {
            let mut prod = SphereFunction::constant(&sphere, term.coeff / factorial(j));
            for (idx, &e) in term.exponents.iter().enumerate() {
                if e > 0 {
                    prod = prod.pointwise_multiply(&series.shape(idx as u32 + 1).pow(e)?)?;
                }
            }
            inner = inner.add(&prod)?;
        }
        total += &falling * inner.l2_inner(r_q)?;
    }
    Ok(total * cfg.h())
}

pub fn u_kq(cfg: &ProductConfig, direction: &[Rational], k: usize, q: usize) -> Result<f64> {
    let series = compute_series(cfg, direction, k.max(q))?;
    Ok(lift(cfg, &u_kq_exact(cfg, &series, k, q)?, 2 - k as i32 - q as i32))
}

/// Exact part of `A_L = -u_{L-1,1}`, with `A_L = K · u₀^{2-L} · Vol(M)`.
pub fn a_l_exact(cfg: &ProductConfig, series: &SeriesExpansion, l: usize) -> Result<Rational> {
    if l < 3 {
        return Err(Error::InvalidArgument(format!("A_L is defined for L ≥ 3, got {l}")));
    }
    Ok(-u_kq_exact(cfg, series, l - 1, 1)?)
}

pub fn a_l_eval(cfg: &ProductConfig, direction: &[Rational], l: usize) -> Result<f64> {
    let series = compute_series(cfg, direction, l.max(2) - 1)?;
    Ok(lift(cfg, &a_l_exact(cfg, &series, l)?, 2 - l as i32))
}

/// Order-by-order residuals of the two norm expansions along `σ ↦ u(σϕ)`.
///
/// Everything is divided by `u₀² Vol(M)` and expanded in `σ = s/u₀`, so that
/// `u = u₀ w` with `w = 1 + Σ σ^L R_L`. Then the identities read
///
/// 1. `G_m - h B_m = a_m` for `m ≥ 3` and `0` below,
/// 2. `h B_m = h δ_{m0} - (n/2)((m-2)/m) a_m`,
///
/// where `G_m = Σ_{a+b=m} (R_a, R_b)_h`, `B_m = [σ^m] avg(w^{2★})` and
/// `a_m = -U_{m-1,1}`. The left-hand sides are obtained twice: exactly by
/// power-series algebra, and by sampling both norms on the complex circle
/// `|σ| = radius` and reading off Fourier coefficients.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormExpansionCheck {
    pub l_max: usize,
    /// `A_L(ϕ)` for `L = 3, …, L_max`.
    pub a_l: Vec<f64>,
    /// Sampled route, relative residuals of identity 1 for orders `0..=L_max`.
    pub lhs_minus_rhs_1: Vec<f64>,
    /// Sampled route, relative residuals of identity 2.
    pub lhs_minus_rhs_2: Vec<f64>,
    /// Exact route, relative residuals of identity 1.
    pub exact_1: Vec<f64>,
    /// Exact route, relative residuals of identity 2.
    pub exact_2: Vec<f64>,
    pub radius: f64,
    pub samples: usize,
}

impl NormExpansionCheck {
    pub fn max_residual(&self) -> f64 {
        [&self.lhs_minus_rhs_1, &self.lhs_minus_rhs_2, &self.exact_1, &self.exact_2]
            .iter()
            .flat_map(|v| v.iter())
            .fold(0.0, |m, v| m.max(*v))
    }
}

fn series_mul(a: &[SphereFunction], b: &[SphereFunction]) -> Result<Vec<SphereFunction>> {
    let sphere = a[0].sphere().clone();
    let len = a.len();
    let mut out = vec![SphereFunction::zero(&sphere); len];
    for i in 0..len {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..len - i {
            if !b[j].is_zero() {
                out[i + j] = out[i + j].add(&a[i].pointwise_multiply(&b[j])?)?;
            }
        }
    }
    Ok(out)
}

struct ExactSides {
    g: Vec<Rational>,
    b: Vec<Rational>,
    a: Vec<Rational>,
}

fn exact_sides(cfg: &ProductConfig, series: &SeriesExpansion) -> Result<ExactSides> {
    let l_max = series.l_max;
    let h = cfg.h();
    let sphere = series.shape(1).sphere().clone();
    let mut r = vec![SphereFunction::constant(&sphere, Rational::one())];
    r.extend(series.shapes().iter().cloned());

    let mut g = vec![Rational::zero(); l_max + 1];
    for (m, gm) in g.iter_mut().enumerate() {
        for a in 0..=m {
            *gm += r[a].h_inner(&r[m - a], &h)?;
        }
    }

    let mut v = r.clone();
    v[0] = SphereFunction::zero(&sphere);
    let two_star = cfg.two_star();
    let mut b = vec![Rational::zero(); l_max + 1];
    b[0] = Rational::one();
    let mut v_k = v.clone();
    for k in 1..=l_max as u32 {
        let c = binomial(&two_star, k);
        for (m, bm) in b.iter_mut().enumerate() {
            *bm += &c * v_k[m].integral();
        }
        v_k = series_mul(&v_k, &v)?;
    }

    let mut a = vec![Rational::zero(); l_max + 1];
    for (m, am) in a.iter_mut().enumerate().skip(3) {
        *am = super::a_l_exact(cfg, series, m)?;
    }
    Ok(ExactSides { g, b, a })
}

/// Right-hand sides of the two identities at order `m`, given `a_m`.
fn rhs(cfg: &ProductConfig, m: usize, a_m: f64) -> (f64, f64) {
    let n = cfg.n() as f64;
    let h = to_f64(&cfg.h());
    let first = if m >= 3 { a_m } else { 0.0 };
    let second = if m == 0 { h } else { -(n / 2.0) * ((m as f64 - 2.0) / m as f64) * a_m };
    (first, second)
}

struct SampledSides {
    g: Vec<f64>,
    b: Vec<f64>,
    radius: f64,
    samples: usize,
}

/// Evaluates both norms at `σ_j = T e^{2πij/N}` and extracts the Taylor
/// coefficients by a discrete Fourier transform.
fn sampled_sides(cfg: &ProductConfig, series: &SeriesExpansion) -> Result<SampledSides> {
    let l_max = series.l_max;
    let sphere = series.shape(1).sphere().clone();
    let two_star = to_f64(&cfg.two_star());
    let h = to_f64(&cfg.h());
    let integer = cfg.two_star().is_integer();
    let degree = (two_star.ceil() as usize) * l_max;
    let order = if integer { degree / 2 + 2 } else { degree / 2 + 12 };
    let quad = SphereQuadrature::new(sphere.d, sphere.radius(), order)?;
    let total_weight: f64 = quad.weights.iter().sum();

    let compiled: Vec<CompiledFunction> = series.shapes().iter().map(CompiledFunction::new).collect();
    let values: Vec<Vec<f64>> = quad.nodes.iter().map(|x| compiled.iter().map(|c| c.value(x)).collect()).collect();
    let grads: Vec<Vec<Vec<f64>>> = quad.nodes.iter().map(|x| compiled.iter().map(|c| c.grad(x)).collect()).collect();

    // Keep |w - 1| ≤ 1/2 on the circle so the principal power stays analytic.
    let mut radius: f64 = 0.25;
    let bound = |t: f64| {
        values.iter().map(|vals| vals.iter().enumerate().map(|(i, v)| t.powi(i as i32 + 1) * v.abs()).sum::<f64>()).fold(0.0, f64::max)
    };
    while bound(radius) > 0.5 {
        radius /= 2.0;
    }

    let samples = (degree + 1).next_power_of_two().max(64);
    let mut g_samples = Vec::with_capacity(samples);
    let mut b_samples = Vec::with_capacity(samples);
    for j in 0..samples {
        let sigma = Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * j as f64 / samples as f64);
        let powers: Vec<Complex64> = (1..=l_max as i32).map(|l| sigma.powi(l)).collect();
        let mut g_acc = Complex64::zero();
        let mut b_acc = Complex64::zero();
        for (node, w) in quad.weights.iter().enumerate() {
            let val = Complex64::one() + values[node].iter().zip(&powers).map(|(v, s)| s * v).sum::<Complex64>();
            let mut grad_sq = Complex64::zero();
            for c in 0..sphere.ambient_dim() {
                let gc: Complex64 = grads[node].iter().zip(&powers).map(|(g, s)| s * g[c]).sum();
                grad_sq += gc * gc;
            }
            g_acc += w * (grad_sq + h * val * val);
            let p = if integer { val.powi(two_star as i32) } else { val.powf(two_star) };
            b_acc += w * p;
        }
        g_samples.push(g_acc / total_weight);
        b_samples.push(b_acc / total_weight);
    }
    let coeffs = |f: &[Complex64]| -> Vec<f64> {
        (0..=l_max)
            .map(|m| {
                let c: Complex64 = f
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (m * j) as f64 / samples as f64))
                    .sum();
                c.re / (samples as f64 * radius.powi(m as i32))
            })
            .collect()
    };
    Ok(SampledSides { g: coeffs(&g_samples), b: coeffs(&b_samples), radius, samples })
}

pub fn norm_expansion_check(cfg: &ProductConfig, direction: &[Rational], l_max: usize) -> Result<NormExpansionCheck> {
    if l_max < 3 {
        return Err(Error::InvalidArgument(format!("norm expansion needs L_max ≥ 3, got {l_max}")));
    }
    let series = compute_series(cfg, direction, l_max)?;
    let h = cfg.h();
    let exact = exact_sides(cfg, &series)?;
    let sampled = sampled_sides(cfg, &series)?;
    let hf = to_f64(&h);

    let a: Vec<f64> = exact.a.iter().map(to_f64).collect();
    let scale = (0..=l_max)
        .flat_map(|m| [to_f64(&exact.g[m]).abs(), hf * to_f64(&exact.b[m]).abs(), a[m].abs()])
        .fold(0.0, f64::max);

    let mut exact_1 = Vec::new();
    let mut exact_2 = Vec::new();
    let mut lhs_minus_rhs_1 = Vec::new();
    let mut lhs_minus_rhs_2 = Vec::new();
    let n = int(cfg.n() as i64);
    for m in 0..=l_max {
        let first_exact = if m >= 3 { exact.a[m].clone() } else { Rational::zero() };
        let second_exact = if m == 0 {
            h.clone()
        } else {
            -(&n / int(2)) * int(m as i64 - 2) / int(m as i64) * &exact.a[m]
        };
        let d1 = &exact.g[m] - &h * &exact.b[m] - first_exact;
        let d2 = &h * &exact.b[m] - second_exact;
        exact_1.push(to_f64(&d1.abs()) / scale);
        exact_2.push(to_f64(&d2.abs()) / scale);

        let (r1, r2) = rhs(cfg, m, a[m]);
        lhs_minus_rhs_1.push((sampled.g[m] - hf * sampled.b[m] - r1).abs() / scale);
        lhs_minus_rhs_2.push((hf * sampled.b[m] - r2).abs() / scale);
    }
    let a_l = (3..=l_max).map(|l| lift(cfg, &exact.a[l], 2 - l as i32)).collect();
    Ok(NormExpansionCheck {
        l_max,
        a_l,
        lhs_minus_rhs_1,
        lhs_minus_rhs_2,
        exact_1,
        exact_2,
        radius: sampled.radius,
        samples: sampled.samples,
    })
}
