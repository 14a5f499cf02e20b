//! Built-in identity suites over fixed reference configurations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::energy::{classify_regime_data, profile_and_window, universal_coefficient, RegimeCase, RegimeInput};
use crate::error::{Error, Result};
use crate::geometry::{yamabe_product, AbstractFactor, PiMultiple, ProductConfig};
use crate::obstruction::{a3_form, a4_eval, norm_expansion_check, u_kq_exact, RayEvaluation, RayProfile};
use crate::poly::{integrate_poly, HomPoly};
use crate::quadrature::quadrature_integrate;
use crate::rational::{frac, int, to_f64, Rational};
use crate::series::{compute_series, glueing_residual};
use crate::spectral::{SphereFunction, SphereSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

/// One identity: the value it should take, the value computed, and the
/// residual compared against `tolerance`.
///
/// For lower-bound checks `expected` is the bound and the residual is the
/// shortfall below it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub status: Status,
    pub expected: f64,
    pub actual: f64,
    pub residual: f64,
    pub tolerance: f64,
}

impl IdentityCheck {
    fn from_residual(name: &str, expected: f64, actual: f64, residual: f64, tolerance: f64) -> Self {
        let status = if residual <= tolerance { Status::Pass } else { Status::Fail };
        IdentityCheck { name: name.to_string(), status, expected, actual, residual, tolerance }
    }

    /// Relative error, scaled by `max(|expected|, 1)`.
    pub fn close(name: &str, expected: f64, actual: f64, tolerance: f64) -> Self {
        let residual = (actual - expected).abs() / expected.abs().max(1.0);
        Self::from_residual(name, expected, actual, if residual.is_nan() { f64::INFINITY } else { residual }, tolerance)
    }

    pub fn exact(name: &str, expected: &Rational, actual: &Rational) -> Self {
        let residual = to_f64(&(actual - expected)).abs();
        let mut c = Self::from_residual(name, to_f64(expected), to_f64(actual), residual, 0.0);
        if expected != actual {
            c.status = Status::Fail;
            c.residual = c.residual.max(f64::MIN_POSITIVE);
        }
        c
    }

    pub fn at_least(name: &str, bound: f64, actual: f64) -> Self {
        let shortfall = if actual >= bound { 0.0 } else { bound - actual };
        Self::from_residual(name, bound, actual, if actual.is_nan() { f64::INFINITY } else { shortfall }, 0.0)
    }

    pub fn holds(name: &str, ok: bool) -> Self {
        let v = if ok { 1.0 } else { 0.0 };
        Self::from_residual(name, 1.0, v, 1.0 - v, 0.0)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        write!(
            f,
            "{tag} {}: expected {:.12e}, actual {:.12e}, residual {:.3e}, tolerance {:.1e}",
            self.name, self.expected, self.actual, self.residual, self.tolerance
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Spectral,
    Series,
    Obstruction,
    Energy,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "spectral" => Ok(Suite::Spectral),
            "series" => Ok(Suite::Series),
            "obstruction" => Ok(Suite::Obstruction),
            "energy" => Ok(Suite::Energy),
            other => Err(Error::InvalidArgument(format!("unknown suite {other:?}"))),
        }
    }
}

/// `S²(1) × N²` with `Vol(N) = 7`, `λ₁(N) = 3`, `R_N = 1`; `n = 4`, `u₀ = 1`.
pub fn reference_n4() -> Result<ProductConfig> {
    let f = AbstractFactor::new(2, PiMultiple::rational(int(7)), int(3), int(1))?;
    ProductConfig::product(SphereSpec::unit(2), f)
}

/// `S²(1) × N³` with `2★ = 10/3`.
pub fn reference_n5() -> Result<ProductConfig> {
    let f = AbstractFactor::new(3, PiMultiple::rational(int(2)), int(4), int(0))?;
    ProductConfig::product(SphereSpec::unit(2), f)
}

pub fn run_suite(suite: Suite) -> Result<Vec<IdentityCheck>> {
    Ok(match suite {
        Suite::Spectral => spectral_suite()?,
        Suite::Series => series_suite()?,
        Suite::Obstruction => obstruction_suite()?,
        Suite::Energy => energy_suite()?,
        Suite::All => {
            let mut all = spectral_suite()?;
            all.extend(series_suite()?);
            all.extend(obstruction_suite()?);
            all.extend(energy_suite()?);
            all
        }
    })
}

fn monomial(exp: &[u32]) -> HomPoly {
    HomPoly::monomial(exp.to_vec(), int(1))
}

/// Three fixed degree-1 directions in `ℝ^{d+1}`.
fn sample_directions(d: usize) -> [Vec<Rational>; 3] {
    let m = d + 1;
    [
        (0..m).map(|i| if i == 0 { int(1) } else { int(0) }).collect(),
        (0..m).map(|i| frac(i as i64 + 1, 2)).collect(),
        (0..m).map(|i| frac(if i % 2 == 0 { 3 } else { -2 }, i as i64 + 3)).collect(),
    ]
}

/// `(Δ-λ₁)^{-1}(ϕ²) = (ϕ² + λ₂Δ_E(ϕ²)/(2(d+1)λ₁)) / (λ₂-λ₁)` on the unit sphere,
/// against the spectral resolvent.
fn resolvent_of_square(d: usize, coeffs: &[Rational]) -> Result<bool> {
    let sphere = SphereSpec::unit(d);
    let lin = HomPoly::linear(coeffs);
    let sq = lin.multiply(&lin)?;
    let lap_e = sq.laplacian_euclidean().constant_value();
    let lambda1 = int(d as i64);
    let lambda2 = int(2 * (d as i64 + 1));
    let phi = SphereFunction::restrict(&lin, &sphere)?;
    let phi_sq = phi.pointwise_multiply(&phi)?;
    let spectral = phi_sq.resolvent_shifted(&lambda1)?;
    let shift = &lambda2 * &lap_e / (int(2 * (d as i64 + 1)) * &lambda1);
    let formula = phi_sq.add(&SphereFunction::constant(&sphere, shift))?.scale(&(int(1) / (&lambda2 - &lambda1)));
    Ok(spectral == formula)
}

fn spectral_suite() -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    for d in 1..=6usize {
        for (i, dir) in sample_directions(d).iter().enumerate() {
            let ok = resolvent_of_square(d, dir)?;
            out.push(IdentityCheck::holds(&format!("resolvent of ϕ² on S^{d}, direction {}", i + 1), ok));
        }
        let mut x4 = vec![0u32; d + 1];
        x4[0] = 4;
        let mut x2 = vec![0u32; d + 1];
        x2[0] = 2;
        let ratio = integrate_poly(&monomial(&x4), d, &int(1))? / integrate_poly(&monomial(&x2), d, &int(1))?;
        out.push(IdentityCheck::exact(&format!("fourth moment ratio on S^{d} is 3/(d+3)"), &frac(3, d as i64 + 3), &ratio));
    }
    let sphere = SphereSpec::new(3, frac(3, 2))?;
    let f = SphereFunction::restrict(&monomial(&[1, 1, 0, 0]), &sphere)?;
    let residual = f.laplacian().sub(&f.scale(&sphere.eigenvalue(2)))?;
    out.push(IdentityCheck::holds("x1*x2 is a Laplace eigenfunction on S^3(r), r^2 = 3/2", residual.is_zero()));

    let quartic = integrate_poly(&monomial(&[4, 0, 0, 0]), 3, &sphere.r_sq)?;
    out.push(IdentityCheck::exact(
        "mean of x1^4 over S^3(r) is 3r^4/((d+1)(d+3))",
        &(int(3) * &sphere.r_sq * &sphere.r_sq / int(24)),
        &quartic,
    ));

    let p = monomial(&[2, 2, 2]);
    for (r_sq, label) in [(int(1), "1"), (int(2), "2")] {
        let exact = to_f64(&integrate_poly(&p, 2, &r_sq)?) * SphereSpec::new(2, r_sq.clone())?.volume_f64();
        let r = to_f64(&r_sq).sqrt();
        let quad = quadrature_integrate(|x| x[0] * x[0] * x[1] * x[1] * x[2] * x[2], 2, r, 4)?;
        out.push(IdentityCheck::close(&format!("integral of x1^2 x2^2 x3^2 over S^2(r), r^2 = {label}: moments vs quadrature"), exact, quad, 1e-12));
    }

    let unit = SphereSpec::unit(2);
    let g = SphereFunction::restrict(&monomial(&[2, 0, 0]), &unit)?.add(&SphereFunction::restrict(&monomial(&[0, 1, 1]), &unit)?)?;
    let lambda = int(1);
    let inv = g.resolvent_shifted(&lambda)?;
    let back = inv.laplacian().sub(&inv.scale(&lambda))?;
    out.push(IdentityCheck::holds("(Δ-1)(Δ-1)^{-1} is the identity on S^2", back.sub(&g)?.is_zero()));
    out.push(IdentityCheck::holds(
        "resolvent at an eigenvalue is rejected",
        g.resolvent_shifted(&unit.eigenvalue(2)).is_err(),
    ));
    Ok(out)
}

fn series_suite() -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    let cfg = reference_n4()?;
    let dir = vec![frac(1, 2), frac(-1, 3), frac(1, 5)];
    let series = compute_series(&cfg, &dir, 6)?;
    for l in 4..=6usize {
        for q in 2..=l - 2 {
            out.push(IdentityCheck::exact(
                &format!("u_kq symmetry, k = {}, q = {q}", l - q),
                &u_kq_exact(&cfg, &series, l - q, q)?,
                &u_kq_exact(&cfg, &series, q, l - q)?,
            ));
        }
    }
    for (name, cfg, dir, l_max) in [
        ("norm expansion identities, n = 4, L <= 6", reference_n4()?, dir.clone(), 6),
        ("norm expansion identities, n = 5, L <= 5", reference_n5()?, vec![int(1), frac(1, 2), int(0)], 5),
    ] {
        let check = norm_expansion_check(&cfg, &dir, l_max)?;
        let exact_zero = check.exact_1.iter().chain(&check.exact_2).all(|v| *v == 0.0);
        out.push(IdentityCheck::holds(&format!("{name} (exact route)"), exact_zero));
        out.push(IdentityCheck::close(&format!("{name} (sampled route)"), 0.0, check.max_residual(), 1e-9));
    }
    let dir = vec![int(1), frac(1, 2), int(0)];
    for l_max in 3..=5usize {
        let a = glueing_residual(&cfg, &dir, l_max, &frac(1, 40))?;
        let b = glueing_residual(&cfg, &dir, l_max, &frac(1, 80))?;
        let bound = 0.9 * 2f64.powi(l_max as i32 + 1);
        out.push(IdentityCheck::at_least(&format!("glueing residual halving ratio, L = {l_max}"), bound, a / b));
    }
    Ok(out)
}

fn obstruction_suite() -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    let cfg = reference_n4()?;
    out.push(IdentityCheck::holds("A3 vanishes on S^2 x N^2", a3_form(&cfg)?.is_zero()));
    let paths = a4_eval(&cfg, &[int(1), int(0), int(0)])?;
    let labels = ["direct", "constant rewrite", "closed form", "series"];
    for (label, k) in labels.iter().zip(&paths.exact) {
        out.push(IdentityCheck::exact(&format!("A4(x1) on S^2 x N^2 is (2/5) Vol(M), {label} route"), &frac(2, 5), k));
    }
    let expected = 8.0 * std::f64::consts::PI * 7.0 / 5.0;
    out.push(IdentityCheck::close("A4(x1) on S^2 x N^2 equals 56π/5", expected, paths.value(), 1e-14));

    let sphere = ProductConfig::pure_sphere(4, int(1))?;
    let k = a4_eval(&sphere, &[int(1), int(0), int(0), int(0), int(0)])?.exact[0].clone();
    out.push(IdentityCheck::exact("A4 vanishes on the round S^4", &int(0), &k));

    let profile = RayProfile::new(&cfg, &[int(1), int(0), int(0)], 6)?;
    for t in [0.05, -0.05] {
        let r = RayEvaluation::from_profile(&cfg, &profile, t)?;
        out.push(IdentityCheck::close(&format!("ray identity for I at t = {t}"), 0.0, r.identity_residual, 1e-8));
    }
    let yam = yamabe_product(&AbstractFactor::round_sphere(2, int(1))?, 1)?;
    let report = crate::obstruction::classify_minimizer(&yam, 4, 0)?;
    out.push(IdentityCheck::holds(
        "S^1 x S^2 Yamabe product is a strict local minimizer",
        report.verdict == crate::obstruction::Verdict::StrictLocalMin,
    ));
    Ok(out)
}

fn energy_suite() -> Result<Vec<IdentityCheck>> {
    let n6 = RegimeInput { n: 6, kappa: -1, u0: 1.7, h_minus_cnr: 0.0, yamabe: true, weyl_sq: None, lcf: false };
    let f0 = classify_regime_data(&n6)?.f0.unwrap_or(f64::NAN);
    let mut out = vec![
        IdentityCheck::close("F0 at n = 6 in Yamabe coupling is (5/2)u0", 2.5 * 1.7, f0, 1e-12),
        IdentityCheck::close("universal coefficient at n = 6 is 5/2", 2.5, universal_coefficient(6), 1e-14),
        IdentityCheck::close("universal coefficient at n = 10 is 63/320", 63.0 / 320.0, universal_coefficient(10), 1e-14),
    ];
    for n in [3usize, 6, 10] {
        let p = profile_and_window(n, 1.3)?;
        let scale = (n as f64 - 2.0).powi(2) / (4.0 * p.t_star);
        out.push(IdentityCheck::close(&format!("Ψ'(t*) = 0 at n = {n}"), 0.0, p.psi_prime(p.t_star) / scale, 1e-12));
    }
    let input = |weyl: f64| RegimeInput { n: 10, kappa: -1, u0: 1.0, h_minus_cnr: 0.0, yamabe: true, weyl_sq: Some(weyl), lcf: false };
    let below = classify_regime_data(&input(567.0 / 5.0 * (1.0 - 1e-9)))?.case == RegimeCase::YamabeDim10Weyl;
    let at = classify_regime_data(&input(567.0 / 5.0))?.case == RegimeCase::None;
    out.push(IdentityCheck::holds("n = 10 Weyl threshold u0 > (5/567)|W|^2", below && at));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for suite in [Suite::Spectral, Suite::Series, Suite::Obstruction, Suite::Energy] {
            for c in run_suite(suite).unwrap() {
                assert!(c.passed(), "{c}");
            }
        }
    }

    #[test]
    fn exact_check_flags_mismatch() {
        let c = IdentityCheck::exact("x", &int(1), &frac(1, 3));
        assert_eq!(c.status, Status::Fail);
        assert!(IdentityCheck::at_least("y", 2.0, 1.0).residual > 0.0);
        assert!(!IdentityCheck::close("z", 1.0, f64::NAN, 1.0).passed());
    }
}
