use num_traits::{Signed, Zero};
use serde::Serialize;

use super::constants::{c_n, two_star, PiMultiple};
use crate::error::{Error, Result};
use crate::poly::HomPoly;
use crate::rational::{exact_power, exact_sqrt, int, pow, to_f64, Rational};
use crate::spectral::{SphereFunction, SphereSpec};

pub const HYP_GAP: &str = "first-eigenvalue gap λ₁(M₁) < λ₁(M₂)";
pub const HYP_KERNEL: &str = "kernel coupling (2★-2)·h = λ₁(M₁)";
pub const HYP_YAMABE_FACTOR: &str = "factor curvature 0 < R_N < dim(N)·λ₁(N)";

/// Second factor `M₂`, known only through its scalar invariants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbstractFactor {
    pub dim: usize,
    pub volume: PiMultiple,
    /// `None` only for the point factor, which has no spectrum.
    #[serde(serialize_with = "ser_opt_rational")]
    pub lambda1: Option<Rational>,
    #[serde(serialize_with = "ser_rational")]
    pub scalar_curvature: Rational,
}

impl AbstractFactor {
    pub fn new(dim: usize, volume: PiMultiple, lambda1: Rational, scalar_curvature: Rational) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("a zero-dimensional factor must be the point factor".into()));
        }
        if !volume.coeff.is_positive() {
            return Err(Error::InvalidArgument(format!("factor volume must be positive, got {volume}")));
        }
        if !lambda1.is_positive() {
            return Err(Error::InvalidArgument(format!("factor λ₁ must be positive, got {lambda1}")));
        }
        Ok(AbstractFactor { dim, volume, lambda1: Some(lambda1), scalar_curvature })
    }

    /// The zero-dimensional factor of volume 1, so that `S^d × point = S^d`.
    pub fn point() -> Self {
        AbstractFactor {
            dim: 0,
            volume: PiMultiple::rational(int(1)),
            lambda1: None,
            scalar_curvature: Rational::zero(),
        }
    }

    /// The round sphere `S^k(r)` viewed as an abstract factor. Odd `k`
    /// needs a rational radius for the volume to stay exact.
    pub fn round_sphere(k: usize, r_sq: Rational) -> Result<Self> {
        let s = SphereSpec::new(k, r_sq.clone())?;
        let r_pow = if k % 2 == 0 {
            pow(&r_sq, k as u32 / 2)
        } else {
            let r = exact_sqrt(&r_sq).ok_or_else(|| {
                Error::InvalidArgument(format!("odd-dimensional sphere factor needs a rational radius, got r² = {r_sq}"))
            })?;
            pow(&r, k as u32)
        };
        let curvature = int((k * (k - 1)) as i64) / &r_sq;
        AbstractFactor::new(k, super::omega(k).scale(&r_pow), s.eigenvalue(1), curvature)
    }

    pub fn is_point(&self) -> bool {
        self.dim == 0
    }
}

/// How the coupling constant `h` is fixed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum HMode {
    /// `h = λ₁(M₁)/(2★-2)`, the value making `K₀` the first eigenspace of `M₁`.
    ProductDefault,
    /// `h = c_n R_g`.
    YamabeCoupling,
    Custom(#[serde(serialize_with = "ser_rational")] Rational),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductConfig {
    pub sphere: SphereSpec,
    pub factor2: AbstractFactor,
    pub kappa: i8,
    pub h_mode: HMode,
    pub weyl_sq: Option<f64>,
    pub lcf: bool,
}

impl ProductConfig {
    pub fn new(
        sphere: SphereSpec,
        factor2: AbstractFactor,
        kappa: i8,
        h_mode: HMode,
        weyl_sq: Option<f64>,
        lcf: bool,
    ) -> Result<Self> {
        let n = sphere.d + factor2.dim;
        if n < 3 {
            return Err(Error::InvalidArgument(format!("total dimension n = {n} must be at least 3")));
        }
        if kappa != 1 && kappa != -1 {
            return Err(Error::InvalidArgument(format!("kappa must be ±1, got {kappa}")));
        }
        if let Some(w) = weyl_sq {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::InvalidArgument(format!("|Weyl|² must be a nonnegative number, got {w}")));
            }
        }
        let cfg = ProductConfig { sphere, factor2, kappa, h_mode, weyl_sq, lcf };
        let h = cfg.h();
        if !h.is_positive() {
            return Err(Error::Hypothesis { hypothesis: HYP_KERNEL, detail: format!("h = {h} is not positive") });
        }
        if cfg.h_mode != HMode::ProductDefault {
            let lhs = (cfg.two_star() - int(2)) * &h;
            if lhs != cfg.lambda1() {
                return Err(Error::Hypothesis {
                    hypothesis: HYP_KERNEL,
                    detail: format!("(2★-2)·h = {lhs} but λ₁(M₁) = {}", cfg.lambda1()),
                });
            }
        }
        Ok(cfg)
    }

    /// `S^d(r) × M₂` with `h = λ₁(M₁)/(2★-2)` and `κ = -1`.
    pub fn product(sphere: SphereSpec, factor2: AbstractFactor) -> Result<Self> {
        ProductConfig::new(sphere, factor2, -1, HMode::ProductDefault, None, false)
    }

    /// The round sphere `S^n(r)`, realized with the point factor.
    pub fn pure_sphere(n: usize, r_sq: Rational) -> Result<Self> {
        ProductConfig::product(SphereSpec::new(n, r_sq)?, AbstractFactor::point())
    }

    pub fn n(&self) -> usize {
        self.sphere.d + self.factor2.dim
    }

    pub fn two_star(&self) -> Rational {
        two_star(self.n())
    }

    /// `λ₁(M₁) = d/r²`.
    pub fn lambda1(&self) -> Rational {
        self.sphere.eigenvalue(1)
    }

    /// Scalar curvature of the product, `R_N + d(d-1)/r²`.
    pub fn scalar_curvature(&self) -> Rational {
        let d = self.sphere.d as i64;
        &self.factor2.scalar_curvature + int(d * (d - 1)) / &self.sphere.r_sq
    }

    pub fn h(&self) -> Rational {
        match &self.h_mode {
            HMode::ProductDefault => self.lambda1() / (self.two_star() - int(2)),
            HMode::YamabeCoupling => c_n(self.n()) * self.scalar_curvature(),
            HMode::Custom(h) => h.clone(),
        }
    }

    /// The positive constant solution `u₀ = h^{1/(2★-2)} = h^{(n-2)/4}`.
    pub fn u0(&self) -> f64 {
        to_f64(&self.h()).powf((self.n() as f64 - 2.0) / 4.0)
    }

    /// `u₀` as an exact rational when `h^{(n-2)/4}` is one.
    pub fn u0_exact(&self) -> Option<Rational> {
        let n = self.n() as u32;
        let (num, den) = reduce(n - 2, 4);
        exact_power(&self.h(), num, den)
    }

    pub fn vol_factor2(&self) -> f64 {
        self.factor2.volume.to_f64()
    }

    /// `Vol(M) = Vol(S^d(r)) · Vol(M₂)`.
    pub fn volume(&self) -> f64 {
        self.sphere.volume_f64() * self.vol_factor2()
    }
}

fn reduce(a: u32, b: u32) -> (u32, u32) {
    let g = num_integer::gcd(a, b);
    (a / g, b / g)
}

/// `h` and `u₀` of the constant solution, with the residual of `h u₀ = u₀^{2★-1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantSolution {
    #[serde(serialize_with = "ser_rational")]
    pub h: Rational,
    pub u0: f64,
    pub identity_residual: f64,
}

pub fn constant_solution(cfg: &ProductConfig) -> Result<ConstantSolution> {
    let h = cfg.h();
    if !cfg.lambda1().is_positive() {
        return Err(Error::InvalidArgument("λ₁(M₁) must be positive".into()));
    }
    let u0 = cfg.u0();
    let p = to_f64(&cfg.two_star()) - 1.0;
    let lhs = to_f64(&h) * u0;
    let identity_residual = (lhs - u0.powf(p)).abs() / lhs;
    if identity_residual > 1e-12 {
        return Err(Error::Consistency(format!("constant solution residual {identity_residual:e}")));
    }
    Ok(ConstantSolution { h, u0, identity_residual })
}

/// `K₀`: the first eigenspace of the sphere factor, lifted to the product.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelBasis {
    pub basis: Vec<SphereFunction>,
    pub dim: usize,
    /// `λ₁ + h`, so that `‖φ‖_h² = (λ₁+h) · Vol(M₂) · ∫_{M₁} φ²`.
    pub h_norm_factor: Rational,
}

impl KernelBasis {
    /// `Σ aᵢ xᵢ` restricted to the sphere factor.
    pub fn element(&self, coeffs: &[Rational]) -> Result<SphereFunction> {
        if coeffs.len() != self.dim {
            return Err(Error::IndexLength { got: coeffs.len(), expected: self.dim });
        }
        let sphere = self.basis[0].sphere();
        SphereFunction::restrict(&HomPoly::linear(coeffs), sphere)
    }
}

/// Checks the eigenvalue gap that makes `K₀` the lift of `Λ₁(M₁)`.
pub fn check_gap(cfg: &ProductConfig) -> Result<()> {
    match &cfg.factor2.lambda1 {
        None => Ok(()),
        Some(l2) if cfg.lambda1() < *l2 => Ok(()),
        Some(l2) => Err(Error::Hypothesis {
            hypothesis: HYP_GAP,
            detail: format!("λ₁(M₁) = {} and λ₁(M₂) = {l2}", cfg.lambda1()),
        }),
    }
}

pub fn kernel_basis(cfg: &ProductConfig) -> Result<KernelBasis> {
    check_gap(cfg)?;
    let n = cfg.sphere.ambient_dim();
    let basis = (0..n)
        .map(|i| SphereFunction::restrict(&HomPoly::coordinate(n, i), &cfg.sphere))
        .collect::<Result<Vec<_>>>()?;
    Ok(KernelBasis { basis, dim: n, h_norm_factor: cfg.lambda1() + cfg.h() })
}

/// `S^d(r₀) × N` with `r₀² = dim(N)·d/R_N` and `h = c_n R_g`.
pub fn yamabe_product(factor: &AbstractFactor, d: usize) -> Result<ProductConfig> {
    let r_n = &factor.scalar_curvature;
    let l2 = factor.lambda1.clone().ok_or_else(|| Error::Hypothesis {
        hypothesis: HYP_YAMABE_FACTOR,
        detail: "the factor must have positive dimension".into(),
    })?;
    let bound = int(factor.dim as i64) * &l2;
    if !r_n.is_positive() || *r_n >= bound {
        return Err(Error::Hypothesis { hypothesis: HYP_YAMABE_FACTOR, detail: format!("R_N = {r_n}, dim(N)·λ₁(N) = {bound}") });
    }
    let r_sq = int((factor.dim * d) as i64) / r_n;
    let sphere = SphereSpec::new(d, r_sq)?;
    let cfg = ProductConfig::new(sphere, factor.clone(), -1, HMode::YamabeCoupling, None, false)?;
    let lhs = c_n(cfg.n()) * cfg.scalar_curvature();
    let rhs = cfg.lambda1() / (cfg.two_star() - int(2));
    if lhs != rhs {
        return Err(Error::Consistency(format!("c_n R_g = {lhs} differs from λ₁/(2★-2) = {rhs}")));
    }
    Ok(cfg)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecondVariation {
    pub nonnegative: bool,
    pub kernel_dim: usize,
}

/// Sign of `∫|∇v|² - λ₁(M₁)∫v²` on functions orthogonal to constants.
///
/// The bottom of the nonzero spectrum of the product is
/// `min(λ₁(M₁), λ₁(M₂))`, so the form is nonnegative exactly when
/// `λ₁(M₁)` does not exceed it.
pub fn second_variation_check(cfg: &ProductConfig) -> Result<SecondVariation> {
    let l1 = cfg.lambda1();
    let bottom = match &cfg.factor2.lambda1 {
        Some(l2) if *l2 < l1 => l2.clone(),
        _ => l1.clone(),
    };
    let nonnegative = l1 <= bottom;
    let kernel_dim = if nonnegative { kernel_basis(cfg)?.dim } else { 0 };
    Ok(SecondVariation { nonnegative, kernel_dim })
}

pub(crate) fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ser_opt_rational<S: serde::Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_some(&q.to_string()),
        None => s.serialize_none(),
    }
}
