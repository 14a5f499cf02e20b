use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::ProductConfig;
use crate::quadrature::SphereQuadrature;
use crate::rational::{binomial, int, to_f64, Rational};
use crate::series::{compute_series, SeriesExpansion};
use crate::spectral::{CompiledFunction, SphereFunction, SphereSpec};

/// `u = Σ cᵢ fᵢ` with real weights and exact sphere functions, lifted to `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledSum {
    pub sphere: SphereSpec,
    pub terms: Vec<(f64, SphereFunction)>,
}

impl ScaledSum {
    pub fn constant(cfg: &ProductConfig, value: f64) -> Self {
        let one = SphereFunction::constant(&cfg.sphere, Rational::one());
        ScaledSum { sphere: cfg.sphere.clone(), terms: vec![(value, one)] }
    }

    /// `u₀(1 + Σ σ^L R_L)`, the truncated series at `s = σ u₀`.
    pub fn from_series(cfg: &ProductConfig, series: &SeriesExpansion, sigma: f64) -> Self {
        let mut out = Self::constant(cfg, cfg.u0());
        for (i, r) in series.shapes().iter().enumerate() {
            out.terms.push((cfg.u0() * sigma.powi(i as i32 + 1), r.clone()));
        }
        out
    }

    pub fn push(&mut self, c: f64, f: SphereFunction) {
        self.terms.push((c, f));
    }

    fn max_degree(&self) -> u32 {
        self.terms.iter().filter_map(|(_, f)| f.max_degree()).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Functionals {
    /// `‖u‖_h²` from the spectral weights `λ_k + h`.
    pub norm_h_sq: f64,
    /// `‖u‖_h²` by quadrature of `|∇u|² + h u²`.
    pub norm_h_sq_quadrature: f64,
    /// `∫|u|^{2★}`.
    pub norm_2star_pow: f64,
    /// `∫H(u)^{2★}` with `H = |·|` for `κ = -1` and `(·)₊` for `κ = +1`.
    pub h_pow: f64,
    pub i0: f64,
    pub j0: f64,
}

fn h_map(kappa: i8, v: f64) -> f64 {
    if kappa < 0 {
        v.abs()
    } else {
        v.max(0.0)
    }
}

pub fn functionals_eval(cfg: &ProductConfig, u: &ScaledSum, order: Option<usize>) -> Result<Functionals> {
    if u.sphere != cfg.sphere {
        return Err(Error::SphereMismatch);
    }
    let h = cfg.h();
    let vol2 = cfg.vol_factor2();
    let vol_sphere = cfg.sphere.volume_f64();

    let mut spectral = 0.0;
    for (ci, fi) in &u.terms {
        for (cj, fj) in &u.terms {
            spectral += ci * cj * to_f64(&fi.h_inner(fj, &h)?);
        }
    }
    let norm_h_sq = spectral * vol_sphere * vol2;

    let two_star = to_f64(&cfg.two_star());
    let degree = u.max_degree() as usize;
    let order = order.unwrap_or((two_star.ceil() as usize * degree.max(1)) / 2 + 2);
    let quad = SphereQuadrature::new(cfg.sphere.d, cfg.sphere.radius(), order)?;
    let compiled: Vec<(f64, CompiledFunction)> = u.terms.iter().map(|(c, f)| (*c, CompiledFunction::new(f))).collect();
    let value = |x: &[f64]| compiled.iter().map(|(c, f)| c * f.value(x)).sum::<f64>();
    let hf = to_f64(&h);
    let gradient_part = quad.integrate(|x| {
        let mut g = vec![0.0; x.len()];
        for (c, f) in &compiled {
            for (gi, v) in g.iter_mut().zip(f.grad(x)) {
                *gi += c * v;
            }
        }
        let v = value(x);
        g.iter().map(|gi| gi * gi).sum::<f64>() + hf * v * v
    })?;
    let norm_h_sq_quadrature = gradient_part * vol2;
    let norm_2star_pow = quad.integrate(|x| value(x).abs().powf(two_star))? * vol2;
    let h_pow = quad.integrate(|x| h_map(cfg.kappa, value(x)).powf(two_star))? * vol2;

    let i0 = norm_h_sq / norm_2star_pow.powf(2.0 / two_star);
    let j0 = 0.5 * norm_h_sq - h_pow / two_star;
    Ok(Functionals { norm_h_sq, norm_h_sq_quadrature, norm_2star_pow, h_pow, i0, j0 })
}

/// Precomputed data for evaluating `I₀` and `J₀` along `t ↦ u(tϕ)` with
/// `‖ϕ‖_h = 1`, stable as `t → 0`.
///
/// With `u = u₀ w`, `w = 1 + V`, `V = Σ σ^L R_L` and `σ = k t`:
/// `‖u‖_h² = ‖u₀‖_h² (1 + δA)` and `∫H(u)^{2★} = ‖u₀‖_h² (1 + δB)`. `δA` is
/// an exact polynomial in `σ`; `δB` splits into the exact quadratic Taylor
/// part of `(1+V)^{2★}` and a cubic remainder evaluated by quadrature.
#[derive(Clone, Debug)]
pub struct RayProfile {
    pub l_max: usize,
    /// `σ = k·t`.
    pub k: f64,
    two_star: f64,
    kappa: i8,
    n: f64,
    /// `δA` coefficients.
    norm_poly: Vec<f64>,
    /// `2★ avg V + C(2★,2) avg V²` coefficients.
    quadratic_poly: Vec<f64>,
    weights: Vec<f64>,
    node_values: Vec<Vec<f64>>,
    /// `A_L` coefficients in `σ`, normalized by `‖u₀‖_h²`, for `L ≤ L_max`.
    j_series: Vec<f64>,
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * x + v)
}

impl RayProfile {
    pub fn new(cfg: &ProductConfig, direction: &[Rational], l_max: usize) -> Result<Self> {
        if l_max < 2 {
            return Err(Error::InvalidArgument(format!("ray evaluation needs L_max ≥ 2, got {l_max}")));
        }
        let series = compute_series(cfg, direction, l_max)?;
        let h = cfg.h();
        let sphere = cfg.sphere.clone();
        let phi = series.shape(1);
        let phi_h = phi.h_inner(phi, &h)?;
        if phi_h.is_zero() {
            return Err(Error::InvalidArgument("ray direction must be nonzero".into()));
        }
        let u0 = cfg.u0();
        let k = 1.0 / ((to_f64(&phi_h) * sphere.volume_f64() * cfg.vol_factor2()).sqrt() * u0);

        let mut r = vec![SphereFunction::constant(&sphere, Rational::one())];
        r.extend(series.shapes().iter().cloned());
        let mut norm_poly = vec![0.0; 2 * l_max + 1];
        // ∫V² in σ, from the pairwise L² products of the R_l.
        let mut v_sq = vec![Rational::zero(); 2 * l_max + 1];
        for (a, ra) in r.iter().enumerate() {
            for (b, rb) in r.iter().enumerate().skip(a) {
                let mult = if a == b { int(1) } else { int(2) };
                if a + b > 0 {
                    norm_poly[a + b] += to_f64(&(&mult * ra.h_inner(rb, &h)? / &h));
                }
                if a > 0 {
                    v_sq[a + b] += &mult * ra.l2_inner(rb)?;
                }
            }
        }

        let two_star = cfg.two_star();
        let c1 = two_star.clone();
        let c2 = binomial(&two_star, 2);
        let mut quadratic_poly = vec![0.0; 2 * l_max + 1];
        for (m, slot) in quadratic_poly.iter_mut().enumerate() {
            let mut exact = &c2 * &v_sq[m];
            if (1..r.len()).contains(&m) {
                exact += &c1 * r[m].integral();
            }
            *slot = to_f64(&exact);
        }

        let degree = (to_f64(&two_star).ceil() as usize) * l_max;
        let quad = SphereQuadrature::new(sphere.d, sphere.radius(), degree / 2 + 4)?;
        let total: f64 = quad.weights.iter().sum();
        let weights = quad.weights.iter().map(|w| w / total).collect();
        let compiled: Vec<CompiledFunction> = series.shapes().iter().map(CompiledFunction::new).collect();
        let node_values = quad.nodes.iter().map(|x| compiled.iter().map(|c| c.value(x)).collect()).collect();

        let mut j_series = vec![0.0; l_max + 1];
        for (l, slot) in j_series.iter_mut().enumerate().skip(3) {
            let a = super::a_l_exact(cfg, &series, l)?;
            *slot = to_f64(&(a / (&h * int(l as i64))));
        }

        Ok(RayProfile {
            l_max,
            k,
            two_star: to_f64(&two_star),
            kappa: cfg.kappa,
            n: cfg.n() as f64,
            norm_poly,
            quadratic_poly,
            weights,
            node_values,
            j_series,
        })
    }

    /// `(1+V)^{2★} - 1 - 2★V - C(2★,2)V²`, with `H` applied to `1+V`.
    fn cubic_remainder(&self, v: f64) -> f64 {
        let p = self.two_star;
        if v.abs() < 0.5 && v > -1.0 {
            let mut coeff = p * (p - 1.0) / 2.0;
            let mut power = v * v;
            let mut sum = 0.0;
            for j in 3..200 {
                coeff *= (p - (j - 1) as f64) / j as f64;
                power *= v;
                let term = coeff * power;
                sum += term;
                if term.abs() <= 1e-18 * sum.abs().max(f64::MIN_POSITIVE) || coeff == 0.0 {
                    break;
                }
            }
            sum
        } else {
            h_map(self.kappa, 1.0 + v).powf(p) - 1.0 - p * v - p * (p - 1.0) / 2.0 * v * v
        }
    }

    /// `(δA, δB)` at `σ`.
    pub fn deltas(&self, sigma: f64) -> (f64, f64) {
        let delta_a = poly_eval(&self.norm_poly, sigma);
        let remainder: f64 = self
            .node_values
            .iter()
            .zip(&self.weights)
            .map(|(vals, w)| {
                let v = vals.iter().rev().fold(0.0, |acc, r| (acc + r) * sigma);
                w * self.cubic_remainder(v)
            })
            .sum();
        (delta_a, poly_eval(&self.quadratic_poly, sigma) + remainder)
    }

    /// `(J₀(u(tϕ)) - J₀(u₀)) / ‖u₀‖_h²`.
    pub fn j_diff(&self, t: f64) -> f64 {
        let (a, b) = self.deltas(self.k * t);
        a / 2.0 - b / self.two_star
    }

    /// `I₀(u(tϕ))/I₀(u₀) - 1`.
    pub fn i_ratio_minus_one(&self, t: f64) -> f64 {
        let (a, b) = self.deltas(self.k * t);
        let q = 2.0 / self.two_star;
        let d = a - q * b;
        (d + (a.ln_1p() - a) - q * (b.ln_1p() - b)).exp_m1()
    }

    pub fn f(&self, t: f64) -> f64 {
        if t == 0.0 {
            0.0
        } else {
            self.j_diff(t) / (t * t)
        }
    }

    /// Central difference with step `10⁻⁴|t|`, refined by one Richardson step.
    pub fn f_prime(&self, t: f64) -> f64 {
        if t == 0.0 {
            return self.j_series.get(3).copied().unwrap_or(0.0) * self.k.powi(3);
        }
        let step = 1e-4 * t.abs();
        let central = |s: f64| (self.f(t + s) - self.f(t - s)) / (2.0 * s);
        (4.0 * central(step / 2.0) - central(step)) / 3.0
    }

    /// Truncated `Σ_{L≤L_max} A_L(tϕ)/(L‖u₀‖_h²)`, the series form of
    /// [`RayProfile::j_diff`].
    pub fn j_diff_series(&self, t: f64) -> f64 {
        poly_eval(&self.j_series, self.k * t)
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn two_star(&self) -> f64 {
        self.two_star
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RayEvaluation {
    pub t: f64,
    #[serde(rename = "I0")]
    pub i0: f64,
    #[serde(rename = "J0")]
    pub j0: f64,
    pub f: f64,
    pub f_prime: f64,
    pub identity_residual: f64,
}

impl RayEvaluation {
    pub fn from_profile(cfg: &ProductConfig, profile: &RayProfile, t: f64) -> Result<Self> {
        let base = functionals_eval(cfg, &ScaledSum::constant(cfg, cfg.u0()), None)?;
        let f = profile.f(t);
        let f_prime = profile.f_prime(t);
        let ratio = profile.i_ratio_minus_one(t);
        let n = profile.n();
        let q = 2.0 / profile.two_star();
        let first = 2.0 * t * t * f - (n - 2.0) / 2.0 * t.powi(3) * f_prime;
        let second = -(n / 2.0) * t.powi(3) * f_prime;
        let predicted = (first.ln_1p() - q * second.ln_1p()).exp_m1();
        Ok(RayEvaluation {
            t,
            i0: base.i0 * (1.0 + ratio),
            j0: base.j0 + base.norm_h_sq * profile.j_diff(t),
            f,
            f_prime,
            identity_residual: (ratio - predicted).abs(),
        })
    }
}

pub fn ray_eval(cfg: &ProductConfig, direction: &[Rational], t: f64, l_max: usize) -> Result<RayEvaluation> {
    let profile = RayProfile::new(cfg, direction, l_max)?;
    RayEvaluation::from_profile(cfg, &profile, t)
}
