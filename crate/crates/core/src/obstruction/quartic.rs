use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{a_l_exact, flat, lift, quartic_moment, Certificate};
use crate::error::{Error, Result};
use crate::geometry::{kernel_basis, ProductConfig};
use crate::rational::{int, to_f64, Rational};
use crate::series::compute_series;

const STARTS: u64 = 64;
const TOLERANCE: f64 = 1e-10;
const MAX_ITERATIONS: usize = 20_000;

/// `A₄(ϕ)` evaluated along four independent routes, each as `K·u₀^{-2}·Vol(M)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct A4Paths {
    /// Direct formula with the computed `P₂`.
    pub direct: f64,
    /// Rewrite through `(Δ-λ₁)^{-1}(ϕ²)` for constant `u₀`.
    pub constant_rewrite: f64,
    /// Product closed form `c·∫ϕ⁴`.
    pub closed_form: f64,
    /// `-u_{3,1}` from the general `A_L` assembly.
    pub from_series: f64,
    pub max_rel_diff: f64,
    #[serde(skip)]
    pub exact: [Rational; 4],
}

impl A4Paths {
    pub fn value(&self) -> f64 {
        self.direct
    }
}

/// `4(2★-1)(2★-2)h(n-d) / (3(n-2)(d+2))`, the factor in front of `∫ϕ⁴`.
fn closed_form_coefficient(cfg: &ProductConfig) -> Rational {
    let p = cfg.two_star() - int(1);
    let n = cfg.n() as i64;
    let d = cfg.sphere.d as i64;
    int(4) * &p * (&p - int(1)) * cfg.h() * int(n - d) / int(3 * (n - 2) * (d + 2))
}

pub fn a4_eval(cfg: &ProductConfig, direction: &[Rational]) -> Result<A4Paths> {
    let p = cfg.two_star() - int(1);
    let h = cfg.h();
    let lambda1 = cfg.lambda1();
    let pre = &p * (&p - int(1)) * &h;
    let quartic_weight = (&p - int(2)) / int(6);

    let series = compute_series(cfg, direction, 3)?;
    let phi = series.shape(1);
    let phi_sq = phi.pointwise_multiply(phi)?;
    let phi4 = phi_sq.l2_inner(&phi_sq)?;

    let direct = -&pre * (phi_sq.l2_inner(series.shape(2))? + &quartic_weight * &phi4);

    let inverse = phi_sq.without_component(1).resolvent_shifted(&lambda1)?;
    let rewrite = &pre * (-(&p * &lambda1 / int(2)) * phi_sq.l2_inner(&inverse)? - &quartic_weight * &phi4);

    let closed = closed_form_coefficient(cfg) * &phi4;
    let from_series = a_l_exact(cfg, &series, 4)?;

    let exact = [direct, rewrite, closed, from_series];
    let values: Vec<f64> = exact.iter().map(|k| lift(cfg, k, -2)).collect();
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let spread = values.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v))
        - values.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    let max_rel_diff = if scale > 0.0 { spread / scale } else { 0.0 };
    if max_rel_diff > TOLERANCE {
        return Err(Error::PathDisagreement { what: "A₄", values });
    }
    Ok(A4Paths {
        direct: values[0],
        constant_rewrite: values[1],
        closed_form: values[2],
        from_series: values[3],
        max_rel_diff,
        exact,
    })
}

/// Symmetric quartic form `A₄` on kernel coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuarticForm {
    pub kernel_dim: usize,
    /// Row-major `m⁴` coefficients.
    pub values: Vec<f64>,
    /// `‖Σ aᵢxᵢ‖_h² = norm_factor · |a|²`.
    pub norm_factor: f64,
    #[serde(skip)]
    pub exact: Vec<Rational>,
    #[serde(skip)]
    closed_form: Option<(Rational, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuarticMinimum {
    /// Minimum of `A₄` on the `‖·‖_h` unit sphere of `K₀`.
    pub value: f64,
    pub certificate: Certificate,
    /// Euclidean-unit coordinates of a minimizer.
    pub argmin: Vec<f64>,
    /// Sign of the minimum when it is decided exactly.
    pub exact_sign: Option<i8>,
}

/// The polarized tensor of `A₄`.
///
/// With `c = (2★-1)(2★-2)h/2`, `A₄(ϕ) = -(2★-1)(2★-2)h(c∫ϕ²(Δ-λ₁)^{-1}ϕ² +
/// ((2★-3)/6)∫ϕ⁴)`, so the coefficient of `aᵢaⱼaₖaₗ` is the average of the
/// three pairings of `∫xᵢxⱼ(Δ-λ₁)^{-1}(xₖxₗ)` plus the quartic moment.
pub fn a4_form(cfg: &ProductConfig) -> Result<QuarticForm> {
    let kernel = kernel_basis(cfg)?;
    let basis = &kernel.basis;
    let m = basis.len();
    let p = cfg.two_star() - int(1);
    let h = cfg.h();
    let lambda1 = cfg.lambda1();
    let pre = -(&p * (&p - int(1)) * &h);
    let c = &p * (&p - int(1)) * &h / int(2);
    let quartic_weight = (&p - int(2)) / int(6);

    let mut products = Vec::with_capacity(m * m);
    let mut inverses = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let xij = basis[i].pointwise_multiply(&basis[j])?;
            inverses.push(xij.without_component(1).resolvent_shifted(&lambda1)?);
            products.push(xij);
        }
    }
    let pairing = |i: usize, j: usize, k: usize, l: usize| -> Result<Rational> {
        let quad = products[i * m + j].l2_inner(&inverses[k * m + l])?;
        let moment = products[i * m + j].l2_inner(&products[k * m + l])?;
        Ok(&c * quad + &quartic_weight * moment)
    };
    let mut exact = vec![int(0); m * m * m * m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let sum = pairing(i, j, k, l)? + pairing(i, k, j, l)? + pairing(i, l, j, k)?;
                    exact[flat(&[i, j, k, l], m)] = &pre * sum / int(3);
                }
            }
        }
    }
    let values = exact.iter().map(|k| lift(cfg, k, -2)).collect();
    let norm_exact = (&lambda1 + &h) * &cfg.sphere.r_sq / int(cfg.sphere.d as i64 + 1);
    let norm_factor = to_f64(&norm_exact) * cfg.volume();

    // ∫(a·x)⁴ = |a|⁴∫x₁⁴ turns the closed form into a constant on the unit sphere.
    let k = closed_form_coefficient(cfg) * quartic_moment(cfg)?;
    let unit = &k / (&norm_exact * &norm_exact);
    let closed_value = to_f64(&unit) * cfg.u0().powi(-2) / cfg.volume();
    Ok(QuarticForm { kernel_dim: m, values, norm_factor, exact, closed_form: Some((unit, closed_value)) })
}

impl QuarticForm {
    pub fn eval(&self, a: &[f64]) -> f64 {
        let m = self.kernel_dim;
        let mut s = 0.0;
        for i in 0..m {
            for j in 0..m {
                let aij = a[i] * a[j];
                for k in 0..m {
                    for l in 0..m {
                        s += self.values[flat(&[i, j, k, l], m)] * aij * a[k] * a[l];
                    }
                }
            }
        }
        s
    }

    pub fn gradient(&self, a: &[f64]) -> Vec<f64> {
        let m = self.kernel_dim;
        (0..m)
            .map(|i| {
                let mut s = 0.0;
                for j in 0..m {
                    for k in 0..m {
                        for l in 0..m {
                            s += self.values[flat(&[i, j, k, l], m)] * a[j] * a[k] * a[l];
                        }
                    }
                }
                4.0 * s
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        let m = self.kernel_dim;
        let idx = |i, j, k, l| flat(&[i, j, k, l], m);
        (0..m).all(|i| {
            (0..m).all(|j| {
                (0..m).all(|k| {
                    (0..m).all(|l| {
                        let v = &self.exact[idx(i, j, k, l)];
                        *v == self.exact[idx(j, i, k, l)] && *v == self.exact[idx(k, j, i, l)] && *v == self.exact[idx(l, j, k, i)]
                    })
                })
            })
        })
    }

    /// Closed-form minimum on the `‖·‖_h` unit sphere.
    pub fn minimize_closed_form(&self) -> Option<QuarticMinimum> {
        let (unit, value) = self.closed_form.as_ref()?;
        let mut argmin = vec![0.0; self.kernel_dim];
        argmin[0] = 1.0;
        let sign = if *unit > int(0) {
            1
        } else if *unit < int(0) {
            -1
        } else {
            0
        };
        Some(QuarticMinimum { value: *value, certificate: Certificate::ClosedForm, argmin, exact_sign: Some(sign) })
    }

    /// Multi-start projected gradient descent on the Euclidean unit sphere,
    /// rescaled to the `‖·‖_h` unit sphere.
    pub fn minimize_numeric(&self, seed: u64) -> QuarticMinimum {
        let m = self.kernel_dim;
        let best = (0..STARTS)
            .into_par_iter()
            .map(|start| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(start));
                let a: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
                self.descend(normalize(a))
            })
            .reduce_with(|x, y| if y.0 < x.0 { y } else { x })
            .expect("at least one start");
        QuarticMinimum {
            value: best.0 / (self.norm_factor * self.norm_factor),
            certificate: Certificate::NumericHeuristic,
            argmin: best.1,
            exact_sign: None,
        }
    }

    fn descend(&self, mut a: Vec<f64>) -> (f64, Vec<f64>) {
        let scale = self.values.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(f64::MIN_POSITIVE);
        let mut value = self.eval(&a);
        let mut step = 0.1 / scale;
        for _ in 0..MAX_ITERATIONS {
            let g = self.gradient(&a);
            let radial: f64 = g.iter().zip(&a).map(|(x, y)| x * y).sum();
            let tangent: Vec<f64> = g.iter().zip(&a).map(|(x, y)| x - radial * y).collect();
            let norm = tangent.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm <= TOLERANCE * scale {
                break;
            }
            loop {
                let trial = normalize(a.iter().zip(&tangent).map(|(x, t)| x - step * t).collect());
                let v = self.eval(&trial);
                if v < value {
                    a = trial;
                    value = v;
                    step *= 1.5;
                    break;
                }
                step *= 0.5;
                if step * norm < 1e-16 {
                    return (value, a);
                }
            }
        }
        (value, a)
    }
}

fn normalize(a: Vec<f64>) -> Vec<f64> {
    let n = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n == 0.0 {
        let mut e = vec![0.0; a.len()];
        e[0] = 1.0;
        return e;
    }
    a.into_iter().map(|x| x / n).collect()
}
