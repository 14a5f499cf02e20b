use super::*;
use crate::geometry::{AbstractFactor, PiMultiple};
use crate::poly::HomPoly;
use crate::rational::frac;
use crate::spectral::SphereSpec;

fn n4_config() -> ProductConfig {
    let f = AbstractFactor::new(2, PiMultiple::rational(int(7)), int(3), int(1)).unwrap();
    ProductConfig::product(SphereSpec::unit(2), f).unwrap()
}

fn s1_s2_config() -> ProductConfig {
    ProductConfig::product(SphereSpec::unit(1), AbstractFactor::round_sphere(2, int(1)).unwrap()).unwrap()
}

fn n6_config() -> ProductConfig {
    let f = AbstractFactor::new(4, PiMultiple::rational(int(1)), int(5), int(0)).unwrap();
    ProductConfig::product(SphereSpec::unit(2), f).unwrap()
}

fn e(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![int(0); n];
    v[i] = int(1);
    v
}

#[test]
fn taylor_examples() {
    let t = taylor_coeffs(1.0, &int(4), 4).unwrap();
    assert_eq!(t.a, vec![1.0, 3.0, 3.0, 1.0, 0.0]);
    let t = taylor_coeffs(1.0, &int(3), 3).unwrap();
    assert_eq!(&t.a[2..], &[1.0, 0.0]);
    let t = taylor_coeffs(1.7, &frac(10, 3), 2).unwrap();
    assert!((t.a[1] - (7.0 / 3.0) * 1.7f64.powf(4.0 / 3.0)).abs() < 1e-12);
    assert!(taylor_coeffs(0.0, &int(4), 2).is_err());
}

#[test]
fn multinomial_examples() {
    assert_eq!(multinomial_q(2, 2, 2), vec![QTerm { exponents: vec![2, 0], coeff: int(1) }]);
    assert_eq!(multinomial_q(2, 2, 3), vec![QTerm { exponents: vec![1, 1], coeff: int(2) }]);
    assert!(multinomial_q(2, 2, 5).is_empty());
    assert!(multinomial_q(3, 4, 2).is_empty());
    // (X₁+X₂+X₃)³ has total weight-5 part 3X₁²X₃ + 3X₁X₂².
    let q = multinomial_q(3, 3, 5);
    let total: Rational = q.iter().map(|t| t.coeff.clone()).sum();
    assert_eq!(total, int(6));
}

#[test]
fn multinomial_sums_to_power_of_total() {
    // Σ_j Σ_terms coeff = L^k (all X_l = 1).
    for k in 1..=5u32 {
        for l in 1..=5u32 {
            let s: Rational = (0..=k * l).flat_map(|j| multinomial_q(k, l, j)).map(|t| t.coeff).sum();
            assert_eq!(s, crate::rational::pow(&int(l as i64), k));
        }
    }
}

#[test]
fn p2_on_reference_config() {
    let cfg = n4_config();
    let p2 = compute_p(&cfg, &e(3, 0), 2).unwrap().exact(&int(1));
    let x1 = HomPoly::coordinate(3, 0);
    let expected = &x1.mul(&x1).scale(&frac(3, 4)) - &HomPoly::constant(3, frac(3, 4)).mul(&HomPoly::radial_power(3, 1));
    assert_eq!(p2, SphereFunction::restrict(&expected, &cfg.sphere).unwrap());
}

#[test]
fn p2_matches_second_order_closed_form() {
    // P₂ = ((2★-1)(2★-2)/2)(Δ-λ₁)^{-1}(u₀^{2★-3}φ²), with u₀^{2★-3} = h/u₀.
    for cfg in [n4_config(), s1_s2_config(), n6_config()] {
        let n = cfg.sphere.ambient_dim();
        let dir: Vec<Rational> = (0..n).map(|i| frac(i as i64 + 1, 3)).collect();
        let phi = kernel_basis(&cfg).unwrap().element(&dir).unwrap();
        let p = cfg.two_star() - int(1);
        let c = &p * (&p - int(1)) / int(2);
        let closed = phi.pointwise_multiply(&phi).unwrap().resolvent_shifted(&cfg.lambda1()).unwrap().scale(&(c * cfg.h()));
        assert_eq!(compute_p(&cfg, &dir, 2).unwrap().shape, closed);
    }
}

/// Independent route: Picard iteration on truncated power series in `s`,
/// `U ← T[h((1+U)^p - 1 - pU)]` for integer `p`, with `u₀ = 1`.
fn picard_oracle(cfg: &ProductConfig, dir: &[Rational], l_max: usize) -> Vec<SphereFunction> {
    let p: u32 = (cfg.two_star() - int(1)).to_integer().try_into().unwrap();
    let phi = kernel_basis(cfg).unwrap().element(dir).unwrap();
    let sphere = phi.sphere().clone();
    let zero = SphereFunction::zero(&sphere);
    let mut u: Vec<SphereFunction> = vec![zero.clone(); l_max + 1];
    u[1] = phi.clone();
    let mul = |a: &[SphereFunction], b: &[SphereFunction]| {
        let mut out = vec![zero.clone(); l_max + 1];
        for i in 0..=l_max {
            for j in 0..=l_max - i {
                if !a[i].is_zero() && !b[j].is_zero() {
                    out[i + j] = out[i + j].add(&a[i].pointwise_multiply(&b[j]).unwrap()).unwrap();
                }
            }
        }
        out
    };
    for _ in 0..l_max {
        let mut w = u.clone();
        w[0] = SphereFunction::constant(&sphere, int(1));
        let mut power = w.clone();
        for _ in 1..p {
            power = mul(&power, &w);
        }
        let mut next = vec![zero.clone(); l_max + 1];
        next[1] = phi.clone();
        for l in 2..=l_max {
            let nonlinear = power[l].sub(&u[l].scale(&int(p as i64))).unwrap().scale(&cfg.h());
            next[l] = nonlinear.without_component(1).resolvent_shifted(&cfg.lambda1()).unwrap();
        }
        u = next;
    }
    u.into_iter().skip(1).collect()
}

#[test]
fn recursion_matches_picard_oracle() {
    let cfg = n4_config();
    let dir = vec![frac(1, 2), int(-1), frac(2, 3)];
    let series = compute_series(&cfg, &dir, 5).unwrap();
    assert_eq!(series.shapes(), picard_oracle(&cfg, &dir, 5).as_slice());

    let cfg = n6_config();
    let dir = vec![int(1), int(0), frac(-1, 2)];
    let series = compute_series(&cfg, &dir, 4).unwrap();
    assert_eq!(series.shapes(), picard_oracle(&cfg, &dir, 4).as_slice());
}

#[test]
fn terms_avoid_kernel_and_respect_degree_bound() {
    for cfg in [n4_config(), s1_s2_config()] {
        let n = cfg.sphere.ambient_dim();
        let dir: Vec<Rational> = (0..n).map(|i| frac(2 * i as i64 - 1, 5)).collect();
        let s = compute_series(&cfg, &dir, 6).unwrap();
        for l in 2..=6u32 {
            assert!(s.shape(l).component(1).is_none());
            assert!(s.shape(l).max_degree().unwrap() <= l);
        }
    }
}

#[test]
fn homogeneity_and_zero_direction() {
    let cfg = n4_config();
    let dir = vec![int(1), frac(1, 3), int(-2)];
    let t = frac(-3, 7);
    let scaled: Vec<Rational> = dir.iter().map(|c| c * &t).collect();
    let a = compute_series(&cfg, &dir, 5).unwrap();
    let b = compute_series(&cfg, &scaled, 5).unwrap();
    for l in 1..=5u32 {
        assert_eq!(b.shape(l), &a.shape(l).scale(&crate::rational::pow(&t, l)));
    }
    let g = glueing_eval(&cfg, &[int(0), int(0), int(0)], 4).unwrap();
    assert!(g.norm_decay.iter().all(|&v| v == 0.0));
    assert_eq!(g.series.eval_truncated(&[1.0, 0.0, 0.0]), cfg.u0());
}

#[test]
fn order_checks() {
    assert!(compute_p(&n4_config(), &e(3, 0), 1).is_err());
    assert!(glueing_eval(&n4_config(), &e(3, 0), 1).is_err());
    assert!(compute_series(&n4_config(), &e(2, 0), 3).is_err());
}

#[test]
fn norm_decay_is_geometric_for_small_directions() {
    let cfg = n4_config();
    let dir = vec![frac(1, 60), int(0), int(0)];
    assert!(direction_l2_norm(&cfg, &dir).unwrap() <= 0.1);
    let g = glueing_eval(&cfg, &dir, 6).unwrap();
    let ratios = g.decay_ratios();
    // regression baseline: successive ratios sit near 0.05 for this direction
    for r in &ratios[1..] {
        assert!(*r < 0.2, "{ratios:?}");
    }
}

#[test]
fn residual_order_for_integer_exponent() {
    let cfg = n4_config();
    let dir = vec![int(1), frac(1, 2), int(0)];
    for l_max in 3..=5usize {
        let sigma = frac(1, 40);
        let a = glueing_residual(&cfg, &dir, l_max, &sigma).unwrap();
        let b = glueing_residual(&cfg, &dir, l_max, &(sigma / int(2))).unwrap();
        let bound = 2f64.powi(l_max as i32 + 1) * 0.9;
        assert!(a / b >= bound, "L_max={l_max}: ratio {}", a / b);
    }
}

#[test]
fn residual_order_for_fractional_exponent() {
    let cfg = s1_s2_config();
    let dir = vec![int(1), int(0)];
    let l_max = 3;
    let a = glueing_residual(&cfg, &dir, l_max, &frac(1, 40)).unwrap();
    let b = glueing_residual(&cfg, &dir, l_max, &frac(1, 80)).unwrap();
    assert!(a / b >= 16.0 * 0.9, "ratio {}", a / b);
}
