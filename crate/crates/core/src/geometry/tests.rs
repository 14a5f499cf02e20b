use super::*;
use crate::error::Error;
use crate::rational::{frac, int, to_f64, Rational};
use crate::spectral::SphereSpec;

fn n4_config() -> ProductConfig {
    let f = AbstractFactor::new(2, PiMultiple::rational(int(7)), int(3), int(1)).unwrap();
    ProductConfig::product(SphereSpec::unit(2), f).unwrap()
}

fn s2_factor() -> AbstractFactor {
    AbstractFactor::round_sphere(2, int(1)).unwrap()
}

#[test]
fn n4_constant_solution() {
    let cfg = n4_config();
    assert_eq!(cfg.n(), 4);
    assert_eq!(cfg.two_star() - int(2), int(2));
    let sol = constant_solution(&cfg).unwrap();
    assert_eq!(sol.h, int(1));
    assert_eq!(sol.u0, 1.0);
}

#[test]
fn s1_times_s2_constant_solution() {
    let cfg = ProductConfig::product(SphereSpec::unit(1), s2_factor()).unwrap();
    assert_eq!(cfg.n(), 3);
    let sol = constant_solution(&cfg).unwrap();
    assert_eq!(sol.h, frac(1, 4));
    assert!((sol.u0 - 0.25f64.powf(0.25)).abs() < 1e-15);
    assert!(sol.identity_residual < 1e-15);
}

#[test]
fn kernel_dimensions() {
    let k = kernel_basis(&n4_config()).unwrap();
    assert_eq!(k.dim, 3);
    assert_eq!(k.basis.len(), 3);
    let cfg = ProductConfig::product(SphereSpec::unit(1), s2_factor()).unwrap();
    assert_eq!(kernel_basis(&cfg).unwrap().dim, 2);
}

#[test]
fn kernel_basis_is_orthogonal_eigenbasis() {
    let cfg = n4_config();
    let k = kernel_basis(&cfg).unwrap();
    for (i, a) in k.basis.iter().enumerate() {
        assert_eq!(a.laplacian(), a.scale(&cfg.lambda1()));
        for (j, b) in k.basis.iter().enumerate() {
            let ip = a.l2_inner(b).unwrap();
            if i == j {
                assert_eq!(ip, frac(1, 3));
            } else {
                assert_eq!(ip, int(0));
            }
        }
    }
}

#[test]
fn kernel_normalization_identity() {
    // (2★-1) u₀^{2★-2} ∫φ² = ‖φ‖_h², with u₀^{2★-2} = h.
    for cfg in [n4_config(), ProductConfig::product(SphereSpec::unit(1), s2_factor()).unwrap()] {
        let k = kernel_basis(&cfg).unwrap();
        let phi = k.element(&vec![int(2); k.dim]).unwrap();
        let l2 = phi.l2_inner(&phi).unwrap();
        let lhs = (cfg.two_star() - int(1)) * cfg.h() * &l2;
        assert_eq!(lhs, phi.h_inner(&phi, &cfg.h()).unwrap());
        assert_eq!(lhs, &k.h_norm_factor * l2);
        // orthogonal to the constant solution
        assert_eq!(phi.integral(), Rational::from_integer(0.into()));
    }
}

#[test]
fn equal_first_eigenvalues_are_refused() {
    let f = AbstractFactor::new(2, PiMultiple::rational(int(1)), int(2), int(0)).unwrap();
    let cfg = ProductConfig::product(SphereSpec::unit(2), f).unwrap();
    assert!(matches!(kernel_basis(&cfg), Err(Error::Hypothesis { hypothesis: HYP_GAP, .. })));
}

#[test]
fn yamabe_product_on_s1_times_s2() {
    let cfg = yamabe_product(&s2_factor(), 1).unwrap();
    assert_eq!(cfg.sphere.r_sq, int(1));
    assert_eq!(cfg.n(), 3);
    assert_eq!(c_n(3) * cfg.scalar_curvature(), frac(1, 4));
    assert_eq!(cfg.h(), cfg.lambda1() / int(4));
}

#[test]
fn yamabe_product_with_irrational_radius() {
    // N = S³(1): R = 6, λ₁ = 3, so d = 3 gives r₀² = 3/2.
    let n = AbstractFactor::new(3, omega(3), int(3), int(6)).unwrap();
    let cfg = yamabe_product(&n, 3).unwrap();
    assert_eq!(cfg.sphere.r_sq, frac(3, 2));
    assert_eq!(c_n(6) * cfg.scalar_curvature(), cfg.lambda1() / (cfg.two_star() - int(2)));
    assert_eq!(cfg.h(), int(2));
}

#[test]
fn yamabe_product_hypothesis() {
    let bad = AbstractFactor::new(2, PiMultiple::rational(int(1)), int(1), int(2)).unwrap();
    assert!(matches!(yamabe_product(&bad, 1), Err(Error::Hypothesis { hypothesis: HYP_YAMABE_FACTOR, .. })));
    assert!(yamabe_product(&AbstractFactor::point(), 3).is_err());
}

#[test]
fn custom_coupling_must_match_kernel() {
    let err = ProductConfig::new(SphereSpec::unit(2), s2_factor(), -1, HMode::Custom(int(2)), None, false);
    assert!(matches!(err, Err(Error::Hypothesis { hypothesis: HYP_KERNEL, .. })));
    let ok = ProductConfig::new(SphereSpec::unit(2), s2_factor(), -1, HMode::Custom(int(1)), None, false);
    assert!(ok.is_ok());
}

#[test]
fn second_variation() {
    let sv = second_variation_check(&n4_config()).unwrap();
    assert_eq!(sv, SecondVariation { nonnegative: true, kernel_dim: 3 });
    for n in 3..=6 {
        let cfg = ProductConfig::pure_sphere(n, int(1)).unwrap();
        assert_eq!(second_variation_check(&cfg).unwrap(), SecondVariation { nonnegative: true, kernel_dim: n + 1 });
    }
    let f = AbstractFactor::new(2, PiMultiple::rational(int(1)), int(1), int(0)).unwrap();
    let cfg = ProductConfig::product(SphereSpec::unit(2), f).unwrap();
    assert!(!second_variation_check(&cfg).unwrap().nonnegative);
}

#[test]
fn pure_sphere_is_yamabe() {
    for n in 3..=6usize {
        let cfg = ProductConfig::pure_sphere(n, int(1)).unwrap();
        assert_eq!(cfg.h(), c_n(n) * cfg.scalar_curvature());
        assert!((cfg.volume() - to_f64(&omega(n).coeff) * std::f64::consts::PI.powi(omega(n).pi_power as i32)).abs() < 1e-12);
    }
}
