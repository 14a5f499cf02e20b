use super::*;
use crate::rational::frac;
use proptest::prelude::*;

fn x(n: usize, i: usize) -> HomPoly {
    HomPoly::coordinate(n, i)
}

fn restrict(p: &HomPoly, s: &SphereSpec) -> SphereFunction {
    SphereFunction::restrict(p, s).unwrap()
}

/// Right-hand side of the closed-form inverse of `Δ - λ₁` on `φ²`.
fn closed_form_inverse(phi: &HomPoly, d: usize) -> SphereFunction {
    let s = SphereSpec::unit(d);
    let l1 = int(d as i64);
    let l2 = int(2 * (d as i64 + 1));
    let sq = phi.mul(phi);
    let lap = sq.laplacian_euclidean().constant_value();
    let shift = &l2 * lap / (int(2 * (d as i64 + 1)) * &l1);
    restrict(&sq, &s).add(&SphereFunction::constant(&s, shift)).unwrap().scale(&(int(1) / (l2 - l1)))
}

#[test]
fn eigenvalues() {
    for d in 1..=6usize {
        let s = SphereSpec::unit(d);
        assert_eq!(s.eigenvalue(0), int(0));
        assert_eq!(s.eigenvalue(1), int(d as i64));
        assert_eq!(s.eigenvalue(2), int(2 * (d as i64 + 1)));
    }
    let s = SphereSpec::new(3, frac(9, 4)).unwrap();
    assert_eq!(s.eigenvalue(1), frac(4, 3));
}

#[test]
fn restriction_examples() {
    let s2 = SphereSpec::unit(2);
    let f = restrict(&x(3, 0), &s2);
    assert_eq!(f.components().count(), 1);
    assert_eq!(f.component(1), Some(&x(3, 0)));

    let sq = restrict(&x(3, 0).mul(&x(3, 0)), &s2);
    let h = &x(3, 0).mul(&x(3, 0)) - &HomPoly::radial_power(3, 1).scale(&frac(1, 3));
    assert_eq!(sq.component(2), Some(&h));
    assert_eq!(sq.component(0), Some(&HomPoly::constant(3, frac(1, 3))));

    let s = SphereSpec::new(4, frac(2, 1)).unwrap();
    let r2 = restrict(&HomPoly::radial_power(5, 1), &s);
    assert_eq!(r2, SphereFunction::constant(&s, int(2)));
}

#[test]
fn products_and_pairings() {
    let s2 = SphereSpec::unit(2);
    let x1 = restrict(&x(3, 0), &s2);
    let x2 = restrict(&x(3, 1), &s2);
    let one = SphereFunction::constant(&s2, int(1));
    assert_eq!(x1.pointwise_multiply(&one).unwrap(), x1);
    assert_eq!(x1.pointwise_multiply(&x1).unwrap(), restrict(&x(3, 0).mul(&x(3, 0)), &s2));
    assert_eq!(x1.l2_inner(&x2).unwrap(), int(0));
    assert_eq!(x1.l2_inner(&x1).unwrap(), frac(1, 3));
    let sq = x1.pointwise_multiply(&x1).unwrap();
    assert_eq!(sq.l2_inner(&sq).unwrap(), frac(1, 5));
}

#[test]
fn components_are_orthogonal() {
    let s = SphereSpec::unit(3);
    let p = &x(4, 0).mul(&x(4, 0)).mul(&x(4, 1)).mul(&x(4, 1)) + &HomPoly::monomial(vec![4, 0, 0, 0], int(3));
    let f = restrict(&p, &s);
    let parts: Vec<(u32, &HomPoly)> = f.components().collect();
    for (i, (_, a)) in parts.iter().enumerate() {
        for (_, b) in &parts[i + 1..] {
            assert!(integrate_poly(&a.mul(b), 3, &int(1)).unwrap().is_zero());
        }
    }
}

#[test]
fn projection() {
    let s2 = SphereSpec::unit(2);
    let f = restrict(&x(3, 0).mul(&x(3, 0)), &s2);
    let c = f.project_component(0);
    assert_eq!(c, SphereFunction::constant(&s2, frac(1, 3)));
    assert_eq!(c.project_component(0), c);
    let total = f.components().fold(SphereFunction::zero(&s2), |acc, (k, _)| acc.add(&f.project_component(k)).unwrap());
    assert!(f.sub(&total).unwrap().is_zero());
}

#[test]
fn resolvent_examples() {
    for d in 1..=6usize {
        let s = SphereSpec::unit(d);
        let lam = int(d as i64);
        let one = SphereFunction::constant(&s, int(1));
        assert_eq!(one.resolvent_shifted(&lam).unwrap(), SphereFunction::constant(&s, frac(-1, d as i64)));
        let x1 = restrict(&x(d + 1, 0), &s);
        assert!(matches!(x1.resolvent_shifted(&lam), Err(Error::ResolventSingular { degree: 1, .. })));
    }
}

#[test]
fn closed_form_inverse_on_coordinate_directions() {
    for d in 1..=6usize {
        let s = SphereSpec::unit(d);
        for i in 0..=d {
            let phi = x(d + 1, i);
            let lhs = restrict(&phi.mul(&phi), &s).resolvent_shifted(&int(d as i64)).unwrap();
            assert_eq!(lhs, closed_form_inverse(&phi, d), "d={d} i={i}");
        }
    }
}

#[test]
fn sphere_mismatch() {
    let a = SphereFunction::constant(&SphereSpec::unit(2), int(1));
    let b = SphereFunction::constant(&SphereSpec::unit(3), int(1));
    assert_eq!(a.l2_inner(&b), Err(Error::SphereMismatch));
    assert!(a.pointwise_multiply(&b).is_err());
}

#[test]
fn gradient_matches_spectral_energy() {
    // ∫|∇f|² = Σ λ_k ∫f_k², checked by quadrature.
    let s = SphereSpec::new(2, frac(9, 4)).unwrap();
    let p = &HomPoly::monomial(vec![2, 1, 0], int(1)) + &HomPoly::monomial(vec![0, 0, 3], frac(1, 2));
    let f = restrict(&p, &s);
    let spectral = to_f64(&f.h_inner(&f, &int(0)).unwrap()) * s.volume_f64();
    let quad = crate::quadrature::quadrature_integrate(|y| f.grad_sq_f64(y), 2, s.radius(), 8).unwrap();
    assert!((spectral - quad).abs() < 1e-10 * spectral.abs());
}

fn arb_linear(n: usize) -> impl Strategy<Value = HomPoly> {
    proptest::collection::vec(-6i64..=6, n)
        .prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
        .prop_map(|v| HomPoly::linear(&v.into_iter().map(int).collect::<Vec<_>>()))
}

fn arb_quadratic_on(d: usize) -> impl Strategy<Value = SphereFunction> {
    let n = d + 1;
    proptest::collection::vec(-4i64..=4, n * n).prop_map(move |cs| {
        let mut p = HomPoly::zero(n, 2);
        for i in 0..n {
            for j in 0..n {
                p = &p + &x(n, i).mul(&x(n, j)).scale(&int(cs[i * n + j]));
            }
        }
        SphereFunction::restrict(&p, &SphereSpec::unit(d)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn closed_form_inverse_for_any_linear_direction(
        (d, phi) in (1usize..=6).prop_flat_map(|d| (Just(d), arb_linear(d + 1)))
    ) {
        let s = SphereSpec::unit(d);
        let lhs = restrict(&phi.mul(&phi), &s).resolvent_shifted(&int(d as i64)).unwrap();
        prop_assert_eq!(lhs, closed_form_inverse(&phi, d));
    }

    #[test]
    fn resolvent_inverts_shifted_laplacian(
        (d, f) in (1usize..=4).prop_flat_map(|d| (Just(d), arb_quadratic_on(d)))
    ) {
        let lam = int(d as i64);
        let u = f.resolvent_shifted(&lam).unwrap();
        let back = u.laplacian().sub(&u.scale(&lam)).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn resolvent_is_linear_and_self_adjoint(
        (f, g) in (1usize..=4).prop_flat_map(|d| (arb_quadratic_on(d), arb_quadratic_on(d))),
        a in -5i64..=5,
    ) {
        let lam = frac(7, 3);
        let rf = f.resolvent_shifted(&lam).unwrap();
        let rg = g.resolvent_shifted(&lam).unwrap();
        prop_assert_eq!(rf.l2_inner(&g).unwrap(), f.l2_inner(&rg).unwrap());
        let combo = f.add(&g.scale(&int(a))).unwrap().resolvent_shifted(&lam).unwrap();
        prop_assert_eq!(combo, rf.add(&rg.scale(&int(a))).unwrap());
    }
}
