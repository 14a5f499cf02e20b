use super::HomPoly;
use crate::rational::{int, Rational};

/// `p = Σ_j |x|^{2j} h_{m-2j}` with every `h` Euclidean-harmonic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicDecomp {
    ambient_dim: usize,
    degree: u32,
    /// `(j, h)` pairs with `h` harmonic of degree `degree - 2j`; zero parts omitted.
    pub parts: Vec<(u32, HomPoly)>,
}

impl HarmonicDecomp {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn part(&self, j: u32) -> Option<&HomPoly> {
        self.parts.iter().find(|(i, _)| *i == j).map(|(_, h)| h)
    }

    pub fn reconstruct(&self) -> HomPoly {
        self.parts.iter().fold(HomPoly::zero(self.ambient_dim, self.degree), |acc, (j, h)| {
            &acc + &HomPoly::radial_power(self.ambient_dim, *j).mul(h)
        })
    }
}

/// `Δ_a^j(|x|^{2j} h) = c · h` for `h` harmonic of degree `k`, where `Δ_a = Σ∂²`.
fn radial_coefficient(ambient_dim: usize, j: u32, k: u32) -> Rational {
    let n = ambient_dim as i64;
    (1..=j as i64).fold(int(1), |acc, i| acc * int(2 * i * (2 * i + n - 2 + 2 * k as i64)))
}

/// Exact and unique decomposition into radial powers times harmonics.
///
/// Works top-down in `j`: `Δ^j` annihilates every `|x|^{2i} h` with `i < j`,
/// so once the parts with index above `j` are subtracted, `Δ^j` of the
/// remainder is a known multiple of `h_{m-2j}`.
pub fn harmonic_decompose(p: &HomPoly) -> HarmonicDecomp {
    let n = p.ambient_dim();
    let m = p.degree();
    let mut remaining = p.clone();
    let mut parts = Vec::new();
    if p.is_zero() {
        return HarmonicDecomp { ambient_dim: n, degree: m, parts };
    }
    for j in (0..=m / 2).rev() {
        let k = m - 2 * j;
        let mut lap = remaining.clone();
        for _ in 0..j {
            lap = lap.sum_second_partials();
        }
        if lap.is_zero() {
            continue;
        }
        let h = lap.scale(&(int(1) / radial_coefficient(n, j, k)));
        remaining = &remaining - &HomPoly::radial_power(n, j).mul(&h);
        parts.push((j, h));
    }
    debug_assert!(remaining.is_zero());
    parts.sort_by_key(|(j, _)| *j);
    HarmonicDecomp { ambient_dim: n, degree: m, parts }
}

impl HomPoly {
    /// Harmonic part of highest degree (`j = 0` in the decomposition).
    pub fn harmonic_projection(&self) -> HomPoly {
        harmonic_decompose(self)
            .part(0)
            .cloned()
            .unwrap_or_else(|| HomPoly::zero(self.ambient_dim(), self.degree()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::rational::frac;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn monomials(n: usize, m: u32) -> Vec<Vec<u32>> {
        if n == 1 {
            return vec![vec![m]];
        }
        let mut out = Vec::new();
        for a in 0..=m {
            for mut rest in monomials(n - 1, m - a) {
                rest.insert(0, a);
                out.push(rest);
            }
        }
        out
    }

    /// Gaussian elimination over ℚ; returns x with A x = b.
    fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
        let n = b.len();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("singular");
            a.swap(col, piv);
            b.swap(col, piv);
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = &a[r][col] / &a[col][col];
                    for c in col..n {
                        let v = &f * &a[col][c];
                        a[r][c] -= v;
                    }
                    let v = &f * &b[col];
                    b[r] -= v;
                }
            }
        }
        (0..n).map(|i| &b[i] / &a[i][i]).collect()
    }

    /// Dense-linear-algebra oracle: find q with Δ(p - |x|² q) = 0 by solving
    /// the linear system on the coefficient space of degree m-2, then recurse.
    fn decompose_by_linear_solve(p: &HomPoly) -> BTreeMap<u32, HomPoly> {
        let n = p.ambient_dim();
        let m = p.degree();
        let mut out = BTreeMap::new();
        if m < 2 {
            if !p.is_zero() {
                out.insert(0, p.clone());
            }
            return out;
        }
        let basis = monomials(n, m - 2);
        let r2 = HomPoly::radial_power(n, 1);
        let images: Vec<HomPoly> = basis
            .iter()
            .map(|e| r2.mul(&HomPoly::monomial(e.clone(), int(1))).sum_second_partials())
            .collect();
        let rhs_poly = p.sum_second_partials();
        let a: Vec<Vec<Rational>> =
            basis.iter().map(|row| images.iter().map(|img| img.coeff(row)).collect()).collect();
        let b: Vec<Rational> = basis.iter().map(|row| rhs_poly.coeff(row)).collect();
        let sol = solve(a, b);
        let q = basis
            .iter()
            .zip(sol)
            .fold(HomPoly::zero(n, m - 2), |acc, (e, c)| &acc + &HomPoly::monomial(e.clone(), c));
        let h = p - &r2.mul(&q);
        if !h.is_zero() {
            out.insert(0, h);
        }
        for (j, part) in decompose_by_linear_solve(&q) {
            out.insert(j + 1, part);
        }
        out
    }

    #[test]
    fn degree_one_is_harmonic() {
        let x1 = HomPoly::coordinate(3, 0);
        let dec = harmonic_decompose(&x1);
        assert_eq!(dec.parts, vec![(0, x1)]);
    }

    #[test]
    fn square_of_coordinate() {
        for n in 2..=7usize {
            let x1 = HomPoly::coordinate(n, 0);
            let sq = x1.mul(&x1);
            let dec = harmonic_decompose(&sq);
            let expected_h = &sq - &HomPoly::radial_power(n, 1).scale(&frac(1, n as i64));
            assert_eq!(dec.part(0), Some(&expected_h));
            assert_eq!(dec.part(1), Some(&HomPoly::constant(n, frac(1, n as i64))));
            assert_eq!(decompose_by_linear_solve(&sq).get(&0), Some(&expected_h));
        }
    }

    #[test]
    fn pure_radial() {
        let dec = harmonic_decompose(&HomPoly::radial_power(4, 1));
        assert_eq!(dec.parts, vec![(1, HomPoly::one(4))]);
    }

    #[test]
    fn agrees_with_linear_solve_oracle() {
        let n = 3;
        for m in 0..=6u32 {
            for (idx, e) in monomials(n, m).into_iter().enumerate() {
                let mut p = HomPoly::monomial(e, int(idx as i64 + 1));
                if m % 2 == 0 {
                    p = &p + &HomPoly::radial_power(n, m / 2).scale(&frac(1, 3));
                }
                let ours: BTreeMap<u32, HomPoly> = harmonic_decompose(&p).parts.into_iter().collect();
                assert_eq!(ours, decompose_by_linear_solve(&p), "m={m}");
            }
        }
    }

    fn arb_poly(n: usize, m: u32) -> impl Strategy<Value = HomPoly> {
        let basis = monomials(n, m);
        let len = basis.len();
        proptest::collection::vec(-5i64..=5, len).prop_map(move |cs| {
            basis.iter().zip(cs).fold(HomPoly::zero(n, m), |acc, (e, c)| &acc + &HomPoly::monomial(e.clone(), int(c)))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn reconstruct_is_identity(p in (2usize..=4, 0u32..=12).prop_flat_map(|(n, m)| arb_poly(n, m))) {
            let dec = harmonic_decompose(&p);
            prop_assert_eq!(dec.reconstruct(), p.clone());
            for (j, h) in &dec.parts {
                prop_assert!(h.is_harmonic());
                prop_assert_eq!(h.degree(), p.degree() - 2 * j);
            }
        }
    }
}
