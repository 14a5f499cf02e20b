use num_traits::Zero;

use super::HomPoly;
use crate::error::{Error, Result};
use crate::rational::{int, pow, Rational};

/// Exact moment of a monomial over a round sphere, stored as a fraction of
/// the total sphere volume.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentValue {
    pub ratio_to_volume: Rational,
    pub total_degree: u32,
}

impl MomentValue {
    /// `∫_{S^d(r)} x^α = ratio · ω_d · r^{d + |α|}`; returns the multiple of `Vol(S^d(r)) = ω_d r^d`.
    pub fn volume_multiple(&self, r_sq: &Rational) -> Rational {
        if self.ratio_to_volume.is_zero() {
            return Rational::zero();
        }
        // nonzero moments have even total degree
        &self.ratio_to_volume * pow(r_sq, self.total_degree / 2)
    }
}

/// Moment of `x^α` over `S^d(1)` divided by `ω_d`.
///
/// The Γ-ratio reduces, for even α, to
/// `∏ (αᵢ-1)!! / ((d+1)(d+3)···(d+|α|-1))`; any odd entry gives zero.
pub fn sphere_moment(alpha: &[u32], d: usize) -> Result<MomentValue> {
    if alpha.len() != d + 1 {
        return Err(Error::IndexLength { got: alpha.len(), expected: d + 1 });
    }
    let total_degree: u32 = alpha.iter().sum();
    if alpha.iter().any(|a| a % 2 == 1) {
        return Ok(MomentValue { ratio_to_volume: Rational::zero(), total_degree });
    }
    let mut num = int(1);
    for &a in alpha {
        let mut k = a as i64 - 1;
        while k > 1 {
            num *= int(k);
            k -= 2;
        }
    }
    let mut den = int(1);
    for k in 0..(total_degree / 2) as i64 {
        den *= int(d as i64 + 1 + 2 * k);
    }
    Ok(MomentValue { ratio_to_volume: num / den, total_degree })
}

/// Exact integral of `p` over `S^d(r)` as a multiple of `Vol(S^d(r))`.
pub fn integrate_poly(p: &HomPoly, d: usize, r_sq: &Rational) -> Result<Rational> {
    if p.ambient_dim() != d + 1 {
        return Err(Error::DimensionMismatch { left: p.ambient_dim(), right: d + 1 });
    }
    let mut total = Rational::zero();
    for (e, c) in p.terms() {
        let m = sphere_moment(e, d)?;
        if !m.ratio_to_volume.is_zero() {
            total += c * m.volume_multiple(r_sq);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, to_f64};
    use statrs::function::gamma::ln_gamma;

    /// Γ-function form of the moment ratio, evaluated in floating point.
    fn gamma_oracle(alpha: &[u32]) -> f64 {
        let n = alpha.len() as f64;
        let betas: Vec<f64> = alpha.iter().map(|&a| (a as f64 + 1.0) / 2.0).collect();
        let ln_num: f64 = betas.iter().map(|&b| ln_gamma(b)).sum::<f64>() - ln_gamma(betas.iter().sum());
        let ln_vol = n * ln_gamma(0.5) - ln_gamma(n / 2.0);
        (ln_num - ln_vol).exp()
    }

    #[test]
    fn total_measure_is_one() {
        for d in 1..=6 {
            assert_eq!(sphere_moment(&vec![0; d + 1], d).unwrap().ratio_to_volume, int(1));
        }
    }

    #[test]
    fn second_moment_on_s2() {
        assert_eq!(sphere_moment(&[2, 0, 0], 2).unwrap().ratio_to_volume, frac(1, 3));
    }

    #[test]
    fn fourth_to_second_moment_ratio() {
        for d in 1..=6usize {
            let mut a4 = vec![0; d + 1];
            a4[0] = 4;
            let mut a2 = vec![0; d + 1];
            a2[0] = 2;
            let r = sphere_moment(&a4, d).unwrap().ratio_to_volume / sphere_moment(&a2, d).unwrap().ratio_to_volume;
            assert_eq!(r, frac(3, d as i64 + 3));
        }
    }

    #[test]
    fn odd_moments_vanish() {
        assert!(sphere_moment(&[3, 0, 2], 2).unwrap().ratio_to_volume.is_zero());
        assert!(sphere_moment(&[1, 1, 0, 0], 3).unwrap().ratio_to_volume.is_zero());
    }

    #[test]
    fn matches_gamma_formula() {
        let cases: &[&[u32]] = &[&[2, 2, 0], &[4, 2, 2], &[6, 0], &[2, 2, 2, 2], &[8, 4, 0, 2, 0], &[0, 0, 0, 0, 0, 0, 10]];
        for alpha in cases {
            let exact = to_f64(&sphere_moment(alpha, alpha.len() - 1).unwrap().ratio_to_volume);
            let oracle = gamma_oracle(alpha);
            assert!((exact - oracle).abs() <= 1e-12 * oracle, "{alpha:?}: {exact} vs {oracle}");
        }
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(sphere_moment(&[2, 0], 2), Err(Error::IndexLength { .. })));
    }

    #[test]
    fn integrate_simple_polynomials() {
        let one = HomPoly::one(3);
        assert_eq!(integrate_poly(&one, 2, &int(1)).unwrap(), int(1));
        let x1_3 = HomPoly::monomial(vec![3, 0, 0], int(1));
        assert!(integrate_poly(&x1_3, 2, &int(1)).unwrap().is_zero());
        let x1_4 = HomPoly::monomial(vec![4, 0, 0], int(1));
        assert_eq!(integrate_poly(&x1_4, 2, &int(1)).unwrap(), frac(1, 5));
        // radius scaling: ∫_{S^2(2)} x1^2 = (1/3)·4·Vol(S^2(2))
        let x1_2 = HomPoly::monomial(vec![2, 0, 0], int(1));
        assert_eq!(integrate_poly(&x1_2, 2, &int(4)).unwrap(), frac(4, 3));
    }
}
