//! Homogeneous polynomials with exact rational coefficients on ℝ^{d+1}.
//!
//! The Laplacian follows the geometric sign convention `Δ = -Σ ∂²/∂xᵢ²`,
//! so it is a nonnegative operator and `Δ(x₁²) = -2`.

mod harmonic;
mod moments;

pub use harmonic::{harmonic_decompose, HarmonicDecomp};
pub use moments::{integrate_poly, sphere_moment, MomentValue};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, to_f64, Rational};

/// Exponent multi-index of a monomial.
pub type Exponent = Vec<u32>;

/// Exact homogeneous polynomial. Zero coefficients are never stored, so
/// structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomPoly {
    ambient_dim: usize,
    degree: u32,
    coeffs: BTreeMap<Exponent, Rational>,
}

impl HomPoly {
    pub fn zero(ambient_dim: usize, degree: u32) -> Self {
        HomPoly { ambient_dim, degree, coeffs: BTreeMap::new() }
    }

    pub fn constant(ambient_dim: usize, c: Rational) -> Self {
        let mut p = HomPoly::zero(ambient_dim, 0);
        p.add_term(vec![0; ambient_dim], c);
        p
    }

    pub fn one(ambient_dim: usize) -> Self {
        HomPoly::constant(ambient_dim, Rational::one())
    }

    pub fn monomial(exponent: Exponent, c: Rational) -> Self {
        let degree = exponent.iter().sum();
        let mut p = HomPoly::zero(exponent.len(), degree);
        p.add_term(exponent, c);
        p
    }

    /// The coordinate function `x_i` (zero-based `i`).
    pub fn coordinate(ambient_dim: usize, i: usize) -> Self {
        let mut e = vec![0; ambient_dim];
        e[i] = 1;
        HomPoly::monomial(e, Rational::one())
    }

    /// `Σ cᵢ xᵢ`.
    pub fn linear(coefficients: &[Rational]) -> Self {
        let n = coefficients.len();
        let mut p = HomPoly::zero(n, 1);
        for (i, c) in coefficients.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    /// `|x|^{2j}`.
    pub fn radial_power(ambient_dim: usize, j: u32) -> Self {
        let mut r2 = HomPoly::zero(ambient_dim, 2);
        for i in 0..ambient_dim {
            let mut e = vec![0; ambient_dim];
            e[i] = 2;
            r2.add_term(e, Rational::one());
        }
        let mut acc = HomPoly::one(ambient_dim);
        for _ in 0..j {
            acc = acc.mul(&r2);
        }
        acc
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, exponent: &[u32]) -> Rational {
        self.coeffs.get(exponent).cloned().unwrap_or_else(Rational::zero)
    }

    /// Constant value of a degree-0 polynomial.
    pub fn constant_value(&self) -> Rational {
        self.coeff(&vec![0; self.ambient_dim])
    }

    fn add_term(&mut self, exponent: Exponent, c: Rational) {
        debug_assert_eq!(exponent.len(), self.ambient_dim);
        debug_assert_eq!(exponent.iter().sum::<u32>(), self.degree);
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(exponent) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return HomPoly::zero(self.ambient_dim, self.degree);
        }
        HomPoly {
            ambient_dim: self.ambient_dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Sum of two polynomials of the same degree (a zero operand may carry any degree).
    pub fn try_add(&self, other: &HomPoly) -> Result<HomPoly> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch { left: self.ambient_dim, right: other.ambient_dim });
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.degree != other.degree {
            return Err(Error::InvalidArgument(format!(
                "cannot add homogeneous polynomials of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    /// Exact product. Fails when the ambient dimensions differ.
    pub fn multiply(&self, other: &HomPoly) -> Result<HomPoly> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch { left: self.ambient_dim, right: other.ambient_dim });
        }
        Ok(self.mul(other))
    }

    pub(crate) fn mul(&self, other: &HomPoly) -> HomPoly {
        let mut out = HomPoly::zero(self.ambient_dim, self.degree + other.degree);
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn partial(&self, i: usize) -> HomPoly {
        let mut out = HomPoly::zero(self.ambient_dim, self.degree.saturating_sub(1));
        for (e, c) in &self.coeffs {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, c * int(e[i] as i64));
        }
        out
    }

    /// `Σ ∂²p/∂xᵢ²` (analyst's sign).
    pub(crate) fn sum_second_partials(&self) -> HomPoly {
        let mut out = HomPoly::zero(self.ambient_dim, self.degree.saturating_sub(2));
        for (e, c) in &self.coeffs {
            for i in 0..self.ambient_dim {
                if e[i] < 2 {
                    continue;
                }
                let mut f = e.clone();
                f[i] -= 2;
                out.add_term(f, c * int(e[i] as i64 * (e[i] as i64 - 1)));
            }
        }
        out
    }

    /// Euclidean Laplacian with the geometric sign, `-Σ ∂²p/∂xᵢ²`.
    pub fn laplacian_euclidean(&self) -> HomPoly {
        -self.sum_second_partials()
    }

    pub fn is_harmonic(&self) -> bool {
        self.sum_second_partials().is_zero()
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .map(|(e, c)| {
                let m: f64 = e.iter().zip(x).map(|(&k, &xi)| xi.powi(k as i32)).product();
                to_f64(c) * m
            })
            .sum()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .map(|(e, c)| {
                let mut m = c.clone();
                for (&k, xi) in e.iter().zip(x) {
                    m *= crate::rational::pow(xi, k);
                }
                m
            })
            .fold(Rational::zero(), |a, b| a + b)
    }
}

impl Add for &HomPoly {
    type Output = HomPoly;
    fn add(self, rhs: &HomPoly) -> HomPoly {
        self.try_add(rhs).expect("incompatible polynomial sum")
    }
}

impl Sub for &HomPoly {
    type Output = HomPoly;
    fn sub(self, rhs: &HomPoly) -> HomPoly {
        self + &(-rhs.clone())
    }
}

impl Neg for HomPoly {
    type Output = HomPoly;
    fn neg(mut self) -> HomPoly {
        for v in self.coeffs.values_mut() {
            *v = -v.clone();
        }
        self
    }
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "·x{}", i + 1)?,
                    _ => write!(f, "·x{}^{}", i + 1, k)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn x(n: usize, i: usize) -> HomPoly {
        HomPoly::coordinate(n, i)
    }

    #[test]
    fn monomial_product() {
        let p = x(3, 0).multiply(&x(3, 0)).unwrap();
        assert_eq!(p, HomPoly::monomial(vec![2, 0, 0], int(1)));
    }

    #[test]
    fn product_with_zero_is_zero() {
        let p = &x(3, 0) + &x(3, 1);
        assert!(p.multiply(&HomPoly::zero(3, 4)).unwrap().is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let a = &x(2, 0) + &x(2, 1);
        let b = &x(2, 0) - &x(2, 1);
        let expected = &HomPoly::monomial(vec![2, 0], int(1)) - &HomPoly::monomial(vec![0, 2], int(1));
        assert_eq!(a.multiply(&b).unwrap(), expected);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(matches!(x(2, 0).multiply(&x(3, 0)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn laplacian_sign_convention() {
        let sq = x(4, 0).multiply(&x(4, 0)).unwrap();
        assert_eq!(sq.laplacian_euclidean(), HomPoly::constant(4, int(-2)));
        assert!(x(4, 0).mul(&x(4, 1)).laplacian_euclidean().is_zero());
        for n in 1..=7 {
            assert_eq!(HomPoly::radial_power(n, 1).laplacian_euclidean(), HomPoly::constant(n, int(-2 * n as i64)));
        }
    }

    #[test]
    fn evaluation_agrees() {
        let p = &HomPoly::monomial(vec![2, 1], frac(1, 2)) + &HomPoly::monomial(vec![0, 3], int(-1));
        assert_eq!(p.eval(&[int(2), int(3)]), int(6 - 27));
        assert!((p.eval_f64(&[2.0, 3.0]) + 21.0).abs() < 1e-12);
    }
}
