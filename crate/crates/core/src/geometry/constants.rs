use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{factorial, frac, int, pow, to_f64, Rational};

/// A real number of the form `coeff · π^pi_power` with rational `coeff`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiMultiple {
    pub coeff: Rational,
    pub pi_power: u32,
}

impl PiMultiple {
    pub fn rational(coeff: Rational) -> Self {
        PiMultiple { coeff, pi_power: 0 }
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.coeff) * std::f64::consts::PI.powi(self.pi_power as i32)
    }

    pub fn mul(&self, other: &PiMultiple) -> PiMultiple {
        PiMultiple { coeff: &self.coeff * &other.coeff, pi_power: self.pi_power + other.pi_power }
    }

    pub fn scale(&self, c: &Rational) -> PiMultiple {
        PiMultiple { coeff: &self.coeff * c, pi_power: self.pi_power }
    }
}

impl Serialize for PiMultiple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_power {
            0 => write!(f, "{}", self.coeff),
            1 => write!(f, "{}·π", self.coeff),
            k => write!(f, "{}·π^{}", self.coeff, k),
        }
    }
}

/// Volume `ω_k` of the unit sphere `S^k ⊂ ℝ^{k+1}`.
///
/// `ω_k = 2π^{(k+1)/2}/Γ((k+1)/2)`. For odd `k = 2m-1` this is
/// `2π^m/(m-1)!`; for even `k = 2m` the half-integer Γ gives
/// `2^{2m+1} m! π^m/(2m)!`.
pub fn omega(k: usize) -> PiMultiple {
    if k % 2 == 1 {
        let m = (k as u32 + 1) / 2;
        PiMultiple { coeff: int(2) / factorial(m - 1), pi_power: m }
    } else {
        let m = k as u32 / 2;
        PiMultiple { coeff: pow(&int(2), 2 * m + 1) * factorial(m) / factorial(2 * m), pi_power: m }
    }
}

/// Dimension constants attached to `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionConstants {
    pub n: usize,
    pub two_star: f64,
    pub c_n: f64,
    /// `ω_0, …, ω_n` in floating point.
    pub omega: Vec<f64>,
}

/// `2★ = 2n/(n-2)`.
pub fn two_star(n: usize) -> Rational {
    frac(2 * n as i64, n as i64 - 2)
}

/// `c_n = (n-2)/(4(n-1))`.
pub fn c_n(n: usize) -> Rational {
    frac(n as i64 - 2, 4 * (n as i64 - 1))
}

pub fn constants(n: usize) -> Result<DimensionConstants> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("dimension n = {n} must be at least 3")));
    }
    Ok(DimensionConstants {
        n,
        two_star: to_f64(&two_star(n)),
        c_n: to_f64(&c_n(n)),
        omega: (0..=n).map(|k| omega(k).to_f64()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma;
    use std::f64::consts::PI;

    #[test]
    fn n6_constants() {
        assert_eq!(two_star(6), int(3));
        assert_eq!(c_n(6), frac(1, 5));
        assert!(constants(2).is_err());
    }

    #[test]
    fn small_sphere_volumes() {
        assert_eq!(omega(0), PiMultiple { coeff: int(2), pi_power: 0 });
        assert_eq!(omega(1), PiMultiple { coeff: int(2), pi_power: 1 });
        assert_eq!(omega(2), PiMultiple { coeff: int(4), pi_power: 1 });
        assert_eq!(omega(5), PiMultiple { coeff: int(1), pi_power: 3 });
        assert_eq!(omega(6), PiMultiple { coeff: frac(16, 15), pi_power: 3 });
    }

    #[test]
    fn matches_gamma_function() {
        for k in 0..=12usize {
            let s = (k as f64 + 1.0) / 2.0;
            let oracle = 2.0 * PI.powf(s) / gamma(s);
            assert!((omega(k).to_f64() - oracle).abs() < 1e-13 * oracle, "k={k}");
        }
    }
}
