//! Blow-up regime and the reduced bubble energy profile.
//!
//! At first order in the subcritical defect `ε`, the energy of `u₀` plus a
//! bubble with rescaled concentration parameter `t` reduces, up to a
//! positive factor, to `Ψ(t) = ((n-2)²/4) ln(1/t) + F₀ t^{(n-2)/2}`. `Ψ` has
//! a unique critical point exactly when `F₀ > 0`, which every admissible
//! regime guarantees.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{c_n, omega, ProductConfig};
use crate::rational::to_f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeCase {
    LowDim,
    Dim6SignChanging,
    Dim6Positive,
    YamabeDim3to9,
    YamabeDim10Weyl,
    #[serde(rename = "LCFYamabe")]
    LcfYamabe,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub case: RegimeCase,
    pub kappa: i8,
    #[serde(rename = "F0")]
    pub f0: Option<f64>,
    /// Why no case applies, when `case` is `None`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// The scalar data the regime tests depend on.
#[derive(Clone, Debug, PartialEq)]
pub struct RegimeInput {
    pub n: usize,
    pub kappa: i8,
    pub u0: f64,
    /// `h - c_n R_g`.
    pub h_minus_cnr: f64,
    /// `h ≡ c_n R_g`, decided exactly when the input comes from a config.
    pub yamabe: bool,
    pub weyl_sq: Option<f64>,
    pub lcf: bool,
}

impl RegimeInput {
    pub fn from_config(cfg: &ProductConfig) -> Self {
        let cnr = c_n(cfg.n()) * cfg.scalar_curvature();
        let diff = cfg.h() - cnr;
        RegimeInput {
            n: cfg.n(),
            kappa: cfg.kappa,
            u0: cfg.u0(),
            h_minus_cnr: to_f64(&diff),
            yamabe: diff == crate::rational::int(0),
            weyl_sq: cfg.weyl_sq,
            lcf: cfg.lcf,
        }
    }
}

/// `2ⁿ ω_{n-1} / ((n(n-2))^{(n-2)/4} ω_n)`.
pub fn universal_coefficient(n: usize) -> f64 {
    let ratio = omega(n - 1).to_f64() / omega(n).to_f64();
    let nf = n as f64;
    2f64.powi(n as i32) * ratio / (nf * (nf - 2.0)).powf((nf - 2.0) / 4.0)
}

/// `F(0,ξ)` for constant data.
pub fn f0_eval(input: &RegimeInput) -> f64 {
    let n = input.n;
    let nf = n as f64;
    let mut f = -(input.kappa as f64) * universal_coefficient(n) * input.u0;
    if n == 6 {
        f += 2.0 * (nf - 1.0) / ((nf - 2.0) * (nf - 4.0)) * input.h_minus_cnr;
    }
    if n == 10 && input.yamabe {
        f -= input.weyl_sq.unwrap_or(0.0) / (24.0 * (nf - 4.0) * (nf - 6.0));
    }
    f
}

fn none(kappa: i8, reason: impl Into<String>) -> Regime {
    Regime { case: RegimeCase::None, kappa, f0: None, reason: Some(reason.into()) }
}

pub fn classify_regime_data(input: &RegimeInput) -> Result<Regime> {
    let n = input.n;
    let kappa = input.kappa;
    let case = if kappa > 0 {
        if n == 6 && input.h_minus_cnr > 2.0 * input.u0 && input.u0 > 0.0 {
            RegimeCase::Dim6Positive
        } else {
            return Ok(none(kappa, "κ = +1 needs n = 6 and h - c₆R_g > 2u₀ > 0"));
        }
    } else if (3..=5).contains(&n) {
        RegimeCase::LowDim
    } else if n == 6 && -input.h_minus_cnr < 2.0 * input.u0 {
        RegimeCase::Dim6SignChanging
    } else if input.yamabe && (3..=9).contains(&n) {
        RegimeCase::YamabeDim3to9
    } else if input.yamabe && n == 10 && !input.lcf {
        let weyl = input.weyl_sq.ok_or_else(|| {
            Error::InvalidArgument("the n = 10 Yamabe regime needs |Weyl|² (weyl_sq)".into())
        })?;
        if input.u0 > 5.0 / 567.0 * weyl {
            RegimeCase::YamabeDim10Weyl
        } else {
            return Ok(none(kappa, format!("n = 10 needs u₀ > (5/567)|Weyl|², got u₀ = {}, |Weyl|² = {weyl}", input.u0)));
        }
    } else if input.yamabe && input.lcf {
        RegimeCase::LcfYamabe
    } else if n == 6 {
        return Ok(none(kappa, "n = 6 needs c₆R_g - h < 2u₀"));
    } else {
        return Ok(none(kappa, format!("n = {n} needs h ≡ c_n R_g (and local conformal flatness when n > 10)")));
    };
    let f0 = f0_eval(input);
    if !(f0 > 0.0) {
        return Err(Error::Consistency(format!("regime {case:?} accepted but F(0,ξ) = {f0} is not positive")));
    }
    Ok(Regime { case, kappa, f0: Some(f0), reason: None })
}

pub fn classify_regime(cfg: &ProductConfig) -> Result<Regime> {
    classify_regime_data(&RegimeInput::from_config(cfg))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyProfile {
    pub n: usize,
    #[serde(rename = "F0")]
    pub f0: f64,
    pub t_star: f64,
    pub a: f64,
    pub b: f64,
}

impl EnergyProfile {
    pub fn psi(&self, t: f64) -> f64 {
        psi(t, self.n, self.f0)
    }

    pub fn psi_prime(&self, t: f64) -> f64 {
        let nf = self.n as f64;
        -(nf - 2.0).powi(2) / (4.0 * t) + self.f0 * (nf - 2.0) / 2.0 * t.powf((nf - 4.0) / 2.0)
    }

    pub fn psi_second(&self, t: f64) -> f64 {
        let nf = self.n as f64;
        (nf - 2.0).powi(2) / (4.0 * t * t) + self.f0 * (nf - 2.0) * (nf - 4.0) / 4.0 * t.powf((nf - 6.0) / 2.0)
    }
}

/// `Ψ(t) = ((n-2)²/4) ln(1/t) + F₀ t^{(n-2)/2}`.
pub fn psi(t: f64, n: usize, f0: f64) -> f64 {
    let nf = n as f64;
    (nf - 2.0).powi(2) / 4.0 * (1.0 / t).ln() + f0 * t.powf((nf - 2.0) / 2.0)
}

pub fn profile_and_window(n: usize, f0: f64) -> Result<EnergyProfile> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("dimension n = {n} must be at least 3")));
    }
    if !(f0 > 0.0 && f0.is_finite()) {
        return Err(Error::InvalidArgument(format!("F₀ must be positive, got {f0}")));
    }
    let nf = n as f64;
    let t_star = ((nf - 2.0) / (2.0 * f0)).powf(2.0 / (nf - 2.0));
    Ok(EnergyProfile { n, f0, t_star, a: t_star / 2.0, b: 2.0 * t_star })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    pub eps1: f64,
    pub eps2: f64,
}

/// The error rates `ε₁(δ)` and `ε₂(δ)` of the bubble ansatz.
pub fn rate_functions(n: usize, delta: f64) -> Result<Rates> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("dimension n = {n} must be at least 3")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("δ must lie in (0,1), got {delta}")));
    }
    let nf = n as f64;
    let log = (1.0 / delta).ln();
    let eps1 = match n {
        3..=5 => delta.powf((nf - 2.0) / 2.0),
        6 => delta * delta * log.powf(2.0 / 3.0),
        _ => delta.powf((nf + 2.0) / 4.0),
    };
    let eps2 = match n {
        3 => delta,
        4 => delta * delta * log,
        _ => delta.powf(nf / 2.0),
    };
    Ok(Rates { eps1, eps2 })
}

/// Regime plus, when a regime applies, the profile constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub regime: Regime,
    pub profile: Option<EnergyProfile>,
}

pub fn energy_report(cfg: &ProductConfig) -> Result<EnergyReport> {
    let regime = classify_regime(cfg)?;
    let profile = match regime.f0 {
        Some(f0) => Some(profile_and_window(cfg.n(), f0)?),
        None => None,
    };
    Ok(EnergyReport { regime, profile })
}
