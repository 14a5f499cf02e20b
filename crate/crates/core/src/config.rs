//! TOML run configuration.
//!
//! ```toml
//! mode = "product"        # product | yamabe | custom
//! kappa = -1
//! order = 6
//!
//! [sphere]
//! d = 2
//! r = "1"                 # or r_sq = "3/2"; derived in yamabe mode
//!
//! [factor2]
//! dim = 2
//! volume = "7"            # rational, optionally times pi or pi^k
//! lambda1 = "3"
//! scalar_curvature = "1"
//! ```
//!
//! A round sphere factor can be given as `factor2 = { dim = 2, sphere_r = "1" }`
//! instead of its spectral data, and `dim = 0` is the point factor.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    check_gap, yamabe_product, AbstractFactor, HMode, PiMultiple, ProductConfig, HYP_GAP, HYP_KERNEL, HYP_YAMABE_FACTOR,
};
use crate::rational::{exact_sqrt, int, parse_rational, Rational};
use crate::spectral::SphereSpec;

/// A number given either as a TOML number or as a string such as `"3/2"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            Number::Int(i) => Ok(int(*i)),
            Number::Float(x) => parse_rational(&x.to_string()),
            Number::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereSection {
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_sq: Option<Number>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSection {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda1: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar_curvature: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sphere_r: Option<Number>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Product,
    Yamabe,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default = "default_kappa")]
    pub kappa: i8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weyl_sq: Option<f64>,
    #[serde(default)]
    pub lcf: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    /// Kernel direction for the series and ray diagnostics; `e₁` by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<Number>>,
    pub sphere: SphereSection,
    pub factor2: FactorSection,
}

fn default_mode() -> Mode {
    Mode::Product
}

fn default_kappa() -> i8 {
    -1
}

/// `"4*pi"`, `"8/3 pi^2"`, `"7"`.
pub fn parse_pi_multiple(s: &str) -> Result<PiMultiple> {
    let t = s.trim().to_lowercase();
    let Some(idx) = t.find("pi") else {
        return Ok(PiMultiple::rational(parse_rational(&t)?));
    };
    let head = t[..idx].trim().trim_end_matches('*').trim();
    let tail = t[idx + 2..].trim();
    let coeff = if head.is_empty() { int(1) } else { parse_rational(head)? };
    let power = if tail.is_empty() {
        1
    } else {
        let e = tail.strip_prefix('^').ok_or_else(|| Error::Config(format!("cannot read volume {s:?}")))?;
        e.trim().parse::<u32>().map_err(|_| Error::Config(format!("cannot read the power of pi in {s:?}")))?
    };
    Ok(PiMultiple { coeff, pi_power: power })
}

impl RunConfig {
    /// Parses a config; syntax and schema errors are prefixed `line:column:`.
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let msg = e.message().trim().to_string();
            match e.span() {
                Some(span) => {
                    let (line, col) = line_col(text, span.start);
                    Error::Config(format!("{line}:{col}: {msg}"))
                }
                None => Error::Config(msg),
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}:{m}", path.display())),
            other => other,
        })
    }

    fn factor(&self) -> Result<AbstractFactor> {
        let f = &self.factor2;
        if f.dim == 0 {
            return Ok(AbstractFactor::point());
        }
        if let Some(r) = &f.sphere_r {
            let r = r.to_rational()?;
            return AbstractFactor::round_sphere(f.dim, &r * &r);
        }
        fn need<'a>(v: &'a Option<Number>, key: &str) -> Result<&'a Number> {
            v.as_ref().ok_or_else(|| Error::Config(format!("factor2.{key} is required unless factor2.sphere_r is given")))
        }
        let volume = parse_pi_multiple(f.volume.as_deref().ok_or_else(|| Error::Config("factor2.volume is required".into()))?)?;
        AbstractFactor::new(
            f.dim,
            volume,
            need(&f.lambda1, "lambda1")?.to_rational()?,
            need(&f.scalar_curvature, "scalar_curvature")?.to_rational()?,
        )
    }

    fn r_sq(&self) -> Result<Option<Rational>> {
        match (&self.sphere.r, &self.sphere.r_sq) {
            (Some(_), Some(_)) => Err(Error::Config("give either sphere.r or sphere.r_sq, not both".into())),
            (Some(r), None) => {
                let r = r.to_rational()?;
                Ok(Some(&r * &r))
            }
            (None, Some(q)) => Ok(Some(q.to_rational()?)),
            (None, None) => Ok(None),
        }
    }

    pub fn build(&self) -> Result<ProductConfig> {
        let factor = self.factor()?;
        let r_sq = self.r_sq()?;
        let mut cfg = match self.mode {
            Mode::Yamabe => {
                let cfg = yamabe_product(&factor, self.sphere.d)?;
                if let Some(r_sq) = r_sq {
                    if r_sq != cfg.sphere.r_sq {
                        return Err(Error::Config(format!(
                            "yamabe mode fixes sphere r² = {}, but the config gives {r_sq}",
                            cfg.sphere.r_sq
                        )));
                    }
                }
                cfg
            }
            Mode::Product | Mode::Custom => {
                let r_sq = r_sq.ok_or_else(|| Error::Config("sphere.r or sphere.r_sq is required".into()))?;
                let h_mode = match (self.mode, &self.h) {
                    (Mode::Custom, Some(h)) => HMode::Custom(h.to_rational()?),
                    (Mode::Custom, None) => return Err(Error::Config("custom mode needs h".into())),
                    (_, Some(_)) => return Err(Error::Config("h is only read in custom mode".into())),
                    _ => HMode::ProductDefault,
                };
                ProductConfig::new(SphereSpec::new(self.sphere.d, r_sq)?, factor, self.kappa, h_mode, self.weyl_sq, self.lcf)?
            }
        };
        if self.mode == Mode::Yamabe {
            cfg = ProductConfig::new(cfg.sphere, cfg.factor2, self.kappa, cfg.h_mode, self.weyl_sq, self.lcf)?;
        }
        check_gap(&cfg)?;
        Ok(cfg)
    }

    pub fn direction(&self, cfg: &ProductConfig) -> Result<Vec<Rational>> {
        let m = cfg.sphere.ambient_dim();
        match &self.direction {
            None => Ok((0..m).map(|i| if i == 0 { int(1) } else { int(0) }).collect()),
            Some(v) => {
                if v.len() != m {
                    return Err(Error::Config(format!("direction has {} entries, the kernel has dimension {m}", v.len())));
                }
                v.iter().map(Number::to_rational).collect()
            }
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

/// 1-based line where `key` is set inside `[section]`, or at the top level
/// when `section` is empty. Inline tables are matched on their own line.
pub fn key_line(text: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = name.trim().to_string();
            continue;
        }
        let Some((lhs, rhs)) = line.split_once('=') else { continue };
        let lhs = lhs.trim();
        if current == section && lhs == key {
            return Some(i + 1);
        }
        if current.is_empty() && !section.is_empty() && lhs == section && rhs.contains(key) {
            return Some(i + 1);
        }
    }
    None
}

/// Line holding the first `"…"`-quoted value of an error message.
fn quoted_value_line(text: &str, msg: &str) -> Option<usize> {
    let start = msg.find('"')? + 1;
    let len = msg[start..].find('"')?;
    let needle = format!("\"{}\"", &msg[start..start + len]);
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

/// The config line a precondition failure points at, if any.
pub fn error_line(text: &str, err: &Error) -> Option<usize> {
    let hypothesis = match err {
        Error::Hypothesis { hypothesis, .. } => *hypothesis,
        Error::InvalidArgument(m) | Error::Config(m) => return quoted_value_line(text, m),
        _ => return None,
    };
    let candidates: &[(&str, &str)] = match hypothesis {
        HYP_GAP => &[("factor2", "lambda1"), ("factor2", "sphere_r"), ("sphere", "r"), ("sphere", "r_sq")],
        HYP_YAMABE_FACTOR => &[("factor2", "scalar_curvature"), ("factor2", "sphere_r"), ("factor2", "dim")],
        HYP_KERNEL => &[("", "h"), ("", "mode"), ("sphere", "r"), ("sphere", "r_sq")],
        _ => &[],
    };
    candidates.iter().find_map(|(s, k)| key_line(text, s, k))
}

/// `r` when it is rational, for display.
pub fn exact_radius(cfg: &ProductConfig) -> Option<Rational> {
    exact_sqrt(&cfg.sphere.r_sq)
}
