//! The analysis pipeline and its `report.v1` data model.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::energy::{energy_report, EnergyProfile, Regime, RegimeCase};
use crate::error::Result;
use crate::geometry::{c_n, constant_solution, constants, kernel_basis, ProductConfig};
use crate::obstruction::{a4_eval, classify_minimizer, norm_expansion_check, u_kq_exact, Certificate, RayProfile, RayEvaluation, Verdict};
use crate::rational::{frac, Rational};
use crate::series::{glueing_eval, glueing_residual, SeriesExpansion};
use crate::verify::{IdentityCheck, Status};

pub const SCHEMA: &str = "report.v1";
pub const DEFAULT_ORDER: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelInfo {
    pub dim: usize,
    pub basis: Vec<String>,
}

/// Exact quantities are printed as rationals; `u₀` may be irrational.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsInfo {
    pub n: usize,
    pub two_star: String,
    pub c_n: String,
    pub h: String,
    pub u0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u0_exact: Option<String>,
    pub r_sq: String,
    pub lambda1: String,
    pub scalar_curvature: String,
    pub volume: f64,
    /// `ω_0, …, ω_n`.
    pub omega: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct A4Agreement {
    pub direct: f64,
    pub constant_rewrite: f64,
    pub closed_form: f64,
    pub from_series: f64,
    pub max_rel_diff: f64,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionInfo {
    #[serde(rename = "A3_max_abs")]
    pub a3_max_abs: f64,
    #[serde(rename = "A4_min")]
    pub a4_min: f64,
    #[serde(rename = "A4_min_numeric")]
    pub a4_min_numeric: f64,
    pub certificate: Certificate,
    pub second_var_nonneg: bool,
    /// The direction the path comparison is evaluated along.
    pub direction: Vec<String>,
    #[serde(rename = "A4_paths")]
    pub a4_paths: A4Agreement,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesDiagnostics {
    pub order: usize,
    /// `‖P_L‖_{L²(M)}` for `L = 1, …, order`.
    pub norm_decay: Vec<f64>,
    pub decay_ratios: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: String,
    pub config: RunConfig,
    pub order: usize,
    pub seed: u64,
    pub kernel: KernelInfo,
    pub constants: ConstantsInfo,
    pub obstruction: ObstructionInfo,
    pub verdict: Verdict,
    pub regime: Regime,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<EnergyProfile>,
    pub series_diagnostics: SeriesDiagnostics,
    pub identity_suite: Vec<IdentityCheck>,
}

impl AnalysisReport {
    /// Every existence hypothesis verified: a strict local minimizer in an
    /// accepted blow-up regime.
    pub fn hypotheses_verified(&self) -> bool {
        self.verdict == Verdict::StrictLocalMin && self.regime.case != RegimeCase::None
    }

    pub fn failed_identities(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.identity_suite.iter().filter(|c| c.status == Status::Fail)
    }

    /// `0` when the hypotheses are verified, `2` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.hypotheses_verified() {
            0
        } else {
            2
        }
    }
}

pub(crate) fn basis_labels(cfg: &ProductConfig) -> Vec<String> {
    (1..=cfg.sphere.ambient_dim()).map(|i| format!("x{i}")).collect()
}

fn constants_info(cfg: &ProductConfig) -> Result<ConstantsInfo> {
    let n = cfg.n();
    let sol = constant_solution(cfg)?;
    Ok(ConstantsInfo {
        n,
        two_star: cfg.two_star().to_string(),
        c_n: c_n(n).to_string(),
        h: sol.h.to_string(),
        u0: sol.u0,
        u0_exact: cfg.u0_exact().map(|u| u.to_string()),
        r_sq: cfg.sphere.r_sq.to_string(),
        lambda1: cfg.lambda1().to_string(),
        scalar_curvature: cfg.scalar_curvature().to_string(),
        volume: cfg.volume(),
        omega: constants(n)?.omega,
    })
}

fn config_identities(cfg: &ProductConfig, dir: &[Rational], order: usize, series: &SeriesExpansion) -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    let sol = constant_solution(cfg)?;
    out.push(IdentityCheck::close("constant solution h u0 = u0^(2*-1)", 0.0, sol.identity_residual, 1e-12));

    let paths = a4_eval(cfg, dir)?;
    out.push(IdentityCheck::close("A4 path agreement (relative spread)", 0.0, paths.max_rel_diff, 1e-10));
    out.push(IdentityCheck::holds("A4 paths agree exactly", paths.exact.iter().all(|k| *k == paths.exact[0])));

    let top = order.min(6);
    for l in 4..=top {
        for q in 2..=l - 2 {
            out.push(IdentityCheck::exact(
                &format!("u_kq symmetry, k = {}, q = {q}", l - q),
                &u_kq_exact(cfg, series, l - q, q)?,
                &u_kq_exact(cfg, series, q, l - q)?,
            ));
        }
    }

    let norm = norm_expansion_check(cfg, dir, top)?;
    let exact_zero = norm.exact_1.iter().chain(&norm.exact_2).all(|v| *v == 0.0);
    out.push(IdentityCheck::holds(&format!("norm expansion identities, L <= {top} (exact route)"), exact_zero));
    out.push(IdentityCheck::close(&format!("norm expansion identities, L <= {top} (sampled route)"), 0.0, norm.max_residual(), 1e-9));

    let profile = RayProfile::new(cfg, dir, top)?;
    for t in [0.05, -0.05] {
        let r = RayEvaluation::from_profile(cfg, &profile, t)?;
        out.push(IdentityCheck::close(&format!("ray identity for I at t = {t}"), 0.0, r.identity_residual, 1e-8));
    }

    let l = 3;
    let a = glueing_residual(cfg, dir, l, &frac(1, 40))?;
    let b = glueing_residual(cfg, dir, l, &frac(1, 80))?;
    out.push(IdentityCheck::at_least(&format!("glueing residual halving ratio, L = {l}"), 0.9 * 2f64.powi(l as i32 + 1), a / b));
    Ok(out)
}

/// Runs the full pipeline: geometry, kernel, series, obstruction, energy.
///
/// `order` overrides the config's `order`; it must be at least 4.
pub fn analyze(run: &RunConfig, order: Option<usize>, seed: u64) -> Result<AnalysisReport> {
    let order = order.or(run.order).unwrap_or(DEFAULT_ORDER);
    let cfg = run.build()?;
    let kernel = kernel_basis(&cfg)?;
    let dir = run.direction(&cfg)?;
    if dir.iter().all(|a| *a == Rational::from_integer(0.into())) {
        return Err(crate::Error::Config("direction must be nonzero".into()));
    }
    let minimizer = classify_minimizer(&cfg, order, seed)?;
    let paths = a4_eval(&cfg, &dir)?;
    let glue = glueing_eval(&cfg, &dir, order)?;
    let energy = energy_report(&cfg)?;
    let identity_suite = config_identities(&cfg, &dir, order, &glue.series)?;
    Ok(AnalysisReport {
        schema: SCHEMA.to_string(),
        config: run.clone(),
        order,
        seed,
        kernel: KernelInfo { dim: kernel.dim, basis: basis_labels(&cfg) },
        constants: constants_info(&cfg)?,
        obstruction: ObstructionInfo {
            a3_max_abs: minimizer.a3_max_abs,
            a4_min: minimizer.a4_min,
            a4_min_numeric: minimizer.a4_min_numeric,
            certificate: minimizer.certificate,
            second_var_nonneg: minimizer.second_var_nonneg,
            direction: dir.iter().map(|a| a.to_string()).collect(),
            a4_paths: A4Agreement {
                direct: paths.direct,
                constant_rewrite: paths.constant_rewrite,
                closed_form: paths.closed_form,
                from_series: paths.from_series,
                max_rel_diff: paths.max_rel_diff,
                exact: paths.exact.iter().all(|k| *k == paths.exact[0]),
            },
        },
        verdict: minimizer.verdict,
        regime: energy.regime,
        profile: energy.profile,
        series_diagnostics: SeriesDiagnostics { order, decay_ratios: glue.decay_ratios(), norm_decay: glue.norm_decay },
        identity_suite,
    })
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.6e}")).collect::<Vec<_>>().join(", ")
}

fn write_regime(out: &mut String, regime: &Regime, profile: Option<&EnergyProfile>) -> fmt::Result {
    writeln!(out, "regime: {:?} (kappa = {})", regime.case, regime.kappa)?;
    if let Some(f0) = regime.f0 {
        writeln!(out, "  F0 = {f0}")?;
    }
    if let Some(reason) = &regime.reason {
        writeln!(out, "  reason: {reason}")?;
    }
    if let Some(p) = profile {
        writeln!(out, "profile: t* = {}, window [{}, {}]", p.t_star, p.a, p.b)?;
    }
    Ok(())
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.constants;
        let o = &self.obstruction;
        let mut out = String::new();
        writeln!(out, "{} (order {}, seed {})", self.schema, self.order, self.seed)?;
        writeln!(out, "n = {}, 2* = {}, c_n = {}, h = {}, u0 = {}", c.n, c.two_star, c.c_n, c.h, c.u0)?;
        writeln!(out, "sphere factor: d = {}, r^2 = {}, lambda1 = {}", self.config.sphere.d, c.r_sq, c.lambda1)?;
        writeln!(out, "kernel: dim {} spanned by {}", self.kernel.dim, self.kernel.basis.join(", "))?;
        writeln!(out, "A3 max |coefficient| = {}", o.a3_max_abs)?;
        writeln!(out, "A4 min on unit sphere = {} ({:?}; numeric {})", o.a4_min, o.certificate, o.a4_min_numeric)?;
        let p = &o.a4_paths;
        writeln!(
            out,
            "A4 along ({}): direct {}, rewrite {}, closed form {}, series {}, spread {:e}",
            o.direction.join(", "),
            p.direct,
            p.constant_rewrite,
            p.closed_form,
            p.from_series,
            p.max_rel_diff
        )?;
        writeln!(out, "verdict: {:?}", self.verdict)?;
        write_regime(&mut out, &self.regime, self.profile.as_ref())?;
        writeln!(out, "norm decay: {}", join(&self.series_diagnostics.norm_decay))?;
        writeln!(out, "identities:")?;
        for check in &self.identity_suite {
            writeln!(out, "  {check}")?;
        }
        f.write_str(out.trim_end())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicComponent {
    pub degree: u32,
    pub polynomial: String,
}

/// `P_L = u₀^{u0_power} · Σ components`, restricted to the sphere factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesTermInfo {
    pub order: usize,
    pub u0_power: i32,
    pub components: Vec<HarmonicComponent>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub schema: String,
    pub config: RunConfig,
    pub order: usize,
    pub direction: Vec<String>,
    pub u0: f64,
    pub terms: Vec<SeriesTermInfo>,
    pub norm_decay: Vec<f64>,
}

pub fn series_report(run: &RunConfig, order: usize) -> Result<SeriesReport> {
    let cfg = run.build()?;
    let dir = run.direction(&cfg)?;
    let glue = glueing_eval(&cfg, &dir, order)?;
    let terms = (1..=order)
        .map(|l| SeriesTermInfo {
            order: l,
            u0_power: 1 - l as i32,
            components: glue
                .series
                .shape(l as u32)
                .components()
                .map(|(k, p)| HarmonicComponent { degree: k, polynomial: p.to_string() })
                .collect(),
        })
        .collect();
    Ok(SeriesReport {
        schema: SCHEMA.to_string(),
        config: run.clone(),
        order,
        direction: dir.iter().map(|a| a.to_string()).collect(),
        u0: cfg.u0(),
        terms,
        norm_decay: glue.norm_decay,
    })
}

impl fmt::Display for SeriesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} series to order {} along ({}), u0 = {}", self.schema, self.order, self.direction.join(", "), self.u0)?;
        for t in &self.terms {
            writeln!(f, "P_{} = u0^{} * [", t.order, t.u0_power)?;
            for c in &t.components {
                writeln!(f, "  degree {}: {}", c.degree, c.polynomial)?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "norm decay: {}", join(&self.norm_decay))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergySummary {
    pub schema: String,
    pub config: RunConfig,
    pub n: usize,
    pub u0: f64,
    pub regime: Regime,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<EnergyProfile>,
}

pub fn energy_summary(run: &RunConfig) -> Result<EnergySummary> {
    let cfg = run.build()?;
    let energy = energy_report(&cfg)?;
    Ok(EnergySummary {
        schema: SCHEMA.to_string(),
        config: run.clone(),
        n: cfg.n(),
        u0: cfg.u0(),
        regime: energy.regime,
        profile: energy.profile,
    })
}

impl fmt::Display for EnergySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        writeln!(out, "{} energy, n = {}, u0 = {}", self.schema, self.n, self.u0)?;
        write_regime(&mut out, &self.regime, self.profile.as_ref())?;
        f.write_str(out.trim_end())
    }
}
