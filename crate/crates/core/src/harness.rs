//! Command implementations behind the `wlp` binary, experiment sweeps and
//! their CSV/JSON reports.
//!
//! Exit codes: 0 when the property under test is certified, 2 when it is
//! not (suspected or certified failure, or a singular hypersurface), 1 on
//! input errors.
//!
//! Seeds for a sweep are split as
//! `cell = derive_seed(derive_seed(root, n), d)`,
//! `instance = derive_seed(cell, k)`; an instance seed then determines the
//! generators (`derive_seed(instance, i)`) and the trial linear forms
//! (`derive_seed(derive_seed(instance, u64::MAX), j)`), so
//! `wlp check --random n d --seed <instance>` reruns a single instance.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{registry, wlp_ranges, BoundReport, BoundsError, IntInterval, Scope};
use crate::engine::{
    Analysis, Certification, CiCertificate, EngineConfig, EngineError, FullWlpReport,
};
use crate::field::{Field, FieldError, PrimeField, RationalField, MERSENNE_61};
use crate::jacobian::{jacobian_report, Hypersurface, JacobianError, JacobianReport};
use crate::poly::{derive_seed, parse_form, CiSpec, PolyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Poly(#[from] PolyError),
    #[error("{0}")]
    Engine(#[from] EngineError),
    #[error("{0}")]
    Bounds(#[from] BoundsError),
    #[error("{0}")]
    Jacobian(#[from] JacobianError),
    #[error("{0}")]
    Field(#[from] FieldError),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("cannot parse config: {0}")]
    ConfigSyntax(#[from] toml::de::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    /// Byte offset into the offending generator text, for parse errors.
    pub fn offset(&self) -> Option<usize> {
        match self {
            HarnessError::Poly(PolyError::Parse(p)) => p.offset(),
            HarnessError::Jacobian(JacobianError::Poly(PolyError::Parse(p))) => p.offset(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Prime,
    Rational,
}

/// Field selection shared by all commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FieldChoice {
    pub kind: FieldKind,
    pub prime: u64,
}

impl Default for FieldChoice {
    fn default() -> Self {
        FieldChoice {
            kind: FieldKind::Prime,
            prime: MERSENNE_61,
        }
    }
}

impl FieldChoice {
    /// Field used to draw random coefficients: `F_p` itself, or the default
    /// prime when working over `Q`.
    pub fn sampling_field(&self) -> Result<PrimeField, FieldError> {
        match self.kind {
            FieldKind::Prime => PrimeField::new(self.prime),
            FieldKind::Rational => Ok(PrimeField::default()),
        }
    }

    pub fn describe(&self) -> String {
        match self.kind {
            FieldKind::Prime => format!("prime({})", self.prime),
            FieldKind::Rational => "rational".to_string(),
        }
    }
}

/// Largest variable index used anywhere in `texts`, plus one.
pub fn infer_num_vars<S: AsRef<str>>(texts: &[S]) -> Result<usize, PolyError> {
    const PROBE: usize = 1024;
    let mut n = 1;
    for t in texts {
        let f = parse_form(t.as_ref(), PROBE, &RationalField)?;
        for (m, _) in f.terms() {
            if let Some(last) = m.last_var() {
                n = n.max(last + 1);
            }
        }
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShortcutMode {
    /// Middle maps when the input certifies as a complete intersection,
    /// every degree otherwise.
    #[default]
    Auto,
    Always,
    Never,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOptions {
    pub generators: Vec<String>,
    /// `(n, d)`: `n + 1` random forms of degree `d` in `n + 1` variables.
    pub random: Option<(usize, u32)>,
    pub num_vars: Option<usize>,
    pub seed: u64,
    pub trials: usize,
    pub field: FieldChoice,
    pub escalation_limit: usize,
    pub shortcut: ShortcutMode,
    pub cap: Option<u32>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            generators: Vec::new(),
            random: None,
            num_vars: None,
            seed: 0,
            trials: 5,
            field: FieldChoice::default(),
            escalation_limit: 200,
            shortcut: ShortcutMode::Auto,
            cap: None,
        }
    }
}

impl CheckOptions {
    fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            trials: self.trials,
            seed: self.seed,
            escalation_limit: self.escalation_limit,
            cap: self.cap,
        }
    }

    pub fn spec(&self) -> Result<CiSpec, HarnessError> {
        match (self.random, self.generators.is_empty()) {
            (Some((n, d)), true) => {
                if d == 0 {
                    return Err(HarnessError::Usage("random degree must be positive".into()));
                }
                Ok(CiSpec::random(
                    &self.field.sampling_field()?,
                    n + 1,
                    &vec![d; n + 1],
                    self.seed,
                ))
            }
            (Some(_), false) => Err(HarnessError::Usage(
                "give generators or --random, not both".into(),
            )),
            (None, true) => Err(HarnessError::Usage("no generators given".into())),
            (None, false) => {
                let n = match self.num_vars {
                    Some(n) => n,
                    None => infer_num_vars(&self.generators)?,
                };
                Ok(CiSpec::parse(&self.generators, n)?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub generators: Vec<String>,
    pub num_vars: usize,
    pub seed: Option<u64>,
    pub field: String,
    pub trials: usize,
    pub hilbert: Vec<u64>,
    pub socle_degree: Option<u32>,
    pub complete_intersection: Option<CiCertificate>,
    pub wlp: FullWlpReport,
    /// Theorem ranges, for `n + 1` forms of one degree `d` in `P^n`, `n >= 3`.
    pub bounds: Option<BoundReport>,
}

impl CheckReport {
    pub fn exit_code(&self) -> i32 {
        if self.wlp.overall {
            EXIT_OK
        } else {
            EXIT_NEGATIVE
        }
    }
}

fn run_check<F: Field>(
    spec: CiSpec,
    field: F,
    opts: &CheckOptions,
) -> Result<CheckReport, HarnessError> {
    let mut analysis = Analysis::new(spec.clone(), field, opts.engine_config())?;
    let ci = if spec.generators().len() == spec.num_vars() {
        Some(analysis.certify_complete_intersection()?)
    } else {
        None
    };
    let is_ci = ci.as_ref().is_some_and(|c| c.certified);
    let shortcut = match opts.shortcut {
        ShortcutMode::Auto => is_ci,
        ShortcutMode::Always => true,
        ShortcutMode::Never => false,
    };
    let wlp = analysis.full_wlp(shortcut)?;
    let degrees = spec.degrees();
    let n = spec.num_vars() as i64 - 1;
    let bounds = match degrees.first() {
        Some(&d) if is_ci && degrees.iter().all(|&x| x == d) && n >= 3 && d >= 2 => {
            Some(wlp_ranges(n, d as i64, None)?)
        }
        _ => None,
    };
    Ok(CheckReport {
        generators: spec.rendered(),
        num_vars: spec.num_vars(),
        seed: spec.seed(),
        field: opts.field.describe(),
        trials: opts.trials,
        hilbert: analysis.hilbert().values().to_vec(),
        socle_degree: analysis.hilbert().socle_degree(),
        complete_intersection: ci,
        wlp,
        bounds,
    })
}

pub fn cmd_check(opts: &CheckOptions) -> Result<CheckReport, HarnessError> {
    let spec = opts.spec()?;
    match opts.field.kind {
        FieldKind::Prime => run_check(spec, PrimeField::new(opts.field.prime)?, opts),
        FieldKind::Rational => run_check(spec, RationalField, opts),
    }
}

pub fn cmd_bounds(n: i64, d: i64, b1: Option<i64>) -> Result<BoundReport, HarnessError> {
    Ok(wlp_ranges(n, d, b1)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobianOptions {
    pub polynomial: String,
    pub num_vars: Option<usize>,
    pub seed: u64,
    pub trials: usize,
    pub field: FieldChoice,
    pub escalation_limit: usize,
}

impl Default for JacobianOptions {
    fn default() -> Self {
        JacobianOptions {
            polynomial: String::new(),
            num_vars: None,
            seed: 0,
            trials: 5,
            field: FieldChoice::default(),
            escalation_limit: 200,
        }
    }
}

pub fn jacobian_exit_code(report: &JacobianReport) -> i32 {
    match &report.beauville_degree_d {
        Some(v) if report.smooth_certified && v.certified == Certification::CertifiedHolds => {
            EXIT_OK
        }
        _ => EXIT_NEGATIVE,
    }
}

pub fn cmd_jacobian(opts: &JacobianOptions) -> Result<JacobianReport, HarnessError> {
    let n = match opts.num_vars {
        Some(n) => n,
        None => infer_num_vars(&[&opts.polynomial])?,
    };
    let x = Hypersurface::parse(&opts.polynomial, n)?;
    let config = EngineConfig {
        trials: opts.trials,
        seed: opts.seed,
        escalation_limit: opts.escalation_limit,
        cap: None,
    };
    Ok(match opts.field.kind {
        FieldKind::Prime => jacobian_report(&x, &PrimeField::new(opts.field.prime)?, &config)?,
        FieldKind::Rational => jacobian_report(&x, &RationalField, &config)?,
    })
}

/// Sweep parameters; the TOML keys are the field names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Inclusive `[lo, hi]` of projective dimensions; `n + 1` variables.
    pub n_range: [u32; 2],
    /// Inclusive `[lo, hi]` of generator degrees.
    pub d_range: [u32; 2],
    pub trials_per_cell: usize,
    pub ell_trials: usize,
    pub seed: u64,
    pub field: FieldKind,
    pub prime: u64,
    pub escalation_limit: usize,
    /// Writes `<output_path>.csv` and `<output_path>.json` when set.
    pub output_path: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_range: [3, 4],
            d_range: [2, 5],
            trials_per_cell: 5,
            ell_trials: 5,
            seed: 0,
            field: FieldKind::Prime,
            prime: MERSENNE_61,
            escalation_limit: 200,
            output_path: None,
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigOverrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub field: Option<FieldKind>,
    pub prime: Option<u64>,
    pub output_path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        ExperimentConfig::from_toml(&text)
    }

    pub fn apply(&mut self, o: &ConfigOverrides) -> Result<(), HarnessError> {
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(t) = o.trials {
            self.ell_trials = t;
        }
        if let Some(f) = o.field {
            self.field = f;
        }
        if let Some(p) = o.prime {
            self.prime = p;
        }
        if let Some(p) = &o.output_path {
            self.output_path = Some(p.clone());
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.n_range[0] > self.n_range[1] {
            return bad(format!("n_range {:?} is empty", self.n_range));
        }
        if self.d_range[0] > self.d_range[1] {
            return bad(format!("d_range {:?} is empty", self.d_range));
        }
        if self.n_range[0] < 1 {
            return bad("n_range must start at 1 or above".into());
        }
        if self.d_range[0] < 1 {
            return bad("d_range must start at 1 or above".into());
        }
        if self.trials_per_cell == 0 {
            return bad("trials_per_cell must be at least 1".into());
        }
        if self.ell_trials == 0 {
            return bad("ell_trials must be at least 1".into());
        }
        if self.field == FieldKind::Prime {
            PrimeField::new(self.prime)?;
        }
        Ok(())
    }

    pub fn field_choice(&self) -> FieldChoice {
        FieldChoice {
            kind: self.field,
            prime: self.prime,
        }
    }
}

pub fn cell_seed(root: u64, n: u32, d: u32) -> u64 {
    derive_seed(derive_seed(root, n as u64), d as u64)
}

pub fn instance_seed(root: u64, n: u32, d: u32, k: usize) -> u64 {
    derive_seed(cell_seed(root, n, d), k as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceStatus {
    /// Every degree in the predicted range is certified.
    Agrees,
    /// Some degree in the predicted range is not certified.
    RedFlag,
    /// No theorem applies (`n < 3` or `d < 2`); recorded for reference.
    Unpredicted,
    /// The random forms did not certify as a complete intersection.
    NotCi,
}

impl InstanceStatus {
    fn tag(self) -> &'static str {
        match self {
            InstanceStatus::Agrees => "agrees",
            InstanceStatus::RedFlag => "red-flag",
            InstanceStatus::Unpredicted => "unpredicted",
            InstanceStatus::NotCi => "not-ci",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceResult {
    pub n: u32,
    pub d: u32,
    pub instance: usize,
    pub instance_seed: u64,
    pub ci_certified: bool,
    pub socle_degree: Option<u32>,
    /// One letter per degree `1..=e+1`: `H` certified, `S` suspected,
    /// `F` certified failure over `Q`.
    pub verdicts: String,
    pub predicted_bound2_end: Option<i64>,
    pub predicted_main: Option<IntInterval>,
    pub registry_bmmn_end: Option<i64>,
    /// Largest `T` with every degree `1..=T` certified.
    pub empirical_end: Option<u32>,
    pub full_wlp: bool,
    pub suspected_degrees: Vec<u32>,
    pub failed_degrees: Vec<u32>,
    pub status: InstanceStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub n: u32,
    pub d: u32,
    pub cell_seed: u64,
    pub instances: usize,
    pub ci_certified: usize,
    pub predicted_bound2_end: Option<i64>,
    pub predicted_main: Option<IntInterval>,
    pub registry: Vec<crate::bounds::RegistryHit>,
    /// Minimum of the instance empirical endpoints.
    pub empirical_end: Option<u32>,
    pub agrees: bool,
    pub red_flag_seeds: Vec<u64>,
    pub suspected_seeds: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellTiming {
    pub n: u32,
    pub d: u32,
    pub millis: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub config: ExperimentConfig,
    pub cells: Vec<CellResult>,
    pub instances: Vec<InstanceResult>,
    pub red_flags: usize,
    /// Wall-clock time per cell; the only nondeterministic part.
    pub timing: Vec<CellTiming>,
}

impl SweepResult {
    pub fn exit_code(&self) -> i32 {
        if self.red_flags == 0 {
            EXIT_OK
        } else {
            EXIT_NEGATIVE
        }
    }
}

fn run_instance<F: Field>(
    field: &F,
    cfg: &ExperimentConfig,
    n: u32,
    d: u32,
    k: usize,
) -> Result<InstanceResult, HarnessError> {
    let seed = instance_seed(cfg.seed, n, d, k);
    let num_vars = n as usize + 1;
    let spec = CiSpec::random(
        &cfg.field_choice().sampling_field()?,
        num_vars,
        &vec![d; num_vars],
        seed,
    );
    let engine = EngineConfig {
        trials: cfg.ell_trials,
        seed,
        escalation_limit: cfg.escalation_limit,
        cap: None,
    };
    let ranges = wlp_ranges(n as i64, d as i64, None).ok();
    let mut result = InstanceResult {
        n,
        d,
        instance: k,
        instance_seed: seed,
        ci_certified: false,
        socle_degree: None,
        verdicts: String::new(),
        predicted_bound2_end: ranges.as_ref().and_then(|r| r.range_bound2.last()),
        predicted_main: ranges.as_ref().map(|r| r.range_main),
        registry_bmmn_end: registry(Scope::CompleteIntersection, n as i64, d as i64)
            .iter()
            .find(|h| h.source == "BMMN")
            .and_then(|h| h.range.last()),
        empirical_end: None,
        full_wlp: false,
        suspected_degrees: Vec::new(),
        failed_degrees: Vec::new(),
        status: InstanceStatus::NotCi,
    };
    let mut analysis = match Analysis::new(spec, field.clone(), engine) {
        Ok(a) => a,
        Err(EngineError::NotArtinian(_)) => return Ok(result),
        Err(e) => return Err(e.into()),
    };
    if !analysis.certify_complete_intersection()?.certified {
        return Ok(result);
    }
    result.ci_certified = true;
    let e = analysis
        .hilbert()
        .socle_degree()
        .expect("a certified CI is nonzero");
    result.socle_degree = Some(e);
    let report = analysis.full_wlp(false)?;
    let mut empirical = 0;
    for v in &report.verdicts {
        match v.certified {
            Certification::CertifiedHolds if empirical + 1 == v.degree => empirical = v.degree,
            Certification::CertifiedHolds => {}
            Certification::SuspectedFailure => result.suspected_degrees.push(v.degree),
            Certification::CertifiedFailureOverRationals => result.failed_degrees.push(v.degree),
        }
    }
    result.verdicts = verdict_letters(&report);
    result.empirical_end = Some(empirical);
    result.full_wlp = report.overall;
    result.status = match result.predicted_bound2_end {
        None => InstanceStatus::Unpredicted,
        Some(end) if (empirical as i64) >= end.min(e as i64 + 1) => InstanceStatus::Agrees,
        Some(_) => InstanceStatus::RedFlag,
    };
    Ok(result)
}

/// `H`, `S` or `F` for each verdict, in degree order.
pub fn verdict_letters(report: &FullWlpReport) -> String {
    report
        .verdicts
        .iter()
        .map(|v| match v.certified {
            Certification::CertifiedHolds => 'H',
            Certification::SuspectedFailure => 'S',
            Certification::CertifiedFailureOverRationals => 'F',
        })
        .collect()
}

pub fn sweep(cfg: &ExperimentConfig) -> Result<SweepResult, HarnessError> {
    cfg.validate()?;
    match cfg.field {
        FieldKind::Prime => sweep_over(&PrimeField::new(cfg.prime)?, cfg),
        FieldKind::Rational => sweep_over(&RationalField, cfg),
    }
}

fn sweep_over<F: Field>(field: &F, cfg: &ExperimentConfig) -> Result<SweepResult, HarnessError> {
    let mut cells = Vec::new();
    let mut instances = Vec::new();
    let mut timing = Vec::new();
    for n in cfg.n_range[0]..=cfg.n_range[1] {
        for d in cfg.d_range[0]..=cfg.d_range[1] {
            let start = Instant::now();
            let rows = (0..cfg.trials_per_cell)
                .map(|k| run_instance(field, cfg, n, d, k))
                .collect::<Result<Vec<_>, _>>()?;
            timing.push(CellTiming {
                n,
                d,
                millis: start.elapsed().as_millis(),
            });
            let ranges = wlp_ranges(n as i64, d as i64, None).ok();
            let red_flag_seeds: Vec<u64> = rows
                .iter()
                .filter(|r| r.status == InstanceStatus::RedFlag)
                .map(|r| r.instance_seed)
                .collect();
            cells.push(CellResult {
                n,
                d,
                cell_seed: cell_seed(cfg.seed, n, d),
                instances: rows.len(),
                ci_certified: rows.iter().filter(|r| r.ci_certified).count(),
                predicted_bound2_end: ranges.as_ref().and_then(|r| r.range_bound2.last()),
                predicted_main: ranges.as_ref().map(|r| r.range_main),
                registry: ranges.map(|r| r.registry).unwrap_or_default(),
                empirical_end: rows.iter().filter_map(|r| r.empirical_end).min(),
                agrees: red_flag_seeds.is_empty(),
                red_flag_seeds,
                suspected_seeds: rows
                    .iter()
                    .filter(|r| !r.suspected_degrees.is_empty())
                    .map(|r| r.instance_seed)
                    .collect(),
            });
            instances.extend(rows);
        }
    }
    Ok(SweepResult {
        config: cfg.clone(),
        red_flags: instances
            .iter()
            .filter(|r| r.status == InstanceStatus::RedFlag)
            .count(),
        cells,
        instances,
        timing,
    })
}

pub const CSV_HEADER: [&str; 15] = [
    "n",
    "d",
    "instance",
    "instance_seed",
    "ci_certified",
    "socle_degree",
    "verdicts",
    "predicted_bound2_end",
    "predicted_main_first",
    "predicted_main_last",
    "registry_bmmn_end",
    "empirical_end",
    "full_wlp",
    "suspected_degrees",
    "status",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn joined(v: &[u32]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &result.instances {
        let main = r.predicted_main.filter(|m| !m.is_empty());
        w.write_record([
            r.n.to_string(),
            r.d.to_string(),
            r.instance.to_string(),
            r.instance_seed.to_string(),
            r.ci_certified.to_string(),
            opt(r.socle_degree),
            r.verdicts.clone(),
            opt(r.predicted_bound2_end),
            opt(main.map(|m| m.start)),
            opt(main.and_then(|m| m.last())),
            opt(r.registry_bmmn_end),
            opt(r.empirical_end),
            r.full_wlp.to_string(),
            joined(&r.suspected_degrees),
            r.status.tag().to_string(),
        ])?;
    }
    w.flush().map_err(|source| HarnessError::Io {
        path: PathBuf::from("<csv>"),
        source,
    })?;
    Ok(())
}

pub fn csv_string(result: &SweepResult) -> Result<String, HarnessError> {
    let mut buf = Vec::new();
    write_csv(result, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

/// Paths the sweep writes: explicit overrides first, then `output_path`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepOutputs {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

impl SweepOutputs {
    pub fn resolve(cfg: &ExperimentConfig, csv: Option<PathBuf>, json: Option<PathBuf>) -> Self {
        let base = cfg.output_path.as_ref();
        SweepOutputs {
            csv: csv.or_else(|| base.map(|b| b.with_extension("csv"))),
            json: json.or_else(|| base.map(|b| b.with_extension("json"))),
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), HarnessError> {
    fs::write(path, bytes).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn cmd_sweep(
    cfg: &ExperimentConfig,
    outputs: &SweepOutputs,
) -> Result<SweepResult, HarnessError> {
    let result = sweep(cfg)?;
    if let Some(p) = &outputs.csv {
        write_file(p, csv_string(&result)?.as_bytes())?;
    }
    if let Some(p) = &outputs.json {
        write_file(p, serde_json::to_string_pretty(&result)?.as_bytes())?;
    }
    Ok(result)
}
