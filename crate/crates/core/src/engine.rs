//! Hilbert functions, complete-intersection certification and weak
//! Lefschetz verdicts.
//!
//! Ranks are computed over whatever field the caller picks. Over `F_p` the
//! rank of a reduced integer matrix never exceeds its rank over `Q`, so a
//! maximal-rank map mod `p` is maximal in characteristic zero as well. A
//! deficient rank mod `p` proves nothing; such degrees are rerun over `Q`
//! when the pieces are small enough, and otherwise reported as suspected.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, RationalField, MERSENNE_61};
use crate::linalg::{mul_map, LinalgError, QuotientTower};
use crate::poly::{derive_seed, CiSpec, GradedForm, PolyError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("not Artinian up to degree {0}")]
    NotArtinian(u32),
    #[error("expected {expected} generators (one per variable), found {found}")]
    GeneratorCount { expected: usize, found: usize },
    #[error("the middle-map shortcut needs a certified complete intersection")]
    NotCompleteIntersection,
    #[error("degree must be at least 1")]
    DegreeZero,
    #[error("at least one trial is required")]
    NoTrials,
    #[error("Hilbert function coefficient overflows u64")]
    Overflow,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `h_0, h_1, ...` up to and including the first zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertFunction {
    values: Vec<u64>,
}

impl HilbertFunction {
    /// Truncates after the first zero and appends one if the input has none.
    pub fn from_values(mut values: Vec<u64>) -> Self {
        if let Some(z) = values.iter().position(|&h| h == 0) {
            values.truncate(z + 1);
        } else {
            values.push(0);
        }
        HilbertFunction { values }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// The values before the terminating zero.
    pub fn nonzero(&self) -> &[u64] {
        &self.values[..self.values.len() - 1]
    }

    pub fn value(&self, t: u32) -> u64 {
        self.values.get(t as usize).copied().unwrap_or(0)
    }

    /// Largest `t` with `h_t != 0`; `None` for the zero algebra.
    pub fn socle_degree(&self) -> Option<u32> {
        (self.values.len() as u32).checked_sub(2)
    }

    pub fn is_symmetric(&self) -> bool {
        let h = self.nonzero();
        h.iter().eq(h.iter().rev())
    }

    pub fn total_dim(&self) -> u64 {
        self.values.iter().sum()
    }
}

/// Coefficients of `prod (1 - t^{d_i}) / (1 - t)^{num_vars}`.
pub fn hilbert_by_product_formula(
    num_vars: usize,
    degrees: &[u32],
) -> Result<HilbertFunction, EngineError> {
    if degrees.len() != num_vars {
        return Err(EngineError::GeneratorCount {
            expected: num_vars,
            found: degrees.len(),
        });
    }
    if degrees.contains(&0) {
        return Ok(HilbertFunction::from_values(vec![0]));
    }
    // (1 - t^d) / (1 - t) = 1 + t + ... + t^{d-1}
    let mut coeffs: Vec<u64> = vec![1];
    for &d in degrees {
        let mut next = vec![0u64; coeffs.len() + d as usize - 1];
        for (i, &c) in coeffs.iter().enumerate() {
            for slot in &mut next[i..i + d as usize] {
                *slot = slot.checked_add(c).ok_or(EngineError::Overflow)?;
            }
        }
        coeffs = next;
    }
    Ok(HilbertFunction::from_values(coeffs))
}

/// Default degree cap for the Artinian probe.
pub fn default_cap(num_vars: usize, degrees: &[u32]) -> u32 {
    if degrees.len() == num_vars {
        degrees.iter().map(|&d| d.saturating_sub(1)).sum::<u32>() + 1
    } else {
        2 * degrees.iter().copied().max().unwrap_or(0) * num_vars as u32
    }
}

/// Builds `tower` until a zero piece appears or `cap` is passed.
fn probe<F: Field>(tower: &mut QuotientTower<F>, cap: u32) -> Result<HilbertFunction, EngineError> {
    let mut values = Vec::new();
    for t in 0..=cap {
        let h = tower.level(t).dim() as u64;
        values.push(h);
        if h == 0 {
            return Ok(HilbertFunction::from_values(values));
        }
    }
    Err(EngineError::NotArtinian(cap))
}

/// Hilbert function of `R/I` by elimination, degree by degree.
pub fn hilbert_by_linear_algebra<F: Field>(
    spec: &CiSpec,
    field: &F,
    cap: Option<u32>,
) -> Result<HilbertFunction, EngineError> {
    let cap = cap.unwrap_or_else(|| default_cap(spec.num_vars(), spec.degrees()));
    let mut tower =
        QuotientTower::new(field.clone(), spec.num_vars(), spec.generators_over(field)?)?;
    probe(&mut tower, cap)
}

/// `h_t = C(t+n, n) - rank [I]_t` from full Macaulay matrices.
///
/// Much slower than [`hilbert_by_linear_algebra`]; kept as an independent
/// route for small cases.
pub fn hilbert_by_macaulay<F: Field>(
    spec: &CiSpec,
    field: &F,
    cap: Option<u32>,
) -> Result<HilbertFunction, EngineError> {
    let cap = cap.unwrap_or_else(|| default_cap(spec.num_vars(), spec.degrees()));
    let gens = spec.generators_over(field)?;
    let mut values = Vec::new();
    for t in 0..=cap {
        let piece = crate::linalg::macaulay_piece(field, &gens, spec.num_vars(), t)?;
        let h = piece.quotient_dim() as u64;
        values.push(h);
        if h == 0 {
            return Ok(HilbertFunction::from_values(values));
        }
    }
    Err(EngineError::NotArtinian(cap))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CiCertificate {
    pub certified: bool,
    pub linear_algebra: Vec<u64>,
    pub product_formula: HilbertFunction,
}

/// Compares the eliminated Hilbert function with the product formula
/// through degree `e + 1`.
pub fn certify_complete_intersection<F: Field>(
    spec: &CiSpec,
    field: &F,
) -> Result<CiCertificate, EngineError> {
    let mut tower =
        QuotientTower::new(field.clone(), spec.num_vars(), spec.generators_over(field)?)?;
    certify_with(spec, &mut tower)
}

fn certify_with<F: Field>(
    spec: &CiSpec,
    tower: &mut QuotientTower<F>,
) -> Result<CiCertificate, EngineError> {
    let expected = hilbert_by_product_formula(spec.num_vars(), spec.degrees())?;
    let top = expected.values().len() as u32 - 1;
    let mut observed = Vec::new();
    for t in 0..=top {
        let h = tower.level(t).dim() as u64;
        observed.push(h);
        if h != expected.value(t) {
            break;
        }
    }
    Ok(CiCertificate {
        certified: observed == expected.values(),
        linear_algebra: observed,
        product_formula: expected,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    CertifiedHolds,
    SuspectedFailure,
    CertifiedFailureOverRationals,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WlpVerdict {
    pub degree: u32,
    pub dim_source: usize,
    pub dim_target: usize,
    pub rank: usize,
    pub maximal: bool,
    pub certified: Certification,
    pub ell_used: GradedForm<RationalField>,
    /// Linear forms tried; 0 when either piece vanishes and nothing was computed.
    pub trials: usize,
    /// Whether the rank was recomputed over `Q` after failing mod `p`.
    pub escalated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WlpStatus {
    Holds,
    SuspectedFailure,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullWlpReport {
    pub verdicts: Vec<WlpVerdict>,
    pub shortcut_used: bool,
    pub overall: bool,
    pub status: WlpStatus,
}

impl FullWlpReport {
    fn from_verdicts(verdicts: Vec<WlpVerdict>, shortcut_used: bool) -> Self {
        let status = if verdicts
            .iter()
            .any(|v| v.certified == Certification::CertifiedFailureOverRationals)
        {
            WlpStatus::Fails
        } else if verdicts
            .iter()
            .any(|v| v.certified == Certification::SuspectedFailure)
        {
            WlpStatus::SuspectedFailure
        } else {
            WlpStatus::Holds
        };
        FullWlpReport {
            overall: status == WlpStatus::Holds,
            verdicts,
            shortcut_used,
            status,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    pub trials: usize,
    pub seed: u64,
    /// Largest `h_{t-1}`, `h_t` for which a failure mod `p` is rerun over `Q`.
    pub escalation_limit: usize,
    pub cap: Option<u32>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            trials: 5,
            seed: 0,
            escalation_limit: 200,
            cap: None,
        }
    }
}

/// Trial linear form `k`: all ones for `k = 0`, otherwise integer
/// coefficients drawn uniformly from `[0, 2^61 - 1)` with the seed
/// `derive_seed(root, k)`.
pub fn trial_form(num_vars: usize, root: u64, k: usize) -> GradedForm<RationalField> {
    let coeffs: Vec<BigRational> = if k == 0 {
        vec![RationalField.one(); num_vars]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(root, k as u64));
        (0..num_vars)
            .map(|_| BigRational::from_integer(BigInt::from(rng.random_range(0..MERSENNE_61))))
            .collect()
    };
    GradedForm::linear(RationalField, &coeffs)
}

/// An Artinian quotient with its graded pieces cached for repeated checks.
#[derive(Debug, Clone)]
pub struct Analysis<F: Field> {
    spec: CiSpec,
    field: F,
    config: EngineConfig,
    tower: QuotientTower<F>,
    hilbert: HilbertFunction,
    exact: Option<QuotientTower<RationalField>>,
    ells: Vec<GradedForm<RationalField>>,
}

impl<F: Field> Analysis<F> {
    /// Runs the Artinian probe; fails if `h_t` has not reached zero by the cap.
    pub fn new(spec: CiSpec, field: F, config: EngineConfig) -> Result<Self, EngineError> {
        if config.trials == 0 {
            return Err(EngineError::NoTrials);
        }
        let mut tower = QuotientTower::new(
            field.clone(),
            spec.num_vars(),
            spec.generators_over(&field)?,
        )?;
        let cap = config
            .cap
            .unwrap_or_else(|| default_cap(spec.num_vars(), spec.degrees()));
        let hilbert = probe(&mut tower, cap)?;
        let root = derive_seed(config.seed, u64::MAX);
        let ells = (0..config.trials)
            .map(|k| trial_form(spec.num_vars(), root, k))
            .collect();
        Ok(Analysis {
            spec,
            field,
            config,
            tower,
            hilbert,
            exact: None,
            ells,
        })
    }

    pub fn spec(&self) -> &CiSpec {
        &self.spec
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn hilbert(&self) -> &HilbertFunction {
        &self.hilbert
    }

    pub fn trial_forms(&self) -> &[GradedForm<RationalField>] {
        &self.ells
    }

    pub fn certify_complete_intersection(&mut self) -> Result<CiCertificate, EngineError> {
        if self.spec.generators().len() != self.spec.num_vars() {
            return Err(EngineError::GeneratorCount {
                expected: self.spec.num_vars(),
                found: self.spec.generators().len(),
            });
        }
        certify_with(&self.spec, &mut self.tower)
    }

    /// Multiplication by the trial forms from degree `t - 1` to `t`.
    pub fn wlp_in_degree(&mut self, t: u32) -> Result<WlpVerdict, EngineError> {
        if t == 0 {
            return Err(EngineError::DegreeZero);
        }
        let dim_source = self.hilbert.value(t - 1) as usize;
        let dim_target = self.hilbert.value(t) as usize;
        if dim_source == 0 || dim_target == 0 {
            return Ok(WlpVerdict {
                degree: t,
                dim_source,
                dim_target,
                rank: 0,
                maximal: true,
                certified: Certification::CertifiedHolds,
                ell_used: self.ells[0].clone(),
                trials: 0,
                escalated: false,
            });
        }
        let exact_field = self.field.is_characteristic_zero();
        let mut best: Option<(usize, usize)> = None;
        for (k, ell) in self.ells.iter().enumerate() {
            let rank = rank_in_degree(&mut self.tower, ell, t)?;
            if best.is_none_or(|(r, _)| rank > r) {
                best = Some((rank, k));
            }
            if rank == dim_source.min(dim_target) {
                return Ok(WlpVerdict {
                    degree: t,
                    dim_source,
                    dim_target,
                    rank,
                    maximal: true,
                    certified: Certification::CertifiedHolds,
                    ell_used: ell.clone(),
                    trials: k + 1,
                    escalated: false,
                });
            }
        }
        let (rank, k) = best.expect("at least one trial");
        let mut verdict = WlpVerdict {
            degree: t,
            dim_source,
            dim_target,
            rank,
            maximal: false,
            certified: if exact_field {
                Certification::CertifiedFailureOverRationals
            } else {
                Certification::SuspectedFailure
            },
            ell_used: self.ells[k].clone(),
            trials: self.ells.len(),
            escalated: false,
        };
        let limit = self.config.escalation_limit;
        if !exact_field && dim_source <= limit && dim_target <= limit {
            self.escalate(&mut verdict)?;
        }
        Ok(verdict)
    }

    /// Reruns every trial form over `Q`. The exact pieces may be larger than
    /// the modular ones if `p` happens to divide something it should not.
    fn escalate(&mut self, verdict: &mut WlpVerdict) -> Result<(), EngineError> {
        let t = verdict.degree;
        if self.exact.is_none() {
            self.exact = Some(QuotientTower::new(
                RationalField,
                self.spec.num_vars(),
                self.spec.generators().to_vec(),
            )?);
        }
        let tower = self.exact.as_mut().expect("just built");
        let dim_source = tower.level(t - 1).dim();
        let dim_target = tower.level(t).dim();
        verdict.escalated = true;
        verdict.dim_source = dim_source;
        verdict.dim_target = dim_target;
        let target = dim_source.min(dim_target);
        let mut best = (0, 0);
        for (k, ell) in self.ells.iter().enumerate() {
            let rank = rank_in_degree(tower, ell, t)?;
            if rank > best.0 || k == 0 {
                best = (rank, k);
            }
            if rank == target {
                break;
            }
        }
        verdict.rank = best.0;
        verdict.ell_used = self.ells[best.1].clone();
        verdict.maximal = best.0 == target;
        verdict.certified = if verdict.maximal {
            Certification::CertifiedHolds
        } else {
            Certification::CertifiedFailureOverRationals
        };
        Ok(())
    }

    /// Every degree from 1 to `e + 1`, or only the middle maps.
    pub fn full_wlp(&mut self, use_shortcut: bool) -> Result<FullWlpReport, EngineError> {
        let e = match self.hilbert.socle_degree() {
            Some(e) => e,
            None => return Ok(FullWlpReport::from_verdicts(Vec::new(), use_shortcut)),
        };
        if !use_shortcut {
            let verdicts = (1..=e + 1)
                .map(|t| self.wlp_in_degree(t))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(FullWlpReport::from_verdicts(verdicts, false));
        }
        if self.spec.generators().len() != self.spec.num_vars()
            || !self.certify_complete_intersection()?.certified
        {
            return Err(EngineError::NotCompleteIntersection);
        }
        let verdicts = shortcut_degrees(e)
            .into_iter()
            .map(|t| self.wlp_in_degree(t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FullWlpReport::from_verdicts(verdicts, true))
    }
}

/// Target degrees of the injectivity map out of `floor((e-1)/2)` and the
/// surjectivity map out of `floor(e/2)`; a single degree when `e` is odd.
pub fn shortcut_degrees(e: u32) -> Vec<u32> {
    let inject = (e as i64 - 1).div_euclid(2) + 1;
    let surject = e as i64 / 2 + 1;
    let mut out: Vec<u32> = [inject, surject]
        .into_iter()
        .filter(|&t| t >= 1)
        .map(|t| t as u32)
        .collect();
    out.dedup();
    out
}

fn rank_in_degree<F: Field>(
    tower: &mut QuotientTower<F>,
    ell: &GradedForm<RationalField>,
    t: u32,
) -> Result<usize, EngineError> {
    let ell = ell.reduce(tower.field())?;
    tower.level(t);
    let src = tower.built(t - 1).expect("built with level t");
    let tgt = tower.built(t).expect("built");
    Ok(mul_map(src, tgt, &ell)?.rank())
}

/// One-shot verdict for a single degree.
pub fn wlp_in_degree<F: Field>(
    spec: &CiSpec,
    field: &F,
    t: u32,
    config: &EngineConfig,
) -> Result<WlpVerdict, EngineError> {
    Analysis::new(spec.clone(), field.clone(), config.clone())?.wlp_in_degree(t)
}

pub fn full_wlp<F: Field>(
    spec: &CiSpec,
    field: &F,
    use_shortcut: bool,
    config: &EngineConfig,
) -> Result<FullWlpReport, EngineError> {
    Analysis::new(spec.clone(), field.clone(), config.clone())?.full_wlp(use_shortcut)
}
