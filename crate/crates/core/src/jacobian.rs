//! Jacobian ideals of hypersurfaces and the Beauville question: does
//! `R/J(X)` have the WLP in degree `deg X`?
//!
//! Smoothness is decided algebraically. `X` is smooth exactly when its
//! partials form a regular sequence, i.e. when `R/J(X)` has the Hilbert
//! function of a complete intersection of `n + 1` forms of degree `d - 1`.

use serde::Serialize;
use thiserror::Error;

use crate::bounds::{jacobian_range, maximal_variation, registry, IntInterval, RegistryHit, Scope};
use crate::engine::{
    certify_complete_intersection, Analysis, CiCertificate, EngineConfig, EngineError, WlpVerdict,
};
use crate::field::{Field, PrimeField, RationalField};
use crate::poly::{parse_form, random_form, CiSpec, GradedForm, Monomial, PolyError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JacobianError {
    #[error("hypersurface degree must be at least 2, got {0}")]
    DegreeTooSmall(u32),
    #[error("hypersurface is not smooth")]
    NotSmooth,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Partial derivatives in variable order; zero partials are kept.
pub fn jacobian_ideal(f: &GradedForm<RationalField>) -> Result<CiSpec, JacobianError> {
    if f.degree() < 2 {
        return Err(JacobianError::DegreeTooSmall(f.degree()));
    }
    let partials = (0..f.num_vars()).map(|i| f.derivative(i)).collect();
    Ok(CiSpec::from_generators(partials, f.num_vars())?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hypersurface {
    f: GradedForm<RationalField>,
    jacobian: CiSpec,
}

impl Hypersurface {
    pub fn new(f: GradedForm<RationalField>) -> Result<Self, JacobianError> {
        let jacobian = jacobian_ideal(&f)?;
        Ok(Hypersurface { f, jacobian })
    }

    pub fn parse(text: &str, num_vars: usize) -> Result<Self, JacobianError> {
        Hypersurface::new(parse_form(text, num_vars, &RationalField)?)
    }

    /// `x0^d + ... + x_n^d`.
    pub fn fermat(num_vars: usize, d: u32) -> Result<Self, JacobianError> {
        let f = GradedForm::from_terms(
            RationalField,
            num_vars,
            d,
            (0..num_vars).map(|i| {
                let mut e = vec![0; num_vars];
                e[i] = d;
                (Monomial::new(e), RationalField.one())
            }),
        )?;
        Hypersurface::new(f)
    }

    pub fn random(
        field: &PrimeField,
        num_vars: usize,
        d: u32,
        seed: u64,
    ) -> Result<Self, JacobianError> {
        Hypersurface::new(random_form(field, num_vars, d, seed).reduce(&RationalField)?)
    }

    pub fn form(&self) -> &GradedForm<RationalField> {
        &self.f
    }

    pub fn jacobian(&self) -> &CiSpec {
        &self.jacobian
    }

    pub fn degree(&self) -> u32 {
        self.f.degree()
    }

    pub fn num_vars(&self) -> usize {
        self.f.num_vars()
    }

    /// `n` for `X` in `P^n`.
    pub fn ambient_dim(&self) -> usize {
        self.num_vars() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Smoothness {
    pub smooth: bool,
    /// False only when a prime-field computation failed to certify and the
    /// pieces were too large to recheck over `Q`.
    pub exact: bool,
    /// The certificate was recomputed over `Q` after failing mod `p`.
    pub rechecked: bool,
    pub certificate: CiCertificate,
}

/// Smooth iff `J(X)` certifies as a complete intersection. A negative
/// answer mod `p` is rechecked over `Q` when every expected piece has
/// dimension at most `limit`.
pub fn smoothness<F: Field>(
    x: &Hypersurface,
    field: &F,
    limit: usize,
) -> Result<Smoothness, JacobianError> {
    let certificate = certify_complete_intersection(&x.jacobian, field)?;
    if certificate.certified || field.is_characteristic_zero() {
        return Ok(Smoothness {
            smooth: certificate.certified,
            exact: true,
            rechecked: false,
            certificate,
        });
    }
    let largest = certificate
        .product_formula
        .values()
        .iter()
        .copied()
        .max()
        .unwrap_or(0);
    if largest as usize > limit {
        return Ok(Smoothness {
            smooth: false,
            exact: false,
            rechecked: false,
            certificate,
        });
    }
    let certificate = certify_complete_intersection(&x.jacobian, &RationalField)?;
    Ok(Smoothness {
        smooth: certificate.certified,
        exact: true,
        rechecked: true,
        certificate,
    })
}

pub fn certify_smooth<F: Field>(x: &Hypersurface, field: &F) -> Result<bool, JacobianError> {
    Ok(smoothness(x, field, EngineConfig::default().escalation_limit)?.smooth)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobianReport {
    pub form: GradedForm<RationalField>,
    pub ambient_dim: usize,
    pub degree: u32,
    pub smooth_certified: bool,
    pub smoothness_exact: bool,
    pub hilbert: Vec<u64>,
    /// Guaranteed WLP degrees `t < d - 1 + ceil((d-1)/n)` for `X` in `P^n`;
    /// absent when `n < 3` or `d < 3`.
    pub wlp_guaranteed_range: Option<IntInterval>,
    pub beauville_covered: bool,
    /// WLP of `R/J(X)` in degree `d`; absent when `X` is not smooth.
    pub beauville_degree_d: Option<WlpVerdict>,
    /// `m` in the maximal-variation statement, which writes `X` in `P^{m+1}`.
    pub variation_index: i64,
    /// `d >= m + 3` with `m >= 2`.
    pub maximal_variation: bool,
    /// Ambient `P^4` and `d >= 7`.
    pub abstract_claim_covered: bool,
    /// Least degree whose own WLP degree lies in the guaranteed range for
    /// this ambient dimension: `n + 2`.
    pub substituted_threshold: Option<i64>,
    pub registry: Vec<RegistryHit>,
}

/// Full report; a singular `X` yields `smooth_certified = false` and no
/// verdict rather than an error.
pub fn jacobian_report<F: Field>(
    x: &Hypersurface,
    field: &F,
    config: &EngineConfig,
) -> Result<JacobianReport, JacobianError> {
    let n = x.ambient_dim() as i64;
    let d = x.degree() as i64;
    let smooth = smoothness(x, field, config.escalation_limit)?;
    let range = if n >= 3 && d >= 3 {
        jacobian_range(n, d).ok()
    } else {
        None
    };
    // When p kills the Jacobian algebra (p dividing d, say) only Q is left.
    let beauville_degree_d = if smooth.smooth && smooth.rechecked {
        let mut a = Analysis::new(x.jacobian.clone(), RationalField, config.clone())?;
        Some(a.wlp_in_degree(x.degree())?)
    } else if smooth.smooth {
        let mut a = Analysis::new(x.jacobian.clone(), field.clone(), config.clone())?;
        Some(a.wlp_in_degree(x.degree())?)
    } else {
        None
    };
    Ok(JacobianReport {
        form: x.f.clone(),
        ambient_dim: x.ambient_dim(),
        degree: x.degree(),
        smooth_certified: smooth.smooth,
        smoothness_exact: smooth.exact,
        hilbert: smooth.certificate.linear_algebra.clone(),
        wlp_guaranteed_range: range,
        beauville_covered: range.is_some_and(|r| r.contains(d)),
        beauville_degree_d,
        variation_index: n - 1,
        maximal_variation: maximal_variation(n, d),
        abstract_claim_covered: n == 4 && d >= 7,
        substituted_threshold: (n >= 3).then_some(n + 2),
        registry: registry(Scope::Jacobian, n, d),
    })
}

/// Like [`jacobian_report`], but singular input is an error.
pub fn beauville_check<F: Field>(
    x: &Hypersurface,
    field: &F,
    config: &EngineConfig,
) -> Result<JacobianReport, JacobianError> {
    let report = jacobian_report(x, field, config)?;
    if !report.smooth_certified {
        return Err(JacobianError::NotSmooth);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::range_bound2;
    use crate::engine::Certification;

    #[test]
    fn partials() {
        let x = Hypersurface::fermat(4, 5).unwrap();
        assert_eq!(
            x.jacobian().rendered(),
            vec!["5*x0^4", "5*x1^4", "5*x2^4", "5*x3^4"]
        );
        let j = jacobian_ideal(&parse_form("x0*x1", 2, &RationalField).unwrap()).unwrap();
        assert_eq!(j.rendered(), vec!["x1", "x0"]);
        let j = jacobian_ideal(&parse_form("x0^3", 3, &RationalField).unwrap()).unwrap();
        assert_eq!(j.degrees(), &[2, 2, 2]);
        assert!(j.generators()[1].is_zero() && j.generators()[2].is_zero());
        assert_eq!(
            Hypersurface::parse("x0 + x1", 2),
            Err(JacobianError::DegreeTooSmall(1))
        );
    }

    #[test]
    fn smoothness_examples() {
        let fp = PrimeField::default();
        assert!(certify_smooth(&Hypersurface::fermat(5, 5).unwrap(), &fp).unwrap());
        assert!(!certify_smooth(&Hypersurface::parse("x0^2*x1", 3).unwrap(), &fp).unwrap());
        assert!(!certify_smooth(&Hypersurface::parse("x0^3", 3).unwrap(), &fp).unwrap());
        assert!(certify_smooth(&Hypersurface::random(&fp, 4, 3, 17).unwrap(), &fp).unwrap());
        // nodal cubic curve: y^2 z - x^3 - x^2 z
        let nodal = Hypersurface::parse("x1^2*x2 - x0^3 - x0^2*x2", 3).unwrap();
        let s = smoothness(&nodal, &fp, 200).unwrap();
        assert!(!s.smooth && s.exact);
    }

    #[test]
    fn characteristic_dividing_the_degree() {
        let f5 = PrimeField::new(5).unwrap();
        let x = Hypersurface::fermat(3, 5).unwrap();
        let s = smoothness(&x, &f5, 200).unwrap();
        assert!(s.smooth && s.rechecked);
        let r = jacobian_report(&x, &f5, &EngineConfig::default()).unwrap();
        assert!(r.beauville_degree_d.unwrap().maximal);
    }

    #[test]
    fn smooth_cubic_surface_report() {
        let fp = PrimeField::default();
        let x = Hypersurface::fermat(4, 3).unwrap();
        let r = beauville_check(&x, &fp, &EngineConfig::default()).unwrap();
        assert_eq!(r.wlp_guaranteed_range, Some(IntInterval::new(1, 3)));
        assert!(!r.beauville_covered);
        assert_eq!(r.registry[0].source, "Ilardi");
        assert_eq!(r.registry[0].range, IntInterval::single(2));
        let v = r.beauville_degree_d.unwrap();
        assert_eq!(v.certified, Certification::CertifiedHolds);
        assert_eq!(r.hilbert, vec![1, 4, 6, 4, 1, 0]);
    }

    #[test]
    fn singular_report_and_check() {
        let x = Hypersurface::parse("x0^3", 3).unwrap();
        let r = jacobian_report(&x, &PrimeField::default(), &EngineConfig::default()).unwrap();
        assert!(!r.smooth_certified);
        assert!(r.beauville_degree_d.is_none());
        assert_eq!(
            beauville_check(&x, &PrimeField::default(), &EngineConfig::default()),
            Err(JacobianError::NotSmooth)
        );
    }

    #[test]
    fn thresholds_in_p4() {
        let fp = PrimeField::default();
        for (d, covered) in [(5, false), (6, true), (7, true)] {
            let range = jacobian_range(4, d).unwrap();
            assert_eq!(range.contains(d), covered);
            assert_eq!(maximal_variation(4, d), covered);
            assert_eq!(range.end + 1, range_bound2(4, d - 1).unwrap().end);
        }
        let x = Hypersurface::fermat(5, 4).unwrap();
        let r = jacobian_report(&x, &fp, &EngineConfig::default()).unwrap();
        assert!(!r.abstract_claim_covered && !r.maximal_variation);
        assert_eq!((r.variation_index, r.substituted_threshold), (3, Some(6)));
    }
}
