//! Closed-form degree ranges for the weak Lefschetz property of
//! equigenerated complete intersections, and the syzygy-bundle arithmetic
//! behind them.
//!
//! Every range is a half-open interval `[start, end)` of integers. Ranges
//! of WLP degrees start at 1: the map in degree `t` goes from `A_{t-1}` to
//! `A_t`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("n must be at least 3, got {0}")]
    AmbientTooSmall(i64),
    #[error("d must be at least 2, got {0}")]
    DegreeTooSmall(i64),
    #[error("expected {expected} quotient twists for rank {n} with {k} sub twists, found {found}")]
    ShapeLength {
        n: usize,
        k: usize,
        expected: usize,
        found: usize,
    },
    #[error("bundle rank must be positive")]
    ZeroRank,
}

fn check_nd(n: i64, d: i64) -> Result<(), BoundsError> {
    if n < 3 {
        return Err(BoundsError::AmbientTooSmall(n));
    }
    if d < 2 {
        return Err(BoundsError::DegreeTooSmall(d));
    }
    Ok(())
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

/// `{t : start <= t < end}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntInterval {
    pub start: i64,
    pub end: i64,
}

impl IntInterval {
    pub fn new(start: i64, end: i64) -> Self {
        IntInterval { start, end }
    }

    /// `{t : start <= t <= last}`.
    pub fn closed(start: i64, last: i64) -> Self {
        IntInterval {
            start,
            end: last + 1,
        }
    }

    pub fn single(t: i64) -> Self {
        IntInterval::closed(t, t)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn contains(&self, t: i64) -> bool {
        self.start <= t && t < self.end
    }

    /// Largest member, if any.
    pub fn last(&self) -> Option<i64> {
        (!self.is_empty()).then_some(self.end - 1)
    }

    pub fn len(&self) -> u64 {
        if self.is_empty() {
            0
        } else {
            (self.end - self.start) as u64
        }
    }

    pub fn is_subset(&self, other: &IntInterval) -> bool {
        self.is_empty() || (other.start <= self.start && self.end <= other.end)
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.start..self.end.max(self.start)
    }
}

impl fmt::Display for IntInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.last() {
            None => write!(f, "{{}}"),
            Some(l) if l == self.start => write!(f, "{{{l}}}"),
            Some(l) => write!(f, "{{{}..={l}}}", self.start),
        }
    }
}

impl Serialize for IntInterval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("IntInterval", 4)?;
        st.serialize_field("start", &self.start)?;
        st.serialize_field("end", &self.end)?;
        st.serialize_field("empty", &self.is_empty())?;
        st.serialize_field("last", &self.last())?;
        st.end()
    }
}

/// Twists of `0 -> (+) O(a_i) -> (+) O(b_j) -> E -> 0` on `P^n`, with `E` of
/// rank `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolutionShape {
    n: usize,
    sub_twists: Vec<i64>,
    quot_twists: Vec<i64>,
}

impl ResolutionShape {
    /// Sorts both lists non-increasingly.
    pub fn new(
        n: usize,
        mut sub_twists: Vec<i64>,
        mut quot_twists: Vec<i64>,
    ) -> Result<Self, BoundsError> {
        if n == 0 {
            return Err(BoundsError::ZeroRank);
        }
        let k = sub_twists.len();
        if quot_twists.len() != n + k {
            return Err(BoundsError::ShapeLength {
                n,
                k,
                expected: n + k,
                found: quot_twists.len(),
            });
        }
        sub_twists.sort_unstable_by(|a, b| b.cmp(a));
        quot_twists.sort_unstable_by(|a, b| b.cmp(a));
        Ok(ResolutionShape {
            n,
            sub_twists,
            quot_twists,
        })
    }

    /// `0 -> O(-d) -> O^{n+1} -> E* -> 0`, the dual of the syzygy bundle of
    /// `n + 1` forms of degree `d`.
    pub fn dual_ci(n: usize, d: i64) -> Self {
        ResolutionShape::new(n, vec![-d], vec![0; n + 1]).expect("lengths match")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sub_twists(&self) -> &[i64] {
        &self.sub_twists
    }

    pub fn quot_twists(&self) -> &[i64] {
        &self.quot_twists
    }
}

/// `(sum b_j - sum a_i) / n`.
pub fn slope(shape: &ResolutionShape) -> BigRational {
    let b: BigInt = shape.quot_twists.iter().map(|&x| BigInt::from(x)).sum();
    let a: BigInt = shape.sub_twists.iter().map(|&x| BigInt::from(x)).sum();
    BigRational::new(b - a, BigInt::from(shape.n))
}

/// Stable exactly when `b_1 < slope`.
pub fn is_stable(shape: &ResolutionShape) -> bool {
    let b1 = BigRational::from_integer(BigInt::from(shape.quot_twists[0]));
    b1 < slope(shape)
}

/// Where the generic splitting type `b_1 >= ... >= b_n` (summing to `-d`)
/// of the syzygy bundle of `n + 1` general forms of degree `d` can sit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingBounds {
    pub n: i64,
    pub d: i64,
    pub a: i64,
    pub b: i64,
    pub lower_b1: i64,
    pub upper_bn: i64,
}

impl SplittingBounds {
    /// The most balanced splitting type: `n - b` entries `-a`, then `b`
    /// entries `-a - 1`.
    pub fn witness(&self) -> Vec<i64> {
        let n = self.n as usize;
        let b = self.b as usize;
        let mut v = vec![-self.a; n - b];
        v.extend(std::iter::repeat_n(-self.a - 1, b));
        v
    }

    /// Non-increasing, gaps at most 1, sum `-d`, and within both bounds.
    pub fn admits(&self, splitting: &[i64]) -> bool {
        splitting.len() == self.n as usize
            && splitting
                .windows(2)
                .all(|w| w[0] >= w[1] && w[0] - w[1] <= 1)
            && splitting.iter().sum::<i64>() == -self.d
            && splitting[0] >= self.lower_b1
            && splitting[splitting.len() - 1] <= self.upper_bn
    }
}

pub fn splitting_bounds(n: i64, d: i64) -> Result<SplittingBounds, BoundsError> {
    check_nd(n, d)?;
    let a = d.div_euclid(n);
    let b = d.rem_euclid(n);
    Ok(SplittingBounds {
        n,
        d,
        a,
        b,
        lower_b1: -a - (n + 1) / 2,
        upper_bn: -a + (n - 1) / 2,
    })
}

/// Which inputs a registry entry speaks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    /// `n + 1` forms of degree `d` forming a complete intersection in `P^n`.
    CompleteIntersection,
    /// Jacobian ideal of a smooth hypersurface of degree `d` in `P^n`.
    Jacobian,
}

/// A previously known WLP range, as a formula in `(n, d)`.
#[derive(Debug, Clone, Copy)]
pub struct RegistryEntry {
    pub source: &'static str,
    pub statement: &'static str,
    pub scope: Scope,
    pub range: fn(i64, i64) -> Option<IntInterval>,
}

/// Socle degree of the Jacobian algebra of a degree-`d` hypersurface in `P^n`.
fn jacobian_socle(n: i64, d: i64) -> i64 {
    (n + 1) * (d - 2)
}

pub const REGISTRY: &[RegistryEntry] = &[
    RegistryEntry {
        source: "Alzati-Re",
        statement: "WLP in degree d for complete intersections of forms of degree d",
        scope: Scope::CompleteIntersection,
        range: |_, d| Some(IntInterval::single(d)),
    },
    RegistryEntry {
        source: "BMMN",
        statement: "n = 3: WLP for every t < floor((3d+1)/2)",
        scope: Scope::CompleteIntersection,
        range: |n, d| (n == 3).then(|| IntInterval::new(1, (3 * d + 1) / 2)),
    },
    RegistryEntry {
        source: "Ilardi",
        statement: "d > 2: Jacobian ideal has the WLP in degree d-1",
        scope: Scope::Jacobian,
        range: |_, d| (d > 2).then(|| IntInterval::single(d - 1)),
    },
    RegistryEntry {
        source: "Alzati-Re",
        statement: "Jacobian ideal is generated in degree d-1, so WLP in degree d-1",
        scope: Scope::Jacobian,
        range: |_, d| (d > 1).then(|| IntInterval::single(d - 1)),
    },
    RegistryEntry {
        source: "BMMN surfaces",
        statement: "smooth surfaces in P^3 of degree 3, 4, 5 or 6: full WLP",
        scope: Scope::Jacobian,
        range: |n, d| {
            (n == 3 && (3..=6).contains(&d))
                .then(|| IntInterval::closed(1, jacobian_socle(n, d) + 1))
        },
    },
    RegistryEntry {
        source: "BMMN surfaces",
        statement:
            "smooth surfaces in P^3 of degree d > 2: WLP in all degrees <= floor((3d+1)/2) - 2",
        scope: Scope::Jacobian,
        range: |n, d| (n == 3 && d > 2).then(|| IntInterval::closed(1, (3 * d + 1) / 2 - 2)),
    },
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegistryHit {
    pub source: &'static str,
    pub statement: &'static str,
    pub scope: Scope,
    pub range: IntInterval,
}

/// Registry entries of `scope` that apply to `(n, d)`.
pub fn registry(scope: Scope, n: i64, d: i64) -> Vec<RegistryHit> {
    REGISTRY
        .iter()
        .filter(|e| e.scope == scope)
        .filter_map(|e| {
            (e.range)(n, d).map(|range| RegistryHit {
                source: e.source,
                statement: e.statement,
                scope: e.scope,
                range,
            })
        })
        .collect()
}

/// `{t : d - 1 < t < d + floor(d/n) - floor((n-1)/2)}`.
pub fn range_main(n: i64, d: i64) -> Result<IntInterval, BoundsError> {
    check_nd(n, d)?;
    Ok(IntInterval::new(d, d + d.div_euclid(n) - (n - 1) / 2))
}

/// `{t : d - 1 < t <= d + a - floor((n-1)/2)}` with `a = floor(d/n)`: the
/// endpoint reached at the end of the argument, one past the stated range.
pub fn range_main_proof_endpoint(n: i64, d: i64) -> Result<IntInterval, BoundsError> {
    check_nd(n, d)?;
    Ok(IntInterval::closed(d, d + d.div_euclid(n) - (n - 1) / 2))
}

/// `{t : 1 <= t <= d + ceil(d/n)}`.
pub fn range_bound2(n: i64, d: i64) -> Result<IntInterval, BoundsError> {
    check_nd(n, d)?;
    Ok(IntInterval::closed(1, d + ceil_div(d, n)))
}

/// `{t : 1 <= t < -b_1}` for a known generic splitting type.
pub fn b1_range(b1: i64) -> IntInterval {
    IntInterval::new(1, -b1)
}

/// `{t : 1 <= t < d - 1 + ceil((d-1)/n)}` for a smooth hypersurface of
/// degree `d` in `P^n`.
pub fn jacobian_range(n: i64, d: i64) -> Result<IntInterval, BoundsError> {
    check_nd(n, d)?;
    if d < 3 {
        return Err(BoundsError::DegreeTooSmall(d));
    }
    Ok(IntInterval::new(1, d - 1 + ceil_div(d - 1, n)))
}

/// Maximal variation for a smooth degree-`d` hypersurface in `P^ambient`.
/// The corollary writes the ambient space as `P^{m+1}` with `m >= 2` and
/// asks for `d >= m + 3`.
pub fn maximal_variation(ambient: i64, d: i64) -> bool {
    let m = ambient - 1;
    m >= 2 && d >= m + 3
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlaggedRange {
    pub range: IntInterval,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JacobianBounds {
    /// Applies to a smooth hypersurface of degree `d` in `P^n`.
    pub range: IntInterval,
    /// Degree `d` lies in `range`.
    pub beauville_covered: bool,
    pub maximal_variation: bool,
    pub registry: Vec<RegistryHit>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: i64,
    pub d: i64,
    pub splitting: SplittingBounds,
    pub splitting_witness: Vec<i64>,
    pub dual_shape_slope: String,
    pub dual_shape_stable: bool,
    pub range_main: IntInterval,
    pub range_main_proof_endpoint: FlaggedRange,
    pub range_bound2: IntInterval,
    pub range_b1: Option<IntInterval>,
    /// Ranges for the Jacobian ideal of a degree-`d` hypersurface in `P^n`;
    /// absent for `d = 2`.
    pub jacobian: Option<JacobianBounds>,
    pub registry: Vec<RegistryHit>,
}

pub const PROOF_ENDPOINT_NOTE: &str =
    "the argument ends with t <= d + a - floor((n-1)/2), one more degree than the stated strict bound";

pub fn wlp_ranges(n: i64, d: i64, b1: Option<i64>) -> Result<BoundReport, BoundsError> {
    check_nd(n, d)?;
    let splitting = splitting_bounds(n, d)?;
    let shape = ResolutionShape::dual_ci(n as usize, d);
    let jacobian = (d >= 3).then(|| {
        let range = jacobian_range(n, d).expect("n >= 3, d >= 3");
        JacobianBounds {
            range,
            beauville_covered: range.contains(d),
            maximal_variation: maximal_variation(n, d),
            registry: registry(Scope::Jacobian, n, d),
        }
    });
    Ok(BoundReport {
        n,
        d,
        splitting_witness: splitting.witness(),
        splitting,
        dual_shape_slope: slope(&shape).to_string(),
        dual_shape_stable: is_stable(&shape),
        range_main: range_main(n, d)?,
        range_main_proof_endpoint: FlaggedRange {
            range: range_main_proof_endpoint(n, d)?,
            note: PROOF_ENDPOINT_NOTE,
        },
        range_bound2: range_bound2(n, d)?,
        range_b1: b1.map(b1_range),
        jacobian,
        registry: registry(Scope::CompleteIntersection, n, d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn slopes() {
        assert_eq!(slope(&ResolutionShape::dual_ci(3, 7)), q(7, 3));
        assert_eq!(
            slope(&ResolutionShape::new(4, vec![0, 0], vec![0; 6]).unwrap()),
            q(0, 1)
        );
        let s = ResolutionShape::new(3, vec![0, 1], vec![1, 2, 0, 2, 1]).unwrap();
        assert_eq!(s.sub_twists(), &[1, 0]);
        assert_eq!(s.quot_twists(), &[2, 2, 1, 1, 0]);
        assert_eq!(slope(&s), q(5, 3));
    }

    #[test]
    fn stability() {
        assert!(is_stable(&ResolutionShape::dual_ci(3, 1)));
        // b_1 = mu = 1
        let eq = ResolutionShape::new(3, vec![0], vec![1, 1, 1, 0]).unwrap();
        assert_eq!(slope(&eq), q(1, 1));
        assert!(!is_stable(&eq));
        let s = ResolutionShape::new(3, vec![0], vec![3, 0, 0, 0]).unwrap();
        assert_eq!(slope(&s), q(1, 1));
        assert!(!is_stable(&s));
        assert!(matches!(
            ResolutionShape::new(3, vec![0], vec![0; 3]),
            Err(BoundsError::ShapeLength { .. })
        ));
    }

    #[test]
    fn splitting_examples() {
        let s = splitting_bounds(3, 7).unwrap();
        assert_eq!((s.a, s.b, s.lower_b1, s.upper_bn), (2, 1, -4, -1));
        let s = splitting_bounds(4, 4).unwrap();
        assert_eq!((s.a, s.b, s.lower_b1, s.upper_bn), (1, 0, -3, 0));
        let s = splitting_bounds(3, 3).unwrap();
        assert_eq!((s.a, s.b, s.lower_b1, s.upper_bn), (1, 0, -3, 0));
        assert_eq!(splitting_bounds(2, 5), Err(BoundsError::AmbientTooSmall(2)));
        assert_eq!(splitting_bounds(3, 1), Err(BoundsError::DegreeTooSmall(1)));
    }

    /// All non-increasing tuples of length `n` with gaps 0 or 1 and sum `-d`.
    fn unit_gap_tuples(n: usize, d: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for top in -d..=0 {
            for gaps in 0..1u32 << (n - 1) {
                let mut v = vec![top];
                for i in 0..n - 1 {
                    v.push(v[i] - ((gaps >> i) & 1) as i64);
                }
                if v.iter().sum::<i64>() == -d {
                    out.push(v);
                }
            }
        }
        out
    }

    #[test]
    fn every_unit_gap_type_respects_the_bounds() {
        for n in 3..=7 {
            for d in 2..=25 {
                let s = splitting_bounds(n, d).unwrap();
                assert!(s.lower_b1 <= s.upper_bn + (n - 1));
                assert!(s.admits(&s.witness()), "n={n} d={d}");
                let all = unit_gap_tuples(n as usize, d);
                assert!(!all.is_empty());
                assert!(all.iter().all(|v| s.admits(v)), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn range_examples() {
        let r = wlp_ranges(3, 7, None).unwrap();
        assert_eq!(r.range_main, IntInterval::single(7));
        assert_eq!(r.range_main.to_string(), "{7}");
        assert_eq!(r.range_bound2.last(), Some(10));
        assert_eq!(r.range_main_proof_endpoint.range, IntInterval::closed(7, 8));
        assert_eq!(range_bound2(4, 7).unwrap().last(), Some(9));
        assert_eq!(range_bound2(3, 2).unwrap().last(), Some(3));
        assert!(range_main(5, 4).unwrap().is_empty());
        assert!(wlp_ranges(2, 5, None).is_err());
    }

    #[test]
    fn registry_entries() {
        let hits = registry(Scope::CompleteIntersection, 3, 7);
        assert_eq!(hits.len(), 2);
        assert_eq!(hits[0].range, IntInterval::single(7));
        assert_eq!(hits[1].range.last(), Some(10));
        assert_eq!(registry(Scope::CompleteIntersection, 4, 7).len(), 1);
        let j = registry(Scope::Jacobian, 3, 3);
        assert_eq!(j[0].range, IntInterval::single(2));
        // degree-3 surfaces: socle degree 4, full WLP covers t = 1..=5
        assert_eq!(j[2].range, IntInterval::closed(1, 5));
        assert_eq!(j[3].range.last(), Some(3));
        assert_eq!(registry(Scope::Jacobian, 3, 7).len(), 3);
    }

    #[test]
    fn range_from_b1() {
        assert_eq!(b1_range(-3).last(), Some(2));
        assert!(b1_range(0).is_empty());
        for n in 3..=8 {
            for d in 2..=30 {
                let s = splitting_bounds(n, d).unwrap();
                assert_eq!(b1_range(s.lower_b1).end, s.a + (n + 1) / 2);
            }
        }
    }

    #[test]
    fn jacobian_ranges() {
        assert_eq!(jacobian_range(4, 7).unwrap().end, 8);
        assert_eq!(jacobian_range(3, 3).unwrap().end, 3);
        let r = wlp_ranges(4, 7, None).unwrap().jacobian.unwrap();
        assert!(r.beauville_covered && r.maximal_variation);
        let r = wlp_ranges(4, 6, None).unwrap().jacobian.unwrap();
        assert!(r.beauville_covered && r.maximal_variation);
        let r = wlp_ranges(4, 5, None).unwrap().jacobian.unwrap();
        assert!(!r.beauville_covered && !r.maximal_variation);
        assert!(wlp_ranges(4, 2, None).unwrap().jacobian.is_none());
        assert!(!maximal_variation(2, 10));
    }

    #[test]
    fn bound2_against_bmmn_in_four_variables() {
        let exceptions: Vec<i64> = (2..=500)
            .filter(|&d| range_bound2(3, d).unwrap().last().unwrap() > (3 * d + 1) / 2 - 1)
            .collect();
        assert_eq!(exceptions, vec![2, 4]);
    }

    proptest! {
        #[test]
        fn bound_relations(n in 3i64..=12, d in 2i64..=200) {
            let main = range_main(n, d).unwrap();
            let b2 = range_bound2(n, d).unwrap();
            prop_assert!(main.end <= b2.end);
            prop_assert!(main.is_subset(&b2));
            prop_assert!(is_stable(&ResolutionShape::dual_ci(n as usize, d)));
            if d >= 3 {
                // one short of the bound2 range for generators of degree d - 1
                let j = jacobian_range(n, d).unwrap();
                prop_assert_eq!(j.end + 1, range_bound2(n, d - 1).unwrap().end);
                prop_assert_eq!(j.contains(d), maximal_variation(n, d));
            }
        }
    }
}
