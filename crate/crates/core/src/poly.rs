//! Monomials, homogeneous forms and the ideals built from them.
//!
//! Monomials are ordered graded-lexicographically with `x0` the largest
//! variable. Enumerations list monomials from largest to smallest, which is
//! also the column order of every matrix in [`crate::linalg`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{Field, FieldError, PrimeField, RationalField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {0} vs {1}")]
    VarCountMismatch(usize, usize),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("generator {index} has degree {found} but {expected} was declared")]
    GeneratorDegree {
        index: usize,
        expected: u32,
        found: u32,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("variable x{index} at byte {offset} is out of range for {num_vars} variables")]
    VariableOutOfRange {
        index: usize,
        num_vars: usize,
        offset: usize,
    },
    #[error("non-homogeneous input: found degrees {degrees:?}")]
    NonHomogeneous { degrees: BTreeSet<u32> },
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::VariableOutOfRange { offset, .. } => {
                Some(*offset)
            }
            ParseError::NonHomogeneous { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn one(num_vars: usize) -> Self {
        Monomial::new(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut exps = vec![0; num_vars];
        exps[i] = 1;
        Monomial { exps, degree: 1 }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn num_vars(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.num_vars(), other.num_vars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
            degree: self.degree + other.degree,
        }
    }

    pub fn mul_var(&self, i: usize) -> Monomial {
        let mut m = self.clone();
        m.exps[i] += 1;
        m.degree += 1;
        m
    }

    /// `self / x_i`, if `x_i` divides `self`.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        if self.exps[i] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.exps[i] -= 1;
        m.degree -= 1;
        Some(m)
    }

    /// Index of the first variable dividing the monomial.
    pub fn first_var(&self) -> Option<usize> {
        self.exps.iter().position(|&e| e > 0)
    }

    /// Index of the last variable dividing the monomial.
    pub fn last_var(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e > 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        Ok(())
    }
}

/// All monomials of `degree` in `num_vars` variables, largest first.
pub fn enumerate_monomials(num_vars: usize, degree: u32) -> Vec<Monomial> {
    assert!(num_vars >= 1, "need at least one variable");
    let mut out = Vec::with_capacity(binomial(
        degree as u64 + num_vars as u64 - 1,
        num_vars as u64 - 1,
    ) as usize);
    let mut exps = vec![0u32; num_vars];
    fill(&mut exps, 0, degree, &mut out, degree);
    out
}

fn fill(exps: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<Monomial>, degree: u32) {
    if pos + 1 == exps.len() {
        exps[pos] = remaining;
        out.push(Monomial {
            exps: exps.to_vec(),
            degree,
        });
        return;
    }
    for e in (0..=remaining).rev() {
        exps[pos] = e;
        fill(exps, pos + 1, remaining - e, out, degree);
    }
    exps[pos] = 0;
}

/// Number of monomials of `degree` in `num_vars` variables.
pub fn monomial_count(num_vars: usize, degree: u32) -> u64 {
    binomial(degree as u64 + num_vars as u64 - 1, num_vars as u64 - 1)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// A homogeneous polynomial. Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct GradedForm<F: Field> {
    field: F,
    num_vars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> fmt::Debug for GradedForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedForm({})", self)
    }
}

impl<F: Field> GradedForm<F> {
    pub fn zero(field: F, num_vars: usize, degree: u32) -> Self {
        GradedForm {
            field,
            num_vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a form from `(monomial, coefficient)` pairs, summing repeated
    /// monomials and dropping zeros.
    pub fn from_terms<I>(
        field: F,
        num_vars: usize,
        degree: u32,
        terms: I,
    ) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, F::Elem)>,
    {
        let mut form = GradedForm::zero(field, num_vars, degree);
        for (m, c) in terms {
            if m.num_vars() != num_vars {
                return Err(PolyError::VarCountMismatch(num_vars, m.num_vars()));
            }
            if m.degree() != degree {
                return Err(PolyError::DegreeMismatch {
                    expected: degree,
                    found: m.degree(),
                });
            }
            form.add_term(m, c);
        }
        Ok(form)
    }

    /// `c0*x0 + ... + cn*xn`.
    pub fn linear(field: F, coeffs: &[F::Elem]) -> Self {
        let n = coeffs.len();
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (Monomial::var(n, i), c.clone()));
        GradedForm::from_terms(field, n, 1, terms).expect("linear terms are homogeneous")
    }

    fn add_term(&mut self, m: Monomial, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        let field = &self.field;
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = field.add(v, &c);
                if field.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms from the largest monomial down.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> F::Elem {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn multiply(&self, other: &GradedForm<F>) -> Result<GradedForm<F>, PolyError> {
        if self.num_vars != other.num_vars {
            return Err(PolyError::VarCountMismatch(self.num_vars, other.num_vars));
        }
        let mut out = GradedForm::zero(
            self.field.clone(),
            self.num_vars,
            self.degree + other.degree,
        );
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.mul(b), self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &GradedForm<F>) -> Result<GradedForm<F>, PolyError> {
        if self.num_vars != other.num_vars {
            return Err(PolyError::VarCountMismatch(self.num_vars, other.num_vars));
        }
        if self.degree != other.degree {
            return Err(PolyError::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &F::Elem) -> GradedForm<F> {
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| (m.clone(), self.field.mul(v, c)));
        GradedForm::from_terms(self.field.clone(), self.num_vars, self.degree, terms)
            .expect("scaling preserves homogeneity")
    }

    /// Partial derivative with respect to `x_var`. The derivative of a
    /// constant is the zero form of degree 0.
    pub fn derivative(&self, var: usize) -> GradedForm<F> {
        let degree = self.degree.saturating_sub(1);
        let mut out = GradedForm::zero(self.field.clone(), self.num_vars, degree);
        for (m, c) in &self.terms {
            let e = m.exps[var];
            if let Some(q) = m.div_var(var) {
                out.add_term(q, self.field.mul(c, &self.field.from_i64(e as i64)));
            }
        }
        out
    }

    /// Image of the form over another field, through the canonical rational
    /// representative of each coefficient.
    pub fn reduce<G: Field>(&self, target: &G) -> Result<GradedForm<G>, PolyError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), target.from_rational(&self.field.lift(c))?));
        }
        GradedForm::from_terms(target.clone(), self.num_vars, self.degree, terms)
    }

    /// Text form in the grammar accepted by [`parse_form`].
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return if self.degree == 0 {
                "0".to_string()
            } else {
                format!("0*x0^{}", self.degree)
            };
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            let q = self.field.lift(c);
            let negative = q.is_negative();
            let abs = q.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let coeff = if abs.is_integer() {
                abs.numer().to_string()
            } else {
                format!("{}/{}", abs.numer(), abs.denom())
            };
            if m.degree() == 0 {
                out.push_str(&coeff);
            } else if abs.is_one() {
                out.push_str(&m.to_string());
            } else {
                out.push_str(&format!("{coeff}*{m}"));
            }
        }
        out
    }
}

impl<F: Field> serde::Serialize for GradedForm<F> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render())
    }
}

impl<F: Field> fmt::Display for GradedForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Parses a homogeneous form such as `x0^3 + 2*x1*x2^2`.
///
/// Terms are separated by `+`/`-`; a term is an optional integer (or
/// `a/b`) coefficient followed by `*`-separated powers `x<k>^<e>`.
/// Whitespace is ignored.
pub fn parse_form<F: Field>(
    text: &str,
    num_vars: usize,
    field: &F,
) -> Result<GradedForm<F>, PolyError> {
    let raw = Parser::new(text, num_vars).parse()?;
    let degrees: BTreeSet<u32> = raw.iter().map(|(m, _)| m.degree()).collect();
    if degrees.len() > 1 {
        return Err(ParseError::NonHomogeneous { degrees }.into());
    }
    let degree = degrees.into_iter().next().unwrap_or(0);
    let mut terms = Vec::with_capacity(raw.len());
    for (m, c) in raw {
        terms.push((m, field.from_rational(&c)?));
    }
    GradedForm::from_terms(field.clone(), num_vars, degree, terms)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    num_vars: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, num_vars: usize) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
            num_vars,
        }
    }

    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected an integer");
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn small_integer(&mut self) -> Result<(u64, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let n = self.integer()?;
        match u64::try_from(n) {
            Ok(v) if v <= u32::MAX as u64 => Ok((v, start)),
            _ => self.err(start, "integer too large"),
        }
    }

    fn parse(mut self) -> Result<Vec<(Monomial, BigRational)>, ParseError> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let mut sign = BigInt::one();
            match self.peek() {
                None if first => return self.err(self.pos, "empty polynomial"),
                None => return self.err(self.pos, "expected a term after operator"),
                Some(b'+') => self.pos += 1,
                Some(b'-') => {
                    self.pos += 1;
                    sign = -sign;
                }
                Some(_) if first => {}
                Some(c) => {
                    return self.err(
                        self.pos,
                        format!("expected '+' or '-', found '{}'", c as char),
                    )
                }
            }
            first = false;
            let (m, c) = self.term()?;
            terms.push((m, c * BigRational::from_integer(sign)));
            if self.peek().is_none() {
                break;
            }
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<(Monomial, BigRational), ParseError> {
        let mut coeff = BigRational::one();
        let mut exps = vec![0u32; self.num_vars];
        let mut expect_factor = true;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut q = BigRational::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let at = self.pos;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return self.err(at, "zero denominator");
                    }
                    q /= BigRational::from_integer(den);
                }
                coeff = q;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                } else {
                    expect_factor = false;
                }
            }
            _ => {}
        }
        if expect_factor {
            loop {
                self.factor(&mut exps)?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        } else if let Some(b'x') = self.peek() {
            // "2x0" without '*'
            loop {
                self.factor(&mut exps)?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        Ok((Monomial::new(exps), coeff))
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<(), ParseError> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some(b'x') => self.pos += 1,
            Some(c) => return self.err(at, format!("expected a variable, found '{}'", c as char)),
            None => return self.err(at, "expected a variable"),
        }
        if !matches!(self.bytes.get(self.pos), Some(c) if c.is_ascii_digit()) {
            return self.err(self.pos, "expected a variable index after 'x'");
        }
        let (index, _) = self.small_integer()?;
        let index = index as usize;
        if index >= self.num_vars {
            return Err(ParseError::VariableOutOfRange {
                index,
                num_vars: self.num_vars,
                offset: at,
            });
        }
        let mut e = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let (v, _) = self.small_integer()?;
            e = v as u32;
        }
        exps[index] += e;
        Ok(())
    }
}

/// SplitMix64 step; derives independent child seeds from a parent seed.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    let mut z = parent ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Dense form whose coefficients are uniform in `F_p`, reproducible from `seed`.
pub fn random_form(
    field: &PrimeField,
    num_vars: usize,
    degree: u32,
    seed: u64,
) -> GradedForm<PrimeField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<_> = enumerate_monomials(num_vars, degree)
        .into_iter()
        .map(|m| (m, rng.random_range(0..field.modulus())))
        .collect();
    GradedForm::from_terms(*field, num_vars, degree, terms)
        .expect("enumerated monomials are homogeneous")
}

/// A homogeneous ideal presented by explicit generators over the rationals.
///
/// Generators are kept over `Q` so that the same ideal can be reduced modulo
/// a prime for fast elimination or examined exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct CiSpec {
    num_vars: usize,
    degrees: Vec<u32>,
    generators: Vec<GradedForm<RationalField>>,
    seed: Option<u64>,
}

impl CiSpec {
    pub fn new(
        num_vars: usize,
        degrees: Vec<u32>,
        generators: Vec<GradedForm<RationalField>>,
        seed: Option<u64>,
    ) -> Result<Self, PolyError> {
        if degrees.len() != generators.len() {
            return Err(PolyError::VarCountMismatch(degrees.len(), generators.len()));
        }
        for (index, (g, &d)) in generators.iter().zip(&degrees).enumerate() {
            if g.num_vars() != num_vars {
                return Err(PolyError::VarCountMismatch(num_vars, g.num_vars()));
            }
            if g.degree() != d {
                return Err(PolyError::GeneratorDegree {
                    index,
                    expected: d,
                    found: g.degree(),
                });
            }
        }
        Ok(CiSpec {
            num_vars,
            degrees,
            generators,
            seed,
        })
    }

    pub fn from_generators(
        generators: Vec<GradedForm<RationalField>>,
        num_vars: usize,
    ) -> Result<Self, PolyError> {
        let degrees = generators.iter().map(|g| g.degree()).collect();
        CiSpec::new(num_vars, degrees, generators, None)
    }

    pub fn parse<S: AsRef<str>>(texts: &[S], num_vars: usize) -> Result<Self, PolyError> {
        let generators = texts
            .iter()
            .map(|t| parse_form(t.as_ref(), num_vars, &RationalField))
            .collect::<Result<Vec<_>, _>>()?;
        CiSpec::from_generators(generators, num_vars)
    }

    /// Generators with uniform coefficients in `[0, p)`, one child seed per
    /// generator.
    pub fn random(field: &PrimeField, num_vars: usize, degrees: &[u32], seed: u64) -> Self {
        let generators = degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                random_form(field, num_vars, d, derive_seed(seed, i as u64))
                    .reduce(&RationalField)
                    .expect("residues lift to integers")
            })
            .collect();
        CiSpec {
            num_vars,
            degrees: degrees.to_vec(),
            generators,
            seed: Some(seed),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn generators(&self) -> &[GradedForm<RationalField>] {
        &self.generators
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn generators_over<F: Field>(&self, field: &F) -> Result<Vec<GradedForm<F>>, PolyError> {
        self.generators.iter().map(|g| g.reduce(field)).collect()
    }

    pub fn rendered(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.render()).collect()
    }
}
