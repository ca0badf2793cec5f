//! Graded linear algebra over an exact field.
//!
//! [`macaulay_piece`] assembles the Macaulay matrix of `[I]_t`,
//! [`quotient_basis`] reads the standard monomials of `[R/I]_t` off its
//! reduced echelon form, and [`mul_map`] writes multiplication by a linear
//! form between two consecutive quotient pieces in those coordinates.
//!
//! [`QuotientTower`] computes the same quotient bases degree by degree
//! without ever forming the full Macaulay matrix: `[R/I]_t` is presented as
//! the quotient of `R_1 (x) [R/I]_{t-1}` by the Koszul relations coming from
//! `[R/I]_{t-2}` and by the generators of degree `t`. Its matrices have
//! roughly `(n+1) * h_{t-1}` columns instead of `C(t+n, n)`, which is what
//! makes socle degrees of 20 and beyond reachable in five variables.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::field::Field;
use crate::poly::{enumerate_monomials, GradedForm, Monomial, PolyError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("source degree {src} and target degree {tgt} are not consecutive")]
    DegreeMismatch { src: u32, tgt: u32 },
    #[error("multiplier has degree {0}, expected a linear form")]
    NotLinear(u32),
    #[error("variable count mismatch: {0} vs {1}")]
    VarCountMismatch(usize, usize),
    #[error("no normal form recorded for {0}")]
    MissingNormalForm(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        Matrix {
            field,
            rows: n,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    /// Row space in reduced echelon form.
    pub fn echelon(&self) -> EchelonBasis<F> {
        let mut e = EchelonBasis::new(self.field.clone(), self.cols);
        for r in 0..self.rows {
            if e.is_full() {
                break;
            }
            e.insert(self.row(r).to_vec());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Same matrix with its rows permuted: row `k` of the result is row
    /// `order[k]` of `self`.
    pub fn permute_rows(&self, order: &[usize]) -> Self {
        let rows = order.iter().map(|&r| self.row(r).to_vec()).collect();
        Matrix::from_rows(self.field.clone(), self.cols, rows)
    }
}

/// A row space kept in reduced row-echelon form while rows stream in.
///
/// The pivot of a row is its first nonzero column. Every stored row is
/// normalized to 1 at its pivot and vanishes at every other pivot column.
#[derive(Debug, Clone, PartialEq)]
pub struct EchelonBasis<F: Field> {
    field: F,
    cols: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
    pivot_row: Vec<Option<usize>>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(field: F, cols: usize) -> Self {
        EchelonBasis {
            field,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![None; cols],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// The stored row whose pivot is `col`.
    pub fn pivot_row(&self, col: usize) -> Option<&[F::Elem]> {
        self.pivot_row[col].map(|r| self.rows[r].as_slice())
    }

    /// Pivot columns in increasing order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut p = self.pivots.clone();
        p.sort_unstable();
        p
    }

    /// Reduces `row` against the basis and keeps it if it is independent.
    /// Returns whether the rank grew.
    pub fn insert(&mut self, mut row: Vec<F::Elem>) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        let f = &self.field;
        // stored rows vanish at each other's pivots, so the multipliers can
        // all be read off the incoming row up front
        let terms: Vec<(F::Elem, &[F::Elem])> = self
            .pivots
            .iter()
            .zip(&self.rows)
            .filter(|(&p, _)| !f.is_zero(&row[p]))
            .map(|(&p, r)| (row[p].clone(), r.as_slice()))
            .collect();
        f.sub_combination(&mut row, &terms);
        drop(terms);
        let Some(lead) = row.iter().position(|v| !f.is_zero(v)) else {
            return false;
        };
        let inv = f.inv(&row[lead]).expect("lead entry is nonzero");
        f.scale(&mut row[lead..], &inv);
        for other in self.rows.iter_mut() {
            if !f.is_zero(&other[lead]) {
                let c = other[lead].clone();
                f.sub_scaled(other, &c, &row);
            }
        }
        self.pivot_row[lead] = Some(self.rows.len());
        self.pivots.push(lead);
        self.rows.push(row);
        true
    }
}

/// The Macaulay matrix of `[I]_t`: one row per shifted generator `m * f_i`,
/// one column per monomial of degree `t` (largest first).
#[derive(Debug, Clone)]
pub struct MacaulayPiece<F: Field> {
    degree: u32,
    num_vars: usize,
    columns: Vec<Monomial>,
    matrix: Matrix<F>,
    echelon: EchelonBasis<F>,
}

impl<F: Field> MacaulayPiece<F> {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn columns(&self) -> &[Monomial] {
        &self.columns
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn echelon(&self) -> &EchelonBasis<F> {
        &self.echelon
    }

    /// `dim [I]_t`.
    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// `dim [R/I]_t`.
    pub fn quotient_dim(&self) -> usize {
        self.columns.len() - self.rank()
    }
}

pub fn macaulay_piece<F: Field>(
    field: &F,
    generators: &[GradedForm<F>],
    num_vars: usize,
    t: u32,
) -> Result<MacaulayPiece<F>, LinalgError> {
    let columns = enumerate_monomials(num_vars, t);
    let index: HashMap<&Monomial, usize> =
        columns.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for g in generators {
        if g.num_vars() != num_vars {
            return Err(LinalgError::VarCountMismatch(num_vars, g.num_vars()));
        }
        if g.degree() > t || g.is_zero() {
            continue;
        }
        for shift in enumerate_monomials(num_vars, t - g.degree()) {
            let mut row = vec![field.zero(); columns.len()];
            for (m, c) in g.terms() {
                row[index[&shift.mul(m)]] = c.clone();
            }
            rows.push(row);
        }
    }
    let matrix = Matrix::from_rows(field.clone(), columns.len(), rows);
    let echelon = matrix.echelon();
    Ok(MacaulayPiece {
        degree: t,
        num_vars,
        columns,
        matrix,
        echelon,
    })
}

/// Standard monomials of `[R/I]_t` with normal forms of non-standard
/// monomials expressed in them.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientBasis<F: Field> {
    field: F,
    degree: u32,
    num_vars: usize,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    reductions: HashMap<Monomial, Vec<F::Elem>>,
}

impl<F: Field> QuotientBasis<F> {
    fn new(field: F, degree: u32, num_vars: usize, basis: Vec<Monomial>) -> Self {
        let index = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        QuotientBasis {
            field,
            degree,
            num_vars,
            basis,
            index,
            reductions: HashMap::new(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Standard monomials, largest first.
    pub fn monomials(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        self.index.contains_key(m)
    }

    /// Coordinates of `m` modulo `[I]_t`, if known.
    pub fn normal_form(&self, m: &Monomial) -> Option<Vec<F::Elem>> {
        if let Some(&i) = self.index.get(m) {
            let mut v = vec![self.field.zero(); self.basis.len()];
            v[i] = self.field.one();
            return Some(v);
        }
        self.reductions.get(m).cloned()
    }

    /// Number of non-standard monomials with a recorded normal form.
    pub fn reduction_count(&self) -> usize {
        self.reductions.len()
    }

    /// `m + q` over all `(monomial, coefficient)` pairs, in coordinates.
    fn accumulate(
        &self,
        acc: &mut [F::Elem],
        m: &Monomial,
        c: &F::Elem,
    ) -> Result<(), LinalgError> {
        if let Some(&i) = self.index.get(m) {
            acc[i] = self.field.add(&acc[i], c);
            Ok(())
        } else if let Some(v) = self.reductions.get(m) {
            self.field.add_scaled(acc, c, v);
            Ok(())
        } else {
            Err(LinalgError::MissingNormalForm(m.to_string()))
        }
    }
}

pub fn quotient_basis<F: Field>(piece: &MacaulayPiece<F>) -> QuotientBasis<F> {
    let ech = piece.echelon();
    let field = piece.matrix().field().clone();
    let free: Vec<usize> = (0..piece.columns.len())
        .filter(|&c| !ech.is_pivot(c))
        .collect();
    let basis = free.iter().map(|&c| piece.columns[c].clone()).collect();
    let mut qb = QuotientBasis::new(field.clone(), piece.degree, piece.num_vars, basis);
    for (c, m) in piece.columns.iter().enumerate() {
        if let Some(row) = ech.pivot_row(c) {
            let nf = free.iter().map(|&k| field.neg(&row[k])).collect();
            qb.reductions.insert(m.clone(), nf);
        }
    }
    qb
}

/// Multiplication by a linear form `[R/I]_{t-1} -> [R/I]_t`.
#[derive(Debug, Clone)]
pub struct MulMap<F: Field> {
    source_degree: u32,
    ell: GradedForm<F>,
    matrix: Matrix<F>,
    rank: usize,
}

impl<F: Field> MulMap<F> {
    pub fn source_degree(&self) -> u32 {
        self.source_degree
    }

    pub fn target_degree(&self) -> u32 {
        self.source_degree + 1
    }

    pub fn ell(&self) -> &GradedForm<F> {
        &self.ell
    }

    /// `dim target x dim source`; column `j` is the image of the `j`-th
    /// source basis monomial.
    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_maximal(&self) -> bool {
        self.rank == self.source_dim().min(self.target_dim())
    }
}

pub fn mul_map<F: Field>(
    src: &QuotientBasis<F>,
    tgt: &QuotientBasis<F>,
    ell: &GradedForm<F>,
) -> Result<MulMap<F>, LinalgError> {
    if src.degree + 1 != tgt.degree {
        return Err(LinalgError::DegreeMismatch {
            src: src.degree,
            tgt: tgt.degree,
        });
    }
    if ell.degree() != 1 {
        return Err(LinalgError::NotLinear(ell.degree()));
    }
    if src.num_vars != tgt.num_vars {
        return Err(LinalgError::VarCountMismatch(src.num_vars, tgt.num_vars));
    }
    if ell.num_vars() != src.num_vars {
        return Err(LinalgError::VarCountMismatch(src.num_vars, ell.num_vars()));
    }
    let field = ell.field().clone();
    let mut m = Matrix::zeros(field.clone(), tgt.dim(), src.dim());
    let linear: Vec<(usize, F::Elem)> = ell
        .terms()
        .map(|(mono, c)| (mono.first_var().expect("linear monomial"), c.clone()))
        .collect();
    for (j, b) in src.monomials().iter().enumerate() {
        let mut col = vec![field.zero(); tgt.dim()];
        for (i, c) in &linear {
            tgt.accumulate(&mut col, &b.mul_var(*i), c)?;
        }
        for (r, v) in col.into_iter().enumerate() {
            m.set(r, j, v);
        }
    }
    let rank = m.rank();
    Ok(MulMap {
        source_degree: src.degree,
        ell: ell.clone(),
        matrix: m,
        rank,
    })
}

/// Degree-by-degree quotient bases of `R/I`.
///
/// Level `t` is built from level `t-1` only: its candidate monomials are the
/// products `x_i * s` with `s` standard in degree `t-1`, and the relations
/// among them are the Koszul relations `x_i (x) [x_j a] - x_j (x) [x_i a]`
/// for standard `a` of degree `t-2`, together with the generators of
/// degree `t`. The resulting bases coincide with [`quotient_basis`] of the
/// Macaulay piece in every degree.
#[derive(Debug, Clone)]
pub struct QuotientTower<F: Field> {
    field: F,
    num_vars: usize,
    generators: Vec<GradedForm<F>>,
    levels: Vec<QuotientBasis<F>>,
}

impl<F: Field> QuotientTower<F> {
    pub fn new(
        field: F,
        num_vars: usize,
        generators: Vec<GradedForm<F>>,
    ) -> Result<Self, LinalgError> {
        for g in &generators {
            if g.num_vars() != num_vars {
                return Err(LinalgError::VarCountMismatch(num_vars, g.num_vars()));
            }
        }
        Ok(QuotientTower {
            field,
            num_vars,
            generators,
            levels: Vec::new(),
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Highest degree built so far, if any.
    pub fn top(&self) -> Option<u32> {
        self.levels.len().checked_sub(1).map(|t| t as u32)
    }

    /// Builds levels up to and including `t`; returns that level.
    pub fn level(&mut self, t: u32) -> &QuotientBasis<F> {
        while self.levels.len() <= t as usize {
            self.extend();
        }
        &self.levels[t as usize]
    }

    /// A built level, without extending.
    pub fn built(&self, t: u32) -> Option<&QuotientBasis<F>> {
        self.levels.get(t as usize)
    }

    /// `h_t` for every built level.
    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.dim()).collect()
    }

    /// Normal form of an arbitrary monomial, memoized on its level.
    pub fn normal_form(&mut self, m: &Monomial) -> Vec<F::Elem> {
        let t = m.degree();
        self.level(t);
        if let Some(v) = self.levels[t as usize].normal_form(m) {
            return v;
        }
        let i = m
            .first_var()
            .expect("degree-0 monomials are always recorded");
        let below = self.normal_form(&m.div_var(i).expect("x_i divides m"));
        let field = self.field.clone();
        let prev = &self.levels[t as usize - 1];
        let level = &self.levels[t as usize];
        let mut acc = vec![field.zero(); level.dim()];
        for (s, c) in prev.monomials().iter().zip(&below) {
            if !field.is_zero(c) {
                level
                    .accumulate(&mut acc, &s.mul_var(i), c)
                    .expect("x_i * standard monomial is a candidate");
            }
        }
        self.levels[t as usize]
            .reductions
            .insert(m.clone(), acc.clone());
        acc
    }

    fn extend(&mut self) {
        let t = self.levels.len() as u32;
        let n = self.num_vars;
        let field = self.field.clone();

        let candidates: Vec<Monomial> = if t == 0 {
            vec![Monomial::one(n)]
        } else {
            let prev = &self.levels[t as usize - 1];
            let set: HashSet<Monomial> = prev
                .monomials()
                .iter()
                .flat_map(|s| (0..n).map(move |i| s.mul_var(i)))
                .collect();
            let mut v: Vec<Monomial> = set.into_iter().collect();
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        };
        let col: HashMap<Monomial, usize> = candidates
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let width = candidates.len();
        let mut ech = EchelonBasis::new(field.clone(), width);

        // generators of degree t, each monomial split as x_i * (m / x_i)
        let gens: Vec<GradedForm<F>> = self
            .generators
            .iter()
            .filter(|g| g.degree() == t && !g.is_zero())
            .cloned()
            .collect();
        for g in gens {
            if ech.is_full() {
                break;
            }
            let mut row = vec![field.zero(); width];
            if t == 0 {
                row[0] = g.coefficient(&Monomial::one(n));
            } else {
                for (m, c) in g.terms() {
                    let i = m.first_var().expect("positive degree");
                    let below = m.div_var(i).expect("x_i divides m");
                    let nf = self.normal_form(&below);
                    let prev = &self.levels[t as usize - 1];
                    for (s, v) in prev.monomials().iter().zip(&nf) {
                        if !field.is_zero(v) {
                            let k = col[&s.mul_var(i)];
                            row[k] = field.add(&row[k], &field.mul(c, v));
                        }
                    }
                }
            }
            ech.insert(row);
        }

        if t >= 2 {
            let prev = &self.levels[t as usize - 1];
            let prev2 = &self.levels[t as usize - 2];
            let scatter = |row: &mut Vec<F::Elem>, var: usize, nf: &[F::Elem], negate: bool| {
                for (s, v) in prev.monomials().iter().zip(nf) {
                    if !field.is_zero(v) {
                        let k = col[&s.mul_var(var)];
                        let v = if negate { field.neg(v) } else { v.clone() };
                        row[k] = field.add(&row[k], &v);
                    }
                }
            };
            // e_i^e_j (x) a with a divisible by x_k, k > j, is a combination of
            // pairs with a larger second index (the Koszul complex is a
            // complex), so only pairs with j >= the last variable of a matter.
            'outer: for a in prev2.monomials() {
                let shifted: Vec<Monomial> = (0..n).map(|j| a.mul_var(j)).collect();
                let standard: Vec<bool> = shifted.iter().map(|m| prev.is_standard(m)).collect();
                let top = a.last_var().unwrap_or(0);
                for j in top.max(1)..n {
                    for i in 0..j {
                        if standard[i] && standard[j] {
                            continue;
                        }
                        if ech.is_full() {
                            break 'outer;
                        }
                        let nf_j = prev
                            .normal_form(&shifted[j])
                            .expect("candidate of level t-1");
                        let nf_i = prev
                            .normal_form(&shifted[i])
                            .expect("candidate of level t-1");
                        let mut row = vec![field.zero(); width];
                        scatter(&mut row, i, &nf_j, false);
                        scatter(&mut row, j, &nf_i, true);
                        ech.insert(row);
                    }
                }
            }
        }

        let free: Vec<usize> = (0..width).filter(|&c| !ech.is_pivot(c)).collect();
        let basis = free.iter().map(|&c| candidates[c].clone()).collect();
        let mut level = QuotientBasis::new(field.clone(), t, n, basis);
        for (c, m) in candidates.iter().enumerate() {
            if let Some(row) = ech.pivot_row(c) {
                level.reductions.insert(
                    m.clone(),
                    free.iter().map(|&k| field.neg(&row[k])).collect(),
                );
            }
        }
        self.levels.push(level);
    }
}
