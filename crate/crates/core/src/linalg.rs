//! Exact integer and rational linear algebra.
//!
//! Nothing in here touches floating point. Ranks use fraction-free
//! (Bareiss) elimination over [`BigInt`]; lattice bases come out of a
//! column-style Hermite normal form with a tracked unimodular transform.
//! Canonical bases are lower-triangular with positive pivots, so the same
//! lattice always produces the same basis.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exponent vector of a Laurent monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn zero(dim: usize) -> Self {
        LatticePoint(vec![0; dim])
    }

    /// The `i`-th standard basis vector of `Z^dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        LatticePoint(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| -a).collect())
    }

    pub(crate) fn to_big(&self) -> Vec<BigInt> {
        self.0.iter().map(|&c| BigInt::from(c)).collect()
    }

    pub(crate) fn to_rational(&self) -> Vec<BigRational> {
        self.0
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect()
    }

    pub(crate) fn from_big(coords: &[BigInt]) -> Result<LatticePoint> {
        coords
            .iter()
            .map(|c| c.to_i64().ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(LatticePoint)
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

impl<const N: usize> From<[i64; N]> for LatticePoint {
    fn from(v: [i64; N]) -> Self {
        LatticePoint(v.to_vec())
    }
}

/// A dense rectangular matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix whose rows are the given points. `cols` is needed
    /// because the list may be empty.
    pub fn from_rows(points: &[LatticePoint], cols: usize) -> Result<Self> {
        let mut m = IntMatrix::zeros(points.len(), cols);
        for (i, p) in points.iter().enumerate() {
            check_dim(p, cols)?;
            for (j, &c) in p.0.iter().enumerate() {
                m.data[i * cols + j] = BigInt::from(c);
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for t in 0..self.cols {
                    acc += self.get(i, t) * other.get(t, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Rank over Q by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        bareiss_rank(&mut m, self.cols)
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `col[a], col[b] <- x*col[a] + y*col[b], z*col[a] + w*col[b]`
    fn combine_cols(&mut self, a: usize, b: usize, x: &BigInt, y: &BigInt, z: &BigInt, w: &BigInt) {
        for i in 0..self.rows {
            let ca = self.get(i, a).clone();
            let cb = self.get(i, b).clone();
            self.set(i, a, x * &ca + y * &cb);
            self.set(i, b, z * &ca + w * &cb);
        }
    }

    /// `col[dst] -= q * col[src]`
    fn sub_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, dst) - q * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|c| c.to_string()).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

fn check_dim(p: &LatticePoint, n: usize) -> Result<()> {
    if p.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.dim(),
        });
    }
    Ok(())
}

fn common_dim(vectors: &[LatticePoint]) -> Result<Option<usize>> {
    let Some(first) = vectors.first() else {
        return Ok(None);
    };
    for v in vectors {
        check_dim(v, first.dim())?;
    }
    Ok(Some(first.dim()))
}

pub(crate) fn bareiss_rank(m: &mut [Vec<BigInt>], cols: usize) -> usize {
    let rows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let v = (&m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j]) / &prev;
                m[i][j] = v;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Determinant of a square integer matrix given by rows (Bareiss).
pub(crate) fn determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Rank over Q of the span of `vectors`.
pub fn rank(vectors: &[LatticePoint]) -> Result<usize> {
    let Some(n) = common_dim(vectors)? else {
        return Ok(0);
    };
    Ok(IntMatrix::from_rows(vectors, n)?.rank())
}

/// Column-style Hermite normal form `H = A U` with `U` unimodular.
///
/// `H` is lower-triangular in the echelon sense: its first `pivots.len()`
/// columns carry a positive pivot each (strictly descending pivot rows),
/// entries left of a pivot are reduced into `[0, pivot)`, and the
/// remaining columns are zero. Those trailing columns of `U` are a basis
/// of the integer kernel of `A`.
pub(crate) struct ColumnHnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Row index of the pivot in each of the leading columns.
    pub pivots: Vec<usize>,
}

pub(crate) fn column_hnf(a: &IntMatrix) -> ColumnHnf {
    let mut h = a.clone();
    let n = a.ncols();
    let mut u = IntMatrix::identity(n);
    let mut pivots = Vec::new();
    let mut c = 0;
    for i in 0..h.nrows() {
        if c == n {
            break;
        }
        // gcd-combine row i across columns c..n into column c
        for j in c + 1..n {
            if h.get(i, j).is_zero() {
                continue;
            }
            if h.get(i, c).is_zero() {
                h.swap_cols(c, j);
                u.swap_cols(c, j);
                continue;
            }
            let a_ = h.get(i, c).clone();
            let b_ = h.get(i, j).clone();
            let e = a_.extended_gcd(&b_);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let z = -(&b_ / &g);
            let w = &a_ / &g;
            h.combine_cols(c, j, &x, &y, &z, &w);
            u.combine_cols(c, j, &x, &y, &z, &w);
        }
        if h.get(i, c).is_zero() {
            continue;
        }
        if h.get(i, c).is_negative() {
            h.negate_col(c);
            u.negate_col(c);
        }
        let pivot = h.get(i, c).clone();
        for j in 0..c {
            let q = h.get(i, j).div_floor(&pivot);
            h.sub_col(j, c, &q);
            u.sub_col(j, c, &q);
        }
        pivots.push(i);
        c += 1;
    }
    ColumnHnf { h, u, pivots }
}

/// Basis (as points) of the integer right kernel `{z : A z = 0}`.
fn integer_kernel(a: &IntMatrix) -> Result<Vec<LatticePoint>> {
    let hnf = column_hnf(a);
    (hnf.pivots.len()..a.ncols())
        .map(|j| LatticePoint::from_big(&hnf.u.column(j)))
        .collect()
}

/// Canonical basis of the lattice generated by `vectors` (which must be
/// linearly independent or at least generate a lattice): the nonzero
/// columns of the column HNF of the matrix with `vectors` as columns.
pub(crate) fn canonical_basis(vectors: &[LatticePoint], n: usize) -> Result<Vec<LatticePoint>> {
    let m = IntMatrix::from_rows(vectors, n)?.transpose();
    let hnf = column_hnf(&m);
    (0..hnf.pivots.len())
        .map(|j| LatticePoint::from_big(&hnf.h.column(j)))
        .collect()
}

/// Basis of the saturation `span_Q(vectors) ∩ Z^n`, in canonical HNF form.
///
/// The result has exactly `rank(vectors)` elements, and every input
/// vector has integer coordinates in it.
pub fn saturated_lattice_basis(vectors: &[LatticePoint]) -> Result<Vec<LatticePoint>> {
    let Some(n) = common_dim(vectors)? else {
        return Ok(Vec::new());
    };
    saturated_basis_in(vectors, n)
}

pub(crate) fn saturated_basis_in(vectors: &[LatticePoint], n: usize) -> Result<Vec<LatticePoint>> {
    let m = IntMatrix::from_rows(vectors, n)?;
    // saturation = (span^⊥)^⊥, and kernels of integer matrices are saturated
    let perp = integer_kernel(&m)?;
    let sat = integer_kernel(&IntMatrix::from_rows(&perp, n)?)?;
    canonical_basis(&sat, n)
}

/// Basis of the orthogonal lattice `{z ∈ Z^n : z·b = 0 for all b}`.
pub(crate) fn orthogonal_lattice(vectors: &[LatticePoint], n: usize) -> Result<Vec<LatticePoint>> {
    let perp = integer_kernel(&IntMatrix::from_rows(vectors, n)?)?;
    canonical_basis(&perp, n)
}

/// Integer coordinates `c` with `Σ c_i basis_i = p`.
pub fn coordinates_in_lattice(p: &LatticePoint, basis: &[LatticePoint]) -> Result<LatticePoint> {
    for b in basis {
        check_dim(b, p.dim())?;
    }
    let coeffs = solve_rational(basis, &p.to_rational(), p.dim()).ok_or(Error::NotInLattice)?;
    let ints = coeffs
        .iter()
        .map(|c| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::NotInLattice)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    LatticePoint::from_big(&ints)
}

/// Solves `Σ c_i columns_i = target` over Q for linearly independent
/// columns. `None` when the target lies outside the span.
pub(crate) fn solve_rational(columns: &[LatticePoint], target: &[BigRational], n: usize) -> Option<Vec<BigRational>> {
    let mut basis = EchelonBasis::with_tracking(n);
    for c in columns {
        basis.insert(&c.to_rational());
    }
    let (rem, comb) = basis.reduce(target);
    if rem.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(comb)
}

/// An integer linear map `Z^n -> Z^(n-1)` whose kernel is the line
/// through `kernel_vector`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionMap {
    pub matrix: IntMatrix,
    pub kernel_vector: LatticePoint,
}

impl ProjectionMap {
    pub fn apply(&self, p: &LatticePoint) -> Result<LatticePoint> {
        check_dim(p, self.matrix.ncols())?;
        LatticePoint::from_big(&self.matrix.mul_vec(&p.to_big()))
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// A surjective projection `φ: Z^n -> Z^(n-1)` with `φ(u) = 0`.
///
/// Rows of the matrix are the canonical basis of the lattice orthogonal
/// to `u`, which amounts to completing `u/gcd(u)` to a unimodular basis
/// and dropping its coordinate.
pub fn projection_along(u: &LatticePoint) -> Result<ProjectionMap> {
    if u.is_zero() {
        return Err(Error::ZeroVector);
    }
    let n = u.dim();
    let rows = orthogonal_lattice(std::slice::from_ref(u), n)?;
    Ok(ProjectionMap {
        matrix: IntMatrix::from_rows(&rows, n)?,
        kernel_vector: u.clone(),
    })
}

/// The integer matrix of the quotient map `Z^n -> Z^n / L ≅ Z^(n-r)`,
/// where `L` is the saturation of `span(sub_basis)`.
pub fn quotient_map(sub_basis: &[LatticePoint], n: usize) -> Result<IntMatrix> {
    let rows = orthogonal_lattice(sub_basis, n)?;
    IntMatrix::from_rows(&rows, n)
}

/// Images of `points` in the quotient lattice `Z^n / (span(sub_basis) ∩ Z^n)`.
pub fn quotient_coordinates(points: &[LatticePoint], sub_basis: &[LatticePoint]) -> Result<Vec<LatticePoint>> {
    let Some(n) = common_dim(points)?.or(common_dim(sub_basis)?) else {
        return Ok(Vec::new());
    };
    for b in sub_basis {
        check_dim(b, n)?;
    }
    let q = quotient_map(sub_basis, n)?;
    points
        .iter()
        .map(|p| {
            check_dim(p, n)?;
            LatticePoint::from_big(&q.mul_vec(&p.to_big()))
        })
        .collect()
}

/// Invariant factors of the Smith normal form (nonzero diagonal entries,
/// each dividing the next).
#[allow(clippy::needless_range_loop)]
pub fn smith_invariants(a: &IntMatrix) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = (0..a.nrows()).map(|i| a.row(i).to_vec()).collect();
    let rows = a.nrows();
    let cols = a.ncols();
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block goes to (t, t)
        let Some((pi, pj)) = smallest_nonzero(&m, t, t..rows, t..cols) else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t].div_floor(&m[t][t]);
                if !q.is_zero() {
                    for j in t..cols {
                        let v = &m[i][j] - &q * &m[t][j];
                        m[i][j] = v;
                    }
                }
                clean &= m[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = m[t][j].div_floor(&m[t][t]);
                if !q.is_zero() {
                    for i in t..rows {
                        let v = &m[i][j] - &q * &m[i][t];
                        m[i][j] = v;
                    }
                }
                clean &= m[t][j].is_zero();
            }
            if !clean {
                let (pi, pj) = smallest_in_cross(&m, t);
                m.swap(t, pi);
                for row in m.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&m[t][t])));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = &m[t][j] + &m[i][j];
                        m[t][j] = v;
                    }
                }
                None => break,
            }
        }
        out.push(m[t][t].abs());
    }
    out
}

fn smallest_nonzero(
    m: &[Vec<BigInt>],
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if m[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn smallest_in_cross(m: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let cands = (t..m.len()).map(|i| (i, t)).chain((t..m[0].len()).map(|j| (t, j)));
    for (i, j) in cands {
        if !m[i][j].is_zero() && m[i][j].abs() < m[best.0][best.1].abs() {
            best = (i, j);
        }
    }
    best
}

/// Reduced row echelon basis over Q, optionally remembering how each
/// stored row is combined from the inserted vectors.
#[derive(Clone, Debug)]
pub(crate) struct EchelonBasis {
    dim: usize,
    rows: Vec<(usize, Vec<BigRational>)>,
    // combination of inserted originals producing each stored row
    combos: Option<Vec<Vec<BigRational>>>,
    inserted: usize,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis {
            dim,
            rows: Vec::new(),
            combos: None,
            inserted: 0,
        }
    }

    pub fn with_tracking(dim: usize) -> Self {
        EchelonBasis {
            combos: Some(Vec::new()),
            ..EchelonBasis::new(dim)
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after elimination, and (when tracking) the
    /// coefficients over the inserted originals of `v - remainder`.
    pub fn reduce(&self, v: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        debug_assert_eq!(v.len(), self.dim);
        let mut rem = v.to_vec();
        let mut comb = vec![BigRational::zero(); self.inserted];
        for (s, (piv, row)) in self.rows.iter().enumerate() {
            if rem[*piv].is_zero() {
                continue;
            }
            let f = &rem[*piv] / &row[*piv];
            for (r, x) in rem.iter_mut().zip(row) {
                if !x.is_zero() {
                    *r -= &f * x;
                }
            }
            if let Some(combos) = &self.combos {
                for (c, t) in comb.iter_mut().zip(&combos[s]) {
                    if !t.is_zero() {
                        *c += &f * t;
                    }
                }
            }
        }
        (rem, comb)
    }

    /// Inserts `v`; returns whether the rank grew. Dependent vectors are
    /// still counted as inserted originals (with no row of their own).
    pub fn insert(&mut self, v: &[BigRational]) -> bool {
        let (rem, comb) = self.reduce(v);
        let index = self.inserted;
        self.inserted += 1;
        if let Some(combos) = &mut self.combos {
            for c in combos.iter_mut() {
                c.push(BigRational::zero());
            }
        }
        let Some(piv) = rem.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let mut new_combo = None;
        if self.combos.is_some() {
            let mut c: Vec<BigRational> = comb.into_iter().map(|x| -x).collect();
            c.push(BigRational::one());
            new_combo = Some(c);
        }
        // keep the echelon reduced: clear the new pivot column in old rows
        for s in 0..self.rows.len() {
            if self.rows[s].1[piv].is_zero() {
                continue;
            }
            let f = &self.rows[s].1[piv] / &rem[piv];
            for (x, r) in self.rows[s].1.iter_mut().zip(&rem) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
            if let (Some(combos), Some(nc)) = (&mut self.combos, &new_combo) {
                for (x, r) in combos[s].iter_mut().zip(nc) {
                    if !r.is_zero() {
                        *x -= &f * r;
                    }
                }
            }
        }
        self.rows.push((piv, rem));
        if let (Some(combos), Some(nc)) = (&mut self.combos, new_combo) {
            combos.push(nc);
        }
        debug_assert!(index < self.inserted);
        true
    }
}

/// Shorthand for rational vectors of lattice points.
pub(crate) fn rational(p: &LatticePoint) -> Vec<BigRational> {
    p.to_rational()
}
