//! Exact integer lattice algebra.
//!
//! Everything here works over arbitrary-precision integers: Hermite and Smith
//! normal forms with their unimodular transforms, canonical sublattices,
//! saturation inside the rational span, and the finite quotient groups
//! `sat(L) / L` together with coset representatives.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect();
        write!(f, "IntMatrix{rows:?}")
    }
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
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. Rejects ragged input and empty dimensions.
    pub fn from_rows<T>(rows: &[Vec<T>]) -> Result<Self>
    where
        T: Clone + Into<BigInt>,
    {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::InvalidMatrix("matrix must have at least one row and one column".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidMatrix("rows have different lengths".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect(),
        })
    }

    /// Builds a matrix with an explicit column count; zero rows are allowed.
    pub fn from_i64_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {i} has wrong length");
            for (j, &x) in row.iter().enumerate() {
                m.data[i * cols + j] = BigInt::from(x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
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

    pub fn row_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += vi * self.get(i, j);
            }
        }
        out
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
    }

    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        bareiss_determinant(self.row_vectors())
    }

    pub fn rank(&self) -> usize {
        bareiss_rank(self.row_vectors(), self.cols)
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }

    /// Exact inverse over the rationals; `None` when singular.
    pub fn rational_inverse(&self) -> Option<Vec<Vec<BigRational>>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> =
                    self.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect();
                row.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(c, p);
            let inv = a[c][c].recip();
            for x in a[c].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    for j in 0..2 * n {
                        let delta = &f * &a[c][j];
                        a[r][j] -= delta;
                    }
                }
            }
        }
        Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = factor * self.get(source, j);
            self.data[target * self.cols + j] += delta;
        }
    }

    /// col[target] += factor * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = factor * self.get(i, source);
            self.data[i * self.cols + target] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }
}

fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn bareiss_rank(mut m: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = (&m[rank][c] * &m[i][j] - &m[i][c] * &m[rank][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Rank over the rationals of a small integer matrix.
///
/// Runs fraction-free elimination in `i128` and falls back to big integers
/// if an intermediate value overflows.
pub fn rank_i64(rows: &[Vec<i64>], cols: usize) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let nrows = m.len();
    let mut rank = 0;
    let mut prev: i128 = 1;
    for c in 0..cols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..nrows {
            for j in c + 1..cols {
                let lhs = m[rank][c].checked_mul(m[i][j]);
                let rhs = m[i][c].checked_mul(m[rank][j]);
                match (lhs, rhs) {
                    (Some(l), Some(r)) => match l.checked_sub(r) {
                        Some(v) => m[i][j] = v / prev,
                        None => return rank_big(rows, cols),
                    },
                    _ => return rank_big(rows, cols),
                }
            }
            m[i][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
    }
    rank
}

fn rank_big(rows: &[Vec<i64>], cols: usize) -> usize {
    bareiss_rank(
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        cols,
    )
}

/// Row-style Hermite normal form: returns `(H, U)` with `U` unimodular and
/// `U * M = H`.
///
/// `H` is in row echelon form, pivots are positive, and entries above each
/// pivot lie in `[0, pivot)`. Zero rows are collected at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut r = 0;
    for c in 0..h.cols {
        if r == h.rows {
            break;
        }
        loop {
            let pivot = (r..h.rows)
                .filter(|&i| !h.get(i, c).is_zero())
                .min_by(|&a, &b| h.get(a, c).abs().cmp(&h.get(b, c).abs()));
            let Some(p) = pivot else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..h.rows {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = -h.get(i, c).div_floor(h.get(r, c));
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                if !h.get(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h.get(i, c).div_floor(h.get(r, c));
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Result of a Smith normal form computation: `u * m * v = d`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in divisibility order.
    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }
}

/// Smith normal form with both unimodular transforms (and the inverse of the
/// column transform, needed for coset representatives).
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let mut v_inv = IntMatrix::identity(m.cols);
    let rows = a.rows;
    let cols = a.cols;

    // column op col[t] += f * col[s] on v, inverse row op on v_inv
    let col_op = |a: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, t: usize, s: usize, f: &BigInt| {
        a.add_col_multiple(t, s, f);
        v.add_col_multiple(t, s, f);
        v_inv.add_row_multiple(s, t, &-f);
    };
    let col_swap = |a: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, x: usize, y: usize| {
        a.swap_cols(x, y);
        v.swap_cols(x, y);
        v_inv.swap_rows(x, y);
    };

    for t in 0..rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = a.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap_rows(t, bi);
        u.swap_rows(t, bi);
        col_swap(&mut a, &mut v, &mut v_inv, t, bj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -(a.get(i, t) / a.get(t, t));
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !a.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -(a.get(t, j) / a.get(t, t));
                col_op(&mut a, &mut v, &mut v_inv, j, t, &q);
                if !a.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remainder in row/column t onto the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    let x = a.get(i, t);
                    if !x.is_zero() && x.abs() < a.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let x = a.get(t, j);
                    if !x.is_zero() && x.abs() < a.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                } else if best.1 != t {
                    col_swap(&mut a, &mut v, &mut v_inv, t, best.1);
                }
                continue;
            }
            let pivot = a.get(t, t).clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { d: a, u, v, v_inv }
}

/// A sublattice of `Z^d`, stored by its Hermite-reduced basis so that
/// structural equality is lattice equality. The zero lattice has an empty
/// basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sublattice {
    ambient_rank: usize,
    basis: IntMatrix,
}

impl Sublattice {
    pub fn zero(ambient_rank: usize) -> Self {
        Sublattice {
            ambient_rank,
            basis: IntMatrix::zeros(0, ambient_rank),
        }
    }

    pub fn full(ambient_rank: usize) -> Self {
        Sublattice {
            ambient_rank,
            basis: IntMatrix::identity(ambient_rank),
        }
    }

    /// Lattice spanned by arbitrary (possibly dependent) generators.
    pub fn from_generators(ambient_rank: usize, generators: &[Vec<BigInt>]) -> Self {
        let mut m = IntMatrix::zeros(generators.len(), ambient_rank);
        for (i, g) in generators.iter().enumerate() {
            assert_eq!(g.len(), ambient_rank, "generator has wrong length");
            for (j, x) in g.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Self::from_matrix_rows(&m)
    }

    pub fn from_i64_generators(ambient_rank: usize, generators: &[Vec<i64>]) -> Self {
        Self::from_matrix_rows(&IntMatrix::from_i64_rows(ambient_rank, generators))
    }

    fn from_matrix_rows(m: &IntMatrix) -> Self {
        let (h, _) = hermite_normal_form(m);
        let nonzero: Vec<usize> = (0..h.rows).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).collect();
        let mut basis = IntMatrix::zeros(nonzero.len(), m.cols);
        for (k, &i) in nonzero.iter().enumerate() {
            for j in 0..m.cols {
                basis.set(k, j, h.get(i, j).clone());
            }
        }
        Sublattice {
            ambient_rank: m.cols,
            basis,
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<BigInt>> {
        self.basis.row_vectors()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        quotient(self.ambient_rank, self).project(v).iter().all(Zero::is_zero)
    }
}

/// `(rational span of L) ∩ Z^d`.
pub fn saturate(lattice: &Sublattice) -> Sublattice {
    let k = lattice.rank();
    if k == 0 {
        return lattice.clone();
    }
    let snf = smith_normal_form(lattice.basis());
    let rows: Vec<Vec<BigInt>> = (0..k).map(|i| snf.v_inv.row(i).to_vec()).collect();
    Sublattice::from_generators(lattice.ambient_rank, &rows)
}

/// The finitely generated group `Z^d / L` with a canonical projection.
///
/// In the coordinates `y = a * V` coming from the Smith form `U B V = D` of
/// the basis `B`, the lattice is `{ y : d_i | y_i (i < k), y_i = 0 (i >= k) }`.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    ambient_rank: usize,
    sublattice_rank: usize,
    free_rank: usize,
    diagonal: Vec<BigInt>,
    torsion_invariants: Vec<BigInt>,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl QuotientGroup {
    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_invariants(&self) -> &[BigInt] {
        &self.torsion_invariants
    }

    /// Order of the torsion part, i.e. the index `[sat(L) : L]`.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion_invariants.iter().product()
    }

    /// Column transform of the Smith form; `a * V` gives adapted coordinates.
    pub fn adapted_transform(&self) -> &IntMatrix {
        &self.v
    }

    /// Canonical coordinates of the class of `a`: free coordinates first,
    /// then torsion residues reduced into `[0, d_i)`.
    pub fn project(&self, a: &[BigInt]) -> Vec<BigInt> {
        let y = self.v.left_apply(a);
        let mut out: Vec<BigInt> = y[self.sublattice_rank..].to_vec();
        for (i, d) in self.diagonal.iter().enumerate() {
            if d > &BigInt::one() {
                out.push(y[i].mod_floor(d));
            }
        }
        out
    }

    pub fn is_trivial_class(&self, a: &[BigInt]) -> bool {
        self.project(a).iter().all(Zero::is_zero)
    }

    /// Lifts torsion residues (one per invariant) back to `sat(L)`.
    fn lift_torsion(&self, residues: &[BigInt]) -> Vec<BigInt> {
        let mut y = vec![BigInt::zero(); self.ambient_rank];
        let mut it = residues.iter();
        for (i, d) in self.diagonal.iter().enumerate() {
            if d > &BigInt::one() {
                y[i] = it.next().expect("residue count").clone();
            }
        }
        self.v_inv.left_apply(&y)
    }
}

/// `Z^d / L`.
pub fn quotient(ambient_rank: usize, lattice: &Sublattice) -> QuotientGroup {
    assert_eq!(ambient_rank, lattice.ambient_rank, "ambient rank mismatch");
    let k = lattice.rank();
    if k == 0 {
        return QuotientGroup {
            ambient_rank,
            sublattice_rank: 0,
            free_rank: ambient_rank,
            diagonal: Vec::new(),
            torsion_invariants: Vec::new(),
            v: IntMatrix::identity(ambient_rank),
            v_inv: IntMatrix::identity(ambient_rank),
        };
    }
    let snf = smith_normal_form(lattice.basis());
    let diagonal = snf.invariants();
    debug_assert_eq!(diagonal.len(), k, "basis must be independent");
    let torsion_invariants = diagonal.iter().filter(|d| *d > &BigInt::one()).cloned().collect();
    QuotientGroup {
        ambient_rank,
        sublattice_rank: k,
        free_rank: ambient_rank - k,
        diagonal,
        torsion_invariants,
        v: snf.v,
        v_inv: snf.v_inv,
    }
}

/// One representative in `sat(L)` for each element of `sat(L)/L`, the zero
/// vector first, then residues in lexicographic order.
pub fn torsion_coset_reps(q: &QuotientGroup) -> Vec<Vec<BigInt>> {
    let moduli = &q.torsion_invariants;
    let mut residues = vec![BigInt::zero(); moduli.len()];
    let mut out = Vec::new();
    loop {
        out.push(q.lift_torsion(&residues));
        // odometer increment, last coordinate fastest
        let mut pos = moduli.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            residues[pos] += 1;
            if residues[pos] < moduli[pos] {
                break;
            }
            residues[pos] = BigInt::zero();
        }
    }
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn to_i64(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| x.to_i64().ok_or(Error::Overflow))
        .collect()
}

/// All integer points of the box `lo <= x <= hi`, last coordinate fastest.
pub fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = lo.to_vec();
    loop {
        out.push(cur.clone());
        let mut pos = cur.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if cur[pos] < hi[pos] {
                cur[pos] += 1;
                break;
            }
            cur[pos] = lo[pos];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        to_big(v)
    }

    #[test]
    fn hnf_identity() {
        let id = IntMatrix::identity(2);
        let (h, u) = hermite_normal_form(&id);
        assert_eq!(h, id);
        assert_eq!(u, id);
    }

    #[test]
    fn hnf_two_by_two() {
        let a = m(&[vec![2, 4], vec![1, 3]]);
        let (h, u) = hermite_normal_form(&a);
        assert_eq!(u.mul(&a), h);
        assert!(u.is_unimodular());
        assert_eq!(h, m(&[vec![1, 1], vec![0, 2]]));
        // [[1,3],[0,2]] spans the same lattice and reduces to the same form
        let (h2, _) = hermite_normal_form(&m(&[vec![1, 3], vec![0, 2]]));
        assert_eq!(h2, h);
    }

    #[test]
    fn hnf_zero() {
        let z = IntMatrix::zeros(2, 3);
        let (h, u) = hermite_normal_form(&z);
        assert!(h.is_zero());
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn snf_examples() {
        let s = smith_normal_form(&m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.d, m(&[vec![1, 0], vec![0, 6]]));
        assert_eq!(s.u.mul(&m(&[vec![2, 0], vec![0, 3]])).mul(&s.v), s.d);
        let s = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        let s = smith_normal_form(&m(&[vec![2, 0], vec![0, 2]]));
        assert_eq!(s.d, m(&[vec![2, 0], vec![0, 2]]));
    }

    #[test]
    fn snf_transforms_are_consistent() {
        let a = m(&[vec![4, 6, 2], vec![2, -8, 10], vec![6, 2, 0]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert!(s.u.is_unimodular());
        assert!(s.v.is_unimodular());
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(3));
        let inv = s.invariants();
        for w in inv.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert_eq!(inv.iter().product::<BigInt>().abs(), a.determinant().abs());
    }

    #[test]
    fn saturate_examples() {
        let l = Sublattice::from_i64_generators(2, &[vec![2, 0]]);
        assert_eq!(saturate(&l), Sublattice::from_i64_generators(2, &[vec![1, 0]]));
        let l = Sublattice::from_i64_generators(2, &[vec![1, 1], vec![1, -1]]);
        assert_eq!(saturate(&l), Sublattice::full(2));
        assert_eq!(quotient(2, &l).torsion_order(), BigInt::from(2));
        assert_eq!(saturate(&Sublattice::full(3)), Sublattice::full(3));
        assert_eq!(saturate(&Sublattice::zero(3)), Sublattice::zero(3));
    }

    #[test]
    fn quotient_examples() {
        let l = Sublattice::from_i64_generators(2, &[vec![1, 1], vec![1, -1]]);
        let q = quotient(2, &l);
        assert_eq!(q.free_rank(), 0);
        assert_eq!(q.torsion_invariants(), &[BigInt::from(2)]);

        let l = Sublattice::from_i64_generators(2, &[vec![1, 0]]);
        let q = quotient(2, &l);
        assert_eq!(q.free_rank(), 1);
        assert!(q.torsion_invariants().is_empty());

        let q = quotient(4, &Sublattice::zero(4));
        assert_eq!(q.free_rank(), 4);
        assert_eq!(q.project(&big(&[1, -2, 3, 0])), big(&[1, -2, 3, 0]));
    }

    #[test]
    fn coset_reps() {
        let sat = Sublattice::from_i64_generators(2, &[vec![1, 0]]);
        assert_eq!(torsion_coset_reps(&quotient(2, &sat)), vec![big(&[0, 0])]);

        let l = Sublattice::from_i64_generators(1, &[vec![2]]);
        assert_eq!(torsion_coset_reps(&quotient(1, &l)), vec![big(&[0]), big(&[1])]);

        let l = Sublattice::from_i64_generators(2, &[vec![1, 1], vec![1, -1]]);
        let q = quotient(2, &l);
        let reps = torsion_coset_reps(&q);
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[0], big(&[0, 0]));
        // pairwise distinct modulo L
        let diff: Vec<BigInt> = reps[0].iter().zip(&reps[1]).map(|(a, b)| a - b).collect();
        assert!(!l.contains(&diff));
    }

    #[test]
    fn projection_kills_basis() {
        let l = Sublattice::from_i64_generators(3, &[vec![2, 4, 0], vec![0, 6, 3]]);
        let q = quotient(3, &l);
        for b in l.basis_vectors() {
            assert!(q.is_trivial_class(&b));
        }
        assert!(!q.is_trivial_class(&big(&[1, 0, 0])));
    }

    #[test]
    fn rank_small_and_big_agree() {
        let rows = vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]];
        assert_eq!(rank_i64(&rows, 3), 2);
        assert_eq!(rank_big(&rows, 3), 2);
        let huge = vec![vec![i64::MAX, 1], vec![1, i64::MAX]];
        assert_eq!(rank_i64(&huge, 2), 2);
    }
}
