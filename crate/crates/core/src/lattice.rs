//! Exact integer linear algebra on small dense matrices.
//!
//! Smith normal form, Hermite reduction, maximal-minor gcds and lattice-basis
//! completion, all over arbitrary-precision integers, plus rational solves
//! whose right-hand sides live in [`PerturbedScalar`].

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactfield::PerturbedScalar;

pub type IntVector = Vec<BigInt>;

pub fn int_vector(v: &[i64]) -> IntVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gcd of the entries (0 for the zero vector).
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    content(v).is_one()
}

/// Divide out the content; the zero vector is returned unchanged.
pub fn primitive_part(v: &[BigInt]) -> IntVector {
    let g = content(v);
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[IntVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(&rows.iter().map(|r| int_vector(r)).collect::<Vec<_>>())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[IntVector]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> IntVector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> IntVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<IntVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vector(&self, v: &[BigInt]) -> Result<IntVector> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("{} columns, vector of {}", self.cols, v.len())));
        }
        Ok((0..self.rows).map(|i| dot(&self.row(i), v)).collect())
    }

    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                out[(i, jj)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        Ok(bareiss_det(self.clone()))
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self.det(), Ok(d) if d.abs().is_one())
    }

    /// Exact inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let det = self.det()?;
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular { det: det.to_string() });
        }
        let inv = rational_inverse(self).ok_or(Error::SingularBasis)?;
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = inv[i][j].to_integer();
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(&self.row_vectors())
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

    /// row[target] += k * row[source]
    fn add_row(&mut self, target: usize, source: usize, k: &BigInt) {
        for j in 0..self.cols {
            let delta = &self[(source, j)] * k;
            self[(target, j)] += delta;
        }
    }

    /// col[target] += k * col[source]
    fn add_col(&mut self, target: usize, source: usize, k: &BigInt) {
        for i in 0..self.rows {
            let delta = &self[(i, source)] * k;
            self[(i, target)] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_vectors()).finish()
    }
}

fn bareiss_det(mut m: IntMatrix) -> BigInt {
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                Some(i) => {
                    m.swap_rows(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
        }
        prev = m[(k, k)].clone();
    }
    sign * &m[(n - 1, n - 1)]
}

fn to_rational(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Row-reduce over ℚ and return the rank.
pub fn rank_of_rows(rows: &[IntVector]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(to_rational).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[rank][c];
            for j in c..cols {
                let delta = &f * &m[rank][j];
                m[i][j] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

fn rational_inverse(a: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    let n = a.rows;
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = a.row(i).iter().map(to_rational).collect();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let piv = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &piv;
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..2 * n {
                let delta = &f * &m[c][j];
                m[i][j] -= delta;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Unique rational solution of `A x = b` (A has full column rank), or `None`
/// if the system is inconsistent or underdetermined.
pub fn solve_rational_unique(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigRational>> {
    let (rows, cols) = (a.rows, a.cols);
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<BigRational> = a.row(i).iter().map(to_rational).collect();
            row.push(to_rational(&b[i]));
            row
        })
        .collect();
    let mut r = 0;
    for c in 0..cols {
        let p = (r..rows).find(|&i| !m[i][c].is_zero())?;
        m.swap(r, p);
        let piv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x /= &piv;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..=cols {
                let delta = &f * &m[r][j];
                m[i][j] -= delta;
            }
        }
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some((0..cols).map(|i| m[i][cols].clone()).collect())
}

/// `A = U · S · V` with `U`, `V` unimodular and `S` diagonal with
/// nonnegative invariant factors `s₁ | s₂ | …`. The inverses are tracked
/// alongside so callers can map into the diagonal coordinates.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `s₁, …, s_min(rows, cols)`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols)).map(|i| self.s[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().filter(|x| !x.is_zero()).count()
    }
}

struct SnfState {
    s: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfState {
    fn add_row(&mut self, target: usize, source: usize, k: &BigInt) {
        self.s.add_row(target, source, k);
        self.u.add_col(source, target, &-k);
        self.u_inv.add_row(target, source, k);
    }

    fn add_col(&mut self, target: usize, source: usize, k: &BigInt) {
        self.s.add_col(target, source, k);
        self.v.add_row(source, target, &-k);
        self.v_inv.add_col(target, source, k);
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        self.u.swap_cols(a, b);
        self.u_inv.swap_rows(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.s.swap_cols(a, b);
        self.v.swap_rows(a, b);
        self.v_inv.swap_cols(a, b);
    }

    fn negate_row(&mut self, i: usize) {
        self.s.negate_row(i);
        self.u.negate_col(i);
        self.u_inv.negate_row(i);
    }
}

/// Smith normal form by integer elimination, pivoting on the entry of least
/// absolute value in the remaining block.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = (a.rows, a.cols);
    let mut st = SnfState {
        s: a.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    'outer: for t in 0..rows.min(cols) {
        loop {
            let pivot = (t..rows)
                .cartesian_product(t..cols)
                .filter(|&(i, j)| !st.s[(i, j)].is_zero())
                .min_by(|&x, &y| st.s[x].abs().cmp(&st.s[y].abs()));
            let Some((pi, pj)) = pivot else { break 'outer };
            st.swap_rows(t, pi);
            st.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if st.s[(i, t)].is_zero() {
                    continue;
                }
                let q = st.s[(i, t)].div_floor(&st.s[(t, t)]);
                st.add_row(i, t, &-q);
                clean &= st.s[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if st.s[(t, j)].is_zero() {
                    continue;
                }
                let q = st.s[(t, j)].div_floor(&st.s[(t, t)]);
                st.add_col(j, t, &-q);
                clean &= st.s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows)
                .cartesian_product(t + 1..cols)
                .find(|&(i, j)| !st.s[(i, j)].is_multiple_of(&st.s[(t, t)]));
            match bad {
                Some((i, _)) => st.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if st.s[(t, t)].is_negative() {
            st.negate_row(t);
        }
    }
    let out = SmithForm { u: st.u, u_inv: st.u_inv, s: st.s, v: st.v, v_inv: st.v_inv };
    debug_assert_eq!(&out.u.mul(&out.s).unwrap().mul(&out.v).unwrap(), a);
    out
}

/// Gcd of all maximal (rows × rows) minors; 0 iff the rows are dependent.
pub fn gcd_maximal_minors(a: &IntMatrix) -> Result<BigInt> {
    if a.rows > a.cols {
        return Err(Error::Dimension(format!("{} rows exceed {} columns", a.rows, a.cols)));
    }
    if a.cols <= 20 {
        Ok(gcd_maximal_minors_by_enumeration(a))
    } else {
        Ok(gcd_maximal_minors_by_smith(a))
    }
}

pub fn gcd_maximal_minors_by_enumeration(a: &IntMatrix) -> BigInt {
    let mut g = BigInt::zero();
    for subset in (0..a.cols).combinations(a.rows) {
        g = g.gcd(&bareiss_det(a.select_columns(&subset)));
        if g.is_one() {
            break;
        }
    }
    g
}

pub fn gcd_maximal_minors_by_smith(a: &IntMatrix) -> BigInt {
    smith_normal_form(a).invariant_factors().iter().product()
}

/// Row-style Hermite normal form: an echelon basis of the row lattice with
/// positive pivots and entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are dropped. Returns the rows with their pivot columns.
pub fn hermite_rows(a: &IntMatrix) -> Vec<(usize, IntVector)> {
    let mut m = a.clone();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        loop {
            let p = (r..m.rows)
                .filter(|&i| !m[(i, c)].is_zero())
                .min_by(|&x, &y| m[(x, c)].abs().cmp(&m[(y, c)].abs()));
            let Some(p) = p else { break };
            m.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let q = m[(i, c)].div_floor(&m[(r, c)]);
                m.add_row(i, r, &-q);
                done &= m[(i, c)].is_zero();
            }
            if done {
                break;
            }
        }
        if m[(r, c)].is_zero() {
            continue;
        }
        if m[(r, c)].is_negative() {
            m.negate_row(r);
        }
        for i in 0..r {
            let q = m[(i, c)].div_floor(&m[(r, c)]);
            if !q.is_zero() {
                m.add_row(i, r, &-q);
            }
        }
        pivots.push((c, m.row(r)));
        r += 1;
    }
    pivots
}

/// Complete `n` vectors of ℤ^{n+1} to a lattice basis with a vector `η`
/// satisfying `det(v₁, …, v_n, η) = +1`.
///
/// `η` is determined up to the lattice spanned by the `vᵢ`; the returned one
/// is reduced against the Hermite basis of that lattice, so the output is
/// canonical.
pub fn complete_to_lattice_basis(vectors: &[IntVector]) -> Result<IntVector> {
    let n = vectors.len();
    if vectors.iter().any(|v| v.len() != n + 1) {
        return Err(Error::Dimension(format!("expected {} vectors in Z^{}", n, n + 1)));
    }
    let m = IntMatrix::from_rows(vectors)?;
    let g = if n == 0 { BigInt::one() } else { gcd_maximal_minors(&m)? };
    if !g.is_one() {
        return Err(Error::NotCompletable { gcd: g.to_string() });
    }
    let mut eta = if n == 0 {
        vec![BigInt::one()]
    } else {
        // M = U·[I | 0]·V, so the rows of M together with the last row of V
        // form a unimodular matrix.
        smith_normal_form(&m).v.row(n)
    };
    if stacked_det(vectors, &eta).is_negative() {
        eta.iter_mut().for_each(|x| *x = -std::mem::take(x));
    }
    for (c, row) in hermite_rows(&m) {
        let q = eta[c].div_floor(&row[c]);
        if !q.is_zero() {
            for (e, r) in eta.iter_mut().zip(&row) {
                *e -= &q * r;
            }
        }
    }
    let det = stacked_det(vectors, &eta);
    assert!(det.is_one(), "completion must have determinant +1, got {det}");
    Ok(eta)
}

/// `det(v₁, …, v_n, w)` with the vectors as columns.
pub fn stacked_det(vectors: &[IntVector], last: &[BigInt]) -> BigInt {
    let mut cols = vectors.to_vec();
    cols.push(last.to_vec());
    bareiss_det(IntMatrix::from_columns(&cols).expect("square stack"))
}

/// Generalized cross product of `n` vectors in ℤ^{n+1}: the integer vector
/// `w` with `⟨w, x⟩ = det(v₁, …, v_n, x)` for all `x`.
pub fn cross_product(vectors: &[IntVector]) -> IntVector {
    let dim = vectors.len() + 1;
    (0..dim)
        .map(|k| {
            let mut e = vec![BigInt::zero(); dim];
            e[k] = BigInt::one();
            stacked_det(vectors, &e)
        })
        .collect()
}

/// Integer solution of `A y = rhs`, if one exists.
pub fn solve_integer_system(a: &IntMatrix, rhs: &[BigInt]) -> Result<Option<IntVector>> {
    if rhs.len() != a.rows {
        return Err(Error::Dimension("right-hand side length".into()));
    }
    let snf = smith_normal_form(a);
    let w = snf.u_inv.mul_vector(rhs)?;
    let mut z = vec![BigInt::zero(); a.cols];
    for (i, wi) in w.iter().enumerate() {
        let s = if i < a.cols { snf.s[(i, i)].clone() } else { BigInt::zero() };
        if s.is_zero() {
            if !wi.is_zero() {
                return Ok(None);
            }
        } else {
            if !wi.is_multiple_of(&s) {
                return Ok(None);
            }
            z[i] = wi / &s;
        }
    }
    Ok(Some(snf.v_inv.mul_vector(&z)?))
}

/// Coefficients of `target` in the given basis of ℚ^{n+1}, computed exactly.
/// The recombination is checked to reproduce `target`.
pub fn solve_in_basis(target: &[PerturbedScalar], basis: &[IntVector]) -> Result<Vec<PerturbedScalar>> {
    let dim = target.len();
    if basis.len() != dim || basis.iter().any(|b| b.len() != dim) {
        return Err(Error::Dimension(format!("basis must be {dim} vectors of length {dim}")));
    }
    let b = IntMatrix::from_columns(basis)?;
    let inv = rational_inverse(&b).ok_or(Error::SingularBasis)?;
    let coeffs: Vec<PerturbedScalar> = inv
        .iter()
        .map(|row| {
            row.iter()
                .zip(target)
                .filter(|(c, _)| !c.is_zero())
                .fold(PerturbedScalar::zero(), |acc, (c, t)| &acc + &t.scale(c))
        })
        .collect();
    for (i, t) in target.iter().enumerate() {
        let recombined = coeffs
            .iter()
            .zip(basis)
            .fold(PerturbedScalar::zero(), |acc, (c, v)| &acc + &c.scale(&to_rational(&v[i])));
        assert_eq!(&recombined, t, "basis solve residual must vanish");
    }
    Ok(coeffs)
}
