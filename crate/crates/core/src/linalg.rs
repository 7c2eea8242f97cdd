//! Exact linear algebra over the rationals.
//!
//! Rank and kernel computations clear denominators row by row and then run
//! a fraction-free Gauss-Jordan elimination on integer rows, dividing every
//! updated row by its content. Rows that already have a zero in the pivot
//! column are left untouched, so sparse matrices stay cheap.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{self, Rat};

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(rat::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn scalar(n: usize, value: Rat) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = value.clone();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(bad.len(), cols));
        }
        let n_rows = rows.len();
        Ok(Matrix {
            rows: n_rows,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat::rat(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[Rat] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(self.cols, other.rows));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(self.rows * self.cols, other.rows * other.cols));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: &Rat) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn determinant(&self) -> Result<Rat> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(self.rows, self.cols));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
                return Ok(Rat::zero());
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let pivot = a[(c, c)].clone();
            det *= &pivot;
            for r in c + 1..n {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let f = &a[(r, c)] / &pivot;
                for j in c..n {
                    let v = &f * &a[(c, j)];
                    a[(r, j)] -= v;
                }
            }
        }
        Ok(det)
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a[(r, c)].is_zero())?;
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let pivot = a[(c, c)].clone();
            for j in 0..n {
                a[(c, j)] /= &pivot;
                inv[(c, j)] /= &pivot;
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for j in 0..n {
                    let (u, v) = (&f * &a[(c, j)], &f * &inv[(c, j)]);
                    a[(r, j)] -= u;
                    inv[(r, j)] -= v;
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn echelon(&self) -> Echelon {
        Echelon::from_rows(self.cols, (0..self.rows).map(|r| self.row(r).to_vec()))
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of the right null space `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        self.echelon().kernel()
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(v.len(), self.cols));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        &mut self.data[r * self.cols + c]
    }
}

/// Reduced row echelon form held as primitive integer rows.
///
/// Row `i` has its pivot at column `pivots[i]`; every other row is zero in
/// that column.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in row.iter_mut() {
        *v /= &g;
    }
}

fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let l = rat::denominator_lcm(row);
    let mut out: Vec<BigInt> = row
        .iter()
        .map(|v| v.numer() * (&l / v.denom()))
        .collect();
    primitive(&mut out);
    out
}

impl Echelon {
    /// Row-reduces the given rows (each of length `cols`).
    pub fn from_rows<I>(cols: usize, rows: I) -> Echelon
    where
        I: IntoIterator<Item = Vec<Rat>>,
    {
        let mut work: Vec<Vec<BigInt>> = rows
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "row length");
                integer_row(&r)
            })
            .filter(|r| r.iter().any(|v| !v.is_zero()))
            .collect();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..cols {
            if next == work.len() {
                break;
            }
            let Some(p) = (next..work.len()).find(|&r| !work[r][c].is_zero()) else {
                continue;
            };
            work.swap(p, next);
            if work[next][c].is_negative() {
                for v in work[next].iter_mut() {
                    *v = -&*v;
                }
            }
            let (head, tail) = work.split_at_mut(next);
            let (pivot_row, rest) = tail.split_first_mut().expect("pivot row");
            let pv = pivot_row[c].clone();
            for row in head.iter_mut().chain(rest.iter_mut()) {
                if row[c].is_zero() {
                    continue;
                }
                let g = pv.gcd(&row[c]);
                let (a, b) = (&pv / &g, &row[c] / &g);
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    if y.is_zero() {
                        if !x.is_zero() {
                            *x *= &a;
                        }
                    } else {
                        *x = &*x * &a - y * &b;
                    }
                }
                primitive(row);
            }
            pivots.push(c);
            next += 1;
        }
        work.truncate(next);
        Echelon {
            cols,
            rows: work,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// One kernel vector per free column, with a 1 in that column.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut x = vec![Rat::zero(); self.cols];
                x[f] = Rat::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if !row[f].is_zero() {
                        x[p] = -Rat::new(row[f].clone(), row[p].clone());
                    }
                }
                x
            })
            .collect()
    }

    /// Whether `v` lies in the row space.
    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut r: Vec<Rat> = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let f = &r[p] / Rat::from_integer(row[p].clone());
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * Rat::from_integer(y.clone());
                }
            }
        }
        r.iter().all(Zero::is_zero)
    }
}

/// Rank of a set of vectors of common length `cols`.
pub fn rank_of<I: IntoIterator<Item = Vec<Rat>>>(cols: usize, rows: I) -> usize {
    Echelon::from_rows(cols, rows).rank()
}

/// Sylvester inertia `(positive, negative, zero)` of a symmetric matrix,
/// computed by exact congruence reduction.
pub fn inertia(m: &Matrix) -> Result<(usize, usize, usize)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(m.rows, m.cols));
    }
    let n = m.rows;
    if m != &m.transpose() {
        return Err(Error::SymmetryViolation("inertia of a non-symmetric matrix".into()));
    }
    let mut a = m.clone();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        if let Some(i) = (k..n).find(|&i| !a[(i, i)].is_zero()) {
            sym_swap(&mut a, i, k);
        } else if let Some((i, j)) = (k..n)
            .flat_map(|i| (k..n).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && !a[(i, j)].is_zero())
        {
            // diagonal vanishes: row/col i += row/col j gives a[i][i] = 2 a[i][j]
            for c in 0..n {
                let v = a[(j, c)].clone();
                a[(i, c)] += v;
            }
            for r in 0..n {
                let v = a[(r, j)].clone();
                a[(r, i)] += v;
            }
            sym_swap(&mut a, i, k);
        } else {
            break;
        }
        let d = a[(k, k)].clone();
        match rat::sign(&d) {
            1 => pos += 1,
            -1 => neg += 1,
            _ => unreachable!("pivot is nonzero"),
        }
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = &a[(i, k)] / &d;
            for j in k..n {
                let v = &f * &a[(k, j)];
                a[(i, j)] -= v;
            }
        }
        for j in k + 1..n {
            a[(k, j)] = Rat::zero();
        }
        for i in k + 1..n {
            a[(i, k)] = Rat::zero();
        }
    }
    Ok((pos, neg, n - pos - neg))
}

fn sym_swap(a: &mut Matrix, i: usize, k: usize) {
    if i == k {
        return;
    }
    a.swap_rows(i, k);
    let n = a.cols;
    for r in 0..a.rows {
        a.data.swap(r * n + i, r * n + k);
    }
}
