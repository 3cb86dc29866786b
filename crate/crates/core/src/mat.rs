//! Dense matrices and left (row) vectors over the rationals.
//!
//! Rank and null-space kernels run fraction-free (Bareiss) elimination on
//! denominator-cleared integer rows with first-nonzero pivot selection, then
//! finish with an exact back-substitution to reduced row echelon form. All
//! results are deterministic: the same input always yields the same pivots
//! and the same normalized basis vectors.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::lcm_big;
use crate::poly::Poly;
use crate::rational::Rational;

/// A row vector; the natural home of left eigenvectors.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RowVec(Vec<Rational>);

impl RowVec {
    pub fn new(entries: Vec<Rational>) -> Self {
        RowVec(entries)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        RowVec(entries.iter().map(|&e| Rational::from(e)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        RowVec(vec![Rational::zero(); len])
    }

    /// Unit vector with a one at `index` (0-based).
    pub fn unit(len: usize, index: usize) -> Self {
        assert!(index < len);
        let mut v = Self::zeros(len);
        v.0[index] = Rational::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn scaled(&self, c: &Rational) -> RowVec {
        RowVec(self.0.iter().map(|e| e * c).collect())
    }

    pub fn add(&self, other: &RowVec) -> RowVec {
        assert_eq!(self.len(), other.len(), "row length mismatch");
        RowVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RowVec) -> RowVec {
        assert_eq!(self.len(), other.len(), "row length mismatch");
        RowVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Kronecker product of row vectors.
    pub fn kron(&self, other: &RowVec) -> RowVec {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in &self.0 {
            for b in &other.0 {
                out.push(a * b);
            }
        }
        RowVec(out)
    }

    /// `self · m` as a row vector.
    pub fn mul_mat(&self, m: &Mat) -> Result<RowVec> {
        if self.len() != m.rows {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} times {}x{} matrix",
                self.len(),
                m.rows,
                m.cols
            )));
        }
        let mut out = vec![Rational::zero(); m.cols];
        for (i, coeff) in self.0.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (j, acc) in out.iter_mut().enumerate() {
                *acc = &*acc + &(coeff * m.at(i, j));
            }
        }
        Ok(RowVec(out))
    }

    /// Scales so the first nonzero entry becomes one; zero vectors unchanged.
    pub fn normalized(&self) -> RowVec {
        match self.0.iter().find(|e| !e.is_zero()) {
            Some(first) => self.scaled(&first.recip()),
            None => self.clone(),
        }
    }

    pub fn to_mat(&self) -> Mat {
        Mat {
            rows: 1,
            cols: self.len(),
            data: self.0.clone(),
        }
    }
}

impl Index<usize> for RowVec {
    type Output = Rational;
    fn index(&self, index: usize) -> &Rational {
        &self.0[index]
    }
}

impl fmt::Debug for RowVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Mat {
            rows: rows.len(),
            cols,
            data: rows
                .iter()
                .flat_map(|r| r.iter().map(|&e| Rational::from(e)))
                .collect(),
        }
    }

    /// Stacks row vectors; panics on an empty or ragged list.
    pub fn from_rows(rows: &[RowVec]) -> Self {
        assert!(!rows.is_empty(), "from_rows needs at least one row");
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Mat {
            rows: rows.len(),
            cols,
            data: rows.iter().flat_map(|r| r.0.iter().cloned()).collect(),
        }
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn at(&self, row: usize, col: usize) -> &Rational {
        assert!(row < self.rows && col < self.cols, "index out of range");
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        assert!(row < self.rows && col < self.cols, "index out of range");
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, i: usize) -> RowVec {
        assert!(i < self.rows);
        RowVec(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn row_iter(&self) -> impl Iterator<Item = RowVec> + '_ {
        (0..self.rows).map(|i| self.row(i))
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.same_shape(other, "add")?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.same_shape(other, "sub")?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Mat {
        self.scale(&Rational::from(-1))
    }

    pub fn scale(&self, c: &Rational) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// `self - c·I` for square matrices.
    pub fn shift(&self, c: &Rational) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "shift of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = out.at(i, i) - c;
            out.set(i, i, v);
        }
        Ok(out)
    }

    /// Exact matrix product.
    pub fn matmul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + &(a * other.at(k, j));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product: block (i, j) of the result equals `a[i,j] · b`.
    pub fn kron(&self, other: &Mat) -> Mat {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Mat::zeros(rows, cols);
        for ia in 0..self.rows {
            for ja in 0..self.cols {
                let a = self.at(ia, ja);
                if a.is_zero() {
                    continue;
                }
                for ib in 0..other.rows {
                    for jb in 0..other.cols {
                        out.set(
                            ia * other.rows + ib,
                            ja * other.cols + jb,
                            a * other.at(ib, jb),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, exp: usize) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "power of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut acc = Mat::identity(self.rows);
        for _ in 0..exp {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "trace of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok((0..self.rows).map(|i| self.at(i, i).clone()).sum())
    }

    pub fn hstack(&self, other: &Mat) -> Result<Mat> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        }))
    }

    /// Contiguous block, half-open ranges.
    pub fn block(&self, row0: usize, row1: usize, col0: usize, col1: usize) -> Mat {
        assert!(row0 <= row1 && row1 <= self.rows);
        assert!(col0 <= col1 && col1 <= self.cols);
        Mat::from_fn(row1 - row0, col1 - col0, |i, j| {
            self.at(row0 + i, col0 + j).clone()
        })
    }

    fn same_shape(&self, other: &Mat, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{op} of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        bareiss_echelon(&mut self.integer_rows()).len()
    }

    /// Basis of `{ x : x · self = 0 }`, each vector normalized so its first
    /// nonzero entry is one, ordered by free column. The basis size always
    /// equals `rows - rank`.
    pub fn left_null_space(&self) -> Vec<RowVec> {
        let transposed = self.transpose();
        let (rref, pivot_cols) = transposed.reduced_echelon();
        let pivot_set: BTreeSet<usize> = pivot_cols.iter().copied().collect();
        let mut basis = Vec::new();
        for free in (0..self.rows).filter(|j| !pivot_set.contains(j)) {
            let mut entries = vec![Rational::zero(); self.rows];
            entries[free] = Rational::one();
            for (idx, &pc) in pivot_cols.iter().enumerate() {
                entries[pc] = -&rref[idx][free];
            }
            basis.push(RowVec(entries).normalized());
        }
        basis
    }

    /// Monic characteristic polynomial det(sI - A), exact (Faddeev-LeVerrier).
    pub fn charpoly(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "characteristic polynomial of {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut work = Mat::identity(n);
        for k in 1..=n {
            let am = self.matmul(&work)?;
            let c = -(am.trace()? / Rational::from(k as i64));
            work = am.add(&Mat::identity(n).scale(&c))?;
            coeffs[n - k] = c;
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let mut scale = BigInt::one();
                for j in 0..self.cols {
                    scale = lcm_big(&scale, self.at(i, j).denom());
                }
                (0..self.cols)
                    .map(|j| {
                        let e = self.at(i, j);
                        e.numer() * (&scale / e.denom())
                    })
                    .collect()
            })
            .collect()
    }

    /// Reduced row echelon form (rational) plus pivot columns.
    fn reduced_echelon(&self) -> (Vec<Vec<Rational>>, Vec<usize>) {
        let mut work = self.integer_rows();
        let pivots = bareiss_echelon(&mut work);
        let mut rows: Vec<Vec<Rational>> = work
            .into_iter()
            .take(pivots.len())
            .map(|r| r.into_iter().map(Rational::from).collect())
            .collect();
        for (idx, &(pr, pc)) in pivots.iter().enumerate().rev() {
            debug_assert_eq!(pr, idx);
            let inv = rows[idx][pc].recip();
            for e in rows[idx].iter_mut() {
                *e = &*e * &inv;
            }
            let pivot_row = rows[idx].clone();
            for above in rows.iter_mut().take(idx) {
                let factor = above[pc].clone();
                if factor.is_zero() {
                    continue;
                }
                for (entry, pivot_entry) in above.iter_mut().zip(&pivot_row) {
                    *entry = &*entry - &(&factor * pivot_entry);
                }
            }
        }
        (rows, pivots.into_iter().map(|(_, pc)| pc).collect())
    }

    /// Text format: first line `rows cols`, then row-major whitespace-separated
    /// rational literals (`p`, `p/q`, or an exact decimal such as `8.5`).
    pub fn parse_text(text: &str) -> Result<Mat> {
        let mut tokens = text.lines().enumerate().flat_map(|(idx, line)| {
            line.split_whitespace().map(move |tok| (idx + 1, tok))
        });
        let parse_dim = |item: Option<(usize, &str)>, what: &str| -> Result<(usize, usize)> {
            match item {
                Some((line, tok)) => tok
                    .parse::<usize>()
                    .map(|v| (line, v))
                    .map_err(|_| Error::Parse {
                        line,
                        msg: format!("invalid {what} '{tok}'"),
                    }),
                None => Err(Error::Parse {
                    line: 1,
                    msg: format!("missing {what}"),
                }),
            }
        };
        let (_, rows) = parse_dim(tokens.next(), "row count")?;
        let (_, cols) = parse_dim(tokens.next(), "column count")?;
        let mut data = Vec::with_capacity(rows * cols);
        let mut last_line = 1;
        for _ in 0..rows * cols {
            match tokens.next() {
                Some((line, tok)) => {
                    last_line = line;
                    let value = Rational::from_str(tok).map_err(|e| Error::Parse {
                        line,
                        msg: e.to_string(),
                    })?;
                    data.push(value);
                }
                None => {
                    return Err(Error::Parse {
                        line: last_line,
                        msg: format!(
                            "expected {} entries, found {}",
                            rows * cols,
                            data.len()
                        ),
                    })
                }
            }
        }
        if let Some((line, tok)) = tokens.next() {
            return Err(Error::Parse {
                line,
                msg: format!("unexpected trailing token '{tok}'"),
            });
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        self.at(r, c)
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// In-place fraction-free elimination to row echelon form. Pivot selection is
/// the first nonzero entry in column order, which keeps output deterministic.
/// Returns (pivot_row, pivot_col) pairs; the rank is their count.
fn bareiss_echelon(work: &mut [Vec<BigInt>]) -> Vec<(usize, usize)> {
    let rows = work.len();
    let cols = work.first().map(Vec::len).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut next_row = 0;
    for col in 0..cols {
        if next_row == rows {
            break;
        }
        let Some(pivot_row) = (next_row..rows).find(|&i| !work[i][col].is_zero()) else {
            continue;
        };
        work.swap(next_row, pivot_row);
        let pivot = work[next_row][col].clone();
        for i in next_row + 1..rows {
            let (upper, lower) = work.split_at_mut(i);
            let pivot_tail = &upper[next_row][col + 1..];
            let row = &mut lower[0];
            let lead = row[col].clone();
            for (entry, pivot_entry) in row[col + 1..].iter_mut().zip(pivot_tail) {
                let num = &pivot * &*entry - &lead * pivot_entry;
                debug_assert!((&num % &prev).is_zero(), "Bareiss division not exact");
                *entry = num / &prev;
            }
            row[col] = BigInt::zero();
        }
        pivots.push((next_row, col));
        prev = pivot;
        next_row += 1;
    }
    pivots
}
