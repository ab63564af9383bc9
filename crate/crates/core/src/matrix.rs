//! Dense matrices over a [`Scalar`] ring.
//!
//! Tensor products use row-major flattening: the basis vector `(i, k)` of
//! `V ⊗ W` has index `i·dim W + k`. With this convention `kron` is strictly
//! associative, which is how the monoidal structure is kept strict.

use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result, SingularWitness};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn new(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// The matrix of a function table: column `j` has a single 1 in row `table[j]`.
    pub fn from_table(table: &[usize], cod_size: usize) -> Self {
        let mut m = Self::zeros(cod_size, table.len());
        for (j, &i) in table.iter().enumerate() {
            m.data[i * table.len() + j] = S::one();
        }
        m
    }

    pub fn column(values: Vec<S>) -> Self {
        Self {
            rows: values.len(),
            cols: 1,
            data: values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: S) {
        self.data[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn col_vec(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * rhs.cols + j;
                        out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[S]) -> Result<Vec<S>> {
        Ok(self.mul(&Self::column(v.to_vec()))?.data)
    }

    /// Kronecker product: `(a⊗b)[i·rb + k, j·cb + l] = a[i,j]·b[k,l]`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (ra, ca) = self.shape();
        let (rb, cb) = rhs.shape();
        let mut out = Self::zeros(ra * rb, ca * cb);
        let width = ca * cb;
        for i in 0..ra {
            for j in 0..ca {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rb {
                    for l in 0..cb {
                        let b = rhs.get(k, l);
                        if !b.is_zero() {
                            out.data[(i * rb + k) * width + j * cb + l] = a.clone() * b.clone();
                        }
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(S, S) -> S) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&(-S::one()))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Entrywise reduction modulo ℏ.
    pub fn constant_term(&self) -> Matrix<Rational> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Scalar::constant_term).collect(),
        }
    }

    /// Exact inverse by Gauss–Jordan elimination with unit pivots.
    ///
    /// Over a truncated ℏ-series ring a pivot is acceptable iff its constant
    /// term is nonzero, so the elimination succeeds exactly when the degree-0
    /// reduction is invertible.
    pub fn invert(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Singular(SingularWitness::NotSquare {
                rows: self.rows,
                cols: self.cols,
            }));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let found = (col..n).find_map(|r| a.get(r, col).try_inverse().map(|p| (r, p)));
            let Some((pivot_row, pivot_inv)) = found else {
                return Err(Error::Singular(SingularWitness::Kernel(
                    nullspace_vector(&self.constant_term()).unwrap_or_default(),
                )));
            };
            a.swap_rows(col, pivot_row);
            inv.swap_rows(col, pivot_row);
            a.scale_row(col, &pivot_inv);
            inv.scale_row(col, &pivot_inv);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                a.add_row_multiple(r, col, &factor);
                inv.add_row_multiple(r, col, &factor);
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(r1 * self.cols + j, r2 * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: &S) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = self.data[idx].clone() * c.clone();
        }
    }

    /// `row[target] -= factor · row[source]`
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &S) {
        for j in 0..self.cols {
            let s = self.data[source * self.cols + j].clone();
            if s.is_zero() {
                continue;
            }
            let idx = target * self.cols + j;
            self.data[idx] = self.data[idx].clone() - factor.clone() * s;
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array((0..self.cols).map(|j| self.get(i, j).to_json()).collect()))
                .collect(),
        )
    }

    /// Decodes an array of rows. `cols` disambiguates the empty-row case.
    pub fn from_json(value: &Value, cols_hint: Option<usize>) -> Result<Self> {
        let rows = value
            .as_array()
            .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
        let parsed = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                    .iter()
                    .map(S::from_json)
                    .collect::<Result<Vec<S>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if parsed.is_empty() {
            return Ok(Self::zeros(0, cols_hint.unwrap_or(0)));
        }
        Self::from_rows(parsed)
    }
}

impl Matrix<Rational> {
    /// Embeds a rational matrix into another scalar ring.
    pub fn lift<T: Scalar>(&self) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(T::from_rational).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        row_echelon(self).1.len()
    }
}

/// Reduced row echelon form with leftmost pivots; returns the nonzero rows and
/// their pivot columns.
pub fn row_echelon(m: &Matrix<Rational>) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        a.swap_rows(row, p);
        let inv = a.get(row, col).recip();
        a.scale_row(row, &inv);
        for r in 0..a.rows {
            if r != row {
                let factor = a.get(r, col).clone();
                if !factor.is_zero() {
                    a.add_row_multiple(r, row, &factor);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let rows = (0..pivots.len())
        .map(|r| (0..a.cols).map(|j| a.get(r, j).clone()).collect())
        .collect();
    (rows, pivots)
}

/// A nonzero kernel vector, normalized so that its first nonzero entry is positive.
pub fn nullspace_vector(m: &Matrix<Rational>) -> Option<Vec<Rational>> {
    let (rows, pivots) = row_echelon(m);
    let free = (0..m.cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational::zero(); m.cols];
    v[free] = Rational::one();
    for (row, &p) in rows.iter().zip(&pivots) {
        v[p] = -row[free].clone();
    }
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| *x < Rational::zero()) {
        v.iter_mut().for_each(|x| *x = -x.clone());
    }
    Some(v)
}

/// Projection onto `Q^n / span(columns of relations)` together with a section.
///
/// Row-reducing `relationsᵀ` gives leftmost pivots `P`; the coordinate vectors
/// outside `P` span a complement of the relation space and form the quotient
/// basis. Returns `(p, s)` with `p: r×n`, `s: n×r`, `p·s = I` and
/// `p·relations = 0`.
pub fn cokernel_projection(
    relations: &Matrix<Rational>,
    ambient_dim: usize,
) -> Result<(Matrix<Rational>, Matrix<Rational>)> {
    if relations.rows() != ambient_dim {
        return Err(Error::ShapeMismatch(format!(
            "relations have {} rows, ambient dimension is {ambient_dim}",
            relations.rows()
        )));
    }
    let (echelon, pivots) = row_echelon(&relations.transpose());
    let quotient: Vec<usize> = (0..ambient_dim).filter(|c| !pivots.contains(c)).collect();
    let r = quotient.len();
    let mut p = Matrix::zeros(r, ambient_dim);
    for (qi, &qc) in quotient.iter().enumerate() {
        p.set(qi, qc, Rational::one());
        for (row, &pc) in echelon.iter().zip(&pivots) {
            if !row[qc].is_zero() {
                p.set(qi, pc, -row[qc].clone());
            }
        }
    }
    let mut s = Matrix::zeros(ambient_dim, r);
    for (qi, &qc) in quotient.iter().enumerate() {
        s.set(qc, qi, Rational::one());
    }
    Ok((p, s))
}
