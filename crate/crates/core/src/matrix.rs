//! Dense matrices over F_q.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Row-major dense matrix over a finite field.
#[derive(Clone)]
pub struct MatFq {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
    field: Field,
}

impl PartialEq for MatFq {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries == other.entries
            && self.field.same_as(&other.field)
    }
}

impl Eq for MatFq {}

impl fmt::Debug for MatFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatFq[{}]({})", self.field.q(), self.to_literal())
    }
}

impl fmt::Display for MatFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

impl MatFq {
    pub fn new(field: &Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch("matrices must be non-empty".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&a| !field.is_valid(a)) {
            return Err(Error::domain(format!("{bad} is not an element of F_{}", field.q())));
        }
        Ok(MatFq {
            rows,
            cols,
            entries,
            field: field.clone(),
        })
    }

    /// Entries are taken as canonical indices.
    pub fn from_rows(field: &Field, rows: &[&[u32]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|row| row.iter())
            .map(|&x| field.scalar(x))
            .collect::<Result<Vec<_>>>()?;
        MatFq::new(field, r, c, entries)
    }

    pub fn column(field: &Field, v: &[Scalar]) -> Result<Self> {
        MatFq::new(field, v.len(), 1, v.to_vec())
    }

    pub(crate) fn from_raw(field: &Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        MatFq {
            rows,
            cols,
            entries,
            field: field.clone(),
        }
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        MatFq::from_raw(field, rows, cols, vec![Scalar::ZERO; rows * cols])
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = MatFq::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = Scalar::ONE;
        }
        m
    }

    /// `diag(a, 1)`: the block embedding of an n×n matrix into (n+1)×(n+1).
    pub fn block_diag_one(&self) -> MatFq {
        let n = self.rows;
        let mut m = MatFq::identity(&self.field, n + 1);
        for i in 0..n {
            for j in 0..self.cols {
                m.entries[i * (n + 1) + j] = self.get(i, j);
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

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, a: Scalar) {
        self.entries[i * self.cols + j] = a;
    }

    /// `(rows, cols, entry indices...)`; injective for a fixed field.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(2 + self.entries.len());
        out.push(self.rows as u8);
        out.push(self.cols as u8);
        out.extend(self.entries.iter().map(|s| s.0));
        out
    }

    fn check_field(&self, other: &MatFq) -> Result<()> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn mul(&self, other: &MatFq) -> Result<MatFq> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    /// Product without shape or field checks; callers guarantee both.
    pub(crate) fn mul_unchecked(&self, other: &MatFq) -> MatFq {
        let f = &self.field;
        let (n, m, k) = (self.rows, self.cols, other.cols);
        let mut out = vec![Scalar::ZERO; n * k];
        for i in 0..n {
            for l in 0..m {
                let a = self.entries[i * m + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..k {
                    let cell = &mut out[i * k + j];
                    *cell = f.add(*cell, f.mul(a, other.entries[l * k + j]));
                }
            }
        }
        MatFq::from_raw(f, n, k, out)
    }

    pub fn add(&self, other: &MatFq) -> Result<MatFq> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("addition of differently shaped matrices".into()));
        }
        let f = &self.field;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(MatFq::from_raw(f, self.rows, self.cols, entries))
    }

    pub fn scale(&self, c: Scalar) -> MatFq {
        let f = &self.field;
        let entries = self.entries.iter().map(|&a| f.mul(c, a)).collect();
        MatFq::from_raw(f, self.rows, self.cols, entries)
    }

    /// `self · v` for a vector given as a slice.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} applied to a {}-vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Scalar::ZERO, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j])))
            })
            .collect())
    }

    pub fn transpose(&self) -> MatFq {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j));
            }
        }
        MatFq::from_raw(&self.field, self.cols, self.rows, entries)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| self.get(i, j) == if i == j { Scalar::ONE } else { Scalar::ZERO })
            })
    }

    /// Row echelon reduction in place; returns the pivot columns and the
    /// determinant factor accumulated from swaps and pivot scalings.
    fn eliminate(&mut self, augment: Option<&mut MatFq>) -> (Vec<usize>, Scalar) {
        let f = self.field.clone();
        let mut aug = augment;
        let mut pivots = Vec::new();
        let mut det = Scalar::ONE;
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if piv != row {
                self.swap_rows(piv, row);
                if let Some(a) = aug.as_deref_mut() {
                    a.swap_rows(piv, row);
                }
                det = f.neg(det);
            }
            let pv = self.get(row, col);
            det = f.mul(det, pv);
            let pinv = f.inv(pv).expect("pivot is nonzero");
            self.scale_row(row, pinv);
            if let Some(a) = aug.as_deref_mut() {
                a.scale_row(row, pinv);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                let nf = f.neg(factor);
                self.add_row_multiple(r, row, nf);
                if let Some(a) = aug.as_deref_mut() {
                    a.add_row_multiple(r, row, nf);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (pivots, det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: Scalar) {
        for j in 0..self.cols {
            let x = self.get(r, j);
            self.set(r, j, self.field.mul(c, x));
        }
    }

    /// row[dst] += c · row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: Scalar) {
        for j in 0..self.cols {
            let x = self.field.add(self.get(dst, j), self.field.mul(c, self.get(src, j)));
            self.set(dst, j, x);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate(None).0.len()
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> MatFq {
        let mut m = self.clone();
        m.eliminate(None);
        m
    }

    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let (pivots, det) = self.clone().eliminate(None);
        Ok(if pivots.len() == self.rows { det } else { Scalar::ZERO })
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<MatFq> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let mut work = self.clone();
        let mut inv = MatFq::identity(&self.field, self.rows);
        let (pivots, _) = work.eliminate(Some(&mut inv));
        if pivots.len() != self.rows {
            return Err(Error::Singular);
        }
        Ok(inv)
    }

    /// Row-major literal: `1,2;0,1`.
    pub fn to_literal(&self) -> String {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn parse_literal(field: &Field, s: &str) -> Result<MatFq> {
        let rows: Vec<Vec<u32>> = s
            .trim()
            .split(';')
            .map(parse_vector_u32)
            .collect::<Result<_>>()?;
        let refs: Vec<&[u32]> = rows.iter().map(|r| r.as_slice()).collect();
        MatFq::from_rows(field, &refs)
    }
}

fn parse_vector_u32(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad scalar index {t:?}")))
        })
        .collect()
}

/// Parses a comma-separated vector of scalar indices.
pub fn parse_vector(field: &Field, s: &str) -> Result<Vec<Scalar>> {
    parse_vector_u32(s)?
        .into_iter()
        .map(|x| field.scalar(x))
        .collect()
}

pub fn format_vector(v: &[Scalar]) -> String {
    v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")
}

/// Dot product ⟨a, b⟩ = Σ aᵢbᵢ.
pub fn dot(field: &Field, a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .fold(Scalar::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}
