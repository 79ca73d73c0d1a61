//! Dense square matrices over small finite fields.
//!
//! Matrices act on column vectors: `v -> A v`.

use std::fmt;

use super::field::{Field, FieldElement};
use crate::error::{Error, Result};

pub const MAX_DIMENSION: usize = 8;
pub const DEFAULT_ORDER_CAP: u64 = 1_000_000;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    n: usize,
    data: Vec<u16>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix over GF({}):", self.field.order())?;
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| self.data[r * self.n + c].to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Matrix {
    fn check_dim(n: usize) -> Result<()> {
        if n == 0 || n > MAX_DIMENSION {
            return Err(Error::DimensionMismatch(format!(
                "dimension {n} outside 1..={MAX_DIMENSION}"
            )));
        }
        Ok(())
    }

    pub fn identity(field: &Field, n: usize) -> Result<Self> {
        Self::check_dim(n)?;
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Ok(Matrix {
            field: field.clone(),
            n,
            data,
        })
    }

    /// Builds a matrix from row-major element codes.
    pub fn from_codes(field: &Field, n: usize, codes: &[u16]) -> Result<Self> {
        Self::check_dim(n)?;
        if codes.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n}x{n} matrix",
                codes.len()
            )));
        }
        if let Some(&bad) = codes.iter().find(|&&c| u32::from(c) >= field.order()) {
            return Err(Error::InvalidField(format!("code {bad} outside GF({})", field.order())));
        }
        Ok(Matrix {
            field: field.clone(),
            n,
            data: codes.to_vec(),
        })
    }

    /// Row-major integers mapped into the prime subfield.
    pub fn from_ints(field: &Field, n: usize, ints: &[i64]) -> Result<Self> {
        let codes: Vec<u16> = ints.iter().map(|&x| field.from_int(x).code()).collect();
        Self::from_codes(field, n, &codes)
    }

    pub fn from_elements(field: &Field, n: usize, entries: &[FieldElement]) -> Result<Self> {
        for &e in entries {
            if e.field_order() != field.order() {
                return Err(Error::FieldMismatch {
                    left: field.order(),
                    right: e.field_order(),
                });
            }
        }
        let codes: Vec<u16> = entries.iter().map(|e| e.code()).collect();
        Self::from_codes(field, n, &codes)
    }

    /// Elementary matrix `I + scalar * E_{row,col}` (0-based indices, row != col).
    pub fn elementary(field: &Field, n: usize, row: usize, col: usize, scalar: FieldElement) -> Result<Self> {
        if row == col || row >= n || col >= n {
            return Err(Error::DimensionMismatch(format!("bad elementary position ({row},{col})")));
        }
        let mut m = Self::identity(field, n)?;
        m.set(row, col, scalar)?;
        Ok(m)
    }

    pub fn diagonal(field: &Field, diag: &[FieldElement]) -> Result<Self> {
        let n = diag.len();
        let mut m = Self::identity(field, n)?;
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d)?;
        }
        Ok(m)
    }

    pub fn scalar(field: &Field, n: usize, s: FieldElement) -> Result<Self> {
        Self::diagonal(field, &vec![s; n])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn codes(&self) -> &[u16] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.field.elem(self.data[r * self.n + c])
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) -> Result<()> {
        if v.field_order() != self.field.order() {
            return Err(Error::FieldMismatch {
                left: self.field.order(),
                right: v.field_order(),
            });
        }
        self.data[r * self.n + c] = v.code();
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|c| self.data[r * self.n + c] == u16::from(r == c)))
    }

    fn compatible(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.order(),
                right: other.field.order(),
            });
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.n, other.n)));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let f = &self.field;
        let mut data = vec![0u16; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == 0 {
                    continue;
                }
                for c in 0..n {
                    let prod = f.mul_raw(a, other.data[k * n + c]);
                    data[r * n + c] = f.add_raw(data[r * n + c], prod);
                }
            }
        }
        Matrix {
            field: f.clone(),
            n,
            data,
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.compatible(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.add_raw(a, b))
            .collect();
        Ok(Matrix {
            field: self.field.clone(),
            n: self.n,
            data,
        })
    }

    pub fn minus_identity(&self) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.n {
            let d = &mut m.data[i * self.n + i];
            *d = self.field.add_raw(*d, self.field.neg_raw(1));
        }
        m
    }

    pub fn scale(&self, s: FieldElement) -> Result<Matrix> {
        if s.field_order() != self.field.order() {
            return Err(Error::FieldMismatch {
                left: self.field.order(),
                right: s.field_order(),
            });
        }
        let data = self.data.iter().map(|&a| self.field.mul_raw(a, s.code())).collect();
        Ok(Matrix {
            field: self.field.clone(),
            n: self.n,
            data,
        })
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut data = vec![0u16; n * n];
        for r in 0..n {
            for c in 0..n {
                data[c * n + r] = self.data[r * n + c];
            }
        }
        Matrix {
            field: self.field.clone(),
            n,
            data,
        }
    }

    /// Applies the involutory field automorphism entrywise.
    pub fn conjugate(&self) -> Result<Matrix> {
        self.field.conjugate(self.field.one())?;
        let data = self.data.iter().map(|&a| self.field.conj_raw(a)).collect();
        Ok(Matrix {
            field: self.field.clone(),
            n: self.n,
            data,
        })
    }

    /// Column action `v -> A v` on a vector of element codes.
    pub fn apply(&self, v: &[u16]) -> Vec<u16> {
        let n = self.n;
        let f = &self.field;
        (0..n)
            .map(|r| {
                (0..n).fold(0u16, |acc, c| f.add_raw(acc, f.mul_raw(self.data[r * n + c], v[c])))
            })
            .collect()
    }

    /// Row echelon reduction in place; returns (rank, determinant factor).
    fn echelon(rows: &mut [Vec<u16>], field: &Field, cols: usize) -> (usize, u16) {
        let mut rank = 0;
        let mut det = 1u16;
        for col in 0..cols {
            let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                det = 0;
                continue;
            };
            if piv != rank {
                rows.swap(piv, rank);
                det = field.neg_raw(det);
            }
            let lead = rows[rank][col];
            det = field.mul_raw(det, lead);
            let inv = field.inv_raw(lead);
            for x in rows[rank].iter_mut() {
                *x = field.mul_raw(*x, inv);
            }
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == rank || row[col] == 0 {
                    continue;
                }
                let factor = field.neg_raw(row[col]);
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x = field.add_raw(*x, field.mul_raw(factor, p));
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        (rank, det)
    }

    fn rows(&self) -> Vec<Vec<u16>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows();
        Self::echelon(&mut rows, &self.field, self.n).0
    }

    pub fn det(&self) -> FieldElement {
        let mut rows = self.rows();
        let (rank, det) = Self::echelon(&mut rows, &self.field, self.n);
        if rank < self.n {
            self.field.zero()
        } else {
            self.field.elem(det)
        }
    }

    pub fn inv(&self) -> Result<Matrix> {
        let n = self.n;
        let mut rows: Vec<Vec<u16>> = self
            .data
            .chunks(n)
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.to_vec();
                row.extend((0..n).map(|j| u16::from(i == j)));
                row
            })
            .collect();
        let (rank, _) = Self::echelon(&mut rows, &self.field, n);
        if rank < n {
            return Err(Error::SingularMatrix);
        }
        let data = rows.iter().flat_map(|r| r[n..].iter().copied()).collect();
        Ok(Matrix {
            field: self.field.clone(),
            n,
            data,
        })
    }

    /// Least `k >= 1` with `A^k = I`, by iterated multiplication.
    pub fn order(&self, cap: u64) -> Result<u64> {
        if self.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        let mut acc = self.clone();
        let mut k = 1;
        while !acc.is_identity() {
            if k >= cap {
                return Err(Error::OrderCapExceeded { cap });
            }
            acc = acc.mul_unchecked(self);
            k += 1;
        }
        Ok(k)
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut base = self.clone();
        let mut acc = Matrix::identity(&self.field, self.n).expect("valid dimension");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// Companion matrix of the monic polynomial with the given lower
    /// coefficients `c_0..c_{n-1}`.
    pub fn companion(field: &Field, lower: &[FieldElement]) -> Result<Matrix> {
        let n = lower.len();
        let mut m = Matrix {
            field: field.clone(),
            n,
            data: vec![0; n * n],
        };
        Self::check_dim(n)?;
        for i in 1..n {
            m.data[i * n + (i - 1)] = 1;
        }
        for (i, &c) in lower.iter().enumerate() {
            m.data[i * n + (n - 1)] = field.neg(c)?.code();
        }
        Ok(m)
    }
}
