//! Small dense exact linear algebra: matrices over a coefficient field and
//! an incremental row-echelon form used by the jet computations.

use crate::error::Error;
use crate::field::{Coeff, Field};
use crate::Result;

/// Dense row-major matrix over a [`Field`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Coeff>,
}

impl Matrix {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Coeff>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::ArityMismatch(row.len(), c));
            }
            for v in row {
                field.validate(&v)?;
                data.push(v);
            }
        }
        Ok(Matrix {
            field: field.clone(),
            rows: r,
            cols: c,
            data,
        })
    }

    /// Integer-entry convenience constructor.
    pub fn from_i64_rows(field: &Field, rows: &[&[i64]]) -> Matrix {
        let converted = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, converted).expect("rectangular integer matrix")
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

    pub fn get(&self, i: usize, j: usize) -> &Coeff {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Coeff) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ArityMismatch(self.cols, other.rows));
        }
        let f = &self.field;
        let mut out = Matrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), &f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Coeff]) -> Result<Vec<Coeff>> {
        if v.len() != self.cols {
            return Err(Error::ArityMismatch(v.len(), self.cols));
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if !f.is_zero(a) {
                    out[i] = f.add(&out[i], &f.mul(a, &v[j]));
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(&self.field, self.cols);
        for i in 0..self.rows {
            let row: Vec<Coeff> = (0..self.cols).map(|j| self.get(i, j).clone()).collect();
            ech.add_row(row);
        }
        ech.rank()
    }

    pub fn determinant(&self) -> Result<Coeff> {
        if self.rows != self.cols {
            return Err(Error::ArityMismatch(self.rows, self.cols));
        }
        let f = &self.field;
        let n = self.rows;
        let mut a = self.clone();
        let mut det = f.one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !f.is_zero(a.get(r, col)));
            let pivot = match pivot {
                Some(p) => p,
                None => return Ok(f.zero()),
            };
            if pivot != col {
                for j in 0..n {
                    let u = a.get(col, j).clone();
                    let v = a.get(pivot, j).clone();
                    a.set(col, j, v);
                    a.set(pivot, j, u);
                }
                det = f.neg(&det);
            }
            let pv = a.get(col, col).clone();
            det = f.mul(&det, &pv);
            let pv_inv = f.inv(&pv)?;
            for r in col + 1..n {
                let factor = f.mul(a.get(r, col), &pv_inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in col..n {
                    let v = f.sub(a.get(r, j), &f.mul(&factor, a.get(col, j)));
                    a.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn is_invertible(&self) -> Result<bool> {
        Ok(!self.field.is_zero(&self.determinant()?))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::ArityMismatch(self.rows, self.cols));
        }
        let f = &self.field;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(f, n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !f.is_zero(a.get(r, col)))
                .ok_or(Error::SingularMatrix)?;
            if pivot != col {
                for j in 0..n {
                    let u = a.get(col, j).clone();
                    let v = a.get(pivot, j).clone();
                    a.set(col, j, v);
                    a.set(pivot, j, u);
                    let u = inv.get(col, j).clone();
                    let v = inv.get(pivot, j).clone();
                    inv.set(col, j, v);
                    inv.set(pivot, j, u);
                }
            }
            let pv_inv = f.inv(a.get(col, col))?;
            for j in 0..n {
                let v = f.mul(a.get(col, j), &pv_inv);
                a.set(col, j, v);
                let v = f.mul(inv.get(col, j), &pv_inv);
                inv.set(col, j, v);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in 0..n {
                    let v = f.sub(a.get(r, j), &f.mul(&factor, a.get(col, j)));
                    a.set(r, j, v);
                    let v = f.sub(inv.get(r, j), &f.mul(&factor, inv.get(col, j)));
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }
}

/// Incremental echelon form keyed by pivot column, with pivots normalized
/// to 1. Supports rank queries and membership tests for the row span.
pub struct Echelon {
    field: Field,
    width: usize,
    /// sorted by pivot column
    rows: Vec<(usize, Vec<Coeff>)>,
}

impl Echelon {
    pub fn new(field: &Field, width: usize) -> Echelon {
        Echelon {
            field: field.clone(),
            width,
            rows: vec![],
        }
    }

    /// Reduces `v` against the current rows, in place.
    fn reduce_in_place(&self, v: &mut [Coeff]) {
        let f = &self.field;
        for (pivot, row) in &self.rows {
            let c = v[*pivot].clone();
            if f.is_zero(&c) {
                continue;
            }
            for j in *pivot..self.width {
                if !f.is_zero(&row[j]) {
                    v[j] = f.sub(&v[j], &f.mul(&c, &row[j]));
                }
            }
        }
    }

    /// Adds a row; returns true when it enlarged the span.
    pub fn add_row(&mut self, mut v: Vec<Coeff>) -> bool {
        assert_eq!(v.len(), self.width);
        let f = self.field.clone();
        self.reduce_in_place(&mut v);
        let pivot = match v.iter().position(|c| !f.is_zero(c)) {
            Some(p) => p,
            None => return false,
        };
        let inv = f.inv(&v[pivot]).expect("nonzero pivot");
        for c in v.iter_mut() {
            *c = f.mul(c, &inv);
        }
        let at = self
            .rows
            .binary_search_by_key(&pivot, |(p, _)| *p)
            .unwrap_err();
        self.rows.insert(at, (pivot, v));
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// True when `v` lies in the span of the added rows.
    pub fn contains(&self, v: &[Coeff]) -> bool {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w.iter().all(|c| self.field.is_zero(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let f = Field::Rational;
        let m = Matrix::from_i64_rows(&f, &[&[1, 2, 0], &[0, 1, 3], &[1, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(&f, 3));
    }

    #[test]
    fn singular_matrix_detected() {
        let f = Field::Rational;
        let m = Matrix::from_i64_rows(&f, &[&[1, 2], &[2, 4]]);
        assert!(!m.is_invertible().unwrap());
        assert!(matches!(m.inverse(), Err(Error::SingularMatrix)));
    }

    #[test]
    fn echelon_rank_and_membership() {
        let f = Field::Rational;
        let mut e = Echelon::new(&f, 3);
        let row = |a: i64, b: i64, c: i64| vec![f.from_i64(a), f.from_i64(b), f.from_i64(c)];
        assert!(e.add_row(row(1, 1, 0)));
        assert!(e.add_row(row(0, 2, 2)));
        assert!(!e.add_row(row(2, 4, 2)));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&row(1, 3, 2)));
        assert!(!e.contains(&row(0, 0, 1)));
    }
}
