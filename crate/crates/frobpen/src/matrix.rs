//! Dense matrices of rational functions.
//!
//! Determinant and inverse run fraction-free (Bareiss) on the polynomial
//! level after clearing row denominators, which keeps the intermediate
//! expression swell under control compared to naive field elimination.

use std::fmt;

use crate::error::CasError;
use crate::gcd::lcm;
use crate::poly::MPoly;
use crate::ratfn::RatFn;
use crate::scalar::ExactScalar;

#[derive(Clone, PartialEq, Eq)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RatFn>,
}

impl RMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<RatFn>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        assert_eq!(data.len(), rows * cols, "data length mismatch");
        RMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix::new(rows, cols, vec![RatFn::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = RatFn::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RatFn) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RMatrix::new(rows, cols, data)
    }

    pub fn diagonal(entries: Vec<RatFn>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            *m.at_mut(i, i) = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &RatFn {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut RatFn {
        &mut self.data[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RatFn::is_zero)
    }

    pub fn transpose(&self) -> RMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn add(&self, rhs: &RMatrix) -> Result<RMatrix, CasError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(CasError::DimensionMismatch(format!(
                "add {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.at(i, j).add(rhs.at(i, j))
        }))
    }

    pub fn sub(&self, rhs: &RMatrix) -> Result<RMatrix, CasError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(CasError::DimensionMismatch(format!(
                "sub {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.at(i, j).sub(rhs.at(i, j))
        }))
    }

    pub fn mul(&self, rhs: &RMatrix) -> Result<RMatrix, CasError> {
        if self.cols != rhs.rows {
            return Err(CasError::DimensionMismatch(format!(
                "mul {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = RatFn::zero();
            for k in 0..self.cols {
                let p = self.at(i, k).mul(rhs.at(k, j));
                acc = acc.add(&p);
            }
            acc
        }))
    }

    pub fn scale(&self, f: &RatFn) -> RMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| self.at(i, j).mul(f))
    }

    /// Clears denominators: returns (polynomial matrix N, per-row multipliers d)
    /// with `self[i][j] = N[i][j] / d[i]`.
    fn cleared_rows(&self) -> (Vec<Vec<MPoly>>, Vec<MPoly>) {
        let mut rows_out = Vec::with_capacity(self.rows);
        let mut dens = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut d = MPoly::one();
            for j in 0..self.cols {
                d = lcm(&d, self.at(i, j).den());
            }
            let row: Vec<MPoly> = (0..self.cols)
                .map(|j| {
                    let e = self.at(i, j);
                    let cof = d.div_exact(e.den()).expect("lcm divisible");
                    e.num().mul(&cof)
                })
                .collect();
            rows_out.push(row);
            dens.push(d);
        }
        (rows_out, dens)
    }

    /// Exact determinant (Bareiss fraction-free elimination).
    pub fn determinant(&self) -> Result<RatFn, CasError> {
        if !self.is_square() {
            return Err(CasError::DimensionMismatch("determinant of non-square".into()));
        }
        let n = self.rows;
        let (mut m, dens) = self.cleared_rows();
        let mut sign = false;
        let mut prev = MPoly::one();
        for k in 0..n.saturating_sub(1) {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                    return Ok(RatFn::zero());
                };
                m.swap(k, p);
                sign = !sign;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let t = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                    m[i][j] = t.div_exact(&prev).expect("Bareiss exact division");
                }
                m[i][k] = MPoly::zero();
            }
            prev = m[k][k].clone();
        }
        let mut det = RatFn::from_poly(m[n - 1][n - 1].clone());
        if sign {
            det = det.neg();
        }
        for d in dens {
            det = det.div(&RatFn::from_poly(d))?;
        }
        Ok(det)
    }

    /// Exact inverse via fraction-free Gauss–Jordan; errors when singular.
    pub fn inverse(&self) -> Result<RMatrix, CasError> {
        if !self.is_square() {
            return Err(CasError::DimensionMismatch("inverse of non-square".into()));
        }
        let n = self.rows;
        let (m, dens) = self.cleared_rows();
        // augmented [N | I], fraction-free Gauss-Jordan (Nakos-style):
        // after the sweep the left block is det*I and the right block det*N^{-1}.
        let w = 2 * n;
        let mut a: Vec<Vec<MPoly>> = (0..n)
            .map(|i| {
                let mut row = m[i].clone();
                row.extend((0..n).map(|j| if i == j { MPoly::one() } else { MPoly::zero() }));
                row
            })
            .collect();
        let mut sign = false;
        let mut prev = MPoly::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return Err(CasError::SingularMatrix);
                };
                a.swap(k, p);
                sign = !sign;
            }
            let pivot = a[k][k].clone();
            for i in 0..n {
                if i == k {
                    continue;
                }
                for j in 0..w {
                    if j == k {
                        continue;
                    }
                    let t = pivot.mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                    a[i][j] = t.div_exact(&prev).expect("Bareiss exact division");
                }
                a[i][k] = MPoly::zero();
            }
            prev = pivot;
        }
        // left block is now diag(det,...,det) up to the final pivot scaling
        let det_poly = a[n - 1][n - 1].clone();
        if det_poly.is_zero() {
            return Err(CasError::SingularMatrix);
        }
        let det = if sign { det_poly.neg() } else { det_poly.clone() };
        let mut out = RMatrix::zeros(n, n);
        for i in 0..n {
            // row i of the right block divided by its own left-diagonal entry,
            // then scaled by the row-clearing multiplier of the *column* row.
            let di = a[i][i].clone();
            for j in 0..n {
                let val = RatFn::new(a[i][j + n].clone(), di.clone())?;
                *out.at_mut(i, j) = val.mul(&RatFn::from_poly(dens[j].clone()));
            }
        }
        let _ = det; // determinant recoverable via determinant()
        Ok(out)
    }

    /// Evaluates every entry at a rational point.
    pub fn eval(&self, point: &[(&str, ExactScalar)]) -> Result<Vec<Vec<ExactScalar>>, CasError> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).eval(point)).collect())
            .collect()
    }

    /// Substitutes polynomials for variables in every entry.
    pub fn substitute(&self, map: &[(&str, MPoly)]) -> Result<RMatrix, CasError> {
        let mut data = Vec::with_capacity(self.data.len());
        for e in &self.data {
            data.push(e.substitute(map)?);
        }
        Ok(RMatrix::new(self.rows, self.cols, data))
    }

    /// Substitutes rational functions for variables in every entry.
    pub fn substitute_ratfn(&self, map: &[(&str, RatFn)]) -> Result<RMatrix, CasError> {
        let mut data = Vec::with_capacity(self.data.len());
        for e in &self.data {
            data.push(e.substitute_ratfn(map)?);
        }
        Ok(RMatrix::new(self.rows, self.cols, data))
    }

    /// Canonical strings of all entries, row-major.
    pub fn entry_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.at(i, j).to_canonical_string())
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.at(i, j).to_canonical_string())
                .collect();
            writeln!(f, "[ {} ]", row.join(" ; "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(name: &str) -> RatFn {
        RatFn::var(name)
    }

    #[test]
    fn identity_inverse() {
        let id = RMatrix::identity(3);
        assert_eq!(id.inverse().unwrap(), id);
    }

    #[test]
    fn companion_determinant() {
        // L = [[u1, 1], [u2, 0]] has det -u2
        let l = RMatrix::new(
            2,
            2,
            vec![rv("u1"), RatFn::one(), rv("u2"), RatFn::zero()],
        );
        assert_eq!(l.determinant().unwrap(), rv("u2").neg());
    }

    #[test]
    fn inverse_times_self_is_identity() {
        // eq-norm g0 for n = 3: [[0,0,1],[0,1,-u1],[1,-u1,-u2]]
        let u1 = rv("u1");
        let u2 = rv("u2");
        let g0 = RMatrix::new(
            3,
            3,
            vec![
                RatFn::zero(),
                RatFn::zero(),
                RatFn::one(),
                RatFn::zero(),
                RatFn::one(),
                u1.neg(),
                RatFn::one(),
                u1.neg(),
                u2.neg(),
            ],
        );
        let inv = g0.inverse().unwrap();
        assert_eq!(inv.mul(&g0).unwrap(), RMatrix::identity(3));
        assert_eq!(g0.mul(&inv).unwrap(), RMatrix::identity(3));
        let det = g0.determinant().unwrap();
        let det_inv = inv.determinant().unwrap();
        assert!(det.mul(&det_inv).is_one());
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = RMatrix::new(
            2,
            2,
            vec![rv("x1"), rv("x1"), rv("x1"), rv("x1")],
        );
        assert!(m.determinant().unwrap().is_zero());
        assert!(matches!(m.inverse(), Err(CasError::SingularMatrix)));
    }

    #[test]
    fn rational_entries_inverse() {
        // diag(1/(x1-x2), 1/(x2-x1))
        let d1 = RatFn::one().div(&rv("x1").sub(&rv("x2"))).unwrap();
        let d2 = RatFn::one().div(&rv("x2").sub(&rv("x1"))).unwrap();
        let g = RMatrix::diagonal(vec![d1.clone(), d2.clone()]);
        let inv = g.inverse().unwrap();
        assert_eq!(inv.at(0, 0), &d1.recip().unwrap());
        assert_eq!(g.mul(&inv).unwrap(), RMatrix::identity(2));
    }
}
