//! Matrices of the form `diag(r)^{1/2} · M · diag(c)^{-1/2}` with rational `M`, `r`, `c`.
//!
//! Every normalized operator in this crate is a diagonal conjugation of a
//! rational matrix, so each entry is a rational times the square root of a
//! rational. Keeping the three rational parts makes all identities exact.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{sqrt_exact, to_f64, Rational};
use crate::matrix::{poly_mul, RatMatrix};

#[derive(Clone, Debug)]
pub struct SurdMatrix {
    pub m: RatMatrix,
    pub row_w: Vec<Rational>,
    pub col_w: Vec<Rational>,
}

fn non_square(what: &str) -> Error {
    Error::Numeric(format!("{what}: frame ratio is not a rational square"))
}

impl SurdMatrix {
    pub fn new(m: RatMatrix, row_w: Vec<Rational>, col_w: Vec<Rational>) -> Self {
        assert_eq!(m.rows(), row_w.len());
        assert_eq!(m.cols(), col_w.len());
        debug_assert!(row_w.iter().chain(&col_w).all(|w| w.is_positive()));
        SurdMatrix { m, row_w, col_w }
    }

    /// A plain rational matrix (all weights one).
    pub fn plain(m: RatMatrix) -> Self {
        let r = vec![Rational::one(); m.rows()];
        let c = vec![Rational::one(); m.cols()];
        SurdMatrix::new(m, r, c)
    }

    /// Same-frame matrix `diag(w)^{1/2} M diag(w)^{-1/2}`.
    pub fn conj(m: RatMatrix, w: &[Rational]) -> Self {
        SurdMatrix::new(m, w.to_vec(), w.to_vec())
    }

    pub fn identity(w: &[Rational]) -> Self {
        SurdMatrix::conj(RatMatrix::identity(w.len()), w)
    }

    pub fn zeros(row_w: &[Rational], col_w: &[Rational]) -> Self {
        SurdMatrix::new(RatMatrix::zeros(row_w.len(), col_w.len()), row_w.to_vec(), col_w.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.m.rows()
    }

    pub fn cols(&self) -> usize {
        self.m.cols()
    }

    /// `(sign, value²)` of entry `(i, j)`.
    pub fn entry_squared(&self, i: usize, j: usize) -> (i32, Rational) {
        let m = &self.m[(i, j)];
        if m.is_zero() {
            return (0, Rational::zero());
        }
        let s = if m.is_positive() { 1 } else { -1 };
        (s, m * m * &self.row_w[i] / &self.col_w[j])
    }

    /// Entry `(i, j)` as an exact rational when it is one.
    pub fn entry_rational(&self, i: usize, j: usize) -> Option<Rational> {
        let m = &self.m[(i, j)];
        if m.is_zero() {
            return Some(Rational::zero());
        }
        sqrt_exact(&(&self.row_w[i] / &self.col_w[j])).map(|s| m * s)
    }

    pub fn entry_f64(&self, i: usize, j: usize) -> f64 {
        let m = &self.m[(i, j)];
        if m.is_zero() {
            return 0.0;
        }
        to_f64(m) * to_f64(&(&self.row_w[i] / &self.col_w[j])).sqrt()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows()).map(|i| (0..self.cols()).map(|j| self.entry_f64(i, j)).collect()).collect()
    }

    pub fn transpose(&self) -> Self {
        let inv = |w: &Vec<Rational>| w.iter().map(|x| x.recip()).collect::<Vec<_>>();
        SurdMatrix::new(self.m.transpose(), inv(&self.col_w), inv(&self.row_w))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        SurdMatrix::new(self.m.scale(s), self.row_w.clone(), self.col_w.clone())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        SurdMatrix::new(
            self.m.select(rows, cols),
            rows.iter().map(|&i| self.row_w[i].clone()).collect(),
            cols.iter().map(|&j| self.col_w[j].clone()).collect(),
        )
    }

    /// Same matrix re-expressed in another frame; fails if an entry would leave the rationals.
    pub fn reframe(&self, row_w: &[Rational], col_w: &[Rational]) -> Result<Self> {
        let mut m = RatMatrix::zeros(self.rows(), self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let x = &self.m[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let ratio = &self.row_w[i] / &row_w[i] * &col_w[j] / &self.col_w[j];
                let s = sqrt_exact(&ratio).ok_or_else(|| non_square("reframe"))?;
                m[(i, j)] = x * s;
            }
        }
        Ok(SurdMatrix::new(m, row_w.to_vec(), col_w.to_vec()))
    }

    pub fn add(&self, other: &SurdMatrix) -> Result<Self> {
        let o = other.reframe(&self.row_w, &self.col_w)?;
        Ok(SurdMatrix::new(self.m.add(&o.m), self.row_w.clone(), self.col_w.clone()))
    }

    pub fn sub(&self, other: &SurdMatrix) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SurdMatrix) -> Result<Self> {
        assert_eq!(self.cols(), other.rows(), "shape mismatch in product");
        let n = self.cols();
        // Inner factor sqrt(rB_j / cA_j) = sqrt(lambda) * s_j with rational s_j.
        let ratios: Vec<Rational> = (0..n).map(|j| &other.row_w[j] / &self.col_w[j]).collect();
        let live: Vec<bool> = (0..n)
            .map(|j| {
                (0..self.rows()).any(|i| !self.m[(i, j)].is_zero())
                    && (0..other.cols()).any(|k| !other.m[(j, k)].is_zero())
            })
            .collect();
        let lambda = (0..n).find(|&j| live[j]).map(|j| ratios[j].clone()).unwrap_or_else(Rational::one);
        let mut s = Vec::with_capacity(n);
        for (j, r) in ratios.iter().enumerate() {
            if live[j] {
                s.push(sqrt_exact(&(r / &lambda)).ok_or_else(|| non_square("product"))?);
            } else {
                s.push(Rational::zero());
            }
        }
        let mut a = self.m.clone();
        for i in 0..a.rows() {
            for j in 0..n {
                if !a[(i, j)].is_zero() {
                    a[(i, j)] *= &s[j];
                }
            }
        }
        let row_w = self.row_w.iter().map(|w| w * &lambda).collect();
        Ok(SurdMatrix::new(a.mul(&other.m), row_w, other.col_w.clone()))
    }

    pub fn exact_eq(&self, other: &SurdMatrix) -> bool {
        self.rows() == other.rows()
            && self.cols() == other.cols()
            && (0..self.rows()).all(|i| (0..self.cols()).all(|j| self.entry_squared(i, j) == other.entry_squared(i, j)))
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows() == self.cols() && self.exact_eq(&self.transpose())
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.rows() == self.cols() && self.exact_eq(&self.transpose().neg())
    }

    /// Characteristic polynomial, for matrices whose frame is a similarity
    /// (`r_i / c_i` the same square for every `i`).
    pub fn charpoly(&self) -> Result<Vec<Rational>> {
        let n = self.rows();
        if n == 0 {
            return Ok(vec![Rational::one()]);
        }
        let lambda = &self.row_w[0] / &self.col_w[0];
        if (0..n).any(|i| &self.row_w[i] / &self.col_w[i] != lambda) {
            return Err(Error::Numeric("charpoly: frame is not a similarity".into()));
        }
        let s = sqrt_exact(&lambda).ok_or_else(|| non_square("charpoly"))?;
        Ok(self.m.scale(&s).charpoly())
    }
}

/// `charpoly(a) * charpoly(b)`.
pub fn charpoly_product(a: &SurdMatrix, b: &SurdMatrix) -> Result<Vec<Rational>> {
    Ok(poly_mul(&a.charpoly()?, &b.charpoly()?))
}

pub fn diag(values: &[Rational], w: &[Rational]) -> SurdMatrix {
    let mut m = RatMatrix::zeros(values.len(), values.len());
    for (i, v) in values.iter().enumerate() {
        m[(i, i)] = v.clone();
    }
    SurdMatrix::conj(m, w)
}
