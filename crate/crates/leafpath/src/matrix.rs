//! Dense matrices over `BigRational`.

use std::ops::{Index, IndexMut};

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Zero};

use crate::exact::{to_f64, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
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
        RatMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &RatMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.cols {
                    let b = &other[(j, k)];
                    if !b.is_zero() {
                        out[(i, k)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &RatMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &RatMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let data = self.data.iter().map(|a| a * s).collect();
        RatMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn row_sums(&self) -> Vec<Rational> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `v^T M`.
    pub fn vec_mul(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| &v[i] * &self[(i, j)]).sum())
            .collect()
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(to_f64).collect()).collect()
    }

    /// Rank by fraction-free elimination over the integers after clearing denominators row by row.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect();
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..n {
            if rank == m {
                break;
            }
            let Some(p) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for r in rank + 1..m {
                if a[r][col].is_zero() {
                    continue;
                }
                for c in col + 1..n {
                    let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                    a[r][c] = v;
                }
                a[r][col] = BigInt::zero();
                let g = a[r].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
                if !g.is_zero() && !g.is_one() {
                    for x in a[r].iter_mut() {
                        *x = &*x / &g;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Characteristic polynomial `det(xI - M)`, coefficients from the constant term up.
    pub fn charpoly(&self) -> Vec<Rational> {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = self.clone();
        // Similarity reduction to upper Hessenberg form.
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h[(i, m - 1)].is_zero()) else {
                continue;
            };
            if i != m {
                for c in 0..n {
                    h.data.swap(i * n + c, m * n + c);
                }
                for r in 0..n {
                    h.data.swap(r * n + i, r * n + m);
                }
            }
            for j in m + 1..n {
                if h[(j, m - 1)].is_zero() {
                    continue;
                }
                let u = &h[(j, m - 1)] / &h[(m, m - 1)];
                for c in 0..n {
                    let t = &u * &h[(m, c)];
                    h[(j, c)] -= t;
                }
                for r in 0..n {
                    let t = &u * &h[(r, j)];
                    h[(r, m)] += t;
                }
            }
        }
        let mut polys: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
        for m in 0..n {
            let prev = &polys[m];
            let mut next = vec![Rational::zero(); m + 2];
            for (d, c) in prev.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * &h[(m, m)];
            }
            let mut t = Rational::one();
            for i in (0..m).rev() {
                t *= &h[(i + 1, i)];
                if t.is_zero() {
                    break;
                }
                let f = &t * &h[(i, m)];
                for (d, c) in polys[i].iter().enumerate() {
                    next[d] -= c * &f;
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }
}

pub fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}
