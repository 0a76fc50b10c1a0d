//! Cyclic Jacobi eigensolver for dense symmetric matrices, plus multiset helpers.

use crate::error::{Error, Result};

/// Ascending eigenvalues with orthonormal eigenvectors (`vectors[k]` belongs to `values[k]`).
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residual: f64,
}

impl Spectrum {
    pub fn min(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// Second largest eigenvalue counted with multiplicity.
    pub fn second_max(&self) -> Option<f64> {
        let n = self.values.len();
        (n >= 2).then(|| self.values[n - 2])
    }
}

const OFF_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

pub fn symmetric_eigen(a: &[Vec<f64>]) -> Result<Spectrum> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::Numeric("eigen: matrix is not square".into()));
    }
    for i in 0..n {
        for j in 0..i {
            if (a[i][j] - a[j][i]).abs() > 1e-12 * (1.0 + a[i][j].abs()) {
                return Err(Error::Numeric(format!("eigen: matrix not symmetric at ({i},{j})")));
            }
        }
    }
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let scale = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum::<f64>()
            .sqrt();
        if off < OFF_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].total_cmp(&m[j][j]).then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| m[i][i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&k| {
            let mut col: Vec<f64> = (0..n).map(|i| v[i][k]).collect();
            normalize_sign(&mut col);
            col
        })
        .collect();
    let residual = (0..n)
        .map(|k| {
            let av = mat_vec(a, &vectors[k]);
            av.iter().zip(&vectors[k]).map(|(x, y)| (x - values[k] * y).abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    let lam = values.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if residual > 1e-9 * (1.0 + lam) {
        return Err(Error::Numeric(format!("eigen: residual {residual:e} exceeds tolerance")));
    }
    Ok(Spectrum { values, vectors, residual })
}

/// Largest-magnitude component positive (first one on ties).
fn normalize_sign(x: &mut [f64]) {
    let mut best = 0;
    for i in 0..x.len() {
        if x[i].abs() > x[best].abs() + 1e-12 {
            best = i;
        }
    }
    if x.get(best).is_some_and(|&b| b < 0.0) {
        x.iter_mut().for_each(|y| *y = -*y);
    }
}

pub fn mat_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|r| r.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

pub fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|r| (0..cols).map(|j| (0..inner).map(|k| r[k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|y| y * y).sum::<f64>().sqrt()
}

/// Sorted multisets equal entrywise within `tol`.
pub fn multisets_match(a: &[f64], b: &[f64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    x.iter().zip(&y).all(|(p, q)| (p - q).abs() <= tol)
}

/// Values with `|x| > tol`.
pub fn nonzero(values: &[f64], tol: f64) -> Vec<f64> {
    values.iter().copied().filter(|x| x.abs() > tol).collect()
}

pub fn count_near(values: &[f64], target: f64, tol: f64) -> usize {
    values.iter().filter(|x| (*x - target).abs() <= tol).count()
}

/// Gap threshold used when counting multiplicities.
pub const MULTIPLICITY_TOL: f64 = 1e-7;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_spectrum() {
        let a = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let s = symmetric_eigen(&a).unwrap();
        assert_eq!(s.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn two_by_two() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let s = symmetric_eigen(&a).unwrap();
        assert!((s.values[0] - 1.0).abs() < 1e-14);
        assert!((s.values[1] - 3.0).abs() < 1e-14);
        let v = &s.vectors[1];
        assert!((v[0] - v[1]).abs() < 1e-12 && v[0] > 0.0);
    }

    #[test]
    fn rejects_asymmetric() {
        assert!(symmetric_eigen(&[vec![0.0, 1.0], vec![0.0, 0.0]]).is_err());
    }

    #[test]
    fn multiset_helpers() {
        assert!(multisets_match(&[1.0, 0.0], &[0.0, 1.0 + 1e-10], 1e-8));
        assert!(!multisets_match(&[1.0], &[0.0, 1.0], 1e-8));
        assert_eq!(nonzero(&[0.0, 1e-9, 0.5], 1e-7), vec![0.5]);
        assert_eq!(count_near(&[1.0, 1.0 - 1e-9, 0.2], 1.0, 1e-7), 2);
    }
}
