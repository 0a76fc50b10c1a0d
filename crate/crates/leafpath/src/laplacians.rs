//! Combinatorial and normalized Hodge Laplacians of a simplicial complex.

use num::{One, Zero};

use crate::audit::Check;
use crate::complex::SimplicialComplex;
use crate::cover::{ComponentKind, Cover, Orientation, PathWeights};
use crate::eigen::{count_near, multisets_match, nonzero, symmetric_eigen, MULTIPLICITY_TOL};
use crate::error::{pre, Result};
use crate::exact::{factorial, from_big, int, Rational};
use crate::matrix::RatMatrix;
use crate::operators::{build_conditional, Flavor};
use crate::surd::SurdMatrix;
use crate::Direction;

/// `W_k(σ) = LP(σ)/(k+1)!` for every k-face, in `faces_of_dim(k)` order.
pub fn normalization_weights(complex: &SimplicialComplex, pw: &PathWeights, k: usize) -> Vec<Rational> {
    let f = from_big(&factorial(k + 1));
    complex.faces_of_dim(k).iter().map(|&i| from_big(&pw.lp[i]) / &f).collect()
}

#[derive(Clone, Debug)]
pub struct HodgeLaplacian {
    pub k: usize,
    pub normalized: bool,
    pub up: SurdMatrix,
    pub down: SurdMatrix,
}

impl HodgeLaplacian {
    pub fn total(&self) -> Result<SurdMatrix> {
        self.up.add(&self.down)
    }
}

fn weights(complex: &SimplicialComplex, pw: &PathWeights, k: usize, normalized: bool) -> Vec<Rational> {
    if normalized {
        normalization_weights(complex, pw, k)
    } else {
        vec![Rational::one(); complex.faces_of_dim(k).len()]
    }
}

/// Coboundary `δ_k : C^k → C^{k+1}`, weighted when `normalized`.
pub fn coboundary(complex: &SimplicialComplex, pw: &PathWeights, k: usize, normalized: bool) -> Result<SurdMatrix> {
    if k > complex.dimension() {
        return pre(format!("k = {k} exceeds dimension {}", complex.dimension()));
    }
    let wk = weights(complex, pw, k, normalized);
    let wk1 = weights(complex, pw, k + 1, normalized);
    let m = if k == complex.dimension() {
        RatMatrix::zeros(0, wk.len())
    } else {
        complex.boundary_matrix(k + 1)?.transpose()
    };
    Ok(SurdMatrix::new(m, wk1, wk))
}

pub fn hodge(complex: &SimplicialComplex, pw: &PathWeights, k: usize, normalized: bool) -> Result<HodgeLaplacian> {
    if k > complex.dimension() {
        return pre(format!("k = {k} exceeds dimension {}", complex.dimension()));
    }
    let wk = weights(complex, pw, k, normalized);
    let dk = coboundary(complex, pw, k, normalized)?;
    let up = dk.transpose().mul(&dk)?.reframe(&wk, &wk)?;
    let down = if k == 0 {
        SurdMatrix::zeros(&wk, &wk)
    } else {
        let prev = coboundary(complex, pw, k - 1, normalized)?;
        prev.mul(&prev.transpose())?.reframe(&wk, &wk)?
    };
    Ok(HodgeLaplacian { k, normalized, up, down })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeDims {
    pub rank_up: usize,
    pub rank_down: usize,
    pub harmonic: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeReport {
    pub dims: Vec<HodgeDims>,
    pub betti: Vec<usize>,
}

/// Ranks of the image of `Δ^up` and `Δ^down` and the harmonic dimension in every degree.
pub fn hodge_decomposition(complex: &SimplicialComplex, pw: &PathWeights, normalized: bool) -> Result<HodgeReport> {
    let mut dims = Vec::new();
    for k in 0..=complex.dimension() {
        let l = hodge(complex, pw, k, normalized)?;
        let n = complex.faces_of_dim(k).len();
        let rank_up = l.up.m.rank();
        let rank_down = l.down.m.rank();
        dims.push(HodgeDims { rank_up, rank_down, harmonic: n - rank_up - rank_down });
    }
    let betti = dims.iter().map(|d| d.harmonic).collect();
    Ok(HodgeReport { dims, betti })
}

/// `Δ_k^up = -A_k^{signed,up}` and `Δ_k^down = -A_k^{signed,down}` exactly (reference orientation).
pub fn check_laplacian_walk_identity(
    complex: &SimplicialComplex,
    cover: &Cover,
    pw: &PathWeights,
    k: usize,
) -> Result<bool> {
    let l = hodge(complex, pw, k, true)?;
    let o = Orientation::reference(cover.len());
    let up = build_conditional(cover, pw, k, Direction::Up, Flavor::Signed, &o)?;
    let down = build_conditional(cover, pw, k, Direction::Down, Flavor::Signed, &o)?;
    Ok(l.up.exact_eq(&up.exact.neg()) && l.down.exact_eq(&down.exact.neg()))
}

/// `D - A` for the 1-skeleton in the frame `(1/deg, deg)`: the classic
/// normalized graph Laplacian `I - D^{-1/2} A D^{-1/2}`. Isolated vertices give a zero row.
pub fn classic_normalized_graph_laplacian(complex: &SimplicialComplex) -> SurdMatrix {
    let vs = complex.faces_of_dim(0);
    let n = vs.len();
    let deg: Vec<usize> = vs.iter().map(|&v| complex.cofaces(v).len()).collect();
    let mut m = RatMatrix::zeros(n, n);
    for &e in complex.faces_of_dim(1) {
        let f = &complex.face(e).vertices;
        let (a, b) = (f[0], f[1]);
        m[(a, b)] = int(-1);
        m[(b, a)] = int(-1);
    }
    for i in 0..n {
        m[(i, i)] = int(deg[i] as i64);
    }
    let d: Vec<Rational> = deg.iter().map(|&x| int(x.max(1) as i64)).collect();
    let inv: Vec<Rational> = d.iter().map(|x| x.recip()).collect();
    SurdMatrix::new(m, inv, d)
}

/// For 1-dimensional complexes: `Δ_0^up = ½ · classic normalized Laplacian` exactly.
pub fn check_graph_specialization(complex: &SimplicialComplex, pw: &PathWeights) -> Result<Option<bool>> {
    if complex.dimension() != 1 {
        return Ok(None);
    }
    let l = hodge(complex, pw, 0, true)?;
    let classic = classic_normalized_graph_laplacian(complex).scale(&crate::exact::rat(1, 2));
    Ok(Some(l.up.exact_eq(&classic)))
}

/// H1–H3 / NH1–NH6 style checks for every degree.
pub fn verify_hodge_properties(complex: &SimplicialComplex, cover: &Cover, pw: &PathWeights) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let top = complex.dimension();
    let mut lap = [Vec::new(), Vec::new()];
    for (slot, normalized) in [(0, false), (1, true)] {
        for k in 0..=top {
            lap[slot].push(hodge(complex, pw, k, normalized)?);
        }
    }
    for k in 1..=top {
        if k < top {
            let b = complex.boundary_matrix(k)?.mul(&complex.boundary_matrix(k + 1)?);
            out.push(Check::new(&format!("k={k}: ∂_k ∂_(k+1) = 0"), b.is_zero(), ""));
        }
    }
    for k in 0..top {
        let d0 = coboundary(complex, pw, k, true)?;
        let d1 = coboundary(complex, pw, k + 1, true)?;
        out.push(Check::new(&format!("k={k}: normalized δ_(k+1) δ_k = 0"), d1.mul(&d0)?.is_zero(), ""));
    }
    for (slot, tag) in [(0, "combinatorial"), (1, "normalized")] {
        for k in 0..=top {
            let l = &lap[slot][k];
            let ud = l.up.mul(&l.down)?.is_zero() && l.down.mul(&l.up)?.is_zero();
            out.push(Check::new(&format!("{tag} k={k}: up·down = down·up = 0"), ud, ""));
            out.push(Check::new(
                &format!("{tag} k={k}: symmetric"),
                l.up.is_symmetric() && l.down.is_symmetric(),
                "",
            ));
            let up = symmetric_eigen(&l.up.to_f64())?;
            let down = symmetric_eigen(&l.down.to_f64())?;
            let total = symmetric_eigen(&l.total()?.to_f64())?;
            let lo = [&up, &down, &total].iter().filter_map(|s| s.min()).fold(0.0f64, f64::min);
            out.push(Check::new(&format!("{tag} k={k}: positive semi-definite"), lo >= -1e-10, &format!("λ_min = {lo:e}")));
            if slot == 1 {
                let hi = [&up, &down].iter().filter_map(|s| s.max()).fold(0.0f64, f64::max);
                out.push(Check::new(&format!("{tag} k={k}: λ_max ≤ 1"), hi <= 1.0 + 1e-10, &format!("λ_max = {hi}")));
            }
            if k >= 1 {
                let prev = symmetric_eigen(&lap[slot][k - 1].up.to_f64())?;
                let same = multisets_match(
                    &nonzero(&prev.values, MULTIPLICITY_TOL),
                    &nonzero(&down.values, MULTIPLICITY_TOL),
                    1e-8,
                );
                out.push(Check::new(&format!("{tag} k={k}: nonzero Sp(Δ_(k-1)^up) = nonzero Sp(Δ_k^down)"), same, ""));
            }
        }
    }
    for k in 0..=top {
        let l = &lap[1][k];
        let c = &lap[0][k];
        let faces = complex.faces_of_dim(k);
        let mut diag_ok = true;
        for (p, &f) in faces.iter().enumerate() {
            let up_expected = if cover.is_leaf(f) { Rational::zero() } else { crate::exact::rat(1, k as i64 + 2) };
            diag_ok &= l.up.entry_rational(p, p) == Some(up_expected);
            diag_ok &= c.up.entry_rational(p, p) == Some(int(complex.cofaces(f).len() as i64));
            if k > 0 {
                diag_ok &= c.down.entry_rational(p, p) == Some(int(k as i64 + 1));
            }
        }
        out.push(Check::new(&format!("k={k}: Laplacian diagonals"), diag_ok, ""));
        out.push(Check::new(
            &format!("k={k}: Δ_k = -A_k^signed"),
            check_laplacian_walk_identity(complex, cover, pw, k)?,
            "",
        ));
        let spec = symmetric_eigen(&l.up.to_f64())?;
        let ones = count_near(&spec.values, 1.0, MULTIPLICITY_TOL);
        let comps = cover.components(ComponentKind::QuotientUp, Some(k))?;
        let coherent = comps.members.iter().filter(|c| cover.detect_coherent(c, Direction::Up).is_some()).count();
        out.push(Check::new(
            &format!("k={k}: multiplicity of 1 in Sp(Δ_k^up) = coherent up-components"),
            ones == coherent,
            &format!("{ones} vs {coherent}"),
        ));
    }
    let comb = hodge_decomposition(complex, pw, false)?;
    let norm = hodge_decomposition(complex, pw, true)?;
    out.push(Check::new("Betti numbers agree (combinatorial vs normalized)", comb.betti == norm.betti, ""));
    if let Some(ok) = check_graph_specialization(complex, pw)? {
        out.push(Check::new("graph: Δ_0^up = ½ · normalized graph Laplacian", ok, ""));
    }
    Ok(out)
}
