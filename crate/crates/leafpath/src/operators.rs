//! Normalized operators of the walk: the A/δ/Θ/Π/Q/R family and its
//! conditional up/down versions, plus spectral checks.

use std::collections::HashMap;

use num::{One, Zero};

use crate::audit::Check;
use crate::cover::{ComponentKind, Cover, CoverNode, Orientation, PathWeights};
use crate::eigen::{
    count_near, mat_mul, mat_vec, multisets_match, norm, nonzero, symmetric_eigen, transpose, Spectrum,
    MULTIPLICITY_TOL,
};
use crate::error::{pre, Result};
use crate::exact::{int, rat, to_f64, Rational};
use crate::matrix::RatMatrix;
use crate::surd::{charpoly_product, SurdMatrix};
use crate::walks::{expected_path_length, transition_conditional, transition_full, View};
use crate::Direction;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Quotient,
    Signed,
    Cover,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Quotient => "quotient",
            Flavor::Signed => "signed",
            Flavor::Cover => "cover",
        }
    }
}

/// A symmetric operator with exact entries and the node ids of its rows.
#[derive(Clone, Debug)]
pub struct SymmetricOperator {
    pub exact: SurdMatrix,
    pub index: Vec<usize>,
}

impl SymmetricOperator {
    pub fn entries(&self) -> Vec<Vec<f64>> {
        self.exact.to_f64()
    }

    pub fn eigen(&self) -> Result<Spectrum> {
        symmetric_eigen(&self.entries())
    }

    /// Principal submatrix on the given row ids (a subset of `index`).
    pub fn restrict(&self, ids: &[usize]) -> Self {
        let pos: HashMap<usize, usize> = self.index.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let sel: Vec<usize> = ids.iter().map(|i| pos[i]).collect();
        SymmetricOperator { exact: self.exact.select(&sel, &sel), index: ids.to_vec() }
    }
}

#[derive(Clone, Debug)]
pub struct OperatorBundle {
    /// `H` per quotient node and lifted to the cover.
    pub h: Vec<Rational>,
    pub h_cover: Vec<Rational>,
    pub orientation: Orientation,
    pub a_cover: SurdMatrix,
    pub a_sym: SurdMatrix,
    pub a_alt: SurdMatrix,
    pub a_quotient: SurdMatrix,
    pub a_signed: SurdMatrix,
    pub delta_cover: SurdMatrix,
    pub delta_sym: SurdMatrix,
    pub delta_alt: SurdMatrix,
    pub delta_quotient: SurdMatrix,
    pub delta_signed: SurdMatrix,
    pub theta_l: SurdMatrix,
    pub theta_r: SurdMatrix,
    pub pi_l: SurdMatrix,
    pub pi_r: SurdMatrix,
    pub q_sym: SurdMatrix,
    pub q_alt: SurdMatrix,
    pub r: SurdMatrix,
}

fn half() -> Rational {
    rat(1, 2)
}

fn lift(w: &[Rational]) -> Vec<Rational> {
    w.iter().flat_map(|x| [x.clone(), x.clone()]).collect()
}

/// Flip operator `R` on cover functions.
fn flip_matrix(n2: usize) -> RatMatrix {
    RatMatrix::from_fn(n2, n2, |i, j| if i ^ 1 == j { int(1) } else { int(0) })
}

/// Quotient δ: parents × children, `1` at every quotient incidence (or the oriented sign).
fn quotient_delta(cover: &Cover, o: Option<&Orientation>) -> RatMatrix {
    let n = cover.len();
    let mut m = RatMatrix::zeros(n, n);
    for &(c, p, _) in cover.edges() {
        m[(p, c)] = match o {
            Some(o) => int(cover.oriented_sign(o, p, c).unwrap() as i64),
            None => int(1),
        };
    }
    m
}

pub fn build_bundle(cover: &Cover, pw: &PathWeights, orientation: &Orientation) -> Result<OperatorBundle> {
    let n = cover.len();
    let h = pw.h_all();
    let hc = lift(&h);
    let d = pw.d_all();
    let dc = lift(&d);
    let inv = |w: &[Rational]| w.iter().map(|x| x.recip()).collect::<Vec<_>>();

    let p_cover = transition_full(cover, pw, View::Cover).p;
    let a_cover = SurdMatrix::conj(p_cover.transpose(), &inv(&dc)).reframe(&hc, &hc)?;
    let r = SurdMatrix::conj(flip_matrix(2 * n), &hc);
    let ar = a_cover.mul(&r)?.reframe(&hc, &hc)?;
    let a_sym = a_cover.add(&ar)?.scale(&half());
    let a_alt = a_cover.sub(&ar)?.scale(&half());

    let p_quot = transition_full(cover, pw, View::Quotient).p;
    let a_quotient = SurdMatrix::conj(p_quot, &d).reframe(&h, &h)?;

    let mut q_sym = RatMatrix::zeros(n, 2 * n);
    let mut q_alt = RatMatrix::zeros(n, 2 * n);
    for i in 0..n {
        q_sym[(i, 2 * i)] = int(1);
        q_sym[(i, 2 * i + 1)] = int(1);
        let chosen = orientation.node(i).index();
        q_alt[(i, chosen)] = int(1);
        q_alt[(i, chosen ^ 1)] = int(-1);
    }
    let q_sym = SurdMatrix::new(q_sym, h.clone(), hc.clone());
    let q_alt = SurdMatrix::new(q_alt, h.clone(), hc.clone());
    let a_signed = q_alt.mul(&a_cover)?.mul(&q_alt.transpose())?.scale(&half()).reframe(&h, &h)?;

    let mut delta = RatMatrix::zeros(2 * n, 2 * n);
    for &(c, p, _) in cover.edges() {
        for fp in [false, true] {
            for fc in [false, true] {
                let v = CoverNode { quotient_index: p, flipped: fp };
                let u = CoverNode { quotient_index: c, flipped: fc };
                if cover.cover_sign(v, u) == Some(1) {
                    delta[(v.index(), u.index())] = int(1);
                }
            }
        }
    }
    let delta_cover = SurdMatrix::conj(delta, &hc);
    let dr = delta_cover.mul(&r)?.reframe(&hc, &hc)?;
    let delta_sym = delta_cover.add(&dr)?.scale(&half());
    let delta_alt = delta_cover.sub(&dr)?.scale(&half());
    let delta_quotient = SurdMatrix::conj(quotient_delta(cover, None), &h);
    let delta_signed = SurdMatrix::conj(quotient_delta(cover, Some(orientation)), &h);

    let indicator = |pred: &dyn Fn(usize) -> bool| -> Vec<Rational> {
        (0..n).map(|i| if pred(i) { Rational::one() } else { Rational::zero() }).collect()
    };
    let leaves = indicator(&|i| cover.is_leaf(i));
    let roots = indicator(&|i| cover.is_root(i));
    let pi_l = crate::surd::diag(&leaves, &h);
    let pi_r = crate::surd::diag(&roots, &h);
    let theta = |ind: &[Rational]| -> SurdMatrix {
        let m = RatMatrix::from_fn(2 * n, 2 * n, |i, j| {
            if i / 2 == j / 2 {
                &ind[i / 2] * half()
            } else {
                Rational::zero()
            }
        });
        SurdMatrix::conj(m, &hc)
    };
    let theta_l = theta(&leaves);
    let theta_r = theta(&roots);

    Ok(OperatorBundle {
        h,
        h_cover: hc,
        orientation: orientation.clone(),
        a_cover,
        a_sym,
        a_alt,
        a_quotient,
        a_signed,
        delta_cover,
        delta_sym,
        delta_alt,
        delta_quotient,
        delta_signed,
        theta_l,
        theta_r,
        pi_l,
        pi_r,
        q_sym,
        q_alt,
        r,
    })
}

fn check(name: &str, ok: Result<bool>) -> Check {
    match ok {
        Ok(b) => Check::new(name, b, ""),
        Err(e) => Check::new(name, false, &e.to_string()),
    }
}

/// Every exact algebraic identity of the bundle.
pub fn bundle_identities(b: &OperatorBundle) -> Vec<Check> {
    let h = half();
    let hc = &b.h_cover;
    let hq = &b.h;
    let n2 = hc.len();
    let mut out = Vec::new();
    out.push(check("A = A_sym + A_alt", (|| Ok(b.a_cover.exact_eq(&b.a_sym.add(&b.a_alt)?)))()));
    out.push(check(
        "A = (δ + Rδ^T + Θ_L + Θ_R)/2",
        (|| {
            let rdt = b.r.mul(&b.delta_cover.transpose())?.reframe(hc, hc)?;
            let rhs = b.delta_cover.add(&rdt)?.add(&b.theta_l)?.add(&b.theta_r)?.scale(&h);
            Ok(b.a_cover.exact_eq(&rhs))
        })(),
    ));
    out.push(check(
        "A_sym = (δ_sym + δ_sym^T + Θ_L + Θ_R)/2",
        (|| {
            let rhs = b.delta_sym.add(&b.delta_sym.transpose())?.add(&b.theta_l)?.add(&b.theta_r)?.scale(&h);
            Ok(b.a_sym.exact_eq(&rhs))
        })(),
    ));
    out.push(check(
        "A_alt = (δ_alt - δ_alt^T)/2",
        (|| Ok(b.a_alt.exact_eq(&b.delta_alt.sub(&b.delta_alt.transpose())?.scale(&h))))(),
    ));
    out.push(check(
        "A_quotient = (δ_q + δ_q^T + Π_L + Π_R)/2",
        (|| {
            let rhs = b.delta_quotient.add(&b.delta_quotient.transpose())?.add(&b.pi_l)?.add(&b.pi_r)?.scale(&h);
            Ok(b.a_quotient.exact_eq(&rhs))
        })(),
    ));
    out.push(check(
        "A_signed = (δ_O - δ_O^T)/2",
        (|| Ok(b.a_signed.exact_eq(&b.delta_signed.sub(&b.delta_signed.transpose())?.scale(&h))))(),
    ));
    out.push(check(
        "Q_sym^T Q_sym = I + R",
        (|| {
            let lhs = b.q_sym.transpose().mul(&b.q_sym)?;
            Ok(lhs.exact_eq(&SurdMatrix::identity(hc).add(&b.r)?))
        })(),
    ));
    out.push(check(
        "Q_alt^T Q_alt = I - R",
        (|| {
            let lhs = b.q_alt.transpose().mul(&b.q_alt)?;
            Ok(lhs.exact_eq(&SurdMatrix::identity(hc).sub(&b.r)?))
        })(),
    ));
    out.push(check(
        "R^2 = I",
        (|| Ok(b.r.mul(&b.r)?.exact_eq(&SurdMatrix::identity(hc))))(),
    ));
    out.push(check(
        "A_quotient = Q_sym A Q_sym^T / 2",
        (|| {
            let rhs = b.q_sym.mul(&b.a_cover)?.mul(&b.q_sym.transpose())?.scale(&h);
            Ok(b.a_quotient.exact_eq(&rhs))
        })(),
    ));
    out.push(check(
        "A R = R A",
        (|| Ok(b.a_cover.mul(&b.r)?.exact_eq(&b.r.mul(&b.a_cover)?)))(),
    ));
    out.push(check(
        "δ R = R δ",
        (|| Ok(b.delta_cover.mul(&b.r)?.exact_eq(&b.r.mul(&b.delta_cover)?)))(),
    ));
    out.push(check("A_quotient symmetric", Ok(b.a_quotient.is_symmetric())));
    out.push(check("A_sym symmetric", Ok(b.a_sym.is_symmetric())));
    out.push(check("A_signed antisymmetric", Ok(b.a_signed.is_antisymmetric())));
    out.push(check("A_alt antisymmetric", Ok(b.a_alt.is_antisymmetric())));
    out.push(check(
        "A Q_sym^T = Q_sym^T A_quotient",
        (|| {
            let qt = b.q_sym.transpose();
            Ok(b.a_cover.mul(&qt)?.exact_eq(&qt.mul(&b.a_quotient)?))
        })(),
    ));
    out.push(check(
        "A Q_alt^T = Q_alt^T A_signed",
        (|| {
            let qt = b.q_alt.transpose();
            Ok(b.a_cover.mul(&qt)?.exact_eq(&qt.mul(&b.a_signed)?))
        })(),
    ));
    out.push(check(
        "Θ_L, Θ_R, Π_L, Π_R idempotent",
        (|| {
            let idem = |m: &SurdMatrix| -> Result<bool> { Ok(m.mul(m)?.exact_eq(m)) };
            Ok(idem(&b.theta_l)? && idem(&b.theta_r)? && idem(&b.pi_l)? && idem(&b.pi_r)?)
        })(),
    ));
    debug_assert_eq!(hq.len() * 2, n2);
    out
}

/// Exact and floating checks that the cover spectrum splits into quotient and signed parts.
pub fn verify_split(b: &OperatorBundle) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let n = b.h.len();
    let exact = charpoly_product(&b.a_quotient, &b.a_signed)? == b.a_cover.charpoly()?;
    out.push(Check::new("charpoly(A) = charpoly(A_quotient) · charpoly(A_signed)", exact, ""));

    let sym = symmetric_eigen(&b.a_sym.to_f64())?;
    let quot = symmetric_eigen(&b.a_quotient.to_f64())?;
    let mut expected: Vec<f64> = quot.values.clone();
    expected.extend(std::iter::repeat_n(0.0, n));
    out.push(Check::new(
        "Sp(A_sym) = Sp(A_quotient) ⊔ {0}^N",
        multisets_match(&sym.values, &expected, 1e-8),
        "",
    ));

    let alt = b.a_alt.to_f64();
    let alt_sq = mat_mul(&alt, &transpose(&alt));
    let sgn = b.a_signed.to_f64();
    let sgn_sq = mat_mul(&sgn, &transpose(&sgn));
    let alt_spec = symmetric_eigen(&alt_sq)?;
    let sgn_spec = symmetric_eigen(&sgn_sq)?;
    let mut expected: Vec<f64> = sgn_spec.values.clone();
    expected.extend(std::iter::repeat_n(0.0, n));
    out.push(Check::new(
        "Sp(A_alt A_alt^T) = Sp(A_signed A_signed^T) ⊔ {0}^N",
        multisets_match(&alt_spec.values, &expected, 1e-8),
        "",
    ));

    // Pull-back of quotient eigenfunctions and odd extension of signed ones.
    let a = b.a_cover.to_f64();
    let qs = transpose(&b.q_sym.to_f64());
    let mut worst: f64 = 0.0;
    for (lam, f) in quot.values.iter().zip(&quot.vectors) {
        let g = mat_vec(&qs, f);
        let ag = mat_vec(&a, &g);
        let r: Vec<f64> = ag.iter().zip(&g).map(|(x, y)| x - lam * y).collect();
        worst = worst.max(norm(&r) / norm(&g));
    }
    out.push(Check::new("pull-back residual < 1e-8", worst < 1e-8, &format!("{worst:e}")));
    let qa = transpose(&b.q_alt.to_f64());
    let mut worst: f64 = 0.0;
    for (lam, f) in sgn_spec.values.iter().zip(&sgn_spec.vectors) {
        let g = mat_vec(&qa, f);
        let ag = mat_vec(&alt_sq, &g);
        let r: Vec<f64> = ag.iter().zip(&g).map(|(x, y)| x - lam * y).collect();
        worst = worst.max(norm(&r) / norm(&g));
    }
    out.push(Check::new("odd-extension residual < 1e-8", worst < 1e-8, &format!("{worst:e}")));
    Ok(out)
}

fn dim_weights(w: &[Rational], nodes: &[usize]) -> Vec<Rational> {
    nodes.iter().map(|&i| w[i].clone()).collect()
}

/// δ restricted to parents of dim k+1 and children of dim k.
fn delta_block(cover: &Cover, full: &SurdMatrix, k: usize, cover_indexed: bool) -> SurdMatrix {
    let mut rows = cover.nodes_of_dim(k + 1);
    let mut cols = cover.nodes_of_dim(k);
    if cover_indexed {
        rows = rows.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect();
        cols = cols.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect();
    }
    full.select(&rows, &cols)
}

/// Conditional up/down operator in dimension k.
///
/// Quotient and cover flavors are the `D^{1/2}`-conjugates of the conditional
/// transition matrices; the signed flavor is `-δ_k^T δ_k` (up) or
/// `-δ_{k-1} δ_{k-1}^T` (down) for the oriented δ.
pub fn build_conditional(
    cover: &Cover,
    pw: &PathWeights,
    k: usize,
    direction: Direction,
    flavor: Flavor,
    orientation: &Orientation,
) -> Result<SymmetricOperator> {
    if !cover.is_strong() {
        return pre("conditional operators require a strong grading");
    }
    let h = pw.h_all();
    let d = pw.d_all();
    let nodes = cover.nodes_of_dim(k);
    let hk = dim_weights(&h, &nodes);
    match flavor {
        Flavor::Quotient => {
            let t = transition_conditional(cover, pw, k, direction, View::Quotient)?;
            let exact = SurdMatrix::conj(t.p, &dim_weights(&d, &nodes)).reframe(&hk, &hk)?;
            Ok(SymmetricOperator { exact, index: t.index })
        }
        Flavor::Cover => {
            let t = transition_conditional(cover, pw, k, direction, View::Cover)?;
            let hc = lift(&hk);
            let exact = SurdMatrix::conj(t.p, &lift(&dim_weights(&d, &nodes))).reframe(&hc, &hc)?;
            Ok(SymmetricOperator { exact, index: t.index })
        }
        Flavor::Signed => {
            let full = SurdMatrix::conj(quotient_delta(cover, Some(orientation)), &h);
            let exact = signed_conditional(cover, &full, k, direction, &hk)?;
            Ok(SymmetricOperator { exact, index: nodes })
        }
    }
}

fn signed_conditional(
    cover: &Cover,
    full: &SurdMatrix,
    k: usize,
    direction: Direction,
    hk: &[Rational],
) -> Result<SurdMatrix> {
    let m = match direction {
        Direction::Up => {
            let dk = delta_block(cover, full, k, false);
            dk.transpose().mul(&dk)?
        }
        Direction::Down => {
            if k == 0 {
                return Ok(SurdMatrix::zeros(hk, hk));
            }
            let dk = delta_block(cover, full, k - 1, false);
            dk.mul(&dk.transpose())?
        }
    };
    m.neg().reframe(hk, hk)
}

/// Exact identities between the conditional operators in dimension k.
pub fn conditional_identities(
    cover: &Cover,
    pw: &PathWeights,
    b: &OperatorBundle,
    k: usize,
) -> Result<Vec<Check>> {
    let o = &b.orientation;
    let nodes = cover.nodes_of_dim(k);
    let hk = dim_weights(&b.h, &nodes);
    let hc = lift(&hk);
    let cnodes: Vec<usize> = nodes.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect();
    let pi_l = b.pi_l.select(&nodes, &nodes);
    let pi_r = b.pi_r.select(&nodes, &nodes);
    let th_l = b.theta_l.select(&cnodes, &cnodes);
    let th_r = b.theta_r.select(&cnodes, &cnodes);
    let r = b.r.select(&cnodes, &cnodes);
    let mut out = Vec::new();
    for dir in [Direction::Up, Direction::Down] {
        let tag = format!("k={k} {}", dir.name());
        let q = build_conditional(cover, pw, k, dir, Flavor::Quotient, o)?;
        let s = build_conditional(cover, pw, k, dir, Flavor::Signed, o)?;
        let c = build_conditional(cover, pw, k, dir, Flavor::Cover, o)?;
        // (δ_k^T X δ_k) for up, (δ_{k-1} X δ_{k-1}^T) for down.
        let sandwich = |full: &SurdMatrix, cover_indexed: bool, mid: Option<&SurdMatrix>, w: &[Rational]| -> Result<SurdMatrix> {
            let m = match dir {
                Direction::Up => {
                    let dk = delta_block(cover, full, k, cover_indexed);
                    let left = match mid {
                        Some(x) => dk.transpose().mul(x)?,
                        None => dk.transpose(),
                    };
                    left.mul(&dk)?
                }
                Direction::Down => {
                    if k == 0 {
                        return Ok(SurdMatrix::zeros(w, w));
                    }
                    let dk = delta_block(cover, full, k - 1, cover_indexed);
                    let left = match mid {
                        Some(x) => dk.mul(x)?,
                        None => dk.clone(),
                    };
                    left.mul(&dk.transpose())?
                }
            };
            m.reframe(w, w)
        };
        let (proj_q, proj_c) = match dir {
            Direction::Up => (&pi_l, &th_l),
            Direction::Down => (&pi_r, &th_r),
        };
        let rq = sandwich(&b.delta_quotient, false, None, &hk)?.add(proj_q)?;
        out.push(Check::new(&format!("{tag}: A_quotient = δ_q^T δ_q + Π"), q.exact.exact_eq(&rq), ""));
        let rs = sandwich(&b.delta_signed, false, None, &hk)?.neg();
        out.push(Check::new(&format!("{tag}: A_signed = -δ_O^T δ_O"), s.exact.exact_eq(&rs), ""));
        let r_mid = match dir {
            Direction::Up => b.r.select(
                &cover.nodes_of_dim(k + 1).iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect::<Vec<_>>(),
                &cover.nodes_of_dim(k + 1).iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect::<Vec<_>>(),
            ),
            Direction::Down => {
                let lower: Vec<usize> = if k == 0 {
                    Vec::new()
                } else {
                    cover.nodes_of_dim(k - 1).iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect()
                };
                b.r.select(&lower, &lower)
            }
        };
        let rc = sandwich(&b.delta_cover, true, Some(&r_mid), &hc)?.add(proj_c)?;
        out.push(Check::new(&format!("{tag}: A_cover = δ^T R δ + Θ"), c.exact.exact_eq(&rc), ""));
        let cr = c.exact.mul(&r)?.reframe(&hc, &hc)?;
        let plus = c.exact.add(&cr)?.scale(&half());
        let minus = c.exact.sub(&cr)?.scale(&half());
        let rplus = sandwich(&b.delta_sym, true, None, &hc)?.add(proj_c)?;
        let rminus = sandwich(&b.delta_alt, true, None, &hc)?.neg();
        out.push(Check::new(&format!("{tag}: (A + AR)/2 = δ_sym^T δ_sym + Θ"), plus.exact_eq(&rplus), ""));
        out.push(Check::new(&format!("{tag}: (A - AR)/2 = -δ_alt^T δ_alt"), minus.exact_eq(&rminus), ""));
        let qs = b.q_sym.select(&nodes, &cnodes);
        let qa = b.q_alt.select(&nodes, &cnodes);
        let via_q = qs.mul(&c.exact)?.mul(&qs.transpose())?.scale(&half());
        let via_a = qa.mul(&c.exact)?.mul(&qa.transpose())?.scale(&half());
        out.push(Check::new(&format!("{tag}: A_quotient = Q_sym A_cover Q_sym^T / 2"), q.exact.exact_eq(&via_q), ""));
        out.push(Check::new(&format!("{tag}: A_signed = Q_alt A_cover Q_alt^T / 2"), s.exact.exact_eq(&via_a), ""));
        out.push(Check::new(
            &format!("{tag}: symmetric"),
            q.exact.is_symmetric() && s.exact.is_symmetric() && c.exact.is_symmetric(),
            "",
        ));
    }
    Ok(out)
}

/// Floating spectral checks for the conditional operators in dimension k,
/// including the transfer of eigenfunctions from (k-1, up) to (k, down) when k ≥ 1.
pub fn conditional_spectral_checks(cover: &Cover, pw: &PathWeights, o: &Orientation, k: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for dir in [Direction::Up, Direction::Down] {
        let tag = format!("k={k} {}", dir.name());
        let q = build_conditional(cover, pw, k, dir, Flavor::Quotient, o)?.eigen()?;
        let s = build_conditional(cover, pw, k, dir, Flavor::Signed, o)?.eigen()?;
        let c = build_conditional(cover, pw, k, dir, Flavor::Cover, o)?.eigen()?;
        let mut union = q.values.clone();
        union.extend(&s.values);
        out.push(Check::new(&format!("{tag}: Sp(A_cover) = Sp(A_quotient) ⊔ Sp(A_signed)"), multisets_match(&c.values, &union, 1e-8), ""));
        let in_range = |sp: &Spectrum, lo: f64, hi: f64| sp.values.iter().all(|&x| x >= lo - 1e-10 && x <= hi + 1e-10);
        out.push(Check::new(&format!("{tag}: Sp(A_quotient) ⊂ [0,1]"), in_range(&q, 0.0, 1.0), ""));
        out.push(Check::new(&format!("{tag}: Sp(A_signed) ⊂ [-1,0]"), in_range(&s, -1.0, 0.0), ""));
    }
    if k >= 1 {
        out.extend(transfer_checks(cover, pw, o, k)?);
    }
    Ok(out)
}

/// Eigenfunctions of the (k-1)-up operators, restricted off leaves, are carried
/// by δ_{k-1} to eigenfunctions of the k-down operators, and back by δ^T.
fn transfer_checks(cover: &Cover, pw: &PathWeights, o: &Orientation, k: usize) -> Result<Vec<Check>> {
    let b = build_bundle(cover, pw, o)?;
    let lower: Vec<usize> = cover.nodes_of_dim(k - 1);
    let upper: Vec<usize> = cover.nodes_of_dim(k);
    let lower_live: Vec<usize> = lower.iter().copied().filter(|&u| !cover.is_leaf(u)).collect();
    let upper_live: Vec<usize> = upper.iter().copied().filter(|&u| !cover.is_root(u)).collect();
    let lift_ids = |v: &[usize]| v.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect::<Vec<_>>();
    let cases: [(&str, Flavor, &SurdMatrix, bool); 4] = [
        ("quotient δ", Flavor::Quotient, &b.delta_quotient, false),
        ("signed δ_O", Flavor::Signed, &b.delta_signed, false),
        ("cover δ_sym", Flavor::Cover, &b.delta_sym, true),
        ("cover δ_alt", Flavor::Cover, &b.delta_alt, true),
    ];
    let mut out = Vec::new();
    for (name, flavor, delta, lifted) in cases {
        let (lo, hi) = if lifted { (lift_ids(&lower_live), lift_ids(&upper_live)) } else { (lower_live.clone(), upper_live.clone()) };
        if lo.is_empty() || hi.is_empty() {
            continue;
        }
        let up_op = build_conditional(cover, pw, k - 1, Direction::Up, flavor, o)?;
        let down_op = build_conditional(cover, pw, k, Direction::Down, flavor, o)?;
        // The cover operator splits by δ_sym / δ_alt; transfer the matching part.
        let part = |op: &SymmetricOperator, sign: i64| -> Result<SymmetricOperator> {
            if !lifted {
                return Ok(op.clone());
            }
            let pos: HashMap<usize, usize> = op.index.iter().enumerate().map(|(p, &i)| (i, p)).collect();
            let w: Vec<Rational> = op.index.iter().map(|&c| b.h_cover[c].clone()).collect();
            let r = RatMatrix::from_fn(op.index.len(), op.index.len(), |i, j| {
                if pos[&(op.index[i] ^ 1)] == j {
                    int(1)
                } else {
                    int(0)
                }
            });
            let r = SurdMatrix::conj(r, &w);
            let ar = op.exact.mul(&r)?.reframe(&w, &w)?;
            let m = op.exact.add(&ar.scale(&int(sign)))?.scale(&half());
            Ok(SymmetricOperator { exact: m, index: op.index.clone() })
        };
        let sign = if name == "cover δ_alt" { -1 } else { 1 };
        let up_op = part(&up_op, sign)?.restrict(&lo);
        let down_op = part(&down_op, sign)?.restrict(&hi);
        let dmat = delta.select(&hi, &lo).to_f64();
        let dt = transpose(&dmat);
        let up_spec = up_op.eigen()?;
        let down_spec = down_op.eigen()?;
        let (up_a, down_a) = (up_op.entries(), down_op.entries());
        let mut worst: f64 = 0.0;
        for (lam, f) in up_spec.values.iter().zip(&up_spec.vectors) {
            if lam.abs() <= MULTIPLICITY_TOL {
                continue;
            }
            let g = mat_vec(&dmat, f);
            let ag = mat_vec(&down_a, &g);
            let r: Vec<f64> = ag.iter().zip(&g).map(|(x, y)| x - lam * y).collect();
            worst = worst.max(norm(&r) / norm(&g).max(1e-300));
        }
        for (lam, f) in down_spec.values.iter().zip(&down_spec.vectors) {
            if lam.abs() <= MULTIPLICITY_TOL {
                continue;
            }
            let g = mat_vec(&dt, f);
            let ag = mat_vec(&up_a, &g);
            let r: Vec<f64> = ag.iter().zip(&g).map(|(x, y)| x - lam * y).collect();
            worst = worst.max(norm(&r) / norm(&g).max(1e-300));
        }
        out.push(Check::new(&format!("k={k}: {name} transfers eigenfunctions (residual < 1e-8)"), worst < 1e-8, &format!("{worst:e}")));
        let nz_up = nonzero(&up_spec.values, MULTIPLICITY_TOL);
        let nz_down = nonzero(&down_spec.values, MULTIPLICITY_TOL);
        out.push(Check::new(&format!("k={k}: {name} nonzero spectra agree"), multisets_match(&nz_up, &nz_down, 1e-8), ""));
    }
    Ok(out)
}

/// `min over quotient components of 2/(E[len]+1)` and whether `λ_min(A_quotient) ≤ -1 + bound`.
pub fn min_eigenvalue_bound(cover: &Cover, pw: &PathWeights) -> Result<(Rational, f64, bool)> {
    let comps = cover.components(ComponentKind::Quotient, None)?;
    let bound = comps
        .members
        .iter()
        .map(|c| int(2) / (expected_path_length(cover, pw, c) + int(1)))
        .min()
        .unwrap();
    let b = build_bundle(cover, pw, &Orientation::reference(cover.len()))?;
    let lmin = symmetric_eigen(&b.a_quotient.to_f64())?.min().unwrap();
    Ok((bound.clone(), lmin, lmin <= -1.0 + to_f64(&bound) + 1e-9))
}

/// Spectral consequences of coherence on one up/down component in dimension k.
pub fn coherent_spectrum_check(
    cover: &Cover,
    pw: &PathWeights,
    k: usize,
    component: &[usize],
    direction: Direction,
) -> Result<Vec<Check>> {
    let reference = Orientation::reference(cover.len());
    let q = build_conditional(cover, pw, k, direction, Flavor::Quotient, &reference)?.restrict(component);
    let s = build_conditional(cover, pw, k, direction, Flavor::Signed, &reference)?.restrict(component);
    let qs = q.eigen()?;
    let ss = s.eigen()?;
    let mut out = Vec::new();
    match cover.detect_coherent(component, direction) {
        Some(w) => {
            let neg: Vec<f64> = qs.values.iter().map(|x| -x).collect();
            out.push(Check::new("signed spectrum = -(quotient spectrum)", multisets_match(&ss.values, &neg, 1e-8), ""));
            let mult = count_near(&ss.values, -1.0, MULTIPLICITY_TOL);
            out.push(Check::new("-1 is a signed eigenvalue of multiplicity 1", mult == 1, &format!("multiplicity {mult}")));
            let sw = build_conditional(cover, pw, k, direction, Flavor::Signed, &w)?.restrict(component);
            out.push(Check::new("witness orientation gives A_signed = -A_quotient", sw.exact.exact_eq(&q.exact.neg()), ""));
            let sws = sw.eigen()?;
            let target: Vec<f64> = component.iter().map(|&u| to_f64(&Rational::from_integer(pw.d(u))).sqrt()).collect();
            let tn = norm(&target);
            let v = &sws.vectors[0];
            let dot: f64 = v.iter().zip(&target).map(|(a, b)| a * b).sum::<f64>() / tn;
            out.push(Check::new(
                "(-1)-eigenvector ∝ (LP·RP)^{1/2}",
                (sws.values[0] + 1.0).abs() < 1e-8 && (dot.abs() - 1.0).abs() < 1e-8,
                &format!("|cos| = {}", dot.abs()),
            ));
        }
        None => {
            let lmin = ss.min().unwrap_or(0.0);
            out.push(Check::new("not coherent: λ_min(signed) > -1", lmin > -1.0 + 1e-10, &format!("λ_min = {lmin}")));
        }
    }
    Ok(out)
}

/// `max(λ_{max-1}(A_{k-1}^{quotient,up}), -λ_min(A_{k-1}^{signed,up}))` on an up-component in dim k-1.
pub fn convergence_rate(cover: &Cover, pw: &PathWeights, k: usize, component: &[usize]) -> Result<f64> {
    if k == 0 {
        return pre("convergence rate needs k >= 1");
    }
    if cover.is_trivial_component(component, Direction::Up) {
        return pre("the up-component is a leaf");
    }
    if cover.detect_coherent(component, Direction::Up).is_some() {
        return pre("the up-component is coherent; the walk is not aperiodic");
    }
    let o = Orientation::reference(cover.len());
    let q = build_conditional(cover, pw, k - 1, Direction::Up, Flavor::Quotient, &o)?.restrict(component).eigen()?;
    let s = build_conditional(cover, pw, k - 1, Direction::Up, Flavor::Signed, &o)?.restrict(component).eigen()?;
    let second = q.second_max().unwrap_or(0.0);
    Ok(second.max(-s.min().unwrap_or(0.0)))
}

/// `A_quotient` eigenvector check: `(LP·RP)^{1/2}` is fixed by the quotient operator, exactly.
pub fn stationary_vector_fixed(op: &SymmetricOperator, pw: &PathWeights) -> bool {
    // In the H frame the vector (LP·RP)^{1/2} has components RP·H^{1/2}; the
    // fixed-point equation reduces to M · RP = RP with M the rational part.
    let rp: Vec<Rational> = op.index.iter().map(|&u| Rational::from_integer(pw.rp[u].clone())).collect();
    let same_frame = op.exact.row_w == op.exact.col_w;
    same_frame && op.exact.m.mul_vec(&rp) == rp
}
