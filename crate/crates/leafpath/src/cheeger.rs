//! Auxiliary up/down graphs, quotient and signed Cheeger constants, and the
//! combined Cheeger inequalities for pairs of components.

use num::{BigInt, Integer, One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cover::{Cover, Orientation, PathWeights};
use crate::eigen::symmetric_eigen;
use crate::error::{pre, Error, Result};
use crate::exact::{from_big, int, to_f64, Rational};
use crate::matrix::RatMatrix;
use crate::operators::{build_conditional, Flavor};
use crate::surd::SurdMatrix;
use crate::Direction;

pub const QUOTIENT_CAP: usize = 24;
pub const SIGNED_CAP: usize = 20;

#[derive(Clone, Debug)]
pub struct AuxEdge {
    /// Positions into `AuxGraph::nodes`, `a < b`.
    pub a: usize,
    pub b: usize,
    pub sign: i32,
    pub weight: Rational,
}

#[derive(Clone, Debug)]
pub struct AuxGraph {
    pub direction: Direction,
    pub k: usize,
    pub nodes: Vec<usize>,
    pub edges: Vec<AuxEdge>,
    pub measure: Vec<Rational>,
}

impl AuxGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Weighted degree `Σ ω` at each node.
    pub fn degrees(&self) -> Vec<Rational> {
        let mut d = vec![Rational::zero(); self.len()];
        for e in &self.edges {
            d[e.a] += &e.weight;
            d[e.b] += &e.weight;
        }
        d
    }

    /// `max_u Σ ω / μ(u)`.
    pub fn degree_ratio(&self) -> Rational {
        self.degrees().iter().zip(&self.measure).map(|(d, m)| d / m).max().unwrap_or_else(Rational::zero)
    }
}

fn lp(pw: &PathWeights, u: usize) -> Rational {
    from_big(&pw.lp[u])
}

/// Auxiliary graph on a quotient up- or down-component in dimension k.
///
/// Up: two k-faces are joined through their common parent `v` with weight
/// `LP(v)`; down: through their common child `ρ` with weight `LP·LP'/LP(ρ)`.
/// The sign is the product of the two reference incidence signs; `μ = LP`.
pub fn build_aux(cover: &Cover, pw: &PathWeights, component: &[usize], direction: Direction) -> Result<AuxGraph> {
    if component.is_empty() {
        return pre("empty component");
    }
    let k = cover.dim(component[0]);
    match direction {
        Direction::Up if cover.is_trivial_component(component, Direction::Up) => {
            return pre("up auxiliary graph needs a non-leaf component")
        }
        Direction::Down if component.len() < 2 => return pre("down auxiliary graph needs at least two faces"),
        _ => {}
    }
    let mut edges = Vec::new();
    for a in 0..component.len() {
        for b in a + 1..component.len() {
            let (u, u2) = (component[a], component[b]);
            let shared: Vec<(usize, i32, i32)> = match direction {
                Direction::Up => cover
                    .parents(u)
                    .iter()
                    .filter_map(|&(v, s)| cover.ref_sign(v, u2).map(|s2| (v, s, s2)))
                    .collect(),
                Direction::Down => cover
                    .children(u)
                    .iter()
                    .filter_map(|&(t, s)| cover.ref_sign(u2, t).map(|s2| (t, s, s2)))
                    .collect(),
            };
            match shared.len() {
                0 => continue,
                1 => {}
                _ => return pre(format!("nodes {} and {} share more than one neighbour", cover.name(u), cover.name(u2))),
            }
            let (w, s1, s2) = shared[0];
            let weight = match direction {
                Direction::Up => lp(pw, w),
                Direction::Down => lp(pw, u) * lp(pw, u2) / lp(pw, w),
            };
            edges.push(AuxEdge { a, b, sign: s1 * s2, weight });
        }
    }
    let measure = component.iter().map(|&u| lp(pw, u)).collect();
    Ok(AuxGraph { direction, k, nodes: component.to_vec(), edges, measure })
}

/// `d^down = k + 1 - min_σ LP(σ) Σ_{ρ⊂σ} 1/LP(ρ)` over the component.
pub fn down_degree_formula(cover: &Cover, pw: &PathWeights, component: &[usize]) -> Rational {
    let k = cover.dim(component[0]);
    let m = component
        .iter()
        .map(|&s| lp(pw, s) * cover.children(s).iter().map(|&(r, _)| lp(pw, r).recip()).sum::<Rational>())
        .min()
        .unwrap();
    int(k as i64 + 1) - m
}

/// Weighted (signed) Laplacian `μ^{-1/2}(D_ω - sω)μ^{-1/2}` in the frame `(1/μ, μ)`.
pub fn aux_laplacian(aux: &AuxGraph, flavor: Flavor) -> SurdMatrix {
    let n = aux.len();
    let mut m = RatMatrix::zeros(n, n);
    for (i, d) in aux.degrees().into_iter().enumerate() {
        m[(i, i)] = d;
    }
    for e in &aux.edges {
        let w = match flavor {
            Flavor::Signed => -(&e.weight * int(e.sign as i64)),
            _ => -e.weight.clone(),
        };
        m[(e.a, e.b)] = w.clone();
        m[(e.b, e.a)] = w;
    }
    let inv: Vec<Rational> = aux.measure.iter().map(|x| x.recip()).collect();
    SurdMatrix::new(m, inv, aux.measure.clone())
}

/// `Δ^aux = c (I ∓ A)` with `c = k+2` (up) or `k+1` (down) and `A` the
/// conditional operator restricted to the component.
pub fn check_aux_identity(cover: &Cover, pw: &PathWeights, aux: &AuxGraph, flavor: Flavor) -> Result<bool> {
    let o = Orientation::reference(cover.len());
    let op = build_conditional(cover, pw, aux.k, aux.direction, flavor, &o)?.restrict(&aux.nodes);
    let c = match aux.direction {
        Direction::Up => int(aux.k as i64 + 2),
        Direction::Down => int(aux.k as i64 + 1),
    };
    let id = SurdMatrix::identity(&op.exact.row_w);
    let inner = match flavor {
        Flavor::Signed => id.add(&op.exact)?,
        _ => id.sub(&op.exact)?,
    };
    Ok(aux_laplacian(aux, flavor).exact_eq(&inner.scale(&c)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheegerValue {
    pub h: Rational,
    /// Bit `i` set when `nodes[i]` belongs to the cut.
    pub subset: u32,
    /// Bit `i` set when `nodes[i]` is taken with the opposite orientation (signed only).
    pub flips: u32,
}

/// Integer copies of ω and μ scaled by a common denominator.
struct Scaled {
    n: usize,
    adj: Vec<Vec<(usize, i32, u128)>>,
    mu: Vec<u128>,
}

fn to_u128(x: &BigInt) -> Result<u128> {
    x.to_u128().ok_or_else(|| Error::Guard("weight does not fit in 128 bits".into()))
}

fn scale(aux: &AuxGraph) -> Result<Scaled> {
    let mut l = BigInt::one();
    for q in aux.edges.iter().map(|e| &e.weight).chain(&aux.measure) {
        l = l.lcm(q.denom());
    }
    let conv = |q: &Rational| to_u128(&(q.numer() * (&l / q.denom())));
    let n = aux.len();
    let mut adj = vec![Vec::new(); n];
    let mut total = 0u128;
    for e in &aux.edges {
        let w = conv(&e.weight)?;
        total = total.saturating_add(w);
        adj[e.a].push((e.b, e.sign, w));
        adj[e.b].push((e.a, e.sign, w));
    }
    let mu: Vec<u128> = aux.measure.iter().map(conv).collect::<Result<_>>()?;
    let mtotal = mu.iter().fold(0u128, |a, &b| a.saturating_add(b));
    if total >= 1 << 60 || mtotal >= 1 << 60 {
        return Err(Error::Guard("scaled weights too large for exact search".into()));
    }
    Ok(Scaled { n, adj, mu })
}

#[derive(Clone, Copy)]
struct Best {
    num: u128,
    den: u128,
    mask: u32,
    flips: u32,
}

impl Best {
    fn better(self, o: Best) -> Best {
        let (l, r) = (self.num * o.den, o.num * self.den);
        if l < r || (l == r && self.mask <= o.mask) {
            self
        } else {
            o
        }
    }
}

fn finish(b: Best) -> CheegerValue {
    CheegerValue {
        h: Rational::new(BigInt::from(b.num), BigInt::from(b.den)),
        subset: b.mask,
        flips: b.flips,
    }
}

/// Quotient Cheeger constant: min over proper nonempty `Y` of `ω(Y, Yᶜ) / min(μ(Y), μ(Yᶜ))`.
pub fn cheeger_quotient(aux: &AuxGraph) -> Result<CheegerValue> {
    let n = aux.len();
    if n < 2 {
        return pre("quotient Cheeger constant needs at least two nodes");
    }
    if n > QUOTIENT_CAP {
        return Err(Error::Guard(format!("{n} nodes exceed the brute-force cap of {QUOTIENT_CAP}")));
    }
    let s = scale(aux)?;
    let mu_total: u128 = s.mu.iter().sum();
    let low = n.min(12);
    let chunks = 1usize << (n - low);
    let best = (0..chunks)
        .into_par_iter()
        .filter_map(|hi| {
            let base = (hi as u32) << low;
            let mut mask = base;
            let mut cut: u128 = cut_of(&s, mask);
            let mut mu: u128 = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| s.mu[i]).sum();
            let mut best: Option<Best> = None;
            let full = ((1u64 << n) - 1) as u32;
            for i in 0u32..(1u32 << low) {
                if i > 0 {
                    let bit = i.trailing_zeros() as usize;
                    let inside = mask >> bit & 1 == 1;
                    for &(j, _, w) in &s.adj[bit] {
                        let same = (mask >> j & 1 == 1) == inside;
                        if same {
                            cut += w;
                        } else {
                            cut -= w;
                        }
                    }
                    mask ^= 1 << bit;
                    if inside {
                        mu -= s.mu[bit];
                    } else {
                        mu += s.mu[bit];
                    }
                }
                if mask == 0 || mask == full {
                    continue;
                }
                let cand = Best { num: cut, den: mu.min(mu_total - mu), mask, flips: 0 };
                best = Some(best.map_or(cand, |b| b.better(cand)));
            }
            best
        })
        .reduce_with(|a, b| a.better(b))
        .ok_or_else(|| Error::Numeric("no proper subset".into()))?;
    Ok(finish(best))
}

fn cut_of(s: &Scaled, mask: u32) -> u128 {
    let mut c = 0;
    for i in 0..s.n {
        if mask >> i & 1 == 1 {
            for &(j, _, w) in &s.adj[i] {
                if mask >> j & 1 == 0 {
                    c += w;
                }
            }
        }
    }
    c
}

/// Connected pieces of the subgraph induced on `mask`.
fn pieces(s: &Scaled, mask: u32) -> Vec<Vec<usize>> {
    let mut seen = 0u32;
    let mut out = Vec::new();
    for start in 0..s.n {
        if mask >> start & 1 == 0 || seen >> start & 1 == 1 {
            continue;
        }
        let mut piece = vec![start];
        seen |= 1 << start;
        let mut head = 0;
        while head < piece.len() {
            let u = piece[head];
            head += 1;
            for &(j, _, _) in &s.adj[u] {
                if mask >> j & 1 == 1 && seen >> j & 1 == 0 {
                    seen |= 1 << j;
                    piece.push(j);
                }
            }
        }
        piece.sort();
        out.push(piece);
    }
    out
}

/// Minimal frustration `Σ ω` over negative edges of a connected piece, with
/// its first node fixed; returns the value and the flipped nodes.
fn min_frustration(s: &Scaled, piece: &[usize]) -> (u128, u32) {
    let inside: u32 = piece.iter().fold(0, |m, &i| m | 1 << i);
    let mut frust: u128 = 0;
    for &i in piece {
        for &(j, sign, w) in &s.adj[i] {
            if j > i && inside >> j & 1 == 1 && sign < 0 {
                frust += w;
            }
        }
    }
    let free = &piece[1..];
    let mut flips = 0u32;
    let (mut best, mut best_flips) = (frust, 0u32);
    for i in 1u64..(1u64 << free.len()) {
        let v = free[i.trailing_zeros() as usize];
        for &(j, sign, w) in &s.adj[v] {
            if inside >> j & 1 == 0 {
                continue;
            }
            let xv = if flips >> v & 1 == 1 { -1 } else { 1 };
            let xj = if flips >> j & 1 == 1 { -1 } else { 1 };
            if sign * xv * xj < 0 {
                frust -= w;
            } else {
                frust += w;
            }
        }
        flips ^= 1 << v;
        if frust < best {
            best = frust;
            best_flips = flips;
        }
    }
    (best, best_flips)
}

/// Signed Cheeger constant: min over nonempty `Y` (the whole node set
/// included) and orientations of `(ω(Y, Yᶜ) + ω_-(Y)) / μ(Y)`, where `ω_-`
/// counts each negative edge inside `Y` once per ordered pair.
pub fn cheeger_signed(aux: &AuxGraph) -> Result<CheegerValue> {
    let n = aux.len();
    if n == 0 {
        return pre("signed Cheeger constant needs a nonempty graph");
    }
    if n > SIGNED_CAP {
        return Err(Error::Guard(format!("{n} nodes exceed the signed brute-force cap of {SIGNED_CAP}")));
    }
    let s = scale(aux)?;
    let best = (1u32..(1u32 << n))
        .into_par_iter()
        .map(|mask| {
            let mut neg = 0u128;
            let mut flips = 0u32;
            for piece in pieces(&s, mask) {
                let (f, x) = min_frustration(&s, &piece);
                neg += f;
                flips |= x;
            }
            let mu: u128 = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| s.mu[i]).sum();
            Best { num: cut_of(&s, mask) + 2 * neg, den: mu, mask, flips }
        })
        .reduce_with(|a, b| a.better(b))
        .unwrap();
    Ok(finish(best))
}

#[derive(Clone, Debug)]
pub struct FlavorBounds {
    pub h_up: Rational,
    pub h_down: Option<Rational>,
    pub witness_up: CheegerValue,
    pub witness_down: Option<CheegerValue>,
    pub lower_up: Rational,
    pub lower_down: Option<Rational>,
    pub upper_up: Rational,
    pub upper_down: Option<Rational>,
    pub lower: Rational,
    pub upper: Rational,
    /// Spectral gap from the (k-1)-up operator and from the k-down operator.
    pub gap_up: f64,
    pub gap_down: f64,
    pub sandwich_ok: bool,
}

#[derive(Clone, Debug)]
pub struct RateBounds {
    pub lower: Rational,
    pub upper: Rational,
    pub rate: f64,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct CheegerReport {
    pub k: usize,
    pub up_component: Vec<usize>,
    pub down_component: Vec<usize>,
    /// Degree ratio of the up graph in dimension k-1 (equal to k).
    pub d_up: Rational,
    /// Degree ratio of the down graph in dimension k, `None` for a single face.
    pub d_down: Option<Rational>,
    pub quotient: FlavorBounds,
    pub signed: FlavorBounds,
    pub coherent: bool,
    pub rate: Option<RateBounds>,
}

const SLACK: f64 = 1e-9;

fn flavor_bounds(
    k: usize,
    up: &AuxGraph,
    down: Option<&AuxGraph>,
    d_down: Option<&Rational>,
    flavor: Flavor,
    gaps: (f64, f64),
) -> Result<FlavorBounds> {
    let solve = |g: &AuxGraph| match flavor {
        Flavor::Signed => cheeger_signed(g),
        _ => cheeger_quotient(g),
    };
    let witness_up = solve(up)?;
    let witness_down = down.map(solve).transpose()?;
    let kk = int(k as i64);
    let k1 = int(k as i64 + 1);
    let two = int(2);
    let h_up = witness_up.h.clone();
    let h_down = witness_down.as_ref().map(|w| w.h.clone());
    let lower_up = &h_up * &h_up / (&two * &kk * &k1);
    let upper_up = &two * &h_up / &k1;
    let lower_down = h_down.as_ref().zip(d_down).map(|(h, d)| {
        if d.is_zero() {
            Rational::zero()
        } else {
            h * h / (&two * d * &k1)
        }
    });
    let upper_down = h_down.as_ref().map(|h| &two * h / &k1);
    let lower = lower_down.iter().fold(lower_up.clone(), |a, b| a.max(b.clone()));
    let upper = upper_down.iter().fold(upper_up.clone(), |a, b| a.min(b.clone()));
    let (gap_up, gap_down) = gaps;
    let ok = |g: f64| to_f64(&lower) <= g + SLACK && g <= to_f64(&upper) + SLACK;
    let sandwich_ok = ok(gap_up) && ok(gap_down) && (gap_up - gap_down).abs() < SLACK;
    Ok(FlavorBounds {
        h_up,
        h_down,
        witness_up,
        witness_down,
        lower_up,
        lower_down,
        upper_up,
        upper_down,
        lower,
        upper,
        gap_up,
        gap_down,
        sandwich_ok,
    })
}

fn spectral_gaps(cover: &Cover, pw: &PathWeights, k: usize, up: &[usize], down: &[usize]) -> Result<((f64, f64), (f64, f64))> {
    let o = Orientation::reference(cover.len());
    let eig = |kk: usize, dir: Direction, fl: Flavor, comp: &[usize]| -> Result<Vec<f64>> {
        Ok(build_conditional(cover, pw, kk, dir, fl, &o)?.restrict(comp).eigen()?.values)
    };
    let second = |v: &[f64]| if v.len() >= 2 { v[v.len() - 2] } else { 0.0 };
    let qu = eig(k - 1, Direction::Up, Flavor::Quotient, up)?;
    let qd = eig(k, Direction::Down, Flavor::Quotient, down)?;
    let su = eig(k - 1, Direction::Up, Flavor::Signed, up)?;
    let sd = eig(k, Direction::Down, Flavor::Signed, down)?;
    Ok((
        (1.0 - second(&qu), 1.0 - second(&qd)),
        (1.0 + su[0], 1.0 + sd[0]),
    ))
}

/// Combined Cheeger report for every (down-component in dim k, up-component in dim k-1) pair.
pub fn combined_report(cover: &Cover, pw: &PathWeights, k: usize) -> Result<Vec<CheegerReport>> {
    let corr = cover.component_correspondence(k)?;
    let mut out = Vec::new();
    for &(di, ui) in &corr.pairs {
        let down_c = corr.down.members[di].clone();
        let up_c = corr.up.members[ui].clone();
        let up = build_aux(cover, pw, &up_c, Direction::Up)?;
        let down = if down_c.len() >= 2 { Some(build_aux(cover, pw, &down_c, Direction::Down)?) } else { None };
        let d_up = up.degree_ratio();
        let d_down = down.as_ref().map(AuxGraph::degree_ratio);
        let (qg, sg) = spectral_gaps(cover, pw, k, &up_c, &down_c)?;
        let quotient = flavor_bounds(k, &up, down.as_ref(), d_down.as_ref(), Flavor::Quotient, qg)?;
        let signed = flavor_bounds(k, &up, down.as_ref(), d_down.as_ref(), Flavor::Signed, sg)?;
        let coherent = cover.detect_coherent(&up_c, Direction::Up).is_some();
        let rate = if coherent {
            None
        } else {
            let k1 = int(k as i64 + 1);
            let two = int(2);
            let minq = quotient.upper.clone() * &k1 / &two;
            let mins = signed.upper.clone() * &k1 / &two;
            let lower = Rational::one() - &two * minq.max(mins) / &k1;
            let maxq = quotient.lower.clone() * &two * &k1;
            let maxs = signed.lower.clone() * &two * &k1;
            let upper = Rational::one() - maxq.min(maxs) / (&two * &k1);
            let rate = crate::operators::convergence_rate(cover, pw, k, &up_c)?;
            let ok = to_f64(&lower) <= rate + SLACK && rate <= to_f64(&upper) + SLACK;
            Some(RateBounds { lower, upper, rate, ok })
        };
        out.push(CheegerReport {
            k,
            up_component: up_c,
            down_component: down_c,
            d_up,
            d_down,
            quotient,
            signed,
            coherent,
            rate,
        });
    }
    Ok(out)
}

/// Eigenvalues of an auxiliary Laplacian.
pub fn aux_spectrum(aux: &AuxGraph, flavor: Flavor) -> Result<Vec<f64>> {
    Ok(symmetric_eigen(&aux_laplacian(aux, flavor).to_f64())?.values)
}
