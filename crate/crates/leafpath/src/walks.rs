//! Transition matrices of the root-to-leaf path walk, stationary distributions
//! and a seeded simulator.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::{Cover, CoverNode, PathWeights};
use crate::error::{pre, Error, Result};
use crate::exact::{int, Rational};
use crate::matrix::RatMatrix;
use crate::Direction;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum View {
    Cover,
    Quotient,
}

#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    pub p: RatMatrix,
    /// Quotient indices (quotient view) or cover indices (cover view), one per row.
    pub index: Vec<usize>,
    pub view: View,
}

impl TransitionMatrix {
    pub fn is_stochastic(&self) -> bool {
        let one = int(1);
        self.p.row_sums().iter().all(|s| *s == one)
            && (0..self.p.rows()).all(|i| self.p.row(i).iter().all(|x| *x >= Rational::zero()))
    }
}

fn ratio(a: &BigInt, b: &BigInt) -> Rational {
    Rational::new(a.clone(), b.clone())
}

/// Lift of a parent `v` of `u` with `[v' : u] = +1`.
fn up_lift(cover: &Cover, u: CoverNode, v: usize) -> CoverNode {
    let s = cover.ref_sign(v, u.quotient_index).expect("parent");
    CoverNode { quotient_index: v, flipped: if s == 1 { u.flipped } else { !u.flipped } }
}

/// Lift of a child `t` of `u` with `[u : t'] = -1`.
fn down_lift(cover: &Cover, u: CoverNode, t: usize) -> CoverNode {
    let s = cover.ref_sign(u.quotient_index, t).expect("child");
    CoverNode { quotient_index: t, flipped: if s == -1 { u.flipped } else { !u.flipped } }
}

/// Laziness `(stay, flip)` at a node: nonzero only at leaves and roots.
fn lazy(cover: &Cover, i: usize) -> Option<Rational> {
    match (cover.is_leaf(i), cover.is_root(i)) {
        (true, true) => Some(Rational::new(1.into(), 2.into())),
        (true, false) | (false, true) => Some(Rational::new(1.into(), 4.into())),
        _ => None,
    }
}

pub fn transition_full(cover: &Cover, pw: &PathWeights, view: View) -> TransitionMatrix {
    let n = cover.len();
    let half = Rational::new(1.into(), 2.into());
    match view {
        View::Quotient => {
            let mut p = RatMatrix::zeros(n, n);
            for u in 0..n {
                for &(v, _) in cover.parents(u) {
                    p[(u, v)] += &half * ratio(&pw.lp[v], &pw.lp[u]);
                }
                for &(t, _) in cover.children(u) {
                    p[(u, t)] += &half * ratio(&pw.rp[t], &pw.rp[u]);
                }
                if let Some(l) = lazy(cover, u) {
                    p[(u, u)] += &l + &l;
                }
            }
            TransitionMatrix { p, index: (0..n).collect(), view }
        }
        View::Cover => {
            let mut p = RatMatrix::zeros(2 * n, 2 * n);
            for c in 0..2 * n {
                let u = CoverNode::from_index(c);
                let i = u.quotient_index;
                for &(v, _) in cover.parents(i) {
                    p[(c, up_lift(cover, u, v).index())] += &half * ratio(&pw.lp[v], &pw.lp[i]);
                }
                for &(t, _) in cover.children(i) {
                    p[(c, down_lift(cover, u, t).index())] += &half * ratio(&pw.rp[t], &pw.rp[i]);
                }
                if let Some(l) = lazy(cover, i) {
                    p[(c, c)] += &l;
                    p[(c, u.neg().index())] += &l;
                }
            }
            TransitionMatrix { p, index: (0..2 * n).collect(), view }
        }
    }
}

/// Two-step walks conditioned to leave dimension k in `direction` and come back.
pub fn transition_conditional(
    cover: &Cover,
    pw: &PathWeights,
    k: usize,
    direction: Direction,
    view: View,
) -> Result<TransitionMatrix> {
    if !cover.is_strong() {
        return pre("conditional walks require a strong grading");
    }
    let nodes = cover.nodes_of_dim(k);
    let pos: HashMap<usize, usize> = nodes.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let m = nodes.len();
    // Weight of the excursion u -> w -> u2 through the intermediate node w.
    let weight = |u: usize, w: usize, u2: usize| -> Rational {
        match direction {
            Direction::Up => ratio(&pw.lp[w], &pw.lp[u]) * ratio(&pw.rp[u2], &pw.rp[w]),
            Direction::Down => ratio(&pw.rp[w], &pw.rp[u]) * ratio(&pw.lp[u2], &pw.lp[w]),
        }
    };
    let through = |u: usize| -> Vec<usize> {
        match direction {
            Direction::Up => cover.parents(u).iter().map(|&(v, _)| v).collect(),
            Direction::Down => cover.children(u).iter().map(|&(t, _)| t).collect(),
        }
    };
    let back = |w: usize| -> Vec<usize> {
        match direction {
            Direction::Up => cover.children(w).iter().map(|&(c, _)| c).collect(),
            Direction::Down => cover.parents(w).iter().map(|&(c, _)| c).collect(),
        }
    };
    match view {
        View::Quotient => {
            let mut p = RatMatrix::zeros(m, m);
            for (a, &u) in nodes.iter().enumerate() {
                let ws = through(u);
                if ws.is_empty() {
                    p[(a, a)] = int(1);
                    continue;
                }
                for w in ws {
                    for u2 in back(w) {
                        p[(a, pos[&u2])] += weight(u, w, u2);
                    }
                }
            }
            Ok(TransitionMatrix { p, index: nodes, view })
        }
        View::Cover => {
            let mut p = RatMatrix::zeros(2 * m, 2 * m);
            let half = Rational::new(1.into(), 2.into());
            let index: Vec<usize> = nodes.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect();
            let cpos = |c: CoverNode| 2 * pos[&c.quotient_index] + c.flipped as usize;
            for &i in &nodes {
                for flipped in [false, true] {
                    let u = CoverNode { quotient_index: i, flipped };
                    let row = cpos(u);
                    let ws = through(i);
                    if ws.is_empty() {
                        p[(row, row)] = half.clone();
                        p[(row, cpos(u.neg()))] = half.clone();
                        continue;
                    }
                    for w in ws {
                        // First step fixes the lift of w, second step its lift of u2.
                        let (wl, u2s) = match direction {
                            Direction::Up => (up_lift(cover, u, w), back(w)),
                            Direction::Down => (down_lift(cover, u, w), back(w)),
                        };
                        for u2 in u2s {
                            let target = match direction {
                                Direction::Up => down_lift(cover, wl, u2),
                                Direction::Down => up_lift(cover, wl, u2),
                            };
                            p[(row, cpos(target))] += weight(i, w, u2);
                        }
                    }
                }
            }
            Ok(TransitionMatrix { p, index, view })
        }
    }
}

#[derive(Clone, Debug)]
pub struct StationaryDistribution {
    pub index: Vec<usize>,
    pub weights: Vec<Rational>,
    pub normalizer: Rational,
}

/// `π ∝ LP·RP` on a quotient component (or a dimension-k up/down component),
/// halved on each lift for the cover view.
pub fn stationary(pw: &PathWeights, component: &[usize], view: View) -> StationaryDistribution {
    let k: BigInt = component.iter().map(|&u| pw.d(u)).sum();
    let kq = Rational::from_integer(k);
    match view {
        View::Quotient => StationaryDistribution {
            index: component.to_vec(),
            weights: component.iter().map(|&u| Rational::from_integer(pw.d(u)) / &kq).collect(),
            normalizer: kq,
        },
        View::Cover => {
            let two = int(2);
            let mut index = Vec::new();
            let mut weights = Vec::new();
            for &u in component {
                for c in [2 * u, 2 * u + 1] {
                    index.push(c);
                    weights.push(Rational::from_integer(pw.d(u)) / (&kq * &two));
                }
            }
            StationaryDistribution { index, weights, normalizer: &kq * &two }
        }
    }
}

/// Weights of `dist` laid out along the rows of `t` (zero off the support).
pub fn aligned(dist: &StationaryDistribution, t: &TransitionMatrix) -> Vec<Rational> {
    let pos: HashMap<usize, usize> = t.index.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut out = vec![Rational::zero(); t.index.len()];
    for (i, w) in dist.index.iter().zip(&dist.weights) {
        out[pos[i]] = w.clone();
    }
    out
}

pub fn is_fixed_point(t: &TransitionMatrix, pi: &[Rational]) -> bool {
    t.p.vec_mul(pi) == pi
}

pub fn satisfies_detailed_balance(t: &TransitionMatrix, pi: &[Rational]) -> bool {
    let n = t.p.rows();
    (0..n).all(|i| (0..i).all(|j| &pi[i] * &t.p[(i, j)] == &pi[j] * &t.p[(j, i)]))
}

pub fn flip_commutes(cover: &Cover, t: &TransitionMatrix) -> bool {
    let n = 2 * cover.len();
    (0..n).all(|i| (0..n).all(|j| t.p[(i, j)] == t.p[(i ^ 1, j ^ 1)]))
}

/// Number of root-to-leaf paths inside a quotient component.
pub fn path_count(cover: &Cover, pw: &PathWeights, component: &[usize]) -> BigInt {
    component.iter().filter(|&&u| cover.is_root(u)).map(|&u| pw.lp[u].clone()).sum()
}

/// Mean length of a uniform root-to-leaf path, from `K = |paths| · (E[len] + 1)`.
pub fn expected_path_length(cover: &Cover, pw: &PathWeights, component: &[usize]) -> Rational {
    let k: BigInt = component.iter().map(|&u| pw.d(u)).sum();
    Rational::new(k, path_count(cover, pw, component)) - int(1)
}

#[derive(Clone, Debug)]
pub struct WalkTrace {
    pub states: Vec<usize>,
    pub seed: u64,
    pub view: View,
    /// Visit frequencies of the states after each step, indexed like the view.
    pub empirical: Vec<f64>,
}

fn small(x: &BigInt) -> Result<u64> {
    x.to_u64().ok_or_else(|| Error::Guard("path weights exceed 64-bit sampling range".into()))
}

struct Choices {
    targets: Vec<usize>,
    cumulative: Vec<u64>,
}

impl Choices {
    fn pick(&self, rng: &mut ChaCha8Rng) -> usize {
        let total = *self.cumulative.last().unwrap();
        let r = rng.gen_range(0..total);
        self.targets[self.cumulative.partition_point(|&c| c <= r)]
    }
}

/// Seeded simulation with ChaCha8 (`seed_from_u64`). Each step flips a fair
/// coin for up/down; moves pick a parent with odds LP(v) or a child with odds
/// RP(t) by integer cumulative weights; an impossible move is replaced by a
/// fair choice between staying and switching to the involutory partner.
pub fn simulate(
    cover: &Cover,
    pw: &PathWeights,
    view: View,
    start: usize,
    steps: usize,
    seed: u64,
) -> Result<WalkTrace> {
    let n = cover.len();
    let states_total = match view {
        View::Cover => 2 * n,
        View::Quotient => n,
    };
    if start >= states_total {
        return pre(format!("start node {start} is not in the walk's state space"));
    }
    if steps == 0 {
        return pre("steps must be at least 1");
    }
    let mut ups = Vec::with_capacity(n);
    let mut downs = Vec::with_capacity(n);
    for u in 0..n {
        let mut acc = 0u64;
        let mut up = Choices { targets: Vec::new(), cumulative: Vec::new() };
        for &(v, _) in cover.parents(u) {
            acc += small(&pw.lp[v])?;
            up.targets.push(v);
            up.cumulative.push(acc);
        }
        acc = 0;
        let mut down = Choices { targets: Vec::new(), cumulative: Vec::new() };
        for &(t, _) in cover.children(u) {
            acc += small(&pw.rp[t])?;
            down.targets.push(t);
            down.cumulative.push(acc);
        }
        ups.push(up);
        downs.push(down);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = Vec::with_capacity(steps + 1);
    let mut counts = vec![0u64; states_total];
    let mut cur = start;
    states.push(cur);
    for _ in 0..steps {
        let (i, node) = match view {
            View::Cover => (cur / 2, Some(CoverNode::from_index(cur))),
            View::Quotient => (cur, None),
        };
        let go_up = rng.gen_range(0..2u32) == 0;
        let choices = if go_up { &ups[i] } else { &downs[i] };
        cur = if choices.targets.is_empty() {
            let flip = rng.gen_range(0..2u32) == 1;
            match node {
                Some(u) if flip => u.neg().index(),
                _ => cur,
            }
        } else {
            let w = choices.pick(&mut rng);
            match node {
                Some(u) if go_up => up_lift(cover, u, w).index(),
                Some(u) => down_lift(cover, u, w).index(),
                None => w,
            }
        };
        counts[cur] += 1;
        states.push(cur);
    }
    let empirical = counts.iter().map(|&c| c as f64 / steps as f64).collect();
    Ok(WalkTrace { states, seed, view, empirical })
}

pub fn total_variation(empirical: &[f64], pi: &[f64]) -> f64 {
    0.5 * empirical.iter().zip(pi).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// One step of the walk on the cover obtained by drawing a uniform
/// root-to-leaf path through the current node and moving along it.
/// Paths are enumerated explicitly, independent of the LP/RP recursions.
pub struct PathSampler {
    start: CoverNode,
    ascending: Vec<Vec<usize>>,
    descending: Vec<Vec<usize>>,
}

fn chains(cover: &Cover, u: usize, up: bool, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    prefix.push(u);
    let next: Vec<usize> = if up {
        cover.parents(u).iter().map(|&(v, _)| v).collect()
    } else {
        cover.children(u).iter().map(|&(t, _)| t).collect()
    };
    if next.is_empty() {
        out.push(prefix.clone());
    }
    for w in next {
        chains(cover, w, up, prefix, out);
    }
    prefix.pop();
}

pub fn ascending_paths(cover: &Cover, u: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    chains(cover, u, true, &mut Vec::new(), &mut out);
    out
}

pub fn descending_paths(cover: &Cover, u: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    chains(cover, u, false, &mut Vec::new(), &mut out);
    out
}

impl PathSampler {
    pub fn new(cover: &Cover, start: usize) -> Self {
        let start = CoverNode::from_index(start);
        let i = start.quotient_index;
        PathSampler { start, ascending: ascending_paths(cover, i), descending: descending_paths(cover, i) }
    }

    pub fn step(&self, cover: &Cover, rng: &mut ChaCha8Rng) -> usize {
        let up = &self.ascending[rng.gen_range(0..self.ascending.len())];
        let down = &self.descending[rng.gen_range(0..self.descending.len())];
        let u = self.start;
        if rng.gen_range(0..2u32) == 0 {
            if let Some(&v) = up.get(1) {
                return up_lift(cover, u, v).index();
            }
        } else if let Some(&t) = down.get(1) {
            return down_lift(cover, u, t).index();
        }
        if rng.gen_range(0..2u32) == 0 {
            u.index()
        } else {
            u.neg().index()
        }
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
