//! Independent reference computations shared by the test suites.
#![allow(dead_code)]

use leafpath::cheeger::AuxGraph;
use leafpath::complex::SimplicialComplex;
use leafpath::cover::{Cover, Orientation};
use leafpath::exact::{int, rat, Rational};
use leafpath::matrix::RatMatrix;
use leafpath::walks::View;
use leafpath::Direction;
use num::Zero;

/// Ascending paths to a maximal face, counted by walking the face poset directly.
pub fn count_up(c: &SimplicialComplex, f: usize) -> u64 {
    let v = &c.face(f).vertices;
    let supers: Vec<usize> = (0..c.len())
        .filter(|&g| c.face(g).vertices.len() == v.len() + 1 && v.iter().all(|x| c.face(g).vertices.contains(x)))
        .collect();
    if supers.is_empty() {
        1
    } else {
        supers.iter().map(|&g| count_up(c, g)).sum()
    }
}

pub fn count_down(c: &SimplicialComplex, f: usize) -> u64 {
    let v = &c.face(f).vertices;
    if v.len() == 1 {
        return 1;
    }
    (0..v.len())
        .map(|skip| {
            let rest: Vec<usize> = v.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
            count_down(c, c.find(&rest).unwrap())
        })
        .sum()
}

/// Two steps of the full walk, each conditioned on its direction: leave
/// dimension k in `dir`, then come back. Rows without a move in `dir` stay put.
pub fn two_step_oracle(cover: &Cover, full: &RatMatrix, k: usize, dir: Direction, view: View) -> (Vec<usize>, RatMatrix) {
    let lift = |i: usize| -> Vec<usize> {
        match view {
            View::Quotient => vec![i],
            View::Cover => vec![2 * i, 2 * i + 1],
        }
    };
    let dim_of = |s: usize| cover.dim(if view == View::Cover { s / 2 } else { s });
    let states: Vec<usize> = cover.nodes_of_dim(k).into_iter().flat_map(lift).collect();
    let total = full.rows();
    let step = |from: usize, target_dim: usize| -> Vec<(usize, Rational)> {
        let moves: Vec<(usize, Rational)> = (0..total)
            .filter(|&j| dim_of(j) == target_dim && !full[(from, j)].is_zero())
            .map(|j| (j, full[(from, j)].clone()))
            .collect();
        let mass: Rational = moves.iter().map(|(_, p)| p.clone()).sum();
        moves.into_iter().map(|(j, p)| (j, p / &mass)).collect()
    };
    let mut m = RatMatrix::zeros(states.len(), states.len());
    let pos = |s: usize| states.iter().position(|&x| x == s).unwrap();
    for (a, &s) in states.iter().enumerate() {
        let out_dim = match dir {
            Direction::Up => k + 1,
            Direction::Down => k.wrapping_sub(1),
        };
        let first = if (dir == Direction::Down && k == 0) || out_dim > cover.max_dim() { Vec::new() } else { step(s, out_dim) };
        if first.is_empty() {
            match view {
                View::Quotient => m[(a, a)] = rat(1, 1),
                // A leaf (up) or root (down) flips orientation with probability one half.
                View::Cover => {
                    m[(a, a)] = rat(1, 2);
                    m[(a, pos(s ^ 1))] = rat(1, 2);
                }
            }
            continue;
        }
        for (mid, p1) in first {
            for (end, p2) in step(mid, k) {
                let b = pos(end);
                m[(a, b)] = &m[(a, b)] + &p1 * &p2;
            }
        }
    }
    (states, m)
}

/// Quotient constant by a plain loop over subsets.
pub fn naive_quotient(aux: &AuxGraph) -> Rational {
    let n = aux.len();
    let total: Rational = aux.measure.iter().sum();
    let mut best: Option<Rational> = None;
    for mask in 1u32..(1 << n) - 1 {
        let inside = |i: usize| mask >> i & 1 == 1;
        let cut: Rational = aux.edges.iter().filter(|e| inside(e.a) != inside(e.b)).map(|e| e.weight.clone()).sum();
        let mu: Rational = (0..n).filter(|&i| inside(i)).map(|i| aux.measure[i].clone()).sum();
        let rest = &total - &mu;
        let beta = cut / mu.min(rest);
        best = Some(best.map_or(beta.clone(), |b: Rational| b.min(beta)));
    }
    best.unwrap()
}

/// Signed constant by a double loop over subsets and orientations.
pub fn naive_signed(aux: &AuxGraph) -> Rational {
    let n = aux.len();
    let mut best: Option<Rational> = None;
    for mask in 1u32..(1 << n) {
        let inside = |i: usize| mask >> i & 1 == 1;
        let cut: Rational = aux.edges.iter().filter(|e| inside(e.a) != inside(e.b)).map(|e| e.weight.clone()).sum();
        let mu: Rational = (0..n).filter(|&i| inside(i)).map(|i| aux.measure[i].clone()).sum();
        // Orientations outside the subset do not matter: run over its submasks.
        let mut o = mask;
        loop {
            let x = |i: usize| if o >> i & 1 == 1 { -1 } else { 1 };
            let neg: Rational = aux
                .edges
                .iter()
                .filter(|e| inside(e.a) && inside(e.b) && e.sign * x(e.a) * x(e.b) < 0)
                .map(|e| e.weight.clone() * int(2))
                .sum();
            let beta = (&cut + neg) / &mu;
            best = Some(best.map_or(beta.clone(), |b: Rational| b.min(beta)));
            if o == 0 {
                break;
            }
            o = (o - 1) & mask;
        }
    }
    best.unwrap()
}

/// Some orientation of the component gives every pair sharing a coface (up)
/// or a face (down) the same incidence sign, by trying all of them.
pub fn coherent_by_enumeration(cover: &Cover, comp: &[usize], dir: Direction) -> bool {
    if cover.is_trivial_component(comp, dir) {
        return false;
    }
    let pairs: Vec<(usize, usize, usize)> = match dir {
        Direction::Up => comp
            .iter()
            .flat_map(|&u| cover.parents(u).iter().map(move |&(v, _)| (v, u)))
            .flat_map(|(v, u)| {
                cover.children(v).iter().filter(move |&&(u2, _)| u2 > u && comp.contains(&u2)).map(move |&(u2, _)| (v, u, u2))
            })
            .collect(),
        Direction::Down => comp
            .iter()
            .flat_map(|&u| cover.children(u).iter().map(move |&(t, _)| (t, u)))
            .flat_map(|(t, u)| {
                cover.parents(t).iter().filter(move |&&(u2, _)| u2 > u && comp.contains(&u2)).map(move |&(u2, _)| (t, u, u2))
            })
            .collect(),
    };
    (0u32..1 << comp.len()).any(|mask| {
        let mut o = Orientation::reference(cover.len());
        for (i, &u) in comp.iter().enumerate() {
            o.flips[u] = mask >> i & 1 == 1;
        }
        pairs.iter().all(|&(w, u, u2)| match dir {
            Direction::Up => cover.oriented_sign(&o, w, u) == cover.oriented_sign(&o, w, u2),
            Direction::Down => cover.oriented_sign(&o, u, w) == cover.oriented_sign(&o, u2, w),
        })
    })
}
