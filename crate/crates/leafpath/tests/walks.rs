mod common;
mod oracles;

use common::*;
use oracles::two_step_oracle;
use leafpath::cover::{ComponentKind, CoverNode};
use leafpath::exact::{rat, to_f64, Rational};
use leafpath::walks::{
    is_fixed_point, rng_from_seed, satisfies_detailed_balance, simulate, stationary, total_variation,
    transition_conditional, transition_full, PathSampler, View,
};
use leafpath::Direction;
use num::Zero;

#[test]
fn conditional_walks_match_two_step_conditioning() {
    for (name, cover, pw) in all_covers() {
        if !cover.is_strong() {
            continue;
        }
        for view in [View::Quotient, View::Cover] {
            let full = transition_full(&cover, &pw, view).p;
            for k in 0..=cover.max_dim() {
                for dir in [Direction::Up, Direction::Down] {
                    let t = transition_conditional(&cover, &pw, k, dir, view).unwrap();
                    let (states, oracle) = two_step_oracle(&cover, &full, k, dir, view);
                    assert_eq!(t.index, states, "{name}");
                    assert_eq!(t.p, oracle, "{name} k={k} {dir:?} {view:?}");
                }
            }
        }
    }
}

#[test]
fn tetrahedron_vertex_up_walk_values() {
    let (_, cover, pw) = complex_cover("tetrahedron.cx");
    let t = transition_conditional(&cover, &pw, 0, Direction::Up, View::Quotient).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let expected = if i == j { rat(1, 2) } else { rat(1, 6) };
            assert_eq!(t.p[(i, j)], expected);
        }
    }
}

#[test]
fn tetrahedron_stationary_distribution() {
    let (c, cover, pw) = complex_cover("tetrahedron.cx");
    let comp: Vec<usize> = (0..c.len()).collect();
    let pi = stationary(&pw, &comp, View::Quotient);
    assert_eq!(pi.normalizer, rat(96, 1));
    for (f, w) in comp.iter().zip(&pi.weights) {
        let expected = match c.face(*f).dim() {
            0 => rat(6, 96),
            1 => rat(4, 96),
            2 => rat(6, 96),
            _ => rat(24, 96),
        };
        assert_eq!(*w, expected);
    }
    let t = transition_full(&cover, &pw, View::Quotient);
    assert!(is_fixed_point(&t, &pi.weights));
    assert!(satisfies_detailed_balance(&t, &pi.weights));
}

#[test]
fn stationary_on_every_quotient_component() {
    for (name, cover, pw) in all_covers() {
        for view in [View::Quotient, View::Cover] {
            let t = transition_full(&cover, &pw, view);
            assert!(t.is_stochastic(), "{name}");
            for comp in cover.components(ComponentKind::Quotient, None).unwrap().members {
                let pi = stationary(&pw, &comp, view);
                let v = leafpath::walks::aligned(&pi, &t);
                assert!(is_fixed_point(&t, &v), "{name} {view:?}");
                assert_eq!(pi.weights.iter().sum::<Rational>(), rat(1, 1));
                if view == View::Quotient {
                    assert!(satisfies_detailed_balance(&t, &v), "{name}");
                }
            }
        }
    }
}

#[test]
fn cover_walk_is_not_reversible_on_the_tetrahedron() {
    let (_, cover, pw) = complex_cover("tetrahedron.cx");
    let t = transition_full(&cover, &pw, View::Cover);
    let pi: Vec<Rational> = (0..cover.len()).flat_map(|u| {
        let d = Rational::from_integer(pw.d(u));
        [d.clone(), d]
    }).collect();
    assert!(is_fixed_point(&t, &pi));
    assert!(!satisfies_detailed_balance(&t, &pi));
}

#[test]
fn monte_carlo_total_variation() {
    let (c, cover, pw) = complex_cover("tetrahedron.cx");
    let comp: Vec<usize> = (0..c.len()).collect();
    for view in [View::Quotient, View::Cover] {
        let pi = stationary(&pw, &comp, view);
        let pi_f: Vec<f64> = pi.weights.iter().map(to_f64).collect();
        let a = simulate(&cover, &pw, view, 0, 1_000_000, 7).unwrap();
        let b = simulate(&cover, &pw, view, 0, 1_000_000, 7).unwrap();
        assert_eq!(a.states, b.states);
        let tv = total_variation(&a.empirical, &pi_f);
        assert!(tv < 0.02, "{view:?}: TV = {tv}");
        let other = simulate(&cover, &pw, view, 0, 1000, 8).unwrap();
        assert_ne!(a.states[..1001], other.states[..]);
    }
}

#[test]
fn path_sampling_matches_transition_rows() {
    // Moving one step along a uniformly drawn root-to-leaf path through u
    // reproduces the cover transition row of u, within three standard errors.
    let (_, cover, pw) = complex_cover("mixed.cx");
    let t = transition_full(&cover, &pw, View::Cover);
    let mut rng = rng_from_seed(11);
    let samples = 40_000usize;
    for start in [0usize, 5, 2 * 8 + 1, 2 * 20, 2 * 25 + 1] {
        let sampler = PathSampler::new(&cover, start);
        let mut counts = vec![0usize; 2 * cover.len()];
        for _ in 0..samples {
            counts[sampler.step(&cover, &mut rng)] += 1;
        }
        for (j, &n) in counts.iter().enumerate() {
            let p = to_f64(&t.p[(start, j)]);
            let freq = n as f64 / samples as f64;
            let se = (p * (1.0 - p) / samples as f64).sqrt();
            assert!((freq - p).abs() <= 3.0 * se + 1e-12, "start {start} -> {j}: {freq} vs {p}");
        }
    }
}

#[test]
fn walk_moves_respect_signs() {
    let (_, cover, pw) = complex_cover("mixed.cx");
    let t = transition_full(&cover, &pw, View::Cover);
    for i in 0..t.p.rows() {
        for j in 0..t.p.cols() {
            if t.p[(i, j)].is_zero() || i / 2 == j / 2 {
                continue;
            }
            let (u, w) = (CoverNode::from_index(i), CoverNode::from_index(j));
            if cover.dim(w.quotient_index) > cover.dim(u.quotient_index) {
                assert_eq!(cover.cover_sign(w, u), Some(1));
            } else {
                assert_eq!(cover.cover_sign(u, w), Some(-1));
            }
        }
    }
}
