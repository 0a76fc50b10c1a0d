mod common;
mod oracles;

use common::*;
use oracles::{naive_quotient, naive_signed};
use leafpath::cheeger::{
    aux_laplacian, build_aux, check_aux_identity, cheeger_quotient, cheeger_signed, combined_report,
    down_degree_formula, AuxEdge, AuxGraph,
};
use leafpath::cover::ComponentKind;
use leafpath::exact::{int, rat, Rational};
use leafpath::operators::Flavor;
use leafpath::{Direction, Error};
use num::Zero;

fn all_aux_graphs() -> Vec<(String, AuxGraph)> {
    let mut out = Vec::new();
    for name in COMPLEXES {
        let (c, cover, pw) = complex_cover(name);
        for k in 0..=c.dimension() {
            for comp in cover.components(ComponentKind::QuotientUp, Some(k)).unwrap().members {
                if !cover.is_trivial_component(&comp, Direction::Up) {
                    out.push((format!("{name} up k={k}"), build_aux(&cover, &pw, &comp, Direction::Up).unwrap()));
                }
            }
            for comp in cover.components(ComponentKind::QuotientDown, Some(k)).unwrap().members {
                if comp.len() >= 2 {
                    out.push((format!("{name} down k={k}"), build_aux(&cover, &pw, &comp, Direction::Down).unwrap()));
                }
            }
        }
    }
    out
}

#[test]
fn brute_force_matches_naive_loops() {
    let mut compared = 0;
    for (tag, aux) in all_aux_graphs() {
        if aux.len() > 12 {
            continue;
        }
        compared += 1;
        let q = cheeger_quotient(&aux).unwrap();
        assert_eq!(q.h, naive_quotient(&aux), "{tag}");
        let s = cheeger_signed(&aux).unwrap();
        assert_eq!(s.h, naive_signed(&aux), "{tag}");
    }
    assert!(compared >= 15, "only {compared} graphs compared");
}

#[test]
fn witnesses_attain_the_constants() {
    for (tag, aux) in all_aux_graphs() {
        if aux.len() > 16 {
            continue;
        }
        let q = cheeger_quotient(&aux).unwrap();
        let inside = |i: usize| q.subset >> i & 1 == 1;
        let cut: Rational = aux.edges.iter().filter(|e| inside(e.a) != inside(e.b)).map(|e| e.weight.clone()).sum();
        let mu: Rational = (0..aux.len()).filter(|&i| inside(i)).map(|i| aux.measure[i].clone()).sum();
        let total: Rational = aux.measure.iter().sum();
        assert_eq!(cut / mu.clone().min(total - mu), q.h, "{tag}");

        let s = cheeger_signed(&aux).unwrap();
        let inside = |i: usize| s.subset >> i & 1 == 1;
        let x = |i: usize| if s.flips >> i & 1 == 1 { -1 } else { 1 };
        let cut: Rational = aux.edges.iter().filter(|e| inside(e.a) != inside(e.b)).map(|e| e.weight.clone()).sum();
        let neg: Rational = aux
            .edges
            .iter()
            .filter(|e| inside(e.a) && inside(e.b) && e.sign * x(e.a) * x(e.b) < 0)
            .map(|e| e.weight.clone() * int(2))
            .sum();
        let mu: Rational = (0..aux.len()).filter(|&i| inside(i)).map(|i| aux.measure[i].clone()).sum();
        assert_eq!((cut + neg) / mu, s.h, "{tag}");
    }
}

#[test]
fn tetrahedron_tables() {
    let (_, cover, pw) = complex_cover("tetrahedron.cx");
    let k1 = combined_report(&cover, &pw, 1).unwrap();
    let k2 = combined_report(&cover, &pw, 2).unwrap();
    assert_eq!((k1.len(), k2.len()), (1, 1));
    let (a, b) = (&k1[0], &k2[0]);

    assert_eq!(a.d_down, Some(rat(4, 3)));
    assert_eq!(b.d_down, Some(rat(3, 2)));

    // quotient: h_up, h_down, lower bounds (up, down), upper bounds (up, down)
    let q = |r: &leafpath::cheeger::CheegerReport| {
        let f = &r.quotient;
        (f.h_up.clone(), f.h_down.clone().unwrap(), f.lower_up.clone(), f.lower_down.clone().unwrap(), f.upper_up.clone(), f.upper_down.clone().unwrap())
    };
    let s = |r: &leafpath::cheeger::CheegerReport| {
        let f = &r.signed;
        (f.h_up.clone(), f.h_down.clone().unwrap(), f.lower_up.clone(), f.lower_down.clone().unwrap(), f.upper_up.clone(), f.upper_down.clone().unwrap())
    };
    assert_eq!(q(a), (rat(2, 3), rat(2, 3), rat(1, 9), rat(1, 12), rat(2, 3), rat(2, 3)));
    assert_eq!(q(b), (rat(1, 1), rat(1, 1), rat(1, 12), rat(1, 9), rat(2, 3), rat(2, 3)));
    assert_eq!(s(a), (rat(1, 3), rat(4, 9), rat(1, 36), rat(1, 27), rat(1, 3), rat(4, 9)));
    assert_eq!(s(b), (rat(2, 3), rat(1, 2), rat(1, 27), rat(1, 36), rat(4, 9), rat(1, 3)));

    for r in [a, b] {
        assert_close(r.quotient.gap_up, 2.0 / 3.0, 1e-9, "quotient gap");
        assert_close(r.quotient.gap_down, 2.0 / 3.0, 1e-9, "quotient gap");
        assert_close(r.signed.gap_up, 1.0 / 3.0, 1e-9, "signed gap");
        assert_close(r.signed.gap_down, 1.0 / 3.0, 1e-9, "signed gap");
        assert!(r.quotient.sandwich_ok && r.signed.sandwich_ok);
    }
    assert_eq!(a.quotient.lower, rat(1, 9));
    assert_eq!(a.signed.lower, rat(1, 27));
    assert_eq!(a.signed.upper, rat(1, 3));
    assert_eq!(b.signed.lower, rat(1, 27));
    assert_eq!(b.signed.upper, rat(1, 3));

    let rate = a.rate.as_ref().unwrap();
    assert_eq!((rate.lower.clone(), rate.upper.clone()), (rat(1, 3), rat(26, 27)));
    assert_close(rate.rate, 2.0 / 3.0, 1e-9, "rate");
}

#[test]
fn tetrahedron_auxiliary_graphs() {
    let (_, cover, pw) = complex_cover("tetrahedron.cx");
    let edges = cover.nodes_of_dim(1);
    let up = build_aux(&cover, &pw, &edges, Direction::Up).unwrap();
    assert_eq!(up.len(), 6);
    assert_eq!(up.edges.len(), 12);
    assert!(up.edges.iter().all(|e| e.weight == int(1)));
    assert!(up.measure.iter().all(|m| *m == int(2)));
    assert_eq!(up.degree_ratio(), int(2));
    let down = build_aux(&cover, &pw, &edges, Direction::Down).unwrap();
    assert_eq!(down.degree_ratio(), rat(4, 3));
    assert_eq!(down_degree_formula(&cover, &pw, &edges), rat(4, 3));

    for aux in [&up, &down] {
        for fl in [Flavor::Quotient, Flavor::Signed] {
            assert!(check_aux_identity(&cover, &pw, aux, fl).unwrap());
        }
    }
    // μ^{1/2} spans the kernel of the quotient Laplacian: with frame (1/μ, μ)
    // that is M · μ = 0 for the rational part.
    let l = aux_laplacian(&up, Flavor::Quotient);
    assert!(l.m.mul_vec(&up.measure).iter().all(Rational::is_zero));
}

#[test]
fn aux_identities_and_degrees_on_every_fixture() {
    for (tag, aux) in all_aux_graphs() {
        let name = tag.split(' ').next().unwrap();
        let (_, cover, pw) = complex_cover(name);
        for fl in [Flavor::Quotient, Flavor::Signed] {
            assert!(check_aux_identity(&cover, &pw, &aux, fl).unwrap(), "{tag} {fl:?}");
        }
        match aux.direction {
            Direction::Up => assert_eq!(aux.degree_ratio(), int(aux.k as i64 + 1), "{tag}"),
            Direction::Down => {
                assert_eq!(aux.degree_ratio(), down_degree_formula(&cover, &pw, &aux.nodes), "{tag}");
                assert!(aux.degree_ratio() <= int(aux.k as i64 + 1));
            }
        }
    }
}

#[test]
fn signed_constant_vanishes_exactly_on_coherent_components() {
    for (tag, aux) in all_aux_graphs() {
        if aux.len() > 16 {
            continue;
        }
        let name = tag.split(' ').next().unwrap();
        let (_, cover, _) = complex_cover(name);
        let coherent = cover.detect_coherent(&aux.nodes, aux.direction).is_some();
        let s = cheeger_signed(&aux).unwrap();
        assert_eq!(s.h.is_zero(), coherent, "{tag}");
        assert!(cheeger_quotient(&aux).unwrap().h > Rational::zero(), "{tag}");
    }
    let (_, cover, pw) = complex_cover("even_cycle.cx");
    let edges = cover.nodes_of_dim(1);
    let aux = build_aux(&cover, &pw, &edges, Direction::Down).unwrap();
    assert_eq!(cheeger_signed(&aux).unwrap().h, int(0));
}

#[test]
fn sandwich_on_every_fixture() {
    for name in COMPLEXES {
        let (c, cover, pw) = complex_cover(name);
        for k in 1..=c.dimension() {
            for r in combined_report(&cover, &pw, k).unwrap() {
                assert!(r.quotient.sandwich_ok, "{name} k={k} quotient {:?}", r.quotient);
                assert!(r.signed.sandwich_ok, "{name} k={k} signed {:?}", r.signed);
                if let Some(rate) = &r.rate {
                    assert!(rate.ok, "{name} k={k} rate {rate:?}");
                }
            }
        }
    }
}

#[test]
fn single_face_down_component_degenerates() {
    let (_, cover, pw) = complex_cover("single_edge.cx");
    let r = combined_report(&cover, &pw, 1).unwrap();
    assert_eq!(r.len(), 1);
    let r = &r[0];
    assert!(r.d_down.is_none() && r.quotient.h_down.is_none());
    assert_eq!(r.signed.h_up, int(0));
    assert_eq!(r.signed.lower, int(0));
    assert_eq!(r.signed.upper, int(0));
    assert_close(r.signed.gap_up, 0.0, 1e-9, "signed gap");
    assert!(r.coherent && r.rate.is_none());
}

#[test]
fn brute_force_guards() {
    let big = |n: usize| AuxGraph {
        direction: Direction::Up,
        k: 0,
        nodes: (0..n).collect(),
        edges: (1..n).map(|i| AuxEdge { a: i - 1, b: i, sign: 1, weight: int(1) }).collect(),
        measure: vec![int(2); n],
    };
    assert!(matches!(cheeger_quotient(&big(25)), Err(Error::Guard(_))));
    assert!(matches!(cheeger_signed(&big(21)), Err(Error::Guard(_))));
    assert!(matches!(cheeger_quotient(&big(1)), Err(Error::Precondition(_))));
    // A path graph at the cap still runs: cutting one end edge gives 1/2.
    assert_eq!(cheeger_quotient(&big(16)).unwrap().h, rat(1, 16));
}

#[test]
fn aux_preconditions() {
    let (_, cover, pw) = complex_cover("tetrahedron.cx");
    let top = cover.nodes_of_dim(3);
    assert!(build_aux(&cover, &pw, &top, Direction::Up).is_err());
    assert!(build_aux(&cover, &pw, &top, Direction::Down).is_err());
}
