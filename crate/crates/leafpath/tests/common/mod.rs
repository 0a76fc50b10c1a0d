#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use leafpath::complex::{parse_complex, SimplicialComplex};
use leafpath::cover::{cover_from_complex, parse_cover_spec, Cover, PathWeights};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn read(name: &str) -> String {
    fs::read_to_string(fixture_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn complex(name: &str) -> SimplicialComplex {
    parse_complex(&read(name)).unwrap()
}

pub fn complex_cover(name: &str) -> (SimplicialComplex, Cover, PathWeights) {
    let c = complex(name);
    let cover = cover_from_complex(&c);
    let pw = cover.path_weights();
    (c, cover, pw)
}

pub fn spec_cover(name: &str) -> (Cover, PathWeights) {
    let cover = parse_cover_spec(&read(name)).unwrap();
    let pw = cover.path_weights();
    (cover, pw)
}

pub const COMPLEXES: &[&str] = &[
    "tetrahedron.cx",
    "mixed.cx",
    "hollow_triangle.cx",
    "even_cycle.cx",
    "odd_cycle.cx",
    "path3.cx",
    "single_edge.cx",
    "single_vertex.cx",
    "unpartitionable.cx",
    "split_strands.cx",
];

pub const COVERS: &[&str] = &["small_strong.cover", "skip_level.cover", "isolated_pair.cover"];

/// Every cover under test: complexes first, then the hand-written specs.
pub fn all_covers() -> Vec<(String, Cover, PathWeights)> {
    let mut out: Vec<_> = COMPLEXES
        .iter()
        .map(|n| {
            let (_, c, p) = complex_cover(n);
            (n.to_string(), c, p)
        })
        .collect();
    for n in COVERS {
        let (c, p) = spec_cover(n);
        out.push((n.to_string(), c, p));
    }
    out
}

pub fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!((a - b).abs() <= tol, "{what}: {a} vs {b}");
}
