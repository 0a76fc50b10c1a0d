mod common;
mod oracles;

use common::*;
use oracles::{count_down, count_up};
use leafpath::cover::ComponentKind;
use leafpath::walks::{expected_path_length, path_count};
use num::{BigInt, ToPrimitive};

#[test]
fn lp_rp_match_path_enumeration_on_every_complex() {
    for name in COMPLEXES {
        let (c, _, pw) = complex_cover(name);
        for f in 0..c.len() {
            assert_eq!(pw.lp[f].to_u64().unwrap(), count_up(&c, f), "{name} LP {}", c.face_name(f));
            assert_eq!(pw.rp[f].to_u64().unwrap(), count_down(&c, f), "{name} RP {}", c.face_name(f));
        }
    }
}

#[test]
fn mixed_complex_leaf_path_table() {
    let (c, _, pw) = complex_cover("mixed.cx");
    assert_eq!(c.len(), 26);
    let expected: &[(&[&str], i64)] = &[
        (&["x3", "x4", "x5", "x6"], 1),
        (&["x0", "x1", "x2"], 1),
        (&["x1", "x2", "x3"], 1),
        (&["x3", "x4", "x5"], 1),
        (&["x3", "x4", "x6"], 1),
        (&["x3", "x5", "x6"], 1),
        (&["x4", "x5", "x6"], 1),
        (&["x0", "x1"], 1),
        (&["x0", "x2"], 1),
        (&["x1", "x2"], 2),
        (&["x1", "x3"], 1),
        (&["x2", "x3"], 1),
        (&["x2", "x5"], 1),
        (&["x3", "x4"], 2),
        (&["x3", "x5"], 2),
        (&["x3", "x6"], 2),
        (&["x4", "x5"], 2),
        (&["x4", "x6"], 2),
        (&["x5", "x6"], 2),
        (&["x0"], 2),
        (&["x1"], 4),
        (&["x2"], 5),
        (&["x3"], 8),
        (&["x4"], 6),
        (&["x5"], 7),
        (&["x6"], 6),
    ];
    assert_eq!(expected.len(), 26);
    for (labels, lp) in expected {
        let f = c.find_labels(labels).unwrap();
        assert_eq!(pw.lp[f], BigInt::from(*lp), "{labels:?}");
    }
}

#[test]
fn root_paths_are_factorials_on_complexes() {
    for name in COMPLEXES {
        let (c, _, pw) = complex_cover(name);
        for f in 0..c.len() {
            let k = c.face(f).dim();
            let fact: u64 = (1..=(k as u64 + 1)).product();
            assert_eq!(pw.rp[f].to_u64().unwrap(), fact);
        }
    }
}

#[test]
fn hand_written_cover_weights() {
    let (c, pw) = spec_cover("small_strong.cover");
    let lp: Vec<u64> = pw.lp.iter().map(|x| x.to_u64().unwrap()).collect();
    let rp: Vec<u64> = pw.rp.iter().map(|x| x.to_u64().unwrap()).collect();
    // a b c p q r
    assert_eq!(lp, vec![1, 2, 1, 1, 1, 1]);
    assert_eq!(rp, vec![1, 1, 1, 2, 2, 4]);
    assert!(c.is_strong());

    let (c, pw) = spec_cover("skip_level.cover");
    let lp: Vec<u64> = pw.lp.iter().map(|x| x.to_u64().unwrap()).collect();
    let rp: Vec<u64> = pw.rp.iter().map(|x| x.to_u64().unwrap()).collect();
    // a b p r
    assert_eq!(lp, vec![1, 2, 1, 1]);
    assert_eq!(rp, vec![1, 1, 2, 3]);
    assert!(!c.is_strong());
}

#[test]
fn root_to_leaf_paths_through_a_node() {
    // LP·RP counts the root-to-leaf paths through u; summing over roots counts every path once.
    let (c, cover, pw) = complex_cover("tetrahedron.cx");
    let comp: Vec<usize> = (0..c.len()).collect();
    assert_eq!(path_count(&cover, &pw, &comp), BigInt::from(24));
    // Each of the 24 paths has 4 nodes, so Σ LP·RP = 96 and the mean length is 3.
    let total: BigInt = (0..c.len()).map(|u| pw.d(u)).sum();
    assert_eq!(total, BigInt::from(96));
    assert_eq!(expected_path_length(&cover, &pw, &comp), leafpath::exact::int(3));
}

#[test]
fn component_counts() {
    let (_, cover, _) = complex_cover("split_strands.cx");
    let up = cover.components(ComponentKind::QuotientUp, Some(1)).unwrap();
    assert_eq!(up.members.len(), 4);
    let (_, cover, _) = complex_cover("mixed.cx");
    assert_eq!(cover.components(ComponentKind::Quotient, None).unwrap().members.len(), 1);
    let (cover, _) = spec_cover("isolated_pair.cover");
    assert_eq!(cover.components(ComponentKind::Quotient, None).unwrap().members.len(), 2);
}
