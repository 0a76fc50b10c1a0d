use leafpath::audit::audit_complex;
use leafpath::cheeger::combined_report;
use leafpath::complex::SimplicialComplex;
use leafpath::cover::{cover_from_complex, ComponentKind, Orientation};
use leafpath::eigen::{multisets_match, symmetric_eigen};
use leafpath::exact::Rational;
use leafpath::laplacians::hodge;
use leafpath::operators::build_bundle;
use leafpath::surd::charpoly_product;
use leafpath::walks::{is_fixed_point, stationary, transition_full, View};
use num::{One, ToPrimitive};
use proptest::prelude::*;

/// Random complexes on at most five vertices, given by their maximal-face bitmasks.
fn complexes() -> impl Strategy<Value = SimplicialComplex> {
    prop::collection::vec(1u32..32, 1..5).prop_map(|masks| {
        let faces: Vec<Vec<String>> = masks
            .iter()
            .map(|m| (0..5).filter(|i| m >> i & 1 == 1).map(|i| format!("v{i}")).collect())
            .collect();
        SimplicialComplex::from_maximal_faces(&faces).unwrap()
    })
}

fn count_up(c: &SimplicialComplex, f: usize) -> u64 {
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

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boundary_squares_to_zero(c in complexes()) {
        for k in 2..=c.dimension() {
            let d = c.boundary_matrix(k - 1).unwrap().mul(&c.boundary_matrix(k).unwrap());
            prop_assert!(d.is_zero());
        }
    }

    #[test]
    fn leaf_paths_count_ascending_chains(c in complexes()) {
        let pw = cover_from_complex(&c).path_weights();
        for f in 0..c.len() {
            prop_assert_eq!(pw.lp[f].to_u64().unwrap(), count_up(&c, f));
        }
    }

    #[test]
    fn walks_are_stochastic_with_known_stationary_law(c in complexes()) {
        let cover = cover_from_complex(&c);
        let pw = cover.path_weights();
        for view in [View::Quotient, View::Cover] {
            let t = transition_full(&cover, &pw, view);
            prop_assert!(t.is_stochastic());
            for comp in cover.components(ComponentKind::Quotient, None).unwrap().members {
                let pi = stationary(&pw, &comp, view);
                prop_assert_eq!(pi.weights.iter().sum::<Rational>(), Rational::one());
                prop_assert!(is_fixed_point(&t, &leafpath::walks::aligned(&pi, &t)));
            }
        }
    }

    #[test]
    fn cover_spectrum_is_quotient_plus_signed(c in complexes(), flips in prop::collection::vec(any::<bool>(), 31)) {
        let cover = cover_from_complex(&c);
        let pw = cover.path_weights();
        let o = Orientation { flips: flips[..cover.len()].to_vec() };
        let b = build_bundle(&cover, &pw, &o).unwrap();
        let split = charpoly_product(&b.a_quotient, &b.a_signed).unwrap();
        prop_assert_eq!(split, b.a_cover.charpoly().unwrap());
        let mut expected = symmetric_eigen(&b.a_quotient.to_f64()).unwrap().values;
        expected.extend(std::iter::repeat_n(0.0, cover.len()));
        expected.sort_by(f64::total_cmp);
        let sym = symmetric_eigen(&b.a_sym.to_f64()).unwrap().values;
        prop_assert!(multisets_match(&sym, &expected, 1e-8));
    }

    #[test]
    fn normalized_laplacians_are_bounded(c in complexes()) {
        let pw = cover_from_complex(&c).path_weights();
        for k in 0..=c.dimension() {
            let l = hodge(&c, &pw, k, true).unwrap();
            let s = symmetric_eigen(&l.total().unwrap().to_f64()).unwrap();
            prop_assert!(s.min().unwrap() >= -1e-10);
            let up = symmetric_eigen(&l.up.to_f64()).unwrap();
            prop_assert!(up.max().unwrap() <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn cheeger_sandwiches_hold(c in complexes()) {
        let cover = cover_from_complex(&c);
        let pw = cover.path_weights();
        for k in 1..=c.dimension() {
            for r in combined_report(&cover, &pw, k).unwrap() {
                prop_assert!(r.quotient.sandwich_ok && r.signed.sandwich_ok);
                if let Some(rate) = r.rate {
                    prop_assert!(rate.ok);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn full_audit_passes(c in complexes()) {
        let checks = audit_complex(&c).unwrap();
        let bad: Vec<_> = checks.iter().filter(|x| !x.passed).collect();
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }
}
