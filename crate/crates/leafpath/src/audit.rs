//! The full invariant suite for a complex or a generic cover.

use num::BigInt;

use crate::cheeger::{build_aux, check_aux_identity, combined_report, down_degree_formula};
use crate::complex::SimplicialComplex;
use crate::cover::{cover_from_complex, ComponentKind, Cover, Orientation};
use crate::error::Result;
use crate::exact::{factorial, int};
use crate::laplacians::verify_hodge_properties;
use crate::operators::{
    build_bundle, bundle_identities, coherent_spectrum_check, conditional_identities, conditional_spectral_checks,
    min_eigenvalue_bound, verify_split, Flavor,
};
use crate::walks::{
    ascending_paths, descending_paths, flip_commutes, is_fixed_point, satisfies_detailed_balance,
    transition_conditional, transition_full, View,
};
use crate::Direction;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: &str) -> Self {
        Check { name: name.to_string(), passed, detail: detail.to_string() }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

fn prefixed(tag: &str, checks: Vec<Check>) -> Vec<Check> {
    checks.into_iter().map(|c| Check { name: format!("{tag}: {}", c.name), ..c }).collect()
}

/// Path counts, walks, stationary measures and operator identities of any cover.
pub fn audit_cover(cover: &Cover) -> Result<Vec<Check>> {
    let pw = cover.path_weights();
    let mut out = Vec::new();

    let mut counts_ok = true;
    for u in 0..cover.len() {
        counts_ok &= BigInt::from(ascending_paths(cover, u).len()) == pw.lp[u];
        counts_ok &= BigInt::from(descending_paths(cover, u).len()) == pw.rp[u];
    }
    out.push(Check::new("LP/RP equal explicit path counts", counts_ok, ""));

    let mut sign_ok = true;
    for &(c, p, s) in cover.edges() {
        for fp in [false, true] {
            for fc in [false, true] {
                let v = crate::cover::CoverNode { quotient_index: p, flipped: fp };
                let u = crate::cover::CoverNode { quotient_index: c, flipped: fc };
                let expected = if fp == fc { s } else { -s };
                sign_ok &= cover.cover_sign(v, u) == Some(expected);
                sign_ok &= cover.cover_sign(v.neg(), u) == cover.cover_sign(v, u.neg());
            }
        }
    }
    out.push(Check::new("cover signs compatible with the involution", sign_ok, ""));

    let d = pw.d_all();
    for view in [View::Quotient, View::Cover] {
        let t = transition_full(cover, &pw, view);
        let pi: Vec<_> = match view {
            View::Quotient => d.clone(),
            View::Cover => d.iter().flat_map(|x| [x.clone(), x.clone()]).collect(),
        };
        let tag = match view {
            View::Quotient => "quotient walk",
            View::Cover => "cover walk",
        };
        out.push(Check::new(&format!("{tag}: stochastic"), t.is_stochastic(), ""));
        out.push(Check::new(&format!("{tag}: LP·RP is stationary"), is_fixed_point(&t, &pi), ""));
        if view == View::Quotient {
            out.push(Check::new(&format!("{tag}: detailed balance"), satisfies_detailed_balance(&t, &pi), ""));
        } else {
            out.push(Check::new(&format!("{tag}: commutes with the flip"), flip_commutes(cover, &t), ""));
        }
    }

    let o = Orientation::reference(cover.len());
    let bundle = build_bundle(cover, &pw, &o)?;
    out.extend(bundle_identities(&bundle));
    out.extend(verify_split(&bundle)?);
    let (bound, lmin, ok) = min_eigenvalue_bound(cover, &pw)?;
    out.push(Check::new(
        "λ_min(A_quotient) ≤ -1 + min 2/(E[len]+1)",
        ok,
        &format!("λ_min = {lmin}, bound = {}", crate::exact::fmt_rational(&bound)),
    ));

    if cover.is_strong() {
        for k in 0..=cover.max_dim() {
            if cover.nodes_of_dim(k).is_empty() {
                continue;
            }
            for dir in [Direction::Up, Direction::Down] {
                for view in [View::Quotient, View::Cover] {
                    let t = transition_conditional(cover, &pw, k, dir, view)?;
                    let w: Vec<_> = t.index.iter().map(|&i| d[if view == View::Cover { i / 2 } else { i }].clone()).collect();
                    out.push(Check::new(
                        &format!("k={k} {} {:?}: stochastic, reversible w.r.t. LP·RP", dir.name(), view),
                        t.is_stochastic() && is_fixed_point(&t, &w) && satisfies_detailed_balance(&t, &w),
                        "",
                    ));
                }
            }
            out.extend(conditional_identities(cover, &pw, &bundle, k)?);
            out.extend(conditional_spectral_checks(cover, &pw, &o, k)?);
            for (kind, dir) in [(ComponentKind::QuotientUp, Direction::Up), (ComponentKind::QuotientDown, Direction::Down)] {
                for comp in cover.components(kind, Some(k))?.members {
                    if cover.is_trivial_component(&comp, dir) {
                        continue;
                    }
                    let tag = format!("k={k} {} component {}", dir.name(), cover.name(comp[0]));
                    out.extend(prefixed(&tag, coherent_spectrum_check(cover, &pw, k, &comp, dir)?));
                }
            }
            if k >= 1 {
                let ok = cover.component_correspondence(k).is_ok();
                out.push(Check::new(&format!("k={k}: down-components match up-components"), ok, ""));
            }
        }
    }
    Ok(out)
}

/// Everything in [`audit_cover`] plus the simplicial checks.
pub fn audit_complex(complex: &SimplicialComplex) -> Result<Vec<Check>> {
    let cover = cover_from_complex(complex);
    let pw = cover.path_weights();
    let mut out = audit_cover(&cover)?;

    let mut rp_ok = true;
    let mut lp_ok = true;
    for (i, f) in complex.faces().iter().enumerate() {
        rp_ok &= pw.rp[i] == factorial(f.dim() + 1);
        // LP(σ) = Σ over maximal faces τ ⊇ σ of (dim τ - dim σ)!
        let via_leaves: BigInt = complex
            .faces()
            .iter()
            .enumerate()
            .filter(|&(t, g)| cover.is_leaf(t) && f.vertices.iter().all(|v| g.vertices.contains(v)))
            .map(|(_, g)| factorial(g.dim() - f.dim()))
            .sum();
        lp_ok &= via_leaves == pw.lp[i];
    }
    out.push(Check::new("RP(σ) = (dim σ + 1)!", rp_ok, ""));
    out.push(Check::new("LP(σ) = Σ over maximal τ ⊇ σ of (dim τ - dim σ)!", lp_ok, ""));

    out.extend(verify_hodge_properties(complex, &cover, &pw)?);

    for k in 0..=complex.dimension() {
        for comp in cover.components(ComponentKind::QuotientUp, Some(k))?.members {
            if cover.is_trivial_component(&comp, Direction::Up) {
                continue;
            }
            let aux = build_aux(&cover, &pw, &comp, Direction::Up)?;
            let tag = format!("k={k} up aux {}", cover.name(comp[0]));
            out.push(Check::new(&format!("{tag}: degree ratio = k+1"), aux.degree_ratio() == int(k as i64 + 1), ""));
            let all_equal = aux.degrees().iter().zip(&aux.measure).all(|(d, m)| d / m == int(k as i64 + 1));
            out.push(Check::new(&format!("{tag}: Σω/μ = k+1 at every node"), all_equal, ""));
            for fl in [Flavor::Quotient, Flavor::Signed] {
                out.push(Check::new(
                    &format!("{tag}: {} Laplacian = (k+2)(I ∓ A)", fl.name()),
                    check_aux_identity(&cover, &pw, &aux, fl)?,
                    "",
                ));
            }
        }
        for comp in cover.components(ComponentKind::QuotientDown, Some(k))?.members {
            if comp.len() < 2 {
                continue;
            }
            let aux = build_aux(&cover, &pw, &comp, Direction::Down)?;
            let tag = format!("k={k} down aux {}", cover.name(comp[0]));
            let d = aux.degree_ratio();
            out.push(Check::new(
                &format!("{tag}: degree ratio = k+1 - min LP Σ 1/LP"),
                d == down_degree_formula(&cover, &pw, &comp) && d <= int(k as i64 + 1),
                "",
            ));
            for fl in [Flavor::Quotient, Flavor::Signed] {
                out.push(Check::new(
                    &format!("{tag}: {} Laplacian = (k+1)(I ∓ A)", fl.name()),
                    check_aux_identity(&cover, &pw, &aux, fl)?,
                    "",
                ));
            }
        }
    }

    for k in 1..=complex.dimension() {
        for r in combined_report(&cover, &pw, k)? {
            let tag = format!("k={k} pair {}", cover.name(r.up_component[0]));
            out.push(Check::new(&format!("{tag}: quotient sandwich"), r.quotient.sandwich_ok, ""));
            out.push(Check::new(&format!("{tag}: signed sandwich"), r.signed.sandwich_ok, ""));
            let zero_up = r.signed.h_up == num::Zero::zero();
            out.push(Check::new(&format!("{tag}: signed constant zero ⇔ coherent"), zero_up == r.coherent, ""));
            let q_pos = r.quotient.h_up > num::Zero::zero()
                && r.quotient.h_down.as_ref().is_none_or(|h| *h > num::Zero::zero());
            out.push(Check::new(&format!("{tag}: quotient constants positive"), q_pos, ""));
            if let Some(rate) = &r.rate {
                out.push(Check::new(&format!("{tag}: convergence rate within bounds"), rate.ok, ""));
            }
        }
    }
    for k in 0..=complex.dimension() {
        for comp in cover.components(ComponentKind::QuotientDown, Some(k))?.members {
            if comp.len() < 2 {
                continue;
            }
            let aux = build_aux(&cover, &pw, &comp, Direction::Down)?;
            let h = crate::cheeger::cheeger_signed(&aux)?;
            let coherent = cover.detect_coherent(&comp, Direction::Down).is_some();
            out.push(Check::new(
                &format!("k={k} down component {}: signed constant zero ⇔ coherent", cover.name(comp[0])),
                (h.h == num::Zero::zero()) == coherent,
                "",
            ));
        }
    }
    Ok(out)
}
