mod common;

use std::collections::HashSet;

use common::partition;
use qhs_core::census::{
    all_relations, enumerate_presentations, enumerate_qhs, for_each_presentation, pure_bound_check,
};
use qhs_core::model::{is_pure, validate_qhs, IdealMode, Presentation, Relation};
use qhs_core::{
    build_regular_qhs, hilbert_profile, regularity_degree, singular_monomials, theorem1_certificate,
    CertificateKind, EngineLimits, Regularity,
};

fn lim() -> EngineLimits {
    EngineLimits::default()
}

fn census_qhs() -> Vec<Presentation> {
    (1..=4).flat_map(|n| enumerate_qhs(n).unwrap()).collect()
}

fn pure_positions(w: &[u8], p: &Presentation) -> usize {
    w.iter().filter(|&&l| is_pure(l, p).unwrap()).count()
}

#[test]
fn singular_sets_are_factor_closed() {
    for p in census_qhs() {
        let mut prev: HashSet<Vec<u8>> = HashSet::new();
        for m in 1..=6 {
            let oracle = partition(&p, IdealMode::WithoutTop, m).singular();
            let engine: Vec<Vec<u8>> = singular_monomials(&p, m, &lim())
                .unwrap()
                .iter()
                .map(|w| w.letters().to_vec())
                .collect();
            assert_eq!(engine, oracle, "{} degree {m}", p.to_json());
            if m > 1 {
                for w in &oracle {
                    assert!(prev.contains(&w[..m - 1]), "{} prefix of {w:?}", p.to_json());
                    assert!(prev.contains(&w[1..]), "{} suffix of {w:?}", p.to_json());
                }
            }
            prev = oracle.into_iter().collect();
        }
    }
}

#[test]
fn pure_positions_bounded_on_census() {
    for p in census_qhs() {
        for m in 1..=6 {
            for w in singular_monomials(&p, m, &lim()).unwrap() {
                assert!(
                    pure_positions(w.letters(), &p) < p.n(),
                    "{} {w}",
                    p.to_json()
                );
            }
        }
    }
}

#[test]
fn constructed_singular_words_obey_letter_bounds() {
    for n in 5..=6 {
        let p = build_regular_qhs(n).unwrap();
        let special = [2u8, n as u8 - 1, n as u8];
        let mut m = 1;
        loop {
            let layer = singular_monomials(&p, m, &lim()).unwrap();
            if layer.is_empty() {
                break;
            }
            for w in &layer {
                assert!(pure_positions(w.letters(), &p) < n, "n = {n}: {w}");
                let hits = w.letters().iter().filter(|l| special.contains(l)).count();
                assert!(hits < n, "n = {n}: {w}");
            }
            m += 1;
        }
    }
}

#[test]
fn hilbert_profiles_are_consistent() {
    for p in census_qhs() {
        let n = p.n() as u64;
        let prof = hilbert_profile(&p, 20, &lim()).unwrap();
        let nil = prof.nilpotency_index().expect("census QHS profiles are finite below 20");
        for m in 1..prof.dims.len() - 1 {
            assert!(prof.dims[m + 1] <= n * prof.dims[m], "{}", p.to_json());
        }
        assert_eq!(prof.dims[nil], 0);
        assert!(prof.dims[1..nil].iter().all(|&d| d > 0));
        if let Regularity::Regular { degree, .. } = regularity_degree(&p, &lim()).unwrap() {
            assert!(nil <= degree + 1, "{} nil {nil} reg {degree}", p.to_json());
        }
    }
}

#[test]
fn qhs_enumeration_is_complete() {
    for n in 1..=3usize {
        // any relation of a QHS only touches pairs ab with a >= b
        let rels: Vec<Relation> = all_relations(n)
            .into_iter()
            .filter(|r| r.support().iter().all(|q| q.0 >= q.1))
            .collect();
        let mut brute: Vec<String> = Vec::new();
        for mask in 1u32..(1 << rels.len()) {
            let chosen = (0..rels.len()).filter(|i| mask >> i & 1 == 1).map(|i| rels[i]);
            let p = Presentation::new(n, chosen).unwrap();
            if validate_qhs(&p).valid {
                brute.push(p.to_json());
            }
        }
        brute.sort();
        let mut engine: Vec<String> = enumerate_qhs(n).unwrap().iter().map(|p| p.to_json()).collect();
        engine.sort();
        assert_eq!(engine, brute, "n = {n}");
    }
    assert_eq!(enumerate_qhs(4).unwrap().len(), 331);
}

#[test]
fn finite_profiles_never_certified() {
    let mut checked = 0;
    let mut check = |p: Presentation| {
        let prof = hilbert_profile(&p, 12, &lim()).unwrap();
        if prof.is_finite() {
            checked += 1;
            assert!(
                matches!(theorem1_certificate(&p).kind, CertificateKind::None { .. }),
                "{}",
                p.to_json()
            );
        }
    };
    for_each_presentation(2, 4, &mut check).unwrap();
    for p in enumerate_qhs(3).unwrap() {
        check(p);
    }
    assert!(checked > 0);
}

#[test]
fn presentation_enumeration_counts() {
    assert_eq!(enumerate_presentations(2, 1).unwrap().len(), 10);
    let all: HashSet<String> = enumerate_presentations(2, 3)
        .unwrap()
        .iter()
        .map(|p| p.to_json())
        .collect();
    assert_eq!(all.len(), 10 + 45 + 120);
}

#[test]
fn pure_bound_small() {
    let r3 = pure_bound_check(3).unwrap();
    assert!(r3.holds);
    assert_eq!((r3.qhs_total, r3.all_pure_count, r3.min_size), (13, 9, Some(4)));
    let r4 = pure_bound_check(4).unwrap();
    assert!(r4.holds);
    assert_eq!((r4.qhs_total, r4.all_pure_count, r4.min_size), (331, 129, Some(6)));
    assert!(!r4.sizes.contains_key(&5));
}
