mod common;

use common::{brute_isomorphisms, relabel};
use proptest::prelude::*;
use subdiv::fincat::builders::*;
use subdiv::fincat::{FinCategory, Functor};
use subdiv::oracle::*;
use subdiv::subdivision::{build_sd, Truncation};

fn search(a: &FinCategory, b: &FinCategory, config: &IsoSearchConfig) -> Vec<Functor> {
    let out = find_isomorphisms(a, b, config).unwrap();
    assert!(out.complete);
    let mut isos = out.isomorphisms;
    for f in &isos {
        assert!(f.is_isomorphism(a, b));
    }
    isos.sort();
    isos
}

fn no_pruning() -> IsoSearchConfig {
    IsoSearchConfig {
        degree_profile: false,
        hom_profile: false,
        hom_matrix: false,
        ..IsoSearchConfig::default()
    }
}

#[test]
fn search_agrees_with_brute_force() {
    let small = [
        cyclic_group(3),
        cyclic_group(4),
        klein_four(),
        dihedral_group(3),
        pair_groupoid(2),
        vertex_z2(),
        zigzag(2),
        poset_interval(2),
        discrete(3),
        disjoint_union(&[cyclic_group(2), pair_groupoid(2)]),
    ];
    for a in &small {
        for b in &small {
            let want = brute_isomorphisms(a, b);
            assert_eq!(search(a, b, &IsoSearchConfig::default()), want);
            assert_eq!(search(a, b, &no_pruning()), want);
        }
    }
}

#[test]
fn pruning_does_not_change_results() {
    for c in [cyclic_group(3), pair_groupoid(2), disjoint_union(&[cyclic_group(2), discrete(1)])] {
        let sd = build_sd(&c, Truncation::Upto(2)).unwrap();
        let full = search(sd.category(), sd.category(), &IsoSearchConfig::default());
        for mask in 0..8 {
            let config = IsoSearchConfig {
                degree_profile: mask & 1 != 0,
                hom_profile: mask & 2 != 0,
                hom_matrix: mask & 4 != 0,
                ..IsoSearchConfig::default()
            };
            assert_eq!(search(sd.category(), sd.category(), &config), full, "mask {mask}");
        }
    }
}

#[test]
fn limits() {
    let q = quaternion_group();
    let out = find_isomorphisms(&q, &q, &IsoSearchConfig::with_limit(3)).unwrap();
    assert_eq!(out.isomorphisms.len(), 3);
    assert!(!out.complete);

    let tight = IsoSearchConfig {
        node_limit: 10,
        ..no_pruning()
    };
    match find_isomorphisms(&q, &q, &tight) {
        Err(SearchError::BudgetExceeded(partial)) => {
            assert!(!partial.complete);
            assert!(partial.nodes >= 10);
        }
        other => panic!("expected a budget error, got {other:?}"),
    }

    assert!(are_isomorphic(&q, &q).unwrap());
    assert!(!are_isomorphic(&cyclic_group(4), &klein_four()).unwrap());
    assert!(!are_isomorphic(&zigzag(2), &poset_interval(2)).unwrap());
}

#[test]
fn corpus_is_well_formed() {
    let all: Vec<_> = corpus().into_iter().chain(extended_corpus()).collect();
    let mut names: Vec<_> = all.iter().map(|e| e.name.clone()).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), all.len());
    assert_eq!(corpus().len(), 17);
}

/// Components of `g` with at least one non-identity morphism.
fn nontrivial_components(g: &FinCategory) -> u32 {
    g.connected_components()
        .iter()
        .filter(|comp| comp.len() > 1 || g.hom(comp[0], comp[0]).len() > 1)
        .count() as u32
}

#[test]
fn subdivision_automorphisms_of_the_corpus() {
    // |Aut Sd<=2 G| = 2^c |Aut G|: each component may be flipped on its own.
    let want = [
        ("Z/2", 1, 2),
        ("Z/3", 2, 4),
        ("Z/4", 2, 4),
        ("Z/5", 4, 8),
        ("Z/6", 2, 4),
        ("Z/7", 6, 12),
        ("Klein four", 6, 12),
        ("D3", 6, 12),
        ("D4", 8, 16),
        ("Q8", 24, 48),
        ("pair(2)", 2, 4),
        ("pair(3)", 6, 12),
        ("pair(2) x Z/2", 4, 8),
        ("discrete(3)", 6, 6),
        ("Z/2 + Z/2", 2, 8),
        ("D3 + pair(2)", 12, 48),
        ("Z/3 + pair(2) x Z/2 + point", 8, 32),
    ];
    let entries = corpus();
    assert_eq!(entries.len(), want.len());
    for (e, (name, aut, aut_sd)) in entries.iter().zip(want) {
        assert_eq!(e.name, name);
        let g = &e.groupoid;
        let count = |c: &FinCategory| automorphism_group(c, &IsoSearchConfig::default()).unwrap().isomorphisms.len();
        assert_eq!(count(g), aut, "{name}");
        let sd = build_sd(g, Truncation::Upto(2)).unwrap();
        assert_eq!(count(sd.category()), aut_sd, "{name}");
        assert_eq!(aut_sd, aut << nontrivial_components(g), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn relabelled_copies_are_found(
        objects in Just((0..3).collect::<Vec<usize>>()).prop_shuffle(),
        others in Just((0..7).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let c = disjoint_union(&[dihedral_group(3), pair_groupoid(2)]);
        prop_assert_eq!(c.morphism_count(), 3 + 7);
        let (copy, iso) = relabel(&c, &objects, &others);
        let found = search(&c, &copy, &IsoSearchConfig::default());
        prop_assert_eq!(found.len(), 12);
        prop_assert!(found.contains(&iso));
    }
}
