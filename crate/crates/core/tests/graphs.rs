use std::collections::BTreeSet;

use proptest::prelude::*;
use subdiv::fincat::{FinGroupoid, MorphismId};
use subdiv::graphs::*;
use subdiv::oracle::{corpus, extended_corpus};

/// Letters of the free group on f, g: 1 = f, 2 = g, negatives are inverses.
type Word = Vec<i8>;

fn letter(l: Letter, inverted: bool) -> i8 {
    let x = if l == Letter::F { 1 } else { 2 };
    if inverted {
        -x
    } else {
        x
    }
}

fn word(v: FormalComposite) -> Word {
    vec![letter(v.first, v.first_inverted), letter(v.second(), v.second_inverted)]
}

fn inverse(w: &[i8]) -> Word {
    w.iter().rev().map(|x| -x).collect()
}

fn cyclic_reduce(w: Word) -> Word {
    let mut out: Word = Vec::new();
    for x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    while out.len() > 1 && out[0] == -out[out.len() - 1] {
        out.pop();
        out.remove(0);
    }
    out
}

/// Least rotation of the word or of its inverse: the relator up to conjugacy and
/// inversion.
fn canonical(w: Word) -> Word {
    let w = cyclic_reduce(w);
    let inv = inverse(&w);
    (0..w.len().max(1))
        .flat_map(|k| {
            let rot = |v: &Word| {
                let mut v = v.clone();
                let n = v.len();
                v.rotate_left(k.min(n));
                v
            };
            [rot(&w), rot(&inv)]
        })
        .min()
        .unwrap()
}

fn relator(e: Equation) -> Word {
    let (f, g, fi, gi) = (1, 2, -1, -2);
    match e {
        Equation::Commute => vec![f, g, fi, gi],
        Equation::FSquaredId => vec![f, f],
        Equation::GSquaredId => vec![g, g],
        Equation::SquaresEqual => vec![f, f, gi, gi],
        Equation::SquaresInverse => vec![f, f, g, g],
        Equation::Fgf => vec![f, g, f, gi],
        Equation::Gfg => vec![g, f, g, fi],
        Equation::FgInvF => vec![f, gi, f, gi],
        Equation::FgfInv => vec![f, g, f, g],
    }
}

#[test]
fn every_edge_is_its_equation() {
    let mut covered = BTreeSet::new();
    for (e, edges) in equation_subgraph_table() {
        assert_eq!(edges.len(), e.edges().len());
        for (u, v) in edges {
            let mut w = word(u);
            w.extend(inverse(&word(v)));
            assert_eq!(canonical(w), canonical(relator(e)), "{u} = {v} under {}", e.text());
        }
        for &(i, j) in e.edges() {
            assert!(i < j);
            assert!(covered.insert((i, j)), "({i}, {j}) twice");
        }
    }
    assert_eq!(covered.len(), 28);
}

#[test]
fn vertices_are_the_eight_two_letter_words() {
    let words: BTreeSet<Word> = VERTICES.iter().map(|&v| word(v)).collect();
    assert_eq!(words.len(), 8);
    for w in &words {
        assert_eq!(w[0].abs() + w[1].abs(), 3);
    }
    assert_eq!(VERTICES[0].to_string(), "fg");
    assert_eq!(VERTICES[7].to_string(), "g^-1f^-1");
    // the first six avoid (fg)^-1 and (gf)^-1
    let top: BTreeSet<Word> = VERTICES[6..].iter().map(|&v| word(v)).collect();
    let inverses: BTreeSet<Word> = VERTICES[..2].iter().map(|&v| inverse(&word(v))).collect();
    assert_eq!(top, inverses);
}

fn endo_pairs(g: &FinGroupoid) -> Vec<(MorphismId, MorphismId)> {
    let mut out = Vec::new();
    for x in g.objects() {
        let h = g.hom(x, x);
        for &f in &h {
            for &k in &h {
                out.push((f, k));
            }
        }
    }
    out
}

#[test]
fn graphs_are_unions_of_the_equations_that_hold() {
    for e in corpus().into_iter().chain(extended_corpus()) {
        let g = &e.groupoid;
        for (f, k) in endo_pairs(g) {
            let w = build_ev_graph(g, f, k, true);
            let want: Vec<_> = Equation::ALL
                .iter()
                .filter(|eq| eq.holds(g, f, k))
                .flat_map(|eq| eq.edges().iter().copied())
                .collect();
            assert_eq!(w.edges, EvGraph::from_edges(8, want).edges, "{}: ({f}, {k})", e.name);
            assert!(w.is_valid());
            assert_eq!(w.components(), w.fibers);

            let small = build_ev_graph(g, f, k, false);
            let inside: Vec<_> = w.edges.iter().copied().filter(|&(_, j)| j < 6).collect();
            assert_eq!(small.edges, inside);
            assert!(small.is_valid());
        }
    }
}

#[test]
fn six_assignments_are_consistent() {
    let valid = enumerate_valid_assignments();
    let brute: Vec<[bool; 4]> = (0..16u8)
        .map(|bits| [bits & 8 != 0, bits & 4 != 0, bits & 2 != 0, bits & 1 != 0])
        .filter(|&a| {
            let edges: Vec<_> = Equation::GENERATORS
                .iter()
                .zip(a)
                .filter(|&(_, on)| on)
                .flat_map(|(e, _)| e.edges().iter().copied())
                .collect();
            brute_valid(8, &edges)
        })
        .collect();
    assert_eq!(valid, brute);
    assert_eq!(valid.len(), 6);
    let b = |s: &str| -> [bool; 4] { s.chars().map(|c| c == '1').collect::<Vec<_>>().try_into().unwrap() };
    assert_eq!(valid, ["0000", "0001", "0010", "0011", "0100", "1000"].map(b));

    let mut realized = BTreeSet::new();
    for e in corpus().into_iter().chain(extended_corpus()) {
        let g = &e.groupoid;
        for (f, k) in endo_pairs(g) {
            // other equations add edges of their own
            let others = Equation::ALL.iter().filter(|e| !Equation::GENERATORS.contains(e));
            if others.clone().any(|eq| eq.holds(g, f, k)) {
                continue;
            }
            let a = Equation::GENERATORS.map(|eq| eq.holds(g, f, k));
            assert!(valid.contains(&a), "{}: ({f}, {k}) gives {a:?}", e.name);
            realized.insert(a);
        }
    }
    assert_eq!(realized, ["0000", "0100", "1000"].map(b).into());
}

#[test]
fn assignment_graphs_match_the_table() {
    for bits in 0..16u8 {
        let a = [bits & 8 != 0, bits & 4 != 0, bits & 2 != 0, bits & 1 != 0];
        let g = assignment_graph(a);
        let edges: usize = Equation::GENERATORS
            .iter()
            .zip(a)
            .filter(|&(_, on)| on)
            .map(|(e, _)| e.edges().len())
            .sum();
        assert_eq!(g.edges.len(), edges);
        assert_eq!(g.vertices, 8);
    }
}

/// Validity by definition: any two vertices joined by a path are adjacent.
fn brute_valid(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut reach = vec![vec![false; n]; n];
    for i in 0..n {
        reach[i][i] = true;
    }
    for &(a, b) in edges {
        reach[a][b] = true;
        reach[b][a] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let adjacent: BTreeSet<_> = edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
    (0..n).all(|i| (0..n).all(|j| i == j || !reach[i][j] || adjacent.contains(&(i, j))))
}

proptest! {
    #[test]
    fn validity_matches_transitive_closure(edges in prop::collection::vec((0usize..8, 0usize..8), 0..12)) {
        let edges: Vec<_> = edges.into_iter().filter(|(a, b)| a != b).collect();
        let g = EvGraph::from_edges(8, edges.clone());
        prop_assert_eq!(g.is_valid(), brute_valid(8, &edges));
        let total: usize = g.components().iter().map(Vec::len).sum();
        prop_assert_eq!(total, 8);
    }
}
