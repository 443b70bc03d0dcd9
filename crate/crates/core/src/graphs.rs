//! Graphs of formal composites `k^s l^t` of two endomorphisms `f`, `g`, with an edge
//! whenever two composites evaluate to the same morphism.

use std::collections::BTreeMap;
use std::fmt;

use crate::fincat::{FinGroupoid, MorphismId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    F,
    G,
}

/// `k^s l^t` with `k != l` and signs `s, t` in `{1, -1}` (`true` means `-1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalComposite {
    pub first: Letter,
    pub first_inverted: bool,
    pub second_inverted: bool,
}

impl FormalComposite {
    const fn new(first: Letter, s: i8, t: i8) -> Self {
        FormalComposite {
            first,
            first_inverted: s < 0,
            second_inverted: t < 0,
        }
    }

    pub fn second(self) -> Letter {
        match self.first {
            Letter::F => Letter::G,
            Letter::G => Letter::F,
        }
    }

    /// `k^s o l^t` in `g`, with `f` and `g` assigned to the letters.
    pub fn evaluate(self, grp: &FinGroupoid, f: MorphismId, g: MorphismId) -> MorphismId {
        let pick = |letter, inverted: bool| {
            let x = if letter == Letter::F { f } else { g };
            if inverted {
                grp.inverse(x)
            } else {
                x
            }
        };
        grp.compose(
            pick(self.first, self.first_inverted),
            pick(self.second(), self.second_inverted),
        )
    }
}

impl fmt::Display for FormalComposite {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |l: Letter, inv: bool| {
            let c = if l == Letter::F { "f" } else { "g" };
            if inv {
                format!("{c}^-1")
            } else {
                c.to_string()
            }
        };
        write!(
            out,
            "{}{}",
            name(self.first, self.first_inverted),
            name(self.second(), self.second_inverted)
        )
    }
}

use Letter::{F, G};

/// The eight composites, labelled `a` to `h`. The first six form `C(f, g)`.
pub const VERTICES: [FormalComposite; 8] = [
    FormalComposite::new(F, 1, 1),
    FormalComposite::new(G, 1, 1),
    FormalComposite::new(F, -1, 1),
    FormalComposite::new(G, 1, -1),
    FormalComposite::new(F, 1, -1),
    FormalComposite::new(G, -1, 1),
    FormalComposite::new(F, -1, -1),
    FormalComposite::new(G, -1, -1),
];

pub const LABELS: [char; 8] = ['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h'];

/// Equations between `f` and `g` that can identify two formal composites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Equation {
    Commute,
    FSquaredId,
    GSquaredId,
    SquaresEqual,
    SquaresInverse,
    /// `fgf = g`
    Fgf,
    /// `gfg = f`
    Gfg,
    /// `f g^-1 f = g`
    FgInvF,
    /// `fgf = g^-1`
    FgfInv,
}

impl Equation {
    pub const ALL: [Equation; 9] = [
        Equation::Commute,
        Equation::FSquaredId,
        Equation::GSquaredId,
        Equation::SquaresEqual,
        Equation::SquaresInverse,
        Equation::Fgf,
        Equation::Gfg,
        Equation::FgInvF,
        Equation::FgfInv,
    ];

    /// The four equations that decide the composite in the hardest case.
    pub const GENERATORS: [Equation; 4] =
        [Equation::Fgf, Equation::Gfg, Equation::FgInvF, Equation::FgfInv];

    pub fn text(self) -> &'static str {
        match self {
            Equation::Commute => "fg = gf",
            Equation::FSquaredId => "f^2 = id",
            Equation::GSquaredId => "g^2 = id",
            Equation::SquaresEqual => "f^2 = g^2",
            Equation::SquaresInverse => "f^2 = g^-2",
            Equation::Fgf => "fgf = g",
            Equation::Gfg => "gfg = f",
            Equation::FgInvF => "fg^-1f = g",
            Equation::FgfInv => "fgf = g^-1",
        }
    }

    /// Edge set between the vertices `a..h`, as index pairs.
    pub fn edges(self) -> &'static [(usize, usize)] {
        match self {
            Equation::Commute => &[(0, 1), (2, 3), (4, 5), (6, 7)],
            Equation::FSquaredId => &[(0, 2), (1, 3), (4, 6), (5, 7)],
            Equation::GSquaredId => &[(0, 4), (1, 5), (2, 6), (3, 7)],
            Equation::SquaresEqual => &[(2, 4), (3, 5)],
            Equation::SquaresInverse => &[(0, 6), (1, 7)],
            Equation::Fgf => &[(0, 3), (1, 2), (4, 7), (5, 6)],
            Equation::Gfg => &[(0, 5), (1, 4), (2, 7), (3, 6)],
            Equation::FgInvF => &[(2, 5), (3, 4)],
            Equation::FgfInv => &[(0, 7), (1, 6)],
        }
    }

    /// Evaluates the equation for `f`, `g` in a groupoid.
    pub fn holds(self, grp: &FinGroupoid, f: MorphismId, g: MorphismId) -> bool {
        let c = |a, b| grp.compose(a, b);
        let id = grp.identity(grp.dom(f));
        let gi = grp.inverse(g);
        match self {
            Equation::Commute => c(f, g) == c(g, f),
            Equation::FSquaredId => c(f, f) == id,
            Equation::GSquaredId => c(g, g) == id,
            Equation::SquaresEqual => c(f, f) == c(g, g),
            Equation::SquaresInverse => c(f, f) == c(gi, gi),
            Equation::Fgf => c(f, c(g, f)) == g,
            Equation::Gfg => c(g, c(f, g)) == f,
            Equation::FgInvF => c(f, c(gi, f)) == g,
            Equation::FgfInv => c(f, c(g, f)) == gi,
        }
    }
}

/// The nine-entry table of equations and the edges each one produces.
pub fn equation_subgraph_table() -> Vec<(Equation, Vec<(FormalComposite, FormalComposite)>)> {
    Equation::ALL
        .iter()
        .map(|&e| {
            let edges = e.edges().iter().map(|&(i, j)| (VERTICES[i], VERTICES[j])).collect();
            (e, edges)
        })
        .collect()
}

/// A graph on vertex indices into [`VERTICES`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    /// Vertex classes by evaluation, each sorted, ordered by least vertex. Empty for
    /// graphs not built by evaluation.
    pub fibers: Vec<Vec<usize>>,
}

impl EvGraph {
    pub fn from_edges(vertices: usize, mut edges: Vec<(usize, usize)>) -> EvGraph {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        EvGraph {
            vertices,
            edges,
            fibers: Vec::new(),
        }
    }

    /// Connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra.max(rb)] = ra.min(rb);
        }
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.vertices {
            let r = find(&mut parent, v);
            comps.entry(r).or_default().push(v);
        }
        comps.into_values().collect()
    }

    /// Every connected component is a complete graph.
    pub fn is_valid(&self) -> bool {
        self.components().iter().all(|comp| {
            let k = comp.len();
            let inside = self
                .edges
                .iter()
                .filter(|(a, _)| comp.binary_search(a).is_ok())
                .count();
            inside == k * (k - 1) / 2
        })
    }
}

/// `G(f, g)` on the six composites, or `W(f, g)` on all eight when `extended`.
pub fn build_ev_graph(grp: &FinGroupoid, f: MorphismId, g: MorphismId, extended: bool) -> EvGraph {
    assert!(grp.is_endo(f) && grp.is_endo(g) && grp.dom(f) == grp.dom(g));
    let n = if extended { 8 } else { 6 };
    let values: Vec<MorphismId> = VERTICES[..n].iter().map(|v| v.evaluate(grp, f, g)).collect();
    let mut edges = Vec::new();
    let mut by_value: BTreeMap<MorphismId, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        by_value.entry(values[i]).or_default().push(i);
        for j in i + 1..n {
            if values[i] == values[j] {
                edges.push((i, j));
            }
        }
    }
    let mut fibers: Vec<Vec<usize>> = by_value.into_values().collect();
    fibers.sort();
    EvGraph {
        vertices: n,
        edges,
        fibers,
    }
}

/// The union of the edges of the chosen generator equations on eight vertices.
pub fn assignment_graph(assignment: [bool; 4]) -> EvGraph {
    let edges = Equation::GENERATORS
        .iter()
        .zip(assignment)
        .filter(|&(_, on)| on)
        .flat_map(|(e, _)| e.edges().iter().copied())
        .collect();
    EvGraph::from_edges(8, edges)
}

/// Truth assignments to `fgf = g, gfg = f, fg^-1f = g, fgf = g^-1` whose graph has
/// only complete components, in binary order.
pub fn enumerate_valid_assignments() -> Vec<[bool; 4]> {
    (0..16u8)
        .map(|bits| [bits & 8 != 0, bits & 4 != 0, bits & 2 != 0, bits & 1 != 0])
        .filter(|&a| assignment_graph(a).is_valid())
        .collect()
}
