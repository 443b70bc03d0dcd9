//! Label-aware ground truth: exhaustive isomorphism search, direct triangle counts on
//! groupoid tables, and the reference corpus.

use std::collections::HashMap;

use thiserror::Error;

use crate::fincat::builders::{
    cyclic_group, dihedral_group, discrete, disjoint_union, frobenius_21, klein_four,
    pair_groupoid, quaternion_group,
};
use crate::fincat::{product, FinCategory, FinGroupoid, Functor, MorphismId, ObjectId};

#[derive(Clone, Debug)]
pub struct IsoSearchConfig {
    /// Search nodes (object and morphism choices) before giving up.
    pub node_limit: u64,
    /// Stop after this many isomorphisms.
    pub result_limit: usize,
    /// Match in-degree and out-degree of objects.
    pub degree_profile: bool,
    /// Match the multisets of hom-set sizes in each row and column.
    pub hom_profile: bool,
    /// Keep `|hom(x, y)|` equal for every pair of assigned objects.
    pub hom_matrix: bool,
}

impl Default for IsoSearchConfig {
    fn default() -> Self {
        IsoSearchConfig {
            node_limit: 20_000_000,
            result_limit: usize::MAX,
            degree_profile: true,
            hom_profile: true,
            hom_matrix: true,
        }
    }
}

impl IsoSearchConfig {
    pub fn with_limit(result_limit: usize) -> Self {
        IsoSearchConfig {
            result_limit,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct IsoSearchOutcome {
    /// Verified isomorphisms in search order.
    pub isomorphisms: Vec<Functor>,
    /// True when the list is every isomorphism there is.
    pub complete: bool,
    pub nodes: u64,
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("search budget of {} nodes exceeded after {} results", .0.nodes, .0.isomorphisms.len())]
    BudgetExceeded(IsoSearchOutcome),
}

/// All isomorphisms `a -> b`, up to the configured limits.
pub fn find_isomorphisms(
    a: &FinCategory,
    b: &FinCategory,
    config: &IsoSearchConfig,
) -> Result<IsoSearchOutcome, SearchError> {
    let mut s = Search::new(a, b, config);
    if s.feasible() {
        s.run();
    }
    let outcome = IsoSearchOutcome {
        complete: !s.stopped,
        isomorphisms: s.found,
        nodes: s.nodes,
    };
    if s.exhausted {
        Err(SearchError::BudgetExceeded(outcome))
    } else {
        Ok(outcome)
    }
}

pub fn automorphism_group(a: &FinCategory, config: &IsoSearchConfig) -> Result<IsoSearchOutcome, SearchError> {
    find_isomorphisms(a, a, config)
}

pub fn are_isomorphic(a: &FinCategory, b: &FinCategory) -> Result<bool, SearchError> {
    let found = find_isomorphisms(a, b, &IsoSearchConfig::with_limit(1))?;
    Ok(!found.isomorphisms.is_empty())
}

#[derive(Clone)]
struct Bits {
    words: usize,
    data: Vec<u64>,
}

impl Bits {
    fn rows(rows: usize, cols: usize) -> Bits {
        let words = cols.div_ceil(64).max(1);
        Bits {
            words,
            data: vec![0; rows * words],
        }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.words..(r + 1) * self.words]
    }

    fn set(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] |= 1 << (c % 64);
    }

    fn count(&self, r: usize) -> u32 {
        self.row(r).iter().map(|w| w.count_ones()).sum()
    }

    fn ones(&self, r: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &w) in self.row(r).iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(i * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }
}

struct Search<'a> {
    a: &'a FinCategory,
    b: &'a FinCategory,
    config: &'a IsoSearchConfig,
    n: usize,
    hom_a: Vec<u16>,
    hom_b: Vec<u16>,
    /// Per object of `b`, a candidate mask for each `(|hom(z', -)|, |hom(-, z')|)`.
    classes: Vec<HashMap<(u16, u16), Vec<u64>>>,
    state: State,
    found: Vec<Functor>,
    nodes: u64,
    stopped: bool,
    exhausted: bool,
}

/// Everything a branch may change, saved and restored wholesale.
#[derive(Clone)]
struct State {
    cand: Bits,
    objects: Vec<Option<ObjectId>>,
    morphisms: Vec<Option<MorphismId>>,
    used: Vec<bool>,
    /// Morphisms of `a` whose endpoints are both assigned.
    ready: Vec<MorphismId>,
}

fn hom_matrix(c: &FinCategory) -> Vec<u16> {
    let n = c.object_count();
    let mut h = vec![0u16; n * n];
    for f in c.morphisms() {
        h[c.dom(f) * n + c.cod(f)] += 1;
    }
    h
}

impl<'a> Search<'a> {
    fn new(a: &'a FinCategory, b: &'a FinCategory, config: &'a IsoSearchConfig) -> Self {
        let n = a.object_count();
        Search {
            a,
            b,
            config,
            n,
            hom_a: hom_matrix(a),
            hom_b: if b.object_count() == n { hom_matrix(b) } else { Vec::new() },
            classes: Vec::new(),
            state: State {
                cand: Bits::rows(n, n),
                objects: vec![None; n],
                morphisms: vec![None; a.morphism_count()],
                used: vec![false; b.morphism_count()],
                ready: Vec::new(),
            },
            found: Vec::new(),
            nodes: 0,
            stopped: false,
            exhausted: false,
        }
    }

    fn signature(&self, c: &FinCategory, h: &[u16], x: ObjectId) -> Vec<u32> {
        let mut sig = vec![h[x * self.n + x] as u32];
        if self.config.degree_profile {
            sig.push(c.incoming(x).len() as u32);
            sig.push(c.outgoing(x).len() as u32);
        }
        if self.config.hom_profile {
            let mut row: Vec<u32> = (0..self.n).map(|y| h[x * self.n + y] as u32).filter(|&k| k > 0).collect();
            let mut col: Vec<u32> = (0..self.n).map(|y| h[y * self.n + x] as u32).filter(|&k| k > 0).collect();
            row.sort_unstable();
            col.sort_unstable();
            sig.push(u32::MAX);
            sig.extend(row);
            sig.push(u32::MAX);
            sig.extend(col);
        }
        sig
    }

    /// Sets up candidate masks; false when the categories obviously differ.
    fn feasible(&mut self) -> bool {
        let (a, b, n) = (self.a, self.b, self.n);
        if b.object_count() != n || a.morphism_count() != b.morphism_count() {
            return false;
        }
        let sig_a: Vec<_> = (0..n).map(|x| self.signature(a, &self.hom_a, x)).collect();
        let sig_b: Vec<_> = (0..n).map(|x| self.signature(b, &self.hom_b, x)).collect();
        let (mut sa, mut sb) = (sig_a.clone(), sig_b.clone());
        sa.sort();
        sb.sort();
        if sa != sb {
            return false;
        }
        for (x, sx) in sig_a.iter().enumerate() {
            for (y, sy) in sig_b.iter().enumerate() {
                if sx == sy {
                    self.state.cand.set(x, y);
                }
            }
        }
        if self.config.hom_matrix {
            let words = self.state.cand.words;
            self.classes = (0..n)
                .map(|z| {
                    let mut m: HashMap<(u16, u16), Vec<u64>> = HashMap::new();
                    for y in 0..n {
                        let key = (self.hom_b[z * n + y], self.hom_b[y * n + z]);
                        m.entry(key).or_insert_with(|| vec![0; words])[y / 64] |= 1 << (y % 64);
                    }
                    m
                })
                .collect();
        }
        true
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.config.node_limit {
            self.stopped = true;
            self.exhausted = true;
        }
        !self.stopped
    }

    fn run(&mut self) {
        if self.stopped {
            return;
        }
        let st = &self.state;
        let next_object = (0..self.n)
            .filter(|&x| st.objects[x].is_none())
            .min_by_key(|&x| (st.cand.count(x), x));
        let mut next_morphism = None;
        for &u in &st.ready {
            if st.morphisms[u].is_some() {
                continue;
            }
            let (x, y) = (st.objects[self.a.dom(u)].unwrap(), st.objects[self.a.cod(u)].unwrap());
            let free = self.b.outgoing(x).iter().filter(|&&v| self.b.cod(v) == y && !st.used[v]).count();
            if next_morphism.is_none_or(|(_, k)| free < k) {
                next_morphism = Some((u, free));
                if free <= 1 {
                    break;
                }
            }
        }
        let object_first = match (next_object, next_morphism) {
            (Some(x), Some((_, k))) => (st.cand.count(x) as usize) < k,
            (Some(_), None) => true,
            _ => false,
        };
        let next_morphism = next_morphism.map(|(u, _)| u);
        match (next_object, next_morphism) {
            (Some(x), _) if object_first => {
                for y in st.cand.ones(x) {
                    if !self.tick() {
                        return;
                    }
                    let saved = self.state.clone();
                    if self.assign_object(x, y) {
                        self.run();
                    }
                    self.state = saved;
                    if self.stopped {
                        return;
                    }
                }
            }
            (_, Some(u)) => {
                let (x, y) = (st.objects[self.a.dom(u)].unwrap(), st.objects[self.a.cod(u)].unwrap());
                for v in self.b.hom(x, y) {
                    if self.state.used[v] {
                        continue;
                    }
                    if !self.tick() {
                        return;
                    }
                    let saved = self.state.clone();
                    if self.assign_morphism(u, v) {
                        self.run();
                    }
                    self.state = saved;
                    if self.stopped {
                        return;
                    }
                }
            }
            _ => self.record(),
        }
    }

    fn record(&mut self) {
        let f = Functor {
            objects: self.state.objects.iter().map(|x| x.unwrap()).collect(),
            morphisms: self.state.morphisms.iter().map(|m| m.unwrap()).collect(),
        };
        debug_assert!(f.is_isomorphism(self.a, self.b));
        if f.is_isomorphism(self.a, self.b) {
            self.found.push(f);
            if self.found.len() >= self.config.result_limit {
                self.stopped = true;
            }
        }
    }

    /// Assigns `x -> y`, narrows the other candidate sets, and fills in every
    /// morphism this forces. False on a contradiction.
    fn assign_object(&mut self, x: ObjectId, y: ObjectId) -> bool {
        self.state.objects[x] = Some(y);
        if !self.forward_check(x, y) {
            return false;
        }
        if !self.assign_morphism(self.a.identity(x), self.b.identity(y)) {
            return false;
        }
        let (a, b, n) = (self.a, self.b, self.n);
        let touching: Vec<MorphismId> = a
            .incoming(x)
            .iter()
            .chain(a.outgoing(x))
            .copied()
            .filter(|&u| !a.is_identity(u))
            .collect();
        for u in touching {
            let (Some(p), Some(q)) = (self.state.objects[a.dom(u)], self.state.objects[a.cod(u)]) else {
                continue;
            };
            self.state.ready.push(u);
            if self.state.morphisms[u].is_some() {
                continue;
            }
            let (ka, kb) = (self.hom_a[a.dom(u) * n + a.cod(u)], self.hom_b[p * n + q]);
            if ka != kb && self.config.hom_matrix {
                return false;
            }
            if ka == 1 && kb == 1 {
                let v = b.hom(p, q)[0];
                if !self.assign_morphism(u, v) {
                    return false;
                }
            }
        }
        true
    }

    /// Narrows every unassigned candidate set after `x -> y`. False on a wipe-out.
    fn forward_check(&mut self, x: ObjectId, y: ObjectId) -> bool {
        let n = self.n;
        let empty = vec![0u64; self.state.cand.words];
        for u in 0..n {
            if self.state.objects[u].is_some() {
                continue;
            }
            let row = self.state.cand.row_mut(u);
            row[y / 64] &= !(1 << (y % 64));
            if self.config.hom_matrix {
                let key = (self.hom_a[x * n + u], self.hom_a[u * n + x]);
                let mask = self.classes[y].get(&key).unwrap_or(&empty);
                for (w, m) in row.iter_mut().zip(mask) {
                    *w &= m;
                }
            }
            if row.iter().all(|&w| w == 0) {
                return false;
            }
        }
        true
    }

    /// Assigns `u -> v` and everything forced by composition with assigned morphisms.
    fn assign_morphism(&mut self, u: MorphismId, v: MorphismId) -> bool {
        let (a, b) = (self.a, self.b);
        let st = &mut self.state;
        let mut queue = vec![(u, v)];
        while let Some((u, v)) = queue.pop() {
            match st.morphisms[u] {
                Some(w) if w == v => continue,
                Some(_) => return false,
                None => {}
            }
            if st.used[v]
                || Some(b.dom(v)) != st.objects[a.dom(u)]
                || Some(b.cod(v)) != st.objects[a.cod(u)]
            {
                return false;
            }
            st.morphisms[u] = Some(v);
            st.used[v] = true;
            for &f in a.incoming(a.dom(u)) {
                if let Some(fv) = st.morphisms[f] {
                    queue.push((a.compose(u, f), b.compose(v, fv)));
                }
            }
            for &g in a.outgoing(a.cod(u)) {
                if let Some(gv) = st.morphisms[g] {
                    queue.push((a.compose(g, u), b.compose(gv, v)));
                }
            }
        }
        true
    }
}

/// Number of 2-simplices `<q|p>` of `G` whose sides `{p, q, q o p}` equal `{f, g, h}`
/// as a multiset, counted straight from the composition table.
pub fn brute_triangle_census(
    grp: &FinCategory,
    f: MorphismId,
    g: MorphismId,
    h: MorphismId,
) -> usize {
    let mut want = [f, g, h];
    want.sort_unstable();
    let mut count = 0;
    for p in grp.non_identities() {
        for &q in grp.outgoing(grp.cod(p)) {
            if grp.is_identity(q) {
                continue;
            }
            let mut sides = [p, q, grp.compose(q, p)];
            sides.sort_unstable();
            if sides == want {
                count += 1;
            }
        }
    }
    count
}

/// A named groupoid from the reference corpus.
pub struct CorpusEntry {
    pub name: String,
    pub groupoid: FinGroupoid,
}

fn entry(name: &str, c: FinCategory) -> CorpusEntry {
    CorpusEntry {
        name: name.to_string(),
        groupoid: c.as_groupoid().expect("corpus members are groupoids"),
    }
}

/// Groupoids used by the acceptance runs.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut out: Vec<CorpusEntry> = (2..=7).map(|n| entry(&format!("Z/{n}"), cyclic_group(n))).collect();
    out.push(entry("Klein four", klein_four()));
    out.push(entry("D3", dihedral_group(3)));
    out.push(entry("D4", dihedral_group(4)));
    out.push(entry("Q8", quaternion_group()));
    out.push(entry("pair(2)", pair_groupoid(2)));
    out.push(entry("pair(3)", pair_groupoid(3)));
    out.push(entry("pair(2) x Z/2", vertex_z2()));
    out.push(entry("discrete(3)", discrete(3)));
    out.push(entry("Z/2 + Z/2", disjoint_union(&[cyclic_group(2), cyclic_group(2)])));
    out.push(entry("D3 + pair(2)", disjoint_union(&[dihedral_group(3), pair_groupoid(2)])));
    out.push(entry(
        "Z/3 + pair(2) x Z/2 + point",
        disjoint_union(&[cyclic_group(3), vertex_z2(), discrete(1)]),
    ));
    out
}

/// Larger groups whose pairs reach the less common branches of the composite
/// criterion. Used for the triangle-count and composite checks only.
pub fn extended_corpus() -> Vec<CorpusEntry> {
    vec![
        entry("Z/7 x| Z/3", frobenius_21()),
        entry("Q8 x Z/3", product(&quaternion_group(), &cyclic_group(3))),
    ]
}

/// The two-object groupoid with vertex groups `Z/2`.
pub fn vertex_z2() -> FinCategory {
    product(&pair_groupoid(2), &cyclic_group(2))
}
