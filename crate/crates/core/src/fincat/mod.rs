//! Finite categories with dense ids and a precomputed composition table.
//!
//! Object ids are `0..objects`. The identity of object `x` is always morphism `x`,
//! so non-identity morphisms start at id `objects`.

pub mod builders;
pub mod json;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type ObjectId = usize;
pub type MorphismId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error("morphism {0} references object {1}, but there are only {2} objects")]
    ObjectOutOfRange(MorphismId, ObjectId, usize),
    #[error("morphism id {0} out of range")]
    MorphismOutOfRange(MorphismId),
    #[error("identity of object {0} is {1}, expected an endomorphism")]
    BadIdentity(ObjectId, MorphismId),
    #[error("object {0} has no identity")]
    MissingIdentity(ObjectId),
    #[error("composite {0} o {1} is missing")]
    MissingComposite(MorphismId, MorphismId),
    #[error("composite {0} o {1} given but dom {0} != cod {1}")]
    NotComposable(MorphismId, MorphismId),
    #[error("composite {0} o {1} given twice")]
    DuplicateComposite(MorphismId, MorphismId),
    #[error("ids must be dense: expected morphism id {expected}, found {found}")]
    SparseIds { expected: usize, found: usize },
}

/// A category with finitely many objects and morphisms.
///
/// Composition is stored densely over composable pairs: the row of `g` holds one
/// entry per morphism into `dom g`.
#[derive(Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: usize,
    dom: Vec<ObjectId>,
    cod: Vec<ObjectId>,
    incoming: Vec<Vec<MorphismId>>,
    outgoing: Vec<Vec<MorphismId>>,
    in_pos: Vec<usize>,
    row_start: Vec<usize>,
    table: Vec<MorphismId>,
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinCategory({} objects, {} morphisms)",
            self.objects,
            self.dom.len()
        )
    }
}

impl FinCategory {
    /// Builds a category from endpoint arrays and a composition rule.
    ///
    /// Morphism `x < objects` must be an endomorphism of `x`; it is taken to be the
    /// identity. `compose(g, f)` is only called when `dom g == cod f`. No axioms are
    /// checked here; see [`validate_category`].
    pub fn from_fn(
        objects: usize,
        dom: Vec<ObjectId>,
        cod: Vec<ObjectId>,
        mut compose: impl FnMut(MorphismId, MorphismId) -> MorphismId,
    ) -> Result<Self, CategoryError> {
        let mut cat = Self::skeleton(objects, dom, cod)?;
        let m = cat.dom.len();
        let mut table = Vec::with_capacity(cat.row_start[m]);
        for g in 0..m {
            for &f in &cat.incoming[cat.dom[g]] {
                let gf = compose(g, f);
                if gf >= m {
                    return Err(CategoryError::MorphismOutOfRange(gf));
                }
                table.push(gf);
            }
        }
        cat.table = table;
        Ok(cat)
    }

    /// Builds a category from explicit composition triples `(g, f, g o f)`.
    ///
    /// Every composable pair must appear exactly once.
    pub fn from_triples(
        objects: usize,
        dom: Vec<ObjectId>,
        cod: Vec<ObjectId>,
        triples: &[(MorphismId, MorphismId, MorphismId)],
    ) -> Result<Self, CategoryError> {
        let mut cat = Self::skeleton(objects, dom, cod)?;
        let m = cat.dom.len();
        const UNSET: usize = usize::MAX;
        let mut table = vec![UNSET; cat.row_start[m]];
        for &(g, f, gf) in triples {
            for id in [g, f, gf] {
                if id >= m {
                    return Err(CategoryError::MorphismOutOfRange(id));
                }
            }
            if cat.dom[g] != cat.cod[f] {
                return Err(CategoryError::NotComposable(g, f));
            }
            let slot = cat.row_start[g] + cat.in_pos[f];
            if table[slot] != UNSET {
                return Err(CategoryError::DuplicateComposite(g, f));
            }
            table[slot] = gf;
        }
        for g in 0..m {
            for &f in &cat.incoming[cat.dom[g]] {
                if table[cat.row_start[g] + cat.in_pos[f]] == UNSET {
                    return Err(CategoryError::MissingComposite(g, f));
                }
            }
        }
        cat.table = table;
        Ok(cat)
    }

    fn skeleton(
        objects: usize,
        dom: Vec<ObjectId>,
        cod: Vec<ObjectId>,
    ) -> Result<Self, CategoryError> {
        assert_eq!(dom.len(), cod.len(), "dom and cod must have equal length");
        let m = dom.len();
        for i in 0..m {
            for x in [dom[i], cod[i]] {
                if x >= objects {
                    return Err(CategoryError::ObjectOutOfRange(i, x, objects));
                }
            }
        }
        for x in 0..objects {
            if x >= m {
                return Err(CategoryError::MissingIdentity(x));
            }
            if dom[x] != x || cod[x] != x {
                return Err(CategoryError::BadIdentity(x, x));
            }
        }
        let mut incoming = vec![Vec::new(); objects];
        let mut outgoing = vec![Vec::new(); objects];
        let mut in_pos = vec![0; m];
        for f in 0..m {
            in_pos[f] = incoming[cod[f]].len();
            incoming[cod[f]].push(f);
            outgoing[dom[f]].push(f);
        }
        let mut row_start = Vec::with_capacity(m + 1);
        let mut acc = 0;
        for g in 0..m {
            row_start.push(acc);
            acc += incoming[dom[g]].len();
        }
        row_start.push(acc);
        Ok(FinCategory {
            objects,
            dom,
            cod,
            incoming,
            outgoing,
            in_pos,
            row_start,
            table: Vec::new(),
        })
    }

    pub fn object_count(&self) -> usize {
        self.objects
    }

    pub fn morphism_count(&self) -> usize {
        self.dom.len()
    }

    pub fn objects(&self) -> std::ops::Range<ObjectId> {
        0..self.objects
    }

    pub fn morphisms(&self) -> std::ops::Range<MorphismId> {
        0..self.dom.len()
    }

    /// Morphisms that are not identities, in id order.
    pub fn non_identities(&self) -> std::ops::Range<MorphismId> {
        self.objects..self.dom.len()
    }

    pub fn dom(&self, f: MorphismId) -> ObjectId {
        self.dom[f]
    }

    pub fn cod(&self, f: MorphismId) -> ObjectId {
        self.cod[f]
    }

    pub fn identity(&self, x: ObjectId) -> MorphismId {
        debug_assert!(x < self.objects);
        x
    }

    pub fn is_identity(&self, f: MorphismId) -> bool {
        f < self.objects
    }

    pub fn is_endo(&self, f: MorphismId) -> bool {
        self.dom[f] == self.cod[f]
    }

    /// `g o f`, or `None` when `dom g != cod f`.
    pub fn comp(&self, g: MorphismId, f: MorphismId) -> Option<MorphismId> {
        if self.dom[g] != self.cod[f] {
            return None;
        }
        Some(self.table[self.row_start[g] + self.in_pos[f]])
    }

    /// `g o f` for a pair known to be composable.
    pub fn compose(&self, g: MorphismId, f: MorphismId) -> MorphismId {
        self.comp(g, f)
            .unwrap_or_else(|| panic!("{g} o {f} is not composable"))
    }

    /// Morphisms with codomain `x`, in id order.
    pub fn incoming(&self, x: ObjectId) -> &[MorphismId] {
        &self.incoming[x]
    }

    /// Morphisms with domain `x`, in id order.
    pub fn outgoing(&self, x: ObjectId) -> &[MorphismId] {
        &self.outgoing[x]
    }

    pub fn hom(&self, x: ObjectId, y: ObjectId) -> Vec<MorphismId> {
        self.outgoing[x]
            .iter()
            .copied()
            .filter(|&f| self.cod[f] == y)
            .collect()
    }

    pub fn hom_count(&self, x: ObjectId, y: ObjectId) -> usize {
        self.outgoing[x].iter().filter(|&&f| self.cod[f] == y).count()
    }

    /// All composition triples `(g, f, g o f)` sorted by `(g, f)`.
    pub fn triples(&self) -> Vec<(MorphismId, MorphismId, MorphismId)> {
        let mut out = Vec::with_capacity(self.table.len());
        for g in self.morphisms() {
            let mut row: Vec<_> = self.incoming[self.dom[g]]
                .iter()
                .map(|&f| (g, f, self.table[self.row_start[g] + self.in_pos[f]]))
                .collect();
            row.sort_unstable();
            out.extend(row);
        }
        out
    }

    /// Number of composable pairs.
    pub fn composable_pairs(&self) -> usize {
        self.table.len()
    }

    /// The opposite category. Ids are unchanged.
    pub fn opposite(&self) -> FinCategory {
        FinCategory::from_fn(self.objects, self.cod.clone(), self.dom.clone(), |g, f| {
            self.compose(f, g)
        })
        .expect("opposite of a well-formed table is well-formed")
    }

    /// Returns the inverse table when every morphism is invertible.
    pub fn as_groupoid(&self) -> Option<FinGroupoid> {
        let mut inverse = vec![usize::MAX; self.morphism_count()];
        for f in self.morphisms() {
            let (a, b) = (self.dom[f], self.cod[f]);
            inverse[f] = *self.outgoing[b].iter().find(|&&g| {
                self.cod[g] == a
                    && self.compose(g, f) == self.identity(a)
                    && self.compose(f, g) == self.identity(b)
            })?;
        }
        Some(FinGroupoid {
            cat: self.clone(),
            inverse,
        })
    }

    /// Connected components of the underlying undirected graph, each sorted, ordered
    /// by least object.
    pub fn connected_components(&self) -> Vec<Vec<ObjectId>> {
        let mut parent: Vec<usize> = (0..self.objects).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for f in self.non_identities() {
            let (a, b) = (find(&mut parent, self.dom[f]), find(&mut parent, self.cod[f]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut comps: BTreeMap<usize, Vec<ObjectId>> = BTreeMap::new();
        for x in 0..self.objects {
            let r = find(&mut parent, x);
            comps.entry(r).or_default().push(x);
        }
        let mut out: Vec<_> = comps.into_values().collect();
        out.sort();
        out
    }

    /// True when there is no non-identity endomorphism and no cycle of non-identity
    /// morphisms.
    pub fn is_loop_free(&self) -> bool {
        if self.non_identities().any(|f| self.is_endo(f)) {
            return false;
        }
        // Kahn's algorithm on the object digraph.
        let mut succ: Vec<BTreeSet<ObjectId>> = vec![BTreeSet::new(); self.objects];
        for f in self.non_identities() {
            succ[self.dom[f]].insert(self.cod[f]);
        }
        let mut indeg = vec![0usize; self.objects];
        for s in &succ {
            for &y in s {
                indeg[y] += 1;
            }
        }
        let mut stack: Vec<_> = (0..self.objects).filter(|&x| indeg[x] == 0).collect();
        let mut seen = 0;
        while let Some(x) = stack.pop() {
            seen += 1;
            for &y in &succ[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    stack.push(y);
                }
            }
        }
        seen == self.objects
    }
}

/// A finite category in which every morphism is invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinGroupoid {
    cat: FinCategory,
    inverse: Vec<MorphismId>,
}

impl FinGroupoid {
    pub fn inverse(&self, f: MorphismId) -> MorphismId {
        self.inverse[f]
    }

    pub fn category(&self) -> &FinCategory {
        &self.cat
    }

    pub fn into_category(self) -> FinCategory {
        self.cat
    }

    /// `f` composed with itself `k` times (`k = 0` gives the identity).
    pub fn power(&self, f: MorphismId, k: usize) -> MorphismId {
        assert!(self.cat.is_endo(f));
        let mut acc = self.cat.identity(self.cat.dom(f));
        for _ in 0..k {
            acc = self.cat.compose(f, acc);
        }
        acc
    }

    /// Inversion as a functor from the groupoid to its opposite.
    pub fn inversion(&self) -> Functor {
        Functor {
            objects: self.cat.objects().collect(),
            morphisms: self.inverse.clone(),
        }
    }
}

impl std::ops::Deref for FinGroupoid {
    type Target = FinCategory;

    fn deref(&self) -> &FinCategory {
        &self.cat
    }
}

/// Object and morphism maps between two categories supplied alongside.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Functor {
    pub objects: Vec<ObjectId>,
    pub morphisms: Vec<MorphismId>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctorError {
    #[error("object map has {found} entries, expected {expected}")]
    ObjectMapSize { expected: usize, found: usize },
    #[error("morphism map has {found} entries, expected {expected}")]
    MorphismMapSize { expected: usize, found: usize },
    #[error("image {1} of {0} is out of range")]
    OutOfRange(usize, usize),
    #[error("morphism {0} is sent to {1}, whose endpoints disagree with the object map")]
    Endpoints(MorphismId, MorphismId),
    #[error("identity of object {0} is not sent to an identity")]
    Identity(ObjectId),
    #[error("F({0} o {1}) != F({0}) o F({1})")]
    Composition(MorphismId, MorphismId),
}

impl Functor {
    pub fn identity(c: &FinCategory) -> Functor {
        Functor {
            objects: c.objects().collect(),
            morphisms: c.morphisms().collect(),
        }
    }

    /// `self o other`.
    pub fn after(&self, other: &Functor) -> Functor {
        Functor {
            objects: other.objects.iter().map(|&x| self.objects[x]).collect(),
            morphisms: other.morphisms.iter().map(|&f| self.morphisms[f]).collect(),
        }
    }

    /// Checks that this is a functor `src -> tgt`.
    pub fn check(&self, src: &FinCategory, tgt: &FinCategory) -> Result<(), FunctorError> {
        if self.objects.len() != src.object_count() {
            return Err(FunctorError::ObjectMapSize {
                expected: src.object_count(),
                found: self.objects.len(),
            });
        }
        if self.morphisms.len() != src.morphism_count() {
            return Err(FunctorError::MorphismMapSize {
                expected: src.morphism_count(),
                found: self.morphisms.len(),
            });
        }
        for (x, &y) in self.objects.iter().enumerate() {
            if y >= tgt.object_count() {
                return Err(FunctorError::OutOfRange(x, y));
            }
        }
        for (f, &g) in self.morphisms.iter().enumerate() {
            if g >= tgt.morphism_count() {
                return Err(FunctorError::OutOfRange(f, g));
            }
            if tgt.dom(g) != self.objects[src.dom(f)] || tgt.cod(g) != self.objects[src.cod(f)] {
                return Err(FunctorError::Endpoints(f, g));
            }
        }
        for x in src.objects() {
            if self.morphisms[x] != tgt.identity(self.objects[x]) {
                return Err(FunctorError::Identity(x));
            }
        }
        for (g, f, gf) in src.triples() {
            if tgt.comp(self.morphisms[g], self.morphisms[f]) != Some(self.morphisms[gf]) {
                return Err(FunctorError::Composition(g, f));
            }
        }
        Ok(())
    }

    pub fn is_functor(&self, src: &FinCategory, tgt: &FinCategory) -> bool {
        self.check(src, tgt).is_ok()
    }

    /// A functor that is bijective on objects and on morphisms.
    pub fn is_isomorphism(&self, src: &FinCategory, tgt: &FinCategory) -> bool {
        src.object_count() == tgt.object_count()
            && src.morphism_count() == tgt.morphism_count()
            && is_bijection(&self.objects, tgt.object_count())
            && is_bijection(&self.morphisms, tgt.morphism_count())
            && self.is_functor(src, tgt)
    }

    /// Inverse maps of a bijective functor.
    pub fn inverse(&self) -> Functor {
        let mut objects = vec![0; self.objects.len()];
        for (x, &y) in self.objects.iter().enumerate() {
            objects[y] = x;
        }
        let mut morphisms = vec![0; self.morphisms.len()];
        for (f, &g) in self.morphisms.iter().enumerate() {
            morphisms[g] = f;
        }
        Functor { objects, morphisms }
    }
}

fn is_bijection(map: &[usize], n: usize) -> bool {
    if map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &y in map {
        if y >= n || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    true
}

/// A violated category axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `g o f` has the wrong endpoints.
    Coherence { g: MorphismId, f: MorphismId, gf: MorphismId },
    /// `f o id` or `id o f` is not `f`.
    IdentityLaw { f: MorphismId, identity: MorphismId },
    /// `(h o g) o f != h o (g o f)`.
    Associativity { h: MorphismId, g: MorphismId, f: MorphismId },
}

impl fmt::Display for Violation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Coherence { g, f, gf } => {
                write!(out, "composite {g} o {f} = {gf} has the wrong endpoints")
            }
            Violation::IdentityLaw { f, identity } => {
                write!(out, "identity {identity} does not act trivially on {f}")
            }
            Violation::Associativity { h, g, f } => {
                write!(out, "({h} o {g}) o {f} != {h} o ({g} o {f})")
            }
        }
    }
}

/// Checks coherence, identity laws and associativity.
///
/// Associativity is only checked on triples whose intermediate composites are
/// coherent, so a single bad entry is reported once.
pub fn validate_category(c: &FinCategory) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut coherent = vec![true; c.table.len()];
    for g in c.morphisms() {
        for &f in c.incoming(c.dom(g)) {
            let slot = c.row_start[g] + c.in_pos[f];
            let gf = c.table[slot];
            if c.dom(gf) != c.dom(f) || c.cod(gf) != c.cod(g) {
                coherent[slot] = false;
                out.push(Violation::Coherence { g, f, gf });
            }
        }
    }
    let ok = |g: MorphismId, f: MorphismId| -> Option<MorphismId> {
        let slot = c.row_start[g] + c.in_pos[f];
        coherent[slot].then(|| c.table[slot])
    };
    for f in c.morphisms() {
        let (src, tgt) = (c.identity(c.dom(f)), c.identity(c.cod(f)));
        if c.compose(f, src) != f {
            out.push(Violation::IdentityLaw { f, identity: src });
        }
        if c.compose(tgt, f) != f {
            out.push(Violation::IdentityLaw { f, identity: tgt });
        }
    }
    for g in c.morphisms() {
        for &f in c.incoming(c.dom(g)) {
            let Some(gf) = ok(g, f) else { continue };
            for &h in c.outgoing(c.cod(g)) {
                let Some(hg) = ok(h, g) else { continue };
                let (Some(left), Some(right)) = (ok(hg, f), ok(h, gf)) else {
                    continue;
                };
                if left != right {
                    out.push(Violation::Associativity { h, g, f });
                }
            }
        }
    }
    out
}

/// Disjoint union. Returns the union and the inclusion of each part.
///
/// Identities of all parts come first, then the non-identity morphisms of each part
/// in order.
pub fn coproduct(parts: &[&FinCategory]) -> (FinCategory, Vec<Functor>) {
    let objects: usize = parts.iter().map(|c| c.object_count()).sum();
    let mut dom = Vec::new();
    let mut cod = Vec::new();
    let mut embeddings = Vec::new();
    let mut obj_off = 0;
    for c in parts {
        for x in c.objects() {
            dom.push(x + obj_off);
            cod.push(x + obj_off);
        }
        embeddings.push(Functor {
            objects: c.objects().map(|x| x + obj_off).collect(),
            morphisms: c.objects().map(|x| x + obj_off).collect(),
        });
        obj_off += c.object_count();
    }
    for (i, c) in parts.iter().enumerate() {
        let off = embeddings[i].objects.first().copied().unwrap_or(0);
        for f in c.non_identities() {
            embeddings[i].morphisms.push(dom.len());
            dom.push(c.dom(f) + off);
            cod.push(c.cod(f) + off);
        }
    }
    let mut owner = vec![(0, 0); dom.len()];
    for (i, e) in embeddings.iter().enumerate() {
        for (f, &g) in e.morphisms.iter().enumerate() {
            owner[g] = (i, f);
        }
    }
    let union = FinCategory::from_fn(objects, dom, cod, |g, f| {
        let (i, g0) = owner[g];
        let (_, f0) = owner[f];
        embeddings[i].morphisms[parts[i].compose(g0, f0)]
    })
    .expect("coproduct of well-formed tables is well-formed");
    (union, embeddings)
}

/// Cartesian product. Object `(x, y)` has id `x * |D| + y`.
pub fn product(c: &FinCategory, d: &FinCategory) -> FinCategory {
    let nd = d.object_count();
    let objects = c.object_count() * nd;
    let mut pairs: Vec<(MorphismId, MorphismId)> = Vec::new();
    for x in c.objects() {
        for y in d.objects() {
            pairs.push((x, y));
        }
    }
    for f in c.morphisms() {
        for g in d.morphisms() {
            if !(c.is_identity(f) && d.is_identity(g)) {
                pairs.push((f, g));
            }
        }
    }
    let mut index = BTreeMap::new();
    for (i, p) in pairs.iter().enumerate() {
        index.insert(*p, i);
    }
    let dom = pairs.iter().map(|&(f, g)| c.dom(f) * nd + d.dom(g)).collect();
    let cod = pairs.iter().map(|&(f, g)| c.cod(f) * nd + d.cod(g)).collect();
    FinCategory::from_fn(objects, dom, cod, |u, v| {
        let (f1, g1) = pairs[u];
        let (f0, g0) = pairs[v];
        index[&(c.compose(f1, f0), d.compose(g1, g0))]
    })
    .expect("product of well-formed tables is well-formed")
}
