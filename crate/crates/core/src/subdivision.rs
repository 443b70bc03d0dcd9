//! The barycentric subdivision `Sd C` of a finite category and its truncations.
//!
//! Objects of `Sd C` are non-degenerate simplices of the nerve. A morphism into `y`
//! is a non-empty vertex set `S` of `y`; its source is the non-degenerate root of
//! the restriction `S*y`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::delta::{DeltaMap, VertexSet};
use crate::fincat::{coproduct, FinCategory, FinGroupoid, Functor, MorphismId, ObjectId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SdError {
    #[error("the full subdivision needs a category without loops")]
    NotLoopFree,
    #[error("truncation level {0} is too large")]
    TooDeep(usize),
    #[error("image simplex {0} of dimension {1} is missing from the target subdivision")]
    TruncationMismatch(String, usize),
    #[error("functor error: {0}")]
    Functor(#[from] crate::fincat::FunctorError),
}

/// How much of the nerve to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truncation {
    /// Simplices of dimension at most `k`.
    Upto(usize),
    /// Every non-degenerate simplex. Only available for loop-free categories.
    Full,
}

impl Truncation {
    fn admits(self, dim: usize) -> bool {
        match self {
            Truncation::Upto(k) => dim <= k,
            Truncation::Full => true,
        }
    }
}

impl std::str::FromStr for Truncation {
    type Err = String;

    /// `full` or a dimension bound such as `2`.
    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("full") {
            return Ok(Truncation::Full);
        }
        s.parse()
            .map(Truncation::Upto)
            .map_err(|_| format!("expected a dimension or `full`, got {s:?}"))
    }
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Truncation::Upto(k) => write!(f, "{k}"),
            Truncation::Full => write!(f, "full"),
        }
    }
}

/// A chain `x0 -f1-> x1 -> ... -fn-> xn`. `arrows[0]` is `f1`.
///
/// Bar notation lists the chain backwards: `<g|f>` is the chain `[f, g]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Simplex {
    pub start: ObjectId,
    pub arrows: Vec<MorphismId>,
}

impl Simplex {
    pub fn point(x: ObjectId) -> Simplex {
        Simplex {
            start: x,
            arrows: Vec::new(),
        }
    }

    /// A chain from its arrows, listed in order of application. Must be non-empty.
    pub fn chain(c: &FinCategory, arrows: Vec<MorphismId>) -> Simplex {
        let start = c.dom(arrows[0]);
        debug_assert!(arrows.windows(2).all(|w| c.cod(w[0]) == c.dom(w[1])));
        Simplex { start, arrows }
    }

    pub fn dim(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex(&self, c: &FinCategory, i: usize) -> ObjectId {
        if i == 0 {
            self.start
        } else {
            c.cod(self.arrows[i - 1])
        }
    }

    pub fn last_vertex(&self, c: &FinCategory) -> ObjectId {
        self.vertex(c, self.dim())
    }

    pub fn is_nondegenerate(&self, c: &FinCategory) -> bool {
        self.arrows.iter().all(|&f| !c.is_identity(f))
    }

    /// `F o x`.
    pub fn map(&self, f: &Functor) -> Simplex {
        Simplex {
            start: f.objects[self.start],
            arrows: self.arrows.iter().map(|&a| f.morphisms[a]).collect(),
        }
    }

    /// Renders in bar notation with the given labels.
    pub fn bar(&self, object: impl Fn(ObjectId) -> String, arrow: impl Fn(MorphismId) -> String) -> String {
        if self.arrows.is_empty() {
            return format!("<{}>", object(self.start));
        }
        let parts: Vec<String> = self.arrows.iter().rev().map(|&f| arrow(f)).collect();
        format!("<{}>", parts.join("|"))
    }
}

/// The restriction `S*y`: entry `j` composes the arrows between the `j`-th and
/// `(j+1)`-th chosen vertices. May be degenerate.
pub fn restrict_simplex(c: &FinCategory, y: &Simplex, s: VertexSet) -> Simplex {
    let verts: Vec<usize> = s.iter().collect();
    assert!(!verts.is_empty() && verts[verts.len() - 1] <= y.dim(), "bad vertex set {s:?}");
    let start = y.vertex(c, verts[0]);
    let arrows = verts
        .windows(2)
        .map(|w| {
            let mut acc = y.arrows[w[0]];
            for &f in &y.arrows[w[0] + 1..w[1]] {
                acc = c.compose(f, acc);
            }
            acc
        })
        .collect();
    Simplex { start, arrows }
}

/// Deletes identities. Returns the root `lambda` and the epi `eta` with
/// `chain = eta* lambda`.
pub fn nondeg_root(c: &FinCategory, chain: &Simplex) -> (Simplex, DeltaMap) {
    let mut values = Vec::with_capacity(chain.dim() + 1);
    values.push(0);
    let mut arrows = Vec::new();
    for &f in &chain.arrows {
        if !c.is_identity(f) {
            arrows.push(f);
        }
        values.push(arrows.len());
    }
    let root = Simplex {
        start: chain.start,
        arrows,
    };
    let top = root.dim();
    (root, DeltaMap::new(values, top).expect("eta is monotone"))
}

/// Label of a morphism of `Sd C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdMorphism {
    pub source: ObjectId,
    pub target: ObjectId,
    pub subset: VertexSet,
    /// The collapse from the vertices of `subset` onto the vertices of `source`.
    pub epi: DeltaMap,
}

/// A subdivision together with the simplex labels of its objects and morphisms.
#[derive(Clone, Debug)]
pub struct SdCategory {
    category: FinCategory,
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, ObjectId>,
    labels: Vec<SdMorphism>,
    into: Vec<Vec<MorphismId>>,
    truncation: Truncation,
}

impl SdCategory {
    pub fn category(&self) -> &FinCategory {
        &self.category
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn simplex(&self, x: ObjectId) -> &Simplex {
        &self.simplices[x]
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn object_of(&self, s: &Simplex) -> Option<ObjectId> {
        self.index.get(s).copied()
    }

    pub fn dim(&self, x: ObjectId) -> usize {
        self.simplices[x].dim()
    }

    pub fn morphism(&self, f: MorphismId) -> &SdMorphism {
        &self.labels[f]
    }

    /// The morphism into `y` with vertex set `s`.
    pub fn morphism_into(&self, y: ObjectId, s: VertexSet) -> MorphismId {
        self.into[y][s.bits() as usize]
    }

    /// Objects of dimension `d`, in id order.
    pub fn objects_of_dim(&self, d: usize) -> impl Iterator<Item = ObjectId> + '_ {
        self.category.objects().filter(move |&x| self.dim(x) == d)
    }
}

/// Builds `Sd_{<=k} C`, or `Sd C` for [`Truncation::Full`].
///
/// Objects are ordered by dimension, then lexicographically by chain. Identities
/// come first among morphisms; the rest are ordered by target, then by vertex mask.
pub fn build_sd(c: &FinCategory, truncation: Truncation) -> Result<SdCategory, SdError> {
    match truncation {
        Truncation::Full if !c.is_loop_free() => return Err(SdError::NotLoopFree),
        Truncation::Upto(k) if k > 30 => return Err(SdError::TooDeep(k)),
        _ => {}
    }
    let mut simplices: Vec<Simplex> = c.objects().map(Simplex::point).collect();
    let mut layer = simplices.clone();
    let mut dim = 0;
    while truncation.admits(dim + 1) && !layer.is_empty() {
        let mut next = Vec::new();
        for s in &layer {
            for &f in c.outgoing(s.last_vertex(c)) {
                if !c.is_identity(f) {
                    let mut arrows = s.arrows.clone();
                    arrows.push(f);
                    next.push(Simplex { start: s.start, arrows });
                }
            }
        }
        dim += 1;
        if dim > 62 {
            return Err(SdError::TooDeep(dim));
        }
        simplices.extend(next.iter().cloned());
        layer = next;
    }
    let index: HashMap<Simplex, ObjectId> = simplices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();

    let n = simplices.len();
    let mut labels: Vec<SdMorphism> = simplices
        .iter()
        .enumerate()
        .map(|(y, s)| SdMorphism {
            source: y,
            target: y,
            subset: VertexSet::full(s.dim()),
            epi: DeltaMap::identity(s.dim()),
        })
        .collect();
    let mut into: Vec<Vec<MorphismId>> = Vec::with_capacity(n);
    for (y, s) in simplices.iter().enumerate() {
        let full = VertexSet::full(s.dim());
        let mut slots = vec![usize::MAX; full.bits() as usize + 1];
        slots[full.bits() as usize] = y;
        for mask in 1..full.bits() {
            let subset = VertexSet(mask);
            let (root, epi) = nondeg_root(c, &restrict_simplex(c, s, subset));
            slots[mask as usize] = labels.len();
            labels.push(SdMorphism {
                source: index[&root],
                target: y,
                subset,
                epi,
            });
        }
        into.push(slots);
    }
    let dom = labels.iter().map(|l| l.source).collect();
    let cod = labels.iter().map(|l| l.target).collect();
    let category = FinCategory::from_fn(n, dom, cod, |g, f| {
        let (lg, lf) = (&labels[g], &labels[f]);
        let subset: VertexSet = lg
            .subset
            .iter()
            .enumerate()
            .filter(|&(p, _)| lf.subset.contains(lg.epi.apply(p)))
            .map(|(_, v)| v)
            .collect();
        into[lg.target][subset.bits() as usize]
    })
    .expect("subdivision table is well-formed");
    Ok(SdCategory {
        category,
        simplices,
        index,
        labels,
        into,
        truncation,
    })
}

fn image_object(sd: &SdCategory, s: &Simplex) -> Result<ObjectId, SdError> {
    sd.object_of(s)
        .ok_or_else(|| SdError::TruncationMismatch(format!("{s:?}"), s.dim()))
}

/// `Sd F : Sd B -> Sd C`, sending `x` to the root of `F o x`.
///
/// A morphism into `y` with vertex set `S` goes to the morphism into the root of
/// `F o y` with vertex set `eta(S)`. This is a functor whenever `F` sends no
/// non-identity to an identity, and whenever `Sd C` is thin. Otherwise it can fail:
/// for `Z/4 -> Z/2` the two morphisms `<pt> -> <1|1>` with vertex sets `{0}` and
/// `{2}` would have to agree. The result is checked and such cases are reported
/// as [`SdError::Functor`].
pub fn sd_of_functor(
    f: &Functor,
    b: &FinCategory,
    c: &FinCategory,
    sd_b: &SdCategory,
    sd_c: &SdCategory,
) -> Result<Functor, SdError> {
    f.check(b, c)?;
    let mut objects = Vec::with_capacity(sd_b.category.object_count());
    let mut roots = Vec::with_capacity(objects.capacity());
    for s in &sd_b.simplices {
        let (root, eta) = nondeg_root(c, &s.map(f));
        objects.push(image_object(sd_c, &root)?);
        roots.push(eta);
    }
    let morphisms = sd_b
        .labels
        .iter()
        .map(|l| {
            let eta = &roots[l.target];
            sd_c.morphism_into(objects[l.target], l.subset.map(|i| eta.apply(i)))
        })
        .collect();
    let sd_f = Functor { objects, morphisms };
    sd_f.check(&sd_b.category, &sd_c.category)?;
    Ok(sd_f)
}

/// `Sd C -> Sd C^op`: reverse each chain and reflect vertex sets.
pub fn op_iso(c: &FinCategory, sd_c: &SdCategory, sd_cop: &SdCategory) -> Result<Functor, SdError> {
    reversal(sd_c, sd_cop, |s| Simplex {
        start: s.last_vertex(c),
        arrows: s.arrows.iter().rev().copied().collect(),
    })
}

/// The automorphism of `Sd G` sending `<fm|...|f1>` to `<f1^-1|...|fm^-1>`.
pub fn alpha(g: &FinGroupoid, sd_g: &SdCategory) -> Result<Functor, SdError> {
    reversal(sd_g, sd_g, |s| Simplex {
        start: s.last_vertex(g),
        arrows: s.arrows.iter().rev().map(|&f| g.inverse(f)).collect(),
    })
}

fn reversal(
    from: &SdCategory,
    to: &SdCategory,
    reverse: impl Fn(&Simplex) -> Simplex,
) -> Result<Functor, SdError> {
    let objects = from
        .simplices
        .iter()
        .map(|s| image_object(to, &reverse(s)))
        .collect::<Result<Vec<_>, _>>()?;
    let morphisms = from
        .labels
        .iter()
        .map(|l| {
            let n = from.dim(l.target);
            to.morphism_into(objects[l.target], l.subset.reflect(n))
        })
        .collect();
    Ok(Functor { objects, morphisms })
}

/// The comparison `coprod_i Sd G_i -> Sd (coprod_i G_i)`.
pub struct CoproductIso {
    /// Disjoint union of the subdivisions of the parts.
    pub sum_of_sds: FinCategory,
    /// Subdivision of the disjoint union.
    pub sd_of_sum: SdCategory,
    pub iso: Functor,
}

pub fn sd_coproduct_iso(parts: &[FinCategory], truncation: Truncation) -> Result<CoproductIso, SdError> {
    let part_refs: Vec<&FinCategory> = parts.iter().collect();
    let (sum, embeddings) = coproduct(&part_refs);
    let sd_of_sum = build_sd(&sum, truncation)?;
    let sds = parts
        .iter()
        .map(|p| build_sd(p, truncation))
        .collect::<Result<Vec<_>, _>>()?;
    let sd_refs: Vec<&FinCategory> = sds.iter().map(|s| &s.category).collect();
    let (sum_of_sds, sd_embeddings) = coproduct(&sd_refs);
    let mut objects = vec![0; sum_of_sds.object_count()];
    let mut morphisms = vec![0; sum_of_sds.morphism_count()];
    for (i, sd) in sds.iter().enumerate() {
        let part_map = sd_of_functor(&embeddings[i], &parts[i], &sum, sd, &sd_of_sum)?;
        for (x, &y) in part_map.objects.iter().enumerate() {
            objects[sd_embeddings[i].objects[x]] = y;
        }
        for (f, &g) in part_map.morphisms.iter().enumerate() {
            morphisms[sd_embeddings[i].morphisms[f]] = g;
        }
    }
    Ok(CoproductIso {
        sum_of_sds,
        sd_of_sum,
        iso: Functor { objects, morphisms },
    })
}
