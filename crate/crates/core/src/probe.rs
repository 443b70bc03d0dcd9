//! Reading simplicial structure off an abstract category that is known only to be
//! isomorphic to some `Sd_{<=2} G`.
//!
//! Nothing here looks at simplex labels. The dimension of an object `y` is read from
//! the number of morphisms into it (`2^(m+1) - 1`), and everything else from counts
//! of such morphisms grouped by source.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::fincat::{FinCategory, ObjectId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProbeError {
    #[error("object {0} has {1} incoming morphisms, which is not 2^(m+1) - 1")]
    NotASubdivision(ObjectId, usize),
    #[error("object {0} has dimension {1}, expected {2}")]
    WrongDimension(ObjectId, usize, usize),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("{0} and {1} are not composable")]
    NotComposable(ObjectId, ObjectId),
    #[error("could not determine {0}")]
    Undetermined(String),
}

/// A side of a 2-simplex: a 1-simplex, or the identity flagged by a collapsed edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Edge(ObjectId),
    Identity,
}

/// How two 1-simplices sit relative to each other, from their endpoint sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Unrelated,
    EndToEnd(EndToEnd),
    EndsToEnds(EndsToEnds),
    /// The first is a non-endomorphism, the second an endomorphism at one of its ends.
    EndToEndo,
    /// The first is an endomorphism at an end of the second, a non-endomorphism.
    EndoToEnd,
    EndoToEndo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndToEnd {
    /// One filler: the arrows compose.
    Sequential,
    /// Two fillers: the arrows share a source or share a target. The two cases are
    /// swapped by the automorphism coming from `C ~ C^op`, so they cannot be told
    /// apart here.
    Branching,
    Irregular(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndsToEnds {
    /// Four fillers: same source and same target.
    Parallel,
    /// Two fillers: opposite directions.
    Opposed,
    Irregular(usize),
}

/// How [`ProbedCategory::composite_pair_set`] reached its answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompositeRoute {
    Sequential,
    Opposed,
    EndToEndo,
    /// `f = g`.
    Square,
    /// `f = g^-1`.
    Inverse,
    /// `f^2 = g` or `f = g^2`.
    Cube,
    /// `f^2 = g^-1` or `f^-1 = g^2`.
    SquareInverse,
    /// `f^2 = id = g^2`.
    Case1 { commuting: bool },
    /// `f^2 = g^2 != id`.
    Case2 { commuting: bool },
    /// `f^2 != g^2`, one square trivial.
    Case3 { commuting: bool },
    /// `f^2 != g^2`, both squares nontrivial.
    Case4 { commuting: bool, squares_inverse: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeCertificate {
    pub composites: BTreeSet<Side>,
    pub route: CompositeRoute,
}

/// Form key of a 2-simplex: the sorted sources of its three edge morphisms, or of
/// two when the long edge collapsed to an identity.
type FormKey = Vec<ObjectId>;

/// Precomputed counts over an abstract category shaped like `Sd_{<=2} G`.
pub struct ProbedCategory<'a> {
    cat: &'a FinCategory,
    dims: Vec<usize>,
    /// For each object, sources of incoming non-identity morphisms with multiplicity.
    faces: Vec<BTreeMap<ObjectId, usize>>,
    /// For each 1-simplex, the 2-simplices it is a face of.
    cofaces: Vec<Vec<ObjectId>>,
    forms: HashMap<FormKey, usize>,
    form_of: Vec<Option<FormKey>>,
    inverse: Vec<Option<ObjectId>>,
}

impl<'a> ProbedCategory<'a> {
    pub fn new(cat: &'a FinCategory) -> Result<Self, ProbeError> {
        let n = cat.object_count();
        let mut dims = Vec::with_capacity(n);
        for y in cat.objects() {
            let k = cat.incoming(y).len() + 1;
            if !k.is_power_of_two() || k < 2 {
                return Err(ProbeError::NotASubdivision(y, k - 1));
            }
            dims.push(k.trailing_zeros() as usize - 1);
        }
        let mut faces = vec![BTreeMap::new(); n];
        for y in cat.objects() {
            for &u in cat.incoming(y) {
                if !cat.is_identity(u) {
                    *faces[y].entry(cat.dom(u)).or_insert(0) += 1;
                }
            }
        }
        let mut cofaces = vec![Vec::new(); n];
        let mut forms: HashMap<FormKey, usize> = HashMap::new();
        let mut form_of = vec![None; n];
        for y in cat.objects().filter(|&y| dims[y] == 2) {
            let mut key = Vec::new();
            for (&x, &k) in &faces[y] {
                if dims[x] == 1 {
                    cofaces[x].push(y);
                    key.extend(std::iter::repeat_n(x, k));
                }
            }
            *forms.entry(key.clone()).or_insert(0) += 1;
            form_of[y] = Some(key);
        }
        let mut probe = ProbedCategory {
            cat,
            dims,
            faces,
            cofaces,
            forms,
            form_of,
            inverse: vec![None; n],
        };
        for f in cat.objects().filter(|&f| probe.dims[f] == 1) {
            probe.inverse[f] = if probe.forms.contains_key(&vec![f, f]) {
                Some(f)
            } else {
                probe.cofaces[f].iter().find_map(|&y| {
                    let key = probe.form_of[y].as_ref()?;
                    if key.len() != 2 {
                        return None;
                    }
                    let g = if key[0] == f { key[1] } else { key[0] };
                    (probe.forms[key] == 2).then_some(g)
                })
            };
        }
        Ok(probe)
    }

    pub fn category(&self) -> &FinCategory {
        self.cat
    }

    pub fn dim(&self, y: ObjectId) -> usize {
        self.dims[y]
    }

    /// Objects of dimension `d`, in id order.
    pub fn of_dim(&self, d: usize) -> Vec<ObjectId> {
        self.cat.objects().filter(|&y| self.dims[y] == d).collect()
    }

    /// Number of morphisms into `y` from objects of dimension `d` (`|mt_d(y)|`).
    pub fn mt_count(&self, y: ObjectId, d: usize) -> usize {
        let own = usize::from(self.dims[y] == d);
        own + self.faces[y]
            .iter()
            .filter(|(&x, _)| self.dims[x] == d)
            .map(|(_, &k)| k)
            .sum::<usize>()
    }

    /// Proper faces with the number of morphisms from each.
    pub fn proper_faces(&self, y: ObjectId) -> &BTreeMap<ObjectId, usize> {
        &self.faces[y]
    }

    /// The 0-dimensional faces of a 1-simplex: one for an endomorphism, else two.
    pub fn endpoints(&self, e: ObjectId) -> Result<Vec<ObjectId>, ProbeError> {
        self.expect_dim(e, 1)?;
        Ok(self.faces[e].keys().copied().filter(|&x| self.dims[x] == 0).collect())
    }

    pub fn is_endo(&self, e: ObjectId) -> Result<bool, ProbeError> {
        Ok(self.endpoints(e)?.len() == 1)
    }

    /// Sides of a 2-simplex with multiplicity; the flag marks a collapsed third side.
    pub fn triangle_form(&self, y: ObjectId) -> Result<(Vec<ObjectId>, bool), ProbeError> {
        self.expect_dim(y, 2)?;
        let key = self.form_of[y].clone().expect("2-simplex has a form");
        let degenerate = key.len() == 2;
        Ok((key, degenerate))
    }

    fn expect_dim(&self, y: ObjectId, d: usize) -> Result<(), ProbeError> {
        if self.dims[y] != d {
            return Err(ProbeError::WrongDimension(y, self.dims[y], d));
        }
        Ok(())
    }

    fn key(&self, sides: &[Side]) -> FormKey {
        let mut key: Vec<ObjectId> = sides
            .iter()
            .filter_map(|s| match s {
                Side::Edge(e) => Some(*e),
                Side::Identity => None,
            })
            .collect();
        key.sort_unstable();
        key
    }

    /// Number of 2-simplices whose sides are exactly `{f, g, h}` as a multiset.
    pub fn count_form(&self, f: ObjectId, g: ObjectId, h: Side) -> usize {
        let key = self.key(&[Side::Edge(f), Side::Edge(g), h]);
        if key.len() < 2 {
            return 0;
        }
        self.forms.get(&key).copied().unwrap_or(0)
    }

    /// 2-simplices having `f` and `g` among their sides (twice if `f == g`).
    pub fn fillers(&self, f: ObjectId, g: ObjectId) -> Vec<ObjectId> {
        self.cofaces[f]
            .iter()
            .copied()
            .filter(|&y| self.third_side(y, f, g).is_some())
            .collect()
    }

    /// The side of `y` left after removing one `f` and one `g`.
    fn third_side(&self, y: ObjectId, f: ObjectId, g: ObjectId) -> Option<Side> {
        let mut key = self.form_of[y].clone()?;
        for e in [f, g] {
            let i = key.iter().position(|&x| x == e)?;
            key.remove(i);
        }
        Some(match key.as_slice() {
            [] => Side::Identity,
            [h] => Side::Edge(*h),
            _ => unreachable!("a form has at most three sides"),
        })
    }

    /// The distinct third sides over all fillers of `(f, g)`.
    pub fn third_sides(&self, f: ObjectId, g: ObjectId) -> BTreeSet<Side> {
        self.cofaces[f]
            .iter()
            .filter_map(|&y| self.third_side(y, f, g))
            .collect()
    }

    pub fn relation(&self, f: ObjectId, g: ObjectId) -> Result<Relation, ProbeError> {
        let ef = self.endpoints(f)?;
        let eg = self.endpoints(g)?;
        let shared = ef.iter().filter(|x| eg.contains(x)).count();
        if shared == 0 {
            return Ok(Relation::Unrelated);
        }
        let fillers = self.fillers(f, g).len();
        Ok(match (ef.len(), eg.len()) {
            (1, 1) => Relation::EndoToEndo,
            (2, 1) => Relation::EndToEndo,
            (1, 2) => Relation::EndoToEnd,
            _ if shared == 1 => Relation::EndToEnd(match fillers {
                1 => EndToEnd::Sequential,
                2 => EndToEnd::Branching,
                k => EndToEnd::Irregular(k),
            }),
            _ => Relation::EndsToEnds(match fillers {
                4 => EndsToEnds::Parallel,
                2 => EndsToEnds::Opposed,
                k => EndsToEnds::Irregular(k),
            }),
        })
    }

    /// `f` is its own inverse iff some 2-simplex has sides `f, f` and an identity.
    pub fn is_self_inverse(&self, f: ObjectId) -> bool {
        self.count_form(f, f, Side::Identity) > 0
    }

    /// Distinct `f`, `g` are mutually inverse iff exactly two 2-simplices have sides
    /// `f, g` and an identity.
    pub fn are_inverse(&self, f: ObjectId, g: ObjectId) -> bool {
        if f == g {
            return self.is_self_inverse(f);
        }
        self.count_form(f, g, Side::Identity) == 2
    }

    /// The 1-simplex of `f^-1`.
    pub fn inverse_of(&self, f: ObjectId) -> Result<ObjectId, ProbeError> {
        self.expect_dim(f, 1)?;
        self.inverse[f]
            .ok_or_else(|| ProbeError::Undetermined(format!("inverse of {f}")))
    }

    fn inverse_side(&self, s: Side) -> Result<Side, ProbeError> {
        match s {
            Side::Identity => Ok(Side::Identity),
            Side::Edge(e) => self.inverse_of(e).map(Side::Edge),
        }
    }

    /// `f^2` for an endomorphism `f`, read off a 2-simplex in which `f` occurs twice.
    pub fn square_of(&self, f: ObjectId) -> Result<Side, ProbeError> {
        if !self.is_endo(f)? {
            return Err(ProbeError::HypothesisViolated(format!("{f} is not an endomorphism")));
        }
        self.cofaces[f]
            .iter()
            .find_map(|&y| self.third_side(y, f, f))
            .ok_or_else(|| ProbeError::Undetermined(format!("square of {f}")))
    }

    /// `f^3`, assuming `f != f^-1` and `f^2 != f^-1`.
    pub fn cube_of(&self, f: ObjectId) -> Result<ObjectId, ProbeError> {
        let s = match self.square_of(f)? {
            Side::Identity => {
                return Err(ProbeError::HypothesisViolated(format!("{f} is its own inverse")))
            }
            Side::Edge(s) => s,
        };
        let inv = self.inverse_of(f)?;
        if s == inv {
            return Err(ProbeError::HypothesisViolated(format!("the square of {f} is its inverse")));
        }
        self.third_sides(f, s)
            .into_iter()
            .find_map(|h| match h {
                Side::Edge(h) => {
                    let want = if h == inv { 4 } else { 2 };
                    (self.count_form(f, s, Side::Edge(h)) == want).then_some(h)
                }
                Side::Identity => None,
            })
            .ok_or_else(|| ProbeError::Undetermined(format!("cube of {f}")))
    }

    fn check_pair_hypotheses(&self, f: ObjectId, g: ObjectId) -> Result<(), ProbeError> {
        if self.relation(f, g)? != Relation::EndoToEndo {
            return Err(ProbeError::HypothesisViolated(format!(
                "{f} and {g} are not endomorphisms of one object"
            )));
        }
        let bad = if f == g {
            Some("f = g")
        } else if self.are_inverse(f, g) {
            Some("f = g^-1")
        } else if self.square_of(f)? == Side::Edge(g) {
            Some("f^2 = g")
        } else if self.square_of(g)? == Side::Edge(f) {
            Some("f = g^2")
        } else {
            None
        };
        match bad {
            Some(why) => Err(ProbeError::HypothesisViolated(why.to_string())),
            None => Ok(()),
        }
    }

    /// Whether `fg = gf`, for endomorphisms with `f != g`, `f != g^-1`, `f^2 != g`
    /// and `f != g^2`: true iff every third side occurs an even number of times.
    pub fn commutes(&self, f: ObjectId, g: ObjectId) -> Result<bool, ProbeError> {
        self.check_pair_hypotheses(f, g)?;
        Ok(self.third_sides(f, g).into_iter().all(|h| self.count_form(f, g, h).is_multiple_of(2)))
    }

    /// The set `{fg, gf}` restricted to the composites that exist.
    pub fn composite_pair_set(&self, f: ObjectId, g: ObjectId) -> Result<CompositeCertificate, ProbeError> {
        let done = |composites: BTreeSet<Side>, route| Ok(CompositeCertificate { composites, route });
        match self.relation(f, g)? {
            Relation::Unrelated
            | Relation::EndToEnd(EndToEnd::Branching | EndToEnd::Irregular(_))
            | Relation::EndsToEnds(EndsToEnds::Parallel | EndsToEnds::Irregular(_)) => {
                Err(ProbeError::NotComposable(f, g))
            }
            Relation::EndToEnd(EndToEnd::Sequential) => {
                done(self.third_sides(f, g), CompositeRoute::Sequential)
            }
            Relation::EndsToEnds(EndsToEnds::Opposed) => {
                done(self.third_sides(f, g), CompositeRoute::Opposed)
            }
            Relation::EndToEndo => done(self.end_to_endo(f, g)?, CompositeRoute::EndToEndo),
            Relation::EndoToEnd => done(self.end_to_endo(g, f)?, CompositeRoute::EndToEndo),
            Relation::EndoToEndo => self.endo_pair(f, g),
        }
    }

    /// `f` a non-endomorphism, `g` an endomorphism at one of its ends. The composite
    /// is the third side of `(f^-1, g)` parallel to `f`.
    fn end_to_endo(&self, f: ObjectId, g: ObjectId) -> Result<BTreeSet<Side>, ProbeError> {
        let inv = self.inverse_of(f)?;
        let mut out = BTreeSet::new();
        for h in self.third_sides(inv, g) {
            if let Side::Edge(h) = h {
                if h != f
                    && self.dims[h] == 1
                    && self.relation(h, f)? == Relation::EndsToEnds(EndsToEnds::Parallel)
                {
                    out.insert(Side::Edge(h));
                }
            }
        }
        Ok(out)
    }

    fn endo_pair(&self, f: ObjectId, g: ObjectId) -> Result<CompositeCertificate, ProbeError> {
        let one = |s: Side, route| {
            Ok(CompositeCertificate {
                composites: BTreeSet::from([s]),
                route,
            })
        };
        let (sf, sg) = (self.square_of(f)?, self.square_of(g)?);
        let (fi, gi) = (self.inverse_of(f)?, self.inverse_of(g)?);
        if f == g {
            return one(sf, CompositeRoute::Square);
        }
        if fi == g {
            return one(Side::Identity, CompositeRoute::Inverse);
        }
        if sf == Side::Edge(g) {
            return one(Side::Edge(self.cube_of(f)?), CompositeRoute::Cube);
        }
        if sg == Side::Edge(f) {
            return one(Side::Edge(self.cube_of(g)?), CompositeRoute::Cube);
        }
        if sf == Side::Edge(gi) {
            return one(Side::Edge(fi), CompositeRoute::SquareInverse);
        }
        if sg == Side::Edge(fi) {
            return one(Side::Edge(gi), CompositeRoute::SquareInverse);
        }
        let commuting = self.commutes(f, g)?;
        let count = |a: ObjectId, b: ObjectId, h: ObjectId| self.count_form(a, b, Side::Edge(h));
        let route = if sf == Side::Identity && sg == Side::Identity {
            CompositeRoute::Case1 { commuting }
        } else if sf == sg {
            CompositeRoute::Case2 { commuting }
        } else if sf == Side::Identity || sg == Side::Identity {
            CompositeRoute::Case3 { commuting }
        } else {
            CompositeRoute::Case4 {
                commuting,
                squares_inverse: self.inverse_side(sg)? == sf,
            }
        };
        let mut composites = BTreeSet::new();
        for h in self.third_sides(f, g) {
            let Side::Edge(h) = h else { continue };
            let c = count(f, g, h);
            let hit = match route {
                CompositeRoute::Case1 { commuting } => c == if commuting { 6 } else { 3 },
                CompositeRoute::Case2 { commuting } => {
                    if commuting {
                        c == 2
                    } else {
                        c == 1 || c == 3
                    }
                }
                CompositeRoute::Case3 { commuting } => {
                    if commuting {
                        c == 4
                    } else {
                        c == 2 || c == 3
                    }
                }
                CompositeRoute::Case4 {
                    commuting,
                    squares_inverse,
                } => {
                    let (b, d) = (count(fi, g, h), count(f, gi, h));
                    if commuting {
                        c >= 1 && b >= 1 && d >= 1
                    } else if squares_inverse {
                        b == 2 && d == 2
                    } else {
                        let twos = [c, b, d].iter().filter(|&&k| k == 2).count();
                        (c == 1 && b == 1 && d == 1) || (count(fi, gi, h) == 1 && twos == 2)
                    }
                }
                _ => unreachable!(),
            };
            if hit {
                composites.insert(Side::Edge(h));
            }
        }
        Ok(CompositeCertificate { composites, route })
    }
}
