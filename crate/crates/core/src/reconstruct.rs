//! Recovering an isomorphism of groupoids `G -> H` from an isomorphism
//! `Sd_{<=2} G -> Sd_{<=2} H`.
//!
//! The subdivision isomorphism fixes a bijection `psi` on objects and on
//! non-identity morphisms that preserves endpoint sets but may reverse arrows. Each
//! connected component is then either covariant, handled by `psi`, or
//! contravariant, handled by `psi'(f) = psi(f^-1)`.

use thiserror::Error;

use crate::fincat::{FinGroupoid, Functor, FunctorError, MorphismId, ObjectId};
use crate::subdivision::{SdCategory, Simplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("the subdivision map is not a functor: {0}")]
    NotAFunctor(FunctorError),
    #[error("simplex {0} of dimension {1} is sent to dimension {2}")]
    DimensionChanged(ObjectId, usize, usize),
    #[error("the induced map on {0} is not bijective")]
    NotBijective(&'static str),
    #[error("morphism {0} is not sent to a morphism with the same endpoint set")]
    Endpoints(MorphismId),
    #[error("psi({0} o {1}) is neither psi({0}) psi({1}) nor psi({1}) psi({0})")]
    BourbakiViolated(MorphismId, MorphismId),
    #[error("no consistent variance on the component of object {0}")]
    VarianceInconsistent(ObjectId),
    #[error("component of object {0} is not sent onto a single component")]
    ComponentMismatch(ObjectId),
    #[error("assembled map is not an isomorphism: {0}")]
    Verification(String),
}

/// A map on objects and morphisms that need not respect composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMap {
    pub objects: Vec<ObjectId>,
    pub morphisms: Vec<MorphismId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    /// Only identities: nothing to decide.
    Trivial,
    Covariant,
    Contravariant,
}

/// The recovered isomorphism with the variance chosen on each component of `G`.
#[derive(Clone, Debug)]
pub struct Assembly {
    pub functor: Functor,
    pub components: Vec<(Vec<ObjectId>, Variance)>,
}

/// Reads `psi` off the images of 0- and 1-simplices.
pub fn extract_psi(
    psi: &Functor,
    g: &FinGroupoid,
    h: &FinGroupoid,
    sd_g: &SdCategory,
    sd_h: &SdCategory,
) -> Result<GraphMap, ReconstructError> {
    psi.check(sd_g.category(), sd_h.category())
        .map_err(ReconstructError::NotAFunctor)?;
    let image = |s: Simplex| -> Result<&Simplex, ReconstructError> {
        let x = sd_g.object_of(&s).expect("low simplices are present");
        let y = psi.objects[x];
        let (from, to) = (s.dim(), sd_h.dim(y));
        if from != to {
            return Err(ReconstructError::DimensionChanged(x, from, to));
        }
        Ok(sd_h.simplex(y))
    };
    let mut objects = Vec::with_capacity(g.object_count());
    for b in g.objects() {
        objects.push(image(Simplex::point(b))?.start);
    }
    let mut morphisms: Vec<MorphismId> = objects.iter().map(|&y| h.identity(y)).collect();
    for f in g.non_identities() {
        let t = image(Simplex::chain(g, vec![f]))?.arrows[0];
        let mut want = [objects[g.dom(f)], objects[g.cod(f)]];
        let mut got = [h.dom(t), h.cod(t)];
        want.sort_unstable();
        got.sort_unstable();
        if want != got {
            return Err(ReconstructError::Endpoints(f));
        }
        morphisms.push(t);
    }
    if !bijective(&objects, h.object_count()) {
        return Err(ReconstructError::NotBijective("objects"));
    }
    if !bijective(&morphisms, h.morphism_count()) {
        return Err(ReconstructError::NotBijective("morphisms"));
    }
    Ok(GraphMap { objects, morphisms })
}

fn bijective(map: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    map.len() == n && map.iter().all(|&y| y < n && !std::mem::replace(&mut seen[y], true))
}

/// `psi'(f) = psi(f^-1)`.
pub fn psi_prime(psi: &GraphMap, g: &FinGroupoid) -> GraphMap {
    GraphMap {
        objects: psi.objects.clone(),
        morphisms: g.morphisms().map(|f| psi.morphisms[g.inverse(f)]).collect(),
    }
}

/// The vertex group at `x`: `psi` if it is a homomorphism there, `psi'` if it is an
/// anti-homomorphism. Returns `(f, image)` pairs for the endomorphisms of `x`.
pub fn group_case(
    psi: &GraphMap,
    g: &FinGroupoid,
    h: &FinGroupoid,
    x: ObjectId,
) -> Result<(Vec<(MorphismId, MorphismId)>, Variance), ReconstructError> {
    let elems = g.hom(x, x);
    let p = |f: MorphismId| psi.morphisms[f];
    let (mut hom, mut anti) = (true, true);
    for &a in &elems {
        for &b in &elems {
            let target = p(g.compose(a, b));
            let (ab, ba) = (h.compose(p(a), p(b)), h.compose(p(b), p(a)));
            if target != ab && target != ba {
                return Err(ReconstructError::BourbakiViolated(a, b));
            }
            hom &= target == ab;
            anti &= target == ba;
        }
    }
    if elems.len() == 1 {
        return Ok((vec![(x, p(x))], Variance::Trivial));
    }
    if hom {
        return Ok((elems.iter().map(|&f| (f, p(f))).collect(), Variance::Covariant));
    }
    if anti {
        let prime = psi_prime(psi, g);
        return Ok((
            elems.iter().map(|&f| (f, prime.morphisms[f])).collect(),
            Variance::Contravariant,
        ));
    }
    Err(ReconstructError::BourbakiViolated(elems[0], elems[0]))
}

/// A connected component with at least two objects. The variance is read from the
/// first non-endomorphism and then checked on the whole component.
pub fn multiobject_case(
    psi: &GraphMap,
    g: &FinGroupoid,
    h: &FinGroupoid,
    component: &[ObjectId],
) -> Result<(Vec<(MorphismId, MorphismId)>, Variance), ReconstructError> {
    let inside = |f: MorphismId| component.binary_search(&g.dom(f)).is_ok();
    let morphisms: Vec<MorphismId> = g.morphisms().filter(|&f| inside(f)).collect();
    let probe = *morphisms
        .iter()
        .find(|&&f| !g.is_endo(f))
        .ok_or(ReconstructError::VarianceInconsistent(component[0]))?;
    let covariant = h.dom(psi.morphisms[probe]) == psi.objects[g.dom(probe)];
    let (map, variance) = if covariant {
        (psi.clone(), Variance::Covariant)
    } else {
        (psi_prime(psi, g), Variance::Contravariant)
    };
    let p = |f: MorphismId| map.morphisms[f];
    for &f in &morphisms {
        if h.dom(p(f)) != map.objects[g.dom(f)] || h.cod(p(f)) != map.objects[g.cod(f)] {
            return Err(ReconstructError::VarianceInconsistent(component[0]));
        }
        for &e in g.incoming(g.dom(f)) {
            if h.comp(p(f), p(e)) != Some(p(g.compose(f, e))) {
                return Err(ReconstructError::VarianceInconsistent(component[0]));
            }
        }
    }
    Ok((morphisms.into_iter().map(|f| (f, p(f))).collect(), variance))
}

/// Builds the isomorphism `G -> H` from `Psi : Sd_{<=2} G -> Sd_{<=2} H`.
pub fn assemble(
    psi: &Functor,
    g: &FinGroupoid,
    h: &FinGroupoid,
    sd_g: &SdCategory,
    sd_h: &SdCategory,
) -> Result<Assembly, ReconstructError> {
    let map = extract_psi(psi, g, h, sd_g, sd_h)?;
    let h_components = h.connected_components();
    let component_of = |y: ObjectId| h_components.iter().position(|c| c.contains(&y)).unwrap();
    let mut morphisms = vec![usize::MAX; g.morphism_count()];
    let mut components = Vec::new();
    for comp in g.connected_components() {
        let target = component_of(map.objects[comp[0]]);
        if h_components[target].len() != comp.len()
            || comp.iter().any(|&x| component_of(map.objects[x]) != target)
        {
            return Err(ReconstructError::ComponentMismatch(comp[0]));
        }
        let (pairs, variance) = if comp.len() == 1 {
            group_case(&map, g, h, comp[0])?
        } else {
            multiobject_case(&map, g, h, &comp)?
        };
        for (f, t) in pairs {
            morphisms[f] = t;
        }
        components.push((comp, variance));
    }
    let functor = Functor {
        objects: map.objects,
        morphisms,
    };
    if !functor.is_isomorphism(g, h) {
        let why = functor
            .check(g, h)
            .err()
            .map_or("not bijective".to_string(), |e| e.to_string());
        return Err(ReconstructError::Verification(why));
    }
    Ok(Assembly { functor, components })
}
