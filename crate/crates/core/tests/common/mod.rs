#![allow(dead_code)]

use subdiv::fincat::{FinCategory, Functor, MorphismId, ObjectId};
use subdiv::subdivision::{SdCategory, Simplex};

/// Copies `c` with objects renamed by `objects` and non-identities by `others`
/// (a permutation of `0..non_identity_count`). Returns the copy and the
/// isomorphism onto it.
pub fn relabel(c: &FinCategory, objects: &[ObjectId], others: &[usize]) -> (FinCategory, Functor) {
    let n = c.object_count();
    let new_id = |f: MorphismId| if f < n { objects[f] } else { n + others[f - n] };
    let forward: Vec<MorphismId> = c.morphisms().map(new_id).collect();
    let mut back = vec![0; forward.len()];
    for (f, &g) in forward.iter().enumerate() {
        back[g] = f;
    }
    let dom = back.iter().map(|&f| objects[c.dom(f)]).collect();
    let cod = back.iter().map(|&f| objects[c.cod(f)]).collect();
    let copy = FinCategory::from_fn(n, dom, cod, |g, f| forward[c.compose(back[g], back[f])])
        .expect("relabelled table is well-formed");
    let iso = Functor {
        objects: objects.to_vec(),
        morphisms: forward,
    };
    (copy, iso)
}

/// The object `<f>` of a subdivision.
pub fn edge(c: &FinCategory, sd: &SdCategory, f: MorphismId) -> ObjectId {
    sd.object_of(&Simplex::chain(c, vec![f])).expect("1-simplex present")
}

pub fn endos(c: &FinCategory, x: ObjectId) -> Vec<MorphismId> {
    c.hom(x, x).into_iter().filter(|&f| !c.is_identity(f)).collect()
}

/// Every bijection `a -> b` that is a functor, by trying all permutations of
/// morphisms. Only usable for a handful of morphisms.
pub fn brute_isomorphisms(a: &FinCategory, b: &FinCategory) -> Vec<Functor> {
    let mut out = Vec::new();
    if a.object_count() != b.object_count() || a.morphism_count() != b.morphism_count() {
        return out;
    }
    let m = a.morphism_count();
    let mut perm: Vec<usize> = (0..m).collect();
    permute(&mut perm, 0, &mut |p| {
        // Objects are read off the identities.
        let objects: Vec<ObjectId> = a.objects().map(|x| p[x]).collect();
        if objects.iter().any(|&y| y >= b.object_count()) {
            return;
        }
        let f = Functor {
            objects,
            morphisms: p.to_vec(),
        };
        if f.is_isomorphism(a, b) {
            out.push(f);
        }
    });
    out.sort();
    out
}

fn permute(v: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, visit);
        v.swap(k, i);
    }
}
