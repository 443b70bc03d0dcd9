//! Small named categories used throughout the tests and the CLI.

use std::collections::BTreeMap;

use super::{coproduct, product, FinCategory, MorphismId, ObjectId};

/// A one-object category from a multiplication on `0..order`, where `0` is the unit
/// and `mul(a, b)` is `a o b`.
pub fn group_from_fn(order: usize, mul: impl Fn(usize, usize) -> usize) -> FinCategory {
    assert!(order >= 1);
    FinCategory::from_fn(1, vec![0; order], vec![0; order], mul)
        .expect("one-object table is well-formed")
}

/// `Z/n` with element `k` standing for `r^k`.
pub fn cyclic_group(n: usize) -> FinCategory {
    group_from_fn(n, |a, b| (a + b) % n)
}

/// The dihedral group of order `2n`: `r^i` has id `i`, and `r^i s` has id `n + i`.
pub fn dihedral_group(n: usize) -> FinCategory {
    assert!(n >= 1);
    let split = |x: usize| (x % n, x / n);
    group_from_fn(2 * n, |a, b| {
        let (i, e) = split(a);
        let (j, d) = split(b);
        // r^i s^e r^j s^d = r^(i + (-1)^e j) s^(e + d)
        let k = if e == 0 { i + j } else { i + n - j };
        (k % n) + n * ((e + d) % 2)
    })
}

/// `Z/2 x Z/2` with bit encoding.
pub fn klein_four() -> FinCategory {
    group_from_fn(4, |a, b| a ^ b)
}

/// The quaternion group. Ids: `1, -1, i, -i, j, -j, k, -k`.
pub fn quaternion_group() -> FinCategory {
    // unit index (0..4 for 1,i,j,k) and sign
    fn split(x: usize) -> (usize, bool) {
        (x / 2, x % 2 == 1)
    }
    // products of units 1,i,j,k as (unit, negative)
    const UNIT: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    group_from_fn(8, |a, b| {
        let (u, su) = split(a);
        let (v, sv) = split(b);
        let (w, sw) = UNIT[u][v];
        2 * w + usize::from(su ^ sv ^ sw)
    })
}

/// `Z/p x| Z/q` where the generator of `Z/q` acts by multiplication by `r`.
/// Element `(a, b)` has id `a + p b`.
pub fn semidirect_cyclic(p: usize, q: usize, r: usize) -> FinCategory {
    assert_eq!(pow_mod(r, q, p), 1 % p, "r must have order dividing q mod p");
    group_from_fn(p * q, |x, y| {
        let (a1, b1) = (x % p, x / p);
        let (a2, b2) = (y % p, y / p);
        let a = (a1 + pow_mod(r, b1, p) * a2) % p;
        a + p * ((b1 + b2) % q)
    })
}

fn pow_mod(base: usize, exp: usize, m: usize) -> usize {
    (0..exp).fold(1 % m, |acc, _| acc * base % m)
}

/// The nonabelian group of order 21.
pub fn frobenius_21() -> FinCategory {
    semidirect_cyclic(7, 3, 2)
}

/// `n` objects with exactly one morphism between any two.
///
/// The morphism `i -> j` with `i != j` is numbered after the identities in
/// lexicographic order of `(i, j)`.
pub fn pair_groupoid(n: usize) -> FinCategory {
    let mut arrows: Vec<(ObjectId, ObjectId)> = (0..n).map(|i| (i, i)).collect();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                arrows.push((i, j));
            }
        }
    }
    from_thin(n, arrows)
}

/// `n` objects and only identities.
pub fn discrete(n: usize) -> FinCategory {
    FinCategory::from_fn(n, (0..n).collect(), (0..n).collect(), |g, _| g)
        .expect("discrete category is well-formed")
}

/// The poset `0 < 1 < ... < n`.
pub fn poset_interval(n: usize) -> FinCategory {
    let mut arrows: Vec<(ObjectId, ObjectId)> = (0..=n).map(|i| (i, i)).collect();
    for i in 0..=n {
        for j in i + 1..=n {
            arrows.push((i, j));
        }
    }
    from_thin(n + 1, arrows)
}

/// `k` arrows between `k + 1` objects with alternating directions, starting with
/// `0 -> 1`. `zigzag(2)` is `0 -> 1 <- 2`.
pub fn zigzag(k: usize) -> FinCategory {
    let mut arrows: Vec<(ObjectId, ObjectId)> = (0..=k).map(|i| (i, i)).collect();
    for i in 0..k {
        arrows.push(if i % 2 == 0 { (i, i + 1) } else { (i + 1, i) });
    }
    from_thin(k + 1, arrows)
}

/// A category with at most one morphism between two objects, given by its arrows.
/// The first `n` arrows must be the identities. Transitivity is the caller's job.
pub fn from_thin(n: usize, arrows: Vec<(ObjectId, ObjectId)>) -> FinCategory {
    let index: BTreeMap<(ObjectId, ObjectId), MorphismId> =
        arrows.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let dom = arrows.iter().map(|p| p.0).collect();
    let cod = arrows.iter().map(|p| p.1).collect();
    FinCategory::from_fn(n, dom, cod, |g, f| index[&(arrows[f].0, arrows[g].1)])
        .expect("thin category is well-formed")
}

/// Named builder lookup shared by the JSON shorthand and the CLI.
pub fn by_name(name: &str, n: Option<usize>) -> Option<FinCategory> {
    let need = || n;
    Some(match name {
        "cyclic" => cyclic_group(need()?.max(1)),
        "dihedral" => dihedral_group(need()?.max(1)),
        "klein" | "klein_four" => klein_four(),
        "quaternion" => quaternion_group(),
        "frobenius21" => frobenius_21(),
        "pair_groupoid" => pair_groupoid(need()?),
        "discrete" => discrete(need()?),
        "poset_interval" | "interval" => poset_interval(need()?),
        "zigzag" => zigzag(need()?),
        "vertex_z2" => product(&pair_groupoid(n.unwrap_or(2)), &cyclic_group(2)),
        _ => return None,
    })
}

/// Shorthand for disjoint unions of owned parts.
pub fn disjoint_union(parts: &[FinCategory]) -> FinCategory {
    let refs: Vec<&FinCategory> = parts.iter().collect();
    coproduct(&refs).0
}
