mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use subdiv::delta::{DeltaMap, VertexSet};
use subdiv::fincat::builders::*;
use subdiv::fincat::{validate_category, FinCategory, Functor};
use subdiv::oracle::{automorphism_group, corpus, IsoSearchConfig};
use subdiv::subdivision::*;

fn sd(c: &FinCategory, t: Truncation) -> SdCategory {
    build_sd(c, t).unwrap()
}

/// `theta* y` for a monotone `theta : [k] -> [dim y]`, computed from the chain.
fn act(c: &FinCategory, theta: &DeltaMap, y: &Simplex) -> Simplex {
    let v = theta.values();
    let arrows = v
        .windows(2)
        .map(|w| {
            (w[0]..w[1]).fold(c.identity(y.vertex(c, w[0])), |acc, i| c.compose(y.arrows[i], acc))
        })
        .collect();
    Simplex {
        start: y.vertex(c, v[0]),
        arrows,
    }
}

fn maps(m: usize, n: usize) -> Vec<DeltaMap> {
    let mut out = Vec::new();
    let mut v = vec![0; m + 1];
    'outer: loop {
        if v.windows(2).all(|w| w[0] <= w[1]) {
            out.push(DeltaMap::new(v.clone(), n).unwrap());
        }
        for i in 0..=m {
            v[i] += 1;
            if v[i] <= n {
                continue 'outer;
            }
            v[i] = 0;
        }
        return out;
    }
}

/// `|hom(x, y)|` in `Sd C` straight from the definition: pairs `(sigma, nu)` of an
/// epi onto `[dim x]` and a mono into `[dim y]` with `sigma* x = nu* y`.
fn hom_by_definition(c: &FinCategory, x: &Simplex, y: &Simplex) -> usize {
    let (m, n) = (x.dim(), y.dim());
    let mut count = 0;
    for k in m..=n {
        for sigma in maps(k, m).into_iter().filter(DeltaMap::is_epi) {
            let left = act(c, &sigma, x);
            count += maps(k, n)
                .into_iter()
                .filter(|nu| nu.is_mono() && act(c, nu, y) == left)
                .count();
        }
    }
    count
}

#[test]
fn hom_sets_match_the_definition() {
    let cases = [
        (dihedral_group(3), Truncation::Upto(2)),
        (vertex_z(), Truncation::Upto(2)),
        (cyclic_group(2), Truncation::Upto(3)),
        (zigzag(3), Truncation::Full),
        (poset_interval(3), Truncation::Full),
        (product(), Truncation::Full),
    ];
    for (c, t) in cases {
        let s = sd(&c, t);
        let cat = s.category();
        for x in cat.objects() {
            for y in cat.objects() {
                let want = hom_by_definition(&c, s.simplex(x), s.simplex(y));
                assert_eq!(cat.hom_count(x, y), want, "{c:?}: {:?} -> {:?}", s.simplex(x), s.simplex(y));
            }
        }
    }
}

fn vertex_z() -> FinCategory {
    subdiv::oracle::vertex_z2()
}

/// The square `[1] x [1]`, which has two non-degenerate 2-simplices.
fn product() -> FinCategory {
    subdiv::fincat::product(&poset_interval(1), &poset_interval(1))
}

#[test]
fn subdivisions_are_categories() {
    for e in corpus() {
        let s = sd(&e.groupoid, Truncation::Upto(2));
        assert!(validate_category(s.category()).is_empty(), "{}", e.name);
    }
    for c in [poset_interval(3), zigzag(4), product()] {
        assert!(validate_category(sd(&c, Truncation::Full).category()).is_empty());
    }
}

#[test]
fn composites_shrink_vertex_sets() {
    let s = sd(&dihedral_group(3), Truncation::Upto(2));
    let c = s.category();
    for (g, f, gf) in c.triples() {
        let (sg, sgf) = (s.morphism(g).subset, s.morphism(gf).subset);
        assert_eq!(sgf.bits() & !sg.bits(), 0, "{g} o {f}");
        assert_eq!(s.morphism(gf).source, s.morphism(f).source);
    }
}

#[test]
fn labels_are_consistent() {
    let d3 = dihedral_group(3);
    let s = sd(&d3, Truncation::Upto(2));
    for f in s.category().morphisms() {
        let l = s.morphism(f);
        let y = s.simplex(l.target);
        let (root, eta) = nondeg_root(&d3, &restrict_simplex(&d3, y, l.subset));
        assert_eq!(&root, s.simplex(l.source));
        assert_eq!(eta, l.epi);
        assert_eq!(s.morphism_into(l.target, l.subset), f);
    }
}

#[test]
fn counting_lemma_for_groups() {
    for n in 2..=7 {
        let s = sd(&cyclic_group(n), Truncation::Upto(2));
        let k = n - 1;
        assert_eq!(s.category().object_count(), 1 + k + k * k);
        assert_eq!(s.category().morphism_count(), 1 + 3 * k + 7 * k * k);
        for y in s.category().objects() {
            assert_eq!(s.category().incoming(y).len(), (1 << (s.dim(y) + 1)) - 1);
        }
    }
}

#[test]
fn d3_example() {
    let d3 = dihedral_group(3);
    let s = sd(&d3, Truncation::Upto(2));
    assert_eq!((s.category().object_count(), s.category().morphism_count()), (31, 191));
    assert_eq!(s.objects_of_dim(0).count(), 1);
    assert_eq!(s.objects_of_dim(1).count(), 5);
    assert_eq!(s.objects_of_dim(2).count(), 25);
    let y = Simplex::chain(&d3, vec![1, 3]);
    assert_eq!(y.bar(|x| x.to_string(), |f| f.to_string()), "<3|1>");
    // the long edge of <s|r> is s r = r^2 s
    let long = restrict_simplex(&d3, &y, VertexSet(0b101));
    assert_eq!(long, Simplex::chain(&d3, vec![d3.compose(3, 1)]));
    assert_eq!(long.arrows, vec![5]);
}

#[test]
fn interval_subdivisions() {
    for n in 0..=4 {
        let s = sd(&poset_interval(n), Truncation::Full);
        let c = s.category();
        assert_eq!(c.object_count(), (1 << (n + 1)) - 1);
        assert_eq!(c.morphism_count(), 3usize.pow(n as u32 + 1) - (1 << (n + 1)));
    }
}

#[test]
fn roots_delete_identities() {
    let z4 = cyclic_group(4);
    let chain = Simplex::chain(&z4, vec![1, 0, 2, 0]);
    let (root, eta) = nondeg_root(&z4, &chain);
    assert_eq!(root, Simplex::chain(&z4, vec![1, 2]));
    assert_eq!(eta.values(), &[0, 1, 1, 2, 2]);
    assert!(eta.is_epi());
}

#[test]
fn truncation_errors() {
    assert_eq!(build_sd(&cyclic_group(2), Truncation::Full).unwrap_err(), SdError::NotLoopFree);
    assert!(matches!(build_sd(&cyclic_group(2), Truncation::Upto(99)), Err(SdError::TooDeep(_))));
    assert_eq!("full".parse::<Truncation>(), Ok(Truncation::Full));
    assert_eq!("2".parse::<Truncation>(), Ok(Truncation::Upto(2)));
    assert!("two".parse::<Truncation>().is_err());
    // a functor landing outside the truncation of the target
    let z2 = cyclic_group(2);
    let s1 = sd(&z2, Truncation::Upto(2));
    let s0 = sd(&z2, Truncation::Upto(1));
    let id = Functor::identity(&z2);
    assert!(matches!(sd_of_functor(&id, &z2, &z2, &s1, &s0), Err(SdError::TruncationMismatch(..))));
}

#[test]
fn sd_is_a_functor_on_automorphisms() {
    for c in [dihedral_group(3), pair_groupoid(3), klein_four()] {
        let s = sd(&c, Truncation::Upto(2));
        let auts = automorphism_group(&c, &IsoSearchConfig::default()).unwrap().isomorphisms;
        assert_eq!(
            sd_of_functor(&Functor::identity(&c), &c, &c, &s, &s).unwrap(),
            Functor::identity(s.category())
        );
        let images: Vec<Functor> = auts.iter().map(|f| sd_of_functor(f, &c, &c, &s, &s).unwrap()).collect();
        for (f, sf) in auts.iter().zip(&images) {
            assert!(sf.is_isomorphism(s.category(), s.category()));
            for (g, sg) in auts.iter().zip(&images) {
                let sfg = sd_of_functor(&f.after(g), &c, &c, &s, &s).unwrap();
                assert_eq!(sfg, sf.after(sg));
            }
        }
        // Sd is faithful on automorphisms
        assert_eq!(images.iter().collect::<BTreeSet<_>>().len(), auts.len());
    }
}

#[test]
fn sd_of_a_collapsing_functor() {
    // [2] -> [1] sending 0, 1 to 0 and 2 to 1; the arrow 0 -> 1 becomes an identity.
    let (b, c) = (poset_interval(2), poset_interval(1));
    let arrow = |x: usize, y: usize, cat: &FinCategory| cat.hom(x, y)[0];
    let objects = vec![0, 0, 1];
    let morphisms = b
        .morphisms()
        .map(|f| arrow(objects[b.dom(f)], objects[b.cod(f)], &c))
        .collect();
    let f = Functor { objects, morphisms };
    assert!(f.is_functor(&b, &c));
    let (sb, sc) = (sd(&b, Truncation::Full), sd(&c, Truncation::Full));
    let sf = sd_of_functor(&f, &b, &c, &sb, &sc).unwrap();
    assert!(sf.is_functor(sb.category(), sc.category()));
    // the top simplex <1->2|0->1> drops to the edge <0->1> of [1]
    let top = sb.objects_of_dim(2).next().unwrap();
    assert_eq!(sc.dim(sf.objects[top]), 1);
    // exhaustively: every composable pair is preserved
    for (g, h, gh) in sb.category().triples() {
        assert_eq!(sc.category().comp(sf.morphisms[g], sf.morphisms[h]), Some(sf.morphisms[gh]));
    }
}

#[test]
fn sd_of_a_quotient_of_groups_is_not_a_functor() {
    let z4 = cyclic_group(4);
    let z2 = cyclic_group(2);
    let quotient = Functor {
        objects: vec![0],
        morphisms: vec![0, 1, 0, 1],
    };
    assert!(quotient.is_functor(&z4, &z2));
    let (s4, s2) = (sd(&z4, Truncation::Upto(2)), sd(&z2, Truncation::Upto(2)));
    assert!(matches!(sd_of_functor(&quotient, &z4, &z2, &s4, &s2), Err(SdError::Functor(_))));
    // the obstruction: <pt> -> <2> -> <1|1> and <pt> -> <1> -> <1|1>
    let y = s2.object_of(&Simplex::chain(&z2, vec![1, 1])).unwrap();
    assert_eq!(s2.category().hom_count(0, y), 4);
}

#[test]
fn alpha_is_an_involutive_automorphism() {
    for e in corpus() {
        let s = sd(&e.groupoid, Truncation::Upto(2));
        let a = alpha(&e.groupoid, &s).unwrap();
        assert!(a.is_isomorphism(s.category(), s.category()), "{}", e.name);
        assert_eq!(a.after(&a), Functor::identity(s.category()), "{}", e.name);
    }
}

#[test]
fn alpha_is_not_induced_on_d3() {
    let g = dihedral_group(3).as_groupoid().unwrap();
    let s = sd(&g, Truncation::Upto(2));
    let a = alpha(&g, &s).unwrap();
    for xi in automorphism_group(&g, &IsoSearchConfig::default()).unwrap().isomorphisms {
        assert_ne!(sd_of_functor(&xi, &g, &g, &s, &s).unwrap(), a);
    }
}

#[test]
fn opposite_isomorphism_for_groupoids() {
    for e in corpus() {
        let g = e.groupoid.category();
        let gop = g.opposite();
        let (s, sop) = (sd(g, Truncation::Upto(2)), sd(&gop, Truncation::Upto(2)));
        let iso = op_iso(g, &s, &sop).unwrap();
        assert!(iso.is_isomorphism(s.category(), sop.category()), "{}", e.name);
    }
}

#[test]
fn coproducts_commute_with_sd() {
    let parts = vec![dihedral_group(3), pair_groupoid(2), discrete(1)];
    let c = sd_coproduct_iso(&parts, Truncation::Upto(2)).unwrap();
    assert!(c.iso.is_isomorphism(&c.sum_of_sds, c.sd_of_sum.category()));
    let posets = vec![zigzag(2), poset_interval(2)];
    let c = sd_coproduct_iso(&posets, Truncation::Full).unwrap();
    assert!(c.iso.is_isomorphism(&c.sum_of_sds, c.sd_of_sum.category()));
}

#[test]
fn second_subdivision_is_a_poset() {
    for c in [zigzag(2), poset_interval(2), product(), cyclic_group(2)] {
        let once = sd(&c, Truncation::Upto(2));
        let twice = sd(once.category(), Truncation::Full);
        let t = twice.category();
        assert!(t.objects().all(|x| t.objects().all(|y| t.hom_count(x, y) <= 1)));
        assert!(t.is_loop_free());
    }
}

/// A random poset on `0..n`: a strict upper-triangular relation, transitively closed.
fn poset() -> impl Strategy<Value = FinCategory> {
    (1usize..6).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut rel = vec![vec![false; n]; n];
            for i in 0..n {
                rel[i][i] = true;
                for j in i + 1..n {
                    rel[i][j] = bits[i * n + j];
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if rel[i][k] && rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
            let mut arrows: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
            for i in 0..n {
                for j in i + 1..n {
                    if rel[i][j] {
                        arrows.push((i, j));
                    }
                }
            }
            from_thin(n, arrows)
        })
    })
}

/// The objects visited by a chain.
fn support(c: &FinCategory, s: &Simplex) -> BTreeSet<usize> {
    (0..=s.dim()).map(|i| s.vertex(c, i)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sd_of_a_poset_is_its_face_poset(c in poset()) {
        let s = sd(&c, Truncation::Full);
        let cat = s.category();
        prop_assert!(validate_category(cat).is_empty());
        for x in cat.objects() {
            for y in cat.objects() {
                let sub = support(&c, s.simplex(x)).is_subset(&support(&c, s.simplex(y)));
                prop_assert_eq!(cat.hom_count(x, y), usize::from(sub));
            }
        }
    }

    #[test]
    fn op_iso_on_posets(c in poset()) {
        let cop = c.opposite();
        let (s, sop) = (sd(&c, Truncation::Full), sd(&cop, Truncation::Full));
        let iso = op_iso(&c, &s, &sop).unwrap();
        prop_assert!(iso.is_isomorphism(s.category(), sop.category()));
    }

    #[test]
    fn sd_respects_relabelling(
        objects in Just((0..3).collect::<Vec<usize>>()).prop_shuffle(),
        others in Just((0..15).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let c = subdiv::fincat::product(&pair_groupoid(3), &cyclic_group(2));
        let (copy, iso) = common::relabel(&c, &objects, &others);
        let (s, t) = (sd(&c, Truncation::Upto(2)), sd(&copy, Truncation::Upto(2)));
        let sf = sd_of_functor(&iso, &c, &copy, &s, &t).unwrap();
        prop_assert!(sf.is_isomorphism(s.category(), t.category()));
        let back = sd_of_functor(&iso.inverse(), &copy, &c, &t, &s).unwrap();
        prop_assert_eq!(back.after(&sf), Functor::identity(s.category()));
    }
}
