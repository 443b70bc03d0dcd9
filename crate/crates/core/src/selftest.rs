//! The acceptance suite. Each criterion returns a one-line detail on success or a
//! reason on failure, and must finish inside its time budget.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use crate::fincat::builders::{
    cyclic_group, dihedral_group, klein_four, pair_groupoid, poset_interval, zigzag,
};
use crate::fincat::{FinCategory, FinGroupoid, Functor, MorphismId, ObjectId};
use crate::graphs::{build_ev_graph, enumerate_valid_assignments, Equation};
use crate::oracle::{
    automorphism_group, brute_triangle_census, corpus, extended_corpus, find_isomorphisms,
    CorpusEntry, IsoSearchConfig, SearchError,
};
use crate::probe::{CompositeRoute, ProbedCategory, Side};
use crate::reconstruct::assemble;
use crate::subdivision::{alpha, build_sd, sd_of_functor, SdCategory, Simplex, Truncation};

type Check = fn() -> Result<String, String>;

pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub budget: Duration,
    check: Check,
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "[{}] {:>2} {:<28} {:>8.2}s / {:>4}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, name, budget, check| Criterion { id, name, budget, check };
    vec![
        c(1, "counting lemma", secs(1), counting_lemma as Check),
        c(2, "Aut Sd[n] = S_(n+1)", secs(10), symmetric_automorphisms),
        c(3, "zigzag counterexample", secs(1), zigzag_counterexample),
        c(4, "appendix enumeration", secs(1), appendix_enumeration),
        c(5, "triangle census", secs(60), triangle_census),
        c(6, "commutativity criterion", secs(30), commutativity_criterion),
        c(7, "composite criterion", secs(60), composite_criterion),
        c(8, "reconstruction end-to-end", secs(600), reconstruction_end_to_end),
        c(9, "conservativity", secs(30), conservativity),
        c(10, "Z/4 vs Klein four", secs(60), negative_control),
        c(11, "alpha inequality", secs(60), alpha_inequality),
        c(12, "Sd^2 is a poset", secs(10), second_subdivision_poset),
    ]
}

pub fn run(criterion: &Criterion) -> CriterionResult {
    let start = Instant::now();
    let outcome = (criterion.check)();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if passed && elapsed > criterion.budget {
        passed = false;
        detail = format!("over time budget; {detail}");
    }
    CriterionResult {
        id: criterion.id,
        name: criterion.name,
        passed,
        detail,
        elapsed,
        budget: criterion.budget,
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    criteria().iter().map(run).collect()
}

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn sd2(c: &FinCategory) -> Result<SdCategory, String> {
    build_sd(c, Truncation::Upto(2)).map_err(|e| e.to_string())
}

/// The Sd object of the 1-simplex `<f>`, or `Identity` for identities.
fn side(g: &FinCategory, sd: &SdCategory, f: MorphismId) -> Side {
    if g.is_identity(f) {
        Side::Identity
    } else {
        Side::Edge(edge(g, sd, f))
    }
}

fn edge(g: &FinCategory, sd: &SdCategory, f: MorphismId) -> ObjectId {
    sd.object_of(&Simplex::chain(g, vec![f])).expect("1-simplices are present")
}

fn endos(g: &FinCategory, x: ObjectId) -> Vec<MorphismId> {
    g.hom(x, x).into_iter().filter(|&f| !g.is_identity(f)).collect()
}

fn all_entries() -> Vec<CorpusEntry> {
    corpus().into_iter().chain(extended_corpus()).collect()
}

fn counting_lemma() -> Result<String, String> {
    let sd = sd2(&dihedral_group(3))?;
    let c = sd.category();
    for y in c.objects() {
        let want = (1usize << (sd.dim(y) + 1)) - 1;
        let got = c.incoming(y).len();
        ensure(got == want, || format!("object {y} of dimension {} has {got} incoming", sd.dim(y)))?;
    }
    let probed = ProbedCategory::new(c).map_err(|e| e.to_string())?;
    ensure(c.objects().all(|y| probed.dim(y) == sd.dim(y)), || {
        "dimension read from counts disagrees with labels".into()
    })?;
    let (objects, morphisms) = (c.object_count(), c.morphism_count());
    ensure((objects, morphisms) == (31, 191), || {
        format!("{objects} objects and {morphisms} morphisms, expected 31 and 191")
    })?;
    Ok("31 objects, 191 morphisms, |mt y| in {1, 3, 7}".into())
}

fn symmetric_automorphisms() -> Result<String, String> {
    let mut orders = Vec::new();
    for (n, want) in [(1, 2), (2, 6), (3, 24)] {
        let sd = build_sd(&poset_interval(n), Truncation::Full).map_err(|e| e.to_string())?;
        let found = automorphism_group(sd.category(), &IsoSearchConfig::default())
            .map_err(|e| e.to_string())?;
        let got = found.isomorphisms.len();
        ensure(found.complete && got == want, || format!("|Aut Sd[{n}]| = {got}, expected {want}"))?;
        orders.push(got.to_string());
    }
    Ok(format!("orders {}", orders.join(", ")))
}

fn zigzag_counterexample() -> Result<String, String> {
    let z = zigzag(2);
    let zop = z.opposite();
    let sd = build_sd(&z, Truncation::Full).map_err(|e| e.to_string())?;
    let sd_op = build_sd(&zop, Truncation::Full).map_err(|e| e.to_string())?;
    let between_sds = find_isomorphisms(sd.category(), sd_op.category(), &IsoSearchConfig::default())
        .map_err(|e| e.to_string())?;
    let raw = find_isomorphisms(&z, &zop, &IsoSearchConfig::default()).map_err(|e| e.to_string())?;
    ensure(!between_sds.isomorphisms.is_empty(), || "Sd C and Sd C^op not isomorphic".into())?;
    ensure(raw.complete && raw.isomorphisms.is_empty(), || {
        format!("C and C^op: {} isomorphisms, complete {}", raw.isomorphisms.len(), raw.complete)
    })?;
    Ok(format!(
        "{} isomorphisms Sd C -> Sd C^op, none C -> C^op",
        between_sds.isomorphisms.len()
    ))
}

fn appendix_enumeration() -> Result<String, String> {
    const F: bool = false;
    const T: bool = true;
    let expected = vec![
        [F, F, F, F],
        [F, F, F, T],
        [F, F, T, F],
        [F, F, T, T],
        [F, T, F, F],
        [T, F, F, F],
    ];
    let got = enumerate_valid_assignments();
    ensure(got == expected, || format!("valid assignments {got:?}"))?;
    let all: Vec<(usize, usize)> = Equation::ALL.iter().flat_map(|e| e.edges().iter().copied()).collect();
    let distinct: BTreeSet<_> = all.iter().collect();
    ensure(all.len() == 28 && distinct.len() == 28, || {
        format!("{} edges, {} distinct", all.len(), distinct.len())
    })?;
    Ok("6 of 16 assignments valid, 28 disjoint edges".into())
}

fn triangle_census() -> Result<String, String> {
    let mut triples = 0usize;
    for entry in all_entries() {
        let g = entry.groupoid.category();
        let sd = sd2(g)?;
        let probed = ProbedCategory::new(sd.category()).map_err(|e| e.to_string())?;
        for x in g.objects() {
            let es = endos(g, x);
            for &f in &es {
                for &h_ in &es {
                    for &h in &es {
                        let want = brute_triangle_census(g, f, h_, h);
                        let got = probed.count_form(edge(g, &sd, f), edge(g, &sd, h_), side(g, &sd, h));
                        ensure(got == want, || {
                            format!("{}: ({f}, {h_}, {h}) probe {got}, table {want}", entry.name)
                        })?;
                        triples += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{triples} triples agree"))
}

/// The pair satisfies the hypotheses of the commutativity criterion.
fn generic_pair(g: &FinGroupoid, f: MorphismId, h: MorphismId) -> bool {
    f != h
        && f != g.inverse(h)
        && g.compose(f, f) != h
        && g.compose(h, h) != f
}

fn commutativity_criterion() -> Result<String, String> {
    let (mut pairs, mut commuting) = (0usize, 0usize);
    for entry in corpus() {
        let g = &entry.groupoid;
        let sd = sd2(g)?;
        let probed = ProbedCategory::new(sd.category()).map_err(|e| e.to_string())?;
        for x in g.objects() {
            for &f in &endos(g, x) {
                for &h in &endos(g, x) {
                    if !generic_pair(g, f, h) {
                        continue;
                    }
                    let table = g.compose(f, h) == g.compose(h, f);
                    let got = probed
                        .commutes(edge(g, &sd, f), edge(g, &sd, h))
                        .map_err(|e| format!("{}: ({f}, {h}): {e}", entry.name))?;
                    let ev = build_ev_graph(g, f, h, false);
                    let same_fiber = ev.fibers.iter().any(|c| c.contains(&0) && c.contains(&1));
                    ensure(got == table && same_fiber == table, || {
                        format!("{}: ({f}, {h}) probe {got}, table {table}, graph {same_fiber}", entry.name)
                    })?;
                    pairs += 1;
                    commuting += table as usize;
                }
            }
        }
    }
    Ok(format!("{pairs} pairs agree, {commuting} commuting"))
}

fn composite_criterion() -> Result<String, String> {
    let mut routes: BTreeSet<CompositeRoute> = BTreeSet::new();
    let mut pairs = 0usize;
    for entry in all_entries() {
        let g = &entry.groupoid;
        let sd = sd2(g)?;
        let probed = ProbedCategory::new(sd.category()).map_err(|e| e.to_string())?;
        for f in g.non_identities() {
            for h in g.non_identities() {
                let want: BTreeSet<Side> = [g.comp(f, h), g.comp(h, f)]
                    .into_iter()
                    .flatten()
                    .map(|c| side(g, &sd, c))
                    .collect();
                if want.is_empty() {
                    continue;
                }
                let cert = probed
                    .composite_pair_set(edge(g, &sd, f), edge(g, &sd, h))
                    .map_err(|e| format!("{}: ({f}, {h}): {e}", entry.name))?;
                ensure(cert.composites == want, || {
                    format!("{}: ({f}, {h}) via {:?}: {:?}, expected {want:?}", entry.name, cert.route, cert.composites)
                })?;
                routes.insert(cert.route);
                pairs += 1;
            }
        }
    }
    let required = [
        CompositeRoute::Case1 { commuting: true },
        CompositeRoute::Case1 { commuting: false },
        CompositeRoute::Case2 { commuting: false },
        CompositeRoute::Case3 { commuting: false },
        CompositeRoute::Case4 { commuting: true, squares_inverse: false },
        CompositeRoute::Case4 { commuting: false, squares_inverse: true },
        CompositeRoute::Case4 { commuting: false, squares_inverse: false },
    ];
    let missing: Vec<_> = required.iter().filter(|r| !routes.contains(r)).collect();
    ensure(missing.is_empty(), || format!("branches never reached: {missing:?}"))?;
    Ok(format!("{pairs} composable pairs, {} distinct branches", routes.len()))
}

fn reconstruction_end_to_end() -> Result<String, String> {
    let entries = corpus();
    let sds = entries.iter().map(|e| sd2(&e.groupoid)).collect::<Result<Vec<_>, _>>()?;
    let config = IsoSearchConfig::with_limit(50);
    let (mut psis, mut iso_pairs) = (0usize, 0usize);
    for (i, left) in entries.iter().enumerate() {
        for (j, right) in entries.iter().enumerate() {
            let found = find_isomorphisms(sds[i].category(), sds[j].category(), &config)
                .map_err(|e: SearchError| format!("{} -> {}: {e}", left.name, right.name))?;
            if found.isomorphisms.is_empty() {
                continue;
            }
            iso_pairs += 1;
            for psi in &found.isomorphisms {
                let p = assemble(psi, &left.groupoid, &right.groupoid, &sds[i], &sds[j])
                    .map_err(|e| format!("{} -> {}: {e}", left.name, right.name))?;
                ensure(p.functor.is_isomorphism(&left.groupoid, &right.groupoid), || {
                    format!("{} -> {}: result is not an isomorphism", left.name, right.name)
                })?;
                psis += 1;
            }
        }
    }
    Ok(format!(
        "{psis} Psi over {iso_pairs} isomorphic ordered pairs of {}, all assembled",
        entries.len() * entries.len()
    ))
}

fn conservativity() -> Result<String, String> {
    let mut checked = 0;
    for c in [dihedral_group(3), pair_groupoid(3)] {
        let g = c.as_groupoid().expect("groupoid");
        let sd = sd2(&g)?;
        let auts = automorphism_group(&g, &IsoSearchConfig::default()).map_err(|e| e.to_string())?;
        ensure(auts.complete && auts.isomorphisms.len() == 6, || {
            format!("|Aut| = {}", auts.isomorphisms.len())
        })?;
        for f in &auts.isomorphisms {
            let sd_f = sd_of_functor(f, &g, &g, &sd, &sd).map_err(|e| e.to_string())?;
            let p = assemble(&sd_f, &g, &g, &sd, &sd).map_err(|e| e.to_string())?;
            ensure(&p.functor == f, || format!("assemble(Sd F) = {:?}, F = {f:?}", p.functor))?;
            checked += 1;
        }
    }
    Ok(format!("assemble(Sd F) = F for {checked} automorphisms"))
}

fn negative_control() -> Result<String, String> {
    let a = sd2(&cyclic_group(4))?;
    let b = sd2(&klein_four())?;
    let found = find_isomorphisms(a.category(), b.category(), &IsoSearchConfig::default())
        .map_err(|e| e.to_string())?;
    // Again with no invariant pruning, so the verdict does not rest on the filters.
    let bare = IsoSearchConfig {
        degree_profile: false,
        hom_profile: false,
        hom_matrix: false,
        ..IsoSearchConfig::default()
    };
    let unpruned = find_isomorphisms(a.category(), b.category(), &bare).map_err(|e| e.to_string())?;
    for run in [&found, &unpruned] {
        ensure(run.complete && run.isomorphisms.is_empty(), || {
            format!("{} isomorphisms, complete {}", run.isomorphisms.len(), run.complete)
        })?;
    }
    Ok(format!(
        "no isomorphism; exhaustive after {} nodes, {} without pruning",
        found.nodes, unpruned.nodes
    ))
}

fn alpha_inequality() -> Result<String, String> {
    let g = dihedral_group(3).as_groupoid().expect("group");
    let sd = sd2(&g)?;
    let aut_sd = automorphism_group(sd.category(), &IsoSearchConfig::default()).map_err(|e| e.to_string())?;
    let aut_g = automorphism_group(&g, &IsoSearchConfig::default()).map_err(|e| e.to_string())?;
    let bound = 2 * aut_g.isomorphisms.len();
    ensure(aut_sd.isomorphisms.len() >= bound, || {
        format!("|Aut Sd_<=2 D3| = {} < {bound}", aut_sd.isomorphisms.len())
    })?;
    let a = alpha(&g, &sd).map_err(|e| e.to_string())?;
    let images: Vec<Functor> = aut_g
        .isomorphisms
        .iter()
        .map(|xi| sd_of_functor(xi, &g, &g, &sd, &sd))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(!images.contains(&a), || "alpha equals Sd of an automorphism".into())?;
    Ok(format!(
        "|Aut Sd_<=2 D3| = {} >= {bound}, alpha not in Sd(Aut D3)",
        aut_sd.isomorphisms.len()
    ))
}

fn second_subdivision_poset() -> Result<String, String> {
    let mut sizes = Vec::new();
    for c in [zigzag(2), poset_interval(2)] {
        let once = build_sd(&c, Truncation::Full).map_err(|e| e.to_string())?;
        let twice = build_sd(once.category(), Truncation::Full).map_err(|e| e.to_string())?;
        let sd2c = twice.category();
        let thin = sd2c.objects().all(|x| sd2c.objects().all(|y| sd2c.hom_count(x, y) <= 1));
        ensure(thin && sd2c.is_loop_free(), || "Sd^2 has a parallel pair or a loop".into())?;
        sizes.push(sd2c.object_count().to_string());
    }
    Ok(format!("Sd^2 thin with {} objects", sizes.join(" and ")))
}
