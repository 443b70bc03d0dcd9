use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use subdiv::fincat::builders::{dihedral_group, zigzag};
use subdiv::fincat::json::{from_json, to_json};
use subdiv::fincat::{validate_category, FinCategory, FinGroupoid, Functor};
use subdiv::graphs::{enumerate_valid_assignments, equation_subgraph_table, Equation, LABELS, VERTICES};
use subdiv::oracle::{find_isomorphisms, IsoSearchConfig, SearchError};
use subdiv::probe::{ProbedCategory, Side};
use subdiv::reconstruct::{assemble, Variance};
use subdiv::selftest;
use subdiv::subdivision::{build_sd, SdCategory, Simplex, Truncation};

/// Barycentric subdivisions of finite categories and recovery of groupoids.
///
/// Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.
#[derive(Parser)]
#[command(name = "subdiv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the category axioms of a JSON category.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Build a (truncated) subdivision.
    Sd {
        #[arg(long = "in")]
        input: PathBuf,
        /// Dimension bound, or `full` for loop-free categories.
        #[arg(long, default_value = "2")]
        trunc: Truncation,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Search for isomorphisms between two categories, or between their
    /// subdivisions when `--trunc` is given. Exits 1 when there are none.
    Iso {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        trunc: Option<Truncation>,
        /// Stop after this many isomorphisms.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Turn isomorphisms `Sd_<=2 G -> Sd_<=2 H` into isomorphisms `G -> H`.
    Reconstruct {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// A functor `Sd_<=2 G -> Sd_<=2 H` as `{"objects": [..], "morphisms": [..]}`.
        #[arg(long, conflicts_with = "search")]
        psi: Option<PathBuf>,
        /// Find the subdivision isomorphisms by search (the default).
        #[arg(long)]
        search: bool,
        /// Only use the search result with this index.
        #[arg(long, conflicts_with = "psi")]
        index: Option<usize>,
        #[arg(long, default_value_t = 50)]
        limit: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Print the equation table and the valid truth assignments.
    Appendix {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Walk through the D3 and zigzag examples.
    Demo,
    /// Run the acceptance suite. Exits 0 iff every criterion passes.
    Selftest {
        /// Only run these criteria.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        only: Vec<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` is a verification failure, `Err` a usage or input error.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Validate { input, format } => validate(&input, format),
        Command::Sd {
            input,
            trunc,
            out,
            format,
        } => {
            let c = load(&input)?;
            let sd = build_sd(&c, trunc).context("building the subdivision")?;
            emit(out.as_deref(), &render_sd(&sd, format))?;
            Ok(true)
        }
        Command::Iso {
            left,
            right,
            trunc,
            limit,
            out,
            format,
        } => iso(&left, &right, trunc, limit, out.as_deref(), format),
        Command::Reconstruct {
            left,
            right,
            psi,
            search: _,
            index,
            limit,
            out,
            format,
        } => reconstruct(&left, &right, psi.as_deref(), index, limit, out.as_deref(), format),
        Command::Appendix { format } => {
            print!("{}", appendix(format));
            Ok(true)
        }
        Command::Demo => {
            print!("{}", demo()?);
            Ok(true)
        }
        Command::Selftest { only } => {
            let mut all = true;
            for c in selftest::criteria() {
                if only.is_empty() || only.contains(&c.id) {
                    let r = selftest::run(&c);
                    println!("{r}");
                    all &= r.passed;
                }
            }
            println!("{}", if all { "all criteria passed" } else { "some criteria FAILED" });
            Ok(all)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> Result<FinCategory> {
    let (c, _) = from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(c)
}

fn load_groupoid(path: &Path) -> Result<FinGroupoid> {
    let c = load(path)?;
    let violations = validate_category(&c);
    if !violations.is_empty() {
        bail!("{} is not a category: {}", path.display(), violations[0]);
    }
    c.as_groupoid()
        .with_context(|| format!("{} is not a groupoid", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn validate(input: &Path, format: Format) -> Result<bool> {
    let text = read(input)?;
    let c = match from_json(&text) {
        Ok((c, _)) => c,
        Err(subdiv::fincat::json::JsonError::Syntax(e)) => bail!("parsing {}: {e}", input.display()),
        Err(e) => {
            println!("invalid: {e}");
            return Ok(false);
        }
    };
    let violations = validate_category(&c);
    let ok = violations.is_empty();
    let groupoid = ok && c.as_groupoid().is_some();
    let components = c.connected_components().len();
    if format == Format::Json {
        let doc = json!({
            "valid": ok,
            "objects": c.object_count(),
            "morphisms": c.morphism_count(),
            "groupoid": groupoid,
            "loop_free": ok && c.is_loop_free(),
            "components": components,
            "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        });
        println!("{doc}");
    } else if ok {
        println!(
            "valid: {} objects, {} morphisms, {components} components{}{}",
            c.object_count(),
            c.morphism_count(),
            if groupoid { ", groupoid" } else { "" },
            if c.is_loop_free() { ", loop-free" } else { "" },
        );
    } else {
        println!("invalid: {} violations", violations.len());
        for v in &violations {
            println!("  {v}");
        }
    }
    Ok(ok)
}

fn label(sd: &SdCategory, x: usize) -> String {
    sd.simplex(x).bar(|o| o.to_string(), |f| f.to_string())
}

fn render_sd(sd: &SdCategory, format: Format) -> String {
    let c = sd.category();
    match format {
        Format::Json => {
            let mut doc: Value = serde_json::from_str(&to_json(c)).expect("own output parses");
            let labels: Vec<Value> = c.objects().map(|x| label(sd, x).into()).collect();
            doc["simplices"] = labels.into();
            doc["truncation"] = sd.truncation().to_string().into();
            format!("{doc}\n")
        }
        Format::Dot => {
            // Codimension-one faces only; the rest follow by composition.
            let mut out = String::from("digraph sd {\n  rankdir=BT;\n");
            for x in c.objects() {
                let _ = writeln!(out, "  n{x} [label=\"{}\"];", label(sd, x));
            }
            for f in c.non_identities() {
                let (s, t) = (c.dom(f), c.cod(f));
                if sd.dim(s) + 1 == sd.dim(t) {
                    let _ = writeln!(out, "  n{s} -> n{t};");
                }
            }
            out.push_str("}\n");
            out
        }
        Format::Text => {
            let mut out = format!(
                "Sd_{} : {} objects, {} morphisms\n",
                sd.truncation(),
                c.object_count(),
                c.morphism_count()
            );
            let top = c.objects().map(|x| sd.dim(x)).max().unwrap_or(0);
            for d in 0..=top {
                let xs: Vec<String> = sd.objects_of_dim(d).map(|x| format!("{x}:{}", label(sd, x))).collect();
                let _ = writeln!(out, "dim {d} ({}): {}", xs.len(), xs.join(" "));
            }
            out
        }
    }
}

fn search_config(limit: Option<usize>) -> IsoSearchConfig {
    limit.map_or_else(IsoSearchConfig::default, IsoSearchConfig::with_limit)
}

fn iso(
    left: &Path,
    right: &Path,
    trunc: Option<Truncation>,
    limit: Option<usize>,
    out: Option<&Path>,
    format: Format,
) -> Result<bool> {
    let (a, b) = (load(left)?, load(right)?);
    let (a, b) = match trunc {
        Some(t) => (
            build_sd(&a, t)?.category().clone(),
            build_sd(&b, t)?.category().clone(),
        ),
        None => (a, b),
    };
    let outcome = match find_isomorphisms(&a, &b, &search_config(limit)) {
        Ok(o) => o,
        Err(SearchError::BudgetExceeded(partial)) => {
            eprintln!("search budget exceeded after {} nodes", partial.nodes);
            partial
        }
    };
    let text = match format {
        Format::Text => {
            let mut s = format!(
                "{} isomorphisms ({}, {} nodes)\n",
                outcome.isomorphisms.len(),
                if outcome.complete { "complete" } else { "incomplete" },
                outcome.nodes
            );
            for f in &outcome.isomorphisms {
                let _ = writeln!(s, "objects {:?}", f.objects);
            }
            s
        }
        _ => format!(
            "{}\n",
            json!({
                "complete": outcome.complete,
                "nodes": outcome.nodes,
                "isomorphisms": outcome.isomorphisms,
            })
        ),
    };
    emit(out, &text)?;
    Ok(!outcome.isomorphisms.is_empty())
}

fn variance_name(v: Variance) -> &'static str {
    match v {
        Variance::Trivial => "trivial",
        Variance::Covariant => "covariant",
        Variance::Contravariant => "contravariant",
    }
}

#[allow(clippy::too_many_arguments)]
fn reconstruct(
    left: &Path,
    right: &Path,
    psi: Option<&Path>,
    index: Option<usize>,
    limit: usize,
    out: Option<&Path>,
    format: Format,
) -> Result<bool> {
    let (g, h) = (load_groupoid(left)?, load_groupoid(right)?);
    let (sd_g, sd_h) = (build_sd(&g, Truncation::Upto(2))?, build_sd(&h, Truncation::Upto(2))?);
    let (psis, complete): (Vec<Functor>, bool) = match psi {
        Some(p) => {
            let f: Functor = serde_json::from_str(&read(p)?).context("parsing the functor")?;
            (vec![f], true)
        }
        None => {
            let found = find_isomorphisms(sd_g.category(), sd_h.category(), &IsoSearchConfig::with_limit(limit))
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let complete = found.complete;
            let mut all = found.isomorphisms;
            if let Some(i) = index {
                if i >= all.len() {
                    bail!("index {i} out of range: {} isomorphisms found", all.len());
                }
                all = vec![all.swap_remove(i)];
            }
            (all, complete)
        }
    };
    let mut ok = !psis.is_empty();
    let mut results = Vec::new();
    let mut distinct = BTreeSet::new();
    let mut text = String::new();
    for (i, p) in psis.iter().enumerate() {
        match assemble(p, &g, &h, &sd_g, &sd_h) {
            Ok(a) => {
                let variances: Vec<&str> = a.components.iter().map(|(_, v)| variance_name(*v)).collect();
                let _ = writeln!(text, "psi {i}: P = {:?} [{}]", a.functor.morphisms, variances.join(", "));
                results.push(json!({"psi": i, "ok": true, "variance": variances, "functor": a.functor}));
                distinct.insert(a.functor);
            }
            Err(e) => {
                ok = false;
                let _ = writeln!(text, "psi {i}: FAILED {e}");
                results.push(json!({"psi": i, "ok": false, "error": e.to_string()}));
            }
        }
    }
    let _ = writeln!(
        text,
        "{} subdivision isomorphisms{}, {} distinct isomorphisms G -> H",
        psis.len(),
        if complete { "" } else { " (capped)" },
        distinct.len()
    );
    let rendered = match format {
        Format::Text => text,
        _ => format!(
            "{}\n",
            json!({
                "psi_count": psis.len(),
                "complete": complete,
                "distinct": distinct.len(),
                "results": results,
            })
        ),
    };
    emit(out, &rendered)?;
    Ok(ok)
}

fn appendix(format: Format) -> String {
    let table = equation_subgraph_table();
    let assignments = enumerate_valid_assignments();
    let names: Vec<String> = Equation::GENERATORS.iter().map(|e| e.text().to_string()).collect();
    if format == Format::Json {
        let rows: Vec<Value> = table
            .iter()
            .map(|(e, edges)| {
                let pairs: Vec<String> = edges.iter().map(|(a, b)| format!("{a} = {b}")).collect();
                json!({"equation": e.text(), "edges": pairs})
            })
            .collect();
        return format!(
            "{}\n",
            json!({"table": rows, "generators": names, "valid_assignments": assignments})
        );
    }
    let mut out = String::from("vertices:");
    for (l, v) in LABELS.iter().zip(VERTICES) {
        let _ = write!(out, " {l}={v}");
    }
    out.push('\n');
    let mut total = 0;
    for (e, _) in &table {
        let edges: Vec<String> = e
            .edges()
            .iter()
            .map(|&(i, j)| format!("{}{}", LABELS[i], LABELS[j]))
            .collect();
        total += edges.len();
        let _ = writeln!(out, "{:<12} {}", e.text(), edges.join(" "));
    }
    let _ = writeln!(out, "{total} edges");
    let _ = writeln!(out, "valid assignments to ({}):", names.join(", "));
    for a in &assignments {
        let row: Vec<&str> = a.iter().map(|&b| if b { "T" } else { "F" }).collect();
        let _ = writeln!(out, "  {}", row.join(" "));
    }
    let _ = writeln!(out, "{} of 16", assignments.len());
    out
}

fn demo() -> Result<String> {
    let mut out = String::new();
    let d3 = dihedral_group(3).as_groupoid().expect("group");
    let sd = build_sd(&d3, Truncation::Upto(2))?;
    let c = sd.category();
    let _ = writeln!(out, "D3: 6 elements; r^i has id i, r^i s has id 3 + i.");
    let _ = writeln!(
        out,
        "Sd_<=2 D3 has {} objects and {} morphisms.",
        c.object_count(),
        c.morphism_count()
    );
    for d in 0..=2 {
        let n = sd.objects_of_dim(d).count();
        let _ = writeln!(out, "  {n} simplices of dimension {d}, each with {} incoming morphisms", (1 << (d + 1)) - 1);
    }
    let probed = ProbedCategory::new(c)?;
    let edge = |f| sd.object_of(&Simplex::chain(&d3, vec![f])).expect("edge");
    let (r, r2, s) = (1, 2, 3);
    let _ = writeln!(out, "From morphism counts alone:");
    let _ = writeln!(
        out,
        "  triangles with sides {{r, r, r^2}}: {}",
        probed.count_form(edge(r), edge(r), Side::Edge(edge(r2)))
    );
    let _ = writeln!(out, "  inverse of <r> is {}", label(&sd, probed.inverse_of(edge(r))?));
    let _ = writeln!(out, "  r and s commute: {}", probed.commutes(edge(r), edge(s))?);
    let cert = probed.composite_pair_set(edge(r), edge(s))?;
    let names: Vec<String> = cert
        .composites
        .iter()
        .map(|x| match x {
            Side::Edge(e) => label(&sd, *e),
            Side::Identity => "id".into(),
        })
        .collect();
    let _ = writeln!(out, "  {{rs, sr}} = {{{}}} via {:?}", names.join(", "), cert.route);
    let found = find_isomorphisms(c, c, &IsoSearchConfig::default()).map_err(|e| anyhow::anyhow!("{e}"))?;
    let distinct: BTreeSet<Functor> = found
        .isomorphisms
        .iter()
        .map(|p| assemble(p, &d3, &d3, &sd, &sd).map(|a| a.functor))
        .collect::<Result<_, _>>()?;
    let _ = writeln!(
        out,
        "|Aut Sd_<=2 D3| = {}; they reconstruct to {} automorphisms of D3.",
        found.isomorphisms.len(),
        distinct.len()
    );

    let z = zigzag(2);
    let zop = z.opposite();
    let sd_z = build_sd(&z, Truncation::Full)?;
    let sd_zop = build_sd(&zop, Truncation::Full)?;
    let between = find_isomorphisms(sd_z.category(), sd_zop.category(), &IsoSearchConfig::default())
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let raw = find_isomorphisms(&z, &zop, &IsoSearchConfig::default()).map_err(|e| anyhow::anyhow!("{e}"))?;
    let _ = writeln!(out, "\nZigzag C = 0 -> 1 <- 2 and C^op = 0 <- 1 -> 2:");
    let _ = writeln!(out, "  isomorphisms Sd C -> Sd C^op: {}", between.isomorphisms.len());
    let _ = writeln!(out, "  isomorphisms C -> C^op: {}", raw.isomorphisms.len());
    let _ = writeln!(out, "  so Sd does not reflect isomorphisms outside groupoids.");
    Ok(out)
}
