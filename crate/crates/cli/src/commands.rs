use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use treecover::generate::{random_2_sparse_tree, random_orders};
use treecover::island::ScriptOp;
use treecover::verify::{run_suite, Suite, SuiteConfig};
use treecover::{
    certify_family_membership, duis, expand_tree, expansion_path_cover, is_2_sparse,
    is_general_2_sparse, labeling_from_cover, lambda_rho_of_complement, light_neighbor_formula,
    oracle_lambda, oracle_path_cover, oracle_rho, random_family_tree, random_tree,
    three_light_formula, tree_path_cover, ComplementLambda, Error, FamilyBudget, Graph, Labeling,
    OracleBudget, PathCovering,
};

use crate::{Command, Format, GenKind, Method, Verdict};

pub struct Outcome {
    pub results: Value,
    pub verdicts: Vec<Verdict>,
    pub text: String,
    pub dot: Option<String>,
    pub exit: u8,
}

impl Outcome {
    fn new(results: Value, text: String, dot: Option<String>, verdicts: Vec<Verdict>) -> Self {
        let exit = if verdicts.iter().all(|v| v.passed) {
            0
        } else {
            1
        };
        Outcome {
            results,
            verdicts,
            text,
            dot,
            exit,
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

pub fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Usage(_) | Failure::Core(Error::Parse { .. } | Error::InvalidGraph(_)) => 2,
        Failure::Core(_) => 1,
    }
}

pub fn run(command: &Command, input: Option<&str>) -> Result<Outcome, Failure> {
    let graph = || -> Result<Graph, Failure> { Ok(Graph::parse_auto(input.unwrap_or_default())?) };
    match command {
        Command::Pcover { method, orders, .. } => pcover(&graph()?, *method, orders.as_deref()),
        Command::Lambda {
            complement_of_input,
            ..
        } => lambda(&graph()?, *complement_of_input),
        Command::Duis { .. } => duis_cmd(&graph()?),
        Command::Islands { .. } => islands(&graph()?),
        Command::Gen {
            kind,
            n,
            arms,
            max_ops,
            max_vertices,
            max_order,
            seed,
            format,
        } => gen(
            *kind,
            *n,
            arms,
            *max_ops,
            *max_vertices,
            *max_order,
            *seed,
            *format,
        ),
        Command::Verify {
            suite,
            max_n,
            samples,
            seed,
        } => verify(suite, *max_n, *samples, *seed),
    }
}

fn check(name: &str, passed: bool, detail: impl Into<Option<String>>) -> Verdict {
    Verdict {
        check: name.to_string(),
        passed,
        detail: detail.into(),
    }
}

fn covering_text(out: &mut String, c: &PathCovering) {
    let _ = writeln!(out, "path sequence: {}", c.path_sequence());
    let _ = writeln!(out, "paths:");
    for p in &c.paths {
        let ids: Vec<String> = p.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "  {}", ids.join(" "));
    }
}

fn verdict_text(out: &mut String, verdicts: &[Verdict]) {
    for v in verdicts {
        let status = if v.passed { "ok" } else { "FAILED" };
        match &v.detail {
            Some(d) => {
                let _ = writeln!(out, "check {}: {status} ({d})", v.check);
            }
            None => {
                let _ = writeln!(out, "check {}: {status}", v.check);
            }
        }
    }
}

fn pcover(g: &Graph, method: Method, orders: Option<&[usize]>) -> Result<Outcome, Failure> {
    let method = match (method, orders) {
        (Method::Auto, Some(_)) => Method::CliqueExpansion,
        (Method::CliqueExpansion, None) => {
            return Err(Failure::Usage("theorem13 needs --orders".into()));
        }
        (m, Some(_)) if m != Method::CliqueExpansion => {
            return Err(Failure::Usage("--orders only applies to theorem13".into()));
        }
        (m, _) => m,
    };
    let mut verdicts = Vec::new();
    let mut host = g.clone();
    let mut details = json!({});
    let (name, p, covering): (&str, usize, Option<PathCovering>) = match method {
        Method::PtReduction => {
            let c = tree_path_cover(g)?;
            ("pt-reduction", c.count, Some(c.covering))
        }
        Method::LightNeighbor => {
            let (p, data) = light_neighbor_formula(g)?;
            details = serde_json::to_value(&data).expect("serializable");
            let c = tree_path_cover(g)?;
            verdicts.push(check(
                "matches pt-reduction",
                c.count == p,
                format!("reduction gives {}", c.count),
            ));
            ("theorem7", p, Some(c.covering))
        }
        Method::ThreeLight => {
            let p = three_light_formula(g)?;
            let witness = oracle_witness(g, p, &mut verdicts)?;
            ("theorem12", p, witness)
        }
        Method::CliqueExpansion => {
            let orders = orders.expect("checked above");
            let c = expansion_path_cover(g, orders)?;
            host = c.expansion.graph.clone();
            details = json!({ "orders": orders, "expansion_n": host.n(), "expansion_m": host.m() });
            ("theorem13", c.count, Some(c.covering))
        }
        Method::Oracle => {
            let r = oracle_path_cover(g, &OracleBudget::path_default())?;
            details = json!({ "sequences": r.sequences, "minimum_coverings": r.total_minimum });
            ("oracle", r.count, r.coverings.into_iter().next())
        }
        Method::Auto => {
            if g.is_tree() {
                let c = tree_path_cover(g)?;
                let s = g.stats();
                let formula = if g.n() < 2 {
                    None
                } else if is_2_sparse(g) {
                    Some(("two-sparse", s.leaves as i64 - 1))
                } else if is_general_2_sparse(g) {
                    Some((
                        "general-two-sparse",
                        s.leaves as i64 - s.heavy_edges as i64 - 1,
                    ))
                } else {
                    light_neighbor_formula(g)
                        .ok()
                        .map(|(p, _)| ("theorem7", p as i64))
                };
                if let Some((f, value)) = formula {
                    details = json!({ "formula": f, "formula_value": value });
                    verdicts.push(check(
                        &format!("{f} formula matches pt-reduction"),
                        value == c.count as i64,
                        format!("formula gives {value}"),
                    ));
                }
                ("pt-reduction", c.count, Some(c.covering))
            } else if let Ok(p) = three_light_formula(g) {
                let witness = oracle_witness(g, p, &mut verdicts)?;
                ("theorem12", p, witness)
            } else {
                let r = oracle_path_cover(g, &OracleBudget::path_default())?;
                details = json!({ "sequences": r.sequences });
                ("oracle", r.count, r.coverings.into_iter().next())
            }
        }
    };
    if let Some(c) = &covering {
        let ok = c.validate(&host).is_ok() && c.len() == p;
        verdicts.push(check("witness is a covering of size P", ok, None));
    }
    let mut text = format!("P = {p}\nmethod: {name}\n");
    if let Some(c) = &covering {
        covering_text(&mut text, c);
    }
    verdict_text(&mut text, &verdicts);
    let bold = covering
        .as_ref()
        .map(PathCovering::edges)
        .unwrap_or_default();
    let results = json!({
        "method": name,
        "p": p,
        "path_sequence": covering.as_ref().map(PathCovering::path_sequence),
        "covering": covering,
        "details": details,
    });
    Ok(Outcome::new(
        results,
        text,
        Some(host.to_dot_with(None, &bold)),
        verdicts,
    ))
}

/// An oracle covering backing a formula value, when the graph is small enough.
fn oracle_witness(
    g: &Graph,
    p: usize,
    verdicts: &mut Vec<Verdict>,
) -> Result<Option<PathCovering>, Failure> {
    let budget = OracleBudget::path_default();
    if g.n() > budget.max_n {
        return Ok(None);
    }
    let r = oracle_path_cover(g, &budget)?;
    verdicts.push(check(
        "matches oracle",
        r.count == p,
        format!("oracle gives {}", r.count),
    ));
    Ok(r.coverings.into_iter().next())
}

fn labels_of(f: &Labeling) -> Vec<String> {
    f.labels().iter().map(ToString::to_string).collect()
}

fn lambda(g: &Graph, complement_of_input: bool) -> Result<Outcome, Failure> {
    let target = if complement_of_input {
        g.complement()
    } else {
        g.clone()
    };
    let mut verdicts = Vec::new();
    // λ(H) via H = (H^c)^c when H^c has a usable path cover
    let through = if complement_of_input {
        g.clone()
    } else {
        g.complement()
    };
    let via_cover = match lambda_rho_of_complement(&through) {
        Ok(ComplementLambda::Exact(inv)) => Some(inv),
        Ok(_) | Err(Error::Resource(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let (lambda, rho, labeling, source) = match via_cover {
        Some(inv) => {
            let cert = inv.certificate.clone();
            if let Some(c) = &cert {
                let valid = treecover::validate_l21(&target, c);
                verdicts.push(check(
                    "certificate is an optimal labeling",
                    valid.is_ok() && c.span() == inv.lambda && c.holes() == inv.rho,
                    valid.err().map(|e| e.to_string()),
                ));
            }
            let source = serde_json::to_value(inv.source).expect("serializable");
            (inv.lambda, inv.rho, cert, source)
        }
        None => {
            let budget = OracleBudget::lambda_default();
            let (lambda, _) = oracle_lambda(&target, &budget)?;
            let (rho, f) = oracle_rho(&target, &budget)?;
            (lambda, rho, Some(f), json!("oracle"))
        }
    };
    let mut text = format!(
        "lambda = {lambda}\nrho = {rho}\nsource: {}\n",
        source.as_str().unwrap_or("")
    );
    if let Some(f) = &labeling {
        let _ = writeln!(text, "labels: {}", labels_of(f).join(" "));
        let _ = writeln!(text, "islands: {}", f.island_sequence());
    }
    verdict_text(&mut text, &verdicts);
    let dot = target.to_dot_with(labeling.as_ref().map(labels_of).as_deref(), &[]);
    let results = json!({
        "graph": if complement_of_input { "complement" } else { "input" },
        "lambda": lambda,
        "rho": rho,
        "source": source,
        "labeling": labeling,
    });
    Ok(Outcome::new(results, text, Some(dot), verdicts))
}

fn duis_cmd(t: &Graph) -> Result<Outcome, Failure> {
    let verdict = duis(t)?;
    let script = certify_family_membership(t)?;
    let word = if verdict.unique { "unique" } else { "multiple" };
    let mut text = format!("{word}\n");
    for step in &verdict.trace {
        let _ = writeln!(
            text,
            "  v={} u={} k={} {:?} -> {:?}",
            step.v, step.u, step.k, step.kind, step.action
        );
    }
    let mut labels = None;
    if let Some(s) = &script {
        let _ = writeln!(
            text,
            "construction: base + {} operations",
            s.operation_count()
        );
        for op in &s.ops {
            let _ = writeln!(text, "  {}", describe_op(op));
        }
        let lt = s.replay()?;
        labels = Some(
            lt.marks()
                .iter()
                .enumerate()
                .map(|(v, m)| format!("{v}:{m:?}"))
                .collect::<Vec<_>>(),
        );
    }
    let dot = t.to_dot_with(labels.as_deref(), &[]);
    let results = json!({
        "verdict": word,
        "duis": verdict,
        "construction": script,
    });
    Ok(Outcome::new(results, text, Some(dot), Vec::new()))
}

fn describe_op(op: &ScriptOp) -> String {
    match op {
        ScriptOp::Base { piece, vertices } => format!("base {piece:?} on {vertices:?}"),
        ScriptOp::Type1 {
            u,
            vine_count,
            vine_vertices,
            ..
        } => format!("type1 at {u}: star {vine_count}x{vine_vertices}"),
        ScriptOp::Type2 {
            u,
            path_vertices,
            at,
            ..
        } => {
            format!("type2 at {u}: path of {path_vertices} joined at position {at}")
        }
        ScriptOp::Type3 {
            u,
            vine_count,
            vine_vertices,
            ..
        } => format!("type3 at {u}: star {vine_count}x{vine_vertices}"),
    }
}

fn islands(g: &Graph) -> Result<Outcome, Failure> {
    let mut verdicts = Vec::new();
    let budget = OracleBudget::path_default();
    let mut text = String::new();
    let duis_verdict = if g.is_tree() { Some(duis(g)?) } else { None };
    let mut results = json!({});
    if g.n() <= budget.max_n {
        let r = oracle_path_cover(g, &budget)?;
        results["p"] = json!(r.count);
        let _ = writeln!(text, "P = {}", r.count);
        if r.count >= 2 {
            let unique = r.sequences.is_unique();
            let _ = writeln!(text, "island sequences of the complement: {}", r.sequences);
            let _ = writeln!(text, "{}", if unique { "unique" } else { "multiple" });
            let cert = labeling_from_cover(&g.complement(), &r.coverings[0])?;
            let _ = writeln!(
                text,
                "example labeling: {} (islands {})",
                labels_of(&cert).join(" "),
                cert.island_sequence()
            );
            results["island_sequences"] = json!(r.sequences);
            results["unique"] = json!(unique);
            results["example_labeling"] = json!(cert);
            if let Some(v) = &duis_verdict {
                verdicts.push(check(
                    "DUIS agrees with enumeration",
                    v.unique == unique,
                    None,
                ));
            }
        } else {
            let _ = writeln!(
                text,
                "the complement has a labeling without the path correspondence (P = 1)"
            );
        }
    } else if let Some(v) = &duis_verdict {
        let word = if v.unique { "unique" } else { "multiple" };
        let _ = writeln!(text, "{word} (by DUIS; too large to enumerate)");
        results["unique"] = json!(v.unique);
    } else {
        return Err(Error::Resource(format!(
            "n = {} exceeds the enumeration cutoff {} and the graph is not a tree",
            g.n(),
            budget.max_n
        ))
        .into());
    }
    if let Some(v) = duis_verdict {
        results["duis_unique"] = json!(v.unique);
    }
    verdict_text(&mut text, &verdicts);
    Ok(Outcome::new(results, text, Some(g.to_dot()), verdicts))
}

#[allow(clippy::too_many_arguments)]
fn gen(
    kind: GenKind,
    n: usize,
    arms: &[usize],
    max_ops: usize,
    max_vertices: usize,
    max_order: usize,
    seed: u64,
    format: Format,
) -> Result<Outcome, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = json!({});
    let g = match kind {
        GenKind::Prufer => random_tree(n, &mut rng),
        GenKind::Spider => {
            if arms.len() < 3 || arms.contains(&0) {
                return Err(Failure::Usage(
                    "a spider needs at least 3 arms of length >= 1".into(),
                ));
            }
            Graph::spider(arms)
        }
        GenKind::FamilyF => {
            let (t, script) = random_family_tree(
                &mut rng,
                FamilyBudget {
                    max_ops,
                    max_vertices,
                },
            );
            results["construction"] = json!(script);
            results["marks"] = json!(t.marks());
            t.tree()
        }
        GenKind::Expansion => {
            let t = random_2_sparse_tree(n, 10_000, &mut rng)
                .ok_or_else(|| Failure::Usage(format!("no 2-sparse tree found on {n} vertices")))?;
            let orders = random_orders(&t, max_order, &mut rng);
            results["tree"] = json!(t.to_edge_list());
            results["orders"] = json!(orders);
            expand_tree(&t, &orders)?.graph
        }
    };
    let text = match format {
        Format::EdgeList => g.to_edge_list(),
        Format::Graph6 => format!("{}\n", g.to_graph6()?),
    };
    results["graph"] = json!(text);
    results["n"] = json!(g.n());
    results["m"] = json!(g.m());
    Ok(Outcome::new(results, text, Some(g.to_dot()), Vec::new()))
}

fn verify(suite: &str, max_n: usize, samples: usize, seed: u64) -> Result<Outcome, Failure> {
    let suite: Suite = suite.parse().map_err(|_| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        Failure::Usage(format!(
            "unknown suite {suite:?} (expected one of {})",
            names.join(", ")
        ))
    })?;
    let report = run_suite(
        suite,
        &SuiteConfig {
            max_n,
            samples,
            seed,
        },
    )?;
    let mut text = String::new();
    let verdicts = vec![check(
        suite.name(),
        report.passed(),
        report.counterexample.as_ref().map(|c| c.reason.clone()),
    )];
    match &report.counterexample {
        None => {
            let _ = writeln!(
                text,
                "suite {suite}: {} checked, {} outside hypothesis: pass",
                report.checked, report.skipped
            );
        }
        Some(c) => {
            let _ = writeln!(
                text,
                "# suite {suite}: FAILED after {} checks",
                report.checked
            );
            let _ = writeln!(text, "# {}", c.reason);
            if let Some(o) = &c.orders {
                let list: Vec<String> = o.iter().map(ToString::to_string).collect();
                let _ = writeln!(text, "# orders: {}", list.join(","));
            }
            text.push_str(&c.edge_list);
        }
    }
    let results = serde_json::to_value(&report).expect("serializable");
    Ok(Outcome::new(results, text, None, verdicts))
}
