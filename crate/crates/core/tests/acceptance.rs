//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treecover::generate::random_2_sparse_tree;
use treecover::verify::{run_suite, Suite, SuiteConfig};
use treecover::*;

const SMALL_CASE_LIMIT: Duration = Duration::from_secs(1);
const FORMULA_MAX_N: usize = 8;
const GENERATED_MAX_N: usize = 12;
const GENERATED_SAMPLES: usize = 200;
const DUIS_MAX_N: usize = 12;
const DUIS_SAMPLES: usize = 5000;
const FAMILY_SAMPLES: usize = 1000;
const FAMILY_MAX_VERTICES: usize = 12;
const SPARSE_SAMPLES: usize = 1000;
const OPS_PER_VERTEX: u64 = 12;
const LARGE_N: [usize; 3] = [100, 1000, 10_000];
const LARGE_TIME_LIMIT: Duration = Duration::from_millis(100);
const SEED: u64 = 2024;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exact(g: &Graph) -> std::result::Result<ComplementInvariants, String> {
    match lambda_rho_of_complement(g).map_err(|e| e.to_string())? {
        ComplementLambda::Exact(inv) => Ok(inv),
        other => Err(format!("expected exact values, got {other:?}")),
    }
}

/// λ and ρ of a complement against brute force, plus the island sequences.
fn complement_case(g: &Graph, lambda: usize, rho: usize, sequences: &str) -> Outcome {
    let start = Instant::now();
    let inv = exact(g)?;
    ensure((inv.lambda, inv.rho) == (lambda, rho), || {
        format!("got lambda {} rho {}", inv.lambda, inv.rho)
    })?;
    let f = inv.certificate.as_ref().ok_or("no labeling certificate")?;
    let gc = g.complement();
    validate_l21(&gc, f).map_err(|v| format!("certificate invalid: {v:?}"))?;
    let b = OracleBudget::lambda_default();
    let ol = oracle_lambda(&gc, &b).map_err(|e| e.to_string())?.0;
    let or = oracle_rho(&gc, &b).map_err(|e| e.to_string())?.0;
    ensure((ol, or) == (lambda, rho), || {
        format!("oracle gives lambda {ol} rho {or}")
    })?;
    let seqs = sequence_set(g, 16).map_err(|e| e.to_string())?.to_string();
    ensure(seqs == sequences, || format!("island sequences {seqs}"))?;
    let t = start.elapsed();
    ensure(t < SMALL_CASE_LIMIT, || format!("took {t:?}"))?;
    Ok(format!(
        "lambda {lambda}, rho {rho}, sequences {seqs}, {t:.1?}"
    ))
}

fn suites(list: &[Suite], config: SuiteConfig, min_checked: u64) -> Outcome {
    let mut parts = Vec::new();
    for &s in list {
        let start = Instant::now();
        let r = run_suite(s, &config).map_err(|e| format!("{s}: {e}"))?;
        if let Some(c) = &r.counterexample {
            return Err(format!("{s}: {} on\n{}", c.reason, c.edge_list));
        }
        ensure(r.checked >= min_checked, || {
            format!("{s}: only {} checked", r.checked)
        })?;
        parts.push(format!(
            "{s} {} checked in {:.1?}",
            r.checked,
            start.elapsed()
        ));
    }
    Ok(parts.join("; "))
}

fn family_and_sparse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let budget = FamilyBudget {
        max_ops: 4,
        max_vertices: FAMILY_MAX_VERTICES,
    };
    for i in 0..FAMILY_SAMPLES {
        let (t, _) = random_family_tree(&mut rng, budget);
        let g = t.tree();
        let seqs = sequence_set(&g, 16).map_err(|e| e.to_string())?;
        let unique = duis(&g).map_err(|e| e.to_string())?.unique;
        ensure(unique && seqs.is_unique(), || {
            format!("member {i} gives {seqs}:\n{}", g.to_edge_list())
        })?;
    }
    let mut seen = 0;
    while seen < SPARSE_SAMPLES {
        let n = 5 + seen % 8;
        let g = random_2_sparse_tree(n, 1000, &mut rng).ok_or("no 2-sparse tree found")?;
        if g.is_path() || g.is_generalized_star() {
            continue;
        }
        let seqs = sequence_set(&g, 16).map_err(|e| e.to_string())?;
        let unique = duis(&g).map_err(|e| e.to_string())?.unique;
        ensure(!unique && seqs.len() >= 2, || {
            format!("unique on\n{}", g.to_edge_list())
        })?;
        seen += 1;
    }
    Ok(format!(
        "{FAMILY_SAMPLES} family members unique, {SPARSE_SAMPLES} 2-sparse trees multiple"
    ))
}

fn large_family_member(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let budget = FamilyBudget {
        max_ops: n,
        max_vertices: n,
    };
    random_family_tree(rng, budget).0.tree()
}

fn linear_operation_count() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for &n in &LARGE_N {
        let trees = [
            ("random", random_tree(n, &mut rng)),
            ("path", Graph::path(n)),
            ("star", Graph::spider(&vec![1; n - 1])),
            ("spider", Graph::spider(&vec![9; (n - 1) / 9])),
            ("family", large_family_member(n, &mut rng)),
        ];
        for (name, t) in &trees {
            let start = Instant::now();
            let v = duis(t).map_err(|e| e.to_string())?;
            let took = start.elapsed();
            let per = v.ops as f64 / t.n() as f64;
            worst = worst.max(per);
            ensure(v.ops <= OPS_PER_VERTEX * t.n() as u64, || {
                format!("{name} n={}: {} operations", t.n(), v.ops)
            })?;
            if n == 10_000 {
                slowest = slowest.max(took);
                ensure(took < LARGE_TIME_LIMIT, || {
                    format!("{name} n={}: {took:?}", t.n())
                })?;
            }
        }
    }
    Ok(format!(
        "at most {worst:.2} operations per vertex, slowest at n=10000 {slowest:.1?}"
    ))
}

fn main() -> ExitCode {
    let tree_config = |max_n, samples| SuiteConfig {
        max_n,
        samples,
        seed: SEED,
    };
    let criteria: Vec<Criterion> = vec![
        (
            "complement of K2+K3",
            Box::new(|| {
                complement_case(
                    &Graph::complete_bipartite(2, 3).complement(),
                    5,
                    1,
                    "{(2,3)}",
                )
            }),
        ),
        (
            "complement of K_{5,2}",
            Box::new(|| {
                complement_case(&Graph::complete_bipartite(5, 2), 8, 2, "{(1,1,5), (1,3,3)}")
            }),
        ),
        (
            "leaf bounds and sparse tree formulas",
            Box::new(move || {
                suites(
                    &[Suite::LeafBounds, Suite::TwoSparse, Suite::GeneralTwoSparse],
                    tree_config(FORMULA_MAX_N, 0),
                    1,
                )
            }),
        ),
        (
            "light-neighbour formula",
            Box::new(move || suites(&[Suite::LightNeighbor], tree_config(FORMULA_MAX_N, 0), 1)),
        ),
        (
            "complement labelings from path covers",
            Box::new(move || {
                suites(
                    &[Suite::ComplementLabeling],
                    tree_config(FORMULA_MAX_N, 0),
                    1,
                )
            }),
        ),
        (
            "three-light graphs and clique expansions",
            Box::new(move || {
                suites(
                    &[Suite::ThreeLight, Suite::CliqueExpansion],
                    tree_config(GENERATED_MAX_N, GENERATED_SAMPLES),
                    GENERATED_SAMPLES as u64,
                )
            }),
        ),
        (
            "island uniqueness against enumeration",
            Box::new(move || {
                suites(
                    &[Suite::IslandUniqueness],
                    tree_config(DUIS_MAX_N, DUIS_SAMPLES),
                    1,
                )
            }),
        ),
        (
            "family members and 2-sparse trees",
            Box::new(family_and_sparse),
        ),
        ("linear operation count", Box::new(linear_operation_count)),
    ];

    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
