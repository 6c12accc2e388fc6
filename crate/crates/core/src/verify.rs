//! Verification suites: every formula and algorithm checked against brute
//! force over a corpus of trees (or graphs).
//!
//! Tree corpora cover every labeled tree up to [`EXHAUSTIVE_LIMIT`] vertices
//! and `samples` uniform random trees for each larger `n` up to `max_n`.
//! Instances are visited in increasing `n`, so the first failure reported is
//! a smallest one.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::{random_2_sparse_tree, random_orders, random_three_light_graph};
use crate::graph::Graph;
use crate::island::{certify_family_membership, duis};
use crate::labeling::{lambda_rho_of_complement, validate_l21, ComplementLambda};
use crate::oracle::{
    enumerate_trees, oracle_lambda, oracle_path_cover, oracle_rho, random_tree, OracleBudget,
};
use crate::path_cover::{
    expand_tree, expansion_path_cover, is_2_sparse, is_general_2_sparse, leaf_bounds,
    light_neighbor_formula, three_light_formula, tree_path_cover,
};

/// Largest `n` whose labeled trees are enumerated in full.
pub const EXHAUSTIVE_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Suite {
    #[serde(rename = "thm5")]
    LeafBounds,
    #[serde(rename = "thm6")]
    TwoSparse,
    #[serde(rename = "thm7")]
    LightNeighbor,
    #[serde(rename = "thm8")]
    GeneralTwoSparse,
    #[serde(rename = "thm12")]
    ThreeLight,
    #[serde(rename = "thm13")]
    CliqueExpansion,
    #[serde(rename = "thm1-2")]
    ComplementLabeling,
    #[serde(rename = "duis")]
    IslandUniqueness,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::LeafBounds,
        Suite::TwoSparse,
        Suite::LightNeighbor,
        Suite::GeneralTwoSparse,
        Suite::ThreeLight,
        Suite::CliqueExpansion,
        Suite::ComplementLabeling,
        Suite::IslandUniqueness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LeafBounds => "thm5",
            Suite::TwoSparse => "thm6",
            Suite::LightNeighbor => "thm7",
            Suite::GeneralTwoSparse => "thm8",
            Suite::ThreeLight => "thm12",
            Suite::CliqueExpansion => "thm13",
            Suite::ComplementLabeling => "thm1-2",
            Suite::IslandUniqueness => "duis",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Contract(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub max_n: usize,
    /// Random instances per size beyond the exhaustive range (per run for the
    /// generated-graph suites).
    pub samples: usize,
    pub seed: u64,
}

/// A failing instance in edge-list form, ready to feed back to the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub n: usize,
    pub edge_list: String,
    /// Clique orders, for expansion instances.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub orders: Option<Vec<usize>>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub config: SuiteConfig,
    /// Instances on which the statement was tested.
    pub checked: u64,
    /// Instances outside the statement's hypothesis.
    pub skipped: u64,
    pub counterexample: Option<Counterexample>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

enum Outcome {
    Checked,
    Skipped,
}

type Check<'a> = dyn FnMut(&Graph) -> Result<std::result::Result<Outcome, String>> + 'a;

/// Runs `suite` and stops at the first counterexample.
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = SuiteReport {
        suite,
        config: *config,
        checked: 0,
        skipped: 0,
        counterexample: None,
    };
    let path_budget = OracleBudget::path_default().with_max_n(config.max_n.max(16));
    let label_budget = OracleBudget::lambda_default().with_max_n(config.max_n.max(8));
    match suite {
        Suite::ThreeLight => {
            for _ in 0..config.samples {
                let Some(g) = random_three_light_graph(config.max_n, &mut rng) else {
                    return Err(Error::Contract(format!(
                        "no eligible graph fits in {} vertices",
                        config.max_n
                    )));
                };
                let formula = three_light_formula(&g)?;
                let oracle = oracle_path_cover(&g, &path_budget)?.count;
                report.checked += 1;
                if formula != oracle {
                    report.counterexample = Some(counterexample(
                        &g,
                        None,
                        format!("formula gives {formula}, oracle gives {oracle}"),
                    ));
                    break;
                }
            }
        }
        Suite::CliqueExpansion => {
            if config.max_n < 2 {
                return Err(Error::Contract("expansions need max_n >= 2".into()));
            }
            let mut done = 0;
            let mut n = 2;
            while done < config.samples {
                let Some(t) = random_2_sparse_tree(n, 1000, &mut rng) else {
                    n = 2;
                    continue;
                };
                let orders = random_orders(&t, 4, &mut rng);
                let size = expand_tree(&t, &orders)?.graph.n();
                n = if n >= 7 { 2 } else { n + 1 };
                if size > config.max_n {
                    continue;
                }
                done += 1;
                let cover = expansion_path_cover(&t, &orders)?;
                let g = &cover.expansion.graph;
                let oracle = oracle_path_cover(g, &path_budget)?.count;
                report.checked += 1;
                let problem = if let Err(e) = cover.covering.validate(g) {
                    Some(format!("witness invalid: {e}"))
                } else if cover.count != oracle || cover.covering.len() != cover.count {
                    Some(format!(
                        "formula gives {}, witness has {} paths, oracle gives {oracle}",
                        cover.count,
                        cover.covering.len()
                    ))
                } else {
                    None
                };
                if let Some(reason) = problem {
                    report.counterexample = Some(counterexample(&t, Some(orders), reason));
                    break;
                }
            }
        }
        _ => {
            let mut check = tree_check(suite, &path_budget, &label_budget);
            over_trees(config, &mut rng, &mut report, &mut *check)?;
        }
    }
    Ok(report)
}

fn counterexample(g: &Graph, orders: Option<Vec<usize>>, reason: String) -> Counterexample {
    Counterexample {
        n: g.n(),
        edge_list: g.to_edge_list(),
        orders,
        reason,
    }
}

fn over_trees(
    config: &SuiteConfig,
    rng: &mut ChaCha8Rng,
    report: &mut SuiteReport,
    check: &mut Check<'_>,
) -> Result<()> {
    let mut visit = |t: Graph, report: &mut SuiteReport| -> Result<bool> {
        match check(&t)? {
            Ok(Outcome::Checked) => report.checked += 1,
            Ok(Outcome::Skipped) => report.skipped += 1,
            Err(reason) => {
                report.counterexample = Some(counterexample(&t, None, reason));
                return Ok(false);
            }
        }
        Ok(true)
    };
    for n in 1..=config.max_n.min(EXHAUSTIVE_LIMIT) {
        for t in enumerate_trees(n) {
            if !visit(t, report)? {
                return Ok(());
            }
        }
    }
    for n in EXHAUSTIVE_LIMIT + 1..=config.max_n {
        for _ in 0..config.samples {
            if !visit(random_tree(n, rng), report)? {
                return Ok(());
            }
        }
    }
    Ok(())
}

fn tree_check<'a>(
    suite: Suite,
    path_budget: &'a OracleBudget,
    label_budget: &'a OracleBudget,
) -> Box<Check<'a>> {
    match suite {
        Suite::LeafBounds => Box::new(move |t: &Graph| {
            if t.n() < 2 {
                return Ok(Ok(Outcome::Skipped));
            }
            let cover = tree_path_cover(t)?;
            let p = cover.count;
            let oracle = oracle_path_cover(t, path_budget)?.count;
            let (lo, hi) = leaf_bounds(t)?;
            Ok(
                if cover.covering.validate(t).is_err() || cover.covering.len() != p {
                    Err("reduction witness is not a covering of the reported size".into())
                } else if p != oracle {
                    Err(format!("reduction gives {p}, oracle gives {oracle}"))
                } else if !(lo <= p as i64 && p as i64 <= hi) {
                    Err(format!("P = {p} outside [{lo}, {hi}]"))
                } else {
                    Ok(Outcome::Checked)
                },
            )
        }),
        Suite::TwoSparse | Suite::GeneralTwoSparse => Box::new(move |t: &Graph| {
            let s = t.stats();
            if s.leaves < 2 {
                return Ok(Ok(Outcome::Skipped));
            }
            let p = tree_path_cover(t)?.count as i64;
            let (target, holds, what) = if suite == Suite::TwoSparse {
                (s.leaves as i64 - 1, is_2_sparse(t), "2-sparse")
            } else {
                (
                    s.leaves as i64 - s.heavy_edges as i64 - 1,
                    is_general_2_sparse(t),
                    "general 2-sparse",
                )
            };
            Ok(if (p == target) == holds {
                Ok(Outcome::Checked)
            } else {
                Err(format!("P = {p}, formula value {target}, {what} = {holds}"))
            })
        }),
        Suite::LightNeighbor => Box::new(move |t: &Graph| {
            if t.n() < 2 {
                return Ok(Ok(Outcome::Skipped));
            }
            let (formula, _) = match light_neighbor_formula(t) {
                Ok(v) => v,
                Err(Error::Condition { .. }) => return Ok(Ok(Outcome::Skipped)),
                Err(e) => return Err(e),
            };
            let p = tree_path_cover(t)?.count;
            let oracle = oracle_path_cover(t, path_budget)?.count;
            Ok(if formula == p && p == oracle {
                Ok(Outcome::Checked)
            } else {
                Err(format!("formula {formula}, reduction {p}, oracle {oracle}"))
            })
        }),
        Suite::ComplementLabeling => Box::new(move |t: &Graph| {
            let inv = match lambda_rho_of_complement(t)? {
                ComplementLambda::Exact(inv) => inv,
                ComplementLambda::UpperBound { .. } => return Ok(Ok(Outcome::Skipped)),
            };
            let (n, p) = (t.n(), inv.path_cover_number);
            let gc = t.complement();
            let Some(cert) = inv.certificate else {
                return Ok(Err("no certificate".into()));
            };
            if let Err(v) = validate_l21(&gc, &cert) {
                return Ok(Err(format!("certificate invalid: {v}")));
            }
            if cert.span() != n + p - 2 || cert.holes() != p - 1 {
                return Ok(Err(format!(
                    "certificate span {} holes {}, expected {} and {}",
                    cert.span(),
                    cert.holes(),
                    n + p - 2,
                    p - 1
                )));
            }
            let (lambda, _) = oracle_lambda(&gc, label_budget)?;
            let (rho, _) = oracle_rho(&gc, label_budget)?;
            Ok(if lambda == n + p - 2 && rho == p - 1 {
                Ok(Outcome::Checked)
            } else {
                Err(format!(
                    "P = {p}: oracle λ = {lambda} (expected {}), ρ = {rho} (expected {})",
                    n + p - 2,
                    p - 1
                ))
            })
        }),
        Suite::IslandUniqueness => Box::new(move |t: &Graph| {
            let verdict = duis(t)?;
            let sequences = oracle_path_cover(t, path_budget)?.sequences;
            if verdict.unique != sequences.is_unique() {
                return Ok(Err(format!(
                    "DUIS says {}, minimum coverings give {sequences}",
                    if verdict.unique { "unique" } else { "multiple" }
                )));
            }
            if verdict.unique && t.n() >= 3 && certify_family_membership(t)?.is_none() {
                return Ok(Err("unique but no construction script found".into()));
            }
            Ok(Ok(Outcome::Checked))
        }),
        Suite::ThreeLight | Suite::CliqueExpansion => unreachable!("graph suites"),
    }
}
