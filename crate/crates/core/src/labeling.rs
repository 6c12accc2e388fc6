//! L(2,1)-labelings and their correspondence with path coverings of the
//! complement.
//!
//! A labeling assigns nonnegative integers so that adjacent vertices differ by
//! at least 2 and vertices at distance 2 differ by at least 1. An unused label
//! strictly between 0 and the span is a *hole*; a maximal run of used labels is
//! an *island*.
//!
//! Listing the paths of a covering of `G^c` one after another, with one skipped
//! label between consecutive paths, gives a labeling of `G`; when the covering
//! is minimum and has at least two paths this labeling is optimal and has the
//! fewest holes, which is what [`lambda_rho_of_complement`] exploits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle::{self, OracleBudget};
use crate::path_cover::{self, expansion_path_cover, tree_path_cover, PathCovering};

/// Per-vertex labels. Span, holes and islands are derived from them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "LabelingJson", try_from = "LabelingJson")]
pub struct Labeling {
    labels: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct LabelingJson {
    labels: Vec<usize>,
    span: usize,
    holes: usize,
    /// Inclusive label ranges.
    islands: Vec<[usize; 2]>,
}

impl From<Labeling> for LabelingJson {
    fn from(l: Labeling) -> Self {
        LabelingJson {
            span: l.span(),
            holes: l.holes(),
            islands: l.islands().into_iter().map(|(a, b)| [a, b]).collect(),
            labels: l.labels,
        }
    }
}

impl TryFrom<LabelingJson> for Labeling {
    type Error = String;

    fn try_from(j: LabelingJson) -> std::result::Result<Self, String> {
        let l = Labeling::new(j.labels);
        let islands: Vec<[usize; 2]> = l.islands().into_iter().map(|(a, b)| [a, b]).collect();
        if l.span() != j.span || l.holes() != j.holes || islands != j.islands {
            return Err("span/holes/islands do not match the labels".into());
        }
        Ok(l)
    }
}

/// Island cardinalities in nondecreasing order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IslandSequence(pub Vec<usize>);

impl std::fmt::Display for IslandSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Labeling {
    pub fn new(labels: Vec<usize>) -> Self {
        Labeling { labels }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Largest label (0 for an empty labeling).
    pub fn span(&self) -> usize {
        self.labels.iter().copied().max().unwrap_or(0)
    }

    fn used(&self) -> Vec<bool> {
        let mut used = vec![false; self.span() + 1];
        for &l in &self.labels {
            used[l] = true;
        }
        used
    }

    /// Unused labels in `1..span`.
    pub fn holes(&self) -> usize {
        let used = self.used();
        let span = self.span();
        (1..span).filter(|&h| !used[h]).count()
    }

    /// Maximal runs of used labels, as inclusive ranges in increasing order.
    pub fn islands(&self) -> Vec<(usize, usize)> {
        let used = self.used();
        let mut out = Vec::new();
        let mut start = None;
        for (l, &u) in used.iter().enumerate() {
            match (u, start) {
                (true, None) => start = Some(l),
                (false, Some(s)) => {
                    out.push((s, l - 1));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((s, used.len() - 1));
        }
        if self.labels.is_empty() {
            out.clear();
        }
        out
    }

    pub fn island_sequence(&self) -> IslandSequence {
        let mut counts: Vec<usize> = self.islands().iter().map(|&(a, b)| b - a + 1).collect();
        counts.sort_unstable();
        IslandSequence(counts)
    }
}

/// Island sequence of a labeling.
pub fn islands_of(f: &Labeling) -> IslandSequence {
    f.island_sequence()
}

/// Why a labeling fails the distance conditions.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum L21Violation {
    #[error("labeling has {got} labels for {expected} vertices")]
    WrongLength { expected: usize, got: usize },
    #[error("vertices {u} and {v} at distance {distance} have labels {label_u} and {label_v}")]
    TooClose {
        u: usize,
        v: usize,
        distance: usize,
        label_u: usize,
        label_v: usize,
    },
}

/// Checks `|f(x) - f(y)| >= 2` at distance 1 and `f(x) != f(y)` at distance 2.
pub fn validate_l21(g: &Graph, f: &Labeling) -> std::result::Result<(), L21Violation> {
    let labels = f.labels();
    if labels.len() != g.n() {
        return Err(L21Violation::WrongLength {
            expected: g.n(),
            got: labels.len(),
        });
    }
    let too_close = |u: usize, v: usize, distance: usize| L21Violation::TooClose {
        u: u.min(v),
        v: u.max(v),
        distance,
        label_u: labels[u.min(v)],
        label_v: labels[u.max(v)],
    };
    for u in 0..g.n() {
        for &v in g.neighbors(u) {
            if labels[u].abs_diff(labels[v]) < 2 {
                return Err(too_close(u, v, 1));
            }
            for &w in g.neighbors(v) {
                if w != u && !g.has_edge(u, w) && labels[u] == labels[w] {
                    return Err(too_close(u, w, 2));
                }
            }
        }
    }
    Ok(())
}

/// The labeling of `g` read off a path covering of its complement.
///
/// Paths are taken in canonical order (vertex count, then vertex list), each
/// traversed from its lower-indexed end; labels run consecutively along a path
/// and one label is skipped between paths.
pub fn labeling_from_cover(g: &Graph, cover: &PathCovering) -> Result<Labeling> {
    cover
        .validate(&g.complement())
        .map_err(|e| Error::Contract(format!("not a covering of the complement: {e}")))?;
    let cover = cover.clone().canonical();
    let mut labels = vec![0; g.n()];
    let mut next = 0;
    for path in &cover.paths {
        for &v in path {
            labels[v] = next;
            next += 1;
        }
        next += 1;
    }
    Ok(Labeling::new(labels))
}

/// How the path covering number of `g` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverSource {
    TreeReduction,
    ThreeLightFormula,
    CliqueExpansion,
    Oracle,
}

/// `λ(g^c)` and `ρ(g^c)` obtained from `P(g) >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementInvariants {
    pub n: usize,
    pub path_cover_number: usize,
    pub lambda: usize,
    pub rho: usize,
    pub source: CoverSource,
    /// Minimum covering of `g` behind the certificate.
    pub witness: Option<PathCovering>,
    /// An optimal labeling of `g^c` with exactly `rho` holes.
    pub certificate: Option<Labeling>,
}

/// Outcome of [`lambda_rho_of_complement`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComplementLambda {
    Exact(ComplementInvariants),
    /// `P(g) = 1`: only `λ(g^c) <= n - 1` follows; `exact` holds brute-force
    /// `(λ, ρ)` when `n` is within the labeling oracle's budget.
    UpperBound {
        n: usize,
        bound: usize,
        exact: Option<(usize, usize)>,
    },
}

fn finish(
    g: &Graph,
    p: usize,
    source: CoverSource,
    witness: Option<PathCovering>,
    label_budget: &OracleBudget,
) -> Result<ComplementLambda> {
    let n = g.n();
    if p >= 2 {
        let certificate = witness
            .as_ref()
            .map(|w| labeling_from_cover(&g.complement(), w))
            .transpose()?;
        return Ok(ComplementLambda::Exact(ComplementInvariants {
            n,
            path_cover_number: p,
            lambda: n + p - 2,
            rho: p - 1,
            source,
            witness,
            certificate,
        }));
    }
    let exact = if n <= label_budget.max_n {
        let gc = g.complement();
        let (lambda, _) = oracle::oracle_lambda(&gc, label_budget)?;
        let (rho, _) = oracle::oracle_rho(&gc, label_budget)?;
        Some((lambda, rho))
    } else {
        None
    };
    Ok(ComplementLambda::UpperBound {
        n,
        bound: n.saturating_sub(1),
        exact,
    })
}

/// `λ` and `ρ` of `g^c` through `λ(g^c) = n + P(g) - 2` and `ρ(g^c) = P(g) - 1`.
///
/// `P(g)` comes from the tree reduction for trees, from the three-light-neighbour
/// formula when its hypothesis holds, and from the brute-force oracle otherwise.
pub fn lambda_rho_of_complement(g: &Graph) -> Result<ComplementLambda> {
    lambda_rho_of_complement_with(
        g,
        &OracleBudget::path_default(),
        &OracleBudget::lambda_default(),
    )
}

pub fn lambda_rho_of_complement_with(
    g: &Graph,
    path_budget: &OracleBudget,
    label_budget: &OracleBudget,
) -> Result<ComplementLambda> {
    if g.n() == 0 {
        return Err(Error::Shape("empty graph".into()));
    }
    if g.is_tree() {
        let r = tree_path_cover(g)?;
        return finish(
            g,
            r.count,
            CoverSource::TreeReduction,
            Some(r.covering),
            label_budget,
        );
    }
    if let Ok(p) = path_cover::three_light_formula(g) {
        let witness = if g.n() <= path_budget.max_n {
            let (q, w) = oracle::oracle_min_cover(g, path_budget)?;
            if q != p {
                return Err(Error::Contract(format!(
                    "closed form gives {p} paths but brute force finds {q}"
                )));
            }
            Some(w)
        } else {
            None
        };
        return finish(g, p, CoverSource::ThreeLightFormula, witness, label_budget);
    }
    if g.n() <= path_budget.max_n {
        let (p, w) = oracle::oracle_min_cover(g, path_budget)?;
        return finish(g, p, CoverSource::Oracle, Some(w), label_budget);
    }
    Err(Error::Resource(format!(
        "no closed form applies and n = {} exceeds the oracle cutoff {}",
        g.n(),
        path_budget.max_n
    )))
}

/// `λ` and `ρ` of the complement of a clique expansion of a 2-sparse tree,
/// with a certificate built from the threaded covering.
pub fn lambda_rho_of_expansion_complement(t: &Graph, orders: &[usize]) -> Result<ComplementLambda> {
    let r = expansion_path_cover(t, orders)?;
    let g = r.expansion.graph.clone();
    finish(
        &g,
        r.count,
        CoverSource::CliqueExpansion,
        Some(r.covering),
        &OracleBudget::lambda_default(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        let p4 = Graph::path(4);
        let f = Labeling::new(vec![1, 3, 0, 2]);
        assert_eq!(validate_l21(&p4, &f), Ok(()));
        assert_eq!(f.span(), 3);

        let bad = validate_l21(&Graph::complete(2), &Labeling::new(vec![0, 1]));
        assert!(matches!(
            bad,
            Err(L21Violation::TooClose {
                u: 0,
                v: 1,
                distance: 1,
                ..
            })
        ));

        // distance-2 clash on P3
        let bad = validate_l21(&Graph::path(3), &Labeling::new(vec![0, 2, 0]));
        assert!(matches!(
            bad,
            Err(L21Violation::TooClose {
                u: 0,
                v: 2,
                distance: 2,
                ..
            })
        ));

        assert!(matches!(
            validate_l21(&p4, &Labeling::new(vec![0])),
            Err(L21Violation::WrongLength { .. })
        ));
    }

    #[test]
    fn k23_labeling_from_figure() {
        // parts {0,1} and {2,3,4}; labels 0,1 and 3,4,5
        let k23 = Graph::complete_bipartite(2, 3);
        let f = Labeling::new(vec![0, 1, 3, 4, 5]);
        assert_eq!(validate_l21(&k23, &f), Ok(()));
        assert_eq!(f.span(), 5);
        assert_eq!(f.holes(), 1);
        assert_eq!(f.islands(), vec![(0, 1), (3, 5)]);
        assert_eq!(islands_of(&f), IslandSequence(vec![2, 3]));
    }

    #[test]
    fn k5_k2_islands_from_figure() {
        // K5 on 0..5 and K2 on {5,6}
        let g = Graph::complete(5).disjoint_union(&Graph::complete(2));
        let a = Labeling::new(vec![0, 2, 4, 6, 8, 1, 3]);
        let b = Labeling::new(vec![0, 2, 4, 6, 8, 1, 5]);
        assert_eq!(validate_l21(&g, &a), Ok(()));
        assert_eq!(validate_l21(&g, &b), Ok(()));
        assert_eq!(islands_of(&a), IslandSequence(vec![1, 1, 5]));
        assert_eq!(islands_of(&b), IslandSequence(vec![1, 3, 3]));
        assert_eq!((a.holes(), b.holes()), (2, 2));
    }

    #[test]
    fn single_island() {
        let f = Labeling::new((0..6).rev().collect());
        assert_eq!(islands_of(&f), IslandSequence(vec![6]));
        assert_eq!(f.holes(), 0);
        assert_eq!(Labeling::new(vec![]).islands(), vec![]);
    }

    #[test]
    fn from_cover_k23() {
        let g = Graph::complete_bipartite(2, 3);
        let cover = PathCovering::new(vec![vec![4, 3, 2], vec![1, 0]], 5);
        let f = labeling_from_cover(&g, &cover).unwrap();
        assert_eq!(f.labels(), &[0, 1, 3, 4, 5]);
        assert_eq!((f.span(), f.holes()), (5, 1));
        assert_eq!(islands_of(&f), IslandSequence(vec![2, 3]));
        assert_eq!(validate_l21(&g, &f), Ok(()));
    }

    #[test]
    fn from_cover_complete_graph() {
        let g = Graph::complete(4);
        let cover = PathCovering::new((0..4).map(|v| vec![v]).collect(), 4);
        let f = labeling_from_cover(&g, &cover).unwrap();
        assert_eq!(f.labels(), &[0, 2, 4, 6]);
        assert_eq!(f.span(), 6);
    }

    #[test]
    fn from_cover_hamiltonian_complement() {
        // complement of P4 is the path 2-0-3-1
        let g = Graph::path(4);
        let cover = PathCovering::new(vec![vec![2, 0, 3, 1]], 4);
        let f = labeling_from_cover(&g, &cover).unwrap();
        assert_eq!(f.holes(), 0);
        assert_eq!(f.span(), 3);
        assert_eq!(validate_l21(&g, &f), Ok(()));
    }

    #[test]
    fn from_cover_rejects_foreign_covering() {
        let g = Graph::complete_bipartite(2, 3);
        let cover = PathCovering::new(vec![vec![0, 2, 1], vec![3], vec![4]], 5);
        assert!(matches!(
            labeling_from_cover(&g, &cover),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn complement_invariants_of_figure_graphs() {
        let k2k3 = Graph::complete(2).disjoint_union(&Graph::complete(3));
        match lambda_rho_of_complement(&k2k3).unwrap() {
            ComplementLambda::Exact(r) => {
                assert_eq!((r.lambda, r.rho, r.source), (5, 1, CoverSource::Oracle));
                let cert = r.certificate.unwrap();
                assert_eq!(validate_l21(&k2k3.complement(), &cert), Ok(()));
                assert_eq!((cert.span(), cert.holes()), (5, 1));
            }
            other => panic!("{other:?}"),
        }
        let k52 = Graph::complete_bipartite(5, 2);
        match lambda_rho_of_complement(&k52).unwrap() {
            ComplementLambda::Exact(r) => {
                assert_eq!((r.lambda, r.rho), (8, 2));
                assert_eq!(r.source, CoverSource::ThreeLightFormula);
            }
            other => panic!("{other:?}"),
        }
        match lambda_rho_of_complement(&Graph::spider(&[1, 1, 1])).unwrap() {
            ComplementLambda::Exact(r) => {
                assert_eq!((r.n, r.path_cover_number, r.lambda, r.rho), (4, 2, 4, 1))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hamiltonian_graph_reports_bound() {
        match lambda_rho_of_complement(&Graph::path(5)).unwrap() {
            ComplementLambda::UpperBound { n, bound, exact } => {
                assert_eq!((n, bound), (5, 4));
                let (lambda, _) = exact.unwrap();
                assert!(lambda <= 4);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn labeling_json_shape() {
        let f = Labeling::new(vec![0, 1, 3, 4, 5]);
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"labels":[0,1,3,4,5],"span":5,"holes":1,"islands":[[0,1],[3,5]]})
        );
        let back: Labeling = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);
        let forged = serde_json::json!({"labels":[0,1],"span":3,"holes":0,"islands":[[0,1]]});
        assert!(serde_json::from_value::<Labeling>(forged).is_err());
    }
}
