//! Brute-force ground truth for small graphs.
//!
//! * Path covers: `P(G) = n - (max edges of a linear forest in G)`. The linear
//!   forest is found by branch and bound over the edge list, and a second pass
//!   enumerates every optimal forest to collect all path sequences.
//! * `λ`: iterative deepening on the span with forward-checking backtracking.
//! * `ρ`: exhaustive search over labelings of span `λ` for the fewest holes.
//! * Labeled trees: Prüfer decoding, exhaustive enumeration and uniform sampling.
//!
//! Every search honours an [`OracleBudget`]; running out of budget is an error,
//! never an approximate answer.

use std::collections::{BTreeSet, VecDeque};
use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labeling::Labeling;
use crate::path_cover::{PathCovering, PathSequence};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleBudget {
    /// Largest vertex count the oracle accepts.
    pub max_n: usize,
    /// Most optimal coverings kept in an enumeration (the sequence set is
    /// always complete).
    pub max_coverings: usize,
    /// Soft wall-clock limit.
    pub time_hint: Option<Duration>,
}

impl OracleBudget {
    pub fn path_default() -> Self {
        OracleBudget {
            max_n: 16,
            max_coverings: 64,
            time_hint: None,
        }
    }

    pub fn lambda_default() -> Self {
        OracleBudget {
            max_n: 8,
            max_coverings: 0,
            time_hint: None,
        }
    }

    pub fn with_max_n(mut self, max_n: usize) -> Self {
        self.max_n = max_n;
        self
    }

    fn check_n(&self, g: &Graph, what: &str) -> Result<()> {
        if g.n() > self.max_n {
            return Err(Error::Resource(format!(
                "{what}: n = {} exceeds the oracle cutoff {}",
                g.n(),
                self.max_n
            )));
        }
        Ok(())
    }
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self::path_default()
    }
}

struct Clock {
    deadline: Option<Instant>,
    ticks: u32,
}

impl Clock {
    fn new(budget: &OracleBudget) -> Self {
        Clock {
            deadline: budget.time_hint.map(|d| Instant::now() + d),
            ticks: 0,
        }
    }

    fn tick(&mut self) -> bool {
        self.ticks = self.ticks.wrapping_add(1);
        match self.deadline {
            Some(d) if self.ticks.is_multiple_of(4096) => Instant::now() <= d,
            _ => true,
        }
    }
}

/// The exact set of path sequences over all minimum coverings.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SequenceSet(pub BTreeSet<PathSequence>);

impl SequenceSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_unique(&self) -> bool {
        self.0.len() == 1
    }

    pub fn contains(&self, counts: &[usize]) -> bool {
        self.0.contains(&PathSequence(counts.to_vec()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &PathSequence> {
        self.0.iter()
    }
}

impl std::fmt::Display for SequenceSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Edge visiting order of the linear-forest search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOrder {
    Forward,
    Reverse,
}

enum Mode {
    Maximize,
    Enumerate { target: usize },
}

struct ForestSearch<'a> {
    n: usize,
    edges: Vec<(usize, usize)>,
    deg: Vec<u8>,
    /// For a path endpoint, the other endpoint of its path.
    other_end: Vec<usize>,
    /// Undecided incident edges per vertex.
    avail: Vec<usize>,
    chosen: Vec<usize>,
    mode: Mode,
    best: usize,
    best_edges: Vec<usize>,
    ceiling: usize,
    done: bool,
    found: Vec<Vec<usize>>,
    found_count: u64,
    keep: usize,
    sequences: BTreeSet<PathSequence>,
    clock: Clock,
    timed_out: bool,
    _g: &'a Graph,
}

impl<'a> ForestSearch<'a> {
    fn new(g: &'a Graph, order: EdgeOrder, mode: Mode, budget: &OracleBudget) -> Self {
        let mut edges: Vec<(usize, usize)> = g.edges().collect();
        if order == EdgeOrder::Reverse {
            edges.reverse();
        }
        let n = g.n();
        ForestSearch {
            n,
            avail: (0..n).map(|v| g.degree(v)).collect(),
            edges,
            deg: vec![0; n],
            other_end: (0..n).collect(),
            chosen: Vec::new(),
            mode,
            best: 0,
            best_edges: Vec::new(),
            ceiling: n - g.components().1,
            done: false,
            found: Vec::new(),
            found_count: 0,
            keep: budget.max_coverings,
            sequences: BTreeSet::new(),
            clock: Clock::new(budget),
            timed_out: false,
            _g: g,
        }
    }

    /// Upper bound on edges still addable: each vertex offers at most
    /// `min(2 - deg, undecided incident edges)` endpoints.
    fn slack(&self) -> usize {
        let mut s = 0;
        for v in 0..self.n {
            s += (2 - self.deg[v] as usize).min(self.avail[v]);
        }
        s / 2
    }

    fn covering_of(&self, chosen: &[usize]) -> PathCovering {
        let mut adj = vec![Vec::with_capacity(2); self.n];
        for &i in chosen {
            let (u, v) = self.edges[i];
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.n];
        let mut paths = Vec::new();
        for s in 0..self.n {
            if seen[s] || adj[s].len() == 2 {
                continue;
            }
            let mut path = vec![s];
            seen[s] = true;
            let mut prev = usize::MAX;
            let mut cur = s;
            while let Some(&next) = adj[cur].iter().find(|&&w| w != prev) {
                seen[next] = true;
                path.push(next);
                prev = cur;
                cur = next;
            }
            paths.push(path);
        }
        PathCovering::new(paths, self.n).canonical()
    }

    fn dfs(&mut self, i: usize) {
        if self.done {
            return;
        }
        if !self.clock.tick() {
            self.timed_out = true;
            self.done = true;
            return;
        }
        let current = self.chosen.len();
        if i == self.edges.len() {
            match self.mode {
                Mode::Maximize => {
                    if current > self.best || self.best_edges.is_empty() && current == 0 {
                        self.best = current;
                        self.best_edges = self.chosen.clone();
                        if current == self.ceiling {
                            self.done = true;
                        }
                    }
                }
                Mode::Enumerate { target } => {
                    if current == target {
                        self.found_count += 1;
                        let chosen = self.chosen.clone();
                        let cov = self.covering_of(&chosen);
                        self.sequences.insert(cov.path_sequence());
                        if self.found.len() < self.keep {
                            self.found.push(chosen);
                        }
                    }
                }
            }
            return;
        }
        let reach = current + self.slack();
        let prune = match self.mode {
            Mode::Maximize => reach <= self.best && !self.best_edges.is_empty(),
            Mode::Enumerate { target } => reach < target,
        };
        if prune {
            return;
        }
        let (u, v) = self.edges[i];
        self.avail[u] -= 1;
        self.avail[v] -= 1;
        if self.deg[u] < 2 && self.deg[v] < 2 && self.other_end[u] != v {
            let a = self.other_end[u];
            let b = self.other_end[v];
            self.other_end[a] = b;
            self.other_end[b] = a;
            self.deg[u] += 1;
            self.deg[v] += 1;
            self.chosen.push(i);
            self.dfs(i + 1);
            self.chosen.pop();
            self.deg[u] -= 1;
            self.deg[v] -= 1;
            self.other_end[a] = u;
            self.other_end[b] = v;
        }
        self.dfs(i + 1);
        self.avail[u] += 1;
        self.avail[v] += 1;
    }
}

/// Maximum number of edges in a linear forest of `g`, with one optimal forest
/// (as a covering).
pub fn max_linear_forest(
    g: &Graph,
    order: EdgeOrder,
    budget: &OracleBudget,
) -> Result<(usize, PathCovering)> {
    budget.check_n(g, "max_linear_forest")?;
    let mut s = ForestSearch::new(g, order, Mode::Maximize, budget);
    s.dfs(0);
    if s.timed_out {
        return Err(Error::Resource(
            "linear forest search ran out of time".into(),
        ));
    }
    let cov = s.covering_of(&s.best_edges.clone());
    Ok((s.best, cov))
}

/// Exact `P(g)` with one minimum covering.
pub fn oracle_min_cover(g: &Graph, budget: &OracleBudget) -> Result<(usize, PathCovering)> {
    let (edges, cov) = max_linear_forest(g, EdgeOrder::Forward, budget)?;
    Ok((g.n() - edges, cov))
}

/// Result of [`oracle_path_cover`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCover {
    pub count: usize,
    pub sequences: SequenceSet,
    /// Up to `max_coverings` minimum coverings, in discovery order.
    pub coverings: Vec<PathCovering>,
    /// Number of distinct minimum coverings (as edge sets).
    pub total_minimum: u64,
}

/// Exact `P(g)`, every path sequence of a minimum covering, and a sample of
/// minimum coverings.
pub fn oracle_path_cover(g: &Graph, budget: &OracleBudget) -> Result<OracleCover> {
    let (best, _) = max_linear_forest(g, EdgeOrder::Forward, budget)?;
    let mut s = ForestSearch::new(
        g,
        EdgeOrder::Forward,
        Mode::Enumerate { target: best },
        budget,
    );
    s.dfs(0);
    if s.timed_out {
        return Err(Error::Resource(
            "covering enumeration ran out of time".into(),
        ));
    }
    let found = std::mem::take(&mut s.found);
    let coverings = found.iter().map(|c| s.covering_of(c)).collect();
    Ok(OracleCover {
        count: g.n() - best,
        sequences: SequenceSet(std::mem::take(&mut s.sequences)),
        coverings,
        total_minimum: s.found_count,
    })
}

/// Path sequences of all minimum coverings of `g`, for `n <= cutoff_n`.
pub fn sequence_set(g: &Graph, cutoff_n: usize) -> Result<SequenceSet> {
    let budget = OracleBudget {
        max_n: cutoff_n,
        max_coverings: 0,
        time_hint: None,
    };
    Ok(oracle_path_cover(g, &budget)?.sequences)
}

struct LabelSearch {
    order: Vec<usize>,
    adj: Vec<Vec<usize>>,
    dist2: Vec<Vec<usize>>,
    span: usize,
    clock: Clock,
    timed_out: bool,
}

/// Labels within `0..=span` still allowed after assigning `label` to a
/// neighbour (`gap` 2) or a distance-2 vertex (`gap` 1).
fn forbid(label: usize, gap: usize) -> u64 {
    let lo = label.saturating_sub(gap - 1);
    let hi = label + gap - 1;
    let width = hi - lo + 1;
    let block = if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    };
    !(block << lo)
}

impl LabelSearch {
    fn new(g: &Graph, budget: &OracleBudget) -> Self {
        let n = g.n();
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        while order.len() < n {
            let start = (0..n)
                .filter(|&v| !seen[v])
                .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
                .expect("unvisited vertex");
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for &w in g.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        let dist2 = (0..n)
            .map(|u| {
                let mut d2: Vec<usize> = g
                    .neighbors(u)
                    .iter()
                    .flat_map(|&v| g.neighbors(v).iter().copied())
                    .filter(|&w| w != u && !g.has_edge(u, w))
                    .collect();
                d2.sort_unstable();
                d2.dedup();
                d2
            })
            .collect();
        LabelSearch {
            order,
            adj: (0..n).map(|v| g.neighbors(v).to_vec()).collect(),
            dist2,
            span: 0,
            clock: Clock::new(budget),
            timed_out: false,
        }
    }

    fn full_domain(&self) -> u64 {
        if self.span >= 63 {
            u64::MAX
        } else {
            (1u64 << (self.span + 1)) - 1
        }
    }

    fn initial_domains(&self) -> Vec<u64> {
        let mut dom = vec![self.full_domain(); self.order.len()];
        // reflection f -> span - f preserves validity and hole count
        dom[self.order[0]] &= (1u64 << (self.span / 2 + 1)) - 1;
        dom
    }

    /// Assigns `label` to `v` and prunes the other domains; `false` on a wipe-out.
    fn propagate(&self, dom: &mut [u64], assigned: &[bool], v: usize, label: usize) -> bool {
        dom[v] = 1 << label;
        for &w in &self.adj[v] {
            if !assigned[w] {
                dom[w] &= forbid(label, 2);
                if dom[w] == 0 {
                    return false;
                }
            }
        }
        for &w in &self.dist2[v] {
            if !assigned[w] {
                dom[w] &= forbid(label, 1);
                if dom[w] == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Depth-first search for any labeling of the current span.
    fn find(
        &mut self,
        depth: usize,
        dom: &[u64],
        assigned: &mut [bool],
        labels: &mut [usize],
    ) -> bool {
        if depth == self.order.len() {
            return true;
        }
        if !self.clock.tick() {
            self.timed_out = true;
            return false;
        }
        let v = self.order[depth];
        let mut options = dom[v];
        while options != 0 {
            let label = options.trailing_zeros() as usize;
            options &= options - 1;
            let mut next = dom.to_vec();
            if !self.propagate(&mut next, assigned, v, label) {
                continue;
            }
            assigned[v] = true;
            labels[v] = label;
            if self.find(depth + 1, &next, assigned, labels) {
                return true;
            }
            assigned[v] = false;
            if self.timed_out {
                return false;
            }
        }
        false
    }

    /// Exhaustive search over labelings of the current span minimizing holes.
    #[allow(clippy::too_many_arguments)]
    fn min_holes(
        &mut self,
        depth: usize,
        dom: &[u64],
        assigned: &mut [bool],
        labels: &mut [usize],
        use_count: &mut [usize],
        inner_used: usize,
        best: &mut Option<(usize, Vec<usize>)>,
    ) {
        let inner = self.span.saturating_sub(1);
        let remaining = self.order.len() - depth;
        let floor = inner.saturating_sub(inner_used + remaining);
        if let Some((b, _)) = best {
            if floor >= *b {
                return;
            }
        }
        if depth == self.order.len() {
            // both 0 and span must appear for the span to be exact
            if use_count[0] > 0 && use_count[self.span] > 0 {
                *best = Some((inner - inner_used, labels.to_vec()));
            }
            return;
        }
        if !self.clock.tick() {
            self.timed_out = true;
            return;
        }
        let v = self.order[depth];
        let mut options = dom[v];
        while options != 0 {
            let label = options.trailing_zeros() as usize;
            options &= options - 1;
            let mut next = dom.to_vec();
            if !self.propagate(&mut next, assigned, v, label) {
                continue;
            }
            assigned[v] = true;
            labels[v] = label;
            let fresh_inner = label >= 1 && label < self.span && use_count[label] == 0;
            use_count[label] += 1;
            self.min_holes(
                depth + 1,
                &next,
                assigned,
                labels,
                use_count,
                inner_used + usize::from(fresh_inner),
                best,
            );
            use_count[label] -= 1;
            assigned[v] = false;
            if self.timed_out || matches!(best, Some((0, _))) {
                return;
            }
        }
    }
}

fn lambda_search(g: &Graph, budget: &OracleBudget) -> Result<(LabelSearch, usize, Vec<usize>)> {
    budget.check_n(g, "oracle_lambda")?;
    let n = g.n();
    let mut search = LabelSearch::new(g, budget);
    if n == 0 {
        return Ok((search, 0, Vec::new()));
    }
    let delta = g.max_degree();
    let start = if delta == 0 { 0 } else { delta + 1 };
    for span in start..=62 {
        search.span = span;
        let dom = search.initial_domains();
        let mut assigned = vec![false; n];
        let mut labels = vec![0; n];
        if search.find(0, &dom, &mut assigned, &mut labels) {
            return Ok((search, span, labels));
        }
        if search.timed_out {
            return Err(Error::Resource("λ search ran out of time".into()));
        }
    }
    Err(Error::Resource("λ exceeds 62".into()))
}

/// Exact `λ(g)` with an optimal labeling.
pub fn oracle_lambda(g: &Graph, budget: &OracleBudget) -> Result<(usize, Labeling)> {
    let (_, span, labels) = lambda_search(g, budget)?;
    Ok((span, Labeling::new(labels)))
}

/// Exact hole index `ρ(g)`: the fewest holes over all labelings of span `λ(g)`.
pub fn oracle_rho(g: &Graph, budget: &OracleBudget) -> Result<(usize, Labeling)> {
    let (mut search, span, labels) = lambda_search(g, budget)?;
    let n = g.n();
    if n == 0 || span <= 1 {
        return Ok((0, Labeling::new(labels)));
    }
    let dom = search.initial_domains();
    let mut assigned = vec![false; n];
    let mut scratch = vec![0; n];
    let mut use_count = vec![0; span + 1];
    let mut best = None;
    search.min_holes(
        0,
        &dom,
        &mut assigned,
        &mut scratch,
        &mut use_count,
        0,
        &mut best,
    );
    if search.timed_out {
        return Err(Error::Resource("ρ search ran out of time".into()));
    }
    let (holes, labels) = best.expect("a labeling of span λ exists");
    Ok((holes, Labeling::new(labels)))
}

/// Decodes a Prüfer sequence over `0..n` (with `n = seq.len() + 2`) into a tree.
pub fn prufer_decode(seq: &[usize]) -> Result<Graph> {
    let n = seq.len() + 2;
    if let Some(&bad) = seq.iter().find(|&&s| s >= n) {
        return Err(Error::InvalidGraph(format!(
            "Prüfer symbol {bad} out of range for {n} vertices"
        )));
    }
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = 0;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &s in seq {
        edges.push((leaf, s));
        degree[s] -= 1;
        if degree[s] == 1 && s < ptr {
            leaf = s;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    Graph::from_edges(n, &edges)
}

/// Prüfer sequence of a labeled tree with at least two vertices.
pub fn prufer_encode(t: &Graph) -> Result<Vec<usize>> {
    if !t.is_tree() || t.n() < 2 {
        return Err(Error::Shape(
            "Prüfer encoding needs a tree with two or more vertices".into(),
        ));
    }
    let n = t.n();
    let mut degree: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut seq = Vec::with_capacity(n - 2);
    let mut ptr = 0;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for _ in 0..n - 2 {
        removed[leaf] = true;
        let next = *t
            .neighbors(leaf)
            .iter()
            .find(|&&w| !removed[w])
            .expect("leaf has a live neighbour");
        seq.push(next);
        degree[next] -= 1;
        if degree[next] == 1 && next < ptr {
            leaf = next;
        } else {
            ptr += 1;
            while degree[ptr] != 1 || removed[ptr] {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    Ok(seq)
}

/// All `n^(n-2)` labeled trees on `n` vertices, in lexicographic Prüfer order.
pub fn enumerate_trees(n: usize) -> impl Iterator<Item = Graph> {
    let len = n.saturating_sub(2);
    let total: u64 = if n <= 1 {
        1
    } else {
        (n as u64).pow(len as u32)
    };
    let mut seq = vec![0usize; len];
    (0..total).map(move |i| {
        if n <= 1 {
            return Graph::empty(n);
        }
        if i > 0 {
            for s in seq.iter_mut().rev() {
                *s += 1;
                if *s < n {
                    break;
                }
                *s = 0;
            }
        }
        prufer_decode(&seq).expect("symbols in range")
    })
}

/// A uniformly random labeled tree on `n` vertices.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    if n <= 1 {
        return Graph::empty(n);
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    prufer_decode(&seq).expect("symbols in range")
}
