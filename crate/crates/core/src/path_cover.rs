//! Minimum path coverings of trees and tree-like graphs.
//!
//! [`tree_path_cover`] is the exact linear-time routine: it repeatedly picks a
//! vertex `v` whose neighbours are all leaves except one, and either drops a
//! lone pendant leaf (`P(T) = P(T - z)`) or strips `v` with its `k >= 2`
//! pendant leaves (`P(T) = P(T') + k - 1`). The reduction trace is replayed
//! backwards to build a witness covering.
//!
//! The closed-form counts ([`leaf_bounds`], [`light_neighbor_formula`],
//! [`three_light_formula`], [`expansion_path_cover`]) check their hypotheses
//! and report a witness vertex when one fails.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Vertex-disjoint paths covering every vertex of a host graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCovering {
    pub paths: Vec<Vec<usize>>,
    pub host_n: usize,
}

/// Path vertex counts in nondecreasing order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PathSequence(pub Vec<usize>);

impl PathSequence {
    pub fn from_counts(mut counts: Vec<usize>) -> Self {
        counts.sort_unstable();
        PathSequence(counts)
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl std::fmt::Display for PathSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl PathCovering {
    pub fn new(paths: Vec<Vec<usize>>, host_n: usize) -> Self {
        PathCovering { paths, host_n }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Checks that the paths are genuine paths of `g`, pairwise disjoint, and
    /// cover all of `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.host_n != g.n() {
            return Err(Error::Contract(format!(
                "covering is for {} vertices, graph has {}",
                self.host_n,
                g.n()
            )));
        }
        let mut seen = vec![false; g.n()];
        for path in &self.paths {
            if path.is_empty() {
                return Err(Error::Contract("empty path in covering".into()));
            }
            for &v in path {
                if v >= g.n() {
                    return Err(Error::Contract(format!("vertex {v} out of range")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::Contract(format!("vertex {v} covered twice")));
                }
            }
            if let Some(w) = path.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
                return Err(Error::Contract(format!(
                    "consecutive vertices {} and {} are not adjacent",
                    w[0], w[1]
                )));
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::Contract(format!("vertex {v} is not covered")));
        }
        Ok(())
    }

    pub fn path_sequence(&self) -> PathSequence {
        PathSequence::from_counts(self.paths.iter().map(Vec::len).collect())
    }

    /// Edges used by the paths, each as `(min, max)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.paths
            .iter()
            .flat_map(|p| p.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))))
            .collect()
    }

    /// Orients every path from its lower-indexed endpoint and orders paths by
    /// `(vertex count, vertex list)`.
    pub fn canonicalize(&mut self) {
        for p in &mut self.paths {
            if p.first() > p.last() {
                p.reverse();
            }
        }
        self.paths
            .sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    }

    pub fn canonical(mut self) -> Self {
        self.canonicalize();
        self
    }
}

/// One step of the tree reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reduction {
    /// `v` had a single pendant leaf, which was removed; `v` became a leaf.
    DropLeaf { v: usize, leaf: usize },
    /// `v` and its `k >= 2` pendant leaves were removed; `parent` survived.
    StripStar {
        v: usize,
        parent: usize,
        leaves: Vec<usize>,
    },
}

/// Result of [`tree_path_cover`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeCover {
    pub count: usize,
    pub covering: PathCovering,
    pub trace: Vec<Reduction>,
}

/// Exact minimum path covering of a tree in `O(n)` time.
pub fn tree_path_cover(t: &Graph) -> Result<TreeCover> {
    if !t.is_tree() {
        return Err(Error::Shape("tree_path_cover needs a tree".into()));
    }
    let n = t.n();
    let mut deg: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut alive = vec![true; n];
    // alive neighbours of degree >= 2
    let mut inner_nbrs: Vec<usize> = (0..n)
        .map(|v| t.neighbors(v).iter().filter(|&&w| deg[w] >= 2).count())
        .collect();
    let mut inner_alive = deg.iter().filter(|&&d| d >= 2).count();
    let is_candidate = |v: usize, deg: &[usize], inner: &[usize]| deg[v] >= 2 && inner[v] == 1;
    let mut queue: VecDeque<usize> = (0..n)
        .filter(|&v| is_candidate(v, &deg, &inner_nbrs))
        .collect();
    let mut trace = Vec::new();

    while inner_alive >= 2 {
        let v = queue
            .pop_front()
            .expect("a tree with two inner vertices has a candidate");
        if !alive[v] || !is_candidate(v, &deg, &inner_nbrs) {
            continue;
        }
        let mut leaves = Vec::new();
        let mut parent = None;
        for &w in t.neighbors(v) {
            if !alive[w] {
                continue;
            }
            if deg[w] == 1 {
                leaves.push(w);
            } else {
                parent = Some(w);
            }
        }
        let u = parent.expect("candidate has one inner neighbour");
        if let [z] = leaves[..] {
            alive[z] = false;
            deg[v] = 1;
            inner_alive -= 1;
            inner_nbrs[u] -= 1;
            if is_candidate(u, &deg, &inner_nbrs) {
                queue.push_back(u);
            }
            trace.push(Reduction::DropLeaf { v, leaf: z });
        } else {
            for &z in &leaves {
                alive[z] = false;
            }
            alive[v] = false;
            inner_alive -= 1;
            deg[u] -= 1;
            inner_nbrs[u] -= 1;
            if deg[u] == 1 {
                inner_alive -= 1;
                let w = *t
                    .neighbors(u)
                    .iter()
                    .find(|&&w| alive[w])
                    .expect("a new leaf keeps one neighbour");
                inner_nbrs[w] -= 1;
                if is_candidate(w, &deg, &inner_nbrs) {
                    queue.push_back(w);
                }
            } else if is_candidate(u, &deg, &inner_nbrs) {
                queue.push_back(u);
            }
            trace.push(Reduction::StripStar {
                v,
                parent: u,
                leaves,
            });
        }
    }

    // What is left is a star, an edge or a single vertex.
    let mut paths: Vec<VecDeque<usize>> = Vec::new();
    match (0..n).find(|&v| alive[v] && deg[v] >= 2) {
        Some(c) => {
            let leaves: Vec<usize> = t
                .neighbors(c)
                .iter()
                .copied()
                .filter(|&w| alive[w])
                .collect();
            paths.push(VecDeque::from([leaves[0], c, leaves[1]]));
            paths.extend(leaves[2..].iter().map(|&z| VecDeque::from([z])));
        }
        None => paths.push((0..n).filter(|&v| alive[v]).collect()),
    }

    let mut path_of = vec![usize::MAX; n];
    for (i, p) in paths.iter().enumerate() {
        for &v in p {
            path_of[v] = i;
        }
    }
    for step in trace.iter().rev() {
        match step {
            Reduction::DropLeaf { v, leaf } => {
                let p = &mut paths[path_of[*v]];
                if p.back() == Some(v) {
                    p.push_back(*leaf);
                } else {
                    debug_assert_eq!(p.front(), Some(v));
                    p.push_front(*leaf);
                }
                path_of[*leaf] = path_of[*v];
            }
            Reduction::StripStar { v, leaves, .. } => {
                path_of[leaves[0]] = paths.len();
                path_of[*v] = paths.len();
                path_of[leaves[1]] = paths.len();
                paths.push(VecDeque::from([leaves[0], *v, leaves[1]]));
                for &z in &leaves[2..] {
                    path_of[z] = paths.len();
                    paths.push(VecDeque::from([z]));
                }
            }
        }
    }

    let covering = PathCovering::new(paths.into_iter().map(Vec::from).collect(), n).canonical();
    Ok(TreeCover {
        count: covering.len(),
        covering,
        trace,
    })
}

fn require_tree_with_edge(t: &Graph, what: &str) -> Result<()> {
    if !t.is_tree() {
        return Err(Error::Shape(format!("{what} needs a tree")));
    }
    if t.n() < 2 {
        return Err(Error::Shape(format!("{what} needs at least two vertices")));
    }
    Ok(())
}

/// `(ℓ - h - 1, ℓ - 1)`: lower and upper bounds on the path covering number
/// of a tree with `ℓ` leaves and `h` heavy edges.
pub fn leaf_bounds(t: &Graph) -> Result<(i64, i64)> {
    require_tree_with_edge(t, "leaf_bounds")?;
    let s = t.stats();
    let l = s.leaves as i64;
    Ok((l - s.heavy_edges as i64 - 1, l - 1))
}

fn light_neighbors(g: &Graph, v: usize) -> usize {
    g.neighbors(v).iter().filter(|&&w| !g.is_heavy(w)).count()
}

/// No two heavy vertices are adjacent.
pub fn is_2_sparse(g: &Graph) -> bool {
    g.edges().all(|(u, v)| !(g.is_heavy(u) && g.is_heavy(v)))
}

/// Every heavy vertex has at least two light neighbours.
pub fn is_general_2_sparse(g: &Graph) -> bool {
    (0..g.n()).all(|v| !g.is_heavy(v) || light_neighbors(g, v) >= 2)
}

/// Counting data behind [`light_neighbor_formula`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LightNeighborData {
    /// Heavy vertices with exactly one light neighbour.
    pub s: usize,
    /// Maximum matching size of the forest induced by those vertices.
    pub t: usize,
    pub leaves: usize,
    pub heavy_edges: usize,
}

/// Maximum matching of the subgraph of a forest induced by `members`, by
/// repeatedly matching a leaf to its parent.
fn forest_matching(g: &Graph, members: &[bool]) -> usize {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut visited = vec![false; n];
    let mut order = Vec::new();
    for root in (0..n).filter(|&v| members[v]) {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            order.push(u);
            for &w in g.neighbors(u) {
                if members[w] && !visited[w] {
                    visited[w] = true;
                    parent[w] = u;
                    stack.push(w);
                }
            }
        }
    }
    let mut matched = vec![false; n];
    let mut size = 0;
    for &v in order.iter().rev() {
        let p = parent[v];
        if !matched[v] && p != usize::MAX && !matched[p] {
            matched[v] = true;
            matched[p] = true;
            size += 1;
        }
    }
    size
}

/// `P(T) = ℓ - h + s - t - 1` for trees in which every heavy vertex has a light
/// neighbour; `s` counts heavy vertices with exactly one light neighbour and
/// `t` is the maximum matching size among them.
pub fn light_neighbor_formula(t: &Graph) -> Result<(usize, LightNeighborData)> {
    require_tree_with_edge(t, "light_neighbor_formula")?;
    if let Some(v) = (0..t.n()).find(|&v| t.is_heavy(v) && light_neighbors(t, v) == 0) {
        return Err(Error::condition(
            "every heavy vertex needs a light neighbour",
            format!("heavy vertex {v} has no light neighbour"),
        ));
    }
    let stats = t.stats();
    let members: Vec<bool> = (0..t.n())
        .map(|v| t.is_heavy(v) && light_neighbors(t, v) == 1)
        .collect();
    let data = LightNeighborData {
        s: members.iter().filter(|&&b| b).count(),
        t: forest_matching(t, &members),
        leaves: stats.leaves,
        heavy_edges: stats.heavy_edges,
    };
    let p = data.leaves as i64 - data.heavy_edges as i64 + data.s as i64 - data.t as i64 - 1;
    let p = usize::try_from(p).map_err(|_| Error::Contract(format!("formula gave {p}")))?;
    Ok((p, data))
}

/// `P(G) = ℓ + m - h - n` for connected non-cycle graphs with an edge in which
/// every heavy vertex has at least three light neighbours.
pub fn three_light_formula(g: &Graph) -> Result<usize> {
    if g.m() == 0 {
        return Err(Error::condition("needs at least one edge", "m = 0"));
    }
    if !g.is_connected() {
        let (comp, _) = g.components();
        let v = comp.iter().position(|&c| c != 0).unwrap_or(0);
        return Err(Error::condition(
            "graph must be connected",
            format!("vertex {v} is not reachable from vertex 0"),
        ));
    }
    if g.is_cycle() {
        return Err(Error::condition(
            "graph must not be a cycle",
            "graph is a cycle",
        ));
    }
    if let Some(v) = (0..g.n()).find(|&v| g.is_heavy(v) && light_neighbors(g, v) < 3) {
        return Err(Error::condition(
            "every heavy vertex needs three light neighbours",
            format!(
                "heavy vertex {v} has {} light neighbours",
                light_neighbors(g, v)
            ),
        ));
    }
    let s = g.stats();
    let p = s.leaves as i64 + s.m as i64 - s.heavy_edges as i64 - s.n as i64;
    usize::try_from(p).map_err(|_| Error::Contract(format!("formula gave {p}")))
}

/// The clique that replaced one tree edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub u: usize,
    pub v: usize,
    pub fresh: Vec<usize>,
}

/// A block graph obtained by blowing up each tree edge into a clique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub graph: Graph,
    pub blocks: Vec<Block>,
}

/// Replaces the `i`-th edge of `t` (in [`Graph::edges`] order) by a clique of
/// order `orders[i]` containing both endpoints. Fresh vertices are numbered
/// from `t.n()` upwards, block by block.
pub fn expand_tree(t: &Graph, orders: &[usize]) -> Result<Expansion> {
    require_tree_with_edge(t, "expand_tree")?;
    if orders.len() != t.m() {
        return Err(Error::Contract(format!(
            "{} block orders given for {} edges",
            orders.len(),
            t.m()
        )));
    }
    if let Some(i) = orders.iter().position(|&q| q < 2) {
        let (u, v) = t.edges().nth(i).expect("in range");
        return Err(Error::condition(
            "block orders must be at least 2",
            format!("edge {u}-{v} has order {}", orders[i]),
        ));
    }
    let mut next = t.n();
    let mut edges = Vec::new();
    let mut blocks = Vec::with_capacity(t.m());
    for ((u, v), &q) in t.edges().zip(orders) {
        let fresh: Vec<usize> = (next..next + q - 2).collect();
        next += q - 2;
        let members: Vec<usize> = [u, v].into_iter().chain(fresh.iter().copied()).collect();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                edges.push((a, b));
            }
        }
        blocks.push(Block { u, v, fresh });
    }
    Ok(Expansion {
        graph: Graph::from_edges_unchecked(next, edges),
        blocks,
    })
}

/// Result of [`expansion_path_cover`].
#[derive(Debug, Clone)]
pub struct ExpansionCover {
    pub count: usize,
    pub covering: PathCovering,
    pub expansion: Expansion,
}

/// `P(G) = ℓ - 1` for every clique expansion `G` of a 2-sparse tree with
/// `ℓ >= 2` leaves, with a witness threaded through the cliques.
pub fn expansion_path_cover(t: &Graph, orders: &[usize]) -> Result<ExpansionCover> {
    let expansion = expand_tree(t, orders)?;
    if let Some((u, v)) = t.edges().find(|&(u, v)| t.is_heavy(u) && t.is_heavy(v)) {
        return Err(Error::condition(
            "tree must be 2-sparse",
            format!("heavy edge {u}-{v}"),
        ));
    }
    let leaves = t.stats().leaves;
    let base = tree_path_cover(t)?;

    let mut used = std::collections::HashSet::new();
    for e in base.covering.edges() {
        used.insert(e);
    }
    let fresh_of = |a: usize, b: usize| -> &Block {
        let key = (a.min(b), a.max(b));
        expansion
            .blocks
            .iter()
            .find(|blk| (blk.u, blk.v) == key)
            .expect("every tree edge has a block")
    };

    // Thread used edges through their cliques.
    let mut paths: Vec<VecDeque<usize>> = Vec::with_capacity(base.count);
    for p in &base.covering.paths {
        let mut out = VecDeque::with_capacity(p.len());
        out.push_back(p[0]);
        for w in p.windows(2) {
            out.extend(fresh_of(w[0], w[1]).fresh.iter().copied());
            out.push_back(w[1]);
        }
        paths.push(out);
    }
    let mut path_of = vec![usize::MAX; expansion.graph.n()];
    for (i, p) in paths.iter().enumerate() {
        for &v in p {
            path_of[v] = i;
        }
    }
    // Hang the fresh vertices of unused edges off a light endpoint.
    for blk in &expansion.blocks {
        if used.contains(&(blk.u, blk.v)) || blk.fresh.is_empty() {
            continue;
        }
        let end = [blk.u, blk.v].into_iter().find(|&x| {
            let p = &paths[path_of[x]];
            !t.is_heavy(x) && (p.front() == Some(&x) || p.back() == Some(&x))
        });
        let Some(x) = end else {
            return Err(Error::Contract(format!(
                "edge {}-{} is unused but has no light path end",
                blk.u, blk.v
            )));
        };
        let pi = path_of[x];
        let p = &mut paths[pi];
        if p.back() == Some(&x) {
            p.extend(blk.fresh.iter().copied());
        } else {
            for &f in &blk.fresh {
                p.push_front(f);
            }
        }
        for &f in &blk.fresh {
            path_of[f] = pi;
        }
    }
    let covering = PathCovering::new(
        paths.into_iter().map(Vec::from).collect(),
        expansion.graph.n(),
    )
    .canonical();
    debug_assert_eq!(covering.len(), leaves - 1);
    Ok(ExpansionCover {
        count: leaves - 1,
        covering,
        expansion,
    })
}
