//! Undirected simple graphs on dense vertex indices, together with the
//! structural vocabulary the path-cover results are phrased in: leaves,
//! heavy/light vertices, heavy edges, vines and generalized stars.
//!
//! A vertex is *heavy* when its degree exceeds 2 and *light* otherwise. A
//! *heavy edge* joins two heavy vertices. A *vine* is a maximal path that
//! starts at a leaf and contains only light vertices; when the graph is not a
//! path, the vertex following the inner end of a vine is heavy and is called
//! its center. Vine sizes are always counted in vertices.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected simple graph with vertices `0..n`.
///
/// The adjacency lists are kept sorted and free of duplicates and self-loops,
/// so two graphs are equal exactly when they have the same edge set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

/// Counting statistics used by the closed-form path-cover formulas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    /// Number of degree-1 vertices.
    pub leaves: usize,
    /// Number of edges whose endpoints both have degree > 2.
    pub heavy_edges: usize,
    pub heavy_vertices: Vec<usize>,
    pub light_vertices: Vec<usize>,
}

/// The most specific shape class of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Path,
    Cycle,
    /// `K_{1,k}` with `k >= 3`.
    Star,
    /// A tree with one heavy vertex whose vines all have the same vertex count
    /// (and that is not a star).
    GeneralizedStar,
    Tree,
    Forest,
    ConnectedOther,
    DisconnectedOther,
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Shape::Path => "path",
            Shape::Cycle => "cycle",
            Shape::Star => "star",
            Shape::GeneralizedStar => "generalized_star",
            Shape::Tree => "tree",
            Shape::Forest => "forest",
            Shape::ConnectedOther => "connected_other",
            Shape::DisconnectedOther => "disconnected_other",
        };
        f.write_str(s)
    }
}

/// A vine: light vertices listed from the leaf inwards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vine {
    pub vertices: Vec<usize>,
    /// The heavy vertex adjacent to the inner end.
    pub center: Option<usize>,
}

impl Vine {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn leaf(&self) -> usize {
        self.vertices[0]
    }

    pub fn inner_end(&self) -> usize {
        *self.vertices.last().expect("vines are non-empty")
    }
}

impl Graph {
    /// `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph, rejecting self-loops, duplicate edges and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {u}-{v} out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("duplicate edge {u}-{}", w[0])));
            }
        }
        Ok(Graph { adj })
    }

    /// Like [`Graph::from_edges`] for edge lists known to be simple.
    pub(crate) fn from_edges_unchecked(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { adj }
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges_unchecked(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Self::from_edges_unchecked(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn complete(n: usize) -> Self {
        Self::from_edges_unchecked(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Self::from_edges_unchecked(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
    }

    /// A spider whose arms have the given vertex counts; the hub is vertex 0 and
    /// each arm is numbered outwards from the hub.
    pub fn spider(arms: &[usize]) -> Self {
        let n = 1 + arms.iter().sum::<usize>();
        let mut edges = Vec::with_capacity(n - 1);
        let mut next = 1;
        for &len in arms {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        Self::from_edges_unchecked(n, edges)
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let mut adj = self.adj.clone();
        adj.extend(
            other
                .adj
                .iter()
                .map(|list| list.iter().map(|&v| v + off).collect::<Vec<_>>()),
        );
        Graph { adj }
    }

    /// Returns the graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n());
        Self::from_edges_unchecked(self.n(), self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_heavy(&self, v: usize) -> bool {
        self.degree(v) > 2
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.degree(v) == 1
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let adj = (0..n)
            .map(|u| {
                let mut out = Vec::with_capacity(n - 1 - self.degree(u));
                let mut it = self.adj[u].iter().peekable();
                for v in 0..n {
                    if it.peek() == Some(&&v) {
                        it.next();
                    } else if v != u {
                        out.push(v);
                    }
                }
                out
            })
            .collect();
        Graph { adj }
    }

    pub fn stats(&self) -> GraphStats {
        let (heavy_vertices, light_vertices): (Vec<usize>, Vec<usize>) =
            (0..self.n()).partition(|&v| self.is_heavy(v));
        GraphStats {
            n: self.n(),
            m: self.m(),
            leaves: (0..self.n()).filter(|&v| self.is_leaf(v)).count(),
            heavy_edges: self
                .edges()
                .filter(|&(u, v)| self.is_heavy(u) && self.is_heavy(v))
                .count(),
            heavy_vertices,
            light_vertices,
        }
    }

    /// Component index per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.n()];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = count;
                        stack.push(v);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }

    pub fn is_tree(&self) -> bool {
        self.n() >= 1 && self.m() + 1 == self.n() && self.is_connected()
    }

    pub fn is_forest(&self) -> bool {
        self.m() + self.components().1 == self.n()
    }

    pub fn is_path(&self) -> bool {
        self.is_tree() && self.max_degree() <= 2
    }

    pub fn is_cycle(&self) -> bool {
        self.n() >= 3 && self.is_connected() && self.adj.iter().all(|l| l.len() == 2)
    }

    /// BFS distances from `src` (`usize::MAX` for unreachable vertices).
    pub fn bfs_distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::from([src]);
        dist[src] = 0;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// The vines, one per leaf in increasing leaf order.
    ///
    /// Fails when some component is a path, since its leaves reach another leaf
    /// instead of a center.
    pub fn vines(&self) -> Result<Vec<Vine>> {
        if self.is_path() {
            return Err(Error::Shape("a path has no centered vines".into()));
        }
        if self.is_cycle() {
            return Err(Error::Shape("a cycle has no vines".into()));
        }
        let mut out = Vec::new();
        for leaf in (0..self.n()).filter(|&v| self.is_leaf(v)) {
            let mut vertices = vec![leaf];
            let mut prev = leaf;
            let mut cur = self.adj[leaf][0];
            loop {
                if self.is_heavy(cur) {
                    out.push(Vine {
                        vertices,
                        center: Some(cur),
                    });
                    break;
                }
                vertices.push(cur);
                match self.adj[cur].iter().find(|&&w| w != prev) {
                    Some(&next) => {
                        prev = cur;
                        cur = next;
                    }
                    None => {
                        return Err(Error::Shape(format!(
                            "leaf {leaf} lies on a path component"
                        )))
                    }
                }
            }
        }
        Ok(out)
    }

    /// True for trees with exactly one heavy vertex whose vines all have the same
    /// vertex count. Stars `K_{1,k}` (`k >= 3`) are included; paths are not.
    pub fn is_generalized_star(&self) -> bool {
        if !self.is_tree() {
            return false;
        }
        if (0..self.n()).filter(|&v| self.is_heavy(v)).count() != 1 {
            return false;
        }
        match self.vines() {
            Ok(vines) => vines.windows(2).all(|w| w[0].len() == w[1].len()),
            Err(_) => false,
        }
    }

    pub fn classify(&self) -> Shape {
        let n = self.n();
        if n == 0 {
            return Shape::Forest;
        }
        if self.is_tree() {
            if self.max_degree() <= 2 {
                return Shape::Path;
            }
            if self.is_generalized_star() {
                let hub_only = self.m() + 1 == n && self.max_degree() == n - 1;
                return if hub_only {
                    Shape::Star
                } else {
                    Shape::GeneralizedStar
                };
            }
            return Shape::Tree;
        }
        if self.is_connected() {
            if self.is_cycle() {
                Shape::Cycle
            } else {
                Shape::ConnectedOther
            }
        } else if self.is_forest() {
            Shape::Forest
        } else {
            Shape::DisconnectedOther
        }
    }

    /// Parses the line-oriented edge-list format.
    ///
    /// Each line is `u v`; blank lines and `#` comments are skipped; the first
    /// data line may be `n <count>` to declare the vertex count (and hence
    /// isolated vertices).
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut declared: Option<usize> = None;
        let mut edges = Vec::new();
        let mut seen_data = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(perr(format!("expected two tokens, found {}", tokens.len())));
            }
            if tokens[0] == "n" {
                if seen_data {
                    return Err(perr("vertex-count header must come first".into()));
                }
                let n = tokens[1]
                    .parse::<usize>()
                    .map_err(|_| perr(format!("bad vertex count {:?}", tokens[1])))?;
                declared = Some(n);
                seen_data = true;
                continue;
            }
            seen_data = true;
            let parse = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| perr(format!("bad vertex index {t:?}")))
            };
            let (u, v) = (parse(tokens[0])?, parse(tokens[1])?);
            if u == v {
                return Err(perr(format!("self-loop at vertex {u}")));
            }
            edges.push((u.min(v), u.max(v), line_no));
        }
        let max_index = edges.iter().map(|&(_, v, _)| v + 1).max().unwrap_or(0);
        let n = match declared {
            Some(n) if n < max_index => {
                let &(u, v, line) = edges.iter().find(|e| e.1 >= n).expect("exists");
                return Err(Error::Parse {
                    line,
                    message: format!("edge {u}-{v} exceeds declared vertex count {n}"),
                });
            }
            Some(n) => n,
            None => max_index,
        };
        let mut sorted: Vec<_> = edges.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted
            .windows(2)
            .find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1))
        {
            return Err(Error::Parse {
                line: w[0].2.max(w[1].2),
                message: format!("duplicate edge {}-{}", w[0].0, w[0].1),
            });
        }
        Ok(Self::from_edges_unchecked(
            n,
            edges.into_iter().map(|(u, v, _)| (u, v)),
        ))
    }

    /// Serializes as an edge list with an `n` header, readable by
    /// [`Graph::parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Encodes in graph6 (short form, `n <= 62`).
    pub fn to_graph6(&self) -> Result<String> {
        let n = self.n();
        if n > 62 {
            return Err(Error::InvalidGraph(format!(
                "graph6 short form supports at most 62 vertices, got {n}"
            )));
        }
        let mut out = String::new();
        out.push((n as u8 + 63) as char);
        let mut chunk = 0u8;
        let mut filled = 0;
        for j in 1..n {
            for i in 0..j {
                chunk = (chunk << 1) | u8::from(self.has_edge(i, j));
                filled += 1;
                if filled == 6 {
                    out.push((chunk + 63) as char);
                    chunk = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push(((chunk << (6 - filled)) + 63) as char);
        }
        Ok(out)
    }

    pub fn parse_graph6(text: &str) -> Result<Graph> {
        let s = text.trim();
        let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
        let bytes = s.as_bytes();
        let bad = |message: String| Error::Parse { line: 1, message };
        let (&first, rest) = bytes
            .split_first()
            .ok_or_else(|| bad("empty graph6 string".into()))?;
        if !(63..=125).contains(&first) {
            return Err(bad(if first == 126 {
                "graph6 long form (n > 62) is not supported".into()
            } else {
                format!("invalid graph6 size byte {first}")
            }));
        }
        let n = (first - 63) as usize;
        let bits = n * n.saturating_sub(1) / 2;
        let expected = bits.div_ceil(6);
        if rest.len() != expected {
            return Err(bad(format!(
                "graph6 body for n={n} needs {expected} bytes, found {}",
                rest.len()
            )));
        }
        if let Some(&b) = rest.iter().find(|b| !(63..=126).contains(*b)) {
            return Err(bad(format!("invalid graph6 byte {b}")));
        }
        let bit = |k: usize| ((rest[k / 6] - 63) >> (5 - k % 6)) & 1 == 1;
        if (bits..expected * 6).any(bit) {
            return Err(bad("nonzero graph6 padding bits".into()));
        }
        let mut edges = Vec::new();
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if bit(k) {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
        Ok(Self::from_edges_unchecked(n, edges))
    }

    /// True if `line` looks like a graph6 string rather than an edge list.
    pub fn looks_like_graph6(line: &str) -> bool {
        let s = line.trim();
        let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
        let Some(&first) = s.as_bytes().first() else {
            return false;
        };
        if !(63..=125).contains(&first) || s.bytes().any(|b| !(63..=126).contains(&b)) {
            return false;
        }
        let n = (first - 63) as usize;
        s.len() == 1 + (n * n.saturating_sub(1) / 2).div_ceil(6)
    }

    /// Parses graph6 when the (single-line) text looks like it, otherwise an edge list.
    pub fn parse_auto(text: &str) -> Result<Graph> {
        let mut data = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        match (data.next(), data.next()) {
            (Some(line), None) if Self::looks_like_graph6(line) => Self::parse_graph6(line),
            _ => Self::parse_edge_list(text),
        }
    }

    /// Graphviz export with vertex indices as labels.
    pub fn to_dot(&self) -> String {
        self.to_dot_with(None, &[])
    }

    /// Graphviz export; `labels` replaces the vertex captions and `bold` edges
    /// are drawn highlighted (used for coverings).
    pub fn to_dot_with(&self, labels: Option<&[String]>, bold: &[(usize, usize)]) -> String {
        let mut out = String::from("graph G {\n");
        for v in 0..self.n() {
            match labels {
                Some(l) => {
                    let _ = writeln!(out, "  {v} [label=\"{}\"];", l[v]);
                }
                None => {
                    let _ = writeln!(out, "  {v};");
                }
            }
        }
        for (u, v) in self.edges() {
            let hl = bold
                .iter()
                .any(|&(a, b)| (a, b) == (u, v) || (b, a) == (u, v));
            if hl {
                let _ = writeln!(out, "  {u} -- {v} [penwidth=3];");
            } else {
                let _ = writeln!(out, "  {u} -- {v};");
            }
        }
        out.push_str("}\n");
        out
    }
}
