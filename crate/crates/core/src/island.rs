//! Trees whose complements have a unique island sequence.
//!
//! A tree has a unique path sequence exactly when it can be built from a
//! labeled generalized star (at least three vines) or a labeled path by
//! repeatedly attaching pieces:
//!
//! * Type-1: a labeled generalized star with at least three vines, center
//!   joined to a vertex marked `A`;
//! * Type-2: a labeled path, one of its internal vertices joined to a vertex
//!   marked `A`;
//! * Type-3: a labeled generalized star, center joined to a vertex marked `B`
//!   whose own star has vines of the same vertex count.
//!
//! [`duis`] decides the property in linear time by peeling pieces off the
//! deepest heavy vertex; [`certify_family_membership`] turns a positive answer
//! into an explicit construction script.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use crate::oracle::{sequence_set, SequenceSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mark {
    A,
    B,
    /// Leaves, and vertices with no constraint.
    O,
}

/// Shape of a freshly built labeled piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum PieceShape {
    /// Center is local vertex 0; each vine is numbered outwards.
    Star {
        vine_count: usize,
        vine_vertices: usize,
    },
    /// Numbered from one end to the other.
    Path { n: usize },
}

impl PieceShape {
    pub fn vertex_count(&self) -> usize {
        match *self {
            PieceShape::Star {
                vine_count,
                vine_vertices,
            } => 1 + vine_count * vine_vertices,
            PieceShape::Path { n } => n,
        }
    }
}

/// A tree with `A`/`B`/`O` marks, grown by the three attachment operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTree {
    n: usize,
    edges: Vec<(usize, usize)>,
    degree: Vec<usize>,
    marks: Vec<Mark>,
    /// Star each `B` vertex belongs to.
    star_of: Vec<Option<usize>>,
    /// Vine vertex count of every star placed so far.
    star_vines: Vec<usize>,
    /// Set while the tree is still a single base piece.
    piece: Option<PieceShape>,
}

/// A labeled generalized star with `vine_count` vines of `vine_vertices`
/// vertices. With two vines this is an odd path centered at its middle.
pub fn make_labeled_generalized_star(
    vine_count: usize,
    vine_vertices: usize,
) -> Result<LabeledTree> {
    if vine_count < 2 || vine_vertices < 1 {
        return Err(Error::Construction(format!(
            "a labeled star needs at least 2 vines of at least 1 vertex (got {vine_count} x {vine_vertices})"
        )));
    }
    let n = 1 + vine_count * vine_vertices;
    let mut edges = Vec::with_capacity(n - 1);
    let mut marks = vec![Mark::A; n];
    let mut star_of = vec![None; n];
    for arm in 0..vine_count {
        let first = 1 + arm * vine_vertices;
        edges.push((0, first));
        for i in 1..vine_vertices {
            edges.push((first + i - 1, first + i));
        }
        if vine_vertices > 1 {
            marks[first] = Mark::B;
            star_of[first] = Some(0);
        }
        marks[first + vine_vertices - 1] = Mark::O;
    }
    Ok(LabeledTree::assemble(
        n,
        edges,
        marks,
        star_of,
        vec![vine_vertices],
        Some(PieceShape::Star {
            vine_count,
            vine_vertices,
        }),
    ))
}

/// A path on `n >= 3` vertices with every internal vertex marked `A`.
pub fn make_labeled_path(n: usize) -> Result<LabeledTree> {
    if n < 3 {
        return Err(Error::Construction(format!(
            "a labeled path needs at least 3 vertices (got {n})"
        )));
    }
    let mut marks = vec![Mark::A; n];
    marks[0] = Mark::O;
    marks[n - 1] = Mark::O;
    Ok(LabeledTree::assemble(
        n,
        (1..n).map(|i| (i - 1, i)).collect(),
        marks,
        vec![None; n],
        Vec::new(),
        Some(PieceShape::Path { n }),
    ))
}

fn make_piece(shape: PieceShape) -> Result<LabeledTree> {
    match shape {
        PieceShape::Star {
            vine_count,
            vine_vertices,
        } => make_labeled_generalized_star(vine_count, vine_vertices),
        PieceShape::Path { n } => make_labeled_path(n),
    }
}

impl LabeledTree {
    fn assemble(
        n: usize,
        edges: Vec<(usize, usize)>,
        marks: Vec<Mark>,
        star_of: Vec<Option<usize>>,
        star_vines: Vec<usize>,
        piece: Option<PieceShape>,
    ) -> Self {
        let mut degree = vec![0; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        LabeledTree {
            n,
            edges,
            degree,
            marks,
            star_of,
            star_vines,
            piece,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tree(&self) -> Graph {
        Graph::from_edges_unchecked(self.n, self.edges.iter().copied())
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    pub fn mark(&self, v: usize) -> Mark {
        self.marks[v]
    }

    /// Vine vertex count of the star a `B` vertex belongs to.
    pub fn star_vine_vertices(&self, v: usize) -> Option<usize> {
        self.star_of
            .get(v)
            .copied()
            .flatten()
            .map(|s| self.star_vines[s])
    }

    pub fn piece_shape(&self) -> Option<PieceShape> {
        self.piece
    }

    fn check_vertex(&self, u: usize) -> Result<()> {
        if u >= self.n {
            return Err(Error::Construction(format!(
                "vertex {u} out of range (n = {})",
                self.n
            )));
        }
        Ok(())
    }

    fn require_mark(&self, u: usize, want: Mark, op: &str) -> Result<()> {
        self.check_vertex(u)?;
        if self.marks[u] != want {
            return Err(Error::Construction(format!(
                "{op} needs vertex {u} marked {want:?}, found {:?}",
                self.marks[u]
            )));
        }
        Ok(())
    }

    /// Copies `other` in with shifted ids and joins `u` to `other`'s vertex `v`.
    fn join(&mut self, u: usize, other: &LabeledTree, v: usize) {
        let off = self.n;
        let star_off = self.star_vines.len();
        self.edges
            .extend(other.edges.iter().map(|&(a, b)| (a + off, b + off)));
        self.edges.push((u, v + off));
        self.degree.extend_from_slice(&other.degree);
        self.degree[u] += 1;
        self.degree[v + off] += 1;
        self.marks.extend_from_slice(&other.marks);
        self.star_of
            .extend(other.star_of.iter().map(|s| s.map(|s| s + star_off)));
        self.star_vines.extend_from_slice(&other.star_vines);
        self.n += other.n;
        self.piece = None;
    }

    fn star_params(star: &LabeledTree, op: &str) -> Result<(usize, usize)> {
        match star.piece {
            Some(PieceShape::Star {
                vine_count,
                vine_vertices,
            }) => Ok((vine_count, vine_vertices)),
            _ => Err(Error::Construction(format!(
                "{op} attaches a fresh labeled generalized star"
            ))),
        }
    }

    /// Joins the center of `star` (at least three vines) to `u`, marked `A`.
    pub fn apply_type1(&mut self, u: usize, star: &LabeledTree) -> Result<()> {
        let (vine_count, _) = Self::star_params(star, "Type-1")?;
        if vine_count < 3 {
            return Err(Error::Construction(format!(
                "Type-1 needs at least 3 vines (got {vine_count})"
            )));
        }
        self.require_mark(u, Mark::A, "Type-1")?;
        self.join(u, star, 0);
        Ok(())
    }

    /// Joins the internal vertex `v` of the labeled path `p` to `u`, marked `A`.
    pub fn apply_type2(&mut self, u: usize, p: &LabeledTree, v: usize) -> Result<()> {
        let Some(PieceShape::Path { n }) = p.piece else {
            return Err(Error::Construction(
                "Type-2 attaches a fresh labeled path".into(),
            ));
        };
        if v == 0 || v + 1 >= n {
            return Err(Error::Construction(format!(
                "Type-2 needs an internal path vertex (got {v} of {n})"
            )));
        }
        self.require_mark(u, Mark::A, "Type-2")?;
        self.join(u, p, v);
        Ok(())
    }

    /// Joins the center of `star` to `u`, marked `B`, when the vines of `star`
    /// match those of the star containing `u`.
    pub fn apply_type3(&mut self, u: usize, star: &LabeledTree) -> Result<()> {
        let (_, vine_vertices) = Self::star_params(star, "Type-3")?;
        self.require_mark(u, Mark::B, "Type-3")?;
        let own = self
            .star_vine_vertices(u)
            .ok_or_else(|| Error::Construction(format!("vertex {u} has no star")))?;
        if own != vine_vertices {
            return Err(Error::Construction(format!(
                "Type-3 at {u}: vines of {vine_vertices} vertices do not match its star's {own}"
            )));
        }
        self.join(u, star, 0);
        Ok(())
    }

    /// Applies `perm` (old id to new id) to vertices and marks.
    fn relabel(&self, perm: &[usize]) -> LabeledTree {
        let mut marks = vec![Mark::O; self.n];
        let mut star_of = vec![None; self.n];
        for v in 0..self.n {
            marks[perm[v]] = self.marks[v];
            star_of[perm[v]] = self.star_of[v];
        }
        LabeledTree::assemble(
            self.n,
            self.edges
                .iter()
                .map(|&(a, b)| (perm[a], perm[b]))
                .collect(),
            marks,
            star_of,
            self.star_vines.clone(),
            None,
        )
    }

    /// Checks the mark invariants: leaves `O`, internal vertices `A` or `B`,
    /// every `B` on a recorded star.
    pub fn check_marks(&self) -> Result<()> {
        for v in 0..self.n {
            let leaf = self.degree[v] <= 1;
            match (leaf, self.marks[v]) {
                (true, Mark::O) | (false, Mark::A) => {}
                (false, Mark::B) if self.star_of[v].is_some() => {}
                (_, m) => {
                    return Err(Error::Construction(format!(
                        "vertex {v} (degree {}) is marked {m:?}",
                        self.degree[v]
                    )))
                }
            }
        }
        Ok(())
    }
}

/// One step of a construction script. `vertices` lists, in the piece's local
/// order, the ids those vertices carry in the finished tree; `u` is such an id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ScriptOp {
    Base {
        piece: PieceShape,
        vertices: Vec<usize>,
    },
    Type1 {
        u: usize,
        vine_count: usize,
        vine_vertices: usize,
        vertices: Vec<usize>,
    },
    Type2 {
        u: usize,
        path_vertices: usize,
        /// Local index of the attached path vertex.
        at: usize,
        vertices: Vec<usize>,
    },
    Type3 {
        u: usize,
        vine_count: usize,
        vine_vertices: usize,
        vertices: Vec<usize>,
    },
}

impl ScriptOp {
    fn vertices(&self) -> &[usize] {
        match self {
            ScriptOp::Base { vertices, .. }
            | ScriptOp::Type1 { vertices, .. }
            | ScriptOp::Type2 { vertices, .. }
            | ScriptOp::Type3 { vertices, .. } => vertices,
        }
    }
}

/// Ordered construction of a member of the family.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConstructionScript {
    pub ops: Vec<ScriptOp>,
}

impl ConstructionScript {
    /// Number of attachment operations after the base.
    pub fn operation_count(&self) -> usize {
        self.ops.len().saturating_sub(1)
    }

    /// Rebuilds the labeled tree, with vertex ids as named in the script.
    pub fn replay(&self) -> Result<LabeledTree> {
        let mut ops = self.ops.iter();
        let Some(ScriptOp::Base { piece, vertices }) = ops.next() else {
            return Err(Error::Construction("a script starts with a base".into()));
        };
        let total: usize = self.ops.iter().map(|op| op.vertices().len()).sum();
        // final id -> build position
        let mut position = vec![usize::MAX; total];
        fn record(
            position: &mut [usize],
            ids: &[usize],
            offset: usize,
            expect: usize,
        ) -> Result<()> {
            let total = position.len();
            if ids.len() != expect {
                return Err(Error::Construction(format!(
                    "piece of {expect} vertices lists {} ids",
                    ids.len()
                )));
            }
            for (i, &id) in ids.iter().enumerate() {
                if id >= total || position[id] != usize::MAX {
                    return Err(Error::Construction(format!(
                        "vertex id {id} repeated or out of range"
                    )));
                }
                position[id] = offset + i;
            }
            Ok(())
        }
        record(&mut position, vertices, 0, piece.vertex_count())?;
        let mut t = make_piece(*piece)?;
        if matches!(piece, PieceShape::Star { vine_count, .. } if *vine_count < 3) {
            return Err(Error::Construction(
                "a base star needs at least 3 vines".into(),
            ));
        }
        for op in ops {
            let offset = t.n();
            let local = |id: usize, t: &LabeledTree, position: &[usize]| -> Result<usize> {
                match position.get(id) {
                    Some(&p) if p < t.n() => Ok(p),
                    _ => Err(Error::Construction(format!(
                        "vertex {id} is not placed yet"
                    ))),
                }
            };
            match op {
                ScriptOp::Base { .. } => {
                    return Err(Error::Construction("a script has exactly one base".into()))
                }
                ScriptOp::Type1 {
                    u,
                    vine_count,
                    vine_vertices,
                    vertices,
                } => {
                    let star = make_labeled_generalized_star(*vine_count, *vine_vertices)?;
                    let at = local(*u, &t, &position)?;
                    t.apply_type1(at, &star)?;
                    record(&mut position, vertices, offset, star.n())?;
                }
                ScriptOp::Type2 {
                    u,
                    path_vertices,
                    at,
                    vertices,
                } => {
                    let p = make_labeled_path(*path_vertices)?;
                    let host = local(*u, &t, &position)?;
                    t.apply_type2(host, &p, *at)?;
                    record(&mut position, vertices, offset, p.n())?;
                }
                ScriptOp::Type3 {
                    u,
                    vine_count,
                    vine_vertices,
                    vertices,
                } => {
                    let star = make_labeled_generalized_star(*vine_count, *vine_vertices)?;
                    let at = local(*u, &t, &position)?;
                    t.apply_type3(at, &star)?;
                    record(&mut position, vertices, offset, star.n())?;
                }
            }
        }
        Ok(t.relabel(&position_inverse(&position)))
    }
}

/// `position[id] = p` turned into `perm[p] = id`.
fn position_inverse(position: &[usize]) -> Vec<usize> {
    let mut perm = vec![0; position.len()];
    for (id, &p) in position.iter().enumerate() {
        perm[p] = id;
    }
    perm
}

/// Size limits for [`random_family_tree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyBudget {
    pub max_ops: usize,
    pub max_vertices: usize,
}

/// A random member of the family, built by at most `budget.max_ops`
/// attachments, together with its construction script.
///
/// Vine and path lengths are drawn small so that many attachments fit; the
/// base always fits even when `max_vertices` is tiny.
pub fn random_family_tree<R: Rng + ?Sized>(
    rng: &mut R,
    budget: FamilyBudget,
) -> (LabeledTree, ConstructionScript) {
    let base = if rng.gen_bool(0.5) {
        PieceShape::Star {
            vine_count: rng.gen_range(3..=4),
            vine_vertices: rng.gen_range(1..=3),
        }
    } else {
        PieceShape::Path {
            n: rng.gen_range(3..=6),
        }
    };
    let mut t = make_piece(base).expect("valid base");
    let mut script = ConstructionScript {
        ops: vec![ScriptOp::Base {
            piece: base,
            vertices: (0..t.n()).collect(),
        }],
    };
    let mut a_vertices: Vec<usize> = (0..t.n()).filter(|&v| t.marks[v] == Mark::A).collect();
    let mut b_vertices: Vec<usize> = (0..t.n()).filter(|&v| t.marks[v] == Mark::B).collect();
    let mut failures = 0;
    while script.operation_count() < budget.max_ops && failures < 32 {
        let room = budget.max_vertices.saturating_sub(t.n());
        let kind = rng.gen_range(0..3);
        let offset = t.n();
        let op = match kind {
            0 | 1 if !a_vertices.is_empty() => {
                let u = a_vertices[rng.gen_range(0..a_vertices.len())];
                if kind == 0 {
                    let vc = rng.gen_range(3..=4);
                    let vv = rng.gen_range(1..=3);
                    if 1 + vc * vv > room {
                        None
                    } else {
                        let star = make_labeled_generalized_star(vc, vv).expect("valid star");
                        t.apply_type1(u, &star).expect("u is marked A");
                        Some(ScriptOp::Type1 {
                            u,
                            vine_count: vc,
                            vine_vertices: vv,
                            vertices: (offset..t.n()).collect(),
                        })
                    }
                } else {
                    let n = rng.gen_range(3..=6);
                    if n > room {
                        None
                    } else {
                        let p = make_labeled_path(n).expect("valid path");
                        let at = rng.gen_range(1..n - 1);
                        t.apply_type2(u, &p, at).expect("u is marked A");
                        Some(ScriptOp::Type2 {
                            u,
                            path_vertices: n,
                            at,
                            vertices: (offset..t.n()).collect(),
                        })
                    }
                }
            }
            2 if !b_vertices.is_empty() => {
                let u = b_vertices[rng.gen_range(0..b_vertices.len())];
                let vv = t.star_vine_vertices(u).expect("B vertices lie on a star");
                let vc = rng.gen_range(2..=4);
                if 1 + vc * vv > room {
                    None
                } else {
                    let star = make_labeled_generalized_star(vc, vv).expect("valid star");
                    t.apply_type3(u, &star).expect("u is marked B");
                    Some(ScriptOp::Type3 {
                        u,
                        vine_count: vc,
                        vine_vertices: vv,
                        vertices: (offset..t.n()).collect(),
                    })
                }
            }
            _ => None,
        };
        match op {
            Some(op) => {
                a_vertices.extend((offset..t.n()).filter(|&v| t.marks[v] == Mark::A));
                b_vertices.extend((offset..t.n()).filter(|&v| t.marks[v] == Mark::B));
                script.ops.push(op);
                failures = 0;
            }
            None => failures += 1,
        }
    }
    (t, script)
}

/// Shape of the piece cut off at a heavy vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceKind {
    GeneralizedStar,
    /// Two vines; `centered` when the heavy vertex is the middle of the path.
    Path {
        centered: bool,
    },
    /// At least three vines of different lengths.
    UnequalStar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum StepAction {
    /// The tree has several path sequences; `witness` is the vertex whose
    /// marks failed the check (or the heavy vertex for unequal vines).
    Reject {
        witness: usize,
    },
    MarkInternal,
    SetEndLength {
        value: usize,
    },
    Unchanged,
}

/// One piece removal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuisStep {
    /// The deepest heavy vertex.
    pub v: usize,
    /// Its neighbour toward the root leaf.
    pub u: usize,
    /// The vines hanging from `v`, each listed from `v` outwards.
    pub vines: Vec<Vec<usize>>,
    pub kind: PieceKind,
    /// Vine vertex count for stars, path vertex count for paths.
    pub k: usize,
    #[serde(flatten)]
    pub action: StepAction,
}

/// Check performed on the path left when no heavy vertex remains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalCheck {
    pub k: usize,
    pub ends: Vec<usize>,
    pub witness: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuisVerdict {
    pub unique: bool,
    /// The leaf all depths are measured from.
    pub root: usize,
    pub trace: Vec<DuisStep>,
    pub final_check: Option<FinalCheck>,
    /// Basic operations performed, for complexity measurements.
    pub ops: u64,
}

/// Decides whether the complement of tree `t` has a unique island sequence,
/// i.e. whether `t` has a unique path sequence.
pub fn duis(t: &Graph) -> Result<DuisVerdict> {
    if !t.is_tree() {
        return Err(Error::Shape("DUIS needs a tree".into()));
    }
    let root = (0..t.n()).find(|&v| t.degree(v) <= 1).unwrap_or(0);
    Ok(duis_from(t, root))
}

/// [`duis`] with depths measured from the leaf `root`.
pub fn duis_rooted(t: &Graph, root: usize) -> Result<DuisVerdict> {
    if !t.is_tree() {
        return Err(Error::Shape("DUIS needs a tree".into()));
    }
    if root >= t.n() || t.degree(root) > 1 {
        return Err(Error::Contract(format!("root {root} is not a leaf")));
    }
    Ok(duis_from(t, root))
}

fn duis_from(t: &Graph, root: usize) -> DuisVerdict {
    let n = t.n();
    let mut ops: u64 = 0;

    // BFS from the root; buckets keep increasing index within a depth.
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut queue = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    seen[root] = true;
    queue.push(root);
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for &w in t.neighbors(x) {
            ops += 1;
            if !seen[w] {
                seen[w] = true;
                parent[w] = x;
                depth[w] = depth[x] + 1;
                queue.push(w);
            }
        }
    }
    let max_depth = depth.iter().copied().max().unwrap_or(0);
    let mut bucket_start = vec![0usize; max_depth + 2];
    for &d in &depth {
        bucket_start[d + 1] += 1;
    }
    for d in 0..=max_depth {
        bucket_start[d + 1] += bucket_start[d];
    }
    let mut fill = bucket_start.clone();
    let mut by_depth = vec![0usize; n];
    for v in 0..n {
        by_depth[fill[depth[v]]] = v;
        fill[depth[v]] += 1;
        ops += 1;
    }

    let mut present = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut internal = vec![false; n]; // ℓ(v) = A
    let mut f = vec![0usize; n];
    let mut trace = Vec::new();
    let bad =
        |x: usize, k: usize, internal: &[bool], f: &[usize]| internal[x] || (f[x] > 0 && f[x] != k);

    for d in (1..=max_depth).rev() {
        for &v in &by_depth[bucket_start[d]..bucket_start[d + 1]] {
            ops += 1;
            if !present[v] || deg[v] < 3 {
                continue;
            }
            let u = parent[v];
            let mut vines: Vec<Vec<usize>> = Vec::with_capacity(deg[v] - 1);
            for &c in t.neighbors(v) {
                ops += 1;
                if c == u || !present[c] {
                    continue;
                }
                let mut vine = vec![c];
                let mut x = c;
                loop {
                    let mut next = None;
                    for &w in t.neighbors(x) {
                        ops += 1;
                        if w != parent[x] && present[w] {
                            next = Some(w);
                        }
                    }
                    match next {
                        Some(w) => {
                            vine.push(w);
                            x = w;
                        }
                        None => break,
                    }
                }
                vines.push(vine);
            }
            for vine in &vines {
                for &x in vine {
                    present[x] = false;
                    ops += 1;
                }
            }
            present[v] = false;
            deg[u] -= 1;

            let (kind, k, action) = if vines.len() >= 3 {
                let k = vines[0].len();
                if vines.iter().any(|s| s.len() != k) {
                    (PieceKind::UnequalStar, k, StepAction::Reject { witness: v })
                } else {
                    let witness = vines
                        .iter()
                        .map(|s| s[0])
                        .find(|&x| bad(x, k, &internal, &f))
                        .or_else(|| {
                            vines
                                .iter()
                                .map(|s| s[s.len() - 1])
                                .find(|&x| internal[x] || f[x] > 0)
                        });
                    ops += 2 * vines.len() as u64;
                    let action = match witness {
                        Some(w) => StepAction::Reject { witness: w },
                        None if f[u] > 0 && f[u] != k => {
                            internal[u] = true;
                            f[u] = 0;
                            StepAction::MarkInternal
                        }
                        None if f[u] == 0 && !internal[u] => {
                            f[u] = k;
                            StepAction::SetEndLength { value: k }
                        }
                        None => StepAction::Unchanged,
                    };
                    (PieceKind::GeneralizedStar, k, action)
                }
            } else {
                let (a, b) = (&vines[0], &vines[1]);
                let k = 1 + a.len() + b.len();
                let ends = [a[a.len() - 1], b[b.len() - 1]];
                let centered = a.len() == b.len();
                let witness = ends.iter().copied().find(|&x| bad(x, k, &internal, &f));
                let action = match witness {
                    Some(w) => StepAction::Reject { witness: w },
                    None if !centered => {
                        internal[u] = true;
                        f[u] = 0;
                        StepAction::MarkInternal
                    }
                    None => {
                        let half = (k - 1) / 2;
                        let conflict = [u, a[0], b[0]].iter().any(|&x| bad(x, half, &internal, &f))
                            || ends.iter().any(|&x| f[x] == k);
                        if conflict {
                            internal[u] = true;
                            f[u] = 0;
                            StepAction::MarkInternal
                        } else {
                            f[u] = half;
                            StepAction::SetEndLength { value: half }
                        }
                    }
                };
                ops += 6;
                (PieceKind::Path { centered }, k, action)
            };
            let rejected = matches!(action, StepAction::Reject { .. });
            trace.push(DuisStep {
                v,
                u,
                vines,
                kind,
                k,
                action,
            });
            if rejected {
                return DuisVerdict {
                    unique: false,
                    root,
                    trace,
                    final_check: None,
                    ops,
                };
            }
        }
    }

    // No heavy vertex left: the rest is a path.
    let mut k = 0;
    let mut ends = Vec::new();
    for v in 0..n {
        ops += 1;
        if present[v] {
            k += 1;
            if deg[v] <= 1 {
                ends.push(v);
            }
        }
    }
    let witness = ends.iter().copied().find(|&x| bad(x, k, &internal, &f));
    DuisVerdict {
        unique: witness.is_none(),
        root,
        trace,
        final_check: Some(FinalCheck { k, ends, witness }),
        ops,
    }
}

/// A construction script showing that `t` belongs to the family, or `None`
/// when `t` has several path sequences (or fewer than three vertices).
///
/// The script follows the peeling order of [`duis`]: pieces are cut until at
/// most one heavy vertex remains, the remainder is the base, and the pieces are
/// re-attached in reverse with the operation the host vertex's mark allows.
/// A piece can end up hosted by a leaf of the remainder, which no operation
/// allows, so each leaf is tried as the root in turn. The returned script has
/// been replayed and compared with `t`.
pub fn certify_family_membership(t: &Graph) -> Result<Option<ConstructionScript>> {
    let verdict = duis(t)?;
    if !verdict.unique || t.n() < 3 {
        return Ok(None);
    }
    for root in (0..t.n()).filter(|&v| t.degree(v) == 1) {
        let trace = if root == verdict.root {
            verdict.trace.clone()
        } else {
            duis_from(t, root).trace
        };
        if let Some(script) = decompose(t, &trace) {
            let rebuilt = script.replay()?;
            if rebuilt.tree() != *t {
                return Err(Error::Construction(
                    "certificate does not rebuild the input".into(),
                ));
            }
            return Ok(Some(script));
        }
    }
    Ok(None)
}

fn decompose(t: &Graph, trace: &[DuisStep]) -> Option<ConstructionScript> {
    let n = t.n();
    let mut deg: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut heavy = deg.iter().filter(|&&d| d >= 3).count();
    let mut removed = vec![false; n];
    let mut peeled = 0;
    for step in trace {
        if heavy <= 1 {
            break;
        }
        heavy -= 1;
        if deg[step.u] == 3 {
            heavy -= 1;
        }
        deg[step.u] -= 1;
        removed[step.v] = true;
        for &x in step.vines.iter().flatten() {
            removed[x] = true;
        }
        peeled += 1;
    }

    let mut marks = vec![Mark::O; n];
    let mut star_vines: HashMap<usize, usize> = HashMap::new();
    let rest: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
    let base = if heavy == 0 {
        let start = *rest
            .iter()
            .find(|&&v| deg[v] <= 1)
            .expect("a path has an end");
        let order = walk_path(t, start, &removed);
        if order.len() < 3 {
            return None;
        }
        for &x in &order[1..order.len() - 1] {
            marks[x] = Mark::A;
        }
        ScriptOp::Base {
            piece: PieceShape::Path { n: order.len() },
            vertices: order,
        }
    } else {
        let center = *rest
            .iter()
            .find(|&&v| deg[v] >= 3)
            .expect("one heavy vertex");
        let vines: Vec<Vec<usize>> = t
            .neighbors(center)
            .iter()
            .filter(|&&c| !removed[c])
            .map(|&c| walk_from(t, center, c, &removed))
            .collect();
        let vv = vines[0].len();
        if vines.iter().any(|s| s.len() != vv) {
            return None;
        }
        mark_star(center, &vines, &mut marks, &mut star_vines);
        ScriptOp::Base {
            piece: PieceShape::Star {
                vine_count: vines.len(),
                vine_vertices: vv,
            },
            vertices: std::iter::once(center)
                .chain(vines.into_iter().flatten())
                .collect(),
        }
    };

    let mut ops = vec![base];
    for step in trace[..peeled].iter().rev() {
        let (u, v, vines) = (step.u, step.v, &step.vines);
        let vv = vines[0].len();
        let equal = vines.iter().all(|s| s.len() == vv);
        let star_vertices = || {
            std::iter::once(v)
                .chain(vines.iter().flatten().copied())
                .collect()
        };
        let op = match marks[u] {
            Mark::A if vines.len() >= 3 && equal => {
                mark_star(v, vines, &mut marks, &mut star_vines);
                ScriptOp::Type1 {
                    u,
                    vine_count: vines.len(),
                    vine_vertices: vv,
                    vertices: star_vertices(),
                }
            }
            Mark::A if vines.len() == 2 => {
                let mut order: Vec<usize> = vines[0].iter().rev().copied().collect();
                let at = order.len();
                order.push(v);
                order.extend_from_slice(&vines[1]);
                for &x in &order[1..order.len() - 1] {
                    marks[x] = Mark::A;
                }
                ScriptOp::Type2 {
                    u,
                    path_vertices: order.len(),
                    at,
                    vertices: order,
                }
            }
            Mark::B if equal && star_vines.get(&u) == Some(&vv) => {
                mark_star(v, vines, &mut marks, &mut star_vines);
                ScriptOp::Type3 {
                    u,
                    vine_count: vines.len(),
                    vine_vertices: vv,
                    vertices: star_vertices(),
                }
            }
            _ => return None,
        };
        ops.push(op);
    }
    Some(ConstructionScript { ops })
}

fn mark_star(
    center: usize,
    vines: &[Vec<usize>],
    marks: &mut [Mark],
    star_vines: &mut HashMap<usize, usize>,
) {
    marks[center] = Mark::A;
    for vine in vines {
        let last = vine.len() - 1;
        for (i, &x) in vine.iter().enumerate() {
            marks[x] = if i == last {
                Mark::O
            } else if i == 0 {
                star_vines.insert(x, vine.len());
                Mark::B
            } else {
                Mark::A
            };
        }
    }
}

/// Vertices of the light path starting at `first` and leading away from `from`.
fn walk_from(t: &Graph, from: usize, first: usize, removed: &[bool]) -> Vec<usize> {
    let mut out = vec![first];
    let (mut prev, mut cur) = (from, first);
    while let Some(&next) = t.neighbors(cur).iter().find(|&&w| w != prev && !removed[w]) {
        out.push(next);
        prev = cur;
        cur = next;
    }
    out
}

fn walk_path(t: &Graph, start: usize, removed: &[bool]) -> Vec<usize> {
    let mut out = vec![start];
    if let Some(&next) = t.neighbors(start).iter().find(|&&w| !removed[w]) {
        out.extend(walk_from(t, start, next, removed));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unique(g: &Graph) -> bool {
        duis(g).unwrap().unique
    }

    #[test]
    fn labeled_star_marks() {
        let s = make_labeled_generalized_star(3, 4).unwrap();
        assert_eq!(s.n(), 13);
        assert_eq!(s.tree(), Graph::spider(&[4, 4, 4]));
        let b: Vec<usize> = (0..13).filter(|&v| s.mark(v) == Mark::B).collect();
        assert_eq!(b, vec![1, 5, 9]);
        assert_eq!(s.mark(0), Mark::A);
        assert_eq!(s.mark(4), Mark::O);
        assert_eq!(s.star_vine_vertices(5), Some(4));
        s.check_marks().unwrap();

        let p = make_labeled_generalized_star(2, 4).unwrap();
        assert_eq!(p.n(), 9);
        assert!(p.tree().is_path());
        assert_eq!(p.marks().iter().filter(|&&m| m == Mark::B).count(), 2);

        let k13 = make_labeled_generalized_star(3, 1).unwrap();
        assert_eq!(k13.marks(), &[Mark::A, Mark::O, Mark::O, Mark::O]);
        assert!(make_labeled_generalized_star(1, 3).is_err());
    }

    #[test]
    fn labeled_paths() {
        let p = make_labeled_path(6).unwrap();
        assert_eq!(p.tree(), Graph::path(6));
        assert_eq!(p.marks().iter().filter(|&&m| m == Mark::A).count(), 4);
        assert_eq!(make_labeled_path(3).unwrap().mark(1), Mark::A);
        assert!(matches!(make_labeled_path(2), Err(Error::Construction(_))));
    }

    #[test]
    fn attachment_preconditions() {
        let mut t = make_labeled_generalized_star(3, 2).unwrap();
        let star3 = make_labeled_generalized_star(3, 2).unwrap();
        // Type-1 at the center (A)
        let mut t1 = t.clone();
        t1.apply_type1(0, &star3).unwrap();
        assert_eq!(t1.n(), 14);
        assert!(unique(&t1.tree()));
        // Type-3 at a B vertex with matching vines
        let mut t3 = t.clone();
        t3.apply_type3(1, &make_labeled_generalized_star(2, 2).unwrap())
            .unwrap();
        assert!(unique(&t3.tree()));
        assert!(t3.check_marks().is_ok());
        // mismatched vines, wrong marks
        assert!(t
            .apply_type3(1, &make_labeled_generalized_star(3, 3).unwrap())
            .is_err());
        assert!(t.apply_type1(1, &star3).is_err());
        assert!(t.apply_type1(2, &star3).is_err());
        assert!(t.apply_type2(0, &make_labeled_path(4).unwrap(), 0).is_err());
        assert!(t
            .apply_type1(0, &make_labeled_generalized_star(2, 2).unwrap())
            .is_err());
        assert_eq!(t, make_labeled_generalized_star(3, 2).unwrap());
    }

    #[test]
    fn duis_small_cases() {
        assert!(!unique(&Graph::spider(&[1, 1, 2])));
        assert!(unique(&Graph::spider(&[1, 1, 1])));
        assert!(unique(&Graph::spider(&[2, 2, 2])));
        assert!(!unique(&Graph::spider(&[2, 2, 1])));
        assert!(!unique(&Graph::spider(&[1, 2, 2])));
        assert!(unique(&Graph::spider(&[3, 3, 3, 3])));
        for n in 1..8 {
            assert!(unique(&Graph::path(n)));
        }
        assert!(matches!(duis(&Graph::cycle(4)), Err(Error::Shape(_))));
    }

    #[test]
    fn duis_trace_of_a_spider() {
        let v = duis(&Graph::spider(&[1, 1, 2])).unwrap();
        assert_eq!(v.root, 1);
        assert_eq!(v.trace.len(), 1);
        let step = &v.trace[0];
        assert_eq!((step.v, step.u, step.k), (0, 1, 4));
        assert_eq!(step.kind, PieceKind::Path { centered: false });
        assert_eq!(step.action, StepAction::MarkInternal);
        assert_eq!(v.final_check.as_ref().unwrap().witness, Some(1));
    }

    #[test]
    fn duis_agrees_with_oracle_on_small_trees() {
        for n in 1..=7 {
            for t in crate::oracle::enumerate_trees(n) {
                let expected = sequence_set(&t, 16).unwrap().is_unique();
                assert_eq!(unique(&t), expected, "{}", t.to_edge_list());
            }
        }
    }

    #[test]
    fn family_members_are_unique_and_certified() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let (t, script) = random_family_tree(
                &mut rng,
                FamilyBudget {
                    max_ops: 3,
                    max_vertices: 14,
                },
            );
            let g = t.tree();
            t.check_marks().unwrap();
            assert_eq!(script.replay().unwrap().tree(), g);
            assert!(unique(&g), "{}", g.to_edge_list());
            let cert = certify_family_membership(&g).unwrap().expect("certified");
            assert_eq!(cert.replay().unwrap().tree(), g);
        }
    }

    #[test]
    fn zero_budget_gives_a_base() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (t, script) = random_family_tree(
            &mut rng,
            FamilyBudget {
                max_ops: 0,
                max_vertices: 100,
            },
        );
        assert_eq!(script.ops.len(), 1);
        assert!(t.piece_shape().is_some());
    }

    #[test]
    fn certificates() {
        let star = certify_family_membership(&Graph::spider(&[2, 2, 2]))
            .unwrap()
            .unwrap();
        assert_eq!(star.operation_count(), 0);
        assert!(certify_family_membership(&Graph::spider(&[1, 1, 2]))
            .unwrap()
            .is_none());

        let mut t = make_labeled_generalized_star(3, 2).unwrap();
        t.apply_type3(1, &make_labeled_generalized_star(3, 2).unwrap())
            .unwrap();
        let script = certify_family_membership(&t.tree()).unwrap().unwrap();
        assert_eq!(script.operation_count(), 1);
        assert!(matches!(script.ops[1], ScriptOp::Type3 { .. }));

        let json = serde_json::to_string(&script).unwrap();
        assert!(json.contains("\"op\":\"base\""));
        let back: ConstructionScript = serde_json::from_str(&json).unwrap();
        assert_eq!(back, script);
    }

    #[test]
    fn replay_rejects_bad_scripts() {
        let bad = ConstructionScript {
            ops: vec![ScriptOp::Base {
                piece: PieceShape::Path { n: 3 },
                vertices: vec![0, 0, 1],
            }],
        };
        assert!(bad.replay().is_err());
        let two_vine_base = ConstructionScript {
            ops: vec![ScriptOp::Base {
                piece: PieceShape::Star {
                    vine_count: 2,
                    vine_vertices: 1,
                },
                vertices: vec![0, 1, 2],
            }],
        };
        assert!(two_vine_base.replay().is_err());
    }
}
