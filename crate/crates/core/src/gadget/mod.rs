//! The path gadget `G(L, R, ell, p, q)` built from an orthogonal vectors
//! instance.
//!
//! Exterior vertices `u_i, v_i` (one pair per vector), `w_k` (one per
//! coordinate), `x` and `y` exist on both sides. They are joined by paths
//! whose lengths are fixed by `(ell, p, q)`; a path of length zero identifies
//! its two endpoints. The diameter is `6 ell - 3p + q` if the instance has an
//! orthogonal pair and `4 ell - 2p + q` otherwise.

mod cut;
mod export;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexId};
use crate::ov::OvInstance;

pub use cut::{build_side, cut_partition, glue_sides, CutPartition, SideGraph};
pub use export::GadgetJson;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("q ≥ 1 required: with q = 0 the two sides share identified vertices")]
    CutNeedsBridge,
    #[error("label error: {0}")]
    Label(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    pub fn tag(self) -> char {
        match self {
            Side::Left => 'L',
            Side::Right => 'R',
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Construction parameters: `ell >= 1`, `p` in `{0, 1}`, `q >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GadgetParams {
    ell: usize,
    p: usize,
    q: usize,
}

impl GadgetParams {
    pub fn new(ell: usize, p: usize, q: usize) -> Result<Self, GadgetError> {
        if ell < 1 {
            return Err(GadgetError::InvalidParams(format!(
                "ell must be >= 1, got {ell}"
            )));
        }
        if p > 1 {
            return Err(GadgetError::InvalidParams(format!(
                "p must be 0 or 1, got {p}"
            )));
        }
        Ok(Self { ell, p, q })
    }

    /// Parameters realising the target gap `2 ell + q` vs `3 ell + q`.
    pub fn for_target_ell(ell: usize, q: usize) -> Result<Self, GadgetError> {
        let (ell_prime, p) = map_ell(ell)?;
        Self::new(ell_prime, p, q)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Diameter when an orthogonal pair exists: `6 ell - 3p + q`.
    pub fn pair_diameter(&self) -> usize {
        6 * self.ell - 3 * self.p + self.q
    }

    /// Diameter when no orthogonal pair exists: `4 ell - 2p + q`.
    pub fn no_pair_diameter(&self) -> usize {
        4 * self.ell - 2 * self.p + self.q
    }

    pub fn path_length(&self, kind: PathKind) -> usize {
        match kind {
            PathKind::UToV { .. } | PathKind::XToY { .. } => self.ell - self.p,
            PathKind::VToX { .. } | PathKind::VToW { .. } | PathKind::YToW { .. } => self.ell,
            PathKind::WBridge { .. } => self.q,
            PathKind::YBridge => self.p + self.q,
        }
    }
}

/// Maps a target `ell` to `(ell', p)` with `4 ell' - 2p = 2 ell` and
/// `6 ell' - 3p = 3 ell`.
pub fn map_ell(ell: usize) -> Result<(usize, usize), GadgetError> {
    match ell {
        0 => Err(GadgetError::InvalidParams("ell must be >= 1".into())),
        e if e % 2 == 0 => Ok((e / 2, 0)),
        e => Ok((e.div_ceil(2), 1)),
    }
}

/// One of the construction's paths, named by its endpoints. Indices are
/// 0-based: `i` ranges over vectors, `k` over coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PathKind {
    UToV { side: Side, i: usize },
    VToX { side: Side, i: usize },
    VToW { side: Side, i: usize, k: usize },
    YToW { side: Side, k: usize },
    WBridge { k: usize },
    XToY { side: Side },
    YBridge,
}

impl PathKind {
    /// `(from, to)`; interior positions count from `from`.
    pub fn endpoints(self) -> (Role, Role) {
        match self {
            PathKind::UToV { side, i } => (Role::U(side, i), Role::V(side, i)),
            PathKind::VToX { side, i } => (Role::V(side, i), Role::X(side)),
            PathKind::VToW { side, i, k } => (Role::V(side, i), Role::W(side, k)),
            PathKind::YToW { side, k } => (Role::Y(side), Role::W(side, k)),
            PathKind::WBridge { k } => (Role::W(Side::Left, k), Role::W(Side::Right, k)),
            PathKind::XToY { side } => (Role::X(side), Role::Y(side)),
            PathKind::YBridge => (Role::Y(Side::Left), Role::Y(Side::Right)),
        }
    }

    /// The side the path belongs to; `None` for the two bridge families.
    pub fn side(self) -> Option<Side> {
        match self {
            PathKind::UToV { side, .. }
            | PathKind::VToX { side, .. }
            | PathKind::VToW { side, .. }
            | PathKind::YToW { side, .. }
            | PathKind::XToY { side } => Some(side),
            PathKind::WBridge { .. } | PathKind::YBridge => None,
        }
    }

    pub fn is_bridge(self) -> bool {
        self.side().is_none()
    }
}

/// Label of a vertex. After identifications a vertex may carry several.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    U(Side, usize),
    V(Side, usize),
    W(Side, usize),
    X(Side),
    Y(Side),
    Interior { path: PathKind, position: usize },
}

impl Role {
    pub fn is_exterior(&self) -> bool {
        !matches!(self, Role::Interior { .. })
    }
}

/// A path of the construction as realised in the graph: `vertices` runs from
/// the `from` endpoint to the `to` endpoint and has `length + 1` entries
/// (a single entry for a length-zero identification).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetPath {
    pub kind: PathKind,
    pub length: usize,
    pub vertices: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetGraph {
    graph: Graph,
    labels: Vec<Vec<Role>>,
    paths: Vec<GadgetPath>,
    /// Position in `paths` by [`path_slot`], `usize::MAX` if absent.
    path_index: Vec<usize>,
    /// Vertex of each exterior role, in [`exterior_roles`] order.
    exterior: Vec<VertexId>,
    params: GadgetParams,
    n: usize,
    d: usize,
}

impl GadgetGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn params(&self) -> GadgetParams {
        self.params
    }

    /// `(n, d)` of the source instance.
    pub fn source_dims(&self) -> (usize, usize) {
        (self.n, self.d)
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn labels(&self, v: VertexId) -> &[Role] {
        &self.labels[v]
    }

    pub fn all_labels(&self) -> &[Vec<Role>] {
        &self.labels
    }

    /// Paths in construction order.
    pub fn paths(&self) -> &[GadgetPath] {
        &self.paths
    }

    pub fn path(&self, kind: PathKind) -> Option<&GadgetPath> {
        self.path_id(kind).map(|idx| &self.paths[idx])
    }

    /// 0-based position of `kind` in [`Self::paths`].
    pub fn path_id(&self, kind: PathKind) -> Option<usize> {
        path_slot(kind, self.n, self.d)
            .map(|slot| self.path_index[slot])
            .filter(|&idx| idx != usize::MAX)
    }

    /// Vertex carrying an exterior role.
    pub fn vertex(&self, role: Role) -> Option<VertexId> {
        exterior_slot(role, self.n, self.d).map(|slot| self.exterior[slot])
    }

    fn exterior_vertex(&self, role: Role) -> VertexId {
        self.vertex(role)
            .unwrap_or_else(|| panic!("{role:?} out of range for n = {}, d = {}", self.n, self.d))
    }

    pub fn u(&self, side: Side, i: usize) -> VertexId {
        self.exterior_vertex(Role::U(side, i))
    }

    pub fn v(&self, side: Side, i: usize) -> VertexId {
        self.exterior_vertex(Role::V(side, i))
    }

    pub fn w(&self, side: Side, k: usize) -> VertexId {
        self.exterior_vertex(Role::W(side, k))
    }

    pub fn x(&self, side: Side) -> VertexId {
        self.exterior_vertex(Role::X(side))
    }

    pub fn y(&self, side: Side) -> VertexId {
        self.exterior_vertex(Role::Y(side))
    }

    /// Recovers the source instance from the `v -- w` paths.
    pub fn instance(&self) -> OvInstance {
        let mut left = vec![crate::bits::BitVector::zeros(self.d); self.n];
        let mut right = left.clone();
        for path in &self.paths {
            if let PathKind::VToW { side, i, k } = path.kind {
                match side {
                    Side::Left => left[i].set(k, true),
                    Side::Right => right[i].set(k, true),
                }
            }
        }
        OvInstance::new(left, right).expect("gadget dims are valid")
    }

    /// Copy with one edge deleted. The path metadata is left untouched, so the
    /// result no longer satisfies the construction; meant for negative controls.
    pub fn with_edge_removed(&self, u: VertexId, v: VertexId) -> Self {
        Self {
            graph: self.graph.without_edge(u, v),
            ..self.clone()
        }
    }

    /// Assembles a gadget from a graph and its metadata after checking that
    /// every path is realised edge by edge and every exterior role appears
    /// exactly once.
    pub(crate) fn from_parts(
        graph: Graph,
        labels: Vec<Vec<Role>>,
        paths: Vec<GadgetPath>,
        params: GadgetParams,
        n: usize,
        d: usize,
    ) -> Result<Self, GadgetError> {
        if labels.len() != graph.vertex_count() {
            return Err(GadgetError::Label(format!(
                "{} label sets for {} vertices",
                labels.len(),
                graph.vertex_count()
            )));
        }
        let expected_exterior = 4 * n + 2 * d + 4;
        let mut exterior = vec![usize::MAX; expected_exterior];
        let mut present = 0;
        for (v, set) in labels.iter().enumerate() {
            if set.is_empty() {
                return Err(GadgetError::Label(format!("vertex {} has no label", v + 1)));
            }
            for &role in set.iter().filter(|r| r.is_exterior()) {
                let slot = exterior_slot(role, n, d).ok_or_else(|| {
                    GadgetError::Label(format!("role {role:?} out of range for n = {n}, d = {d}"))
                })?;
                if exterior[slot] != usize::MAX {
                    return Err(GadgetError::Label(format!("role {role:?} appears twice")));
                }
                exterior[slot] = v;
                present += 1;
            }
        }
        if present != expected_exterior {
            return Err(GadgetError::Label(format!(
                "{present} exterior roles present, expected {expected_exterior}"
            )));
        }
        let mut path_index = vec![usize::MAX; 4 * n + 2 * n * d + 3 * d + 3];
        for (idx, path) in paths.iter().enumerate() {
            let (from, to) = path.kind.endpoints();
            let slot = path_slot(path.kind, n, d)
                .ok_or_else(|| GadgetError::Label(format!("path {:?} out of range", path.kind)))?;
            let end = |role: Role| exterior_slot(role, n, d).map(|s| exterior[s]);
            if path.vertices.len() != path.length + 1
                || path.vertices.first().copied() != end(from)
                || path.vertices.last().copied() != end(to)
                || path.length != params.path_length(path.kind)
            {
                return Err(GadgetError::Label(format!(
                    "path {:?} is malformed",
                    path.kind
                )));
            }
            if path
                .vertices
                .windows(2)
                .any(|w| !graph.has_edge(w[0], w[1]))
            {
                return Err(GadgetError::Label(format!(
                    "path {:?} is missing an edge",
                    path.kind
                )));
            }
            if path_index[slot] != usize::MAX {
                return Err(GadgetError::Label(format!(
                    "path {:?} declared twice",
                    path.kind
                )));
            }
            path_index[slot] = idx;
        }
        Ok(Self {
            graph,
            labels,
            paths,
            path_index,
            exterior,
            params,
            n,
            d,
        })
    }
}

/// Index of an exterior role in [`exterior_roles`] order; `None` for
/// interior roles and out-of-range indices.
fn exterior_slot(role: Role, n: usize, d: usize) -> Option<usize> {
    let side = |s: Side| s as usize;
    match role {
        Role::U(s, i) if i < n => Some(side(s) * n + i),
        Role::V(s, i) if i < n => Some(2 * n + side(s) * n + i),
        Role::W(s, k) if k < d => Some(4 * n + side(s) * d + k),
        Role::X(s) => Some(4 * n + 2 * d + side(s)),
        Role::Y(s) => Some(4 * n + 2 * d + 2 + side(s)),
        _ => None,
    }
}

/// Dense index of a path kind among the `4n + 2nd + 3d + 3` possible ones.
fn path_slot(kind: PathKind, n: usize, d: usize) -> Option<usize> {
    let side = |s: Side| s as usize;
    match kind {
        PathKind::UToV { side: s, i } if i < n => Some(side(s) * n + i),
        PathKind::VToX { side: s, i } if i < n => Some(2 * n + side(s) * n + i),
        PathKind::VToW { side: s, i, k } if i < n && k < d => {
            Some(4 * n + (side(s) * n + i) * d + k)
        }
        PathKind::YToW { side: s, k } if k < d => Some(4 * n + 2 * n * d + side(s) * d + k),
        PathKind::WBridge { k } if k < d => Some(4 * n + 2 * n * d + 2 * d + k),
        PathKind::XToY { side: s } => Some(4 * n + 2 * n * d + 3 * d + side(s)),
        PathKind::YBridge => Some(4 * n + 2 * n * d + 3 * d + 2),
        _ => None,
    }
}

/// Exterior roles in numbering order.
pub(crate) fn exterior_roles(n: usize, d: usize) -> Vec<Role> {
    let mut roles = Vec::with_capacity(4 * n + 2 * d + 4);
    roles.extend((0..n).map(|i| Role::U(Side::Left, i)));
    roles.extend((0..n).map(|i| Role::U(Side::Right, i)));
    roles.extend((0..n).map(|i| Role::V(Side::Left, i)));
    roles.extend((0..n).map(|i| Role::V(Side::Right, i)));
    roles.extend((0..d).map(|k| Role::W(Side::Left, k)));
    roles.extend((0..d).map(|k| Role::W(Side::Right, k)));
    roles.extend([
        Role::X(Side::Left),
        Role::X(Side::Right),
        Role::Y(Side::Left),
        Role::Y(Side::Right),
    ]);
    roles
}

/// All paths of the construction for `inst`, in canonical order.
pub(crate) fn path_plan(inst: &OvInstance) -> Vec<PathKind> {
    let (n, d) = (inst.n(), inst.dimension());
    let mut plan = Vec::new();
    for i in 0..n {
        plan.extend(Side::BOTH.map(|side| PathKind::UToV { side, i }));
    }
    for i in 0..n {
        plan.extend(Side::BOTH.map(|side| PathKind::VToX { side, i }));
    }
    for (side, vectors) in [(Side::Left, inst.left()), (Side::Right, inst.right())] {
        for (i, v) in vectors.iter().enumerate() {
            plan.extend(
                (0..d)
                    .filter(|&k| v.get(k))
                    .map(|k| PathKind::VToW { side, i, k }),
            );
        }
    }
    for k in 0..d {
        plan.extend(Side::BOTH.map(|side| PathKind::YToW { side, k }));
    }
    plan.extend((0..d).map(|k| PathKind::WBridge { k }));
    plan.extend(Side::BOTH.map(|side| PathKind::XToY { side }));
    plan.push(PathKind::YBridge);
    plan
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
        }
    }

    fn push(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Keeps the smaller id as the representative.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Builds `G(L, R, ell, p, q)`.
///
/// Numbering is deterministic: exterior vertices first (`u^L`, `u^R`, `v^L`,
/// `v^R`, `w^L`, `w^R`, `x^L`, `x^R`, `y^L`, `y^R`), then interior vertices in
/// path-creation order. Identified vertices take the smallest id of their
/// class. With `ell = 1, p = 0, q = 0` both `y -- w_k` paths collapse onto
/// the same edge; the graph keeps one copy.
pub fn build_gadget(inst: &OvInstance, params: GadgetParams) -> GadgetGraph {
    let (n, d) = (inst.n(), inst.dimension());
    let exterior = exterior_roles(n, d);

    let mut uf = UnionFind::new(exterior.len());
    let plan = path_plan(inst);
    let (estimate, _) = exact_size(n, d, inst.ones_left(), inst.ones_right(), params);
    let mut provisional: Vec<Role> = Vec::with_capacity(estimate + 2 * n + d + 2);
    provisional.extend_from_slice(&exterior);
    let mut raw_edges = Vec::with_capacity(estimate + 2 * n + 2 * d);
    let mut raw_paths = Vec::with_capacity(plan.len());

    for kind in plan {
        let length = params.path_length(kind);
        let (from, to) = kind.endpoints();
        let slot = |r: Role| exterior_slot(r, n, d).expect("endpoints are exterior");
        let (a, b) = (slot(from), slot(to));
        let mut seq = vec![a];
        if length == 0 {
            uf.union(a, b);
        } else {
            for position in 1..length {
                let id = uf.push();
                provisional.push(Role::Interior {
                    path: kind,
                    position,
                });
                seq.push(id);
            }
            seq.push(b);
            raw_edges.extend(seq.windows(2).map(|w| (w[0], w[1])));
        }
        raw_paths.push((kind, length, seq));
    }

    // Compact classes in order of their smallest provisional id.
    let mut final_id = vec![usize::MAX; provisional.len()];
    let mut count = 0;
    for id in 0..provisional.len() {
        let root = uf.find(id);
        if final_id[root] == usize::MAX {
            final_id[root] = count;
            count += 1;
        }
        final_id[id] = final_id[root];
    }
    let mut labels = vec![Vec::new(); count];
    for (id, role) in provisional.into_iter().enumerate() {
        labels[final_id[id]].push(role);
    }
    for set in &mut labels {
        set.sort();
    }
    let mut edges: Vec<(VertexId, VertexId)> = raw_edges
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = (final_id[a], final_id[b]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let graph = Graph::from_edges(count, &edges).expect("construction yields a simple graph");

    let paths = raw_paths
        .into_iter()
        .map(|(kind, length, seq)| {
            let mut vertices: Vec<VertexId> = seq.into_iter().map(|id| final_id[id]).collect();
            if length == 0 {
                vertices.truncate(1);
            }
            GadgetPath {
                kind,
                length,
                vertices,
            }
        })
        .collect();
    GadgetGraph::from_parts(graph, labels, paths, params, n, d)
        .expect("construction is self-consistent")
}

/// Exact `(vertices, edges)` of [`build_gadget`] for an instance with `n`
/// vectors of dimension `d` per side and `ones_left` / `ones_right` one-bits.
pub fn exact_size(
    n: usize,
    d: usize,
    ones_left: usize,
    ones_right: usize,
    params: GadgetParams,
) -> (usize, usize) {
    let (ell, p, q) = (params.ell, params.p, params.q);
    let short = ell - p;
    let interior = |len: usize| len.saturating_sub(1);

    let mut vertices = 4 * n + 2 * d + 4;
    if q == 0 {
        vertices -= d;
    }
    if p + q == 0 {
        vertices -= 1;
    }
    if short == 0 {
        vertices -= 2 * n + 2;
    }
    let ones = ones_left + ones_right;
    vertices += (2 * n + 2) * interior(short)
        + (2 * n + ones + 2 * d) * interior(ell)
        + d * interior(q)
        + interior(p + q);

    let mut edges = (2 * n + 2) * short + (2 * n + ones + 2 * d) * ell + d * q + (p + q);
    if ell == 1 && p + q == 0 {
        // y -- w_k on both sides become the same edge.
        edges -= d;
    }
    (vertices, edges)
}
