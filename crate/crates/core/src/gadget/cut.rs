//! The `d + 1` edge cut between the left and right halves of a gadget, and
//! side-local construction of each half.
//!
//! Each bridge path (`w_k^L -- w_k^R` and `y^L -- y^R`) of length `m` is cut
//! at the edge between positions `m / 2` and `m / 2 + 1`, counted from its
//! left endpoint. Everything else belongs to the side of its path.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{GadgetError, GadgetGraph, GadgetParams, PathKind, Role, Side};
use crate::bits::BitVector;
use crate::graph::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutPartition {
    /// Side of each vertex; `Left` is Alice's set A, `Right` is Bob's set B.
    pub side_of: Vec<Side>,
    /// One edge per bridge path, `(left endpoint, right endpoint)`: the `w_k`
    /// bridges in coordinate order, then the `y` bridge.
    pub cut_edges: Vec<(VertexId, VertexId)>,
}

impl CutPartition {
    pub fn cut_size(&self) -> usize {
        self.cut_edges.len()
    }

    pub fn vertices_on(&self, side: Side) -> Vec<VertexId> {
        (0..self.side_of.len())
            .filter(|&v| self.side_of[v] == side)
            .collect()
    }

    pub fn is_cut_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.side_of[u] != self.side_of[v]
    }
}

fn split_point(length: usize) -> usize {
    length / 2
}

fn role_side(role: Role, params: GadgetParams) -> Side {
    match role {
        Role::U(s, _) | Role::V(s, _) | Role::W(s, _) | Role::X(s) | Role::Y(s) => s,
        Role::Interior { path, position } => match path.side() {
            Some(s) => s,
            None if position <= split_point(params.path_length(path)) => Side::Left,
            None => Side::Right,
        },
    }
}

/// Splits a gadget with `q >= 1` into its left and right halves.
pub fn cut_partition(g: &GadgetGraph) -> Result<CutPartition, GadgetError> {
    let params = g.params();
    if params.q() == 0 {
        return Err(GadgetError::CutNeedsBridge);
    }
    let side_of = g
        .all_labels()
        .iter()
        .map(|labels| role_side(labels[0], params))
        .collect();
    let (_, d) = g.source_dims();
    let cut_edges = (0..d)
        .map(|k| PathKind::WBridge { k })
        .chain([PathKind::YBridge])
        .map(|kind| {
            let path = g.path(kind).expect("bridge paths always exist");
            let h = split_point(path.length);
            (path.vertices[h], path.vertices[h + 1])
        })
        .collect();
    Ok(CutPartition { side_of, cut_edges })
}

/// One half of a gadget built only from that side's vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideGraph {
    pub side: Side,
    pub labels: Vec<Vec<Role>>,
    pub edges: Vec<(usize, usize)>,
}

impl SideGraph {
    fn vertex_with(&self, role: Role) -> Option<usize> {
        self.labels.iter().position(|set| set.contains(&role))
    }
}

struct SideBuilder {
    labels: Vec<Vec<Role>>,
    edges: Vec<(usize, usize)>,
    named: HashMap<Role, usize>,
}

impl SideBuilder {
    fn named(&mut self, role: Role) -> usize {
        if let Some(&v) = self.named.get(&role) {
            return v;
        }
        let v = self.fresh(role);
        self.named.insert(role, v);
        v
    }

    fn fresh(&mut self, role: Role) -> usize {
        self.labels.push(vec![role]);
        self.labels.len() - 1
    }

    fn alias(&mut self, existing: Role, extra: Role) {
        let v = self.named(existing);
        self.labels[v].push(extra);
        self.named.insert(extra, v);
    }

    /// Positions `first..=last` of `kind`; endpoints resolve to named roles.
    fn segment(&mut self, kind: PathKind, length: usize, first: usize, last: usize) {
        let (from, to) = kind.endpoints();
        let mut prev = None;
        for pos in first..=last {
            let v = if pos == 0 {
                self.named(from)
            } else if pos == length {
                self.named(to)
            } else {
                self.fresh(Role::Interior {
                    path: kind,
                    position: pos,
                })
            };
            if let Some(u) = prev {
                self.edges.push((u, v));
            }
            prev = Some(v);
        }
    }
}

/// Builds the half of the gadget on `side` from that side's vectors alone,
/// including its share of every bridge path. Requires `q >= 1`.
pub fn build_side(
    vectors: &[BitVector],
    d: usize,
    params: GadgetParams,
    side: Side,
) -> Result<SideGraph, GadgetError> {
    if params.q() == 0 {
        return Err(GadgetError::CutNeedsBridge);
    }
    let mut b = SideBuilder {
        labels: Vec::new(),
        edges: Vec::new(),
        named: HashMap::new(),
    };
    let n = vectors.len();
    let short = params.ell() - params.p();
    for i in 0..n {
        b.named(Role::U(side, i));
        if short == 0 {
            b.alias(Role::U(side, i), Role::V(side, i));
        }
    }
    b.named(Role::X(side));
    if short == 0 {
        b.alias(Role::X(side), Role::Y(side));
    }

    let full = |b: &mut SideBuilder, kind: PathKind| {
        let len = params.path_length(kind);
        b.segment(kind, len, 0, len);
    };
    for i in 0..n {
        full(&mut b, PathKind::UToV { side, i });
        full(&mut b, PathKind::VToX { side, i });
    }
    for (i, v) in vectors.iter().enumerate() {
        for k in (0..d).filter(|&k| v.get(k)) {
            full(&mut b, PathKind::VToW { side, i, k });
        }
    }
    for k in 0..d {
        full(&mut b, PathKind::YToW { side, k });
    }
    full(&mut b, PathKind::XToY { side });

    for kind in (0..d)
        .map(|k| PathKind::WBridge { k })
        .chain([PathKind::YBridge])
    {
        let len = params.path_length(kind);
        let h = split_point(len);
        match side {
            Side::Left => b.segment(kind, len, 0, h),
            Side::Right => b.segment(kind, len, h + 1, len),
        }
    }
    for set in &mut b.labels {
        set.sort();
    }
    Ok(SideGraph {
        side,
        labels: b.labels,
        edges: b.edges,
    })
}

pub type LabeledEdge = (Vec<Role>, Vec<Role>);

fn labeled(a: &[Role], b: &[Role]) -> LabeledEdge {
    let (a, b) = (a.to_vec(), b.to_vec());
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Joins two halves along the bridge cut edges and returns the edge set keyed
/// by vertex label sets.
pub fn glue_sides(
    left: &SideGraph,
    right: &SideGraph,
    d: usize,
    params: GadgetParams,
) -> Result<BTreeSet<LabeledEdge>, GadgetError> {
    let mut out = BTreeSet::new();
    for half in [left, right] {
        for &(u, v) in &half.edges {
            out.insert(labeled(&half.labels[u], &half.labels[v]));
        }
    }
    for kind in (0..d)
        .map(|k| PathKind::WBridge { k })
        .chain([PathKind::YBridge])
    {
        let len = params.path_length(kind);
        let h = split_point(len);
        let (from, to) = kind.endpoints();
        let at = |pos: usize| {
            if pos == 0 {
                from
            } else if pos == len {
                to
            } else {
                Role::Interior {
                    path: kind,
                    position: pos,
                }
            }
        };
        let missing = |r: Role| GadgetError::Label(format!("half graph lacks {r:?}"));
        let a = left.vertex_with(at(h)).ok_or_else(|| missing(at(h)))?;
        let b = right
            .vertex_with(at(h + 1))
            .ok_or_else(|| missing(at(h + 1)))?;
        out.insert(labeled(&left.labels[a], &right.labels[b]));
    }
    Ok(out)
}

impl GadgetGraph {
    /// Edge set keyed by vertex label sets; label sets are unique per vertex,
    /// so equal sets mean label-respecting isomorphic graphs.
    pub fn labeled_edges(&self) -> BTreeSet<LabeledEdge> {
        self.graph()
            .edges()
            .into_iter()
            .map(|(u, v)| labeled(self.labels(u), self.labels(v)))
            .collect()
    }
}
