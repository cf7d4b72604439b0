//! Exact distances by breadth-first search, the diameter, and the
//! diameter-based orthogonal-pair distinguisher.

mod classes;
mod report;
mod verify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gadget::{GadgetError, GadgetParams};
use crate::graph::{Graph, VertexId};

pub use classes::{vertex_classes, VertexClasses};
pub use report::{Check, Expect, VerificationReport};
pub use verify::{
    path_form_checks, verify_all, verify_cut, verify_distance_lemmas, verify_distance_lemmas_on,
    verify_theorem2, verify_theorem2_on, PathForm, PATH_FORMS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("unknown vertex {vertex} (graph has {count})")]
    UnknownVertex { vertex: VertexId, count: usize },
    #[error(
        "graph is disconnected: no path from {source_vertex} to {target}, diameter is infinite"
    )]
    Disconnected {
        source_vertex: VertexId,
        target: VertexId,
    },
    #[error("empty graph has no diameter")]
    EmptyGraph,
    #[error("label error: {0}")]
    Label(String),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
}

/// Distances from one source; `None` marks an unreachable vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceRow {
    pub source: VertexId,
    pub dist: Vec<Option<u32>>,
}

const UNREACHED: u32 = u32::MAX;

fn bfs_into(g: &Graph, source: VertexId, dist: &mut [u32], queue: &mut Vec<VertexId>) {
    dist.fill(UNREACHED);
    queue.clear();
    dist[source] = 0;
    queue.push(source);
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        let next = dist[u] + 1;
        for &v in g.neighbors(u) {
            if dist[v] == UNREACHED {
                dist[v] = next;
                queue.push(v);
            }
        }
    }
}

pub fn bfs(g: &Graph, source: VertexId) -> Result<DistanceRow, MetricsError> {
    if source >= g.vertex_count() {
        return Err(MetricsError::UnknownVertex {
            vertex: source,
            count: g.vertex_count(),
        });
    }
    let mut dist = vec![0; g.vertex_count()];
    let mut queue = Vec::with_capacity(g.vertex_count());
    bfs_into(g, source, &mut dist, &mut queue);
    Ok(DistanceRow {
        source,
        dist: dist
            .into_iter()
            .map(|d| (d != UNREACHED).then_some(d))
            .collect(),
    })
}

/// All-pairs distances from one BFS per source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    count: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    pub fn new(g: &Graph) -> Self {
        let count = g.vertex_count();
        let mut data = vec![0; count * count];
        let mut queue = Vec::with_capacity(count);
        for (s, row) in data.chunks_mut(count.max(1)).enumerate().take(count) {
            bfs_into(g, s, row, &mut queue);
        }
        Self { count, data }
    }

    pub fn vertex_count(&self) -> usize {
        self.count
    }

    pub fn get(&self, s: VertexId, t: VertexId) -> Option<u32> {
        let d = self.data[s * self.count + t];
        (d != UNREACHED).then_some(d)
    }

    /// Largest distance, ties broken by smallest `(source, target)`.
    pub fn diameter(&self) -> Result<Diameter, MetricsError> {
        if self.count == 0 {
            return Err(MetricsError::EmptyGraph);
        }
        let mut best = Diameter {
            value: 0,
            witness: (0, 0),
        };
        for s in 0..self.count {
            for t in 0..self.count {
                match self.get(s, t) {
                    None => {
                        return Err(MetricsError::Disconnected {
                            source_vertex: s,
                            target: t,
                        })
                    }
                    Some(d) if d > best.value => {
                        best = Diameter {
                            value: d,
                            witness: (s, t),
                        }
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(best)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diameter {
    pub value: u32,
    pub witness: (VertexId, VertexId),
}

pub fn diameter(g: &Graph) -> Result<Diameter, MetricsError> {
    DistanceMatrix::new(g).diameter()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    HasPair,
    NoPair,
    Inconsistent,
}

/// Reads the instance answer off a gadget diameter.
pub fn classify(diameter: u64, params: GadgetParams) -> Verdict {
    if diameter == params.pair_diameter() as u64 {
        Verdict::HasPair
    } else if diameter == params.no_pair_diameter() as u64 {
        Verdict::NoPair
    } else {
        Verdict::Inconsistent
    }
}
