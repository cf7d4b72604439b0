//! Simple undirected graphs in compressed adjacency form, plus the
//! DIMACS-style edge-list text format (`p edge V E`, then `e u v`, 1-based).

use thiserror::Error;

pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("vertex {vertex} out of range for {count} vertices")]
    OutOfRange { vertex: VertexId, count: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A simple undirected graph. The neighbours of each vertex are sorted
/// ascending; a vertex's port `k` is its `k`-th neighbour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
}

impl Graph {
    /// Builds a graph on `vertex_count` vertices. Rejects self-loops and
    /// repeated edges (in either orientation).
    pub fn from_edges(
        vertex_count: usize,
        edges: &[(VertexId, VertexId)],
    ) -> Result<Self, GraphError> {
        let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::OutOfRange {
                        vertex: w,
                        count: vertex_count,
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut offsets = Vec::with_capacity(vertex_count + 1);
        let mut targets = Vec::with_capacity(2 * edges.len());
        offsets.push(0);
        for (u, mut list) in adj.into_iter().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
            targets.extend(list);
            offsets.push(targets.len());
        }
        Ok(Self { offsets, targets })
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.vertex_count() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Port of `u` that leads to `v`.
    pub fn port_to(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.neighbors(u).binary_search(&v).ok()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        (0..self.vertex_count())
            .flat_map(|u| {
                self.neighbors(u)
                    .iter()
                    .filter(move |&&v| u < v)
                    .map(move |&v| (u, v))
            })
            .collect()
    }

    pub fn without_edge(&self, u: VertexId, v: VertexId) -> Self {
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .filter(|&e| e != (u.min(v), u.max(v)))
            .collect();
        Self::from_edges(self.vertex_count(), &edges).expect("subgraph of a simple graph")
    }

    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("p edge {} {}\n", self.vertex_count(), edges.len());
        for (u, v) in edges {
            out.push_str(&format!("e {} {}\n", u + 1, v + 1));
        }
        out
    }

    /// Parses the edge-list format. Lines starting with `c` are comments.
    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let mut tok = raw.split_whitespace();
            let err = |message: &str| GraphError::Parse {
                line,
                message: message.to_string(),
            };
            match tok.next() {
                None | Some("c") => continue,
                Some("p") => {
                    if header.is_some() {
                        return Err(err("second problem line"));
                    }
                    if tok.next() != Some("edge") {
                        return Err(err("expected `p edge V E`"));
                    }
                    let v = parse_num(tok.next(), line)?;
                    let e = parse_num(tok.next(), line)?;
                    header = Some((v, e));
                }
                Some("e") => {
                    let (count, _) = header.ok_or_else(|| err("edge before problem line"))?;
                    let u = parse_num(tok.next(), line)?;
                    let v = parse_num(tok.next(), line)?;
                    if u == 0 || v == 0 || u > count || v > count {
                        return Err(err("vertex id out of range"));
                    }
                    edges.push((u - 1, v - 1));
                }
                Some(other) => return Err(err(&format!("unknown line type {other:?}"))),
            }
            if tok.next().is_some() {
                return Err(GraphError::Parse {
                    line,
                    message: "trailing tokens".into(),
                });
            }
        }
        let (count, declared) = header.ok_or(GraphError::Parse {
            line: 1,
            message: "missing problem line".into(),
        })?;
        if declared != edges.len() {
            return Err(GraphError::Parse {
                line: 1,
                message: format!("header declares {declared} edges, found {}", edges.len()),
            });
        }
        Self::from_edges(count, &edges)
    }
}

fn parse_num(tok: Option<&str>, line: usize) -> Result<usize, GraphError> {
    let tok = tok.ok_or(GraphError::Parse {
        line,
        message: "missing number".into(),
    })?;
    tok.parse().map_err(|_| GraphError::Parse {
        line,
        message: format!("bad number {tok:?}"),
    })
}
