//! Text and JSON export of gadgets.
//!
//! The edge list is the graph's DIMACS-style form. The companion label file
//! is line oriented, ids and indices 1-based:
//!
//! ```text
//! c ovgadget labels
//! params <ell> <p> <q>
//! dims <n> <d>
//! path <pid> <kind...> <length>
//! <vertex id> <role>
//! ```
//!
//! Path kinds are `uv L i`, `vx L i`, `vw L i k`, `yw L k`, `ww k`, `xy L`
//! and `yy`. Roles are `uL i`, `vR i`, `wL k`, `xL`, `yR` or
//! `interior <pid> <position>`. A vertex with several roles gets one line
//! per role.

use serde::{Deserialize, Serialize};

use super::{GadgetError, GadgetGraph, GadgetParams, GadgetPath, PathKind, Role, Side};
use crate::graph::Graph;

fn side_from(tok: &str) -> Option<Side> {
    match tok {
        "L" => Some(Side::Left),
        "R" => Some(Side::Right),
        _ => None,
    }
}

pub(crate) fn kind_tokens(kind: PathKind) -> String {
    match kind {
        PathKind::UToV { side, i } => format!("uv {} {}", side.tag(), i + 1),
        PathKind::VToX { side, i } => format!("vx {} {}", side.tag(), i + 1),
        PathKind::VToW { side, i, k } => format!("vw {} {} {}", side.tag(), i + 1, k + 1),
        PathKind::YToW { side, k } => format!("yw {} {}", side.tag(), k + 1),
        PathKind::WBridge { k } => format!("ww {}", k + 1),
        PathKind::XToY { side } => format!("xy {}", side.tag()),
        PathKind::YBridge => "yy".to_string(),
    }
}

fn parse_kind(tok: &[&str]) -> Option<PathKind> {
    let idx = |s: &str| s.parse::<usize>().ok().filter(|&v| v >= 1).map(|v| v - 1);
    Some(match tok {
        ["uv", s, i] => PathKind::UToV {
            side: side_from(s)?,
            i: idx(i)?,
        },
        ["vx", s, i] => PathKind::VToX {
            side: side_from(s)?,
            i: idx(i)?,
        },
        ["vw", s, i, k] => PathKind::VToW {
            side: side_from(s)?,
            i: idx(i)?,
            k: idx(k)?,
        },
        ["yw", s, k] => PathKind::YToW {
            side: side_from(s)?,
            k: idx(k)?,
        },
        ["ww", k] => PathKind::WBridge { k: idx(k)? },
        ["xy", s] => PathKind::XToY {
            side: side_from(s)?,
        },
        ["yy"] => PathKind::YBridge,
        _ => return None,
    })
}

impl GadgetGraph {
    /// Role as written in label files, e.g. `uL 3` or `interior 17 2`.
    pub fn role_string(&self, role: Role) -> String {
        match role {
            Role::U(s, i) => format!("u{} {}", s.tag(), i + 1),
            Role::V(s, i) => format!("v{} {}", s.tag(), i + 1),
            Role::W(s, k) => format!("w{} {}", s.tag(), k + 1),
            Role::X(s) => format!("x{}", s.tag()),
            Role::Y(s) => format!("y{}", s.tag()),
            Role::Interior { path, position } => {
                format!(
                    "interior {} {}",
                    self.path_id(path).expect("interior of a known path") + 1,
                    position
                )
            }
        }
    }

    pub fn to_edge_list(&self) -> String {
        self.graph().to_edge_list()
    }

    pub fn labels_text(&self) -> String {
        let (n, d) = self.source_dims();
        let prm = self.params();
        let mut out = String::from("c ovgadget labels\n");
        out.push_str(&format!("params {} {} {}\n", prm.ell(), prm.p(), prm.q()));
        out.push_str(&format!("dims {n} {d}\n"));
        for (pid, path) in self.paths().iter().enumerate() {
            out.push_str(&format!(
                "path {} {} {}\n",
                pid + 1,
                kind_tokens(path.kind),
                path.length
            ));
        }
        for (v, roles) in self.all_labels().iter().enumerate() {
            for &role in roles {
                out.push_str(&format!("{} {}\n", v + 1, self.role_string(role)));
            }
        }
        out
    }

    /// Rebuilds a gadget from its edge list and label file, validating that
    /// the labels describe the construction's paths.
    pub fn from_export(edge_list: &str, labels: &str) -> Result<Self, GadgetError> {
        let graph = Graph::from_edge_list(edge_list)?;
        let decl = parse_labels(labels, graph.vertex_count())?;
        assemble(graph, decl)
    }

    pub fn to_json_value(&self) -> GadgetJson {
        let (n, d) = self.source_dims();
        GadgetJson {
            n,
            d,
            params: self.params(),
            vertex_count: self.vertex_count(),
            edge_count: self.edge_count(),
            paths: self
                .paths()
                .iter()
                .enumerate()
                .map(|(pid, p)| PathJson {
                    id: pid + 1,
                    kind: kind_tokens(p.kind),
                    length: p.length,
                })
                .collect(),
            vertices: self
                .all_labels()
                .iter()
                .enumerate()
                .map(|(v, roles)| VertexJson {
                    id: v + 1,
                    roles: roles.iter().map(|&r| self.role_string(r)).collect(),
                })
                .collect(),
            edges: self
                .graph()
                .edges()
                .into_iter()
                .map(|(u, v)| [u + 1, v + 1])
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("gadget json serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, GadgetError> {
        let doc: GadgetJson = serde_json::from_str(text).map_err(|e| GadgetError::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        let edges: Vec<_> = doc
            .edges
            .iter()
            .map(|&[u, v]| {
                if u == 0 || v == 0 {
                    Err(GadgetError::Label("vertex ids are 1-based".into()))
                } else {
                    Ok((u - 1, v - 1))
                }
            })
            .collect::<Result<_, _>>()?;
        let graph = Graph::from_edges(doc.vertex_count, &edges)?;
        let mut text = format!(
            "params {} {} {}\ndims {} {}\n",
            doc.params.ell(),
            doc.params.p(),
            doc.params.q(),
            doc.n,
            doc.d
        );
        for p in &doc.paths {
            text.push_str(&format!("path {} {} {}\n", p.id, p.kind, p.length));
        }
        for v in &doc.vertices {
            for r in &v.roles {
                text.push_str(&format!("{} {}\n", v.id, r));
            }
        }
        let decl = parse_labels(&text, graph.vertex_count())?;
        assemble(graph, decl)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetJson {
    pub n: usize,
    pub d: usize,
    pub params: GadgetParams,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub paths: Vec<PathJson>,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathJson {
    pub id: usize,
    pub kind: String,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub roles: Vec<String>,
}

struct LabelDecl {
    params: GadgetParams,
    n: usize,
    d: usize,
    paths: Vec<(PathKind, usize)>,
    labels: Vec<Vec<Role>>,
}

fn parse_labels(text: &str, vertex_count: usize) -> Result<LabelDecl, GadgetError> {
    let mut params = None;
    let mut dims = None;
    let mut paths: Vec<(PathKind, usize)> = Vec::new();
    let mut labels = vec![Vec::new(); vertex_count];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tok: Vec<&str> = raw.split_whitespace().collect();
        let err = |message: String| GadgetError::Parse { line, message };
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(format!("bad number {s:?}")))
        };
        match tok.as_slice() {
            [] | ["c", ..] => {}
            ["params", ell, p, q] => {
                params = Some(GadgetParams::new(num(ell)?, num(p)?, num(q)?)?);
            }
            ["dims", n, d] => dims = Some((num(n)?, num(d)?)),
            ["path", pid, rest @ ..] if rest.len() >= 2 => {
                let pid = num(pid)?;
                if pid != paths.len() + 1 {
                    return Err(err(format!("path ids must be consecutive, got {pid}")));
                }
                let (kind_tok, len_tok) = rest.split_at(rest.len() - 1);
                let kind = parse_kind(kind_tok)
                    .ok_or_else(|| err(format!("bad path kind {kind_tok:?}")))?;
                paths.push((kind, num(len_tok[0])?));
            }
            [id, role @ ..] => {
                let v = num(id)?;
                if v == 0 || v > vertex_count {
                    return Err(err(format!("vertex {v} out of range")));
                }
                let role =
                    parse_role(role, &paths).ok_or_else(|| err(format!("bad role {role:?}")))?;
                labels[v - 1].push(role);
            }
        }
    }
    let params = params.ok_or(GadgetError::Parse {
        line: 0,
        message: "missing params line".into(),
    })?;
    let (n, d) = dims.ok_or(GadgetError::Parse {
        line: 0,
        message: "missing dims line".into(),
    })?;
    for set in &mut labels {
        set.sort();
    }
    Ok(LabelDecl {
        params,
        n,
        d,
        paths,
        labels,
    })
}

fn parse_role(tok: &[&str], paths: &[(PathKind, usize)]) -> Option<Role> {
    let idx = |s: &str| s.parse::<usize>().ok().filter(|&v| v >= 1).map(|v| v - 1);
    Some(match tok {
        ["interior", pid, pos] => {
            let (path, _) = *paths.get(idx(pid)?)?;
            Role::Interior {
                path,
                position: pos.parse().ok()?,
            }
        }
        [name, i] => {
            let side = side_from(name.get(1..)?)?;
            match &name[..1] {
                "u" => Role::U(side, idx(i)?),
                "v" => Role::V(side, idx(i)?),
                "w" => Role::W(side, idx(i)?),
                _ => return None,
            }
        }
        [name] => {
            let side = side_from(name.get(1..)?)?;
            match &name[..1] {
                "x" => Role::X(side),
                "y" => Role::Y(side),
                _ => return None,
            }
        }
        _ => return None,
    })
}

fn assemble(graph: Graph, decl: LabelDecl) -> Result<GadgetGraph, GadgetError> {
    let mut exterior = std::collections::HashMap::new();
    let mut interior = std::collections::HashMap::new();
    for (v, set) in decl.labels.iter().enumerate() {
        for &role in set {
            match role {
                Role::Interior { path, position } => {
                    if interior.insert((path, position), v).is_some() {
                        return Err(GadgetError::Label(format!(
                            "interior {path:?}/{position} appears twice"
                        )));
                    }
                }
                r => {
                    exterior.insert(r, v);
                }
            }
        }
    }
    let mut paths = Vec::with_capacity(decl.paths.len());
    for &(kind, length) in &decl.paths {
        let (from, to) = kind.endpoints();
        let missing = |what: String| GadgetError::Label(format!("path {kind:?}: missing {what}"));
        let mut vertices = vec![*exterior
            .get(&from)
            .ok_or_else(|| missing(format!("{from:?}")))?];
        if length > 0 {
            for pos in 1..length {
                vertices.push(
                    *interior
                        .get(&(kind, pos))
                        .ok_or_else(|| missing(format!("position {pos}")))?,
                );
            }
            vertices.push(
                *exterior
                    .get(&to)
                    .ok_or_else(|| missing(format!("{to:?}")))?,
            );
        }
        paths.push(GadgetPath {
            kind,
            length,
            vertices,
        });
    }
    GadgetGraph::from_parts(graph, decl.labels, paths, decl.params, decl.n, decl.d)
}

#[cfg(test)]
mod tests {
    use crate::gadget::{build_gadget, GadgetGraph, GadgetParams};
    use crate::ov::OvInstance;

    fn sample() -> GadgetGraph {
        let ov = OvInstance::new(
            vec!["10".parse().unwrap(), "11".parse().unwrap()],
            vec!["01".parse().unwrap(), "00".parse().unwrap()],
        )
        .unwrap();
        build_gadget(&ov, GadgetParams::new(2, 1, 2).unwrap())
    }

    #[test]
    fn label_file_shape() {
        let ov = OvInstance::new(vec!["1".parse().unwrap()], vec!["1".parse().unwrap()]).unwrap();
        let g = build_gadget(&ov, GadgetParams::new(1, 0, 1).unwrap());
        let text = g.labels_text();
        assert!(text.contains("params 1 0 1\ndims 1 1\npath 1 uv L 1 1\n"));
        assert!(text.contains("\n1 uL 1\n2 uR 1\n"));
        assert!(text.ends_with("10 yR\n"));
        assert!(g.to_edge_list().starts_with("p edge 10 12\n"));
    }

    #[test]
    fn text_export_round_trips() {
        for g in [
            sample(),
            build_gadget(&sample().instance(), GadgetParams::new(1, 1, 0).unwrap()),
        ] {
            let back = GadgetGraph::from_export(&g.to_edge_list(), &g.labels_text()).unwrap();
            assert_eq!(back, g);
            assert_eq!(back.labels_text(), g.labels_text());
        }
    }

    #[test]
    fn json_export_round_trips() {
        let g = sample();
        let json = g.to_json();
        assert_eq!(GadgetGraph::from_json(&json).unwrap(), g);
        assert_eq!(json, sample().to_json());
    }

    #[test]
    fn foreign_labels_are_rejected() {
        let g = sample();
        let labels = g.labels_text().replace("\n1 uL 1\n", "\n");
        assert!(GadgetGraph::from_export(&g.to_edge_list(), &labels).is_err());
        let edges = g
            .graph()
            .without_edge(0, g.graph().neighbors(0)[0])
            .to_edge_list();
        assert!(GadgetGraph::from_export(&edges, &g.labels_text()).is_err());
    }
}
