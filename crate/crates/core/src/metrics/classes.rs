use crate::gadget::{GadgetGraph, PathKind, Role, Side};
use crate::graph::VertexId;

use super::MetricsError;

/// Partition of a gadget's vertices into left, middle and right classes.
///
/// `P_i` on a side holds the vertices of `u_i -- v_i`, of `v_i -- x`
/// without `x`, and of every `v_i -- w_k` without `w_k`. The left class is
/// the union of the left `P_i`, the right class likewise, and the middle
/// class is everything else: the `x -- y`, `y -- w_k` and bridge paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClasses {
    pub left: Vec<VertexId>,
    pub middle: Vec<VertexId>,
    pub right: Vec<VertexId>,
    pub p_left: Vec<Vec<VertexId>>,
    pub p_right: Vec<Vec<VertexId>>,
}

impl VertexClasses {
    pub fn p(&self, side: Side, i: usize) -> &[VertexId] {
        match side {
            Side::Left => &self.p_left[i],
            Side::Right => &self.p_right[i],
        }
    }

    pub fn side(&self, side: Side) -> &[VertexId] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

pub fn vertex_classes(g: &GadgetGraph) -> Result<VertexClasses, MetricsError> {
    let (n, _) = g.source_dims();
    let count = g.vertex_count();
    let mut p_sets: [Vec<Vec<VertexId>>; 2] = [vec![Vec::new(); n], vec![Vec::new(); n]];
    for path in g.paths() {
        let (side, i, skip_last) = match path.kind {
            PathKind::UToV { side, i } => (side, i, false),
            PathKind::VToX { side, i } | PathKind::VToW { side, i, .. } => (side, i, true),
            _ => continue,
        };
        let take = if skip_last {
            path.vertices.len() - 1
        } else {
            path.vertices.len()
        };
        p_sets[side as usize][i].extend_from_slice(&path.vertices[..take]);
    }
    let mut class = vec![None::<Side>; count];
    for side in Side::BOTH {
        for set in &mut p_sets[side as usize] {
            set.sort_unstable();
            set.dedup();
            for &v in set.iter() {
                match class[v] {
                    Some(s) if s != side => {
                        return Err(MetricsError::Label(format!(
                            "vertex {} lies on both sides",
                            v + 1
                        )));
                    }
                    _ => class[v] = Some(side),
                }
            }
        }
    }
    for set in p_sets.iter().flatten() {
        if let Some(&v) = set.iter().find(|&&v| {
            g.labels(v)
                .iter()
                .any(|r| matches!(r, Role::Y(_) | Role::W(..) | Role::X(_)))
        }) {
            return Err(MetricsError::Label(format!(
                "vertex {} must not belong to a P set",
                v + 1
            )));
        }
    }
    let [p_left, p_right] = p_sets;
    let pick = |want: Option<Side>| (0..count).filter(|&v| class[v] == want).collect::<Vec<_>>();
    Ok(VertexClasses {
        left: pick(Some(Side::Left)),
        middle: pick(None),
        right: pick(Some(Side::Right)),
        p_left,
        p_right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::{build_gadget, GadgetParams};
    use crate::ov::OvInstance;

    #[test]
    fn smallest_gadget_classes() {
        let ov = OvInstance::from_text("1 1\n1\n1\n").unwrap();
        let g = build_gadget(&ov, GadgetParams::new(1, 0, 1).unwrap());
        let c = vertex_classes(&g).unwrap();
        let mut middle = vec![
            g.x(Side::Left),
            g.y(Side::Left),
            g.w(Side::Left, 0),
            g.w(Side::Right, 0),
            g.y(Side::Right),
            g.x(Side::Right),
        ];
        middle.sort();
        assert_eq!(c.middle, middle);
        assert_eq!(c.left, vec![g.u(Side::Left, 0), g.v(Side::Left, 0)]);
        assert_eq!(
            c.p(Side::Right, 0),
            &[g.u(Side::Right, 0), g.v(Side::Right, 0)]
        );
    }

    #[test]
    fn classes_cover_and_exclude() {
        let ov = OvInstance::from_text("2 3\n101\n011\n110\n000\n").unwrap();
        for (ell, p, q) in [(1, 1, 0), (1, 0, 0), (2, 1, 1), (3, 0, 2)] {
            let g = build_gadget(&ov, GadgetParams::new(ell, p, q).unwrap());
            let c = vertex_classes(&g).unwrap();
            assert_eq!(
                c.left.len() + c.middle.len() + c.right.len(),
                g.vertex_count()
            );
            for side in Side::BOTH {
                for i in 0..2 {
                    assert!(c.p(side, i).contains(&g.u(side, i)));
                    assert!(!c.p(side, i).contains(&g.y(side)));
                    assert!(!c.p(side, i).contains(&g.x(side)));
                    assert!((0..3).all(|k| !c.p(side, i).contains(&g.w(side, k))));
                }
            }
        }
    }
}
