//! Machine checks of the gadget's distance guarantees.
//!
//! Check names: `diameter`, `far_pair` and `size.*` for the diameter
//! dichotomy; `u_to_v.*`, `middle.*`, `x_reach.*` and `u.*` for the distance
//! bounds; `walk.formN` for the thirteen path forms that bound distances from
//! `u_i`. Side tags are `L`/`R`, indices 1-based.

use crate::gadget::{
    build_gadget, cut_partition, exact_size, GadgetGraph, GadgetParams, PathKind, Role, Side,
};
use crate::graph::VertexId;
use crate::ov::OvInstance;

use super::report::{Check, Expect, Tally};
use super::{vertex_classes, DistanceMatrix, MetricsError, VerificationReport};

fn dist(m: &DistanceMatrix, s: VertexId, t: VertexId) -> Option<u64> {
    m.get(s, t).map(u64::from)
}

fn dichotomy_checks(
    g: &GadgetGraph,
    witness: Option<(usize, usize)>,
    m: &DistanceMatrix,
) -> Vec<Check> {
    let params = g.params();
    let mut checks = Vec::new();
    let expected = match witness {
        Some(_) => params.pair_diameter(),
        None => params.no_pair_diameter(),
    } as u64;
    let mut t = Tally::new("diameter", Expect::Equal(expected));
    match m.diameter() {
        Ok(d) => t.observe(d.witness.0, d.witness.1, Some(d.value as u64)),
        Err(MetricsError::Disconnected {
            source_vertex,
            target,
        }) => t.observe(source_vertex, target, None),
        Err(_) => {}
    }
    checks.push(t.finish());

    // The pair realising the diameter in the proof.
    let (i, j) = witness.unwrap_or((0, 0));
    let (s, t_) = (g.u(Side::Left, i), g.u(Side::Right, j));
    let mut t = Tally::new("far_pair", Expect::Equal(expected));
    t.observe(s, t_, dist(m, s, t_));
    checks.push(t.finish());

    let (n, d) = g.source_dims();
    let ones = |want: Side| {
        g.paths()
            .iter()
            .filter(|path| matches!(path.kind, PathKind::VToW { side, .. } if side == want))
            .count()
    };
    let (v, e) = exact_size(n, d, ones(Side::Left), ones(Side::Right), params);
    for (name, want, got) in [
        ("size.vertices", v, g.vertex_count()),
        ("size.edges", e, g.edge_count()),
    ] {
        checks.push(Check {
            name: name.into(),
            expected: Expect::Equal(want as u64),
            actual: Some(got as u64),
            ok: want == got,
            offenders: vec![],
        });
    }
    checks
}

/// Builds the gadget and checks that its exact diameter matches the value
/// predicted by the brute-force orthogonal-pair oracle.
pub fn verify_theorem2(
    inst: &OvInstance,
    params: GadgetParams,
) -> Result<VerificationReport, MetricsError> {
    let g = build_gadget(inst, params);
    verify_theorem2_on(&g, inst)
}

/// Like [`verify_theorem2`] on an already built (possibly mutated) gadget.
pub fn verify_theorem2_on(
    g: &GadgetGraph,
    inst: &OvInstance,
) -> Result<VerificationReport, MetricsError> {
    let m = DistanceMatrix::new(g.graph());
    Ok(VerificationReport::new(dichotomy_checks(
        g,
        inst.has_orthogonal_pair(),
        &m,
    )))
}

fn distance_checks(g: &GadgetGraph, m: &DistanceMatrix) -> Result<Vec<Check>, MetricsError> {
    let params = g.params();
    let (ell, p, q) = (params.ell() as u64, params.p() as u64, params.q() as u64);
    let (n, d) = g.source_dims();
    let classes = vertex_classes(g)?;
    let mut checks = Vec::new();

    // Every vertex of P_i is within ell - p of v_i.
    for side in Side::BOTH {
        for i in 0..n {
            let v = g.v(side, i);
            let mut t = Tally::new(
                format!("u_to_v.{}.{}", side.tag(), i + 1),
                Expect::AtMost(ell - p),
            );
            for &s in classes.p(side, i) {
                t.observe(s, v, dist(m, s, v));
            }
            checks.push(t.finish());
        }
    }

    // The middle class has diameter <= 4 ell - 2p + q, and both x's are
    // within 2 ell - p + q of all of it.
    let wide = 4 * ell - 2 * p + q;
    let half = 2 * ell - p + q;
    let mut pairs = Tally::new("middle.pairs", Expect::AtMost(wide));
    for (a, &s) in classes.middle.iter().enumerate() {
        for &t in &classes.middle[a..] {
            pairs.observe(s, t, dist(m, s, t));
        }
    }
    checks.push(pairs.finish());
    for (name, x) in [
        ("middle.from_xL", g.x(Side::Left)),
        ("middle.to_xR", g.x(Side::Right)),
    ] {
        let mut t = Tally::new(name, Expect::AtMost(half));
        for &v in &classes.middle {
            t.observe(x, v, dist(m, x, v));
        }
        checks.push(t.finish());
    }

    // One side together with the middle has diameter <= 4 ell - 2p + q.
    for side in Side::BOTH {
        let mut set: Vec<VertexId> = classes
            .side(side)
            .iter()
            .chain(&classes.middle)
            .copied()
            .collect();
        set.sort_unstable();
        let mut t = Tally::new(format!("x_reach.{}", side.tag()), Expect::AtMost(wide));
        for (a, &s) in set.iter().enumerate() {
            for &u in &set[a..] {
                t.observe(s, u, dist(m, s, u));
            }
        }
        checks.push(t.finish());
    }

    // Exact distances from every u_i.
    for side in Side::BOTH {
        let y = g.y(side);
        for i in 0..n {
            let u = g.u(side, i);
            let tag = format!("u.{}.{}", side.tag(), i + 1);
            let mut t = Tally::new(format!("{tag}.y"), Expect::Equal(3 * ell - 2 * p));
            t.observe(u, y, dist(m, u, y));
            checks.push(t.finish());

            let mut t = Tally::new(format!("{tag}.v_other"), Expect::Equal(3 * ell - p));
            for other in (0..n).filter(|&o| o != i) {
                let v = g.v(side, other);
                t.observe(u, v, dist(m, u, v));
            }
            if !t.is_empty() {
                checks.push(t.finish());
            }

            let mut t = Tally::new(format!("{tag}.w"), Expect::AtLeast(2 * ell - p));
            for k in 0..d {
                let w = g.w(side, k);
                t.observe(u, w, dist(m, u, w));
            }
            checks.push(t.finish());
        }
    }
    Ok(checks)
}

/// Checks every distance bound by BFS, plus the walk
/// lengths of the thirteen path forms from each `u_i`.
pub fn verify_distance_lemmas(
    inst: &OvInstance,
    params: GadgetParams,
) -> Result<VerificationReport, MetricsError> {
    verify_distance_lemmas_on(&build_gadget(inst, params))
}

pub fn verify_distance_lemmas_on(g: &GadgetGraph) -> Result<VerificationReport, MetricsError> {
    let m = DistanceMatrix::new(g.graph());
    let mut checks = distance_checks(g, &m)?;
    checks.extend(path_form_checks(g).checks);
    Ok(VerificationReport::new(checks))
}

/// Dichotomy and distance checks on one gadget, sharing a single all-pairs run.
pub fn verify_all(
    inst: &OvInstance,
    params: GadgetParams,
) -> Result<(GadgetGraph, VerificationReport), MetricsError> {
    let g = build_gadget(inst, params);
    let m = DistanceMatrix::new(g.graph());
    let mut checks = dichotomy_checks(&g, inst.has_orthogonal_pair(), &m);
    checks.extend(distance_checks(&g, &m)?);
    checks.extend(path_form_checks(&g).checks);
    Ok((g, VerificationReport::new(checks)))
}

/// Checks that the standard cut has `d + 1` edges, that no other edge
/// crosses it, and that deleting it separates every left `u` from every
/// right `u`. Requires `q >= 1`.
pub fn verify_cut(g: &GadgetGraph) -> Result<VerificationReport, MetricsError> {
    let cut = cut_partition(g)?;
    let (n, d) = g.source_dims();
    let want = Expect::Equal(d as u64 + 1);
    let crossing = g
        .graph()
        .edges()
        .into_iter()
        .filter(|&(u, v)| cut.is_cut_edge(u, v))
        .count();
    let mut checks = vec![
        Check {
            name: "cut.size".into(),
            expected: want,
            actual: Some(cut.cut_size() as u64),
            ok: cut.cut_size() == d + 1,
            offenders: vec![],
        },
        Check {
            name: "cut.crossing".into(),
            expected: want,
            actual: Some(crossing as u64),
            ok: crossing == d + 1,
            offenders: vec![],
        },
    ];
    let severed = cut
        .cut_edges
        .iter()
        .fold(g.graph().clone(), |h, &(a, b)| h.without_edge(a, b));
    let mut t = Tally::new("cut.separates", Expect::Infinite);
    for i in 0..n {
        let row = super::bfs(&severed, g.u(Side::Left, i))?;
        for j in 0..n {
            let target = g.u(Side::Right, j);
            t.observe(g.u(Side::Left, i), target, row.dist[target].map(u64::from));
        }
    }
    checks.push(t.finish());
    Ok(VerificationReport::new(checks))
}

/// Building blocks of a path form, relative to the start side `S`, the
/// start index `i`, a coordinate `k`, another index `i'` on `S` and an index
/// `j'` on the far side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Seg {
    UV,
    VX,
    XY,
    YBridge,
    XVOther,
    VW,
    WY,
    WVOther,
    WBridge,
    FarWY,
    FarWV,
}

/// A simple path from `u_i` to an exterior vertex, as a chain of
/// construction paths, with its claimed length.
pub struct PathForm {
    pub number: usize,
    pub stated: fn(GadgetParams) -> usize,
    segments: &'static [Seg],
}

use Seg::*;

pub const PATH_FORMS: [PathForm; 13] = [
    PathForm {
        number: 1,
        stated: |p| p.ell() - p.p(),
        segments: &[UV],
    },
    PathForm {
        number: 2,
        stated: |p| 2 * p.ell() - p.p(),
        segments: &[UV, VX],
    },
    PathForm {
        number: 3,
        stated: |p| 3 * p.ell() - 2 * p.p(),
        segments: &[UV, VX, XY],
    },
    PathForm {
        number: 4,
        stated: |p| 3 * p.ell() - p.p() + p.q(),
        segments: &[UV, VX, XY, YBridge],
    },
    PathForm {
        number: 5,
        stated: |p| 3 * p.ell() - p.p(),
        segments: &[UV, VX, XVOther],
    },
    PathForm {
        number: 6,
        stated: |p| 2 * p.ell() - p.p(),
        segments: &[UV, VW],
    },
    PathForm {
        number: 7,
        stated: |p| 3 * p.ell() - p.p(),
        segments: &[UV, VW, WY],
    },
    PathForm {
        number: 8,
        stated: |p| 3 * p.ell() + p.q(),
        segments: &[UV, VW, WY, YBridge],
    },
    PathForm {
        number: 9,
        stated: |p| 3 * p.ell() - p.p(),
        segments: &[UV, VW, WVOther],
    },
    PathForm {
        number: 10,
        stated: |p| 2 * p.ell() - p.p() + p.q(),
        segments: &[UV, VW, WBridge],
    },
    PathForm {
        number: 11,
        stated: |p| 3 * p.ell() - p.p() + p.q(),
        segments: &[UV, VW, WBridge, FarWY],
    },
    PathForm {
        number: 12,
        stated: |p| 3 * p.ell() + 2 * p.q(),
        segments: &[UV, VW, WBridge, FarWY, YBridge],
    },
    PathForm {
        number: 13,
        stated: |p| 3 * p.ell() - p.p() + p.q(),
        segments: &[UV, VW, WBridge, FarWV],
    },
];

impl PathForm {
    fn uses(&self, seg: &[Seg]) -> bool {
        self.segments.iter().any(|s| seg.contains(s))
    }

    fn kinds_into(
        &self,
        out: &mut Vec<PathKind>,
        side: Side,
        i: usize,
        k: usize,
        other: usize,
        far: usize,
    ) {
        let o = side.other();
        out.clear();
        out.extend(self.segments.iter().map(|seg| match seg {
            UV => PathKind::UToV { side, i },
            VX => PathKind::VToX { side, i },
            XY => PathKind::XToY { side },
            YBridge => PathKind::YBridge,
            XVOther => PathKind::VToX { side, i: other },
            VW => PathKind::VToW { side, i, k },
            WY => PathKind::YToW { side, k },
            WVOther => PathKind::VToW { side, i: other, k },
            WBridge => PathKind::WBridge { k },
            FarWY => PathKind::YToW { side: o, k },
            FarWV => PathKind::VToW { side: o, i: far, k },
        }));
    }
}

/// Walks a chain of construction paths starting at `start`. Returns the
/// summed metadata length and the end vertex, or `None` if some path is
/// absent, the chain does not connect, or the realised walk is not a walk.
fn walk(g: &GadgetGraph, start: Role, kinds: &[PathKind]) -> Option<(usize, VertexId)> {
    let mut at = start;
    let mut total = 0;
    let mut steps = 0;
    let mut last = g.vertex(start)?;
    for &kind in kinds {
        let path = g.path(kind)?;
        let (from, to) = kind.endpoints();
        let forward = if from == at {
            true
        } else if to == at {
            false
        } else {
            return None;
        };
        let verts = &path.vertices;
        let len = verts.len();
        let pick = |idx: usize| {
            if forward {
                verts[idx]
            } else {
                verts[len - 1 - idx]
            }
        };
        if pick(0) != last {
            return None;
        }
        for idx in 1..len {
            let v = pick(idx);
            if !g.graph().has_edge(last, v) {
                return None;
            }
            last = v;
            steps += 1;
        }
        total += path.length;
        at = if forward { to } else { from };
    }
    (steps == total).then_some((total, last))
}

/// For every form whose constituent paths exist, compares its stated length
/// with the length summed from the builder's path metadata, and checks that
/// the chain is a genuine walk in the graph. Forms that never instantiate
/// are omitted.
pub fn path_form_checks(g: &GadgetGraph) -> VerificationReport {
    let params = g.params();
    let (n, d) = g.source_dims();
    let mut checks = Vec::new();
    let mut kinds = Vec::with_capacity(5);
    for form in &PATH_FORMS {
        let mut tally = Tally::new(
            format!("walk.form{}", form.number),
            Expect::Equal((form.stated)(params) as u64),
        );
        let ks = if form.uses(&[VW]) { d } else { 1 };
        let uses_other = form.uses(&[XVOther, WVOther]);
        let others = if uses_other { n } else { 1 };
        let fars = if form.uses(&[FarWV]) { n } else { 1 };
        for side in Side::BOTH {
            for i in 0..n {
                let u = g.u(side, i);
                for k in 0..ks {
                    for other in (0..others).filter(|&o| !uses_other || o != i) {
                        for far in 0..fars {
                            form.kinds_into(&mut kinds, side, i, k, other, far);
                            if kinds.iter().any(|&kind| g.path(kind).is_none()) {
                                continue;
                            }
                            match walk(g, Role::U(side, i), &kinds) {
                                Some((len, end)) => tally.observe(u, end, Some(len as u64)),
                                None => tally.observe(u, u, None),
                            }
                        }
                    }
                }
            }
        }
        if !tally.is_empty() {
            checks.push(tally.finish());
        }
    }
    VerificationReport::new(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ov(text: &str) -> OvInstance {
        OvInstance::from_text(text).unwrap()
    }

    #[test]
    fn dichotomy_on_small_instances() {
        let params = GadgetParams::new(1, 0, 1).unwrap();
        let r = verify_theorem2(&ov("1 1\n1\n1\n"), params).unwrap();
        assert!(r.passed, "{}", r.to_text());
        assert_eq!(r.check("diameter").unwrap().actual, Some(5));
        let r = verify_theorem2(&ov("1 2\n10\n01\n"), params).unwrap();
        assert!(r.passed, "{}", r.to_text());
        assert_eq!(r.check("diameter").unwrap().actual, Some(7));
    }

    #[test]
    fn removing_an_edge_fails_verification() {
        let inst = ov("2 2\n10\n01\n11\n01\n");
        let params = GadgetParams::new(2, 0, 1).unwrap();
        let g = build_gadget(&inst, params);
        let u = g.u(Side::Left, 0);
        let mutated = g.with_edge_removed(u, g.graph().neighbors(u)[0]);
        let r = verify_theorem2_on(&mutated, &inst).unwrap();
        assert!(!r.passed);
        assert_eq!(r.check("diameter").unwrap().actual, None);
        assert!(!verify_distance_lemmas_on(&mutated).unwrap().passed);
    }

    #[test]
    fn distance_bounds_on_identified_graph() {
        let inst = ov("2 3\n101\n010\n011\n100\n");
        let params = GadgetParams::new(1, 1, 0).unwrap();
        let r = verify_distance_lemmas(&inst, params).unwrap();
        assert!(r.passed, "{}", r.to_text());
        assert_eq!(r.check("u.L.1.y").unwrap().actual, Some(1));
    }

    #[test]
    fn w_lower_bound_is_attained() {
        // l_1[1] = 1 puts w_1 at exactly 2 ell - p from u_1.
        let inst = ov("1 2\n10\n11\n");
        for (ell, p, q) in [(1, 0, 1), (2, 1, 1), (3, 0, 0)] {
            let params = GadgetParams::new(ell, p, q).unwrap();
            let g = build_gadget(&inst, params);
            let m = DistanceMatrix::new(g.graph());
            let (u, w) = (g.u(Side::Left, 0), g.w(Side::Left, 0));
            assert_eq!(m.get(u, w), Some((2 * ell - p) as u32));
            let r = verify_distance_lemmas_on(&g).unwrap();
            assert!(r.passed, "{}", r.to_text());
            assert_eq!(
                r.check("u.L.1.w").unwrap().actual,
                Some((2 * ell - p) as u64)
            );
        }
    }

    #[test]
    fn all_thirteen_forms_instantiate() {
        let inst = ov("2 2\n11\n10\n10\n11\n");
        let g = build_gadget(&inst, GadgetParams::new(2, 1, 2).unwrap());
        let r = path_form_checks(&g);
        assert_eq!(r.checks.len(), 13);
        assert!(r.passed, "{}", r.to_text());
    }

    #[test]
    fn verify_all_matches_parts() {
        let inst = ov("2 3\n110\n001\n011\n101\n");
        let params = GadgetParams::new(2, 0, 2).unwrap();
        let (_, all) = verify_all(&inst, params).unwrap();
        let t2 = verify_theorem2(&inst, params).unwrap();
        let lem = verify_distance_lemmas(&inst, params).unwrap();
        assert_eq!(all, t2.merge(lem));
        assert!(all.passed, "{}", all.to_text());
    }

    #[test]
    fn cut_checks() {
        let inst = ov("2 2\n10\n01\n11\n00\n");
        let g = build_gadget(&inst, GadgetParams::new(2, 1, 1).unwrap());
        let r = verify_cut(&g).unwrap();
        assert!(r.passed, "{}", r.to_text());
        assert_eq!(r.check("cut.size").unwrap().actual, Some(3));
        assert!(verify_cut(&build_gadget(&inst, GadgetParams::new(2, 1, 0).unwrap())).is_err());
    }
}
