use ovgadget::gadget::{
    build_gadget, build_side, cut_partition, exact_size, glue_sides, map_ell, GadgetGraph,
    GadgetParams, PathKind, Role, Side,
};
use ovgadget::generate::{ov_multisets, random_ov, seeded_rng, Force};
use ovgadget::metrics::{bfs, diameter};
use ovgadget::ov::OvInstance;

fn grid() -> Vec<GadgetParams> {
    let mut out = Vec::new();
    for ell in 1..=4 {
        for p in 0..=1 {
            for q in 0..=3 {
                out.push(GadgetParams::new(ell, p, q).unwrap());
            }
        }
    }
    out
}

fn samples() -> Vec<OvInstance> {
    let mut rng = seeded_rng(21);
    let mut out = ov_multisets(2, 2);
    for i in 0..30 {
        let force = [Force::Any, Force::Yes, Force::No][i % 3];
        out.push(random_ov(1 + i % 5, 1 + i % 6, force, &mut rng));
    }
    out
}

#[test]
fn parameter_validation() {
    assert!(GadgetParams::new(0, 0, 1).is_err());
    assert!(GadgetParams::new(1, 2, 1).is_err());
    assert!(GadgetParams::new(1, 1, 0).is_ok());
    assert_eq!(map_ell(4).unwrap(), (2, 0));
    assert_eq!(map_ell(5).unwrap(), (3, 1));
    assert_eq!(map_ell(1).unwrap(), (1, 1));
    assert!(map_ell(0).is_err());
    let p = GadgetParams::for_target_ell(5, 2).unwrap();
    assert_eq!((p.ell(), p.p(), p.q()), (3, 1, 2));
    assert_eq!(p.pair_diameter(), 6 * 3 - 3 + 2);
    assert_eq!(p.no_pair_diameter(), 4 * 3 - 2 + 2);
}

#[test]
fn size_matches_closed_form() {
    for inst in samples() {
        for params in grid() {
            let g = build_gadget(&inst, params);
            let expected = exact_size(
                inst.n(),
                inst.dimension(),
                inst.ones_left(),
                inst.ones_right(),
                params,
            );
            assert_eq!((g.vertex_count(), g.edge_count()), expected, "{params:?}");
        }
    }
}

#[test]
fn paths_have_their_lengths_and_are_simple() {
    for inst in samples().into_iter().take(12) {
        for params in grid() {
            let g = build_gadget(&inst, params);
            for path in g.paths() {
                assert_eq!(path.length, params.path_length(path.kind));
                assert_eq!(path.vertices.len(), path.length + 1);
                for pair in path.vertices.windows(2) {
                    assert!(g.graph().has_edge(pair[0], pair[1]));
                }
                let dist = bfs(g.graph(), path.vertices[0]).unwrap();
                let end = *path.vertices.last().unwrap();
                assert!(dist.dist[end].unwrap() as usize <= path.length);
                let (from, to) = path.kind.endpoints();
                assert!(g.labels(path.vertices[0]).contains(&from));
                assert!(g.labels(end).contains(&to));
            }
        }
    }
}

#[test]
fn vector_paths_follow_one_bits() {
    let inst = OvInstance::from_text("2 3\n101\n000\n010\n111\n").unwrap();
    let g = build_gadget(&inst, GadgetParams::new(2, 0, 1).unwrap());
    for (side, rows) in [(Side::Left, inst.left()), (Side::Right, inst.right())] {
        for (i, row) in rows.iter().enumerate() {
            for k in 0..3 {
                let present = g.path(PathKind::VToW { side, i, k }).is_some();
                assert_eq!(present, row.get(k), "{side:?} {i} {k}");
            }
        }
    }
    assert_eq!(g.instance(), inst);
}

#[test]
fn zero_length_paths_identify_endpoints() {
    let inst = OvInstance::from_text("1 1\n1\n0\n").unwrap();
    let g = build_gadget(&inst, GadgetParams::new(1, 1, 0).unwrap());
    for side in [Side::Left, Side::Right] {
        assert_eq!(g.u(side, 0), g.v(side, 0));
        assert_eq!(g.x(side), g.y(side));
    }
    assert_eq!(g.w(Side::Left, 0), g.w(Side::Right, 0));
    assert_ne!(g.y(Side::Left), g.y(Side::Right));
    let merged = g.labels(g.u(Side::Left, 0));
    assert!(merged.contains(&Role::U(Side::Left, 0)) && merged.contains(&Role::V(Side::Left, 0)));
}

#[test]
fn gadgets_are_connected() {
    for inst in samples() {
        for params in grid() {
            assert!(diameter(build_gadget(&inst, params).graph()).is_ok());
        }
    }
}

fn remove_cut(g: &GadgetGraph) -> ovgadget::graph::Graph {
    let cut = cut_partition(g).unwrap();
    cut.cut_edges
        .iter()
        .fold(g.graph().clone(), |acc, &(a, b)| acc.without_edge(a, b))
}

#[test]
fn cut_separates_the_two_sides() {
    for inst in samples() {
        for params in grid().into_iter().filter(|p| p.q() >= 1) {
            let g = build_gadget(&inst, params);
            let cut = cut_partition(&g).unwrap();
            assert_eq!(cut.cut_size(), inst.dimension() + 1);
            for &(a, b) in &cut.cut_edges {
                assert_ne!(cut.side_of[a], cut.side_of[b]);
            }
            let rest = remove_cut(&g);
            let from_left = bfs(&rest, g.x(Side::Left)).unwrap();
            for v in 0..g.vertex_count() {
                assert_eq!(
                    from_left.dist[v].is_some(),
                    cut.side_of[v] == Side::Left,
                    "vertex {v} under {params:?}"
                );
            }
            for v in cut.vertices_on(Side::Left) {
                assert!(g.labels(v).iter().all(|r| !matches!(
                    r,
                    Role::U(Side::Right, _)
                        | Role::V(Side::Right, _)
                        | Role::W(Side::Right, _)
                        | Role::X(Side::Right)
                        | Role::Y(Side::Right)
                )));
            }
        }
    }
}

#[test]
fn cut_requires_a_bridge() {
    let inst = OvInstance::from_text("1 1\n1\n1\n").unwrap();
    let g = build_gadget(&inst, GadgetParams::new(2, 1, 0).unwrap());
    let err = cut_partition(&g).unwrap_err();
    assert!(err.to_string().contains("q ≥ 1"));
}

#[test]
fn halves_depend_only_on_their_own_vectors() {
    let mut rng = seeded_rng(8);
    for params in grid().into_iter().filter(|p| p.q() >= 1) {
        let a = random_ov(3, 4, Force::Any, &mut rng);
        let b = random_ov(3, 4, Force::Any, &mut rng);
        let left = build_side(a.left(), 4, params, Side::Left).unwrap();
        assert_eq!(left, build_side(a.left(), 4, params, Side::Left).unwrap());
        let right_a = build_side(a.right(), 4, params, Side::Right).unwrap();
        let right_b = build_side(b.right(), 4, params, Side::Right).unwrap();
        let glued = glue_sides(&left, &right_a, 4, params).unwrap();
        assert_eq!(glued, build_gadget(&a, params).labeled_edges());
        let mixed = OvInstance::new(a.left().to_vec(), b.right().to_vec()).unwrap();
        let glued = glue_sides(&left, &right_b, 4, params).unwrap();
        assert_eq!(glued, build_gadget(&mixed, params).labeled_edges());
    }
}

#[test]
fn construction_is_deterministic() {
    let mut rng = seeded_rng(3);
    let inst = random_ov(5, 6, Force::Yes, &mut rng);
    let params = GadgetParams::new(3, 1, 2).unwrap();
    let a = build_gadget(&inst, params);
    let b = build_gadget(&inst, params);
    assert_eq!(a, b);
    assert_eq!(a.to_edge_list(), b.to_edge_list());
    assert_eq!(a.to_json(), b.to_json());
}
