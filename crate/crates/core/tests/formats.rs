use ovgadget::bits::BitVector;
use ovgadget::gadget::{build_gadget, GadgetGraph, GadgetParams};
use ovgadget::graph::Graph;
use ovgadget::metrics::{verify_all, VerificationReport};
use ovgadget::ov::{DisjointnessInstance, OvInstance};
use proptest::prelude::*;

fn bit_vec(len: usize) -> impl Strategy<Value = BitVector> {
    prop::collection::vec(any::<bool>(), len).prop_map(BitVector::new)
}

fn ov_instance() -> impl Strategy<Value = OvInstance> {
    (1usize..5, 1usize..5).prop_flat_map(|(n, d)| {
        (
            prop::collection::vec(bit_vec(d), n),
            prop::collection::vec(bit_vec(d), n),
        )
            .prop_map(|(l, r)| OvInstance::new(l, r).unwrap())
    })
}

fn params() -> impl Strategy<Value = GadgetParams> {
    (1usize..4, 0usize..2, 0usize..3).prop_map(|(e, p, q)| GadgetParams::new(e, p, q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ov_text_round_trip(inst in ov_instance()) {
        prop_assert_eq!(OvInstance::from_text(&inst.to_text()).unwrap(), inst);
    }

    #[test]
    fn disjointness_text_round_trip((x, y) in (1usize..40).prop_flat_map(|n| (bit_vec(n), bit_vec(n)))) {
        let inst = DisjointnessInstance::new(x, y).unwrap();
        prop_assert_eq!(DisjointnessInstance::from_text(&inst.to_text()).unwrap(), inst);
    }

    #[test]
    fn edge_list_round_trip(n in 1usize..30, raw in prop::collection::vec((0usize..30, 0usize..30), 0..60)) {
        let mut edges: Vec<_> = raw
            .into_iter()
            .map(|(a, b)| (a % n, b % n))
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort();
        edges.dedup();
        let g = Graph::from_edges(n, &edges).unwrap();
        prop_assert_eq!(Graph::from_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn gadget_exports_round_trip(inst in ov_instance(), ps in params()) {
        let g = build_gadget(&inst, ps);
        let back = GadgetGraph::from_export(&g.to_edge_list(), &g.labels_text()).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(&GadgetGraph::from_json(&g.to_json()).unwrap(), &g);
        prop_assert_eq!(back.instance(), inst);
    }
}

#[test]
fn report_json_round_trip() {
    let inst = OvInstance::from_text("2 2\n10\n01\n11\n00\n").unwrap();
    let (_, report) = verify_all(&inst, GadgetParams::new(2, 1, 1).unwrap()).unwrap();
    assert_eq!(
        VerificationReport::from_json(&report.to_json()).unwrap(),
        report
    );
}

#[test]
fn malformed_inputs_name_the_line() {
    let err = OvInstance::from_text("2 2\n10\n0x\n11\n00\n").unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
    let err = OvInstance::from_text("2 2\n10\n01\n11\n").unwrap_err();
    assert!(err.to_string().contains("line"), "{err}");
    let err = OvInstance::from_text("2 2\n10\n011\n11\n00\n").unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
    let err = DisjointnessInstance::from_text("3\n101\n11\n").unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
    assert!(Graph::from_edge_list("p edge 2 1\ne 1 3\n").is_err());
    assert!(GadgetGraph::from_json("{}").is_err());
}
