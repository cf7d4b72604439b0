use ovgadget::bits::BitVector;
use ovgadget::generate::{all_disjointness, random_disjointness, seeded_rng, Force};
use ovgadget::ov::{
    encode_disjointness, encoded_dimension, has_orthogonal_pair, index_code, is_intersecting,
    DisjointnessInstance,
};

fn bits(s: &str) -> BitVector {
    BitVector::from_ints(&s.bytes().map(|b| b - b'0').collect::<Vec<_>>())
}

#[test]
fn dimension_formula() {
    assert_eq!(encoded_dimension(1), 3);
    assert_eq!(encoded_dimension(2), 5);
    assert_eq!(encoded_dimension(3), 7);
    assert_eq!(encoded_dimension(4), 7);
    assert_eq!(encoded_dimension(16), 11);
    assert_eq!(encoded_dimension(17), 13);
}

#[test]
fn exhaustive_small_inputs() {
    for n in 1..=6 {
        let mut intersecting = 0usize;
        let mut total = 0usize;
        for inst in all_disjointness(n) {
            let ov = encode_disjointness(&inst);
            assert_eq!(ov.n(), n);
            assert_eq!(ov.dimension(), encoded_dimension(n));
            let hit = is_intersecting(&inst).is_some();
            assert_eq!(
                hit,
                has_orthogonal_pair(&ov).is_some(),
                "mismatch on\n{}",
                inst.to_text()
            );
            intersecting += hit as usize;
            total += 1;
        }
        assert_eq!(total, 1 << (2 * n));
        assert_eq!(intersecting, (1 << (2 * n)) - 3usize.pow(n as u32));
    }
}

#[test]
fn random_larger_inputs() {
    let mut rng = seeded_rng(11);
    for round in 0..300 {
        let n = 1 + round % 40;
        let force = [Force::Any, Force::Yes, Force::No][round % 3];
        let inst = random_disjointness(n, force, &mut rng);
        match force {
            Force::Yes => assert!(is_intersecting(&inst).is_some()),
            Force::No => assert!(is_intersecting(&inst).is_none()),
            Force::Any => {}
        }
        let ov = encode_disjointness(&inst);
        assert_eq!(
            is_intersecting(&inst).is_some(),
            has_orthogonal_pair(&ov).is_some()
        );
    }
}

#[test]
fn orthogonal_pairs_sit_on_the_diagonal() {
    let mut rng = seeded_rng(5);
    for _ in 0..100 {
        let inst = random_disjointness(9, Force::Any, &mut rng);
        let ov = encode_disjointness(&inst);
        for i in 0..9 {
            for j in 0..9 {
                let orth = ov.left()[i].is_orthogonal_to(&ov.right()[j]).unwrap();
                let expected = i == j && inst.x().get(i) && inst.y().get(i);
                assert_eq!(orth, expected, "pair ({i}, {j})");
            }
        }
    }
}

#[test]
fn index_codes_are_msb_first() {
    assert_eq!(index_code(0, 5).unwrap(), bits("000"));
    assert_eq!(index_code(1, 5).unwrap(), bits("001"));
    assert_eq!(index_code(4, 5).unwrap(), bits("100"));
    assert!(index_code(5, 5).is_err());
    assert_eq!(index_code(0, 1).unwrap().len(), 0);
}

#[test]
fn single_element_universe() {
    let inst = DisjointnessInstance::new(bits("1"), bits("1")).unwrap();
    let ov = encode_disjointness(&inst);
    assert_eq!(ov.dimension(), 3);
    assert_eq!(ov.to_text(), "1 3\n100\n010\n");
    assert_eq!(has_orthogonal_pair(&ov), Some((0, 0)));
    let inst = DisjointnessInstance::new(bits("1"), bits("0")).unwrap();
    assert_eq!(has_orthogonal_pair(&encode_disjointness(&inst)), None);
}

#[test]
fn two_element_rows() {
    let inst = DisjointnessInstance::new(bits("10"), bits("11")).unwrap();
    let ov = encode_disjointness(&inst);
    assert_eq!(ov.left()[0], bits("10001"));
    assert_eq!(ov.right()[1], bits("01001"));
    assert!(!ov.left()[0].is_orthogonal_to(&ov.right()[1]).unwrap());
    assert_eq!(has_orthogonal_pair(&ov), Some((0, 0)));
}
