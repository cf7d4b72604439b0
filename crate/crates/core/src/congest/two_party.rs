//! Two-party simulation across a cut: Alice runs the nodes on one side, Bob
//! the nodes on the other, and only messages on cut edges pass between
//! them. The ledger counts exactly those bits.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{CongestError, Message, NetworkConfig, NodeProgram, Party};
use crate::gadget::{CutPartition, Side};

/// Bits exchanged between Alice (the left side) and Bob (the right side).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitLedger {
    pub rounds_used: u64,
    pub bits_a_to_b: u64,
    pub bits_b_to_a: u64,
    pub cut_size: usize,
    pub bandwidth: usize,
    /// Entry `r` is the traffic over the cut in round `r + 1`, both directions.
    pub per_round_cut_bits: Vec<u64>,
}

impl BitLedger {
    /// `2 * cut_size * B`: the most a round can carry across the cut.
    pub fn capacity_per_round(&self) -> u64 {
        2 * self.cut_size as u64 * self.bandwidth as u64
    }

    pub fn max_round_bits(&self) -> u64 {
        self.per_round_cut_bits.iter().copied().max().unwrap_or(0)
    }

    pub fn total_bits(&self) -> u64 {
        self.bits_a_to_b + self.bits_b_to_a
    }

    /// The per-round capacity bound and the totals identity both hold.
    pub fn is_consistent(&self) -> bool {
        self.max_round_bits() <= self.capacity_per_round()
            && self.total_bits() == self.per_round_cut_bits.iter().sum::<u64>()
            && self.per_round_cut_bits.len() as u64 == self.rounds_used
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "rounds_used": self.rounds_used,
            "bits_a_to_b": self.bits_a_to_b,
            "bits_b_to_a": self.bits_b_to_a,
            "total_bits": self.total_bits(),
            "cut_size": self.cut_size,
            "bandwidth": self.bandwidth,
            "capacity_per_round": self.capacity_per_round(),
            "max_round_bits": self.max_round_bits(),
            "per_round_cut_bits": self.per_round_cut_bits,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoPartyRun<O> {
    pub ledger: BitLedger,
    pub completed: bool,
    pub outputs: Vec<Option<O>>,
}

fn check_cut(config: &NetworkConfig, cut: &CutPartition) -> Result<(), CongestError> {
    let g = config.graph();
    if cut.side_of.len() != g.vertex_count() {
        return Err(CongestError::Cut(format!(
            "{} side labels for {} vertices",
            cut.side_of.len(),
            g.vertex_count()
        )));
    }
    let crossing: BTreeSet<_> = g
        .edges()
        .into_iter()
        .filter(|&(u, v)| cut.is_cut_edge(u, v))
        .collect();
    let listed: BTreeSet<_> = cut
        .cut_edges
        .iter()
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    if crossing != listed || listed.len() != cut.cut_edges.len() {
        return Err(CongestError::Cut(format!(
            "{} edges cross the partition but {} are listed",
            crossing.len(),
            cut.cut_edges.len()
        )));
    }
    Ok(())
}

/// Runs `program` with the node states split between two parties along
/// `cut` and records every bit that crosses it. Outputs are those of the
/// combined network.
pub fn two_party_simulate<P: NodeProgram>(
    config: &NetworkConfig,
    cut: &CutPartition,
    program: &P,
) -> Result<TwoPartyRun<P::Output>, CongestError> {
    check_cut(config, cut)?;
    let graph = config.graph();
    let mut alice = Party::new(program, graph, cut.vertices_on(Side::Left));
    let mut bob = Party::new(program, graph, cut.vertices_on(Side::Right));
    let mut ledger = BitLedger {
        rounds_used: 0,
        bits_a_to_b: 0,
        bits_b_to_a: 0,
        cut_size: cut.cut_size(),
        bandwidth: config.bandwidth(),
        per_round_cut_bits: Vec::new(),
    };
    let (mut from_alice, mut from_bob): (Vec<Message>, Vec<Message>) = (Vec::new(), Vec::new());
    let mut round = 0;
    while round < config.max_rounds() && !(alice.all_halted() && bob.all_halted()) {
        round += 1;
        alice.send(round, config.bandwidth(), &mut from_alice)?;
        bob.send(round, config.bandwidth(), &mut from_bob)?;
        let mut crossed = 0;
        for msg in from_alice.drain(..) {
            if alice.owns(msg.to) {
                alice.deliver(msg);
            } else {
                ledger.bits_a_to_b += msg.payload.len() as u64;
                crossed += msg.payload.len() as u64;
                bob.deliver(msg);
            }
        }
        for msg in from_bob.drain(..) {
            if bob.owns(msg.to) {
                bob.deliver(msg);
            } else {
                ledger.bits_b_to_a += msg.payload.len() as u64;
                crossed += msg.payload.len() as u64;
                alice.deliver(msg);
            }
        }
        ledger.per_round_cut_bits.push(crossed);
        alice.receive(round);
        bob.receive(round);
    }
    ledger.rounds_used = round;
    let completed = alice.all_halted() && bob.all_halted();
    let mut outputs = vec![None; graph.vertex_count()];
    alice.collect_outputs(&mut outputs);
    bob.collect_outputs(&mut outputs);
    Ok(TwoPartyRun {
        ledger,
        completed,
        outputs,
    })
}

/// `ceil(n_bits / (2 * cut_size * bandwidth))`: the fewest rounds in which
/// `n_bits` can cross a cut of `cut_size` edges. All arguments must be at
/// least 1.
pub fn lower_bound_budget(n_bits: u64, cut_size: u64, bandwidth: u64) -> u64 {
    assert!(
        n_bits >= 1 && cut_size >= 1 && bandwidth >= 1,
        "budget arguments must be positive"
    );
    n_bits.div_ceil(2 * cut_size * bandwidth)
}

#[cfg(test)]
mod tests {
    use super::super::{exact_diameter_program, run, BroadcastBit};
    use super::*;
    use crate::gadget::{build_gadget, cut_partition, GadgetParams};
    use crate::graph::Graph;
    use crate::ov::OvInstance;

    #[test]
    fn budget_arithmetic() {
        assert_eq!(lower_bound_budget(1000, 8, 10), 7);
        assert_eq!(lower_bound_budget(1, 5, 9), 1);
        assert_eq!(lower_bound_budget(160, 8, 10), 1);
        assert_eq!(lower_bound_budget(161, 8, 10), 2);
    }

    #[test]
    fn smallest_gadget_ledger() {
        let g = build_gadget(
            &OvInstance::from_text("1 1\n1\n1\n").unwrap(),
            GadgetParams::new(1, 0, 1).unwrap(),
        );
        let cut = cut_partition(&g).unwrap();
        let n = g.vertex_count();
        let b = super::super::default_bandwidth(n);
        let config = NetworkConfig::new(g.graph().clone(), b).unwrap();
        let program = exact_diameter_program(n, b).unwrap();
        let split = two_party_simulate(&config, &cut, &program).unwrap();
        let whole = run(&config, &program).unwrap();
        assert_eq!(split.outputs, whole.outputs);
        assert_eq!(split.ledger.rounds_used, whole.rounds);
        assert!(split.ledger.is_consistent());
        assert!(split.ledger.total_bits() > 0);
        assert_eq!(split.ledger.cut_size, 2);
    }

    #[test]
    fn mismatched_cut_is_rejected() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let config = NetworkConfig::new(g, 1).unwrap();
        let cut = CutPartition {
            side_of: vec![Side::Left, Side::Right, Side::Right],
            cut_edges: vec![],
        };
        assert!(matches!(
            two_party_simulate(&config, &cut, &BroadcastBit::default()),
            Err(CongestError::Cut(_))
        ));
        let cut = CutPartition {
            side_of: vec![Side::Left, Side::Right, Side::Right],
            cut_edges: vec![(1, 0)],
        };
        let split = two_party_simulate(&config, &cut, &BroadcastBit { bit: true }).unwrap();
        assert_eq!(split.ledger.bits_a_to_b, 1);
        assert_eq!(split.ledger.bits_b_to_a, 0);
        assert_eq!(split.ledger.per_round_cut_bits, vec![1, 0]);
    }
}
