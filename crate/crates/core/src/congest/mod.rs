//! Lockstep synchronous message passing with a per-edge bandwidth cap.
//!
//! Each round has two steps. Every active node first fills an outbox, one
//! optional message per port, from its current state. All messages are then
//! delivered at once, and every active node reads its inbox. Messages are
//! explicit bit strings, and the trace records their exact lengths.
//!
//! Port `k` of a node is its `k`-th neighbour in increasing id order.

mod diameter;
mod two_party;

use std::fmt::Debug;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitVector;
use crate::graph::{Graph, VertexId};

pub use diameter::{default_bandwidth, exact_diameter_program, DiameterOutput, ExactDiameter};
pub use two_party::{lower_bound_budget, two_party_simulate, BitLedger, TwoPartyRun};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongestError {
    #[error("protocol violation: node {node} sent {bits} bits on port {port} in round {round}, limit is {limit}")]
    ProtocolViolation {
        node: VertexId,
        round: u64,
        port: usize,
        bits: usize,
        limit: usize,
    },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cut does not match the graph: {0}")]
    Cut(String),
}

/// The network a program runs on: a port-numbered graph, the bandwidth `B`
/// in bits per edge per direction per round, and a round cap.
#[derive(Debug, Clone)]
pub struct NetworkConfig {
    graph: Graph,
    bandwidth: usize,
    max_rounds: u64,
}

impl NetworkConfig {
    /// Uses the default round cap `N^2 + 2N + 16`.
    pub fn new(graph: Graph, bandwidth: usize) -> Result<Self, CongestError> {
        let n = graph.vertex_count() as u64;
        Self::with_max_rounds(graph, bandwidth, n * n + 2 * n + 16)
    }

    pub fn with_max_rounds(
        graph: Graph,
        bandwidth: usize,
        max_rounds: u64,
    ) -> Result<Self, CongestError> {
        if bandwidth == 0 {
            return Err(CongestError::Config(
                "bandwidth must be at least 1 bit".into(),
            ));
        }
        Ok(Self {
            graph,
            bandwidth,
            max_rounds,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn max_rounds(&self) -> u64 {
        self.max_rounds
    }
}

/// What a node knows about itself: its id, its degree and the vertex count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeContext {
    pub id: VertexId,
    pub degree: usize,
    pub n: usize,
}

/// Result of a node's receive step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step<O> {
    pub output: Option<O>,
    pub halt: bool,
}

impl<O> Step<O> {
    pub fn idle() -> Self {
        Self {
            output: None,
            halt: false,
        }
    }
}

/// A deterministic node program. The same value drives every node; per-node
/// data lives in `State`.
pub trait NodeProgram {
    type State;
    type Output: Clone + PartialEq + Debug + Serialize;

    fn init(&self, ctx: &NodeContext) -> Self::State;

    /// Fills `outbox` (one slot per port, all `None` on entry) for `round`.
    fn send(
        &self,
        state: &mut Self::State,
        ctx: &NodeContext,
        round: u64,
        outbox: &mut [Option<BitVector>],
    );

    /// Consumes the messages delivered in `round`, indexed by port.
    fn receive(
        &self,
        state: &mut Self::State,
        ctx: &NodeContext,
        round: u64,
        inbox: &[Option<BitVector>],
    ) -> Step<Self::Output>;
}

/// Bits sent over one directed edge in one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeBits {
    pub from: VertexId,
    pub to: VertexId,
    pub bits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundTrace<O> {
    pub rounds: u64,
    /// `true` if every node halted within the round cap.
    pub completed: bool,
    pub bandwidth: usize,
    /// Entry `r` lists the directed edges used in round `r + 1`, in sender
    /// then port order. Edges that carried nothing are omitted.
    pub per_round_edge_bits: Vec<Vec<EdgeBits>>,
    /// Last output of each node, `None` if it never produced one.
    pub outputs: Vec<Option<O>>,
}

#[derive(Serialize)]
struct RoundJson<'a> {
    round: u64,
    bits: usize,
    edges: &'a [EdgeBits],
}

impl<O: Clone + Serialize> RoundTrace<O> {
    pub fn total_bits(&self) -> usize {
        self.per_round_edge_bits
            .iter()
            .flatten()
            .map(|e| e.bits)
            .sum()
    }

    pub fn total_messages(&self) -> usize {
        self.per_round_edge_bits.iter().map(Vec::len).sum()
    }

    pub fn max_edge_bits(&self) -> usize {
        self.per_round_edge_bits
            .iter()
            .flatten()
            .map(|e| e.bits)
            .max()
            .unwrap_or(0)
    }

    /// Structured export. Rounds without traffic are left out of `rounds_detail`.
    pub fn to_json_value(&self) -> serde_json::Value {
        let detail: Vec<RoundJson> = self
            .per_round_edge_bits
            .iter()
            .enumerate()
            .filter(|(_, edges)| !edges.is_empty())
            .map(|(r, edges)| RoundJson {
                round: r as u64 + 1,
                bits: edges.iter().map(|e| e.bits).sum(),
                edges,
            })
            .collect();
        serde_json::json!({
            "rounds": self.rounds,
            "completed": self.completed,
            "bandwidth": self.bandwidth,
            "total_bits": self.total_bits(),
            "total_messages": self.total_messages(),
            "rounds_detail": detail,
            "outputs": self.outputs,
        })
    }
}

/// A message in flight, addressed by global ids and ports.
#[derive(Debug, Clone)]
pub(crate) struct Message {
    pub from: VertexId,
    pub to: VertexId,
    pub to_port: usize,
    pub payload: BitVector,
}

/// The states of a subset of the nodes, with the ability to run their half
/// of a round. A full run uses one party holding every node.
pub(crate) struct Party<'a, P: NodeProgram> {
    program: &'a P,
    graph: &'a Graph,
    nodes: Vec<VertexId>,
    local: Vec<Option<usize>>,
    ctx: Vec<NodeContext>,
    states: Vec<P::State>,
    halted: Vec<bool>,
    outputs: Vec<Option<P::Output>>,
    inbox: Vec<Vec<Option<BitVector>>>,
    outbox: Vec<Option<BitVector>>,
}

impl<'a, P: NodeProgram> Party<'a, P> {
    pub fn new(program: &'a P, graph: &'a Graph, nodes: Vec<VertexId>) -> Self {
        let n = graph.vertex_count();
        let mut local = vec![None; n];
        for (idx, &v) in nodes.iter().enumerate() {
            local[v] = Some(idx);
        }
        let ctx: Vec<NodeContext> = nodes
            .iter()
            .map(|&id| NodeContext {
                id,
                degree: graph.degree(id),
                n,
            })
            .collect();
        let states = ctx.iter().map(|c| program.init(c)).collect();
        let inbox = ctx.iter().map(|c| vec![None; c.degree]).collect();
        Self {
            program,
            graph,
            local,
            states,
            halted: vec![false; nodes.len()],
            outputs: vec![None; nodes.len()],
            inbox,
            outbox: Vec::new(),
            ctx,
            nodes,
        }
    }

    pub fn all_halted(&self) -> bool {
        self.halted.iter().all(|&h| h)
    }

    pub fn owns(&self, v: VertexId) -> bool {
        self.local[v].is_some()
    }

    /// Runs the send step of every active node and appends the messages.
    pub fn send(
        &mut self,
        round: u64,
        bandwidth: usize,
        out: &mut Vec<Message>,
    ) -> Result<(), CongestError> {
        for idx in 0..self.nodes.len() {
            if self.halted[idx] {
                continue;
            }
            let ctx = self.ctx[idx];
            self.outbox.clear();
            self.outbox.resize(ctx.degree, None);
            self.program
                .send(&mut self.states[idx], &ctx, round, &mut self.outbox);
            for (port, slot) in self.outbox.iter_mut().enumerate() {
                let Some(payload) = slot.take() else { continue };
                if payload.len() > bandwidth {
                    return Err(CongestError::ProtocolViolation {
                        node: ctx.id,
                        round,
                        port,
                        bits: payload.len(),
                        limit: bandwidth,
                    });
                }
                let to = self.graph.neighbors(ctx.id)[port];
                let to_port = self
                    .graph
                    .port_to(to, ctx.id)
                    .expect("neighbour lists are symmetric");
                out.push(Message {
                    from: ctx.id,
                    to,
                    to_port,
                    payload,
                });
            }
        }
        Ok(())
    }

    /// Places a message for one of this party's nodes. Halted nodes drop it.
    pub fn deliver(&mut self, msg: Message) {
        let idx = self.local[msg.to].expect("message routed to the wrong party");
        if !self.halted[idx] {
            self.inbox[idx][msg.to_port] = Some(msg.payload);
        }
    }

    pub fn receive(&mut self, round: u64) {
        for idx in 0..self.nodes.len() {
            if self.halted[idx] {
                continue;
            }
            let ctx = self.ctx[idx];
            let step = self
                .program
                .receive(&mut self.states[idx], &ctx, round, &self.inbox[idx]);
            self.inbox[idx].iter_mut().for_each(|m| *m = None);
            if step.output.is_some() {
                self.outputs[idx] = step.output;
            }
            self.halted[idx] = step.halt;
        }
    }

    /// Writes this party's outputs into a global table.
    pub fn collect_outputs(self, into: &mut [Option<P::Output>]) {
        for (idx, out) in self.outputs.into_iter().enumerate() {
            into[self.nodes[idx]] = out;
        }
    }
}

/// Executes `program` on the network until every node halts or the round
/// cap is reached.
pub fn run<P: NodeProgram>(
    config: &NetworkConfig,
    program: &P,
) -> Result<RoundTrace<P::Output>, CongestError> {
    let graph = config.graph();
    let n = graph.vertex_count();
    let mut party = Party::new(program, graph, (0..n).collect());
    let mut per_round = Vec::new();
    let mut messages = Vec::new();
    let mut rounds = 0;
    while rounds < config.max_rounds() && !party.all_halted() {
        rounds += 1;
        messages.clear();
        party.send(rounds, config.bandwidth(), &mut messages)?;
        per_round.push(
            messages
                .iter()
                .map(|m| EdgeBits {
                    from: m.from,
                    to: m.to,
                    bits: m.payload.len(),
                })
                .collect(),
        );
        for msg in messages.drain(..) {
            party.deliver(msg);
        }
        party.receive(rounds);
    }
    let completed = party.all_halted();
    let mut outputs = vec![None; n];
    party.collect_outputs(&mut outputs);
    Ok(RoundTrace {
        rounds,
        completed,
        bandwidth: config.bandwidth(),
        per_round_edge_bits: per_round,
        outputs,
    })
}

/// Node 0 sends one bit; every node outputs it on first receipt, forwards it
/// on its other ports the next round, and halts.
#[derive(Debug, Clone, Copy, Default)]
pub struct BroadcastBit {
    pub bit: bool,
}

#[derive(Debug, Clone, Default)]
pub struct BroadcastState {
    pending: Option<(bool, Option<usize>)>,
    done: bool,
}

impl NodeProgram for BroadcastBit {
    type State = BroadcastState;
    type Output = bool;

    fn init(&self, ctx: &NodeContext) -> BroadcastState {
        BroadcastState {
            pending: (ctx.id == 0).then_some((self.bit, None)),
            done: false,
        }
    }

    fn send(
        &self,
        state: &mut BroadcastState,
        _ctx: &NodeContext,
        _round: u64,
        outbox: &mut [Option<BitVector>],
    ) {
        if let Some((bit, from)) = state.pending.take() {
            for (port, slot) in outbox.iter_mut().enumerate() {
                if Some(port) != from {
                    *slot = Some(BitVector::new(vec![bit]));
                }
            }
            state.done = true;
        }
    }

    fn receive(
        &self,
        state: &mut BroadcastState,
        ctx: &NodeContext,
        _round: u64,
        inbox: &[Option<BitVector>],
    ) -> Step<bool> {
        if state.done {
            return Step {
                output: (ctx.id == 0).then_some(self.bit),
                halt: true,
            };
        }
        match inbox
            .iter()
            .enumerate()
            .find_map(|(port, m)| m.as_ref().map(|m| (port, m.get(0))))
        {
            Some((port, bit)) if ctx.degree > 1 => {
                state.pending = Some((bit, Some(port)));
                Step {
                    output: Some(bit),
                    halt: false,
                }
            }
            Some((_, bit)) => Step {
                output: Some(bit),
                halt: true,
            },
            None => Step::idle(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    struct Oversized;

    impl NodeProgram for Oversized {
        type State = ();
        type Output = ();
        fn init(&self, _: &NodeContext) {}
        fn send(
            &self,
            _: &mut (),
            ctx: &NodeContext,
            round: u64,
            outbox: &mut [Option<BitVector>],
        ) {
            if ctx.id == 1 && round == 3 {
                outbox[0] = Some(BitVector::zeros(5));
            }
        }
        fn receive(
            &self,
            _: &mut (),
            _: &NodeContext,
            _: u64,
            _: &[Option<BitVector>],
        ) -> Step<()> {
            Step::idle()
        }
    }

    #[test]
    fn broadcast_on_a_path_of_three() {
        let config = NetworkConfig::new(path(3), 1).unwrap();
        let trace = run(&config, &BroadcastBit { bit: true }).unwrap();
        assert_eq!(trace.rounds, 2);
        assert_eq!(trace.total_messages(), 2);
        assert_eq!(trace.total_bits(), 2);
        assert!(trace.completed);
        assert_eq!(trace.outputs, vec![Some(true); 3]);
        assert_eq!(
            trace.per_round_edge_bits[0],
            vec![EdgeBits {
                from: 0,
                to: 1,
                bits: 1
            }]
        );
    }

    #[test]
    fn oversized_message_is_a_violation() {
        let config = NetworkConfig::new(path(3), 4).unwrap();
        assert_eq!(
            run(&config, &Oversized).unwrap_err(),
            CongestError::ProtocolViolation {
                node: 1,
                round: 3,
                port: 0,
                bits: 5,
                limit: 4
            }
        );
        assert!(run(&NetworkConfig::new(path(3), 5).unwrap(), &Oversized).is_ok());
    }

    #[test]
    fn round_cap_stops_a_silent_program() {
        let config = NetworkConfig::with_max_rounds(path(2), 8, 7).unwrap();
        let trace = run(&config, &Oversized).unwrap();
        assert_eq!(trace.rounds, 7);
        assert!(!trace.completed);
        assert!(NetworkConfig::new(path(2), 0).is_err());
        assert_eq!(
            NetworkConfig::new(path(4), 1).unwrap().max_rounds(),
            16 + 8 + 16
        );
    }

    #[test]
    fn trace_json_has_stable_fields() {
        let trace = run(
            &NetworkConfig::new(path(3), 1).unwrap(),
            &BroadcastBit { bit: false },
        )
        .unwrap();
        let v = trace.to_json_value();
        assert_eq!(v["rounds"], 2);
        assert_eq!(v["total_bits"], 2);
        assert_eq!(v["rounds_detail"][1]["edges"][0]["from"], 1);
        assert_eq!(v["outputs"][2], false);
    }
}
