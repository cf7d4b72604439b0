//! A naive exact-diameter program: one BFS phase per source, then a
//! convergecast of the eccentricities over the first BFS tree and a
//! broadcast of the maximum.
//!
//! Timing for `N` nodes. Phase `t` occupies rounds `tN + 1 ..= tN + N` with
//! node `t` as the source. A node at depth `k` of the phase-0 tree sends its
//! aggregate to its parent in round `N^2 + N - k`. The root sends the
//! diameter down in round `N^2 + N`, and each node forwards it one round
//! after receiving it. Every node has halted by round `N^2 + 2N - 1`.
//!
//! Messages are a 2-bit tag (`00` distance, `01` aggregate, `10` diameter)
//! followed by a value of `ceil(log2(N + 1))` bits, where the value `N`
//! stands for an infinite distance.

use serde::{Deserialize, Serialize};

use super::{CongestError, NodeContext, NodeProgram, Step};
use crate::bits::BitVector;
use crate::ov::ceil_log2;

const TAG_DIST: u64 = 0b00;
const TAG_UP: u64 = 0b01;
const TAG_DOWN: u64 = 0b10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiameterOutput {
    Finite(u32),
    Infinite,
}

/// `ceil(log2(N + 1)) + 2`: one distance value plus the tag.
pub fn default_bandwidth(n: usize) -> usize {
    ceil_log2(n + 1) + 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactDiameter {
    n: usize,
    width: usize,
}

/// The program for `n` nodes under bandwidth `bandwidth`.
pub fn exact_diameter_program(n: usize, bandwidth: usize) -> Result<ExactDiameter, CongestError> {
    if n == 0 {
        return Err(CongestError::Config(
            "the diameter program needs at least one node".into(),
        ));
    }
    let width = ceil_log2(n + 1);
    if bandwidth < width + 2 {
        return Err(CongestError::Config(format!(
            "bandwidth {bandwidth} is below the {} bits a message needs for {n} nodes",
            width + 2
        )));
    }
    Ok(ExactDiameter { n, width })
}

#[derive(Debug, Clone, Default)]
pub struct DiameterState {
    phase_dist: Option<u32>,
    announce: bool,
    ecc: u32,
    depth: Option<u32>,
    parent: Option<usize>,
    aggregate: u32,
    children: Vec<usize>,
    down: Option<u32>,
    finished: bool,
}

impl ExactDiameter {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Bits per message.
    pub fn message_bits(&self) -> usize {
        self.width + 2
    }

    fn encode(&self, tag: u64, value: u32) -> BitVector {
        let mut msg = BitVector::from_uint(tag, 2);
        msg.extend_from(&BitVector::from_uint(value as u64, self.width));
        msg
    }

    fn decode(&self, msg: &BitVector) -> (u64, u32) {
        let tag = (msg.get(0) as u64) << 1 | msg.get(1) as u64;
        let value = msg
            .iter()
            .skip(2)
            .fold(0u32, |acc, b| (acc << 1) | b as u32);
        (tag, value)
    }

    fn infinity(&self) -> u32 {
        self.n as u32
    }

    fn bfs_rounds(&self) -> u64 {
        (self.n * self.n) as u64
    }

    /// Phase index and position `1..=N` within it, for BFS rounds.
    fn phase_of(&self, round: u64) -> Option<(usize, usize)> {
        (round <= self.bfs_rounds()).then(|| {
            (
                ((round - 1) / self.n as u64) as usize,
                ((round - 1) % self.n as u64) as usize + 1,
            )
        })
    }

    fn result(&self, value: u32) -> DiameterOutput {
        if value >= self.infinity() {
            DiameterOutput::Infinite
        } else {
            DiameterOutput::Finite(value)
        }
    }
}

impl NodeProgram for ExactDiameter {
    type State = DiameterState;
    type Output = DiameterOutput;

    fn init(&self, ctx: &NodeContext) -> DiameterState {
        debug_assert_eq!(ctx.n, self.n, "program built for a different vertex count");
        DiameterState::default()
    }

    fn send(
        &self,
        s: &mut DiameterState,
        ctx: &NodeContext,
        round: u64,
        outbox: &mut [Option<BitVector>],
    ) {
        if let Some((t, pos)) = self.phase_of(round) {
            if pos == 1 {
                s.phase_dist = (ctx.id == t).then_some(0);
                s.announce = ctx.id == t;
            }
            if std::mem::take(&mut s.announce) {
                let msg = self.encode(
                    TAG_DIST,
                    s.phase_dist.expect("announced nodes have a distance"),
                );
                outbox.iter_mut().for_each(|slot| *slot = Some(msg.clone()));
            }
            return;
        }
        let up_round = |depth: u32| self.bfs_rounds() + self.n as u64 - depth as u64;
        if let (Some(depth), Some(parent)) = (s.depth, s.parent) {
            if round == up_round(depth) {
                outbox[parent] = Some(self.encode(TAG_UP, s.aggregate));
            }
        }
        if let Some(value) = s.down.take() {
            let msg = self.encode(TAG_DOWN, value);
            for &port in &s.children {
                outbox[port] = Some(msg.clone());
            }
            s.finished = true;
        }
    }

    fn receive(
        &self,
        s: &mut DiameterState,
        ctx: &NodeContext,
        round: u64,
        inbox: &[Option<BitVector>],
    ) -> Step<DiameterOutput> {
        if s.finished {
            return Step {
                output: None,
                halt: true,
            };
        }
        let mut step = Step::idle();
        if let Some((t, pos)) = self.phase_of(round) {
            if s.phase_dist.is_none() {
                let best = inbox
                    .iter()
                    .enumerate()
                    .filter_map(|(port, m)| m.as_ref().map(|m| (self.decode(m).1, port)))
                    .min();
                if let Some((d, port)) = best {
                    s.phase_dist = Some(d + 1);
                    s.announce = true;
                    if t == 0 {
                        s.depth = Some(d + 1);
                        s.parent = Some(port);
                    }
                }
            }
            if t == 0 && ctx.id == 0 {
                s.depth = Some(0);
            }
            if pos == self.n {
                s.ecc = s.ecc.max(s.phase_dist.unwrap_or(self.infinity()));
                if t + 1 == self.n {
                    s.aggregate = s.ecc;
                }
            }
        } else {
            for (port, msg) in inbox.iter().enumerate() {
                let Some(msg) = msg else { continue };
                match self.decode(msg) {
                    (TAG_UP, value) => {
                        s.aggregate = s.aggregate.max(value);
                        s.children.push(port);
                    }
                    (TAG_DOWN, value) => {
                        step.output = Some(self.result(value));
                        s.down = Some(value);
                    }
                    _ => {}
                }
            }
        }
        if ctx.id == 0 && round == self.bfs_rounds() + self.n as u64 - 1 {
            step.output = Some(self.result(s.aggregate));
            s.down = Some(s.aggregate);
        }
        if s.down.is_some() && s.children.is_empty() {
            s.down = None;
            step.halt = true;
        }
        step
    }
}

#[cfg(test)]
mod tests {
    use super::super::{run, NetworkConfig};
    use super::*;
    use crate::graph::Graph;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges).unwrap()
    }

    fn outputs(g: Graph) -> (Vec<Option<DiameterOutput>>, u64) {
        let n = g.vertex_count();
        let b = default_bandwidth(n);
        let trace = run(
            &NetworkConfig::new(g, b).unwrap(),
            &exact_diameter_program(n, b).unwrap(),
        )
        .unwrap();
        assert!(trace.max_edge_bits() <= b);
        (trace.outputs, trace.rounds)
    }

    #[test]
    fn path_of_three_outputs_two() {
        let (out, rounds) = outputs(graph(3, &[(0, 1), (1, 2)]));
        assert_eq!(out, vec![Some(DiameterOutput::Finite(2)); 3]);
        assert!(rounds < 9 + 6);
    }

    #[test]
    fn single_node_and_edge() {
        assert_eq!(
            outputs(graph(1, &[])).0,
            vec![Some(DiameterOutput::Finite(0))]
        );
        assert_eq!(
            outputs(graph(2, &[(0, 1)])).0,
            vec![Some(DiameterOutput::Finite(1)); 2]
        );
    }

    #[test]
    fn star_and_cycle() {
        let (out, _) = outputs(graph(5, &[(2, 0), (2, 1), (2, 3), (2, 4)]));
        assert_eq!(out, vec![Some(DiameterOutput::Finite(2)); 5]);
        let (out, _) = outputs(graph(
            7,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0)],
        ));
        assert_eq!(out, vec![Some(DiameterOutput::Finite(3)); 7]);
    }

    #[test]
    fn disconnected_root_component_reports_infinity() {
        let (out, _) = outputs(graph(4, &[(0, 1), (2, 3)]));
        assert_eq!(out[0], Some(DiameterOutput::Infinite));
        assert_eq!(out[1], Some(DiameterOutput::Infinite));
        assert_eq!(out[2], None);
    }

    #[test]
    fn bandwidth_must_fit_a_message() {
        assert_eq!(default_bandwidth(10), 6);
        assert!(exact_diameter_program(10, 5).is_err());
        assert_eq!(exact_diameter_program(10, 6).unwrap().message_bits(), 6);
        assert!(exact_diameter_program(0, 8).is_err());
    }
}
