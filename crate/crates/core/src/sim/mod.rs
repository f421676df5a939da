//! Round-synchronous CONGEST simulator.
//!
//! A [`Protocol`] describes what one node does: build its state in `init`
//! (which may already send the round-1 messages) and react to its inbox in
//! `step`. The engine delivers everything sent during round `r` at the start
//! of round `r + 1`, charges every message against the bit budget, and stops
//! at quiescence: a round in which nothing was delivered and no node reports
//! pending work.

mod coins;
mod transcript;

use std::collections::hash_map::DefaultHasher;
use std::fmt::Debug;
use std::hash::{Hash, Hasher};

pub use coins::Coins;
pub(crate) use coins::mix64;
pub use transcript::{LogEntry, RoundReport, Transcript};

use crate::graph::{EdgeId, Multigraph, NodeId};
use crate::util::{bits_for, ceil_log2};

/// Field widths used to price messages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Widths {
    /// Bits for a node id.
    pub node: u32,
    /// Bits for an edge id or an edge count.
    pub edge: u32,
}

impl Widths {
    pub fn of(g: &Multigraph) -> Self {
        Self {
            node: bits_for(g.n().saturating_sub(1) as u64),
            edge: bits_for(g.max_edge_id().max(g.m() as u32) as u64),
        }
    }
}

pub trait Message: Clone + Debug + Hash {
    fn bits(&self, w: &Widths) -> u32;
}

/// The default bit budget `2 * ceil(log2 n) + 16`.
pub fn default_budget(n: usize) -> u32 {
    2 * ceil_log2(n.max(1) as u64) + 16
}

/// One end of an incident edge as seen by a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Port {
    pub edge: EdgeId,
    /// Position of the edge in the graph's edge list.
    pub pos: usize,
    pub peer: NodeId,
    /// Index of the same edge in the peer's port list.
    pub back: usize,
}

/// A node's window onto the network for one round.
pub struct Io<'a, M> {
    node: NodeId,
    round: u64,
    n: usize,
    ports: &'a [Port],
    inbox: &'a [(usize, M)],
    out: &'a mut Vec<(usize, M)>,
    coins: &'a Coins,
}

impl<'a, M: Clone> Io<'a, M> {
    pub fn node(&self) -> NodeId {
        self.node
    }

    /// Current round; `init` runs in round 0.
    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ports(&self) -> &'a [Port] {
        self.ports
    }

    /// Messages delivered this round as `(port, msg)`, sorted by port.
    pub fn inbox(&self) -> &'a [(usize, M)] {
        self.inbox
    }

    pub fn coins(&self) -> &'a Coins {
        self.coins
    }

    /// Queues `msg` on `port` for delivery next round. At most one message per port per round.
    pub fn send(&mut self, port: usize, msg: M) {
        self.out.push((port, msg));
    }

    pub fn send_where<F: Fn(usize, &Port) -> bool>(&mut self, msg: &M, keep: F) {
        for (i, p) in self.ports.iter().enumerate() {
            if keep(i, p) {
                self.out.push((i, msg.clone()));
            }
        }
    }
}

pub trait Protocol {
    type State;
    type Msg: Message;

    fn init(&self, io: &mut Io<'_, Self::Msg>) -> Self::State;

    fn step(&self, state: &mut Self::State, io: &mut Io<'_, Self::Msg>);

    /// Keeps the run alive without traffic (e.g. a node waiting on a local timer).
    fn busy(&self, _state: &Self::State) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub bit_budget: u32,
    pub max_rounds: u64,
    pub seed: u64,
    pub record_log: bool,
}

impl SimConfig {
    pub fn for_graph(g: &Multigraph) -> Self {
        Self { bit_budget: default_budget(g.n()), max_rounds: 1 << 20, seed: 0, record_log: false }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_log(mut self) -> Self {
        self.record_log = true;
        self
    }
}

/// Outcome of one protocol run.
pub struct Run<S> {
    pub states: Vec<S>,
    pub transcript: Transcript,
}

/// A simulated network over a fixed graph; accumulates a transcript across runs.
pub struct Sim<'g> {
    g: &'g Multigraph,
    ports: Vec<Vec<Port>>,
    offsets: Vec<usize>,
    config: SimConfig,
    widths: Widths,
    coins: Coins,
    total: Transcript,
}

impl<'g> Sim<'g> {
    pub fn new(g: &'g Multigraph, config: SimConfig) -> Self {
        let mut ports: Vec<Vec<Port>> = (0..g.n())
            .map(|u| {
                g.incident(u)
                    .iter()
                    .map(|inc| Port { edge: inc.edge, pos: inc.pos, peer: inc.peer, back: usize::MAX })
                    .collect()
            })
            .collect();
        // pair the two ends of every edge by position
        let mut first_end = vec![None; g.m()];
        for u in 0..g.n() {
            for i in 0..ports[u].len() {
                let pos = ports[u][i].pos;
                match first_end[pos] {
                    None => first_end[pos] = Some((u, i)),
                    Some((w, j)) => {
                        ports[u][i].back = j;
                        ports[w][j].back = i;
                    }
                }
            }
        }
        let mut offsets = Vec::with_capacity(g.n() + 1);
        let mut acc = 0;
        for list in &ports {
            offsets.push(acc);
            acc += list.len();
        }
        offsets.push(acc);
        let coins = Coins::new(config.seed);
        let total = Transcript { log: config.record_log.then(Vec::new), ..Default::default() };
        Self { g, ports, offsets, widths: Widths::of(g), coins, config, total }
    }

    pub fn with_defaults(g: &'g Multigraph) -> Self {
        Self::new(g, SimConfig::for_graph(g))
    }

    pub fn graph(&self) -> &'g Multigraph {
        self.g
    }

    pub fn ports(&self, u: NodeId) -> &[Port] {
        &self.ports[u]
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn widths(&self) -> Widths {
        self.widths
    }

    pub fn coins(&self) -> &Coins {
        &self.coins
    }

    /// Everything executed on this simulator so far.
    pub fn transcript(&self) -> &Transcript {
        &self.total
    }

    /// Records work done on another simulator over the same network (e.g. after renaming).
    pub fn absorb(&mut self, other: &Transcript) {
        self.total.absorb(other);
    }

    pub fn run<P: Protocol>(&mut self, p: &P) -> Run<P::State> {
        let n = self.g.n();
        let mut t = Transcript { runs: 1, log: self.config.record_log.then(Vec::new), ..Default::default() };
        let mut stamps = vec![u64::MAX; self.offsets[n]];
        let mut per_edge = vec![0u64; self.g.m()];
        let mut inbox: Vec<Vec<(usize, P::Msg)>> = vec![Vec::new(); n];
        let mut next: Vec<Vec<(usize, P::Msg)>> = vec![Vec::new(); n];
        let mut out = Vec::new();

        let mut states = Vec::with_capacity(n);
        for u in 0..n {
            let mut io = self.io(u, 0, &[], &mut out);
            states.push(p.init(&mut io));
            self.dispatch(u, 1, &mut out, &mut next, &mut stamps, &mut per_edge, &mut t);
        }

        let mut round = 0;
        loop {
            let traffic = next.iter().any(|b| !b.is_empty());
            if !traffic && !states.iter().any(|s| p.busy(s)) {
                break;
            }
            if round >= self.config.max_rounds {
                t.timeout = true;
                break;
            }
            round += 1;
            std::mem::swap(&mut inbox, &mut next);
            for b in &mut inbox {
                b.sort_by_key(|(port, _)| *port);
            }
            for u in 0..n {
                let mut io = self.io(u, round, &inbox[u], &mut out);
                p.step(&mut states[u], &mut io);
                self.dispatch(u, round + 1, &mut out, &mut next, &mut stamps, &mut per_edge, &mut t);
            }
            for b in &mut inbox {
                b.clear();
            }
        }
        t.rounds = round;
        t.max_congestion = per_edge.iter().copied().max().unwrap_or(0);
        if let Some(log) = t.log.as_mut() {
            log.sort();
        }
        self.total.absorb(&t);
        Run { states, transcript: t }
    }

    fn io<'a, M>(&'a self, u: NodeId, round: u64, inbox: &'a [(usize, M)], out: &'a mut Vec<(usize, M)>) -> Io<'a, M> {
        Io { node: u, round, n: self.g.n(), ports: &self.ports[u], inbox, out, coins: &self.coins }
    }

    #[allow(clippy::too_many_arguments)]
    fn dispatch<M: Message>(
        &self,
        u: NodeId,
        arrival: u64,
        out: &mut Vec<(usize, M)>,
        next: &mut [Vec<(usize, M)>],
        stamps: &mut [u64],
        per_edge: &mut [u64],
        t: &mut Transcript,
    ) {
        for (port, msg) in out.drain(..) {
            let slot = self.offsets[u] + port;
            assert!(stamps[slot] != arrival, "node {u} sent twice on port {port} in one round");
            stamps[slot] = arrival;
            let pr = self.ports[u][port];
            let bits = msg.bits(&self.widths);
            t.messages += 1;
            t.bits += bits as u64;
            t.max_bits = t.max_bits.max(bits);
            if bits > self.config.bit_budget {
                t.budget_violated = true;
            }
            per_edge[pr.pos] += 1;
            let mut h = DefaultHasher::new();
            (arrival, pr.edge, u, &msg).hash(&mut h);
            t.digest = t.digest.wrapping_add(mix64(h.finish()));
            if let Some(log) = t.log.as_mut() {
                log.push(LogEntry { round: arrival, edge: pr.edge, src: u, dst: pr.peer, bits });
            }
            next[pr.peer].push((pr.back, msg));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GeneratorSpec};

    fn gen(s: &str) -> Multigraph {
        generate(&s.parse::<GeneratorSpec>().unwrap(), 0).unwrap()
    }

    /// Flood a token from node 0; each node forwards once to ports it did not hear from.
    struct Flood;

    #[derive(Clone, Debug, Hash)]
    struct Token;

    impl Message for Token {
        fn bits(&self, _: &Widths) -> u32 {
            1
        }
    }

    impl Protocol for Flood {
        type State = Option<u64>;
        type Msg = Token;

        fn init(&self, io: &mut Io<'_, Token>) -> Option<u64> {
            if io.node() == 0 {
                io.send_where(&Token, |_, _| true);
                Some(0)
            } else {
                None
            }
        }

        fn step(&self, s: &mut Option<u64>, io: &mut Io<'_, Token>) {
            if s.is_none() && !io.inbox().is_empty() {
                *s = Some(io.round());
                let heard: Vec<usize> = io.inbox().iter().map(|(p, _)| *p).collect();
                io.send_where(&Token, |i, _| !heard.contains(&i));
            }
        }
    }

    struct Silent;

    impl Protocol for Silent {
        type State = ();
        type Msg = Token;
        fn init(&self, _: &mut Io<'_, Token>) {}
        fn step(&self, _: &mut (), _: &mut Io<'_, Token>) {}
    }

    #[test]
    fn flood_on_c6_takes_eccentricity_rounds() {
        let g = gen("cycle(6)");
        let mut sim = Sim::new(&g, SimConfig::for_graph(&g).with_log());
        let run = sim.run(&Flood);
        assert_eq!(run.transcript.rounds, 3);
        assert!(run.states.iter().all(Option::is_some));
        // 0 sends 2, nodes 1,5 send 1 each, nodes 2,4 send 1 each, node 3 hears both and stays silent
        assert_eq!(run.transcript.messages, 6);
        assert_eq!(run.transcript.log.as_ref().unwrap().len(), 6);
        assert_eq!(run.transcript.max_congestion, 1);
    }

    #[test]
    fn silent_protocol_is_zero() {
        let g = gen("cycle(6)");
        let run = Sim::with_defaults(&g).run(&Silent);
        assert_eq!(run.transcript.metrics(), RoundReport { rounds: 0, messages: 0, bits: 0, max_congestion: 0 });
    }

    #[test]
    fn deterministic_transcripts() {
        let g = gen("petersen");
        let a = Sim::new(&g, SimConfig::for_graph(&g).with_log()).run(&Flood).transcript;
        let b = Sim::new(&g, SimConfig::for_graph(&g).with_log()).run(&Flood).transcript;
        assert_eq!(a, b);
        assert_eq!(a.log_lines(), b.log_lines());
    }

    /// Echoes the round number it last heard; sends forever so timeout triggers.
    struct Echo;

    #[derive(Clone, Debug, Hash)]
    struct Stamp(u64);

    impl Message for Stamp {
        fn bits(&self, _: &Widths) -> u32 {
            64
        }
    }

    impl Protocol for Echo {
        type State = Vec<(u64, u64)>;
        type Msg = Stamp;

        fn init(&self, io: &mut Io<'_, Stamp>) -> Self::State {
            io.send_where(&Stamp(0), |_, _| true);
            Vec::new()
        }

        fn step(&self, s: &mut Self::State, io: &mut Io<'_, Stamp>) {
            for (_, Stamp(r)) in io.inbox() {
                s.push((io.round(), *r));
            }
            let r = io.round();
            io.send_where(&Stamp(r), |_, _| true);
        }
    }

    #[test]
    fn causality_timeout_and_budget() {
        let g = gen("cycle(4)");
        let mut cfg = SimConfig::for_graph(&g);
        cfg.max_rounds = 5;
        let run = Sim::new(&g, cfg).run(&Echo);
        assert!(run.transcript.timeout);
        assert!(run.transcript.budget_violated);
        assert_eq!(run.transcript.rounds, 5);
        for s in &run.states {
            // a message stamped r was sent in round r and can only be read in round r + 1
            assert!(s.iter().all(|&(now, sent)| sent + 1 == now));
        }
    }

    #[test]
    #[should_panic(expected = "sent twice")]
    fn double_send_panics() {
        struct Twice;
        impl Protocol for Twice {
            type State = ();
            type Msg = Token;
            fn init(&self, io: &mut Io<'_, Token>) {
                if !io.ports().is_empty() {
                    io.send(0, Token);
                    io.send(0, Token);
                }
            }
            fn step(&self, _: &mut (), _: &mut Io<'_, Token>) {}
        }
        let g = gen("cycle(3)");
        Sim::with_defaults(&g).run(&Twice);
    }

    #[test]
    fn budget_formula() {
        assert_eq!(default_budget(16), 24);
        assert_eq!(default_budget(17), 26);
        assert_eq!(default_budget(1), 16);
    }
}
