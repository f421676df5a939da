//! Pipelined flooding broadcast of a short list of values.

use std::collections::BTreeMap;

use crate::graph::NodeId;
use crate::sim::{Io, Message, Protocol, Sim, Widths};

/// Payload item tagged with its index in the list.
#[derive(Clone, Debug, Hash, PartialEq, Eq)]
pub struct Chunk<T> {
    pub idx: u16,
    pub item: T,
}

impl<T: Message> Message for Chunk<T> {
    fn bits(&self, w: &Widths) -> u32 {
        8 + self.item.bits(w)
    }
}

pub struct Broadcast<'a, T> {
    pub source: NodeId,
    pub items: &'a [T],
}

pub struct BroadcastState<T> {
    got: BTreeMap<u16, T>,
    /// Source only: next item to inject.
    next: usize,
}

impl<T: Message> Protocol for Broadcast<'_, T> {
    type State = BroadcastState<T>;
    type Msg = Chunk<T>;

    fn init(&self, io: &mut Io<'_, Chunk<T>>) -> Self::State {
        let mut st = BroadcastState { got: BTreeMap::new(), next: 0 };
        if io.node() == self.source {
            st.got = self.items.iter().cloned().enumerate().map(|(i, t)| (i as u16, t)).collect();
            self.inject(&mut st, io);
        }
        st
    }

    fn step(&self, st: &mut Self::State, io: &mut Io<'_, Chunk<T>>) {
        if io.node() == self.source {
            self.inject(st, io);
            return;
        }
        // items arrive in index order along shortest paths, so at most one is new per round
        let inbox = io.inbox();
        if let Some((_, fresh)) = inbox.iter().find(|(_, c)| !st.got.contains_key(&c.idx)) {
            let fresh = fresh.clone();
            let heard: Vec<usize> = inbox.iter().filter(|(_, c)| c.idx == fresh.idx).map(|(p, _)| *p).collect();
            st.got.insert(fresh.idx, fresh.item.clone());
            io.send_where(&fresh, |i, _| !heard.contains(&i));
        }
    }

    fn busy(&self, st: &Self::State) -> bool {
        st.next > 0 && st.next < self.items.len()
    }
}

impl<T: Message> Broadcast<'_, T> {
    fn inject(&self, st: &mut BroadcastState<T>, io: &mut Io<'_, Chunk<T>>) {
        if let Some(item) = self.items.get(st.next) {
            io.send_where(&Chunk { idx: st.next as u16, item: item.clone() }, |_, _| true);
            st.next += 1;
        }
    }
}

/// Floods `items` from `source`; returns what each node ended up holding and the rounds used.
pub fn broadcast<T: Message>(sim: &mut Sim<'_>, source: NodeId, items: &[T]) -> (Vec<Vec<T>>, u64) {
    let run = sim.run(&Broadcast { source, items });
    let held = run.states.into_iter().map(|s| s.got.into_values().collect()).collect();
    (held, run.transcript.rounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, EdgeId, GeneratorSpec, Multigraph};

    fn gen(s: &str) -> Multigraph {
        generate(&s.parse::<GeneratorSpec>().unwrap(), 0).unwrap()
    }

    #[derive(Clone, Debug, Hash, PartialEq, Eq)]
    struct Id(EdgeId);

    impl Message for Id {
        fn bits(&self, w: &Widths) -> u32 {
            w.edge
        }
    }

    #[test]
    fn single_id_on_c6() {
        let g = gen("cycle(6)");
        let (held, rounds) = broadcast(&mut Sim::with_defaults(&g), 0, &[Id(EdgeId(4))]);
        assert!(held.iter().all(|h| h == &vec![Id(EdgeId(4))]));
        assert!(rounds <= 3 + 1);
    }

    #[test]
    fn three_ids_pipelined() {
        for spec in ["petersen", "grid(3,4)", "cycle(7)", "two-k4"] {
            let g = gen(spec);
            let items: Vec<Id> = (1..=3).map(|i| Id(EdgeId(i))).collect();
            let src = g.n() - 1;
            let (held, rounds) = broadcast(&mut Sim::with_defaults(&g), src, &items);
            assert!(held.iter().all(|h| h == &items), "{spec}");
            assert!(rounds <= g.diameter().unwrap() as u64 + 3, "{spec}: {rounds}");
        }
    }

    #[test]
    fn lone_node() {
        let g = Multigraph::from_pairs(1, []).unwrap();
        let (held, rounds) = broadcast(&mut Sim::with_defaults(&g), 0, &[Id(EdgeId(1))]);
        assert_eq!(rounds, 0);
        assert_eq!(held[0].len(), 1);
    }
}
