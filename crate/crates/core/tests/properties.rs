//! Property tests for the library's invariants, on small random multigraphs.

use congest_cuts::certificates::{certificate_audit, ft_edge_audit, ft_spanner_edges, spanner_2k1, spanner_audit, sparse_certificate};
use congest_cuts::derand::{PerfectFamily, PerfectMode, UniversalFamily};
use congest_cuts::edgeconn::{all_edge_connectivities, approx_cycle_cover, EdgeConnMode, Shifts};
use congest_cuts::graph::oracle::{self, CutValue};
use congest_cuts::mincut::{randomized_min_cut, verify_cut, IterationPlan, Knowledge};
use congest_cuts::primitives::{truncated_bfs, SubgraphSelector};
use congest_cuts::sim::{Io, Message, Protocol, Sim, SimConfig, Widths};
use congest_cuts::util::subsets_up_to;
use congest_cuts::{EdgeId, FaultSet, Multigraph};
use proptest::prelude::*;

/// Connected multigraph: a random spanning tree plus `extra` random edges.
fn arb_graph(min_n: usize, max_n: usize, max_extra: usize) -> impl Strategy<Value = Multigraph> {
    (min_n..=max_n).prop_flat_map(move |n| {
        let tree = proptest::collection::vec(any::<prop::sample::Index>(), n - 1);
        let extra = proptest::collection::vec((0..n, 0..n), 0..=max_extra);
        (Just(n), tree, extra).prop_map(|(n, tree, extra)| {
            let mut pairs: Vec<(usize, usize)> = tree.iter().enumerate().map(|(i, ix)| (ix.index(i + 1), i + 1)).collect();
            pairs.extend(extra.into_iter().filter(|(a, b)| a != b));
            Multigraph::from_pairs(n, pairs).unwrap()
        })
    })
}

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

#[derive(Clone, Debug, Hash)]
struct Stamp(u64);

impl Message for Stamp {
    fn bits(&self, _: &Widths) -> u32 {
        16
    }
}

/// Every node forwards a stamp of the round it sends in, for `rounds` rounds.
struct Echo {
    rounds: u64,
}

impl Protocol for Echo {
    type State = bool;
    type Msg = Stamp;

    fn init(&self, io: &mut Io<'_, Stamp>) -> bool {
        for p in 0..io.ports().len() {
            io.send(p, Stamp(0));
        }
        true
    }

    fn step(&self, ok: &mut bool, io: &mut Io<'_, Stamp>) {
        *ok &= io.inbox().iter().all(|(_, s)| s.0 < io.round());
        if io.round() < self.rounds {
            for p in 0..io.ports().len() {
                io.send(p, Stamp(io.round()));
            }
        }
    }
}

/// Sends nothing; stays busy until round `hold`.
struct Idle {
    hold: u64,
}

impl Protocol for Idle {
    type State = u64;
    type Msg = Stamp;

    fn init(&self, _: &mut Io<'_, Stamp>) -> u64 {
        0
    }

    fn step(&self, last: &mut u64, io: &mut Io<'_, Stamp>) {
        *last = io.round();
    }

    fn busy(&self, last: &u64) -> bool {
        *last < self.hold
    }
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn cut_oracles_agree(g in arb_graph(3, 9, 8)) {
        for s in 0..g.n() {
            for t in s + 1..g.n() {
                let flow = oracle::pair_edge_connectivity(&g, s, t);
                let enumerated = oracle::min_cut_by_enumeration(&g, Some((s, t)), 3).map(|(v, _)| v as u64);
                prop_assert_eq!(enumerated, (flow <= 3).then_some(flow));
            }
        }
    }

    #[test]
    fn no_faults_is_plain_bfs(g in arb_graph(2, 12, 10)) {
        for u in 0..g.n() {
            let d = g.distances(u);
            for v in 0..g.n() {
                prop_assert_eq!(oracle::dist_under_faults(&g, u, v, &FaultSet::none()), d[v]);
            }
        }
    }

    #[test]
    fn oracle_witnesses_are_minimal_cuts(g in arb_graph(3, 9, 6)) {
        let cut = oracle::min_cut_oracle(&g, None, 3);
        for w in &cut.witnesses {
            let disconnects = |ids: &[EdgeId]| {
                oracle::bfs_filtered(&g, 0, |p| !ids.contains(&g.edge_at(p).id), |_| true).iter().any(Option::is_none)
            };
            prop_assert!(disconnects(w));
            for sub in subsets_up_to(w.len(), w.len().saturating_sub(1)) {
                let smaller: Vec<EdgeId> = sub.iter().map(|&i| w[i]).collect();
                prop_assert!(!disconnects(&smaller));
            }
        }
    }

    #[test]
    fn simulator_is_deterministic(g in arb_graph(3, 10, 8), seed in any::<u64>()) {
        let run = |g: &Multigraph| {
            let mut sim = Sim::new(g, SimConfig::for_graph(g).seed(seed).with_log());
            let res = randomized_min_cut(&mut sim, 2, Some(IterationPlan::edge(2, 2, g.n(), 1.0).iterations(5)));
            (res, sim.transcript().clone())
        };
        let (a, ta) = run(&g);
        let (b, tb) = run(&g);
        prop_assert_eq!(a, b);
        prop_assert_eq!(ta.log_lines(), tb.log_lines());
        prop_assert_eq!(ta, tb);
    }

    #[test]
    fn messages_only_depend_on_the_past(g in arb_graph(2, 10, 8), rounds in 1u64..6) {
        let mut sim = Sim::with_defaults(&g);
        let run = sim.run(&Echo { rounds });
        prop_assert!(run.states.iter().all(|&ok| ok));
        prop_assert_eq!(run.transcript.rounds, rounds);
    }

    #[test]
    fn quiescence_halts_immediately(g in arb_graph(1, 8, 4), hold in 0u64..5) {
        let mut sim = Sim::with_defaults(&g);
        let run = sim.run(&Idle { hold });
        prop_assert_eq!(run.transcript.rounds, hold);
        prop_assert_eq!(run.transcript.messages, 0);
    }

    #[test]
    fn bfs_matches_oracle(g in arb_graph(1, 14, 10), src in any::<prop::sample::Index>()) {
        let s = src.index(g.n());
        let mut sim = Sim::with_defaults(&g);
        let tree = truncated_bfs(&mut sim, &SubgraphSelector::All, s, g.n() as u32);
        let d = g.distances(s);
        for v in 0..g.n() {
            prop_assert_eq!(tree.depth[v].map(|x| x as usize), d[v]);
        }
    }

    #[test]
    fn edge_detours_are_bounded(g in arb_graph(3, 8, 7)) {
        let d = g.diameter().unwrap();
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                let lambda = oracle::pair_edge_connectivity(&g, u, v).min(3);
                for f in subsets_up_to(g.m(), lambda as usize - 1) {
                    let faults = FaultSet::edges(f.iter().map(|&p| g.edge_at(p).id));
                    let dist = oracle::dist_under_faults(&g, u, v, &faults).unwrap();
                    prop_assert!(dist as u64 <= 3 * lambda * d as u64);
                }
            }
        }
    }

    #[test]
    fn vertex_detours_are_bounded(g in arb_graph(3, 8, 7)) {
        let (d, delta) = (g.diameter().unwrap() as u64, g.max_degree() as u64);
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                let Some(kappa) = oracle::pair_vertex_connectivity(&g, u, v) else { continue };
                let lambda = kappa.min(3);
                for f in subsets_up_to(g.n(), lambda.saturating_sub(1) as usize) {
                    if f.contains(&u) || f.contains(&v) {
                        continue;
                    }
                    let dist = oracle::dist_under_faults(&g, u, v, &FaultSet::vertices(f)).unwrap();
                    prop_assert!(dist as u64 <= 3 * lambda * delta * d);
                }
            }
        }
    }

    #[test]
    fn returned_witnesses_verify(g in arb_graph(3, 10, 8), seed in any::<u64>(), iters in 1u64..30) {
        let mut sim = Sim::new(&g, SimConfig::for_graph(&g).seed(seed));
        let plan = IterationPlan::edge(2, Knowledge::of(&g).diameter, g.n(), 1.0).iterations(iters);
        let res = randomized_min_cut(&mut sim, 2, Some(plan));
        if let Some(v) = res.value {
            prop_assert_eq!(res.witness.len() as u64, v);
            let verdict = verify_cut(&mut sim, &res.witness, 2, Knowledge::of(&g).diameter, None).unwrap();
            prop_assert!(verdict.is_cut);
            prop_assert!(v >= oracle::edge_connectivity(&g).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn perfect_families_are_perfect(n in 2usize..40, k in 1usize..4) {
        let fam = PerfectFamily::build(n, k.min(n), PerfectMode::Auto).unwrap();
        prop_assert!(fam.audit().ok());
    }

    #[test]
    fn universal_size_accounting(n in 1usize..200, a in 1usize..6, b in 0usize..3) {
        let fam = UniversalFamily::build(n, a, b).unwrap();
        let k = (a + b) as u128;
        prop_assert_eq!(fam.len(), fam.perfect.len() * (2 * k * k).pow(b as u32));
        if fam.perfect.len() <= 4096 {
            prop_assert!(fam.distinct_len() <= fam.len());
        }
    }

    #[test]
    fn edge_connectivities_are_exact(g in arb_graph(3, 7, 5), lambda in 1u64..3) {
        let mut sim = Sim::with_defaults(&g);
        let map = all_edge_connectivities(&mut sim, lambda, &EdgeConnMode::Deterministic { budget: None }).unwrap();
        for (e, got) in g.edges().iter().zip(&map.edges) {
            let v = oracle::pair_edge_connectivity(&g, e.u, e.v);
            let want = if v <= lambda { CutValue::Exact(v) } else { CutValue::AtLeast(lambda + 1) };
            prop_assert_eq!(got.lambda_e, want);
            // bridges are exactly the edges reported at 1
            let bridge = oracle::bfs_filtered(&g, e.u, |p| g.edge_at(p).id != e.id, |_| true)[e.v].is_none();
            prop_assert_eq!(bridge, got.lambda_e == CutValue::Exact(1));
            // G_e keeps u-v connected under every small fault set avoiding e
            for f in subsets_up_to(g.m(), lambda.saturating_sub(1) as usize) {
                let dead: Vec<EdgeId> = f.iter().map(|&p| g.edge_at(p).id).chain([e.id]).collect();
                if f.iter().any(|&p| g.edge_at(p).id == e.id) {
                    continue;
                }
                let in_g = oracle::bfs_filtered(&g, e.u, |p| !dead.contains(&g.edge_at(p).id), |_| true)[e.v].is_some();
                let in_ge = oracle::bfs_filtered(
                    &g, e.u, |p| got.local.contains(&g.edge_at(p).id) && !dead.contains(&g.edge_at(p).id), |_| true,
                )[e.v].is_some();
                prop_assert!(!in_g || in_ge);
            }
        }
    }

    #[test]
    fn cycles_are_valid_and_cover(g in arb_graph(3, 12, 10), d in 3u32..9, salt in any::<u64>()) {
        let mut sim = Sim::with_defaults(&g);
        let cc = approx_cycle_cover(&mut sim, &SubgraphSelector::All, d, &Shifts::IdHash { salt });
        prop_assert!(cc.cycles.iter().all(|c| c.is_valid()));
        for (pos, e) in g.edges().iter().enumerate() {
            let short = oracle::bfs_filtered(&g, e.u, |p| p != pos, |_| true)[e.v].is_some_and(|x| x < d as usize);
            if short {
                prop_assert!(cc.covering(e.id).next().is_some());
            }
        }
    }

    #[test]
    fn spanners_have_bounded_stretch(g in arb_graph(2, 12, 20), k in 1u32..4, seed in any::<u64>()) {
        let h = spanner_2k1(&mut Sim::new(&g, SimConfig::for_graph(&g).seed(seed)), k);
        prop_assert!(spanner_audit(&g, &h.edges, k).ok());
    }

    #[test]
    fn ft_spanners_survive_faults(g in arb_graph(3, 9, 12), k in 2u32..4, f in 1u32..3, seed in any::<u64>()) {
        let h = ft_spanner_edges(&mut Sim::new(&g, SimConfig::for_graph(&g).seed(seed)), k, f);
        prop_assert!(ft_edge_audit(&g, &h.edges, k, f as usize).ok());
    }

    #[test]
    fn certificates_preserve_connectivity(g in arb_graph(3, 10, 14), lambda in 1u64..4, seed in any::<u64>()) {
        let c = sparse_certificate(&mut Sim::new(&g, SimConfig::for_graph(&g).seed(seed)), lambda).unwrap();
        prop_assert!(certificate_audit(&g, &c.edges, lambda).ok());
        let h = g.edge_subgraph((0..g.m()).filter(|&p| c.edges.contains(&g.edge_at(p).id)));
        let conn = |x: &Multigraph| oracle::edge_connectivity(x).unwrap_or(0) >= lambda;
        prop_assert_eq!(conn(&h), conn(&g));
    }
}
