use std::fmt::Write as _;

use serde::Serialize;

use crate::graph::{EdgeId, NodeId};

/// One transmitted message: sent during `round - 1`, delivered at the start of `round`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LogEntry {
    pub round: u64,
    pub edge: EdgeId,
    pub src: NodeId,
    pub dst: NodeId,
    pub bits: u32,
}

/// Accounting for one or more protocol runs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub rounds: u64,
    pub messages: u64,
    pub bits: u64,
    pub max_bits: u32,
    /// Most messages carried by a single edge within a single run.
    pub max_congestion: u64,
    pub runs: u64,
    pub timeout: bool,
    pub budget_violated: bool,
    /// Content hash of everything transmitted; equal transcripts have equal digests.
    pub digest: u64,
    #[serde(skip)]
    pub log: Option<Vec<LogEntry>>,
}

/// The exported totals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RoundReport {
    pub rounds: u64,
    pub messages: u64,
    pub bits: u64,
    pub max_congestion: u64,
}

impl Transcript {
    pub fn metrics(&self) -> RoundReport {
        RoundReport {
            rounds: self.rounds,
            messages: self.messages,
            bits: self.bits,
            max_congestion: self.max_congestion,
        }
    }

    fn fold_counts(&mut self, other: &Transcript) {
        self.messages += other.messages;
        self.bits += other.bits;
        self.max_bits = self.max_bits.max(other.max_bits);
        self.max_congestion = self.max_congestion.max(other.max_congestion);
        self.runs += other.runs;
        self.timeout |= other.timeout;
        self.budget_violated |= other.budget_violated;
    }

    /// Appends a run executed after everything already recorded.
    pub fn absorb(&mut self, other: &Transcript) {
        if let (Some(mine), Some(theirs)) = (self.log.as_mut(), other.log.as_ref()) {
            mine.extend(theirs.iter().map(|e| LogEntry { round: e.round + self.rounds, ..*e }));
        }
        self.rounds += other.rounds;
        self.digest = self.digest.rotate_left(17).wrapping_mul(0x2545_f491_4f6c_dd1d) ^ other.digest;
        self.fold_counts(other);
    }

    /// Merges runs that executed simultaneously on disjoint edge sets.
    pub fn merge_parallel(parts: &[Transcript]) -> Transcript {
        let mut out = Transcript { log: Some(Vec::new()), ..Default::default() };
        for p in parts {
            out.rounds = out.rounds.max(p.rounds);
            out.digest = out.digest.wrapping_add(super::coins::mix64(p.digest));
            out.fold_counts(p);
            match (out.log.as_mut(), p.log.as_ref()) {
                (Some(mine), Some(theirs)) => mine.extend_from_slice(theirs),
                _ => out.log = None,
            }
        }
        if let Some(log) = out.log.as_mut() {
            log.sort();
        }
        out
    }

    /// Line-oriented log `round edge-id src dst bits`, empty when logging was off.
    pub fn log_lines(&self) -> String {
        let mut out = String::new();
        for e in self.log.iter().flatten() {
            let _ = writeln!(out, "{} {} {} {} {}", e.round, e.edge, e.src, e.dst, e.bits);
        }
        out
    }
}
