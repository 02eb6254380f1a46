use serde::{Deserialize, Serialize};

use crate::env::Observation;

/// Which of the tracked values a pull was made at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PullRole {
    Safe,
    Unsafe,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub t: u64,
    pub epoch: u32,
    pub coordinate: usize,
    pub value: f64,
    pub role: PullRole,
    pub obs: Observation,
    pub true_safety_level: f64,
    pub within_gamma: bool,
    pub within_gamma_plus_eps: bool,
}

/// Time-ordered log of every pull in a run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PullTrace {
    entries: Vec<TraceEntry>,
}

impl PullTrace {
    pub(crate) fn push(&mut self, entry: TraceEntry) {
        debug_assert!(self.entries.last().is_none_or(|last| last.t < entry.t));
        self.entries.push(entry);
    }

    pub fn entries(&self) -> &[TraceEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
