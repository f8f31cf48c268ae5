//! Record of evaluation-key use during a transform.
//!
//! Within one iteration the first use of a key is a load from off-chip memory
//! and every later use of the same key is a reuse. Keys are identified by
//! their Galois element, 0 for the multiplication key.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

const HEADER: &str = "# evk-usage v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvkAction {
    Load,
    Reuse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvkUse {
    pub iteration: usize,
    pub rotation: i64,
    pub evk_id: u64,
    pub action: EvkAction,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EvkUsageLog {
    entries: Vec<EvkUse>,
    iteration: usize,
    seen: BTreeSet<u64>,
    started: bool,
}

impl EvkUsageLog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Start the next iteration; keys loaded before are forgotten.
    pub fn begin_iteration(&mut self) {
        if self.started {
            self.iteration += 1;
        }
        self.started = true;
        self.seen.clear();
    }

    pub fn record(&mut self, rotation: i64, evk_id: u64) {
        self.started = true;
        let action = if self.seen.insert(evk_id) {
            EvkAction::Load
        } else {
            EvkAction::Reuse
        };
        self.entries.push(EvkUse {
            iteration: self.iteration,
            rotation,
            evk_id,
            action,
        });
    }

    pub fn entries(&self) -> &[EvkUse] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iterations(&self) -> usize {
        self.entries.last().map_or(0, |e| e.iteration + 1)
    }

    pub fn loads(&self) -> usize {
        self.entries.iter().filter(|e| e.action == EvkAction::Load).count()
    }

    pub fn reuses(&self) -> usize {
        self.len() - self.loads()
    }

    /// Distinct keys loaded in each iteration.
    pub fn loads_per_iteration(&self) -> Vec<usize> {
        let mut out = vec![0; self.iterations()];
        for e in &self.entries {
            if e.action == EvkAction::Load {
                out[e.iteration] += 1;
            }
        }
        out
    }

    /// Key switches (loads plus reuses) in each iteration.
    pub fn uses_per_iteration(&self) -> Vec<usize> {
        let mut out = vec![0; self.iterations()];
        for e in &self.entries {
            out[e.iteration] += 1;
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{HEADER}\n# iteration rotation evk_id action\n");
        for e in &self.entries {
            let action = match e.action {
                EvkAction::Load => "load",
                EvkAction::Reuse => "reuse",
            };
            writeln!(s, "{} {} {} {}", e.iteration, e.rotation, e.evk_id, action).unwrap();
        }
        s
    }

    /// Parse the text form and check that the load/reuse flags are consistent.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l.trim() == HEADER => {}
            _ => return Err(Error::Serialization(format!("missing '{HEADER}' header"))),
        }
        let mut entries = Vec::new();
        for (no, line) in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |what: &str| Error::Serialization(format!("line {}: {what}", no + 1));
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return Err(bad("expected 4 fields"));
            }
            let action = match f[3] {
                "load" => EvkAction::Load,
                "reuse" => EvkAction::Reuse,
                _ => return Err(bad("action must be load or reuse")),
            };
            entries.push(EvkUse {
                iteration: f[0].parse().map_err(|_| bad("bad iteration"))?,
                rotation: f[1].parse().map_err(|_| bad("bad rotation"))?,
                evk_id: f[2].parse().map_err(|_| bad("bad evk id"))?,
                action,
            });
        }
        let mut rebuilt = EvkUsageLog::new();
        let mut current = None;
        for e in &entries {
            match current {
                Some(i) if e.iteration == i => {}
                Some(i) if e.iteration < i => {
                    return Err(Error::Serialization("iterations out of order".into()));
                }
                _ => {
                    let target = e.iteration;
                    if !rebuilt.started {
                        rebuilt.begin_iteration();
                    }
                    while rebuilt.iteration < target {
                        rebuilt.begin_iteration();
                    }
                    current = Some(target);
                }
            }
            rebuilt.record(e.rotation, e.evk_id);
        }
        if rebuilt.entries != entries {
            return Err(Error::Serialization(
                "load/reuse flags are inconsistent: a reuse precedes the key's load".into(),
            ));
        }
        Ok(rebuilt)
    }
}
