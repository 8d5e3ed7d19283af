//! The challenge ladder: players sit on rungs and a lower-placed player
//! displaces the one directly above whenever it strictly dominates it.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::config::Config;
use crate::error::{LadderError, Result};
use crate::game::GameLadder;
use crate::influence::{relation_matrix, RelationMatrix};

/// Players from the top rung down. Players are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ladder(Vec<usize>);

impl Ladder {
    pub fn new(rungs: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; rungs.len()];
        for &p in &rungs {
            if p >= rungs.len() || std::mem::replace(&mut seen[p], true) {
                return Err(LadderError::DimensionMismatch(format!(
                    "ladder {rungs:?} is not a permutation of the players"
                )));
            }
        }
        Ok(Ladder(rungs))
    }

    /// Players in label order, player 1 on top.
    pub fn identity(n: usize) -> Self {
        Ladder((0..n).collect())
    }

    pub fn rungs(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rung_of(&self, p: usize) -> Option<usize> {
        self.0.iter().position(|&x| x == p)
    }

    /// Exchanges two players wherever they sit.
    pub fn swap_players(&mut self, a: usize, b: usize) {
        if let (Some(i), Some(k)) = (self.rung_of(a), self.rung_of(b)) {
            self.0.swap(i, k);
        }
    }

    fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|p| p + 1).collect()
    }
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| (p + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Termination {
    Stable,
    RoundLimit,
    CycleDetected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SwapEvent {
    pub round: usize,
    pub challenger: usize,
    pub incumbent: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimTrace {
    pub initial: Ladder,
    pub events: Vec<SwapEvent>,
    pub final_ladder: Ladder,
    pub rounds: usize,
    pub termination: Termination,
}

impl SimTrace {
    /// Applies the events to the initial ladder.
    pub fn replay(&self) -> Ladder {
        let mut ladder = self.initial.clone();
        for e in &self.events {
            ladder.swap_players(e.challenger, e.incumbent);
        }
        ladder
    }

    /// One JSON object per line: a start line, one line per swap, and a
    /// closing summary. Players are 1-based.
    pub fn to_json_lines(&self) -> String {
        let mut lines = vec![serde_json::json!({
            "type": "start",
            "ladder": self.initial.one_based(),
        })];
        lines.extend(self.events.iter().map(|e| {
            serde_json::json!({
                "type": "swap",
                "round": e.round,
                "challenger": e.challenger + 1,
                "incumbent": e.incumbent + 1,
            })
        }));
        lines.push(serde_json::json!({
            "type": "end",
            "ladder": self.final_ladder.one_based(),
            "rounds": self.rounds,
            "swaps": self.events.len(),
            "termination": self.termination,
        }));
        let mut out = String::new();
        for line in lines {
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }
}

/// Runs the ladder under the canonical configuration's relation.
pub fn run_ladder(game: &GameLadder, initial: Ladder, max_rounds: usize) -> Result<SimTrace> {
    let m = relation_matrix(&Config::Canonical.prepare(game))?;
    run_ladder_on(&m, initial, max_rounds)
}

/// Each round walks the ladder bottom-up; the challenger at each rung meets
/// the incumbent directly above and takes its rung iff it strictly
/// dominates. A winning challenger keeps climbing within the same round.
pub fn run_ladder_on(m: &RelationMatrix, initial: Ladder, max_rounds: usize) -> Result<SimTrace> {
    if initial.len() != m.players() {
        return Err(LadderError::DimensionMismatch(format!(
            "ladder has {} rungs but the game has {} players",
            initial.len(),
            m.players()
        )));
    }
    let mut ladder = initial.clone();
    let mut events = Vec::new();
    let mut seen = HashSet::new();
    seen.insert(ladder.clone());
    let mut rounds = 0;
    let termination = loop {
        if rounds == max_rounds {
            break Termination::RoundLimit;
        }
        rounds += 1;
        let mut swapped = false;
        for rung in (1..ladder.len()).rev() {
            let (challenger, incumbent) = (ladder.0[rung], ladder.0[rung - 1]);
            if m.dominates(challenger, incumbent) {
                ladder.0.swap(rung, rung - 1);
                events.push(SwapEvent {
                    round: rounds,
                    challenger,
                    incumbent,
                });
                swapped = true;
            }
        }
        if !swapped {
            break Termination::Stable;
        }
        if !seen.insert(ladder.clone()) {
            break Termination::CycleDetected;
        }
    };
    Ok(SimTrace {
        initial,
        events,
        final_ladder: ladder,
        rounds,
        termination,
    })
}
