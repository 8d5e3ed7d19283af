//! Claim-by-claim verification over one or more games.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::config::Config;
use crate::error::{LadderError, Result};
use crate::game::GameLadder;
use crate::influence::{
    check_equivalence, layers_of, linearity, mixed_transitivity_violations, relation_matrix,
    strict_transitivity_violations, transitivity_violations, RelationMatrix,
};
use crate::injection::verify_injection;
use crate::pivot::{allocation_count, is_pivotal_bruteforce, OrderedAllocation, PivotClass, PivotContext};

/// Work budget (roughly, evaluations of `f`) above which the exhaustive
/// per-allocation checks are skipped for a game.
pub const DEFAULT_EXHAUSTIVE_LIMIT: u128 = 50_000_000;

const MAX_WITNESSES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Prop1,
    Prop2,
    Prop3,
    Prop4,
    Prop5,
    Prop6,
    /// Transitivity of `≽` when `j = 2`.
    TwoLevel,
    Theorem1,
    Theorem2,
    #[serde(rename = "lemma1_equivalence")]
    Lemma1,
    Uniqueness,
    Injection,
}

impl Claim {
    pub const ALL: [Claim; 12] = [
        Claim::Prop1,
        Claim::Prop2,
        Claim::Prop3,
        Claim::Prop4,
        Claim::Prop5,
        Claim::Prop6,
        Claim::TwoLevel,
        Claim::Theorem1,
        Claim::Theorem2,
        Claim::Lemma1,
        Claim::Uniqueness,
        Claim::Injection,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Claim::Prop1 => "prop1",
            Claim::Prop2 => "prop2",
            Claim::Prop3 => "prop3",
            Claim::Prop4 => "prop4",
            Claim::Prop5 => "prop5",
            Claim::Prop6 => "prop6",
            Claim::TwoLevel => "two_level",
            Claim::Theorem1 => "theorem1",
            Claim::Theorem2 => "theorem2",
            Claim::Lemma1 => "lemma1_equivalence",
            Claim::Uniqueness => "uniqueness",
            Claim::Injection => "injection",
        }
    }

    /// Claims that assert something fails somewhere: they pass once a
    /// witness turns up.
    fn existential(self) -> bool {
        matches!(self, Claim::Prop2 | Claim::Prop3)
    }

    /// Parses a comma-separated list, dropping duplicates.
    pub fn parse_list(s: &str) -> Result<Vec<Claim>> {
        let mut out: Vec<Claim> = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let claim = if part == "all" {
                for c in Claim::ALL {
                    if !out.contains(&c) {
                        out.push(c);
                    }
                }
                continue;
            } else {
                part.parse()?
            };
            if !out.contains(&claim) {
                out.push(claim);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Claim {
    type Err = LadderError;

    fn from_str(s: &str) -> Result<Self> {
        let claim = match s {
            "lemma1" | "lemma1_equivalence" => Claim::Lemma1,
            "two-level" => Claim::TwoLevel,
            other => *Claim::ALL
                .iter()
                .find(|c| c.as_str() == other)
                .ok_or_else(|| LadderError::Parse(format!("unknown claim {other:?}")))?,
        };
        Ok(claim)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "reason")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub claim: Claim,
    #[serde(flatten)]
    pub verdict: Verdict,
    /// Games on which the claim was actually evaluated.
    pub games_checked: usize,
    pub games_skipped: usize,
    /// Counterexamples for universal claims, confirmations for existential ones.
    pub witnesses: Vec<String>,
    pub witnesses_total: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationSuiteResult {
    pub config: &'static str,
    pub games: usize,
    pub claims: Vec<ClaimResult>,
}

impl VerificationSuiteResult {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(|c| c.verdict != Verdict::Fail)
    }

    pub fn get(&self, claim: Claim) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.claim == claim)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub config: Config,
    pub exhaustive_limit: u128,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            config: Config::Canonical,
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
        }
    }
}

enum Outcome {
    Holds,
    Broken(Vec<String>),
    NotApplicable(String),
}

#[derive(Default)]
struct Tally {
    checked: usize,
    skipped: usize,
    witnesses: Vec<String>,
    total: usize,
    first_reason: Option<String>,
}

/// Runs every claim on every game. Relation and pivot claims read each game
/// in the configuration's orientation.
pub fn verify_games(games: &[(String, GameLadder)], claims: &[Claim], opts: &VerifyOptions) -> VerificationSuiteResult {
    let mut tallies: Vec<Tally> = claims.iter().map(|_| Tally::default()).collect();
    for (label, game) in games {
        let prepared = opts.config.prepare(game);
        let relation = relation_matrix(&prepared);
        for (claim, tally) in claims.iter().zip(tallies.iter_mut()) {
            let outcome = match &relation {
                Ok(m) => check_claim(*claim, &prepared, m, opts),
                Err(e) => Outcome::NotApplicable(e.to_string()),
            };
            match outcome {
                Outcome::Holds => tally.checked += 1,
                Outcome::Broken(ws) => {
                    tally.checked += 1;
                    tally.total += ws.len();
                    for w in ws {
                        if tally.witnesses.len() < MAX_WITNESSES {
                            tally.witnesses.push(format!("{label}: {w}"));
                        }
                    }
                }
                Outcome::NotApplicable(reason) => {
                    tally.skipped += 1;
                    tally.first_reason.get_or_insert(format!("{label}: {reason}"));
                }
            }
        }
    }
    let results = claims
        .iter()
        .zip(tallies)
        .map(|(&claim, t)| {
            let verdict = if claim.existential() {
                if t.total > 0 {
                    Verdict::Pass
                } else if t.checked > 0 {
                    Verdict::Skipped(format!("no witness among {} games", t.checked))
                } else {
                    Verdict::Skipped(t.first_reason.clone().unwrap_or_else(|| "no games".into()))
                }
            } else if t.total > 0 {
                Verdict::Fail
            } else if t.checked > 0 {
                Verdict::Pass
            } else {
                Verdict::Skipped(t.first_reason.clone().unwrap_or_else(|| "no games".into()))
            };
            ClaimResult {
                claim,
                verdict,
                games_checked: t.checked,
                games_skipped: t.skipped,
                witnesses: t.witnesses,
                witnesses_total: t.total,
            }
        })
        .collect();
    VerificationSuiteResult {
        config: opts.config.as_str(),
        games: games.len(),
        claims: results,
    }
}

fn triple(t: (usize, usize, usize)) -> String {
    format!("({},{},{})", t.0 + 1, t.1 + 1, t.2 + 1)
}

fn require_linear(m: &RelationMatrix) -> Option<Outcome> {
    linearity(m)
        .witness
        .map(|(p, q)| Outcome::NotApplicable(format!("not linear, ({},{}) incomparable", p + 1, q + 1)))
}

fn from_list(list: Vec<String>) -> Outcome {
    if list.is_empty() {
        Outcome::Holds
    } else {
        Outcome::Broken(list)
    }
}

fn check_claim(claim: Claim, game: &GameLadder, m: &RelationMatrix, opts: &VerifyOptions) -> Outcome {
    match claim {
        Claim::Prop1 => {
            let rep = check_equivalence(m);
            let mut ws: Vec<String> = rep.reflexive_violations.iter().map(|p| format!("{} ≁ {}", p + 1, p + 1)).collect();
            ws.extend(
                rep.symmetric_violations
                    .iter()
                    .map(|(p, q)| format!("~ not symmetric on ({},{})", p + 1, q + 1)),
            );
            ws.extend(
                rep.transitive_violations
                    .iter()
                    .map(|&t| format!("~ not transitive on {}", triple(t))),
            );
            from_list(ws)
        }
        // existential: a "broken" outcome carries the confirming witness
        Claim::Prop2 => match linearity(m).witness {
            Some((p, q)) => Outcome::Broken(vec![format!("not complete; witness ({},{})", p + 1, q + 1)]),
            None => Outcome::Holds,
        },
        Claim::Prop3 => from_list(
            transitivity_violations(m)
                .into_iter()
                .map(|t| format!("transitivity violation {}", triple(t)))
                .collect(),
        ),
        Claim::Prop4 | Claim::Prop5 | Claim::Prop6 | Claim::Theorem1 => {
            if let Some(skip) = require_linear(m) {
                return skip;
            }
            match claim {
                Claim::Prop4 => from_list(transitivity_violations(m).into_iter().map(triple).collect()),
                Claim::Prop5 => from_list(mixed_transitivity_violations(m).into_iter().map(triple).collect()),
                Claim::Prop6 => from_list(strict_transitivity_violations(m).into_iter().map(triple).collect()),
                _ => match layers_of(m) {
                    Ok(_) => Outcome::Holds,
                    Err(e) => Outcome::Broken(vec![e.to_string()]),
                },
            }
        }
        Claim::TwoLevel => {
            if game.levels() != 2 {
                return Outcome::NotApplicable(format!("j = {}", game.levels()));
            }
            from_list(transitivity_violations(m).into_iter().map(triple).collect())
        }
        Claim::Theorem2 => pivot_claim(game, |g| {
            let (rep, _, _) = crate::pivot::theorem2_check(g, opts.config)?;
            Ok(rep
                .violations
                .iter()
                .map(|v| {
                    format!(
                        "{} ≽ {} but level {} counts {} < {}",
                        v.p + 1,
                        v.q + 1,
                        v.level,
                        v.count_p,
                        v.count_q
                    )
                })
                .collect())
        }),
        Claim::Lemma1 => pivot_claim(game, |g| {
            let mut ws = extremes_mismatches(g, opts.exhaustive_limit)?;
            ws.extend(extremes_mismatches(&g.dualize(), opts.exhaustive_limit)?);
            Ok(ws)
        }),
        Claim::Uniqueness => pivot_claim(game, |g| uniqueness_failures(g, opts.exhaustive_limit)),
        Claim::Injection => pivot_claim(game, |g| {
            let mut ws = Vec::new();
            let levels = g.output_levels()?.count();
            let n = g.players();
            for p in 0..n {
                for q in (0..n).filter(|&q| q != p && m.geq(p, q)) {
                    for i in 1..levels {
                        let rep = verify_injection(g, p, q, i, opts.config)?;
                        for f in &rep.well_defined_failures {
                            ws.push(format!("p={} q={} i={i}: ψ({}) = {} not pivotal", p + 1, q + 1, f.source, f.image));
                        }
                        for c in &rep.injectivity_collisions {
                            ws.push(format!(
                                "p={} q={} i={i}: ψ({}) = ψ({}) = {}",
                                p + 1,
                                q + 1,
                                c.first,
                                c.second,
                                c.image
                            ));
                        }
                    }
                }
            }
            Ok(ws)
        }),
    }
}

/// Runs a pivot-based check, turning capability problems into skips and
/// anything else that goes wrong into a counterexample.
fn pivot_claim(
    game: &GameLadder,
    check: impl FnOnce(&GameLadder) -> Result<Vec<String>>,
) -> Outcome {
    match game.validate_monotone() {
        Ok(rep) if !rep.holds => return Outcome::NotApplicable("not monotone".into()),
        Err(e) => return Outcome::NotApplicable(e.to_string()),
        Ok(_) => {}
    }
    match game.output_levels() {
        Ok(l) if l.count() < 2 => return Outcome::NotApplicable("single output level".into()),
        Err(e) => return Outcome::NotApplicable(e.to_string()),
        Ok(_) => {}
    }
    match check(game) {
        Ok(ws) => from_list(ws),
        Err(e @ (LadderError::EnumerationLimit { .. } | LadderError::DegenerateRange)) => {
            Outcome::NotApplicable(e.to_string())
        }
        Err(e) => Outcome::Broken(vec![e.to_string()]),
    }
}

fn exhaustive_cost(game: &GameLadder) -> u128 {
    let n = game.players();
    let j = game.levels() as u128;
    let k = game.output_levels().map(|l| l.count()).unwrap_or(1) as u128;
    allocation_count(n, game.levels()) * n as u128 * k * j.pow(n as u32)
}

fn over_budget(game: &GameLadder, limit: u128) -> Result<()> {
    let cost = exhaustive_cost(game);
    if cost > limit {
        return Err(LadderError::EnumerationLimit {
            required: cost,
            cap: limit.min(u64::MAX as u128) as u64,
        });
    }
    Ok(())
}

/// Allocations where the extreme-profile test and full enumeration of
/// completions disagree.
pub fn extremes_mismatches(game: &GameLadder, limit: u128) -> Result<Vec<String>> {
    over_budget(game, limit)?;
    let ctx = PivotContext::new(game)?;
    let levels = ctx.levels().count();
    let mut out = Vec::new();
    for r in OrderedAllocation::all(game.players(), game.levels()) {
        for i in 1..levels {
            for p in 0..game.players() {
                let fast = ctx.classify(&r, i, p)? != PivotClass::None;
                let slow = is_pivotal_bruteforce(game, &r, i, p)?;
                if fast != slow {
                    out.push(format!(
                        "{} game, {r}, level {i}, player {}: extremes {fast}, enumeration {slow}",
                        game.orientation().as_str(),
                        p + 1
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Runs `find_pivotal` on every allocation and level and checks the
/// partition identity of the counting sweep.
pub fn uniqueness_failures(game: &GameLadder, limit: u128) -> Result<Vec<String>> {
    over_budget(game, limit)?;
    let ctx = PivotContext::new(game)?;
    let levels = ctx.levels().count();
    let mut out = Vec::new();
    let n = game.players();
    let mut counts = vec![vec![0u64; n]; levels - 1];
    for r in OrderedAllocation::all(n, game.levels()) {
        for i in 1..levels {
            match ctx.find_pivotal(&r, i) {
                Ok(p) => counts[i - 1][p] += 1,
                Err(e) => out.push(e.to_string()),
            }
        }
    }
    match ctx.pivot_counts(None) {
        Ok(table) => {
            if table.counts != counts {
                out.push(format!("sweep counts {:?} differ from find_pivotal counts {counts:?}", table.counts));
            }
            let total = allocation_count(n, game.levels()) as u64;
            for (row, i) in table.counts.iter().zip(&table.level_indices) {
                let sum: u64 = row.iter().sum();
                if sum != total {
                    out.push(format!("level {i}: counts sum to {sum}, expected {total}"));
                }
            }
        }
        Err(e) => out.push(e.to_string()),
    }
    Ok(out)
}
