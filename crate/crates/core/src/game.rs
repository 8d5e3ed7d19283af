//! Game ladders `(N, T, f)`: players, ordered position types `1..=j` and an
//! output function over position profiles.
//!
//! Players are indexed from 0 in the API and printed from 1. Position types
//! are 1-based. Profiles are enumerated in mixed-radix order with player 0 as
//! the least significant digit, so `encode(x) = Σ_p (x_p − 1)·j^p`.

use std::fmt;

use crate::error::{LadderError, Result};

/// Default bound on the number of items any exhaustive sweep may visit.
pub const DEFAULT_ENUM_CAP: u64 = 20_000_000;

/// Absolute tolerance used to merge real-valued outputs into one level.
pub const LEVEL_TOLERANCE: f64 = 1e-9;

/// A position profile: `positions[p]` is the position type of player `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile(Vec<u8>);

impl Profile {
    pub fn new(positions: Vec<u8>) -> Self {
        Profile(positions)
    }

    pub fn uniform(n: usize, level: u8) -> Self {
        Profile(vec![level; n])
    }

    pub fn positions(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, p: usize) -> u8 {
        self.0[p]
    }

    pub(crate) fn set(&mut self, p: usize, level: u8) {
        self.0[p] = level;
    }

    /// Checks length `n` and that every entry lies in `1..=j`.
    pub fn validate(&self, n: usize, j: u8) -> Result<()> {
        if self.0.len() != n {
            return Err(LadderError::DimensionMismatch(format!(
                "profile {self} has {} entries, expected {n}",
                self.0.len()
            )));
        }
        if let Some(&bad) = self.0.iter().find(|&&t| t == 0 || t > j) {
            return Err(LadderError::DimensionMismatch(format!(
                "profile {self} has position {bad} outside 1..={j}"
            )));
        }
        Ok(())
    }

    /// Componentwise `self ≤ other`.
    pub fn is_below(&self, other: &Profile) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `x + (r − x_p)e^p`: moves player `p` to position `r`.
    pub fn promote(&self, p: usize, r: u8, j: u8) -> Result<Profile> {
        if p >= self.0.len() {
            return Err(LadderError::DimensionMismatch(format!(
                "player {} out of range 1..={}",
                p + 1,
                self.0.len()
            )));
        }
        if r == 0 || r > j {
            return Err(LadderError::DimensionMismatch(format!(
                "position {r} outside 1..={j}"
            )));
        }
        Ok(self.with(p, r))
    }

    pub(crate) fn with(&self, p: usize, r: u8) -> Profile {
        let mut out = self.clone();
        out.0[p] = r;
        out
    }

    /// Reverses the position scale: `x_p ↦ j + 1 − x_p`.
    pub fn reversed(&self, j: u8) -> Profile {
        Profile(self.0.iter().map(|&t| j + 1 - t).collect())
    }

    /// Canonical mixed-radix index, player 0 least significant.
    pub fn encode(&self, j: u8) -> usize {
        let j = j as usize;
        self.0
            .iter()
            .rev()
            .fold(0usize, |acc, &t| acc * j + (t as usize - 1))
    }

    pub fn decode(mut index: usize, n: usize, j: u8) -> Profile {
        let radix = j as usize;
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push((index % radix) as u8 + 1);
            index /= radix;
        }
        Profile(out)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u8>> for Profile {
    fn from(v: Vec<u8>) -> Self {
        Profile(v)
    }
}

/// Number of profiles `jⁿ`, saturating.
pub fn profile_count(n: usize, j: u8) -> u128 {
    (0..n).fold(1u128, |acc, _| acc.saturating_mul(j as u128))
}

/// Errors with `EnumerationLimit` when `required` exceeds `cap`.
pub fn check_cap(required: u128, cap: u64) -> Result<()> {
    if required > cap as u128 {
        Err(LadderError::EnumerationLimit { required, cap })
    } else {
        Ok(())
    }
}

/// All profiles of `n` players over `j` types, in canonical order.
pub fn profiles(n: usize, j: u8) -> impl Iterator<Item = Profile> {
    let total = profile_count(n, j) as usize;
    (0..total).map(move |idx| Profile::decode(idx, n, j))
}

/// Direction in which `f` is monotone for the componentwise order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    NonDecreasing,
    NonIncreasing,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::NonDecreasing => Orientation::NonIncreasing,
            Orientation::NonIncreasing => Orientation::NonDecreasing,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::NonDecreasing => "non_decreasing",
            Orientation::NonIncreasing => "non_increasing",
        }
    }
}

/// How the output function is stored.
#[derive(Clone, Debug, PartialEq)]
pub enum Representation {
    /// `jⁿ` outputs in canonical profile order.
    Explicit(Vec<f64>),
    /// `inside` iff `x ≤ g` for some generator, else `outside`.
    DownSet {
        generators: Vec<Profile>,
        inside: f64,
        outside: f64,
    },
    /// `inside` iff `x ≥ g` for some generator, else `outside`.
    UpSet {
        generators: Vec<Profile>,
        inside: f64,
        outside: f64,
    },
    /// `f(x) = values[i]` for the first `i` with `Σ_p weights[p][x_p − 1] ≥ thresholds[i]`;
    /// the trailing `values[thresholds.len()]` is the output when no threshold is met.
    Weighted {
        weights: Vec<Vec<f64>>,
        thresholds: Vec<f64>,
        values: Vec<f64>,
    },
}

/// An immutable game ladder.
#[derive(Clone, Debug, PartialEq)]
pub struct GameLadder {
    n: usize,
    j: u8,
    orientation: Orientation,
    repr: Representation,
    enum_cap: u64,
}

impl GameLadder {
    /// Validates the representation against `n` and `j`; generator sets are
    /// reduced to antichains and sorted.
    pub fn new(n: usize, j: u8, orientation: Orientation, repr: Representation) -> Result<Self> {
        if n == 0 {
            return Err(LadderError::InvalidGame("player count must be at least 1".into()));
        }
        if j < 2 {
            return Err(LadderError::InvalidGame(format!(
                "level count must be at least 2, got {j}"
            )));
        }
        let repr = match repr {
            Representation::Explicit(outputs) => {
                let expected = profile_count(n, j);
                if outputs.len() as u128 != expected {
                    return Err(LadderError::InvalidGame(format!(
                        "explicit table has {} entries, expected {expected}",
                        outputs.len()
                    )));
                }
                if outputs.iter().any(|v| !v.is_finite()) {
                    return Err(LadderError::InvalidGame("explicit table has a non-finite output".into()));
                }
                Representation::Explicit(outputs)
            }
            Representation::DownSet {
                generators,
                inside,
                outside,
            } => {
                check_generators(&generators, n, j)?;
                Representation::DownSet {
                    generators: maximal_antichain(generators, true),
                    inside,
                    outside,
                }
            }
            Representation::UpSet {
                generators,
                inside,
                outside,
            } => {
                check_generators(&generators, n, j)?;
                Representation::UpSet {
                    generators: maximal_antichain(generators, false),
                    inside,
                    outside,
                }
            }
            Representation::Weighted {
                weights,
                thresholds,
                values,
            } => {
                if weights.len() != n || weights.iter().any(|row| row.len() != j as usize) {
                    return Err(LadderError::InvalidGame(format!(
                        "weight matrix must be {n}x{j}"
                    )));
                }
                if values.len() != thresholds.len() + 1 {
                    return Err(LadderError::InvalidGame(format!(
                        "weighted game needs one more value than thresholds ({} values, {} thresholds)",
                        values.len(),
                        thresholds.len()
                    )));
                }
                if !strictly_decreasing(&thresholds) || !strictly_decreasing(&values) {
                    return Err(LadderError::InvalidGame(
                        "thresholds and values must be strictly decreasing".into(),
                    ));
                }
                Representation::Weighted {
                    weights,
                    thresholds,
                    values,
                }
            }
        };
        Ok(GameLadder {
            n,
            j,
            orientation,
            repr,
            enum_cap: DEFAULT_ENUM_CAP,
        })
    }

    /// A game whose output is `value` everywhere.
    pub fn constant(n: usize, j: u8, orientation: Orientation, value: f64) -> Result<Self> {
        let len = profile_count(n, j);
        check_cap(len, DEFAULT_ENUM_CAP)?;
        Self::new(n, j, orientation, Representation::Explicit(vec![value; len as usize]))
    }

    /// Materializes `f` as an explicit table from any closure over profiles.
    pub fn from_fn(
        n: usize,
        j: u8,
        orientation: Orientation,
        f: impl Fn(&Profile) -> f64,
    ) -> Result<Self> {
        check_cap(profile_count(n, j), DEFAULT_ENUM_CAP)?;
        let outputs = profiles(n, j).map(|x| f(&x)).collect();
        Self::new(n, j, orientation, Representation::Explicit(outputs))
    }

    pub fn with_enum_cap(mut self, cap: u64) -> Self {
        self.enum_cap = cap;
        self
    }

    pub fn players(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> u8 {
        self.j
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn enum_cap(&self) -> u64 {
        self.enum_cap
    }

    pub fn profile_count(&self) -> u128 {
        profile_count(self.n, self.j)
    }

    pub fn check_profile(&self, x: &Profile) -> Result<()> {
        x.validate(self.n, self.j)
    }

    pub fn check_player(&self, p: usize) -> Result<()> {
        if p < self.n {
            Ok(())
        } else {
            Err(LadderError::DimensionMismatch(format!(
                "player {} out of range 1..={}",
                p + 1,
                self.n
            )))
        }
    }

    pub fn evaluate(&self, x: &Profile) -> Result<f64> {
        self.check_profile(x)?;
        Ok(self.value(x.positions()))
    }

    /// Evaluates without validating the profile.
    pub(crate) fn value(&self, x: &[u8]) -> f64 {
        match &self.repr {
            Representation::Explicit(outputs) => outputs[encode_slice(x, self.j)],
            Representation::DownSet {
                generators,
                inside,
                outside,
            } => {
                if generators.iter().any(|g| le_slice(x, g.positions())) {
                    *inside
                } else {
                    *outside
                }
            }
            Representation::UpSet {
                generators,
                inside,
                outside,
            } => {
                if generators.iter().any(|g| le_slice(g.positions(), x)) {
                    *inside
                } else {
                    *outside
                }
            }
            Representation::Weighted {
                weights,
                thresholds,
                values,
            } => {
                let total: f64 = x
                    .iter()
                    .zip(weights)
                    .map(|(&t, row)| row[t as usize - 1])
                    .sum();
                let hit = thresholds
                    .iter()
                    .position(|&t| total + LEVEL_TOLERANCE >= t)
                    .unwrap_or(thresholds.len());
                values[hit]
            }
        }
    }

    pub(crate) fn value_at(&self, index: usize) -> f64 {
        match &self.repr {
            Representation::Explicit(outputs) => outputs[index],
            _ => self.value(Profile::decode(index, self.n, self.j).positions()),
        }
    }

    /// `g(x) = f(rev(x))` with `rev(x)_p = j + 1 − x_p`; orientation flipped.
    pub fn dualize(&self) -> GameLadder {
        let j = self.j;
        let repr = match &self.repr {
            Representation::Explicit(outputs) => {
                let total = outputs.len();
                let dual = (0..total)
                    .map(|idx| {
                        let rev = Profile::decode(idx, self.n, j).reversed(j);
                        outputs[rev.encode(j)]
                    })
                    .collect();
                Representation::Explicit(dual)
            }
            Representation::DownSet {
                generators,
                inside,
                outside,
            } => Representation::UpSet {
                generators: sorted(generators.iter().map(|g| g.reversed(j)).collect()),
                inside: *inside,
                outside: *outside,
            },
            Representation::UpSet {
                generators,
                inside,
                outside,
            } => Representation::DownSet {
                generators: sorted(generators.iter().map(|g| g.reversed(j)).collect()),
                inside: *inside,
                outside: *outside,
            },
            Representation::Weighted {
                weights,
                thresholds,
                values,
            } => Representation::Weighted {
                weights: weights
                    .iter()
                    .map(|row| row.iter().rev().copied().collect())
                    .collect(),
                thresholds: thresholds.clone(),
                values: values.clone(),
            },
        };
        GameLadder {
            n: self.n,
            j,
            orientation: self.orientation.flipped(),
            repr,
            enum_cap: self.enum_cap,
        }
    }

    /// This game if it already has orientation `target`, otherwise its dual.
    pub fn oriented(&self, target: Orientation) -> GameLadder {
        if self.orientation == target {
            self.clone()
        } else {
            self.dualize()
        }
    }

    /// Exact sorted-descending range of `f`.
    pub fn output_levels(&self) -> Result<OutputLevels> {
        check_cap(self.profile_count(), self.enum_cap)?;
        let total = self.profile_count() as usize;
        Ok(OutputLevels::from_values((0..total).map(|idx| self.value_at(idx))))
    }

    /// All outputs in canonical order together with their level ranks.
    pub fn level_table(&self) -> Result<LevelTable> {
        check_cap(self.profile_count(), self.enum_cap)?;
        let total = self.profile_count() as usize;
        let values: Vec<f64> = (0..total).map(|idx| self.value_at(idx)).collect();
        let levels = OutputLevels::from_values(values.iter().copied());
        let ranks = values.iter().map(|&v| levels.rank_of(v) as u16).collect();
        Ok(LevelTable {
            n: self.n,
            j: self.j,
            levels,
            ranks,
        })
    }

    /// Checks the declared orientation over all covering pairs
    /// `(x, x + e^p)`, which is equivalent to checking every comparable pair.
    pub fn validate_monotone(&self) -> Result<MonotoneReport> {
        check_cap(self.profile_count(), self.enum_cap)?;
        let total = self.profile_count() as usize;
        let values: Vec<f64> = (0..total).map(|idx| self.value_at(idx)).collect();
        let strides = strides(self.n, self.j);
        for (idx, &lower_value) in values.iter().enumerate() {
            let x = Profile::decode(idx, self.n, self.j);
            for p in 0..self.n {
                if x.get(p) == self.j {
                    continue;
                }
                let upper_value = values[idx + strides[p]];
                let ok = match self.orientation {
                    Orientation::NonDecreasing => lower_value <= upper_value + LEVEL_TOLERANCE,
                    Orientation::NonIncreasing => lower_value + LEVEL_TOLERANCE >= upper_value,
                };
                if !ok {
                    let upper = x.with(p, x.get(p) + 1);
                    return Ok(MonotoneReport {
                        holds: false,
                        witness: Some((x, upper)),
                    });
                }
            }
        }
        Ok(MonotoneReport {
            holds: true,
            witness: None,
        })
    }

    /// `validate_monotone`, turned into an error on failure.
    pub fn require_monotone(&self) -> Result<()> {
        let report = self.validate_monotone()?;
        match report.witness {
            None => Ok(()),
            Some((lower, upper)) => Err(LadderError::NotMonotone { lower, upper }),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneReport {
    pub holds: bool,
    /// A covering pair `(x, z)` with `x ≤ z` violating the orientation.
    pub witness: Option<(Profile, Profile)>,
}

/// Distinct outputs `z_1 > z_2 > … > z_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputLevels(Vec<f64>);

impl OutputLevels {
    /// Sorts descending and merges values within `LEVEL_TOLERANCE` of the
    /// previously kept level.
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        let mut all: Vec<f64> = values.into_iter().collect();
        all.sort_by(|a, b| b.total_cmp(a));
        let mut levels: Vec<f64> = Vec::new();
        for v in all {
            match levels.last() {
                Some(&last) if last - v <= LEVEL_TOLERANCE => {}
                _ => levels.push(v),
            }
        }
        OutputLevels(levels)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// `k`.
    pub fn count(&self) -> usize {
        self.0.len()
    }

    /// `z_i`, 1-based.
    pub fn level(&self, i: usize) -> f64 {
        self.0[i - 1]
    }

    /// 0-based rank of `v`: the number of levels strictly above it.
    pub fn rank_of(&self, v: f64) -> usize {
        self.0.iter().take_while(|&&z| z > v + LEVEL_TOLERANCE).count()
    }
}

/// Read access to output values, either through a materialized table or by
/// evaluating the representation on demand.
pub trait ValueSource: Sync {
    fn players(&self) -> usize;
    fn position_types(&self) -> u8;
    /// Output at `x`; `x` must be a valid profile.
    fn value_of(&self, x: &[u8]) -> f64;
}

impl ValueSource for GameLadder {
    fn players(&self) -> usize {
        self.n
    }

    fn position_types(&self) -> u8 {
        self.j
    }

    fn value_of(&self, x: &[u8]) -> f64 {
        self.value(x)
    }
}

/// Every output of a game in canonical order.
#[derive(Clone, Debug)]
pub struct OutputTable {
    n: usize,
    j: u8,
    values: Vec<f64>,
}

impl OutputTable {
    pub fn new(game: &GameLadder) -> Result<Self> {
        check_cap(game.profile_count(), game.enum_cap)?;
        let total = game.profile_count() as usize;
        Ok(OutputTable {
            n: game.n,
            j: game.j,
            values: (0..total).map(|idx| game.value_at(idx)).collect(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl ValueSource for OutputTable {
    fn players(&self) -> usize {
        self.n
    }

    fn position_types(&self) -> u8 {
        self.j
    }

    fn value_of(&self, x: &[u8]) -> f64 {
        self.values[encode_slice(x, self.j)]
    }
}

/// Level ranks of every profile; `f(x) ≥ z_i` iff `rank(x) < i`.
#[derive(Clone, Debug)]
pub struct LevelTable {
    n: usize,
    j: u8,
    levels: OutputLevels,
    ranks: Vec<u16>,
}

impl LevelTable {
    pub fn levels(&self) -> &OutputLevels {
        &self.levels
    }

    pub fn players(&self) -> usize {
        self.n
    }

    pub fn position_types(&self) -> u8 {
        self.j
    }

    pub fn rank(&self, index: usize) -> u16 {
        self.ranks[index]
    }

    /// Whether the profile at `index` reaches `z_level` (1-based level).
    pub fn reaches(&self, index: usize, level: usize) -> bool {
        (self.ranks[index] as usize) < level
    }
}

/// `j^p` for every player.
pub fn strides(n: usize, j: u8) -> Vec<usize> {
    let mut out = Vec::with_capacity(n);
    let mut acc = 1usize;
    for _ in 0..n {
        out.push(acc);
        acc = acc.saturating_mul(j as usize);
    }
    out
}

pub(crate) fn encode_slice(x: &[u8], j: u8) -> usize {
    let j = j as usize;
    x.iter().rev().fold(0usize, |acc, &t| acc * j + (t as usize - 1))
}

fn le_slice(a: &[u8], b: &[u8]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] > w[1])
}

fn check_generators(generators: &[Profile], n: usize, j: u8) -> Result<()> {
    for g in generators {
        g.validate(n, j)
            .map_err(|e| LadderError::InvalidGame(format!("bad generator: {e}")))?;
    }
    Ok(())
}

fn sorted(mut v: Vec<Profile>) -> Vec<Profile> {
    v.sort();
    v
}

/// Keeps only the maximal (down-set) or minimal (up-set) generators.
fn maximal_antichain(generators: Vec<Profile>, keep_maximal: bool) -> Vec<Profile> {
    let mut unique = sorted(generators);
    unique.dedup();
    let kept = unique
        .iter()
        .filter(|g| {
            !unique.iter().any(|h| {
                h != *g
                    && if keep_maximal {
                        g.is_below(h)
                    } else {
                        h.is_below(g)
                    }
            })
        })
        .cloned()
        .collect();
    kept
}
