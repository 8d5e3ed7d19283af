//! Ordered allocations of positions and `i`-pivotal players.
//!
//! An ordered allocation `R = (order, x)` lets players enter one at a time.
//! Player `p` is `i`-pivotal when, once `p` has taken its position, the final
//! output is settled to be `≥ z_i` (or `< z_i`) however the later entrants
//! are placed, and this was not yet settled before `p` entered.
//!
//! Three detectors are provided: an explicit enumeration of all completions
//! ([`is_pivotal_bruteforce`]), the two-profile test on the extreme
//! completions ([`PivotContext::classify`]) and the incremental sweep used by
//! [`pivot_counts`]. They are tested against each other.

use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::error::{LadderError, Result};
use crate::game::{check_cap, strides, GameLadder, LevelTable, Orientation, OutputLevels, Profile};
use crate::influence::{relation_matrix, RelationMatrix};

/// Entry order: `sequence()[k]` is the player entering `k`-th (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntryOrder {
    sequence: Vec<usize>,
    rank: Vec<usize>,
}

impl EntryOrder {
    pub fn from_sequence(sequence: Vec<usize>) -> Result<Self> {
        let n = sequence.len();
        let mut rank = vec![usize::MAX; n];
        for (k, &p) in sequence.iter().enumerate() {
            if p >= n || rank[p] != usize::MAX {
                return Err(LadderError::DimensionMismatch(format!(
                    "entry order {sequence:?} is not a permutation of 0..{n}"
                )));
            }
            rank[p] = k;
        }
        Ok(EntryOrder { sequence, rank })
    }

    pub fn identity(n: usize) -> Self {
        EntryOrder {
            sequence: (0..n).collect(),
            rank: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    /// 0-based entry rank of `p`.
    pub fn rank(&self, p: usize) -> usize {
        self.rank[p]
    }

    /// The player entering right before `p`.
    pub fn prec(&self, p: usize) -> Option<usize> {
        self.rank[p].checked_sub(1).map(|k| self.sequence[k])
    }

    /// Exchanges the entry ranks of `p` and `q`.
    pub fn swapped(&self, p: usize, q: usize) -> EntryOrder {
        let mut out = self.clone();
        out.sequence.swap(self.rank[p], self.rank[q]);
        out.rank.swap(p, q);
        out
    }

    /// All `n!` orders, lexicographic in the entry sequence.
    pub fn all(n: usize) -> impl Iterator<Item = EntryOrder> {
        (0..n).permutations(n).map(|sequence| {
            let mut rank = vec![0; sequence.len()];
            for (k, &p) in sequence.iter().enumerate() {
                rank[p] = k;
            }
            EntryOrder { sequence, rank }
        })
    }
}

impl fmt::Display for EntryOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.sequence.iter().map(|p| p + 1).join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedAllocation {
    pub order: EntryOrder,
    pub profile: Profile,
}

impl OrderedAllocation {
    pub fn new(order: EntryOrder, profile: Profile) -> Result<Self> {
        if order.len() != profile.len() {
            return Err(LadderError::DimensionMismatch(format!(
                "order has {} players, profile has {}",
                order.len(),
                profile.len()
            )));
        }
        Ok(OrderedAllocation { order, profile })
    }

    /// Convenience constructor from a 0-based entry sequence and positions.
    pub fn from_parts(sequence: Vec<usize>, positions: Vec<u8>) -> Result<Self> {
        Self::new(EntryOrder::from_sequence(sequence)?, Profile::new(positions))
    }

    pub fn players(&self) -> usize {
        self.order.len()
    }

    fn check(&self, game: &GameLadder) -> Result<()> {
        if self.order.len() != game.players() {
            return Err(LadderError::DimensionMismatch(format!(
                "allocation has {} players, game has {}",
                self.order.len(),
                game.players()
            )));
        }
        game.check_profile(&self.profile)
    }

    /// All `n!·jⁿ` allocations: orders outermost, profiles in canonical order.
    pub fn all(n: usize, j: u8) -> impl Iterator<Item = OrderedAllocation> {
        EntryOrder::all(n).flat_map(move |order| {
            crate::game::profiles(n, j).map(move |profile| OrderedAllocation {
                order: order.clone(),
                profile,
            })
        })
    }
}

impl fmt::Display for OrderedAllocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "order {} x={}", self.order, self.profile)
    }
}

/// Which position later entrants are sent to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    /// Everyone after `p` at position `j`.
    Top,
    /// Everyone after `p` at position `1`.
    Bottom,
}

/// Players entering up to and including `p` keep their positions in `R`;
/// later entrants go to `j` (`Top`) or `1` (`Bottom`).
pub fn prefix_extreme(game: &GameLadder, r: &OrderedAllocation, p: usize, end: End) -> Result<Profile> {
    r.check(game)?;
    game.check_player(p)?;
    Ok(extreme_unchecked(r, p, end, game.levels()))
}

fn extreme_unchecked(r: &OrderedAllocation, p: usize, end: End, j: u8) -> Profile {
    let fill = match end {
        End::Top => j,
        End::Bottom => 1,
    };
    let cut = r.order.rank(p);
    let mut out = r.profile.clone();
    for &later in &r.order.sequence()[cut + 1..] {
        out.set(later, fill);
    }
    out
}

fn check_level(levels: &OutputLevels, i: usize) -> Result<()> {
    let max = levels.count().saturating_sub(1);
    if i == 0 || i > max {
        Err(LadderError::LevelOutOfRange { level: i, max })
    } else {
        Ok(())
    }
}

/// Ground truth: enumerates every completion of the players entering after
/// `p` (and after `prec(p)`) and applies the definition directly. Needs no
/// monotonicity.
pub fn is_pivotal_bruteforce(game: &GameLadder, r: &OrderedAllocation, i: usize, p: usize) -> Result<bool> {
    r.check(game)?;
    game.check_player(p)?;
    let levels = game.output_levels()?;
    check_level(&levels, i)?;
    let reaches = |x: &Profile| levels.rank_of(game.value(x.positions())) < i;

    let rank = r.order.rank(p);
    let after_p = &r.order.sequence()[rank + 1..];
    let after_prec = &r.order.sequence()[rank..];
    let (all_high, all_low) = completion_verdicts(r, after_p, game.levels(), &reaches);
    if !all_high && !all_low {
        return Ok(false);
    }
    if rank == 0 {
        return Ok(true);
    }
    let (prev_high, prev_low) = completion_verdicts(r, after_prec, game.levels(), &reaches);
    // all-high needs some low completion earlier, and vice versa
    Ok((all_high && !prev_high) || (all_low && !prev_low))
}

/// Returns (every completion reaches, no completion reaches).
fn completion_verdicts(
    r: &OrderedAllocation,
    free: &[usize],
    j: u8,
    reaches: &impl Fn(&Profile) -> bool,
) -> (bool, bool) {
    let mut x = r.profile.clone();
    for &a in free {
        x.set(a, 1);
    }
    let mut all_high = true;
    let mut all_low = true;
    loop {
        if reaches(&x) {
            all_low = false;
        } else {
            all_high = false;
        }
        if !all_high && !all_low {
            return (false, false);
        }
        let mut carry = true;
        for &a in free {
            if x.get(a) < j {
                x.set(a, x.get(a) + 1);
                carry = false;
                break;
            }
            x.set(a, 1);
        }
        if carry {
            return (all_high, all_low);
        }
    }
}

/// The two ways of being pivotal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PivotClass {
    /// Output is secured at `≥ z_i` by `p`'s move.
    Securer,
    /// Output is capped below `z_i` by `p`'s move.
    Blocker,
    None,
}

/// A monotone-validated game with its level table, ready for repeated
/// pivot queries.
#[derive(Clone, Debug)]
pub struct PivotContext {
    game: GameLadder,
    table: LevelTable,
}

impl PivotContext {
    /// Validates monotonicity in the declared orientation.
    pub fn new(game: &GameLadder) -> Result<Self> {
        game.require_monotone()?;
        Ok(PivotContext {
            game: game.clone(),
            table: game.level_table()?,
        })
    }

    pub fn game(&self) -> &GameLadder {
        &self.game
    }

    pub fn levels(&self) -> &OutputLevels {
        self.table.levels()
    }

    /// `k − 1`, the number of pivot levels.
    pub fn pivot_levels(&self) -> usize {
        self.levels().count().saturating_sub(1)
    }

    fn reaches(&self, x: &Profile, i: usize) -> bool {
        self.table.reaches(x.encode(self.game.levels()), i)
    }

    /// `(low completion end, position that minimizes p's contribution)`.
    fn low_end(&self) -> (End, u8) {
        match self.game.orientation() {
            Orientation::NonDecreasing => (End::Bottom, 1),
            Orientation::NonIncreasing => (End::Top, self.game.levels()),
        }
    }

    fn high_end(&self) -> (End, u8) {
        match self.game.orientation() {
            Orientation::NonDecreasing => (End::Top, self.game.levels()),
            Orientation::NonIncreasing => (End::Bottom, 1),
        }
    }

    /// Two-profile pivot test. For a nonincreasing game this is
    /// `f(x^{R_p^j}) ≥ z_i > f(x^{R_p^j} + (j − x_p)e^p)` (securer) or
    /// `f(x^{R_p^1}) < z_i ≤ f(x^{R_p^1} + (1 − x_p)e^p)` (blocker); for a
    /// nondecreasing game the two extremes trade places.
    pub fn classify(&self, r: &OrderedAllocation, i: usize, p: usize) -> Result<PivotClass> {
        r.check(&self.game)?;
        self.game.check_player(p)?;
        check_level(self.levels(), i)?;
        Ok(self.classify_unchecked(r, i, p))
    }

    pub(crate) fn classify_unchecked(&self, r: &OrderedAllocation, i: usize, p: usize) -> PivotClass {
        let j = self.game.levels();
        let (lo_end, lo_pos) = self.low_end();
        let lo = extreme_unchecked(r, p, lo_end, j);
        if self.reaches(&lo, i) && !self.reaches(&lo.with(p, lo_pos), i) {
            return PivotClass::Securer;
        }
        let (hi_end, hi_pos) = self.high_end();
        let hi = extreme_unchecked(r, p, hi_end, j);
        if !self.reaches(&hi, i) && self.reaches(&hi.with(p, hi_pos), i) {
            return PivotClass::Blocker;
        }
        PivotClass::None
    }

    pub fn is_pivotal(&self, r: &OrderedAllocation, i: usize, p: usize) -> Result<bool> {
        Ok(self.classify(r, i, p)? != PivotClass::None)
    }

    /// The unique `i`-pivotal player, scanning in entry order.
    pub fn find_pivotal(&self, r: &OrderedAllocation, i: usize) -> Result<usize> {
        r.check(&self.game)?;
        check_level(self.levels(), i)?;
        let found: Vec<usize> = r
            .order
            .sequence()
            .iter()
            .copied()
            .filter(|&p| self.classify_unchecked(r, i, p) != PivotClass::None)
            .collect();
        match found.as_slice() {
            [p] => Ok(*p),
            [] => Err(LadderError::NoPivot {
                level: i,
                allocation: r.to_string(),
            }),
            _ => Err(LadderError::MultiplePivots {
                level: i,
                players: found,
                allocation: r.to_string(),
            }),
        }
    }

    /// Exact `|R_ip⁺|` for every level (or just `level`) and player.
    pub fn pivot_counts(&self, level: Option<usize>) -> Result<PivotTable> {
        let k = self.levels().count();
        if k < 2 {
            return Err(LadderError::DegenerateRange);
        }
        let n = self.game.players();
        let j = self.game.levels();
        let total = allocation_count(n, j);
        check_cap(total, self.game.enum_cap())?;
        let selected: Vec<usize> = match level {
            Some(i) => {
                check_level(self.levels(), i)?;
                vec![i]
            }
            None => (1..k).collect(),
        };
        let orders: Vec<EntryOrder> = EntryOrder::all(n).collect();
        let zero = || vec![0u64; selected.len() * n];
        let flat = orders
            .par_iter()
            .map(|order| self.count_order(order, &selected))
            .try_reduce(zero, |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            })?;
        let counts: Vec<Vec<u64>> = flat.chunks(n).map(|c| c.to_vec()).collect();
        let total = total as u64;
        for (row, &i) in counts.iter().zip(&selected) {
            let sum: u64 = row.iter().sum();
            if sum != total {
                return Err(LadderError::InternalInconsistency(format!(
                    "level {i}: pivot counts sum to {sum}, expected {total}"
                )));
            }
        }
        Ok(PivotTable {
            levels: self.levels().values().to_vec(),
            level_indices: selected,
            counts,
            total_per_level: total,
        })
    }

    /// Counts for one entry order. The extreme completions after each prefix
    /// are maintained as profile indices: `low[t]`/`high[t]` fix the first
    /// `t` entrants and push the rest to the output-minimizing/maximizing end.
    fn count_order(&self, order: &EntryOrder, selected: &[usize]) -> Result<Vec<u64>> {
        let n = self.game.players();
        let j = self.game.levels();
        let stride = strides(n, j);
        let top_of: Vec<usize> = order
            .sequence()
            .iter()
            .map(|&p| (j as usize - 1) * stride[p])
            .collect();
        let rising = self.game.orientation() == Orientation::NonDecreasing;
        let mut counts = vec![0u64; selected.len() * n];
        let mut x = vec![1u8; n];
        let mut bottom = vec![0usize; n + 1];
        let mut top = vec![0usize; n + 1];
        let mut low_rank = vec![0u16; n + 1];
        let mut high_rank = vec![0u16; n + 1];
        let profiles = self.game.profile_count() as usize;
        for _ in 0..profiles {
            top[0] = top_of.iter().sum();
            bottom[0] = 0;
            for (t, &p) in order.sequence().iter().enumerate() {
                let fixed = (x[p] as usize - 1) * stride[p];
                bottom[t + 1] = bottom[t] + fixed;
                top[t + 1] = top[t] - top_of[t] + fixed;
            }
            for t in 0..=n {
                let (lo, hi) = if rising { (bottom[t], top[t]) } else { (top[t], bottom[t]) };
                low_rank[t] = self.table.rank(lo);
                high_rank[t] = self.table.rank(hi);
            }
            for (li, &i) in selected.iter().enumerate() {
                let i = i as u16;
                let mut hit = None;
                for t in 0..n {
                    let securer = low_rank[t + 1] < i && low_rank[t] >= i;
                    let blocker = high_rank[t + 1] >= i && high_rank[t] < i;
                    if securer || blocker {
                        if hit.is_some() {
                            return Err(self.uniqueness_error(order, &x, i as usize));
                        }
                        hit = Some(t);
                    }
                }
                match hit {
                    Some(t) => counts[li * n + order.sequence()[t]] += 1,
                    None => return Err(self.uniqueness_error(order, &x, i as usize)),
                }
            }
            // next profile, player 0 least significant
            for v in x.iter_mut() {
                if *v < j {
                    *v += 1;
                    break;
                }
                *v = 1;
            }
        }
        Ok(counts)
    }

    fn uniqueness_error(&self, order: &EntryOrder, x: &[u8], i: usize) -> LadderError {
        let r = OrderedAllocation {
            order: order.clone(),
            profile: Profile::new(x.to_vec()),
        };
        match self.find_pivotal(&r, i) {
            Err(e) => e,
            Ok(_) => LadderError::InternalInconsistency(format!(
                "sweep and direct test disagree on {r} at level {i}"
            )),
        }
    }
}

/// `n!·jⁿ`, saturating.
pub fn allocation_count(n: usize, j: u8) -> u128 {
    let fact = (1..=n as u128).fold(1u128, |a, b| a.saturating_mul(b));
    fact.saturating_mul(crate::game::profile_count(n, j))
}

/// Extreme-profile test; see [`PivotContext::classify`].
pub fn is_pivotal_extremes(game: &GameLadder, r: &OrderedAllocation, i: usize, p: usize) -> Result<bool> {
    PivotContext::new(game)?.is_pivotal(r, i, p)
}

pub fn find_pivotal(game: &GameLadder, r: &OrderedAllocation, i: usize) -> Result<usize> {
    PivotContext::new(game)?.find_pivotal(r, i)
}

pub fn pivot_counts(game: &GameLadder, level: Option<usize>) -> Result<PivotTable> {
    let ctx = PivotContext::new(game)?;
    if ctx.levels().count() < 2 {
        return Err(LadderError::DegenerateRange);
    }
    ctx.pivot_counts(level)
}

/// `counts[li][p]` is `|R_ip⁺|` for `i = level_indices[li]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PivotTable {
    #[serde(skip)]
    pub levels: Vec<f64>,
    pub level_indices: Vec<usize>,
    pub counts: Vec<Vec<u64>>,
    pub total_per_level: u64,
}

impl PivotTable {
    /// `|R_ip⁺|` for 1-based level `i`, if that level was counted.
    pub fn count(&self, i: usize, p: usize) -> Option<u64> {
        let li = self.level_indices.iter().position(|&x| x == i)?;
        Some(self.counts[li][p])
    }

    /// `|R_p|`: pivot count summed over the counted levels.
    pub fn player_totals(&self) -> Vec<u64> {
        let n = self.counts.first().map_or(0, |r| r.len());
        (0..n).map(|p| self.counts.iter().map(|row| row[p]).sum()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem2Violation {
    pub p: usize,
    pub q: usize,
    pub level: usize,
    pub count_p: u64,
    pub count_q: u64,
}

/// Count monotonicity along `≽`, in both directions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem2Report {
    pub config: &'static str,
    pub pairs_checked: usize,
    /// `p ≽ q ⟹ counts[p] ≥ counts[q]` at every level.
    pub as_stated: bool,
    /// `p ≽ q ⟹ counts[p] ≤ counts[q]` at every level.
    pub reversed: bool,
    pub violations: Vec<Theorem2Violation>,
    pub reversed_violations: Vec<Theorem2Violation>,
}

/// Reads the game in `config`'s orientation, computes `≽` and the pivot
/// table there and compares them.
pub fn theorem2_check(game: &GameLadder, config: Config) -> Result<(Theorem2Report, PivotTable, RelationMatrix)> {
    let oriented = config.prepare(game);
    let ctx = PivotContext::new(&oriented)?;
    let table = ctx.pivot_counts(None)?;
    let m = relation_matrix(&oriented)?;
    Ok((theorem2_from(&m, &table, config), table, m))
}

pub fn theorem2_from(m: &RelationMatrix, table: &PivotTable, config: Config) -> Theorem2Report {
    let n = m.players();
    let mut pairs_checked = 0;
    let mut violations = Vec::new();
    let mut reversed_violations = Vec::new();
    for p in 0..n {
        for q in (0..n).filter(|&q| q != p) {
            if !m.geq(p, q) {
                continue;
            }
            pairs_checked += 1;
            for (row, &level) in table.counts.iter().zip(&table.level_indices) {
                let v = Theorem2Violation {
                    p,
                    q,
                    level,
                    count_p: row[p],
                    count_q: row[q],
                };
                if row[p] < row[q] {
                    violations.push(v);
                } else if row[p] > row[q] {
                    reversed_violations.push(v);
                }
            }
        }
    }
    Theorem2Report {
        config: config.as_str(),
        pairs_checked,
        as_stated: violations.is_empty(),
        reversed: reversed_violations.is_empty(),
        violations,
        reversed_violations,
    }
}

/// Machine-readable pivot report. Players are 1-based.
#[derive(Clone, Debug, Serialize)]
pub struct PivotReport {
    pub levels: Vec<f64>,
    pub counts: Vec<Vec<u64>>,
    pub total_per_level: u64,
    pub theorem2: Theorem2Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem2Json {
    pub as_stated: bool,
    pub reversed: bool,
    /// `[p, q, i, count_p, count_q]`.
    pub violations: Vec<[u64; 5]>,
}

impl PivotReport {
    pub fn new(table: &PivotTable, t2: &Theorem2Report) -> Self {
        PivotReport {
            levels: table.levels.clone(),
            counts: table.counts.clone(),
            total_per_level: table.total_per_level,
            theorem2: Theorem2Json {
                as_stated: t2.as_stated,
                reversed: t2.reversed,
                violations: t2
                    .violations
                    .iter()
                    .map(|v| {
                        [
                            v.p as u64 + 1,
                            v.q as u64 + 1,
                            v.level as u64,
                            v.count_p,
                            v.count_q,
                        ]
                    })
                    .collect(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn alloc(seq: &[usize], x: &[u8]) -> OrderedAllocation {
        OrderedAllocation::from_parts(seq.to_vec(), x.to_vec()).unwrap()
    }

    #[test]
    fn entry_order_basics() {
        let o = EntryOrder::from_sequence(vec![2, 0, 1]).unwrap();
        assert_eq!(o.rank(2), 0);
        assert_eq!(o.rank(1), 2);
        assert_eq!(o.prec(1), Some(0));
        assert_eq!(o.prec(2), None);
        assert_eq!(o.to_string(), "(3,1,2)");
        let s = o.swapped(2, 1);
        assert_eq!(s.sequence(), &[1, 0, 2]);
        assert_eq!(s.swapped(2, 1), o);
        assert!(EntryOrder::from_sequence(vec![0, 0]).is_err());
        assert_eq!(EntryOrder::all(4).count(), 24);
    }

    #[test]
    fn prefix_extreme_examples() {
        let g = builtin::cap_dual();
        let last = alloc(&[0, 1], &[2, 1]);
        assert_eq!(prefix_extreme(&g, &last, 1, End::Top).unwrap(), Profile::new(vec![2, 1]));
        assert_eq!(prefix_extreme(&g, &last, 1, End::Bottom).unwrap(), Profile::new(vec![2, 1]));
        assert_eq!(prefix_extreme(&g, &last, 0, End::Top).unwrap(), Profile::new(vec![2, 2]));
        assert_eq!(prefix_extreme(&g, &last, 0, End::Bottom).unwrap(), Profile::new(vec![2, 1]));
        let r = alloc(&[1, 0], &[1, 1]);
        assert_eq!(prefix_extreme(&g, &r, 1, End::Top).unwrap(), Profile::new(vec![2, 1]));
        assert!(prefix_extreme(&builtin::prop2(), &r, 1, End::Top).is_err());
    }

    #[test]
    fn bruteforce_capdual() {
        let g = builtin::cap_dual();
        let r = alloc(&[0, 1], &[2, 1]);
        assert!(is_pivotal_bruteforce(&g, &r, 1, 1).unwrap());
        assert!(!is_pivotal_bruteforce(&g, &r, 1, 0).unwrap());
    }

    #[test]
    fn constant_game_has_no_levels() {
        let g = GameLadder::constant(2, 2, Orientation::NonDecreasing, 1.0).unwrap();
        let r = alloc(&[0, 1], &[1, 1]);
        for i in 0..3 {
            assert!(matches!(
                is_pivotal_bruteforce(&g, &r, i, 0),
                Err(LadderError::LevelOutOfRange { .. })
            ));
        }
        assert_eq!(pivot_counts(&g, None), Err(LadderError::DegenerateRange));
    }

    #[test]
    fn extremes_examples() {
        let cap21 = builtin::cap21();
        assert!(is_pivotal_extremes(&cap21, &alloc(&[1, 0], &[1, 1]), 1, 1).unwrap());
        let dual = builtin::cap_dual();
        let ctx = PivotContext::new(&dual).unwrap();
        assert_eq!(ctx.classify(&alloc(&[0, 1], &[2, 2]), 1, 1).unwrap(), PivotClass::Securer);
        assert_eq!(ctx.classify(&alloc(&[0, 1], &[2, 1]), 1, 1).unwrap(), PivotClass::Blocker);
        for r in OrderedAllocation::all(2, 2) {
            assert!(!ctx.is_pivotal(&r, 1, 0).unwrap());
        }
    }

    #[test]
    fn extremes_reject_non_monotone() {
        let g = GameLadder::new(7, 3, Orientation::NonDecreasing, builtin::prop2().representation().clone()).unwrap();
        let r = OrderedAllocation::new(EntryOrder::identity(7), Profile::uniform(7, 1)).unwrap();
        assert!(matches!(is_pivotal_extremes(&g, &r, 1, 0), Err(LadderError::NotMonotone { .. })));
    }

    #[test]
    fn find_pivotal_examples() {
        assert_eq!(find_pivotal(&builtin::cap_dual(), &alloc(&[0, 1], &[2, 1]), 1).unwrap(), 1);
        for n in 2..=3 {
            let g = builtin::unanimity(n, 2).unwrap();
            let ctx = PivotContext::new(&g).unwrap();
            for order in EntryOrder::all(n) {
                let top = OrderedAllocation::new(order.clone(), Profile::uniform(n, 2)).unwrap();
                let last = *order.sequence().last().unwrap();
                assert_eq!(ctx.find_pivotal(&top, 1).unwrap(), last);
            }
            let mut x = Profile::uniform(n, 2);
            x.set(0, 1);
            let r = OrderedAllocation::new(EntryOrder::identity(n), x).unwrap();
            assert_eq!(ctx.find_pivotal(&r, 1).unwrap(), 0);
        }
    }

    #[test]
    fn capdual_counts() {
        let t = pivot_counts(&builtin::cap_dual(), Some(1)).unwrap();
        assert_eq!(t.counts, vec![vec![0, 8]]);
        assert_eq!(t.total_per_level, 8);
        assert_eq!(t.count(1, 1), Some(8));
        assert_eq!(t.player_totals(), vec![0, 8]);
    }

    #[test]
    fn symmetric_game_equal_counts() {
        let g = GameLadder::from_fn(3, 3, Orientation::NonDecreasing, |x| {
            let s: u32 = x.positions().iter().map(|&t| t as u32).sum();
            (s / 3) as f64
        })
        .unwrap();
        let t = pivot_counts(&g, None).unwrap();
        for row in &t.counts {
            assert!(row.iter().all(|&c| c == row[0]), "{row:?}");
        }
    }

    #[test]
    fn count_monotonicity_micro_instances() {
        let (rep, table, m) = theorem2_check(&builtin::cap_dual(), Config::Canonical).unwrap();
        assert!(m.dominates(1, 0));
        assert_eq!(table.counts, vec![vec![0, 8]]);
        assert!(rep.as_stated && !rep.reversed);

        let (rep, table, m) = theorem2_check(&builtin::cap21(), Config::Printed).unwrap();
        assert!(m.dominates(0, 1));
        assert_eq!(table.counts, vec![vec![0, 8]]);
        assert!(!rep.as_stated && rep.reversed);
        assert_eq!(
            rep.violations,
            vec![Theorem2Violation { p: 0, q: 1, level: 1, count_p: 0, count_q: 8 }]
        );

        let (rep, ..) = theorem2_check(&builtin::cap21(), Config::Canonical).unwrap();
        assert!(rep.as_stated);
    }

    #[test]
    fn sweep_matches_direct_classification() {
        let g = builtin::prop2().dualize();
        let ctx = PivotContext::new(&g).unwrap();
        let order = EntryOrder::from_sequence(vec![3, 0, 6, 2, 5, 1, 4]).unwrap();
        let fast = ctx.count_order(&order, &[1]).unwrap();
        let mut slow = vec![0u64; 7];
        for x in crate::game::profiles(7, 3) {
            let r = OrderedAllocation::new(order.clone(), x).unwrap();
            slow[ctx.find_pivotal(&r, 1).unwrap()] += 1;
        }
        assert_eq!(fast, slow);
    }

    #[test]
    fn report_json_shape() {
        let (rep, table, _) = theorem2_check(&builtin::cap21(), Config::Printed).unwrap();
        let json = serde_json::to_value(PivotReport::new(&table, &rep)).unwrap();
        assert_eq!(json["total_per_level"], 8);
        assert_eq!(json["theorem2"]["as_stated"], false);
        assert_eq!(json["theorem2"]["violations"][0], serde_json::json!([1, 2, 1, 0, 8]));
        assert_eq!(json["levels"], serde_json::json!([1.0, 0.0]));
    }
}
