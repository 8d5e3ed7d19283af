//! Seeded random games and exhaustive families of small monotone games.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{profiles, GameLadder, Orientation, Profile, Representation};

/// The families the random generator draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameKind {
    UpSet,
    DownSet,
    Weighted,
    /// `w[p][t] = c_p · g(t)`: always linear.
    SortedWeighted,
    /// Sum of two up-set indicators (up to three output levels).
    StackedUpSets,
}

impl GameKind {
    pub const ALL: [GameKind; 5] = [
        GameKind::UpSet,
        GameKind::DownSet,
        GameKind::Weighted,
        GameKind::SortedWeighted,
        GameKind::StackedUpSets,
    ];
}

#[derive(Clone, Debug)]
pub struct SuiteSpec {
    pub seed: u64,
    pub count: usize,
    pub max_players: usize,
    pub max_levels: u8,
    /// Every game is delivered in this orientation (dualized if needed).
    pub orientation: Orientation,
    /// Skip games with a single output level.
    pub require_pivot_levels: bool,
}

impl SuiteSpec {
    pub fn new(seed: u64, count: usize, max_players: usize, max_levels: u8, orientation: Orientation) -> Self {
        SuiteSpec {
            seed,
            count,
            max_players,
            max_levels,
            orientation,
            require_pivot_levels: true,
        }
    }
}

/// A deterministic suite cycling through every [`GameKind`], so the sorted
/// weighted family (and hence some linear games) is always present once
/// `count ≥ 4`. Player counts start at 2.
pub fn random_suite(spec: &SuiteSpec) -> Vec<GameLadder> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    let mut attempt = 0usize;
    while out.len() < spec.count {
        let kind = GameKind::ALL[attempt % GameKind::ALL.len()];
        attempt += 1;
        let n = rng.gen_range(2..=spec.max_players.max(2));
        let j = rng.gen_range(2..=spec.max_levels.max(2));
        let game = random_game(&mut rng, kind, n, j).oriented(spec.orientation);
        if spec.require_pivot_levels
            && game.output_levels().map(|l| l.count() < 2).unwrap_or(true)
        {
            continue;
        }
        out.push(game);
    }
    out
}

/// One monotone game of the given family. Up-set and weighted families are
/// nondecreasing, the down-set family is nonincreasing.
pub fn random_game<R: Rng>(rng: &mut R, kind: GameKind, n: usize, j: u8) -> GameLadder {
    match kind {
        GameKind::UpSet | GameKind::DownSet => {
            let count = rng.gen_range(1..=3);
            let generators = (0..count).map(|_| random_profile(rng, n, j)).collect();
            let (orientation, repr) = if kind == GameKind::UpSet {
                (
                    Orientation::NonDecreasing,
                    Representation::UpSet {
                        generators,
                        inside: 1.0,
                        outside: 0.0,
                    },
                )
            } else {
                (
                    Orientation::NonIncreasing,
                    Representation::DownSet {
                        generators,
                        inside: 1.0,
                        outside: 0.0,
                    },
                )
            };
            GameLadder::new(n, j, orientation, repr).expect("generated game is valid")
        }
        GameKind::Weighted => {
            let weights: Vec<Vec<f64>> = (0..n).map(|_| rising_row(rng, j, 3)).collect();
            weighted(rng, n, j, weights)
        }
        GameKind::SortedWeighted => {
            let shape = rising_row(rng, j, 3);
            let scale: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
            let weights = scale
                .iter()
                .map(|&c| shape.iter().map(|&g| g * c as f64).collect())
                .collect();
            weighted(rng, n, j, weights)
        }
        GameKind::StackedUpSets => {
            let a: Vec<Profile> = (0..rng.gen_range(1..=2)).map(|_| random_profile(rng, n, j)).collect();
            let b: Vec<Profile> = (0..rng.gen_range(1..=2)).map(|_| random_profile(rng, n, j)).collect();
            let inside = |gens: &[Profile], x: &Profile| gens.iter().any(|g| g.is_below(x)) as u8 as f64;
            GameLadder::from_fn(n, j, Orientation::NonDecreasing, |x| inside(&a, x) + inside(&b, x))
                .expect("generated game is valid")
        }
    }
}

fn random_profile<R: Rng>(rng: &mut R, n: usize, j: u8) -> Profile {
    Profile::new((0..n).map(|_| rng.gen_range(1..=j)).collect())
}

/// Nondecreasing row starting at zero with integer steps in `0..=max_step`.
fn rising_row<R: Rng>(rng: &mut R, j: u8, max_step: u32) -> Vec<f64> {
    let mut acc = 0u32;
    (0..j)
        .map(|t| {
            if t > 0 {
                acc += rng.gen_range(0..=max_step);
            }
            acc as f64
        })
        .collect()
}

fn weighted<R: Rng>(rng: &mut R, n: usize, j: u8, weights: Vec<Vec<f64>>) -> GameLadder {
    let max_total: f64 = weights.iter().map(|row| row[j as usize - 1]).sum();
    let top = max_total.max(1.0) as u32;
    let levels = rng.gen_range(1..=2);
    let mut thresholds: Vec<f64> = (0..levels).map(|_| rng.gen_range(1..=top) as f64).collect();
    thresholds.sort_by(|a, b| b.total_cmp(a));
    thresholds.dedup();
    let values = (0..=thresholds.len()).rev().map(|v| v as f64).collect();
    GameLadder::new(
        n,
        j,
        Orientation::NonDecreasing,
        Representation::Weighted {
            weights,
            thresholds,
            values,
        },
    )
    .expect("generated game is valid")
}

/// Arbitrary (generally non-monotone) explicit game with values in `0..levels`.
pub fn random_table_game<R: Rng>(rng: &mut R, n: usize, j: u8, levels: u32, orientation: Orientation) -> GameLadder {
    let total = crate::game::profile_count(n, j) as usize;
    let outputs = (0..total).map(|_| rng.gen_range(0..levels) as f64).collect();
    GameLadder::new(n, j, orientation, Representation::Explicit(outputs)).expect("generated game is valid")
}

/// Every up-set of the grid `{1..j}ⁿ` as a nondecreasing 0/1 game,
/// including the empty and the full up-set.
pub fn all_upset_games(n: usize, j: u8) -> Vec<GameLadder> {
    let total = crate::game::profile_count(n, j) as usize;
    let stride = crate::game::strides(n, j);
    let all: Vec<Profile> = profiles(n, j).collect();
    let mut member = vec![false; total];
    let mut out = Vec::new();
    // Indices are visited from the top down so every upper cover is decided first.
    fn recurse(
        idx: usize,
        all: &[Profile],
        stride: &[usize],
        j: u8,
        member: &mut [bool],
        out: &mut Vec<Vec<bool>>,
    ) {
        if idx == 0 {
            out.push(member.to_vec());
            return;
        }
        let cur = idx - 1;
        let x = &all[cur];
        let covers_in = (0..x.len())
            .filter(|&p| x.get(p) < j)
            .all(|p| member[cur + stride[p]]);
        member[cur] = false;
        recurse(cur, all, stride, j, member, out);
        if covers_in {
            member[cur] = true;
            recurse(cur, all, stride, j, member, out);
            member[cur] = false;
        }
    }
    let mut sets = Vec::new();
    recurse(total, &all, &stride, j, &mut member, &mut sets);
    for set in sets {
        let outputs = set.into_iter().map(|b| b as u8 as f64).collect();
        out.push(
            GameLadder::new(n, j, Orientation::NonDecreasing, Representation::Explicit(outputs))
                .expect("enumerated game is valid"),
        );
    }
    out
}
