//! Built-in games addressable by name (`builtin:prop2`, `builtin:cap21`, ...).

use crate::error::{LadderError, Result};
use crate::game::{GameLadder, Orientation, Profile, Representation};

/// Generators of the seven-player, three-level incompleteness example.
pub const PROP2_GENERATORS: [[u8; 7]; 3] = [
    [3, 1, 2, 1, 1, 2, 2],
    [1, 3, 2, 1, 1, 2, 2],
    [1, 2, 3, 1, 1, 2, 2],
];

/// `f(x) = 1` iff `x` lies below one of [`PROP2_GENERATORS`]; nonincreasing.
pub fn prop2() -> GameLadder {
    GameLadder::new(
        7,
        3,
        Orientation::NonIncreasing,
        Representation::DownSet {
            generators: PROP2_GENERATORS
                .iter()
                .map(|g| Profile::new(g.to_vec()))
                .collect(),
            inside: 1.0,
            outside: 0.0,
        },
    )
    .expect("built-in game is valid")
}

/// Two players, two levels: `f(x) = 1` iff `x ≤ (2,1)`.
pub fn cap21() -> GameLadder {
    GameLadder::new(
        2,
        2,
        Orientation::NonIncreasing,
        Representation::DownSet {
            generators: vec![Profile::new(vec![2, 1])],
            inside: 1.0,
            outside: 0.0,
        },
    )
    .expect("built-in game is valid")
}

/// The dual of [`cap21`]: `g(x) = 1` iff `x ≥ (1,2)`.
pub fn cap_dual() -> GameLadder {
    GameLadder::new(
        2,
        2,
        Orientation::NonDecreasing,
        Representation::UpSet {
            generators: vec![Profile::new(vec![1, 2])],
            inside: 1.0,
            outside: 0.0,
        },
    )
    .expect("built-in game is valid")
}

/// `f(x) = 1` iff every player holds the top position.
pub fn unanimity(n: usize, j: u8) -> Result<GameLadder> {
    GameLadder::new(
        n,
        j,
        Orientation::NonDecreasing,
        Representation::UpSet {
            generators: vec![Profile::uniform(n, j)],
            inside: 1.0,
            outside: 0.0,
        },
    )
}

/// Resolves `prop2`, `cap21`, `cap-dual`, `unanimity:<n>:<j>` and
/// `constant:<n>:<j>:<value>` (the part after `builtin:`).
pub fn by_name(name: &str) -> Result<GameLadder> {
    let mut parts = name.split(':');
    let head = parts.next().unwrap_or_default();
    let rest: Vec<&str> = parts.collect();
    let int = |s: &str| -> Result<usize> {
        s.parse()
            .map_err(|_| LadderError::Parse(format!("bad number {s:?} in builtin:{name}")))
    };
    match (head, rest.as_slice()) {
        ("prop2", []) => Ok(prop2()),
        ("cap21", []) => Ok(cap21()),
        ("cap-dual", []) => Ok(cap_dual()),
        ("unanimity", [n, j]) => unanimity(int(n)?, level_count(int(j)?)?),
        ("constant", [n, j, v]) => {
            let value: f64 = v
                .parse()
                .map_err(|_| LadderError::Parse(format!("bad value {v:?} in builtin:{name}")))?;
            GameLadder::constant(int(n)?, level_count(int(j)?)?, Orientation::NonDecreasing, value)
        }
        _ => Err(LadderError::Parse(format!("unknown built-in game {name:?}"))),
    }
}

fn level_count(j: usize) -> Result<u8> {
    u8::try_from(j).map_err(|_| LadderError::Parse(format!("level count {j} too large")))
}
