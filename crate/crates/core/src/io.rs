//! Game files (JSON) and plain-text output tables.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{LadderError, Result};
use crate::game::{check_cap, profile_count, GameLadder, Orientation, Profile, Representation};

const TABLE_MAGIC: &str = "ladder-table v1";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameFile {
    players: usize,
    levels: u8,
    orientation: OrientationName,
    representation: ReprFile,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum OrientationName {
    NonDecreasing,
    NonIncreasing,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum ReprFile {
    Explicit {
        #[serde(serialize_with = "numbers")]
        outputs: Vec<f64>,
    },
    Downset {
        generators: Vec<Vec<u8>>,
        #[serde(default = "one", serialize_with = "number")]
        inside: f64,
        #[serde(default, serialize_with = "number")]
        outside: f64,
    },
    Upset {
        generators: Vec<Vec<u8>>,
        #[serde(default = "one", serialize_with = "number")]
        inside: f64,
        #[serde(default, serialize_with = "number")]
        outside: f64,
    },
    Weighted {
        weights: Vec<Vec<f64>>,
        thresholds: Vec<f64>,
        values: Vec<f64>,
    },
}

fn one() -> f64 {
    1.0
}

// Integral values are written without a fractional part.
fn number<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.fract() == 0.0 && v.abs() < 9.0e15 {
        s.serialize_i64(*v as i64)
    } else {
        s.serialize_f64(*v)
    }
}

fn numbers<S: Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        if x.fract() == 0.0 && x.abs() < 9.0e15 {
            seq.serialize_element(&(*x as i64))?;
        } else {
            seq.serialize_element(x)?;
        }
    }
    seq.end()
}

impl From<OrientationName> for Orientation {
    fn from(o: OrientationName) -> Self {
        match o {
            OrientationName::NonDecreasing => Orientation::NonDecreasing,
            OrientationName::NonIncreasing => Orientation::NonIncreasing,
        }
    }
}

impl From<Orientation> for OrientationName {
    fn from(o: Orientation) -> Self {
        match o {
            Orientation::NonDecreasing => OrientationName::NonDecreasing,
            Orientation::NonIncreasing => OrientationName::NonIncreasing,
        }
    }
}

/// Parses and validates a game file.
pub fn parse_game(json: &str) -> Result<GameLadder> {
    let file: GameFile =
        serde_json::from_str(json).map_err(|e| LadderError::Parse(e.to_string()))?;
    let profiles = |gens: Vec<Vec<u8>>| gens.into_iter().map(Profile::new).collect();
    let repr = match file.representation {
        ReprFile::Explicit { outputs } => Representation::Explicit(outputs),
        ReprFile::Downset {
            generators,
            inside,
            outside,
        } => Representation::DownSet {
            generators: profiles(generators),
            inside,
            outside,
        },
        ReprFile::Upset {
            generators,
            inside,
            outside,
        } => Representation::UpSet {
            generators: profiles(generators),
            inside,
            outside,
        },
        ReprFile::Weighted {
            weights,
            thresholds,
            values,
        } => Representation::Weighted {
            weights,
            thresholds,
            values,
        },
    };
    GameLadder::new(file.players, file.levels, file.orientation.into(), repr)
}

pub fn game_to_json(game: &GameLadder) -> String {
    let raw = |gens: &[Profile]| gens.iter().map(|g| g.positions().to_vec()).collect();
    let representation = match game.representation() {
        Representation::Explicit(outputs) => ReprFile::Explicit {
            outputs: outputs.clone(),
        },
        Representation::DownSet {
            generators,
            inside,
            outside,
        } => ReprFile::Downset {
            generators: raw(generators),
            inside: *inside,
            outside: *outside,
        },
        Representation::UpSet {
            generators,
            inside,
            outside,
        } => ReprFile::Upset {
            generators: raw(generators),
            inside: *inside,
            outside: *outside,
        },
        Representation::Weighted {
            weights,
            thresholds,
            values,
        } => ReprFile::Weighted {
            weights: weights.clone(),
            thresholds: thresholds.clone(),
            values: values.clone(),
        },
    };
    let file = GameFile {
        players: game.players(),
        levels: game.levels(),
        orientation: game.orientation().into(),
        representation,
    };
    serde_json::to_string(&file).expect("game file serializes")
}

/// Writes every output in canonical profile order under a
/// `ladder-table v1 n=<n> j=<j>` header.
pub fn export_table(game: &GameLadder) -> Result<String> {
    check_cap(game.profile_count(), game.enum_cap())?;
    let total = game.profile_count() as usize;
    let mut out = format!("{TABLE_MAGIC} n={} j={}\n", game.players(), game.levels());
    for idx in 0..total {
        out.push_str(&format!("{}\n", game.value_at(idx)));
    }
    Ok(out)
}

/// Reads a table written by [`export_table`] into an explicit game.
pub fn import_table(text: &str, orientation: Orientation) -> Result<GameLadder> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| LadderError::Parse("empty table".into()))?;
    let rest = header
        .strip_prefix(TABLE_MAGIC)
        .ok_or_else(|| LadderError::Parse(format!("line 1: expected header {TABLE_MAGIC:?}")))?;
    let mut n = None;
    let mut j = None;
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("n", v)) => n = v.parse::<usize>().ok(),
            Some(("j", v)) => j = v.parse::<u8>().ok(),
            _ => return Err(LadderError::Parse(format!("line 1: unexpected field {field:?}"))),
        }
    }
    let (n, j) = n
        .zip(j)
        .ok_or_else(|| LadderError::Parse("line 1: header needs n=<n> j=<j>".into()))?;
    let expected = profile_count(n, j);
    let mut outputs = Vec::new();
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| LadderError::Parse(format!("line {}: bad value {line:?}", lineno + 1)))?;
        outputs.push(v);
    }
    if outputs.len() as u128 != expected {
        return Err(LadderError::Parse(format!(
            "table has {} values, header promises {expected}",
            outputs.len()
        )));
    }
    GameLadder::new(n, j, orientation, Representation::Explicit(outputs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::game::profiles;

    #[test]
    fn parse_downset_file() {
        let g = parse_game(
            r#"{"players":2,"levels":2,"orientation":"non_increasing",
                "representation":{"kind":"downset","generators":[[2,1]],"inside":1,"outside":0}}"#,
        )
        .unwrap();
        assert_eq!(g, builtin::cap21());
    }

    #[test]
    fn writes_integral_numbers_plainly() {
        let json = game_to_json(&builtin::cap_dual());
        assert_eq!(
            json,
            r#"{"players":2,"levels":2,"orientation":"non_decreasing","representation":{"kind":"upset","generators":[[1,2]],"inside":1,"outside":0}}"#
        );
    }

    #[test]
    fn json_round_trip_all_kinds() {
        let weighted = GameLadder::new(
            2,
            3,
            Orientation::NonDecreasing,
            Representation::Weighted {
                weights: vec![vec![0.0, 0.5, 2.0], vec![0.0, 1.0, 1.0]],
                thresholds: vec![2.5, 1.0],
                values: vec![2.0, 1.0, 0.0],
            },
        )
        .unwrap();
        let explicit = GameLadder::from_fn(2, 3, Orientation::NonDecreasing, |x| {
            x.positions().iter().map(|&t| t as f64 * 0.25).sum()
        })
        .unwrap();
        for g in [builtin::prop2(), builtin::cap_dual(), weighted, explicit] {
            assert_eq!(parse_game(&game_to_json(&g)).unwrap(), g);
        }
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = parse_game("{\"players\": 2,\n \"levels\": \"x\"}").unwrap_err();
        match err {
            LadderError::Parse(msg) => assert!(msg.contains("line 2"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_game(
            r#"{"players":2,"levels":2,"orientation":"sideways","representation":{"kind":"explicit","outputs":[0,0,0,0]}}"#
        )
        .is_err());
    }

    #[test]
    fn table_round_trip() {
        let g = builtin::prop2();
        let text = export_table(&g).unwrap();
        assert!(text.starts_with("ladder-table v1 n=7 j=3\n"));
        assert_eq!(text.lines().count(), 1 + 2187);
        let back = import_table(&text, Orientation::NonIncreasing).unwrap();
        for x in profiles(7, 3).step_by(5) {
            assert_eq!(back.evaluate(&x).unwrap(), g.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn table_header_is_checked() {
        assert!(import_table("ladder-table v2 n=1 j=2\n0\n1\n", Orientation::NonDecreasing).is_err());
        assert!(import_table("ladder-table v1 n=1 j=2\n0\n", Orientation::NonDecreasing).is_err());
        assert!(import_table("ladder-table v1 n=1 j=2\n0\nx\n", Orientation::NonDecreasing).is_err());
    }
}
