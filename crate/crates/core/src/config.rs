use std::fmt;
use std::str::FromStr;

use crate::error::LadderError;
use crate::game::{GameLadder, Orientation};

/// Which orientation a game is read in before relations and pivot tests are
/// applied.
///
/// `Canonical` reads every game as nondecreasing, with the pivot test built
/// from the bottom completion for securing and the top completion for
/// blocking. `Printed` reads every game as nonincreasing, where the roles of
/// the two completions are exchanged. The influence relation is always the
/// promotion inequality, evaluated on the oriented game.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Config {
    #[default]
    Canonical,
    Printed,
}

impl Config {
    pub fn orientation(self) -> Orientation {
        match self {
            Config::Canonical => Orientation::NonDecreasing,
            Config::Printed => Orientation::NonIncreasing,
        }
    }

    /// The game in this configuration's orientation (dualized if needed).
    pub fn prepare(self, game: &GameLadder) -> GameLadder {
        game.oriented(self.orientation())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Config::Canonical => "canonical",
            Config::Printed => "printed",
        }
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Config {
    type Err = LadderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "canonical" => Ok(Config::Canonical),
            "printed" => Ok(Config::Printed),
            other => Err(LadderError::Parse(format!(
                "unknown configuration {other:?}, expected canonical or printed"
            ))),
        }
    }
}
