use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

/// One of the five bosonic modes, in the fixed quadrature ordering
/// `(b1, b2, m, c, a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Mechanical mode of the YIG sphere.
    B1,
    /// Mechanical mode of the silica sphere.
    B2,
    /// Magnon (Kittel) mode.
    M,
    /// Optical whispering-gallery mode.
    C,
    /// Microwave cavity mode.
    A,
}

impl Mode {
    pub const ALL: [Mode; 5] = [Mode::B1, Mode::B2, Mode::M, Mode::C, Mode::A];

    /// Position of the mode in the ordering; its quadratures sit at
    /// `2 * index` (X) and `2 * index + 1` (Y).
    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn x(self) -> usize {
        2 * self.index()
    }

    pub const fn y(self) -> usize {
        2 * self.index() + 1
    }

    pub const fn label(self) -> &'static str {
        match self {
            Mode::B1 => "b1",
            Mode::B2 => "b2",
            Mode::M => "m",
            Mode::C => "c",
            Mode::A => "a",
        }
    }

    /// All ten unordered pairs, each listed once in ordering order.
    pub fn pairs() -> impl Iterator<Item = (Mode, Mode)> {
        Mode::ALL
            .into_iter()
            .enumerate()
            .flat_map(|(i, p)| Mode::ALL[i + 1..].iter().map(move |&q| (p, q)))
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "b1" => Ok(Mode::B1),
            "b2" => Ok(Mode::B2),
            "m" => Ok(Mode::M),
            "c" => Ok(Mode::C),
            "a" => Ok(Mode::A),
            other => Err(Error::Usage(format!(
                "unknown mode `{other}` (expected one of b1, b2, m, c, a)"
            ))),
        }
    }
}
