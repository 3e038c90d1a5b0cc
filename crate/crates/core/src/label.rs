use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A leaf label. The derived order is `a < b < c < 1 < 2 < ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    A,
    B,
    C,
    /// Numbered marked point; always at least 1.
    Num(usize),
}

impl Label {
    /// Position of the label in the standard label set `a, b, c, 1, 2, ...`.
    pub fn rank(self) -> usize {
        match self {
            Label::A => 0,
            Label::B => 1,
            Label::C => 2,
            Label::Num(i) => i + 2,
        }
    }

    pub fn from_rank(rank: usize) -> Label {
        match rank {
            0 => Label::A,
            1 => Label::B,
            2 => Label::C,
            r => Label::Num(r - 2),
        }
    }

    pub fn num(self) -> Option<usize> {
        match self {
            Label::Num(i) => Some(i),
            _ => None,
        }
    }

    /// The labels `a, b, c, 1, ..., n` in order.
    pub fn standard_set(n: usize) -> Vec<Label> {
        (0..n + 3).map(Label::from_rank).collect()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::A => f.write_str("a"),
            Label::B => f.write_str("b"),
            Label::C => f.write_str("c"),
            Label::Num(i) => write!(f, "{i}"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "a" => Ok(Label::A),
            "b" => Ok(Label::B),
            "c" => Ok(Label::C),
            other => match other.parse::<usize>() {
                Ok(i) if i >= 1 => Ok(Label::Num(i)),
                _ => Err(Error::Parse(format!("invalid label `{other}`"))),
            },
        }
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
