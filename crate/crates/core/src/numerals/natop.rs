use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Natural logic relations between an evidence span (left) and a claim span (right).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NatOp {
    Equiv,
    Forward,
    Reverse,
    Negation,
    Alternation,
    Cover,
    Independence,
}

impl NatOp {
    pub const ALL: [NatOp; 7] = [
        NatOp::Equiv,
        NatOp::Forward,
        NatOp::Reverse,
        NatOp::Negation,
        NatOp::Alternation,
        NatOp::Cover,
        NatOp::Independence,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            NatOp::Equiv => "\u{2261}",
            NatOp::Forward => "\u{2291}",
            NatOp::Reverse => "\u{2292}",
            NatOp::Negation => "\u{22CF}",
            NatOp::Alternation => "|",
            NatOp::Cover => "\u{2323}",
            NatOp::Independence => "#",
        }
    }

    /// Wire code used in serialized proofs.
    pub fn code(self) -> &'static str {
        match self {
            NatOp::Equiv => "EQ",
            NatOp::Forward => "FE",
            NatOp::Reverse => "RE",
            NatOp::Negation => "NEG",
            NatOp::Alternation => "ALT",
            NatOp::Cover => "COV",
            NatOp::Independence => "IND",
        }
    }

    /// Cover is too rare to keep in proofs and is read as independence.
    pub fn collapse_cover(self) -> NatOp {
        if self == NatOp::Cover {
            NatOp::Independence
        } else {
            self
        }
    }
}

impl fmt::Display for NatOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown NatOp {0:?}")]
pub struct ParseNatOpError(pub String);

impl FromStr for NatOp {
    type Err = ParseNatOpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        Ok(match t.to_ascii_uppercase().as_str() {
            "EQ" | "EQUIV" | "EQUIVALENCE" | "=" | "\u{2261}" => NatOp::Equiv,
            "FE" | "FWD" | "FORWARD" | "<" | "\u{2291}" => NatOp::Forward,
            "RE" | "REV" | "REVERSE" | ">" | "\u{2292}" => NatOp::Reverse,
            "NEG" | "NEGATION" | "!" | "\u{22CF}" => NatOp::Negation,
            "ALT" | "ALTERNATION" | "|" => NatOp::Alternation,
            "COV" | "COVER" | "\u{2323}" => NatOp::Cover,
            "IND" | "INDEP" | "INDEPENDENCE" | "#" => NatOp::Independence,
            _ => return Err(ParseNatOpError(t.to_string())),
        })
    }
}

impl Serialize for NatOp {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for NatOp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_round_trip() {
        for op in NatOp::ALL {
            assert_eq!(op.code().parse::<NatOp>().unwrap(), op);
            assert_eq!(op.symbol().parse::<NatOp>().unwrap(), op);
        }
        assert!("XX".parse::<NatOp>().is_err());
    }
}
