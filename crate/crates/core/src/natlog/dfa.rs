use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::numerals::NatOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum State {
    S,
    R,
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Supported,
    Refuted,
    Nei,
}

impl State {
    pub fn verdict(self) -> Verdict {
        match self {
            State::S => Verdict::Supported,
            State::R => Verdict::Refuted,
            State::N => Verdict::Nei,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            State::S => "S",
            State::R => "R",
            State::N => "N",
        }
    }
}

impl Verdict {
    pub const ALL: [Verdict; 3] = [Verdict::Supported, Verdict::Refuted, Verdict::Nei];

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Supported => "SUPPORTS",
            Verdict::Refuted => "REFUTES",
            Verdict::Nei => "NEI",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown label {0:?}")]
pub struct ParseLabelError(pub String);

impl FromStr for Verdict {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s.trim().to_ascii_uppercase().chars().filter(|c| c.is_ascii_alphabetic()).collect();
        match norm.as_str() {
            "SUPPORTS" | "SUPPORTED" | "SUPPORT" | "S" | "ENTAILED" | "TRUE" => Ok(Verdict::Supported),
            "REFUTES" | "REFUTED" | "REFUTE" | "R" | "FALSE" => Ok(Verdict::Refuted),
            "NEI" | "NOTENOUGHINFO" | "NOTENOUGHINFORMATION" | "N" => Ok(Verdict::Nei),
            _ => Err(ParseLabelError(s.to_string())),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for Verdict {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for State {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for State {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "S" => Ok(State::S),
            "R" => Ok(State::R),
            "N" => Ok(State::N),
            other => Err(serde::de::Error::custom(format!("unknown DFA state {other:?}"))),
        }
    }
}

/// One transition. Cover behaves like independence.
pub fn dfa_step(state: State, op: NatOp) -> State {
    use NatOp::*;
    match (state, op.collapse_cover()) {
        (State::S, Equiv | Forward) => State::S,
        (State::S, Reverse | Independence) => State::N,
        (State::S, Negation | Alternation) => State::R,
        (State::R, Equiv | Reverse) => State::R,
        (State::R, Negation) => State::S,
        (State::R, Alternation | Forward | Independence) => State::N,
        (State::N, _) => State::N,
        (_, Cover) => unreachable!("cover collapsed above"),
    }
}

/// Folds `ops` from the start state; returns the verdict and every visited state.
pub fn execute_proof(ops: &[NatOp]) -> (Verdict, Vec<State>) {
    let mut trace = Vec::with_capacity(ops.len() + 1);
    let mut state = State::S;
    trace.push(state);
    for &op in ops {
        state = dfa_step(state, op);
        trace.push(state);
    }
    (state.verdict(), trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_aliases() {
        assert_eq!("SUPPORTS".parse::<Verdict>().unwrap(), Verdict::Supported);
        assert_eq!("Refuted".parse::<Verdict>().unwrap(), Verdict::Refuted);
        assert_eq!("NOT ENOUGH INFO".parse::<Verdict>().unwrap(), Verdict::Nei);
        assert!("maybe".parse::<Verdict>().is_err());
    }

    #[test]
    fn empty_proof_is_supported() {
        assert_eq!(execute_proof(&[]), (Verdict::Supported, vec![State::S]));
    }
}
