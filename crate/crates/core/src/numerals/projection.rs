//! Monotonicity environments and the projection of NatOps through them.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::natop::NatOp;
use super::natop::NatOp::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    #[default]
    Upward,
    Downward,
    ExactlyOne,
}

/// What put a span into a downward environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CueKind {
    Negation,
    CardinalBound,
    Universal,
    Conditional,
    ExactlyOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MonotoneEnv {
    pub polarity: Polarity,
    pub trigger: Option<String>,
    pub cue: Option<CueKind>,
}

impl MonotoneEnv {
    pub fn upward() -> Self {
        MonotoneEnv::default()
    }

    fn cued(polarity: Polarity, trigger: &str, cue: CueKind) -> Self {
        MonotoneEnv { polarity, trigger: Some(trigger.to_string()), cue: Some(cue) }
    }

    pub fn is_negation(&self) -> bool {
        self.cue == Some(CueKind::Negation)
    }
}

const NEGATIONS: [&str; 7] = ["not", "never", "no", "without", "none", "nobody", "neither"];
const UNIVERSALS: [&str; 5] = ["every", "everybody", "everyone", "all", "each"];

/// Shallow cue detector over the words of `context`.
pub fn detect_env(context: &str) -> MonotoneEnv {
    let lower = context.to_lowercase();
    let words: Vec<&str> = lower
        .split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .filter(|w| !w.is_empty())
        .collect();
    let pair = |a: &str, b: &str| words.windows(2).any(|w| w[0] == a && w[1] == b);

    if pair("exactly", "one") {
        return MonotoneEnv::cued(Polarity::ExactlyOne, "exactly one", CueKind::ExactlyOne);
    }
    for (i, w) in words.iter().enumerate() {
        // "no more/less/fewer than" is a cardinal bound, not a negation.
        let bound_follows = matches!(words.get(i + 1), Some(&("more" | "less" | "fewer")))
            && words.get(i + 2) == Some(&"than");
        if *w == "no" && bound_follows {
            continue;
        }
        if NEGATIONS.contains(w) || w.ends_with("n't") {
            return MonotoneEnv::cued(Polarity::Downward, w, CueKind::Negation);
        }
    }
    if pair("at", "most") {
        return MonotoneEnv::cued(Polarity::Downward, "at most", CueKind::CardinalBound);
    }
    if let Some(w) = words.iter().find(|w| UNIVERSALS.contains(w)) {
        return MonotoneEnv::cued(Polarity::Downward, w, CueKind::Universal);
    }
    if words.contains(&"if") {
        return MonotoneEnv::cued(Polarity::Downward, "if", CueKind::Conditional);
    }
    MonotoneEnv::upward()
}

/// The five projection functions: general upward/downward/"exactly one", and
/// the numeral-reading variants for exact (upward) and at-least (downward)
/// readings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Projection {
    Up,
    Down,
    ExactlyOne,
    NumUp,
    NumDown,
}

impl Projection {
    pub const ALL: [Projection; 5] =
        [Projection::Up, Projection::Down, Projection::ExactlyOne, Projection::NumUp, Projection::NumDown];

    pub fn for_env(env: &MonotoneEnv) -> Projection {
        match env.polarity {
            Polarity::Upward => Projection::Up,
            Polarity::Downward => Projection::Down,
            Polarity::ExactlyOne => Projection::ExactlyOne,
        }
    }
}

/// The table cell for `(row, op)`. The at-least row maps alternation to two
/// possible outputs; every other cell is a single NatOp.
pub fn projection_cell(row: Projection, op: NatOp) -> &'static [NatOp] {
    match (row, op) {
        (Projection::Up | Projection::NumUp, _) => match op {
            Equiv => &[Equiv],
            Forward => &[Forward],
            Reverse => &[Reverse],
            Negation => &[Negation],
            Alternation => &[Alternation],
            Cover => &[Cover],
            Independence => &[Independence],
        },
        (Projection::Down, Equiv) => &[Equiv],
        (Projection::Down, Forward) => &[Reverse],
        (Projection::Down, Reverse) => &[Forward],
        (Projection::Down, Alternation) => &[Cover],
        (Projection::Down, Cover) => &[Alternation],
        (Projection::Down, Negation) => &[Negation],
        (Projection::Down, Independence) => &[Independence],
        (Projection::ExactlyOne, Equiv) => &[Equiv],
        (Projection::ExactlyOne, _) => &[Independence],
        (Projection::NumDown, Equiv) => &[Forward],
        (Projection::NumDown, Forward) => &[Reverse],
        (Projection::NumDown, Reverse) => &[Forward],
        (Projection::NumDown, Alternation) => &[Forward, Reverse],
        (Projection::NumDown, Negation) => &[Cover],
        (Projection::NumDown, Cover | Independence) => &[Independence],
    }
}

/// Projects `op`; `order` compares the evidence value with the claim value and
/// picks between the two at-least outputs for alternation (smaller evidence
/// falls on the reverse side).
pub fn project_row(row: Projection, op: NatOp, order: Option<Ordering>) -> NatOp {
    match projection_cell(row, op) {
        [single] => *single,
        _ => match order {
            Some(Ordering::Less) => Reverse,
            _ => Forward,
        },
    }
}

/// General projection for an environment.
pub fn project(env: &MonotoneEnv, op: NatOp) -> NatOp {
    project_row(Projection::for_env(env), op, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_detection() {
        assert_eq!(detect_env("never scored three goals").polarity, Polarity::Downward);
        assert!(detect_env("never scored three goals").is_negation());
        assert_eq!(detect_env("Messi scored 50 goals").polarity, Polarity::Upward);
        assert_eq!(detect_env("exactly one title").polarity, Polarity::ExactlyOne);
        assert_eq!(detect_env("didn't win").cue, Some(CueKind::Negation));
        assert_eq!(detect_env("at most 4").cue, Some(CueKind::CardinalBound));
        assert_eq!(detect_env("no more than 4").cue, None);
        assert_eq!(detect_env("Everybody who scored, every player").cue, Some(CueKind::Universal));
        assert_eq!(detect_env("if he scored 2").cue, Some(CueKind::Conditional));
    }

    #[test]
    fn general_projection() {
        assert_eq!(project(&MonotoneEnv::upward(), Forward), Forward);
        assert_eq!(project(&detect_env("not"), Forward), Reverse);
        assert_eq!(project(&detect_env("exactly one"), Reverse), Independence);
    }

    #[test]
    fn at_least_alternation_resolution() {
        assert_eq!(project_row(Projection::NumDown, Alternation, Some(Ordering::Less)), Reverse);
        assert_eq!(project_row(Projection::NumDown, Alternation, Some(Ordering::Greater)), Forward);
    }
}
