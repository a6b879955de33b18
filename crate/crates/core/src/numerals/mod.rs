//! Set-theoretic reading of numerals: quantities, halos, projections and the
//! NatOp between an evidence number and a claim numeral.

mod natop;
mod numset;
mod projection;
mod quantity;
mod roundness;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use natop::{NatOp, ParseNatOpError};
pub use numset::{relate, Bound, Interval, NumSet};
pub use projection::{detect_env, project, project_row, projection_cell, CueKind, MonotoneEnv, Polarity, Projection};
pub use quantity::{comparative_sign, parse_quantities, parse_quantity, Quantity, Reading, Role, Source, APPROXIMATORS};
pub use roundness::{roundness_of, NonPositive, RoundnessClass};

use crate::arith::{ArithAnswer, Value};
use crate::number::Decimal;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumeralError {
    #[error("evidence {0:?} is not numeric")]
    NonNumeric(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum HaloMode {
    Empty,
    Relative { epsilon: Decimal },
    Roundness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HaloPolicy {
    pub mode: HaloMode,
    /// Relative width used for approximators without their own entry.
    pub modifier_width: Decimal,
    /// Per-approximator widths, keyed by lowercase modifier text.
    #[serde(default)]
    pub modifier_widths: BTreeMap<String, Decimal>,
    pub roundness_widths: BTreeMap<RoundnessClass, Decimal>,
}

impl Default for HaloPolicy {
    fn default() -> Self {
        HaloPolicy {
            mode: HaloMode::Empty,
            modifier_width: Decimal::from_ratio(1, 10),
            modifier_widths: BTreeMap::new(),
            roundness_widths: [
                (RoundnessClass::Ten, Decimal::from_ratio(5, 100)),
                (RoundnessClass::Five, Decimal::from_ratio(25, 1000)),
                (RoundnessClass::TwoPointFive, Decimal::from_ratio(1, 100)),
            ]
            .into_iter()
            .collect(),
        }
    }
}

impl HaloPolicy {
    pub fn with_mode(mode: HaloMode) -> Self {
        HaloPolicy { mode, ..HaloPolicy::default() }
    }

    /// Relative half-width of the halo around `q`.
    pub fn width(&self, q: &Quantity) -> Decimal {
        let mut w = Decimal::zero();
        if q.reading == Reading::Approx {
            let key = q.modifier.as_deref().unwrap_or("").to_lowercase();
            w = self.modifier_widths.get(&key).cloned().unwrap_or_else(|| self.modifier_width.clone());
        }
        let extra = match &self.mode {
            HaloMode::Empty => None,
            HaloMode::Relative { epsilon } => Some(epsilon.clone()),
            HaloMode::Roundness => roundness_of(&q.value.abs()).and_then(|c| self.roundness_widths.get(&c).cloned()),
        };
        match extra {
            Some(e) if e > w => e,
            _ => w,
        }
    }
}

/// The values `q` communicates around its literal value.
pub fn halo(q: &Quantity, policy: &HaloPolicy) -> NumSet {
    let w = policy.width(q);
    if w.is_zero() {
        return NumSet::point(q.value.clone());
    }
    let one = Decimal::from_int(1);
    NumSet::closed(&q.value * &(&one - &w), &q.value * &(&one + &w))
}

/// Literal reading set of a quantity.
pub fn reading_set(q: &Quantity) -> NumSet {
    let v = q.value.clone();
    match q.reading {
        Reading::Exact | Reading::Approx => NumSet::point(v),
        Reading::AtLeast => NumSet::at_least(v),
        Reading::AtMost => NumSet::at_most(v),
        Reading::GreaterThan => NumSet::greater_than(v),
        Reading::LessThan => NumSet::less_than(v),
    }
}

/// Claim-side denotation: the reading set joined with the halo for readings
/// that include the literal value itself.
pub fn claim_set(q: &Quantity, policy: &HaloPolicy) -> NumSet {
    match q.reading {
        Reading::GreaterThan | Reading::LessThan => reading_set(q),
        _ => reading_set(q).union(halo(q, policy)),
    }
}

/// The evidence side of a numeric comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    Answer(ArithAnswer),
    Quantity(Quantity),
}

impl From<ArithAnswer> for Evidence {
    fn from(a: ArithAnswer) -> Self {
        Evidence::Answer(a)
    }
}

impl From<Quantity> for Evidence {
    fn from(q: Quantity) -> Self {
        Evidence::Quantity(q)
    }
}

impl Evidence {
    fn set_and_value(&self) -> Result<(NumSet, Decimal), NumeralError> {
        match self {
            Evidence::Answer(a) => match &a.result {
                Value::Number { value, .. } => Ok((NumSet::point(value.clone()), value.clone())),
                Value::Text { text } => Err(NumeralError::NonNumeric(text.clone())),
            },
            Evidence::Quantity(q) => Ok((reading_set(q), q.value.clone())),
        }
    }
}

/// NatOp relating evidence (left) to a claim numeral (right).
///
/// A negation cue is absorbed by taking the claim set's complement within the
/// non-negative reals. Cardinal cues such as "at most" are already part of
/// the reading. Other downward cues project a bare exact numeral through the
/// at-least row and everything else through the general downward row.
pub fn compare(
    evidence: &Evidence,
    claim: &Quantity,
    env: &MonotoneEnv,
    policy: &HaloPolicy,
) -> Result<NatOp, NumeralError> {
    let (ev_set, ev_value) = evidence.set_and_value()?;
    let mut c_set = claim_set(claim, policy);
    if env.is_negation() {
        c_set = c_set.complement();
        return Ok(relate(&ev_set, &c_set));
    }
    let op = relate(&ev_set, &c_set);
    let projected = match env.polarity {
        Polarity::Upward => op,
        Polarity::ExactlyOne => project_row(Projection::ExactlyOne, op, None),
        Polarity::Downward if env.cue == Some(CueKind::CardinalBound) && claim.reading.is_bounded() => op,
        Polarity::Downward if claim.reading == Reading::Exact => {
            project_row(Projection::NumDown, op, Some(ev_value.cmp(&claim.value)))
        }
        Polarity::Downward => project_row(Projection::Down, op, None),
    };
    Ok(projected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Function;

    fn d(v: i64) -> Decimal {
        Decimal::from_int(v)
    }

    fn answer(f: Function, v: i64) -> Evidence {
        Evidence::Answer(ArithAnswer::new(f, Value::num(v)))
    }

    fn cmp(e: Evidence, claim: &str) -> NatOp {
        let q = parse_quantity(claim).unwrap();
        compare(&e, &q, &detect_env(claim), &HaloPolicy::default()).unwrap()
    }

    #[test]
    fn halo_shapes() {
        let policy = HaloPolicy::default();
        assert_eq!(halo(&Quantity::exact(d(100)), &policy), NumSet::point(d(100)));
        let about = parse_quantity("about 100").unwrap();
        assert_eq!(halo(&about, &policy), NumSet::closed(d(90), d(110)));
        let round = HaloPolicy::with_mode(HaloMode::Roundness);
        let w100 = halo(&Quantity::exact(d(100)), &round).span().unwrap();
        let w101 = halo(&Quantity::exact(d(101)), &round).span().unwrap();
        assert!(w100 > w101);
    }

    #[test]
    fn answers_against_claims() {
        assert_eq!(cmp(answer(Function::Sum, 12238), "larger than 12,000"), NatOp::Forward);
        assert_eq!(cmp(answer(Function::Count, 4), "three"), NatOp::Alternation);
        assert_eq!(cmp(answer(Function::Copy, 101), "100"), NatOp::Alternation);
        assert_eq!(cmp(answer(Function::Copy, 101), "about 100"), NatOp::Forward);
        assert_eq!(cmp(answer(Function::Comp, -8), "eight fewer delegates than John McCain"), NatOp::Equiv);
    }

    #[test]
    fn text_answers_are_rejected() {
        let e = Evidence::Answer(ArithAnswer::new(Function::Copy, Value::text("Ortegal")));
        let q = Quantity::exact(d(1));
        assert!(compare(&e, &q, &MonotoneEnv::upward(), &HaloPolicy::default()).is_err());
    }

    #[test]
    fn downward_readings() {
        let e = Evidence::Quantity(Quantity::exact(d(2)));
        assert_eq!(cmp(e.clone(), "everybody who scored 5 goals"), NatOp::Reverse);
        assert_eq!(cmp(Evidence::Quantity(Quantity::exact(d(5))), "everybody who scored 2 goals"), NatOp::Forward);
        assert_eq!(cmp(answer(Function::Copy, 3), "at most 4 titles"), NatOp::Forward);
        assert_eq!(cmp(answer(Function::Copy, 3), "exactly one title and 3 cups"), NatOp::Independence);
    }
}
