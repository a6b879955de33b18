//! Round numbers of the form k·b·10^y with integer k in 1..=9.

use serde::{Deserialize, Serialize};

use crate::number::Decimal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RoundnessClass {
    #[serde(rename = "10-ness")]
    Ten,
    #[serde(rename = "5-ness")]
    Five,
    #[serde(rename = "2.5-ness")]
    TwoPointFive,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("rounding needs a positive number, got {0}")]
pub struct NonPositive(pub String);

impl RoundnessClass {
    /// Roundest first.
    pub const ALL: [RoundnessClass; 3] = [RoundnessClass::Ten, RoundnessClass::Five, RoundnessClass::TwoPointFive];

    pub fn base(self) -> Decimal {
        match self {
            RoundnessClass::Ten => Decimal::from_int(1),
            RoundnessClass::Five => Decimal::from_int(5),
            RoundnessClass::TwoPointFive => Decimal::from_ratio(5, 2),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RoundnessClass::Ten => "10-ness",
            RoundnessClass::Five => "5-ness",
            RoundnessClass::TwoPointFive => "2.5-ness",
        }
    }

    pub fn contains(self, v: &Decimal) -> bool {
        if !v.is_positive() || !v.is_integer() {
            return false;
        }
        let m = v / &self.base();
        let Some(mut m) = m.to_i64() else {
            return false;
        };
        while m % 10 == 0 {
            m /= 10;
        }
        (1..=9).contains(&m)
    }

    /// Integral class members covering `[x/10, 10x]`, ascending.
    pub fn candidates(self, x: &Decimal) -> Vec<Decimal> {
        let digits = x.abs().ceil().render_fixed(0, false).len() as u32;
        let base = self.base();
        let mut out: Vec<Decimal> = (digits.saturating_sub(3)..=digits + 1)
            .flat_map(|y| {
                let scale = &base * &Decimal::pow10(y);
                (1..=9i64).map(move |k| &scale * &Decimal::from_int(k))
            })
            .filter(Decimal::is_integer)
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Nearest class member; ties go to the smaller candidate.
    pub fn round(self, x: &Decimal) -> Result<Decimal, NonPositive> {
        if !x.is_positive() {
            return Err(NonPositive(x.to_string()));
        }
        let mut best: Option<(Decimal, Decimal)> = None;
        for c in self.candidates(x) {
            let dist = (&c - x).abs();
            if best.as_ref().map_or(true, |(d, _)| dist < *d) {
                best = Some((dist, c));
            }
        }
        Ok(best.expect("candidate list is never empty").1)
    }
}

/// Roundest class `v` belongs to.
pub fn roundness_of(v: &Decimal) -> Option<RoundnessClass> {
    RoundnessClass::ALL.into_iter().find(|c| c.contains(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: i64) -> Decimal {
        Decimal::from_int(v)
    }

    #[test]
    fn membership() {
        assert!(RoundnessClass::Ten.contains(&d(100)));
        assert!(RoundnessClass::Ten.contains(&d(9000)));
        assert!(!RoundnessClass::Ten.contains(&d(1010)));
        assert!(RoundnessClass::Five.contains(&d(45)));
        assert!(RoundnessClass::TwoPointFive.contains(&d(225)));
        assert!(RoundnessClass::TwoPointFive.contains(&d(5)));
        assert!(!RoundnessClass::TwoPointFive.contains(&d(25 * 10 + 1)));
        assert_eq!(roundness_of(&d(101)), None);
        assert_eq!(roundness_of(&d(100)), Some(RoundnessClass::Ten));
    }

    #[test]
    fn rounding() {
        assert_eq!(RoundnessClass::Ten.round(&d(100)).unwrap(), d(100));
        assert_eq!(RoundnessClass::Ten.round(&d(12238)).unwrap(), d(10000));
        assert_eq!(RoundnessClass::Ten.round(&d(15)).unwrap(), d(10));
        assert!(RoundnessClass::Five.round(&d(0)).is_err());
    }
}
