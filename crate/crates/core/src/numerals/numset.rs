//! Finite unions of real intervals, and the set relations between them.

use crate::number::Decimal;

use super::natop::NatOp;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub value: Decimal,
    pub closed: bool,
}

/// `None` bounds are infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Option<Bound>,
    pub hi: Option<Bound>,
}

impl Interval {
    pub fn contains(&self, p: &Decimal) -> bool {
        let above = match &self.lo {
            None => true,
            Some(b) => *p > b.value || (b.closed && *p == b.value),
        };
        let below = match &self.hi {
            None => true,
            Some(b) => *p < b.value || (b.closed && *p == b.value),
        };
        above && below
    }
}

/// A union of intervals, or its complement within the non-negative reals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumSet {
    intervals: Vec<Interval>,
    complement: bool,
}

impl NumSet {
    pub fn empty() -> Self {
        NumSet { intervals: Vec::new(), complement: false }
    }

    pub fn point(v: Decimal) -> Self {
        Self::closed(v.clone(), v)
    }

    pub fn closed(lo: Decimal, hi: Decimal) -> Self {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        Self::from_interval(Interval {
            lo: Some(Bound { value: lo, closed: true }),
            hi: Some(Bound { value: hi, closed: true }),
        })
    }

    pub fn at_least(v: Decimal) -> Self {
        Self::from_interval(Interval { lo: Some(Bound { value: v, closed: true }), hi: None })
    }

    pub fn greater_than(v: Decimal) -> Self {
        Self::from_interval(Interval { lo: Some(Bound { value: v, closed: false }), hi: None })
    }

    pub fn at_most(v: Decimal) -> Self {
        Self::from_interval(Interval { lo: None, hi: Some(Bound { value: v, closed: true }) })
    }

    pub fn less_than(v: Decimal) -> Self {
        Self::from_interval(Interval { lo: None, hi: Some(Bound { value: v, closed: false }) })
    }

    fn from_interval(i: Interval) -> Self {
        NumSet { intervals: vec![i], complement: false }
    }

    pub fn union(mut self, other: NumSet) -> NumSet {
        assert!(!self.complement && !other.complement, "union of complemented sets");
        self.intervals.extend(other.intervals);
        self
    }

    /// Complement within the universe `[0, ∞)`.
    pub fn complement(self) -> NumSet {
        NumSet { intervals: self.intervals, complement: !self.complement }
    }

    pub fn contains(&self, p: &Decimal) -> bool {
        let inside = self.intervals.iter().any(|i| i.contains(p));
        if self.complement {
            !p.is_negative() && !inside
        } else {
            inside
        }
    }

    /// Width of the covered range; `None` when unbounded.
    pub fn span(&self) -> Option<Decimal> {
        if self.complement {
            return None;
        }
        let mut total = Decimal::zero();
        for i in &self.intervals {
            match (&i.lo, &i.hi) {
                (Some(lo), Some(hi)) => total = total + (&hi.value - &lo.value),
                _ => return None,
            }
        }
        Some(total)
    }

    fn critical_points(&self, out: &mut Vec<Decimal>) {
        for i in &self.intervals {
            out.extend(i.lo.iter().chain(i.hi.iter()).map(|b| b.value.clone()));
        }
    }
}

/// Points at which membership of either set can change, plus one point inside
/// every gap and beyond both ends. Membership is constant on each open gap, so
/// these samples decide every set relation exactly.
fn samples(x: &NumSet, y: &NumSet) -> Vec<Decimal> {
    let mut crit = vec![Decimal::zero()];
    x.critical_points(&mut crit);
    y.critical_points(&mut crit);
    crit.sort();
    crit.dedup();
    let two = Decimal::from_int(2);
    let mut out = Vec::with_capacity(crit.len() * 2 + 2);
    out.push(&crit[0] - &Decimal::from_int(1));
    for w in crit.windows(2) {
        out.push(w[0].clone());
        out.push(&(&w[0] + &w[1]) / &two);
    }
    let last = crit.last().expect("contains zero").clone();
    out.push(&last + &Decimal::from_int(1));
    out.push(last);
    out
}

/// Set relation between `x` (evidence) and `y` (claim). Negation requires the
/// two sets to partition the universe `[0, ∞)`; a set reaching below zero
/// never counts as exhaustive.
pub fn relate(x: &NumSet, y: &NumSet) -> NatOp {
    let pts = samples(x, y);
    let (mut x_sub_y, mut y_sub_x, mut overlap, mut exhaustive, mut negative) = (true, true, false, true, false);
    for p in &pts {
        let (a, b) = (x.contains(p), y.contains(p));
        x_sub_y &= !a || b;
        y_sub_x &= !b || a;
        overlap |= a && b;
        if p.is_negative() {
            negative |= a || b;
        } else {
            exhaustive &= a || b;
        }
    }
    match (x_sub_y, y_sub_x) {
        (true, true) => NatOp::Equiv,
        (true, false) if overlap => NatOp::Forward,
        (false, true) if overlap => NatOp::Reverse,
        _ if !overlap => {
            if exhaustive && !negative {
                NatOp::Negation
            } else {
                NatOp::Alternation
            }
        }
        _ => NatOp::Independence,
    }
}
