//! Exact decimal values and the number grammar shared by tables, answers and claims.
//!
//! Grammar: optional sign, digits with optional comma thousands groups, optional
//! fractional part, then an optional `%` or trailing `+`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number. Table decimals, sums and means are accumulated
/// without rounding; rounding only happens when rendering.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decimal(BigRational);

impl Decimal {
    pub fn zero() -> Self {
        Decimal(BigRational::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Decimal(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Decimal(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn pow10(exp: u32) -> Self {
        Decimal(BigRational::from_integer(num_traits::pow(BigInt::from(10), exp as usize)))
    }

    /// Converts through the shortest decimal representation of `v`, so `0.1`
    /// becomes exactly 1/10.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        format!("{v}").parse().ok()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn abs(&self) -> Self {
        Decimal(self.0.abs())
    }

    pub fn floor(&self) -> Self {
        Decimal(self.0.floor())
    }

    pub fn ceil(&self) -> Self {
        Decimal(self.0.ceil())
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.to_integer().to_i64()
        } else {
            None
        }
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    /// Rounds half away from zero to `places` fractional digits.
    pub fn round_to(&self, places: u32) -> Self {
        let scale = BigRational::from_integer(num_traits::pow(BigInt::from(10), places as usize));
        let scaled = &self.0 * &scale;
        Decimal(scaled.round() / scale)
    }

    /// Renders with comma thousands separators and at most `max_places`
    /// fractional digits, trailing zeros trimmed.
    pub fn render(&self, max_places: u32) -> String {
        let (int_part, frac) = self.split_digits(max_places);
        let frac = frac.trim_end_matches('0');
        let mut out = group_thousands(&int_part);
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
        if self.round_to(max_places).is_negative() {
            out.insert(0, '-');
        }
        out
    }

    /// Renders with exactly `places` fractional digits, optionally grouped.
    pub fn render_fixed(&self, places: u32, grouped: bool) -> String {
        let (int_part, frac) = self.split_digits(places);
        let mut out = if grouped { group_thousands(&int_part) } else { int_part };
        if places > 0 {
            out.push('.');
            out.push_str(&frac);
        }
        if self.round_to(places).is_negative() {
            out.insert(0, '-');
        }
        out
    }

    /// Unsigned integer digits and zero-padded fractional digits after rounding.
    fn split_digits(&self, places: u32) -> (String, String) {
        let scale = num_traits::pow(BigInt::from(10), places as usize);
        let scaled = (self.0.abs() * BigRational::from_integer(scale.clone())).round().to_integer();
        let (int_part, frac_part) = scaled.div_rem(&scale);
        let frac = if places == 0 {
            String::new()
        } else {
            format!("{:0>width$}", frac_part.to_string(), width = places as usize)
        };
        (int_part.to_string(), frac)
    }
}

fn group_thousands(digits: &str) -> String {
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(6).replace(',', ""))
    }
}

impl fmt::Debug for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.to_integer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a number: {0:?}")]
pub struct ParseDecimalError(pub String);

impl FromStr for Decimal {
    type Err = ParseDecimalError;

    /// Accepts the full number grammar minus the `%`/`+` suffixes.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match parse_number(s) {
            Some(tok) if !tok.percent && !tok.plus => Ok(tok.value),
            _ => Err(ParseDecimalError(s.to_string())),
        }
    }
}

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Num(f64),
        }
        match Repr::deserialize(d)? {
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Num(v) => Decimal::from_f64(v).ok_or_else(|| serde::de::Error::custom("non-finite number")),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Decimal {
            type Output = Decimal;
            fn $method(self, rhs: Decimal) -> Decimal {
                Decimal(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Decimal> for &'a Decimal {
            type Output = Decimal;
            fn $method(self, rhs: &'a Decimal) -> Decimal {
                Decimal((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Decimal {
    type Output = Decimal;
    fn neg(self) -> Decimal {
        Decimal(-self.0)
    }
}

impl std::iter::Sum for Decimal {
    fn sum<I: Iterator<Item = Decimal>>(iter: I) -> Decimal {
        iter.fold(Decimal::zero(), |a, b| a + b)
    }
}

impl From<i64> for Decimal {
    fn from(v: i64) -> Self {
        Decimal::from_int(v)
    }
}

/// A number recognised inside a piece of text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberToken {
    /// Byte offsets into the scanned text.
    pub start: usize,
    pub end: usize,
    pub value: Decimal,
    pub percent: bool,
    /// Trailing `+` as in "2+ goals".
    pub plus: bool,
    /// Written with comma thousands separators.
    pub grouped: bool,
    /// Number of fractional digits as written.
    pub decimals: u32,
}

impl NumberToken {
    pub fn text<'a>(&self, source: &'a str) -> &'a str {
        &source[self.start..self.end]
    }

    /// Four plain digits with no separators, decimals or suffix, in 1000..=2100.
    pub fn is_year_like(&self, source: &str) -> bool {
        let text = self.text(source);
        !self.percent
            && !self.plus
            && !self.grouped
            && self.decimals == 0
            && text.len() == 4
            && text.bytes().all(|b| b.is_ascii_digit())
            && (1000..=2100).contains(&self.value.to_i64().unwrap_or(0))
    }
}

fn is_sign_char(c: char) -> bool {
    matches!(c, '-' | '+' | '\u{2212}')
}

/// Finds every number in `text`, left to right, without overlaps.
pub fn scan_numbers(text: &str) -> Vec<NumberToken> {
    let bytes = text.as_bytes();
    let len = bytes.len();
    let digit = |k: usize| k < len && bytes[k].is_ascii_digit();
    let mut out = Vec::new();
    let mut i = 0;
    while i < len {
        if !bytes[i].is_ascii_digit() {
            i += 1;
            continue;
        }
        let digits_start = i;
        let mut j = i;
        while digit(j) {
            j += 1;
        }
        let mut grouped = false;
        if j - i <= 3 {
            while j < len && bytes[j] == b',' && digit(j + 1) && digit(j + 2) && digit(j + 3) && !digit(j + 4) {
                j += 4;
                grouped = true;
            }
        }
        let mut decimals = 0;
        if j < len && bytes[j] == b'.' && digit(j + 1) {
            let mut k = j + 1;
            while digit(k) {
                k += 1;
            }
            decimals = (k - j - 1) as u32;
            j = k;
        }
        let mut percent = false;
        let mut plus = false;
        if j < len && bytes[j] == b'%' {
            percent = true;
            j += 1;
        } else if j < len && bytes[j] == b'+' && !digit(j + 1) {
            plus = true;
            j += 1;
        }

        let mut start = digits_start;
        let mut negative = false;
        if let Some(sign) = text[..digits_start].chars().next_back() {
            if is_sign_char(sign) {
                let sign_start = digits_start - sign.len_utf8();
                let before = text[..sign_start].chars().next_back();
                if before.map_or(true, |c| !c.is_alphanumeric()) {
                    start = sign_start;
                    negative = sign != '+';
                }
            }
        }

        let end_digits = if percent || plus { j - 1 } else { j };
        let literal: String = text[digits_start..end_digits].chars().filter(|c| *c != ',').collect();
        let value = parse_plain_decimal(&literal);
        let value = if negative { -value } else { value };
        out.push(NumberToken { start, end: j, value, percent, plus, grouped, decimals });
        i = j;
    }
    out
}

/// `literal` is digits with an optional single `.`; validated by the scanner.
fn parse_plain_decimal(literal: &str) -> Decimal {
    let (int_part, frac_part) = literal.split_once('.').unwrap_or((literal, ""));
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().unwrap_or_else(|_| BigInt::zero());
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    Decimal(BigRational::new(numer, denom))
}

/// Parses `s` (trimmed) if it is exactly one number token.
pub fn parse_number(s: &str) -> Option<NumberToken> {
    let trimmed = s.trim();
    let offset = s.len() - s.trim_start().len();
    let mut toks = scan_numbers(trimmed);
    if toks.len() == 1 && toks[0].start == 0 && toks[0].end == trimmed.len() {
        let mut tok = toks.remove(0);
        tok.start += offset;
        tok.end += offset;
        Some(tok)
    } else {
        None
    }
}

/// The digits of `s` in order, ignoring everything else.
pub fn digit_sequence(s: &str) -> String {
    s.chars().filter(|c| c.is_ascii_digit()).collect()
}
