//! Numerals in claim text together with their reading cues.

use serde::{Deserialize, Serialize};

use crate::number::{scan_numbers, Decimal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reading {
    Exact,
    AtLeast,
    AtMost,
    GreaterThan,
    LessThan,
    Approx,
}

impl Reading {
    /// Readings that carry their own bound, so a cue like "at most" is already
    /// part of the denotation.
    pub fn is_bounded(self) -> bool {
        matches!(self, Reading::AtLeast | Reading::AtMost | Reading::GreaterThan | Reading::LessThan)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Digits,
    WordNumeral,
    SuffixPlus,
}

/// `Difference` marks "eight fewer ... than" style numerals, whose value is a
/// signed gap rather than an amount.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Absolute,
    Difference,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: Decimal,
    pub reading: Reading,
    pub modifier: Option<String>,
    pub source: Source,
    pub percent: bool,
    pub role: Role,
    /// Byte range of the numeral (without cues) in the parsed text.
    pub start: usize,
    pub end: usize,
}

impl Quantity {
    pub fn exact(value: Decimal) -> Self {
        Quantity {
            value,
            reading: Reading::Exact,
            modifier: None,
            source: Source::Digits,
            percent: false,
            role: Role::Absolute,
            start: 0,
            end: 0,
        }
    }

    pub fn with_reading(mut self, reading: Reading) -> Self {
        self.reading = reading;
        self
    }
}

#[derive(Debug, Clone)]
struct Word {
    start: usize,
    end: usize,
    lower: String,
}

fn words(text: &str) -> Vec<Word> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        let is_word = c.is_alphabetic() || c == '\'';
        match (is_word, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push(Word { start: s, end: i, lower: text[s..i].to_lowercase() });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Word { start: s, end: text.len(), lower: text[s..].to_lowercase() });
    }
    out
}

const UNITS: [&str; 21] = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve",
    "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty",
];
const TENS: [(&str, i64); 7] =
    [("thirty", 30), ("forty", 40), ("fifty", 50), ("sixty", 60), ("seventy", 70), ("eighty", 80), ("ninety", 90)];

fn small_word(w: &str) -> Option<i64> {
    UNITS
        .iter()
        .position(|u| *u == w)
        .map(|p| p as i64)
        .or_else(|| TENS.iter().find(|(t, _)| *t == w).map(|(_, v)| *v))
}

fn scale_word(w: &str) -> Option<i64> {
    match w {
        "thousand" => Some(1_000),
        "million" => Some(1_000_000),
        _ => None,
    }
}

/// Parses a run of number words starting at `words[i]`; returns the value and
/// the number of words consumed.
fn word_numeral(text: &str, ws: &[Word], i: usize) -> Option<(i64, usize)> {
    let joined = |a: &Word, b: &Word| text[a.end..b.start].chars().all(|c| c == ' ' || c == '-');
    let mut total = 0i64;
    let mut current = 0i64;
    let mut j = i;
    let mut seen = false;
    while j < ws.len() {
        if j > i && !joined(&ws[j - 1], &ws[j]) {
            break;
        }
        let w = ws[j].lower.as_str();
        let next_is_scale = ws
            .get(j + 1)
            .map_or(false, |n| n.lower == "hundred" || scale_word(&n.lower).is_some());
        if let Some(v) = small_word(w) {
            if seen && current % 100 != 0 && (current % 10 != 0 || v >= 10) {
                break;
            }
            current += v;
        } else if w == "hundred" && (seen || j > i) {
            current = current.max(1) * 100;
        } else if let Some(s) = scale_word(w).filter(|_| seen || j > i) {
            total += current.max(1) * s;
            current = 0;
        } else if (w == "a" || w == "an") && !seen && next_is_scale {
            current = 1;
            j += 1;
            continue;
        } else if w == "and" && seen && ws.get(j + 1).map_or(false, |n| small_word(&n.lower).is_some()) {
            j += 1;
            continue;
        } else {
            break;
        }
        seen = true;
        j += 1;
    }
    if seen {
        Some((total + current, j - i))
    } else {
        None
    }
}

const PREFIX_CUES: [(&str, Reading); 24] = [
    ("no fewer than", Reading::AtLeast),
    ("no less than", Reading::AtLeast),
    ("not less than", Reading::AtLeast),
    ("no more than", Reading::AtMost),
    ("not more than", Reading::AtMost),
    ("at least", Reading::AtLeast),
    ("at most", Reading::AtMost),
    ("up to", Reading::AtMost),
    ("more than", Reading::GreaterThan),
    ("greater than", Reading::GreaterThan),
    ("larger than", Reading::GreaterThan),
    ("higher than", Reading::GreaterThan),
    ("bigger than", Reading::GreaterThan),
    ("over", Reading::GreaterThan),
    ("above", Reading::GreaterThan),
    ("exceeding", Reading::GreaterThan),
    ("less than", Reading::LessThan),
    ("fewer than", Reading::LessThan),
    ("smaller than", Reading::LessThan),
    ("lower than", Reading::LessThan),
    ("under", Reading::LessThan),
    ("below", Reading::LessThan),
    ("close to", Reading::Approx),
    ("an estimated", Reading::Approx),
];

pub const APPROXIMATORS: [&str; 7] = ["about", "around", "approximately", "roughly", "nearly", "almost", "circa"];

const MORE_WORDS: [&str; 5] = ["more", "greater", "larger", "higher", "bigger"];
const LESS_WORDS: [&str; 4] = ["fewer", "less", "smaller", "lower"];

/// Matches a cue phrase ending right before byte `at`.
fn prefix_cue(text: &str, ws: &[Word], at: usize) -> Option<(Reading, Option<String>)> {
    let before: Vec<&Word> = ws.iter().filter(|w| w.end <= at).collect();
    let gap_ok = |w: &Word| text[w.end..at].chars().all(char::is_whitespace);
    let last = *before.last()?;
    if !gap_ok(last) {
        return None;
    }
    for n in (1..=3).rev() {
        if before.len() < n {
            continue;
        }
        let tail = &before[before.len() - n..];
        let phrase = tail.iter().map(|w| w.lower.as_str()).collect::<Vec<_>>().join(" ");
        if let Some((_, r)) = PREFIX_CUES.iter().find(|(p, _)| *p == phrase) {
            let modifier = (*r == Reading::Approx).then(|| text[tail[0].start..last.end].to_string());
            return Some((*r, modifier));
        }
        if n == 1 && APPROXIMATORS.contains(&phrase.as_str()) {
            return Some((Reading::Approx, Some(text[last.start..last.end].to_string())));
        }
    }
    None
}

fn suffix_cue(ws: &[Word], after: usize) -> Option<Reading> {
    let next: Vec<&str> = ws.iter().filter(|w| w.start >= after).take(3).map(|w| w.lower.as_str()).collect();
    next.windows(2).take(2).find_map(|pair| match pair {
        ["or", "more" | "greater" | "above" | "over"] => Some(Reading::AtLeast),
        ["or", "less" | "fewer" | "under" | "below"] => Some(Reading::AtMost),
        _ => None,
    })
}

/// Sign of a "N more/fewer ... than" construction following the numeral.
fn difference_sign(ws: &[Word], after: usize) -> Option<i64> {
    let next: Vec<&Word> = ws.iter().filter(|w| w.start >= after).collect();
    for (k, w) in next.iter().take(2).enumerate() {
        let sign = if MORE_WORDS.contains(&w.lower.as_str()) {
            1
        } else if LESS_WORDS.contains(&w.lower.as_str()) {
            -1
        } else {
            continue;
        };
        if next[k + 1..].iter().take(6).any(|t| t.lower == "than") {
            return Some(sign);
        }
    }
    None
}

/// Direction of a bare comparative ("more than X", "fewer ... than X").
pub fn comparative_sign(text: &str) -> Option<i64> {
    let ws = words(text);
    for (k, w) in ws.iter().enumerate() {
        let sign = if MORE_WORDS.contains(&w.lower.as_str()) {
            1
        } else if LESS_WORDS.contains(&w.lower.as_str()) {
            -1
        } else {
            continue;
        };
        if ws[k + 1..].iter().take(6).any(|t| t.lower == "than") {
            return Some(sign);
        }
    }
    None
}

struct RawNumeral {
    start: usize,
    end: usize,
    value: Decimal,
    source: Source,
    percent: bool,
    plus: bool,
}

fn raw_numerals(text: &str, ws: &[Word]) -> Vec<RawNumeral> {
    let mut out: Vec<RawNumeral> = Vec::new();
    for tok in scan_numbers(text) {
        let mut raw = RawNumeral {
            start: tok.start,
            end: tok.end,
            value: tok.value,
            source: if tok.plus { Source::SuffixPlus } else { Source::Digits },
            percent: tok.percent,
            plus: tok.plus,
        };
        if let Some(next) = ws.iter().find(|w| w.start >= raw.end) {
            if text[raw.end..next.start].chars().all(char::is_whitespace) && !raw.plus && !raw.percent {
                if let Some(s) = scale_word(&next.lower) {
                    raw.value = raw.value * Decimal::from_int(s);
                    raw.end = next.end;
                } else if next.lower == "percent" {
                    raw.percent = true;
                    raw.end = next.end;
                }
            }
        }
        out.push(raw);
    }
    let mut i = 0;
    while i < ws.len() {
        if out.iter().any(|r| ws[i].start < r.end && r.start < ws[i].end) {
            i += 1;
            continue;
        }
        if let Some((v, n)) = word_numeral(text, ws, i) {
            let (start, end) = (ws[i].start, ws[i + n - 1].end);
            let mut raw =
                RawNumeral { start, end, value: Decimal::from_int(v), source: Source::WordNumeral, percent: false, plus: false };
            if ws.get(i + n).map_or(false, |w| w.lower == "percent") {
                raw.percent = true;
                raw.end = ws[i + n].end;
            }
            out.push(raw);
            i += n;
        } else {
            i += 1;
        }
    }
    out.sort_by_key(|r| r.start);
    out
}

/// All numerals in `text`, in order of appearance.
pub fn parse_quantities(text: &str) -> Vec<Quantity> {
    let ws = words(text);
    raw_numerals(text, &ws)
        .into_iter()
        .map(|raw| {
            let mut q = Quantity {
                value: raw.value,
                reading: Reading::Exact,
                modifier: None,
                source: raw.source,
                percent: raw.percent,
                role: Role::Absolute,
                start: raw.start,
                end: raw.end,
            };
            if raw.plus {
                q.reading = Reading::AtLeast;
            } else if let Some((reading, modifier)) = prefix_cue(text, &ws, raw.start) {
                q.reading = reading;
                q.modifier = modifier;
            } else if let Some(reading) = suffix_cue(&ws, raw.end) {
                q.reading = reading;
            } else if let Some(sign) = difference_sign(&ws, raw.end) {
                q.role = Role::Difference;
                q.value = q.value * Decimal::from_int(sign);
            }
            q
        })
        .collect()
}

/// The first numeral of `span` with its reading, if any.
pub fn parse_quantity(span: &str) -> Option<Quantity> {
    parse_quantities(span).into_iter().next()
}
