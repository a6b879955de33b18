//! Token-level comparison of claim spans and evidence text.

use std::collections::BTreeSet;

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::numerals::NatOp;
use crate::number::scan_numbers;

const STOPWORDS: &[&str] = &[
    "a", "an", "the", "of", "in", "at", "on", "for", "from", "with", "by", "to", "during", "as", "and", "or", "than",
    "its", "it", "their", "his", "her", "this", "that", "these", "those", "which", "who", "whom", "whose", "what",
    "is", "are", "was", "were", "be", "been", "being", "has", "have", "had", "having", "do", "does", "did", "stand",
    "stood", "serve", "served", "remain", "remained", "became", "become", "also", "there",
];

const NEGATIONS: &[&str] = &["not", "never", "no", "without", "none"];

const ANTONYMS: &[(&str, &str)] = &[
    ("won", "lost"),
    ("win", "lose"),
    ("increase", "decrease"),
    ("increased", "decreased"),
    ("before", "after"),
    ("first", "last"),
    ("male", "female"),
    ("minimum", "maximum"),
    ("highest", "lowest"),
    ("largest", "smallest"),
    ("most", "least"),
    ("north", "south"),
    ("east", "west"),
    ("above", "below"),
    ("winner", "loser"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub start: usize,
    pub end: usize,
    pub raw: String,
    pub norm: String,
    pub stop: bool,
    pub negation: bool,
}

impl Token {
    pub fn is_content(&self) -> bool {
        !self.stop && !self.negation
    }
}

pub fn strip_diacritics(s: &str) -> String {
    s.nfd().filter(|c| !is_combining_mark(*c)).collect()
}

fn normalize_word(word: &str) -> String {
    let mut w = strip_diacritics(word).to_lowercase();
    if let Some(stem) = w.strip_suffix("'s") {
        w = stem.to_string();
    }
    w = w.trim_matches('\'').to_string();
    if w.len() > 3 && w.ends_with('s') && !w.ends_with("ss") && !w.ends_with("us") && !w.ends_with("is") {
        w.pop();
    }
    w
}

/// Words and numbers of `text` with byte offsets. Numbers are canonicalised
/// so "12,238" and "12238" agree.
pub fn tokenize(text: &str) -> Vec<Token> {
    let numbers = scan_numbers(text);
    let mut out: Vec<Token> = numbers
        .iter()
        .map(|n| {
            let mut norm = n.value.to_string();
            if n.percent {
                norm.push('%');
            }
            Token { start: n.start, end: n.end, raw: text[n.start..n.end].to_string(), norm, stop: false, negation: false }
        })
        .collect();
    let in_number = |i: usize| numbers.iter().any(|n| n.start <= i && i < n.end);
    let mut start: Option<usize> = None;
    let push_word = |s: usize, e: usize, out: &mut Vec<Token>| {
        let raw = &text[s..e];
        let lower = raw.to_lowercase();
        let negation = NEGATIONS.contains(&lower.as_str()) || lower.ends_with("n't");
        let norm = normalize_word(raw);
        if norm.is_empty() {
            return;
        }
        let plain = strip_diacritics(&lower);
        let stop = STOPWORDS.contains(&norm.as_str()) || STOPWORDS.contains(&plain.as_str());
        out.push(Token { start: s, end: e, raw: raw.to_string(), norm, stop, negation });
    };
    for (i, c) in text.char_indices() {
        let word_char = (c.is_alphanumeric() || c == '\'') && !in_number(i);
        match (word_char, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                push_word(s, i, &mut out);
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        push_word(s, text.len(), &mut out);
    }
    out.sort_by_key(|t| t.start);
    out
}

pub fn content_set(text: &str) -> BTreeSet<String> {
    tokenize(text).into_iter().filter(Token::is_content).map(|t| t.norm).collect()
}

fn negation_count(tokens: &[Token]) -> usize {
    tokens.iter().filter(|t| t.negation).count()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexicalMatch {
    pub op: NatOp,
    pub note: String,
}

/// Compares content words of a claim span with evidence text. Words the claim
/// shares with `question` are dropped first, since the question already ties
/// them to the evidence. Returns `None` when no lexical rule applies.
pub fn lexical_natop(claim: &str, evidence: &str, question: Option<&str>) -> Option<LexicalMatch> {
    let c_tokens = tokenize(claim);
    let e_tokens = tokenize(evidence);
    let all_c: BTreeSet<String> = c_tokens.iter().filter(|t| t.is_content()).map(|t| t.norm.clone()).collect();
    let e: BTreeSet<String> = e_tokens.iter().filter(|t| t.is_content()).map(|t| t.norm.clone()).collect();
    let q = question.map(content_set).unwrap_or_default();
    let reduced: BTreeSet<String> = all_c.iter().filter(|w| !q.contains(*w) || e.contains(*w)).cloned().collect();
    let c = if reduced.is_empty() { all_c.clone() } else { reduced };

    let antonym = ANTONYMS.iter().find(|(a, b)| {
        (c.contains(*a) && e.contains(*b)) || (c.contains(*b) && e.contains(*a))
    });
    if let Some((a, b)) = antonym {
        return Some(LexicalMatch { op: NatOp::Alternation, note: format!("antonyms {a}/{b}") });
    }

    let base = if c == e {
        NatOp::Equiv
    } else if c.is_subset(&e) {
        NatOp::Forward
    } else if e.is_subset(&c) && !e.is_empty() {
        NatOp::Reverse
    } else {
        return None;
    };

    let parity_differs = negation_count(&c_tokens) % 2 != negation_count(&e_tokens) % 2;
    let op = match (base, parity_differs) {
        (op, false) => op,
        (NatOp::Equiv, true) => NatOp::Negation,
        (NatOp::Forward, true) => NatOp::Alternation,
        (_, true) => NatOp::Independence,
    };

    let mut note = format!("lexical {}: {{{}}} vs {{{}}}", op.symbol(), join(&c), join(&e));
    let variants = spelling_variants(&c_tokens, &e_tokens);
    if !variants.is_empty() {
        note.push_str(&format!("; treated as equal: {}", variants.join(", ")));
    }
    Some(LexicalMatch { op, note })
}

fn join(set: &BTreeSet<String>) -> String {
    set.iter().cloned().collect::<Vec<_>>().join(" ")
}

/// Claim/evidence word pairs that only match after normalization.
fn spelling_variants(claim: &[Token], evidence: &[Token]) -> Vec<String> {
    let mut out = Vec::new();
    for ct in claim.iter().filter(|t| t.is_content()) {
        if let Some(et) = evidence.iter().find(|et| et.is_content() && et.norm == ct.norm) {
            if et.raw != ct.raw && et.raw.to_lowercase() != ct.raw.to_lowercase() {
                let pair = format!("{}~{}", ct.raw, et.raw);
                if !out.contains(&pair) {
                    out.push(pair);
                }
            }
        }
    }
    out
}
