//! Acceptance checks for generated text. Each validator either returns the
//! parsed value or the violations that make the output unusable.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{eval_expr, parse_arith_answer, Arg, ArithAnswer, ArithExpr, Function, TriggerLexicon, Value};
use crate::number::{scan_numbers, Decimal, NumberToken};
use crate::numerals::NatOp;
use crate::tables::{permissible_numbers, NumberInventory, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Format,
    Span,
    Number,
    Trigger,
    Arithmetic,
    Choice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub span: String,
}

impl Violation {
    pub fn new(kind: ViolationKind, span: impl Into<String>) -> Self {
        Violation { kind, span: span.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::Format => "output does not follow the required format",
            ViolationKind::Span => "claim span is not copied verbatim from the claim",
            ViolationKind::Number => "number does not occur in the evidence",
            ViolationKind::Trigger => "computation does not start with an allowed word",
            ViolationKind::Arithmetic => "stated result is wrong",
            ViolationKind::Choice => "answer is not one of the options",
        };
        write!(f, "{what}: {:?}", self.span)
    }
}

/// Items of "1. … 2. …", split at markers numbered consecutively from 1.
pub fn parse_enumeration(text: &str) -> Option<Vec<&str>> {
    let text = text.trim();
    let marker_at = |k: usize, from: usize| -> Option<(usize, usize)> {
        let m = format!("{k}.");
        let mut search = from;
        while let Some(off) = text[search..].find(&m) {
            let pos = search + off;
            let end = pos + m.len();
            let before_ok = pos == 0 || text[..pos].ends_with(char::is_whitespace);
            let after_ok = text[end..].chars().next().map_or(true, char::is_whitespace);
            if before_ok && after_ok {
                return Some((pos, end));
            }
            search = end;
        }
        None
    };
    let (first, mut body_start) = marker_at(1, 0)?;
    if first != 0 {
        return None;
    }
    let mut items = Vec::new();
    let mut k = 2;
    loop {
        match marker_at(k, body_start) {
            Some((pos, end)) => {
                items.push(text[body_start..pos].trim());
                body_start = end;
                k += 1;
            }
            None => {
                items.push(text[body_start..].trim());
                return Some(items);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionSpan {
    pub question: String,
    pub c: String,
}

fn clean_span(s: &str) -> &str {
    s.trim().trim_matches(|c| c == '"' || c == '[' || c == ']').trim()
}

fn qg_items(text: &str) -> Result<Vec<(String, String)>, Vec<Violation>> {
    let items = parse_enumeration(text).ok_or_else(|| vec![Violation::new(ViolationKind::Format, text.trim())])?;
    let mut out = Vec::new();
    let mut violations = Vec::new();
    for item in items {
        match item.find('?') {
            Some(q) if !clean_span(&item[q + 1..]).is_empty() => {
                out.push((item[..=q].trim().to_string(), clean_span(&item[q + 1..]).to_string()))
            }
            _ => violations.push(Violation::new(ViolationKind::Format, item)),
        }
    }
    if violations.is_empty() {
        Ok(out)
    } else {
        Err(violations)
    }
}

fn dedup_questions(pairs: Vec<QuestionSpan>) -> Vec<QuestionSpan> {
    let mut out: Vec<QuestionSpan> = Vec::new();
    for p in pairs {
        if !out.iter().any(|o| o.question.eq_ignore_ascii_case(&p.question)) {
            out.push(p);
        }
    }
    out
}

/// Questions with the claim spans they target. Every span must occur in the
/// claim verbatim; repeated questions are dropped.
pub fn validate_qg_output(text: &str, claim: &str) -> Result<Vec<QuestionSpan>, Vec<Violation>> {
    let items = qg_items(text)?;
    let violations: Vec<Violation> = items
        .iter()
        .filter(|(_, c)| !claim.contains(c.as_str()))
        .map(|(_, c)| Violation::new(ViolationKind::Span, c.clone()))
        .collect();
    if !violations.is_empty() {
        return Err(violations);
    }
    Ok(dedup_questions(items.into_iter().map(|(question, c)| QuestionSpan { question, c }).collect()))
}

/// Longest run of leading or trailing words of `span` that occurs in `claim`.
pub fn trim_to_claim(span: &str, claim: &str) -> Option<String> {
    let words: Vec<&str> = span.split_whitespace().collect();
    for keep in (1..=words.len()).rev() {
        for cand in [words[..keep].join(" "), words[words.len() - keep..].join(" ")] {
            if cand.chars().any(char::is_alphanumeric) && claim.contains(&cand) {
                return Some(cand);
            }
        }
    }
    None
}

/// Keeps well-formed items, trimming spans that are not claim substrings.
pub fn repair_qg_output(text: &str, claim: &str) -> Option<Vec<QuestionSpan>> {
    let items = parse_enumeration(text)?;
    let mut out = Vec::new();
    for item in items {
        let Some(q) = item.find('?') else { continue };
        let c = clean_span(&item[q + 1..]);
        let c = if claim.contains(c) && !c.is_empty() { Some(c.to_string()) } else { trim_to_claim(c, claim) };
        if let Some(c) = c {
            out.push(QuestionSpan { question: item[..=q].trim().to_string(), c });
        }
    }
    let out = dedup_questions(out);
    (!out.is_empty()).then_some(out)
}

pub fn render_qg_output(pairs: &[QuestionSpan]) -> String {
    pairs.iter().enumerate().map(|(i, p)| format!("{}. {} {}", i + 1, p.question, p.c)).collect::<Vec<_>>().join(" ")
}

/// Extraction, computation and answer of a question-answering step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rationale {
    /// `None` when the evidence holds no answer.
    pub extraction: Option<String>,
    pub compute: String,
    pub answer: Option<ArithAnswer>,
}

impl Rationale {
    pub fn render(&self) -> String {
        format!(
            "Extraction: {}\nCompute: {}\nAnswer: {}",
            self.extraction.as_deref().unwrap_or("N/A"),
            self.compute,
            self.answer.as_ref().map_or("N/A", |a| a.rendered.as_str())
        )
    }
}

/// A rationale that passed validation, possibly after the engine corrected
/// its arithmetic. `violations` lists what was corrected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckedRationale {
    pub rationale: Rationale,
    pub violations: Vec<Violation>,
}

fn find_label(text: &str, labels: &[&str], from: usize) -> Option<(usize, usize)> {
    let lower = text.to_lowercase();
    labels
        .iter()
        .filter_map(|l| lower[from..].find(&l.to_lowercase()).map(|p| (from + p, from + p + l.len())))
        .min()
}

fn is_na(s: &str) -> bool {
    let t = s.trim().trim_end_matches('.').trim();
    t.eq_ignore_ascii_case("N/A") || t.eq_ignore_ascii_case("NA")
}

fn in_inventory(inventory: &NumberInventory, v: &Decimal) -> bool {
    inventory.contains(v) || inventory.contains(&v.abs())
}

fn unknown_numbers(text: &str, inventory: &NumberInventory) -> Vec<Violation> {
    scan_numbers(text)
        .iter()
        .filter(|t| !in_inventory(inventory, &t.value))
        .map(|t| Violation::new(ViolationKind::Number, t.text(text)))
        .collect()
}

/// Number tokens of an expression; a minus between two operands is read as
/// subtraction rather than a sign.
fn operands(expr: &str) -> Vec<NumberToken> {
    scan_numbers(expr)
        .into_iter()
        .map(|mut t| {
            let prev = expr[..t.start].trim_end().trim_end_matches(['-', '−']).trim_end();
            let binary = t.value.is_negative() && prev.ends_with(|c: char| c.is_ascii_digit() || c == '%' || c == ')');
            if binary {
                t.value = t.value.abs();
            }
            t
        })
        .collect()
}

fn count_items(expr: &str) -> Vec<Arg> {
    expr.split([',', ';'])
        .flat_map(|part| part.split(" and "))
        .map(|s| s.trim().trim_end_matches('.').trim())
        .filter(|s| !s.is_empty() && !s.eq_ignore_ascii_case("and"))
        .map(Arg::text)
        .collect()
}

fn stated_result(rhs: &str) -> Option<Decimal> {
    scan_numbers(rhs).into_iter().next().map(|t| t.value)
}

fn answer_value(answer: &str) -> Value {
    match parse_arith_answer(answer) {
        Ok(a) => a.result,
        Err(_) => Value::parse(answer),
    }
}

fn values_agree(stated: &Decimal, computed: &Decimal, stated_text: &str) -> bool {
    let places = scan_numbers(stated_text).first().map_or(0, |t| t.decimals);
    stated == computed || *stated == computed.round_to(places)
}

/// Parses and checks a three-part rationale against the numbers of the
/// evidence and the trigger lexicon, recomputing any stated arithmetic.
pub fn validate_qa_output_with(
    text: &str,
    inventory: &NumberInventory,
    lexicon: &TriggerLexicon,
) -> Result<CheckedRationale, Vec<Violation>> {
    let format_err = || vec![Violation::new(ViolationKind::Format, text.trim())];
    let (_, ext_start) = find_label(text, &["Extraction:"], 0).ok_or_else(format_err)?;
    let (cmp_label, cmp_start) = find_label(text, &["Compute:", "Computation:"], ext_start).ok_or_else(format_err)?;
    let (ans_label, ans_start) = find_label(text, &["Answer:"], cmp_start).ok_or_else(format_err)?;
    let extraction = text[ext_start..cmp_label].trim();
    let compute = text[cmp_start..ans_label].trim();
    let answer_text = text[ans_start..].lines().next().unwrap_or("").trim();

    if is_na(extraction) || is_na(answer_text) {
        return Ok(CheckedRationale {
            rationale: Rationale { extraction: None, compute: compute.to_string(), answer: None },
            violations: Vec::new(),
        });
    }
    let mut hard = unknown_numbers(extraction, inventory);
    let Some((function, len)) = lexicon.match_prefix(compute) else {
        hard.push(Violation::new(ViolationKind::Trigger, compute));
        return Err(hard);
    };
    let body = compute.trim_start()[len..].trim();

    if function == Function::Copy {
        let value = answer_value(answer_text);
        if let Value::Number { .. } = value {
            hard.extend(unknown_numbers(&value.render(), inventory));
        }
        if !hard.is_empty() {
            return Err(hard);
        }
        let answer = ArithAnswer::new(Function::Copy, value);
        return Ok(CheckedRationale {
            rationale: Rationale { extraction: Some(extraction.to_string()), compute: compute.to_string(), answer: Some(answer) },
            violations: Vec::new(),
        });
    }

    let (lhs, rhs) = match body.rfind('=') {
        Some(eq) => (&body[..eq], Some(&body[eq + 1..])),
        None => (body, None),
    };
    let expr = match function {
        Function::Count => ArithExpr::new(Function::Count, count_items(lhs)),
        Function::Super => {
            // labels are not recoverable from free text; trust the answer line
            if !hard.is_empty() {
                return Err(hard);
            }
            let answer = ArithAnswer::new(Function::Super, answer_value(answer_text));
            return Ok(CheckedRationale {
                rationale: Rationale { extraction: Some(extraction.to_string()), compute: compute.to_string(), answer: Some(answer) },
                violations: Vec::new(),
            });
        }
        f => {
            let ops = operands(lhs);
            for t in &ops {
                if !in_inventory(inventory, &t.value) {
                    hard.push(Violation::new(ViolationKind::Number, t.text(lhs)));
                }
            }
            let args = ops
                .iter()
                .map(|t| Arg::value(if t.percent { Value::percent(t.value.clone()) } else { Value::num(t.value.clone()) }))
                .collect();
            ArithExpr::new(f, args)
        }
    };
    if !hard.is_empty() {
        return Err(hard);
    }
    let computed = eval_expr(&expr).map_err(|e| vec![Violation::new(ViolationKind::Format, e.to_string())])?;

    let mut soft = Vec::new();
    if let Value::Number { value, .. } = &computed.result {
        let stated = rhs.map(|r| (r, stated_result(r))).or_else(|| {
            let v = answer_value(answer_text);
            v.as_number().cloned().map(|n| (answer_text, Some(n)))
        });
        if let Some((stated_text, Some(stated))) = stated {
            if !values_agree(&stated, value, stated_text) {
                soft.push(Violation::new(
                    ViolationKind::Arithmetic,
                    format!("stated {}, recomputed {}", stated, value),
                ));
            }
        }
        if let Value::Number { value: answered, .. } = answer_value(answer_text) {
            if soft.is_empty() && !values_agree(&answered, value, answer_text) {
                soft.push(Violation::new(
                    ViolationKind::Arithmetic,
                    format!("answered {}, recomputed {}", answered, value),
                ));
            }
        }
    }
    Ok(CheckedRationale {
        rationale: Rationale { extraction: Some(extraction.to_string()), compute: compute.to_string(), answer: Some(computed) },
        violations: soft,
    })
}

/// [`validate_qa_output_with`] using the numbers of `tables` and the default
/// trigger words.
pub fn validate_qa_output(text: &str, tables: &[Table]) -> Result<CheckedRationale, Vec<Violation>> {
    validate_qa_output_with(text, &permissible_numbers(tables), &TriggerLexicon::default())
}

/// Sub-claims of an enumerated decomposition.
pub fn validate_decomposition(text: &str) -> Result<Vec<String>, Vec<Violation>> {
    let items = parse_enumeration(text).ok_or_else(|| vec![Violation::new(ViolationKind::Format, text.trim())])?;
    let empty: Vec<Violation> =
        items.iter().filter(|i| i.is_empty()).map(|i| Violation::new(ViolationKind::Format, *i)).collect();
    if !empty.is_empty() {
        return Err(empty);
    }
    Ok(items.into_iter().map(str::to_string).collect())
}

/// Options of the NatOp multiple-choice question, in letter order.
pub const NATOP_CHOICES: [NatOp; 6] =
    [NatOp::Equiv, NatOp::Forward, NatOp::Reverse, NatOp::Negation, NatOp::Alternation, NatOp::Independence];

pub fn validate_natop_choice(text: &str) -> Result<NatOp, Vec<Violation>> {
    let t = text.trim();
    let mut chars = t.chars();
    if let Some(c) = chars.next() {
        let next = chars.next();
        if c.is_ascii_alphabetic() && next.map_or(true, |n| !n.is_alphanumeric()) {
            let idx = (c.to_ascii_uppercase() as u8).wrapping_sub(b'A') as usize;
            if let Some(op) = NATOP_CHOICES.get(idx) {
                return Ok(*op);
            }
        }
    }
    let first = t.split_whitespace().next().unwrap_or("").trim_end_matches(['.', ')']);
    first.parse::<NatOp>().map(NatOp::collapse_cover).map_err(|_| vec![Violation::new(ViolationKind::Choice, t)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::parse_table;

    fn population_table() -> Table {
        parse_table(
            &[
                vec!["Municipality", "Pop.", "Pop."],
                vec!["", "(2011)", "(2018)"],
                vec!["Cariño", "4,374", "3,945"],
                vec!["Cerdido", "1,304", "1,126"],
                vec!["Mañón", "1,541", "1,363"],
                vec!["Ortigueira", "6,697", "5,804"],
            ],
            "Ortegal",
            2,
        )
        .unwrap()
    }

    #[test]
    fn enumerations() {
        assert_eq!(parse_enumeration("1. a 2. b"), Some(vec!["a", "b"]));
        assert_eq!(parse_enumeration("1. In 2018 x had 12,000. 2. y"), Some(vec!["In 2018 x had 12,000.", "y"]));
        assert_eq!(parse_enumeration("1. a\n2. b\n3. c"), Some(vec!["a", "b", "c"]));
        assert_eq!(parse_enumeration(""), None);
        assert_eq!(parse_enumeration("a 1. b"), None);
    }

    #[test]
    fn question_spans() {
        let claim = "In 2018 Ortegal had population of larger than 12,000 in its three municipalities.";
        let out = "1. What is the place for which the population was measured in 2018? Ortegal \
                   2. What is the total population of Ortegal in 2018? larger than 12,000";
        let pairs = validate_qg_output(out, claim).unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[1].c, "larger than 12,000");
        let bad = validate_qg_output("1. Where? Ortegall", claim).unwrap_err();
        assert_eq!(bad, vec![Violation::new(ViolationKind::Span, "Ortegall")]);
        assert_eq!(validate_qg_output("", claim).unwrap_err()[0].kind, ViolationKind::Format);
        let dup = validate_qg_output("1. Where? Ortegal 2. where? Ortegal", claim).unwrap();
        assert_eq!(dup.len(), 1);
    }

    #[test]
    fn span_repair() {
        let claim = "Ortegal had three municipalities.";
        let fixed = repair_qg_output("1. How many? three municipalities in total", claim).unwrap();
        assert_eq!(fixed[0].c, "three municipalities");
        assert!(repair_qg_output("1. Where? Lugo", claim).is_none());
    }

    #[test]
    fn population_rationale() {
        let out = "Extraction: In 2018 Cariño had a population of 3,945, Cerdido 1,126, Mañón 1,363, and Ortigueira 5,804.\n\
                   Compute: Adding 3,945 + 1,126 + 1,363 + 5,804 = 12,238.\nAnswer: SUM 12,238";
        let r = validate_qa_output(out, &[population_table()]).unwrap();
        assert!(r.violations.is_empty());
        assert_eq!(r.rationale.answer.unwrap().rendered, "SUM 12,238");
    }

    #[test]
    fn hallucinated_numbers_are_rejected() {
        let out = "Extraction: Cariño had 9999 people.\nCompute: No computation required.\nAnswer: COPY 9999";
        let v = validate_qa_output(out, &[population_table()]).unwrap_err();
        assert!(v.iter().all(|v| v.kind == ViolationKind::Number));
        assert_eq!(v[0].span, "9999");
    }

    #[test]
    fn wrong_sums_are_recomputed() {
        let t = parse_table(&[vec!["a", "b"], vec!["2", "2"]], "", 1).unwrap();
        let out = "Extraction: a is 2 and b is 2.\nCompute: Adding 2 + 2 = 5\nAnswer: SUM 5";
        let r = validate_qa_output(out, &[t]).unwrap();
        assert_eq!(r.violations[0].kind, ViolationKind::Arithmetic);
        assert_eq!(r.rationale.answer.unwrap().rendered, "SUM 4");
    }

    #[test]
    fn triggers_and_counts() {
        let t = population_table();
        let no_trigger = "Extraction: Cariño 3,945.\nCompute: 3,945 + 0\nAnswer: SUM 3,945";
        assert_eq!(validate_qa_output(no_trigger, &[t.clone()]).unwrap_err()[0].kind, ViolationKind::Trigger);
        let count = "Extraction: Ortegal has the municipalities Carino, Cerdido, Manon, and Ortigueira.\n\
                     Compute: Counting Carino, Cerdido, Manon, Ortigueirra = 4\nAnswer: COUNT 4";
        let r = validate_qa_output(count, &[t.clone()]).unwrap();
        assert_eq!(r.rationale.answer.unwrap().rendered, "COUNT 4");
        let na = "Extraction: N/A\nCompute: No computation required.\nAnswer: N/A";
        let r = validate_qa_output(na, &[t]).unwrap();
        assert_eq!(r.rationale.extraction, None);
        assert_eq!(r.rationale.answer, None);
    }

    #[test]
    fn comparisons_subtract() {
        let t = parse_table(&[vec!["Candidate", "Delegates"], vec!["McCain", "16"], vec!["Huckabee", "8"]], "", 1).unwrap();
        let out = "Extraction: Mike Huckabee won 8 delegates and John McCain won 16 delegates.\n\
                   Compute: Comparing 8 - 16 = -8\nAnswer: COMP -8";
        let r = validate_qa_output(out, &[t]).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert_eq!(r.rationale.answer.unwrap().result, Value::num(-8));
    }

    #[test]
    fn natop_choices() {
        assert_eq!(validate_natop_choice(" B"), Ok(NatOp::Forward));
        assert_eq!(validate_natop_choice("E. cannot both be true"), Ok(NatOp::Alternation));
        assert_eq!(validate_natop_choice("FE"), Ok(NatOp::Forward));
        assert!(validate_natop_choice("Z").is_err());
        assert!(validate_natop_choice("maybe").is_err());
    }

    #[test]
    fn decompositions() {
        assert_eq!(validate_decomposition("1. Paris is in France.").unwrap(), vec!["Paris is in France."]);
        assert!(validate_decomposition("Paris is in France.").is_err());
    }
}
