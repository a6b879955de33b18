//! Bundled worked examples with scripted backend responses, for tests,
//! benchmarks and demos that must run without a live model.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use crate::gateway::{Fixture, Gateway, MockBackend, TemplateError};
use crate::natlog::Verdict;
use crate::numerals::NatOp;
use crate::tables::{parse_table, Table};

/// One question about a subclaim with its scripted rationale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptedQuestion {
    pub question: &'static str,
    pub span: &'static str,
    pub rationale: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptedSubclaim {
    pub text: &'static str,
    pub questions: Vec<ScriptedQuestion>,
    pub expected_ops: Vec<NatOp>,
    pub expected: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenCase {
    pub id: &'static str,
    pub claim: &'static str,
    pub tables: Vec<Table>,
    pub subclaims: Vec<ScriptedSubclaim>,
    pub expected: Verdict,
    /// Scripted questions for the claim verified without decomposition.
    pub whole_claim_questions: Vec<ScriptedQuestion>,
}

impl GoldenCase {
    pub fn decomposition_output(&self) -> String {
        self.subclaims.iter().enumerate().map(|(i, s)| format!("{}. {}", i + 1, s.text)).collect::<Vec<_>>().join(" ")
    }
}

fn qg_output(questions: &[ScriptedQuestion]) -> String {
    questions.iter().enumerate().map(|(i, q)| format!("{}. {} {}", i + 1, q.question, q.span)).collect::<Vec<_>>().join(" ")
}

fn q(question: &'static str, span: &'static str, rationale: &'static str) -> ScriptedQuestion {
    ScriptedQuestion { question, span, rationale }
}

const PLACE_Q: &str = "What is the place for which the population was measured in 2018?";
const PLACE_A: &str = "Extraction: The population was measured in 2018 for Ortegal.\nCompute: No computation required.\nAnswer: COPY Ortegal";
const COUNT_Q: &str = "How many municipalities does Ortegal have?";
const COUNT_A: &str = "Extraction: Ortegal has the municipalities Carino, Cerdido, Manon, and Ortigueira.\n\
                       Compute: Counting Carino, Cerdido, Manon, Ortigueirra = 4\nAnswer: COUNT 4";
const SUM_Q: &str = "What is the total population of Ortegal in 2018?";
const SUM_A: &str = "Extraction: In 2018 Cariño had a population of 3,945, Cerdido 1,126, Mañón 1,363, and Ortigueira 5,804.\n\
                     Compute: Adding 3,945 + 1,126 + 1,363 + 5,804 = 12,238.\nAnswer: SUM 12,238";

pub fn ortegal_table() -> Table {
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
    .expect("static table")
}

/// Municipalities and population of Ortegal; refuted through the count.
pub fn ortegal() -> GoldenCase {
    use NatOp::*;
    GoldenCase {
        id: "ortegal",
        claim: "In 2018, Ortegal had three municipalities and a population larger than 12,000.",
        tables: vec![ortegal_table()],
        subclaims: vec![
            ScriptedSubclaim {
                text: "In 2018 Ortegal had three municipalities.",
                questions: vec![q(PLACE_Q, "Ortegal", PLACE_A), q(COUNT_Q, "three", COUNT_A)],
                expected_ops: vec![Equiv, Equiv, Alternation],
                expected: Verdict::Refuted,
            },
            ScriptedSubclaim {
                text: "In 2018 Ortegal had a population larger than 12,000.",
                questions: vec![q(PLACE_Q, "Ortegal", PLACE_A), q(SUM_Q, "larger than 12,000", SUM_A)],
                expected_ops: vec![Equiv, Equiv, Forward],
                expected: Verdict::Supported,
            },
        ],
        expected: Verdict::Refuted,
        whole_claim_questions: vec![
            q(PLACE_Q, "Ortegal", PLACE_A),
            q(COUNT_Q, "three", COUNT_A),
            q(SUM_Q, "larger than 12,000", SUM_A),
        ],
    }
}

pub fn delegates_table() -> Table {
    parse_table(
        &[
            vec!["Candidate", "State delegate", "Percentage", "Delegates", "Counties carried"],
            vec!["John McCain", "3,228", "25.9%", "16", "11"],
            vec!["Mike Huckabee", "2,959", "23.52%", "8", "11"],
        ],
        "2008 United States presidential election in Washington (state). Caucuses Republican caucuses and primary",
        1,
    )
    .expect("static table")
}

/// Delegates won in a primary, including a difference between candidates.
pub fn delegates() -> GoldenCase {
    use NatOp::*;
    GoldenCase {
        id: "delegates",
        claim: "John McCain won 16 delegates during the 2008 Washington Republican presidential primary, \
                which is eight more than Mike Huckabee won.",
        tables: vec![delegates_table()],
        subclaims: vec![
            ScriptedSubclaim {
                text: "John McCain won 16 delegates during the 2008 Washington Republican presidential primary.",
                questions: vec![q(
                    "How many delegates did John McCain win during the 2008 Washington Republican presidential primary?",
                    "16",
                    "Extraction: John McCain won 16 delegates in the 2008 Washington Republican presidential primary.\n\
                     Compute: No computation is required.\nAnswer: COPY 16",
                )],
                expected_ops: vec![Equiv, Equiv, Equiv],
                expected: Verdict::Supported,
            },
            ScriptedSubclaim {
                text: "Mike Huckabee won eight fewer delegates than John McCain at the 2008 Washington Republican \
                       presidential primary.",
                questions: vec![q(
                    "How many fewer delegates did Mike Huckabee win than John McCain at the 2008 Washington \
                     Republican presidential primary?",
                    "eight",
                    "Extraction: Mike Huckabee won 8 delegates and John McCain won 16 delegates in the 2008 \
                     Washington Republican presidential primary.\nCompute: Comparing 8 - 16 = -8\nAnswer: COMP -8",
                )],
                expected_ops: vec![Equiv, Equiv, Equiv],
                expected: Verdict::Supported,
            },
        ],
        expected: Verdict::Supported,
        whole_claim_questions: Vec::new(),
    }
}

pub fn ownership_table() -> Table {
    parse_table(
        &[
            vec!["Major Shareholder", "% of Total", "Common Shares", "Preferred Shares"],
            vec!["Ayala Corporation", "13.20%", "41,157,276", "—"],
            vec!["SingTel Group", "20.10%", "62,646,487", "—"],
            vec!["Asiacom Philippines, Inc.", "50.85%", "—", "158,515,016"],
        ],
        "Globe Telecom. Ownership.",
        1,
    )
    .expect("static table")
}

/// Ownership shares, with a misspelt company name in the claim.
pub fn ownership() -> GoldenCase {
    use NatOp::*;
    GoldenCase {
        id: "ownership",
        claim: "Asiacom Philippine, Inc. stands as the major shareholder of Globe Telecom, with 50.85% of total shares.",
        tables: vec![ownership_table()],
        subclaims: vec![
            ScriptedSubclaim {
                text: "Asiacom Philippine, Inc. stands as the major shareholder of Globe Telecom.",
                questions: vec![q(
                    "Who is the major shareholder of Globe Telecom?",
                    "Asiacom Philippine, Inc",
                    "Extraction: Ayala Corporation, SingTel Group, and Asiacom Philippines, Inc. are major shareholders \
                     of Globe Telecom.\nCompute: No computation is required.\n\
                     Answer: FILTER Ayala Corporation, SingTel Group, and Asiacom Philippines, Inc.",
                )],
                expected_ops: vec![Forward, Equiv],
                expected: Verdict::Supported,
            },
            ScriptedSubclaim {
                text: "Asiacom Philippine, Inc. has 50.85% of total shares.",
                questions: vec![q(
                    "What percentage of total shares does Asiacom Philippine, Inc. have?",
                    "50.85%",
                    "Extraction: Asiacom Philippines, Inc. has 50.85% of total shares.\n\
                     Compute: No computation is required.\nAnswer: FILTER 50.85%",
                )],
                expected_ops: vec![Equiv, Equiv, Equiv],
                expected: Verdict::Supported,
            },
        ],
        expected: Verdict::Supported,
        whole_claim_questions: Vec::new(),
    }
}

pub fn golden_cases() -> Vec<GoldenCase> {
    vec![ortegal(), delegates(), ownership()]
}

fn push_questions(gw: &Gateway, out: &mut Vec<Fixture>, text: &str, qs: &[ScriptedQuestion], tables: &[Table]) -> Result<(), TemplateError> {
    out.push(Fixture::new(gw.qg_request(text, tables)?.prompt, qg_output(qs)));
    for sq in qs {
        out.push(Fixture::new(gw.qa_request(sq.question, tables)?.prompt, sq.rationale));
    }
    Ok(())
}

/// Prompt/response pairs for `cases`, rendered with `gateway`'s templates.
pub fn fixtures_for(gateway: &Gateway, cases: &[GoldenCase]) -> Result<Vec<Fixture>, TemplateError> {
    let mut out = Vec::new();
    for case in cases {
        out.push(Fixture::new(gateway.decomposition_request(case.claim)?.prompt, case.decomposition_output()));
        for sub in &case.subclaims {
            push_questions(gateway, &mut out, sub.text, &sub.questions, &case.tables)?;
        }
        if !case.whole_claim_questions.is_empty() {
            push_questions(gateway, &mut out, case.claim, &case.whole_claim_questions, &case.tables)?;
        }
    }
    Ok(out)
}

/// A gateway configured like `template` whose mock backend answers every
/// bundled case.
pub fn golden_gateway(template: &Gateway) -> Result<Gateway, TemplateError> {
    let fixtures = fixtures_for(template, &golden_cases())?;
    Ok(template.rebind(Arc::new(MockBackend::new(fixtures))))
}

/// Writes the bundled fixtures to `dir` as one JSON file per case, plus the
/// cases themselves as JSONL input.
pub fn write_fixture_dir(gateway: &Gateway, dir: &Path) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut input = String::new();
    for case in golden_cases() {
        let fixtures = fixtures_for(gateway, std::slice::from_ref(&case))
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
        fs::write(dir.join(format!("{}.json", case.id)), serde_json::to_string_pretty(&fixtures)?)?;
        let record = serde_json::json!({
            "id": case.id,
            "claim": case.claim,
            "label": case.expected.label(),
            "tables": case.tables.iter().map(Table::to_record).collect::<Vec<_>>(),
        });
        input.push_str(&record.to_string());
        input.push('\n');
    }
    fs::write(dir.join("claims.jsonl"), input)
}
