//! Claim verification: decomposition, question generation, question
//! answering, proof construction and verdict aggregation.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gateway::{Gateway, GenerationTrace, QuestionSpan, Rationale};
use crate::natlog::{
    EvidenceText, NatOpDelegate, Proof, ProofBuilder, ProofError, ProofStep, TargetEvidence, Verdict,
};
use crate::numerals::{HaloPolicy, NatOp};
use crate::tables::Table;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AggregateError {
    #[error("cannot aggregate an empty list of verdicts")]
    Empty,
}

/// Supported iff every verdict is Supported; Refuted iff any is Refuted;
/// NEI otherwise.
pub fn aggregate(verdicts: &[Verdict]) -> Result<Verdict, AggregateError> {
    if verdicts.is_empty() {
        return Err(AggregateError::Empty);
    }
    Ok(if verdicts.contains(&Verdict::Refuted) {
        Verdict::Refuted
    } else if verdicts.iter().all(|v| *v == Verdict::Supported) {
        Verdict::Supported
    } else {
        Verdict::Nei
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subclaim {
    pub text: String,
    pub index: usize,
    pub parent_claim_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubclaimReport {
    pub subclaim: Subclaim,
    pub questions: Vec<QuestionSpan>,
    /// One entry per question; `None` when answering failed outright.
    pub rationales: Vec<Option<Rationale>>,
    pub proof: Proof,
    /// False when the proof is a placeholder after generation failed.
    pub produced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub claim_id: String,
    pub claim: String,
    pub subclaims: Vec<SubclaimReport>,
    pub verdict: Verdict,
    pub execution_found: bool,
    pub diagnostics: Vec<GenerationTrace>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error("subclaim {index}: {source}")]
    Proof { index: usize, source: ProofError },
    #[error("report has no subclaims")]
    Empty,
    #[error("stated verdict {stated} differs from the aggregated proofs ({recomputed})")]
    Verdict { stated: Verdict, recomputed: Verdict },
}

impl VerdictReport {
    pub fn proofs(&self) -> impl Iterator<Item = &Proof> {
        self.subclaims.iter().map(|s| &s.proof)
    }

    /// Re-executes every proof and the aggregation, and checks the result
    /// against the stated verdict.
    pub fn recompute(&self) -> Result<Verdict, ReportError> {
        for (index, p) in self.proofs().enumerate() {
            p.verify().map_err(|source| ReportError::Proof { index, source })?;
        }
        let verdicts: Vec<Verdict> = self.proofs().map(|p| p.verdict).collect();
        let recomputed = aggregate(&verdicts).map_err(|_| ReportError::Empty)?;
        if recomputed != self.verdict {
            return Err(ReportError::Verdict { stated: self.verdict, recomputed });
        }
        Ok(recomputed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub decompose: bool,
    /// Largest number of aligned spans merged into one proof step.
    pub max_merge: usize,
    pub max_candidates: usize,
    /// Ask the backend for NatOps the rule tiers cannot decide.
    pub delegate_natops: bool,
    pub halo: HaloPolicy,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig { decompose: true, max_merge: 3, max_candidates: 256, delegate_natops: true, halo: HaloPolicy::default() }
    }
}

pub struct Verifier {
    gateway: Arc<Gateway>,
    config: PipelineConfig,
}

fn placeholder_proof(text: &str, note: &str) -> Proof {
    let mut step = ProofStep::new(text.trim(), NatOp::Independence);
    step.note = Some(note.to_string());
    Proof::from_steps(text, vec![step])
}

impl Verifier {
    pub fn new(gateway: Arc<Gateway>, config: PipelineConfig) -> Self {
        Verifier { gateway, config }
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn gateway(&self) -> &Gateway {
        &self.gateway
    }

    /// Sub-claims of `claim`; the claim itself when decomposition is off or fails.
    pub fn decompose(&self, claim_id: &str, claim: &str) -> (Vec<Subclaim>, Vec<GenerationTrace>, Vec<String>) {
        let whole = || vec![Subclaim { text: claim.to_string(), index: 0, parent_claim_id: claim_id.to_string() }];
        if !self.config.decompose {
            return (whole(), Vec::new(), Vec::new());
        }
        match self.gateway.decompose(claim) {
            Ok((Some(items), trace)) => {
                let subs = items
                    .into_iter()
                    .enumerate()
                    .map(|(index, text)| Subclaim { text, index, parent_claim_id: claim_id.to_string() })
                    .collect();
                (subs, vec![trace], Vec::new())
            }
            Ok((None, trace)) => {
                let note = format!("decomposition failed, verifying the claim as a whole: {}", trace.error.clone().unwrap_or_default());
                (whole(), vec![trace], vec![note])
            }
            Err(e) => (whole(), Vec::new(), vec![format!("decomposition prompt not rendered: {e}")]),
        }
    }

    pub fn verify_subclaim(&self, subclaim: &Subclaim, tables: &[Table]) -> (SubclaimReport, Vec<GenerationTrace>) {
        let mut traces = Vec::new();
        let fail = |note: String, traces: Vec<GenerationTrace>, questions: Vec<QuestionSpan>, rationales| {
            let report = SubclaimReport {
                subclaim: subclaim.clone(),
                questions,
                rationales,
                proof: placeholder_proof(&subclaim.text, &note),
                produced: false,
            };
            (report, traces)
        };

        let questions = match self.gateway.generate_questions(&subclaim.text, tables) {
            Ok((Some(q), trace)) => {
                traces.push(trace);
                q
            }
            Ok((None, trace)) => {
                let note = format!("question generation failed: {}", trace.error.clone().unwrap_or_default());
                traces.push(trace);
                return fail(note, traces, Vec::new(), Vec::new());
            }
            Err(e) => return fail(format!("question generation prompt not rendered: {e}"), traces, Vec::new(), Vec::new()),
        };

        let mut rationales = Vec::with_capacity(questions.len());
        for q in &questions {
            match self.gateway.answer_question(&q.question, tables) {
                Ok((r, trace)) => {
                    traces.push(trace);
                    rationales.push(r);
                }
                Err(e) => {
                    log::warn!("answer prompt not rendered: {e}");
                    rationales.push(None);
                }
            }
        }
        if rationales.iter().all(Option::is_none) {
            return fail("every question failed".to_string(), traces, questions, rationales);
        }

        let targets: Vec<TargetEvidence> = questions
            .iter()
            .zip(&rationales)
            .map(|(q, r)| TargetEvidence {
                c: q.c.clone(),
                question: q.question.clone(),
                extraction: r.as_ref().and_then(|r| r.extraction.clone()),
                answer: r.as_ref().and_then(|r| r.answer.clone()),
            })
            .collect();
        let mut builder = ProofBuilder::new(&self.config.halo);
        builder.max_merge = self.config.max_merge;
        builder.max_candidates = self.config.max_candidates;
        builder.fallbacks = tables
            .iter()
            .filter(|t| !t.caption.trim().is_empty())
            .map(|t| EvidenceText { text: t.caption.clone(), question: None })
            .collect();
        if self.config.delegate_natops {
            builder.delegate = Some(&*self.gateway as &dyn NatOpDelegate);
        }
        match builder.build(&subclaim.text, &targets) {
            Ok(proof) => (SubclaimReport { subclaim: subclaim.clone(), questions, rationales, proof, produced: true }, traces),
            Err(e) => fail(format!("proof construction failed: {e}"), traces, questions, rationales),
        }
    }

    pub fn verify_claim(&self, claim_id: &str, claim: &str, tables: &[Table]) -> VerdictReport {
        let (subclaims, mut diagnostics, notes) = self.decompose(claim_id, claim);
        let results: Vec<(SubclaimReport, Vec<GenerationTrace>)> =
            subclaims.par_iter().map(|s| self.verify_subclaim(s, tables)).collect();
        let mut reports = Vec::with_capacity(results.len());
        for (report, traces) in results {
            diagnostics.extend(traces);
            reports.push(report);
        }
        let verdicts: Vec<Verdict> = reports.iter().map(|r| r.proof.verdict).collect();
        let verdict = aggregate(&verdicts).expect("decomposition yields at least one subclaim");
        VerdictReport {
            claim_id: claim_id.to_string(),
            claim: claim.to_string(),
            execution_found: reports.iter().all(|r| r.produced),
            subclaims: reports,
            verdict,
            diagnostics,
            notes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Verdict::*;

    #[test]
    fn aggregation_rules() {
        assert_eq!(aggregate(&[Refuted, Supported]), Ok(Refuted));
        assert_eq!(aggregate(&[Supported, Supported]), Ok(Supported));
        assert_eq!(aggregate(&[Supported, Nei]), Ok(Nei));
        assert_eq!(aggregate(&[Nei, Refuted]), Ok(Refuted));
        assert_eq!(aggregate(&[]), Err(AggregateError::Empty));
    }

    fn verifier(config: PipelineConfig) -> Verifier {
        let template = Gateway::with_backend(Arc::new(crate::gateway::MockBackend::default()));
        Verifier::new(Arc::new(crate::fixtures::golden_gateway(&template).unwrap()), config)
    }

    #[test]
    fn bundled_cases_reach_their_verdicts() {
        let v = verifier(PipelineConfig::default());
        for case in crate::fixtures::golden_cases() {
            let report = v.verify_claim(case.id, case.claim, &case.tables);
            assert!(report.execution_found, "{}: {:?}", case.id, report.notes);
            for (sub, expected) in report.subclaims.iter().zip(&case.subclaims) {
                assert_eq!(sub.proof.ops(), expected.expected_ops, "{}: {:#?}", case.id, sub.proof);
                assert_eq!(sub.proof.verdict, expected.expected);
            }
            assert_eq!(report.verdict, case.expected, "{}", case.id);
            assert_eq!(report.recompute(), Ok(case.expected));
        }
    }

    #[test]
    fn whole_claim_without_merging_is_undecided() {
        let case = crate::fixtures::ortegal();
        let config = PipelineConfig { decompose: false, max_merge: 1, ..PipelineConfig::default() };
        let report = verifier(config).verify_claim(case.id, case.claim, &case.tables);
        assert_eq!(report.subclaims[0].proof.ops(), vec![NatOp::Equiv, NatOp::Equiv, NatOp::Alternation, NatOp::Forward]);
        assert_eq!(report.verdict, Nei);
    }

    #[test]
    fn missing_fixtures_degrade_to_nei() {
        let v = Verifier::new(Arc::new(Gateway::with_backend(Arc::new(crate::gateway::MockBackend::default()))), PipelineConfig::default());
        let report = v.verify_claim("x", "Paris is in France.", &[]);
        assert_eq!(report.verdict, Nei);
        assert!(!report.execution_found);
        assert_eq!(report.subclaims.len(), 1);
        assert!(!report.notes.is_empty());
    }
}
