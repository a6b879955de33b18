//! Assembling proofs for a subclaim from question-answer evidence.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::align::{align_residual, align_spans, AlignError, AlignedSpan, EvidenceText, SpanKind};
use super::assign::{assign_natop_with, AssignContext, Assignment, EvidenceSide, NatOpDelegate};
use super::proof::{Proof, ProofStep};
use super::select::{conjoin, segmentations, select_proof, SelectError};
use crate::arith::ArithAnswer;
use crate::numerals::{detect_env, HaloPolicy};

/// A claim span targeted by a question, with the evidence gathered for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetEvidence {
    pub c: String,
    pub question: String,
    /// Evidence sentence extracted from the table.
    pub extraction: Option<String>,
    /// `None` when the question could not be answered.
    pub answer: Option<ArithAnswer>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Align(#[from] AlignError),
    #[error(transparent)]
    Select(#[from] SelectError),
}

pub struct ProofBuilder<'a> {
    pub policy: &'a HaloPolicy,
    /// Largest number of atomic spans merged into one step.
    pub max_merge: usize,
    pub max_candidates: usize,
    pub delegate: Option<&'a dyn NatOpDelegate>,
    /// Evidence for residual spans that match no extraction, e.g. captions.
    pub fallbacks: Vec<EvidenceText>,
}

impl<'a> ProofBuilder<'a> {
    pub fn new(policy: &'a HaloPolicy) -> Self {
        ProofBuilder { policy, max_merge: 3, max_candidates: 256, delegate: None, fallbacks: Vec::new() }
    }

    fn extractions(targets: &[TargetEvidence]) -> Vec<EvidenceText> {
        targets
            .iter()
            .filter_map(|t| {
                t.extraction.as_ref().map(|e| EvidenceText { text: e.clone(), question: Some(t.question.clone()) })
            })
            .collect()
    }

    fn target_step(&self, subclaim: &str, start: usize, end: usize, c_range: (usize, usize), t: &TargetEvidence) -> ProofStep {
        let raw = &subclaim[start..end];
        let lead = raw.len() - raw.trim_start().len();
        let text = raw.trim();
        let focus = (c_range.0.saturating_sub(start + lead), c_range.1.saturating_sub(start + lead));
        let ctx = AssignContext { question: Some(&t.question), focus: Some(focus), delegate: self.delegate, policy: self.policy };
        let evidence = match &t.answer {
            Some(a) => EvidenceSide::Answer(a),
            None => EvidenceSide::NotAvailable,
        };
        let Assignment { op, note } = assign_natop_with(text, evidence, &detect_env(text), &ctx);
        let e = t.answer.as_ref().map(|a| t.extraction.clone().unwrap_or_else(|| a.rendered.clone()));
        ProofStep {
            c: text.to_string(),
            e,
            q: Some(t.question.clone()),
            a: Some(t.answer.as_ref().map_or_else(|| "N/A".to_string(), |a| a.rendered.clone())),
            op,
            note,
        }
    }

    fn residual_step(&self, text: &str, evidence: Option<&str>, question: Option<&str>) -> ProofStep {
        let ctx = AssignContext { delegate: self.delegate, ..AssignContext::new(self.policy) };
        let side = evidence.map_or(EvidenceSide::NotAvailable, EvidenceSide::Text);
        let Assignment { op, note } = assign_natop_with(text, side, &detect_env(text), &ctx);
        ProofStep {
            c: text.to_string(),
            e: evidence.map(str::to_string),
            q: question.map(str::to_string),
            a: None,
            op,
            note,
        }
    }

    fn atomic_step(&self, subclaim: &str, span: &AlignedSpan, targets: &[TargetEvidence]) -> ProofStep {
        match &span.kind {
            SpanKind::Target { index, c_start, c_end } => {
                self.target_step(subclaim, span.start, span.end, (*c_start, *c_end), &targets[*index])
            }
            SpanKind::Residual(r) => self.residual_step(span.text(subclaim), r.evidence.as_deref(), r.question.as_deref()),
        }
    }

    /// Proofs for every segmentation of the aligned spans, finest first.
    pub fn candidates(&self, subclaim: &str, targets: &[TargetEvidence]) -> Result<Vec<Proof>, AlignError> {
        let extractions = Self::extractions(targets);
        let cs: Vec<&str> = targets.iter().map(|t| t.c.as_str()).collect();
        let spans = align_spans(subclaim, &cs, &extractions, &self.fallbacks)?;
        let atoms: Vec<ProofStep> = spans.iter().map(|s| self.atomic_step(subclaim, s, targets)).collect();
        let mut merged: HashMap<(usize, usize), ProofStep> = HashMap::new();
        let mut out = Vec::new();
        for seg in segmentations(spans.len(), self.max_merge, self.max_candidates) {
            let steps = seg
                .iter()
                .map(|&(i, j)| {
                    merged
                        .entry((i, j))
                        .or_insert_with(|| self.merged_step(subclaim, &spans[i..j], &atoms[i..j], targets, &extractions))
                        .clone()
                })
                .collect();
            out.push(Proof::from_steps(subclaim, steps));
        }
        Ok(out)
    }

    fn merged_step(
        &self,
        subclaim: &str,
        spans: &[AlignedSpan],
        atoms: &[ProofStep],
        targets: &[TargetEvidence],
        extractions: &[EvidenceText],
    ) -> ProofStep {
        if atoms.len() == 1 {
            return atoms[0].clone();
        }
        let (start, end) = (spans[0].start, spans[spans.len() - 1].end);
        let text = subclaim[start..end].trim();
        let hits: Vec<&AlignedSpan> = spans.iter().filter(|s| s.target().is_some()).collect();
        match hits.as_slice() {
            [] => {
                let r = align_residual(text, extractions, &self.fallbacks);
                self.residual_step(text, r.evidence.as_deref(), r.question.as_deref())
            }
            [one] => {
                let SpanKind::Target { index, c_start, c_end } = one.kind else { unreachable!("filtered to targets") };
                self.target_step(subclaim, start, end, (c_start, c_end), &targets[index])
            }
            _ => {
                let join = |f: &dyn Fn(&ProofStep) -> Option<String>| {
                    let parts: Vec<String> = atoms.iter().filter_map(f).collect();
                    (!parts.is_empty()).then(|| parts.join("; "))
                };
                let ops: Vec<_> = atoms.iter().map(|a| if a.e.is_none() { crate::numerals::NatOp::Independence } else { a.op }).collect();
                ProofStep {
                    c: text.to_string(),
                    e: join(&|a| a.e.clone()),
                    q: join(&|a| a.q.clone()),
                    a: join(&|a| a.a.clone()),
                    op: conjoin(&ops),
                    note: Some("conjunction of merged spans".into()),
                }
            }
        }
    }

    /// The best-scoring candidate proof.
    pub fn build(&self, subclaim: &str, targets: &[TargetEvidence]) -> Result<Proof, BuildError> {
        Ok(select_proof(self.candidates(subclaim, targets)?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Function, Value};
    use crate::natlog::Verdict;
    use crate::numerals::NatOp;

    fn target(c: &str, q: &str, ext: &str, f: Function, v: Value) -> TargetEvidence {
        TargetEvidence { c: c.into(), question: q.into(), extraction: Some(ext.into()), answer: Some(ArithAnswer::new(f, v)) }
    }

    fn population_targets() -> Vec<TargetEvidence> {
        vec![
            target(
                "Ortegal",
                "Where was the population measured in 2018?",
                "The population was measured in 2018 for Ortegal.",
                Function::Copy,
                Value::text("Ortegal"),
            ),
            target(
                "three",
                "How many municipalities did Ortegal have?",
                "Ortegal has the municipalities Cariño, Cerdido, Mañón, and Ortigueira.",
                Function::Count,
                Value::num(4),
            ),
            target(
                "larger than 12,000",
                "What was the population of Ortegal in 2018?",
                "The population of Cariño, Cerdido, Mañón, and Ortigueira in 2018 was 3,945, 1,126, 1,363, and 5,804.",
                Function::Sum,
                Value::num(12238),
            ),
        ]
    }

    #[test]
    fn merging_changes_the_verdict() {
        let claim = "In 2018, Ortegal had three municipalities and a population larger than 12,000.";
        let policy = HaloPolicy::default();
        let mut b = ProofBuilder::new(&policy);
        b.max_merge = 1;
        let fine = b.build(claim, &population_targets()).unwrap();
        assert_eq!(fine.ops(), vec![NatOp::Equiv, NatOp::Equiv, NatOp::Alternation, NatOp::Forward]);
        assert_eq!(fine.verdict, Verdict::Nei);
        b.max_merge = 3;
        let coarse = b.build(claim, &population_targets()).unwrap();
        assert_eq!(coarse.verdict, Verdict::Refuted);
        assert_eq!(coarse.count(NatOp::Independence), 0);
    }

    #[test]
    fn unanswered_question_is_independence() {
        let policy = HaloPolicy::default();
        let t = TargetEvidence { c: "Ortegal".into(), question: "Where?".into(), extraction: None, answer: None };
        let p = ProofBuilder::new(&policy).build("Ortegal", &[t]).unwrap();
        assert_eq!(p.ops(), vec![NatOp::Independence]);
        assert_eq!(p.steps[0].a.as_deref(), Some("N/A"));
    }
}
