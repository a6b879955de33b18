use serde::{Deserialize, Serialize};

use super::dfa::{dfa_step, execute_proof, State, Verdict};
use crate::numerals::NatOp;

/// One quintuple: claim span, evidence, question, answer and NatOp.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    pub c: String,
    pub e: Option<String>,
    pub q: Option<String>,
    pub a: Option<String>,
    pub op: NatOp,
    /// How the NatOp was decided, e.g. which spellings were equated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ProofStep {
    pub fn new(c: impl Into<String>, op: NatOp) -> Self {
        ProofStep { c: c.into(), e: None, q: None, a: None, op, note: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proof {
    pub subclaim: String,
    pub steps: Vec<ProofStep>,
    pub trace: Vec<State>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofError {
    #[error("trace has {got} states, expected {expected}")]
    TraceLength { expected: usize, got: usize },
    #[error("trace does not follow the automaton at step {0}")]
    TraceMismatch(usize),
    #[error("stated verdict {stated} differs from executed verdict {executed}")]
    VerdictMismatch { stated: Verdict, executed: Verdict },
    #[error("step {0} has no evidence but its NatOp is not independence")]
    MissingEvidence(usize),
}

impl Proof {
    /// Builds a proof and runs it. Cover is collapsed to independence and a
    /// step without evidence is forced to independence.
    pub fn from_steps(subclaim: impl Into<String>, mut steps: Vec<ProofStep>) -> Proof {
        for step in &mut steps {
            step.op = step.op.collapse_cover();
            if step.e.is_none() {
                step.op = NatOp::Independence;
            }
        }
        let ops: Vec<NatOp> = steps.iter().map(|s| s.op).collect();
        let (verdict, trace) = execute_proof(&ops);
        Proof { subclaim: subclaim.into(), steps, trace, verdict }
    }

    pub fn ops(&self) -> Vec<NatOp> {
        self.steps.iter().map(|s| s.op).collect()
    }

    pub fn count(&self, op: NatOp) -> usize {
        self.steps.iter().filter(|s| s.op == op).count()
    }

    /// Re-executes the NatOps and checks the stored trace and verdict.
    pub fn verify(&self) -> Result<(), ProofError> {
        let expected = self.steps.len() + 1;
        if self.trace.len() != expected {
            return Err(ProofError::TraceLength { expected, got: self.trace.len() });
        }
        if self.trace[0] != State::S {
            return Err(ProofError::TraceMismatch(0));
        }
        for (i, step) in self.steps.iter().enumerate() {
            if step.e.is_none() && step.op != NatOp::Independence {
                return Err(ProofError::MissingEvidence(i));
            }
            if dfa_step(self.trace[i], step.op) != self.trace[i + 1] {
                return Err(ProofError::TraceMismatch(i + 1));
            }
        }
        let executed = self.trace[self.trace.len() - 1].verdict();
        if executed != self.verdict {
            return Err(ProofError::VerdictMismatch { stated: self.verdict, executed });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(op: NatOp) -> ProofStep {
        let mut s = ProofStep::new("x", op);
        s.e = Some("x".into());
        s
    }

    #[test]
    fn trace_is_consistent() {
        let p = Proof::from_steps("x", vec![step(NatOp::Equiv), step(NatOp::Alternation)]);
        assert_eq!(p.trace, vec![State::S, State::S, State::R]);
        assert_eq!(p.verdict, Verdict::Refuted);
        assert!(p.verify().is_ok());
    }

    #[test]
    fn missing_evidence_forces_independence() {
        let p = Proof::from_steps("x", vec![ProofStep::new("x", NatOp::Equiv)]);
        assert_eq!(p.ops(), vec![NatOp::Independence]);
        assert_eq!(p.verdict, Verdict::Nei);
    }

    #[test]
    fn tampered_proofs_are_detected() {
        let mut p = Proof::from_steps("x", vec![step(NatOp::Equiv)]);
        p.verdict = Verdict::Refuted;
        assert!(matches!(p.verify(), Err(ProofError::VerdictMismatch { .. })));
        p.trace.push(State::N);
        assert!(matches!(p.verify(), Err(ProofError::TraceLength { .. })));
    }

    #[test]
    fn json_shape() {
        let p = Proof::from_steps("x", vec![step(NatOp::Forward)]);
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["steps"][0]["op"], "FE");
        assert_eq!(v["trace"], serde_json::json!(["S", "S"]));
        assert_eq!(v["verdict"], "SUPPORTS");
    }
}
