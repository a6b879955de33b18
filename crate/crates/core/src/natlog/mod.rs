//! Proofs over natural-logic operators and their execution.

mod align;
mod assign;
mod build;
mod dfa;
mod lexical;
mod proof;
mod select;

pub use align::{align_residual, align_spans, AlignError, AlignedSpan, EvidenceText, ResidualEvidence, SpanKind};
pub use assign::{assign_natop, assign_natop_with, AssignContext, Assignment, EvidenceSide, NatOpDelegate};
pub use build::{BuildError, ProofBuilder, TargetEvidence};
pub use dfa::{dfa_step, execute_proof, ParseLabelError, State, Verdict};
pub use lexical::{content_set, lexical_natop, strip_diacritics, tokenize, LexicalMatch, Token};
pub use proof::{Proof, ProofError, ProofStep};
pub use select::{conjoin, proof_score, segmentations, select_proof, SelectError};
