//! Table fact verification with natural-logic proofs over numerals and
//! arithmetic expressions.

pub mod arith;
pub mod config;
pub mod eval;
pub mod fixtures;
pub mod gateway;
pub mod natlog;
pub mod number;
pub mod numerals;
pub mod pipeline;
pub mod probe;
pub mod tables;

pub use arith::{eval_expr, ArithAnswer, ArithExpr, Function, TriggerLexicon, Value};
pub use config::Config;
pub use eval::{compute_metrics, Instance, Label, LabelSpace, MetricsReport, Subset};
pub use gateway::{Backend, Gateway, GatewayConfig, LiveBackend, MockBackend};
pub use natlog::{execute_proof, Proof, ProofStep, State, Verdict};
pub use number::Decimal;
pub use numerals::{HaloPolicy, NatOp, Quantity, RoundnessClass};
pub use pipeline::{aggregate, PipelineConfig, VerdictReport, Verifier};
pub use probe::{ProbeClass, Variation, VariationKind};
pub use tables::{Table, TableRecord};
