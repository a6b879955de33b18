//! Text generation behind a uniform interface, with prompt rendering and
//! validate-retry-repair of the generated output.

mod backend;
mod templates;
mod validate;

use std::collections::BTreeMap;
use std::sync::{Arc, Condvar, Mutex};

use serde::{Deserialize, Serialize};

pub use backend::{prompt_hash, Backend, BackendError, Fixture, LiveBackend, LiveConfig, MockBackend, ENV_KEY, ENV_MODEL, ENV_URL};
pub use templates::{render_prompt, Role, TemplateError, Templates};
pub use validate::{
    parse_enumeration, render_qg_output, repair_qg_output, trim_to_claim, validate_decomposition,
    validate_natop_choice, validate_qa_output, validate_qa_output_with, validate_qg_output, CheckedRationale,
    QuestionSpan, Rationale, Violation, ViolationKind, NATOP_CHOICES,
};

use crate::arith::{Function, TriggerLexicon};
use crate::natlog::NatOpDelegate;
use crate::numerals::NatOp;
use crate::tables::{linearize_all, permissible_numbers, Table};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenRequest {
    pub role: Role,
    pub prompt: String,
    pub max_tokens: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<Vec<String>>,
}

/// Everything that happened while producing one validated output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationTrace {
    pub role: Role,
    pub raw_output: String,
    pub validated: bool,
    pub violations: Vec<Violation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repaired_output: Option<String>,
    pub attempts: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl GenerationTrace {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GatewayError {
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error("output rejected after {attempts} attempt(s): {summary}")]
    Rejected { attempts: u32, summary: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GatewayConfig {
    /// Extra attempts after a rejected output.
    pub retries: u32,
    pub max_tokens: u32,
    pub max_tokens_ceiling: u32,
    pub max_in_flight: usize,
}

impl Default for GatewayConfig {
    fn default() -> Self {
        GatewayConfig { retries: 3, max_tokens: 256, max_tokens_ceiling: 2048, max_in_flight: 4 }
    }
}

/// Counting semaphore bounding concurrent backend calls.
struct Slots {
    free: Mutex<usize>,
    cv: Condvar,
}

impl Slots {
    fn new(n: usize) -> Self {
        Slots { free: Mutex::new(n.max(1)), cv: Condvar::new() }
    }

    fn acquire(&self) -> SlotGuard<'_> {
        let mut free = self.free.lock().unwrap_or_else(|e| e.into_inner());
        while *free == 0 {
            free = self.cv.wait(free).unwrap_or_else(|e| e.into_inner());
        }
        *free -= 1;
        SlotGuard(self)
    }
}

struct SlotGuard<'a>(&'a Slots);

impl Drop for SlotGuard<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap_or_else(|e| e.into_inner()) += 1;
        self.0.cv.notify_one();
    }
}

/// Outcome of a validator on one raw output.
pub enum Check<T> {
    Accept(T),
    /// Usable after the engine's own correction.
    Corrected { value: T, violations: Vec<Violation>, repaired: String },
    Reject(Vec<Violation>),
}

pub struct Gateway {
    backend: Arc<dyn Backend>,
    templates: Templates,
    lexicon: TriggerLexicon,
    config: GatewayConfig,
    slots: Slots,
}

fn corrective_suffix(violations: &[Violation]) -> String {
    let mut s = String::from("\n\nYour previous output was rejected:\n");
    for v in violations {
        s.push_str(&format!("- {v}\n"));
    }
    s.push_str("Answer again and follow the required format exactly.\n");
    s
}

impl Gateway {
    pub fn new(backend: Arc<dyn Backend>, templates: Templates, lexicon: TriggerLexicon, config: GatewayConfig) -> Self {
        let slots = Slots::new(config.max_in_flight);
        Gateway { backend, templates, lexicon, config, slots }
    }

    pub fn with_backend(backend: Arc<dyn Backend>) -> Self {
        Gateway::new(backend, Templates::default(), TriggerLexicon::default(), GatewayConfig::default())
    }

    pub fn backend_name(&self) -> &'static str {
        self.backend.name()
    }

    pub fn lexicon(&self) -> &TriggerLexicon {
        &self.lexicon
    }

    pub fn request(&self, role: Role, fields: &BTreeMap<&str, String>) -> Result<GenRequest, TemplateError> {
        Ok(GenRequest {
            role,
            prompt: self.templates.render(role, fields)?,
            max_tokens: self.config.max_tokens.min(self.config.max_tokens_ceiling),
            stop: None,
        })
    }

    pub fn qg_request(&self, claim: &str, tables: &[Table]) -> Result<GenRequest, TemplateError> {
        let fields = BTreeMap::from([("claim", claim.to_string()), ("evidence", linearize_all(tables))]);
        self.request(Role::QuestionGeneration, &fields)
    }

    pub fn qa_request(&self, question: &str, tables: &[Table]) -> Result<GenRequest, TemplateError> {
        let triggers: Vec<String> = self.lexicon.functions().map(|(p, _)| format!("\"{p}\"")).collect();
        let functions: Vec<&str> = Function::ALL.iter().map(|f| f.name()).collect();
        let fields = BTreeMap::from([
            ("question", question.to_string()),
            ("evidence", linearize_all(tables)),
            ("triggers", triggers.join(", ")),
            ("functions", functions.join(", ")),
        ]);
        self.request(Role::QuestionAnswering, &fields)
    }

    pub fn decomposition_request(&self, claim: &str) -> Result<GenRequest, TemplateError> {
        self.request(Role::Decomposition, &BTreeMap::from([("claim", claim.to_string())]))
    }

    pub fn natop_request(&self, claim_span: &str, evidence: &str) -> Result<GenRequest, TemplateError> {
        let fields = BTreeMap::from([("claim_span", claim_span.to_string()), ("evidence", evidence.to_string())]);
        self.request(Role::NatopQuery, &fields)
    }

    /// Same templates, lexicon and limits over another backend.
    pub fn rebind(&self, backend: Arc<dyn Backend>) -> Gateway {
        Gateway::new(backend, self.templates.clone(), self.lexicon.clone(), self.config.clone())
    }

    fn call(&self, request: &GenRequest) -> Result<String, BackendError> {
        let _slot = self.slots.acquire();
        self.backend.generate(request)
    }

    /// Sends `request`, validating each output; rejected outputs are retried
    /// with a corrective suffix, and the last one goes through `repair`.
    pub fn complete_with<T>(
        &self,
        request: &GenRequest,
        validate: impl Fn(&str) -> Check<T>,
        repair: impl Fn(&str) -> Option<(T, String)>,
    ) -> (Option<T>, GenerationTrace) {
        let mut trace = GenerationTrace {
            role: request.role,
            raw_output: String::new(),
            validated: false,
            violations: Vec::new(),
            repaired_output: None,
            attempts: 0,
            error: None,
        };
        let mut current = request.clone();
        for _ in 0..=self.config.retries {
            trace.attempts += 1;
            let raw = match self.call(&current) {
                Ok(raw) => raw,
                Err(e) => {
                    log::warn!("{} request failed: {e}", request.role);
                    trace.error = Some(e.to_string());
                    break;
                }
            };
            trace.raw_output = raw.clone();
            match validate(&raw) {
                Check::Accept(v) => {
                    trace.validated = true;
                    trace.violations.clear();
                    trace.error = None;
                    return (Some(v), trace);
                }
                Check::Corrected { value, violations, repaired } => {
                    trace.violations = violations;
                    trace.repaired_output = Some(repaired);
                    trace.error = None;
                    return (Some(value), trace);
                }
                Check::Reject(violations) => {
                    current.prompt = format!("{}{}", request.prompt, corrective_suffix(&violations));
                    trace.violations = violations;
                }
            }
        }
        if trace.raw_output.is_empty() && trace.error.is_some() {
            return (None, trace);
        }
        match repair(&trace.raw_output) {
            Some((value, repaired)) => {
                trace.repaired_output = Some(repaired);
                trace.error = None;
                (Some(value), trace)
            }
            None => {
                if trace.error.is_none() {
                    let summary: Vec<String> = trace.violations.iter().map(|v| v.to_string()).collect();
                    trace.error = Some(
                        GatewayError::Rejected { attempts: trace.attempts, summary: summary.join("; ") }.to_string(),
                    );
                }
                (None, trace)
            }
        }
    }

    /// Questions about salient spans of `claim`, each span a claim substring.
    pub fn generate_questions(&self, claim: &str, tables: &[Table]) -> Result<(Option<Vec<QuestionSpan>>, GenerationTrace), TemplateError> {
        let req = self.qg_request(claim, tables)?;
        Ok(self.complete_with(
            &req,
            |raw| match validate_qg_output(raw, claim) {
                Ok(v) => Check::Accept(v),
                Err(v) => Check::Reject(v),
            },
            |raw| repair_qg_output(raw, claim).map(|v| {
                let text = render_qg_output(&v);
                (v, text)
            }),
        ))
    }

    /// A rationale answering `question` from `tables`.
    pub fn answer_question(&self, question: &str, tables: &[Table]) -> Result<(Option<Rationale>, GenerationTrace), TemplateError> {
        let req = self.qa_request(question, tables)?;
        let inventory = permissible_numbers(tables);
        Ok(self.complete_with(
            &req,
            |raw| match validate_qa_output_with(raw, &inventory, &self.lexicon) {
                Ok(c) if c.violations.is_empty() => Check::Accept(c.rationale),
                Ok(c) => {
                    let repaired = c.rationale.render();
                    Check::Corrected { value: c.rationale, violations: c.violations, repaired }
                }
                Err(v) => Check::Reject(v),
            },
            |_| None,
        ))
    }

    /// Atomic sub-claims of `claim`.
    pub fn decompose(&self, claim: &str) -> Result<(Option<Vec<String>>, GenerationTrace), TemplateError> {
        let req = self.decomposition_request(claim)?;
        Ok(self.complete_with(
            &req,
            |raw| match validate_decomposition(raw) {
                Ok(v) => Check::Accept(v),
                Err(v) => Check::Reject(v),
            },
            |_| None,
        ))
    }

    pub fn natop_query(&self, claim_span: &str, evidence: &str) -> Result<(Option<NatOp>, GenerationTrace), TemplateError> {
        let req = self.natop_request(claim_span, evidence)?;
        Ok(self.complete_with(
            &req,
            |raw| match validate_natop_choice(raw) {
                Ok(op) => Check::Accept(op),
                Err(v) => Check::Reject(v),
            },
            |_| None,
        ))
    }
}

impl NatOpDelegate for Gateway {
    fn natop(&self, claim_span: &str, evidence: &str) -> Option<NatOp> {
        match self.natop_query(claim_span, evidence) {
            Ok((op, _)) => op,
            Err(e) => {
                log::warn!("natop query not rendered: {e}");
                None
            }
        }
    }
}
