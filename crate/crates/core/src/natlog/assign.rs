//! Choosing the NatOp for a single claim span.

use crate::arith::{ArithAnswer, Function, Value};
use crate::number::{parse_number, Decimal};
use crate::numerals::{
    compare, comparative_sign, parse_quantities, project, Evidence, HaloPolicy, MonotoneEnv, NatOp, Quantity, Reading,
    Role,
};

use super::lexical::lexical_natop;

/// What a claim span is compared against.
#[derive(Debug, Clone, Copy)]
pub enum EvidenceSide<'a> {
    NotAvailable,
    Text(&'a str),
    Answer(&'a ArithAnswer),
}

/// Fallback for spans the numeric and lexical rules cannot decide, typically
/// backed by a language model.
pub trait NatOpDelegate: Send + Sync {
    fn natop(&self, claim_span: &str, evidence: &str) -> Option<NatOp>;
}

#[derive(Clone, Copy)]
pub struct AssignContext<'a> {
    pub policy: &'a HaloPolicy,
    /// Question whose words are ignored on the claim side.
    pub question: Option<&'a str>,
    /// Byte range within the claim span holding the targeted numeral.
    pub focus: Option<(usize, usize)>,
    pub delegate: Option<&'a dyn NatOpDelegate>,
}

impl<'a> AssignContext<'a> {
    pub fn new(policy: &'a HaloPolicy) -> Self {
        AssignContext { policy, question: None, focus: None, delegate: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub op: NatOp,
    pub note: Option<String>,
}

impl Assignment {
    fn new(op: NatOp, note: impl Into<String>) -> Self {
        Assignment { op, note: Some(note.into()) }
    }
}

/// NatOp between `claim_span` and its evidence under the default halo policy.
pub fn assign_natop(claim_span: &str, evidence: EvidenceSide<'_>, env: &MonotoneEnv) -> NatOp {
    let policy = HaloPolicy::default();
    assign_natop_with(claim_span, evidence, env, &AssignContext::new(&policy)).op
}

fn pick_quantity(claim: &str, focus: Option<(usize, usize)>) -> Option<Quantity> {
    let qs = parse_quantities(claim);
    match focus {
        Some((s, e)) => qs.into_iter().find(|q| q.start < e && q.end > s),
        None => qs.into_iter().next(),
    }
}

fn strip_function_name(a: &ArithAnswer) -> String {
    match &a.result {
        Value::Text { text } => text.clone(),
        v => v.render(),
    }
}

fn numeric(evidence: Evidence, mut q: Quantity, env: &MonotoneEnv, ctx: &AssignContext<'_>) -> Assignment {
    let relative = matches!(&evidence, Evidence::Answer(a) if matches!(a.function, Function::Comp | Function::Diff));
    if q.role == Role::Difference && !relative {
        q.value = q.value.abs();
    }
    match compare(&evidence, &q, env, ctx.policy) {
        Ok(op) => Assignment::new(op, format!("numeric: evidence vs claim {}", q.value)),
        Err(e) => Assignment::new(NatOp::Independence, e.to_string()),
    }
}

/// Numeric comparison first, then lexical rules, then the delegate.
pub fn assign_natop_with(
    claim_span: &str,
    evidence: EvidenceSide<'_>,
    env: &MonotoneEnv,
    ctx: &AssignContext<'_>,
) -> Assignment {
    let evidence_text = match evidence {
        EvidenceSide::NotAvailable => return Assignment::new(NatOp::Independence, "no evidence"),
        EvidenceSide::Answer(a) => {
            if let Value::Number { .. } = a.result {
                if let Some(q) = pick_quantity(claim_span, ctx.focus) {
                    return numeric(Evidence::Answer(a.clone()), q, env, ctx);
                }
                if matches!(a.function, Function::Comp | Function::Diff) {
                    if let Some(sign) = comparative_sign(claim_span) {
                        let reading = if sign > 0 { Reading::GreaterThan } else { Reading::LessThan };
                        let q = Quantity::exact(Decimal::zero()).with_reading(reading);
                        return numeric(Evidence::Answer(a.clone()), q, env, ctx);
                    }
                }
            }
            strip_function_name(a)
        }
        EvidenceSide::Text(t) => {
            if let (Some(n), Some(q)) = (parse_number(t.trim()), pick_quantity(claim_span, ctx.focus)) {
                return numeric(Evidence::Quantity(Quantity::exact(n.value)), q, env, ctx);
            }
            t.to_string()
        }
    };
    if let Some(m) = lexical_natop(claim_span, &evidence_text, ctx.question) {
        return Assignment { op: m.op, note: Some(m.note) };
    }
    if let Some(delegate) = ctx.delegate {
        if let Some(op) = delegate.natop(claim_span, &evidence_text) {
            let op = if env.is_negation() { op } else { project(env, op) };
            return Assignment::new(op, "delegated");
        }
    }
    Assignment::new(NatOp::Independence, "no rule applies")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerals::detect_env;

    fn ans(f: Function, v: i64) -> ArithAnswer {
        ArithAnswer::new(f, Value::num(v))
    }

    fn up() -> MonotoneEnv {
        MonotoneEnv::upward()
    }

    #[test]
    fn numeric_answers() {
        let a = ans(Function::Count, 4);
        assert_eq!(assign_natop("had three municipalities", EvidenceSide::Answer(&a), &up()), NatOp::Alternation);
        let a = ans(Function::Sum, 12238);
        assert_eq!(assign_natop("a population larger than 12,000", EvidenceSide::Answer(&a), &up()), NatOp::Forward);
        let a = ans(Function::Comp, -8);
        let claim = "Mike Huckabee won eight fewer delegates than John McCain";
        assert_eq!(assign_natop(claim, EvidenceSide::Answer(&a), &detect_env(claim)), NatOp::Equiv);
    }

    #[test]
    fn difference_claim_against_plain_value() {
        let a = ans(Function::Copy, 8);
        assert_eq!(assign_natop("eight fewer delegates than McCain", EvidenceSide::Answer(&a), &up()), NatOp::Equiv);
    }

    #[test]
    fn comparative_without_numeral() {
        let a = ans(Function::Comp, 5);
        assert_eq!(assign_natop("scored more goals than Smith", EvidenceSide::Answer(&a), &up()), NatOp::Forward);
        let a = ans(Function::Comp, -5);
        assert_eq!(assign_natop("scored more goals than Smith", EvidenceSide::Answer(&a), &up()), NatOp::Alternation);
    }

    #[test]
    fn text_evidence() {
        assert_eq!(assign_natop("2018", EvidenceSide::Text("2018"), &up()), NatOp::Equiv);
        assert_eq!(assign_natop("In 2018", EvidenceSide::Text("2017"), &up()), NatOp::Alternation);
        let a = ArithAnswer::new(Function::Copy, Value::text("Ortegal"));
        assert_eq!(assign_natop("Ortegal had", EvidenceSide::Answer(&a), &up()), NatOp::Equiv);
        assert_eq!(assign_natop("Paris", EvidenceSide::Text("London"), &up()), NatOp::Independence);
        assert_eq!(assign_natop("Paris", EvidenceSide::NotAvailable, &up()), NatOp::Independence);
    }

    struct Always(NatOp);

    impl NatOpDelegate for Always {
        fn natop(&self, _: &str, _: &str) -> Option<NatOp> {
            Some(self.0)
        }
    }

    #[test]
    fn delegate_is_last_resort() {
        let policy = HaloPolicy::default();
        let d = Always(NatOp::Forward);
        let ctx = AssignContext { delegate: Some(&d), ..AssignContext::new(&policy) };
        let a = assign_natop_with("Paris", EvidenceSide::Text("London"), &up(), &ctx);
        assert_eq!(a.op, NatOp::Forward);
        let env = detect_env("everyone in Paris");
        let a = assign_natop_with("Paris", EvidenceSide::Text("London"), &env, &ctx);
        assert_eq!(a.op, NatOp::Reverse);
    }
}
