//! Arithmetic expressions over extracted evidence and their "NAME result" rendering.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::number::{parse_number, Decimal};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("{function} expects {expected} argument(s), got {got}")]
    Arity { function: Function, expected: &'static str, got: usize },
    #[error("{function} needs numeric arguments, got {arg:?}")]
    Type { function: Function, arg: String },
    #[error("SUPER needs a direction (min or max)")]
    MissingDirection,
    #[error("SUPER arguments must be (value, label) pairs")]
    Unlabeled,
    #[error("unknown function {0:?}")]
    UnknownFunction(String),
    #[error("malformed answer {0:?}")]
    Malformed(String),
    #[error("trigger phrase {phrase:?} maps to both {first} and {second}")]
    TriggerClash { phrase: String, first: Function, second: Function },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Function {
    Count,
    Sum,
    Diff,
    Average,
    Min,
    Max,
    Comp,
    Super,
    Copy,
}

impl Function {
    pub const ALL: [Function; 9] = [
        Function::Count,
        Function::Sum,
        Function::Diff,
        Function::Average,
        Function::Min,
        Function::Max,
        Function::Comp,
        Function::Super,
        Function::Copy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Function::Count => "COUNT",
            Function::Sum => "SUM",
            Function::Diff => "DIFF",
            Function::Average => "AVERAGE",
            Function::Min => "MIN",
            Function::Max => "MAX",
            Function::Comp => "COMP",
            Function::Super => "SUPER",
            Function::Copy => "COPY",
        }
    }

    /// Accepts the canonical names plus FILTER for COPY.
    pub fn from_name(name: &str) -> Option<Function> {
        let upper = name.to_ascii_uppercase();
        if upper == "FILTER" {
            return Some(Function::Copy);
        }
        Function::ALL.into_iter().find(|f| f.name() == upper)
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Value {
    Number { value: Decimal, percent: bool },
    Text { text: String },
}

impl Value {
    pub fn num(v: impl Into<Decimal>) -> Value {
        Value::Number { value: v.into(), percent: false }
    }

    pub fn percent(v: Decimal) -> Value {
        Value::Number { value: v, percent: true }
    }

    pub fn text(t: impl Into<String>) -> Value {
        Value::Text { text: t.into() }
    }

    pub fn as_number(&self) -> Option<&Decimal> {
        match self {
            Value::Number { value, .. } => Some(value),
            Value::Text { .. } => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Value::Number { value, percent } => {
                let mut s = value.render(2);
                if *percent {
                    s.push('%');
                }
                s
            }
            Value::Text { text } => text.clone(),
        }
    }

    /// Numbers written in the shared grammar become numbers, anything else text.
    pub fn parse(text: &str) -> Value {
        let trimmed = text.trim();
        let candidate = trimmed.strip_suffix('.').unwrap_or(trimmed);
        match parse_number(candidate) {
            Some(tok) if !tok.plus => Value::Number { value: tok.value, percent: tok.percent },
            _ => Value::text(trimmed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Arg {
    Value { value: Value },
    Labeled { label: String, value: Value },
    Expr { expr: Box<ArithExpr> },
}

impl Arg {
    pub fn num(v: impl Into<Decimal>) -> Arg {
        Arg::Value { value: Value::num(v) }
    }

    pub fn text(t: impl Into<String>) -> Arg {
        Arg::Value { value: Value::text(t) }
    }

    pub fn value(value: Value) -> Arg {
        Arg::Value { value }
    }

    pub fn labeled(label: impl Into<String>, value: impl Into<Decimal>) -> Arg {
        Arg::Labeled { label: label.into(), value: Value::num(value) }
    }

    pub fn expr(expr: ArithExpr) -> Arg {
        Arg::Expr { expr: Box::new(expr) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithExpr {
    pub function: Function,
    pub args: Vec<Arg>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
}

impl ArithExpr {
    pub fn new(function: Function, args: Vec<Arg>) -> Self {
        ArithExpr { function, args, direction: None }
    }

    pub fn superlative(direction: Direction, args: Vec<Arg>) -> Self {
        ArithExpr { function: Function::Super, args, direction: Some(direction) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithAnswer {
    pub function: Function,
    pub result: Value,
    pub rendered: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<ArithExpr>,
}

impl ArithAnswer {
    pub fn new(function: Function, result: Value) -> Self {
        let rendered = format!("{} {}", function.name(), result.render());
        ArithAnswer { function, result, rendered, expr: None }
    }
}

impl fmt::Display for ArithAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rendered)
    }
}

pub fn eval_expr(expr: &ArithExpr) -> Result<ArithAnswer, ArithError> {
    let result = eval_value(expr)?;
    let mut answer = ArithAnswer::new(expr.function, result);
    answer.expr = Some(expr.clone());
    Ok(answer)
}

fn eval_arg(arg: &Arg) -> Result<Value, ArithError> {
    match arg {
        Arg::Value { value } | Arg::Labeled { value, .. } => Ok(value.clone()),
        Arg::Expr { expr } => eval_value(expr),
    }
}

fn numeric_args(function: Function, args: &[Arg]) -> Result<(Vec<Decimal>, bool), ArithError> {
    let mut nums = Vec::with_capacity(args.len());
    let mut all_percent = true;
    for arg in args {
        match eval_arg(arg)? {
            Value::Number { value, percent } => {
                all_percent &= percent;
                nums.push(value);
            }
            Value::Text { text } => return Err(ArithError::Type { function, arg: text }),
        }
    }
    Ok((nums, all_percent))
}

fn check_arity(function: Function, args: &[Arg]) -> Result<(), ArithError> {
    let (ok, expected) = match function {
        Function::Copy => (args.len() == 1, "exactly 1"),
        Function::Diff | Function::Comp => (args.len() == 2, "exactly 2"),
        _ => (!args.is_empty(), "at least 1"),
    };
    if ok {
        Ok(())
    } else {
        Err(ArithError::Arity { function, expected, got: args.len() })
    }
}

fn eval_value(expr: &ArithExpr) -> Result<Value, ArithError> {
    let f = expr.function;
    check_arity(f, &expr.args)?;
    let number = |value: Decimal, percent: bool| Value::Number { value, percent };
    Ok(match f {
        Function::Count => {
            for arg in &expr.args {
                eval_arg(arg)?;
            }
            Value::num(expr.args.len() as i64)
        }
        Function::Copy => eval_arg(&expr.args[0])?,
        Function::Sum => {
            let (nums, pct) = numeric_args(f, &expr.args)?;
            number(nums.into_iter().sum(), pct)
        }
        Function::Average => {
            let (nums, pct) = numeric_args(f, &expr.args)?;
            let n = Decimal::from_int(nums.len() as i64);
            number(nums.into_iter().sum::<Decimal>() / n, pct)
        }
        Function::Min | Function::Max => {
            let (nums, pct) = numeric_args(f, &expr.args)?;
            let best = if f == Function::Min { nums.into_iter().min() } else { nums.into_iter().max() };
            number(best.expect("arity checked"), pct)
        }
        Function::Diff | Function::Comp => {
            let (nums, pct) = numeric_args(f, &expr.args)?;
            number(&nums[0] - &nums[1], pct)
        }
        Function::Super => {
            let direction = expr.direction.ok_or(ArithError::MissingDirection)?;
            let mut best: Option<(Decimal, &str)> = None;
            for arg in &expr.args {
                let Arg::Labeled { label, value } = arg else {
                    return Err(ArithError::Unlabeled);
                };
                let v = value
                    .as_number()
                    .ok_or_else(|| ArithError::Type { function: f, arg: value.render() })?
                    .clone();
                let better = match &best {
                    None => true,
                    Some((b, _)) => match direction {
                        Direction::Min => v < *b,
                        Direction::Max => v > *b,
                    },
                };
                if better {
                    best = Some((v, label));
                }
            }
            Value::text(best.expect("arity checked").1)
        }
    })
}

/// Reads "NAME result"; only the result is recovered.
pub fn parse_arith_answer(text: &str) -> Result<ArithAnswer, ArithError> {
    let trimmed = text.trim();
    let (name, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
    let function = Function::from_name(name).ok_or_else(|| ArithError::UnknownFunction(name.to_string()))?;
    if rest.trim().is_empty() {
        return Err(ArithError::Malformed(text.to_string()));
    }
    Ok(ArithAnswer::new(function, Value::parse(rest)))
}

/// Leading words of a compute line that announce a function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriggerLexicon {
    entries: Vec<(String, Function)>,
}

pub const NO_COMPUTATION: [&str; 2] = ["No computation is required", "No computation required"];

impl Default for TriggerLexicon {
    fn default() -> Self {
        let mut entries: Vec<(String, Function)> = [
            ("Adding", Function::Sum),
            ("Summing", Function::Sum),
            ("Counting", Function::Count),
            ("Subtracting", Function::Diff),
            ("Comparing", Function::Comp),
            ("Averaging", Function::Average),
            ("Minimum", Function::Min),
            ("Maximum", Function::Max),
            ("Ranking", Function::Super),
            ("Superlative", Function::Super),
        ]
        .into_iter()
        .map(|(p, f)| (p.to_string(), f))
        .collect();
        entries.extend(NO_COMPUTATION.iter().map(|p| (p.to_string(), Function::Copy)));
        TriggerLexicon { entries }
    }
}

impl TriggerLexicon {
    /// Builds a lexicon from function name → phrases. Every phrase must map to a
    /// single function.
    pub fn from_map(map: &BTreeMap<String, Vec<String>>) -> Result<Self, ArithError> {
        let mut lex = TriggerLexicon { entries: Vec::new() };
        for (name, phrases) in map {
            let f = Function::from_name(name).ok_or_else(|| ArithError::UnknownFunction(name.clone()))?;
            for phrase in phrases {
                lex.insert(phrase, f)?;
            }
        }
        Ok(lex)
    }

    pub fn insert(&mut self, phrase: &str, function: Function) -> Result<(), ArithError> {
        let key = phrase.trim();
        if let Some((_, existing)) = self.entries.iter().find(|(p, _)| p.eq_ignore_ascii_case(key)) {
            if *existing != function {
                return Err(ArithError::TriggerClash {
                    phrase: key.to_string(),
                    first: *existing,
                    second: function,
                });
            }
            return Ok(());
        }
        self.entries.push((key.to_string(), function));
        Ok(())
    }

    /// Adds `other`'s phrases on top of this lexicon.
    pub fn extend(&mut self, other: &TriggerLexicon) -> Result<(), ArithError> {
        for (p, f) in &other.entries {
            self.insert(p, *f)?;
        }
        Ok(())
    }

    pub fn phrases(&self, function: Function) -> impl Iterator<Item = &str> {
        self.entries.iter().filter(move |(_, f)| *f == function).map(|(p, _)| p.as_str())
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, Function)> {
        self.entries.iter().map(|(p, f)| (p.as_str(), *f))
    }

    /// Longest phrase that starts `line` at a word boundary; returns the
    /// function and the byte length matched.
    pub fn match_prefix(&self, line: &str) -> Option<(Function, usize)> {
        let line = line.trim_start();
        self.entries
            .iter()
            .filter(|(p, _)| {
                line.len() >= p.len()
                    && line.is_char_boundary(p.len())
                    && line[..p.len()].eq_ignore_ascii_case(p)
                    && line[p.len()..].chars().next().map_or(true, |c| !c.is_alphanumeric())
            })
            .max_by_key(|(p, _)| p.len())
            .map(|(p, f)| (*f, p.len()))
    }
}
