//! Reading-of-numerals probe: numeral variations of supported claims and
//! the retention of Supported predictions under each variation class.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::eval::{Instance, Label};
use crate::natlog::Verdict;
use crate::number::{scan_numbers, Decimal, NumberToken};
use crate::numerals::{NonPositive, RoundnessClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VariationKind {
    PlusOne,
    Plus2Pct,
    Minus2Pct,
    Plus10Pct,
    Minus10Pct,
    Plus25Pct,
    Minus25Pct,
    Round10,
    Round5,
    Round2_5,
    About10,
    Around5,
    Approximately2_5,
    AtMostMinus10Pct,
    AtLeastPlus10Pct,
    AtMostPlus10Pct,
    AtLeastMinus10Pct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProbeClass {
    #[serde(rename = "Inaccuracy Δ+1")]
    PlusOne,
    #[serde(rename = "Inaccuracy Δ2%")]
    Inaccuracy2,
    #[serde(rename = "Inaccuracy Δ10%")]
    Inaccuracy10,
    #[serde(rename = "Inaccuracy Δ25%")]
    Inaccuracy25,
    #[serde(rename = "Rounding")]
    Rounding,
    #[serde(rename = "Modifiers")]
    Modifiers,
    #[serde(rename = "Cardinal (incorrect)")]
    CardinalIncorrect,
    #[serde(rename = "Cardinal (correct)")]
    CardinalCorrect,
}

impl ProbeClass {
    pub const ALL: [ProbeClass; 8] = [
        ProbeClass::PlusOne,
        ProbeClass::Inaccuracy2,
        ProbeClass::Inaccuracy10,
        ProbeClass::Inaccuracy25,
        ProbeClass::Rounding,
        ProbeClass::Modifiers,
        ProbeClass::CardinalIncorrect,
        ProbeClass::CardinalCorrect,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ProbeClass::PlusOne => "Inaccuracy Δ+1",
            ProbeClass::Inaccuracy2 => "Inaccuracy Δ2%",
            ProbeClass::Inaccuracy10 => "Inaccuracy Δ10%",
            ProbeClass::Inaccuracy25 => "Inaccuracy Δ25%",
            ProbeClass::Rounding => "Rounding",
            ProbeClass::Modifiers => "Modifiers",
            ProbeClass::CardinalIncorrect => "Cardinal (incorrect)",
            ProbeClass::CardinalCorrect => "Cardinal (correct)",
        }
    }

    pub fn kinds(self) -> Vec<VariationKind> {
        VariationKind::ALL.into_iter().filter(|k| k.class() == self).collect()
    }
}

impl fmt::Display for ProbeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Cue put in front of the mutated numeral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Prefix {
    None,
    Modifier(&'static str),
    AtMost,
    AtLeast,
}

impl VariationKind {
    pub const ALL: [VariationKind; 17] = [
        VariationKind::PlusOne,
        VariationKind::Plus2Pct,
        VariationKind::Minus2Pct,
        VariationKind::Plus10Pct,
        VariationKind::Minus10Pct,
        VariationKind::Plus25Pct,
        VariationKind::Minus25Pct,
        VariationKind::Round10,
        VariationKind::Round5,
        VariationKind::Round2_5,
        VariationKind::About10,
        VariationKind::Around5,
        VariationKind::Approximately2_5,
        VariationKind::AtMostMinus10Pct,
        VariationKind::AtLeastPlus10Pct,
        VariationKind::AtMostPlus10Pct,
        VariationKind::AtLeastMinus10Pct,
    ];

    /// Position in the variation list, 1 to 17.
    pub fn number(self) -> u8 {
        VariationKind::ALL.iter().position(|k| *k == self).expect("listed") as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<VariationKind> {
        VariationKind::ALL.get(usize::from(n).checked_sub(1)?).copied()
    }

    pub fn class(self) -> ProbeClass {
        use VariationKind::*;
        match self {
            PlusOne => ProbeClass::PlusOne,
            Plus2Pct | Minus2Pct => ProbeClass::Inaccuracy2,
            Plus10Pct | Minus10Pct => ProbeClass::Inaccuracy10,
            Plus25Pct | Minus25Pct => ProbeClass::Inaccuracy25,
            Round10 | Round5 | Round2_5 => ProbeClass::Rounding,
            About10 | Around5 | Approximately2_5 => ProbeClass::Modifiers,
            AtMostMinus10Pct | AtLeastPlus10Pct => ProbeClass::CardinalIncorrect,
            AtMostPlus10Pct | AtLeastMinus10Pct => ProbeClass::CardinalCorrect,
        }
    }

    pub fn description(self) -> &'static str {
        use VariationKind::*;
        match self {
            PlusOne => "x + 1",
            Plus2Pct => "x + 2%",
            Minus2Pct => "x - 2%",
            Plus10Pct => "x + 10%",
            Minus10Pct => "x - 10%",
            Plus25Pct => "x + 25%",
            Minus25Pct => "x - 25%",
            Round10 => "rounded, 10-ness",
            Round5 => "rounded, 5-ness",
            Round2_5 => "rounded, 2.5-ness",
            About10 => "'About' + rounded, 10-ness",
            Around5 => "'Around' + rounded, 5-ness",
            Approximately2_5 => "'Approximately' + rounded, 2.5-ness",
            AtMostMinus10Pct => "'At most' + (x - 10%)",
            AtLeastPlus10Pct => "'At least' + (x + 10%)",
            AtMostPlus10Pct => "'At most' + (x + 10%)",
            AtLeastMinus10Pct => "'At least' + (x - 10%)",
        }
    }

    fn scaled(x: &Decimal, percent: i64) -> Decimal {
        x * &Decimal::from_ratio(100 + percent, 100)
    }

    /// Numeric value of the variation of `x`.
    pub fn apply(self, x: &Decimal) -> Result<Decimal, NonPositive> {
        use VariationKind::*;
        Ok(match self {
            PlusOne => x + &Decimal::from_int(1),
            Plus2Pct => Self::scaled(x, 2),
            Minus2Pct => Self::scaled(x, -2),
            Plus10Pct | AtLeastPlus10Pct | AtMostPlus10Pct => Self::scaled(x, 10),
            Minus10Pct | AtMostMinus10Pct | AtLeastMinus10Pct => Self::scaled(x, -10),
            Plus25Pct => Self::scaled(x, 25),
            Minus25Pct => Self::scaled(x, -25),
            Round10 | About10 => round_to_class(x, RoundnessClass::Ten)?,
            Round5 | Around5 => round_to_class(x, RoundnessClass::Five)?,
            Round2_5 | Approximately2_5 => round_to_class(x, RoundnessClass::TwoPointFive)?,
        })
    }

    fn prefix(self) -> Prefix {
        use VariationKind::*;
        match self {
            About10 => Prefix::Modifier("about"),
            Around5 => Prefix::Modifier("around"),
            Approximately2_5 => Prefix::Modifier("approximately"),
            AtMostMinus10Pct | AtMostPlus10Pct => Prefix::AtMost,
            AtLeastPlus10Pct | AtLeastMinus10Pct => Prefix::AtLeast,
            _ => Prefix::None,
        }
    }
}

impl fmt::Display for VariationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.number(), self.description())
    }
}

impl Serialize for VariationKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

impl<'de> Deserialize<'de> for VariationKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = u8::deserialize(d)?;
        VariationKind::from_number(n).ok_or_else(|| serde::de::Error::custom(format!("no variation kind {n}")))
    }
}

/// Nearest member of `class`; ties go to the smaller member.
pub fn round_to_class(x: &Decimal, class: RoundnessClass) -> Result<Decimal, NonPositive> {
    class.round(x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variation {
    pub kind: VariationKind,
    pub class: ProbeClass,
    pub original: Decimal,
    pub value: Decimal,
    /// Replacement for the numeral span, cue included.
    pub mutated_span: String,
    pub claim: String,
}

/// First numeral of `claim` that can be varied: positive, not year-like and
/// without a trailing `+`.
pub fn probe_numeral(claim: &str) -> Option<NumberToken> {
    scan_numbers(claim)
        .into_iter()
        .find(|t| t.value.is_positive() && !t.plus && !t.is_year_like(claim))
}

/// Supported instances with a numeral to vary, paired with that numeral.
pub fn select_base_claims(instances: &[Instance]) -> Vec<(&Instance, NumberToken)> {
    instances
        .iter()
        .filter(|i| i.label == Some(Label::Supported))
        .filter_map(|i| probe_numeral(&i.claim).map(|t| (i, t)))
        .collect()
}

/// `value` written like `token`: same grouping and percent sign, at most two
/// decimals.
pub fn render_like(value: &Decimal, token: &NumberToken) -> String {
    let rounded = value.round_to(2);
    let places = (0..=2u32).find(|p| rounded.round_to(*p) == rounded).unwrap_or(2);
    let mut out = rounded.render_fixed(places, token.grouped);
    if token.percent {
        out.push('%');
    }
    out
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// All 17 variations of `token` within `claim`.
pub fn generate_variations(claim: &str, token: &NumberToken) -> Result<Vec<Variation>, NonPositive> {
    let sentence_start = claim[..token.start].trim().is_empty();
    VariationKind::ALL
        .into_iter()
        .map(|kind| {
            let value = kind.apply(&token.value)?;
            let number = render_like(&value, token);
            let cue = match kind.prefix() {
                Prefix::None => "",
                Prefix::Modifier(m) => m,
                Prefix::AtMost => "at most",
                Prefix::AtLeast => "at least",
            };
            let mutated_span = match cue {
                "" => number,
                cue if sentence_start => format!("{} {number}", capitalize(cue)),
                cue => format!("{cue} {number}"),
            };
            let claim = format!("{}{}{}", &claim[..token.start], mutated_span, &claim[token.end..]);
            Ok(Variation { kind, class: kind.class(), original: token.value.clone(), value, mutated_span, claim })
        })
        .collect()
}

/// Probe instance ids are `<base_id>#<kind>`, with kind 0 for the original.
pub fn probe_id(base_id: &str, kind: Option<VariationKind>) -> String {
    format!("{base_id}#{}", kind.map_or(0, VariationKind::number))
}

/// Inverse of [`probe_id`].
pub fn parse_probe_id(id: &str) -> Option<(&str, Option<VariationKind>)> {
    let (base, kind) = id.rsplit_once('#')?;
    let n: u8 = kind.parse().ok()?;
    match n {
        0 => Some((base, None)),
        n => Some((base, Some(VariationKind::from_number(n)?))),
    }
}

/// The probing dataset: each base claim followed by its 17 variations.
/// Originals keep their label; variations carry none.
pub fn build_probe(instances: &[Instance]) -> Vec<Instance> {
    let mut out = Vec::new();
    for (base, token) in select_base_claims(instances) {
        let variations = generate_variations(&base.claim, &token).expect("probe numerals are positive");
        let mut original = base.clone();
        original.id = probe_id(&base.id, None);
        original.base_id = Some(base.id.clone());
        original.kind = None;
        original.class = None;
        out.push(original);
        for v in variations {
            let mut inst = base.clone();
            inst.id = probe_id(&base.id, Some(v.kind));
            inst.claim = v.claim;
            inst.label = None;
            inst.base_id = Some(base.id.clone());
            inst.kind = Some(v.kind);
            inst.class = Some(v.class);
            out.push(inst);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeScore {
    /// Base claims with a Supported prediction on the original.
    pub base_supported: usize,
    pub base_total: usize,
    /// Retention per class; `None` when no base claim was predicted Supported.
    pub classes: BTreeMap<ProbeClass, Option<f64>>,
    pub kinds: BTreeMap<VariationKind, Option<f64>>,
    /// Predictions whose id is not a probe id or whose base is missing.
    pub ignored: usize,
}

/// Share of correctly supported base claims whose variations stay Supported,
/// per kind and averaged over each class's kinds.
pub fn score_probe<'a>(predictions: impl IntoIterator<Item = (&'a str, Verdict)>) -> ProbeScore {
    let mut bases: HashMap<&str, Verdict> = HashMap::new();
    let mut mutated: Vec<(&str, VariationKind, Verdict)> = Vec::new();
    let mut ignored = 0;
    for (id, verdict) in predictions {
        match parse_probe_id(id) {
            Some((base, None)) => {
                bases.insert(base, verdict);
            }
            Some((base, Some(kind))) => mutated.push((base, kind, verdict)),
            None => ignored += 1,
        }
    }
    let supported: Vec<&str> = bases.iter().filter(|(_, v)| **v == Verdict::Supported).map(|(b, _)| *b).collect();
    let denominator = supported.len();
    let mut retained: HashMap<VariationKind, usize> = HashMap::new();
    for (base, kind, verdict) in &mutated {
        if !bases.contains_key(base) {
            ignored += 1;
        } else if bases[base] == Verdict::Supported && *verdict == Verdict::Supported {
            *retained.entry(*kind).or_default() += 1;
        }
    }
    let kinds: BTreeMap<VariationKind, Option<f64>> = VariationKind::ALL
        .into_iter()
        .map(|k| {
            let r = (denominator > 0).then(|| retained.get(&k).copied().unwrap_or(0) as f64 / denominator as f64);
            (k, r)
        })
        .collect();
    let classes = ProbeClass::ALL
        .into_iter()
        .map(|c| {
            let ks = c.kinds();
            let r = (denominator > 0).then(|| ks.iter().map(|k| kinds[k].unwrap_or(0.0)).sum::<f64>() / ks.len() as f64);
            (c, r)
        })
        .collect();
    ProbeScore { base_supported: denominator, base_total: bases.len(), classes, kinds, ignored }
}
