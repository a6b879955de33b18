//! Dataset loading, label spaces, metrics and resumable evaluation runs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::natlog::Verdict;
use crate::numerals::parse_quantities;
use crate::pipeline::{VerdictReport, Verifier};
use crate::probe::{ProbeClass, VariationKind};
use crate::tables::{Table, TableRecord};

/// Gold or projected label. `NotSupported` only occurs in the two-way space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Supported,
    Refuted,
    Nei,
    NotSupported,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Supported => "SUPPORTS",
            Label::Refuted => "REFUTES",
            Label::Nei => "NEI",
            Label::NotSupported => "NOT SUPPORTED",
        }
    }
}

impl From<Verdict> for Label {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Supported => Label::Supported,
            Verdict::Refuted => Label::Refuted,
            Verdict::Nei => Label::Nei,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s.trim().to_ascii_uppercase().chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        match norm.as_str() {
            "NOTSUPPORTED" | "NOTSUPPORTS" | "REFUTEDORNEI" | "0" => Ok(Label::NotSupported),
            "1" => Ok(Label::Supported),
            _ => s.parse::<Verdict>().map(Label::from).map_err(|e| e.to_string()),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) => n.to_string().parse().map_err(serde::de::Error::custom),
            serde_json::Value::Bool(b) => Ok(if b { Label::Supported } else { Label::NotSupported }),
            other => Err(serde::de::Error::custom(format!("unsupported label {other}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelSpace {
    ThreeWay,
    TwoWay,
}

impl LabelSpace {
    pub fn labels(self) -> &'static [Label] {
        match self {
            LabelSpace::ThreeWay => &[Label::Supported, Label::Refuted, Label::Nei],
            LabelSpace::TwoWay => &[Label::Supported, Label::NotSupported],
        }
    }

    pub fn project(self, label: Label) -> Label {
        match (self, label) {
            (LabelSpace::TwoWay, Label::Supported) => Label::Supported,
            (LabelSpace::TwoWay, _) => Label::NotSupported,
            (LabelSpace::ThreeWay, l) => l,
        }
    }
}

impl FromStr for LabelSpace {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "three_way" | "3" => Ok(LabelSpace::ThreeWay),
            "two_way" | "2" => Ok(LabelSpace::TwoWay),
            _ => Err(format!("unknown label space {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subset {
    Full,
    Numerical,
    R1,
    R2,
    All,
}

impl FromStr for Subset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(Subset::Full),
            "numerical" => Ok(Subset::Numerical),
            "r1" => Ok(Subset::R1),
            "r2" => Ok(Subset::R2),
            "all" => Ok(Subset::All),
            _ => Err(format!("unknown subset {s:?}")),
        }
    }
}

fn id_string<'de, D: Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    match serde_json::Value::deserialize(d)? {
        serde_json::Value::String(s) => Ok(s),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        other => Err(serde::de::Error::custom(format!("unsupported id {other}"))),
    }
}

/// A claim with its evidence tables, as read from a dataset or written by the
/// probe generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    #[serde(deserialize_with = "id_string")]
    pub id: String,
    pub claim: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
    pub tables: Vec<TableRecord>,
    /// Dataset flag for numerical claims, when the dataset has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerical: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub challenge: Option<String>,
    /// Split or subset names such as "R1".
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<VariationKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<ProbeClass>,
}

impl Instance {
    pub fn new(id: impl Into<String>, claim: impl Into<String>, label: Option<Label>, tables: Vec<TableRecord>) -> Self {
        Instance {
            id: id.into(),
            claim: claim.into(),
            label,
            tables,
            numerical: None,
            challenge: None,
            tags: Vec::new(),
            base_id: None,
            kind: None,
            class: None,
        }
    }

    /// Dataset flag when present, else `None`.
    pub fn numerical_flag(&self) -> Option<bool> {
        self.numerical.or_else(|| self.challenge.as_ref().map(|c| c.to_ascii_lowercase().contains("numer")))
    }

    pub fn tables(&self) -> (Vec<Table>, Vec<String>) {
        let mut tables = Vec::new();
        let mut notes = Vec::new();
        for (k, record) in self.tables.iter().enumerate() {
            match Table::from_record(record, &format!("{}:{k}", self.id)) {
                Ok(t) => tables.push(t),
                Err(e) => notes.push(format!("table {k} skipped: {e}")),
            }
        }
        (tables, notes)
    }
}

/// Whether the claim mentions any numeral, year-like tokens included.
pub fn has_numeral(claim: &str) -> bool {
    !parse_quantities(claim).is_empty()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DatasetFormat {
    #[serde(rename = "feverous-jsonl")]
    FeverousJsonl,
    #[serde(rename = "tabfact-jsonl")]
    TabfactJsonl,
}

impl DatasetFormat {
    pub fn label_space(self) -> LabelSpace {
        match self {
            DatasetFormat::FeverousJsonl => LabelSpace::ThreeWay,
            DatasetFormat::TabfactJsonl => LabelSpace::TwoWay,
        }
    }
}

impl FromStr for DatasetFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "feverous-jsonl" | "feverous" => Ok(DatasetFormat::FeverousJsonl),
            "tabfact-jsonl" | "tabfact" => Ok(DatasetFormat::TabfactJsonl),
            _ => Err(format!("unknown dataset format {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
struct TabfactRecord {
    #[serde(default, deserialize_with = "opt_id")]
    id: Option<String>,
    #[serde(alias = "statement")]
    claim: String,
    #[serde(default)]
    label: Option<Label>,
    #[serde(default)]
    table: Option<Vec<Vec<String>>>,
    #[serde(default)]
    tables: Option<Vec<TableRecord>>,
    #[serde(default, alias = "table_caption")]
    caption: String,
    #[serde(default)]
    tags: Vec<String>,
}

fn opt_id<'de, D: Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    id_string(d).map(Some)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedDataset {
    pub instances: Vec<Instance>,
    /// Malformed lines skipped while loading.
    pub skipped: usize,
    pub label_space: LabelSpace,
}

fn parse_line(line: &str, format: DatasetFormat, line_no: usize) -> Result<Instance, String> {
    match format {
        DatasetFormat::FeverousJsonl => serde_json::from_str(line).map_err(|e| e.to_string()),
        DatasetFormat::TabfactJsonl => {
            let r: TabfactRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
            let mut tables = match (r.tables, r.table) {
                (Some(t), _) => t,
                (None, Some(rows)) => vec![TableRecord { caption: r.caption, header_row_count: 1, rows }],
                (None, None) => return Err("missing field `table`".to_string()),
            };
            for t in &mut tables {
                t.header_row_count = 1;
            }
            let mut inst = Instance::new(r.id.unwrap_or_else(|| line_no.to_string()), r.claim, r.label, tables);
            inst.tags = r.tags;
            Ok(inst)
        }
    }
}

/// Reads a JSONL dataset, skipping (and counting) malformed lines.
pub fn load_dataset(path: &Path, format: DatasetFormat) -> io::Result<LoadedDataset> {
    let reader = BufReader::new(File::open(path)?);
    let mut instances = Vec::new();
    let mut skipped = 0;
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(&line, format, k + 1) {
            Ok(i) => instances.push(i),
            Err(e) => {
                log::warn!("{}:{}: skipping malformed record: {e}", path.display(), k + 1);
                skipped += 1;
            }
        }
    }
    Ok(LoadedDataset { instances, skipped, label_space: format.label_space() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub subset: Subset,
    pub label_space: LabelSpace,
    pub count: usize,
    /// `None` when there is nothing to score.
    pub accuracy: Option<f64>,
    pub macro_f1: Option<f64>,
    pub execution_found: Option<f64>,
    /// Keyed by label name, for labels present in the gold set.
    pub per_label: BTreeMap<String, LabelMetrics>,
    pub undefined: bool,
    /// How numerical-subset membership was decided: "flag", "detected" or "mixed".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerical_source: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("{preds} predictions but {golds} gold labels")]
    LengthMismatch { preds: usize, golds: usize },
    #[error("{0}")]
    Io(String),
}

impl From<io::Error> for EvalError {
    fn from(e: io::Error) -> Self {
        EvalError::Io(e.to_string())
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Accuracy and macro-F1 over the labels present in `golds`, after mapping
/// both sides into `space`.
pub fn compute_metrics(preds: &[Verdict], golds: &[Label], space: LabelSpace) -> Result<MetricsReport, EvalError> {
    if preds.len() != golds.len() {
        return Err(EvalError::LengthMismatch { preds: preds.len(), golds: golds.len() });
    }
    let pairs: Vec<(Label, Label)> =
        preds.iter().zip(golds).map(|(p, g)| (space.project(Label::from(*p)), space.project(*g))).collect();
    let n = pairs.len();
    let mut report = MetricsReport {
        subset: Subset::Full,
        label_space: space,
        count: n,
        accuracy: None,
        macro_f1: None,
        execution_found: None,
        per_label: BTreeMap::new(),
        undefined: n == 0,
        numerical_source: None,
    };
    if n == 0 {
        return Ok(report);
    }
    let correct = pairs.iter().filter(|(p, g)| p == g).count();
    report.accuracy = Some(ratio(correct, n));
    for &label in space.labels() {
        let support = pairs.iter().filter(|(_, g)| *g == label).count();
        if support == 0 {
            continue;
        }
        let tp = pairs.iter().filter(|(p, g)| *p == label && *g == label).count();
        let predicted = pairs.iter().filter(|(p, _)| *p == label).count();
        let precision = ratio(tp, predicted);
        let recall = ratio(tp, support);
        let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
        report.per_label.insert(label.to_string(), LabelMetrics { precision, recall, f1, support });
    }
    let f1s: Vec<f64> = report.per_label.values().map(|m| m.f1).collect();
    report.macro_f1 = Some(f1s.iter().sum::<f64>() / f1s.len() as f64);
    Ok(report)
}

/// Instances belonging to `subset`, and how numerical membership was decided.
pub fn select_subset(instances: &[Instance], subset: Subset) -> (Vec<&Instance>, Option<String>) {
    match subset {
        Subset::Full | Subset::All => (instances.iter().collect(), None),
        Subset::R1 | Subset::R2 => {
            let tag = if subset == Subset::R1 { "r1" } else { "r2" };
            (instances.iter().filter(|i| i.tags.iter().any(|t| t.eq_ignore_ascii_case(tag))).collect(), None)
        }
        Subset::Numerical => {
            let (mut flagged, mut detected) = (false, false);
            let picked = instances
                .iter()
                .filter(|i| match i.numerical_flag() {
                    Some(f) => {
                        flagged = true;
                        f
                    }
                    None => {
                        detected = true;
                        has_numeral(&i.claim)
                    }
                })
                .collect();
            let source = match (flagged, detected) {
                (true, true) => "mixed",
                (true, false) => "flag",
                _ => "detected",
            };
            (picked, Some(source.to_string()))
        }
    }
}

/// Verifies one instance; unusable tables are dropped with a note.
pub fn verify_instance(verifier: &Verifier, instance: &Instance) -> VerdictReport {
    let (tables, notes) = instance.tables();
    let mut report = verifier.verify_claim(&instance.id, &instance.claim, &tables);
    report.notes.extend(notes);
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalOptions {
    pub subset: Subset,
    pub label_space: LabelSpace,
    /// Worker threads; also the number of instances written per batch.
    pub parallel: usize,
    /// Keep reports already in the output file and skip their ids.
    pub resume: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { subset: Subset::Full, label_space: LabelSpace::ThreeWay, parallel: 1, resume: false }
    }
}

#[derive(Debug, Clone)]
pub struct EvalOutcome {
    pub metrics: MetricsReport,
    /// Reports for the selected instances, in dataset order.
    pub reports: Vec<VerdictReport>,
    /// Instances whose report was taken from the existing output.
    pub resumed: usize,
}

/// Reports already present in an output file; a torn last line is ignored.
pub fn read_reports(path: &Path) -> io::Result<Vec<VerdictReport>> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(line) {
            Ok(r) => out.push(r),
            Err(e) => log::warn!("{}:{}: ignoring unreadable report: {e}", path.display(), k + 1),
        }
    }
    Ok(out)
}

fn open_output(path: &Path, resume: bool) -> io::Result<File> {
    if !resume {
        return File::create(path);
    }
    let needs_newline = fs::read(path).map(|b| b.last().is_some_and(|c| *c != b'\n')).unwrap_or(false);
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    if needs_newline {
        f.write_all(b"\n")?;
    }
    Ok(f)
}

/// Verifies the selected instances, appending each report to `output` as
/// its batch completes, then scores the completed reports.
pub fn run_eval(
    instances: &[Instance],
    verifier: &Verifier,
    options: &EvalOptions,
    output: Option<&Path>,
) -> Result<EvalOutcome, EvalError> {
    let (selected, numerical_source) = select_subset(instances, options.subset);
    let mut done: HashMap<String, VerdictReport> = HashMap::new();
    if let (true, Some(path)) = (options.resume, output) {
        if path.exists() {
            for r in read_reports(path)? {
                done.insert(r.claim_id.clone(), r);
            }
        }
    }
    let resumed = selected.iter().filter(|i| done.contains_key(&i.id)).count();
    let pending: Vec<&Instance> = selected.iter().copied().filter(|i| !done.contains_key(&i.id)).collect();
    let mut sink = output.map(|p| open_output(p, options.resume)).transpose()?;

    let workers = options.parallel.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| EvalError::Io(e.to_string()))?;
    for batch in pending.chunks(workers) {
        let reports: Vec<VerdictReport> = pool.install(|| batch.par_iter().map(|i| verify_instance(verifier, i)).collect());
        for r in reports {
            if let Some(f) = sink.as_mut() {
                serde_json::to_writer(&mut *f, &r).map_err(|e| EvalError::Io(e.to_string()))?;
                f.write_all(b"\n")?;
            }
            done.insert(r.claim_id.clone(), r);
        }
        if let Some(f) = sink.as_mut() {
            f.flush()?;
        }
    }

    let reports: Vec<VerdictReport> = selected.iter().filter_map(|i| done.get(&i.id).cloned()).collect();
    let mut preds = Vec::new();
    let mut golds = Vec::new();
    let mut found = Vec::new();
    for (inst, report) in selected.iter().zip(&reports) {
        if let Some(gold) = inst.label {
            preds.push(report.verdict);
            golds.push(gold);
            found.push(report.execution_found);
        }
    }
    let mut metrics = compute_metrics(&preds, &golds, options.label_space)?;
    metrics.subset = options.subset;
    metrics.numerical_source = numerical_source;
    if !found.is_empty() {
        metrics.execution_found = Some(ratio(found.iter().filter(|f| **f).count(), found.len()));
    }
    Ok(EvalOutcome { metrics, reports, resumed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::gateway::{Gateway, MockBackend};
    use crate::pipeline::PipelineConfig;

    #[test]
    fn hand_computed_example() {
        use Label as L;
        use Verdict as V;
        let m = compute_metrics(
            &[V::Supported, V::Refuted, V::Refuted, V::Refuted],
            &[L::Supported, L::Supported, L::Refuted, L::Refuted],
            LabelSpace::ThreeWay,
        )
        .unwrap();
        assert_eq!(m.accuracy, Some(0.75));
        assert!((m.macro_f1.unwrap() - (2.0 / 3.0 + 0.8) / 2.0).abs() < 1e-12);
        assert_eq!(m.per_label.len(), 2);
    }

    #[test]
    fn two_way_folds_nei() {
        let m = compute_metrics(&[Verdict::Nei, Verdict::Supported], &[Label::NotSupported, Label::Supported], LabelSpace::TwoWay)
            .unwrap();
        assert_eq!((m.accuracy, m.macro_f1), (Some(1.0), Some(1.0)));
        assert_eq!(
            compute_metrics(&[Verdict::Nei], &[], LabelSpace::TwoWay),
            Err(EvalError::LengthMismatch { preds: 1, golds: 0 })
        );
        let empty = compute_metrics(&[], &[], LabelSpace::ThreeWay).unwrap();
        assert!(empty.undefined && empty.accuracy.is_none());
    }

    #[test]
    fn labels_parse() {
        assert_eq!("NOT ENOUGH INFO".parse::<Label>(), Ok(Label::Nei));
        assert_eq!(serde_json::from_str::<Label>("1").unwrap(), Label::Supported);
        assert_eq!(serde_json::from_str::<Label>("0").unwrap(), Label::NotSupported);
        assert_eq!(serde_json::from_str::<Label>("\"REFUTES\"").unwrap(), Label::Refuted);
    }

    #[test]
    fn loads_both_formats() {
        let dir = tempfile::tempdir().unwrap();
        let fev = dir.path().join("f.jsonl");
        fs::write(
            &fev,
            "{\"id\": 7, \"claim\": \"A has 3 b.\", \"label\": \"SUPPORTS\", \"tables\": [{\"rows\": [[\"x\"], [\"3\"]]}]}\n\
             {\"id\": 8, \"claim\": \"no tables\", \"label\": \"SUPPORTS\"}\n\
             not json\n",
        )
        .unwrap();
        let d = load_dataset(&fev, DatasetFormat::FeverousJsonl).unwrap();
        assert_eq!((d.instances.len(), d.skipped, d.label_space), (1, 2, LabelSpace::ThreeWay));
        assert_eq!(d.instances[0].id, "7");

        let tf = dir.path().join("t.jsonl");
        fs::write(&tf, "{\"statement\": \"x is 1\", \"label\": 0, \"table\": [[\"a\", \"b\"], [\"x\", \"1\"]], \"caption\": \"c\"}\n").unwrap();
        let d = load_dataset(&tf, DatasetFormat::TabfactJsonl).unwrap();
        assert_eq!(d.label_space, LabelSpace::TwoWay);
        assert_eq!(d.instances[0].label, Some(Label::NotSupported));
        assert_eq!(d.instances[0].tables[0].header_row_count, 1);
        assert!(load_dataset(&dir.path().join("missing"), DatasetFormat::TabfactJsonl).is_err());
    }

    #[test]
    fn numerical_subset_source() {
        let mut a = Instance::new("a", "It has 3 rooms.", None, Vec::new());
        let b = Instance::new("b", "It has rooms.", None, Vec::new());
        let both = [a.clone(), b.clone()];
        let (picked, source) = select_subset(&both, Subset::Numerical);
        assert_eq!((picked.len(), source.as_deref()), (1, Some("detected")));
        a.numerical = Some(false);
        let both = [a, b];
        let (picked, source) = select_subset(&both, Subset::Numerical);
        assert_eq!((picked.len(), source.as_deref()), (0, Some("mixed")));
    }

    fn golden_verifier() -> Verifier {
        let template = Gateway::with_backend(Arc::new(MockBackend::default()));
        Verifier::new(Arc::new(crate::fixtures::golden_gateway(&template).unwrap()), PipelineConfig::default())
    }

    fn golden_instances() -> Vec<Instance> {
        crate::fixtures::golden_cases()
            .into_iter()
            .map(|c| Instance::new(c.id, c.claim, Some(c.expected.into()), c.tables.iter().map(Table::to_record).collect()))
            .collect()
    }

    #[test]
    fn resume_gives_identical_metrics() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("out.jsonl");
        let v = golden_verifier();
        let instances = golden_instances();
        let full = run_eval(&instances, &v, &EvalOptions { parallel: 2, ..EvalOptions::default() }, Some(&out)).unwrap();
        assert_eq!(full.metrics.accuracy, Some(1.0));
        assert_eq!(full.metrics.execution_found, Some(1.0));

        let first = fs::read_to_string(&out).unwrap();
        let kept: Vec<&str> = first.lines().take(1).collect();
        fs::write(&out, format!("{}\n{{\"claim_id\": \"torn", kept[0])).unwrap();
        let again = run_eval(&instances, &v, &EvalOptions { resume: true, ..EvalOptions::default() }, Some(&out)).unwrap();
        assert_eq!(again.resumed, 1);
        assert_eq!(again.metrics, full.metrics);
        assert_eq!(read_reports(&out).unwrap().len(), 3);
    }

    #[test]
    fn empty_dataset_is_undefined() {
        let out = run_eval(&[], &golden_verifier(), &EvalOptions::default(), None).unwrap();
        assert!(out.metrics.undefined && out.reports.is_empty());
    }
}
