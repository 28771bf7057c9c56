//! Member predictions and observed outcomes.
//!
//! A [`MemberPanel`] holds one predicted CDF per (member, instance) pair over a
//! shared [`OrderedSampleSpace`]. Panels can be read from a JSON document or
//! from a pair of long-form CSV files; see [`load_panel_json`] and
//! [`load_panel_csv`].

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Monotonicity slack for CDF entries.
pub const MONOTONE_TOL: f64 = 1e-12;
/// Allowed deviation of the last CDF entry from 1 before renormalization.
pub const LAST_ENTRY_TOL: f64 = 1e-6;

/// Class labels `y_1 < ... < y_K`, `K >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedSampleSpace {
    labels: Vec<String>,
}

impl OrderedSampleSpace {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::Validation(format!(
                "sample space needs at least 2 classes, got {}",
                labels.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Validation(format!("duplicate class label '{l}'")));
            }
        }
        Ok(Self { labels })
    }

    /// Labels `"0"`, `"1"`, ..., `"K-1"`.
    pub fn indexed(k: usize) -> Result<Self> {
        Self::new((0..k).map(|i| i.to_string()).collect())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Predicted CDF `F(y_1), ..., F(y_K)` over ordered classes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiscreteCdf(Vec<f64>);

impl DiscreteCdf {
    /// Validates the invariants and renormalizes the last entry to exactly 1
    /// when it is within [`LAST_ENTRY_TOL`] of 1.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let cdf = Self::from_raw(values).renormalized();
        if let Some(v) = cdf_violations(&cdf.0).into_iter().next() {
            return Err(Error::Validation(v.to_string()));
        }
        Ok(cdf)
    }

    /// Wraps values without any checks. Use [`validate_panel`] or
    /// [`cdf_violations`] to inspect such values later.
    pub fn from_raw(values: Vec<f64>) -> Self {
        DiscreteCdf(values)
    }

    /// Builds a CDF from class probabilities by cumulative summation.
    pub fn from_pdf(pdf: &[f64]) -> Result<Self> {
        let mut acc = 0.0;
        let mut values: Vec<f64> = pdf
            .iter()
            .map(|&f| {
                acc += f;
                acc
            })
            .collect();
        if let Some(last) = values.last_mut() {
            if (*last - 1.0).abs() <= LAST_ENTRY_TOL {
                *last = 1.0;
            }
        }
        // cumulative sums of non-negative masses can overshoot 1 by rounding
        for v in values.iter_mut() {
            *v = v.min(1.0);
        }
        Self::new(values)
    }

    fn renormalized(mut self) -> Self {
        if let Some(&last) = self.0.last() {
            if last != 1.0 && last.is_finite() && (last - 1.0).abs() <= LAST_ENTRY_TOL {
                for v in self.0.iter_mut() {
                    *v /= last;
                }
                *self.0.last_mut().unwrap() = 1.0;
            }
        }
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    /// Number of classes `K`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `F(y_k)`, 0-based.
    pub fn at(&self, k: usize) -> f64 {
        self.0[k]
    }

    /// `F` evaluated at an optional class; `None` is `-inf` with `F = 0`.
    pub fn at_or_zero(&self, k: Option<usize>) -> f64 {
        k.map_or(0.0, |k| self.0[k])
    }

    /// Class probabilities, see [`pdf_from_cdf`].
    pub fn pdf(&self) -> Vec<f64> {
        pdf_from_cdf(self)
    }
}

/// Class probabilities `f(y_k) = F(y_k) - F(y_{k-1})`.
///
/// Negative rounding residue down to `-1e-12` is clipped to zero and the
/// result renormalized to sum to one.
pub fn pdf_from_cdf(cdf: &DiscreteCdf) -> Vec<f64> {
    let mut prev = 0.0;
    let mut clipped = false;
    let mut pdf: Vec<f64> = cdf
        .values()
        .iter()
        .map(|&v| {
            let mut d = v - prev;
            prev = v;
            if d < 0.0 {
                clipped = true;
                d = 0.0;
            }
            d
        })
        .collect();
    if clipped {
        let total: f64 = pdf.iter().sum();
        if total > 0.0 {
            for d in pdf.iter_mut() {
                *d /= total;
            }
        }
    }
    pdf
}

/// One observed outcome. Class indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Observation {
    Exact(usize),
    /// Censored outcome in `(y_lower, y_upper]`; `lower = None` means `-inf`.
    Interval {
        lower: Option<usize>,
        upper: usize,
    },
}

impl Observation {
    /// Bounds `(lower, upper]` of the observed event in class indices.
    pub fn bounds(&self) -> (Option<usize>, usize) {
        match *self {
            Observation::Exact(k) => (k.checked_sub(1), k),
            Observation::Interval { lower, upper } => (lower, upper),
        }
    }

    pub fn exact(&self) -> Option<usize> {
        match *self {
            Observation::Exact(k) => Some(k),
            Observation::Interval { .. } => None,
        }
    }
}

/// Predictions of `M` members for `n` instances plus the observed outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct MemberPanel {
    pub space: OrderedSampleSpace,
    pub member_ids: Vec<String>,
    /// `cdfs[m][i]` is the prediction of member `m` for instance `i`.
    pub cdfs: Vec<Vec<DiscreteCdf>>,
    pub outcomes: Vec<Observation>,
}

impl MemberPanel {
    /// Builds a panel and rejects it unless [`validate_panel`] is clean.
    pub fn new(
        space: OrderedSampleSpace,
        member_ids: Vec<String>,
        cdfs: Vec<Vec<DiscreteCdf>>,
        outcomes: Vec<Observation>,
    ) -> Result<Self> {
        let panel = Self {
            space,
            member_ids,
            cdfs,
            outcomes,
        };
        let report = validate_panel(&panel);
        if report.is_empty() {
            Ok(panel)
        } else {
            Err(Error::Validation(report.to_string()))
        }
    }

    pub fn n_members(&self) -> usize {
        self.cdfs.len()
    }

    pub fn n_instances(&self) -> usize {
        self.outcomes.len()
    }

    pub fn n_classes(&self) -> usize {
        self.space.len()
    }

    /// Predictions of all members for instance `i`.
    pub fn instance(&self, i: usize) -> Vec<&DiscreteCdf> {
        self.cdfs.iter().map(|row| &row[i]).collect()
    }

    /// Panel restricted to (possibly repeated) instances.
    pub fn select_instances(&self, idx: &[usize]) -> MemberPanel {
        MemberPanel {
            space: self.space.clone(),
            member_ids: self.member_ids.clone(),
            cdfs: self
                .cdfs
                .iter()
                .map(|row| idx.iter().map(|&i| row[i].clone()).collect())
                .collect(),
            outcomes: idx.iter().map(|&i| self.outcomes[i]).collect(),
        }
    }

    /// Single-member panel sharing this panel's sample space and outcomes.
    pub fn with_single_member(&self, id: impl Into<String>, cdfs: Vec<DiscreteCdf>) -> MemberPanel {
        MemberPanel {
            space: self.space.clone(),
            member_ids: vec![id.into()],
            cdfs: vec![cdfs],
            outcomes: self.outcomes.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    Shape,
    NonMonotone,
    OutOfRange,
    LastNotOne,
    NonFinite,
    Outcome,
    Empty,
}

/// One invariant violation with its coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub member: Option<usize>,
    pub instance: Option<usize>,
    pub class: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut coords = Vec::new();
        if let Some(m) = self.member {
            coords.push(format!("member {m}"));
        }
        if let Some(i) = self.instance {
            coords.push(format!("instance {i}"));
        }
        if let Some(k) = self.class {
            coords.push(format!("class {k}"));
        }
        if coords.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{} ({})", self.message, coords.join(", "))
        }
    }
}

/// All violations found in a panel; empty iff every invariant holds.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Invariant violations of a single CDF vector (no coordinates filled in
/// except the class).
pub fn cdf_violations(values: &[f64]) -> Vec<Violation> {
    let mut out = Vec::new();
    let v = |kind, class: Option<usize>, message: String| Violation {
        kind,
        member: None,
        instance: None,
        class,
        message,
    };
    if values.len() < 2 {
        out.push(v(
            ViolationKind::Shape,
            None,
            format!("CDF needs at least 2 classes, got {}", values.len()),
        ));
        return out;
    }
    for (k, &x) in values.iter().enumerate() {
        if !x.is_finite() {
            out.push(v(
                ViolationKind::NonFinite,
                Some(k),
                format!("non-finite CDF value {x}"),
            ));
        } else if !(0.0..=1.0).contains(&x) {
            out.push(v(
                ViolationKind::OutOfRange,
                Some(k),
                format!("CDF value {x} outside [0, 1]"),
            ));
        }
    }
    for k in 0..values.len() - 1 {
        if values[k] > values[k + 1] + MONOTONE_TOL {
            out.push(v(
                ViolationKind::NonMonotone,
                Some(k + 1),
                format!("non-monotone CDF: {} > {}", values[k], values[k + 1]),
            ));
        }
    }
    let last = values[values.len() - 1];
    if (last - 1.0).abs() > LAST_ENTRY_TOL {
        out.push(v(
            ViolationKind::LastNotOne,
            Some(values.len() - 1),
            format!("last CDF value {last} is not 1"),
        ));
    }
    out
}

/// Checks every invariant of a panel and lists all violations with coordinates.
pub fn validate_panel(panel: &MemberPanel) -> ValidationReport {
    let mut violations = Vec::new();
    let k = panel.space.len();
    let n = panel.outcomes.len();
    let top = |kind, message: String| Violation {
        kind,
        member: None,
        instance: None,
        class: None,
        message,
    };
    if k < 2 {
        violations.push(top(
            ViolationKind::Shape,
            format!("sample space has {k} classes"),
        ));
    }
    if panel.cdfs.is_empty() {
        violations.push(top(ViolationKind::Empty, "panel has no members".into()));
    }
    if n == 0 {
        violations.push(top(ViolationKind::Empty, "panel has no instances".into()));
    }
    if panel.member_ids.len() != panel.cdfs.len() {
        violations.push(top(
            ViolationKind::Shape,
            format!(
                "{} member ids for {} members",
                panel.member_ids.len(),
                panel.cdfs.len()
            ),
        ));
    }
    for (m, row) in panel.cdfs.iter().enumerate() {
        if row.len() != n {
            violations.push(Violation {
                kind: ViolationKind::Shape,
                member: Some(m),
                instance: None,
                class: None,
                message: format!("{} predictions for {} outcomes", row.len(), n),
            });
        }
        for (i, cdf) in row.iter().enumerate() {
            if cdf.len() != k {
                violations.push(Violation {
                    kind: ViolationKind::Shape,
                    member: Some(m),
                    instance: Some(i),
                    class: None,
                    message: format!("CDF has {} entries, expected {k}", cdf.len()),
                });
                continue;
            }
            for mut v in cdf_violations(cdf.values()) {
                v.member = Some(m);
                v.instance = Some(i);
                violations.push(v);
            }
        }
    }
    for (i, obs) in panel.outcomes.iter().enumerate() {
        let bad = match *obs {
            Observation::Exact(c) => (c >= k).then(|| format!("outcome class {c} out of range")),
            Observation::Interval { lower, upper } => {
                if upper >= k {
                    Some(format!("interval upper class {upper} out of range"))
                } else if lower.is_some_and(|l| l >= upper) {
                    Some(format!(
                        "interval lower class {} not below upper class {upper}",
                        lower.unwrap()
                    ))
                } else {
                    None
                }
            }
        };
        if let Some(message) = bad {
            violations.push(Violation {
                kind: ViolationKind::Outcome,
                member: None,
                instance: Some(i),
                class: None,
                message,
            });
        }
    }
    ValidationReport { violations }
}

/// A strictly increasing transformation function sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousCurve {
    grid: Vec<f64>,
    h: Vec<f64>,
}

impl ContinuousCurve {
    pub fn new(grid: Vec<f64>, h: Vec<f64>) -> Result<Self> {
        if grid.len() != h.len() {
            return Err(Error::Shape(format!(
                "grid has {} points but h has {}",
                grid.len(),
                h.len()
            )));
        }
        if grid.len() < 2 {
            return Err(Error::Validation(
                "curve needs at least 2 grid points".into(),
            ));
        }
        if grid.iter().chain(h.iter()).any(|x| !x.is_finite()) {
            return Err(Error::Validation("curve contains non-finite values".into()));
        }
        for g in 0..grid.len() - 1 {
            if grid[g + 1] <= grid[g] {
                return Err(Error::Validation(format!(
                    "grid not strictly increasing at {}",
                    g + 1
                )));
            }
            if h[g + 1] <= h[g] {
                return Err(Error::Validation(format!(
                    "transformation not strictly increasing at grid point {}",
                    g + 1
                )));
            }
        }
        Ok(Self { grid, h })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// `h'` by central differences, one-sided at the two boundary points.
    pub fn derivative(&self) -> Vec<f64> {
        let (y, h) = (&self.grid, &self.h);
        let g = y.len();
        (0..g)
            .map(|i| {
                let (a, b) = if i == 0 {
                    (0, 1)
                } else if i == g - 1 {
                    (g - 2, g - 1)
                } else {
                    (i - 1, i + 1)
                };
                (h[b] - h[a]) / (y[b] - y[a])
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
struct JsonPanel {
    classes: Vec<serde_json::Value>,
    members: Vec<JsonMember>,
    outcomes: Vec<JsonOutcome>,
}

#[derive(Serialize, Deserialize)]
struct JsonMember {
    id: String,
    cdf: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonOutcome {
    Exact(usize),
    Interval { lower: Option<usize>, upper: usize },
}

fn label_of(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Reads a panel from the JSON layout
/// `{"classes": [...], "members": [{"id", "cdf": [[K] x n]}], "outcomes": [k | {"lower", "upper"}]}`.
pub fn load_panel_json<R: Read>(reader: R) -> Result<MemberPanel> {
    let raw: JsonPanel = serde_json::from_reader(reader)?;
    let space = OrderedSampleSpace::new(raw.classes.iter().map(label_of).collect())?;
    let outcomes = raw
        .outcomes
        .into_iter()
        .map(|o| match o {
            JsonOutcome::Exact(k) => Observation::Exact(k),
            JsonOutcome::Interval { lower, upper } => Observation::Interval { lower, upper },
        })
        .collect();
    let mut member_ids = Vec::with_capacity(raw.members.len());
    let mut cdfs = Vec::with_capacity(raw.members.len());
    for m in raw.members {
        member_ids.push(m.id);
        cdfs.push(
            m.cdf
                .into_iter()
                .map(|v| DiscreteCdf::from_raw(v).renormalized())
                .collect(),
        );
    }
    MemberPanel::new(space, member_ids, cdfs, outcomes)
}

/// Writes a panel in the layout read by [`load_panel_json`].
pub fn save_panel_json<W: Write>(panel: &MemberPanel, writer: W) -> Result<()> {
    let raw = JsonPanel {
        classes: panel
            .space
            .labels()
            .iter()
            .map(|l| serde_json::Value::String(l.clone()))
            .collect(),
        members: panel
            .member_ids
            .iter()
            .zip(&panel.cdfs)
            .map(|(id, row)| JsonMember {
                id: id.clone(),
                cdf: row.iter().map(|c| c.values().to_vec()).collect(),
            })
            .collect(),
        outcomes: panel
            .outcomes
            .iter()
            .map(|o| match *o {
                Observation::Exact(k) => JsonOutcome::Exact(k),
                Observation::Interval { lower, upper } => JsonOutcome::Interval { lower, upper },
            })
            .collect(),
    };
    serde_json::to_writer(writer, &raw)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// CSV

#[derive(Deserialize)]
struct CdfRow {
    member_id: String,
    instance_id: String,
    class_index: usize,
    cdf_value: f64,
}

#[derive(Deserialize)]
struct OutcomeRow {
    instance_id: String,
    outcome_index: Option<usize>,
    lower: Option<usize>,
    upper: Option<usize>,
}

/// Reads a panel from long-form CSV.
///
/// `cdf_rows` has header `member_id,instance_id,class_index,cdf_value`;
/// `outcomes` has `instance_id,outcome_index` or `instance_id,lower,upper`
/// (empty `lower` for `-inf`). Members and instances keep the order of their
/// first appearance; classes are labelled by index.
pub fn load_panel_csv<R1: Read, R2: Read>(cdf_rows: R1, outcomes: R2) -> Result<MemberPanel> {
    let mut member_order: Vec<String> = Vec::new();
    let mut member_pos: HashMap<String, usize> = HashMap::new();
    let mut inst_order: Vec<String> = Vec::new();
    let mut inst_pos: HashMap<String, usize> = HashMap::new();
    let mut cells: Vec<HashMap<usize, Vec<(usize, f64)>>> = Vec::new();
    let mut k_max = 0usize;

    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(cdf_rows);
    for row in rdr.deserialize() {
        let row: CdfRow = row?;
        let m = *member_pos.entry(row.member_id.clone()).or_insert_with(|| {
            member_order.push(row.member_id.clone());
            cells.push(HashMap::new());
            member_order.len() - 1
        });
        let i = *inst_pos.entry(row.instance_id.clone()).or_insert_with(|| {
            inst_order.push(row.instance_id.clone());
            inst_order.len() - 1
        });
        k_max = k_max.max(row.class_index + 1);
        cells[m]
            .entry(i)
            .or_default()
            .push((row.class_index, row.cdf_value));
    }

    let mut observed: Vec<Option<Observation>> = vec![None; inst_order.len()];
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(outcomes);
    for row in rdr.deserialize() {
        let row: OutcomeRow = row?;
        let i = *inst_pos.get(&row.instance_id).ok_or_else(|| {
            Error::Validation(format!(
                "outcome for unknown instance '{}'",
                row.instance_id
            ))
        })?;
        let obs = match (row.outcome_index, row.upper) {
            (Some(k), _) => Observation::Exact(k),
            (None, Some(upper)) => Observation::Interval {
                lower: row.lower,
                upper,
            },
            (None, None) => {
                return Err(Error::Validation(format!(
                    "instance '{}' has no outcome",
                    row.instance_id
                )))
            }
        };
        observed[i] = Some(obs);
    }
    let outcomes = observed
        .into_iter()
        .enumerate()
        .map(|(i, o)| {
            o.ok_or_else(|| {
                Error::Validation(format!("missing outcome for instance '{}'", inst_order[i]))
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut cdfs = Vec::with_capacity(member_order.len());
    for (m, by_inst) in cells.into_iter().enumerate() {
        let mut row = Vec::with_capacity(inst_order.len());
        for i in 0..inst_order.len() {
            let entries = by_inst.get(&i).ok_or_else(|| {
                Error::Validation(format!(
                    "member '{}' has no prediction for instance '{}'",
                    member_order[m], inst_order[i]
                ))
            })?;
            let mut values = vec![f64::NAN; k_max];
            for &(k, v) in entries {
                values[k] = v;
            }
            row.push(DiscreteCdf::from_raw(values).renormalized());
        }
        cdfs.push(row);
    }
    MemberPanel::new(
        OrderedSampleSpace::indexed(k_max)?,
        member_order,
        cdfs,
        outcomes,
    )
}

/// Writes the two long-form CSV tables read by [`load_panel_csv`]. Values are
/// printed with 17 significant digits.
pub fn save_panel_csv<W1: Write, W2: Write>(
    panel: &MemberPanel,
    cdf_out: W1,
    outcome_out: W2,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(cdf_out);
    w.write_record(["member_id", "instance_id", "class_index", "cdf_value"])?;
    for (id, row) in panel.member_ids.iter().zip(&panel.cdfs) {
        for (i, cdf) in row.iter().enumerate() {
            for (k, &v) in cdf.values().iter().enumerate() {
                w.write_record([id.clone(), i.to_string(), k.to_string(), fmt_f64(v)])?;
            }
        }
    }
    w.flush()?;
    let censored = panel
        .outcomes
        .iter()
        .any(|o| matches!(o, Observation::Interval { .. }));
    let mut w = csv::Writer::from_writer(outcome_out);
    if censored {
        w.write_record(["instance_id", "outcome_index", "lower", "upper"])?;
    } else {
        w.write_record(["instance_id", "outcome_index"])?;
    }
    for (i, o) in panel.outcomes.iter().enumerate() {
        match (*o, censored) {
            (Observation::Exact(k), false) => w.write_record([i.to_string(), k.to_string()])?,
            (Observation::Exact(k), true) => {
                w.write_record([i.to_string(), k.to_string(), String::new(), String::new()])?
            }
            (Observation::Interval { lower, upper }, _) => w.write_record([
                i.to_string(),
                String::new(),
                lower.map(|l| l.to_string()).unwrap_or_default(),
                upper.to_string(),
            ])?,
        }
    }
    w.flush()?;
    Ok(())
}

/// Fixed 17-significant-digit formatting used for all textual output.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

// ---------------------------------------------------------------------------
// Continuous curves

#[derive(Serialize, Deserialize)]
struct JsonCurves {
    grid: Vec<f64>,
    members: Vec<JsonCurve>,
}

#[derive(Serialize, Deserialize)]
struct JsonCurve {
    id: String,
    h: Vec<f64>,
}

/// Member transformation curves on a shared grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSet {
    pub ids: Vec<String>,
    pub curves: Vec<ContinuousCurve>,
}

/// Reads `{"grid": [...], "members": [{"id", "h": [...]}]}`.
pub fn load_curves_json<R: Read>(reader: R) -> Result<CurveSet> {
    let raw: JsonCurves = serde_json::from_reader(reader)?;
    let mut ids = Vec::new();
    let mut curves = Vec::new();
    for (m, c) in raw.members.into_iter().enumerate() {
        let curve = ContinuousCurve::new(raw.grid.clone(), c.h).map_err(|e| Error::Member {
            index: m,
            source: Box::new(e),
        })?;
        ids.push(c.id);
        curves.push(curve);
    }
    Ok(CurveSet { ids, curves })
}

pub fn save_curves_json<W: Write>(set: &CurveSet, writer: W) -> Result<()> {
    let raw = JsonCurves {
        grid: set
            .curves
            .first()
            .map(|c| c.grid.clone())
            .unwrap_or_default(),
        members: set
            .ids
            .iter()
            .zip(&set.curves)
            .map(|(id, c)| JsonCurve {
                id: id.clone(),
                h: c.h.clone(),
            })
            .collect(),
    };
    serde_json::to_writer(writer, &raw)?;
    Ok(())
}
