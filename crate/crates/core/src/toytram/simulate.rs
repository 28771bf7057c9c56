use std::io::{Read, Write};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::dist::{logit, TargetDistribution};
use crate::error::{Error, Result};
use crate::panel::fmt_f64;
use crate::rng::seeded;

use super::model::{inverse_cumulative_softplus, predict, ModelKind, ToyModelParams, ToyModelSpec};

/// Tabular covariates with exact ordinal outcomes (0-based classes).
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<usize>,
    pub classes: usize,
}

impl Dataset {
    pub fn new(x: Vec<Vec<f64>>, y: Vec<usize>, classes: usize) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Shape(format!(
                "{} covariate rows for {} outcomes",
                x.len(),
                y.len()
            )));
        }
        if let Some(row) = x.first() {
            if x.iter().any(|r| r.len() != row.len()) {
                return Err(Error::Shape("covariate rows differ in length".into()));
            }
        }
        if let Some(&c) = y.iter().find(|&&c| c >= classes) {
            return Err(Error::Domain(format!(
                "outcome {c} out of range for K = {classes}"
            )));
        }
        if x.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Input("non-finite covariate".into()));
        }
        Ok(Dataset { x, y, classes })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn predictors(&self) -> usize {
        self.x.first().map_or(0, Vec::len)
    }

    pub fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            x: idx.iter().map(|&i| self.x[i].clone()).collect(),
            y: idx.iter().map(|&i| self.y[i]).collect(),
            classes: self.classes,
        }
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.classes];
        for &y in &self.y {
            c[y] += 1;
        }
        c
    }

    /// Random disjoint train / validation / test parts of the given sizes.
    pub fn split(&self, sizes: [usize; 3], seed: u64) -> Result<[Dataset; 3]> {
        let total: usize = sizes.iter().sum();
        if total > self.len() {
            return Err(Error::Shape(format!(
                "split needs {total} instances, dataset has {}",
                self.len()
            )));
        }
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.shuffle(&mut seeded(seed));
        let (a, rest) = idx.split_at(sizes[0]);
        let (b, rest) = rest.split_at(sizes[1]);
        let c = &rest[..sizes[2]];
        Ok([self.subset(a), self.subset(b), self.subset(c)])
    }
}

/// Draws standard-normal covariates and outcomes from the given model.
pub fn simulate_ordinal(
    n: usize,
    spec: &ToyModelSpec,
    truth: &ToyModelParams,
    seed: u64,
) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::Domain("cannot simulate zero instances".into()));
    }
    truth.check(spec)?;
    let mut rng = seeded(seed);
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let row: Vec<f64> = (0..spec.predictors)
            .map(|_| rng.sample(StandardNormal))
            .collect();
        let cdf = predict(spec, truth, &row)?;
        let u: f64 = rng.random();
        let class = cdf
            .values()
            .iter()
            .position(|&f| u < f)
            .unwrap_or(spec.classes - 1);
        x.push(row);
        y.push(class);
    }
    Dataset::new(x, y, spec.classes)
}

/// Age-group counts of UTKFace used for the marginal of the `utk-sim`
/// preset.
pub const UTK_CLASS_COUNTS: [usize; 7] = [1894, 1519, 1180, 8068, 5433, 3216, 2395];

/// The `utk-sim` preset: SI-LS logistic model with `K = 7`, `P = 10`, effects
/// `(0, ln 1.2, -ln 1.2, 0, ln 1.5, -ln 1.5, 0, 0, 0, 0)` and intercepts
/// matching the UTKFace age-group marginal.
pub fn utk_sim_preset() -> (ToyModelSpec, ToyModelParams) {
    let spec = ToyModelSpec {
        kind: ModelKind::SimpleInterceptLinearShift,
        classes: 7,
        predictors: 10,
        target: TargetDistribution::Logistic,
    };
    let total: usize = UTK_CLASS_COUNTS.iter().sum();
    let mut acc = 0;
    let theta: Vec<f64> = UTK_CLASS_COUNTS[..6]
        .iter()
        .map(|&c| {
            acc += c;
            logit(acc as f64 / total as f64)
        })
        .collect();
    let (a, b) = (1.2f64.ln(), 1.5f64.ln());
    let beta = vec![0.0, a, -a, 0.0, b, -b, 0.0, 0.0, 0.0, 0.0];
    let gamma = inverse_cumulative_softplus(&theta).expect("cumulative frequencies increase");
    (spec, ToyModelParams { gamma, beta })
}

pub fn preset(name: &str) -> Result<(ToyModelSpec, ToyModelParams)> {
    match name {
        "utk-sim" => Ok(utk_sim_preset()),
        other => Err(Error::Parse(format!(
            "unknown preset '{other}' (expected utk-sim)"
        ))),
    }
}

/// Writes `x_1, ..., x_P, y` with 1-based classes.
pub fn save_dataset_csv<W: Write>(data: &Dataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let p = data.predictors();
    let mut header: Vec<String> = (1..=p).map(|j| format!("x_{j}")).collect();
    header.push("y".into());
    w.write_record(&header)?;
    for (row, &y) in data.x.iter().zip(&data.y) {
        let mut rec: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        rec.push((y + 1).to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the format written by [`save_dataset_csv`].
pub fn load_dataset_csv<R: Read>(reader: R, classes: usize) -> Result<Dataset> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers()?.clone();
    let yi = header
        .iter()
        .position(|h| h == "y")
        .ok_or_else(|| Error::Parse("dataset CSV has no 'y' column".into()))?;
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("row {}: cannot parse '{s}'", line + 1)))
        };
        let mut row = Vec::with_capacity(rec.len() - 1);
        for (j, field) in rec.iter().enumerate() {
            if j != yi {
                row.push(parse(field)?);
            }
        }
        let class: usize = rec[yi]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("row {}: bad class '{}'", line + 1, &rec[yi])))?;
        if class == 0 {
            return Err(Error::Parse(format!(
                "row {}: classes are 1-based",
                line + 1
            )));
        }
        x.push(row);
        y.push(class - 1);
    }
    Dataset::new(x, y, classes)
}
