use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};
use trafo_ensemble::evalmetrics::{
    accuracy, auc, bootstrap_ci, calibration_report, classify, qwk, BootstrapConfig,
    BootstrapInterval,
};
use trafo_ensemble::minimax::{verify_minimax_binary, verify_minimax_rps};
use trafo_ensemble::panel::{
    fmt_f64, load_panel_csv, load_panel_json, save_panel_csv, save_panel_json,
};
use trafo_ensemble::pooling::{ensemble_density_curves, pool_panel, LocationScale};
use trafo_ensemble::scoring::{member_mean_scores, score};
use trafo_ensemble::toytram::{
    load_dataset_csv, make_members, preset, save_dataset_csv, simulate_ordinal,
    structure_check_pairs, Loss, ModelKind, ToyModelSpec, TrainConfig,
};
use trafo_ensemble::weights::{tune_weights, TuneConfig};
use trafo_ensemble::{
    DiscreteCdf, Error, MemberPanel, Observation, PoolKind, Result, ScoreKind, SimplexWeights,
    TargetDistribution,
};

use crate::output::{open, write_atomic, write_json, RunManifest};
use crate::{Cli, Command, Format, PanelInput};

const CALIBRATION_CUTS: [f64; 4] = [0.5, 0.9, 0.99, 0.999];

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Validate { panel } => validate(cli, panel),
        Command::Pool {
            panel,
            pool,
            weights,
        } => pool_cmd(cli, panel, pool, weights),
        Command::Tune {
            panel,
            score,
            pool,
            restarts,
            max_iterations,
        } => tune(cli, panel, score, pool, *restarts, *max_iterations),
        Command::Score {
            panel,
            score,
            pool,
            weights,
        } => score_cmd(cli, panel, score, pool.as_deref(), weights),
        Command::Evaluate {
            panel,
            pools,
            scores,
            weights,
            resamples,
            calibration_out,
        } => evaluate(
            cli,
            panel,
            pools,
            scores,
            weights,
            *resamples,
            calibration_out.as_deref(),
        ),
        Command::MinimaxCheck {
            score,
            members,
            weights,
            resolution,
        } => minimax_check(cli, score, members, weights, *resolution),
        Command::Simulate { preset, n } => simulate(cli, preset, *n),
        Command::TrainToy {
            data,
            spec,
            loss,
            members,
            target,
            split,
            epochs,
            learning_rate,
        } => train_toy(
            cli,
            data,
            spec,
            loss,
            *members,
            target,
            split.as_deref(),
            *epochs,
            *learning_rate,
        ),
        Command::Figure2 {
            members,
            grid,
            dist,
            weights,
        } => figure2(cli, members, grid, dist, weights),
        Command::StructureCheck {
            panel,
            pool,
            weights,
            dist,
        } => structure_check(cli, panel, pool, weights, dist),
    }
}

// ---------------------------------------------------------------------------
// helpers

fn parse_list<T: FromStr<Err = Error>>(s: &str, what: &str) -> Result<Vec<T>> {
    let items: Vec<T> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(T::from_str)
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(Error::Parse(format!("empty {what} list")));
    }
    Ok(items)
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("cannot parse {what} '{s}'")))
}

fn out_paths(cli: &Cli, n: usize) -> Result<Vec<PathBuf>> {
    let out = cli
        .out
        .as_deref()
        .ok_or_else(|| Error::Parse("--out is required".into()))?;
    let paths: Vec<PathBuf> = out.split(',').map(PathBuf::from).collect();
    if paths.len() != n {
        return Err(Error::Parse(format!(
            "--out needs {n} comma-separated paths, got {}",
            paths.len()
        )));
    }
    Ok(paths)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(suffix);
    path.with_file_name(name)
}

/// Writes to `--out` (with a manifest) or to stdout.
fn emit(cli: &Cli, manifest: &RunManifest, bytes: &[u8]) -> Result<()> {
    match cli.out.as_deref() {
        Some(out) => {
            let path = Path::new(out);
            write_atomic(path, bytes)?;
            manifest.write_beside(path)
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text.into_bytes())
}

fn load_panel(input: &PanelInput, manifest: &mut RunManifest) -> Result<MemberPanel> {
    manifest.add_input(&input.input)?;
    let is_csv = input
        .input
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        let outcomes = input
            .outcomes
            .as_deref()
            .ok_or_else(|| Error::Parse("CSV panels need an --outcomes table".into()))?;
        manifest.add_input(outcomes)?;
        load_panel_csv(open(&input.input)?, open(outcomes)?)
    } else {
        load_panel_json(open(&input.input)?)
    }
}

fn load_weights(spec: &str, m: usize, manifest: &mut RunManifest) -> Result<SimplexWeights> {
    if spec == "equal" {
        return SimplexWeights::equal(m);
    }
    let path = Path::new(spec);
    manifest.add_input(path)?;
    let value: Value = serde_json::from_reader(open(path)?)?;
    let raw = match &value {
        Value::Array(_) => value.clone(),
        Value::Object(o) => o
            .get("weights")
            .cloned()
            .ok_or_else(|| Error::Parse("weights file has no 'weights' field".into()))?,
        _ => {
            return Err(Error::Parse(
                "weights must be an array or {\"weights\": [...]}".into(),
            ))
        }
    };
    let w: Vec<f64> = serde_json::from_value(raw)?;
    if w.len() != m {
        return Err(Error::Shape(format!("{} weights for {m} members", w.len())));
    }
    SimplexWeights::new(w)
}

fn announce_seed(seed: u64) {
    eprintln!("seed: {seed}");
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

// ---------------------------------------------------------------------------
// commands

fn validate(cli: &Cli, input: &PanelInput) -> Result<()> {
    let mut manifest = RunManifest::new("validate", cli.seed);
    let panel = load_panel(input, &mut manifest)?;
    let (m, n, k) = (panel.n_members(), panel.n_instances(), panel.n_classes());
    let bytes = match cli.format {
        Format::Json => json_bytes(&json!({
            "valid": true,
            "members": m,
            "instances": n,
            "classes": k,
        }))?,
        Format::Csv => csv_bytes(
            &["valid", "members", "instances", "classes"],
            [vec![
                "true".into(),
                m.to_string(),
                n.to_string(),
                k.to_string(),
            ]],
        )?,
    };
    emit(cli, &manifest, &bytes)
}

fn pool_cmd(cli: &Cli, input: &PanelInput, pool: &str, weights: &str) -> Result<()> {
    let kind = PoolKind::from_str(pool)?;
    let out = out_paths(cli, 1)?.remove(0);
    let mut manifest = RunManifest::new("pool", cli.seed);
    let panel = load_panel(input, &mut manifest)?;
    let w = load_weights(weights, panel.n_members(), &mut manifest)?;
    let pooled = pool_panel(&panel, kind, &w)?;
    let result = panel.with_single_member(kind.name(), pooled);
    match cli.format {
        Format::Json => {
            let mut buf = Vec::new();
            save_panel_json(&result, &mut buf)?;
            write_atomic(&out, &buf)?;
        }
        Format::Csv => {
            let (mut a, mut b) = (Vec::new(), Vec::new());
            save_panel_csv(&result, &mut a, &mut b)?;
            write_atomic(&out, &a)?;
            write_atomic(&sibling(&out, ".outcomes.csv"), &b)?;
        }
    }
    manifest.write_beside(&out)
}

fn tune(
    cli: &Cli,
    input: &PanelInput,
    score: &str,
    pool: &str,
    restarts: usize,
    max_iterations: usize,
) -> Result<()> {
    let kind = ScoreKind::from_str(score)?;
    let pool = PoolKind::from_str(pool)?;
    let out = out_paths(cli, 1)?.remove(0);
    announce_seed(cli.seed);
    let mut manifest = RunManifest::new("tune", cli.seed);
    let panel = load_panel(input, &mut manifest)?;
    let mut cfg = TuneConfig::new(kind, pool)
        .with_seed(cli.seed)
        .with_restarts(restarts);
    cfg.max_iterations = max_iterations;
    let res = tune_weights(&panel, &cfg)?;
    write_json(
        &out,
        &json!({
            "weights": res.weights.as_slice(),
            "score": res.score,
        }),
    )?;
    manifest.write_beside(&out)
}

fn score_cmd(
    cli: &Cli,
    input: &PanelInput,
    scores: &str,
    pool: Option<&str>,
    weights: &str,
) -> Result<()> {
    let kinds: Vec<ScoreKind> = parse_list(scores, "score")?;
    let pool = pool.map(PoolKind::from_str).transpose()?;
    let mut manifest = RunManifest::new("score", cli.seed);
    let panel = load_panel(input, &mut manifest)?;
    let pooled = match pool {
        Some(kind) => {
            let w = load_weights(weights, panel.n_members(), &mut manifest)?;
            Some((kind, pool_panel(&panel, kind, &w)?))
        }
        None => None,
    };
    let mut rows: Vec<(String, ScoreKind, f64)> = Vec::new();
    for &kind in &kinds {
        for (id, v) in panel
            .member_ids
            .iter()
            .zip(member_mean_scores(&panel, kind)?)
        {
            rows.push((id.clone(), kind, v));
        }
        if let Some((p, cdfs)) = &pooled {
            let v = trafo_ensemble::scoring::mean_score(cdfs, &panel.outcomes, kind)?;
            rows.push((p.name(), kind, v));
        }
    }
    let bytes = match cli.format {
        Format::Json => json_bytes(
            &rows
                .iter()
                .map(|(m, k, v)| json!({"model": m, "score": k.name(), "value": v}))
                .collect::<Vec<_>>(),
        )?,
        Format::Csv => csv_bytes(
            &["model", "score", "value"],
            rows.iter()
                .map(|(m, k, v)| vec![m.clone(), k.name().to_string(), fmt_f64(*v)]),
        )?,
    };
    emit(cli, &manifest, &bytes)
}

#[derive(Serialize)]
struct MetricRow {
    model: String,
    metric: String,
    estimate: f64,
    ci: [f64; 2],
    #[serde(rename = "B")]
    resamples: usize,
    seed: u64,
    undefined_resamples: usize,
}

impl MetricRow {
    fn new(model: &str, metric: &str, ci: BootstrapInterval) -> Self {
        MetricRow {
            model: model.to_string(),
            metric: metric.to_string(),
            estimate: ci.estimate,
            ci: [ci.lo, ci.hi],
            resamples: ci.resamples,
            seed: ci.seed,
            undefined_resamples: ci.undefined,
        }
    }
}

fn mean_over(values: &[f64], idx: &[usize]) -> f64 {
    idx.iter().map(|&i| values[i]).sum::<f64>() / idx.len() as f64
}

fn evaluate(
    cli: &Cli,
    input: &PanelInput,
    pools: &str,
    scores: &str,
    weights: &str,
    resamples: usize,
    calibration_out: Option<&Path>,
) -> Result<()> {
    let pools: Vec<PoolKind> = parse_list(pools, "pool")?;
    let kinds: Vec<ScoreKind> = parse_list(scores, "score")?;
    let out = out_paths(cli, 1)?.remove(0);
    let calib_path = calibration_out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| sibling(&out, ".calibration.csv"));
    announce_seed(cli.seed);
    let mut manifest = RunManifest::new("evaluate", cli.seed);
    let panel = load_panel(input, &mut manifest)?;
    let w = load_weights(weights, panel.n_members(), &mut manifest)?;
    let cfg = BootstrapConfig {
        resamples,
        ..BootstrapConfig::with_seed(cli.seed)
    };
    let n = panel.n_instances();
    let k = panel.n_classes();
    let outcomes = &panel.outcomes;
    let exact: Option<Vec<usize>> = outcomes.iter().map(Observation::exact).collect();

    let mut models: Vec<(String, Vec<DiscreteCdf>)> = Vec::new();
    for &p in &pools {
        models.push((p.name(), pool_panel(&panel, p, &w)?));
    }

    let mut rows = Vec::new();
    // member average: weighted mean of member scores on the same resamples
    for &kind in &kinds {
        let per_member: Vec<Vec<f64>> = panel
            .cdfs
            .iter()
            .map(|row| {
                row.iter()
                    .zip(outcomes)
                    .map(|(c, o)| score(kind, c, o))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let ci = bootstrap_ci(
            n,
            |idx| {
                let means: Vec<f64> = per_member.iter().map(|s| mean_over(s, idx)).collect();
                Ok(w.weighted_mean(&means))
            },
            &cfg,
        )?;
        rows.push(MetricRow::new("avg", kind.name(), ci));
    }

    let mut calib_rows = Vec::new();
    let mut fits = Vec::new();
    for (name, cdfs) in &models {
        for &kind in &kinds {
            let s: Vec<f64> = cdfs
                .iter()
                .zip(outcomes)
                .map(|(c, o)| score(kind, c, o))
                .collect::<Result<_>>()?;
            let ci = bootstrap_ci(n, |idx| Ok(mean_over(&s, idx)), &cfg)?;
            rows.push(MetricRow::new(name, kind.name(), ci));
        }
        let Some(ys) = &exact else {
            continue;
        };
        let hits: Vec<f64> = cdfs
            .iter()
            .zip(ys)
            .map(|(c, &y)| if classify(c) == y { 1.0 } else { 0.0 })
            .collect();
        debug_assert_eq!(
            mean_over(&hits, &(0..n).collect::<Vec<_>>()),
            accuracy(cdfs, outcomes)?
        );
        rows.push(MetricRow::new(
            name,
            "accuracy",
            bootstrap_ci(n, |idx| Ok(mean_over(&hits, idx)), &cfg)?,
        ));
        let pred: Vec<usize> = cdfs.iter().map(classify).collect();
        let kappa = bootstrap_ci(
            n,
            |idx| {
                let p: Vec<usize> = idx.iter().map(|&i| pred[i]).collect();
                let o: Vec<usize> = idx.iter().map(|&i| ys[i]).collect();
                qwk(&p, &o, k)
            },
            &cfg,
        );
        push_optional(&mut rows, name, "qwk", kappa)?;
        if k == 2 {
            let risk: Vec<f64> = cdfs.iter().map(|c| 1.0 - c.at(0)).collect();
            let ev: Vec<bool> = ys.iter().map(|&y| y == 1).collect();
            let a = bootstrap_ci(
                n,
                |idx| {
                    let r: Vec<f64> = idx.iter().map(|&i| risk[i]).collect();
                    let e: Vec<bool> = idx.iter().map(|&i| ev[i]).collect();
                    auc(&r, &e)
                },
                &cfg,
            );
            push_optional(&mut rows, name, "auc", a)?;
        }
        let report = calibration_report(cdfs, outcomes, &CALIBRATION_CUTS)?;
        for class in &report.classes {
            for b in &class.bins {
                calib_rows.push(vec![
                    name.clone(),
                    (class.class + 1).to_string(),
                    fmt_f64(b.lo),
                    fmt_f64(b.hi),
                    b.count.to_string(),
                    opt(b.mean_pred),
                    opt(b.obs_rate),
                    opt(b.ci.map(|c| c.0)),
                    opt(b.ci.map(|c| c.1)),
                ]);
            }
        }
        for t in report.thresholds {
            fits.push(json!({
                "model": name,
                "threshold": t.threshold + 1,
                "citl": t.fit.as_ref().map(|f| f.citl),
                "slope": t.fit.as_ref().map(|f| f.slope),
                "converged": t.fit.as_ref().map(|f| f.converged),
                "diagnostic": t.fit.as_ref().and_then(|f| f.diagnostic.clone()).or(t.error),
            }));
        }
    }

    write_json(&out, &json!({ "metrics": rows, "calibration": fits }))?;
    let bytes = csv_bytes(
        &[
            "model",
            "class",
            "bin_lo",
            "bin_hi",
            "count",
            "mean_pred",
            "obs_rate",
            "ci_lo",
            "ci_hi",
        ],
        calib_rows,
    )?;
    write_atomic(&calib_path, &bytes)?;
    manifest.write_beside(&out)
}

/// Metrics that can be undefined on the full sample are reported on stderr
/// and left out.
fn push_optional(
    rows: &mut Vec<MetricRow>,
    model: &str,
    metric: &str,
    r: Result<BootstrapInterval>,
) -> Result<()> {
    match r {
        Ok(ci) => rows.push(MetricRow::new(model, metric, ci)),
        Err(e @ (Error::UndefinedMetric(_) | Error::UnstableMetric { .. })) => {
            eprintln!("warning: {model} {metric} skipped: {e}");
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn minimax_check(
    cli: &Cli,
    score: &str,
    members: &Path,
    weights: &str,
    resolution: f64,
) -> Result<()> {
    let kind = ScoreKind::from_str(score)?;
    let mut manifest = RunManifest::new("minimax-check", cli.seed);
    manifest.add_input(members)?;
    let raw: Value = serde_json::from_reader(open(members)?)?;
    let result = match kind {
        ScoreKind::Nll => {
            let ps: Vec<f64> = serde_json::from_value(raw)?;
            let w = load_weights(weights, ps.len(), &mut manifest)?;
            let r = verify_minimax_binary(&ps, &w, resolution)?;
            json!({
                "pass": r.pass,
                "scan_argmin": r.scan_argmin,
                "scan_min": r.scan_min,
                "pool_value": r.pool_value,
                "max_regret": r.max_regret,
            })
        }
        ScoreKind::Rps => {
            let rows: Vec<Vec<f64>> = serde_json::from_value(raw)?;
            let cdfs: Vec<DiscreteCdf> = rows
                .into_iter()
                .map(DiscreteCdf::new)
                .collect::<Result<_>>()?;
            let refs: Vec<&DiscreteCdf> = cdfs.iter().collect();
            let w = load_weights(weights, cdfs.len(), &mut manifest)?;
            let r = verify_minimax_rps(&refs, &w, resolution)?;
            json!({
                "pass": r.pass,
                "scan_argmin": [r.scan_argmin.0, r.scan_argmin.1],
                "scan_min": r.scan_min,
                "pool_value": r.pool_value,
                "max_regret": r.max_regret,
            })
        }
        ScoreKind::Brier => {
            return Err(Error::ScoreKind(
                "minimax checks support nll and rps".into(),
            ))
        }
    };
    emit(cli, &manifest, &json_bytes(&result)?)
}

fn simulate(cli: &Cli, name: &str, n: usize) -> Result<()> {
    let (spec, truth) = preset(name)?;
    let out = out_paths(cli, 1)?.remove(0);
    announce_seed(cli.seed);
    let manifest = RunManifest::new("simulate", cli.seed);
    let data = simulate_ordinal(n, &spec, &truth, cli.seed)?;
    let mut buf = Vec::new();
    save_dataset_csv(&data, &mut buf)?;
    write_atomic(&out, &buf)?;
    manifest.write_beside(&out)
}

#[allow(clippy::too_many_arguments)]
fn train_toy(
    cli: &Cli,
    data_path: &Path,
    spec: &str,
    loss: &str,
    members: usize,
    target: &str,
    split: Option<&str>,
    epochs: usize,
    learning_rate: f64,
) -> Result<()> {
    let kind = ModelKind::from_str(spec)?;
    let loss = Loss::from_str(loss)?;
    let target = TargetDistribution::from_str(target)?;
    let outs = out_paths(cli, 2)?;
    announce_seed(cli.seed);
    let mut manifest = RunManifest::new("train-toy", cli.seed);
    manifest.add_input(data_path)?;
    let mut data = load_dataset_csv(open(data_path)?, usize::MAX)?;
    data.classes = data.y.iter().max().map_or(0, |m| m + 1);
    let p = match kind {
        ModelKind::SimpleIntercept => 0,
        ModelKind::SimpleInterceptLinearShift => data.predictors(),
    };
    let spec = ToyModelSpec::new(kind, data.classes, p, target)?;
    let sizes = match split {
        Some(s) => {
            let v: Vec<usize> = s
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad split size '{t}'")))
                })
                .collect::<Result<_>>()?;
            <[usize; 3]>::try_from(v)
                .map_err(|_| Error::Parse("--split needs train,valid,test sizes".into()))?
        }
        None => {
            let n = data.len();
            let (v, t) = (n / 5, n / 5);
            [n - v - t, v, t]
        }
    };
    let [train, valid, test] = data.split(sizes, cli.seed)?;
    let cfg = TrainConfig {
        loss,
        learning_rate,
        epochs,
        ..Default::default()
    };
    let set = make_members(&train, Some(&valid), &test, &spec, &cfg, members, cli.seed)?;

    let mut buf = Vec::new();
    save_panel_json(&set.panel, &mut buf)?;
    write_atomic(&outs[0], &buf)?;
    write_json(
        &outs[1],
        &json!({
            "spec": set.spec,
            "seeds": set.seeds,
            "members": set.params,
        }),
    )?;
    manifest.write_beside(&outs[0])?;
    manifest.write_beside(&outs[1])
}

fn figure2(cli: &Cli, members: &str, grid: &str, dist: &str, weights: &str) -> Result<()> {
    let dist = TargetDistribution::from_str(dist)?;
    let members: Vec<LocationScale> = members
        .split(',')
        .map(|pair| {
            let (a, b) = pair
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("member '{pair}' is not location:scale")))?;
            LocationScale::new(parse_f64(a, "location")?, parse_f64(b, "scale")?)
        })
        .collect::<Result<_>>()?;
    if members.len() < 2 {
        return Err(Error::Parse("figure2 needs at least two members".into()));
    }
    let parts: Vec<f64> = grid
        .split(':')
        .map(|t| parse_f64(t, "grid"))
        .collect::<Result<_>>()?;
    let [from, to, step] = <[f64; 3]>::try_from(parts)
        .map_err(|_| Error::Parse("--grid must be from:to:step".into()))?;
    if !(step > 0.0 && to > from) {
        return Err(Error::Parse("--grid needs from < to and step > 0".into()));
    }
    let count = ((to - from) / step).round() as usize;
    let points: Vec<f64> = (0..=count).map(|i| from + i as f64 * step).collect();
    let mut manifest = RunManifest::new("figure2", cli.seed);
    let w = load_weights(weights, members.len(), &mut manifest)?;
    let c = ensemble_density_curves(&members, &w, dist, &points)?;

    let mut header: Vec<String> = vec!["y".into()];
    header.extend((1..=members.len()).map(|m| format!("member_{m}")));
    header.extend(
        [
            "linear",
            "log_linear",
            "trafo",
            "avg_member_nll",
            "linear_nll",
            "log_linear_nll",
            "trafo_nll",
        ]
        .map(String::from),
    );
    let rows = (0..points.len()).map(|g| {
        let mut r = vec![fmt_f64(points[g])];
        r.extend(c.members.iter().map(|m| fmt_f64(m[g])));
        r.extend(
            [
                c.linear[g],
                c.log_linear[g],
                c.transformation[g],
                c.avg_member_nll[g],
                c.linear_nll[g],
                c.log_linear_nll[g],
                c.transformation_nll[g],
            ]
            .map(fmt_f64),
        );
        r
    });
    let refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let bytes = csv_bytes(&refs, rows)?;
    emit(cli, &manifest, &bytes)
}

fn structure_check(
    cli: &Cli,
    input: &PanelInput,
    pool: &str,
    weights: &str,
    dist: &str,
) -> Result<()> {
    let kind = PoolKind::from_str(pool)?;
    let dist = TargetDistribution::from_str(dist)?;
    let mut manifest = RunManifest::new("structure-check", cli.seed);
    let panel = load_panel(input, &mut manifest)?;
    let w = load_weights(weights, panel.n_members(), &mut manifest)?;
    let pooled = pool_panel(&panel, kind, &w)?;
    let pairs = structure_check_pairs(&panel, &pooled, dist)?;
    let bytes = csv_bytes(
        &["instance", "member", "member_z", "ensemble_z"],
        pairs.iter().map(|p| {
            vec![
                p.instance.to_string(),
                panel.member_ids[p.member].clone(),
                fmt_f64(p.member_z),
                fmt_f64(p.ensemble_z),
            ]
        }),
    )?;
    emit(cli, &manifest, &bytes)
}
