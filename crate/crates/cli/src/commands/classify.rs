use super::{Ctx, SpaceArgs};
use crate::error::{usage, CliError};
use crate::io::{emit, fmt_num, read_text, to_value, write_json, SCHEMA};
use clap::ValueEnum;
use qmc::classifier::{bound_agnostic_with, bound_consistent_with, parse_labels};
use qmc::serde_inf::Extended;
use qmc::{
    build_classifier, ClassifierMode, CompressedClassifier, CoverAlgorithm, DistanceMatrix, LabeledSample, LogBase,
    QuasiMetric, Query, QueryDistances,
};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TrainAlgo {
    Greedy,
    Iterated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Base {
    Natural,
    Two,
}

impl From<Base> for LogBase {
    fn from(b: Base) -> Self {
        match b {
            Base::Natural => LogBase::Natural,
            Base::Two => LogBase::Two,
        }
    }
}

#[derive(clap::Args, Debug)]
pub struct TrainArgs {
    #[command(flatten)]
    input: SpaceArgs,

    /// Labels file, one `id ±1` pair per line.
    #[arg(long)]
    labels: PathBuf,

    #[arg(long, value_enum, default_value_t = TrainAlgo::Greedy)]
    algo: TrainAlgo,

    /// Covering-constant estimate for the iterated algorithm (at least 2).
    #[arg(long)]
    lambda: Option<f64>,

    /// Allow up to ε of the covered class to be left out.
    #[arg(long)]
    eps: Option<f64>,

    /// Confidence parameter of the reported bound.
    #[arg(long, default_value_t = 0.05)]
    delta: f64,

    #[arg(long, value_enum, default_value_t = Base::Natural)]
    log_base: Base,

    /// Write the trained model to this JSON file.
    #[arg(long)]
    model_out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct PredictArgs {
    #[command(flatten)]
    input: SpaceArgs,

    /// Model written by `qmc train --model-out`.
    #[arg(long)]
    model: PathBuf,

    /// Compare predictions with these labels.
    #[arg(long)]
    labels: Option<PathBuf>,

    /// JSON array of external queries, each `{"to_query": [...], "from_query": [...]}`.
    #[arg(long)]
    queries: Option<PathBuf>,

    /// Points to classify; defaults to the labeled points, or every point.
    #[arg(long, value_delimiter = ',')]
    ids: Vec<usize>,
}

#[derive(clap::Args, Debug)]
pub struct BoundArgs {
    /// 1: consistent classifier, 2: classifier with training error ε.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    theorem: u8,

    /// Sample size.
    #[arg(long)]
    n: usize,

    /// Compression size.
    #[arg(long)]
    k: usize,

    #[arg(long)]
    delta: f64,

    /// Training error (bound 2 only).
    #[arg(long)]
    eps: Option<f64>,

    #[arg(long, value_enum, default_value_t = Base::Natural)]
    log_base: Base,
}

fn load_labels(path: &Path) -> Result<Vec<(usize, i64)>, CliError> {
    parse_labels(&read_text(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

pub fn train(ctx: &Ctx, args: TrainArgs) -> Result<(), CliError> {
    if args.lambda.is_some() && args.algo != TrainAlgo::Iterated {
        return Err(usage("--lambda requires --algo iterated"));
    }
    if !(args.delta > 0.0 && args.delta < 1.0) {
        return Err(usage(format!("--delta must lie in (0, 1), got {}", args.delta)));
    }
    let space = args.input.load(ctx)?;
    let labels = load_labels(&args.labels)?;
    let sample = LabeledSample::from_labels(&space, &labels)?;

    let algorithm = match args.algo {
        TrainAlgo::Greedy => CoverAlgorithm::Greedy,
        TrainAlgo::Iterated => {
            let lambda = match args.lambda {
                Some(l) => l,
                None => super::cover::estimate_lambda(&space, qmc::Direction::Outer, 0)?
                    .max(super::cover::estimate_lambda(&space, qmc::Direction::Inner, 0)?),
            };
            CoverAlgorithm::Iterated { lambda }
        }
    };
    let mode = match args.eps {
        Some(eps) => ClassifierMode::Eps { eps },
        None => ClassifierMode::Consistent,
    };
    let h = build_classifier(&sample, algorithm, mode)?;
    let bound = h.bound(args.delta, args.log_base.into())?;

    if let Some(path) = &args.model_out {
        // full precision: the threshold must round-trip exactly
        write_json(path, &json!({ "schema": SCHEMA, "classifier": to_value(&h) }))?;
    }

    let sizes: serde_json::Map<String, Value> =
        h.candidates.iter().map(|c| (c.kind.to_string(), json!(c.cover_size))).collect();
    emit(
        "train",
        json!({
            "n": h.n,
            "margins": to_value(&h.margins),
            "candidate_sizes": sizes,
            "chosen": h.kind.to_string(),
            "k": h.k,
            "threshold": to_value(&Extended(h.threshold)),
            "training_errors": h.training_errors,
            "training_error": h.training_error,
            "bound": to_value(&bound),
            "classifier": to_value(&h),
        }),
    );

    let log = &ctx.log;
    log.line(format!("margins  rho(S+,S-) = {}  rho(S-,S+) = {}", fmt_num(h.margins.rho_pm), fmt_num(h.margins.rho_mp)));
    log.line(format!("{:<10} {:>6} {:>10} {:>6} {:>10} {:>7}", "candidate", "dir", "radius", "size", "threshold", "errors"));
    for c in &h.candidates {
        let mark = if c.kind == h.kind { " *" } else { "" };
        log.line(format!(
            "{:<10} {:>6} {:>10} {:>6} {:>10} {:>7}{mark}",
            c.kind.to_string(),
            c.kind.direction().to_string(),
            fmt_num(c.radius),
            c.cover_size,
            c.threshold.map_or("-".to_string(), fmt_num),
            c.training_errors
        ));
    }
    log.line(format!("k = {}, bound {} = {}", h.k, bound.theorem, fmt_num(bound.value)));
    Ok(())
}

fn load_model(path: &Path, space: &QuasiMetric) -> Result<CompressedClassifier, CliError> {
    let text = read_text(path)?;
    let bad = |m: String| usage(format!("{}: {m}", path.display()));
    let v: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    if v.get("schema") != Some(&json!(SCHEMA)) {
        return Err(bad(format!("expected a model with schema {SCHEMA}")));
    }
    let h: CompressedClassifier =
        serde_json::from_value(v["classifier"].clone()).map_err(|e| bad(e.to_string()))?;
    if let Some(&c) = h.cover.cover_ids.iter().find(|&&c| c >= space.len()) {
        return Err(bad(format!("cover point {c} is outside the {}-point space", space.len())));
    }
    Ok(h)
}

pub fn predict(ctx: &Ctx, args: PredictArgs) -> Result<(), CliError> {
    let space = args.input.load(ctx)?;
    let h = load_model(&args.model, &space)?;
    let labels = args.labels.as_deref().map(load_labels).transpose()?;
    let queries: Vec<QueryDistances> = match &args.queries {
        Some(p) => serde_json::from_str(&read_text(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => Vec::new(),
    };

    let ids: Vec<usize> = if !args.ids.is_empty() {
        args.ids.clone()
    } else if let Some(l) = &labels {
        l.iter().map(|&(id, _)| id).collect()
    } else if args.queries.is_some() {
        Vec::new()
    } else {
        (0..space.len()).collect()
    };

    let mut points = Vec::new();
    for &id in &ids {
        let p = h.predict(&space, Query::Point(id))?;
        points.push(json!({ "id": id, "label": p.label, "distance": to_value(&Extended(p.distance)), "evaluations": p.evaluations }));
    }
    let mut external = Vec::new();
    for q in &queries {
        let p = h.predict(&space, Query::External(q))?;
        external.push(to_value(&p));
    }

    let agreement = labels.as_ref().map(|l| {
        let agree = l
            .iter()
            .filter(|&&(id, label)| h.predict(&space, Query::Point(id)).map(|p| i64::from(p.label) == label).unwrap_or(false))
            .count();
        json!({ "total": l.len(), "agree": agree, "rate": if l.is_empty() { 1.0 } else { agree as f64 / l.len() as f64 } })
    });

    emit(
        "predict",
        json!({
            "k": h.k,
            "predictions": points,
            "queries": external,
            "agreement": agreement,
        }),
    );
    if let Some(a) = &agreement {
        ctx.log.line(format!("agreement {}/{}", a["agree"], a["total"]));
    }
    ctx.log.line(format!("{} predictions, {} distance reads each", ids.len() + queries.len(), h.k));
    Ok(())
}

pub fn bound(ctx: &Ctx, args: BoundArgs) -> Result<(), CliError> {
    let base = args.log_base.into();
    let report = match (args.theorem, args.eps) {
        (1, None) => bound_consistent_with(args.n, args.k, args.delta, base),
        (1, Some(_)) => return Err(usage("--eps applies to --theorem 2 only")),
        (_, Some(eps)) => bound_agnostic_with(args.n, args.k, args.delta, eps, base),
        (_, None) => return Err(usage("--theorem 2 needs --eps")),
    }?;
    emit("bound", json!({ "report": to_value(&report) }));
    let mut line = format!("bound {} = {}", report.theorem, fmt_num(report.raw));
    if report.vacuous {
        line.push_str(" (vacuous)");
    }
    ctx.log.line(line);
    Ok(())
}
