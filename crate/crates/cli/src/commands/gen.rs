use super::Ctx;
use crate::error::{domain, usage, CliError};
use crate::io::{emit, render_space, to_value, write_json, write_text, OutputFormat, SCHEMA};
use qmc::fixtures::{generate, verify, CheckStatus, FixtureKind, FixtureParams};
use qmc::DistanceMatrix;
use serde_json::json;
use std::fmt::Write;
use std::path::PathBuf;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// line, backedge-line, cycle, hst, spoke, min-violation,
    /// nn-lower-bound, random-bounded or margin-example.
    kind: FixtureKind,

    #[arg(long)]
    n: Option<usize>,

    /// Tree depth.
    #[arg(long)]
    p: Option<u32>,

    #[arg(long)]
    branching: Option<usize>,

    #[arg(long)]
    seed: Option<u64>,

    /// Bound on both greedy constants (random-bounded).
    #[arg(long)]
    target: Option<usize>,

    #[arg(long, value_enum, default_value_t = OutputFormat::Matrix)]
    output_format: OutputFormat,

    /// Write the space here; without it the space goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Write the fixture description as JSON.
    #[arg(long)]
    spec: Option<PathBuf>,

    /// Write the labels of a labeled fixture.
    #[arg(long)]
    labels: Option<PathBuf>,

    /// Write the query distances of the nearest-neighbor fixture as JSON.
    #[arg(long)]
    query: Option<PathBuf>,

    /// Re-check every expectation; exit 1 if one fails.
    #[arg(long)]
    verify: bool,
}

pub fn run(ctx: &Ctx, args: Args) -> Result<(), CliError> {
    let params = FixtureParams {
        n: args.n,
        depth: args.p,
        branching: args.branching,
        seed: args.seed,
        target_constant: args.target,
    };
    let f = generate(args.kind, &params)?;
    if args.labels.is_some() && f.labels.is_none() {
        return Err(usage(format!("{:?} fixtures carry no labels", f.spec.kind)));
    }
    if args.query.is_some() && f.query.is_none() {
        return Err(usage(format!("{:?} fixtures carry no query", f.spec.kind)));
    }

    let kind_name = serde_json::to_value(f.spec.kind).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
    let comment = format!("fixture: {kind_name}\nmode: {}", to_value(&f.space.mode()).as_str().unwrap_or("strict"));
    let text = render_space(&f.space, args.output_format, &comment);
    write_text(args.out.as_deref(), &text)?;

    let spec = json!({ "schema": SCHEMA, "n": f.space.len(), "spec": to_value(&f.spec) });
    if let Some(path) = &args.spec {
        write_json(path, &spec)?;
    }
    if let (Some(path), Some(labels)) = (&args.labels, &f.labels) {
        let mut out = format!("# labels: {kind_name}\n");
        for (id, l) in labels {
            let _ = writeln!(out, "{id} {}", if *l > 0 { "+1" } else { "-1" });
        }
        write_text(Some(path), &out)?;
    }
    if let (Some(path), Some(q)) = (&args.query, &f.query) {
        write_json(path, &json!([to_value(&q.distances)]))?;
    }

    let checks = if args.verify { verify(&f) } else { Vec::new() };
    if args.out.is_some() {
        emit(
            "gen",
            json!({
                "n": f.space.len(),
                "spec": to_value(&f.spec),
                "checks": to_value(&checks),
            }),
        );
    }

    ctx.log.line(format!("{kind_name}: {} points", f.space.len()));
    let mut failed = 0;
    for c in &checks {
        let status = match &c.status {
            CheckStatus::Holds => "holds".to_string(),
            CheckStatus::Fails { observed } => {
                failed += 1;
                format!("FAILS ({observed})")
            }
            CheckStatus::Skipped { reason } => format!("skipped ({reason})"),
        };
        ctx.log.line(format!("  {} [{:?}]: {status}", to_value(&c.expectation.claim), c.expectation.basis));
    }
    if failed > 0 {
        return Err(domain(format!("{failed} expectation(s) do not hold")));
    }
    Ok(())
}
