use super::{Ctx, SpaceArgs};
use crate::error::{domain, CliError};
use crate::io::{emit, render_space, to_value, write_text, OutputFormat};
use qmc::transforms::{apply, Transform};
use qmc::DistanceMatrix;
use serde_json::json;
use std::path::PathBuf;

#[derive(clap::Args, Debug)]
pub struct Args {
    #[command(flatten)]
    input: SpaceArgs,

    #[arg(long)]
    op: Transform,

    #[arg(long, value_enum, default_value_t = OutputFormat::Matrix)]
    output_format: OutputFormat,

    /// Write the symmetric space here and print the axiom report as JSON;
    /// without it the space goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(ctx: &Ctx, args: Args) -> Result<(), CliError> {
    let space = args.input.load(ctx)?;
    let sym = apply(&space, args.op)?;
    let report = sym.validate(ctx.tolerance);
    let text = render_space(&sym, args.output_format, &format!("transform: {}", args.op));
    write_text(args.out.as_deref(), &text)?;
    if args.out.is_some() {
        emit("transform", json!({ "n": sym.len(), "op": args.op, "report": to_value(&report) }));
    }

    let log = &ctx.log;
    log.line(format!("{} of {} points: {:?}", args.op, sym.len(), report.kind));
    log.line(format!("triangle violations {}", report.triangle_violation_count));
    for v in report.triangle_violations.iter().take(10) {
        log.line(format!("  d({}, {}) = {} > d({0}, {}) + d({3}, {1}) = {}", v.i, v.j, v.lhs, v.k, v.rhs));
    }
    if report.passed {
        Ok(())
    } else {
        Err(domain(format!("{} output fails its axiom check", args.op)))
    }
}
