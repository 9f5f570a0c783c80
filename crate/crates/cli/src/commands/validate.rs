use super::Ctx;
use crate::error::{domain, CliError};
use crate::io::{emit, load_space, to_value};
use qmc::DistanceMatrix;
use serde_json::json;
use std::path::PathBuf;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Matrix or edge-list file (`-` for stdin).
    space: PathBuf,

    /// Largest number of violations listed on stderr.
    #[arg(long, default_value_t = 10)]
    show: usize,
}

pub fn run(ctx: &Ctx, args: Args) -> Result<(), CliError> {
    let space = load_space(&args.space, ctx.input_format, ctx.mode)?;
    let report = space.validate(ctx.tolerance);
    let diameter = space.diameter();
    emit(
        "validate",
        json!({
            "n": space.len(),
            "mode": space.mode(),
            "diameter": to_value(&diameter),
            "report": to_value(&report),
        }),
    );
    let log = &ctx.log;
    log.line(format!(
        "{} points, {} triangle violations, {} negative entries, {} nonzero diagonal entries",
        space.len(),
        report.violation_count,
        report.negative_entries.len(),
        report.nonzero_diagonal.len()
    ));
    for v in report.violations.iter().take(args.show) {
        log.line(format!("  rho({}, {}) = {} > rho({0}, {}) + rho({3}, {1}) = {}", v.i, v.j, v.lhs, v.k, v.rhs));
    }
    if report.passed {
        log.line("valid quasi-metric");
        Ok(())
    } else {
        Err(domain("not a quasi-metric"))
    }
}
