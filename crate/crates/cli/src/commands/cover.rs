use super::{Ctx, SpaceArgs};
use crate::error::{usage, CliError};
use crate::io::{emit, fmt_num, to_value};
use clap::ValueEnum;
use qmc::cover::exact_minimum_cover;
use qmc::dimension::directional_constant_sampled;
use qmc::fixtures::SAMPLED_CENTERS;
use qmc::{
    arbitrary_cover, greedy_cover, greedy_cover_eps, iterated_cover, verify_cover, ArbitraryOrder, Direction,
    DistanceMatrix, QuasiMetric,
};
use serde_json::json;

/// Largest space `--compare` will solve exactly.
pub const COMPARE_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Greedy,
    Iterated,
    Arbitrary,
}

#[derive(clap::Args, Debug)]
pub struct Args {
    #[command(flatten)]
    input: SpaceArgs,

    /// Cover radius.
    #[arg(long)]
    alpha: f64,

    #[arg(long, default_value_t = Direction::Outer)]
    direction: Direction,

    #[arg(long, value_enum, default_value_t = Algo::Greedy)]
    algo: Algo,

    /// Stop once at most ε·n points remain uncovered (greedy only).
    #[arg(long)]
    eps: Option<f64>,

    /// Covering-constant estimate for the iterated algorithm; estimated
    /// from a sample of balls when omitted.
    #[arg(long)]
    lambda: Option<f64>,

    /// Shuffle the candidate order of the arbitrary algorithm with this seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Also compute the exact minimum cover (at most 12 points).
    #[arg(long)]
    compare: bool,
}

/// Greedy sampled estimate of the constant in `direction`, at least 2.
pub fn estimate_lambda(space: &QuasiMetric, direction: Direction, seed: u64) -> Result<f64, CliError> {
    let est = directional_constant_sampled(space, direction, SAMPLED_CENTERS, seed)?;
    Ok((est.value as f64).max(2.0))
}

pub fn run(ctx: &Ctx, args: Args) -> Result<(), CliError> {
    if args.eps.is_some() && args.algo != Algo::Greedy {
        return Err(usage("--eps requires --algo greedy"));
    }
    if args.lambda.is_some() && args.algo != Algo::Iterated {
        return Err(usage("--lambda requires --algo iterated"));
    }
    if args.seed.is_some() && args.algo != Algo::Arbitrary {
        return Err(usage("--seed requires --algo arbitrary"));
    }

    let space = args.input.load(ctx)?;
    let n = space.len();
    if args.compare && n > COMPARE_LIMIT {
        return Err(usage(format!("--compare supports at most {COMPARE_LIMIT} points, space has {n}")));
    }
    let all: Vec<usize> = (0..n).collect();
    let (alpha, dir) = (args.alpha, args.direction);
    let mut lambda = None;
    let cover = match args.algo {
        Algo::Greedy => match args.eps {
            Some(eps) => greedy_cover_eps(&space, &all, &all, alpha, dir, eps)?,
            None => greedy_cover(&space, &all, &all, alpha, dir)?,
        },
        Algo::Arbitrary => {
            let order = args.seed.map_or(ArbitraryOrder::Ascending, |seed| ArbitraryOrder::Shuffled { seed });
            arbitrary_cover(&space, &all, &all, alpha, dir, order)?
        }
        Algo::Iterated => {
            let l = match args.lambda {
                Some(l) => l,
                None => estimate_lambda(&space, dir, 0)?,
            };
            lambda = Some(l);
            iterated_cover(&space, &all, &all, alpha, dir, l)?
        }
    };
    let verification = verify_cover(&space, &cover, &all, alpha, dir);
    let optimum = if args.compare {
        Some(exact_minimum_cover(&space, &all, &all, alpha, dir, COMPARE_LIMIT)?)
    } else {
        None
    };

    emit(
        "cover",
        json!({
            "n": n,
            "alpha": alpha,
            "direction": dir,
            "algorithm": args.algo.to_possible_value().map(|v| v.get_name().to_string()),
            "eps": args.eps,
            "lambda": lambda,
            "size": cover.len(),
            "distance_evaluations": cover.stats.distance_evaluations,
            "uncovered": cover.uncovered,
            "verified": verification.ok,
            "violations": to_value(&verification.violations),
            "exact_optimum": optimum.as_ref().map(|c| c.len()),
            "exact_cover": optimum.as_ref().map(|c| c.cover_ids.clone()),
            "cover": to_value(&cover),
        }),
    );
    let log = &ctx.log;
    log.line(format!("cover size        {}", cover.len()));
    log.line(format!("cover points      {:?}", cover.cover_ids));
    log.line(format!("distance reads    {} (n^2 = {})", cover.stats.distance_evaluations, n * n));
    if !cover.uncovered.is_empty() {
        log.line(format!("uncovered         {:?}", cover.uncovered));
    }
    if !cover.stats.schedule.is_empty() {
        let radii: Vec<String> = cover.stats.schedule.iter().map(|&r| fmt_num(r)).collect();
        log.line(format!("pass radii        {}", radii.join(", ")));
    }
    if let Some(opt) = &optimum {
        log.line(format!("exact optimum     {} {:?}", opt.len(), opt.cover_ids));
    }
    if verification.ok {
        Ok(())
    } else {
        Err(crate::error::domain(format!("cover failed verification: {:?}", verification.violations)))
    }
}
