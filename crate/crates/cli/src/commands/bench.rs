use super::cover::estimate_lambda;
use super::Ctx;
use crate::error::{domain, usage, CliError};
use crate::io::emit;
use clap::ArgGroup;
use qmc::cover::iterated_evaluation_budget;
use qmc::fixtures::{gen_nn_lower_bound, gen_random_bounded, FixtureKind};
use qmc::{greedy_cover, iterated_cover, log_star, verify_cover, Direction, DistanceMatrix, Query};
use serde_json::{json, Value};
use std::time::Instant;

#[derive(clap::Args, Debug)]
#[command(group = ArgGroup::new("workload").required(true).args(["fixture", "cover_scaling"]))]
pub struct Args {
    /// Nearest-neighbor scan over the leaves of this fixture (nn-lower-bound).
    #[arg(long, requires = "p")]
    fixture: Option<FixtureKind>,

    /// Tree depth of the nearest-neighbor fixture.
    #[arg(long)]
    p: Option<u32>,

    /// Greedy and iterated covers on random bounded instances of growing size.
    #[arg(long)]
    cover_scaling: bool,

    #[arg(long, value_delimiter = ',', default_values_t = [250usize, 500, 1000])]
    sizes: Vec<usize>,

    /// Cover radius as a fraction of the diameter.
    #[arg(long, default_value_t = 0.25)]
    alpha_fraction: f64,

    #[arg(long, default_value_t = Direction::Outer)]
    direction: Direction,

    /// Bound on the greedy constants of the generated instances.
    #[arg(long, default_value_t = 16)]
    target: usize,

    /// Covering-constant estimate for the iterated cover; estimated from a
    /// sample of balls when omitted.
    #[arg(long)]
    lambda: Option<f64>,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub fn run(ctx: &Ctx, args: Args) -> Result<(), CliError> {
    match args.fixture {
        Some(FixtureKind::NnLowerBound) => nn(ctx, args.p.expect("clap enforces --p")),
        Some(other) => Err(usage(format!("no benchmark for {other:?}; use nn-lower-bound"))),
        None => cover_scaling(ctx, &args),
    }
}

fn nn(ctx: &Ctx, p: u32) -> Result<(), CliError> {
    let f = gen_nn_lower_bound(p)?;
    let q = f.query.as_ref().expect("nearest-neighbor fixture has a query");
    let start = Instant::now();
    let found = f.space.nearest(Query::External(&q.distances), &q.leaves, Direction::Inner)?;
    let elapsed = start.elapsed();
    let ok = found.id == q.designated_leaf && found.evaluations == q.leaves.len();
    emit(
        "bench",
        json!({
            "workload": "nn-lower-bound",
            "p": p,
            "nodes": f.space.len(),
            "leaves": q.leaves.len(),
            "designated_leaf": q.designated_leaf,
            "found": found.id,
            "distance": found.distance,
            "evaluations": found.evaluations,
            "ok": ok,
        }),
    );
    ctx.log.line(format!(
        "p={p}: {} leaves, {} distance reads, nearest {} (designated {}), {:.3} ms",
        q.leaves.len(),
        found.evaluations,
        found.id,
        q.designated_leaf,
        elapsed.as_secs_f64() * 1e3
    ));
    if ok {
        Ok(())
    } else {
        Err(domain("nearest-neighbor scan disagrees with the fixture"))
    }
}

fn cover_scaling(ctx: &Ctx, args: &Args) -> Result<(), CliError> {
    if args.sizes.is_empty() || args.sizes.contains(&0) {
        return Err(usage("--sizes must list positive sizes"));
    }
    if !(args.alpha_fraction > 0.0 && args.alpha_fraction.is_finite()) {
        return Err(usage("--alpha-fraction must be positive"));
    }
    let log = &ctx.log;
    log.line(format!(
        "{:>6} {:>10} {:>12} {:>6} {:>7} {:>12} {:>12} {:>6} {:>9} {:>9}",
        "n", "n^2", "greedy", "size", "growth", "iterated", "budget", "size", "greedy ms", "iter ms"
    ));
    let mut rows: Vec<Value> = Vec::new();
    let mut within = true;
    let mut previous: Option<u64> = None;
    for &n in &args.sizes {
        let space = gen_random_bounded(n, args.target, args.seed)?.space;
        let all: Vec<usize> = (0..n).collect();
        let alpha = space.diameter().value * args.alpha_fraction;
        let lambda = match args.lambda {
            Some(l) => l,
            None => estimate_lambda(&space, args.direction, args.seed)?,
        };

        let t0 = Instant::now();
        let greedy = greedy_cover(&space, &all, &all, alpha, args.direction)?;
        let t1 = Instant::now();
        let iterated = iterated_cover(&space, &all, &all, alpha, args.direction, lambda)?;
        let t2 = Instant::now();

        let square = (n * n) as u64;
        let budget = iterated_evaluation_budget(n);
        let verified = verify_cover(&space, &greedy, &all, alpha, args.direction).ok
            && verify_cover(&space, &iterated, &all, alpha, args.direction).ok;
        let ok = verified && greedy.stats.distance_evaluations <= square && iterated.stats.distance_evaluations <= budget;
        within &= ok;
        let growth = previous.map(|p| greedy.stats.distance_evaluations as f64 / p as f64);
        previous = Some(greedy.stats.distance_evaluations);

        rows.push(json!({
            "n": n,
            "n_squared": square,
            "alpha": alpha,
            "lambda": lambda,
            "log_star": log_star(n as f64),
            "greedy_evaluations": greedy.stats.distance_evaluations,
            "greedy_size": greedy.len(),
            "growth": growth,
            "iterated_evaluations": iterated.stats.distance_evaluations,
            "iterated_budget": budget,
            "iterated_size": iterated.len(),
            "iterated_passes": iterated.stats.schedule.len(),
            "verified": verified,
            "ok": ok,
        }));
        log.line(format!(
            "{:>6} {:>10} {:>12} {:>6} {:>7} {:>12} {:>12} {:>6} {:>9.1} {:>9.1}",
            n,
            square,
            greedy.stats.distance_evaluations,
            greedy.len(),
            growth.map_or("-".to_string(), |g| format!("{g:.2}")),
            iterated.stats.distance_evaluations,
            budget,
            iterated.len(),
            (t1 - t0).as_secs_f64() * 1e3,
            (t2 - t1).as_secs_f64() * 1e3
        ));
    }
    emit(
        "bench",
        json!({
            "workload": "cover-scaling",
            "direction": args.direction,
            "alpha_fraction": args.alpha_fraction,
            "target": args.target,
            "seed": args.seed,
            "rows": rows,
            "within_bounds": within,
        }),
    );
    if within {
        Ok(())
    } else {
        Err(domain("a cover exceeded its distance-evaluation bound or failed verification"))
    }
}
