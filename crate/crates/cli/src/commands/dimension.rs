use super::{Ctx, SpaceArgs};
use crate::error::{usage, CliError};
use crate::io::{emit, fmt_num, to_value};
use clap::ValueEnum;
use qmc::dimension::{
    density_constant_capped, directional_constant_capped, directional_constant_sampled, doubling_constant_capped,
    DEFAULT_EXACT_CAP,
};
use qmc::transforms::{apply, Transform};
use qmc::{ConstantEstimate, Direction, DistanceMatrix, Method};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Constant {
    /// Outer and inner constants.
    Both,
    Outer,
    Inner,
    /// Doubling constant of a symmetric space.
    Doubling,
    /// Density constant of a symmetric space.
    Density,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Exact when the space has at most `--cap` points, greedy otherwise.
    Auto,
    Greedy,
    Exact,
}

#[derive(clap::Args, Debug)]
pub struct Args {
    #[command(flatten)]
    input: SpaceArgs,

    #[arg(long, value_enum, default_value_t = Constant::Both)]
    constant: Constant,

    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,

    /// Largest space the exact method accepts.
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    cap: usize,

    /// Symmetrize first (doubling and density only).
    #[arg(long)]
    op: Option<Transform>,

    /// Greedy estimate over random centers and halving radii (directional only).
    #[arg(long)]
    sampled: bool,

    /// Number of centers for `--sampled`.
    #[arg(long, default_value_t = 16)]
    centers: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn entry(name: &str, est: &ConstantEstimate) -> Value {
    json!({
        "constant": name,
        "value": est.value,
        "log2": (est.value as f64).log2(),
        "estimate": to_value(est),
    })
}

pub fn run(ctx: &Ctx, args: Args) -> Result<(), CliError> {
    let directional = matches!(args.constant, Constant::Both | Constant::Outer | Constant::Inner);
    if args.op.is_some() && directional {
        return Err(usage("--op applies to --constant doubling|density only"));
    }
    if args.sampled && !directional {
        return Err(usage("--sampled applies to directional constants only"));
    }
    if args.sampled && args.method == MethodArg::Exact {
        return Err(usage("--sampled always uses the greedy method"));
    }
    if args.sampled && args.centers == 0 {
        return Err(usage("--centers must be positive"));
    }

    let space = args.input.load(ctx)?;
    let n = space.len();
    let method = match args.method {
        MethodArg::Greedy => Method::Greedy,
        MethodArg::Exact => Method::Exact,
        MethodArg::Auto if n <= args.cap && !args.sampled => Method::Exact,
        MethodArg::Auto => Method::Greedy,
    };

    let mut estimates = Vec::new();
    if directional {
        let dirs: &[Direction] = match args.constant {
            Constant::Outer => &[Direction::Outer],
            Constant::Inner => &[Direction::Inner],
            _ => &[Direction::Outer, Direction::Inner],
        };
        for &d in dirs {
            let est = if args.sampled {
                directional_constant_sampled(&space, d, args.centers, args.seed)?
            } else {
                directional_constant_capped(&space, d, method, args.cap)?
            };
            estimates.push((d.to_string(), est));
        }
    } else {
        let name = if args.constant == Constant::Doubling { "doubling" } else { "density" };
        let est = match args.op {
            Some(op) => {
                let sym = apply(&space, op)?;
                symmetric(&sym, args.constant, method, args.cap)?
            }
            None => symmetric(&space, args.constant, method, args.cap)?,
        };
        estimates.push((name.to_string(), est));
    }

    emit(
        "dimension",
        json!({
            "n": n,
            "op": args.op.map(|o| o.to_string()),
            "estimates": estimates.iter().map(|(name, e)| entry(name, e)).collect::<Vec<_>>(),
        }),
    );
    for (name, e) in &estimates {
        let w = &e.witness;
        let mut line = format!(
            "{name:>8}: {} ({:?}) witness center {} radius {} -> {:?}",
            e.value,
            e.method,
            w.center,
            fmt_num(w.radius),
            w.points
        );
        if let Some(lb) = e.lower_bound {
            line.push_str(&format!(", greedy packing {lb}"));
        }
        ctx.log.line(line);
    }
    Ok(())
}

fn symmetric<M: DistanceMatrix + Sync>(
    m: &M,
    constant: Constant,
    method: Method,
    cap: usize,
) -> Result<ConstantEstimate, CliError> {
    Ok(match constant {
        Constant::Doubling => doubling_constant_capped(m, method, cap)?,
        _ => density_constant_capped(m, method, cap)?,
    })
}
