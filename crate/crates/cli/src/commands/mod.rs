pub mod bench;
pub mod classify;
pub mod cover;
pub mod dimension;
pub mod gen;
pub mod transform;
pub mod validate;

use crate::error::CliError;
use crate::io::{load_space, require_valid, InputFormat, Log};
use qmc::{Mode, QuasiMetric};
use std::path::PathBuf;

pub struct Ctx {
    pub mode: Mode,
    pub tolerance: f64,
    pub input_format: InputFormat,
    pub log: Log,
}

/// The input space, validated unless `--no-validate` is given.
#[derive(clap::Args, Debug)]
pub struct SpaceArgs {
    /// Matrix or edge-list file (`-` for stdin).
    pub space: PathBuf,

    /// Skip the axiom check before running.
    #[arg(long)]
    pub no_validate: bool,
}

impl SpaceArgs {
    pub fn load(&self, ctx: &Ctx) -> Result<QuasiMetric, CliError> {
        let space = load_space(&self.space, ctx.input_format, ctx.mode)?;
        if !self.no_validate {
            require_valid(&space, ctx.tolerance)?;
        }
        Ok(space)
    }
}
