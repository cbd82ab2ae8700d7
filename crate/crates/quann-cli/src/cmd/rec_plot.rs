//! Recurrence-plot image of the mean-energy series as a binary PGM.

use std::path::PathBuf;

use quann::envdyn::EnvSelection;
use quann::neuron::FiringUnits;
use rqa::{delay_embed, recurrence_plot, EmbeddingConfig, RadiusSpec};

use crate::config::LagSpec;
use crate::exit::{CliError, CliResult};
use crate::pgm::write_pgm;
use crate::runner::{build_env_coupling, kept_series, resolve_architecture};

pub struct Resolved {
    pub preset: Option<String>,
    pub arch: Option<PathBuf>,
    pub p: f64,
    pub steps: usize,
    pub drop: usize,
    pub dim: usize,
    pub lag: LagSpec,
    pub radii: RadiusSpec,
    pub env: EnvSelection,
    pub out: PathBuf,
}

pub fn run(args: Resolved) -> CliResult<()> {
    let arch = resolve_architecture(args.preset.as_deref(), args.arch.as_ref())?;
    let coupling = build_env_coupling(&arch)?;
    let units = FiringUnits::unit_energy();
    let series = kept_series(&coupling, args.p, &args.env, args.steps, args.drop, &units)?;
    let lag = args.lag.resolve(&series)?;
    let radii = args.radii.resolve(&series)?;
    if radii.len() != 1 {
        return Err(CliError::usage(format!(
            "a recurrence plot needs exactly one radius, got {}",
            radii.len()
        )));
    }
    let emb = delay_embed(&series, &EmbeddingConfig::new(lag, args.dim)?)?;
    let plot = recurrence_plot(&emb, radii[0])?;
    write_pgm(&args.out, &plot)?;
    eprintln!("wrote {}x{} recurrence plot to {}", plot.size(), plot.size(), args.out.display());
    Ok(())
}
