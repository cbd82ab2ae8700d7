//! Mean firing-energy series over a single p or a p sweep.

use std::path::PathBuf;

use quann::envdyn::EnvSelection;
use quann::neuron::FiringUnits;
use rayon::prelude::*;

use crate::config::SweepSpec;
use crate::csvio::{fmt_f64, write_row, Sink};
use crate::exit::CliResult;
use crate::runner::{build_env_coupling, kept_series, resolve_architecture};

pub struct Resolved {
    pub preset: Option<String>,
    pub arch: Option<PathBuf>,
    pub p: String,
    pub steps: usize,
    pub drop: usize,
    pub env: EnvSelection,
    pub out: Option<PathBuf>,
}

pub fn run(args: Resolved) -> CliResult<()> {
    let sweep = SweepSpec::parse(&args.p)?;
    let arch = resolve_architecture(args.preset.as_deref(), args.arch.as_ref())?;
    let coupling = build_env_coupling(&arch)?;
    let units = FiringUnits::unit_energy();

    let p_values = sweep.values();
    // Independent jobs per p; the indexed collect keeps output order
    // deterministic regardless of completion order.
    let runs: Vec<CliResult<Vec<f64>>> = p_values
        .par_iter()
        .map(|&p| kept_series(&coupling, p, &args.env, args.steps, args.drop, &units))
        .collect();

    let mut sink = Sink::create(args.out.as_deref())?;
    write_row(
        &mut sink,
        &["p".into(), "iteration".into(), "energy_j".into()],
    )?;
    for (p, run) in p_values.iter().zip(runs) {
        let series = run?;
        for (offset, value) in series.iter().enumerate() {
            write_row(
                &mut sink,
                &[
                    fmt_f64(*p),
                    (args.drop + offset).to_string(),
                    fmt_f64(*value),
                ],
            )?;
        }
    }
    sink.finish()
}
