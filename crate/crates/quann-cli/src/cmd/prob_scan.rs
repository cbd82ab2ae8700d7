//! Probability of full-recurrence diagonals (given recurrence) across a p
//! sweep and a ladder of embedding dimensions. Series without recurrent
//! diagonals, or too short to embed, report NaN instead of aborting.

use std::path::PathBuf;

use quann::envdyn::EnvSelection;
use quann::neuron::FiringUnits;
use rayon::prelude::*;
use rqa::{delay_embed, diagonal_profile, prob_full_recurrence, EmbeddingConfig, RadiusSpec};

use crate::config::{LagSpec, SweepSpec};
use crate::csvio::{fmt_f64, write_row, Sink};
use crate::exit::{CliError, CliResult};
use crate::runner::{build_env_coupling, kept_series, resolve_architecture};

pub struct Resolved {
    pub preset: Option<String>,
    pub arch: Option<PathBuf>,
    pub p: String,
    pub steps: usize,
    pub drop: usize,
    pub dims: Vec<usize>,
    pub lag: LagSpec,
    pub radii: RadiusSpec,
    pub env: EnvSelection,
    pub out: Option<PathBuf>,
}

fn scan_one(args: &Resolved, series: &[f64]) -> CliResult<Vec<f64>> {
    let lag = args.lag.resolve(series)?;
    let radii = args.radii.resolve(series)?;
    if radii.len() != 1 {
        return Err(CliError::usage(format!(
            "the probability scan needs exactly one radius, got {}",
            radii.len()
        )));
    }
    let mut row = Vec::with_capacity(args.dims.len());
    for &dim in &args.dims {
        let cfg = EmbeddingConfig::new(lag, dim)?;
        let value = match delay_embed(series, &cfg) {
            Err(_) => f64::NAN,
            Ok(emb) => {
                let profile = diagonal_profile(&emb, radii[0]);
                prob_full_recurrence(&profile).unwrap_or(f64::NAN)
            }
        };
        row.push(value);
    }
    Ok(row)
}

pub fn run(args: Resolved) -> CliResult<()> {
    let sweep = SweepSpec::parse(&args.p)?;
    let arch = resolve_architecture(args.preset.as_deref(), args.arch.as_ref())?;
    let coupling = build_env_coupling(&arch)?;
    let units = FiringUnits::unit_energy();

    let p_values = sweep.values();
    let rows: Vec<CliResult<Vec<f64>>> = p_values
        .par_iter()
        .map(|&p| {
            let series = kept_series(&coupling, p, &args.env, args.steps, args.drop, &units)?;
            // A flat series cannot scale radii by its deviation; report NaN
            // for the whole row rather than aborting the sweep.
            match scan_one(&args, &series) {
                Ok(row) => Ok(row),
                Err(e) if e.kind == crate::exit::ExitKind::Usage => Err(e),
                Err(_) => Ok(vec![f64::NAN; args.dims.len()]),
            }
        })
        .collect();

    let mut sink = Sink::create(args.out.as_deref())?;
    write_row(
        &mut sink,
        &["p".into(), "dim".into(), "probability".into()],
    )?;
    for (p, row) in p_values.iter().zip(rows) {
        let row = row?;
        for (dim, value) in args.dims.iter().zip(row) {
            write_row(&mut sink, &[fmt_f64(*p), dim.to_string(), fmt_f64(value)])?;
        }
    }
    sink.finish()
}
