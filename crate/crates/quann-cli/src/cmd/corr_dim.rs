//! Correlation-dimension grid: one slope estimate per (epoch, embedding
//! dimension) over sequential epochs of embedded points.

use std::path::PathBuf;

use quann::envdyn::EnvSelection;
use quann::neuron::FiringUnits;
use rqa::{correlation_dimension, EmbeddingConfig, RadiusSpec};

use crate::config::LagSpec;
use crate::csvio::{fmt_f64, write_row, Sink};
use crate::exit::{CliError, CliResult};
use crate::runner::{build_env_coupling, kept_series, resolve_architecture};

pub struct Resolved {
    pub preset: Option<String>,
    pub arch: Option<PathBuf>,
    pub p: f64,
    pub drop: usize,
    pub dims: Vec<usize>,
    pub epochs: usize,
    pub epoch_size: usize,
    pub lag: LagSpec,
    pub radii: RadiusSpec,
    pub env: EnvSelection,
    pub out: Option<PathBuf>,
}

pub fn run(args: Resolved) -> CliResult<()> {
    if args.epochs < 1 || args.epoch_size < 3 {
        return Err(CliError::usage(
            "need at least one epoch of at least three embedded points",
        ));
    }
    let dim_max = *args.dims.iter().max().expect("dims nonempty");
    let arch = resolve_architecture(args.preset.as_deref(), args.arch.as_ref())?;
    let coupling = build_env_coupling(&arch)?;
    let units = FiringUnits::unit_energy();

    // The lag may be automatic, and the raw length needed depends on it;
    // generate the base window first, resolve the lag, then extend. The
    // dynamics is deterministic, so the longer run shares the prefix.
    let base_len = args.epochs * args.epoch_size;
    let base = kept_series(
        &coupling,
        args.p,
        &args.env,
        args.drop + base_len,
        args.drop,
        &units,
    )?;
    let lag = args.lag.resolve(&base)?;
    let needed = args
        .epochs
        .checked_mul(args.epoch_size)
        .and_then(|v| v.checked_add((dim_max - 1) * lag))
        .ok_or_else(|| CliError::usage("epoch grid too large"))?;
    let series = kept_series(
        &coupling,
        args.p,
        &args.env,
        args.drop + needed - 1,
        args.drop,
        &units,
    )?;

    let mut sink = Sink::create(args.out.as_deref())?;
    write_row(
        &mut sink,
        &[
            "epoch".into(),
            "dim".into(),
            "d2".into(),
            "r_squared".into(),
            "p_value".into(),
            "std_err".into(),
        ],
    )?;
    for epoch in 0..args.epochs {
        for &dim in &args.dims {
            // This raw slice embeds to exactly epoch_size points, and those
            // points coincide with the epoch's slice of the full embedding.
            let start = epoch * args.epoch_size;
            let end = start + args.epoch_size + (dim - 1) * lag;
            let slice = &series[start..end];
            let radii = args.radii.resolve(slice)?;
            let cfg = EmbeddingConfig::new(lag, dim)?;
            let estimate = correlation_dimension(slice, &cfg, &radii)?;
            write_row(
                &mut sink,
                &[
                    (epoch + 1).to_string(),
                    dim.to_string(),
                    fmt_f64(estimate.d2),
                    fmt_f64(estimate.r_squared),
                    fmt_f64(estimate.p_value),
                    fmt_f64(estimate.std_err),
                ],
            )?;
        }
    }
    sink.finish()
}
