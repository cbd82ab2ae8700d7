//! Recurrence statistics of the mean-energy series, in three modes:
//! a per-radius summary sweep, a per-environment-eigenstate comparison, and
//! a sequential-epoch resilience analysis with a persistent-line inventory.

use std::collections::BTreeMap;
use std::path::PathBuf;

use quann::envdyn::EnvSelection;
use quann::neuron::FiringUnits;
use rqa::{
    delay_embed, full_line_inventory, multi_radius_profiles, EmbeddingConfig, RadiusSpec,
};

use crate::config::LagSpec;
use crate::csvio::{fmt_f64, write_row, Sink};
use crate::exit::{CliError, CliResult};
use crate::runner::{branch_labels, build_env_coupling, kept_series, resolve_architecture};

pub enum Mode {
    RadiusSweep,
    PerEigenstate,
    Epochs(usize),
}

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
    pub mode: Mode,
    pub out: Option<PathBuf>,
    pub out_lines: Option<PathBuf>,
    pub out_gaps: Option<PathBuf>,
}

fn single_radius(spec: &RadiusSpec, series: &[f64]) -> CliResult<f64> {
    let radii = spec.resolve(series)?;
    if radii.len() != 1 {
        return Err(CliError::usage(format!(
            "this mode needs exactly one radius, got {}",
            radii.len()
        )));
    }
    Ok(radii[0])
}

fn radius_sweep(args: &Resolved) -> CliResult<()> {
    let arch = resolve_architecture(args.preset.as_deref(), args.arch.as_ref())?;
    let coupling = build_env_coupling(&arch)?;
    let units = FiringUnits::unit_energy();
    let series = kept_series(&coupling, args.p, &args.env, args.steps, args.drop, &units)?;
    let lag = args.lag.resolve(&series)?;
    let radii = args.radii.resolve(&series)?;
    let sigma_multiples: Option<Vec<f64>> = match &args.radii {
        RadiusSpec::SigmaRange { start, step, .. } => {
            Some((0..radii.len()).map(|i| start + *step * i as f64).collect())
        }
        RadiusSpec::Absolute(_) => None,
    };
    let emb = delay_embed(&series, &EmbeddingConfig::new(lag, args.dim)?)?;
    let profiles = multi_radius_profiles(&emb, &radii);

    let mut sink = Sink::create(args.out.as_deref())?;
    write_row(
        &mut sink,
        &[
            "delta".into(),
            "delta_sigma".into(),
            "max_pct".into(),
            "min_pct".into(),
            "mean_pct".into(),
            "median_pct".into(),
            "stddev_pct".into(),
            "full_lines".into(),
        ],
    )?;
    for (i, profile) in profiles.iter().enumerate() {
        let summary = full_line_inventory(profile);
        write_row(
            &mut sink,
            &[
                fmt_f64(radii[i]),
                sigma_multiples
                    .as_ref()
                    .map(|m| fmt_f64(m[i]))
                    .unwrap_or_default(),
                fmt_f64(summary.max_pct),
                fmt_f64(summary.min_pct),
                fmt_f64(summary.mean_pct),
                fmt_f64(summary.median_pct),
                fmt_f64(summary.stddev_pct),
                summary.full_line_count().to_string(),
            ],
        )?;
    }
    sink.finish()
}

fn per_eigenstate(args: &Resolved) -> CliResult<()> {
    let arch = resolve_architecture(args.preset.as_deref(), args.arch.as_ref())?;
    let coupling = build_env_coupling(&arch)?;
    let labels = branch_labels(&arch)?;
    let units = FiringUnits::unit_energy();

    let mut sink = Sink::create(args.out.as_deref())?;
    write_row(
        &mut sink,
        &[
            "env_index".into(),
            "permutation".into(),
            "full_lines".into(),
            "mean_pct".into(),
        ],
    )?;
    for k in 1..=coupling.env_dim() {
        let series = kept_series(
            &coupling,
            args.p,
            &EnvSelection::Eigenstate(k),
            args.steps,
            args.drop,
            &units,
        )?;
        let lag = args.lag.resolve(&series)?;
        let delta = single_radius(&args.radii, &series)?;
        let emb = delay_embed(&series, &EmbeddingConfig::new(lag, args.dim)?)?;
        let profile = rqa::diagonal_profile(&emb, delta);
        let summary = full_line_inventory(&profile);
        write_row(
            &mut sink,
            &[
                k.to_string(),
                labels[k - 1].clone(),
                summary.full_line_count().to_string(),
                fmt_f64(summary.mean_pct),
            ],
        )?;
    }
    sink.finish()
}

fn epochs(args: &Resolved, epoch_count: usize) -> CliResult<()> {
    if epoch_count < 1 {
        return Err(CliError::usage("at least one epoch is required"));
    }
    let arch = resolve_architecture(args.preset.as_deref(), args.arch.as_ref())?;
    let coupling = build_env_coupling(&arch)?;
    let units = FiringUnits::unit_energy();
    let series = kept_series(&coupling, args.p, &args.env, args.steps, args.drop, &units)?;
    if series.len() % epoch_count != 0 {
        return Err(CliError::usage(format!(
            "{} kept values do not divide into {epoch_count} epochs",
            series.len()
        )));
    }
    let epoch_len = series.len() / epoch_count;
    let lag = args.lag.resolve(&series)?;
    // One radius for every epoch; sigma-scaled radii use the full kept
    // series' deviation so epochs stay comparable.
    let delta = single_radius(&args.radii, &series)?;

    let mut sink = Sink::create(args.out.as_deref())?;
    write_row(
        &mut sink,
        &[
            "epoch".into(),
            "mean_pct".into(),
            "median_pct".into(),
            "stddev_pct".into(),
            "full_lines".into(),
        ],
    )?;
    let mut persistent: Option<Vec<usize>> = None;
    let mut diagonals_per_epoch = 0usize;
    for e in 0..epoch_count {
        let chunk = &series[e * epoch_len..(e + 1) * epoch_len];
        let emb = delay_embed(chunk, &EmbeddingConfig::new(lag, args.dim)?)?;
        let profile = rqa::diagonal_profile(&emb, delta);
        diagonals_per_epoch = profile.diagonal_count();
        let summary = full_line_inventory(&profile);
        write_row(
            &mut sink,
            &[
                (e + 1).to_string(),
                fmt_f64(summary.mean_pct),
                fmt_f64(summary.median_pct),
                fmt_f64(summary.stddev_pct),
                summary.full_line_count().to_string(),
            ],
        )?;
        let lines = summary.full_lines;
        persistent = Some(match persistent {
            None => lines,
            Some(prev) => prev.into_iter().filter(|t| lines.contains(t)).collect(),
        });
    }
    sink.finish()?;

    let persistent = persistent.unwrap_or_default();
    let gaps: Vec<usize> = persistent.windows(2).map(|w| w[1] - w[0]).collect();
    eprintln!("diagonals_per_epoch={diagonals_per_epoch}");
    eprintln!("persistent_full_lines={}", persistent.len());
    eprintln!(
        "persistent_share_pct={}",
        fmt_f64(100.0 * persistent.len() as f64 / diagonals_per_epoch as f64)
    );
    if let (Some(&first), Some(&last)) = (persistent.first(), persistent.last()) {
        eprintln!("min_period={first}");
        eprintln!("max_period={last}");
    }
    if !gaps.is_empty() {
        eprintln!("min_distance={}", gaps.iter().min().unwrap());
        eprintln!("max_distance={}", gaps.iter().max().unwrap());
        eprintln!(
            "mean_distance={}",
            fmt_f64(gaps.iter().sum::<usize>() as f64 / gaps.len() as f64)
        );
    }

    if let Some(path) = &args.out_lines {
        let mut lines_sink = Sink::create(Some(path))?;
        write_row(&mut lines_sink, &["theta".into()])?;
        for theta in &persistent {
            write_row(&mut lines_sink, &[theta.to_string()])?;
        }
        lines_sink.finish()?;
    }
    if let Some(path) = &args.out_gaps {
        let mut tally: BTreeMap<usize, usize> = BTreeMap::new();
        for gap in &gaps {
            *tally.entry(*gap).or_insert(0) += 1;
        }
        let mut gaps_sink = Sink::create(Some(path))?;
        write_row(&mut gaps_sink, &["distance".into(), "count".into()])?;
        for (distance, count) in tally {
            write_row(&mut gaps_sink, &[distance.to_string(), count.to_string()])?;
        }
        gaps_sink.finish()?;
    }
    Ok(())
}

pub fn run(args: Resolved) -> CliResult<()> {
    match args.mode {
        Mode::RadiusSweep => radius_sweep(&args),
        Mode::PerEigenstate => per_eigenstate(&args),
        Mode::Epochs(n) => epochs(&args, n),
    }
}
