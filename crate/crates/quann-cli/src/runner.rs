//! Shared experiment machinery: architecture resolution, environment
//! coupling, and kept mean-energy series.

use std::path::PathBuf;

use quann::architecture::{
    default_phase_tol, distinct_operator_set, example_network, Architecture,
};
use quann::envdyn::{pure_branch_mean_energy, EnvCoupling, EnvSelection, InitialCondition};
use quann::neuron::FiringUnits;

use crate::archfile::load_architecture;
use crate::exit::{CliError, CliResult};

/// Resolves `--preset` / `--arch` into an architecture. The default is the
/// built-in three-neuron network (`example3`).
pub fn resolve_architecture(
    preset: Option<&str>,
    arch: Option<&PathBuf>,
) -> CliResult<Architecture> {
    match (preset, arch) {
        (Some(_), Some(_)) => Err(CliError::usage("give either --preset or --arch, not both")),
        (Some("example3"), None) | (None, None) => Ok(example_network()),
        (Some(other), None) => Err(CliError::usage(format!(
            "unknown preset `{other}` (available: example3)"
        ))),
        (None, Some(path)) => load_architecture(path),
    }
}

/// Builds the environment coupling of an architecture: all activation orders
/// distinct up to a global phase, in lexicographic order.
pub fn build_env_coupling(arch: &Architecture) -> CliResult<EnvCoupling> {
    let set = distinct_operator_set(arch, default_phase_tol())?;
    Ok(EnvCoupling::from_operator_set(&set)?)
}

/// Permutation labels of the coupling's branches, written right to left so
/// the first-acting operator appears rightmost.
pub fn branch_labels(arch: &Architecture) -> CliResult<Vec<String>> {
    let set = distinct_operator_set(arch, default_phase_tol())?;
    Ok(set.members().iter().map(|m| m.label()).collect())
}

/// Runs `steps` iterations and returns the recorded values after dropping
/// the first `drop` (the run records steps+1 values including the
/// pre-evolution expectation).
pub fn kept_series(
    coupling: &EnvCoupling,
    p: f64,
    env: &EnvSelection,
    steps: usize,
    drop: usize,
    units: &FiringUnits,
) -> CliResult<Vec<f64>> {
    if steps <= drop {
        return Err(CliError::usage(format!(
            "steps ({steps}) must exceed the transient drop ({drop})"
        )));
    }
    let ic = InitialCondition::new(p, env.clone())?;
    let series = pure_branch_mean_energy(coupling, &ic, steps, units)?;
    Ok(series.into_values().split_off(drop))
}
