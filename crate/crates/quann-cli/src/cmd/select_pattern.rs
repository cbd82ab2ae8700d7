//! Firing-pattern selection: run the two-stage network for a target pattern,
//! dump the final amplitudes, and verify that the input register landed
//! exactly on the target.

use std::path::PathBuf;

use quann::feedforward::{build_firing_pattern_selector, selector_initial_state, two_stage};
use quann::qcore::{Cplx, StateVector};

use crate::config::{bits_to_index, index_to_pattern, parse_bits, Psi0Spec};
use crate::csvio::{fmt_f64, write_row, Sink};
use crate::exit::{CliError, CliResult};

pub const VERIFY_TOL: f64 = 1e-10;
const MAX_INPUT_NEURONS: usize = 5;

pub struct Resolved {
    pub q: String,
    pub m: Option<usize>,
    pub psi0: String,
    pub out: Option<PathBuf>,
}

fn load_state_file(path: &PathBuf, m: usize) -> CliResult<StateVector> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    let dim = 1usize << m;
    let mut amps = vec![Cplx::ZERO; dim];
    let mut seen = vec![false; dim];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(CliError::data(format!(
                "{}:{}: expected `index,re,im`",
                path.display(),
                lineno + 1
            )));
        }
        let index: usize = fields[0]
            .trim()
            .parse()
            .map_err(|_| CliError::data(format!("bad index on line {}", lineno + 1)))?;
        if index >= dim {
            return Err(CliError::data(format!(
                "index {index} out of range for {m} input neurons"
            )));
        }
        if seen[index] {
            return Err(CliError::data(format!("duplicate index {index}")));
        }
        seen[index] = true;
        let re: f64 = fields[1]
            .trim()
            .parse()
            .map_err(|_| CliError::data(format!("bad re on line {}", lineno + 1)))?;
        let im: f64 = fields[2]
            .trim()
            .parse()
            .map_err(|_| CliError::data(format!("bad im on line {}", lineno + 1)))?;
        amps[index] = Cplx::new(re, im);
    }
    StateVector::new(m, amps).map_err(|e| CliError::data(format!("bad state file: {e}")))
}

fn input_state(spec: &Psi0Spec, m: usize) -> CliResult<StateVector> {
    match spec {
        Psi0Spec::Uniform => Ok(StateVector::plus(m)),
        Psi0Spec::Basis(bits) => {
            if bits.len() != m {
                return Err(CliError::usage(format!(
                    "basis pattern has {} bits but the network has {m} input neurons",
                    bits.len()
                )));
            }
            Ok(StateVector::basis(m, bits_to_index(bits)))
        }
        Psi0Spec::File(path) => load_state_file(path, m),
    }
}

/// Independent construction of the expected final state: input register at
/// the target, output branch r⊕q carrying the amplitude of input pattern r.
fn expected_state(q_index: usize, m: usize, psi_input: &StateVector) -> StateVector {
    let dim = 1usize << m;
    let mut amps = vec![Cplx::ZERO; dim * dim];
    for r in 0..dim {
        amps[q_index * dim + (r ^ q_index)] += psi_input.amp(r);
    }
    StateVector::new(2 * m, amps).expect("expected state is normalized")
}

pub fn run(args: Resolved) -> CliResult<()> {
    let q = parse_bits(&args.q)?;
    if let Some(m) = args.m {
        if m != q.len() {
            return Err(CliError::usage(format!(
                "--m {} disagrees with the target pattern length {}",
                m,
                q.len()
            )));
        }
    }
    let m = q.len();
    if m > MAX_INPUT_NEURONS {
        return Err(CliError::resource(format!(
            "input layer of {m} neurons exceeds the limit of {MAX_INPUT_NEURONS}"
        )));
    }
    let psi0_spec = Psi0Spec::parse(&args.psi0)?;
    let psi_input = input_state(&psi0_spec, m)?;

    let (net, spec) = build_firing_pattern_selector(&q)?;
    let start = selector_initial_state(&psi_input)?;
    let final_state = two_stage(&net, &spec, &start)?;

    let mut sink = Sink::create(args.out.as_deref())?;
    write_row(
        &mut sink,
        &["basis_index".into(), "pattern".into(), "re".into(), "im".into()],
    )?;
    for (index, amp) in final_state.amps().iter().enumerate() {
        write_row(
            &mut sink,
            &[
                index.to_string(),
                index_to_pattern(index, 2 * m),
                fmt_f64(amp.re),
                fmt_f64(amp.im),
            ],
        )?;
    }
    sink.finish()?;

    let expected = expected_state(bits_to_index(&q), m, &psi_input);
    let deviation = final_state.max_abs_diff(&expected);
    if deviation < VERIFY_TOL {
        eprintln!("PASS max_deviation={}", fmt_f64(deviation));
        Ok(())
    } else {
        eprintln!("FAIL max_deviation={}", fmt_f64(deviation));
        Err(CliError::verification(format!(
            "final state deviates from the selected pattern by {deviation:e}"
        )))
    }
}
