//! Boolean-function representation: load a truth table, run the two-stage
//! network from the all-|+⟩ start, dump amplitudes, and verify the input
//! register represents the function with the output register restored.

use std::path::PathBuf;

use quann::feedforward::{
    boolean_initial_state, build_boolean_representation, two_stage, BooleanMap,
};
use quann::qcore::{Cplx, StateVector};

use crate::config::{bits_to_index, index_to_pattern, parse_bits};
use crate::csvio::{fmt_f64, write_row, Sink};
use crate::exit::{CliError, CliResult};

pub const VERIFY_TOL: f64 = 1e-10;

pub struct Resolved {
    pub n: usize,
    pub m: usize,
    pub table: PathBuf,
    pub out: Option<PathBuf>,
}

/// Parses a truth-table file with one `h,g(h)` row of bit strings per line.
/// Every input string must appear exactly once.
fn load_table(path: &PathBuf, n: usize, m: usize) -> CliResult<BooleanMap> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    let rows = 1usize << n;
    let mut table = vec![None::<usize>; rows];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (h_text, g_text) = line.split_once(',').ok_or_else(|| {
            CliError::data(format!(
                "{}:{}: expected `input,output`",
                path.display(),
                lineno + 1
            ))
        })?;
        let h_bits = parse_bits(h_text.trim()).map_err(|e| CliError::data(e.message))?;
        let g_bits = parse_bits(g_text.trim()).map_err(|e| CliError::data(e.message))?;
        if h_bits.len() != n || g_bits.len() != m {
            return Err(CliError::data(format!(
                "{}:{}: expected {n}-bit input and {m}-bit output",
                path.display(),
                lineno + 1
            )));
        }
        let h = bits_to_index(&h_bits);
        if table[h].is_some() {
            return Err(CliError::data(format!(
                "duplicate table row for input {}",
                index_to_pattern(h, n)
            )));
        }
        table[h] = Some(bits_to_index(&g_bits));
    }
    let complete: Option<Vec<usize>> = table.into_iter().collect();
    let values = complete.ok_or_else(|| {
        CliError::data(format!("table does not cover all {rows} input strings"))
    })?;
    BooleanMap::new(n, m, values).map_err(|e| CliError::data(e.to_string()))
}

/// Independent construction of the expected final state: equally weighted
/// |h g(h)⟩ on the input register, |+⟩ register untouched.
fn expected_state(g: &BooleanMap) -> StateVector {
    let (n, m) = (g.n_in(), g.m_out());
    let amp = Cplx::new(
        1.0 / ((1usize << n) as f64).sqrt() / ((1usize << m) as f64).sqrt(),
        0.0,
    );
    let mut amps = vec![Cplx::ZERO; 1 << (n + 2 * m)];
    for h in 0..1usize << n {
        let input_index = (h << m) | g.value(h);
        for y in 0..1usize << m {
            amps[(input_index << m) | y] = amp;
        }
    }
    StateVector::new(n + 2 * m, amps).expect("expected state is normalized")
}

pub fn run(args: Resolved) -> CliResult<()> {
    if args.n < 1 || args.m < 1 {
        return Err(CliError::usage("--n and --m must be at least 1"));
    }
    let g = load_table(&args.table, args.n, args.m)?;
    let (net, spec) = build_boolean_representation(&g)?;
    let final_state = two_stage(&net, &spec, &boolean_initial_state(args.n, args.m))?;

    let width = args.n + 2 * args.m;
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
                index_to_pattern(index, width),
                fmt_f64(amp.re),
                fmt_f64(amp.im),
            ],
        )?;
    }
    sink.finish()?;

    let deviation = final_state.max_abs_diff(&expected_state(&g));
    if deviation < VERIFY_TOL {
        eprintln!("PASS max_deviation={}", fmt_f64(deviation));
        Ok(())
    } else {
        eprintln!("FAIL max_deviation={}", fmt_f64(deviation));
        Err(CliError::verification(format!(
            "final state deviates from the function representation by {deviation:e}"
        )))
    }
}
