//! Binary PGM (P5, maxval 255) output for recurrence plots. Recurrent pairs
//! are black (0), everything else white (255); row 0 is the first embedded
//! point, columns run left to right in embedding order.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rqa::RecurrencePlot;

use crate::exit::CliResult;

pub fn write_pgm(path: &Path, plot: &RecurrencePlot) -> CliResult<()> {
    let size = plot.size();
    let mut out = BufWriter::new(File::create(path)?);
    write!(out, "P5\n{size} {size}\n255\n")?;
    let mut row = vec![0u8; size];
    for u in 0..size {
        for (v, cell) in row.iter_mut().enumerate() {
            *cell = if plot.is_recurrent(u, v) { 0 } else { 255 };
        }
        out.write_all(&row)?;
    }
    out.flush()?;
    Ok(())
}
