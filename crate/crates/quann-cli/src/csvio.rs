//! CSV output: comma-separated, header row, LF line endings, floats at full
//! round-trip precision (17 significant digits).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::exit::CliResult;

/// Formats a float with 17 significant digits so the decimal round-trips to
/// the identical bit pattern. NaN renders as `NaN`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub enum Sink {
    Stdout(io::Stdout),
    File(BufWriter<File>),
}

impl Sink {
    pub fn create(path: Option<&Path>) -> CliResult<Self> {
        match path {
            None => Ok(Sink::Stdout(io::stdout())),
            Some(p) => Ok(Sink::File(BufWriter::new(File::create(p)?))),
        }
    }

    pub fn writer(&mut self) -> &mut dyn Write {
        match self {
            Sink::Stdout(s) => s,
            Sink::File(f) => f,
        }
    }

    pub fn finish(self) -> CliResult<()> {
        if let Sink::File(mut f) = self {
            f.flush()?;
        }
        Ok(())
    }
}

pub fn write_row(sink: &mut Sink, fields: &[String]) -> CliResult<()> {
    let line = fields.join(",");
    writeln!(sink.writer(), "{line}")?;
    Ok(())
}
