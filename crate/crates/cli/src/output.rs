//! Deterministic CSV output: `\n` line endings, `.` decimal separator,
//! floats at 17 significant digits so identical configs produce identical
//! bytes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::CliError;

/// 17 significant digits, scientific notation.
pub fn fmt17(value: f64) -> String {
    format!("{value:.16e}")
}

pub enum Sink {
    Stdout(std::io::Stdout),
    File(BufWriter<File>, String),
}

impl Sink {
    pub fn open(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Sink::Stdout(std::io::stdout())),
            Some(p) => {
                let file = File::create(p)
                    .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))?;
                Ok(Sink::File(BufWriter::new(file), p.display().to_string()))
            }
        }
    }

    pub fn write_line(&mut self, line: &str) -> Result<(), CliError> {
        let io_result = match self {
            Sink::Stdout(out) => writeln!(out, "{line}"),
            Sink::File(writer, _) => writeln!(writer, "{line}"),
        };
        io_result.map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn finish(self) -> Result<(), CliError> {
        if let Sink::File(mut writer, path) = self {
            writer
                .flush()
                .map_err(|e| CliError::Io(format!("cannot flush {path}: {e}")))?;
        }
        Ok(())
    }
}
