use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::Failure;

/// Seventeen significant digits, enough to recover every `f64` exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_rows<I, R>(path: Option<&Path>, header: Option<&[&str]>, rows: I) -> Result<(), Failure>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(sink(path)?);
    if let Some(h) = header {
        w.write_record(h).map_err(Failure::io)?;
    }
    for row in rows {
        w.write_record(row).map_err(Failure::io)?;
    }
    w.flush().map_err(Failure::io)
}

pub fn write_json<T: serde::Serialize>(path: Option<&Path>, value: &T) -> Result<(), Failure> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(Failure::io)?;
    writeln!(w).map_err(Failure::io)?;
    w.flush().map_err(Failure::io)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let file = File::open(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_reader(io::BufReader::new(file)).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}
