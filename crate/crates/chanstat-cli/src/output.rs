//! Report emission: format selection and atomic file writes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Joins `out/<stem>.<ext>` for a report file.
pub fn report_path(out: &Path, stem: &str, format: Format) -> PathBuf {
    out.join(format!("{stem}.{}", format.extension()))
}

/// Writes a file atomically: the content lands in a temporary file in the
/// same directory and is renamed over the target, so a crashed or killed
/// run never leaves a truncated report behind.
pub fn write_atomic(
    path: &Path,
    write: impl FnOnce(&mut dyn Write) -> anyhow::Result<()>,
) -> anyhow::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    write(tmp.as_file_mut())?;
    tmp.as_file_mut().flush()?;
    tmp.persist(path)
        .with_context(|| format!("replacing {}", path.display()))?;
    Ok(())
}

/// Serializes one row set as pretty JSON or CSV with a header line.
///
/// Both forms carry identical values: report rows round their cells before
/// any serializer runs.
pub fn write_rows<T: Serialize>(
    path: &Path,
    format: Format,
    rows: &[T],
    csv_header: &[&str],
) -> anyhow::Result<()> {
    write_atomic(path, |w| match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, rows)?;
            w.write_all(b"\n")?;
            Ok(())
        }
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(w);
            for row in rows {
                wtr.serialize(row)?;
            }
            if rows.is_empty() {
                wtr.write_record(csv_header)?;
            }
            wtr.flush()?;
            Ok(())
        }
    })
    .with_context(|| format!("writing {}", path.display()))
}
