//! CSV writing with embedded schema version comments.
//!
//! Every file starts with `# schema=<id>` followed by the header row; rows
//! contain no timestamps, so identical runs produce identical bytes.

use std::io::Write;
use std::path::Path;

use crate::CliError;

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Creates or truncates `path` and writes schema comment, header, and rows.
pub fn write_fresh(path: &Path, schema: &str, header: &str, rows: &[String]) -> Result<(), CliError> {
    let mut file = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
    writeln!(file, "# schema={schema}").map_err(|e| io_err(path, e))?;
    writeln!(file, "{header}").map_err(|e| io_err(path, e))?;
    for row in rows {
        writeln!(file, "{row}").map_err(|e| io_err(path, e))?;
    }
    Ok(())
}

/// Appends rows, writing the schema comment and header first when the file
/// does not exist or is empty.
pub fn append(path: &Path, schema: &str, header: &str, rows: &[String]) -> Result<(), CliError> {
    let needs_header = match std::fs::metadata(path) {
        Ok(meta) => meta.len() == 0,
        Err(_) => true,
    };
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| io_err(path, e))?;
    if needs_header {
        writeln!(file, "# schema={schema}").map_err(|e| io_err(path, e))?;
        writeln!(file, "{header}").map_err(|e| io_err(path, e))?;
    }
    for row in rows {
        writeln!(file, "{row}").map_err(|e| io_err(path, e))?;
    }
    Ok(())
}
