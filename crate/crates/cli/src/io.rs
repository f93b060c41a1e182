use std::fs;
use std::io::Write;
use std::path::Path;

use qsprep::SparseState64;

use crate::{CliResult, Failure};

/// Writes through a temporary file in the destination directory, then
/// renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| Failure::Input(format!("cannot write to {}: {e}", dir.display())))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Failure::Input(format!("cannot write {}: {}", path.display(), e.error)))?;
    Ok(())
}

pub fn read_to_string(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

/// Loads a sparse state in JSON or text form.
pub fn read_state(path: &Path) -> CliResult<SparseState64> {
    let text = read_to_string(path)?;
    SparseState64::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Writes `contents` to `path`, or to stdout when there is no path.
pub fn emit(path: Option<&Path>, contents: &str) -> CliResult<()> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}
