//! State-file parsing and atomic report writing.

use std::fs;
use std::io::Write;
use std::path::Path;

use qbrach_core::{Complex, StateVector64};

use crate::records::StateRecord;
use crate::Failure;

/// How far the parsed norm may drift from 1 before we warn (or, under
/// `--strict`, refuse).
const NORM_SLACK: f64 = 1e-6;

/// Parse a state file, enforcing the documented invariants. Off-norm
/// states are rescaled with a warning on standard error unless `strict`.
pub fn read_state(path: &Path, strict: bool) -> Result<StateVector64, Failure> {
    let raw =
        fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    let record: StateRecord = serde_json::from_str(&raw)
        .map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    state_from_record(&record, strict, &path.display().to_string())
}

pub fn state_from_record(
    record: &StateRecord,
    strict: bool,
    origin: &str,
) -> Result<StateVector64, Failure> {
    if record.dim == 0 {
        return Err(Failure::parse(format!("{origin}: dim must be positive")));
    }
    if record.re.len() != record.dim || record.im.len() != record.dim {
        return Err(Failure::parse(format!(
            "{origin}: expected {} amplitudes, got {} re / {} im",
            record.dim,
            record.re.len(),
            record.im.len()
        )));
    }
    let amplitudes: Vec<Complex<f64>> = record
        .re
        .iter()
        .zip(&record.im)
        .map(|(&re, &im)| Complex::new(re, im))
        .collect();
    let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !norm.is_finite() {
        return Err(Failure::parse(format!("{origin}: non-finite amplitudes")));
    }
    if norm == 0.0 {
        return Err(Failure::parse(format!("{origin}: zero state vector")));
    }
    if (norm - 1.0).abs() > NORM_SLACK {
        if strict {
            return Err(Failure::parse(format!(
                "{origin}: norm {norm} is not 1 within {NORM_SLACK:e} (strict mode)"
            )));
        }
        eprintln!("warning: {origin}: norm {norm} differs from 1; normalizing");
    }
    StateVector64::normalized(amplitudes).map_err(|e| Failure::parse(format!("{origin}: {e}")))
}

/// Write `contents` to `out`, where `-` means standard output. File writes
/// go through a temporary file in the destination directory and are renamed
/// into place, so a failed run never leaves a partial report behind.
pub fn write_output(out: &str, contents: &str) -> Result<(), Failure> {
    if out == "-" {
        print!("{contents}");
        return Ok(());
    }
    let path = Path::new(out);
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| Failure::internal(format!("{}: {e}", path.display())))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| Failure::internal(format!("{}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| Failure::internal(format!("{}: {e}", path.display())))?;
    Ok(())
}

/// Serialize a report followed by a trailing newline.
pub fn to_json_document<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    let mut doc = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::internal(format!("serialization failed: {e}")))?;
    doc.push('\n');
    Ok(doc)
}
