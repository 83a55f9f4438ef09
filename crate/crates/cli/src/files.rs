use std::fs;
use std::path::Path;

use toepfactor::factorize::ToeplitzDecomposition;
use toepfactor::io::{self, AnyDecomposition, AnyMatrix, MatrixScalar};

use crate::error::{CliError, EX_CANTCREAT, EX_NOINPUT};

/// Name of the stream file inside a decomposition directory.
pub const DECOMP_FILE: &str = "decomposition.toepdecomp";

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::new(EX_NOINPUT, format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::new(EX_CANTCREAT, format!("{}: {e}", path.display())))
}

/// Parse errors are prefixed with the file name.
pub fn in_file<T>(path: &Path, r: toepfactor::error::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| {
        let mut c = CliError::from(e);
        c.msg = format!("{}: {}", path.display(), c.msg);
        c
    })
}

pub fn read_matrix(path: &Path) -> Result<AnyMatrix, CliError> {
    let text = read_text(path)?;
    in_file(path, io::parse_toepmat(&text))
}

/// Reads a `toepdecomp v1` stream from `path`, or from the stream file
/// inside it when `path` is a directory.
pub fn read_decomposition(path: &Path, tol: f64) -> Result<AnyDecomposition, CliError> {
    let file = if path.is_dir() { path.join(DECOMP_FILE) } else { path.to_path_buf() };
    let text = read_text(&file)?;
    in_file(&file, io::parse_toepdecomp(&text, tol))
}

/// Directory layout: the full stream plus one `toepmat v1` file per block
/// (`prefix.toepmat`, `factor_1.toepmat`, …).
pub fn write_decomposition_dir<S: MatrixScalar>(dir: &Path, d: &ToeplitzDecomposition<S>) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::new(EX_CANTCREAT, format!("{}: {e}", dir.display())))?;
    write_text(&dir.join(DECOMP_FILE), &io::write_toepdecomp(d))?;
    if let Some(p) = &d.prefix {
        write_text(&dir.join("prefix.toepmat"), &io::write_toepmat(p))?;
    }
    for (k, t) in d.factors.iter().enumerate() {
        write_text(&dir.join(format!("factor_{}.toepmat", k + 1)), &io::write_toepmat(&t.to_dense()))?;
    }
    Ok(())
}
