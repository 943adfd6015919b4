use std::io::Read;
use std::path::Path;

use l2lab::SimplicialComplex;
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Reads a file, or stdin for `-`.
pub fn read_text(path: &str) -> CliResult<String> {
    let io = |source| CliError::Io { path: path.to_string(), source };
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

pub fn parse<T: DeserializeOwned>(path: &str, text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|source| CliError::Json { path: path.to_string(), source })
}

pub fn load<T: DeserializeOwned>(path: &str) -> CliResult<T> {
    parse(path, &read_text(path)?)
}

pub fn load_value(path: &str) -> CliResult<Value> {
    load(path)
}

pub fn load_complex(path: &str) -> CliResult<SimplicialComplex> {
    load(path)
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Splits `a,b,c` into labels, dropping blanks.
pub fn labels(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect()
}
