use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use kaczmarz_core::ifs::{IfsDescriptor, IfsSystem, BUILTIN_NAMES};
use kaczmarz_core::Error;

/// A built-in IFS name or a path to a JSON descriptor.
pub fn ifs_system(source: &str) -> Result<IfsSystem> {
    if BUILTIN_NAMES.contains(&source) {
        return Ok(IfsSystem::builtin(source)?);
    }
    let path = Path::new(source);
    if !path.exists() && !source.contains('.') && !source.contains('/') {
        return Err(Error::InvalidArgument(format!("unknown system {source:?}; built-ins are {}", BUILTIN_NAMES.join(", "))).into());
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {source}"))?;
    let desc: IfsDescriptor = serde_json::from_str(&text).with_context(|| format!("parsing {source}"))?;
    Ok(IfsSystem::new(desc)?)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Headerless CSV of real numbers.
pub fn read_real_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.with_context(|| format!("parsing {}", path.display()))?;
        let row = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| Error::InvalidArgument(format!("{}: {f:?} is not a number", path.display()))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Comma-separated numbers, e.g. `0.5,0.5`.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| Error::InvalidArgument(format!("{t:?} in {s:?} is not a number")).into()))
        .collect()
}
