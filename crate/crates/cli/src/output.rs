use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

pub enum Outcome {
    Pass,
    PropertyFailure(String),
}

impl Outcome {
    pub fn from_check(pass: bool, what: &str) -> Self {
        if pass {
            Self::Pass
        } else {
            Self::PropertyFailure(what.to_string())
        }
    }
}

/// 3 for file-system errors, 2 for everything else (invalid input).
pub fn exit_code(e: &anyhow::Error) -> u8 {
    let io = e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>().is_some()
            || c.downcast_ref::<csv::Error>().is_some_and(|ce| matches!(ce.kind(), csv::ErrorKind::Io(_)))
            || c.downcast_ref::<OutputError>().is_some()
    });
    if io {
        3
    } else {
        2
    }
}

#[derive(Debug)]
pub struct OutputError(pub String);

impl std::fmt::Display for OutputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for OutputError {}

/// Writes into `<out>.partial` and renames onto `<out>` in [`Staged::commit`], so a failed
/// run leaves no outputs behind.
pub struct Staged {
    target: PathBuf,
    dir: PathBuf,
    committed: bool,
}

impl Staged {
    pub fn new(target: &Path, config: &serde_json::Value) -> Result<Self> {
        if target.exists() && !target.join("config.json").is_file() {
            return Err(OutputError(format!("{} exists and is not a kf output directory", target.display())).into());
        }
        let mut name = target.file_name().context("output path has no final component")?.to_os_string();
        name.push(".partial");
        let dir = target.with_file_name(name);
        if dir.exists() {
            fs::remove_dir_all(&dir).with_context(|| format!("clearing {}", dir.display()))?;
        }
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        let staged = Self { target: target.to_path_buf(), dir, committed: false };
        staged.json("config.json", config)?;
        Ok(staged)
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(self.dir.join(name), text).with_context(|| format!("writing {name}"))
    }

    pub fn csv(&self, name: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
        let mut w = csv::Writer::from_path(self.dir.join(name)).with_context(|| format!("writing {name}"))?;
        w.write_record(header)?;
        for r in rows {
            w.write_record(&r)?;
        }
        w.flush().with_context(|| format!("writing {name}"))?;
        Ok(())
    }

    pub fn commit(mut self) -> Result<()> {
        if self.target.exists() {
            fs::remove_dir_all(&self.target).with_context(|| format!("replacing {}", self.target.display()))?;
        }
        fs::rename(&self.dir, &self.target).with_context(|| format!("moving output to {}", self.target.display()))?;
        self.committed = true;
        Ok(())
    }
}

impl Drop for Staged {
    fn drop(&mut self) {
        if !self.committed {
            let _ = fs::remove_dir_all(&self.dir);
        }
    }
}

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn ensure_positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        bail!(kaczmarz_core::Error::InvalidArgument(format!("{name} must be positive")));
    }
    Ok(())
}
