//! Plain-text reports of `key: value` lines grouped under `# section` headers.

use std::fmt::{Display, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use olg_bubbles::export;

use crate::config::RunConfig;

#[derive(Debug, Default)]
pub struct Report {
    text: String,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn section(&mut self, name: &str) -> &mut Self {
        if !self.text.is_empty() {
            self.text.push('\n');
        }
        writeln!(self.text, "# {name}").unwrap();
        self
    }

    pub fn kv(&mut self, key: &str, value: impl Display) -> &mut Self {
        writeln!(self.text, "{key}: {value}").unwrap();
        self
    }

    /// Shortest exact decimal, as in the CSV files.
    pub fn num(&mut self, key: &str, x: f64) -> &mut Self {
        self.kv(key, export::num(x))
    }

    pub fn opt(&mut self, key: &str, x: Option<f64>) -> &mut Self {
        match x {
            Some(x) => self.num(key, x),
            None => self.kv(key, "none"),
        }
    }

    /// Pre-formatted lines, copied verbatim.
    pub fn raw(&mut self, text: &str) -> &mut Self {
        self.text.push_str(text);
        if !text.ends_with('\n') {
            self.text.push('\n');
        }
        self
    }

    /// Closes the report with the resolved configuration.
    pub fn finish(mut self, cfg: &RunConfig) -> String {
        self.text.push('\n');
        self.text.push_str(&cfg.render());
        self.text
    }
}

/// The output directory, created if missing.
pub fn out_dir(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

pub fn write_file(dir: &Path, name: &str, contents: &[u8]) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Creates `dir/name` for a streaming writer.
pub fn create_file(dir: &Path, name: &str) -> Result<(PathBuf, std::io::BufWriter<fs::File>)> {
    let path = dir.join(name);
    let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok((path, std::io::BufWriter::new(file)))
}
