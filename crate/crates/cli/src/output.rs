use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use geomspin::Mat4;
use serde::Serialize;

/// Full-precision float for CSV cells (17 significant digits).
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Complex matrix as nested `[re, im]` pairs.
pub fn matrix_json(m: &Mat4) -> Vec<Vec<[f64; 2]>> {
    (0..4).map(|i| (0..4).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub struct Sink {
    dir: PathBuf,
}

impl Sink {
    pub fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
        Ok(Self { dir: dir.to_path_buf() })
    }

    /// Writes through a temporary file in the same directory, then renames.
    pub fn write(&self, name: &str, contents: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).with_context(|| format!("cannot create temporary file in {}", self.dir.display()))?;
        tmp.write_all(contents).with_context(|| format!("cannot write {}", path.display()))?;
        tmp.persist(&path).with_context(|| format!("cannot move output into place at {}", path.display()))?;
        println!("wrote {}", path.display());
        Ok(path)
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }
}
