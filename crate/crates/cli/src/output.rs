use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

/// Where artifacts go and whether a JSON mirror is written next to each one.
pub struct Sink {
    pub out_dir: PathBuf,
    pub json: bool,
}

impl Sink {
    /// `out` if given, otherwise `default_name` inside the output directory.
    pub fn resolve(&self, out: Option<&Path>, default_name: &str) -> PathBuf {
        match out {
            Some(p) => p.to_path_buf(),
            None => self.out_dir.join(default_name),
        }
    }

    /// Writes the primary artifact, then the `.json` mirror when requested.
    /// Returns every path written.
    pub fn emit<F, T>(&self, path: &Path, write: F, mirror: &T) -> Result<Vec<PathBuf>>
    where
        F: FnOnce(&mut dyn Write) -> Result<()>,
        T: Serialize + ?Sized,
    {
        write_file(path, write)?;
        let mut paths = vec![path.to_path_buf()];
        if self.json {
            let json_path = path.with_extension("json");
            write_file(&json_path, |w| {
                serde_json::to_writer_pretty(&mut *w, mirror)?;
                writeln!(w)?;
                Ok(())
            })?;
            paths.push(json_path);
        }
        Ok(paths)
    }
}

fn write_file<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    write(&mut w)?;
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
