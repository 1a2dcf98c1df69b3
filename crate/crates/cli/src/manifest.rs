use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use sfstkit::format::sha256_hex;
use sfstkit::rng::RNG_ALGORITHM;

use crate::error::{CliError, Result};

/// `key=value` record of one command run, written next to its primary output.
pub struct Manifest {
    command: &'static str,
    argv: Vec<String>,
    seed: Option<u64>,
    config: Vec<(String, String)>,
    files: Vec<(String, PathBuf, String)>,
    results: Vec<(String, String)>,
    started: Instant,
}

impl Manifest {
    pub fn new(command: &'static str, argv: &[String], seed: Option<u64>) -> Self {
        Manifest {
            command,
            argv: argv.to_vec(),
            seed,
            config: Vec::new(),
            files: Vec::new(),
            results: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn config(&mut self, kv: impl IntoIterator<Item = (String, String)>) {
        self.config.extend(kv);
    }

    pub fn result(&mut self, key: &str, value: impl ToString) {
        self.results.push((key.to_string(), value.to_string()));
    }

    /// Reads a file and records its hash under `input.<name>`.
    pub fn read(&mut self, name: &str, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.files
            .push((format!("input.{name}"), path.to_path_buf(), sha256_hex(text.as_bytes())));
        Ok(text)
    }

    /// Writes a file and records its hash under `output.<name>`.
    pub fn write(&mut self, name: &str, path: &Path, text: &str) -> Result<()> {
        write_file(path, text)?;
        self.files
            .push((format!("output.{name}"), path.to_path_buf(), sha256_hex(text.as_bytes())));
        Ok(())
    }

    /// Writes the manifest to `<primary>.manifest`.
    pub fn finish(self, primary: &Path) -> Result<()> {
        let mut s = String::new();
        let _ = writeln!(s, "command={}", self.command);
        let _ = writeln!(s, "version={}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(s, "args={}", self.argv.join(" "));
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "seed={seed}");
            let _ = writeln!(s, "rng={RNG_ALGORITHM}");
        }
        for (k, v) in &self.config {
            let _ = writeln!(s, "config.{k}={v}");
        }
        for (k, path, hash) in &self.files {
            let _ = writeln!(s, "{k}={}", path.display());
            let _ = writeln!(s, "{k}.sha256={hash}");
        }
        for (k, v) in &self.results {
            let _ = writeln!(s, "result.{k}={v}");
        }
        let _ = writeln!(s, "wall_time_secs={:.6}", self.started.elapsed().as_secs_f64());
        let mut path = primary.as_os_str().to_owned();
        path.push(".manifest");
        write_file(Path::new(&path), &s)
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
