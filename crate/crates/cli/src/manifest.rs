use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct InputHash {
    pub path: PathBuf,
    pub sha256: String,
}

/// Record of one command invocation, written next to its primary output.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub flags: serde_json::Value,
    pub seed: Option<u64>,
    pub inputs: Vec<InputHash>,
    pub outputs: Vec<PathBuf>,
    pub wall_clock_secs: f64,
    pub iterations: Option<usize>,
    pub exit_code: i32,
    #[serde(skip)]
    started: Option<Instant>,
}

impl RunManifest {
    pub fn start(command: &str, flags: &impl Serialize, seed: Option<u64>) -> Self {
        Self {
            command: command.to_string(),
            flags: serde_json::to_value(flags).unwrap_or(serde_json::Value::Null),
            seed,
            inputs: Vec::new(),
            outputs: Vec::new(),
            wall_clock_secs: 0.0,
            iterations: None,
            exit_code: 0,
            started: Some(Instant::now()),
        }
    }

    pub fn input(&mut self, path: &Path) -> io::Result<()> {
        let sha256 = sha256_file(path)?;
        self.inputs.push(InputHash {
            path: path.to_path_buf(),
            sha256,
        });
        Ok(())
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    /// Writes to `explicit`, else next to the first output, else stderr.
    pub fn finish(mut self, explicit: Option<&Path>, exit_code: i32) -> io::Result<()> {
        self.exit_code = exit_code;
        if let Some(t) = self.started {
            self.wall_clock_secs = t.elapsed().as_secs_f64();
        }
        let mut json = serde_json::to_string_pretty(&self).map_err(io::Error::other)?;
        json.push('\n');
        let target = explicit
            .map(Path::to_path_buf)
            .or_else(|| self.outputs.first().map(|p| sibling(p, "manifest.json")));
        match target {
            Some(path) => fs::write(path, json),
            None => {
                eprint!("{json}");
                Ok(())
            }
        }
    }
}

pub fn sha256_file(path: &Path) -> io::Result<String> {
    let mut file = fs::File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hasher.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

/// `dir/model.json` + `codebook.tsv` -> `dir/model.codebook.tsv`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}
