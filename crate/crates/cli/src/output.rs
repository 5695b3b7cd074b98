use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Serialize)]
struct InputRecord {
    arg: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    sha256: Option<String>,
}

#[derive(Serialize)]
struct OutputRecord {
    file: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a [String],
    seed: Option<u64>,
    inputs: &'a [InputRecord],
    outputs: Vec<OutputRecord>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Collects a command's results. Without an output directory the primary
/// JSON goes to stdout; with one, every artifact is written there together
/// with `manifest.json`.
pub struct Output {
    dir: Option<PathBuf>,
    command: Vec<String>,
    inputs: Vec<InputRecord>,
    seed: Option<u64>,
    files: Vec<(String, Vec<u8>)>,
}

impl Output {
    pub fn new(dir: Option<PathBuf>, command: Vec<String>) -> Self {
        Self { dir, command, inputs: Vec::new(), seed: None, files: Vec::new() }
    }

    /// Records an input argument, hashing it when it names a file.
    pub fn input(&mut self, arg: &str) {
        let sha256 = Path::new(arg).is_file().then(|| fs::read(arg).ok().map(|b| sha256_hex(&b))).flatten();
        self.inputs.push(InputRecord { arg: arg.to_string(), sha256 });
    }

    pub fn seed(&mut self, seed: u64) {
        self.seed = Some(seed);
    }

    pub fn has_dir(&self) -> bool {
        self.dir.is_some()
    }

    /// Adds an artifact, written only when an output directory is set.
    pub fn file(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    pub fn finish(mut self, name: &str, primary: &Value) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(primary).expect("JSON values serialize") + "\n";
        let Some(dir) = self.dir.take() else {
            print!("{text}");
            return Ok(());
        };
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        self.files.insert(0, (format!("{name}.json"), text.into_bytes()));
        let mut outputs = Vec::with_capacity(self.files.len());
        for (file, bytes) in &self.files {
            let path = dir.join(file);
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
            }
            fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
            outputs.push(OutputRecord { file: file.clone(), sha256: sha256_hex(bytes) });
        }
        let manifest = Manifest {
            tool: "homgibbs",
            version: env!("CARGO_PKG_VERSION"),
            command: &self.command,
            seed: self.seed,
            inputs: &self.inputs,
            outputs,
        };
        let path = dir.join("manifest.json");
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        eprintln!("wrote {}", dir.display());
        Ok(())
    }
}
