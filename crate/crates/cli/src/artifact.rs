use std::fs;
use std::io::Write;
use std::path::PathBuf;

use lpreps::Error;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Outcome of a command, mapped onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments, unreadable files, unsupported parameters.
    Manifest(String),
    /// A validator or contract check failed.
    Contract(String),
    Budget(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Manifest(_) => 1,
            Failure::Contract(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Manifest(s) | Failure::Contract(s) | Failure::Budget(s) => s,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget { .. } => Failure::Budget(e.to_string()),
            Error::Contract(_) | Error::Invariant(_) | Error::InvalidModulus(_) => Failure::Contract(e.to_string()),
            _ => Failure::Manifest(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Manifest(e.to_string())
    }
}

/// Canonical description of one invocation: command, parameters, seed,
/// and the contents of every referenced file.
#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub params: Value,
    pub seed: u64,
    pub budget: u64,
    pub files: Vec<(String, String)>,
}

impl Manifest {
    pub fn hash(&self) -> String {
        let body = serde_json::to_string(self).expect("manifest serializes");
        let digest = Sha256::digest(body.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub struct Sink {
    pub out: Option<PathBuf>,
}

impl Sink {
    fn write(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir)?;
                }
                fs::write(p, text)?;
            }
            None => {
                let mut o = std::io::stdout().lock();
                o.write_all(text.as_bytes())?;
            }
        }
        Ok(())
    }

    /// JSON artifact: `{version, seed, manifest_hash, command, result}`.
    pub fn json(&self, m: &Manifest, result: Value) -> Result<(), Failure> {
        let doc = json!({
            "version": VERSION,
            "seed": m.seed,
            "manifest_hash": m.hash(),
            "command": m.command,
            "params": m.params,
            "result": result,
        });
        self.write(&(serde_json::to_string_pretty(&doc).expect("json") + "\n"))
    }

    /// CSV artifact: three `#` header lines, then the body.
    pub fn csv(&self, m: &Manifest, body: &str) -> Result<(), Failure> {
        let head = format!("# version={VERSION}\n# seed={}\n# manifest_hash={}\n", m.seed, m.hash());
        self.write(&(head + body))
    }
}
