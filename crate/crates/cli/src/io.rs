use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;

/// `Input` maps to exit code 2, `Compute` to 1.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Compute(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Compute(m) => write!(f, "computation failed: {m}"),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn input<E: fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

pub fn compute<E: fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    parse_json(&text, &path.display().to_string())
}

pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| input(format!("{what}: {e}")))
}

/// Writes `name` into `out` if given, else prints `text` to stdout.
pub fn emit(out: Option<&PathBuf>, name: &str, text: &str) -> CliResult<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| input(format!("{}: {e}", dir.display())))?;
            let path = dir.join(name);
            fs::write(&path, text).map_err(|e| compute(format!("{}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

pub fn pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
