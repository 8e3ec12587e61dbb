use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{Command, ExperimentConfig};
use crate::error::CliResult;

/// Written next to every command's outputs; `--config manifest.json` replays
/// the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub config_hash: String,
    pub seeds: BTreeMap<String, u64>,
    pub config: BTreeMap<String, String>,
}

impl Manifest {
    pub fn new(command: Command, config: &ExperimentConfig, seeds: BTreeMap<String, u64>) -> Self {
        Manifest {
            command: command.name().into(),
            config_hash: config.hash(),
            seeds,
            config: config.to_pairs(),
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("serialisable");
    std::fs::write(path, text + "\n").map_err(|e| wlalign::Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(())
}
