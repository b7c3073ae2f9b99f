//! TOML configuration files. Keys mirror [`GenerationConfig`] fields; any
//! key left out keeps its default.

use std::fs;
use std::path::Path;

use tabsynth_core::GenerationConfig;

use crate::error::DatasetError;

pub fn parse_config(text: &str, path: &Path) -> Result<GenerationConfig, DatasetError> {
    let config: GenerationConfig =
        toml::from_str(text).map_err(|source| DatasetError::Toml { path: path.to_owned(), source })?;
    config.validate().map_err(|e| DatasetError::Synth(e.into()))?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<GenerationConfig, DatasetError> {
    let text = fs::read_to_string(path).map_err(|e| DatasetError::io(path, e))?;
    parse_config(&text, path)
}

/// Every key with its current value.
pub fn render_config(config: &GenerationConfig) -> String {
    toml::to_string(config).expect("flat config of numbers always serializes")
}
