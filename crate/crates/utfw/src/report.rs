use serde::{Deserialize, Serialize};
use serde_json::Value;
use utfw_core::quadrature::GridSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub seed: Option<u64>,
    pub grid: Option<GridSpec>,
}

impl Provenance {
    pub fn new(seed: Option<u64>, grid: Option<GridSpec>) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            grid,
        }
    }
}

/// Structured output of one command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub provenance: Provenance,
}

impl RunReport {
    pub fn new(
        command: &str,
        inputs: &impl Serialize,
        outputs: &impl Serialize,
        provenance: Provenance,
    ) -> serde_json::Result<Self> {
        Ok(Self {
            command: command.to_string(),
            inputs: serde_json::to_value(inputs)?,
            outputs: serde_json::to_value(outputs)?,
            provenance,
        })
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
