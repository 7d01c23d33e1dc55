use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Adversary;
use crate::error::{invalid, Error, Result};

/// Reads one loss vector per CSV row (no header; `#` starts a comment line).
pub fn load_loss_csv(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(std::fs::File::open(path)?);
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|e| {
                    Error::Parse(format!("row {}: cannot parse {field:?}: {e}", line + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return invalid("loss file contains no rows");
    }
    Ok(rows)
}

/// JSON description of i.i.d. Bernoulli arms: `{"means": [...], "seed": 7}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StochasticSpec {
    pub means: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl StochasticSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn environment(&self) -> Result<Adversary> {
        Adversary::bernoulli(self.means.clone(), self.seed)
    }
}
