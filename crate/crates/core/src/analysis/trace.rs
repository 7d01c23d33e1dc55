//! Per-step run records and their CSV export.
//!
//! CSV columns, in order: `k, loss, action, gap_if_game, reads_solver,
//! reads_verify, expected_loss, grad_inf_norm, dual_checksum`. Empty cells
//! mean "not applicable" (no action in full-point runs, gap only on the final
//! row of a game run). Read counts are per step, not cumulative.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default budget on `n · N` above which per-step distributions are dropped.
pub const DEFAULT_DISTRIBUTION_BUDGET: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub algorithm: String,
    pub seed: u64,
    pub n: usize,
    pub steps: u64,
    pub grad_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// 1-based step index.
    pub k: u64,
    /// Realized loss of the step.
    pub loss: f64,
    /// Loss in expectation over the learner's own draw at this step.
    pub expected_loss: f64,
    pub action: Option<usize>,
    pub grad_inf_norm: f64,
    /// Sum of the dual vector after the update.
    pub dual_checksum: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    pub reads_solver: u64,
    pub reads_verify: u64,
}

impl StepRecord {
    pub fn new(k: u64, loss: f64, expected_loss: f64) -> Self {
        Self {
            k,
            loss,
            expected_loss,
            action: None,
            grad_inf_norm: 0.0,
            dual_checksum: 0.0,
            distribution: None,
            gap: None,
            reads_solver: 0,
            reads_verify: 0,
        }
    }
}

/// Records of one run plus its metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub meta: TraceMeta,
    records: Vec<StepRecord>,
    keep_distributions: bool,
}

impl RunTrace {
    pub fn new(meta: TraceMeta) -> Self {
        Self::with_budget(meta, DEFAULT_DISTRIBUTION_BUDGET)
    }

    /// Distributions are kept only when `n · N ≤ budget`.
    pub fn with_budget(meta: TraceMeta, budget: u64) -> Self {
        let keep = (meta.n as u64).saturating_mul(meta.steps) <= budget;
        Self {
            records: Vec::with_capacity(meta.steps.min(1 << 20) as usize),
            meta,
            keep_distributions: keep,
        }
    }

    pub fn keeps_distributions(&self) -> bool {
        self.keep_distributions
    }

    /// Appends the next record; step indices must be contiguous from 1.
    pub fn push(&mut self, mut record: StepRecord) -> Result<()> {
        let expected = self.records.len() as u64 + 1;
        if record.k != expected {
            return Err(Error::InvalidState(format!(
                "trace expected step {expected}, got {}",
                record.k
            )));
        }
        if !self.keep_distributions {
            record.distribution = None;
        }
        self.records.push(record);
        Ok(())
    }

    pub fn records(&self) -> &[StepRecord] {
        &self.records
    }

    pub fn last_mut(&mut self) -> Option<&mut StepRecord> {
        self.records.last_mut()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.records.len() as u64 == self.meta.steps
    }

    pub fn total_loss(&self) -> f64 {
        self.records.iter().map(|r| r.loss).sum()
    }

    pub fn total_expected_loss(&self) -> f64 {
        self.records.iter().map(|r| r.expected_loss).sum()
    }

    pub fn max_grad_inf_norm(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.grad_inf_norm)
            .fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "k",
            "loss",
            "action",
            "gap_if_game",
            "reads_solver",
            "reads_verify",
            "expected_loss",
            "grad_inf_norm",
            "dual_checksum",
        ])?;
        let opt = |v: Option<String>| v.unwrap_or_default();
        for r in &self.records {
            w.write_record([
                r.k.to_string(),
                r.loss.to_string(),
                opt(r.action.map(|a| a.to_string())),
                opt(r.gap.map(|g| g.to_string())),
                r.reads_solver.to_string(),
                r.reads_verify.to_string(),
                r.expected_loss.to_string(),
                r.grad_inf_norm.to_string(),
                r.dual_checksum.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
