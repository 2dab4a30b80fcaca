//! Loss history CSV with `epoch,task,loss` columns.

use std::collections::BTreeMap;
use std::path::Path;

use fpk_core::weighting::TaskLossHistory;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Deserialize)]
struct Row {
    epoch: u64,
    task: String,
    loss: f64,
}

/// Task names in order of first appearance plus the windowed history.
pub fn parse(text: &str, window: usize) -> Result<(Vec<String>, TaskLossHistory), String> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut names: Vec<String> = Vec::new();
    let mut table: BTreeMap<u64, BTreeMap<usize, f64>> = BTreeMap::new();
    for row in rdr.deserialize::<Row>() {
        let row = row.map_err(|e| e.to_string())?;
        let idx = match names.iter().position(|n| *n == row.task) {
            Some(i) => i,
            None => {
                names.push(row.task.clone());
                names.len() - 1
            }
        };
        if table.entry(row.epoch).or_default().insert(idx, row.loss).is_some() {
            return Err(format!("duplicate loss for task '{}' at epoch {}", row.task, row.epoch));
        }
    }
    if names.is_empty() {
        return Err("loss history is empty".into());
    }
    let mut h = TaskLossHistory::new(names.len(), window).map_err(|e| e.to_string())?;
    for (epoch, losses) in &table {
        if losses.len() != names.len() {
            return Err(format!("epoch {epoch} is missing losses for some tasks"));
        }
        let row: Vec<f64> = losses.values().copied().collect();
        h.push_epoch(&row).map_err(|e| format!("epoch {epoch}: {e}"))?;
    }
    Ok((names, h))
}

pub fn read(path: &Path, window: usize) -> CliResult<(Vec<String>, TaskLossHistory)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse(&text, window).map_err(|m| CliError::format(path, m))
}
