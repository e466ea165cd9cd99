//! Trajectory CSV and run-summary writers. Files are written to a temporary
//! sibling and renamed into place so a failed run never leaves a partial
//! file behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use fqa_core::engine::{RunFailure, Trajectory};

pub const CSV_HEADER: &str = "layer,beta,A,J,fdot,success_prob";

/// Render the per-layer records with the fixed header
/// `layer,beta,A,J,fdot,success_prob`; the last column is empty when no
/// solution set exists.
pub fn trajectory_csv(trajectory: &Trajectory) -> String {
    let mut out = String::with_capacity(64 * (trajectory.records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for record in &trajectory.records {
        let success = record
            .success_probability
            .map(|p| p.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            record.layer, record.beta, record.a_expectation, record.cost, record.fdot, success
        ));
    }
    out
}

fn atomic_write(path: &Path, contents: &str) -> Result<()> {
    let mut tmp_name = path.as_os_str().to_os_string();
    tmp_name.push(".tmp");
    let tmp = PathBuf::from(tmp_name);
    {
        let mut file =
            fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        file.write_all(contents.as_bytes())
            .with_context(|| format!("writing {}", tmp.display()))?;
        file.sync_all().ok();
    }
    fs::rename(&tmp, path)
        .with_context(|| format!("moving {} into place as {}", tmp.display(), path.display()))?;
    Ok(())
}

pub fn write_trajectory_csv(path: &Path, trajectory: &Trajectory) -> Result<()> {
    atomic_write(path, &trajectory_csv(trajectory))
}

/// Plain key=value lines; greppable and diffable.
pub fn write_summary(path: &Path, entries: &[(String, String)]) -> Result<()> {
    let mut text = String::new();
    for (key, value) in entries {
        text.push_str(key);
        text.push('=');
        text.push_str(value);
        text.push('\n');
    }
    atomic_write(path, &text)
}

pub fn summary_path(csv_path: &Path) -> PathBuf {
    let mut name = csv_path.as_os_str().to_os_string();
    name.push(".summary");
    PathBuf::from(name)
}

/// Everything a summary reports besides the trajectory itself.
pub struct SummaryContext<'a> {
    pub command: &'a str,
    pub echo: &'a [(String, String)],
    pub dt: f64,
    pub layers: usize,
    pub rescale: &'a [(String, String)],
    pub ground_energy: Option<f64>,
    pub max_cut: Option<f64>,
    pub wall_time_s: f64,
}

/// Assemble the summary entries for one finished trajectory.
pub fn summary_entries(
    context: &SummaryContext<'_>,
    trajectory: &Trajectory,
) -> Vec<(String, String)> {
    let SummaryContext {
        command,
        echo,
        dt,
        layers,
        rescale,
        ground_energy,
        max_cut,
        wall_time_s,
    } = *context;
    let mut entries = vec![("command".to_string(), command.to_string())];
    entries.extend_from_slice(echo);
    entries.push(("dt".to_string(), dt.to_string()));
    entries.push(("layers".to_string(), layers.to_string()));
    entries.extend_from_slice(rescale);
    entries.push((
        "layers_recorded".to_string(),
        trajectory.records.len().to_string(),
    ));
    match trajectory.failure {
        None => entries.push(("status".to_string(), "ok".to_string())),
        Some(RunFailure::VanishingDerivative { layer, fdot }) => {
            entries.push(("status".to_string(), "truncated".to_string()));
            entries.push((
                "failure".to_string(),
                format!("vanishing_derivative layer={layer} fdot={fdot:e}"),
            ));
        }
    }
    if let Some(final_cost) = trajectory.final_cost() {
        entries.push(("final_J".to_string(), final_cost.to_string()));
        if let Some(e0) = ground_energy {
            entries.push(("ground_energy".to_string(), e0.to_string()));
            entries.push(("final_gap".to_string(), (final_cost - e0).to_string()));
        }
    }
    if let Some(value) = max_cut {
        entries.push(("max_cut".to_string(), value.to_string()));
    }
    if let Some(p) = trajectory.final_success_probability() {
        entries.push(("final_success_prob".to_string(), p.to_string()));
    }
    entries.push(("wall_time_s".to_string(), format!("{wall_time_s:.3}")));
    entries
}
