//! Empirical checks against the predicted exponents: exact lattice counts,
//! volume estimates, `r`-sweeps and log-model exponent fits.

mod fit;
mod lattice;
mod volume;

pub use fit::{fit_exponents, fit_points, ExponentFit, Kappa};
pub use lattice::{count_lattice, LatticeCount};
pub use volume::{estimate_volume, VolumeEstimate, VolumeMethod, MAX_EXTENT};

use serde_json::{json, Value};
use thiserror::Error;

use crate::asym::{lattice_profile, volume_profile, AsymError};
use crate::polynomial::PolynomialMap;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmpiricsError {
    #[error(transparent)]
    Asym(#[from] AsymError),
    #[error("the lattice count is infinite for this map")]
    InfiniteCount,
    #[error("the sublevel volume is infinite for this map")]
    InfiniteVolume,
    #[error("invalid level r = {0}")]
    InvalidLevel(f64),
    #[error(
        "NON_TERMINATED: shell test still finds points at box half-width {box_half_width} (partial count {partial})"
    )]
    NonTerminated { partial: u64, box_half_width: i64 },
    #[error("UNSUPPORTED_SHAPE: sublevel set still reaches the boundary slab on axis {axis} at half-width {extent}")]
    UnsupportedShape { axis: usize, extent: f64 },
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error("r schedule must be positive and strictly increasing")]
    InvalidSchedule,
    #[error("fit needs at least 4 points, got {got}")]
    TooFewPoints { got: usize },
    #[error("fit needs r >= e^2, got r = {0}")]
    LevelBelowThreshold(f64),
    #[error("fit needs positive measurements, got {measurement} at r = {r}")]
    NonPositiveMeasurement { r: f64, measurement: f64 },
    #[error("singular design matrix")]
    SingularDesign,
    #[error("csv output failed: {0}")]
    Csv(String),
}

impl EmpiricsError {
    /// Whether the error is a documented limitation of the desk-scale methods
    /// or a refused precondition, as opposed to bad input.
    pub fn is_unsupported(&self) -> bool {
        matches!(
            self,
            EmpiricsError::InfiniteCount
                | EmpiricsError::InfiniteVolume
                | EmpiricsError::NonTerminated { .. }
                | EmpiricsError::UnsupportedShape { .. }
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepKind {
    LatticeCount,
    Volume,
}

impl SweepKind {
    pub fn name(&self) -> &'static str {
        match self {
            SweepKind::LatticeCount => "LATTICE_COUNT",
            SweepKind::Volume => "VOLUME",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub r_values: Vec<f64>,
    pub measurements: Vec<f64>,
    /// Standard errors, volume sweeps only.
    pub error_bars: Option<Vec<f64>>,
}

impl SweepResult {
    /// CSV with header `r,measurement,stderr`. The stderr column is 0 for counts.
    pub fn to_csv(&self) -> Result<String, EmpiricsError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| EmpiricsError::Csv(e.to_string());
        writer.write_record(["r", "measurement", "stderr"]).map_err(csv_err)?;
        for (i, (r, m)) in self.r_values.iter().zip(&self.measurements).enumerate() {
            let se = self.error_bars.as_ref().map_or(0.0, |e| e[i]);
            writer
                .write_record([r.to_string(), m.to_string(), se.to_string()])
                .map_err(csv_err)?;
        }
        let bytes = writer.into_inner().map_err(|e| EmpiricsError::Csv(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| EmpiricsError::Csv(e.to_string()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.name(),
            "r_values": self.r_values,
            "measurements": self.measurements,
            "error_bars": self.error_bars,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub kind: SweepKind,
    /// Method for volume sweeps.
    pub method: VolumeMethod,
    /// Largest enumeration box half-width for counts.
    pub max_box: i64,
    pub seed: u64,
}

impl SweepConfig {
    pub fn lattice(max_box: i64) -> Self {
        SweepConfig {
            kind: SweepKind::LatticeCount,
            method: VolumeMethod::Grid { resolution: 512 },
            max_box,
            seed: 0,
        }
    }

    pub fn volume(method: VolumeMethod, seed: u64) -> Self {
        SweepConfig {
            kind: SweepKind::Volume,
            method,
            max_box: 1 << 20,
            seed,
        }
    }
}

/// Geometric schedule `r = 10^2, 10^2.5, ...`. It ends at `10^6` for counts
/// and at `10^5` for volumes, and never goes above `r_cap`.
pub fn default_schedule(kind: SweepKind, r_cap: f64) -> Vec<f64> {
    let last_half_decade = match kind {
        SweepKind::LatticeCount => 12,
        SweepKind::Volume => 10,
    };
    (4..=last_half_decade)
        .map(|h| 10f64.powf(h as f64 / 2.0))
        .filter(|r| *r <= r_cap * (1.0 + 1e-12))
        .collect()
}

/// Runs `count_lattice` or `estimate_volume` at every `r` of the schedule.
/// Volume point `k` uses its own RNG streams, so results do not depend on
/// scheduling.
pub fn sweep(f: &PolynomialMap, schedule: &[f64], config: &SweepConfig) -> Result<SweepResult, EmpiricsError> {
    if schedule.iter().any(|r| !(r.is_finite() && *r > 0.0)) || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EmpiricsError::InvalidSchedule);
    }
    match config.kind {
        SweepKind::LatticeCount => {
            if !lattice_profile(f)?.0 {
                return Err(EmpiricsError::InfiniteCount);
            }
            let measurements = schedule
                .iter()
                .map(|&r| count_lattice(f, r, config.max_box).map(|c| c.count as f64))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SweepResult {
                kind: config.kind,
                r_values: schedule.to_vec(),
                measurements,
                error_bars: None,
            })
        }
        SweepKind::Volume => {
            if !volume_profile(f)?.0 {
                return Err(EmpiricsError::InfiniteVolume);
            }
            let estimates = schedule
                .iter()
                .enumerate()
                .map(|(k, &r)| volume::estimate_volume_stream(f, r, config.method, config.seed, (k as u64) << 32))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SweepResult {
                kind: config.kind,
                r_values: schedule.to_vec(),
                measurements: estimates.iter().map(|e| e.estimate).collect(),
                error_bars: Some(estimates.iter().map(|e| e.stderr).collect()),
            })
        }
    }
}
