use serde::{Deserialize, Serialize};

use super::F0Track;
use crate::error::{Error, Result};

/// Minimum length of the voiced run a contour is taken from.
pub const MIN_VOICED_FRAMES: usize = 5;

const VARIANCE_FLOOR: f64 = 1e-6;

/// `K` z-normalized log₂-F0 samples from one syllable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContourFeature(Vec<f64>);

impl ContourFeature {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("contour feature"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("contour feature values must be finite"));
        }
        Ok(ContourFeature(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// log₂ F0 of the longest voiced run, linearly resampled at `k` evenly
/// spaced points spanning the run.
pub(crate) fn resample_log_f0(track: &F0Track, k: usize) -> Result<Vec<f64>> {
    if k < 2 {
        return Err(Error::invalid("need at least 2 contour points"));
    }
    let run = track.longest_voiced_run().unwrap_or(0..0);
    if run.len() < MIN_VOICED_FRAMES {
        return Err(Error::InsufficientVoiced {
            found: run.len(),
            required: MIN_VOICED_FRAMES,
        });
    }
    let logs: Vec<f64> = track.f0[run].iter().map(|f| f.log2()).collect();
    let span = (logs.len() - 1) as f64;
    Ok((0..k)
        .map(|i| {
            let pos = span * i as f64 / (k - 1) as f64;
            let lo = (pos.floor() as usize).min(logs.len() - 2);
            let frac = pos - lo as f64;
            logs[lo] + frac * (logs[lo + 1] - logs[lo])
        })
        .collect())
}

/// Shape of the syllable's pitch: resampled log-F0, z-normalized per utterance.
pub fn contour_feature(track: &F0Track, k: usize) -> Result<ContourFeature> {
    let raw = resample_log_f0(track, k)?;
    // shifting by the first sample keeps a flat contour exactly zero
    let raw: Vec<f64> = raw.iter().map(|v| v - raw[0]).collect();
    let n = raw.len() as f64;
    let mean = raw.iter().sum::<f64>() / n;
    let var = raw.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let scale = var.max(VARIANCE_FLOOR).sqrt();
    ContourFeature::new(raw.iter().map(|v| (v - mean) / scale).collect())
}
