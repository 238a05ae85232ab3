use serde::Serialize;

use super::feature::resample_log_f0;
use super::F0Track;
use crate::error::Result;
use crate::learn::{decode_eq4, linearity, PitchTriple};
use crate::tone::Transcription;

const POINTS: usize = 20;
/// Indices of the fitted curve read off as the three pitch targets: second,
/// middle (no exact middle exists among 20 points; index 9 is used) and
/// second-to-last.
const READ_AT: [usize; 3] = [1, 9, 18];

/// Fitted contours whose log₂-F0 range is below this many octaves are level tones.
pub const LEVEL_RANGE_OCTAVES: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaselineTranscription {
    pub transcription: Transcription,
    pub triple: PitchTriple,
    /// `|z₁ + z₃ − 2·z₂|`
    pub linearity: f64,
}

/// Least-squares `y ≈ c0 + c1·u + c2·u²`.
fn fit_quadratic(u: &[f64], y: &[f64]) -> [f64; 3] {
    let mut m = [[0.0f64; 4]; 3];
    for (&ui, &yi) in u.iter().zip(y) {
        let basis = [1.0, ui, ui * ui];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] += basis[r] * basis[c];
            }
            m[r][3] += basis[r] * yi;
        }
    }
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .expect("nonempty range");
        m.swap(col, pivot);
        for row in (col + 1)..3 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let mut coef = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = ((row + 1)..3).map(|k| m[row][k] * coef[k]).sum();
        coef[row] = (m[row][3] - tail) / m[row][row];
    }
    coef
}

/// F0 baseline transcriber: fit a parabola to twenty log-F0 samples, read it
/// at the second, middle and second-to-last points, stretch the fitted
/// range onto `[1, 5]`, and decode with the linearity rule.
pub fn f0_baseline_transcribe(track: &F0Track, beta: f64) -> Result<BaselineTranscription> {
    let y = resample_log_f0(track, POINTS)?;
    let centre = (POINTS - 1) as f64 / 2.0;
    let u: Vec<f64> = (0..POINTS).map(|i| i as f64 - centre).collect();
    let [c0, c1, c2] = fit_quadratic(&u, &y);
    let fitted: Vec<f64> = u.iter().map(|&x| c0 + (c1 + c2 * x) * x).collect();
    let lo = fitted.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = fitted.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let z = READ_AT.map(|i| {
        if hi - lo < LEVEL_RANGE_OCTAVES {
            3.0
        } else {
            (1.0 + 4.0 * (fitted[i] - lo) / (hi - lo)).clamp(1.0, 5.0)
        }
    });
    let triple = PitchTriple::new(z)?;
    Ok(BaselineTranscription {
        transcription: decode_eq4(&triple, beta)?,
        triple,
        linearity: linearity(&triple),
    })
}
