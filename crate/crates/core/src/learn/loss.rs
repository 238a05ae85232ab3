use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tone::Transcription;

/// Three predicted pitch levels, each in `[1, 5]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct PitchTriple([f64; 3]);

impl PitchTriple {
    pub fn new(z: [f64; 3]) -> Result<Self> {
        if z.iter().any(|v| !v.is_finite() || !(1.0..=5.0).contains(v)) {
            return Err(Error::invalid(format!("pitch triple {z:?} outside [1, 5]")));
        }
        Ok(PitchTriple(z))
    }

    pub fn values(&self) -> [f64; 3] {
        self.0
    }
}

impl TryFrom<[f64; 3]> for PitchTriple {
    type Error = Error;

    fn try_from(z: [f64; 3]) -> Result<Self> {
        PitchTriple::new(z)
    }
}

impl From<PitchTriple> for [f64; 3] {
    fn from(z: PitchTriple) -> Self {
        z.0
    }
}

/// L1 distance between a predicted triple and a label; two-digit labels are
/// matched end-to-end with the middle output compared to their midpoint.
pub fn pitch_distance_hat(z: &PitchTriple, y: &Transcription) -> f64 {
    let [z1, z2, z3] = z.0;
    match *y.digits() {
        [a, b, c] => (z1 - f64::from(a)).abs() + (z2 - f64::from(b)).abs() + (z3 - f64::from(c)).abs(),
        [a, b] => {
            let (a, b) = (f64::from(a), f64::from(b));
            (z1 - a).abs() + (z3 - b).abs() + (z2 - 0.5 * (a + b)).abs()
        }
        _ => unreachable!("transcriptions have 2 or 3 digits"),
    }
}

/// Summed pitch distance over a batch; the training objective.
pub fn pitch_loss(batch: &[(PitchTriple, Transcription)]) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::Empty("loss batch"));
    }
    Ok(batch.iter().map(|(z, y)| pitch_distance_hat(z, y)).sum())
}

/// Sign subgradient of [`pitch_distance_hat`] with respect to `z`; 0 where a
/// term sits exactly on its kink.
pub fn pitch_loss_subgradient(z: &PitchTriple, y: &Transcription) -> [f64; 3] {
    let target = y.expanded();
    let mut g = [0.0; 3];
    for i in 0..3 {
        let d = z.0[i] - target[i];
        g[i] = if d > 0.0 {
            1.0
        } else if d < 0.0 {
            -1.0
        } else {
            0.0
        };
    }
    g
}
