use crate::error::{Error, Result};
use crate::learn::PitchTriple;
use crate::tone::Transcription;

pub const DEFAULT_BETA: f64 = 0.5;

/// Second difference `|z₁ + z₃ − 2·z₂|`; zero for a straight contour.
pub fn linearity(z: &PitchTriple) -> f64 {
    let [a, b, c] = z.values();
    (a + c - 2.0 * b).abs()
}

fn level(v: f64) -> u8 {
    // f64::round rounds half away from zero
    v.round().clamp(1.0, 5.0) as u8
}

/// Two-digit tone when the triple is straight to within `beta`, otherwise
/// all three rounded levels.
pub fn decode_eq4(z: &PitchTriple, beta: f64) -> Result<Transcription> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::invalid(format!("beta must be positive, got {beta}")));
    }
    let [a, b, c] = z.values();
    let digits: Vec<u8> = if linearity(z) < beta {
        vec![level(a), level(c)]
    } else {
        vec![level(a), level(b), level(c)]
    };
    Ok(Transcription::new(&digits).expect("levels clamped to 1..=5"))
}
