use serde::Serialize;

use super::Transcription;

/// Range-normalized three-point pitch contour, values in `[0, 1]`.
///
/// Level tones have no range to normalize; they map to `(0.5, 0.5, 0.5)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedContour(pub [f64; 3]);

/// Maps the highest digit to 1 and the lowest to 0, keeping the original
/// length. Level tones give 0.5 at every position.
pub fn relative_pitch(t: &Transcription) -> Vec<f64> {
    let d = t.digits();
    let lo = f64::from(*d.iter().min().expect("nonempty"));
    let hi = f64::from(*d.iter().max().expect("nonempty"));
    if hi == lo {
        return vec![0.5; d.len()];
    }
    d.iter().map(|&n| (f64::from(n) - lo) / (hi - lo)).collect()
}

/// [`relative_pitch`], with two-digit results expanded to three points by
/// inserting their midpoint.
pub fn normalize_contour(t: &Transcription) -> NormalizedContour {
    match relative_pitch(t)[..] {
        [y1, y2] => NormalizedContour([y1, 0.5 * (y1 + y2), y2]),
        [y1, y2, y3] => NormalizedContour([y1, y2, y3]),
        _ => unreachable!("transcriptions have 2 or 3 digits"),
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Relative-pitch discrepancy: `Σ |σ(u_i) − σ(v_i)|` over the normalized contours.
pub fn variance_metric(l1: &Transcription, l2: &Transcription) -> f64 {
    let (u, v) = (normalize_contour(l1).0, normalize_contour(l2).0);
    u.iter()
        .zip(&v)
        .map(|(a, b)| (sigmoid(*a) - sigmoid(*b)).abs())
        .sum()
}
