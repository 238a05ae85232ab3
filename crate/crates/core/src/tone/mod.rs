//! Five-scale tone transcriptions and the distances defined on them.
//!
//! A transcription such as `41` or `312` is mapped to a smooth pitch curve on
//! `[1, 3]`: two digits give the line through `(1, p)` and `(3, q)`, three
//! digits give the parabola through `(1, p)`, `(2, q)` and `(3, r)`. The
//! distance between two transcriptions is the area between their curves.

mod contour;
mod curve;
mod matrix;
mod transcription;

pub use contour::{normalize_contour, relative_pitch, variance_metric, NormalizedContour};
pub use curve::{tone_distance, PitchCurve};
pub use matrix::{build_distance_matrix, database, database_distance, DistanceMatrix};
pub use transcription::{all_transcriptions, categorical_distance, Transcription};
