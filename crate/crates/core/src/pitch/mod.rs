//! Audio input, F0 tracking and pitch-contour features for single syllables.

mod baseline;
mod f0;
mod feature;
mod wav;

pub use baseline::{f0_baseline_transcribe, BaselineTranscription, LEVEL_RANGE_OCTAVES};
pub use f0::{extract_f0, F0Config, F0Track};
pub use feature::{contour_feature, ContourFeature, MIN_VOICED_FRAMES};
pub use wav::{read_wav, write_wav, AudioClip};

/// Default number of contour samples per syllable.
pub const DEFAULT_K: usize = 20;

/// F0 track of a clip reduced to its `k`-point contour feature.
pub fn clip_feature(clip: &AudioClip, cfg: &F0Config, k: usize) -> crate::Result<ContourFeature> {
    contour_feature(&extract_f0(clip, cfg)?, k)
}
