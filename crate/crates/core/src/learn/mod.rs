//! Pitch-level loss for variable-length transcriptions, the linearity
//! decoder, and a small trainable contour-to-transcription model.
//!
//! A model emits three pitch levels `z = (z₁, z₂, z₃)` in `[1, 5]`. Two-digit
//! labels are compared against their midpoint expansion, and at inference
//! time a near-linear triple decodes to a two-digit tone.

mod decode;
mod loss;
mod model;

pub use decode::{decode_eq4, linearity, DEFAULT_BETA};
pub use loss::{pitch_distance_hat, pitch_loss, pitch_loss_subgradient, PitchTriple};
pub use model::{
    subgradient_descent, train_tone_model, LinearToneModel, TrainConfig, TrainOutcome,
};
