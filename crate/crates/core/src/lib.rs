//! Tone analysis toolkit for five-scale (Chao tone letter) transcriptions.
//!
//! * [`tone`]: transcriptions, pitch curves, the area-between-curves distance
//!   and the relative-pitch variance metric.
//! * [`pitch`]: WAV input, YIN-style F0 tracking, contour features and the
//!   quadratic-fit baseline transcriber.
//! * [`learn`]: the pitch loss, its subgradient, the linearity decoder and a
//!   small trainable contour-to-transcription model.
//! * [`cluster`]: agglomerative clustering with seven linkages, DBSCAN,
//!   classical MDS and two-cluster accuracy.
//! * [`dialect`]: region corpora and the dialect clustering, variance-map and
//!   tone-category discovery pipelines.
//! * [`synth`]: deterministic synthetic audio and corpora for demos and tests.

pub mod cluster;
pub mod dialect;
pub mod error;
pub mod learn;
pub mod pitch;
pub mod synth;
pub mod tone;

pub use error::{Error, Result};
