use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cluster::{dbscan, DEFAULT_EPS, DEFAULT_MIN_SAMPLES};
use crate::error::{Error, Result};
use crate::learn::{decode_eq4, LinearToneModel, PitchTriple, DEFAULT_BETA};
use crate::pitch::{clip_feature, AudioClip, F0Config};
use crate::tone::Transcription;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToneClusteringConfig {
    pub eps: f64,
    pub min_samples: usize,
    pub beta: f64,
    pub f0: F0Config,
}

impl Default for ToneClusteringConfig {
    fn default() -> Self {
        ToneClusteringConfig {
            eps: DEFAULT_EPS,
            min_samples: DEFAULT_MIN_SAMPLES,
            beta: DEFAULT_BETA,
            f0: F0Config::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToneCategory {
    pub cluster: usize,
    /// Most frequent decoded transcription in the cluster.
    pub representative: Transcription,
    pub members: Vec<usize>,
    pub votes: BTreeMap<Transcription, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToneClusteringReport {
    pub n_categories: usize,
    pub categories: Vec<ToneCategory>,
    pub noise: Vec<usize>,
    pub embeddings: Vec<PitchTriple>,
    pub decoded: Vec<Transcription>,
}

/// Discovers a speaker's tone categories: embed every clip with `model`,
/// cluster the pitch triples with DBSCAN, and name each cluster by its
/// most frequent decoded transcription (ties go to the smallest).
pub fn tone_clustering_pipeline(
    clips: &[AudioClip],
    model: &LinearToneModel,
    cfg: &ToneClusteringConfig,
) -> Result<ToneClusteringReport> {
    if clips.is_empty() {
        return Err(Error::Empty("clip list"));
    }
    let embeddings: Vec<PitchTriple> = clips
        .par_iter()
        .enumerate()
        .map(|(i, clip)| {
            clip_feature(clip, &cfg.f0, model.feature_len())
                .and_then(|x| model.embed(&x))
                .map_err(|e| Error::Clip {
                    index: i,
                    source: Box::new(e),
                })
        })
        .collect::<Result<_>>()?;
    let decoded: Vec<Transcription> = embeddings
        .iter()
        .map(|z| decode_eq4(z, cfg.beta))
        .collect::<Result<_>>()?;
    let points: Vec<Vec<f64>> = embeddings.iter().map(|z| z.values().to_vec()).collect();
    let assignment = dbscan(&points, cfg.eps, cfg.min_samples)?;

    let categories = (0..assignment.n_clusters())
        .map(|cluster| {
            let members = assignment.members(cluster);
            let mut votes = BTreeMap::new();
            for &m in &members {
                *votes.entry(decoded[m]).or_insert(0usize) += 1;
            }
            let top = votes.values().copied().max().unwrap_or(0);
            let representative = *votes
                .iter()
                .find(|(_, &c)| c == top)
                .map(|(t, _)| t)
                .expect("clusters are nonempty");
            ToneCategory {
                cluster,
                representative,
                members,
                votes,
            }
        })
        .collect();
    Ok(ToneClusteringReport {
        n_categories: assignment.n_clusters(),
        categories,
        noise: assignment.noise(),
        embeddings,
        decoded,
    })
}
