//! Dialect corpora and the cross-region analyses built on them.

mod analysis;
mod corpus;
mod tones;

pub use analysis::{
    dialect_cluster_pipeline, dialect_variance_map, region_distance, region_matrix, ClusterReport, ClusterSummary,
    Metric, RegionDistance, RegionMatrix,
};
pub use corpus::{load_corpus, load_gold, DialectCorpus, RegionLexicon};
pub use tones::{tone_clustering_pipeline, ToneCategory, ToneClusteringConfig, ToneClusteringReport};
