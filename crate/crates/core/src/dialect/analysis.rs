use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DialectCorpus, RegionLexicon};
use crate::cluster::{classical_mds, cut_tree, hierarchical_cluster, two_cluster_accuracy, Coordinates, Dendrogram, Linkage};
use crate::error::{Error, Result};
use crate::tone::{categorical_distance, database_distance, DistanceMatrix};

/// Per-word transcription difference used to compare regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Area between pitch curves.
    Tone2vec,
    /// 0 when identical, 1 otherwise.
    Categorical,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Tone2vec => "tone2vec",
            Metric::Categorical => "categorical",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tone2vec" => Ok(Metric::Tone2vec),
            "categorical" => Ok(Metric::Categorical),
            _ => Err(Error::invalid(format!("unknown metric {s:?} (expected tone2vec or categorical)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionDistance {
    /// Mean per-word distance over shared words.
    pub value: f64,
    pub shared: usize,
    /// Words present in only one of the two regions.
    pub unshared: usize,
}

pub fn region_distance(a: &RegionLexicon, b: &RegionLexicon, metric: Metric) -> Result<RegionDistance> {
    let mut total = 0.0;
    let mut shared = 0usize;
    for (word, ta) in a.entries() {
        if let Some(tb) = b.get(word) {
            total += match metric {
                Metric::Tone2vec => database_distance(ta, tb),
                Metric::Categorical => categorical_distance(ta, tb),
            };
            shared += 1;
        }
    }
    if shared == 0 {
        return Err(Error::NoSharedWords {
            a: a.region_id.clone(),
            b: b.region_id.clone(),
        });
    }
    Ok(RegionDistance {
        value: total / shared as f64,
        shared,
        unshared: a.len() + b.len() - 2 * shared,
    })
}

#[derive(Debug, Clone)]
pub struct RegionMatrix {
    pub matrix: DistanceMatrix,
    pub coverage_warnings: Vec<String>,
}

/// Pairwise region distances with regions sorted by id, so the result does
/// not depend on the order regions appear in the corpus.
pub fn region_matrix(corpus: &DialectCorpus, metric: Metric) -> Result<RegionMatrix> {
    let mut regions: Vec<&RegionLexicon> = corpus.regions.iter().collect();
    regions.sort_by(|a, b| a.region_id.cmp(&b.region_id));
    let n = regions.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let results: Vec<RegionDistance> = pairs
        .par_iter()
        .map(|&(i, j)| region_distance(regions[i], regions[j], metric))
        .collect::<Result<_>>()?;
    let mut values = vec![0.0; n * n];
    let mut coverage_warnings = Vec::new();
    for (&(i, j), r) in pairs.iter().zip(&results) {
        values[i * n + j] = r.value;
        values[j * n + i] = r.value;
        if r.unshared > 0 {
            coverage_warnings.push(format!(
                "{} vs {}: {} shared words, {} unshared words skipped",
                regions[i].region_id, regions[j].region_id, r.shared, r.unshared
            ));
        }
    }
    let labels = regions.iter().map(|r| r.region_id.clone()).collect();
    Ok(RegionMatrix {
        matrix: DistanceMatrix::new(labels, values)?,
        coverage_warnings,
    })
}

/// The JSON summary of one clustering run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterSummary {
    pub metric: Metric,
    pub linkage: Linkage,
    pub k: usize,
    pub accuracy: Option<f64>,
    pub coverage_warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ClusterReport {
    pub summary: ClusterSummary,
    /// Region ids in the (sorted) order used for clustering.
    pub regions: Vec<String>,
    pub assignment: crate::cluster::ClusterAssignment,
    pub dendrogram: Dendrogram,
}

/// Region distance matrix → agglomerative clustering → cut into `k` groups
/// → accuracy against gold labels when present. One report per linkage.
pub fn dialect_cluster_pipeline(
    corpus: &DialectCorpus,
    metric: Metric,
    linkages: &[Linkage],
    k: usize,
) -> Result<Vec<ClusterReport>> {
    if corpus.regions.len() < 2 {
        return Err(Error::invalid("dialect clustering needs at least 2 regions"));
    }
    let rm = region_matrix(corpus, metric)?;
    let regions = rm.matrix.labels().to_vec();
    let gold: Option<Vec<u8>> = corpus.gold().map(|g| regions.iter().map(|r| g[r]).collect());
    linkages
        .iter()
        .map(|&linkage| {
            let dendrogram = hierarchical_cluster(&rm.matrix, linkage)?;
            let assignment = cut_tree(&dendrogram, k)?;
            let accuracy = match &gold {
                Some(g) if k <= 2 => Some(two_cluster_accuracy(&assignment, g)?),
                _ => None,
            };
            Ok(ClusterReport {
                summary: ClusterSummary {
                    metric,
                    linkage,
                    k,
                    accuracy,
                    coverage_warnings: rm.coverage_warnings.clone(),
                },
                regions: regions.clone(),
                assignment,
                dendrogram,
            })
        })
        .collect()
}

/// Classical MDS of the region distance matrix; one coordinate row per
/// region, sorted by region id.
pub fn dialect_variance_map(corpus: &DialectCorpus, metric: Metric, dims: usize) -> Result<Coordinates> {
    if corpus.regions.len() < 2 {
        return Err(Error::invalid("a variance map needs at least 2 regions"));
    }
    classical_mds(&region_matrix(corpus, metric)?.matrix, dims)
}
