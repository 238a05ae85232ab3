//! Agglomerative clustering, density clustering and classical MDS.

mod dbscan;
mod hierarchy;
mod mds;

use std::io::Write;

use serde::Serialize;

pub use dbscan::{dbscan, DEFAULT_EPS, DEFAULT_MIN_SAMPLES};
pub use hierarchy::{cut_tree, hierarchical_cluster, Dendrogram, Linkage, Merge};
pub use mds::{classical_mds, Coordinates};

use crate::error::{Error, Result};

/// Cluster id per item; `None` marks density-clustering noise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClusterAssignment {
    labels: Vec<Option<usize>>,
    n_clusters: usize,
}

impl ClusterAssignment {
    /// Relabels so ids run `0..k` in order of first appearance.
    pub fn from_labels(raw: &[Option<usize>]) -> Self {
        let mut map = std::collections::HashMap::new();
        let labels = raw
            .iter()
            .map(|l| {
                l.map(|id| {
                    let next = map.len();
                    *map.entry(id).or_insert(next)
                })
            })
            .collect();
        ClusterAssignment {
            labels,
            n_clusters: map.len(),
        }
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    pub fn label(&self, item: usize) -> Option<usize> {
        self.labels[item]
    }

    pub fn n_clusters(&self) -> usize {
        self.n_clusters
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn noise(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.labels[i].is_none()).collect()
    }

    pub fn members(&self, cluster: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.labels[i] == Some(cluster)).collect()
    }

    /// `item,label` rows; noise is written as -1.
    pub fn write_csv<W: Write>(&self, names: &[String], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["item", "label"])?;
        for (name, label) in names.iter().zip(&self.labels) {
            let label = label.map_or("-1".to_string(), |l| l.to_string());
            w.write_record([name.as_str(), label.as_str()])?;
        }
        w.flush().map_err(|e| Error::io("<csv output>", e))?;
        Ok(())
    }
}

/// Agreement with binary gold labels, maximized over both ways of matching
/// the (at most two) predicted clusters to the gold classes.
pub fn two_cluster_accuracy(pred: &ClusterAssignment, gold: &[u8]) -> Result<f64> {
    if pred.len() != gold.len() {
        return Err(Error::DimensionMismatch {
            what: "gold label count",
            expected: pred.len(),
            found: gold.len(),
        });
    }
    if pred.is_empty() {
        return Err(Error::Empty("cluster assignment"));
    }
    if let Some(g) = gold.iter().find(|&&g| g > 1) {
        return Err(Error::invalid(format!("gold label {g} is not 0 or 1")));
    }
    let mut hits = 0usize;
    for (p, &g) in pred.labels.iter().zip(gold) {
        match p {
            Some(id @ 0..=1) => hits += usize::from(*id as u8 == g),
            Some(id) => return Err(Error::invalid(format!("cluster id {id} in a two-cluster evaluation"))),
            None => return Err(Error::invalid("noise labels cannot be scored against two classes")),
        }
    }
    let n = gold.len();
    Ok(hits.max(n - hits) as f64 / n as f64)
}
