//! Agglomerative clustering by Lance–Williams updates on a full
//! dissimilarity matrix. Centroid, median and Ward linkages update squared
//! dissimilarities and report `√height`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ClusterAssignment;
use crate::error::{Error, Result};
use crate::tone::DistanceMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Linkage {
    /// Single link: nearest pair.
    #[serde(rename = "sl")]
    Single,
    /// Complete link: farthest pair.
    #[serde(rename = "cl")]
    Complete,
    /// Group average (UPGMA).
    #[serde(rename = "ga")]
    Average,
    /// Weighted average (WPGMA).
    #[serde(rename = "wa")]
    Weighted,
    /// Unweighted centroid (UPGMC).
    #[serde(rename = "uc")]
    Centroid,
    /// Weighted centroid (WPGMC, median).
    #[serde(rename = "wc")]
    Median,
    /// Minimum variance (Ward).
    #[serde(rename = "mv")]
    Ward,
}

impl Linkage {
    pub const ALL: [Linkage; 7] = [
        Linkage::Single,
        Linkage::Complete,
        Linkage::Average,
        Linkage::Weighted,
        Linkage::Centroid,
        Linkage::Median,
        Linkage::Ward,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Linkage::Single => "sl",
            Linkage::Complete => "cl",
            Linkage::Average => "ga",
            Linkage::Weighted => "wa",
            Linkage::Centroid => "uc",
            Linkage::Median => "wc",
            Linkage::Ward => "mv",
        }
    }

    /// Whether the update runs on squared dissimilarities.
    pub fn squared(self) -> bool {
        matches!(self, Linkage::Centroid | Linkage::Median | Linkage::Ward)
    }

    /// Dissimilarity from the merge of `i` and `j` to `l`.
    fn update(self, d_il: f64, d_jl: f64, d_ij: f64, n_i: f64, n_j: f64, n_l: f64) -> f64 {
        match self {
            Linkage::Single => d_il.min(d_jl),
            Linkage::Complete => d_il.max(d_jl),
            Linkage::Average => (n_i * d_il + n_j * d_jl) / (n_i + n_j),
            Linkage::Weighted => 0.5 * (d_il + d_jl),
            Linkage::Centroid => {
                let n = n_i + n_j;
                (n_i * d_il + n_j * d_jl) / n - n_i * n_j * d_ij / (n * n)
            }
            Linkage::Median => 0.5 * (d_il + d_jl) - 0.25 * d_ij,
            Linkage::Ward => ((n_i + n_l) * d_il + (n_j + n_l) * d_jl - n_l * d_ij) / (n_i + n_j + n_l),
        }
    }
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Linkage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Linkage::ALL
            .into_iter()
            .find(|l| l.code() == s)
            .ok_or_else(|| Error::invalid(format!("unknown linkage {s:?} (expected sl, cl, ga, wa, uc, wc or mv)")))
    }
}

/// One agglomeration step. Items are ids `0..n`; the cluster formed at step
/// `s` gets id `n + s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub height: f64,
    pub size: usize,
}

/// `n − 1` merges in order. Centroid and median linkages may produce
/// heights lower than an earlier merge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dendrogram {
    n: usize,
    linkage: Linkage,
    steps: Vec<Merge>,
}

impl Dendrogram {
    pub fn n_items(&self) -> usize {
        self.n
    }

    pub fn linkage(&self) -> Linkage {
        self.linkage
    }

    pub fn steps(&self) -> &[Merge] {
        &self.steps
    }

    /// Items under each cluster id, `0..2n−1`.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (0..self.n).map(|i| vec![i]).collect();
        for m in &self.steps {
            let mut merged = out[m.a].clone();
            merged.extend_from_slice(&out[m.b]);
            merged.sort_unstable();
            out.push(merged);
        }
        out
    }

    /// Merge table `step,cluster_a,cluster_b,height,size`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["step", "cluster_a", "cluster_b", "height", "size"])?;
        for (s, m) in self.steps.iter().enumerate() {
            w.write_record([
                s.to_string(),
                m.a.to_string(),
                m.b.to_string(),
                format!("{:.6}", m.height),
                m.size.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv output>", e))?;
        Ok(())
    }
}

/// Agglomerates all items of `d` under `linkage`. Exact ties in merge height
/// go to the pair with the smallest `(min id, max id)`.
pub fn hierarchical_cluster(d: &DistanceMatrix, linkage: Linkage) -> Result<Dendrogram> {
    let n = d.len();
    if n < 2 {
        return Err(Error::invalid(format!("hierarchical clustering needs at least 2 items, got {n}")));
    }
    let mut dist: Vec<f64> = (0..n * n)
        .map(|k| {
            let v = d.get(k / n, k % n);
            if linkage.squared() {
                v * v
            } else {
                v
            }
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut id: Vec<usize> = (0..n).collect();
    let mut size = vec![1usize; n];
    let mut steps = Vec::with_capacity(n - 1);

    for step in 0..n - 1 {
        let mut best: Option<(f64, (usize, usize), usize, usize)> = None;
        for (x, &i) in active.iter().enumerate() {
            for &j in &active[x + 1..] {
                let v = dist[i * n + j];
                let key = (id[i].min(id[j]), id[i].max(id[j]));
                let better = match best {
                    None => true,
                    Some((bv, bkey, _, _)) => v < bv || (v == bv && key < bkey),
                };
                if better {
                    best = Some((v, key, i, j));
                }
            }
        }
        let (v, (a, b), i, j) = best.expect("at least two active clusters");
        let (n_i, n_j) = (size[i] as f64, size[j] as f64);
        for &l in &active {
            if l == i || l == j {
                continue;
            }
            let updated = linkage.update(dist[i * n + l], dist[j * n + l], v, n_i, n_j, size[l] as f64);
            dist[i * n + l] = updated;
            dist[l * n + i] = updated;
        }
        active.retain(|&s| s != j);
        size[i] += size[j];
        id[i] = n + step;
        let height = if linkage.squared() { v.max(0.0).sqrt() } else { v };
        steps.push(Merge {
            a,
            b,
            height,
            size: size[i],
        });
    }
    Ok(Dendrogram { n, linkage, steps })
}

/// Flat clustering into `k` groups by undoing the last `k − 1` merges.
/// Groups are numbered in order of their first item.
pub fn cut_tree(dg: &Dendrogram, k: usize) -> Result<ClusterAssignment> {
    let n = dg.n;
    if k == 0 || k > n {
        return Err(Error::invalid(format!("cannot cut {n} items into {k} clusters")));
    }
    let mut parent: Vec<usize> = (0..2 * n - 1).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (s, m) in dg.steps.iter().take(n - k).enumerate() {
        let new = n + s;
        let (ra, rb) = (root(&mut parent, m.a), root(&mut parent, m.b));
        parent[ra] = new;
        parent[rb] = new;
    }
    let raw: Vec<Option<usize>> = (0..n).map(|i| Some(root(&mut parent, i))).collect();
    Ok(ClusterAssignment::from_labels(&raw))
}
