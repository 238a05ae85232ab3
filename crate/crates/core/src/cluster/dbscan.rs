use std::collections::VecDeque;

use super::ClusterAssignment;
use crate::error::{Error, Result};

pub const DEFAULT_EPS: f64 = 0.6;
pub const DEFAULT_MIN_SAMPLES: usize = 4;

fn within(a: &[f64], b: &[f64], eps2: f64) -> bool {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() <= eps2
}

/// Density clustering under Euclidean distance. A point is core when at
/// least `min_samples` points (itself included) lie within `eps`. Clusters
/// are grown breadth-first from the lowest-index unvisited core point; a
/// border point keeps the first cluster that reaches it.
pub fn dbscan(points: &[Vec<f64>], eps: f64, min_samples: usize) -> Result<ClusterAssignment> {
    let first = points.first().ok_or(Error::Empty("point set"))?;
    let dim = first.len();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            what: "point dimension",
            expected: dim,
            found: p.len(),
        });
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    if min_samples == 0 {
        return Err(Error::invalid("min_samples must be at least 1"));
    }
    let n = points.len();
    let eps2 = eps * eps;
    let neighbours: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| within(&points[i], &points[j], eps2)).collect())
        .collect();
    let core: Vec<bool> = neighbours.iter().map(|nb| nb.len() >= min_samples).collect();

    let mut labels: Vec<Option<usize>> = vec![None; n];
    let mut next = 0;
    for seed in 0..n {
        if labels[seed].is_some() || !core[seed] {
            continue;
        }
        labels[seed] = Some(next);
        let mut queue = VecDeque::from([seed]);
        while let Some(p) = queue.pop_front() {
            for &q in &neighbours[p] {
                if labels[q].is_none() {
                    labels[q] = Some(next);
                    if core[q] {
                        queue.push_back(q);
                    }
                }
            }
        }
        next += 1;
    }
    Ok(ClusterAssignment::from_labels(&labels))
}
