//! Independent reference implementations used as test oracles.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tonelab::cluster::Linkage;
use tonelab::tone::{DistanceMatrix, PitchCurve, Transcription};

pub fn t(s: &str) -> Transcription {
    s.parse().unwrap()
}

/// Adaptive Simpson on `[a, b]`, recursing at least `min_depth` levels so
/// kinks of `|f|` are always bracketed.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || (depth < 44 && delta.abs() <= 15.0 * tol) {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
}

/// Tone distance by numerical quadrature of the absolute curve difference.
pub fn quad_tone_distance(l1: &Transcription, l2: &Transcription) -> f64 {
    let (c1, c2) = (PitchCurve::of(l1), PitchCurve::of(l2));
    simpson(&|x| (c1.eval(x) - c2.eval(x)).abs(), 1.0, 3.0, 1e-13)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> DistanceMatrix {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = rng.gen_range(0.05..1.0);
            v[i * n + j] = d;
            v[j * n + i] = d;
        }
    }
    DistanceMatrix::new((0..n).map(|i| format!("r{i}")).collect(), v).unwrap()
}

/// A cluster in the oracle: its leaves with the weight each leaf carries in
/// the equal-split (weighted/median) centre, and its scipy-style id.
#[derive(Clone)]
struct Node {
    id: usize,
    leaves: Vec<(usize, f64)>,
}

/// Σ wₐ·w_b·f(a, b) over leaves of two clusters.
fn pair_sum(x: &Node, y: &Node, f: &dyn Fn(usize, usize) -> f64, weighted: bool) -> f64 {
    let mut s = 0.0;
    for &(a, wa) in &x.leaves {
        for &(b, wb) in &y.leaves {
            let w = if weighted { wa * wb } else { 1.0 };
            s += w * f(a, b);
        }
    }
    s
}

/// Recomputes every cluster-pair dissimilarity from leaf-level definitions at
/// each step: min/max/mean set distances, equal-split averages for wa, and
/// squared centre separations (uniform or equal-split centres, Ward scaled)
/// for uc/wc/mv. Returns `(a, b, height, size)` per merge.
pub fn naive_linkage(d: &DistanceMatrix, linkage: Linkage) -> Vec<(usize, usize, f64, usize)> {
    let n = d.len();
    let dist = |a: usize, b: usize| d.get(a, b);
    let sq = |a: usize, b: usize| d.get(a, b) * d.get(a, b);
    let mut nodes: Vec<Node> = (0..n).map(|i| Node { id: i, leaves: vec![(i, 1.0)] }).collect();
    let mut out = Vec::new();
    for step in 0..n - 1 {
        let mut best: Option<(f64, (usize, usize), usize, usize)> = None;
        for x in 0..nodes.len() {
            for y in x + 1..nodes.len() {
                let (p, q) = (&nodes[x], &nodes[y]);
                let (np, nq) = (p.leaves.len() as f64, q.leaves.len() as f64);
                let v = match linkage {
                    Linkage::Single => p.leaves.iter().flat_map(|a| q.leaves.iter().map(move |b| dist(a.0, b.0))).fold(f64::INFINITY, f64::min),
                    Linkage::Complete => p.leaves.iter().flat_map(|a| q.leaves.iter().map(move |b| dist(a.0, b.0))).fold(0.0, f64::max),
                    Linkage::Average => pair_sum(p, q, &dist, false) / (np * nq),
                    Linkage::Weighted => pair_sum(p, q, &dist, true),
                    Linkage::Centroid => {
                        pair_sum(p, q, &sq, false) / (np * nq)
                            - 0.5 * pair_sum(p, p, &sq, false) / (np * np)
                            - 0.5 * pair_sum(q, q, &sq, false) / (nq * nq)
                    }
                    Linkage::Median => pair_sum(p, q, &sq, true) - 0.5 * pair_sum(p, p, &sq, true) - 0.5 * pair_sum(q, q, &sq, true),
                    Linkage::Ward => {
                        let c = pair_sum(p, q, &sq, false) / (np * nq)
                            - 0.5 * pair_sum(p, p, &sq, false) / (np * np)
                            - 0.5 * pair_sum(q, q, &sq, false) / (nq * nq);
                        2.0 * np * nq / (np + nq) * c
                    }
                };
                let key = (p.id.min(q.id), p.id.max(q.id));
                if best.map_or(true, |(bv, bk, _, _)| v < bv || (v == bv && key < bk)) {
                    best = Some((v, key, x, y));
                }
            }
        }
        let (v, (a, b), x, y) = best.unwrap();
        let q = nodes.remove(y);
        let p = nodes.remove(x);
        let mut leaves: Vec<(usize, f64)> = p.leaves.iter().map(|&(l, w)| (l, 0.5 * w)).collect();
        leaves.extend(q.leaves.iter().map(|&(l, w)| (l, 0.5 * w)));
        let size = leaves.len();
        nodes.push(Node { id: n + step, leaves });
        let height = if linkage.squared() { v.max(0.0).sqrt() } else { v };
        out.push((a, b, height, size));
    }
    out
}

/// Brute-force density clustering: core points are joined into components
/// through core-core links; each border point goes to the adjacent component
/// whose smallest core index is lowest. Labels are raw component ranks.
pub fn naive_dbscan(points: &[Vec<f64>], eps: f64, min_samples: usize) -> Vec<Option<usize>> {
    let n = points.len();
    let close = |i: usize, j: usize| {
        points[i].iter().zip(&points[j]).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt() <= eps
    };
    let core: Vec<bool> = (0..n).map(|i| (0..n).filter(|&j| close(i, j)).count() >= min_samples).collect();
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    for i in 0..n {
        for j in 0..i {
            if core[i] && core[j] && close(i, j) {
                let (ri, rj) = (find(&mut comp, i), find(&mut comp, j));
                comp[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    // Union by smaller index keeps each root at its component's lowest core.
    let mut roots: Vec<usize> = (0..n).filter(|&i| core[i]).map(|i| find(&mut comp, i)).collect();
    roots.sort_unstable();
    roots.dedup();
    let rank = |r: usize| roots.binary_search(&r).unwrap();
    (0..n)
        .map(|i| {
            if core[i] {
                Some(rank(find(&mut comp, i)))
            } else {
                (0..n)
                    .filter(|&j| core[j] && close(i, j))
                    .map(|j| rank(find(&mut comp, j)))
                    .min()
            }
        })
        .collect()
}

/// Gaussian blobs plus uniform background, in 2-D.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let centres: Vec<(f64, f64)> = (0..rng.gen_range(1..5)).map(|_| (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0))).collect();
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.2) {
                vec![rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)]
            } else {
                let (cx, cy) = centres[rng.gen_range(0..centres.len())];
                let r = rng.gen_range(0.0..1.0f64).sqrt();
                let a = rng.gen_range(0.0..std::f64::consts::TAU);
                vec![cx + r * a.cos(), cy + r * a.sin()]
            }
        })
        .collect()
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}

/// Matrix of absolute differences between 1-D coordinates.
pub fn line_matrix(xs: &[f64]) -> DistanceMatrix {
    let n = xs.len();
    let v = (0..n * n).map(|k| (xs[k / n] - xs[k % n]).abs()).collect();
    DistanceMatrix::new((0..n).map(|i| format!("p{i}")).collect(), v).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
