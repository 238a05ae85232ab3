//! Classical (Torgerson) multidimensional scaling: double-centre the squared
//! dissimilarities, `B = −½·J·D²·J`, and scale the top eigenvectors of `B`
//! by the square roots of their eigenvalues.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tone::DistanceMatrix;

const TOLERANCE: f64 = 1e-10;
const MAX_ITERATIONS: usize = 10_000;

/// `n × dims` embedding, row-major, with the eigenvalue of each axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coordinates {
    pub labels: Vec<String>,
    pub dims: usize,
    pub values: Vec<f64>,
    pub eigenvalues: Vec<f64>,
}

impl Coordinates {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, item: usize, axis: usize) -> f64 {
        self.values[item * self.dims + axis]
    }

    pub fn column(&self, axis: usize) -> Vec<f64> {
        (0..self.len()).map(|i| self.get(i, axis)).collect()
    }

    /// `item,x[,y]` rows, six decimals.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["item", "x"];
        if self.dims == 2 {
            header.push("y");
        }
        w.write_record(&header)?;
        for (i, label) in self.labels.iter().enumerate() {
            let mut rec = vec![label.clone()];
            rec.extend((0..self.dims).map(|c| format!("{:.6}", self.get(i, c))));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("<csv output>", e))?;
        Ok(())
    }
}

struct Sym {
    n: usize,
    a: Vec<f64>,
}

impl Sym {
    fn mul(&self, v: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.a[i * self.n..(i + 1) * self.n].iter().zip(v).map(|(x, y)| x * y).sum();
        }
    }

    fn frobenius(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn shifted(&self, s: f64) -> Sym {
        let mut a = self.a.clone();
        for i in 0..self.n {
            a[i * self.n + i] += s;
        }
        Sym { n: self.n, a }
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

/// Dominant (largest-magnitude) eigenpair by power iteration.
fn power_iteration(m: &Sym, start: &[f64]) -> Result<(f64, Vec<f64>)> {
    let scale = m.frobenius();
    let mut v = start.to_vec();
    normalize(&mut v);
    if scale == 0.0 {
        return Ok((0.0, v));
    }
    let mut mv = vec![0.0; m.n];
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        m.mul(&v, &mut mv);
        let rayleigh: f64 = v.iter().zip(&mv).map(|(a, b)| a * b).sum();
        residual = mv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - rayleigh * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= TOLERANCE * scale {
            return Ok((rayleigh, v));
        }
        if normalize(&mut mv) == 0.0 {
            // start vector was in the null space
            return Ok((0.0, v));
        }
        std::mem::swap(&mut v, &mut mv);
    }
    Err(Error::NonConvergence {
        residual: residual / scale,
        iterations: MAX_ITERATIONS,
    })
}

/// Largest algebraic eigenpair: power iteration, re-run with a shift when a
/// negative eigenvalue dominates.
fn top_eigenpair(m: &Sym, start: &[f64]) -> Result<(f64, Vec<f64>)> {
    let (mu, v) = power_iteration(m, start)?;
    if mu >= 0.0 {
        return Ok((mu, v));
    }
    let shift = -mu;
    let (shifted, v) = power_iteration(&m.shifted(shift), start)?;
    Ok((shifted - shift, v))
}

/// Embeds the items of `d` in `dims` (1 or 2) dimensions. Each axis is
/// oriented so the first item with a non-negligible coordinate is positive
/// (normally item 0).
pub fn classical_mds(d: &DistanceMatrix, dims: usize) -> Result<Coordinates> {
    if !(1..=2).contains(&dims) {
        return Err(Error::invalid(format!("MDS supports 1 or 2 dimensions, got {dims}")));
    }
    let n = d.len();
    if n < dims + 1 {
        return Err(Error::invalid(format!("{dims}-D MDS needs at least {} items, got {n}", dims + 1)));
    }
    let sq: Vec<f64> = (0..n * n).map(|k| d.get(k / n, k % n).powi(2)).collect();
    let row_mean: Vec<f64> = (0..n).map(|i| sq[i * n..(i + 1) * n].iter().sum::<f64>() / n as f64).collect();
    let grand = row_mean.iter().sum::<f64>() / n as f64;
    let mut b = Sym {
        n,
        a: (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                -0.5 * (sq[k] - row_mean[i] - row_mean[j] + grand)
            })
            .collect(),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0x6d64_73);
    let mut values = vec![0.0; n * dims];
    let mut eigenvalues = Vec::with_capacity(dims);
    for axis in 0..dims {
        let start: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (lambda, mut v) = top_eigenpair(&b, &start)?;
        let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if let Some(&lead) = v.iter().find(|x| x.abs() > 1e-9 * peak) {
            if lead < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
        let s = lambda.max(0.0).sqrt();
        for (i, x) in v.iter().enumerate() {
            values[i * dims + axis] = x * s;
        }
        for i in 0..n {
            for j in 0..n {
                b.a[i * n + j] -= lambda * v[i] * v[j];
            }
        }
        eigenvalues.push(lambda);
    }
    Ok(Coordinates {
        labels: d.labels().to_vec(),
        dims,
        values,
        eigenvalues,
    })
}
