use std::collections::BTreeSet;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{pitch_distance_hat, pitch_loss_subgradient, PitchTriple};
use crate::error::{Error, Result};
use crate::pitch::ContourFeature;
use crate::tone::Transcription;

const FORMAT: &str = "tonelab.linear-tone-model";
const VERSION: u32 = 1;
const SQUASH_OFFSET: f64 = 1.0;
const SQUASH_SCALE: f64 = 4.0;
const INIT_RANGE: f64 = 0.1;

/// Affine map from a `K`-point contour to three logits, squashed into the
/// pitch range by `z = 1 + 4·σ(W·x + b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearToneModel {
    k: usize,
    /// 3 × K, row-major.
    weights: Vec<f64>,
    bias: [f64; 3],
}

#[derive(Serialize, Deserialize)]
struct Squash {
    offset: f64,
    scale: f64,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    k: usize,
    weights: Vec<f64>,
    bias: [f64; 3],
    squash: Squash,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl LinearToneModel {
    pub fn zeros(k: usize) -> Self {
        LinearToneModel {
            k,
            weights: vec![0.0; 3 * k],
            bias: [0.0; 3],
        }
    }

    /// Seeded uniform(−0.1, 0.1) initialization.
    pub fn seeded(k: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights = (0..3 * k).map(|_| rng.gen_range(-INIT_RANGE..INIT_RANGE)).collect();
        let bias = [(); 3].map(|_| rng.gen_range(-INIT_RANGE..INIT_RANGE));
        LinearToneModel { k, weights, bias }
    }

    pub fn feature_len(&self) -> usize {
        self.k
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> [f64; 3] {
        self.bias
    }

    pub fn param_count(&self) -> usize {
        self.weights.len() + 3
    }

    fn logits(&self, x: &[f64]) -> [f64; 3] {
        let mut u = self.bias;
        for (r, out) in u.iter_mut().enumerate() {
            *out += self.weights[r * self.k..(r + 1) * self.k]
                .iter()
                .zip(x)
                .map(|(w, v)| w * v)
                .sum::<f64>();
        }
        u
    }

    fn check_len(&self, x: &ContourFeature) -> Result<()> {
        if x.len() != self.k {
            return Err(Error::DimensionMismatch {
                what: "contour feature length",
                expected: self.k,
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Forward pass; the triple doubles as the clip's tonal embedding.
    pub fn embed(&self, x: &ContourFeature) -> Result<PitchTriple> {
        self.check_len(x)?;
        let u = self.logits(x.values());
        PitchTriple::new(u.map(|v| SQUASH_OFFSET + SQUASH_SCALE * sigmoid(v)))
    }

    pub fn to_json(&self) -> Result<String> {
        let file = ModelFile {
            format: FORMAT.to_string(),
            version: VERSION,
            k: self.k,
            weights: self.weights.clone(),
            bias: self.bias,
            squash: Squash {
                offset: SQUASH_OFFSET,
                scale: SQUASH_SCALE,
            },
        };
        Ok(serde_json::to_string_pretty(&file)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        if file.format != FORMAT {
            return Err(Error::Model(format!("unexpected format {:?}", file.format)));
        }
        if file.version != VERSION {
            return Err(Error::Model(format!("unsupported version {}", file.version)));
        }
        if file.squash.offset != SQUASH_OFFSET || file.squash.scale != SQUASH_SCALE {
            return Err(Error::Model("only the 1 + 4·sigmoid squash is supported".into()));
        }
        if file.k == 0 || file.weights.len() != 3 * file.k {
            return Err(Error::Model(format!(
                "expected {} weights for k = {}, found {}",
                3 * file.k,
                file.k,
                file.weights.len()
            )));
        }
        if file.weights.iter().chain(&file.bias).any(|v| !v.is_finite()) {
            return Err(Error::Model("non-finite parameter".into()));
        }
        Ok(LinearToneModel {
            k: file.k,
            weights: file.weights,
            bias: file.bias,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

const ADAM_B1: f64 = 0.9;
const ADAM_B2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub lr: f64,
    pub epochs: usize,
    pub seed: u64,
    /// Weight-decay coefficient on `W` (bias is not penalized).
    pub l2: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lr: 0.02,
            epochs: 2000,
            seed: 0,
            l2: 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: LinearToneModel,
    /// Pitch loss of each iterate: entry `e` is the loss before update `e`,
    /// the last entry is the loss after the final update.
    pub losses: Vec<f64>,
    /// Index into `losses` of the returned parameters.
    pub best_epoch: usize,
}

fn total_loss(model: &LinearToneModel, data: &[(ContourFeature, Transcription)]) -> Result<f64> {
    data.iter()
        .map(|(x, y)| Ok(pitch_distance_hat(&model.embed(x)?, y)))
        .sum()
}

/// Full-batch subgradient descent on the summed pitch loss, starting from
/// `model`. Each coordinate's step is the batch-mean subgradient rescaled by
/// running first and second moment estimates (Adam), so a coordinate whose
/// sigmoid has saturated still moves at rate about `lr`. Subgradient steps
/// are not monotone, so the lowest-loss iterate is kept.
pub fn subgradient_descent(
    mut model: LinearToneModel,
    data: &[(ContourFeature, Transcription)],
    cfg: &TrainConfig,
) -> Result<TrainOutcome> {
    if data.is_empty() {
        return Err(Error::Empty("training data"));
    }
    for (x, _) in data {
        model.check_len(x)?;
    }
    if !(cfg.lr.is_finite() && cfg.lr >= 0.0 && cfg.l2.is_finite() && cfg.l2 >= 0.0) {
        return Err(Error::invalid("lr and l2 must be finite and nonnegative"));
    }
    let k = model.k;
    let scale = 1.0 / data.len() as f64;
    let mut losses = Vec::with_capacity(cfg.epochs + 1);
    let mut best = (f64::INFINITY, 0, model.clone());
    let mut m = vec![0.0; 3 * k + 3];
    let mut v = vec![0.0; 3 * k + 3];
    for epoch in 0..=cfg.epochs {
        let loss = total_loss(&model, data)?;
        losses.push(loss);
        if loss < best.0 {
            best = (loss, epoch, model.clone());
        }
        if epoch == cfg.epochs {
            break;
        }
        let mut grad_w = vec![0.0; 3 * k];
        let mut grad_b = [0.0; 3];
        for (x, y) in data {
            let u = model.logits(x.values());
            let s = u.map(sigmoid);
            let z = PitchTriple::new(s.map(|v| SQUASH_OFFSET + SQUASH_SCALE * v))?;
            let g = pitch_loss_subgradient(&z, y);
            for r in 0..3 {
                let du = g[r] * SQUASH_SCALE * s[r] * (1.0 - s[r]);
                if du == 0.0 {
                    continue;
                }
                grad_b[r] += du;
                for (gw, v) in grad_w[r * k..(r + 1) * k].iter_mut().zip(x.values()) {
                    *gw += du * v;
                }
            }
        }
        let t = (epoch + 1) as i32;
        let (c1, c2) = (1.0 - ADAM_B1.powi(t), 1.0 - ADAM_B2.powi(t));
        let params = model.weights.iter_mut().chain(model.bias.iter_mut());
        let grads = grad_w.iter().chain(&grad_b);
        for (i, (p, g)) in params.zip(grads).enumerate() {
            let decay = if i < 3 * k { 2.0 * cfg.l2 * *p } else { 0.0 };
            let g = scale * g + decay;
            m[i] = ADAM_B1 * m[i] + (1.0 - ADAM_B1) * g;
            v[i] = ADAM_B2 * v[i] + (1.0 - ADAM_B2) * g * g;
            *p -= cfg.lr * (m[i] / c1) / ((v[i] / c2).sqrt() + ADAM_EPS);
        }
    }
    let (_, best_epoch, model) = best;
    Ok(TrainOutcome {
        model,
        losses,
        best_epoch,
    })
}

/// Trains a [`LinearToneModel`] from a seeded initialization.
pub fn train_tone_model(data: &[(ContourFeature, Transcription)], cfg: &TrainConfig) -> Result<TrainOutcome> {
    let first = data.first().ok_or(Error::Empty("training data"))?;
    let labels: BTreeSet<&Transcription> = data.iter().map(|(_, y)| y).collect();
    if labels.len() < 2 {
        return Err(Error::invalid("training data needs at least 2 distinct labels"));
    }
    subgradient_descent(LinearToneModel::seeded(first.0.len(), cfg.seed), data, cfg)
}
