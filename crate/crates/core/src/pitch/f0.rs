//! Frame-wise F0 estimation with the cumulative mean normalized difference
//! (YIN). For lag `τ`, `d(τ) = Σ_j (x_j − x_{j+τ})²` over a fixed window and
//! `d'(τ) = d(τ)·τ / Σ_{i=1..τ} d(i)`. The first lag whose `d'` drops below
//! the threshold is followed down to its local minimum and refined by a
//! parabola through the neighbouring raw differences.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::AudioClip;
use crate::error::{Error, Result};

/// Lowest and highest F0 the tracker is allowed to report, in Hz.
pub const F0_LIMITS: (f64, f64) = (50.0, 600.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct F0Config {
    pub frame_ms: f64,
    pub hop_ms: f64,
    pub fmin: f64,
    pub fmax: f64,
    /// Absolute threshold on the normalized difference.
    pub voicing_threshold: f64,
}

impl Default for F0Config {
    fn default() -> Self {
        F0Config {
            frame_ms: 40.0,
            hop_ms: 10.0,
            fmin: 50.0,
            fmax: 600.0,
            voicing_threshold: 0.15,
        }
    }
}

struct FrameGeometry {
    frame: usize,
    hop: usize,
    window: usize,
    min_lag: usize,
    max_lag: usize,
}

impl F0Config {
    fn geometry(&self, sample_rate: u32) -> Result<FrameGeometry> {
        let sr = f64::from(sample_rate);
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.frame_ms) || !ok(self.hop_ms) || !ok(self.voicing_threshold) {
            return Err(Error::invalid("frame, hop and threshold must be positive"));
        }
        if !(F0_LIMITS.0..=F0_LIMITS.1).contains(&self.fmin)
            || !(F0_LIMITS.0..=F0_LIMITS.1).contains(&self.fmax)
            || self.fmin >= self.fmax
        {
            return Err(Error::invalid(format!(
                "need {} <= fmin < fmax <= {} Hz, got fmin={} fmax={}",
                F0_LIMITS.0, F0_LIMITS.1, self.fmin, self.fmax
            )));
        }
        let frame = (self.frame_ms * sr / 1000.0).round() as usize;
        let hop = ((self.hop_ms * sr / 1000.0).round() as usize).max(1);
        let max_lag = (sr / self.fmin).ceil() as usize;
        let min_lag = ((sr / self.fmax).floor() as usize).max(2);
        if frame < max_lag + 2 * min_lag {
            return Err(Error::invalid(format!(
                "a {} ms frame is too short to observe {} Hz",
                self.frame_ms, self.fmin
            )));
        }
        Ok(FrameGeometry {
            frame,
            hop,
            window: frame - max_lag - 1,
            min_lag,
            max_lag,
        })
    }
}

/// Per-frame F0 in Hz; 0 marks an unvoiced frame. Times are frame centres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct F0Track {
    pub times: Vec<f64>,
    pub f0: Vec<f64>,
    pub frame_hop: f64,
}

impl F0Track {
    pub fn len(&self) -> usize {
        self.f0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f0.is_empty()
    }

    pub fn voiced_count(&self) -> usize {
        self.f0.iter().filter(|&&f| f > 0.0).count()
    }

    /// Index range of the longest run of consecutive voiced frames (earliest on ties).
    pub fn longest_voiced_run(&self) -> Option<std::ops::Range<usize>> {
        let mut best: Option<std::ops::Range<usize>> = None;
        let mut start = None;
        for i in 0..=self.f0.len() {
            let voiced = self.f0.get(i).is_some_and(|&f| f > 0.0);
            match (voiced, start) {
                (true, None) => start = Some(i),
                (false, Some(s)) => {
                    if best.as_ref().map_or(true, |b| i - s > b.len()) {
                        best = Some(s..i);
                    }
                    start = None;
                }
                _ => {}
            }
        }
        best
    }

    /// CSV export with columns `time_s,f0_hz`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["time_s", "f0_hz"])?;
        for (t, f) in self.times.iter().zip(&self.f0) {
            w.write_record([format!("{t:.6}"), format!("{f:.6}")])?;
        }
        w.flush().map_err(|e| Error::io("<csv output>", e))?;
        Ok(())
    }
}

/// Tracks F0 across the clip, one estimate per hop.
pub fn extract_f0(clip: &AudioClip, cfg: &F0Config) -> Result<F0Track> {
    let sr = clip.sample_rate();
    let geo = cfg.geometry(sr)?;
    let x = clip.samples();
    if x.len() < geo.frame {
        return Err(Error::ClipTooShort {
            samples: x.len(),
            frame: geo.frame,
        });
    }
    let srf = f64::from(sr);
    let n_frames = (x.len() - geo.frame) / geo.hop + 1;
    let mut diff = vec![0.0; geo.max_lag + 2];
    let mut cmnd = vec![0.0; geo.max_lag + 2];
    let mut times = Vec::with_capacity(n_frames);
    let mut f0 = Vec::with_capacity(n_frames);
    for k in 0..n_frames {
        let start = k * geo.hop;
        let frame = &x[start..start + geo.frame];
        times.push((start as f64 + geo.frame as f64 / 2.0) / srf);
        f0.push(frame_f0(frame, &geo, srf, cfg, &mut diff, &mut cmnd).unwrap_or(0.0));
    }
    Ok(F0Track {
        times,
        f0,
        frame_hop: geo.hop as f64 / srf,
    })
}

fn frame_f0(
    frame: &[f64],
    geo: &FrameGeometry,
    sr: f64,
    cfg: &F0Config,
    diff: &mut [f64],
    cmnd: &mut [f64],
) -> Option<f64> {
    let w = geo.window;
    let energy: f64 = frame[..w].iter().map(|v| v * v).sum();
    if energy <= 1e-20 * w as f64 {
        return None;
    }
    let last = geo.max_lag + 1;
    diff[0] = 0.0;
    cmnd[0] = 1.0;
    let mut running = 0.0;
    for tau in 1..=last {
        let d: f64 = frame[..w]
            .iter()
            .zip(&frame[tau..tau + w])
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        diff[tau] = d;
        running += d;
        cmnd[tau] = if running > 0.0 { d * tau as f64 / running } else { 1.0 };
    }

    let mut tau = (geo.min_lag..=geo.max_lag).find(|&t| cmnd[t] < cfg.voicing_threshold)?;
    while tau < geo.max_lag && cmnd[tau + 1] < cmnd[tau] {
        tau += 1;
    }
    let (a, b, c) = (diff[tau - 1], diff[tau], diff[tau + 1]);
    let curvature = a - 2.0 * b + c;
    let shift = if curvature > 0.0 {
        (0.5 * (a - c) / curvature).clamp(-0.5, 0.5)
    } else {
        0.0
    };
    let hz = sr / (tau as f64 + shift);
    (cfg.fmin..=cfg.fmax).contains(&hz).then_some(hz)
}
