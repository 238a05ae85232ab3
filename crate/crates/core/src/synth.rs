//! Deterministic synthetic material: tone syllables rendered from
//! transcriptions, and a two-family dialect corpus with gold labels.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dialect::{DialectCorpus, RegionLexicon};
use crate::error::Result;
use crate::pitch::AudioClip;
use crate::tone::{PitchCurve, Transcription};

pub const SAMPLE_RATE: u32 = 16000;

/// Four contour shapes: rise, fall, dip, rise-fall. A z-normalized feature
/// keeps shape only, so level tones and same-shape pairs are excluded.
pub const CONTOUR_TONES: [&str; 4] = ["35", "51", "214", "354"];

/// Pure tone at a fixed frequency.
pub fn sine(freq: f64, secs: f64, amplitude: f64) -> AudioClip {
    render(|_| freq, secs, amplitude, 0.0, &mut ChaCha8Rng::seed_from_u64(0))
}

/// Linear frequency sweep from `f_start` to `f_end`.
pub fn glide(f_start: f64, f_end: f64, secs: f64, amplitude: f64) -> AudioClip {
    render(|s| f_start + (f_end - f_start) * s, secs, amplitude, 0.0, &mut ChaCha8Rng::seed_from_u64(0))
}

/// Speaker and recording parameters for one rendered syllable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Voice {
    /// F0 of pitch level 1, in Hz.
    pub floor_hz: f64,
    /// Octaves spanned between pitch levels 1 and 5.
    pub span_octaves: f64,
    pub secs: f64,
    pub amplitude: f64,
    /// Standard deviation of additive noise, relative to full scale.
    pub noise: f64,
}

impl Default for Voice {
    fn default() -> Self {
        Voice {
            floor_hz: 130.0,
            span_octaves: 1.0,
            secs: 0.4,
            amplitude: 0.5,
            noise: 0.002,
        }
    }
}

impl Voice {
    fn sample(rng: &mut impl Rng) -> Self {
        Voice {
            floor_hz: rng.gen_range(95.0..170.0),
            span_octaves: rng.gen_range(0.8..1.2),
            secs: rng.gen_range(0.3..0.45),
            amplitude: rng.gen_range(0.3..0.8),
            noise: 0.002,
        }
    }
}

/// Renders a syllable whose F0 follows the transcription's pitch curve.
pub fn tone_clip(t: &Transcription, voice: &Voice, seed: u64) -> AudioClip {
    let curve = PitchCurve::of(t);
    let hz = |s: f64| {
        let level = curve.eval(1.0 + 2.0 * s).clamp(1.0, 5.0);
        voice.floor_hz * 2f64.powf((level - 1.0) / 4.0 * voice.span_octaves)
    };
    render(hz, voice.secs, voice.amplitude, voice.noise, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Three-harmonic voiced source with 10 ms fades, framed by 30 ms of
/// near-silence. `hz` maps normalized time in `[0, 1]` to F0.
fn render(hz: impl Fn(f64) -> f64, secs: f64, amplitude: f64, noise: f64, rng: &mut ChaCha8Rng) -> AudioClip {
    let sr = f64::from(SAMPLE_RATE);
    let pad = (0.03 * sr) as usize;
    let n = (secs * sr) as usize;
    let fade = (0.01 * sr) as usize;
    let mut samples = vec![0.0; pad];
    let mut phase = 0.0f64;
    for i in 0..n {
        let s = i as f64 / (n - 1).max(1) as f64;
        let env = (i.min(n - 1 - i) as f64 / fade as f64).min(1.0);
        let v = phase.sin() + 0.5 * (2.0 * phase).sin() + 0.25 * (3.0 * phase).sin();
        samples.push(amplitude * env * v / 1.75);
        phase = (phase + 2.0 * PI * hz(s) / sr) % (2.0 * PI);
    }
    samples.extend(std::iter::repeat(0.0).take(pad));
    if noise > 0.0 {
        for x in &mut samples {
            let u: f64 = rng.gen_range(-1.0..1.0);
            *x += noise * u * 3f64.sqrt();
        }
    }
    AudioClip::new(samples, SAMPLE_RATE).expect("rendered clip is valid")
}

/// `per_class` clips of every transcription, each from a randomly drawn
/// voice; class-major order.
pub fn tone_corpus(classes: &[Transcription], per_class: usize, seed: u64) -> Vec<(AudioClip, Transcription)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(classes.len() * per_class);
    for t in classes {
        for _ in 0..per_class {
            let voice = Voice::sample(&mut rng);
            out.push((tone_clip(t, &voice, rng.gen()), *t));
        }
    }
    out
}

pub fn contour_tones() -> Vec<Transcription> {
    CONTOUR_TONES.iter().map(|s| s.parse().expect("valid token")).collect()
}

const TEMPLATE_A: [&str; 8] = ["55", "35", "214", "51", "33", "24", "42", "313"];
const TEMPLATE_B: [&str; 8] = ["11", "53", "453", "15", "22", "452", "13", "131"];

/// Six regions: three copies of each of two template lexicons, each copy
/// with one randomly chosen word moved by one pitch level in one digit.
/// Gold label 0 for the first template, 1 for the second.
pub fn two_family_corpus(seed: u64) -> Result<DialectCorpus> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut regions = Vec::new();
    let mut gold = BTreeMap::new();
    for (family, template) in [TEMPLATE_A, TEMPLATE_B].iter().enumerate() {
        for copy in 0..3 {
            let id = format!("{}{}", ["A", "B"][family], copy + 1);
            let mut words: Vec<(String, Transcription)> = template
                .iter()
                .enumerate()
                .map(|(w, tok)| (format!("w{:02}", w + 1), tok.parse().expect("valid token")))
                .collect();
            let w = rng.gen_range(0..words.len());
            let mut digits = words[w].1.digits().to_vec();
            let pos = rng.gen_range(0..digits.len());
            digits[pos] = match digits[pos] {
                1 => 2,
                5 => 4,
                d if rng.gen_bool(0.5) => d + 1,
                d => d - 1,
            };
            words[w].1 = Transcription::new(&digits).expect("digit kept in range");
            regions.push(RegionLexicon::new(id.clone(), words)?);
            gold.insert(id, family as u8);
        }
    }
    DialectCorpus::new(regions)?.with_gold(gold)
}
