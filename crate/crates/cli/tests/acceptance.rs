//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion; exits nonzero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use tonelab::cluster::{classical_mds, dbscan, hierarchical_cluster, ClusterAssignment, Linkage};
use tonelab::dialect::{dialect_cluster_pipeline, tone_clustering_pipeline, Metric, ToneClusteringConfig};
use tonelab::learn::{decode_eq4, linearity, pitch_distance_hat, pitch_loss_subgradient, train_tone_model, PitchTriple, TrainConfig};
use tonelab::pitch::{clip_feature, extract_f0, AudioClip, F0Config, DEFAULT_K};
use tonelab::synth::{contour_tones, tone_corpus, two_family_corpus};
use tonelab::tone::{all_transcriptions, build_distance_matrix, normalize_contour, relative_pitch, tone_distance, variance_metric, Transcription};

use common::{line_matrix, naive_dbscan, naive_linkage, pearson, quad_tone_distance, random_matrix, random_points, rng, t};

type Verdict = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: f64, what: &str) -> Result<(), String> {
    check(elapsed.as_secs_f64() < limit, || format!("{what} took {elapsed:.2?}, limit {limit} s"))
}

fn c1_golden_distance() -> Verdict {
    let start = Instant::now();
    let d = tone_distance(&t("41"), &t("312"));
    let all = all_transcriptions();
    let m = build_distance_matrix(&all).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check((2.26..=2.28).contains(&d), || format!("D(41,312) = {d}"))?;
    let mut worst = 0.0f64;
    for (i, a) in all.iter().enumerate() {
        for (j, b) in all.iter().enumerate() {
            worst = worst.max((m.get(i, j) - quad_tone_distance(a, b)).abs());
        }
    }
    check(worst <= 1e-9, || format!("quadrature disagreement {worst:e}"))?;
    within(elapsed, 1.0, "analytic evaluation")?;
    Ok(format!("D(41,312) = {d:.6}; max |analytic - quadrature| = {worst:.1e} over 150x150; {elapsed:.2?}"))
}

fn c2_variance_table() -> Verdict {
    let start = Instant::now();
    let rows = [("445", 0.0000), ("45", 0.1225), ("245", 0.1608), ("255", 0.2311), ("154", 0.2829), ("251", 0.5243)];
    let mut worst = 0.0f64;
    for (tok, want) in rows {
        let got = variance_metric(&t("445"), &t(tok));
        worst = worst.max((got - want).abs());
        check((got - want).abs() <= 5e-4, || format!("(445) vs ({tok}): {got:.5} vs {want}"))?;
    }
    within(start.elapsed(), 1.0, "table")?;
    Ok(format!("6 rows, max deviation {worst:.1e}"))
}

fn c3_normalization() -> Verdict {
    let got = normalize_contour(&t("412")).0;
    let want = [1.0, 0.0, 1.0 / 3.0];
    check(got.iter().zip(want).all(|(a, b)| (a - b).abs() <= 1e-3), || format!("(412) -> {got:?}"))?;
    let two = relative_pitch(&t("25"));
    check(two == [0.0, 1.0], || format!("(25) -> {two:?}"))?;
    Ok(format!("(412) -> ({:.3}, {:.3}, {:.3}); (25) -> (0, 1)", got[0], got[1], got[2]))
}

fn c4_pseudometric() -> Verdict {
    let start = Instant::now();
    let all = all_transcriptions();
    let n = all.len();
    let m = build_distance_matrix(&all).map_err(|e| e.to_string())?;
    for i in 0..n {
        check(m.get(i, i) == 0.0, || format!("D({0},{0}) = {1}", all[i], m.get(i, i)))?;
        for j in 0..n {
            check(m.get(i, j) == m.get(j, i), || format!("asymmetric at ({}, {})", all[i], all[j]))?;
            check(tone_distance(&all[i], &all[j]) == m.get(i, j), || "matrix differs from direct evaluation".into())?;
        }
    }
    let mut triples = 0u64;
    let mut worst = f64::NEG_INFINITY;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                triples += 1;
                let (ab, bc, ac) = (m.get(a, b), m.get(b, c), m.get(a, c));
                for excess in [ac - ab - bc, ab - ac - bc, bc - ab - ac] {
                    worst = worst.max(excess);
                }
            }
        }
    }
    // Excess up to a few ulps of the summed distances is rounding, not violation.
    check(worst <= 1e-12, || format!("triangle inequality violated by {worst:e}"))?;
    check(triples == 551_300, || format!("{triples} triples"))?;
    within(start.elapsed(), 10.0, "pseudometric suite")?;
    Ok(format!("{triples} triples x 3 orientations; max excess {worst:.1e}; {:.2?}", start.elapsed()))
}

fn c5_clustering_oracles() -> Verdict {
    let mut r = rng(5);
    let mut merges = 0;
    for case in 0..200 {
        let n = r.gen_range(2..=8);
        let d = random_matrix(&mut r, n);
        for linkage in Linkage::ALL {
            let got = hierarchical_cluster(&d, linkage).map_err(|e| e.to_string())?;
            let want = naive_linkage(&d, linkage);
            check(got.steps().len() == want.len(), || format!("case {case} {linkage}: step count"))?;
            for (s, (m, w)) in got.steps().iter().zip(&want).enumerate() {
                check((m.a, m.b, m.size) == (w.0, w.1, w.3), || {
                    format!("case {case} {linkage} step {s}: ({}, {}) vs oracle ({}, {})", m.a, m.b, w.0, w.1)
                })?;
                check((m.height - w.2).abs() <= 1e-9 * (1.0 + w.2), || {
                    format!("case {case} {linkage} step {s}: height {} vs {}", m.height, w.2)
                })?;
                merges += 1;
            }
        }
    }
    let mut labelled = 0;
    for case in 0..100 {
        let n = r.gen_range(1..=200);
        let pts = random_points(&mut r, n);
        let eps = r.gen_range(0.2..1.2);
        let min_samples = r.gen_range(1..=8);
        let got = dbscan(&pts, eps, min_samples).map_err(|e| e.to_string())?;
        let want = ClusterAssignment::from_labels(&naive_dbscan(&pts, eps, min_samples));
        check(got.labels() == want.labels(), || format!("dbscan case {case} (n={n}, eps={eps:.3}, min={min_samples}) differs"))?;
        labelled += n;
    }
    Ok(format!("200 matrices x 7 linkages, {merges} merges match; 100 point sets, {labelled} labels match"))
}

fn c6_mds() -> Verdict {
    let mut r = rng(6);
    let mut worst = 1.0f64;
    for case in 0..50 {
        let n = r.gen_range(3..=30);
        let xs: Vec<f64> = (0..n).map(|_| r.gen_range(-10.0..10.0)).collect();
        let c = classical_mds(&line_matrix(&xs), 1).map_err(|e| format!("case {case}: {e}"))?;
        let rr = pearson(&c.column(0), &xs).abs();
        worst = worst.min(rr);
        check(rr > 0.9999, || format!("case {case}: |r| = {rr}"))?;
    }
    Ok(format!("50 point sets, min |r| = {worst:.12}"))
}

fn c7_decoder() -> Verdict {
    let mut r = rng(7);
    let mut two = 0;
    for i in 0..10_000 {
        let z = PitchTriple::new([r.gen_range(1.0..=5.0), r.gen_range(1.0..=5.0), r.gen_range(1.0..=5.0)]).unwrap();
        let beta = if i % 2 == 0 { 0.5 } else { r.gen_range(0.05..3.0) };
        let out = decode_eq4(&z, beta).map_err(|e| e.to_string())?;
        let lin = (z.values()[0] + z.values()[2] - 2.0 * z.values()[1]).abs();
        check((out.len() == 2) == (lin < beta), || format!("{z:?} beta {beta}: {out}"))?;
        check(out.digits().iter().all(|d| (1..=5).contains(d)), || format!("{z:?}: {out}"))?;
        check(linearity(&z) == lin, || "linearity mismatch".into())?;
        two += usize::from(out.len() == 2);
    }
    Ok(format!("10000 triples, {two} two-digit outputs"))
}

fn c8_loss_gradient() -> Verdict {
    let mut r = rng(8);
    let all = all_transcriptions();
    let h = 1e-6;
    let mut worst = 0.0f64;
    let mut drawn = 0;
    while drawn < 1000 {
        let y = all[r.gen_range(0..all.len())];
        let z = [r.gen_range(1.01..4.99), r.gen_range(1.01..4.99), r.gen_range(1.01..4.99)];
        if z.iter().zip(y.expanded()).any(|(a, b)| (a - b).abs() < 1e-3) {
            continue;
        }
        drawn += 1;
        let zt = PitchTriple::new(z).unwrap();
        let g = pitch_loss_subgradient(&zt, &y);
        for i in 0..3 {
            let (mut up, mut down) = (z, z);
            up[i] += h;
            down[i] -= h;
            let f = |v: [f64; 3]| pitch_distance_hat(&PitchTriple::new(v).unwrap(), &y);
            let fd = (f(up) - f(down)) / (2.0 * h);
            worst = worst.max((fd - g[i]).abs());
        }
    }
    check(worst <= 1e-5, || format!("finite-difference error {worst:e}"))?;
    let mut worst_eq = 0.0f64;
    for _ in 0..1000 {
        let (a, b) = (r.gen_range(1..=5u8), r.gen_range(1..=5u8));
        let y = Transcription::new(&[a, b]).unwrap();
        let z = [r.gen_range(1.0..=5.0), r.gen_range(1.0..=5.0), r.gen_range(1.0..=5.0)];
        let (a, b) = (f64::from(a), f64::from(b));
        let eq6_on_expanded = (z[0] - a).abs() + (z[1] - 0.5 * (a + b)).abs() + (z[2] - b).abs();
        let got = pitch_distance_hat(&PitchTriple::new(z).unwrap(), &y);
        worst_eq = worst_eq.max((got - eq6_on_expanded).abs());
    }
    check(worst_eq <= 1e-12, || format!("two-digit loss differs from expanded form by {worst_eq:e}"))?;
    Ok(format!("1000 FD points max error {worst:.1e}; 1000 two-digit pairs max gap {worst_eq:.1e}"))
}

fn sine_clip(freq: f64, secs: f64) -> AudioClip {
    let sr = 16000.0;
    let samples = (0..(secs * sr) as usize)
        .map(|i| 0.5 * (std::f64::consts::TAU * freq * i as f64 / sr).sin())
        .collect();
    AudioClip::new(samples, 16000).unwrap()
}

fn c9_f0() -> Verdict {
    let cfg = F0Config::default();
    let track = extract_f0(&sine_clip(440.0, 0.5), &cfg).map_err(|e| e.to_string())?;
    let voiced: Vec<f64> = track.f0.iter().copied().filter(|&f| f > 0.0).collect();
    let good = voiced.iter().filter(|f| (*f - 440.0).abs() <= 1.0).count();
    check(!voiced.is_empty() && good * 100 >= voiced.len() * 95, || format!("440 Hz: {good}/{} frames within 1 Hz", voiced.len()))?;

    let (f_start, f_end, secs, sr) = (120.0, 240.0, 0.5, 16000.0);
    let rate = (f_end - f_start) / secs;
    let samples = (0..(secs * sr) as usize)
        .map(|i| {
            let t = i as f64 / sr;
            0.5 * (std::f64::consts::TAU * (f_start * t + 0.5 * rate * t * t)).sin()
        })
        .collect();
    let glide = extract_f0(&AudioClip::new(samples, 16000).unwrap(), &cfg).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (&time, &f) in glide.times.iter().zip(&glide.f0) {
        check(f > 0.0, || format!("glide unvoiced at {time:.3} s"))?;
        let want = f_start + rate * time;
        worst = worst.max((f - want).abs() / want);
    }
    check(worst <= 0.03, || format!("glide relative error {worst:.4}"))?;
    Ok(format!("440 Hz: {good}/{} voiced frames within 1 Hz; glide max relative error {:.2}%", voiced.len(), 100.0 * worst))
}

fn c10a_training() -> Verdict {
    let start = Instant::now();
    let cfg = F0Config::default();
    let corpus = tone_corpus(&contour_tones(), 50, 1010);
    let mut train = Vec::new();
    let mut held_out = Vec::new();
    for (i, (clip, y)) in corpus.iter().enumerate() {
        let x = clip_feature(clip, &cfg, DEFAULT_K).map_err(|e| e.to_string())?;
        if i % 5 == 4 {
            held_out.push((x, *y));
        } else {
            train.push((x, *y));
        }
    }
    let model = train_tone_model(&train, &TrainConfig { seed: 10, ..TrainConfig::default() }).map_err(|e| e.to_string())?.model;
    let mut correct = 0;
    for (x, y) in &held_out {
        correct += usize::from(decode_eq4(&model.embed(x).unwrap(), 0.5).unwrap() == *y);
    }
    let acc = correct as f64 / held_out.len() as f64;
    let elapsed = start.elapsed();
    check(acc >= 0.9, || format!("held-out accuracy {acc:.3}"))?;
    within(elapsed, 60.0, "training")?;
    Ok(format!("{} clips, held-out accuracy {correct}/{} = {acc:.3}; {elapsed:.2?}", corpus.len(), held_out.len()))
}

fn c10b_tone_discovery() -> Verdict {
    let cfg = F0Config::default();
    let train: Vec<_> = tone_corpus(&contour_tones(), 30, 2020)
        .iter()
        .map(|(c, y)| (clip_feature(c, &cfg, DEFAULT_K).unwrap(), *y))
        .collect();
    let model = train_tone_model(&train, &TrainConfig { seed: 20, ..TrainConfig::default() }).map_err(|e| e.to_string())?.model;
    let set = tone_corpus(&contour_tones(), 15, 2021);
    let clips: Vec<AudioClip> = set.iter().map(|(c, _)| c.clone()).collect();
    let report = tone_clustering_pipeline(&clips, &model, &ToneClusteringConfig::default()).map_err(|e| e.to_string())?;
    check(report.n_categories == 4, || format!("{} categories", report.n_categories))?;
    let mut reps: Vec<Transcription> = report.categories.iter().map(|c| c.representative).collect();
    reps.sort();
    let mut classes = contour_tones();
    classes.sort();
    check(reps == classes, || format!("representatives {reps:?}"))?;
    for c in &report.categories {
        let stray = c.members.iter().filter(|&&m| set[m].1 != c.representative).count();
        check(stray == 0, || format!("category {} has {stray} clips of other tones", c.representative))?;
    }
    let names: Vec<String> = report.categories.iter().map(|c| format!("{}x{}", c.representative, c.members.len())).collect();
    Ok(format!("60 clips -> {} ; noise {}", names.join(" "), report.noise.len()))
}

fn c10c_dialect() -> Verdict {
    let corpus = two_family_corpus(30).map_err(|e| e.to_string())?;
    let reports = dialect_cluster_pipeline(&corpus, Metric::Tone2vec, &[Linkage::Ward], 2).map_err(|e| e.to_string())?;
    let acc = reports[0].summary.accuracy;
    check(acc == Some(1.0), || format!("mv accuracy {acc:?}"))?;
    Ok("6 regions, mv accuracy 1.0".into())
}

/// Runs `tonelab` with `args` inside `dir`, returning stdout.
fn run(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_tonelab"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

/// Every file under `dir`, relative path → bytes.
fn snapshot(dir: &Path) -> std::collections::BTreeMap<String, Vec<u8>> {
    let mut files = std::collections::BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().display().to_string();
                files.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    files
}

fn c11_cli_determinism() -> Verdict {
    let script: &[&[&str]] = &[
        &["synth", "tones", "--out-dir", "clips", "--seed", "11", "--per-class", "15"],
        &["synth", "dialect", "--out-dir", "dialect", "--seed", "11"],
        &["dist", "41", "312"],
        &["dist", "--list", "pairs.txt", "--matrix", "matrix.csv"],
        &["variance", "445", "251"],
        &["variance", "--list", "pairs.txt"],
        &["transcribe", "clips/clip0000_35.wav", "--json", "--f0-csv", "f0.csv"],
        &["train", "clips/manifest.tsv", "--out", "model.json", "--seed", "11"],
        &["transcribe", "clips/clip0020_51.wav", "--method", "model", "--model", "model.json", "--json"],
        &["cluster-tones", "clips/manifest.tsv", "--model", "model.json", "--assignments", "assign.tsv"],
        &["dialect-cluster", "dialect/corpus.tsv", "--gold", "dialect/gold.tsv", "--out-dir", "dc"],
        &["dialect-cluster", "dialect/corpus.tsv", "--metric", "categorical", "--linkage", "uc,wc"],
        &["dialect-mds", "dialect/corpus.tsv", "--dims", "2", "--out", "mds.csv"],
        &["dialect-mds", "dialect/corpus.tsv", "--metric", "categorical"],
    ];
    let session = || -> Result<(Vec<Vec<u8>>, std::collections::BTreeMap<String, Vec<u8>>), String> {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        std::fs::write(dir.path().join("pairs.txt"), "41 312\n214 35\n55 11\n").map_err(|e| e.to_string())?;
        let outputs = script.iter().map(|args| run(dir.path(), args)).collect::<Result<Vec<_>, _>>()?;
        Ok((outputs, snapshot(dir.path())))
    };
    let (out_a, files_a) = session()?;
    let (out_b, files_b) = session()?;
    for (i, (a, b)) in out_a.iter().zip(&out_b).enumerate() {
        check(a == b, || format!("stdout of {:?} differs between runs", script[i]))?;
    }
    check(files_a.keys().eq(files_b.keys()), || "different file sets".into())?;
    for (name, bytes) in &files_a {
        check(files_b[name] == *bytes, || format!("{name} differs between runs"))?;
    }
    Ok(format!("{} invocations over 8 subcommands; stdout and {} output files byte-identical", script.len(), files_a.len()))
}

fn main() {
    let criteria: [(&str, &str, fn() -> Verdict); 13] = [
        ("1", "golden curve distance", c1_golden_distance),
        ("2", "variance table", c2_variance_table),
        ("3", "normalization examples", c3_normalization),
        ("4", "pseudometric over all triples", c4_pseudometric),
        ("5", "clustering oracles", c5_clustering_oracles),
        ("6", "MDS line recovery", c6_mds),
        ("7", "decoder", c7_decoder),
        ("8", "loss subgradient", c8_loss_gradient),
        ("9", "F0 tracking", c9_f0),
        ("10a", "training on synthetic clips", c10a_training),
        ("10b", "tone category discovery", c10b_tone_discovery),
        ("10c", "dialect clustering", c10c_dialect),
        ("11", "CLI determinism", c11_cli_determinism),
    ];
    let mut failed = 0;
    for (id, name, f) in criteria {
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match verdict {
            Ok(detail) => println!("PASS {id:>3}  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id:>3}  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 13 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
