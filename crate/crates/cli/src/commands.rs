use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use tonelab::cluster::Linkage;
use tonelab::dialect::{
    dialect_cluster_pipeline, dialect_variance_map, load_corpus, load_gold, region_matrix, tone_clustering_pipeline,
    Metric, ToneClusteringConfig,
};
use tonelab::learn::{decode_eq4, linearity, train_tone_model, LinearToneModel, TrainConfig};
use tonelab::pitch::{clip_feature, contour_feature, extract_f0, f0_baseline_transcribe, read_wav, write_wav, AudioClip, F0Config};
use tonelab::synth::{tone_corpus, two_family_corpus};
use tonelab::tone::{database, tone_distance, variance_metric, Transcription};

use crate::{
    manifest, ClusterTonesArgs, DialectClusterArgs, DialectMdsArgs, DistArgs, F0Args, Failure, Method, MetricArg,
    SynthCommand, TrainArgs, TranscribeArgs, VarianceArgs,
};

type Outcome = Result<(), Failure>;

impl From<F0Args> for F0Config {
    fn from(a: F0Args) -> Self {
        F0Config {
            frame_ms: a.frame_ms,
            hop_ms: a.hop_ms,
            fmin: a.fmin,
            fmax: a.fmax,
            voicing_threshold: a.yin_threshold,
        }
    }
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Tone2vec => Metric::Tone2vec,
            MetricArg::Categorical => Metric::Categorical,
        }
    }
}

/// Errors while reading a user-supplied file: absence is a usage error.
fn input_error(path: &Path, e: std::io::Error) -> Failure {
    let msg = format!("{}: {e}", path.display());
    if e.kind() == std::io::ErrorKind::NotFound {
        Failure::Usage(msg)
    } else {
        Failure::Runtime(msg)
    }
}

pub fn open_input(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| input_error(path, e))
}

fn require_file(path: &Path) -> Outcome {
    if path.is_file() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{}: no such file", path.display())))
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Outcome {
    w.flush().map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> tonelab::Result<()>) -> Outcome {
    let mut w = create(path)?;
    f(&mut w).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    finish(w, path)
}

fn print_json<T: Serialize>(value: &T) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn token(s: &str) -> Result<Transcription, Failure> {
    s.parse::<Transcription>().map_err(|e| Failure::Usage(e.to_string()))
}

/// Token pairs from a list file, skipping blank lines and `#` comments.
fn read_pairs(path: &Path) -> Result<Vec<(Transcription, Transcription)>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(path, e))?;
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| Failure::Usage(format!("{}:{}: {msg}", path.display(), i + 1));
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = fields[..] else {
            return Err(at(format!("expected two tokens, found {}", fields.len())));
        };
        let parse = |s: &str| s.parse::<Transcription>().map_err(|e| at(e.to_string()));
        pairs.push((parse(a)?, parse(b)?));
    }
    Ok(pairs)
}

fn pairwise(pair: &[String], list: Option<&Path>, decimals: usize, f: fn(&Transcription, &Transcription) -> f64) -> Outcome {
    if let [a, b] = pair {
        let (a, b) = (token(a)?, token(b)?);
        println!("{:.*}", decimals, f(&a, &b));
    }
    if let Some(path) = list {
        let mut out = std::io::stdout().lock();
        for (a, b) in read_pairs(path)? {
            writeln!(out, "{a}\t{b}\t{:.*}", decimals, f(&a, &b)).map_err(|e| Failure::Runtime(e.to_string()))?;
        }
    }
    Ok(())
}

pub fn dist(a: DistArgs) -> Outcome {
    pairwise(&a.pair, a.list.as_deref(), 6, tone_distance)?;
    if let Some(path) = &a.matrix {
        write_file(path, |w| database().write_csv(w))?;
    }
    Ok(())
}

pub fn variance(a: VarianceArgs) -> Outcome {
    pairwise(&a.pair, a.list.as_deref(), 4, variance_metric)
}

#[derive(Serialize)]
struct TranscribeReport {
    transcription: Transcription,
    method: &'static str,
    triple: [f64; 3],
    /// `|z₁ + z₃ − 2·z₂|`
    linearity: f64,
    beta: f64,
    /// `beta − linearity`; positive means a two-digit transcription.
    margin: f64,
}

pub fn transcribe(a: TranscribeArgs) -> Outcome {
    require_file(&a.wav)?;
    let clip = read_wav(&a.wav)?;
    let track = extract_f0(&clip, &a.f0.into())?;
    if let Some(path) = &a.f0_csv {
        write_file(path, |w| track.write_csv(w))?;
    }
    let (transcription, triple, method) = match a.method {
        Method::F0 => {
            let b = f0_baseline_transcribe(&track, a.beta)?;
            (b.transcription, b.triple, "f0")
        }
        Method::Model => {
            let path = a.model.as_deref().expect("clap requires --model with --method model");
            require_file(path)?;
            let model = LinearToneModel::load(path)?;
            let z = model.embed(&contour_feature(&track, model.feature_len())?)?;
            (decode_eq4(&z, a.beta)?, z, "model")
        }
    };
    if a.json {
        let lin = linearity(&triple);
        print_json(&TranscribeReport {
            transcription,
            method,
            triple: triple.values(),
            linearity: lin,
            beta: a.beta,
            margin: a.beta - lin,
        })
    } else {
        println!("{transcription}");
        Ok(())
    }
}

/// Reads every listed clip, in manifest order.
fn load_clips(entries: &[manifest::Entry]) -> Result<Vec<AudioClip>, Failure> {
    for e in entries {
        require_file(&e.path)?;
    }
    entries
        .par_iter()
        .map(|e| read_wav(&e.path).map_err(|err| Failure::from(err).context(&e.path)))
        .collect()
}

impl Failure {
    fn context(self, path: &Path) -> Self {
        match self {
            Failure::Usage(m) => Failure::Usage(format!("{}: {m}", path.display())),
            Failure::Runtime(m) => Failure::Runtime(format!("{}: {m}", path.display())),
        }
    }
}

#[derive(Serialize)]
struct TrainReport {
    clips: usize,
    k: usize,
    epochs: usize,
    initial_loss: f64,
    final_loss: f64,
    best_epoch: usize,
    train_accuracy: f64,
    model: PathBuf,
}

pub fn train(a: TrainArgs) -> Outcome {
    let entries = manifest::read(&a.manifest, true)?;
    let clips = load_clips(&entries)?;
    let cfg: F0Config = a.f0.into();
    let data: Vec<_> = clips
        .par_iter()
        .zip(&entries)
        .map(|(clip, e)| {
            let x = clip_feature(clip, &cfg, a.k).map_err(|err| Failure::from(err).context(&e.path))?;
            Ok((x, e.transcription.expect("manifest labels required")))
        })
        .collect::<Result<_, Failure>>()?;
    let outcome = train_tone_model(
        &data,
        &TrainConfig {
            lr: a.lr,
            epochs: a.epochs,
            seed: a.seed,
            l2: a.l2,
        },
    )?;
    let mut correct = 0;
    for (x, y) in &data {
        if decode_eq4(&outcome.model.embed(x)?, a.beta)? == *y {
            correct += 1;
        }
    }
    outcome.model.save(&a.out).map_err(|e| Failure::Runtime(e.to_string()))?;
    print_json(&TrainReport {
        clips: data.len(),
        k: a.k,
        epochs: a.epochs,
        initial_loss: outcome.losses[0],
        final_loss: outcome.losses[outcome.best_epoch],
        best_epoch: outcome.best_epoch,
        train_accuracy: correct as f64 / data.len() as f64,
        model: a.out,
    })
}

#[derive(Serialize)]
struct CategoryOut {
    cluster: usize,
    representative: Transcription,
    size: usize,
    members: Vec<PathBuf>,
    votes: BTreeMap<Transcription, usize>,
}

#[derive(Serialize)]
struct ToneClustersOut {
    n_categories: usize,
    categories: Vec<CategoryOut>,
    noise: Vec<PathBuf>,
}

pub fn cluster_tones(a: ClusterTonesArgs) -> Outcome {
    let entries = manifest::read(&a.manifest, false)?;
    require_file(&a.model)?;
    let model = LinearToneModel::load(&a.model)?;
    let clips = load_clips(&entries)?;
    let cfg = ToneClusteringConfig {
        eps: a.eps,
        min_samples: a.min_samples,
        beta: a.beta,
        f0: a.f0.into(),
    };
    let report = tone_clustering_pipeline(&clips, &model, &cfg).map_err(|e| match e {
        tonelab::Error::Clip { index, source } => Failure::from(*source).context(&entries[index].path),
        other => other.into(),
    })?;
    let path_of = |i: usize| entries[i].path.clone();
    if let Some(out) = &a.assignments {
        let mut label = vec![None; clips.len()];
        for c in &report.categories {
            for &m in &c.members {
                label[m] = Some(c.cluster);
            }
        }
        let mut w = create(out)?;
        let io = |e: std::io::Error| Failure::Runtime(format!("{}: {e}", out.display()));
        writeln!(w, "path\tcluster\tdecoded\tz1\tz2\tz3").map_err(io)?;
        for (i, z) in report.embeddings.iter().enumerate() {
            let [z1, z2, z3] = z.values();
            let cluster = label[i].map_or("-1".to_string(), |c| c.to_string());
            writeln!(w, "{}\t{cluster}\t{}\t{z1:.6}\t{z2:.6}\t{z3:.6}", entries[i].path.display(), report.decoded[i])
                .map_err(io)?;
        }
        finish(w, out)?;
    }
    print_json(&ToneClustersOut {
        n_categories: report.n_categories,
        categories: report
            .categories
            .iter()
            .map(|c| CategoryOut {
                cluster: c.cluster,
                representative: c.representative,
                size: c.members.len(),
                members: c.members.iter().map(|&m| path_of(m)).collect(),
                votes: c.votes.clone(),
            })
            .collect(),
        noise: report.noise.iter().map(|&m| path_of(m)).collect(),
    })
}

fn parse_linkages(spec: &str) -> Result<Vec<Linkage>, Failure> {
    if spec == "all" {
        return Ok(Linkage::ALL.to_vec());
    }
    spec.split(',')
        .map(|code| code.trim().parse::<Linkage>().map_err(Failure::from))
        .collect()
}

pub fn dialect_cluster(a: DialectClusterArgs) -> Outcome {
    let linkages = parse_linkages(&a.linkage)?;
    require_file(&a.corpus)?;
    let mut corpus = load_corpus(&a.corpus)?;
    if let Some(gold) = &a.gold {
        require_file(gold)?;
        corpus = load_gold(corpus, gold)?;
    }
    let metric: Metric = a.metric.into();
    let reports = dialect_cluster_pipeline(&corpus, metric, &linkages, a.k)?;
    if let Some(dir) = &a.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())))?;
        let rm = region_matrix(&corpus, metric)?;
        write_file(&dir.join("region_matrix.csv"), |w| rm.matrix.write_csv(w))?;
        for r in &reports {
            let code = r.summary.linkage.code();
            write_file(&dir.join(format!("dendrogram_{code}.csv")), |w| r.dendrogram.write_csv(w))?;
            write_file(&dir.join(format!("assignment_{code}.csv")), |w| r.assignment.write_csv(&r.regions, w))?;
        }
    }
    let summaries: Vec<_> = reports.iter().map(|r| &r.summary).collect();
    print_json(&summaries)
}

pub fn dialect_mds(a: DialectMdsArgs) -> Outcome {
    require_file(&a.corpus)?;
    let corpus = load_corpus(&a.corpus)?;
    let coords = dialect_variance_map(&corpus, a.metric.into(), a.dims)?;
    match &a.out {
        Some(path) => write_file(path, |w| coords.write_csv(w)),
        None => {
            let mut buf = Vec::new();
            coords.write_csv(&mut buf)?;
            std::io::stdout()
                .lock()
                .write_all(&buf)
                .map_err(|e| Failure::Runtime(e.to_string()))
        }
    }
}

pub fn synth(c: SynthCommand) -> Outcome {
    let mkdir = |dir: &Path| std::fs::create_dir_all(dir).map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())));
    match c {
        SynthCommand::Tones {
            out_dir,
            seed,
            per_class,
            classes,
        } => {
            let classes = classes.iter().map(|s| token(s)).collect::<Result<Vec<_>, _>>()?;
            mkdir(&out_dir)?;
            let set = tone_corpus(&classes, per_class, seed);
            let manifest_path = out_dir.join("manifest.tsv");
            let mut m = create(&manifest_path)?;
            let io = |e: std::io::Error| Failure::Runtime(format!("{}: {e}", manifest_path.display()));
            writeln!(m, "path\ttranscription").map_err(io)?;
            for (i, (clip, t)) in set.iter().enumerate() {
                let name = format!("clip{i:04}_{t}.wav");
                write_wav(out_dir.join(&name), clip).map_err(|e| Failure::Runtime(e.to_string()))?;
                writeln!(m, "{name}\t{t}").map_err(io)?;
            }
            finish(m, &manifest_path)?;
            println!("wrote {} clips and {}", set.len(), manifest_path.display());
            Ok(())
        }
        SynthCommand::Dialect { out_dir, seed } => {
            mkdir(&out_dir)?;
            let corpus = two_family_corpus(seed)?;
            let (cpath, gpath) = (out_dir.join("corpus.tsv"), out_dir.join("gold.tsv"));
            write_file(&cpath, |w| corpus.write_tsv(w))?;
            write_file(&gpath, |w| corpus.write_gold_tsv(w))?;
            println!("wrote {} and {}", cpath.display(), gpath.display());
            Ok(())
        }
    }
}
