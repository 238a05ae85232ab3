//! Clip manifests: a tab-separated file with a `path` column and, for
//! training, a `transcription` column. Relative paths resolve against the
//! manifest's directory.

use std::path::{Path, PathBuf};

use tonelab::tone::Transcription;

use crate::Failure;

pub struct Entry {
    pub path: PathBuf,
    pub transcription: Option<Transcription>,
}

pub fn read(manifest: &Path, need_labels: bool) -> Result<Vec<Entry>, Failure> {
    let source = manifest.display().to_string();
    let usage = |line: u64, msg: String| Failure::Usage(format!("{source}:{line}: {msg}"));
    let file = crate::commands::open_input(manifest)?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .quoting(false)
        .flexible(true)
        .from_reader(file);
    let header = reader.headers().map_err(|e| usage(1, e.to_string()))?.clone();
    let column = |name: &str| header.iter().position(|h| h.trim() == name);
    let path_col = column("path").ok_or_else(|| usage(1, "missing column \"path\"".into()))?;
    let label_col = column("transcription");
    if need_labels && label_col.is_none() {
        return Err(usage(1, "missing column \"transcription\"".into()));
    }
    let base = manifest.parent().unwrap_or(Path::new("."));
    let mut entries = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| usage(0, e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let field = |i: usize| {
            record
                .get(i)
                .map(str::trim)
                .filter(|f| !f.is_empty())
                .ok_or_else(|| usage(line, format!("missing field {:?}", &header[i])))
        };
        let path = base.join(field(path_col)?);
        let transcription = match label_col {
            Some(i) if need_labels || record.get(i).is_some_and(|f| !f.trim().is_empty()) => Some(
                field(i)?
                    .parse::<Transcription>()
                    .map_err(|e| usage(line, e.to_string()))?,
            ),
            _ => None,
        };
        entries.push(Entry { path, transcription });
    }
    if entries.is_empty() {
        return Err(usage(1, "manifest lists no clips".into()));
    }
    Ok(entries)
}
