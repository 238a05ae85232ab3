use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::tone::Transcription;

/// One region's transcriptions of the survey word list.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionLexicon {
    pub region_id: String,
    entries: BTreeMap<String, Transcription>,
}

impl RegionLexicon {
    pub fn new(region_id: impl Into<String>, entries: impl IntoIterator<Item = (String, Transcription)>) -> Result<Self> {
        let region_id = region_id.into();
        let mut map = BTreeMap::new();
        for (word, t) in entries {
            if map.insert(word.clone(), t).is_some() {
                return Err(Error::invalid(format!("duplicate word {word:?} in region {region_id:?}")));
            }
        }
        if map.is_empty() {
            return Err(Error::Empty("region lexicon"));
        }
        Ok(RegionLexicon { region_id, entries: map })
    }

    pub fn get(&self, word: &str) -> Option<&Transcription> {
        self.entries.get(word)
    }

    pub fn entries(&self) -> &BTreeMap<String, Transcription> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Regions (in file order) with optional binary gold cluster labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DialectCorpus {
    pub regions: Vec<RegionLexicon>,
    gold: Option<BTreeMap<String, u8>>,
}

impl DialectCorpus {
    pub fn new(regions: Vec<RegionLexicon>) -> Result<Self> {
        if regions.is_empty() {
            return Err(Error::Empty("dialect corpus"));
        }
        let mut seen = std::collections::HashSet::new();
        for r in &regions {
            if !seen.insert(r.region_id.as_str()) {
                return Err(Error::invalid(format!("region {:?} listed twice", r.region_id)));
            }
        }
        Ok(DialectCorpus { regions, gold: None })
    }

    /// Attaches gold labels; every region needs exactly one label in {0, 1}.
    pub fn with_gold(mut self, gold: BTreeMap<String, u8>) -> Result<Self> {
        for (region, &label) in &gold {
            if label > 1 {
                return Err(Error::invalid(format!("gold label {label} for {region:?} is not 0 or 1")));
            }
            if self.region(region).is_none() {
                return Err(Error::invalid(format!("gold label for unknown region {region:?}")));
            }
        }
        if let Some(r) = self.regions.iter().find(|r| !gold.contains_key(&r.region_id)) {
            return Err(Error::invalid(format!("no gold label for region {:?}", r.region_id)));
        }
        self.gold = Some(gold);
        Ok(self)
    }

    pub fn gold(&self) -> Option<&BTreeMap<String, u8>> {
        self.gold.as_ref()
    }

    pub fn region(&self, id: &str) -> Option<&RegionLexicon> {
        self.regions.iter().find(|r| r.region_id == id)
    }

    /// Same corpus with regions in a different order.
    pub fn reordered(&self, order: &[usize]) -> Self {
        DialectCorpus {
            regions: order.iter().map(|&i| self.regions[i].clone()).collect(),
            gold: self.gold.clone(),
        }
    }

    /// Parses `region<TAB>word_id<TAB>transcription` rows under a header.
    pub fn from_tsv<R: Read>(input: R, source: &str) -> Result<Self> {
        let rows = read_table(input, source, &["region", "word_id", "transcription"])?;
        let mut order: Vec<String> = Vec::new();
        let mut by_region: HashMap<String, BTreeMap<String, Transcription>> = HashMap::new();
        for (line, fields) in rows {
            let [region, word, token] = [&fields[0], &fields[1], &fields[2]];
            let t = token.parse::<Transcription>().map_err(|e| Error::Parse {
                path: source.to_string(),
                line,
                message: e.to_string(),
            })?;
            let lex = by_region.entry(region.clone()).or_insert_with(|| {
                order.push(region.clone());
                BTreeMap::new()
            });
            if lex.insert(word.clone(), t).is_some() {
                return Err(Error::Parse {
                    path: source.to_string(),
                    line,
                    message: format!("duplicate entry for region {region:?}, word {word:?}"),
                });
            }
        }
        if order.is_empty() {
            return Err(Error::Parse {
                path: source.to_string(),
                line: 1,
                message: "corpus has no data rows".into(),
            });
        }
        let regions = order
            .into_iter()
            .map(|id| {
                let entries = by_region.remove(&id).expect("region recorded");
                RegionLexicon::new(id, entries)
            })
            .collect::<Result<Vec<_>>>()?;
        DialectCorpus::new(regions)
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e| Error::io("<tsv output>", e);
        writeln!(out, "region\tword_id\ttranscription").map_err(io)?;
        for r in &self.regions {
            for (word, t) in r.entries() {
                writeln!(out, "{}\t{word}\t{t}", r.region_id).map_err(io)?;
            }
        }
        Ok(())
    }

    pub fn write_gold_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e| Error::io("<tsv output>", e);
        let gold = self.gold.as_ref().ok_or_else(|| Error::invalid("corpus has no gold labels"))?;
        writeln!(out, "region\tgold_label").map_err(io)?;
        for r in &self.regions {
            writeln!(out, "{}\t{}", r.region_id, gold[&r.region_id]).map_err(io)?;
        }
        Ok(())
    }
}

/// Header-addressed TSV rows with 1-based line numbers.
fn read_table<R: Read>(input: R, source: &str, columns: &[&str]) -> Result<Vec<(u64, Vec<String>)>> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: source.to_string(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .quoting(false)
        .flexible(true)
        .from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().all(|h| h.trim().is_empty()) {
        return Err(parse_err(1, "empty file".into()));
    }
    let idx: Vec<usize> = columns
        .iter()
        .map(|c| {
            header
                .iter()
                .position(|h| h.trim() == *c)
                .ok_or_else(|| parse_err(1, format!("missing column {c:?}")))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let fields = idx
            .iter()
            .map(|&i| {
                record
                    .get(i)
                    .map(|f| f.trim().to_string())
                    .ok_or_else(|| parse_err(line, format!("expected {} fields, found {}", header.len(), record.len())))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((line, fields));
    }
    Ok(rows)
}

fn open(path: &Path) -> Result<std::fs::File> {
    std::fs::File::open(path).map_err(|e| Error::io(path, e))
}

/// Reads a corpus TSV with columns `region`, `word_id`, `transcription`.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<DialectCorpus> {
    let path = path.as_ref();
    DialectCorpus::from_tsv(open(path)?, &path.display().to_string())
}

/// Reads a `region`, `gold_label` TSV and attaches it to `corpus`.
pub fn load_gold(corpus: DialectCorpus, path: impl AsRef<Path>) -> Result<DialectCorpus> {
    let path = path.as_ref();
    let source = path.display().to_string();
    let mut gold = BTreeMap::new();
    for (line, fields) in read_table(open(path)?, &source, &["region", "gold_label"])? {
        let label: u8 = match fields[1].as_str() {
            "0" => 0,
            "1" => 1,
            other => {
                return Err(Error::Parse {
                    path: source,
                    line,
                    message: format!("gold label {other:?} is not 0 or 1"),
                })
            }
        };
        if gold.insert(fields[0].clone(), label).is_some() {
            return Err(Error::Parse {
                path: source,
                line,
                message: format!("duplicate gold label for {:?}", fields[0]),
            });
        }
    }
    corpus.with_gold(gold)
}
