//! Annotated transcripts and speaker metadata.
//!
//! Transcripts arrive in a CoNLL-U-like layout: one block per document,
//! introduced by `# speaker_id = ...` and `# source = ...` comment lines,
//! followed by tab-separated token lines (`id form lemma upos _ feats ...`).
//! Blocks are separated by blank lines.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("document block {block} (starting at line {line}) has no `# speaker_id` header")]
    MissingSpeaker { block: usize, line: usize },
    #[error("invalid morphological feature `{0}`: expected Key=Value without whitespace")]
    BadFeature(String),
    #[error("duplicate morphological feature key `{0}`")]
    DuplicateFeature(String),
}

#[derive(Debug, Error)]
pub enum MetadataError {
    #[error("metadata header must contain columns {expected:?}, found {found:?}")]
    Header {
        expected: &'static [&'static str],
        found: Vec<String>,
    },
    #[error("row {row}: unknown {field} `{value}` (allowed: {allowed})")]
    UnknownValue {
        row: usize,
        field: &'static str,
        value: String,
        allowed: String,
    },
    #[error("row {row}: age `{value}` is not a whole number")]
    BadAge { row: usize, value: String },
    #[error("row {row}: age {age} outside [15, 100]")]
    AgeRange { row: usize, age: u32 },
    #[error("row {row}: duplicate speaker_id `{speaker}`")]
    DuplicateSpeaker { row: usize, speaker: String },
    #[error("row {row}: empty speaker_id")]
    EmptySpeaker { row: usize },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Morphological feature bundle (`Key=Value` entries, one value per key).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MorphFeatures {
    entries: BTreeMap<String, String>,
}

impl MorphFeatures {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses the `|`-joined column; `_` and the empty string mean no features.
    pub fn parse(column: &str) -> Result<Self, CorpusError> {
        let mut feats = Self::new();
        let column = column.trim();
        if column.is_empty() || column == "_" {
            return Ok(feats);
        }
        for entry in column.split('|') {
            feats.insert_entry(entry)?;
        }
        Ok(feats)
    }

    /// Inserts a single `Key=Value` entry.
    pub fn insert_entry(&mut self, entry: &str) -> Result<(), CorpusError> {
        let (key, value) = split_feature(entry)?;
        if self.entries.contains_key(key) {
            return Err(CorpusError::DuplicateFeature(key.to_string()));
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Exact string match of a `Key=Value` entry.
    pub fn contains(&self, entry: &str) -> bool {
        match entry.split_once('=') {
            Some((k, v)) => self.entries.get(k).is_some_and(|have| have == v),
            None => false,
        }
    }

    pub fn is_superset_of<'a, I>(&self, required: I) -> bool
    where
        I: IntoIterator<Item = &'a String>,
    {
        required.into_iter().all(|e| self.contains(e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

impl fmt::Display for MorphFeatures {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("_");
        }
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

impl FromStr for MorphFeatures {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

fn split_feature(entry: &str) -> Result<(&str, &str), CorpusError> {
    let bad = || CorpusError::BadFeature(entry.to_string());
    let (k, v) = entry.split_once('=').ok_or_else(bad)?;
    if k.is_empty() || v.is_empty() || entry.chars().any(char::is_whitespace) {
        return Err(bad());
    }
    Ok((k, v))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub index: usize,
    pub orth: String,
    pub lemma: String,
    pub upos: String,
    pub morph: MorphFeatures,
    pub is_punct: bool,
    orth_lc: String,
    lemma_lc: String,
}

impl Token {
    pub fn new(
        index: usize,
        orth: impl Into<String>,
        lemma: impl Into<String>,
        upos: impl Into<String>,
        morph: MorphFeatures,
    ) -> Self {
        let orth = orth.into();
        let lemma = lemma.into();
        let upos = upos.into();
        Token {
            index,
            orth_lc: orth.to_lowercase(),
            lemma_lc: lemma.to_lowercase(),
            is_punct: upos == "PUNCT",
            orth,
            lemma,
            upos,
            morph,
        }
    }

    /// Lowercased surface form used for matching.
    pub fn orth_lower(&self) -> &str {
        &self.orth_lc
    }

    pub fn lemma_lower(&self) -> &str {
        &self.lemma_lc
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub speaker_id: String,
    pub source_file: String,
    pub tokens: Vec<Token>,
}

impl Document {
    pub fn new(speaker_id: impl Into<String>, source_file: impl Into<String>) -> Self {
        Document {
            speaker_id: speaker_id.into(),
            source_file: source_file.into(),
            tokens: Vec::new(),
        }
    }

    /// Appends a token, assigning the next contiguous index.
    pub fn push(&mut self, orth: &str, lemma: &str, upos: &str, morph: MorphFeatures) {
        let index = self.tokens.len();
        self.tokens
            .push(Token::new(index, orth, lemma, upos, morph));
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

#[derive(Default)]
struct Block {
    first_line: usize,
    speaker: Option<String>,
    source: Option<String>,
    tokens: Vec<Token>,
    touched: bool,
}

/// Parses a CoNLL-U-like stream into documents, in input order.
///
/// Multiword-token ranges (`3-4`) and empty nodes (`5.1`) are skipped.
/// A block without `# source` takes its speaker id as source name.
pub fn parse_annotated(text: &str) -> Result<Vec<Document>, CorpusError> {
    let mut docs = Vec::new();
    let mut block = Block::default();
    let mut blocks_seen = 0usize;

    let mut finish = |block: &mut Block, docs: &mut Vec<Document>| -> Result<(), CorpusError> {
        if !block.touched {
            return Ok(());
        }
        blocks_seen += 1;
        let b = std::mem::take(block);
        let speaker = b.speaker.ok_or(CorpusError::MissingSpeaker {
            block: blocks_seen,
            line: b.first_line,
        })?;
        docs.push(Document {
            source_file: b.source.unwrap_or_else(|| speaker.clone()),
            speaker_id: speaker,
            tokens: b.tokens,
        });
        Ok(())
    };

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            finish(&mut block, &mut docs)?;
            continue;
        }
        if !block.touched {
            block.touched = true;
            block.first_line = lineno;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                let value = value.trim().to_string();
                match key.trim() {
                    "speaker_id" => block.speaker = Some(value),
                    "source" => block.source = Some(value),
                    _ => {}
                }
            }
            continue;
        }
        if let Some(tok) = parse_token_line(line, lineno, block.tokens.len())? {
            block.tokens.push(tok);
        }
    }
    finish(&mut block, &mut docs)?;
    Ok(docs)
}

fn parse_token_line(
    line: &str,
    lineno: usize,
    next_index: usize,
) -> Result<Option<Token>, CorpusError> {
    let cols: Vec<&str> = line.split('\t').collect();
    let malformed = |message: String| CorpusError::Malformed {
        line: lineno,
        message,
    };
    if cols.len() < 6 {
        return Err(malformed(format!(
            "expected at least 6 tab-separated columns, found {}",
            cols.len()
        )));
    }
    let id = cols[0].trim();
    if id.contains('-') || id.contains('.') {
        return Ok(None);
    }
    if id.parse::<u64>().is_err() {
        return Err(malformed(format!("token id `{id}` is not an integer")));
    }
    let (form, lemma, upos) = (cols[1], cols[2], cols[3]);
    if form.is_empty() || upos.is_empty() {
        return Err(malformed("empty form or UPOS column".into()));
    }
    let morph = MorphFeatures::parse(cols[5]).map_err(|e| malformed(e.to_string()))?;
    Ok(Some(Token::new(next_index, form, lemma, upos, morph)))
}

/// Writes documents in the layout [`parse_annotated`] reads (ten CoNLL-U columns).
pub fn write_annotated(docs: &[Document]) -> String {
    let mut out = String::new();
    for doc in docs {
        out.push_str("# speaker_id = ");
        out.push_str(&doc.speaker_id);
        out.push_str("\n# source = ");
        out.push_str(&doc.source_file);
        out.push('\n');
        for t in &doc.tokens {
            let lemma = if t.lemma.is_empty() { "_" } else { &t.lemma };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t_\t{}\t_\t_\t_\t_\n",
                t.index + 1,
                t.orth,
                lemma,
                t.upos,
                t.morph
            ));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Displacement {
    D1,
    D2,
    D3,
    #[serde(rename = "D4_Bahia")]
    D4Bahia,
    #[serde(rename = "D4_Alagoas")]
    D4Alagoas,
    #[serde(rename = "D4_Other")]
    D4Other,
}

impl Displacement {
    pub const ALL: [Displacement; 6] = [
        Displacement::D1,
        Displacement::D2,
        Displacement::D3,
        Displacement::D4Bahia,
        Displacement::D4Alagoas,
        Displacement::D4Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Displacement::D1 => "D1",
            Displacement::D2 => "D2",
            Displacement::D3 => "D3",
            Displacement::D4Bahia => "D4_Bahia",
            Displacement::D4Alagoas => "D4_Alagoas",
            Displacement::D4Other => "D4_Other",
        }
    }
}

impl fmt::Display for Displacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Displacement {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Self::ALL.into_iter().find(|d| d.as_str() == s).ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gender {
    F,
    M,
    OtherOrUnknown,
}

impl Gender {
    pub fn as_str(self) -> &'static str {
        match self {
            Gender::F => "F",
            Gender::M => "M",
            Gender::OtherOrUnknown => "Other",
        }
    }
}

impl FromStr for Gender {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "F" => Ok(Gender::F),
            "M" => Ok(Gender::M),
            "Other" | "Unknown" => Ok(Gender::OtherOrUnknown),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeInProgram {
    Early,
    Late,
    Unknown,
}

impl TimeInProgram {
    pub fn as_str(self) -> &'static str {
        match self {
            TimeInProgram::Early => "early",
            TimeInProgram::Late => "late",
            TimeInProgram::Unknown => "unknown",
        }
    }
}

impl FromStr for TimeInProgram {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "early" => Ok(TimeInProgram::Early),
            "late" => Ok(TimeInProgram::Late),
            "unknown" => Ok(TimeInProgram::Unknown),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpeakerMetadata {
    pub speaker_id: String,
    pub displacement: Displacement,
    pub gender: Gender,
    pub age: Option<u32>,
    pub time_in_program: TimeInProgram,
}

pub const METADATA_COLUMNS: &[&str] = &[
    "speaker_id",
    "displacement",
    "gender",
    "age",
    "time_in_program",
];

/// Reads the speaker metadata CSV. An empty age cell means unknown age.
pub fn load_metadata<R: Read>(reader: R) -> Result<Vec<SpeakerMetadata>, MetadataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let mut positions = [0usize; 5];
    for (slot, name) in positions.iter_mut().zip(METADATA_COLUMNS) {
        *slot = header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| MetadataError::Header {
                expected: METADATA_COLUMNS,
                found: header.clone(),
            })?;
    }

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let row = i + 2; // header is row 1
        let cell = |c: usize| record.get(positions[c]).unwrap_or("");

        let speaker_id = cell(0).to_string();
        if speaker_id.is_empty() {
            return Err(MetadataError::EmptySpeaker { row });
        }
        let displacement = cell(1).parse().map_err(|_| MetadataError::UnknownValue {
            row,
            field: "displacement",
            value: cell(1).to_string(),
            allowed: "D1, D2, D3, D4_Bahia, D4_Alagoas, D4_Other".into(),
        })?;
        let gender = cell(2).parse().map_err(|_| MetadataError::UnknownValue {
            row,
            field: "gender",
            value: cell(2).to_string(),
            allowed: "F, M, Other, Unknown".into(),
        })?;
        let age = match cell(3) {
            "" => None,
            a => {
                let age: u32 = a.parse().map_err(|_| MetadataError::BadAge {
                    row,
                    value: a.to_string(),
                })?;
                if !(15..=100).contains(&age) {
                    return Err(MetadataError::AgeRange { row, age });
                }
                Some(age)
            }
        };
        let time_in_program = cell(4).parse().map_err(|_| MetadataError::UnknownValue {
            row,
            field: "time_in_program",
            value: cell(4).to_string(),
            allowed: "early, late, unknown".into(),
        })?;
        if !seen.insert(speaker_id.clone()) {
            return Err(MetadataError::DuplicateSpeaker {
                row,
                speaker: speaker_id,
            });
        }
        out.push(SpeakerMetadata {
            speaker_id,
            displacement,
            gender,
            age,
            time_in_program,
        });
    }
    Ok(out)
}

/// Writes metadata in the layout [`load_metadata`] reads.
pub fn write_metadata(records: &[SpeakerMetadata]) -> String {
    let mut out = METADATA_COLUMNS.join(",");
    out.push('\n');
    for r in records {
        let age = r.age.map(|a| a.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.speaker_id,
            r.displacement,
            r.gender.as_str(),
            age,
            r.time_in_program.as_str()
        ));
    }
    out
}
