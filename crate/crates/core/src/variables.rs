//! The four second-person variables, match classification, and the
//! observation spreadsheet.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Document;
use crate::matcher::{find_all, resolve_pivots, Match, Pattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variable {
    #[serde(rename = "det-poss")]
    DetPoss,
    #[serde(rename = "pro2P")]
    Pro2P,
    #[serde(rename = "clit2P")]
    Clit2P,
    #[serde(rename = "poss2P")]
    Poss2P,
}

impl Variable {
    pub const ALL: [Variable; 4] = [
        Variable::DetPoss,
        Variable::Pro2P,
        Variable::Clit2P,
        Variable::Poss2P,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variable::DetPoss => "det-poss",
            Variable::Pro2P => "pro2P",
            Variable::Clit2P => "clit2P",
            Variable::Poss2P => "poss2P",
        }
    }

    pub fn ordinal(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Variable::ALL
            .into_iter()
            .find(|v| v.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!("unknown variable `{s}` (expected det-poss, pro2P, clit2P or poss2P)")
            })
    }
}

pub const NULL_DETERMINER: &str = "Ø";
pub const ARTICLE: &str = "ART";

/// Closed variant sets per variable. The clitic set follows the search
/// rules (`te`, `lhe`) and can be overridden.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantInventory {
    sets: [Vec<String>; 4],
}

impl Default for VariantInventory {
    fn default() -> Self {
        let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        VariantInventory {
            sets: [
                v(&[NULL_DETERMINER, ARTICLE]),
                v(&["você", "cê", "tu"]),
                v(&["te", "lhe"]),
                v(&["seu", "teu"]),
            ],
        }
    }
}

impl VariantInventory {
    /// Replaces the clitic variant set (e.g. `["te", "se"]`).
    pub fn with_clitics<I, S>(mut self, clitics: I) -> Result<Self, String>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let set: Vec<String> = clitics
            .into_iter()
            .map(|s| s.as_ref().to_lowercase())
            .collect();
        if set.len() < 2 {
            return Err("clitic variant set needs at least two forms".into());
        }
        self.sets[Variable::Clit2P.ordinal()] = set;
        Ok(self)
    }

    pub fn variants(&self, var: Variable) -> &[String] {
        &self.sets[var.ordinal()]
    }

    pub fn contains(&self, var: Variable, variant: &str) -> bool {
        self.variants(var).iter().any(|v| v == variant)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariantLabel {
    variable: Variable,
    variant: String,
}

impl VariantLabel {
    pub fn new(variable: Variable, variant: &str, inv: &VariantInventory) -> Option<Self> {
        inv.contains(variable, variant).then(|| VariantLabel {
            variable,
            variant: variant.to_string(),
        })
    }

    pub fn variable(&self) -> Variable {
        self.variable
    }

    pub fn variant(&self) -> &str {
        &self.variant
    }
}

pub const CONTEXT_WIDTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    /// 1-based running number within `source_file`.
    pub order: usize,
    pub source_file: String,
    pub speaker_id: String,
    pub label: VariantLabel,
    pub preceding_context: Vec<String>,
    pub following_context: Vec<String>,
    pub full_context: Vec<String>,
    pub pivot_index: usize,
}

impl Observation {
    pub fn variable(&self) -> Variable {
        self.label.variable
    }

    pub fn variant(&self) -> &str {
        &self.label.variant
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
#[error("{pattern_id} at {source_file}:{start}: {reason}")]
pub struct ClassifyError {
    pub pattern_id: String,
    pub source_file: String,
    pub start: usize,
    pub reason: String,
}

/// Classifies a match into an observation. `order` is left at 0 and is
/// assigned by [`extract_all`].
pub fn classify(
    m: &Match,
    d: &Document,
    inv: &VariantInventory,
) -> Result<Observation, ClassifyError> {
    let fail = |reason: String| ClassifyError {
        pattern_id: m.pattern_id.clone(),
        source_file: m.source_file.clone(),
        start: m.start,
        reason,
    };
    let pivot = d
        .tokens
        .get(m.pivot_index)
        .ok_or_else(|| fail(format!("pivot token {} outside document", m.pivot_index)))?;
    if m.end >= d.tokens.len() {
        return Err(fail(format!("match end {} outside document", m.end)));
    }

    let variant = match m.variable {
        Variable::Pro2P | Variable::Clit2P => pivot.orth_lower().to_string(),
        Variable::Poss2P => pivot.lemma_lower().to_string(),
        Variable::DetPoss => {
            let is_article = m.pivot_index > 0 && {
                let prev = &d.tokens[m.pivot_index - 1];
                prev.upos == "DET" && prev.morph.contains("PronType=Art")
            };
            if is_article { ARTICLE } else { NULL_DETERMINER }.to_string()
        }
    };
    if variant.is_empty() {
        return Err(fail("pivot token has no form or lemma".into()));
    }
    let label = VariantLabel::new(m.variable, &variant, inv).ok_or_else(|| {
        fail(format!(
            "variant `{variant}` is not one of {:?} for {}",
            inv.variants(m.variable),
            m.variable
        ))
    })?;

    let before = m.start.saturating_sub(CONTEXT_WIDTH);
    let after = (m.end + 1 + CONTEXT_WIDTH).min(d.tokens.len());
    let orths =
        |range: std::ops::Range<usize>| d.tokens[range].iter().map(|t| t.orth.clone()).collect();
    Ok(Observation {
        order: 0,
        source_file: m.source_file.clone(),
        speaker_id: m.speaker_id.clone(),
        label,
        preceding_context: orths(before..m.start),
        following_context: orths(m.end + 1..after),
        full_context: m.matched_orths.clone(),
        pivot_index: m.pivot_index,
    })
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Extraction {
    pub observations: Vec<Observation>,
    pub errors: Vec<ClassifyError>,
}

/// Scans every document with every rule, keeps one match per
/// (variable, pivot), and classifies. Observations are ordered by document
/// (input order), then pivot token, then variable.
pub fn extract_all(docs: &[Document], rules: &[Pattern], inv: &VariantInventory) -> Extraction {
    let mut out = Extraction::default();
    let mut counters: BTreeMap<&str, usize> = BTreeMap::new();
    for d in docs {
        let mut matches = resolve_pivots(find_all(rules, d));
        matches.sort_by_key(|m| (m.pivot_index, m.variable));
        for m in &matches {
            match classify(m, d, inv) {
                Ok(mut obs) => {
                    let n = counters.entry(d.source_file.as_str()).or_insert(0);
                    *n += 1;
                    obs.order = *n;
                    out.observations.push(obs);
                }
                Err(e) => out.errors.push(e),
            }
        }
    }
    out
}

/// Anything that carries a speaker, a variable and a variant.
pub trait Occurrence {
    fn speaker_id(&self) -> &str;
    fn variable(&self) -> Variable;
    fn variant(&self) -> &str;
}

impl Occurrence for Observation {
    fn speaker_id(&self) -> &str {
        &self.speaker_id
    }
    fn variable(&self) -> Variable {
        self.label.variable
    }
    fn variant(&self) -> &str {
        &self.label.variant
    }
}

/// One row of the observation spreadsheet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservationRow {
    pub order: usize,
    pub file: String,
    pub speaker_id: String,
    pub variable: Variable,
    pub variant: String,
    pub preceding_context: String,
    #[serde(rename = "match")]
    pub matched: String,
    pub following_context: String,
}

impl Occurrence for ObservationRow {
    fn speaker_id(&self) -> &str {
        &self.speaker_id
    }
    fn variable(&self) -> Variable {
        self.variable
    }
    fn variant(&self) -> &str {
        &self.variant
    }
}

impl From<&Observation> for ObservationRow {
    fn from(o: &Observation) -> Self {
        ObservationRow {
            order: o.order,
            file: o.source_file.clone(),
            speaker_id: o.speaker_id.clone(),
            variable: o.variable(),
            variant: o.variant().to_string(),
            preceding_context: o.preceding_context.join(" "),
            matched: o.full_context.join(" "),
            following_context: o.following_context.join(" "),
        }
    }
}

pub const OBSERVATION_COLUMNS: [&str; 8] = [
    "order",
    "file",
    "speaker_id",
    "variable",
    "variant",
    "preceding_context",
    "match",
    "following_context",
];

/// Writes the observation CSV. The header is written even for no rows.
pub fn export_observations<W: Write>(obs: &[Observation], sink: W) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(sink);
    w.write_record(OBSERVATION_COLUMNS)?;
    for o in obs {
        w.serialize(ObservationRow::from(o))?;
    }
    w.flush()?;
    Ok(())
}

pub fn import_observations<R: Read>(source: R) -> Result<Vec<ObservationRow>, csv::Error> {
    let mut r = csv::Reader::from_reader(source);
    r.deserialize().collect()
}

/// Pooled count of one variant across a corpus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantCount {
    pub variable: Variable,
    pub variant: String,
    pub count: usize,
    pub total: usize,
    pub percent: f64,
}

/// Corpus-level variant distribution: every inventory variant of every
/// variable, in inventory order. Percentages are of the variable total.
pub fn variant_distribution<O: Occurrence>(obs: &[O], inv: &VariantInventory) -> Vec<VariantCount> {
    let mut counts: BTreeMap<(Variable, &str), usize> = BTreeMap::new();
    let mut totals = [0usize; 4];
    for o in obs {
        *counts.entry((o.variable(), o.variant())).or_insert(0) += 1;
        totals[o.variable().ordinal()] += 1;
    }
    let mut out = Vec::new();
    for var in Variable::ALL {
        let total = totals[var.ordinal()];
        for variant in inv.variants(var) {
            let count = counts.get(&(var, variant.as_str())).copied().unwrap_or(0);
            let percent = if total == 0 {
                0.0
            } else {
                100.0 * count as f64 / total as f64
            };
            out.push(VariantCount {
                variable: var,
                variant: variant.clone(),
                count,
                total,
                percent,
            });
        }
    }
    out
}
