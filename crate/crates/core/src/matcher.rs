//! Declarative token-sequence patterns over POS/morph annotations.
//!
//! A [`Pattern`] is a short list of [`TokenConstraint`]s matched against
//! consecutive tokens of a document. Rule files use TOML:
//!
//! ```toml
//! [[rule]]
//! id = "pro2P/2"
//! variable = "pro2P"
//! pivot = 0
//! priority = 1
//!
//! [[rule.slot]]
//! orth_in = ["você", "cê", "tu"]
//!
//! [[rule.slot]]
//! wildcard = true
//!
//! [[rule.slot]]
//! pos = "VERB"
//! morph_superset = ["VerbForm=Fin"]
//! ```

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Document, Token};
use crate::variables::{Variable, VariantInventory};

#[derive(Debug, Error, PartialEq)]
pub enum RuleError {
    #[error("rule `{rule}`: field `{field}`: {message}")]
    Invalid {
        rule: String,
        field: String,
        message: String,
    },
    #[error("rule file: {0}")]
    Syntax(String),
}

fn invalid(rule: &str, field: impl Into<String>, message: impl Into<String>) -> RuleError {
    RuleError::Invalid {
        rule: rule.to_string(),
        field: field.into(),
        message: message.into(),
    }
}

/// Predicate over a single token. All present predicates must hold.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TokenConstraint {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orth_in: Option<BTreeSet<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma_in: Option<BTreeSet<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma_not_in: Option<BTreeSet<String>>,
    #[serde(default, rename = "pos", skip_serializing_if = "Option::is_none")]
    pub pos_equals: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morph_superset: Option<BTreeSet<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_punct: Option<bool>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub wildcard: bool,
}

fn lower_set<I, S>(items: I) -> BTreeSet<String>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    items
        .into_iter()
        .map(|s| s.as_ref().to_lowercase())
        .collect()
}

impl TokenConstraint {
    /// The `{}` slot: matches any single token.
    pub fn any() -> Self {
        TokenConstraint {
            wildcard: true,
            ..Default::default()
        }
    }

    pub fn orth_in<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, forms: I) -> Self {
        self.orth_in = Some(lower_set(forms));
        self
    }

    pub fn lemma_in<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, lemmas: I) -> Self {
        self.lemma_in = Some(lower_set(lemmas));
        self
    }

    pub fn lemma_not_in<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, lemmas: I) -> Self {
        self.lemma_not_in = Some(lower_set(lemmas));
        self
    }

    pub fn pos(mut self, upos: &str) -> Self {
        self.pos_equals = Some(upos.to_string());
        self
    }

    pub fn morph<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, feats: I) -> Self {
        self.morph_superset = Some(feats.into_iter().map(|s| s.as_ref().to_string()).collect());
        self
    }

    pub fn punct(mut self, value: bool) -> Self {
        self.is_punct = Some(value);
        self
    }

    fn has_predicate(&self) -> bool {
        self.orth_in.is_some()
            || self.lemma_in.is_some()
            || self.lemma_not_in.is_some()
            || self.pos_equals.is_some()
            || self.morph_superset.is_some()
            || self.is_punct.is_some()
    }

    pub fn validate(&self, rule: &str, slot: usize) -> Result<(), RuleError> {
        let field = |name: &str| format!("slot[{slot}].{name}");
        if self.wildcard {
            if self.has_predicate() {
                return Err(invalid(
                    rule,
                    field("wildcard"),
                    "a wildcard slot cannot carry predicates",
                ));
            }
            return Ok(());
        }
        if !self.has_predicate() {
            return Err(invalid(
                rule,
                format!("slot[{slot}]"),
                "slot has no predicate (set `wildcard = true` to match any token)",
            ));
        }
        for (name, set) in [("orth_in", &self.orth_in), ("lemma_in", &self.lemma_in)] {
            if set.as_ref().is_some_and(BTreeSet::is_empty) {
                return Err(invalid(rule, field(name), "set must not be empty"));
            }
        }
        if let Some(feats) = &self.morph_superset {
            for f in feats {
                match f.split_once('=') {
                    Some((k, v))
                        if !k.is_empty() && !v.is_empty() && !f.contains(char::is_whitespace) => {}
                    _ => {
                        return Err(invalid(
                            rule,
                            field("morph_superset"),
                            format!("`{f}` is not Key=Value"),
                        ))
                    }
                }
            }
        }
        if self.pos_equals.as_ref().is_some_and(String::is_empty) {
            return Err(invalid(rule, field("pos"), "must not be empty"));
        }
        Ok(())
    }

    fn normalized(mut self) -> Self {
        self.orth_in = self.orth_in.map(lower_set);
        self.lemma_in = self.lemma_in.map(lower_set);
        self.lemma_not_in = self.lemma_not_in.map(lower_set);
        self
    }
}

/// True iff every present predicate of `c` holds for `t`.
pub fn match_token(c: &TokenConstraint, t: &Token) -> bool {
    if c.wildcard {
        return true;
    }
    if let Some(set) = &c.orth_in {
        if !set.contains(t.orth_lower()) {
            return false;
        }
    }
    if let Some(set) = &c.lemma_in {
        if !set.contains(t.lemma_lower()) {
            return false;
        }
    }
    if let Some(set) = &c.lemma_not_in {
        if set.contains(t.lemma_lower()) {
            return false;
        }
    }
    if let Some(pos) = &c.pos_equals {
        if &t.upos != pos {
            return false;
        }
    }
    if let Some(feats) = &c.morph_superset {
        if !t.morph.is_superset_of(feats) {
            return false;
        }
    }
    if let Some(p) = c.is_punct {
        if t.is_punct != p {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pattern {
    pub id: String,
    pub variable: Variable,
    /// Slot whose token determines the variant.
    pub pivot: usize,
    /// Among patterns of the same variable firing on the same pivot token,
    /// the lowest priority wins.
    #[serde(default)]
    pub priority: u32,
    #[serde(rename = "slot")]
    pub constraints: Vec<TokenConstraint>,
}

impl Pattern {
    pub fn validate(&self) -> Result<(), RuleError> {
        if self.id.trim().is_empty() {
            return Err(invalid("<unnamed>", "id", "must not be empty"));
        }
        let n = self.constraints.len();
        if !(2..=3).contains(&n) {
            return Err(invalid(
                &self.id,
                "slot",
                format!("expected 2 or 3 slots, found {n}"),
            ));
        }
        if self.pivot >= n {
            return Err(invalid(
                &self.id,
                "pivot",
                format!("slot {} does not exist", self.pivot),
            ));
        }
        if self.constraints[self.pivot].wildcard {
            return Err(invalid(
                &self.id,
                "pivot",
                "pivot slot cannot be a wildcard",
            ));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            c.validate(&self.id, i)?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    pub speaker_id: String,
    pub source_file: String,
    pub start: usize,
    /// Inclusive.
    pub end: usize,
    pub pattern_id: String,
    pub variable: Variable,
    pub pivot_index: usize,
    pub priority: u32,
    pub matched_orths: Vec<String>,
}

/// Every window of `d` that satisfies `p`, ordered by start.
pub fn find_matches(p: &Pattern, d: &Document) -> Vec<Match> {
    let k = p.constraints.len();
    if k == 0 || d.tokens.len() < k {
        return Vec::new();
    }
    d.tokens
        .windows(k)
        .enumerate()
        .filter(|(_, window)| {
            p.constraints
                .iter()
                .zip(*window)
                .all(|(c, t)| match_token(c, t))
        })
        .map(|(start, window)| Match {
            speaker_id: d.speaker_id.clone(),
            source_file: d.source_file.clone(),
            start,
            end: start + k - 1,
            pattern_id: p.id.clone(),
            variable: p.variable,
            pivot_index: start + p.pivot,
            priority: p.priority,
            matched_orths: window.iter().map(|t| t.orth.clone()).collect(),
        })
        .collect()
}

/// Matches of all patterns on one document, ordered by (start, pattern id).
pub fn find_all(patterns: &[Pattern], d: &Document) -> Vec<Match> {
    let mut all: Vec<Match> = patterns.iter().flat_map(|p| find_matches(p, d)).collect();
    all.sort_by(|a, b| (a.start, &a.pattern_id).cmp(&(b.start, &b.pattern_id)));
    all
}

/// Keeps one match per (variable, pivot token): lowest priority, then
/// earliest start, then pattern id. Output ordered by (start, pattern id).
pub fn resolve_pivots(matches: Vec<Match>) -> Vec<Match> {
    let mut sorted = matches;
    sorted.sort_by(|a, b| {
        (
            a.variable,
            a.pivot_index,
            a.priority,
            a.start,
            &a.pattern_id,
        )
            .cmp(&(
                b.variable,
                b.pivot_index,
                b.priority,
                b.start,
                &b.pattern_id,
            ))
    });
    sorted.dedup_by(|later, kept| {
        later.variable == kept.variable && later.pivot_index == kept.pivot_index
    });
    sorted.sort_by(|a, b| (a.start, &a.pattern_id).cmp(&(b.start, &b.pattern_id)));
    sorted
}

pub const POSSESSIVE_LEMMAS: [&str; 4] = ["meu", "teu", "seu", "nosso"];

/// The eight search rules with the default variant inventory.
pub fn builtin_rules() -> Vec<Pattern> {
    builtin_rules_for(&VariantInventory::default())
}

/// The eight search rules, with pronoun, clitic and possessive forms taken
/// from `inv`.
pub fn builtin_rules_for(inv: &VariantInventory) -> Vec<Pattern> {
    let pronoun = || TokenConstraint::default().orth_in(inv.variants(Variable::Pro2P));
    let finite_verb = || {
        TokenConstraint::default()
            .pos("VERB")
            .morph(["VerbForm=Fin"])
    };
    let clitic = || TokenConstraint::default().orth_in(inv.variants(Variable::Clit2P));
    let verb = || TokenConstraint::default().pos("VERB");
    let possessive = || TokenConstraint::default().lemma_in(inv.variants(Variable::Poss2P));
    let noun = || TokenConstraint::default().pos("NOUN");
    let rule = |id: &str, variable, pivot, priority, constraints| Pattern {
        id: id.to_string(),
        variable,
        pivot,
        priority,
        constraints,
    };

    vec![
        rule(
            "det-poss/1",
            Variable::DetPoss,
            1,
            0,
            vec![
                TokenConstraint::default().lemma_not_in(POSSESSIVE_LEMMAS),
                TokenConstraint::default()
                    .pos("DET")
                    .morph(["PronType=Prs"]),
                noun(),
            ],
        ),
        rule(
            "pro2P/1",
            Variable::Pro2P,
            0,
            0,
            vec![pronoun(), finite_verb()],
        ),
        rule(
            "pro2P/2",
            Variable::Pro2P,
            0,
            1,
            vec![pronoun(), TokenConstraint::any(), finite_verb()],
        ),
        rule("clit2P/1", Variable::Clit2P, 0, 1, vec![clitic(), verb()]),
        rule("clit2P/2", Variable::Clit2P, 1, 2, vec![verb(), clitic()]),
        rule(
            "clit2P/3",
            Variable::Clit2P,
            2,
            0,
            vec![verb(), TokenConstraint::default().punct(true), clitic()],
        ),
        rule(
            "poss2P/1",
            Variable::Poss2P,
            0,
            0,
            vec![possessive(), noun()],
        ),
        rule(
            "poss2P/2",
            Variable::Poss2P,
            1,
            1,
            vec![noun(), possessive()],
        ),
    ]
}

#[derive(Serialize, Deserialize)]
struct RuleFile {
    #[serde(default)]
    rule: Vec<Pattern>,
}

/// Parses and validates a TOML rule file.
pub fn load_rules(text: &str) -> Result<Vec<Pattern>, RuleError> {
    let file: RuleFile = toml::from_str(text).map_err(|e| RuleError::Syntax(e.to_string()))?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(file.rule.len());
    for mut p in file.rule {
        p.constraints = p
            .constraints
            .into_iter()
            .map(TokenConstraint::normalized)
            .collect();
        p.validate()?;
        if !seen.insert(p.id.clone()) {
            return Err(invalid(&p.id, "id", "duplicate rule id"));
        }
        out.push(p);
    }
    Ok(out)
}

pub fn write_rules(patterns: &[Pattern]) -> String {
    let file = RuleFile {
        rule: patterns.to_vec(),
    };
    toml::to_string(&file).expect("rules serialize to TOML")
}
