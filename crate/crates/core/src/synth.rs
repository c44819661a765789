//! Synthetic annotated corpora built from the 24 pronoun/clitic/determiner/
//! possessive combinations of the frame
//! "{Você|Cê|Tu} disse que {te|lhe} comprometeu com [o] {teu|seu} projeto .",
//! with per-dialect application probabilities.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clustering::{
    build_feature_matrix, cluster_composition, optimal_k, pam, ClusterError, DistanceMatrix,
    Imputation, KPoint,
};
use crate::corpus::{
    parse_annotated, write_annotated, CorpusError, Displacement, Document, Gender, MorphFeatures,
    SpeakerMetadata, TimeInProgram,
};
use crate::matcher::builtin_rules_for;
use crate::profiles::{compute_profiles, ApplicationValueMap, Measure};
use crate::variables::{extract_all, Variable, VariantInventory};

/// Name of the generator reported alongside results.
pub const PRNG_ALGORITHM: &str =
    "xoshiro256++ (seed_from_u64 via SplitMix64; per-speaker seed = seed XOR ordinal)";

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SynthError {
    #[error("profile `{profile}`: {field} = {value} is not a probability")]
    Probability {
        profile: String,
        field: &'static str,
        value: f64,
    },
    #[error("profile `{profile}`: token range {min}..={max} is empty")]
    TokenRange {
        profile: String,
        min: usize,
        max: usize,
    },
    #[error("duplicate profile name `{0}`")]
    DuplicateName(String),
    #[error("no dialect profiles given")]
    NoProfiles,
    #[error("speakers_per_profile must be at least 1")]
    NoSpeakers,
    #[error("distractor rate {0} is not a probability")]
    DistractorRate(f64),
    #[error("clitic inventory needs a non-application form")]
    CliticInventory,
}

/// Per-variable application probabilities for one simulated dialect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DialectProfile {
    pub name: String,
    /// P(no article before the possessive).
    pub p_null_det: f64,
    pub p_voce: f64,
    /// Share of non-`você` subjects realized as `cê` (the rest are `tu`).
    pub ce_share: f64,
    pub p_te: f64,
    pub p_seu: f64,
    /// Inclusive range of template sentences per speaker; every sentence
    /// carries one token of each variable.
    pub tokens_per_speaker: (usize, usize),
}

impl DialectProfile {
    /// Same application probability for every variable; `cê`/`tu` split evenly.
    pub fn uniform(name: &str, p: f64, tokens: (usize, usize)) -> Self {
        DialectProfile {
            name: name.to_string(),
            p_null_det: p,
            p_voce: p,
            ce_share: 0.5,
            p_te: p,
            p_seu: p,
            tokens_per_speaker: tokens,
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        for (field, value) in [
            ("p_null_det", self.p_null_det),
            ("p_voce", self.p_voce),
            ("ce_share", self.ce_share),
            ("p_te", self.p_te),
            ("p_seu", self.p_seu),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(SynthError::Probability {
                    profile: self.name.clone(),
                    field,
                    value,
                });
            }
        }
        let (min, max) = self.tokens_per_speaker;
        if min == 0 || min > max {
            return Err(SynthError::TokenRange {
                profile: self.name.clone(),
                min,
                max,
            });
        }
        Ok(())
    }

    /// Expected application rate per variable, in [`Variable::ALL`] order.
    pub fn expected_rates(&self) -> [f64; 4] {
        [self.p_null_det, self.p_voce, self.p_te, self.p_seu]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subject {
    Voce,
    Ce,
    Tu,
}

/// One cell of the combination grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Combination {
    pub subject: Subject,
    /// `te` when true, otherwise the alternative clitic.
    pub clitic_te: bool,
    pub article: bool,
    pub possessive_seu: bool,
}

impl Combination {
    /// Variant each variable should be classified as.
    pub fn expected_variants<'a>(&self, clitic_alt: &'a str) -> [&'a str; 4] {
        [
            if self.article { "ART" } else { "Ø" },
            match self.subject {
                Subject::Voce => "você",
                Subject::Ce => "cê",
                Subject::Tu => "tu",
            },
            if self.clitic_te { "te" } else { clitic_alt },
            if self.possessive_seu { "seu" } else { "teu" },
        ]
    }
}

/// The 24 combinations in table order: subject, then clitic, then
/// possessive (`teu` before `seu`), then article before Ø.
pub fn combinations() -> Vec<Combination> {
    let mut out = Vec::with_capacity(24);
    for subject in [Subject::Voce, Subject::Ce, Subject::Tu] {
        for clitic_te in [true, false] {
            for possessive_seu in [false, true] {
                for article in [true, false] {
                    out.push(Combination {
                        subject,
                        clitic_te,
                        article,
                        possessive_seu,
                    });
                }
            }
        }
    }
    out
}

fn feats(s: &str) -> MorphFeatures {
    MorphFeatures::parse(s).expect("static feature string")
}

fn push_sentence(doc: &mut Document, c: &Combination, clitic_alt: &str) {
    let (subj, subj_lemma) = match c.subject {
        Subject::Voce => ("Você", "você"),
        Subject::Ce => ("Cê", "você"),
        Subject::Tu => ("Tu", "tu"),
    };
    doc.push(
        subj,
        subj_lemma,
        "PRON",
        feats("Number=Sing|Person=2|PronType=Prs"),
    );
    doc.push(
        "disse",
        "dizer",
        "VERB",
        feats("Mood=Ind|Number=Sing|Person=3|Tense=Past|VerbForm=Fin"),
    );
    doc.push("que", "que", "SCONJ", MorphFeatures::new());
    if c.clitic_te {
        doc.push(
            "te",
            "tu",
            "PRON",
            feats("Case=Acc|Number=Sing|Person=2|PronType=Prs"),
        );
    } else {
        let lemma = if clitic_alt == "lhe" {
            "ele"
        } else {
            clitic_alt
        };
        doc.push(
            clitic_alt,
            lemma,
            "PRON",
            feats("Number=Sing|Person=3|PronType=Prs"),
        );
    }
    doc.push(
        "comprometeu",
        "comprometer",
        "VERB",
        feats("Mood=Ind|Number=Sing|Person=3|Tense=Past|VerbForm=Fin"),
    );
    doc.push("com", "com", "ADP", MorphFeatures::new());
    if c.article {
        doc.push(
            "o",
            "o",
            "DET",
            feats("Definite=Def|Gender=Masc|Number=Sing|PronType=Art"),
        );
    }
    let (poss, person) = if c.possessive_seu {
        ("seu", 3)
    } else {
        ("teu", 2)
    };
    doc.push(
        poss,
        poss,
        "DET",
        feats(&format!(
            "Gender=Masc|Number=Sing|Number[psor]=Sing|Person[psor]={person}|PronType=Prs"
        )),
    );
    doc.push(
        "projeto",
        "projeto",
        "NOUN",
        feats("Gender=Masc|Number=Sing"),
    );
    doc.push(".", ".", "PUNCT", MorphFeatures::new());
}

// Filler sentences with no second-person form and no possessive.
const DISTRACTORS: &[&[(&str, &str, &str, &str)]] = &[
    &[
        (
            "Ele",
            "ele",
            "PRON",
            "Case=Nom|Gender=Masc|Number=Sing|Person=3|PronType=Prs",
        ),
        (
            "comprou",
            "comprar",
            "VERB",
            "Mood=Ind|Number=Sing|Person=3|Tense=Past|VerbForm=Fin",
        ),
        (
            "o",
            "o",
            "DET",
            "Definite=Def|Gender=Masc|Number=Sing|PronType=Art",
        ),
        ("livro", "livro", "NOUN", "Gender=Masc|Number=Sing"),
        ("ontem", "ontem", "ADV", "_"),
        (".", ".", "PUNCT", "_"),
    ],
    &[
        (
            "A",
            "o",
            "DET",
            "Definite=Def|Gender=Fem|Number=Sing|PronType=Art",
        ),
        ("gente", "gente", "NOUN", "Gender=Fem|Number=Sing"),
        ("se", "se", "PRON", "Person=3|PronType=Prs|Reflex=Yes"),
        (
            "encontrou",
            "encontrar",
            "VERB",
            "Mood=Ind|Number=Sing|Person=3|Tense=Past|VerbForm=Fin",
        ),
        ("depois", "depois", "ADV", "_"),
        (".", ".", "PUNCT", "_"),
    ],
    &[
        (
            "Eles",
            "ele",
            "PRON",
            "Case=Nom|Gender=Masc|Number=Plur|Person=3|PronType=Prs",
        ),
        (
            "falaram",
            "falar",
            "VERB",
            "Mood=Ind|Number=Plur|Person=3|Tense=Past|VerbForm=Fin",
        ),
        ("com", "com", "ADP", "_"),
        (
            "a",
            "o",
            "DET",
            "Definite=Def|Gender=Fem|Number=Sing|PronType=Art",
        ),
        ("professora", "professora", "NOUN", "Gender=Fem|Number=Sing"),
        (",", ",", "PUNCT", "_"),
        ("né", "né", "INTJ", "_"),
        ("?", "?", "PUNCT", "_"),
    ],
];

fn push_distractor(doc: &mut Document, which: usize) {
    for &(orth, lemma, upos, morph) in DISTRACTORS[which] {
        doc.push(orth, lemma, upos, feats(morph));
    }
}

/// The 24 combinations as single-sentence documents (speaker `T01`..`T24`).
pub fn template_documents(clitic_alt: &str) -> Vec<Document> {
    combinations()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let id = format!("T{:02}", i + 1);
            let mut d = Document::new(id.clone(), format!("{id}.conllu"));
            push_sentence(&mut d, c, clitic_alt);
            d
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub profiles: Vec<DialectProfile>,
    pub speakers_per_profile: usize,
    pub seed: u64,
    /// Probability of a filler sentence after each template sentence.
    #[serde(default)]
    pub distractor_rate: f64,
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.profiles.is_empty() {
            return Err(SynthError::NoProfiles);
        }
        if self.speakers_per_profile == 0 {
            return Err(SynthError::NoSpeakers);
        }
        if !(0.0..=1.0).contains(&self.distractor_rate) {
            return Err(SynthError::DistractorRate(self.distractor_rate));
        }
        let mut seen = std::collections::BTreeSet::new();
        for p in &self.profiles {
            p.validate()?;
            if !seen.insert(p.name.as_str()) {
                return Err(SynthError::DuplicateName(p.name.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpeakerLabel {
    pub speaker_id: String,
    pub profile: String,
}

/// Sampler-side counts of (application, total) per variable.
pub type Tally = [(usize, usize); 4];

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub documents: Vec<Document>,
    pub metadata: Vec<SpeakerMetadata>,
    pub labels: Vec<SpeakerLabel>,
    pub tallies: BTreeMap<String, Tally>,
}

impl SyntheticCorpus {
    /// Ground-truth CSV: `speaker_id,profile`.
    pub fn labels_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["speaker_id", "profile"])
            .expect("in-memory write");
        for l in &self.labels {
            w.write_record([&l.speaker_id, &l.profile])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

/// Samples one document per speaker. Speakers are numbered across profiles
/// (`S0001`, ...); each draws its sentence count and every slot
/// independently from its profile using its own seeded generator.
pub fn generate_corpus(
    config: &SynthConfig,
    inv: &VariantInventory,
) -> Result<SyntheticCorpus, SynthError> {
    config.validate()?;
    let clitic_alt = inv
        .variants(Variable::Clit2P)
        .iter()
        .find(|v| v.as_str() != "te")
        .ok_or(SynthError::CliticInventory)?
        .clone();
    let mut out = SyntheticCorpus {
        documents: Vec::new(),
        metadata: Vec::new(),
        labels: Vec::new(),
        tallies: BTreeMap::new(),
    };
    let mut ordinal: u64 = 0;
    for (pi, profile) in config.profiles.iter().enumerate() {
        for _ in 0..config.speakers_per_profile {
            ordinal += 1;
            let id = format!("S{ordinal:04}");
            let mut rng = Xoshiro256PlusPlus::seed_from_u64(config.seed ^ ordinal);
            let (lo, hi) = profile.tokens_per_speaker;
            let sentences = rng.random_range(lo..=hi);
            let mut doc = Document::new(id.clone(), format!("{id}.conllu"));
            let mut tally: Tally = [(0, 0); 4];
            for _ in 0..sentences {
                let voce = rng.random_bool(profile.p_voce);
                let subject = if voce {
                    Subject::Voce
                } else if rng.random_bool(profile.ce_share) {
                    Subject::Ce
                } else {
                    Subject::Tu
                };
                let c = Combination {
                    subject,
                    clitic_te: rng.random_bool(profile.p_te),
                    article: !rng.random_bool(profile.p_null_det),
                    possessive_seu: rng.random_bool(profile.p_seu),
                };
                for (slot, app) in
                    tally
                        .iter_mut()
                        .zip([!c.article, voce, c.clitic_te, c.possessive_seu])
                {
                    slot.1 += 1;
                    slot.0 += usize::from(app);
                }
                push_sentence(&mut doc, &c, &clitic_alt);
                if config.distractor_rate > 0.0 && rng.random_bool(config.distractor_rate) {
                    push_distractor(&mut doc, rng.random_range(0..DISTRACTORS.len()));
                }
            }
            out.documents.push(doc);
            out.metadata.push(SpeakerMetadata {
                speaker_id: id.clone(),
                displacement: Displacement::ALL
                    .get(pi)
                    .copied()
                    .unwrap_or(Displacement::D4Other),
                gender: if ordinal.is_multiple_of(2) {
                    Gender::M
                } else {
                    Gender::F
                },
                age: None,
                time_in_program: TimeInProgram::Unknown,
            });
            out.labels.push(SpeakerLabel {
                speaker_id: id.clone(),
                profile: profile.name.clone(),
            });
            out.tallies.insert(id, tally);
        }
    }
    Ok(out)
}

#[derive(Debug, Error)]
pub enum RecoveryError {
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error("re-reading generated corpus: {0}")]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error("{0} classification failures on generated text")]
    Classification(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfilePurity {
    pub profile: String,
    pub speakers: usize,
    pub dominant_cluster: usize,
    pub purity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryReport {
    pub prng: String,
    pub seed: u64,
    pub speakers: usize,
    pub tokens: usize,
    /// Extraction reproduced every speaker's sampled counts exactly.
    pub tallies_match: bool,
    pub optimal_k: usize,
    pub silhouette_curve: Vec<KPoint>,
    pub no_cluster_structure: bool,
    pub purity: Vec<ProfilePurity>,
    /// Each profile's dominant cluster differs from the others'.
    pub distinct_clusters: bool,
    /// Every profile has more than 75% of its speakers in one cluster.
    pub criterion_75_holds: bool,
}

/// Generate, serialize, re-parse, extract, profile, and cluster; then
/// compare the partition with the generating profiles.
pub fn recovery_experiment(config: &SynthConfig) -> Result<RecoveryReport, RecoveryError> {
    let inv = VariantInventory::default();
    let corpus = generate_corpus(config, &inv)?;
    let docs = parse_annotated(&write_annotated(&corpus.documents))?;
    let tokens = docs.iter().map(Document::len).sum();
    let extraction = extract_all(&docs, &builtin_rules_for(&inv), &inv);
    if !extraction.errors.is_empty() {
        return Err(RecoveryError::Classification(extraction.errors.len()));
    }
    let ids: Vec<String> = corpus.labels.iter().map(|l| l.speaker_id.clone()).collect();
    let profiles = compute_profiles(
        &extraction.observations,
        &ids,
        &ApplicationValueMap::default(),
    );
    let tallies_match = profiles.iter().all(|p| {
        let want = &corpus.tallies[&p.speaker_id];
        Variable::ALL
            .iter()
            .all(|&v| (p.get(v).app_count, p.get(v).total_count) == want[v.ordinal()])
    });

    let matrix = build_feature_matrix(&profiles, Measure::Rate, Imputation::Zero)?;
    let dist = DistanceMatrix::from_features(&matrix);
    let k_max = 10.min(dist.len() - 1);
    let selection = optimal_k(&dist, 2, k_max)?;
    let result = pam(&dist, selection.best_k)?;

    let label_of: BTreeMap<&str, &str> = corpus
        .labels
        .iter()
        .map(|l| (l.speaker_id.as_str(), l.profile.as_str()))
        .collect();
    let labels: Vec<String> = matrix
        .speaker_ids
        .iter()
        .map(|id| label_of[id.as_str()].to_string())
        .collect();
    let comp = cluster_composition(&result.assignment, result.k, &labels);
    // report in the configured profile order
    let purity: Vec<ProfilePurity> = config
        .profiles
        .iter()
        .filter_map(|p| comp.groups.iter().find(|g| g.label == p.name))
        .map(|g| ProfilePurity {
            profile: g.label.clone(),
            speakers: g.size,
            dominant_cluster: g.dominant_cluster,
            purity: g.max_share,
        })
        .collect();
    let dominant: std::collections::BTreeSet<usize> =
        purity.iter().map(|p| p.dominant_cluster).collect();
    Ok(RecoveryReport {
        prng: PRNG_ALGORITHM.to_string(),
        seed: config.seed,
        speakers: corpus.labels.len(),
        tokens,
        tallies_match,
        optimal_k: selection.best_k,
        no_cluster_structure: selection.no_cluster_structure,
        silhouette_curve: selection.curve,
        distinct_clusters: dominant.len() == purity.len(),
        criterion_75_holds: comp.groups.iter().all(|g| g.coherent),
        purity,
    })
}
