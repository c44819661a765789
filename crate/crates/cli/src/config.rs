//! Run configuration: command-line flags over an optional TOML file over
//! built-in defaults.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use dialecto::clustering::Imputation;
use dialecto::profiles::Measure;
use dialecto::synth::DialectProfile;
use serde::Deserialize;

use crate::InputError;

/// Flags shared by every subcommand. Anything left unset falls back to the
/// config file, then to the defaults.
#[derive(Debug, Default, Clone, Args)]
pub struct CommonArgs {
    /// TOML file with default settings (flags take precedence)
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Corpus files or glob patterns (repeatable)
    #[arg(long, global = true, value_name = "GLOB")]
    pub corpus: Vec<String>,
    /// Speaker metadata CSV
    #[arg(long, global = true, value_name = "FILE")]
    pub metadata: Option<PathBuf>,
    /// Rule file replacing the built-in search rules
    #[arg(long, global = true, value_name = "FILE")]
    pub rules: Option<PathBuf>,
    /// Observation CSV to use instead of extracting from --corpus
    #[arg(long, global = true, value_name = "FILE")]
    pub observations: Option<PathBuf>,
    /// Speaker-level measure: rate or log_odds
    #[arg(long, global = true, value_parser = parse_measure)]
    pub measure: Option<Measure>,
    /// Speakers lacking tokens for a variable: zero or exclude
    #[arg(long, global = true, value_parser = parse_imputation)]
    pub imputation: Option<Imputation>,
    /// Smallest k tried (default 2)
    #[arg(long, global = true)]
    pub k_min: Option<usize>,
    /// Defaults to min(10, speakers - 1)
    #[arg(long, global = true)]
    pub k_max: Option<usize>,
    /// Seed for permutations, PAM restarts and synthesis
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Significance level
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Holm-adjust the correlation p-values
    #[arg(long, global = true)]
    pub holm: bool,
    /// Permutation resamples for correlation p-values (0 = none)
    #[arg(long, global = true)]
    pub permutations: Option<usize>,
    /// Extra seeded PAM starts (0 = deterministic BUILD only)
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Clitic variant set, comma-separated (default te,lhe)
    #[arg(long, global = true, value_delimiter = ',')]
    pub clitics: Option<Vec<String>>,
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    match s {
        "rate" => Ok(Measure::Rate),
        "log_odds" | "log-odds" => Ok(Measure::LogOdds),
        _ => Err(format!("unknown measure `{s}` (rate, log_odds)")),
    }
}

fn parse_imputation(s: &str) -> Result<Imputation, String> {
    match s {
        "zero" => Ok(Imputation::Zero),
        "exclude" => Ok(Imputation::Exclude),
        _ => Err(format!("unknown imputation `{s}` (zero, exclude)")),
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    corpus: Option<Vec<String>>,
    metadata: Option<PathBuf>,
    rules: Option<PathBuf>,
    observations: Option<PathBuf>,
    measure: Option<Measure>,
    imputation: Option<Imputation>,
    k_min: Option<usize>,
    k_max: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    alpha: Option<f64>,
    holm: Option<bool>,
    permutations: Option<usize>,
    restarts: Option<usize>,
    clitics: Option<Vec<String>>,
    synth: Option<FileSynth>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSynth {
    speakers_per_profile: Option<usize>,
    distractor_rate: Option<f64>,
    #[serde(default)]
    profile: Vec<DialectProfile>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSettings {
    pub speakers_per_profile: usize,
    pub distractor_rate: f64,
    pub profiles: Vec<DialectProfile>,
}

/// Three dialects 0.4 apart on every variable.
pub fn default_profiles() -> Vec<DialectProfile> {
    [("low", 0.1), ("mid", 0.5), ("high", 0.9)]
        .into_iter()
        .map(|(name, p)| DialectProfile::uniform(name, p, (200, 260)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub corpus: Vec<String>,
    pub metadata: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub observations: Option<PathBuf>,
    pub measure: Measure,
    pub imputation: Imputation,
    pub k_min: usize,
    pub k_max: Option<usize>,
    pub seed: u64,
    pub out: PathBuf,
    pub alpha: f64,
    pub holm: bool,
    pub permutations: usize,
    pub restarts: usize,
    pub clitics: Option<Vec<String>>,
    pub synth: SynthSettings,
}

pub const DEFAULT_SEED: u64 = 20_240_611;
pub const DEFAULT_K_MAX: usize = 10;

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => read_file_config(path)?,
            None => FileConfig::default(),
        };
        let synth = file.synth.unwrap_or_default();
        let cfg = RunConfig {
            corpus: if args.corpus.is_empty() {
                file.corpus.unwrap_or_default()
            } else {
                args.corpus.clone()
            },
            metadata: args.metadata.clone().or(file.metadata),
            rules: args.rules.clone().or(file.rules),
            observations: args.observations.clone().or(file.observations),
            measure: args.measure.or(file.measure).unwrap_or(Measure::Rate),
            imputation: args
                .imputation
                .or(file.imputation)
                .unwrap_or(Imputation::Zero),
            k_min: args.k_min.or(file.k_min).unwrap_or(2),
            k_max: args.k_max.or(file.k_max),
            seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            out: args
                .out
                .clone()
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from("dialecto-out")),
            alpha: args.alpha.or(file.alpha).unwrap_or(0.05),
            holm: args.holm || file.holm.unwrap_or(false),
            permutations: args.permutations.or(file.permutations).unwrap_or(0),
            restarts: args.restarts.or(file.restarts).unwrap_or(0),
            clitics: args.clitics.clone().or(file.clitics),
            synth: SynthSettings {
                speakers_per_profile: synth.speakers_per_profile.unwrap_or(30),
                distractor_rate: synth.distractor_rate.unwrap_or(0.0),
                profiles: if synth.profile.is_empty() {
                    default_profiles()
                } else {
                    synth.profile
                },
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            bail!(InputError(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.k_min < 2 {
            bail!(InputError(format!(
                "k-min must be at least 2, got {}",
                self.k_min
            )));
        }
        if let Some(hi) = self.k_max {
            if hi < self.k_min {
                bail!(InputError(format!(
                    "k-max ({hi}) is below k-min ({})",
                    self.k_min
                )));
            }
        }
        Ok(())
    }
}

fn read_file_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("reading config {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| InputError(format!("config {}: {e}", path.display())))
        .context("invalid configuration")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = RunConfig::resolve(&CommonArgs::default()).unwrap();
        assert_eq!(cfg.alpha, 0.05);
        assert_eq!(cfg.measure, Measure::Rate);
        assert_eq!(cfg.k_min, 2);
        assert_eq!(cfg.synth.profiles.len(), 3);
    }

    #[test]
    fn flags_beat_file_beat_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "alpha = 0.01\nseed = 5\nmeasure = \"log_odds\"\n").unwrap();
        let mut args = CommonArgs {
            config: Some(path),
            ..Default::default()
        };
        let from_file = RunConfig::resolve(&args).unwrap();
        assert_eq!(
            (from_file.alpha, from_file.seed, from_file.measure),
            (0.01, 5, Measure::LogOdds)
        );
        args.seed = Some(9);
        let flagged = RunConfig::resolve(&args).unwrap();
        assert_eq!((flagged.alpha, flagged.seed), (0.01, 9));
        assert_eq!(flagged.k_min, 2);
    }

    #[test]
    fn rejects_bad_alpha_and_unknown_keys() {
        let args = CommonArgs {
            alpha: Some(1.5),
            ..Default::default()
        };
        let err = RunConfig::resolve(&args).unwrap_err();
        assert!(err.downcast_ref::<InputError>().is_some());

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        std::fs::write(&path, "alpah = 0.1\n").unwrap();
        let err = RunConfig::resolve(&CommonArgs {
            config: Some(path),
            ..Default::default()
        })
        .unwrap_err();
        assert!(crate::is_input_error(&err));
    }

    #[test]
    fn synth_profiles_from_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("synth.toml");
        std::fs::write(
            &path,
            r#"
[synth]
speakers_per_profile = 4
[[synth.profile]]
name = "a"
p_null_det = 0.2
p_voce = 0.3
ce_share = 0.5
p_te = 0.4
p_seu = 0.9
tokens_per_speaker = [10, 20]
"#,
        )
        .unwrap();
        let cfg = RunConfig::resolve(&CommonArgs {
            config: Some(path),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(cfg.synth.speakers_per_profile, 4);
        assert_eq!(cfg.synth.profiles[0].tokens_per_speaker, (10, 20));
    }
}
