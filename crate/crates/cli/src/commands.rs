//! Subcommand implementations. Every command writes its files under the
//! configured output directory; JSON documents carry `schema_version` and
//! no timestamps, so identical inputs give identical bytes.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use dialecto::clustering::{
    build_feature_matrix, cluster_composition, cluster_means, optimal_k, pam, pam_multistart,
    silhouette, ClusterError, DistanceMatrix, FeatureMatrix, GroupComposition, Imputation, KPoint,
};
use dialecto::corpus::{
    load_metadata, parse_annotated, write_annotated, write_metadata, Document, SpeakerMetadata,
};
use dialecto::matcher::{builtin_rules_for, load_rules, Pattern};
use dialecto::multivariate::{pca, project_2d, write_projection};
use dialecto::profiles::{
    compute_profiles, export_profiles, ApplicationValueMap, Measure, SpeakerProfile,
};
use dialecto::stats::{correlation_matrix, spearman_permutation};
use dialecto::synth::{generate_corpus, SynthConfig, PRNG_ALGORITHM};
use dialecto::variables::{
    export_observations, extract_all, import_observations, variant_distribution, ObservationRow,
    Variable, VariantCount, VariantInventory,
};
use log::{info, warn};
use serde::Serialize;

use crate::config::{RunConfig, DEFAULT_K_MAX};
use crate::InputError;

pub const SCHEMA_VERSION: u32 = 1;

fn input(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    info!("wrote {}", path.display());
    Ok(path)
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_file(dir, name, &text)
}

fn inventory(cfg: &RunConfig) -> Result<VariantInventory> {
    match &cfg.clitics {
        Some(set) => VariantInventory::default().with_clitics(set).map_err(input),
        None => Ok(VariantInventory::default()),
    }
}

fn rules(cfg: &RunConfig, inv: &VariantInventory) -> Result<Vec<Pattern>> {
    match &cfg.rules {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| input(format!("reading {}: {e}", path.display())))?;
            load_rules(&text).map_err(|e| input(format!("{}: {e}", path.display())))
        }
        None => Ok(builtin_rules_for(inv)),
    }
}

/// Expands every corpus pattern; each must match at least one file.
fn corpus_files(patterns: &[String]) -> Result<Vec<PathBuf>> {
    if patterns.is_empty() {
        return Err(input("no corpus given (use --corpus)"));
    }
    let mut files = Vec::new();
    for pattern in patterns {
        let paths = glob::glob(pattern).map_err(|e| input(format!("bad glob `{pattern}`: {e}")))?;
        let mut matched = 0;
        for p in paths {
            let p = p.map_err(|e| input(format!("{pattern}: {e}")))?;
            if p.is_file() {
                files.push(p);
                matched += 1;
            }
        }
        if matched == 0 {
            return Err(input(format!("`{pattern}` matches no files")));
        }
    }
    files.sort();
    files.dedup();
    Ok(files)
}

fn read_corpus(cfg: &RunConfig) -> Result<(Vec<PathBuf>, Vec<Document>)> {
    let files = corpus_files(&cfg.corpus)?;
    let mut docs = Vec::new();
    for f in &files {
        let text =
            fs::read_to_string(f).map_err(|e| input(format!("reading {}: {e}", f.display())))?;
        docs.extend(parse_annotated(&text).map_err(|e| input(format!("{}: {e}", f.display())))?);
    }
    Ok((files, docs))
}

fn read_metadata(cfg: &RunConfig) -> Result<Option<Vec<SpeakerMetadata>>> {
    let Some(path) = &cfg.metadata else {
        return Ok(None);
    };
    let file =
        fs::File::open(path).map_err(|e| input(format!("reading {}: {e}", path.display())))?;
    let records = load_metadata(file).map_err(|e| input(format!("{}: {e}", path.display())))?;
    Ok(Some(records))
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtractSummary {
    pub schema_version: u32,
    pub command: &'static str,
    pub files: Vec<String>,
    pub documents: usize,
    pub tokens: usize,
    pub speakers: usize,
    pub observations: usize,
    pub classification_errors: Vec<String>,
    pub distribution: Vec<VariantCount>,
}

struct Extracted {
    summary: ExtractSummary,
    rows: Vec<ObservationRow>,
    csv: Vec<u8>,
}

fn extract_corpus(cfg: &RunConfig) -> Result<Extracted> {
    let inv = inventory(cfg)?;
    let rules = rules(cfg, &inv)?;
    let (files, docs) = read_corpus(cfg)?;
    if docs.is_empty() {
        warn!("corpus contains no documents");
    }
    let ex = extract_all(&docs, &rules, &inv);
    for e in &ex.errors {
        warn!("{e}");
    }
    let mut csv = Vec::new();
    export_observations(&ex.observations, &mut csv)?;
    let speakers: std::collections::BTreeSet<&str> =
        docs.iter().map(|d| d.speaker_id.as_str()).collect();
    let summary = ExtractSummary {
        schema_version: SCHEMA_VERSION,
        command: "extract",
        files: files.iter().map(|f| f.display().to_string()).collect(),
        documents: docs.len(),
        tokens: docs.iter().map(Document::len).sum(),
        speakers: speakers.len(),
        observations: ex.observations.len(),
        classification_errors: ex.errors.iter().map(ToString::to_string).collect(),
        distribution: variant_distribution(&ex.observations, &inv),
    };
    Ok(Extracted {
        summary,
        rows: ex.observations.iter().map(ObservationRow::from).collect(),
        csv,
    })
}

fn print_distribution(dist: &[VariantCount]) {
    let mut current = None;
    for c in dist {
        if current != Some(c.variable) {
            println!("{} (N = {})", c.variable, c.total);
            current = Some(c.variable);
        }
        println!("  {:<6} {:>7}  {:>5.1}%", c.variant, c.count, c.percent);
    }
}

pub fn cmd_extract(cfg: &RunConfig) -> Result<()> {
    let ex = extract_corpus(cfg)?;
    write_file(&cfg.out, "observations.csv", std::str::from_utf8(&ex.csv)?)?;
    let profiles = compute_profiles(&ex.rows, &[], &ApplicationValueMap::default());
    let mut buf = Vec::new();
    export_profiles(&profiles, &mut buf)?;
    write_file(&cfg.out, "profiles.csv", std::str::from_utf8(&buf)?)?;
    write_json(&cfg.out, "extract_summary.json", &ex.summary)?;
    println!(
        "{} documents, {} tokens, {} observations",
        ex.summary.documents, ex.summary.tokens, ex.summary.observations
    );
    print_distribution(&ex.summary.distribution);
    Ok(())
}

struct Loaded {
    profiles: Vec<SpeakerProfile>,
    metadata: Option<Vec<SpeakerMetadata>>,
    extract: Option<ExtractSummary>,
}

/// Profiles from --observations when given, otherwise from --corpus.
/// Speakers listed in the metadata but absent from the data get empty
/// profiles.
fn load_profiles(cfg: &RunConfig) -> Result<Loaded> {
    let (rows, extract) = match &cfg.observations {
        Some(path) => {
            let file = fs::File::open(path)
                .map_err(|e| input(format!("reading {}: {e}", path.display())))?;
            let rows =
                import_observations(file).map_err(|e| input(format!("{}: {e}", path.display())))?;
            (rows, None)
        }
        None => {
            let ex = extract_corpus(cfg)?;
            (ex.rows, Some(ex.summary))
        }
    };
    let metadata = read_metadata(cfg)?;
    let extra: Vec<String> = metadata
        .iter()
        .flatten()
        .map(|m| m.speaker_id.clone())
        .collect();
    let profiles = compute_profiles(&rows, &extra, &ApplicationValueMap::default());
    Ok(Loaded {
        profiles,
        metadata,
        extract,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PairCell {
    pub a: Variable,
    pub b: Variable,
    pub rho: f64,
    pub p_value: f64,
    pub significant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation_p: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalityOut {
    pub variable: Variable,
    pub w: Option<f64>,
    pub p_value: Option<f64>,
    pub normal: Option<bool>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelateReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub measure: Measure,
    pub n: usize,
    pub alpha: f64,
    pub holm_adjusted: bool,
    pub permutations: usize,
    pub variables: Vec<Variable>,
    /// Spearman rho, row-major in `variables` order.
    pub rho: Vec<Vec<f64>>,
    pub pairs: Vec<PairCell>,
    pub normality: Vec<NormalityOut>,
}

fn correlate(cfg: &RunConfig, profiles: &[SpeakerProfile]) -> Result<CorrelateReport> {
    let m =
        correlation_matrix(profiles, cfg.measure, cfg.holm).map_err(|e| input(e.to_string()))?;
    let column =
        |v: Variable| -> Vec<f64> { profiles.iter().map(|p| p.value(v, cfg.measure)).collect() };
    let mut pairs = Vec::new();
    for (i, &a) in m.variables.iter().enumerate() {
        for (j, &b) in m.variables.iter().enumerate().skip(i + 1) {
            let cell = &m.cells[i][j];
            let permutation_p = if cfg.permutations > 0 {
                let r = spearman_permutation(&column(a), &column(b), cfg.permutations, cfg.seed)
                    .map_err(|e| input(e.to_string()))?;
                Some(r.p_value)
            } else {
                None
            };
            pairs.push(PairCell {
                a,
                b,
                rho: cell.statistic,
                p_value: cell.p_value,
                significant: cell.significant(cfg.alpha),
                permutation_p,
            });
        }
    }
    Ok(CorrelateReport {
        schema_version: SCHEMA_VERSION,
        command: "correlate",
        measure: m.measure,
        n: m.n,
        alpha: cfg.alpha,
        holm_adjusted: m.holm_adjusted,
        permutations: cfg.permutations,
        variables: m.variables.clone(),
        rho: m
            .cells
            .iter()
            .map(|row| row.iter().map(|c| c.statistic).collect())
            .collect(),
        pairs,
        normality: m
            .normality
            .iter()
            .map(|e| NormalityOut {
                variable: e.variable,
                w: e.result.as_ref().map(|r| r.statistic),
                p_value: e.result.as_ref().map(|r| r.p_value),
                normal: e.result.as_ref().map(|r| !r.significant(cfg.alpha)),
                error: e.error.clone(),
            })
            .collect(),
    })
}

fn correlation_csv(r: &CorrelateReport) -> String {
    let mut out = String::from("var_a,var_b,rho,p_value,significant\n");
    for p in &r.pairs {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p.a, p.b, p.rho, p.p_value, p.significant
        ));
    }
    out
}

pub fn cmd_correlate(cfg: &RunConfig) -> Result<()> {
    let loaded = load_profiles(cfg)?;
    let report = correlate(cfg, &loaded.profiles)?;
    write_json(&cfg.out, "correlation.json", &report)?;
    write_file(&cfg.out, "correlation.csv", &correlation_csv(&report))?;
    println!("Spearman ({:?}, n = {})", report.measure, report.n);
    for p in &report.pairs {
        println!(
            "  {:<9} {:<9} rho = {:>7.3}  p = {:.4}{}",
            p.a.as_str(),
            p.b.as_str(),
            p.rho,
            p.p_value,
            if p.significant { "  *" } else { "" }
        );
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Assignment {
    pub speaker_id: String,
    /// 1-based cluster number.
    pub cluster: usize,
    pub silhouette: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupOut {
    pub label: String,
    pub size: usize,
    pub counts: Vec<usize>,
    pub percent: Vec<f64>,
    pub dominant_cluster: usize,
    pub max_share: f64,
    pub coherent: bool,
}

impl From<&GroupComposition> for GroupOut {
    fn from(g: &GroupComposition) -> Self {
        GroupOut {
            label: g.label.clone(),
            size: g.size,
            counts: g.counts.clone(),
            percent: g.percent.clone(),
            dominant_cluster: g.dominant_cluster + 1,
            max_share: g.max_share,
            coherent: g.coherent,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompositionOut {
    pub grouping: &'static str,
    pub cluster_sizes: Vec<usize>,
    pub groups: Vec<GroupOut>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeansOut {
    pub cluster: usize,
    pub size: usize,
    pub mean_rate: BTreeMap<Variable, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub measure: Measure,
    pub imputation: Imputation,
    pub n: usize,
    pub variables: Vec<Variable>,
    pub feature_means: Vec<f64>,
    pub feature_sds: Vec<f64>,
    pub silhouette_curve: Vec<KPoint>,
    pub optimal_k: usize,
    pub no_cluster_structure: bool,
    pub restarts: usize,
    pub medoids: Vec<String>,
    pub total_deviation: f64,
    pub avg_silhouette: f64,
    pub cluster_sizes: Vec<usize>,
    pub assignments: Vec<Assignment>,
    pub composition: Option<CompositionOut>,
    pub cluster_means: Vec<MeansOut>,
}

fn cluster_error(e: ClusterError) -> anyhow::Error {
    input(e.to_string())
}

fn feature_matrix(cfg: &RunConfig, profiles: &[SpeakerProfile]) -> Result<FeatureMatrix> {
    build_feature_matrix(profiles, cfg.measure, cfg.imputation).map_err(cluster_error)
}

fn cluster(
    cfg: &RunConfig,
    matrix: &FeatureMatrix,
    profiles: &[SpeakerProfile],
    metadata: Option<&[SpeakerMetadata]>,
) -> Result<ClusterReport> {
    let dist = DistanceMatrix::from_features(matrix);
    let n = dist.len();
    let k_max = match cfg.k_max {
        Some(k) => k,
        None => DEFAULT_K_MAX.min(n.saturating_sub(1)),
    };
    let selection = optimal_k(&dist, cfg.k_min, k_max).map_err(cluster_error)?;
    let result = if cfg.restarts > 0 {
        pam_multistart(&dist, selection.best_k, cfg.restarts, cfg.seed)
    } else {
        pam(&dist, selection.best_k)
    }
    .map_err(cluster_error)?;
    let widths = silhouette(&result, &dist).widths;
    let composition = metadata.map(|meta| {
        let by_id: BTreeMap<&str, &SpeakerMetadata> =
            meta.iter().map(|m| (m.speaker_id.as_str(), m)).collect();
        let labels: Vec<String> = matrix
            .speaker_ids
            .iter()
            .map(|id| {
                by_id
                    .get(id.as_str())
                    .map_or_else(|| "unknown".to_string(), |m| m.displacement.to_string())
            })
            .collect();
        let c = cluster_composition(&result.assignment, result.k, &labels);
        CompositionOut {
            grouping: "displacement",
            cluster_sizes: c.cluster_sizes,
            groups: c.groups.iter().map(GroupOut::from).collect(),
        }
    });
    Ok(ClusterReport {
        schema_version: SCHEMA_VERSION,
        command: "cluster",
        measure: cfg.measure,
        imputation: cfg.imputation,
        n,
        variables: matrix.variables.clone(),
        feature_means: matrix.means.clone(),
        feature_sds: matrix.sds.clone(),
        silhouette_curve: selection.curve,
        optimal_k: selection.best_k,
        no_cluster_structure: selection.no_cluster_structure,
        restarts: cfg.restarts,
        medoids: result
            .medoids
            .iter()
            .map(|&m| matrix.speaker_ids[m].clone())
            .collect(),
        total_deviation: result.total_deviation,
        avg_silhouette: result.avg_silhouette,
        cluster_sizes: result.sizes(),
        assignments: matrix
            .speaker_ids
            .iter()
            .zip(&result.assignment)
            .zip(&widths)
            .map(|((id, &c), &s)| Assignment {
                speaker_id: id.clone(),
                cluster: c + 1,
                silhouette: s,
            })
            .collect(),
        composition,
        cluster_means: cluster_means(&result, &matrix.speaker_ids, profiles)
            .into_iter()
            .map(|m| MeansOut {
                cluster: m.cluster + 1,
                size: m.size,
                mean_rate: m
                    .variables
                    .iter()
                    .copied()
                    .zip(m.mean_rate.iter().copied())
                    .collect(),
            })
            .collect(),
    })
}

fn assignments_csv(r: &ClusterReport) -> String {
    let mut out = String::from("speaker_id,cluster\n");
    for a in &r.assignments {
        out.push_str(&format!("{},{}\n", a.speaker_id, a.cluster));
    }
    out
}

fn means_csv(r: &ClusterReport) -> String {
    let mut out = String::from("cluster,size");
    for v in Variable::ALL {
        out.push(',');
        out.push_str(v.as_str());
    }
    out.push('\n');
    for m in &r.cluster_means {
        out.push_str(&format!("{},{}", m.cluster, m.size));
        for v in Variable::ALL {
            out.push_str(&format!(",{}", m.mean_rate[&v]));
        }
        out.push('\n');
    }
    out
}

pub fn cmd_cluster(cfg: &RunConfig) -> Result<()> {
    let loaded = load_profiles(cfg)?;
    let matrix = feature_matrix(cfg, &loaded.profiles)?;
    let report = cluster(cfg, &matrix, &loaded.profiles, loaded.metadata.as_deref())?;
    write_json(&cfg.out, "cluster.json", &report)?;
    write_file(&cfg.out, "assignments.csv", &assignments_csv(&report))?;
    write_file(&cfg.out, "cluster_means.csv", &means_csv(&report))?;
    println!(
        "k = {} (avg silhouette {:.3}{}), sizes {:?}",
        report.optimal_k,
        report.avg_silhouette,
        if report.no_cluster_structure {
            ", no clear cluster structure"
        } else {
            ""
        },
        report.cluster_sizes
    );
    if let Some(c) = &report.composition {
        for g in &c.groups {
            println!(
                "  {:<11} n = {:>3}  {:>5.1}% in cluster {}",
                g.label,
                g.size,
                100.0 * g.max_share,
                g.dominant_cluster
            );
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct LoadingOut {
    pub variable: Variable,
    pub components: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PcaReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub measure: Measure,
    pub imputation: Imputation,
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    pub variance_proportion: Vec<f64>,
    pub cumulative_proportion: Vec<f64>,
    pub loadings: Vec<LoadingOut>,
}

fn run_pca(
    cfg: &RunConfig,
    matrix: &FeatureMatrix,
    clusters: Option<&[usize]>,
) -> Result<(PcaReport, String)> {
    let r = pca(matrix).map_err(|e| input(e.to_string()))?;
    let projection = project_2d(&r, clusters).map_err(|e| input(e.to_string()))?;
    let cumulative = r
        .variance_proportion
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let report = PcaReport {
        schema_version: SCHEMA_VERSION,
        command: "pca",
        measure: cfg.measure,
        imputation: cfg.imputation,
        n: r.scores.len(),
        eigenvalues: r.eigenvalues.clone(),
        variance_proportion: r.variance_proportion.clone(),
        cumulative_proportion: cumulative,
        loadings: r
            .variables
            .iter()
            .zip(&r.loadings)
            .map(|(&variable, row)| LoadingOut {
                variable,
                components: row.clone(),
            })
            .collect(),
    };
    Ok((report, write_projection(&projection)))
}

pub fn cmd_pca(cfg: &RunConfig) -> Result<()> {
    let loaded = load_profiles(cfg)?;
    let matrix = feature_matrix(cfg, &loaded.profiles)?;
    // colour the projection by the same clustering `cluster` would produce
    let clusters: Option<Vec<usize>> = match cluster(cfg, &matrix, &loaded.profiles, None) {
        Ok(c) => Some(c.assignments.iter().map(|a| a.cluster - 1).collect()),
        Err(e) => {
            warn!("projection without clusters: {e:#}");
            None
        }
    };
    let (report, csv) = run_pca(cfg, &matrix, clusters.as_deref())?;
    write_json(&cfg.out, "pca.json", &report)?;
    write_file(&cfg.out, "projection.csv", &csv)?;
    for (i, p) in report.variance_proportion.iter().enumerate() {
        println!(
            "Dim{}: {:>5.1}% (cumulative {:.1}%)",
            i + 1,
            100.0 * p,
            100.0 * report.cumulative_proportion[i]
        );
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct TallyOut {
    pub speaker_id: String,
    pub profile: String,
    pub app_count: BTreeMap<Variable, usize>,
    pub total_count: BTreeMap<Variable, usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SynthReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub prng: &'static str,
    pub seed: u64,
    pub config: SynthConfig,
    pub documents: usize,
    pub tokens: usize,
    pub tallies: Vec<TallyOut>,
}

pub fn cmd_synth(cfg: &RunConfig) -> Result<()> {
    let inv = inventory(cfg)?;
    let synth = SynthConfig {
        profiles: cfg.synth.profiles.clone(),
        speakers_per_profile: cfg.synth.speakers_per_profile,
        seed: cfg.seed,
        distractor_rate: cfg.synth.distractor_rate,
    };
    let corpus = generate_corpus(&synth, &inv).map_err(|e| input(e.to_string()))?;
    write_file(
        &cfg.out,
        "corpus.conllu",
        &write_annotated(&corpus.documents),
    )?;
    write_file(&cfg.out, "metadata.csv", &write_metadata(&corpus.metadata))?;
    write_file(&cfg.out, "labels.csv", &corpus.labels_csv())?;
    let tallies = corpus
        .labels
        .iter()
        .map(|l| {
            let t = &corpus.tallies[&l.speaker_id];
            TallyOut {
                speaker_id: l.speaker_id.clone(),
                profile: l.profile.clone(),
                app_count: Variable::ALL
                    .iter()
                    .map(|&v| (v, t[v.ordinal()].0))
                    .collect(),
                total_count: Variable::ALL
                    .iter()
                    .map(|&v| (v, t[v.ordinal()].1))
                    .collect(),
            }
        })
        .collect();
    let tokens = corpus.documents.iter().map(Document::len).sum();
    write_json(
        &cfg.out,
        "synth.json",
        &SynthReport {
            schema_version: SCHEMA_VERSION,
            command: "synth",
            prng: PRNG_ALGORITHM,
            seed: cfg.seed,
            documents: corpus.documents.len(),
            tokens,
            config: synth,
            tallies,
        },
    )?;
    println!(
        "{} speakers, {} tokens written to {}",
        corpus.documents.len(),
        tokens,
        cfg.out.display()
    );
    Ok(())
}

/// A report section: the stage output, or why the stage could not run.
#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Section<T> {
    Ok(T),
    Failed { error: String },
}

impl<T> From<Result<T>> for Section<T> {
    fn from(r: Result<T>) -> Self {
        match r {
            Ok(v) => Section::Ok(v),
            Err(e) => Section::Failed {
                error: format!("{e:#}"),
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FullReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub extract: Option<ExtractSummary>,
    pub correlate: Section<CorrelateReport>,
    pub cluster: Section<ClusterReport>,
    pub pca: Section<PcaReport>,
}

pub fn cmd_report(cfg: &RunConfig) -> Result<()> {
    let loaded = load_profiles(cfg)?;
    let correlate = correlate(cfg, &loaded.profiles).into();
    let matrix = feature_matrix(cfg, &loaded.profiles);
    let cluster_report = matrix
        .as_ref()
        .map_err(|e| anyhow::anyhow!("{e:#}"))
        .and_then(|m| cluster(cfg, m, &loaded.profiles, loaded.metadata.as_deref()));
    let clusters: Option<Vec<usize>> = cluster_report
        .as_ref()
        .ok()
        .map(|c| c.assignments.iter().map(|a| a.cluster - 1).collect());
    let pca = matrix
        .as_ref()
        .map_err(|e| anyhow::anyhow!("{e:#}"))
        .and_then(|m| run_pca(cfg, m, clusters.as_deref()).map(|(r, _)| r));
    let report = FullReport {
        schema_version: SCHEMA_VERSION,
        command: "report",
        extract: loaded.extract,
        correlate,
        cluster: cluster_report.into(),
        pca: pca.into(),
    };
    let path = write_json(&cfg.out, "report.json", &report)?;
    println!("report written to {}", path.display());
    Ok(())
}
