//! K-medoids (PAM) clustering of speaker profiles with silhouette-based
//! choice of k and cluster-composition diagnostics.

use std::collections::HashMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::profiles::{Measure, SpeakerProfile};
use crate::variables::Variable;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ClusterError {
    #[error("need at least {min} speakers, have {n}")]
    TooFewSpeakers { n: usize, min: usize },
    #[error("{0} has zero variance across speakers; exclude it from the feature set")]
    ZeroVariance(Variable),
    #[error("k = {k} outside [2, {max}]")]
    KOutOfRange { k: usize, max: usize },
    #[error("invalid k range {lo}..={hi} for {n} points")]
    BadKRange { lo: usize, hi: usize, n: usize },
    #[error("invalid distance matrix: {0}")]
    BadDistance(String),
}

/// How speakers lacking tokens for a variable are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Imputation {
    /// Keep them; their value is the 0 carried by the profile.
    Zero,
    /// Drop speakers with any variable lacking data.
    Exclude,
}

/// Speakers x variables, each column z-scored (sample sd).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureMatrix {
    pub speaker_ids: Vec<String>,
    pub variables: Vec<Variable>,
    pub measure: Measure,
    pub imputation: Imputation,
    pub rows: Vec<Vec<f64>>,
    /// Column means and standard deviations before scaling.
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

impl FeatureMatrix {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn dims(&self) -> usize {
        self.variables.len()
    }
}

pub fn build_feature_matrix(
    profiles: &[SpeakerProfile],
    measure: Measure,
    imputation: Imputation,
) -> Result<FeatureMatrix, ClusterError> {
    build_feature_matrix_for(profiles, measure, imputation, &Variable::ALL)
}

/// Like [`build_feature_matrix`] over a subset of variables.
pub fn build_feature_matrix_for(
    profiles: &[SpeakerProfile],
    measure: Measure,
    imputation: Imputation,
    variables: &[Variable],
) -> Result<FeatureMatrix, ClusterError> {
    let kept: Vec<&SpeakerProfile> = profiles
        .iter()
        .filter(|p| match imputation {
            Imputation::Zero => true,
            Imputation::Exclude => variables.iter().all(|&v| p.get(v).has_data),
        })
        .collect();
    let n = kept.len();
    if n < 3 {
        return Err(ClusterError::TooFewSpeakers { n, min: 3 });
    }
    let mut rows: Vec<Vec<f64>> = kept
        .iter()
        .map(|p| variables.iter().map(|&v| p.value(v, measure)).collect())
        .collect();
    let mut means = Vec::with_capacity(variables.len());
    let mut sds = Vec::with_capacity(variables.len());
    for (j, &var) in variables.iter().enumerate() {
        let mean = rows.iter().map(|r| r[j]).sum::<f64>() / n as f64;
        let var_ = rows.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let sd = var_.sqrt();
        if !(sd > 1e-12 * mean.abs().max(1.0)) {
            return Err(ClusterError::ZeroVariance(var));
        }
        for r in rows.iter_mut() {
            r[j] = (r[j] - mean) / sd;
        }
        means.push(mean);
        sds.push(sd);
    }
    Ok(FeatureMatrix {
        speaker_ids: kept.iter().map(|p| p.speaker_id.clone()).collect(),
        variables: variables.to_vec(),
        measure,
        imputation,
        rows,
        means,
        sds,
    })
}

/// Dense symmetric dissimilarity matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(n: usize, d: Vec<f64>) -> Result<Self, ClusterError> {
        if d.len() != n * n {
            return Err(ClusterError::BadDistance(format!(
                "{} entries for {n} points",
                d.len()
            )));
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(ClusterError::BadDistance(format!(
                    "non-zero diagonal at {i}"
                )));
            }
            for j in 0..i {
                let (a, b) = (d[i * n + j], d[j * n + i]);
                if !a.is_finite() || a < 0.0 || (a - b).abs() > 1e-12 * a.abs().max(1.0) {
                    return Err(ClusterError::BadDistance(format!(
                        "entry ({i}, {j}) not symmetric/non-negative"
                    )));
                }
            }
        }
        Ok(DistanceMatrix { n, d })
    }

    /// Euclidean distances between rows.
    pub fn euclidean(points: &[Vec<f64>]) -> Self {
        let n = points.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..i {
                let dist = points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                d[i * n + j] = dist;
                d[j * n + i] = dist;
            }
        }
        DistanceMatrix { n, d }
    }

    pub fn from_features(m: &FeatureMatrix) -> Self {
        Self::euclidean(&m.rows)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusteringResult {
    pub k: usize,
    /// Point index of each cluster's medoid, ascending; cluster `c` is the
    /// one whose medoid is `medoids[c]`.
    pub medoids: Vec<usize>,
    pub assignment: Vec<usize>,
    pub total_deviation: f64,
    pub avg_silhouette: f64,
    pub swaps: usize,
    /// Total deviation after BUILD and after each applied swap.
    pub cost_trace: Vec<f64>,
}

impl ClusteringResult {
    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        for &a in &self.assignment {
            s[a] += 1;
        }
        s
    }
}

fn check_k(dist: &DistanceMatrix, k: usize) -> Result<(), ClusterError> {
    let n = dist.len();
    if k < 2 || k >= n {
        return Err(ClusterError::KOutOfRange {
            k,
            max: n.saturating_sub(1),
        });
    }
    Ok(())
}

/// Nearest and second-nearest medoid distances per point.
fn nearest_two(dist: &DistanceMatrix, medoids: &[usize]) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    let n = dist.len();
    let mut near = vec![0usize; n];
    let mut dn = vec![f64::INFINITY; n];
    let mut ds = vec![f64::INFINITY; n];
    for j in 0..n {
        for (m, &med) in medoids.iter().enumerate() {
            let d = dist.get(j, med);
            if d < dn[j] {
                ds[j] = dn[j];
                dn[j] = d;
                near[j] = m;
            } else if d < ds[j] {
                ds[j] = d;
            }
        }
    }
    (near, dn, ds)
}

/// Relative tolerance under which two gains or swap deltas count as tied.
const TIE_TOL: f64 = 1e-10;

fn tied(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= TIE_TOL * scale.max(1.0)
}

fn row_sums(dist: &DistanceMatrix) -> Vec<f64> {
    (0..dist.len())
        .map(|i| (0..dist.len()).map(|j| dist.get(i, j)).sum())
        .collect()
}

// Exact ties are common (an isolated pair gives identical gains to either
// member), and which side rounding favours depends on summation order. Ties
// therefore go first to the more central candidate (smaller distance sum),
// then to the lowest index, which keeps results independent of input order.
fn prefer(value: f64, best: f64, centrality: f64, best_centrality: f64, scale: f64) -> bool {
    if !tied(value, best, scale) {
        return value < best;
    }
    !tied(centrality, best_centrality, scale) && centrality < best_centrality
}

fn build(dist: &DistanceMatrix, k: usize, sums: &[f64]) -> Vec<usize> {
    let n = dist.len();
    let scale = sums.iter().sum::<f64>();
    let mut medoids = Vec::with_capacity(k);
    let mut first = 0;
    for i in 1..n {
        if prefer(sums[i], sums[first], sums[i], sums[first], scale) {
            first = i;
        }
    }
    medoids.push(first);
    let mut nearest: Vec<f64> = (0..n).map(|j| dist.get(j, first)).collect();
    while medoids.len() < k {
        let mut best: Option<(usize, f64)> = None;
        for h in (0..n).filter(|h| !medoids.contains(h)) {
            let gain: f64 = (0..n).map(|j| (nearest[j] - dist.get(j, h)).max(0.0)).sum();
            // maximizing gain == minimizing its negation
            if best.is_none_or(|(b, g)| prefer(-gain, -g, sums[h], sums[b], scale)) {
                best = Some((h, gain));
            }
        }
        let (h, _) = best.expect("k < n leaves a candidate");
        medoids.push(h);
        for (j, nj) in nearest.iter_mut().enumerate() {
            *nj = nj.min(dist.get(j, h));
        }
    }
    medoids
}

/// Runs best-improvement swaps from `medoids` until none lowers the total
/// deviation. Returns the cost after each applied swap (first entry is the
/// starting cost).
fn swap_phase(dist: &DistanceMatrix, medoids: &mut [usize], sums: &[f64]) -> Vec<f64> {
    let n = dist.len();
    let scale = sums.iter().sum::<f64>();
    let (mut near, mut dn, mut ds) = nearest_two(dist, medoids);
    let mut cost: f64 = dn.iter().sum();
    let mut trace = vec![cost];
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for m in 0..medoids.len() {
            for h in (0..n).filter(|h| !medoids.contains(h)) {
                let mut delta = 0.0;
                for j in 0..n {
                    let dh = dist.get(j, h);
                    let now = dn[j];
                    let after = if near[j] == m {
                        ds[j].min(dh)
                    } else {
                        now.min(dh)
                    };
                    delta += after - now;
                }
                let better = match best {
                    None => true,
                    Some((bd, bm, bh)) => {
                        if tied(delta, bd, scale) && tied(sums[h], sums[bh], scale) {
                            // same incoming point quality: drop the less central medoid
                            !tied(sums[medoids[m]], sums[medoids[bm]], scale)
                                && sums[medoids[m]] > sums[medoids[bm]]
                        } else {
                            prefer(delta, bd, sums[h], sums[bh], scale)
                        }
                    }
                };
                if better {
                    best = Some((delta, m, h));
                }
            }
        }
        let Some((delta, m, h)) = best else { break };
        // strict improvement only; zero-delta plateaus end the search
        if delta >= -TIE_TOL * cost.max(1.0) {
            break;
        }
        medoids[m] = h;
        (near, dn, ds) = nearest_two(dist, medoids);
        cost = dn.iter().sum();
        trace.push(cost);
    }
    trace
}

fn finish(dist: &DistanceMatrix, mut medoids: Vec<usize>, trace: Vec<f64>) -> ClusteringResult {
    medoids.sort_unstable();
    let n = dist.len();
    let assignment: Vec<usize> = (0..n)
        .map(|j| {
            if let Some(c) = medoids.iter().position(|&m| m == j) {
                return c;
            }
            let mut best = (0, f64::INFINITY);
            for (c, &m) in medoids.iter().enumerate() {
                let d = dist.get(j, m);
                if d < best.1 {
                    best = (c, d);
                }
            }
            best.0
        })
        .collect();
    let total_deviation = (0..n).map(|j| dist.get(j, medoids[assignment[j]])).sum();
    let k = medoids.len();
    let sil = silhouette_widths(&assignment, k, dist);
    ClusteringResult {
        k,
        medoids,
        assignment,
        total_deviation,
        avg_silhouette: sil.average,
        swaps: trace.len() - 1,
        cost_trace: trace,
    }
}

/// Partitioning around medoids: greedy BUILD, then best-improvement SWAP.
/// Deterministic; ties go to the lowest index.
pub fn pam(dist: &DistanceMatrix, k: usize) -> Result<ClusteringResult, ClusterError> {
    check_k(dist, k)?;
    let sums = row_sums(dist);
    let mut medoids = build(dist, k, &sums);
    let trace = swap_phase(dist, &mut medoids, &sums);
    Ok(finish(dist, medoids, trace))
}

/// PAM from the BUILD start plus `restarts` seeded random starts, keeping
/// the lowest total deviation (earliest start on ties).
pub fn pam_multistart(
    dist: &DistanceMatrix,
    k: usize,
    restarts: usize,
    seed: u64,
) -> Result<ClusteringResult, ClusterError> {
    let mut best = pam(dist, k)?;
    let sums = row_sums(dist);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    for _ in 0..restarts {
        let mut medoids = sample(&mut rng, dist.len(), k).into_vec();
        let trace = swap_phase(dist, &mut medoids, &sums);
        let candidate = finish(dist, medoids, trace);
        if candidate.total_deviation < best.total_deviation - 1e-12 * (1.0 + best.total_deviation) {
            best = candidate;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Silhouette {
    pub widths: Vec<f64>,
    pub average: f64,
}

/// Silhouette widths `(b - a) / max(a, b)`; members of singleton clusters
/// get 0.
pub fn silhouette(result: &ClusteringResult, dist: &DistanceMatrix) -> Silhouette {
    silhouette_widths(&result.assignment, result.k, dist)
}

pub fn silhouette_widths(assignment: &[usize], k: usize, dist: &DistanceMatrix) -> Silhouette {
    let n = assignment.len();
    let mut sizes = vec![0usize; k];
    for &a in assignment {
        sizes[a] += 1;
    }
    let widths: Vec<f64> = (0..n)
        .map(|i| {
            let own = assignment[i];
            if sizes[own] <= 1 {
                return 0.0;
            }
            let mut sums = vec![0.0; k];
            for j in 0..n {
                if j != i {
                    sums[assignment[j]] += dist.get(i, j);
                }
            }
            let a = sums[own] / (sizes[own] - 1) as f64;
            let b = (0..k)
                .filter(|&c| c != own && sizes[c] > 0)
                .map(|c| sums[c] / sizes[c] as f64)
                .fold(f64::INFINITY, f64::min);
            let denom = a.max(b);
            if !b.is_finite() || denom == 0.0 {
                0.0
            } else {
                (b - a) / denom
            }
        })
        .collect();
    let average = if n == 0 {
        0.0
    } else {
        widths.iter().sum::<f64>() / n as f64
    };
    Silhouette { widths, average }
}

/// Average silhouette below which a partition is reported as lacking
/// cluster structure. Kaufman & Rousseeuw call 0.26-0.50 "weak, could be
/// artificial"; homogeneous noise in four dimensions routinely scores
/// around 0.25 at larger k, so the flag uses the upper end of that band.
pub const WEAK_STRUCTURE: f64 = 0.50;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KPoint {
    pub k: usize,
    pub avg_silhouette: f64,
    pub total_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KSelection {
    pub best_k: usize,
    pub curve: Vec<KPoint>,
    /// True when the best average silhouette is below [`WEAK_STRUCTURE`].
    pub no_cluster_structure: bool,
}

/// Runs PAM for each k in `k_min..=k_max` and picks the k with the highest
/// average silhouette (smallest k on ties).
pub fn optimal_k(
    dist: &DistanceMatrix,
    k_min: usize,
    k_max: usize,
) -> Result<KSelection, ClusterError> {
    let n = dist.len();
    if k_min < 2 || k_min > k_max || k_max >= n {
        return Err(ClusterError::BadKRange {
            lo: k_min,
            hi: k_max,
            n,
        });
    }
    let mut curve = Vec::new();
    for k in k_min..=k_max {
        let r = pam(dist, k)?;
        curve.push(KPoint {
            k,
            avg_silhouette: r.avg_silhouette,
            total_deviation: r.total_deviation,
        });
    }
    let best = curve.iter().fold(&curve[0], |b, p| {
        if p.avg_silhouette > b.avg_silhouette {
            p
        } else {
            b
        }
    });
    Ok(KSelection {
        best_k: best.k,
        no_cluster_structure: best.avg_silhouette < WEAK_STRUCTURE,
        curve,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupComposition {
    pub label: String,
    pub size: usize,
    /// Members per cluster.
    pub counts: Vec<usize>,
    /// Percentage of this group's members in each cluster.
    pub percent: Vec<f64>,
    pub dominant_cluster: usize,
    /// Largest fraction of the group found in a single cluster.
    pub max_share: f64,
    /// `max_share` exceeds the 0.75 coherence threshold.
    pub coherent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Composition {
    pub k: usize,
    pub cluster_sizes: Vec<usize>,
    pub groups: Vec<GroupComposition>,
}

pub const COHERENCE_THRESHOLD: f64 = 0.75;

/// Cross-tabulates cluster assignments against a group label per point
/// (e.g. displacement profile). Groups are listed in label order.
pub fn cluster_composition(assignment: &[usize], k: usize, labels: &[String]) -> Composition {
    assert_eq!(
        assignment.len(),
        labels.len(),
        "one label per assigned point"
    );
    let mut by_label: std::collections::BTreeMap<&str, Vec<usize>> = Default::default();
    let mut cluster_sizes = vec![0; k];
    for (&c, l) in assignment.iter().zip(labels) {
        by_label.entry(l.as_str()).or_insert_with(|| vec![0; k])[c] += 1;
        cluster_sizes[c] += 1;
    }
    let groups = by_label
        .into_iter()
        .map(|(label, counts)| {
            let size: usize = counts.iter().sum();
            let (dominant_cluster, &max) =
                counts
                    .iter()
                    .enumerate()
                    .fold((0, &0), |b, (c, n)| if n > b.1 { (c, n) } else { b });
            let max_share = max as f64 / size as f64;
            GroupComposition {
                label: label.to_string(),
                size,
                percent: counts
                    .iter()
                    .map(|&c| 100.0 * c as f64 / size as f64)
                    .collect(),
                counts,
                dominant_cluster,
                max_share,
                coherent: max_share > COHERENCE_THRESHOLD,
            }
        })
        .collect();
    Composition {
        k,
        cluster_sizes,
        groups,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterMeans {
    pub cluster: usize,
    pub size: usize,
    pub variables: Vec<Variable>,
    /// Unscaled mean application rate per variable.
    pub mean_rate: Vec<f64>,
}

/// Per-cluster mean rates over the speakers of `speaker_ids` (the row order
/// used for clustering).
pub fn cluster_means(
    result: &ClusteringResult,
    speaker_ids: &[String],
    profiles: &[SpeakerProfile],
) -> Vec<ClusterMeans> {
    let lookup: HashMap<&str, &SpeakerProfile> = profiles
        .iter()
        .map(|p| (p.speaker_id.as_str(), p))
        .collect();
    let mut sums = vec![[0.0; 4]; result.k];
    let mut sizes = vec![0usize; result.k];
    for (id, &c) in speaker_ids.iter().zip(&result.assignment) {
        let p = lookup[id.as_str()];
        for v in Variable::ALL {
            sums[c][v.ordinal()] += p.get(v).rate;
        }
        sizes[c] += 1;
    }
    (0..result.k)
        .map(|c| ClusterMeans {
            cluster: c,
            size: sizes[c],
            variables: Variable::ALL.to_vec(),
            mean_rate: sums[c]
                .iter()
                .map(|s| {
                    if sizes[c] == 0 {
                        0.0
                    } else {
                        s / sizes[c] as f64
                    }
                })
                .collect(),
        })
        .collect()
}
