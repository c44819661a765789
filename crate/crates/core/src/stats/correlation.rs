use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{check_finite, shapiro_wilk, StatsError, TestResult};
use crate::profiles::{Measure, SpeakerProfile};
use crate::variables::Variable;

/// 1-based ranks; tied values share the average of their positions.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i + 1;
        while j < idx.len() && x[idx[j]] == x[idx[i]] {
            j += 1;
        }
        // positions i..j (0-based) share rank mean((i+1)..=j)
        let r = (i + j + 1) as f64 / 2.0;
        for &k in &idx[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    ranks
}

/// Pearson product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(StatsError::UndefinedCorrelation("x"));
    }
    if syy == 0.0 {
        return Err(StatsError::UndefinedCorrelation("y"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

fn spearman_rho(x: &[f64], y: &[f64]) -> Result<f64, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 4 {
        return Err(StatsError::SampleSize {
            n: x.len(),
            min: 4,
            max: usize::MAX,
        });
    }
    check_finite(x)?;
    check_finite(y)?;
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Spearman's rho with a two-sided p-value from the t approximation
/// (df = n - 2).
pub fn spearman(x: &[f64], y: &[f64]) -> Result<TestResult, StatsError> {
    let rho = spearman_rho(x, y)?;
    let df = x.len() - 2;
    let p = if rho.abs() >= 1.0 {
        0.0
    } else {
        let t = rho * (df as f64 / (1.0 - rho * rho)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df as f64).expect("df >= 2");
        2.0 * dist.sf(t.abs())
    };
    Ok(TestResult::new("Spearman rho", rho, Some(df as u32), p))
}

/// Spearman's rho with a two-sided permutation p-value
/// `(1 + #{|rho*| >= |rho|}) / (1 + resamples)`.
pub fn spearman_permutation(
    x: &[f64],
    y: &[f64],
    resamples: usize,
    seed: u64,
) -> Result<TestResult, StatsError> {
    let rho = spearman_rho(x, y)?;
    let rx = average_ranks(x);
    let mut ry = average_ranks(y);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let threshold = rho.abs() - 1e-12;
    let mut hits = 0usize;
    for _ in 0..resamples {
        ry.shuffle(&mut rng);
        if pearson(&rx, &ry)?.abs() >= threshold {
            hits += 1;
        }
    }
    let p = (hits + 1) as f64 / (resamples + 1) as f64;
    Ok(TestResult::new("Spearman rho (permutation)", rho, None, p))
}

/// Holm step-down adjusted p-values, returned in input order.
pub fn holm_adjust(p: &[f64]) -> Vec<f64> {
    let m = p.len();
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|&a, &b| p[a].total_cmp(&p[b]));
    let mut out = vec![0.0; m];
    let mut running = 0.0f64;
    for (rank, &i) in idx.iter().enumerate() {
        let adj = ((m - rank) as f64 * p[i]).min(1.0);
        running = running.max(adj);
        out[i] = running;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalityEntry {
    pub variable: Variable,
    pub result: Option<TestResult>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    pub measure: Measure,
    pub n: usize,
    pub variables: Vec<Variable>,
    /// Symmetric; diagonal cells are rho = 1, p = 0.
    pub cells: Vec<Vec<TestResult>>,
    pub normality: Vec<NormalityEntry>,
    pub holm_adjusted: bool,
}

impl CorrelationMatrix {
    pub fn cell(&self, a: Variable, b: Variable) -> &TestResult {
        let i = self
            .variables
            .iter()
            .position(|&v| v == a)
            .expect("variable in matrix");
        let j = self
            .variables
            .iter()
            .position(|&v| v == b)
            .expect("variable in matrix");
        &self.cells[i][j]
    }
}

/// Pairwise Spearman correlations of the four speaker-level variables, with
/// a Shapiro-Wilk test per variable. With `holm`, off-diagonal p-values are
/// Holm-adjusted over the six distinct pairs.
pub fn correlation_matrix(
    profiles: &[SpeakerProfile],
    measure: Measure,
    holm: bool,
) -> Result<CorrelationMatrix, StatsError> {
    let n = profiles.len();
    if n < 4 {
        return Err(StatsError::SampleSize {
            n,
            min: 4,
            max: usize::MAX,
        });
    }
    let columns: Vec<Vec<f64>> = Variable::ALL
        .iter()
        .map(|&v| profiles.iter().map(|p| p.value(v, measure)).collect())
        .collect();
    let k = columns.len();
    let diag = |v: &[f64]| -> Result<TestResult, StatsError> {
        // still fails on constant columns
        spearman_rho(v, v)?;
        Ok(TestResult::new(
            "Spearman rho",
            1.0,
            Some((n - 2) as u32),
            0.0,
        ))
    };
    let mut cells: Vec<Vec<Option<TestResult>>> = vec![vec![None; k]; k];
    for i in 0..k {
        cells[i][i] = Some(diag(&columns[i])?);
        for j in i + 1..k {
            let r = spearman(&columns[i], &columns[j])?;
            cells[j][i] = Some(r.clone());
            cells[i][j] = Some(r);
        }
    }
    if holm {
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .collect();
        let raw: Vec<f64> = pairs
            .iter()
            .map(|&(i, j)| cells[i][j].as_ref().unwrap().p_value)
            .collect();
        for (&(i, j), adj) in pairs.iter().zip(holm_adjust(&raw)) {
            for (a, b) in [(i, j), (j, i)] {
                cells[a][b].as_mut().unwrap().p_value = adj;
            }
        }
    }
    let normality = Variable::ALL
        .iter()
        .zip(&columns)
        .map(|(&variable, col)| match shapiro_wilk(col) {
            Ok(r) => NormalityEntry {
                variable,
                result: Some(r),
                error: None,
            },
            Err(e) => NormalityEntry {
                variable,
                result: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    Ok(CorrelationMatrix {
        measure,
        n,
        variables: Variable::ALL.to_vec(),
        cells: cells
            .into_iter()
            .map(|row| row.into_iter().map(Option::unwrap).collect())
            .collect(),
        normality,
        holm_adjusted: holm,
    })
}
