//! Principal component analysis of the scaled feature matrix.

use serde::Serialize;
use thiserror::Error;

use crate::clustering::FeatureMatrix;
use crate::variables::Variable;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PcaError {
    #[error("PCA needs at least 4 rows, have {0}")]
    TooFewRows(usize),
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("rows have inconsistent widths")]
    Ragged,
    #[error("Jacobi rotations did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("{0}")]
    Projection(String),
}

const OFF_DIAGONAL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PcaResult {
    pub speaker_ids: Vec<String>,
    pub variables: Vec<Variable>,
    /// Descending, clamped at zero.
    pub eigenvalues: Vec<f64>,
    pub variance_proportion: Vec<f64>,
    /// `loadings[v][c]`: weight of variable `v` on component `c`.
    pub loadings: Vec<Vec<f64>>,
    /// `scores[i][c]`: row `i` projected onto component `c`.
    pub scores: Vec<Vec<f64>>,
}

impl PcaResult {
    pub fn dims(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations. Returns the
/// eigenvalues and the eigenvectors as columns of `v`.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>), PcaError> {
    let p = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..p)
        .map(|i| (0..p).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    let off = |a: &[Vec<f64>]| -> f64 {
        let mut s = 0.0;
        for i in 0..p {
            for j in 0..p {
                if i != j {
                    s += a[i][j] * a[i][j];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&a) >= OFF_DIAGONAL_TOL {
        if sweeps == MAX_SWEEPS {
            return Err(PcaError::NoConvergence(sweeps));
        }
        sweeps += 1;
        for i in 0..p {
            for j in i + 1..p {
                if a[i][j] == 0.0 {
                    continue;
                }
                let theta = (a[j][j] - a[i][i]) / (2.0 * a[i][j]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..p {
                    let (aki, akj) = (a[k][i], a[k][j]);
                    a[k][i] = c * aki - s * akj;
                    a[k][j] = s * aki + c * akj;
                }
                for k in 0..p {
                    let (aik, ajk) = (a[i][k], a[j][k]);
                    a[i][k] = c * aik - s * ajk;
                    a[j][k] = s * aik + c * ajk;
                }
                for row in v.iter_mut() {
                    let (vi, vj) = (row[i], row[j]);
                    row[i] = c * vi - s * vj;
                    row[j] = s * vi + c * vj;
                }
            }
        }
    }
    Ok(((0..p).map(|i| a[i][i]).collect(), v))
}

/// Eigenvalues, loadings (`[variable][component]`) and scores (`[row][component]`).
pub type Decomposition = (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>);

/// PCA of already-standardized rows (columns centered; covariance uses
/// n - 1). Columns are re-centered defensively.
pub fn pca_rows(rows: &[Vec<f64>]) -> Result<Decomposition, PcaError> {
    let n = rows.len();
    if n < 4 {
        return Err(PcaError::TooFewRows(n));
    }
    let p = rows[0].len();
    for (r, row) in rows.iter().enumerate() {
        if row.len() != p {
            return Err(PcaError::Ragged);
        }
        if let Some(c) = row.iter().position(|v| !v.is_finite()) {
            return Err(PcaError::NonFinite { row: r, col: c });
        }
    }
    let means: Vec<f64> = (0..p)
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let centered: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().zip(&means).map(|(v, m)| v - m).collect())
        .collect();
    let mut cov = vec![vec![0.0; p]; p];
    for r in &centered {
        for i in 0..p {
            for j in 0..=i {
                cov[i][j] += r[i] * r[j];
            }
        }
    }
    for i in 0..p {
        for j in 0..=i {
            cov[i][j] /= (n - 1) as f64;
            cov[j][i] = cov[i][j];
        }
    }

    let (values, vectors) = jacobi_eigen(&cov)?;
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let eigenvalues: Vec<f64> = order.iter().map(|&c| values[c].max(0.0)).collect();
    let mut loadings = vec![vec![0.0; p]; p];
    for (c, &src) in order.iter().enumerate() {
        let col: Vec<f64> = (0..p).map(|v| vectors[v][src]).collect();
        let lead = col.iter().enumerate().fold(
            0,
            |best, (i, x)| if x.abs() > col[best].abs() { i } else { best },
        );
        let sign = if col[lead] < 0.0 { -1.0 } else { 1.0 };
        for v in 0..p {
            loadings[v][c] = sign * col[v];
        }
    }
    let scores = centered
        .iter()
        .map(|r| {
            (0..p)
                .map(|c| (0..p).map(|v| r[v] * loadings[v][c]).sum())
                .collect()
        })
        .collect();
    Ok((eigenvalues, loadings, scores))
}

pub fn pca(matrix: &FeatureMatrix) -> Result<PcaResult, PcaError> {
    let (eigenvalues, loadings, scores) = pca_rows(&matrix.rows)?;
    let total: f64 = eigenvalues.iter().sum();
    let variance_proportion = eigenvalues
        .iter()
        .map(|e| if total > 0.0 { e / total } else { 0.0 })
        .collect();
    Ok(PcaResult {
        speaker_ids: matrix.speaker_ids.clone(),
        variables: matrix.variables.clone(),
        eigenvalues,
        variance_proportion,
        loadings,
        scores,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionRow {
    pub speaker_id: String,
    pub dim1: f64,
    pub dim2: f64,
    pub cluster: Option<usize>,
}

pub const PROJECTION_HEADER: [&str; 4] = ["speaker_id", "dim1", "dim2", "cluster"];

/// First two component scores per speaker, joined with an optional
/// cluster assignment (same row order as the PCA input).
pub fn project_2d(
    result: &PcaResult,
    clusters: Option<&[usize]>,
) -> Result<Vec<ProjectionRow>, PcaError> {
    if result.scores.is_empty() {
        return Err(PcaError::Projection("nothing to project".into()));
    }
    if result.dims() < 2 {
        return Err(PcaError::Projection("need at least two components".into()));
    }
    if let Some(c) = clusters {
        if c.len() != result.scores.len() {
            return Err(PcaError::Projection(format!(
                "{} cluster labels for {} speakers",
                c.len(),
                result.scores.len()
            )));
        }
    }
    Ok(result
        .speaker_ids
        .iter()
        .zip(&result.scores)
        .enumerate()
        .map(|(i, (id, s))| ProjectionRow {
            speaker_id: id.clone(),
            dim1: s[0],
            dim2: s[1],
            cluster: clusters.map(|c| c[i]),
        })
        .collect())
}

/// CSV with header `speaker_id,dim1,dim2,cluster`; the cluster cell is
/// 1-based, empty when no assignment was given.
pub fn write_projection(rows: &[ProjectionRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(PROJECTION_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.speaker_id.clone(),
            r.dim1.to_string(),
            r.dim2.to_string(),
            r.cluster.map(|c| (c + 1).to_string()).unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};
    use rand_xoshiro::Xoshiro256PlusPlus;

    fn standardize(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = rows.len() as f64;
        let p = rows[0].len();
        let mut out = rows.to_vec();
        for j in 0..p {
            let m = rows.iter().map(|r| r[j]).sum::<f64>() / n;
            let sd = (rows.iter().map(|r| (r[j] - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
            for r in out.iter_mut() {
                r[j] = (r[j] - m) / sd;
            }
        }
        out
    }

    fn gaussian(n: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        (0..n)
            .map(|_| (0..4).map(|_| StandardNormal.sample(&mut rng)).collect())
            .collect()
    }

    fn check_identities(rows: &[Vec<f64>]) {
        let (ev, load, scores) = pca_rows(rows).unwrap();
        assert!((ev.iter().sum::<f64>() - 4.0).abs() < 1e-8);
        assert!(ev.windows(2).all(|w| w[0] >= w[1]));
        for a in 0..4 {
            for b in 0..4 {
                let g: f64 = (0..4).map(|v| load[v][a] * load[v][b]).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((g - want).abs() < 1e-8);
            }
        }
        for (r, s) in rows.iter().zip(&scores) {
            for v in 0..4 {
                let back: f64 = (0..4).map(|c| s[c] * load[v][c]).sum();
                assert!((back - r[v]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn rank_one_data() {
        let rows: Vec<Vec<f64>> = (0..10)
            .map(|i| {
                let t = i as f64;
                vec![t, 2.0 * t + 1.0, -t, 0.5 * t]
            })
            .collect();
        let (ev, load, _) = pca_rows(&standardize(&rows)).unwrap();
        assert!((ev[0] / ev.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        // largest loading positive
        let col: Vec<f64> = (0..4).map(|v| load[v][0]).collect();
        let lead = col
            .iter()
            .cloned()
            .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
        assert!(lead > 0.0);
    }

    #[test]
    fn isotropic_proportions() {
        let (ev, _, _) = pca_rows(&standardize(&gaussian(10_000, 2))).unwrap();
        for e in ev {
            assert!((e / 4.0 - 0.25).abs() < 0.05);
        }
    }

    #[test]
    fn algebraic_identities() {
        for seed in 0..5 {
            let mut rows = gaussian(60, seed);
            for r in rows.iter_mut() {
                r[1] += 0.8 * r[0];
                r[3] -= 0.5 * r[2];
            }
            check_identities(&standardize(&rows));
        }
    }

    #[test]
    fn row_permutation_keeps_eigenvalues() {
        let rows = standardize(&gaussian(30, 7));
        let mut rev = rows.clone();
        rev.reverse();
        let (a, _, _) = pca_rows(&rows).unwrap();
        let (b, _, _) = pca_rows(&rev).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn projection_contract() {
        let rows = standardize(&gaussian(8, 1));
        let m = FeatureMatrix {
            speaker_ids: (0..8).map(|i| format!("S{i}")).collect(),
            variables: Variable::ALL.to_vec(),
            measure: crate::profiles::Measure::Rate,
            imputation: crate::clustering::Imputation::Zero,
            rows,
            means: vec![0.0; 4],
            sds: vec![1.0; 4],
        };
        let r = pca(&m).unwrap();
        assert!((r.variance_proportion.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let proj = project_2d(&r, Some(&[0, 0, 1, 1, 2, 2, 0, 1])).unwrap();
        assert_eq!(proj.len(), 8);
        let csv = write_projection(&proj);
        assert!(csv.starts_with("speaker_id,dim1,dim2,cluster\n"));
        assert_eq!(csv.lines().count(), 9);
        assert!(project_2d(&r, Some(&[0])).is_err());
        // 2D distances never exceed full-space distances
        for i in 0..8 {
            for j in 0..8 {
                let full: f64 = (0..4).map(|v| (m.rows[i][v] - m.rows[j][v]).powi(2)).sum();
                let two =
                    (proj[i].dim1 - proj[j].dim1).powi(2) + (proj[i].dim2 - proj[j].dim2).powi(2);
                assert!(two <= full + 1e-9);
            }
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            pca_rows(&vec![vec![0.0; 4]; 3]).unwrap_err(),
            PcaError::TooFewRows(3)
        );
        let mut rows = vec![vec![1.0, 2.0, 3.0, 4.0]; 5];
        rows[2][1] = f64::NAN;
        assert_eq!(
            pca_rows(&rows).unwrap_err(),
            PcaError::NonFinite { row: 2, col: 1 }
        );
        let empty = PcaResult {
            speaker_ids: vec![],
            variables: vec![],
            eigenvalues: vec![],
            variance_proportion: vec![],
            loadings: vec![],
            scores: vec![],
        };
        assert!(project_2d(&empty, None).is_err());
    }
}
