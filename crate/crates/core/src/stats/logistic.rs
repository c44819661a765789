use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use super::{check_finite, StatsError};

const MAX_ITER: usize = 50;
const REL_TOL: f64 = 1e-10;

/// Maximum-likelihood fit of `P(y) = 1 / (1 + exp(-(b0 + b1 x)))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogisticFit {
    pub intercept: f64,
    pub slope: f64,
    /// Wald standard errors of (intercept, slope).
    pub std_errors: [f64; 2],
    /// Two-sided Wald p-values of (intercept, slope).
    pub p_values: [f64; 2],
    pub log_likelihood: f64,
    pub iterations: usize,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn log_likelihood(y: &[bool], x: &[f64], b: [f64; 2]) -> f64 {
    y.iter()
        .zip(x)
        .map(|(&yi, &xi)| {
            let eta = b[0] + b[1] * xi;
            // log(1 + e^eta) computed stably
            let softplus = eta.max(0.0) + (-eta.abs()).exp().ln_1p();
            if yi {
                eta - softplus
            } else {
                -softplus
            }
        })
        .sum()
}

/// Score vector and observed information at `b`.
fn score_and_information(y: &[bool], x: &[f64], b: [f64; 2]) -> ([f64; 2], [[f64; 2]; 2]) {
    let mut g = [0.0; 2];
    let mut h = [[0.0; 2]; 2];
    for (&yi, &xi) in y.iter().zip(x) {
        let mu = sigmoid(b[0] + b[1] * xi);
        let r = f64::from(u8::from(yi)) - mu;
        let w = mu * (1.0 - mu);
        g[0] += r;
        g[1] += r * xi;
        h[0][0] += w;
        h[0][1] += w * xi;
        h[1][1] += w * xi * xi;
    }
    h[1][0] = h[0][1];
    (g, h)
}

fn invert2(h: [[f64; 2]; 2]) -> Option<[[f64; 2]; 2]> {
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    if !det.is_finite() || det.abs() < 1e-300 {
        return None;
    }
    Some([
        [h[1][1] / det, -h[0][1] / det],
        [-h[1][0] / det, h[0][0] / det],
    ])
}

/// Logistic regression of a binary outcome on one predictor by Newton
/// iterations (equivalently IRLS). Stops when the relative change in
/// log-likelihood drops below 1e-10, or after 50 iterations.
pub fn logistic_fit(y: &[bool], x: &[f64]) -> Result<LogisticFit, StatsError> {
    if y.len() != x.len() {
        return Err(StatsError::LengthMismatch(y.len(), x.len()));
    }
    let n = y.len();
    if n < 10 {
        return Err(StatsError::SampleSize {
            n,
            min: 10,
            max: usize::MAX,
        });
    }
    check_finite(x)?;
    let positives = y.iter().filter(|&&v| v).count();
    if positives == 0 || positives == n {
        return Err(StatsError::Degenerate("outcome has a single class".into()));
    }
    let range = |class: bool| {
        x.iter()
            .zip(y)
            .filter(|(_, &c)| c == class)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (&v, _)| {
                (lo.min(v), hi.max(v))
            })
    };
    let (lo0, hi0) = range(false);
    let (lo1, hi1) = range(true);
    if hi0 <= lo1 || hi1 <= lo0 {
        return Err(StatsError::Separation(
            "the predictor separates the two outcome classes (no finite maximum-likelihood estimate)".into(),
        ));
    }
    if lo0.min(lo1) == hi0.max(hi1) {
        return Err(StatsError::Degenerate("predictor is constant".into()));
    }

    let p = positives as f64 / n as f64;
    let mut b = [(p / (1.0 - p)).ln(), 0.0];
    let mut ll = log_likelihood(y, x, b);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_ITER {
        iterations += 1;
        let (g, h) = score_and_information(y, x, b);
        let inv = invert2(h).ok_or(StatsError::NoConvergence(iterations))?;
        let step = [
            inv[0][0] * g[0] + inv[0][1] * g[1],
            inv[1][0] * g[0] + inv[1][1] * g[1],
        ];
        let mut next = [b[0] + step[0], b[1] + step[1]];
        let mut next_ll = log_likelihood(y, x, next);
        // step halving keeps the likelihood non-decreasing
        let mut halvings = 0;
        while next_ll < ll && halvings < 30 {
            next = [
                b[0] + step[0] / 2f64.powi(halvings + 1),
                b[1] + step[1] / 2f64.powi(halvings + 1),
            ];
            next_ll = log_likelihood(y, x, next);
            halvings += 1;
        }
        let rel = ((next_ll - ll) / ll.abs().max(f64::MIN_POSITIVE)).abs();
        b = next;
        ll = next_ll;
        if rel < REL_TOL {
            converged = true;
            break;
        }
    }
    if !converged || !b.iter().all(|v| v.is_finite()) {
        return Err(StatsError::NoConvergence(iterations));
    }

    let (_, h) = score_and_information(y, x, b);
    let cov = invert2(h).ok_or(StatsError::NoConvergence(iterations))?;
    let se = [cov[0][0].sqrt(), cov[1][1].sqrt()];
    let norm = Normal::new(0.0, 1.0).expect("standard normal");
    let wald = |est: f64, s: f64| 2.0 * norm.sf((est / s).abs());
    Ok(LogisticFit {
        intercept: b[0],
        slope: b[1],
        std_errors: se,
        p_values: [wald(b[0], se[0]), wald(b[1], se[1])],
        log_likelihood: ll,
        iterations,
    })
}

#[cfg(test)]
pub(crate) fn score(y: &[bool], x: &[f64], b: [f64; 2]) -> [f64; 2] {
    score_and_information(y, x, b).0
}
