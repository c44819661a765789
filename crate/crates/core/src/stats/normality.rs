use statrs::distribution::{ContinuousCDF, Normal};

use super::{check_finite, StatsError, TestResult};

// Royston's polynomial approximations for the two extreme coefficients and
// for the mean/log-sd of the normalizing transform of W.
const AN_POLY: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
const AN1_POLY: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const SMALL_GAMMA: [f64; 2] = [-2.273, 0.459];
const SMALL_MEAN: [f64; 4] = [0.5440, -0.39978, 0.025054, -6.714e-4];
const SMALL_LOGSD: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const LARGE_MEAN: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const LARGE_LOGSD: [f64; 3] = [-0.4803, -0.082676, 0.0030302];

/// p-value floor used when W falls outside the small-sample approximation.
const P_FLOOR: f64 = 1e-19;

fn poly(coef: &[f64], x: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("standard normal")
}

/// Shapiro-Wilk W with Royston's (1995) coefficient and p-value
/// approximations; valid for 3 <= n <= 5000.
pub fn shapiro_wilk(x: &[f64]) -> Result<TestResult, StatsError> {
    let n = x.len();
    if !(3..=5000).contains(&n) {
        return Err(StatsError::SampleSize {
            n,
            min: 3,
            max: 5000,
        });
    }
    check_finite(x)?;
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let range = sorted[n - 1] - sorted[0];
    if range <= 0.0 {
        return Err(StatsError::Degenerate("all values identical".into()));
    }

    let a = coefficients(n);
    let mean = sorted.iter().sum::<f64>() / n as f64;
    // Scale by the range so very large or small magnitudes behave alike.
    let ss: f64 = sorted.iter().map(|v| ((v - mean) / range).powi(2)).sum();
    let num: f64 = a
        .iter()
        .zip(&sorted)
        .map(|(ai, v)| ai * (v - mean) / range)
        .sum();
    let w = (num * num / ss).min(1.0);

    Ok(TestResult::new("Shapiro-Wilk", w, None, p_value(w, n)))
}

fn coefficients(n: usize) -> Vec<f64> {
    if n == 3 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        return vec![-h, 0.0, h];
    }
    let norm = std_normal();
    let nf = n as f64;
    let m: Vec<f64> = (1..=n)
        .map(|i| norm.inverse_cdf((i as f64 - 0.375) / (nf + 0.25)))
        .collect();
    let mtm: f64 = m.iter().map(|v| v * v).sum();
    let u = 1.0 / nf.sqrt();

    let mut a = vec![0.0; n];
    let an = m[n - 1] / mtm.sqrt() + poly(&AN_POLY, u);
    if n > 5 {
        let an1 = m[n - 2] / mtm.sqrt() + poly(&AN1_POLY, u);
        let phi = (mtm - 2.0 * m[n - 1].powi(2) - 2.0 * m[n - 2].powi(2))
            / (1.0 - 2.0 * an.powi(2) - 2.0 * an1.powi(2));
        for i in 2..n - 2 {
            a[i] = m[i] / phi.sqrt();
        }
        a[n - 2] = an1;
        a[1] = -an1;
    } else {
        let phi = (mtm - 2.0 * m[n - 1].powi(2)) / (1.0 - 2.0 * an.powi(2));
        for i in 1..n - 1 {
            a[i] = m[i] / phi.sqrt();
        }
    }
    a[n - 1] = an;
    a[0] = -an;
    a
}

fn p_value(w: f64, n: usize) -> f64 {
    let nf = n as f64;
    if n == 3 {
        let p = 6.0 / std::f64::consts::PI * (w.sqrt().asin() - 0.75f64.sqrt().asin());
        return p.clamp(0.0, 1.0);
    }
    let y = (1.0 - w).ln();
    let norm = std_normal();
    if n <= 11 {
        let gamma = poly(&SMALL_GAMMA, nf);
        if y >= gamma {
            return P_FLOOR;
        }
        let y = -(gamma - y).ln();
        let mean = poly(&SMALL_MEAN, nf);
        let sd = poly(&SMALL_LOGSD, nf).exp();
        norm.sf((y - mean) / sd)
    } else {
        let ln_n = nf.ln();
        let mean = poly(&LARGE_MEAN, ln_n);
        let sd = poly(&LARGE_LOGSD, ln_n).exp();
        norm.sf((y - mean) / sd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_tiny_samples() {
        assert!(matches!(
            shapiro_wilk(&[1.0, 2.0]),
            Err(StatsError::SampleSize { .. })
        ));
        assert!(matches!(
            shapiro_wilk(&[]),
            Err(StatsError::SampleSize { .. })
        ));
    }

    #[test]
    fn rejects_constant_sample() {
        assert!(matches!(
            shapiro_wilk(&[2.0; 10]),
            Err(StatsError::Degenerate(_))
        ));
    }

    #[test]
    fn coefficients_are_antisymmetric_and_normalized() {
        for n in [3, 4, 5, 6, 11, 12, 50, 181] {
            let a = coefficients(n);
            let ss: f64 = a.iter().map(|v| v * v).sum();
            assert!((ss - 1.0).abs() < 1e-9, "n={n} sum a^2={ss}");
            for i in 0..n {
                assert!((a[i] + a[n - 1 - i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn uniform_grid_less_normal_than_gaussian_sample() {
        let grid: Vec<f64> = (1..=50).map(f64::from).collect();
        let uniform = shapiro_wilk(&grid).unwrap();
        // deterministic roughly-normal sample: normal quantiles
        let norm = std_normal();
        let gauss: Vec<f64> = (1..=50)
            .map(|i| norm.inverse_cdf((i as f64 - 0.5) / 50.0))
            .collect();
        let normal = shapiro_wilk(&gauss).unwrap();
        assert!(uniform.statistic > 0.9);
        assert!(uniform.p_value > 0.05);
        assert!(uniform.p_value < normal.p_value);
    }

    #[test]
    fn scale_and_shift_invariant() {
        let x = [0.3, 1.7, 2.2, 2.9, 3.1, 4.8, 5.0, 7.5, 9.9];
        let y: Vec<f64> = x.iter().map(|v| 1e6 + 3e4 * v).collect();
        let a = shapiro_wilk(&x).unwrap();
        let b = shapiro_wilk(&y).unwrap();
        assert!((a.statistic - b.statistic).abs() < 1e-9);
    }
}
