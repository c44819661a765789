use serde::Serialize;
use statrs::function::factorial::ln_binomial;
use statrs::function::gamma::gamma_ur;

use super::{StatsError, TestResult};

/// r x c table of non-negative counts (r, c >= 2).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

impl ContingencyTable {
    pub fn new(counts: Vec<Vec<u64>>) -> Result<Self, StatsError> {
        let r = counts.len();
        let c = counts.first().map_or(0, Vec::len);
        if r < 2 || c < 2 {
            return Err(StatsError::BadTable(format!(
                "need at least 2x2, got {r}x{c}"
            )));
        }
        if counts.iter().any(|row| row.len() != c) {
            return Err(StatsError::BadTable("rows have different lengths".into()));
        }
        if counts.iter().flatten().sum::<u64>() == 0 {
            return Err(StatsError::BadTable("grand total is zero".into()));
        }
        Ok(ContingencyTable {
            row_labels: (1..=r).map(|i| format!("row{i}")).collect(),
            col_labels: (1..=c).map(|j| format!("col{j}")).collect(),
            counts,
        })
    }

    pub fn with_labels(mut self, rows: Vec<String>, cols: Vec<String>) -> Result<Self, StatsError> {
        if rows.len() != self.rows() || cols.len() != self.cols() {
            return Err(StatsError::BadTable(
                "label count does not match table shape".into(),
            ));
        }
        self.row_labels = rows;
        self.col_labels = cols;
        Ok(self)
    }

    /// Cross-tabulates paired categorical observations; labels are sorted.
    pub fn from_pairs<A: AsRef<str>, B: AsRef<str>>(pairs: &[(A, B)]) -> Result<Self, StatsError> {
        use std::collections::BTreeSet;
        let rows: Vec<String> = pairs
            .iter()
            .map(|(a, _)| a.as_ref().to_string())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let cols: Vec<String> = pairs
            .iter()
            .map(|(_, b)| b.as_ref().to_string())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut counts = vec![vec![0u64; cols.len()]; rows.len()];
        for (a, b) in pairs {
            let i = rows
                .binary_search_by(|r| r.as_str().cmp(a.as_ref()))
                .unwrap();
            let j = cols
                .binary_search_by(|c| c.as_str().cmp(b.as_ref()))
                .unwrap();
            counts[i][j] += 1;
        }
        Self::new(counts)?.with_labels(rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.counts.len()
    }

    pub fn cols(&self) -> usize {
        self.counts[0].len()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i][j]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_totals(&self) -> Vec<u64> {
        (0..self.cols())
            .map(|j| self.counts.iter().map(|r| r[j]).sum())
            .collect()
    }

    fn check_margins(&self) -> Result<(Vec<u64>, Vec<u64>), StatsError> {
        let rt = self.row_totals();
        let ct = self.col_totals();
        if let Some(i) = rt.iter().position(|&t| t == 0) {
            return Err(StatsError::ZeroMargin(format!(
                "row `{}`",
                self.row_labels[i]
            )));
        }
        if let Some(j) = ct.iter().position(|&t| t == 0) {
            return Err(StatsError::ZeroMargin(format!(
                "column `{}`",
                self.col_labels[j]
            )));
        }
        Ok((rt, ct))
    }
}

/// Upper-tail probability of the chi-square distribution with `df`
/// degrees of freedom; 1 at `stat <= 0`.
pub fn chi_square_sf(stat: f64, df: u32) -> f64 {
    if stat > 0.0 {
        gamma_ur(f64::from(df) / 2.0, stat / 2.0)
    } else {
        1.0
    }
}

/// Pearson's X² test of independence, without continuity correction.
/// `valid` is false when any expected count is below 5.
pub fn chi_square(t: &ContingencyTable) -> Result<TestResult, StatsError> {
    let (rt, ct) = t.check_margins()?;
    let n = t.total() as f64;
    let mut stat = 0.0;
    let mut min_expected = f64::INFINITY;
    for (i, &r) in rt.iter().enumerate() {
        for (j, &c) in ct.iter().enumerate() {
            let e = r as f64 * c as f64 / n;
            min_expected = min_expected.min(e);
            let d = t.get(i, j) as f64 - e;
            stat += d * d / e;
        }
    }
    let df = ((t.rows() - 1) * (t.cols() - 1)) as u32;
    let p = chi_square_sf(stat, df);
    let mut res = TestResult::new("Pearson chi-square", stat, Some(df), p);
    res.valid = min_expected >= 5.0;
    let k = t.rows().min(t.cols()) as f64 - 1.0;
    res.effect_size = Some((stat / (n * k)).sqrt().min(1.0));
    Ok(res)
}

/// Two-sided Fisher exact test: sum of the hypergeometric probabilities of
/// all tables with the observed margins that are no more likely than the
/// observed one.
pub fn fisher_exact_2x2(t: &ContingencyTable) -> Result<TestResult, StatsError> {
    if t.rows() != 2 || t.cols() != 2 {
        return Err(StatsError::BadTable(format!(
            "Fisher exact test needs a 2x2 table, got {}x{}",
            t.rows(),
            t.cols()
        )));
    }
    let (rt, ct) = t.check_margins()?;
    let (r1, r2, c1) = (rt[0], rt[1], ct[0]);
    let n = r1 + r2;
    let lo = c1.saturating_sub(r2);
    let hi = r1.min(c1);
    let ln_denom = ln_binomial(n, c1);
    let ln_prob = |a: u64| ln_binomial(r1, a) + ln_binomial(r2, c1 - a) - ln_denom;

    let observed = ln_prob(t.get(0, 0));
    // Relative tolerance for probabilities equal to the observed one.
    let cutoff = observed + 1e-7f64.ln_1p();
    let p: f64 = (lo..=hi)
        .map(ln_prob)
        .filter(|&lp| lp <= cutoff)
        .map(f64::exp)
        .sum();
    Ok(TestResult::new(
        "Fisher exact (two-sided)",
        t.get(0, 0) as f64,
        None,
        p,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CramersV {
    pub v: f64,
    pub v_squared: f64,
}

/// Cramér's V = sqrt(X² / (N (min(r, c) - 1))), with V² alongside.
pub fn cramers_v(t: &ContingencyTable) -> Result<CramersV, StatsError> {
    let chi = chi_square(t)?;
    let v = chi.effect_size.expect("chi_square sets effect size");
    Ok(CramersV {
        v,
        v_squared: v * v,
    })
}
