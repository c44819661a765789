//! Per-speaker application rates, smoothed log-odds and rate categories.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::variables::{Occurrence, Variable, VariantInventory, NULL_DETERMINER};

/// The variant counted as "success" for each variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApplicationValueMap {
    values: [String; 4],
}

impl Default for ApplicationValueMap {
    fn default() -> Self {
        ApplicationValueMap {
            values: [
                NULL_DETERMINER.into(),
                "você".into(),
                "te".into(),
                "seu".into(),
            ],
        }
    }
}

impl ApplicationValueMap {
    pub fn get(&self, var: Variable) -> &str {
        &self.values[var.ordinal()]
    }

    /// Overrides one application value; it must belong to the variable's set.
    pub fn set(
        &mut self,
        var: Variable,
        variant: &str,
        inv: &VariantInventory,
    ) -> Result<(), String> {
        if !inv.contains(var, variant) {
            return Err(format!(
                "`{variant}` is not a {var} variant (allowed: {:?})",
                inv.variants(var)
            ));
        }
        self.values[var.ordinal()] = variant.to_string();
        Ok(())
    }

    pub fn validate(&self, inv: &VariantInventory) -> Result<(), String> {
        for var in Variable::ALL {
            if !inv.contains(var, self.get(var)) {
                return Err(format!(
                    "application value `{}` not in {var} set",
                    self.get(var)
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariableUsage {
    pub app_count: usize,
    pub total_count: usize,
    pub rate: f64,
    pub log_odds: f64,
    pub has_data: bool,
}

impl VariableUsage {
    pub fn from_counts(app_count: usize, total_count: usize) -> Self {
        assert!(app_count <= total_count, "app_count exceeds total_count");
        let has_data = total_count > 0;
        VariableUsage {
            app_count,
            total_count,
            rate: if has_data {
                app_count as f64 / total_count as f64
            } else {
                0.0
            },
            log_odds: empirical_log_odds(app_count, total_count),
            has_data,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeakerProfile {
    pub speaker_id: String,
    pub usage: [VariableUsage; 4],
}

impl SpeakerProfile {
    pub fn get(&self, var: Variable) -> &VariableUsage {
        &self.usage[var.ordinal()]
    }

    /// True when every variable has at least one token.
    pub fn complete(&self) -> bool {
        self.usage.iter().all(|u| u.has_data)
    }

    pub fn value(&self, var: Variable, measure: Measure) -> f64 {
        let u = self.get(var);
        match measure {
            Measure::Rate => u.rate,
            Measure::LogOdds => u.log_odds,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Rate,
    LogOdds,
}

/// One profile per speaker in `observations` or `extra_speakers`, sorted by
/// speaker id. Speakers without tokens for a variable get rate 0 and
/// `has_data = false` for it.
pub fn compute_profiles<O: Occurrence>(
    observations: &[O],
    extra_speakers: &[String],
    app: &ApplicationValueMap,
) -> Vec<SpeakerProfile> {
    let mut counts: BTreeMap<&str, [(usize, usize); 4]> = BTreeMap::new();
    for s in extra_speakers {
        counts.entry(s.as_str()).or_default();
    }
    for o in observations {
        let var = o.variable();
        let slot = &mut counts.entry(o.speaker_id()).or_default()[var.ordinal()];
        slot.1 += 1;
        if o.variant() == app.get(var) {
            slot.0 += 1;
        }
    }
    counts
        .into_iter()
        .map(|(speaker, c)| SpeakerProfile {
            speaker_id: speaker.to_string(),
            usage: c.map(|(a, t)| VariableUsage::from_counts(a, t)),
        })
        .collect()
}

/// Smoothed empirical logit `ln((a + 0.5) / (n - a + 0.5))`; 0 when `n == 0`.
pub fn empirical_log_odds(app_count: usize, total_count: usize) -> f64 {
    if total_count == 0 {
        return 0.0;
    }
    let a = app_count as f64;
    let n = total_count as f64;
    ((a + 0.5) / (n - a + 0.5)).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Ternary {
    Low,
    Medium,
    High,
}

/// Low below 40%, Medium from 40% to 60% inclusive, High above 60%.
pub fn categorize_ternary(rate: f64) -> Ternary {
    if rate < 0.40 {
        Ternary::Low
    } else if rate <= 0.60 {
        Ternary::Medium
    } else {
        Ternary::High
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Binary {
    Low,
    High,
}

pub fn categorize_binary(rate: f64) -> Binary {
    if rate >= 0.5 {
        Binary::High
    } else {
        Binary::Low
    }
}

/// Corpus-level application totals per variable: (applications, tokens).
pub fn pooled_totals(profiles: &[SpeakerProfile]) -> [(usize, usize); 4] {
    let mut out = [(0, 0); 4];
    for p in profiles {
        for (slot, u) in out.iter_mut().zip(&p.usage) {
            slot.0 += u.app_count;
            slot.1 += u.total_count;
        }
    }
    out
}

/// Profile CSV: `speaker_id`, then for each variable its counts, rate,
/// log-odds and both categories.
pub fn export_profiles<W: Write>(profiles: &[SpeakerProfile], sink: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(sink);
    let mut header = vec!["speaker_id".to_string()];
    for var in Variable::ALL {
        for field in [
            "app_count",
            "total_count",
            "rate",
            "log_odds",
            "ternary",
            "binary",
        ] {
            header.push(format!("{var}_{field}"));
        }
    }
    w.write_record(&header)?;
    for p in profiles {
        let mut row = vec![p.speaker_id.clone()];
        for u in &p.usage {
            row.push(u.app_count.to_string());
            row.push(u.total_count.to_string());
            row.push(u.rate.to_string());
            row.push(u.log_odds.to_string());
            row.push(format!("{:?}", categorize_ternary(u.rate)));
            row.push(format!("{:?}", categorize_binary(u.rate)));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variables::ObservationRow;
    use proptest::prelude::*;

    fn row(speaker: &str, var: Variable, variant: &str) -> ObservationRow {
        ObservationRow {
            order: 0,
            file: "f".into(),
            speaker_id: speaker.into(),
            variable: var,
            variant: variant.into(),
            preceding_context: String::new(),
            matched: String::new(),
            following_context: String::new(),
        }
    }

    #[test]
    fn det_poss_rate() {
        let mut obs = vec![row("S1", Variable::DetPoss, "ART")];
        obs.extend((0..3).map(|_| row("S1", Variable::DetPoss, "Ø")));
        let p = compute_profiles(&obs, &[], &ApplicationValueMap::default());
        assert_eq!(p.len(), 1);
        let u = p[0].get(Variable::DetPoss);
        assert_eq!((u.app_count, u.total_count), (3, 4));
        assert!((u.rate - 0.75).abs() < 1e-15);
        assert!(u.has_data);
    }

    #[test]
    fn speakers_without_tokens() {
        let obs = vec![row("S1", Variable::Pro2P, "cê")];
        let p = compute_profiles(
            &obs,
            &["S0".to_string(), "S1".to_string()],
            &ApplicationValueMap::default(),
        );
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].speaker_id, "S0");
        assert!(p[0].usage.iter().all(|u| !u.has_data && u.rate == 0.0));
        let clit = p[1].get(Variable::Clit2P);
        assert_eq!(clit.rate, 0.0);
        assert!(!clit.has_data);
        assert!(!p[1].complete());
        assert_eq!(p[1].get(Variable::Pro2P).rate, 0.0);
        assert!(p[1].get(Variable::Pro2P).has_data);
    }

    #[test]
    fn log_odds_values() {
        assert_eq!(empirical_log_odds(5, 10), 0.0);
        assert!((empirical_log_odds(10, 10) - 21f64.ln()).abs() < 1e-15);
        assert!((empirical_log_odds(10, 10) - 3.044522437723423).abs() < 1e-12);
        assert_eq!(empirical_log_odds(0, 0), 0.0);
    }

    #[test]
    fn categories() {
        assert_eq!(categorize_ternary(0.40), Ternary::Medium);
        assert_eq!(categorize_ternary(0.60), Ternary::Medium);
        assert_eq!(categorize_ternary(0.0), Ternary::Low);
        assert_eq!(categorize_ternary(0.399), Ternary::Low);
        assert_eq!(categorize_ternary(0.61), Ternary::High);
        assert_eq!(categorize_binary(0.5), Binary::High);
        assert_eq!(categorize_binary(0.499), Binary::Low);
        assert_eq!(categorize_binary(1.0), Binary::High);
    }

    #[test]
    fn application_map_override() {
        let inv = VariantInventory::default();
        let mut app = ApplicationValueMap::default();
        app.set(Variable::Pro2P, "cê", &inv).unwrap();
        assert_eq!(app.get(Variable::Pro2P), "cê");
        assert!(app.set(Variable::Pro2P, "vós", &inv).is_err());
        app.validate(&inv).unwrap();
    }

    #[test]
    fn profile_csv_layout() {
        let obs = vec![row("S1", Variable::Poss2P, "seu")];
        let p = compute_profiles(&obs, &[], &ApplicationValueMap::default());
        let mut buf = Vec::new();
        export_profiles(&p, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let header = text.lines().next().unwrap();
        assert_eq!(header.split(',').count(), 1 + 4 * 6);
        assert!(
            header.starts_with("speaker_id,det-poss_app_count,det-poss_total_count,det-poss_rate")
        );
        assert!(text.lines().nth(1).unwrap().contains(",1,1,1,"));
    }

    proptest! {
        #[test]
        fn ternary_is_monotone(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(categorize_ternary(lo) <= categorize_ternary(hi));
        }

        #[test]
        fn log_odds_increasing(total in 1usize..500, a in 0usize..499) {
            prop_assume!(a < total);
            prop_assert!(empirical_log_odds(a + 1, total) > empirical_log_odds(a, total));
        }

        #[test]
        fn pooled_equals_sum_over_speakers(
            data in proptest::collection::vec((0usize..6, 0usize..4, any::<bool>()), 0..200)
        ) {
            let obs: Vec<_> = data
                .iter()
                .map(|&(s, v, app)| {
                    let var = Variable::ALL[v];
                    let inv = VariantInventory::default();
                    let variants = inv.variants(var);
                    let variant = if app { variants[0].clone() } else { variants[1].clone() };
                    row(&format!("S{s}"), var, &variant)
                })
                .collect();
            let profiles = compute_profiles(&obs, &[], &ApplicationValueMap::default());
            let pooled = pooled_totals(&profiles);
            for var in Variable::ALL {
                let total = obs.iter().filter(|o| o.variable == var).count();
                let app = obs
                    .iter()
                    .filter(|o| o.variable == var && o.variant == ApplicationValueMap::default().get(var))
                    .count();
                prop_assert_eq!(pooled[var.ordinal()], (app, total));
            }
            for p in &profiles {
                for u in &p.usage {
                    prop_assert!(u.app_count <= u.total_count);
                    prop_assert!((0.0..=1.0).contains(&u.rate));
                }
            }
        }
    }
}
