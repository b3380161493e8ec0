//! Dollar losses for undelivered messages.
//!
//! A failed message costs `alpha(mode) * beta(sector) * C(p_ic)` where `C` is
//! read from a decile cost table. Delivered messages cost nothing.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textsim::{AttemptType, ModeKind, TrialOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostBreakpoint {
    pub probability: f64,
    pub cost_usd: f64,
}

/// Cost per message keyed by interception probability decile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CostTable {
    pub breakpoints: Vec<CostBreakpoint>,
}

impl Default for CostTable {
    fn default() -> Self {
        let rows = [
            (0.1, 10.0),
            (0.2, 7.2),
            (0.3, 5.1),
            (0.4, 2.8),
            (0.5, 1.1),
            (0.6, 0.1),
            (0.7, 0.1),
            (0.8, 0.1),
            (0.9, 0.1),
        ];
        Self {
            breakpoints: rows
                .iter()
                .map(|&(probability, cost_usd)| CostBreakpoint {
                    probability,
                    cost_usd,
                })
                .collect(),
        }
    }
}

impl CostTable {
    pub fn validate(&self) -> Result<()> {
        let bp = &self.breakpoints;
        if bp.is_empty() {
            return Err(Error::config(
                "cost_table",
                "must have at least one breakpoint",
            ));
        }
        for (i, b) in bp.iter().enumerate() {
            if !(0.0..=1.0).contains(&b.probability) {
                return Err(Error::config(
                    format!("cost_table[{i}].probability"),
                    "must lie in [0, 1]",
                ));
            }
            if !(b.cost_usd >= 0.0 && b.cost_usd.is_finite()) {
                return Err(Error::config(
                    format!("cost_table[{i}].cost_usd"),
                    "must be finite and non-negative",
                ));
            }
            if i > 0 {
                if b.probability <= bp[i - 1].probability {
                    return Err(Error::config(
                        format!("cost_table[{i}].probability"),
                        "thresholds must be strictly increasing",
                    ));
                }
                if b.cost_usd > bp[i - 1].cost_usd {
                    return Err(Error::config(
                        format!("cost_table[{i}].cost_usd"),
                        "costs must be non-increasing in probability",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Rounds `p_ic` to the nearest tenth (halves away from zero, so 0.25 maps
    /// to 0.3), clamps into the table's threshold range and returns the cost
    /// of the last breakpoint at or below it.
    pub fn lookup(&self, p_ic: f64) -> f64 {
        assert!(
            (0.0..=1.0).contains(&p_ic),
            "p_ic must lie in [0, 1], got {p_ic}"
        );
        // Snap first so 0.35 (stored as 0.34999..) rounds like the decimal.
        let tenths = ((p_ic * 10.0 * 1e9).round() / 1e9).round();
        let first = self.breakpoints[0].probability;
        let last = self.breakpoints[self.breakpoints.len() - 1].probability;
        let bucket = (tenths / 10.0).clamp(first, last);
        self.breakpoints
            .iter()
            .rev()
            .find(|b| b.probability <= bucket + 1e-9)
            .unwrap_or(&self.breakpoints[0])
            .cost_usd
    }
}

pub fn lookup_cost(table: &CostTable, p_ic: f64) -> f64 {
    table.lookup(p_ic)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Private,
    Commercial,
    Government,
    Military,
}

impl Sector {
    pub const ALL: [Sector; 4] = [
        Sector::Private,
        Sector::Commercial,
        Sector::Government,
        Sector::Military,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Sector::Private => "private",
            Sector::Commercial => "commercial",
            Sector::Government => "government",
            Sector::Military => "military",
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Transmission-mode weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModeCoefficients {
    pub full: f64,
    pub partial: f64,
    pub baseline: f64,
}

impl Default for ModeCoefficients {
    fn default() -> Self {
        Self {
            full: 1.0,
            partial: 2.0,
            baseline: 3.0,
        }
    }
}

impl ModeCoefficients {
    pub fn get(&self, mode: ModeKind) -> f64 {
        match mode {
            ModeKind::Full => self.full,
            ModeKind::Partial => self.partial,
            ModeKind::Baseline => self.baseline,
        }
    }
}

/// Application-sector weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SectorCoefficients {
    pub private: f64,
    pub commercial: f64,
    pub government: f64,
    pub military: f64,
}

impl Default for SectorCoefficients {
    fn default() -> Self {
        Self {
            private: 2.0,
            commercial: 4.0,
            government: 6.0,
            military: 8.0,
        }
    }
}

impl SectorCoefficients {
    pub fn get(&self, sector: Sector) -> f64 {
        match sector {
            Sector::Private => self.private,
            Sector::Commercial => self.commercial,
            Sector::Government => self.government,
            Sector::Military => self.military,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Coefficients {
    pub alpha: ModeCoefficients,
    pub beta: SectorCoefficients,
}

impl Coefficients {
    pub fn validate(&self) -> Result<()> {
        let a = &self.alpha;
        let b = &self.beta;
        let all = [
            ("coefficients.alpha.full", a.full),
            ("coefficients.alpha.partial", a.partial),
            ("coefficients.alpha.baseline", a.baseline),
            ("coefficients.beta.private", b.private),
            ("coefficients.beta.commercial", b.commercial),
            ("coefficients.beta.government", b.government),
            ("coefficients.beta.military", b.military),
        ];
        for (field, v) in all {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::config(field, "must be finite and non-negative"));
            }
        }
        Ok(())
    }
}

/// Loss of one message. Zero when delivered.
pub fn message_loss(
    outcome: &TrialOutcome,
    coeffs: &Coefficients,
    sector: Sector,
    table: &CostTable,
) -> f64 {
    if outcome.delivered {
        return 0.0;
    }
    coeffs.alpha.get(outcome.mode) * coeffs.beta.get(sector) * table.lookup(outcome.p_ic)
}

/// Attempt grouping of a loss row; `Total` sums interception and blocking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AttemptGroup {
    Interception,
    Blocking,
    Total,
}

impl AttemptGroup {
    pub fn as_str(self) -> &'static str {
        match self {
            AttemptGroup::Interception => "interception",
            AttemptGroup::Blocking => "blocking",
            AttemptGroup::Total => "total",
        }
    }

    fn includes(self, attempt: AttemptType) -> bool {
        matches!(
            (self, attempt),
            (AttemptGroup::Total, _)
                | (AttemptGroup::Interception, AttemptType::Interception)
                | (AttemptGroup::Blocking, AttemptType::Blocking)
        )
    }
}

impl fmt::Display for AttemptGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossRecord {
    pub attempt: AttemptGroup,
    pub mode: ModeKind,
    pub sector: Sector,
    pub failed_count: u64,
    pub delivered_count: u64,
    pub total_loss_usd: f64,
    pub mean_loss_per_text_usd: f64,
}

/// One record per (attempt group, mode, sector).
///
/// Rows are ordered interception, blocking, total; modes in order of first
/// appearance in `outcomes`; sectors private through military.
pub fn aggregate_losses(
    outcomes: &[TrialOutcome],
    coeffs: &Coefficients,
    table: &CostTable,
) -> Result<Vec<LossRecord>> {
    if outcomes.is_empty() {
        return Err(Error::config(
            "outcomes",
            "cannot aggregate an empty outcome list",
        ));
    }
    let mut modes: Vec<ModeKind> = Vec::new();
    for o in outcomes {
        if !modes.contains(&o.mode) {
            modes.push(o.mode);
        }
    }

    let groups = [
        AttemptGroup::Interception,
        AttemptGroup::Blocking,
        AttemptGroup::Total,
    ];
    let mut records = Vec::with_capacity(groups.len() * modes.len() * Sector::ALL.len());
    for group in groups {
        for &mode in &modes {
            let selected: Vec<&TrialOutcome> = outcomes
                .iter()
                .filter(|o| o.mode == mode && group.includes(o.attempt_type))
                .collect();
            let delivered_count = selected.iter().filter(|o| o.delivered).count() as u64;
            let failed_count = selected.len() as u64 - delivered_count;
            for sector in Sector::ALL {
                let total_loss_usd: f64 = selected
                    .iter()
                    .map(|o| message_loss(o, coeffs, sector, table))
                    .sum();
                let texts = selected.len() as u64;
                records.push(LossRecord {
                    attempt: group,
                    mode,
                    sector,
                    failed_count,
                    delivered_count,
                    total_loss_usd,
                    mean_loss_per_text_usd: if texts == 0 {
                        0.0
                    } else {
                        total_loss_usd / texts as f64
                    },
                });
            }
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn outcome(mode: ModeKind, p_ic: f64, attempt: AttemptType) -> TrialOutcome {
        TrialOutcome {
            trial_id: 0,
            attempt_type: attempt,
            mode,
            p_ic,
            delivered: p_ic >= 0.5,
        }
    }

    #[test]
    fn lookup_examples() {
        let t = CostTable::default();
        assert_eq!(t.lookup(0.3), 5.1);
        assert_eq!(t.lookup(0.05), 10.0);
        assert_eq!(t.lookup(0.0), 10.0);
        assert_eq!(t.lookup(0.97), 0.1);
        assert_eq!(t.lookup(1.0), 0.1);
    }

    #[test]
    fn lookup_rounds_half_away_from_zero() {
        let t = CostTable::default();
        assert_eq!(t.lookup(0.25), 5.1);
        assert_eq!(t.lookup(0.35), 2.8);
        assert_eq!(t.lookup(0.45), 1.1);
        assert_eq!(t.lookup(0.2499), 7.2);
        assert_eq!(t.lookup(0.15), 7.2);
        assert_eq!(t.lookup(0.14), 10.0);
    }

    #[test]
    #[should_panic(expected = "must lie in [0, 1]")]
    fn lookup_rejects_out_of_range() {
        CostTable::default().lookup(-0.1);
    }

    #[test]
    fn table_validation() {
        assert!(CostTable::default().validate().is_ok());
        let mut t = CostTable::default();
        t.breakpoints[3].cost_usd = 9.0;
        let err = t.validate().unwrap_err().to_string();
        assert!(err.contains("cost_table[3].cost_usd"), "{err}");
        let mut t = CostTable::default();
        t.breakpoints.swap(1, 2);
        assert!(t.validate().is_err());
        assert!(CostTable {
            breakpoints: vec![]
        }
        .validate()
        .is_err());
    }

    #[test]
    fn message_loss_examples() {
        let c = Coefficients::default();
        let t = CostTable::default();
        let ok = outcome(ModeKind::Baseline, 0.7, AttemptType::Interception);
        assert_eq!(message_loss(&ok, &c, Sector::Military, &t), 0.0);
        let failed = outcome(ModeKind::Baseline, 0.3, AttemptType::Interception);
        assert!((message_loss(&failed, &c, Sector::Military, &t) - 122.4).abs() < 1e-9);
        let failed = outcome(ModeKind::Full, 0.3, AttemptType::Blocking);
        assert!((message_loss(&failed, &c, Sector::Private, &t) - 10.2).abs() < 1e-9);
    }

    #[test]
    fn aggregate_shape() {
        let outs: Vec<_> = [ModeKind::Baseline, ModeKind::Partial, ModeKind::Full]
            .iter()
            .flat_map(|&m| {
                AttemptType::ALL
                    .into_iter()
                    .map(move |a| outcome(m, 0.2, a))
            })
            .collect();
        let recs =
            aggregate_losses(&outs, &Coefficients::default(), &CostTable::default()).unwrap();
        assert_eq!(recs.len(), 36);
        for r in &recs {
            let expected_texts = if r.attempt == AttemptGroup::Total {
                2
            } else {
                1
            };
            assert_eq!(r.failed_count + r.delivered_count, expected_texts);
        }
        let total_mil_base = recs
            .iter()
            .find(|r| {
                r.attempt == AttemptGroup::Total
                    && r.mode == ModeKind::Baseline
                    && r.sector == Sector::Military
            })
            .unwrap();
        assert!((total_mil_base.total_loss_usd - 2.0 * 3.0 * 8.0 * 7.2).abs() < 1e-9);
    }

    #[test]
    fn all_delivered_costs_nothing() {
        let outs = vec![outcome(ModeKind::Full, 0.9, AttemptType::Blocking); 10];
        let recs =
            aggregate_losses(&outs, &Coefficients::default(), &CostTable::default()).unwrap();
        assert!(recs.iter().all(|r| r.total_loss_usd == 0.0));
    }

    #[test]
    fn empty_outcomes_rejected() {
        assert!(aggregate_losses(&[], &Coefficients::default(), &CostTable::default()).is_err());
    }

    #[test]
    fn alpha_ratio_on_fixed_failures() {
        let c = Coefficients::default();
        let t = CostTable::default();
        let loss = |m| {
            let outs: Vec<_> = [0.0, 0.1, 0.3, 0.45]
                .iter()
                .map(|&p| outcome(m, p, AttemptType::Interception))
                .collect();
            outs.iter()
                .map(|o| message_loss(o, &c, Sector::Private, &t))
                .sum::<f64>()
        };
        let (b, p, f) = (
            loss(ModeKind::Baseline),
            loss(ModeKind::Partial),
            loss(ModeKind::Full),
        );
        assert!((b / f - 3.0).abs() < 1e-12);
        assert!((p / f - 2.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn lookup_non_increasing(a in 0f64..=1.0, b in 0f64..=1.0) {
            let t = CostTable::default();
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(t.lookup(lo) >= t.lookup(hi));
        }

        #[test]
        fn beta_linearity(ps in prop::collection::vec(0f64..=1.0, 1..60)) {
            let outs: Vec<_> = ps
                .iter()
                .map(|&p| outcome(ModeKind::Partial, p, AttemptType::Interception))
                .collect();
            let c = Coefficients::default();
            let recs = aggregate_losses(&outs, &c, &CostTable::default()).unwrap();
            let per_beta: Vec<f64> = recs
                .iter()
                .filter(|r| r.attempt == AttemptGroup::Interception)
                .map(|r| r.total_loss_usd / c.beta.get(r.sector))
                .collect();
            for v in &per_beta {
                prop_assert!((v - per_beta[0]).abs() <= 1e-9 * per_beta[0].abs().max(1.0));
            }
            prop_assert!(recs.iter().all(|r| r.total_loss_usd >= 0.0));
        }
    }
}
