//! Monte Carlo model of a message split over several untrusted networks.
//!
//! Every trial draws one value from each network's probability set and one
//! from the interceptor's set. The draws are shared by all transmission modes
//! of the trial (common random numbers), so modes differ only in which
//! network draws they combine. A combined value of at least 0.5 means the
//! interceptor failed and the message was delivered.
//!
//! # Random streams
//!
//! Each `(seed, attempt type, trial)` triple owns an independent ChaCha8
//! generator. Its 32-byte key is
//! `SHA-256("jamtexter.textsim.v1" || seed || attempt || trial)` with the three
//! integers encoded as little-endian `u64`, and its stream id is the attempt
//! type ordinal (interception = 0, blocking = 1). Draws are taken in network
//! order followed by the interceptor, each as an unbiased index obtained by
//! multiply-shift rejection on `next_u64`.

use std::fmt;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Identifies the stream derivation above. Bump when it changes.
pub const RNG_ALGORITHM: &str = "chacha8-sha256.v1";

const RNG_DOMAIN: &[u8] = b"jamtexter.textsim.v1";

/// Largest state space `enumerate_exact` will walk.
pub const MAX_ENUMERATION: u64 = 10_000_000;

pub const DELIVERY_THRESHOLD: f64 = 0.5;

/// Finite set of per-attempt success probabilities offered by one network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkProbSet {
    pub id: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterceptorProfile {
    pub id: String,
    pub values: Vec<f64>,
}

impl NetworkProbSet {
    pub fn new(id: &str, values: &[f64]) -> Self {
        Self {
            id: id.to_owned(),
            values: values.to_vec(),
        }
    }

    pub fn defaults() -> Vec<Self> {
        vec![
            Self::new("w1", &[0.1, 0.2, 0.3, 0.4, 0.45]),
            Self::new("w2", &[0.1, 0.2, 0.3, 0.45, 0.45]),
            Self::new("w3", &[0.2, 0.2, 0.3, 0.45, 0.45]),
            Self::new("w4", &[0.2, 0.2, 0.3, 0.45, 0.45]),
            Self::new("w5", &[0.2, 0.2, 0.3, 0.45, 0.45]),
        ]
    }
}

impl Default for InterceptorProfile {
    fn default() -> Self {
        Self {
            id: "I1".to_owned(),
            values: vec![0.1, 0.2, 0.3, 0.4],
        }
    }
}

fn validate_probabilities(field: &str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::config(field, "probability set must not be empty"));
    }
    if let Some((i, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !(0.0..=1.0).contains(*v))
    {
        return Err(Error::config(
            format!("{field}[{i}]"),
            format!("probability {v} is outside [0, 1]"),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Baseline,
    Partial,
    Full,
}

impl ModeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModeKind::Baseline => "baseline",
            ModeKind::Partial => "partial",
            ModeKind::Full => "full",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "baseline" => Some(ModeKind::Baseline),
            "partial" => Some(ModeKind::Partial),
            "full" => Some(ModeKind::Full),
            _ => None,
        }
    }
}

impl fmt::Display for ModeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransmissionMode {
    pub name: ModeKind,
    /// Network ids whose draws are combined, in order.
    pub networks: Vec<String>,
}

impl TransmissionMode {
    pub fn new(name: ModeKind, networks: &[&str]) -> Self {
        Self {
            name,
            networks: networks.iter().map(|s| (*s).to_owned()).collect(),
        }
    }

    /// One site, three sites and five sites.
    pub fn defaults() -> Vec<Self> {
        vec![
            Self::new(ModeKind::Baseline, &["w1"]),
            Self::new(ModeKind::Partial, &["w1", "w2", "w3"]),
            Self::new(ModeKind::Full, &["w1", "w2", "w3", "w4", "w5"]),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttemptType {
    Interception,
    Blocking,
}

impl AttemptType {
    pub const ALL: [AttemptType; 2] = [AttemptType::Interception, AttemptType::Blocking];

    pub fn ordinal(self) -> u64 {
        match self {
            AttemptType::Interception => 0,
            AttemptType::Blocking => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AttemptType::Interception => "interception",
            AttemptType::Blocking => "blocking",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "interception" => Some(AttemptType::Interception),
            "blocking" => Some(AttemptType::Blocking),
            _ => None,
        }
    }
}

impl fmt::Display for AttemptType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub trial_id: u64,
    pub attempt_type: AttemptType,
    pub mode: ModeKind,
    pub p_ic: f64,
    pub delivered: bool,
}

/// `M(p)`: delivered when the interceptor's combined chance reaches 0.5.
pub fn delivery_indicator(p_ic: f64) -> bool {
    assert!(
        (0.0..=1.0).contains(&p_ic),
        "p_ic must lie in [0, 1], got {p_ic}"
    );
    p_ic >= DELIVERY_THRESHOLD
}

/// Collapses the per-site draws and the interceptor draw into one
/// probability in [0, 1].
pub trait CombinationRule {
    fn name(&self) -> &'static str;

    /// Value before clipping to [0, 1].
    fn raw(&self, site_draws: &[f64], interceptor_draw: f64) -> f64;

    fn combine(&self, site_draws: &[f64], interceptor_draw: f64) -> f64 {
        self.raw(site_draws, interceptor_draw).clamp(0.0, 1.0)
    }
}

/// Sum of the site draws minus the interceptor draw.
///
/// The result is snapped to a 1e-12 grid so that decimal inputs such as
/// `0.3 + 0.1 + 0.2 - 0.1` land exactly on 0.5 instead of one ulp either side.
#[derive(Debug, Clone, Copy, Default)]
pub struct SumMinusInterceptor;

impl CombinationRule for SumMinusInterceptor {
    fn name(&self) -> &'static str {
        "sum-minus-interceptor"
    }

    fn raw(&self, site_draws: &[f64], interceptor_draw: f64) -> f64 {
        let v = site_draws.iter().sum::<f64>() - interceptor_draw;
        (v * 1e12).round() / 1e12
    }
}

/// Indices drawn for one trial: one per network in model order, then the
/// interceptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialDraws {
    pub site_indices: Vec<usize>,
    pub interceptor_index: usize,
}

/// Exact statistics over the full joint sample space of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactDistribution {
    pub combinations: u64,
    /// Mean of the combined value before clipping.
    pub expected_raw: f64,
    pub expected_p_ic: f64,
    pub delivery_probability: f64,
}

/// Validated networks, interceptor and modes with network ids resolved to
/// indices.
#[derive(Debug, Clone)]
pub struct TextingModel<R = SumMinusInterceptor> {
    networks: Vec<NetworkProbSet>,
    interceptor: InterceptorProfile,
    modes: Vec<(ModeKind, Vec<usize>)>,
    rule: R,
}

impl TextingModel<SumMinusInterceptor> {
    pub fn new(
        networks: &[NetworkProbSet],
        interceptor: &InterceptorProfile,
        modes: &[TransmissionMode],
    ) -> Result<Self> {
        Self::with_rule(networks, interceptor, modes, SumMinusInterceptor)
    }
}

impl<R: CombinationRule> TextingModel<R> {
    pub fn with_rule(
        networks: &[NetworkProbSet],
        interceptor: &InterceptorProfile,
        modes: &[TransmissionMode],
        rule: R,
    ) -> Result<Self> {
        if networks.is_empty() {
            return Err(Error::config(
                "network_sets",
                "at least one network is required",
            ));
        }
        for (i, n) in networks.iter().enumerate() {
            if n.id.is_empty() {
                return Err(Error::config(
                    format!("network_sets[{i}].id"),
                    "must not be empty",
                ));
            }
            if networks[..i].iter().any(|m| m.id == n.id) {
                return Err(Error::config(
                    format!("network_sets[{i}].id"),
                    format!("duplicate id `{}`", n.id),
                ));
            }
            validate_probabilities(&format!("network_sets[{i}].values"), &n.values)?;
        }
        validate_probabilities("interceptor.values", &interceptor.values)?;
        if modes.is_empty() {
            return Err(Error::config("modes", "at least one mode is required"));
        }
        let mut resolved = Vec::with_capacity(modes.len());
        for (i, mode) in modes.iter().enumerate() {
            if modes[..i].iter().any(|m| m.name == mode.name) {
                return Err(Error::config(
                    format!("modes[{i}].name"),
                    format!("duplicate mode `{}`", mode.name),
                ));
            }
            if mode.networks.is_empty() {
                return Err(Error::config(
                    format!("modes[{i}].networks"),
                    "a mode must use at least one network",
                ));
            }
            let mut idx = Vec::with_capacity(mode.networks.len());
            for id in &mode.networks {
                let pos = networks.iter().position(|n| &n.id == id).ok_or_else(|| {
                    Error::config(
                        format!("modes[{i}].networks"),
                        format!("unknown network `{id}`"),
                    )
                })?;
                idx.push(pos);
            }
            resolved.push((mode.name, idx));
        }
        Ok(Self {
            networks: networks.to_vec(),
            interceptor: interceptor.clone(),
            modes: resolved,
            rule,
        })
    }

    pub fn modes(&self) -> impl Iterator<Item = ModeKind> + '_ {
        self.modes.iter().map(|(m, _)| *m)
    }

    pub fn rule(&self) -> &R {
        &self.rule
    }

    fn mode_index(&self, mode: ModeKind) -> Result<usize> {
        self.modes
            .iter()
            .position(|(m, _)| *m == mode)
            .ok_or_else(|| Error::config("modes", format!("mode `{mode}` is not configured")))
    }

    /// Combined probability for `mode` given the indices of one trial.
    pub fn sample_p_ic(&self, mode: ModeKind, draws: &TrialDraws) -> Result<f64> {
        let (_, sites) = &self.modes[self.mode_index(mode)?];
        Ok(self.p_ic_at(sites, draws))
    }

    fn p_ic_at(&self, sites: &[usize], draws: &TrialDraws) -> f64 {
        let site_values: Vec<f64> = sites
            .iter()
            .map(|&n| self.networks[n].values[draws.site_indices[n]])
            .collect();
        let k = self.interceptor.values[draws.interceptor_index];
        self.rule.combine(&site_values, k)
    }

    pub fn draw(&self, rng: &mut impl RngCore) -> TrialDraws {
        let site_indices = self
            .networks
            .iter()
            .map(|n| uniform_index(rng, n.values.len()))
            .collect();
        let interceptor_index = uniform_index(rng, self.interceptor.values.len());
        TrialDraws {
            site_indices,
            interceptor_index,
        }
    }

    /// `n_trials` trials per attempt type, every mode evaluated on the same
    /// draws. Output is ordered by (attempt type, trial, configured mode).
    pub fn run_trials(&self, n_trials: u64, seed: u64) -> Vec<TrialOutcome> {
        let mut out = Vec::with_capacity(n_trials as usize * self.modes.len() * 2);
        for attempt in AttemptType::ALL {
            for trial_id in 0..n_trials {
                let mut rng = trial_rng(seed, attempt, trial_id);
                let draws = self.draw(&mut rng);
                for (mode, sites) in &self.modes {
                    let p_ic = self.p_ic_at(sites, &draws);
                    out.push(TrialOutcome {
                        trial_id,
                        attempt_type: attempt,
                        mode: *mode,
                        p_ic,
                        delivered: delivery_indicator(p_ic),
                    });
                }
            }
        }
        out
    }

    /// Walks every equiprobable combination of one value per participating
    /// network and one interceptor value.
    pub fn enumerate_exact(&self, mode: ModeKind) -> Result<ExactDistribution> {
        let (_, sites) = &self.modes[self.mode_index(mode)?];
        let sizes: Vec<usize> = sites
            .iter()
            .map(|&n| self.networks[n].values.len())
            .chain(std::iter::once(self.interceptor.values.len()))
            .collect();
        let total = sizes
            .iter()
            .try_fold(1u64, |acc, &s| acc.checked_mul(s as u64))
            .filter(|&t| t <= MAX_ENUMERATION)
            .ok_or_else(|| Error::StateSpace {
                size: sizes
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join("x"),
                limit: MAX_ENUMERATION,
            })?;

        let mut counter = vec![0usize; sizes.len()];
        let mut site_values = vec![0.0; sites.len()];
        let (mut raw_sum, mut p_sum, mut delivered) = (0.0, 0.0, 0u64);
        for _ in 0..total {
            for (slot, (&n, &i)) in site_values.iter_mut().zip(sites.iter().zip(&counter)) {
                *slot = self.networks[n].values[i];
            }
            let k = self.interceptor.values[counter[sites.len()]];
            let raw = self.rule.raw(&site_values, k);
            let p = raw.clamp(0.0, 1.0);
            raw_sum += raw;
            p_sum += p;
            delivered += u64::from(delivery_indicator(p));
            // odometer increment
            for (c, &s) in counter.iter_mut().zip(&sizes).rev() {
                *c += 1;
                if *c < s {
                    break;
                }
                *c = 0;
            }
        }
        let n = total as f64;
        Ok(ExactDistribution {
            combinations: total,
            expected_raw: raw_sum / n,
            expected_p_ic: p_sum / n,
            delivery_probability: delivered as f64 / n,
        })
    }
}

/// Generator owning the draws of one `(seed, attempt, trial)` triple.
pub fn trial_rng(seed: u64, attempt: AttemptType, trial_id: u64) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(RNG_DOMAIN);
    hasher.update(seed.to_le_bytes());
    hasher.update(attempt.ordinal().to_le_bytes());
    hasher.update(trial_id.to_le_bytes());
    let key: [u8; 32] = hasher.finalize().into();
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(attempt.ordinal());
    rng
}

/// Unbiased index in `0..n` by multiply-shift with rejection.
pub fn uniform_index(rng: &mut impl RngCore, n: usize) -> usize {
    assert!(n > 0, "cannot draw from an empty set");
    let n = n as u64;
    let threshold = n.wrapping_neg() % n;
    loop {
        let m = u128::from(rng.next_u64()) * u128::from(n);
        if (m as u64) >= threshold {
            return (m >> 64) as usize;
        }
    }
}
