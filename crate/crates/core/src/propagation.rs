//! Free-space link-budget math.
//!
//! Positions are in kilometers, distances handed to the path-loss formula are
//! in meters, absolute powers are in dBm and ratios in dB. Antenna gains and
//! cable losses are fixed at 0 dB.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light used by the path-loss formula, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.998e8;

/// Thermal noise density at room temperature, dBm/Hz.
pub const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;

pub const DEFAULT_NOISE_FIGURE_DB: f64 = 5.0;

pub const DEFAULT_TX_POWER_DBM: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Position {
    pub x_km: f64,
    pub y_km: f64,
}

impl Position {
    pub const fn new(x_km: f64, y_km: f64) -> Self {
        Self { x_km, y_km }
    }

    pub fn is_finite(&self) -> bool {
        self.x_km.is_finite() && self.y_km.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Generation {
    #[serde(rename = "2G")]
    G2,
    #[serde(rename = "3G")]
    G3,
    #[serde(rename = "4G")]
    G4,
    #[serde(rename = "5G")]
    G5,
}

impl Generation {
    pub fn as_str(self) -> &'static str {
        match self {
            Generation::G2 => "2G",
            Generation::G3 => "3G",
            Generation::G4 => "4G",
            Generation::G5 => "5G",
        }
    }
}

impl fmt::Display for Generation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Radio parameters of one cellular generation.
///
/// `tx_power_dbm` is used both for the serving transmitters and for the
/// interceptors that jam them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerationParams {
    pub name: Generation,
    pub frequency_hz: f64,
    pub bandwidth_hz: f64,
    pub tx_power_dbm: f64,
    #[serde(default = "default_noise_figure")]
    pub noise_figure_db: f64,
}

fn default_noise_figure() -> f64 {
    DEFAULT_NOISE_FIGURE_DB
}

impl GenerationParams {
    pub const fn new(name: Generation, frequency_hz: f64, bandwidth_hz: f64) -> Self {
        Self {
            name,
            frequency_hz,
            bandwidth_hz,
            tx_power_dbm: DEFAULT_TX_POWER_DBM,
            noise_figure_db: DEFAULT_NOISE_FIGURE_DB,
        }
    }

    /// The four US cellular generations.
    ///
    /// The 5G bandwidth is the literal 30 GHz of the reference parameter
    /// table. A physically plausible override is a 400 MHz carrier:
    /// `GenerationParams::new(Generation::G5, 26e9, 400e6)`.
    pub fn defaults() -> Vec<Self> {
        vec![
            Self::new(Generation::G2, 850e6, 6.8e6),
            Self::new(Generation::G3, 1.9e9, 25e6),
            Self::new(Generation::G4, 3.5e9, 100e6),
            Self::new(Generation::G5, 26e9, 30e9),
        ]
    }
}

/// Full link budget at one receiver position for one serving transmitter.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkBudget {
    pub distance_tx_m: f64,
    pub distance_ix_each_m: Vec<f64>,
    pub path_loss_tx_db: f64,
    pub rx_power_dbm: f64,
    /// Aggregate of all interceptors, summed in linear milliwatts.
    pub interference_power_dbm: f64,
    pub noise_power_dbm: f64,
    pub snr_db: f64,
    pub sinr_db: f64,
}

/// Euclidean distance between two positions given in kilometers, in meters.
pub fn euclidean_distance(a: Position, b: Position) -> f64 {
    (a.x_km - b.x_km).hypot(a.y_km - b.y_km) * 1000.0
}

/// Free-space path loss `20·log10(4πdf/c)`.
pub fn path_loss_db(distance_m: f64, frequency_hz: f64) -> Result<f64> {
    if !(distance_m > 0.0 && distance_m.is_finite()) {
        return Err(Error::Domain(format!(
            "path loss needs a positive distance, got {distance_m} m"
        )));
    }
    if !(frequency_hz > 0.0 && frequency_hz.is_finite()) {
        return Err(Error::Domain(format!(
            "path loss needs a positive frequency, got {frequency_hz} Hz"
        )));
    }
    let ratio = 4.0 * std::f64::consts::PI * distance_m * frequency_hz / SPEED_OF_LIGHT;
    Ok(20.0 * ratio.log10())
}

/// Receiver noise floor: thermal density over the channel bandwidth plus the
/// noise figure.
pub fn noise_power_dbm(params: &GenerationParams) -> Result<f64> {
    thermal_noise_dbm(params.bandwidth_hz, params.noise_figure_db)
}

pub fn thermal_noise_dbm(bandwidth_hz: f64, noise_figure_db: f64) -> Result<f64> {
    if !(bandwidth_hz > 0.0 && bandwidth_hz.is_finite()) {
        return Err(Error::Domain(format!(
            "noise power needs a positive bandwidth, got {bandwidth_hz} Hz"
        )));
    }
    Ok(THERMAL_NOISE_DBM_PER_HZ + 10.0 * bandwidth_hz.log10() + noise_figure_db)
}

pub fn received_power_dbm(tx_power_dbm: f64, path_loss_db: f64) -> f64 {
    tx_power_dbm - path_loss_db
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

/// Sum of powers in the linear domain, returned in dBm. An empty list is
/// `-inf` dBm.
pub fn sum_dbm(powers_dbm: &[f64]) -> f64 {
    mw_to_dbm(powers_dbm.iter().copied().map(dbm_to_mw).sum())
}

/// `S / (ΣI + N)` in dB. With no interferers this is the plain SNR.
pub fn sinr_db(signal_dbm: f64, interference_dbm: &[f64], noise_dbm: f64) -> f64 {
    let interference_mw: f64 = interference_dbm.iter().copied().map(dbm_to_mw).sum();
    mw_to_dbm(dbm_to_mw(signal_dbm) / (interference_mw + dbm_to_mw(noise_dbm)))
}

pub fn snr_db(signal_dbm: f64, noise_dbm: f64) -> f64 {
    sinr_db(signal_dbm, &[], noise_dbm)
}
