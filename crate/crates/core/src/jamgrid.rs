//! Spatial jamming sweep.
//!
//! Every integer receiver position of the square grid, both boundaries
//! included, is evaluated against every transmitter. The interceptors jam
//! with their combined power and the transmitter with the highest SINR is
//! selected as the serving one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagation::{
    euclidean_distance, noise_power_dbm, path_loss_db, received_power_dbm, sinr_db, snr_db,
    sum_dbm, GenerationParams, LinkBudget, Position,
};

/// Distances shorter than this are clamped before the path-loss formula.
pub const MIN_DISTANCE_M: f64 = 1.0;

pub const DEFAULT_GRID_SIDE_KM: f64 = 15.0;

/// A transmitter or interceptor site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Site {
    pub id: String,
    pub x_km: f64,
    pub y_km: f64,
}

impl Site {
    pub fn new(id: &str, x_km: f64, y_km: f64) -> Self {
        Self {
            id: id.to_owned(),
            x_km,
            y_km,
        }
    }

    pub fn position(&self) -> Position {
        Position::new(self.x_km, self.y_km)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub grid_side_km: f64,
    pub transmitters: Vec<Site>,
    pub interceptors: Vec<Site>,
    pub generations: Vec<GenerationParams>,
}

impl Default for Scenario {
    fn default() -> Self {
        // Duplicate coordinates (A = B, D = E) are kept as published.
        Self {
            grid_side_km: DEFAULT_GRID_SIDE_KM,
            transmitters: vec![
                Site::new("A", 4.0, 4.0),
                Site::new("B", 4.0, 4.0),
                Site::new("C", 8.0, 8.0),
                Site::new("D", 14.0, 14.0),
                Site::new("E", 14.0, 14.0),
            ],
            interceptors: vec![
                Site::new("A", 4.1, 14.1),
                Site::new("B", 4.1, 4.1),
                Site::new("C", 8.1, 8.1),
                Site::new("D", 14.1, 4.1),
                Site::new("E", 14.1, 14.1),
            ],
            generations: GenerationParams::defaults(),
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.grid_side_km.is_finite() && self.grid_side_km >= 0.0) {
            return Err(Error::config(
                "scenario.grid_side_km",
                "must be a finite non-negative number of kilometers",
            ));
        }
        if self.transmitters.is_empty() {
            return Err(Error::config(
                "scenario.transmitters",
                "at least one transmitter is required",
            ));
        }
        self.validate_sites("scenario.transmitters", &self.transmitters)?;
        self.validate_sites("scenario.interceptors", &self.interceptors)?;
        if self.generations.is_empty() {
            return Err(Error::config(
                "scenario.generations",
                "at least one generation is required",
            ));
        }
        for (i, g) in self.generations.iter().enumerate() {
            let field = |name: &str| format!("scenario.generations[{i}].{name}");
            if !(g.frequency_hz > 0.0 && g.frequency_hz.is_finite()) {
                return Err(Error::config(field("frequency_hz"), "must be > 0"));
            }
            if !(g.bandwidth_hz > 0.0 && g.bandwidth_hz.is_finite()) {
                return Err(Error::config(field("bandwidth_hz"), "must be > 0"));
            }
            if !g.tx_power_dbm.is_finite() {
                return Err(Error::config(field("tx_power_dbm"), "must be finite"));
            }
            if !g.noise_figure_db.is_finite() {
                return Err(Error::config(field("noise_figure_db"), "must be finite"));
            }
        }
        Ok(())
    }

    fn validate_sites(&self, field: &str, sites: &[Site]) -> Result<()> {
        for (i, site) in sites.iter().enumerate() {
            if site.id.is_empty() {
                return Err(Error::config(
                    format!("{field}[{i}].id"),
                    "must not be empty",
                ));
            }
            if sites[..i].iter().any(|s| s.id == site.id) {
                return Err(Error::config(
                    format!("{field}[{i}].id"),
                    format!("duplicate id `{}`", site.id),
                ));
            }
            if !self.contains(site.position()) {
                return Err(Error::config(
                    format!("{field}[{i}]"),
                    format!(
                        "position ({}, {}) lies outside the [0, {}] km grid",
                        site.x_km, site.y_km, self.grid_side_km
                    ),
                ));
            }
        }
        Ok(())
    }

    pub fn contains(&self, p: Position) -> bool {
        p.is_finite()
            && (0.0..=self.grid_side_km).contains(&p.x_km)
            && (0.0..=self.grid_side_km).contains(&p.y_km)
    }

    /// Number of integer positions along one axis.
    pub fn lattice_len(&self) -> usize {
        self.grid_side_km.floor() as usize + 1
    }

    /// Integer receiver positions, row-major by (y, x).
    pub fn lattice(&self) -> impl Iterator<Item = Position> {
        let n = self.lattice_len();
        (0..n).flat_map(move |y| (0..n).map(move |x| Position::new(x as f64, y as f64)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub ue_position: Position,
    pub generation: GenerationParams,
    pub best_tx_id: String,
    pub link: LinkBudget,
}

fn clamped_path_loss(distance_m: f64, frequency_hz: f64) -> Result<f64> {
    path_loss_db(distance_m.max(MIN_DISTANCE_M), frequency_hz)
}

/// Link budget from one transmitter to the receiver at `ue`.
pub fn link_budget(
    scenario: &Scenario,
    ue: Position,
    tx: &Site,
    generation: &GenerationParams,
) -> Result<LinkBudget> {
    let noise = noise_power_dbm(generation)?;
    let (distances, interference) = interference_terms(scenario, ue, generation)?;
    budget_with(ue, tx, generation, noise, distances, &interference)
}

fn interference_terms(
    scenario: &Scenario,
    ue: Position,
    generation: &GenerationParams,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut distances = Vec::with_capacity(scenario.interceptors.len());
    let mut powers = Vec::with_capacity(scenario.interceptors.len());
    for ix in &scenario.interceptors {
        let d = euclidean_distance(ue, ix.position());
        let pl = clamped_path_loss(d, generation.frequency_hz)?;
        distances.push(d);
        powers.push(received_power_dbm(generation.tx_power_dbm, pl));
    }
    Ok((distances, powers))
}

fn budget_with(
    ue: Position,
    tx: &Site,
    generation: &GenerationParams,
    noise: f64,
    distance_ix_each_m: Vec<f64>,
    interference: &[f64],
) -> Result<LinkBudget> {
    let distance_tx_m = euclidean_distance(ue, tx.position());
    let path_loss_tx_db = clamped_path_loss(distance_tx_m, generation.frequency_hz)?;
    let rx_power_dbm = received_power_dbm(generation.tx_power_dbm, path_loss_tx_db);
    Ok(LinkBudget {
        distance_tx_m,
        distance_ix_each_m,
        path_loss_tx_db,
        rx_power_dbm,
        interference_power_dbm: sum_dbm(interference),
        noise_power_dbm: noise,
        snr_db: snr_db(rx_power_dbm, noise),
        sinr_db: sinr_db(rx_power_dbm, interference, noise),
    })
}

/// Evaluates every transmitter for the receiver at `ue` and keeps the one
/// with the highest SINR. Ties go to the lexicographically smallest id.
pub fn evaluate_cell(
    scenario: &Scenario,
    ue: Position,
    generation: &GenerationParams,
) -> Result<CellResult> {
    if !scenario.contains(ue) {
        return Err(Error::Domain(format!(
            "receiver position ({}, {}) lies outside the grid",
            ue.x_km, ue.y_km
        )));
    }
    if scenario.transmitters.is_empty() {
        return Err(Error::config(
            "scenario.transmitters",
            "at least one transmitter is required",
        ));
    }
    let noise = noise_power_dbm(generation)?;
    let (distances, interference) = interference_terms(scenario, ue, generation)?;

    let mut best: Option<(&Site, LinkBudget)> = None;
    for tx in &scenario.transmitters {
        let link = budget_with(ue, tx, generation, noise, distances.clone(), &interference)?;
        let better = match &best {
            None => true,
            Some((cur, cur_link)) => {
                link.sinr_db > cur_link.sinr_db
                    || (link.sinr_db == cur_link.sinr_db && tx.id < cur.id)
            }
        };
        if better {
            best = Some((tx, link));
        }
    }
    let (tx, link) = best.expect("non-empty transmitter list");
    Ok(CellResult {
        ue_position: ue,
        generation: *generation,
        best_tx_id: tx.id.clone(),
        link,
    })
}

/// One result per (integer position, generation), row-major by (y, x) with
/// generations in configured order.
pub fn sweep_grid(scenario: &Scenario) -> Result<Vec<CellResult>> {
    scenario.validate()?;
    let mut out = Vec::with_capacity(scenario.lattice_len().pow(2) * scenario.generations.len());
    for ue in scenario.lattice() {
        for g in &scenario.generations {
            out.push(evaluate_cell(scenario, ue, g)?);
        }
    }
    Ok(out)
}
