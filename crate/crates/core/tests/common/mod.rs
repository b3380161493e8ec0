//! Reference computations written directly from the formulas, sharing no code
//! with the library's evaluation path.

#![allow(dead_code)]

pub const C: f64 = 2.998e8;

pub fn path_loss(d_m: f64, f_hz: f64) -> f64 {
    10.0 * ((4.0 * std::f64::consts::PI * d_m * f_hz / C).powi(2)).log10()
}

pub fn to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

pub fn dist_m(a: (f64, f64), b: (f64, f64)) -> f64 {
    (((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt() * 1000.0).max(1.0)
}

/// `(sinr_db, id)` for every transmitter at `ue`.
pub fn all_sinrs(
    ue: (f64, f64),
    tx: &[(&str, f64, f64)],
    ix: &[(&str, f64, f64)],
    f_hz: f64,
    bw_hz: f64,
    power_dbm: f64,
    nf_db: f64,
) -> Vec<(f64, String)> {
    let noise_mw = to_mw(-174.0 + 10.0 * bw_hz.log10() + nf_db);
    let interference_mw: f64 = ix
        .iter()
        .map(|&(_, x, y)| to_mw(power_dbm - path_loss(dist_m(ue, (x, y)), f_hz)))
        .sum();
    tx.iter()
        .map(|&(id, x, y)| {
            let s = to_mw(power_dbm - path_loss(dist_m(ue, (x, y)), f_hz));
            (
                10.0 * (s / (interference_mw + noise_mw)).log10(),
                id.to_owned(),
            )
        })
        .collect()
}

/// Brute-force best transmitter: highest SINR, lowest id on ties.
pub fn brute_force_best(sinrs: &[(f64, String)]) -> String {
    let max = sinrs.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    sinrs
        .iter()
        .filter(|s| s.0 == max)
        .map(|s| s.1.clone())
        .min()
        .unwrap()
}

pub const TX: [(&str, f64, f64); 5] = [
    ("A", 4.0, 4.0),
    ("B", 4.0, 4.0),
    ("C", 8.0, 8.0),
    ("D", 14.0, 14.0),
    ("E", 14.0, 14.0),
];

pub const IX: [(&str, f64, f64); 5] = [
    ("A", 4.1, 14.1),
    ("B", 4.1, 4.1),
    ("C", 8.1, 8.1),
    ("D", 14.1, 4.1),
    ("E", 14.1, 14.1),
];

/// Exact delivery probability in hundredths: every default set value is a
/// multiple of 0.01, so the sum rule becomes integer arithmetic.
pub fn delivery_probability_hundredths(sets: &[Vec<i64>], interceptor: &[i64]) -> (u64, u64) {
    let mut combos: Vec<i64> = vec![0];
    for set in sets {
        combos = combos
            .iter()
            .flat_map(|acc| set.iter().map(move |v| acc + v))
            .collect();
    }
    let mut delivered = 0u64;
    let mut total = 0u64;
    for sum in &combos {
        for k in interceptor {
            total += 1;
            if sum - k >= 50 {
                delivered += 1;
            }
        }
    }
    (delivered, total)
}

pub const W1: [i64; 5] = [10, 20, 30, 40, 45];
pub const W2: [i64; 5] = [10, 20, 30, 45, 45];
pub const W3: [i64; 5] = [20, 20, 30, 45, 45];
pub const I1: [i64; 4] = [10, 20, 30, 40];
