//! CSV files exchanged with the plotting scripts.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::econ::LossRecord;
use crate::error::{Error, Result};
use crate::jamgrid::CellResult;
use crate::textsim::{AttemptType, ModeKind, TrialOutcome};

pub const GRID_FILE: &str = "grid_results.csv";
pub const TEXTING_FILE: &str = "texting_results.csv";
pub const LOSSES_FILE: &str = "losses.csv";

pub const GRID_HEADER: [&str; 11] = [
    "ue_x_km",
    "ue_y_km",
    "generation",
    "best_tx_id",
    "distance_tx_m",
    "path_loss_db",
    "rx_power_dbm",
    "interference_dbm",
    "noise_dbm",
    "snr_db",
    "sinr_db",
];

pub const TEXTING_HEADER: [&str; 5] = ["trial_id", "attempt_type", "mode", "p_ic", "delivered"];

pub const LOSSES_HEADER: [&str; 7] = [
    "attempt_type",
    "mode",
    "sector",
    "failed_count",
    "delivered_count",
    "total_loss_usd",
    "mean_loss_per_text_usd",
];

/// C `%.{sig}g` formatting: `sig` significant digits, trailing zeros
/// removed, exponent form outside `1e-4 <= |x| < 10^sig`.
pub fn format_sig(x: f64, sig: usize) -> String {
    assert!(sig > 0);
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_owned()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(file)))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Schema {
            file: path.display().to_string(),
            reason: format!("{other:?}"),
        },
    }
}

fn finish(path: &Path, w: csv::Writer<BufWriter<File>>) -> Result<()> {
    let mut inner = w
        .into_inner()
        .map_err(|e| Error::io(path, std::io::Error::other(e.to_string())))?;
    inner.flush().map_err(|e| Error::io(path, e))
}

pub fn write_grid(path: &Path, rows: &[CellResult]) -> Result<usize> {
    let mut w = writer(path)?;
    w.write_record(GRID_HEADER).map_err(|e| csv_err(path, e))?;
    for r in rows {
        let l = &r.link;
        w.write_record([
            format_sig(r.ue_position.x_km, 6),
            format_sig(r.ue_position.y_km, 6),
            r.generation.name.to_string(),
            r.best_tx_id.clone(),
            format_sig(l.distance_tx_m, 6),
            format_sig(l.path_loss_tx_db, 6),
            format_sig(l.rx_power_dbm, 6),
            format_sig(l.interference_power_dbm, 6),
            format_sig(l.noise_power_dbm, 6),
            format_sig(l.snr_db, 6),
            format_sig(l.sinr_db, 6),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    finish(path, w)?;
    Ok(rows.len())
}

pub fn write_texting(path: &Path, outcomes: &[TrialOutcome]) -> Result<usize> {
    let mut w = writer(path)?;
    w.write_record(TEXTING_HEADER)
        .map_err(|e| csv_err(path, e))?;
    for o in outcomes {
        w.write_record([
            o.trial_id.to_string(),
            o.attempt_type.to_string(),
            o.mode.to_string(),
            format!("{:.4}", o.p_ic),
            u8::from(o.delivered).to_string(),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    finish(path, w)?;
    Ok(outcomes.len())
}

pub fn write_losses(path: &Path, records: &[LossRecord]) -> Result<usize> {
    let mut w = writer(path)?;
    w.write_record(LOSSES_HEADER)
        .map_err(|e| csv_err(path, e))?;
    for r in records {
        w.write_record([
            r.attempt.to_string(),
            r.mode.to_string(),
            r.sector.to_string(),
            r.failed_count.to_string(),
            r.delivered_count.to_string(),
            format!("{:.2}", r.total_loss_usd),
            format!("{:.2}", r.mean_loss_per_text_usd),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    finish(path, w)?;
    Ok(records.len())
}

/// Reads a texting results file back. The header must match exactly.
pub fn read_texting(path: &Path) -> Result<Vec<TrialOutcome>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    let schema = |reason: String| Error::Schema {
        file: path.display().to_string(),
        reason,
    };
    let header = r.headers().map_err(|e| csv_err(path, e))?.clone();
    for (i, expected) in TEXTING_HEADER.iter().enumerate() {
        match header.get(i) {
            Some(h) if h == *expected => {}
            Some(h) => {
                return Err(schema(format!(
                    "column {} is `{h}`, expected `{expected}`",
                    i + 1
                )))
            }
            None => return Err(schema(format!("missing column `{expected}`"))),
        }
    }
    if header.len() != TEXTING_HEADER.len() {
        return Err(schema(format!(
            "unexpected extra column `{}`",
            &header[TEXTING_HEADER.len()]
        )));
    }

    let mut out = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = row + 2;
        let bad = |col: &str| schema(format!("line {line}: invalid `{col}` value"));
        let trial_id = rec[0].parse().map_err(|_| bad("trial_id"))?;
        let attempt_type = AttemptType::parse(&rec[1]).ok_or_else(|| bad("attempt_type"))?;
        let mode = ModeKind::parse(&rec[2]).ok_or_else(|| bad("mode"))?;
        let p_ic: f64 = rec[3].parse().map_err(|_| bad("p_ic"))?;
        if !(0.0..=1.0).contains(&p_ic) {
            return Err(bad("p_ic"));
        }
        let delivered = match &rec[4] {
            "0" => false,
            "1" => true,
            _ => return Err(bad("delivered")),
        };
        out.push(TrialOutcome {
            trial_id,
            attempt_type,
            mode,
            p_ic,
            delivered,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_formatting_matches_printf_g() {
        // Expected strings from Python's '%.6g'.
        let cases = [
            (91.03594322448257, "91.0359"),
            (-100.67491087293763, "-100.675"),
            (5656.85424949238, "5656.85"),
            (15000.0, "15000"),
            (4.0, "4"),
            (0.0, "0"),
            (-0.0, "0"),
            (1234567.0, "1.23457e+06"),
            (0.0001234, "0.0001234"),
            (0.00001234, "1.234e-05"),
            (999999.7, "1e+06"),
            (-64.22878745280337, "-64.2288"),
            (0.5, "0.5"),
        ];
        for (x, s) in cases {
            assert_eq!(format_sig(x, 6), s, "{x}");
        }
        assert_eq!(format_sig(f64::NEG_INFINITY, 6), "-inf");
    }

    #[test]
    fn texting_round_trip_and_schema_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(TEXTING_FILE);
        let outcomes = vec![
            TrialOutcome {
                trial_id: 0,
                attempt_type: AttemptType::Interception,
                mode: ModeKind::Baseline,
                p_ic: 0.35,
                delivered: false,
            },
            TrialOutcome {
                trial_id: 0,
                attempt_type: AttemptType::Blocking,
                mode: ModeKind::Full,
                p_ic: 1.0,
                delivered: true,
            },
        ];
        write_texting(&path, &outcomes).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "trial_id,attempt_type,mode,p_ic,delivered\n\
             0,interception,baseline,0.3500,0\n\
             0,blocking,full,1.0000,1\n"
        );
        assert_eq!(read_texting(&path).unwrap(), outcomes);

        std::fs::write(&path, "trial_id,attempt,mode,p_ic,delivered\n").unwrap();
        let err = read_texting(&path).unwrap_err().to_string();
        assert!(err.contains("`attempt`"), "{err}");

        std::fs::write(
            &path,
            "trial_id,attempt_type,mode,p_ic,delivered\n1,blocking,half,0.1,0\n",
        )
        .unwrap();
        let err = read_texting(&path).unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("mode"), "{err}");
    }
}
