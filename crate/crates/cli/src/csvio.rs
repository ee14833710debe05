//! CSV artifacts. Every float is written in scientific form with 17
//! significant digits, which round-trips f64 bit-exactly, so identical runs
//! produce identical bytes.

use std::fs;
use std::path::Path;

use sphereflock::{DiagnosticsRecord, Trajectory};

use crate::config::ConfigError;
use crate::sweep::SweepRow;

pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

pub const TIMESERIES_HEADER: [&str; 9] = [
    "t",
    "E",
    "E_K",
    "E_C",
    "v_max",
    "dissipation",
    "flock_metric",
    "antipodal_margin",
    "diameter",
];

pub const SNAPSHOTS_HEADER: [&str; 8] = ["t", "agent", "x", "y", "z", "vx", "vy", "vz"];

pub const SWEEP_HEADER: [&str; 9] = [
    "sigma",
    "n",
    "seed",
    "e0",
    "flocking_condition",
    "final_flock_metric",
    "final_antipodal_margin",
    "min_antipodal_margin",
    "status",
];

fn into_bytes(w: csv::Writer<Vec<u8>>) -> Vec<u8> {
    w.into_inner().expect("in-memory csv writer cannot fail")
}

pub fn timeseries_bytes(records: &[DiagnosticsRecord]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TIMESERIES_HEADER).expect("in-memory csv");
    for r in records {
        w.write_record([
            fmt_f(r.t),
            fmt_f(r.e),
            fmt_f(r.e_k),
            fmt_f(r.e_c),
            fmt_f(r.v_max),
            fmt_f(r.dissipation),
            fmt_f(r.flock_metric),
            fmt_f(r.antipodal_margin),
            fmt_f(r.diameter),
        ])
        .expect("in-memory csv");
    }
    into_bytes(w)
}

/// Agent states at every `every`-th recorded sample plus the final one.
pub fn snapshots_bytes(traj: &Trajectory, every: usize) -> Vec<u8> {
    let every = every.max(1);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SNAPSHOTS_HEADER).expect("in-memory csv");
    let last = traj.samples.len().saturating_sub(1);
    for (idx, s) in traj.samples.iter().enumerate() {
        if idx % every != 0 && idx != last {
            continue;
        }
        for (agent, a) in s.ensemble.agents.iter().enumerate() {
            w.write_record([
                fmt_f(s.diag.t),
                agent.to_string(),
                fmt_f(a.x[0]),
                fmt_f(a.x[1]),
                fmt_f(a.x[2]),
                fmt_f(a.v[0]),
                fmt_f(a.v[1]),
                fmt_f(a.v[2]),
            ])
            .expect("in-memory csv");
        }
    }
    into_bytes(w)
}

pub fn sweep_bytes(rows: &[SweepRow]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_HEADER).expect("in-memory csv");
    for r in rows {
        w.write_record([
            fmt_f(r.sigma),
            r.n.to_string(),
            r.seed.to_string(),
            fmt_f(r.e0),
            r.flocking_condition.to_string(),
            fmt_f(r.final_flock_metric),
            fmt_f(r.final_antipodal_margin),
            fmt_f(r.min_antipodal_margin),
            r.status.clone(),
        ])
        .expect("in-memory csv");
    }
    into_bytes(w)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), ConfigError> {
    fs::write(path, bytes).map_err(|source| ConfigError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_timeseries(path: &Path) -> Result<Vec<DiagnosticsRecord>, ConfigError> {
    let make_err = |message: String| ConfigError::Csv {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::Reader::from_path(path).map_err(|e| make_err(e.to_string()))?;
    let headers = reader.headers().map_err(|e| make_err(e.to_string()))?;
    if headers != TIMESERIES_HEADER.as_slice() {
        return Err(make_err(format!("unexpected header {headers:?}")));
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| make_err(e.to_string()))?;
        let field = |i: usize| -> Result<f64, ConfigError> {
            record
                .get(i)
                .ok_or_else(|| make_err(format!("row too short: {record:?}")))?
                .parse()
                .map_err(|e| make_err(format!("bad float in column {i}: {e}")))
        };
        out.push(DiagnosticsRecord {
            t: field(0)?,
            e: field(1)?,
            e_k: field(2)?,
            e_c: field(3)?,
            v_max: field(4)?,
            dissipation: field(5)?,
            flock_metric: field(6)?,
            antipodal_margin: field(7)?,
            diameter: field(8)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(t: f64) -> DiagnosticsRecord {
        DiagnosticsRecord {
            t,
            e: 1.5 + t,
            e_k: 1.0,
            e_c: 0.5 + t,
            v_max: 1.0,
            dissipation: -0.25 * t,
            flock_metric: 0.125,
            antipodal_margin: 1.9,
            diameter: 0.3,
        }
    }

    #[test]
    fn seventeen_digit_floats_round_trip() {
        // A value with no short decimal form must survive print-and-parse.
        let x = 0.1f64 + 0.2f64;
        assert_eq!(fmt_f(x).parse::<f64>().unwrap(), x);
        let y = f64::from_bits(0x3fb999999999999a);
        assert_eq!(fmt_f(y).parse::<f64>().unwrap(), y);
    }

    #[test]
    fn timeseries_round_trips_bit_exactly() {
        let records: Vec<_> = (0..5).map(|k| record(k as f64 * 0.1)).collect();
        let bytes = timeseries_bytes(&records);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("timeseries.csv");
        write_file(&path, &bytes).unwrap();
        let back = read_timeseries(&path).unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn identical_records_produce_identical_bytes() {
        let records: Vec<_> = (0..3).map(|k| record(k as f64)).collect();
        assert_eq!(timeseries_bytes(&records), timeseries_bytes(&records));
    }

    #[test]
    fn header_mismatch_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("timeseries.csv");
        std::fs::write(&path, "a,b\n1,2\n").unwrap();
        assert!(matches!(
            read_timeseries(&path),
            Err(ConfigError::Csv { .. })
        ));
    }
}
