//! CSV import/export for measurement records and density matrices.

use std::io::{BufRead, Read, Write};

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::density::DensityMatrix2Q;
use super::measurement::{MeasurementRecord, MeasurementSetting, Waveplates};
use crate::error::{Error, Result};

const BASIS: [&str; 4] = ["HH", "HV", "VH", "VV"];

#[derive(Debug, Serialize, Deserialize)]
struct RecordRow {
    hwp_a_deg: f64,
    qwp_a_deg: f64,
    hwp_b_deg: f64,
    qwp_b_deg: f64,
    counts: u64,
    integration_s: f64,
}

pub fn write_records_csv<W: Write>(records: &[MeasurementRecord], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(RecordRow {
            hwp_a_deg: r.setting.a.hwp_deg,
            qwp_a_deg: r.setting.a.qwp_deg,
            hwp_b_deg: r.setting.b.hwp_deg,
            qwp_b_deg: r.setting.b.qwp_deg,
            counts: r.counts,
            integration_s: r.integration_seconds,
        })
        .map_err(csv_error)?;
    }
    out.flush().map_err(|e| Error::Parse {
        what: "measurement CSV",
        detail: e.to_string(),
    })
}

pub fn read_records_csv<R: Read>(r: R) -> Result<Vec<MeasurementRecord>> {
    csv::Reader::from_reader(r)
        .deserialize::<RecordRow>()
        .map(|row| {
            let row = row.map_err(csv_error)?;
            if !(row.integration_s > 0.0) {
                return Err(Error::Parse {
                    what: "measurement CSV",
                    detail: format!("integration time {} is not positive", row.integration_s),
                });
            }
            Ok(MeasurementRecord {
                setting: MeasurementSetting::new(
                    Waveplates::new(row.hwp_a_deg, row.qwp_a_deg),
                    Waveplates::new(row.hwp_b_deg, row.qwp_b_deg),
                ),
                counts: row.counts,
                integration_seconds: row.integration_s,
            })
        })
        .collect()
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse {
        what: "measurement CSV",
        detail: e.to_string(),
    }
}

/// Real block then imaginary block, one row per basis state:
///
/// ```text
/// part,row,HH,HV,VH,VV
/// re,HH,0.0,...
/// ...
/// im,VV,...
/// ```
pub fn write_density_csv<W: Write>(rho: &DensityMatrix2Q, mut w: W) -> std::io::Result<()> {
    writeln!(w, "part,row,{}", BASIS.join(","))?;
    let m = rho.elements();
    for (part, get) in [("re", (|z: Complex64| z.re) as fn(Complex64) -> f64), ("im", |z: Complex64| z.im)] {
        for (i, label) in BASIS.iter().enumerate() {
            let vals: Vec<String> = (0..4).map(|j| format!("{:e}", get(m[(i, j)]))).collect();
            writeln!(w, "{part},{label},{}", vals.join(","))?;
        }
    }
    Ok(())
}

pub fn read_density_csv<R: BufRead>(r: R) -> Result<DensityMatrix2Q> {
    let bad = |detail: String| Error::Parse {
        what: "density-matrix CSV",
        detail,
    };
    let mut m = Matrix4::<Complex64>::zeros();
    let mut seen = [[false; 4]; 2];
    for (n, line) in r.lines().enumerate() {
        let line = line.map_err(|e| bad(e.to_string()))?;
        if n == 0 || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(bad(format!("line {}: expected 6 fields", n + 1)));
        }
        let part = match fields[0] {
            "re" => 0,
            "im" => 1,
            other => return Err(bad(format!("line {}: unknown part `{other}`", n + 1))),
        };
        let i = BASIS
            .iter()
            .position(|b| *b == fields[1])
            .ok_or_else(|| bad(format!("line {}: unknown row `{}`", n + 1, fields[1])))?;
        for j in 0..4 {
            let v: f64 = fields[2 + j]
                .trim()
                .parse()
                .map_err(|e| bad(format!("line {}: {e}", n + 1)))?;
            if part == 0 {
                m[(i, j)].re = v;
            } else {
                m[(i, j)].im = v;
            }
        }
        seen[part][i] = true;
    }
    if seen.iter().flatten().any(|s| !s) {
        return Err(bad("missing rows".into()));
    }
    DensityMatrix2Q::new(m)
}
