//! CSV output for the analysis tables.

use std::io::Write;

/// Twelve significant digits.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Writes a header row and data rows.
pub fn write_csv<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn interp_rows(curve: &super::InterpCurve) -> Vec<Vec<String>> {
    curve
        .points
        .iter()
        .map(|p| {
            vec![
                sig12(curve.samples_per_wavelength),
                sig12(p.theta),
                sig12(p.error),
                sig12(p.bound),
                p.window.to_string(),
                sig12(curve.theta_near),
            ]
        })
        .collect()
}

pub const INTERP_HEADER: [&str; 6] = ["ppw", "theta", "error", "bound", "window", "theta_near"];

pub fn selfterm_rows(rows: &[super::SelfTermRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                sig12(r.frequency),
                sig12(r.k0),
                sig12(r.edge_over_lambda),
                sig12(r.la),
                sig12(r.lphi),
                sig12(r.efie),
            ]
        })
        .collect()
}

pub const SELFTERM_HEADER: [&str; 6] = ["frequency_hz", "k0", "edge_over_lambda", "delta_la", "delta_lphi", "delta_efie"];
