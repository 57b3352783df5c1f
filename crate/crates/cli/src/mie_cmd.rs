//! `aimx mie`: Mie series RCS tables.

use std::fs;
use std::path::PathBuf;

use aimx_core::analysis::table::{sig12, write_csv};
use aimx_core::analysis::{to_dbsm, MieSolution};
use aimx_core::kernels::Wavenumber;
use clap::Args;

use crate::Failure;

#[derive(Args)]
pub struct MieArgs {
    /// Sphere radius in meters.
    #[arg(long)]
    radius: f64,
    /// Explicit frequencies in Hz.
    #[arg(long, num_args = 1.., conflicts_with_all = ["start", "stop", "count"])]
    frequency: Vec<f64>,
    #[arg(long, requires_all = ["stop", "count"])]
    start: Option<f64>,
    #[arg(long)]
    stop: Option<f64>,
    #[arg(long)]
    count: Option<usize>,
    /// Bistatic samples per plane from 0 to 180 degrees; 0 skips the cut.
    #[arg(long, default_value_t = 0)]
    angles: usize,
    #[arg(long, default_value = "aimx-mie")]
    out: PathBuf,
}

pub const MIE_HEADER: [&str; 8] = ["frequency_hz", "k0", "ka", "order", "rcs_m2", "rcs_dbsm", "q_ext", "q_sca"];

pub const MIE_BISTATIC_HEADER: [&str; 6] =
    ["frequency_hz", "theta_deg", "e_plane_m2", "e_plane_dbsm", "h_plane_m2", "h_plane_dbsm"];

fn frequencies(a: &MieArgs) -> Result<Vec<f64>, Failure> {
    let f = if !a.frequency.is_empty() {
        a.frequency.clone()
    } else {
        match (a.start, a.stop, a.count) {
            (Some(s), Some(e), Some(1)) if s == e => vec![s],
            (Some(s), Some(e), Some(n)) if n >= 2 && e > s => {
                (0..n).map(|i| s + (e - s) * i as f64 / (n - 1) as f64).collect()
            }
            (Some(_), Some(_), Some(_)) => return Err(Failure::Config("need start < stop and count >= 2".into())),
            _ => return Err(Failure::Config("give --frequency or --start/--stop/--count".into())),
        }
    };
    if f.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Failure::Config("frequencies must be positive".into()));
    }
    Ok(f)
}

pub fn run(a: MieArgs) -> Result<(), Failure> {
    let freqs = frequencies(&a)?;
    let mut rows = Vec::new();
    let mut bistatic = Vec::new();
    for &f in &freqs {
        let k0 = Wavenumber::<f64>::from_frequency(f).k0;
        let m = MieSolution::new(a.radius, k0).map_err(|e| Failure::Config(e.to_string()))?;
        let s = m.monostatic();
        rows.push(vec![
            sig12(f),
            sig12(k0),
            sig12(m.size_parameter()),
            m.order.to_string(),
            sig12(s),
            sig12(to_dbsm(s)),
            sig12(m.q_ext()),
            sig12(m.q_sca()),
        ]);
        if a.angles >= 2 {
            for i in 0..a.angles {
                let deg = 180.0 * i as f64 / (a.angles - 1) as f64;
                let t = deg.to_radians();
                let (e, h) = (m.bistatic_e_plane(t), m.bistatic_h_plane(t));
                bistatic.push(vec![sig12(f), sig12(deg), sig12(e), sig12(to_dbsm(e)), sig12(h), sig12(to_dbsm(h))]);
            }
        }
    }
    fs::create_dir_all(&a.out).map_err(|e| Failure::io(&a.out, e))?;
    let write = |name: &str, header: &[&str], rows: &[Vec<String>]| {
        let p = a.out.join(name);
        let f = fs::File::create(&p).map_err(|e| Failure::io(&p, e))?;
        write_csv(f, header, rows).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))
    };
    write("mie.csv", &MIE_HEADER, &rows)?;
    if a.angles >= 2 {
        write("mie_bistatic.csv", &MIE_BISTATIC_HEADER, &bistatic)?;
    }
    Ok(())
}
