//! Accuracy of AIMx self terms against direct integration.

use std::sync::Arc;

use crate::aimgrid::GridConfig;
use crate::counters::WorkCounters;
use crate::kernels::Wavenumber;
use crate::mesh::Discretization;
use crate::num::{Real, C};
use crate::operators::{efie_weights, Mode, OperatorConfig, OperatorError, OperatorSet};
use crate::quadrature::{OpWeights, OperatorTag, Ops, QuadratureConfig};

/// `max_m |L_aimx[m,m] - L_direct[m,m]| / |L_direct[m,m]|` at one frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelfTermRow {
    pub k0: f64,
    pub frequency: f64,
    /// Mean mesh edge in wavelengths.
    pub edge_over_lambda: f64,
    pub la: f64,
    pub lphi: f64,
    pub efie: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelfTermConfig {
    pub grid: GridConfig,
    pub quadrature: QuadratureConfig,
    pub linear_term: bool,
    /// Wavenumber that sizes the grid; defaults to the largest studied.
    pub k_max: Option<f64>,
}

impl SelfTermConfig {
    pub fn new(linear_term: bool) -> Self {
        Self {
            grid: GridConfig::default(),
            quadrature: QuadratureConfig::default(),
            linear_term,
            k_max: None,
        }
    }
}

fn max_rel<T: Real>(a: &[C<T>], b: &[C<T>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| ((*x - *y).norm() / y.norm()).to_f64().unwrap_or(f64::NAN))
        .fold(0.0, f64::max)
}

/// Self-term errors of `L_A`, `L_phi` and the EFIE combination on one AIMx
/// grid shared by all wavenumbers.
pub fn self_term_error_study<T: Real>(
    disc: Arc<Discretization<T>>,
    ks: &[Wavenumber<T>],
    cfg: SelfTermConfig,
) -> Result<Vec<SelfTermRow>, OperatorError> {
    let Some(k_top) = ks.iter().map(|k| k.k0).reduce(T::max) else {
        return Ok(Vec::new());
    };
    let k_max = cfg.k_max.and_then(T::from_f64).unwrap_or(k_top);
    let config = OperatorConfig {
        grid: cfg.grid,
        quadrature: cfg.quadrature,
        linear_term: cfg.linear_term,
        ..OperatorConfig::new(Mode::Aimx, Ops::EFIE)
    };
    let set = OperatorSet::assemble(disc.clone(), config, k_max, Arc::new(WorkCounters::default()), None)?;
    let edge = disc.mesh.mean_edge_length().to_f64().unwrap_or(f64::NAN);
    ks.iter()
        .map(|&k| {
            let mut errs = [0.0; 3];
            let weights = [OpWeights::only(OperatorTag::LA), OpWeights::only(OperatorTag::LPhi), efie_weights(k)];
            for (e, w) in errs.iter_mut().zip(weights) {
                let aimx = set.bind(k, w)?.diagonal();
                let direct = set.fullwave_diagonal(k, w)?;
                *e = max_rel(&aimx, &direct);
            }
            let k0 = k.k0.to_f64().unwrap_or(f64::NAN);
            Ok(SelfTermRow {
                k0,
                frequency: k.frequency().to_f64().unwrap_or(f64::NAN),
                edge_over_lambda: edge * k0 / (2.0 * std::f64::consts::PI),
                la: errs[0],
                lphi: errs[1],
                efie: errs[2],
            })
        })
        .collect()
}
