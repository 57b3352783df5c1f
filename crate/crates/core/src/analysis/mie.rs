//! Mie series for a perfectly conducting sphere.
//!
//! Riccati-Bessel functions `ψ_n = x j_n(x)` and `χ_n = -x y_n(x)`;
//! `j_n` by downward recurrence, `y_n` by upward recurrence. With
//! `ξ_n = ψ_n - jχ_n` the coefficients are `a_n = ψ_n'/ξ_n'` and
//! `b_n = ψ_n/ξ_n`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::AnalysisError;

/// Largest size parameter accepted.
pub const MAX_SIZE_PARAMETER: f64 = 2.0e4;

#[derive(Clone, Debug)]
pub struct MieSolution {
    pub radius: f64,
    pub k0: f64,
    /// Highest retained order.
    pub order: usize,
    /// `a[n-1]`, `b[n-1]` for `n = 1..=order`.
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

/// Relative size of the last retained term.
pub const TAIL: f64 = 1e-12;

/// Nominal order `x + 4 x^{1/3} + 10`; extended when needed so the last
/// term falls below [`TAIL`].
pub fn truncation_order(x: f64) -> usize {
    (x + 4.0 * x.cbrt() + 10.0).ceil() as usize
}

/// `j_0..=j_nmax` at `x > 0` by Miller's downward recurrence.
fn spherical_j(nmax: usize, x: f64) -> Vec<f64> {
    let start = nmax + 20 + (x.max(1.0).sqrt() * 10.0) as usize + x as usize;
    let mut j = vec![0.0; start + 2];
    j[start + 1] = 0.0;
    j[start] = 1e-300;
    for n in (1..=start).rev() {
        j[n - 1] = (2 * n + 1) as f64 / x * j[n] - j[n + 1];
        if j[n - 1].abs() > 1e250 {
            // Rescale to stay in range.
            for v in j[n - 1..=start + 1].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    // Normalize with whichever of j_0, j_1 is better conditioned.
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    let j1 = s / (x * x) - c / x;
    let scale = if j0.abs() >= j1.abs() { j0 / j[0] } else { j1 / j[1] };
    j.truncate(nmax + 1);
    j.iter().map(|v| v * scale).collect()
}

/// `y_0..=y_nmax` at `x > 0` by upward recurrence.
fn spherical_y(nmax: usize, x: f64) -> Vec<f64> {
    let (s, c) = x.sin_cos();
    let mut y = vec![0.0; nmax + 1];
    y[0] = -c / x;
    if nmax >= 1 {
        y[1] = -c / (x * x) - s / x;
    }
    for n in 1..nmax {
        y[n + 1] = (2 * n + 1) as f64 / x * y[n] - y[n - 1];
    }
    y
}

impl MieSolution {
    pub fn new(radius: f64, k0: f64) -> Result<Self, AnalysisError> {
        if !(radius > 0.0) || !(k0 > 0.0) {
            return Err(AnalysisError::Domain("radius and wavenumber must be positive"));
        }
        let x = k0 * radius;
        if x > MAX_SIZE_PARAMETER || !x.is_finite() {
            return Err(AnalysisError::Truncation(x));
        }
        // Evaluate past the nominal order, then keep terms until the last
        // retained one is negligible.
        let nominal = truncation_order(x);
        let limit = nominal + truncation_order(x) / 4 + 10;
        let j = spherical_j(limit, x);
        let y = spherical_y(limit, x);
        let (mut a, mut b) = (Vec::with_capacity(limit), Vec::with_capacity(limit));
        for n in 1..=limit {
            let nf = n as f64;
            let psi = x * j[n];
            let chi = -x * y[n];
            let dpsi = x * j[n - 1] - nf * j[n];
            let dchi = -(x * y[n - 1] - nf * y[n]);
            if !dchi.is_finite() {
                break;
            }
            let xi = Complex64::new(psi, -chi);
            let dxi = Complex64::new(dpsi, -dchi);
            a.push(dpsi / dxi);
            b.push(psi / xi);
        }
        let total: f64 = (1..=a.len()).map(|n| (2 * n + 1) as f64 * (a[n - 1] + b[n - 1]).re).sum();
        let order = (nominal.min(a.len())..=a.len())
            .find(|&n| n > 0 && (2 * n + 1) as f64 * (a[n - 1].norm() + b[n - 1].norm()) < TAIL * total.abs())
            .ok_or(AnalysisError::Truncation(x))?;
        a.truncate(order);
        b.truncate(order);
        Ok(Self { radius, k0, order, a, b })
    }

    pub fn size_parameter(&self) -> f64 {
        self.k0 * self.radius
    }

    /// Amplitudes `S1(θ)`, `S2(θ)` at scattering angle `θ` from the
    /// forward direction.
    pub fn amplitudes(&self, theta: f64) -> (Complex64, Complex64) {
        let mu = theta.cos();
        let (mut pi_prev, mut pi) = (0.0, 1.0);
        let (mut s1, mut s2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for n in 1..=self.order {
            let nf = n as f64;
            let tau = nf * mu * pi - (nf + 1.0) * pi_prev;
            let f = (2.0 * nf + 1.0) / (nf * (nf + 1.0));
            let (a, b) = (self.a[n - 1], self.b[n - 1]);
            s1 += (a * pi + b * tau) * f;
            s2 += (a * tau + b * pi) * f;
            let next = ((2.0 * nf + 1.0) * mu * pi - (nf + 1.0) * pi_prev) / nf;
            pi_prev = pi;
            pi = next;
        }
        (s1, s2)
    }

    /// Monostatic (backscatter) RCS in m².
    pub fn monostatic(&self) -> f64 {
        let s: Complex64 = (1..=self.order)
            .map(|n| (self.a[n - 1] - self.b[n - 1]) * ((2 * n + 1) as f64 * if n % 2 == 0 { 1.0 } else { -1.0 }))
            .sum();
        PI * s.norm_sqr() / (self.k0 * self.k0)
    }

    /// Bistatic RCS in m² at scattering angle `theta` (0 = forward) in the
    /// plane containing the incident electric field.
    pub fn bistatic_e_plane(&self, theta: f64) -> f64 {
        4.0 * PI * self.amplitudes(theta).1.norm_sqr() / (self.k0 * self.k0)
    }

    /// Bistatic RCS in m² in the plane orthogonal to the incident electric field.
    pub fn bistatic_h_plane(&self, theta: f64) -> f64 {
        4.0 * PI * self.amplitudes(theta).0.norm_sqr() / (self.k0 * self.k0)
    }

    /// Extinction efficiency from the forward amplitude (optical theorem).
    pub fn q_ext(&self) -> f64 {
        let x = self.size_parameter();
        4.0 / (x * x) * self.amplitudes(0.0).0.re
    }

    /// Scattering efficiency from the coefficients.
    pub fn q_sca(&self) -> f64 {
        let x = self.size_parameter();
        let s: f64 = (1..=self.order)
            .map(|n| (2 * n + 1) as f64 * (self.a[n - 1].norm_sqr() + self.b[n - 1].norm_sqr()))
            .sum();
        2.0 / (x * x) * s
    }
}

/// Monostatic RCS (m²) of a PEC sphere.
pub fn mie_monostatic(radius: f64, k0: f64) -> Result<f64, AnalysisError> {
    Ok(MieSolution::new(radius, k0)?.monostatic())
}

pub fn to_dbsm(sigma: f64) -> f64 {
    10.0 * sigma.log10()
}
