//! Complete elliptic integral of the first kind, the planar Grötzsch ring
//! capacity, and the constant `lambda_2` of the quasiregular Schwarz bound.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};

const AGM_TOL: f64 = 1e-15;
const AGM_MAX_ITER: usize = 64;

/// `omega_1`, the length of the unit circle.
pub const OMEGA_1: f64 = 2.0 * PI;

/// Successive tail estimates closer than this count as converged.
pub const LAMBDA_REPORT_THRESHOLD: f64 = 1e-9;

/// Arithmetic-geometric mean of two positive numbers.
pub fn agm(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::param(
            "agm",
            format!("arguments must be positive, got ({a}, {b})"),
        ));
    }
    let (mut a, mut b) = (a, b);
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= AGM_TOL * a.max(b) {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(0.5 * (a + b))
}

/// `K(r) = int_0^1 dx / sqrt((1-x^2)(1-r^2 x^2))` for `0 <= r < 1`.
pub fn ell_k(r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::param("r", format!("modulus must lie in [0, 1), got {r}")));
    }
    Ok(ell_k_from_complement(((1.0 - r) * (1.0 + r)).sqrt()))
}

/// `K(sqrt(1 - rc^2))` evaluated from the complementary modulus `rc`, which
/// keeps full precision when the modulus is within rounding of 1.
pub fn ell_k_from_complement(rc: f64) -> f64 {
    FRAC_PI_2 / agm(1.0, rc).expect("positive complementary modulus")
}

/// Grötzsch capacity `gamma_2(t) = 4 K(1/t) / K(sqrt(1 - 1/t^2))`, `t > 1`.
pub fn gamma2(t: f64) -> Result<f64> {
    if !(t > 1.0 && t.is_finite()) {
        return Err(Error::param("t", format!("must exceed 1, got {t}")));
    }
    let r = 1.0 / t;
    let rc = ((1.0 - r) * (1.0 + r)).sqrt();
    // K(r) = pi / (2 agm(1, rc)) and K(rc) = pi / (2 agm(1, r))
    Ok(4.0 * ell_k_from_complement(rc) / ell_k_from_complement(r))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaEstimate {
    pub t_values: Vec<f64>,
    /// `omega_1 / gamma_2(t) - log t`, converging to `log lambda_2`.
    pub estimates: Vec<f64>,
    /// `gamma_2(t) / omega_1 - log t`, the orientation as printed next to
    /// the limit definition; it diverges for `n = 2`.
    pub printed_orientation: Vec<f64>,
    pub extrapolated: f64,
    pub converged: bool,
}

impl LambdaEstimate {
    pub fn lambda(&self) -> f64 {
        self.extrapolated.exp()
    }
}

/// Estimates `log lambda_2 = lim_{t -> inf} (omega_1 / gamma_2(t) - log t)` on
/// the grid `t = 10, 10^1.5, 10^2, ...` up to `t_max`.
pub fn lambda2_estimate(t_max: f64) -> Result<LambdaEstimate> {
    if !(t_max.is_finite() && t_max > 10.0) {
        return Err(Error::param("t_max", format!("must exceed 10, got {t_max}")));
    }
    let mut t_values = Vec::new();
    let mut k = 2;
    loop {
        let t = 10f64.powf(k as f64 / 2.0);
        if t >= t_max {
            break;
        }
        t_values.push(t);
        k += 1;
    }
    t_values.push(t_max);

    let mut estimates = Vec::with_capacity(t_values.len());
    let mut printed = Vec::with_capacity(t_values.len());
    for &t in &t_values {
        let g = gamma2(t)?;
        estimates.push(OMEGA_1 / g - t.ln());
        printed.push(g / OMEGA_1 - t.ln());
    }
    let extrapolated = *estimates.last().expect("nonempty grid");
    let tail_diff = match estimates.len() {
        0 | 1 => f64::INFINITY,
        n => (estimates[n - 1] - estimates[n - 2]).abs(),
    };
    Ok(LambdaEstimate {
        converged: t_max >= 100.0 && tail_diff < LAMBDA_REPORT_THRESHOLD,
        t_values,
        estimates,
        printed_orientation: printed,
        extrapolated,
    })
}
