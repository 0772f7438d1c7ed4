//! Radial stretches of the disk and the quasiregular Schwarz-type bounds.

use num_complex::Complex64;
use serde::Serialize;

use super::mobius::{from_complex, th_half_rho_disk, to_complex};
use crate::bounds::{run_campaign, Constants, ViolationReport};
use crate::error::{Error, Result};
use crate::geometry::{DomainShape, PairSampler};
use crate::metrics::gpp;

/// Test mappings with known dilatation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum QRMap {
    /// `z -> z |z|^(K-1)`; `K_I = K_O = K`.
    RadialStretch { k: f64 },
}

impl QRMap {
    pub fn radial_stretch(k: f64) -> Result<Self> {
        if !(k.is_finite() && k >= 1.0) {
            return Err(Error::param("K", format!("must be at least 1, got {k}")));
        }
        Ok(QRMap::RadialStretch { k })
    }

    pub fn inner_dilatation(&self) -> f64 {
        match *self {
            QRMap::RadialStretch { k } => k,
        }
    }

    /// `c = K_I^(1/(1-n))`, i.e. `1/K_I` in the plane.
    pub fn exponent(&self) -> f64 {
        1.0 / self.inner_dilatation()
    }
}

pub fn qr_apply(m: &QRMap, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::param("z", format!("must lie in the open unit disk, got {z}")));
    }
    match *m {
        QRMap::RadialStretch { k } => {
            let r = z.norm();
            Ok(if r == 0.0 { z } else { z * r.powf(k - 1.0) })
        }
    }
}

/// `max{1, 2/sqrt(a), sqrt(a)^c, 2 sqrt(a)^(c-1)}`.
pub fn cor57_factor(alpha: f64, c: f64) -> f64 {
    let s = alpha.sqrt();
    1f64.max(2.0 / s).max(s.powf(c)).max(2.0 * s.powf(c - 1.0))
}

/// `lambda^(1-c) max{1, 2/sqrt(a), sqrt(a)^c, 2 sqrt(a)^(c-1)} p^c`.
pub fn qr_distortion_rhs(alpha: f64, c: f64, lambda: f64, p_val: f64) -> f64 {
    lambda.powf(1.0 - c) * cor57_factor(alpha, c) * p_val.powf(c)
}

/// `lambda^(1-c) th^c`.
pub fn thm56_rhs(c: f64, lambda: f64, th: f64) -> f64 {
    lambda.powf(1.0 - c) * th.powf(c)
}

fn disk(sampler: &PairSampler) -> Result<DomainShape> {
    let d = DomainShape::UnitBall { dim: 2 };
    if sampler.domain != d {
        return Err(Error::param(
            "sampler",
            format!("needs the unit disk, got {}", sampler.domain),
        ));
    }
    Ok(d)
}

/// `th(rho(f x, f y)/2) <= lambda^(1-c) th(rho(x, y)/2)^c` over the sample.
pub fn thm56_check(m: &QRMap, sampler: &PairSampler, lambda: f64, tol: f64) -> Result<ViolationReport> {
    disk(sampler)?;
    let c = m.exponent();
    Ok(run_campaign(
        "thm5.6",
        4.0,
        sampler,
        tol,
        Constants::plain(0.0, lambda.powf(1.0 - c)),
        |x, y| {
            let (x, y) = (to_complex(x)?, to_complex(y)?);
            let lhs = th_half_rho_disk(qr_apply(m, x)?, qr_apply(m, y)?);
            Ok((lhs, th_half_rho_disk(x, y).powf(c)))
        },
    ))
}

/// `p^alpha(f x, f y) <= lambda^(1-c) factor(alpha, c) p^alpha(x, y)^c` over
/// the sample.
pub fn cor57_check(m: &QRMap, alpha: f64, sampler: &PairSampler, lambda: f64, tol: f64) -> Result<ViolationReport> {
    let d = disk(sampler)?;
    let c = m.exponent();
    let upper = lambda.powf(1.0 - c) * cor57_factor(alpha, c);
    Ok(run_campaign(
        "cor5.7",
        alpha,
        sampler,
        tol,
        Constants::plain(0.0, upper),
        |x, y| {
            let fx = from_complex(qr_apply(m, to_complex(x)?)?);
            let fy = from_complex(qr_apply(m, to_complex(y)?)?);
            Ok((gpp(&d, alpha, &fx, &fy)?, gpp(&d, alpha, x, y)?.powf(c)))
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_stretch_examples() {
        let id = QRMap::radial_stretch(1.0).unwrap();
        let z = Complex64::new(0.3, -0.2);
        assert_eq!(qr_apply(&id, z).unwrap(), z);
        let two = QRMap::radial_stretch(2.0).unwrap();
        assert!((qr_apply(&two, Complex64::new(0.5, 0.0)).unwrap().norm() - 0.25).abs() < 1e-15);
        let four = QRMap::radial_stretch(4.0).unwrap();
        assert!((qr_apply(&four, Complex64::new(0.9, 0.0)).unwrap().norm() - 0.6561).abs() < 1e-15);
        assert_eq!(
            qr_apply(&four, Complex64::new(0.0, 0.0)).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(four.exponent(), 0.25);
        assert!(QRMap::radial_stretch(0.5).is_err());
        assert!(qr_apply(&two, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn rhs_examples() {
        assert!((qr_distortion_rhs(4.0, 1.0, 4.0, 0.3) - 0.6).abs() < 1e-15);
        assert!((qr_distortion_rhs(4.0, 0.5, 4.0, 0.25) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(qr_distortion_rhs(4.0, 0.5, 4.0, 0.0), 0.0);
        for a in [0.25f64, 1.0, 4.0, 9.0, 16.0] {
            let s = a.sqrt();
            assert_eq!(cor57_factor(a, 1.0), (2.0 / s).max(2.0).max(s));
        }
    }

    #[test]
    fn identity_meets_schwarz_bound() {
        let s = PairSampler::new(DomainShape::UnitBall { dim: 2 }, 4, 2000);
        let id = QRMap::radial_stretch(1.0).unwrap();
        let r = thm56_check(&id, &s, 4.0, 1e-9).unwrap();
        assert!(r.pass);
        assert!((r.max_quotient_value() - 1.0).abs() < 1e-12);
    }
}
