//! Disk automorphisms `T_a(z) = (z - a) / (1 - conj(a) z)` and the distortion
//! of `p^alpha` under them.

use num_complex::Complex64;
use serde::Serialize;

use super::refine::{refine_extremum, RefineOptions, SearchResult, Sense};
use crate::bounds::{run_campaign, Constants, ViolationReport};
use crate::error::{Error, Result};
use crate::geometry::{DomainShape, PairSampler, Point};

pub fn to_complex(p: &Point) -> Result<Complex64> {
    p.check_dim(2)?;
    Ok(Complex64::new(p[0], p[1]))
}

pub fn from_complex(z: Complex64) -> Point {
    Point::xy(z.re, z.im)
}

fn check_disk(name: &'static str, z: Complex64) -> Result<()> {
    if !(z.norm() < 1.0) {
        return Err(Error::param(name, format!("must lie in the open unit disk, got {z}")));
    }
    Ok(())
}

pub fn mobius_t(a: Complex64, z: Complex64) -> Result<Complex64> {
    check_disk("a", a)?;
    check_disk("z", z)?;
    Ok((z - a) / (1.0 - a.conj() * z))
}

/// `T_a` on a planar point.
pub fn mobius_point(a: Complex64, p: &Point) -> Result<Point> {
    Ok(from_complex(mobius_t(a, to_complex(p)?)?))
}

/// `1 - |z|^2` without cancellation near the circle.
fn one_minus_norm_sqr(z: Complex64) -> f64 {
    (-z.im).mul_add(z.im, (-z.re).mul_add(z.re, 1.0))
}

/// `th(rho/2)` in the disk, `|x - y| / |1 - x conj(y)|`, evaluated as
/// `|x - y| / sqrt(|x - y|^2 + (1 - |x|^2)(1 - |y|^2))`.
pub fn th_half_rho_disk(x: Complex64, y: Complex64) -> f64 {
    let r = (x - y).norm();
    if r == 0.0 {
        return 0.0;
    }
    r / r.hypot((one_minus_norm_sqr(x) * one_minus_norm_sqr(y)).sqrt())
}

fn disk_sampler(sampler: &PairSampler) -> Result<()> {
    if sampler.domain != (DomainShape::UnitBall { dim: 2 }) {
        return Err(Error::param(
            "sampler",
            format!("needs the unit disk, got {}", sampler.domain),
        ));
    }
    Ok(())
}

/// `p^alpha(T_a x, T_a y)` from the closed forms
/// `T_a x - T_a y = (x - y)(1 - |a|^2) / ((1 - conj(a) x)(1 - conj(a) y))` and
/// `1 - |T_a x|^2 = (1 - |a|^2)(1 - |x|^2) / |1 - conj(a) x|^2`, so nearby
/// points keep their relative accuracy instead of cancelling after the map.
pub fn gpp_image(alpha: f64, a: Complex64, x: &Point, y: &Point) -> Result<f64> {
    check_disk("a", a)?;
    let (zx, zy) = (to_complex(x)?, to_complex(y)?);
    check_disk("x", zx)?;
    check_disk("y", zy)?;
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::param("alpha", format!("must be positive, got {alpha}")));
    }
    let r = x.dist(y);
    if r == 0.0 {
        return Ok(0.0);
    }
    let ca = one_minus_norm_sqr(a);
    let (ux, uy) = ((1.0 - a.conj() * zx).norm(), (1.0 - a.conj() * zy).norm());
    // 1 - |w| = (1 - |w|^2) / (1 + |w|)
    let image_d = |z: Complex64, u: f64| ca * one_minus_norm_sqr(z) / (u * u) / (1.0 + (z - a).norm() / u);
    let r = r * ca / (ux * uy);
    let (dx, dy) = (image_d(zx, ux), image_d(zy, uy));
    Ok(r / (r * r + alpha * (dx * dy)).sqrt())
}

/// `p^alpha(T_a x, T_a y) / p^alpha(x, y)`, both sides through [`gpp_image`]
/// (`T_0` is the identity) so their rounding matches.
pub fn distortion_ratio(alpha: f64, a: Complex64, x: &Point, y: &Point) -> Result<f64> {
    Ok(gpp_image(alpha, a, x, y)? / gpp_image(alpha, Complex64::new(0.0, 0.0), x, y)?)
}

fn image_and_source(alpha: f64, a: Complex64, x: &Point, y: &Point) -> Result<(f64, f64)> {
    Ok((
        gpp_image(alpha, a, x, y)?,
        gpp_image(alpha, Complex64::new(0.0, 0.0), x, y)?,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub alpha: f64,
    pub a: [f64; 2],
    /// `1 + |a|`.
    pub bound: f64,
    /// Sampled margins against `[1/(1+|a|), 1+|a|]`.
    pub campaign: ViolationReport,
    /// Best supremum after refinement (or the sampled one).
    pub sup: SearchResult,
    pub exceeds: bool,
    /// Whether the sampled infimum drops below `1/(1+|a|)`.
    pub below_reciprocal: bool,
}

/// Tolerance on `1 + |a|` before a scan reports an excess.
pub const CONJECTURE_TOL: f64 = 1e-6;

/// Samples the distortion ratio of `T_a` on the disk and optionally refines
/// its supremum.
pub fn conjecture_scan(
    alpha: f64,
    a: Complex64,
    sampler: &PairSampler,
    refine: Option<&RefineOptions>,
) -> Result<ConjectureReport> {
    check_disk("a", a)?;
    disk_sampler(sampler)?;
    let bound = 1.0 + a.norm();
    let campaign = run_campaign(
        "conjecture",
        alpha,
        sampler,
        CONJECTURE_TOL,
        Constants::plain(1.0 / bound, bound),
        |x, y| image_and_source(alpha, a, x, y),
    );
    let sampled = campaign
        .max_quotient
        .as_ref()
        .ok_or_else(|| Error::Internal("empty conjecture sample".into()))?;
    let mut sup = SearchResult {
        best_value: sampled.value,
        witness: vec![sampled.x.clone(), sampled.y.clone()],
        params: Vec::new(),
        evaluations: campaign.samples,
        converged: false,
        rejected_starts: 0,
    };
    if let Some(opts) = refine {
        let seeds = vec![sup.witness.clone(), vec![Point::xy(0.0, 0.0), Point::xy(1e-3, 1e-3)]];
        let r = refine_extremum(
            |p: &[Point]| distortion_ratio(alpha, a, &p[0], &p[1]),
            &sampler.domain,
            2,
            Sense::Maximize,
            opts,
            &seeds,
        )?;
        if r.best_value >= sup.best_value {
            sup = SearchResult {
                evaluations: r.evaluations + campaign.samples,
                ..r
            };
        }
    }
    Ok(ConjectureReport {
        alpha,
        a: [a.re, a.im],
        bound,
        exceeds: sup.best_value > bound + CONJECTURE_TOL,
        below_reciprocal: campaign.min_quotient_value() < 1.0 / bound - CONJECTURE_TOL,
        sup,
        campaign,
    })
}

/// Lower and upper factors of `p^alpha` under a conformal self-map:
/// `min{sqrt(a)/2, 1/2, 1/sqrt(a)}` and `max{2/sqrt(a), 2, sqrt(a)}`.
pub fn conformal_constants(alpha: f64) -> (f64, f64) {
    let s = alpha.sqrt();
    ((s / 2.0).min(0.5).min(1.0 / s), (2.0 / s).max(2.0).max(s))
}

/// Checks both conformal distortion factors with `f = T_a` on the disk.
pub fn conformal_distortion_check(
    alpha: f64,
    a: Complex64,
    sampler: &PairSampler,
    tol: f64,
) -> Result<ViolationReport> {
    check_disk("a", a)?;
    disk_sampler(sampler)?;
    let (lo, hi) = conformal_constants(alpha);
    Ok(run_campaign(
        "cor5.3",
        alpha,
        sampler,
        tol,
        Constants::plain(lo, hi),
        |x, y| image_and_source(alpha, a, x, y),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PointSource;
    use crate::metrics::gpp;

    #[test]
    fn mobius_examples() {
        let z = Complex64::new(0.3, 0.4);
        assert_eq!(mobius_t(Complex64::new(0.0, 0.0), z).unwrap(), z);
        assert_eq!(
            mobius_t(Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0))
                .unwrap()
                .norm(),
            0.0
        );
        assert_eq!(
            mobius_t(Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)).unwrap(),
            Complex64::new(-0.5, 0.0)
        );
        assert!(mobius_t(Complex64::new(1.0, 0.0), z).is_err());
        assert!(mobius_t(Complex64::new(0.1, 0.0), Complex64::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn preserves_hyperbolic_distance() {
        let mut src = PointSource::new(DomainShape::UnitBall { dim: 2 }, 9, 6);
        let a = Complex64::new(0.6, -0.3);
        for _ in 0..10_000 {
            let (x, y) = src.pair();
            let (x, y) = (to_complex(&x).unwrap(), to_complex(&y).unwrap());
            let (tx, ty) = (mobius_t(a, x).unwrap(), mobius_t(a, y).unwrap());
            let e = (th_half_rho_disk(tx, ty) - th_half_rho_disk(x, y)).abs();
            // rounding T_a(x) moves 1 - |T_a(x)| by about eps, which the
            // quotient amplifies by 1/d near the circle
            let d = [x, y, tx, ty].iter().map(|z| 1.0 - z.norm()).fold(1.0, f64::min);
            assert!(e < 1e-12f64.max(16.0 * f64::EPSILON / d), "{x} {y}: {e:e}");
        }
    }

    #[test]
    fn image_matches_direct_evaluation() {
        let disk = DomainShape::UnitBall { dim: 2 };
        let mut src = PointSource::new(disk.clone(), 3, 4);
        let a = Complex64::new(-0.4, 0.7);
        for _ in 0..5000 {
            let (x, y) = src.pair();
            let direct = gpp(&disk, 2.5, &mobius_point(a, &x).unwrap(), &mobius_point(a, &y).unwrap()).unwrap();
            let stable = gpp_image(2.5, a, &x, &y).unwrap();
            assert!((direct - stable).abs() < 1e-9, "{x} {y}: {direct} {stable}");
        }
    }

    #[test]
    fn near_origin_ratio_stays_below_bound() {
        let a = Complex64::new(0.6, 0.0);
        let (x, y) = (
            Point::xy(-4.789432081838124e-9, -1.28e-9),
            Point::xy(-5.636385229863505e-9, -1.46e-9),
        );
        let v = distortion_ratio(9.0, a, &x, &y).unwrap();
        assert!((v - 1.599_999_994_712_314_5).abs() < 1e-13, "{v}");
    }

    #[test]
    fn identity_scan() {
        let s = PairSampler::new(DomainShape::UnitBall { dim: 2 }, 1, 2000);
        let r = conjecture_scan(4.0, Complex64::new(0.0, 0.0), &s, None).unwrap();
        assert!((r.sup.best_value - 1.0).abs() < 1e-12);
        assert!(!r.exceeds);
        let c = conformal_distortion_check(4.0, Complex64::new(0.0, 0.0), &s, 1e-9).unwrap();
        assert!(c.pass);
        assert!((c.max_quotient_value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scan_needs_disk() {
        let s = PairSampler::new(DomainShape::half_space(2).unwrap(), 1, 10);
        assert!(conjecture_scan(1.0, Complex64::new(0.1, 0.0), &s, None).is_err());
    }

    #[test]
    fn conformal_factors_at_four() {
        assert_eq!(conformal_constants(4.0), (0.5, 2.0));
    }
}
