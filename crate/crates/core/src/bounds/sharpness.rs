//! How close the extremal quotients of `p^alpha / rhs` come to a record's
//! constants.

use serde::Serialize;

use super::catalog::BoundRecord;
use super::check::Witness;
use super::extremal::*;
use crate::error::Result;
use crate::geometry::{DomainShape, Point};
use crate::metrics::gpp;
use crate::search::{refine_extremum, RefineOptions, SearchResult, Sense};

/// Closed-form configurations near which the quotients of the catalog reach
/// their extremes on `d`.
pub fn analytic_candidates(d: &DomainShape, alpha: f64) -> Vec<(Point, Point)> {
    let mut out = Vec::new();
    let n = d.dim();
    let special = match d {
        DomainShape::HalfSpace { .. } => extremal_halfspace_pair(alpha, n),
        DomainShape::UnitBall { .. } => extremal_ball_pair(alpha, n),
        DomainShape::Strip { .. } => extremal_strip_pair(alpha, d),
        DomainShape::BallComplementInBox { .. } => extremal_halfball_pair(alpha, d),
        DomainShape::PuncturedSpace { .. } => punctured_upper_witness(d, alpha),
    };
    out.extend(special);
    let anchor = anchor_point(d);
    for k in [1e-6, 1e6] {
        out.extend(limit_pair_from(d, &anchor, k));
    }
    // merging pair right next to the boundary
    if let Ok((edge, _)) = limit_pair_from(d, &anchor, 1e6) {
        out.extend(limit_pair_from(d, &edge, 1e-6));
    }
    out.extend(far_pair(d, 1e-7));
    if alpha < 2.0 {
        out.extend(t_ratio_witness(d, alpha, &anchor));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessReport {
    pub bound_id: String,
    pub domain: DomainShape,
    pub alpha: f64,
    pub target_lower: f64,
    pub target_upper: f64,
    pub stated_lower: f64,
    pub stated_upper: f64,
    pub sharp_lower_claimed: bool,
    pub sharp_upper_claimed: bool,
    pub analytic_max: Option<Witness>,
    pub analytic_min: Option<Witness>,
    pub refined_max: SearchResult,
    pub refined_min: SearchResult,
    pub achieved_max: f64,
    pub achieved_min: f64,
    /// `achieved_max / target_upper`; `1` means attained.
    pub upper_ratio: f64,
    /// `target_lower / achieved_min`.
    pub lower_ratio: f64,
}

/// Within this relative distance a constant counts as reached.
pub const SHARPNESS_RTOL: f64 = 0.02;

impl SharpnessReport {
    pub fn upper_reached(&self) -> bool {
        self.upper_ratio >= 1.0 - SHARPNESS_RTOL
    }

    pub fn lower_reached(&self) -> bool {
        self.lower_ratio >= 1.0 - SHARPNESS_RTOL
    }
}

/// Combines the analytic candidates with randomized refinement of the
/// quotient in both directions.
pub fn assess_sharpness(b: &BoundRecord, d: &DomainShape, alpha: f64, opts: &RefineOptions) -> Result<SharpnessReport> {
    b.check_applicable(d, alpha)?;
    let q = |x: &Point, y: &Point| -> Result<f64> { Ok(gpp(d, alpha, x, y)? / b.rhs.eval(d, x, y)?) };

    let mut amax: Option<Witness> = None;
    let mut amin: Option<Witness> = None;
    let cands = analytic_candidates(d, alpha);
    for (x, y) in &cands {
        let Ok(v) = q(x, y) else { continue };
        if !v.is_finite() {
            continue;
        }
        let w = || Witness {
            value: v,
            x: x.clone(),
            y: y.clone(),
        };
        if amax.as_ref().is_none_or(|m| v > m.value) {
            amax = Some(w());
        }
        if amin.as_ref().is_none_or(|m| v < m.value) {
            amin = Some(w());
        }
    }
    let seeds: Vec<Vec<Point>> = cands.iter().map(|(x, y)| vec![x.clone(), y.clone()]).collect();
    let obj = |p: &[Point]| q(&p[0], &p[1]);
    let refined_max = refine_extremum(obj, d, 2, Sense::Maximize, opts, &seeds)?;
    let refined_min = refine_extremum(obj, d, 2, Sense::Minimize, opts, &seeds)?;

    let achieved_max = amax
        .as_ref()
        .map_or(f64::NEG_INFINITY, |w| w.value)
        .max(refined_max.best_value);
    let achieved_min = amin
        .as_ref()
        .map_or(f64::INFINITY, |w| w.value)
        .min(refined_min.best_value);
    let (target_lower, target_upper) = (b.effective_lower(alpha), b.effective_upper(alpha));
    Ok(SharpnessReport {
        bound_id: b.id.clone(),
        domain: d.clone(),
        alpha,
        target_lower,
        target_upper,
        stated_lower: b.lower_const(alpha),
        stated_upper: b.upper_const(alpha),
        sharp_lower_claimed: b.sharp_lower,
        sharp_upper_claimed: b.sharp_upper,
        analytic_max: amax,
        analytic_min: amin,
        refined_max,
        refined_min,
        achieved_max,
        achieved_min,
        upper_ratio: achieved_max / target_upper,
        lower_ratio: target_lower / achieved_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::find;

    #[test]
    fn thm31_on_halfspace_is_sharp() {
        let b = find("thm3.1").unwrap();
        let h = DomainShape::half_space(2).unwrap();
        let opts = RefineOptions {
            starts: 8,
            pool: 512,
            ..Default::default()
        };
        let r = assess_sharpness(&b, &h, 1.0, &opts).unwrap();
        assert!(r.upper_reached() && r.lower_reached(), "{r:?}");
        assert!(r.upper_ratio <= 1.0 + 1e-12);
    }
}
