//! Quasi-metric constants of `p^alpha`.

use rayon::prelude::*;
use serde::Serialize;

use super::check::CAMPAIGN_CHUNK;
use crate::error::{Error, Result};
use crate::geometry::{DomainShape, PairSampler, Point};
use crate::metrics::gpp;
use crate::search::{refine_extremum, sample_configuration, RefineOptions, SearchResult, Sense};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiConstants {
    pub alpha: f64,
    /// `sqrt((a+4)/a)` for `a <= 4`, `2 sqrt(a+4) / a` otherwise.
    pub stated: f64,
    /// `sqrt((a+4)/a) max{1, sqrt(a)/2}`, what the chain of comparisons
    /// through `j*` yields.
    pub proof_chain: f64,
    pub discrepancy: bool,
}

pub fn quasimetric_constant_paper(alpha: f64) -> Result<QuasiConstants> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::param("alpha", format!("must be positive, got {alpha}")));
    }
    let base = ((alpha + 4.0) / alpha).sqrt();
    let stated = if alpha <= 4.0 {
        base
    } else {
        2.0 * (alpha + 4.0).sqrt() / alpha
    };
    let proof_chain = base * (alpha.sqrt() / 2.0).max(1.0);
    Ok(QuasiConstants {
        alpha,
        stated,
        proof_chain,
        discrepancy: (stated - proof_chain).abs() > 1e-12 * proof_chain,
    })
}

/// `p(x, y) / (p(x, z) + p(z, y))`; `1` when all three points coincide.
pub fn triangle_ratio(d: &DomainShape, alpha: f64, x: &Point, y: &Point, z: &Point) -> Result<f64> {
    let num = gpp(d, alpha, x, y)?;
    let den = gpp(d, alpha, x, z)? + gpp(d, alpha, z, y)?;
    Ok(if den == 0.0 { 1.0 } else { num / den })
}

fn ratio_of(d: &DomainShape, alpha: f64, p: &[Point]) -> Result<f64> {
    triangle_ratio(d, alpha, &p[0], &p[1], &p[2])
}

/// Seeds kept from the sampling stage for refinement.
const QUASI_SEEDS: usize = 8;

/// Empirical supremum of the triangle ratio over `sampler.count` triples,
/// then refined from the best ones when `refine` is given. Never below `1`,
/// the value of the degenerate triple `z = x`.
pub fn estimate_quasimetric_constant(
    d: &DomainShape,
    alpha: f64,
    sampler: &PairSampler,
    refine: Option<&RefineOptions>,
) -> Result<SearchResult> {
    if &sampler.domain != d {
        return Err(Error::param(
            "sampler",
            format!("samples {} but the estimate is on {d}", sampler.domain),
        ));
    }
    let chunk_best: Vec<Option<(f64, Vec<Point>)>> = sampler
        .split(CAMPAIGN_CHUNK)
        .par_iter()
        .map(|chunk| {
            let mut src = chunk.source();
            let mut best: Option<(f64, Vec<Point>)> = None;
            for _ in 0..chunk.count {
                let t = sample_configuration(&mut src, 3);
                if let Ok(v) = ratio_of(d, alpha, &t) {
                    if v.is_finite() && best.as_ref().is_none_or(|b| v > b.0) {
                        best = Some((v, t));
                    }
                }
            }
            best
        })
        .collect();
    let mut tops: Vec<(f64, Vec<Point>)> = chunk_best.into_iter().flatten().collect();
    tops.sort_by(|a, b| b.0.total_cmp(&a.0));

    let anchor = super::extremal::anchor_point(d);
    let other = super::extremal::far_pair(d, 0.1)?.1;
    let degenerate = vec![anchor.clone(), other, anchor];
    let mut best = SearchResult {
        best_value: ratio_of(d, alpha, &degenerate)?,
        witness: degenerate,
        params: Vec::new(),
        evaluations: sampler.count,
        converged: false,
        rejected_starts: 0,
    };
    if let Some((v, t)) = tops.first() {
        if *v > best.best_value {
            best.best_value = *v;
            best.witness = t.clone();
        }
    }
    if let Some(opts) = refine {
        let seeds: Vec<Vec<Point>> = tops.iter().take(QUASI_SEEDS).map(|(_, t)| t.clone()).collect();
        let r = refine_extremum(|p: &[Point]| ratio_of(d, alpha, p), d, 3, Sense::Maximize, opts, &seeds)?;
        if r.best_value > best.best_value {
            best = SearchResult {
                evaluations: r.evaluations + sampler.count,
                ..r
            };
        }
    }
    Ok(best)
}
