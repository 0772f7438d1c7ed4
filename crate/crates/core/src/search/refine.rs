//! Multi-start Nelder-Mead over configurations of interior points.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{derive_seed, DomainShape, Point, PointSource};
use crate::optimize::{nelder_mead, SimplexOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Maximize,
    Minimize,
}

impl Sense {
    fn sign(self) -> f64 {
        match self {
            Sense::Maximize => -1.0,
            Sense::Minimize => 1.0,
        }
    }

    fn better(self, a: f64, b: f64) -> bool {
        match self {
            Sense::Maximize => a > b,
            Sense::Minimize => a < b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineOptions {
    pub starts: usize,
    /// Sampled configurations from which the best `starts` are refined.
    pub pool: usize,
    pub seed: u64,
    pub simplex: SimplexOptions,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            starts: 32,
            pool: 4096,
            seed: 0,
            simplex: SimplexOptions::default(),
        }
    }
}

impl RefineOptions {
    pub fn with_seed(seed: u64) -> Self {
        RefineOptions {
            seed,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub best_value: f64,
    pub witness: Vec<Point>,
    /// Unconstrained parameters of the witness.
    pub params: Vec<f64>,
    pub evaluations: usize,
    pub converged: bool,
    pub rejected_starts: usize,
}

/// Maps configurations to unconstrained parameter vectors and back, so the
/// simplex never leaves the domain.
///
/// Half-space: `(u, log x_n)`. Ball: `th(|w|) w/|w|`. Punctured space:
/// `c + e^s v/|v|` around the puncture nearest the start. Strip:
/// `x_1 = 2r / (1 + e^-u)`. Box: `L th(u_i)`, rejecting points of the removed
/// ball.
#[derive(Debug, Clone)]
pub struct Codec {
    domain: DomainShape,
    /// Puncture index per point (punctured space only).
    centers: Vec<usize>,
}

impl Codec {
    pub fn new(domain: &DomainShape, start: &[Point]) -> Self {
        let centers = match domain {
            DomainShape::PuncturedSpace { punctures, .. } => start
                .iter()
                .map(|p| {
                    (0..punctures.len())
                        .min_by(|&i, &j| p.dist(&punctures[i]).total_cmp(&p.dist(&punctures[j])))
                        .unwrap_or(0)
                })
                .collect(),
            _ => Vec::new(),
        };
        Codec {
            domain: domain.clone(),
            centers,
        }
    }

    fn width(&self) -> usize {
        match self.domain {
            DomainShape::PuncturedSpace { dim, .. } => dim + 1,
            _ => self.domain.dim(),
        }
    }

    pub fn encode(&self, pts: &[Point]) -> Vec<f64> {
        let mut out = Vec::with_capacity(pts.len() * self.width());
        for (i, p) in pts.iter().enumerate() {
            let c = p.coords();
            let n = c.len();
            match &self.domain {
                DomainShape::HalfSpace { .. } => {
                    out.extend_from_slice(&c[..n - 1]);
                    out.push(c[n - 1].ln());
                }
                DomainShape::UnitBall { .. } => {
                    let r = p.norm();
                    let s = if r > 0.0 { r.atanh() / r } else { 1.0 };
                    out.extend(c.iter().map(|v| v * s));
                }
                DomainShape::PuncturedSpace { punctures, .. } => {
                    let v = p.sub(&punctures[self.centers[i]]);
                    let r = v.norm();
                    out.push(r.ln());
                    out.extend(v.coords().iter().map(|t| t / r));
                }
                DomainShape::Strip { half_width, .. } => {
                    let f = c[0] / (2.0 * half_width);
                    out.push((f / (1.0 - f)).ln());
                    out.extend_from_slice(&c[1..]);
                }
                DomainShape::BallComplementInBox { half_side, .. } => {
                    out.extend(c.iter().map(|v| (v / half_side).atanh()));
                }
            }
        }
        out
    }

    /// `None` when the parameters leave the domain or are not finite.
    pub fn decode(&self, params: &[f64]) -> Option<Vec<Point>> {
        let w = self.width();
        let mut pts = Vec::with_capacity(params.len() / w);
        for (i, q) in params.chunks(w).enumerate() {
            let coords: Vec<f64> = match &self.domain {
                DomainShape::HalfSpace { .. } => {
                    let mut c = q.to_vec();
                    let last = c.len() - 1;
                    c[last] = c[last].exp();
                    c
                }
                DomainShape::UnitBall { .. } => {
                    let r = q.iter().map(|v| v * v).sum::<f64>().sqrt();
                    let s = if r > 0.0 { r.tanh() / r } else { 1.0 };
                    q.iter().map(|v| v * s).collect()
                }
                DomainShape::PuncturedSpace { punctures, .. } => {
                    let v = &q[1..];
                    let r = v.iter().map(|t| t * t).sum::<f64>().sqrt();
                    let s = q[0].exp() / r;
                    punctures[self.centers[i]]
                        .coords()
                        .iter()
                        .zip(v)
                        .map(|(c, t)| c + t * s)
                        .collect()
                }
                DomainShape::Strip { half_width, .. } => {
                    let mut c = q.to_vec();
                    c[0] = 2.0 * half_width / (1.0 + (-q[0]).exp());
                    c
                }
                DomainShape::BallComplementInBox { half_side, .. } => q.iter().map(|v| half_side * v.tanh()).collect(),
            };
            let p = Point::new(coords).ok()?;
            if !self.domain.contains(&p) {
                return None;
            }
            pts.push(p);
        }
        Some(pts)
    }
}

/// A random configuration of `arity` points: a sampled pair, then further
/// points either independent or near one of the first two.
pub fn sample_configuration(src: &mut PointSource, arity: usize) -> Vec<Point> {
    let (x, y) = src.pair();
    let mut pts = vec![x, y];
    while pts.len() < arity {
        let u = src.uniform();
        let near = if u < 0.5 {
            None
        } else {
            src.nearby(&pts[(u < 0.75) as usize])
        };
        pts.push(near.unwrap_or_else(|| src.point()));
    }
    pts.truncate(arity);
    pts
}

fn finite(v: Result<f64>) -> Option<f64> {
    v.ok().filter(|v| v.is_finite())
}

/// Optimizes `objective` over configurations of `arity` interior points.
///
/// `opts.pool` configurations are sampled with `opts.seed`; the best
/// `opts.starts` of them, after any caller-supplied `seeds`, start a simplex
/// search each. The witness is re-evaluated so `best_value` replays exactly.
pub fn refine_extremum<F>(
    objective: F,
    d: &DomainShape,
    arity: usize,
    sense: Sense,
    opts: &RefineOptions,
    seeds: &[Vec<Point>],
) -> Result<SearchResult>
where
    F: Fn(&[Point]) -> Result<f64> + Sync,
{
    if arity == 0 {
        return Err(Error::param("arity", "need at least one point"));
    }
    let mut src = PointSource::new(d.clone(), derive_seed(opts.seed, 0x5EA4), 6);
    let mut pool: Vec<(f64, Vec<Point>)> = (0..opts.pool)
        .filter_map(|_| {
            let c = sample_configuration(&mut src, arity);
            finite(objective(&c)).map(|v| (v, c))
        })
        .collect();
    // stable sort keeps sampling order among ties
    pool.sort_by(|a, b| (sense.sign() * a.0).total_cmp(&(sense.sign() * b.0)));

    let mut starts: Vec<Vec<Point>> = seeds.iter().filter(|s| s.len() == arity).cloned().collect();
    starts.extend(pool.into_iter().take(opts.starts).map(|(_, c)| c));
    if starts.is_empty() {
        return Err(Error::Internal(format!("no finite starting configuration on {d}")));
    }

    let runs: Vec<Option<(f64, Vec<f64>, usize, bool)>> = starts
        .par_iter()
        .map(|start| {
            finite(objective(start))?;
            let codec = Codec::new(d, start);
            let x0 = codec.encode(start);
            let f = |q: &[f64]| match codec.decode(q) {
                Some(pts) => finite(objective(&pts)).map_or(f64::INFINITY, |v| sense.sign() * v),
                None => f64::INFINITY,
            };
            let r = nelder_mead(f, &x0, &opts.simplex);
            Some((sense.sign() * r.value, r.x, r.evals, r.converged))
        })
        .collect();

    let mut best: Option<(f64, Vec<Point>, Vec<f64>, bool)> = None;
    let mut evaluations = 0;
    let mut rejected = 0;
    for (start, run) in starts.iter().zip(runs) {
        let Some((_, params, evals, converged)) = run else {
            rejected += 1;
            continue;
        };
        evaluations += evals;
        let codec = Codec::new(d, start);
        let Some(pts) = codec.decode(&params) else {
            rejected += 1;
            continue;
        };
        let Some(v) = finite(objective(&pts)) else {
            rejected += 1;
            continue;
        };
        if best.as_ref().is_none_or(|b| sense.better(v, b.0)) {
            best = Some((v, pts, params, converged));
        }
    }
    let (best_value, witness, params, converged) =
        best.ok_or_else(|| Error::Internal("every refinement start was rejected".into()))?;
    Ok(SearchResult {
        best_value,
        witness,
        params,
        evaluations,
        converged,
        rejected_starts: rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{extremal_halfspace_pair, far_pair};
    use crate::metrics::{gpp, j_star, t_metric};

    fn domains() -> Vec<DomainShape> {
        vec![
            DomainShape::half_space(2).unwrap(),
            DomainShape::unit_ball(3).unwrap(),
            DomainShape::punctured(2, vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.0)]).unwrap(),
            DomainShape::strip(2, 0.5).unwrap(),
            DomainShape::ball_complement_in_box(2, 2.0, 1.0).unwrap(),
        ]
    }

    #[test]
    fn codec_round_trip() {
        for d in domains() {
            let mut src = PointSource::new(d.clone(), 5, 6);
            for _ in 0..200 {
                let pts = sample_configuration(&mut src, 3);
                let codec = Codec::new(&d, &pts);
                let back = codec.decode(&codec.encode(&pts)).expect("interior");
                for (a, b) in pts.iter().zip(&back) {
                    let scale = a.norm().max(1.0);
                    assert!(a.dist(b) <= 1e-9 * scale, "{d}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn maximizes_p_over_jstar_on_halfspace() {
        let h = DomainShape::half_space(2).unwrap();
        let f = |p: &[Point]| Ok(gpp(&h, 4.0, &p[0], &p[1])? / j_star(&h, &p[0], &p[1])?);
        let r = refine_extremum(f, &h, 2, Sense::Maximize, &RefineOptions::default(), &[]).unwrap();
        assert!(r.best_value >= 2f64.sqrt() - 1e-6, "{}", r.best_value);
        assert!(r.best_value <= 2f64.sqrt() + 1e-12);
        assert_eq!(f(&r.witness).unwrap(), r.best_value);
        let (x, y) = extremal_halfspace_pair(4.0, 2).unwrap();
        assert!((f(&[x, y]).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn maximizes_p_over_t_on_halfspace() {
        let h = DomainShape::half_space(2).unwrap();
        let f = |p: &[Point]| Ok(gpp(&h, 1.0, &p[0], &p[1])? / t_metric(&h, &p[0], &p[1])?);
        let r = refine_extremum(f, &h, 2, Sense::Maximize, &RefineOptions::with_seed(3), &[]).unwrap();
        assert!(r.best_value >= 4.0 / 3f64.sqrt() - 1e-4, "{}", r.best_value);
    }

    #[test]
    fn constant_objective() {
        let h = DomainShape::half_space(2).unwrap();
        let seed = far_pair(&h, 0.1).unwrap();
        let r = refine_extremum(
            |_: &[Point]| Ok(1.0),
            &h,
            2,
            Sense::Minimize,
            &RefineOptions {
                pool: 16,
                starts: 2,
                ..Default::default()
            },
            &[vec![seed.0, seed.1]],
        )
        .unwrap();
        assert_eq!(r.best_value, 1.0);
    }

    #[test]
    fn nonfinite_starts_are_counted() {
        let h = DomainShape::half_space(2).unwrap();
        let bad = vec![Point::xy(0.0, 1.0), Point::xy(0.0, 1.0)];
        let f = |p: &[Point]| Ok(gpp(&h, 4.0, &p[0], &p[1])? / j_star(&h, &p[0], &p[1])?);
        let opts = RefineOptions {
            pool: 64,
            starts: 2,
            ..Default::default()
        };
        let r = refine_extremum(f, &h, 2, Sense::Maximize, &opts, &[bad]).unwrap();
        assert_eq!(r.rejected_starts, 1);
    }

    #[test]
    fn deterministic() {
        let b = DomainShape::unit_ball(2).unwrap();
        let f = |p: &[Point]| Ok(gpp(&b, 2.0, &p[0], &p[1])? / j_star(&b, &p[0], &p[1])?);
        let o = RefineOptions {
            starts: 4,
            pool: 256,
            ..Default::default()
        };
        let a = refine_extremum(f, &b, 2, Sense::Minimize, &o, &[]).unwrap();
        let c = refine_extremum(f, &b, 2, Sense::Minimize, &o, &[]).unwrap();
        assert_eq!(a, c);
    }
}
