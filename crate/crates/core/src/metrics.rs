//! The generalized point pair function and the hyperbolic-type metrics it is
//! compared against.
//!
//! Every function validates that its points are interior to the domain and
//! returns exactly `0` for coincident points.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BoundaryPatch, DomainShape, Face, Point};
use crate::optimize::{golden_section, golden_section_on_grid, nelder_mead, SimplexOptions};

/// Golden-section tolerance on boundary parameters.
pub const S_PARAM_TOL: f64 = 1e-10;
/// Multi-starts of the boundary-angle search: uniform brackets over the
/// whole circle, and again over the arc between the two points.
pub const S_MULTISTARTS: usize = 16;
/// Grid refinement of each multi-start bracket.
const S_GRID_PER_START: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "metric", content = "alpha", rename_all = "snake_case")]
pub enum MetricId {
    /// `p^alpha_G`
    Gpp(f64),
    /// `p_G`, the `alpha = 4` case.
    PointPair,
    DistanceRatioJ,
    JStar,
    TriangularRatioS,
    TMetric,
    RhoHalfSpace,
    RhoBall,
    /// `th(rho_G / 2)` on the half-space or the ball.
    ThHalfRho,
}

impl MetricId {
    pub fn label(&self) -> String {
        match self {
            MetricId::Gpp(a) => format!("p^{a}"),
            MetricId::PointPair => "p".into(),
            MetricId::DistanceRatioJ => "j".into(),
            MetricId::JStar => "j*".into(),
            MetricId::TriangularRatioS => "s".into(),
            MetricId::TMetric => "t".into(),
            MetricId::RhoHalfSpace => "rho_H".into(),
            MetricId::RhoBall => "rho_B".into(),
            MetricId::ThHalfRho => "th(rho/2)".into(),
        }
    }

    /// Evaluates the metric; `s` uses the closed form with brute-force
    /// fallback.
    pub fn eval(&self, d: &DomainShape, x: &Point, y: &Point) -> Result<f64> {
        match *self {
            MetricId::Gpp(alpha) => gpp(d, alpha, x, y),
            MetricId::PointPair => gpp(d, 4.0, x, y),
            MetricId::DistanceRatioJ => j_metric(d, x, y),
            MetricId::JStar => j_star(d, x, y),
            MetricId::TriangularRatioS => s_metric(d, x, y, SMode::ClosedForm).map(|s| s.value),
            MetricId::TMetric => t_metric(d, x, y),
            MetricId::RhoHalfSpace => match d {
                DomainShape::HalfSpace { .. } => rho_half_space(x, y),
                _ => Err(unsupported("rho_half_space", d)),
            },
            MetricId::RhoBall => match d {
                DomainShape::UnitBall { .. } => rho_ball(x, y),
                _ => Err(unsupported("rho_ball", d)),
            },
            MetricId::ThHalfRho => th_half_rho(d, x, y),
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Parses metric names as used on the command line. `gpp` needs an alpha;
/// `rho` is resolved against the domain by the caller.
pub fn parse_metric(name: &str, alpha: Option<f64>) -> Result<MetricId> {
    Ok(match name {
        "gpp" => MetricId::Gpp(alpha.ok_or_else(|| Error::param("alpha", "gpp needs an alpha"))?),
        "p" | "pointpair" => MetricId::PointPair,
        "j" => MetricId::DistanceRatioJ,
        "jstar" => MetricId::JStar,
        "s" => MetricId::TriangularRatioS,
        "t" => MetricId::TMetric,
        "rho_h" => MetricId::RhoHalfSpace,
        "rho_b" => MetricId::RhoBall,
        "th" => MetricId::ThHalfRho,
        other => return Err(Error::param("metric", format!("unknown metric `{other}`"))),
    })
}

impl FromStr for MetricId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_metric(s, None)
    }
}

fn unsupported(op: &'static str, d: &DomainShape) -> Error {
    Error::Unsupported {
        op,
        domain: d.name().to_string(),
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::param("alpha", format!("must be positive, got {alpha}")));
    }
    Ok(())
}

fn distances(d: &DomainShape, x: &Point, y: &Point) -> Result<(f64, f64, f64)> {
    let dx = d.dist_to_boundary(x)?;
    let dy = d.dist_to_boundary(y)?;
    Ok((x.dist(y), dx, dy))
}

/// `p^alpha_G(x, y) = |x-y| / sqrt(|x-y|^2 + alpha d_G(x) d_G(y))`
pub fn gpp(d: &DomainShape, alpha: f64, x: &Point, y: &Point) -> Result<f64> {
    check_alpha(alpha)?;
    let (r, dx, dy) = distances(d, x, y)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    Ok(r / (r * r + alpha * (dx * dy)).sqrt())
}

/// Distance ratio metric `log(1 + |x-y| / min{d_G(x), d_G(y)})`.
pub fn j_metric(d: &DomainShape, x: &Point, y: &Point) -> Result<f64> {
    let (r, dx, dy) = distances(d, x, y)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    Ok((r / dx.min(dy)).ln_1p())
}

/// `j*_G = th(j_G / 2) = |x-y| / (|x-y| + 2 min{d_G(x), d_G(y)})`
pub fn j_star(d: &DomainShape, x: &Point, y: &Point) -> Result<f64> {
    let (r, dx, dy) = distances(d, x, y)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    Ok(r / (r + 2.0 * dx.min(dy)))
}

/// `t_G = |x-y| / (|x-y| + d_G(x) + d_G(y))`
pub fn t_metric(d: &DomainShape, x: &Point, y: &Point) -> Result<f64> {
    let (r, dx, dy) = distances(d, x, y)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    Ok(r / (r + dx + dy))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SMode {
    ClosedForm,
    BruteForce,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SValue {
    pub value: f64,
    /// Boundary infimum of `|x-z| + |z-y|`.
    pub boundary_sum: f64,
    /// Set when the closed form is unavailable and brute force was used.
    pub fell_back: bool,
}

/// Triangular ratio metric `|x-y| / inf_{z in boundary} (|x-z| + |z-y|)`.
pub fn s_metric(d: &DomainShape, x: &Point, y: &Point, mode: SMode) -> Result<SValue> {
    d.dist_to_boundary(x)?;
    d.dist_to_boundary(y)?;
    let r = x.dist(y);
    if r == 0.0 {
        return Ok(SValue {
            value: 0.0,
            boundary_sum: 2.0 * d.dist_to_boundary(x)?,
            fell_back: false,
        });
    }
    let (sum, fell_back) = match mode {
        SMode::BruteForce => (boundary_sum_brute_force(d, x, y), false),
        SMode::ClosedForm => match boundary_sum_closed_form(d, x, y)? {
            Some(s) => (s, false),
            None => (boundary_sum_brute_force(d, x, y), true),
        },
    };
    Ok(SValue {
        value: (r / sum).min(1.0),
        boundary_sum: sum,
        fell_back,
    })
}

fn boundary_sum_closed_form(d: &DomainShape, x: &Point, y: &Point) -> Result<Option<f64>> {
    let sum = match d {
        DomainShape::HalfSpace { .. } => x.dist(&d.reflect_across_face(y, Face::Lower)?),
        DomainShape::Strip { .. } => {
            let lo = x.dist(&d.reflect_across_face(y, Face::Lower)?);
            let hi = x.dist(&d.reflect_across_face(y, Face::Upper)?);
            lo.min(hi)
        }
        DomainShape::PuncturedSpace { punctures, .. } => punctures
            .iter()
            .map(|z| x.dist(z) + z.dist(y))
            .fold(f64::INFINITY, f64::min),
        DomainShape::UnitBall { .. } => ball_boundary_sum(x, y),
        DomainShape::BallComplementInBox {
            dim: 2,
            half_side,
            radius,
        } => box_boundary_sum_planar(x, y, *half_side, *radius),
        DomainShape::BallComplementInBox { .. } => return Ok(None),
    };
    Ok(Some(sum))
}

/// Coordinates of `x` and `y` in a 2-plane through the origin containing both.
fn planar_section(x: &Point, y: &Point) -> ([f64; 2], [f64; 2]) {
    let (first, second, swapped) = if x.norm() >= y.norm() {
        (x, y, false)
    } else {
        (y, x, true)
    };
    let r1 = first.norm();
    if r1 == 0.0 {
        return ([0.0, 0.0], [0.0, 0.0]);
    }
    let u = first.scale(1.0 / r1);
    let a = second.dot(&u);
    let perp = second.offset(&u, -a);
    let b = perp.norm();
    let p1 = [r1, 0.0];
    let p2 = [a, b];
    if swapped {
        (p2, p1)
    } else {
        (p1, p2)
    }
}

fn ball_boundary_sum(x: &Point, y: &Point) -> f64 {
    let (p, q) = planar_section(x, y);
    let f = |t: f64| {
        let (s, c) = t.sin_cos();
        (p[0] - c).hypot(p[1] - s) + (q[0] - c).hypot(q[1] - s)
    };
    let (tx, ty) = (p[1].atan2(p[0]), q[1].atan2(q[0]));
    golden_section_on_grid(f, &angle_grid(-PI, PI, tx, ty), S_PARAM_TOL).1
}

/// Uniform nodes on `[lo, hi]`, a finer grid on the arc between `ta` and
/// `tb`, and both angles themselves, sorted. Points near the boundary give
/// valleys of width comparable to their distance, centred at their angles.
fn angle_grid(lo: f64, hi: f64, ta: f64, tb: f64) -> Vec<f64> {
    let n = S_MULTISTARTS * S_GRID_PER_START;
    let (ta, tb) = (ta.clamp(lo, hi), tb.clamp(lo, hi));
    let (a, mut b) = (ta.min(tb), ta.max(tb));
    let wrap = b - a > PI && hi - lo > PI;
    let mut nodes: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    if wrap {
        // the short arc crosses the seam; cover it as two pieces
        b -= 2.0 * PI;
        for i in 0..=n {
            let t = b + (a - b) * i as f64 / n as f64;
            nodes.push(if t < lo { t + 2.0 * PI } else { t });
        }
    } else {
        nodes.extend((0..=n).map(|i| a + (b - a) * i as f64 / n as f64));
    }
    nodes.extend([ta, tb]);
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    nodes
}

/// Boundary infimum in the planar box-minus-ball domain: five segments and
/// the arc of the removed circle inside the box.
fn box_boundary_sum_planar(x: &Point, y: &Point, l: f64, r: f64) -> f64 {
    let (x0, x1, y0, y1) = (x[0], x[1], y[0], y[1]);
    let sum = |z0: f64, z1: f64| (x0 - z0).hypot(x1 - z1) + (y0 - z0).hypot(y1 - z1);
    let mut best = f64::INFINITY;
    // segment pieces: (axis fixed, value, t range); the sum is convex along a segment
    let mut pieces: Vec<(usize, f64, f64, f64)> = vec![
        (0, l, -l, l),
        (1, -l, -l, l),
        (1, l, -l, l),
        (0, -l, -l, -r),
        (0, -l, r, l),
    ];
    for (axis, v, lo, hi) in pieces.drain(..) {
        let f = |t: f64| if axis == 0 { sum(v, t) } else { sum(t, v) };
        best = best.min(golden_section(f, lo, hi, S_PARAM_TOL * l).1);
    }
    let arc = |phi: f64| {
        let (s, c) = phi.sin_cos();
        sum(-l + r * c, r * s)
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let (ta, tb) = (x1.atan2(x0 + l), y1.atan2(y0 + l));
    best.min(golden_section_on_grid(arc, &angle_grid(-half_pi, half_pi, ta, tb), S_PARAM_TOL).1)
}

const BRUTE_SAMPLES: usize = 4096;
const BRUTE_REFINE: usize = 4;
const BRUTE_SEED: u64 = 0x5EED_0FB0_0DA7;

/// Dense boundary sampling followed by simplex refinement of the best
/// samples; the independent route for the boundary infimum.
pub fn boundary_sum_brute_force(d: &DomainShape, x: &Point, y: &Point) -> f64 {
    let n = d.dim();
    let scale = x.dist(y) + x.norm().max(y.norm()).max(1.0);
    let sum = |z: &Point| x.dist(z) + z.dist(y);
    let mut rng = ChaCha8Rng::seed_from_u64(BRUTE_SEED);
    let mut best = f64::INFINITY;
    for patch in d.boundary_patches() {
        let map: Box<dyn Fn(&[f64]) -> Point> = match &patch {
            BoundaryPatch::Points(pts) => {
                best = pts.iter().map(sum).fold(best, f64::min);
                continue;
            }
            BoundaryPatch::Hyperplane { axis, offset } => {
                let (axis, offset) = (*axis, *offset);
                let mid: Vec<f64> = x.coords().iter().zip(y.coords()).map(|(a, b)| 0.5 * (a + b)).collect();
                Box::new(move |w: &[f64]| {
                    let mut z = mid.clone();
                    z[axis] = offset;
                    let mut k = 0;
                    for (i, zi) in z.iter_mut().enumerate() {
                        if i != axis {
                            *zi += w[k];
                            k += 1;
                        }
                    }
                    Point::from_raw(z)
                })
            }
            BoundaryPatch::Sphere {
                center,
                radius,
                min_first,
            } => {
                let (center, radius, fold) = (center.clone(), *radius, min_first.is_some());
                Box::new(move |w: &[f64]| {
                    let mut v = w.to_vec();
                    if fold {
                        v[0] = v[0].abs();
                    }
                    let nv = v.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-300);
                    let dir = Point::from_raw(v.into_iter().map(|c| c / nv).collect());
                    center.offset(&dir, radius)
                })
            }
            BoundaryPatch::BoxFace {
                axis,
                offset,
                half_side,
                hole,
            } => {
                let (axis, offset, l, hole) = (*axis, *offset, *half_side, hole.clone());
                Box::new(move |w: &[f64]| {
                    let mut z = vec![0.0; w.len() + 1];
                    let mut k = 0;
                    for (i, zi) in z.iter_mut().enumerate() {
                        if i == axis {
                            *zi = offset;
                        } else {
                            *zi = l * w[k].sin();
                            k += 1;
                        }
                    }
                    let mut z = Point::from_raw(z);
                    if let Some((c, r)) = &hole {
                        let gap = z.dist(c);
                        if gap < *r {
                            let dir = if gap > 0.0 {
                                z.sub(c).scale(1.0 / gap)
                            } else {
                                Point::unit(z.dim(), (axis + 1) % z.dim())
                            };
                            z = c.offset(&dir, *r);
                        }
                    }
                    z
                })
            }
        };
        let m = match patch {
            BoundaryPatch::Sphere { .. } => n,
            _ => n - 1,
        };
        let mut samples: Vec<(f64, Vec<f64>)> = (0..BRUTE_SAMPLES)
            .map(|i| {
                let w: Vec<f64> = match (&patch, m) {
                    // 1-D hyperplane: an even grid through a tan map covers all scales
                    (BoundaryPatch::Hyperplane { .. }, 1) => {
                        let u = (i as f64 + 0.5) / BRUTE_SAMPLES as f64;
                        vec![scale * (std::f64::consts::PI * (u - 0.5)).tan()]
                    }
                    (BoundaryPatch::Hyperplane { .. }, _) => (0..m)
                        .map(|_| scale * (std::f64::consts::PI * (rng.random::<f64>() - 0.5)).tan())
                        .collect(),
                    (BoundaryPatch::Sphere { .. }, 2) => {
                        let t = std::f64::consts::TAU * i as f64 / BRUTE_SAMPLES as f64;
                        vec![t.cos(), t.sin()]
                    }
                    (BoundaryPatch::Sphere { .. }, _) => (0..m).map(|_| rng.random_range(-1.0..1.0)).collect(),
                    (BoundaryPatch::BoxFace { .. }, 1) => {
                        let u = (i as f64 + 0.5) / BRUTE_SAMPLES as f64;
                        vec![std::f64::consts::PI * (u - 0.5)]
                    }
                    _ => (0..m)
                        .map(|_| std::f64::consts::PI * (rng.random::<f64>() - 0.5))
                        .collect(),
                };
                (sum(&map(&w)), w)
            })
            .collect();
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        let opts = SimplexOptions {
            max_evals: 4000,
            xtol: 1e-14,
            ftol: 1e-16,
            initial_step: 0.01,
        };
        for (v, w) in samples.iter().take(BRUTE_REFINE) {
            best = best.min(*v);
            let r = nelder_mead(|w| sum(&map(w)), w, &opts);
            best = best.min(r.value);
        }
    }
    best
}

/// Hyperbolic metric of the upper half-space,
/// `ch rho = 1 + |x-y|^2 / (2 x_n y_n)`.
pub fn rho_half_space(x: &Point, y: &Point) -> Result<f64> {
    let h = DomainShape::half_space(x.dim())?;
    let (r, dx, dy) = distances(&h, x, y)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    // ch rho - 1 = 2 sh^2(rho/2)
    Ok(2.0 * (r / (2.0 * (dx * dy).sqrt())).asinh())
}

/// Hyperbolic metric of the unit ball,
/// `sh^2(rho/2) = |x-y|^2 / ((1-|x|^2)(1-|y|^2))`.
pub fn rho_ball(x: &Point, y: &Point) -> Result<f64> {
    let b = DomainShape::unit_ball(x.dim())?;
    let (r, _, _) = distances(&b, x, y)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * (r / ball_conformal_product(x, y).sqrt()).asinh())
}

/// `(1-|x|^2)(1-|y|^2)`, factored to avoid cancellation near the sphere.
fn ball_conformal_product(x: &Point, y: &Point) -> f64 {
    let (a, b) = (x.norm(), y.norm());
    (1.0 - a) * (1.0 + a) * (1.0 - b) * (1.0 + b)
}

/// `th(rho_G(x,y) / 2)` on the half-space or the unit ball, computed from the
/// `ch`/`sh` forms directly.
pub fn th_half_rho(d: &DomainShape, x: &Point, y: &Point) -> Result<f64> {
    let (r, dx, dy) = distances(d, x, y)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    match d {
        DomainShape::HalfSpace { .. } => Ok(r / (r * r + 4.0 * dx * dy).sqrt()),
        DomainShape::UnitBall { .. } => Ok(r / (r * r + ball_conformal_product(x, y)).sqrt()),
        _ => Err(unsupported("th_half_rho", d)),
    }
}
