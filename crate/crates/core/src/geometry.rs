//! Points, the supported domains, boundary-distance oracles and seeded
//! samplers of interior point pairs.

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

/// Pairs closer than this (relative to the local boundary scale) are re-drawn.
pub const PAIR_COINCIDENCE_TOL: f64 = 1e-12;

/// A point of `R^n`, `n >= 2`, with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < MIN_DIM || coords.len() > MAX_DIM {
            return Err(Error::UnsupportedDimension(coords.len()));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::param("coords", format!("non-finite coordinate {c}")));
        }
        Ok(Point(coords))
    }

    /// Planar point; panics on non-finite input.
    pub fn xy(x: f64, y: f64) -> Self {
        assert!(x.is_finite() && y.is_finite(), "non-finite coordinate");
        Point(vec![x, y])
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    /// The unit vector `e_{axis+1}`.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut c = vec![0.0; dim];
        c[axis] = 1.0;
        Point(c)
    }

    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: f64) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }

    /// `self + s * dir`
    pub fn offset(&self, dir: &Point, s: f64) -> Point {
        Point(self.0.iter().zip(&dir.0).map(|(a, b)| a + s * b).collect())
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: self.dim(),
            });
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// One of the two bounding hyperplanes of a half-space or strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Face {
    /// `x_n = 0` for the half-space, `x_1 = 0` for the strip.
    Lower,
    /// `x_1 = 2r` for the strip.
    Upper,
}

/// A piece of the boundary, used by brute-force boundary minimization.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryPatch {
    /// The whole hyperplane `z[axis] = offset`.
    Hyperplane { axis: usize, offset: f64 },
    /// The sphere `|z - center| = radius`, restricted to `z[0] >= min_first`
    /// when given.
    Sphere {
        center: Point,
        radius: f64,
        min_first: Option<f64>,
    },
    /// The face `z[axis] = offset` of the box `[-half_side, half_side]^n`,
    /// minus an open ball `hole` when given.
    BoxFace {
        axis: usize,
        offset: f64,
        half_side: f64,
        hole: Option<(Point, f64)>,
    },
    /// A finite set of boundary points.
    Points(Vec<Point>),
}

/// The domains on which every metric is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainShape {
    /// `{x : x_n > 0}`
    HalfSpace { dim: usize },
    /// `{x : |x| < 1}`
    UnitBall { dim: usize },
    /// `R^n` minus finitely many points.
    PuncturedSpace { dim: usize, punctures: Vec<Point> },
    /// `{x : 0 < x_1 < 2 r}`
    Strip { dim: usize, half_width: f64 },
    /// The open box `(-L, L)^n` minus the closed ball `B(q, r)`, where
    /// `q = (-L, 0, ..., 0)` lies on the face `x_1 = -L` and `r < L`.
    BallComplementInBox { dim: usize, half_side: f64, radius: f64 },
}

fn check_dim(dim: usize) -> Result<()> {
    if !(MIN_DIM..=MAX_DIM).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    Ok(())
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::param(name, format!("must be positive and finite, got {v}")));
    }
    Ok(())
}

impl DomainShape {
    pub fn half_space(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(DomainShape::HalfSpace { dim })
    }

    pub fn unit_ball(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(DomainShape::UnitBall { dim })
    }

    pub fn punctured(dim: usize, punctures: Vec<Point>) -> Result<Self> {
        check_dim(dim)?;
        if punctures.is_empty() {
            return Err(Error::param("punctures", "at least one puncture is required"));
        }
        for p in &punctures {
            p.check_dim(dim)?;
        }
        for (i, p) in punctures.iter().enumerate() {
            if punctures[..i].iter().any(|q| q == p) {
                return Err(Error::param("punctures", format!("duplicate puncture {p}")));
            }
        }
        Ok(DomainShape::PuncturedSpace { dim, punctures })
    }

    /// `R^n \ {0}`
    pub fn punctured_at_origin(dim: usize) -> Result<Self> {
        Self::punctured(dim, vec![Point::origin(dim)])
    }

    pub fn strip(dim: usize, half_width: f64) -> Result<Self> {
        check_dim(dim)?;
        check_positive("half_width", half_width)?;
        Ok(DomainShape::Strip { dim, half_width })
    }

    pub fn ball_complement_in_box(dim: usize, half_side: f64, radius: f64) -> Result<Self> {
        check_dim(dim)?;
        check_positive("half_side", half_side)?;
        check_positive("radius", radius)?;
        if radius >= half_side {
            return Err(Error::param(
                "radius",
                format!("removed ball radius {radius} must be below the box half-side {half_side}"),
            ));
        }
        Ok(DomainShape::BallComplementInBox { dim, half_side, radius })
    }

    pub fn dim(&self) -> usize {
        match *self {
            DomainShape::HalfSpace { dim }
            | DomainShape::UnitBall { dim }
            | DomainShape::PuncturedSpace { dim, .. }
            | DomainShape::Strip { dim, .. }
            | DomainShape::BallComplementInBox { dim, .. } => dim,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DomainShape::HalfSpace { .. } => "halfspace",
            DomainShape::UnitBall { .. } => "ball",
            DomainShape::PuncturedSpace { .. } => "punctured",
            DomainShape::Strip { .. } => "strip",
            DomainShape::BallComplementInBox { .. } => "boxminusball",
        }
    }

    pub fn is_convex(&self) -> bool {
        matches!(
            self,
            DomainShape::HalfSpace { .. } | DomainShape::UnitBall { .. } | DomainShape::Strip { .. }
        )
    }

    /// Center of the removed ball of a [`DomainShape::BallComplementInBox`].
    pub fn removed_ball_center(&self) -> Option<Point> {
        match *self {
            DomainShape::BallComplementInBox { dim, half_side, .. } => {
                let mut c = vec![0.0; dim];
                c[0] = -half_side;
                Some(Point(c))
            }
            _ => None,
        }
    }

    /// Boundary distance without the membership check; nonpositive outside.
    fn raw_distance(&self, x: &Point) -> f64 {
        let c = x.coords();
        match self {
            DomainShape::HalfSpace { dim } => c[dim - 1],
            DomainShape::UnitBall { .. } => 1.0 - x.norm(),
            DomainShape::PuncturedSpace { punctures, .. } => {
                punctures.iter().map(|p| x.dist(p)).fold(f64::INFINITY, f64::min)
            }
            DomainShape::Strip { half_width, .. } => c[0].min(2.0 * half_width - c[0]),
            DomainShape::BallComplementInBox { half_side, radius, .. } => {
                let faces = c.iter().map(|v| half_side - v.abs()).fold(f64::INFINITY, f64::min);
                let q = self.removed_ball_center().expect("box domain");
                faces.min(x.dist(&q) - radius)
            }
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        x.dim() == self.dim() && x.is_finite() && self.raw_distance(x) > 0.0
    }

    fn ensure_interior(&self, x: &Point) -> Result<()> {
        x.check_dim(self.dim())?;
        if !self.contains(x) {
            return Err(Error::NotInterior {
                domain: self.name().to_string(),
                point: x.clone(),
            });
        }
        Ok(())
    }

    /// Euclidean distance `d_G(x)` from an interior point to the boundary.
    pub fn dist_to_boundary(&self, x: &Point) -> Result<f64> {
        self.ensure_interior(x)?;
        Ok(self.raw_distance(x))
    }

    /// A boundary point realizing `d_G(x)`.
    ///
    /// Ties are broken towards the candidate with the smallest label: faces
    /// are ordered by axis then sign (negative first) and come before the
    /// sphere of the removed ball; the center of the unit ball maps to `e_1`;
    /// equidistant punctures resolve to the first listed one.
    pub fn nearest_boundary_point(&self, x: &Point) -> Result<Point> {
        self.ensure_interior(x)?;
        let c = x.coords();
        let n = self.dim();
        let z = match self {
            DomainShape::HalfSpace { .. } => {
                let mut z = c.to_vec();
                z[n - 1] = 0.0;
                Point(z)
            }
            DomainShape::UnitBall { .. } => {
                let r = x.norm();
                if r == 0.0 {
                    Point::unit(n, 0)
                } else {
                    x.scale(1.0 / r)
                }
            }
            DomainShape::PuncturedSpace { punctures, .. } => {
                let mut best = &punctures[0];
                let mut best_d = x.dist(best);
                for p in &punctures[1..] {
                    let d = x.dist(p);
                    if d < best_d {
                        best = p;
                        best_d = d;
                    }
                }
                best.clone()
            }
            DomainShape::Strip { half_width, .. } => {
                let w = 2.0 * half_width;
                let mut z = c.to_vec();
                z[0] = if c[0] <= w - c[0] { 0.0 } else { w };
                Point(z)
            }
            DomainShape::BallComplementInBox { half_side, radius, .. } => {
                let mut best: Option<(f64, Point)> = None;
                for axis in 0..n {
                    for sign in [-1.0, 1.0] {
                        let d = half_side - sign * c[axis];
                        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                            let mut z = c.to_vec();
                            z[axis] = sign * half_side;
                            best = Some((d, Point(z)));
                        }
                    }
                }
                let q = self.removed_ball_center().expect("box domain");
                let dq = x.dist(&q);
                let d_sphere = dq - radius;
                let (bd, bz) = best.expect("at least one face");
                if d_sphere < bd {
                    q.offset(&x.sub(&q), radius / dq)
                } else {
                    bz
                }
            }
        };
        Ok(z)
    }

    /// Mirror image of `y` in one bounding hyperplane of a half-space or strip.
    pub fn reflect_across_face(&self, y: &Point, face: Face) -> Result<Point> {
        self.ensure_interior(y)?;
        let mut c = y.coords().to_vec();
        match (self, face) {
            (DomainShape::HalfSpace { dim }, Face::Lower) => c[dim - 1] = -c[dim - 1],
            (DomainShape::Strip { .. }, Face::Lower) => c[0] = -c[0],
            (DomainShape::Strip { half_width, .. }, Face::Upper) => c[0] = 4.0 * half_width - c[0],
            _ => {
                return Err(Error::Unsupported {
                    op: "reflect_across_face",
                    domain: format!("{} ({face:?} face)", self.name()),
                })
            }
        }
        Ok(Point(c))
    }

    /// Reflection across the face nearest to `y` (lower face on ties).
    pub fn reflect_across_nearest_face(&self, y: &Point) -> Result<Point> {
        let face = match self {
            DomainShape::Strip { half_width, .. } if y[0] > *half_width => Face::Upper,
            _ => Face::Lower,
        };
        self.reflect_across_face(y, face)
    }

    pub fn boundary_patches(&self) -> Vec<BoundaryPatch> {
        let n = self.dim();
        match self {
            DomainShape::HalfSpace { .. } => vec![BoundaryPatch::Hyperplane {
                axis: n - 1,
                offset: 0.0,
            }],
            DomainShape::UnitBall { .. } => vec![BoundaryPatch::Sphere {
                center: Point::origin(n),
                radius: 1.0,
                min_first: None,
            }],
            DomainShape::PuncturedSpace { punctures, .. } => {
                vec![BoundaryPatch::Points(punctures.clone())]
            }
            DomainShape::Strip { half_width, .. } => vec![
                BoundaryPatch::Hyperplane { axis: 0, offset: 0.0 },
                BoundaryPatch::Hyperplane {
                    axis: 0,
                    offset: 2.0 * half_width,
                },
            ],
            DomainShape::BallComplementInBox { half_side, radius, .. } => {
                let q = self.removed_ball_center().expect("box domain");
                let mut patches = Vec::with_capacity(2 * n + 1);
                for axis in 0..n {
                    for sign in [-1.0, 1.0] {
                        let hole = (axis == 0 && sign < 0.0).then(|| (q.clone(), *radius));
                        patches.push(BoundaryPatch::BoxFace {
                            axis,
                            offset: sign * half_side,
                            half_side: *half_side,
                            hole,
                        });
                    }
                }
                patches.push(BoundaryPatch::Sphere {
                    center: q,
                    radius: *radius,
                    min_first: Some(-half_side),
                });
                patches
            }
        }
    }
}

impl fmt::Display for DomainShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainShape::HalfSpace { dim } => write!(f, "HalfSpace{{{dim}}}"),
            DomainShape::UnitBall { dim } => write!(f, "UnitBall{{{dim}}}"),
            DomainShape::PuncturedSpace { dim, punctures } => {
                write!(f, "PuncturedSpace{{{dim}, [")?;
                for (i, p) in punctures.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "]}}")
            }
            DomainShape::Strip { dim, half_width } => write!(f, "Strip{{{dim}, r={half_width}}}"),
            DomainShape::BallComplementInBox { dim, half_side, radius } => {
                write!(f, "BallComplementInBox{{{dim}, L={half_side}, r={radius}}}")
            }
        }
    }
}

/// SplitMix64 finalizer; derives independent stream seeds from a parent seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic source of interior point pairs for one domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSampler {
    pub domain: DomainShape,
    pub seed: u64,
    /// Width of the log-uniform spread of scales, in decades.
    pub radial_scale_decades: u32,
    pub count: usize,
}

impl PairSampler {
    pub const DEFAULT_DECADES: u32 = 6;

    pub fn new(domain: DomainShape, seed: u64, count: usize) -> Self {
        PairSampler {
            domain,
            seed,
            radial_scale_decades: Self::DEFAULT_DECADES,
            count,
        }
    }

    pub fn with_decades(mut self, decades: u32) -> Self {
        self.radial_scale_decades = decades;
        self
    }

    /// The point source behind this sampler.
    pub fn source(&self) -> PointSource {
        PointSource::new(self.domain.clone(), self.seed, self.radial_scale_decades)
    }

    pub fn pairs(&self) -> Pairs {
        Pairs {
            source: self.source(),
            remaining: self.count,
        }
    }

    /// Splits the stream into consecutive chunks of at most `chunk` pairs,
    /// each with its own derived seed. The result does not depend on how the
    /// chunks are scheduled.
    pub fn split(&self, chunk: usize) -> Vec<PairSampler> {
        let chunk = chunk.max(1);
        let n_chunks = self.count.div_ceil(chunk);
        (0..n_chunks)
            .map(|i| PairSampler {
                domain: self.domain.clone(),
                seed: derive_seed(self.seed, i as u64),
                radial_scale_decades: self.radial_scale_decades,
                count: chunk.min(self.count - i * chunk),
            })
            .collect()
    }
}

/// Iterator over the pairs of a [`PairSampler`].
pub struct Pairs {
    source: PointSource,
    remaining: usize,
}

impl Iterator for Pairs {
    type Item = (Point, Point);

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        Some(self.source.pair())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

const MAX_REDRAWS: usize = 10_000;

/// Seeded generator of interior points, with boundary-adjacent and
/// scale-separated strata.
pub struct PointSource {
    domain: DomainShape,
    rng: ChaCha8Rng,
    decades: f64,
}

impl PointSource {
    pub fn new(domain: DomainShape, seed: u64, decades: u32) -> Self {
        PointSource {
            domain,
            rng: ChaCha8Rng::seed_from_u64(seed),
            decades: decades.max(1) as f64,
        }
    }

    pub fn domain(&self) -> &DomainShape {
        &self.domain
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// `10^u` with `u` uniform on `[lo, hi]` decades.
    fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u: f64 = self.rng.random_range(lo..=hi);
        10f64.powf(u)
    }

    fn direction(&mut self, dim: usize) -> Point {
        loop {
            let v: Vec<f64> = (0..dim).map(|_| self.rng.random_range(-1.0..=1.0)).collect();
            let n2: f64 = v.iter().map(|c| c * c).sum();
            if n2 > 1e-4 && n2 <= 1.0 {
                let inv = 1.0 / n2.sqrt();
                return Point(v.into_iter().map(|c| c * inv).collect());
            }
        }
    }

    fn uniform_in_cube(&mut self, dim: usize, half: f64) -> Point {
        Point((0..dim).map(|_| self.rng.random_range(-half..=half)).collect())
    }

    fn candidate(&mut self) -> Point {
        let dim = self.domain.dim();
        let dec = self.decades;
        match self.domain.clone() {
            DomainShape::HalfSpace { .. } => {
                let h = self.log_uniform(-dec / 2.0, dec / 2.0);
                let lateral = self.log_uniform(-dec / 2.0, dec / 2.0);
                let mut p = self.uniform_in_cube(dim, lateral);
                p.0[dim - 1] = h;
                p
            }
            DomainShape::UnitBall { .. } => {
                if self.uniform() < 0.5 {
                    loop {
                        let p = self.uniform_in_cube(dim, 1.0);
                        if p.norm() < 1.0 {
                            return p;
                        }
                    }
                } else {
                    let gap = self.log_uniform(-dec, 0.0);
                    let u = self.direction(dim);
                    u.scale(1.0 - gap)
                }
            }
            DomainShape::PuncturedSpace { punctures, .. } => {
                let k = self.rng.random_range(0..punctures.len());
                let sep = punctures
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != k)
                    .map(|(_, p)| p.dist(&punctures[k]))
                    .fold(f64::INFINITY, f64::min);
                let base = if sep.is_finite() { sep } else { 1.0 };
                let r = base * self.log_uniform(-dec / 2.0, dec / 2.0);
                let u = self.direction(dim);
                punctures[k].offset(&u, r)
            }
            DomainShape::Strip { half_width, .. } => {
                let w = 2.0 * half_width;
                let lateral = half_width * self.log_uniform(-dec / 2.0, dec / 2.0);
                let mut p = self.uniform_in_cube(dim, lateral);
                p.0[0] = if self.uniform() < 0.5 {
                    self.rng.random_range(0.0..w)
                } else {
                    let gap = half_width * self.log_uniform(-dec, 0.0);
                    if self.uniform() < 0.5 {
                        gap
                    } else {
                        w - gap
                    }
                };
                p
            }
            DomainShape::BallComplementInBox { half_side, radius, .. } => {
                if self.uniform() < 0.5 {
                    return self.uniform_in_cube(dim, half_side);
                }
                // near-boundary stratum: push a boundary point inwards
                let gap = half_side * self.log_uniform(-dec, 0.0);
                let q = self.domain.removed_ball_center().expect("box domain");
                if self.uniform() < 0.3 {
                    let mut u = self.direction(dim);
                    u.0[0] = u.0[0].abs();
                    q.offset(&u, radius + gap)
                } else {
                    let mut p = self.uniform_in_cube(dim, half_side);
                    let axis = self.rng.random_range(0..dim);
                    let sign = if self.uniform() < 0.5 { -1.0 } else { 1.0 };
                    p.0[axis] = sign * (half_side - gap);
                    p
                }
            }
        }
    }

    /// An interior point of the domain.
    pub fn point(&mut self) -> Point {
        for _ in 0..MAX_REDRAWS {
            let p = self.candidate();
            if self.domain.contains(&p) {
                return p;
            }
        }
        panic!(
            "{}",
            Error::Internal(format!("point redraw bound exceeded on {}", self.domain))
        );
    }

    /// A point near `x`: offset by a log-uniform multiple of `d_G(x)`.
    pub fn nearby(&mut self, x: &Point) -> Option<Point> {
        let d = self.domain.raw_distance(x);
        let dec = self.decades;
        for _ in 0..64 {
            let r = d * self.log_uniform(-dec, 1.0);
            let u = self.direction(x.dim());
            let y = x.offset(&u, r);
            if self.domain.contains(&y) {
                return Some(y);
            }
        }
        None
    }

    /// An interior pair, either independent or locally clustered, never
    /// closer than the coincidence tolerance.
    pub fn pair(&mut self) -> (Point, Point) {
        for _ in 0..MAX_REDRAWS {
            let x = self.point();
            let y = if self.uniform() < 0.5 {
                self.point()
            } else {
                match self.nearby(&x) {
                    Some(y) => y,
                    None => continue,
                }
            };
            let scale = self.domain.raw_distance(&x).max(self.domain.raw_distance(&y));
            if x.dist(&y) > PAIR_COINCIDENCE_TOL * scale {
                return (x, y);
            }
        }
        panic!(
            "{}",
            Error::Internal(format!("pair redraw bound exceeded on {}", self.domain))
        );
    }
}
