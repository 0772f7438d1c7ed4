//! Extremal and limiting point pairs.

use crate::error::{Error, Result};
use crate::geometry::{DomainShape, Point};

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::param("alpha", format!("must be positive, got {alpha}")));
    }
    Ok(())
}

/// `x = (0, ..., 0, 1)`, `y = (alpha/2, 0, ..., 0, 1)`; attains
/// `p^alpha / j* = sqrt((alpha + 4) / alpha)` in the half-space.
pub fn extremal_halfspace_pair(alpha: f64, dim: usize) -> Result<(Point, Point)> {
    check_alpha(alpha)?;
    let x = Point::unit(dim, dim - 1);
    let mut y = x.clone().into_coords();
    y[0] = alpha / 2.0;
    Ok((x, Point::new(y)?))
}

/// Pair on a diameter `[u, v]` of a ball centred at `l`:
/// `x = l + alpha (u - l) / (alpha + 4)`, `y = l + alpha (v - l) / (alpha + 4)`.
pub fn extremal_diameter_pair(alpha: f64, l: &Point, u: &Point, v: &Point) -> Result<(Point, Point)> {
    check_alpha(alpha)?;
    l.check_dim(u.dim())?;
    l.check_dim(v.dim())?;
    let s = alpha / (alpha + 4.0);
    Ok((l.add(&u.sub(l).scale(s)), l.add(&v.sub(l).scale(s))))
}

/// The diameter pair across the strip, centred at `(r, 0, ..., 0)`.
pub fn extremal_strip_pair(alpha: f64, strip: &DomainShape) -> Result<(Point, Point)> {
    let DomainShape::Strip { dim, half_width: r } = *strip else {
        return Err(Error::Unsupported {
            op: "extremal_strip_pair",
            domain: strip.name().into(),
        });
    };
    let l = Point::unit(dim, 0).scale(r);
    let u = Point::origin(dim);
    let v = Point::unit(dim, 0).scale(2.0 * r);
    extremal_diameter_pair(alpha, &l, &u, &v)
}

/// The diameter pair of the unit ball along the first axis.
pub fn extremal_ball_pair(alpha: f64, dim: usize) -> Result<(Point, Point)> {
    let e1 = Point::unit(dim, 0);
    extremal_diameter_pair(alpha, &Point::origin(dim), &e1.scale(-1.0), &e1)
}

/// Pair inside a half-ball centred at the boundary point `q`, with `h` the
/// inward point of its sphere and `k` a sphere point on the boundary:
/// `x, y = q + (h - q) / (alpha + 4) +- alpha (k - q) / (4 (alpha + 4))`.
pub fn extremal_halfball_pair_at(alpha: f64, q: &Point, h: &Point, k: &Point) -> Result<(Point, Point)> {
    check_alpha(alpha)?;
    q.check_dim(h.dim())?;
    q.check_dim(k.dim())?;
    let base = q.add(&h.sub(q).scale(1.0 / (alpha + 4.0)));
    let side = k.sub(q).scale(alpha / (4.0 * (alpha + 4.0)));
    Ok((base.add(&side), base.sub(&side)))
}

/// The half-ball pair of the box domain. The half-ball of radius `r` sits on
/// the face `x_1 = L`, opposite the removed ball, so that its flat side is
/// the only nearby boundary.
pub fn extremal_halfball_pair(alpha: f64, d: &DomainShape) -> Result<(Point, Point)> {
    let DomainShape::BallComplementInBox { dim, half_side, radius } = *d else {
        return Err(Error::Unsupported {
            op: "extremal_halfball_pair",
            domain: d.name().into(),
        });
    };
    let e1 = Point::unit(dim, 0);
    let q = e1.scale(half_side);
    let h = q.offset(&e1, -radius);
    let k = q.offset(&Point::unit(dim, 1), radius);
    extremal_halfball_pair_at(alpha, &q, &h, &k)
}

/// `x = y + k/(1+k) (z - y)` with `z` the nearest boundary point of `y`.
/// `k -> 0` merges the points; `k -> inf` pushes `x` onto the boundary.
pub fn limit_pair_from(d: &DomainShape, y: &Point, k: f64) -> Result<(Point, Point)> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::param("k", format!("must be positive, got {k}")));
    }
    let z = d.nearest_boundary_point(y)?;
    let x = y.add(&z.sub(y).scale(k / (1.0 + k)));
    if !d.contains(&x) {
        return Err(Error::NotInterior {
            domain: d.name().into(),
            point: x,
        });
    }
    Ok((x, y.clone()))
}

/// A canonical interior point with a unique nearest boundary point.
pub fn anchor_point(d: &DomainShape) -> Point {
    let n = d.dim();
    match d {
        DomainShape::HalfSpace { .. } => Point::unit(n, n - 1),
        DomainShape::UnitBall { .. } => Point::origin(n),
        DomainShape::PuncturedSpace { punctures, .. } => punctures[0].add(&Point::unit(n, 0)),
        DomainShape::Strip { half_width, .. } => Point::unit(n, 0).scale(*half_width),
        DomainShape::BallComplementInBox { half_side, .. } => Point::unit(n, 0).scale(half_side / 2.0),
    }
}

/// The inward-normal pair at the domain's anchor point.
pub fn extremal_limit_pair(d: &DomainShape, k: f64) -> Result<(Point, Point)> {
    limit_pair_from(d, &anchor_point(d), k)
}

/// The `k` regime whose limit gives the lower constant `min{1, 2/sqrt(a)}`
/// of `p^alpha / j*`: the merging limit gives `2/sqrt(alpha)`, the boundary
/// limit gives `1`.
pub fn lower_limit_k(alpha: f64) -> f64 {
    if alpha < 4.0 {
        1e6
    } else {
        1e-6
    }
}

/// `y = x + alpha (z - x) / 2` with `z` the nearest boundary point of `x`;
/// attains `p^alpha / t = 4 / sqrt(alpha (4 - alpha))`. Needs `alpha < 2`.
pub fn t_ratio_witness(d: &DomainShape, alpha: f64, x: &Point) -> Result<(Point, Point)> {
    check_alpha(alpha)?;
    if alpha >= 2.0 {
        return Err(Error::param("alpha", format!("witness needs alpha < 2, got {alpha}")));
    }
    let z = d.nearest_boundary_point(x)?;
    let y = x.add(&z.sub(x).scale(alpha / 2.0));
    Ok((x.clone(), y))
}

/// Upper-constant pair for `p^alpha / j*` around a single puncture `c`.
///
/// For `alpha <= 4`, `|x - c| = |y - c| = 1` with `|x - y| = alpha/2`, giving
/// `sqrt((alpha + 4) / alpha)`. For `4 < alpha <= 12` the antipodal pair
/// gives `4 / sqrt(alpha + 4)`. Beyond, a far pair approaches `1`.
pub fn punctured_upper_witness(d: &DomainShape, alpha: f64) -> Result<(Point, Point)> {
    check_alpha(alpha)?;
    let DomainShape::PuncturedSpace { dim, punctures } = d else {
        return Err(Error::Unsupported {
            op: "punctured_upper_witness",
            domain: d.name().into(),
        });
    };
    let c = &punctures[0];
    let (e1, e2) = (Point::unit(*dim, 0), Point::unit(*dim, 1));
    let x = c.add(&e1);
    let y = if alpha <= 4.0 {
        let cos = 1.0 - alpha * alpha / 8.0;
        let sin = (1.0 - cos * cos).max(0.0).sqrt();
        c.add(&e1.scale(cos)).add(&e2.scale(sin))
    } else if alpha <= 12.0 {
        c.sub(&e1)
    } else {
        c.add(&e1.scale(1e8))
    };
    Ok((x, y))
}

/// Two points at distance `eps` from the boundary and far apart relative
/// to `eps`. In punctured space the second point is sent off to distance
/// `1/eps` instead.
pub fn far_pair(d: &DomainShape, eps: f64) -> Result<(Point, Point)> {
    if !(eps > 0.0 && eps < 0.25) {
        return Err(Error::param("eps", format!("must lie in (0, 1/4), got {eps}")));
    }
    let n = d.dim();
    let (e1, e2, en) = (Point::unit(n, 0), Point::unit(n, 1), Point::unit(n, n - 1));
    Ok(match d {
        DomainShape::HalfSpace { .. } => (en.scale(eps), en.scale(eps).add(&e1)),
        DomainShape::UnitBall { .. } => (e1.scale(1.0 - eps), e1.scale(eps - 1.0)),
        DomainShape::Strip { half_width, .. } => {
            let w = half_width.min(1.0);
            (e1.scale(eps * w), e1.scale(eps * w).add(&e2))
        }
        DomainShape::PuncturedSpace { punctures, .. } => {
            let c = &punctures[0];
            (c.add(&e1.scale(eps)), c.add(&e1.scale(1.0 / eps)))
        }
        DomainShape::BallComplementInBox { half_side, .. } => {
            let l = *half_side;
            let x = e1.scale(l - eps * l);
            (x.clone(), x.add(&e2.scale(l / 2.0)))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{gpp, j_star, t_metric};

    fn quotient_pj(d: &DomainShape, alpha: f64, (x, y): &(Point, Point)) -> f64 {
        gpp(d, alpha, x, y).unwrap() / j_star(d, x, y).unwrap()
    }

    #[test]
    fn halfspace_pair_examples() {
        let h2 = DomainShape::half_space(2).unwrap();
        let p = extremal_halfspace_pair(4.0, 2).unwrap();
        assert_eq!(p.1, Point::xy(2.0, 1.0));
        assert!((quotient_pj(&h2, 4.0, &p) - 2f64.sqrt()).abs() < 1e-12);
        let p = extremal_halfspace_pair(1.0, 2).unwrap();
        assert!((quotient_pj(&h2, 1.0, &p) - 5f64.sqrt()).abs() < 1e-12);
        let h3 = DomainShape::half_space(3).unwrap();
        let p = extremal_halfspace_pair(9.0, 3).unwrap();
        assert_eq!(p.1.coords(), &[4.5, 0.0, 1.0]);
        assert!((quotient_pj(&h3, 9.0, &p) - (13.0f64 / 9.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn strip_pair_examples() {
        let s = DomainShape::strip(2, 1.0).unwrap();
        let (x, y) = extremal_strip_pair(1.0, &s).unwrap();
        assert!((x.dist(&Point::xy(0.8, 0.0))) < 1e-15 && y.dist(&Point::xy(1.2, 0.0)) < 1e-15);
        let (x, y) = extremal_strip_pair(4.0, &s).unwrap();
        assert_eq!((x, y), (Point::xy(0.5, 0.0), Point::xy(1.5, 0.0)));
        for a in [0.5, 1.0, 2.0, 4.0, 9.0, 16.0] {
            let p = extremal_strip_pair(a, &s).unwrap();
            let dx = s.dist_to_boundary(&p.0).unwrap();
            assert!((dx - 4.0 / (a + 4.0)).abs() < 1e-12);
            assert!((p.0.dist(&p.1) - a * dx / 2.0).abs() < 1e-12);
            assert!((quotient_pj(&s, a, &p) - ((a + 4.0) / a).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn halfball_pair_examples() {
        let d = DomainShape::ball_complement_in_box(2, 2.0, 1.0).unwrap();
        let (x, y) = extremal_halfball_pair(4.0, &d).unwrap();
        assert!((d.dist_to_boundary(&x).unwrap() - 0.125).abs() < 1e-12);
        assert!((d.dist_to_boundary(&y).unwrap() - 0.125).abs() < 1e-12);
        assert!((x.dist(&y) - 0.25).abs() < 1e-12);
        let (x, y) = extremal_halfball_pair(1.0, &d).unwrap();
        assert!((d.dist_to_boundary(&x).unwrap() - 0.2).abs() < 1e-12);
        assert!((x.dist(&y) - 0.1).abs() < 1e-12);
        for a in [0.5, 2.0, 9.0, 16.0] {
            let p = extremal_halfball_pair(a, &d).unwrap();
            assert!((quotient_pj(&d, a, &p) - ((a + 4.0) / a).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn limit_pair_examples() {
        let h = DomainShape::half_space(2).unwrap();
        assert!((quotient_pj(&h, 1.0, &extremal_limit_pair(&h, 1e-6).unwrap()) - 2.0).abs() < 1e-3);
        assert!((quotient_pj(&h, 9.0, &extremal_limit_pair(&h, 1e6).unwrap()) - 1.0).abs() < 1e-3);
        let b = DomainShape::unit_ball(2).unwrap();
        let p = extremal_limit_pair(&b, 1e-6).unwrap();
        assert!(p.0[0] > 0.0 && p.0[1] == 0.0);
        assert!((quotient_pj(&b, 1.0, &p) - 2.0).abs() < 1e-3);
        for a in [0.5, 1.0, 2.0, 4.0, 9.0, 16.0] {
            let q = quotient_pj(&h, a, &extremal_limit_pair(&h, lower_limit_k(a)).unwrap());
            assert!((q - (2.0 / a.sqrt()).min(1.0)).abs() < 1e-3, "{a}: {q}");
        }
    }

    #[test]
    fn t_ratio_witness_reaches_upper_constant() {
        let h = DomainShape::half_space(2).unwrap();
        for a in [0.5, 1.0, 1.5] {
            let (x, y) = t_ratio_witness(&h, a, &Point::xy(0.3, 1.7)).unwrap();
            let q = gpp(&h, a, &x, &y).unwrap() / t_metric(&h, &x, &y).unwrap();
            assert!((q - 4.0 / (a * (4.0 - a)).sqrt()).abs() < 1e-10);
        }
        assert!(t_ratio_witness(&h, 2.0, &Point::xy(0.0, 1.0)).is_err());
    }

    #[test]
    fn punctured_witness_constants() {
        let pr = DomainShape::punctured_at_origin(2).unwrap();
        for a in [1.0, 2.0, 4.0] {
            let q = quotient_pj(&pr, a, &punctured_upper_witness(&pr, a).unwrap());
            assert!((q - ((a + 4.0) / a).sqrt()).abs() < 1e-12, "{a}: {q}");
        }
        let q = quotient_pj(&pr, 9.0, &punctured_upper_witness(&pr, 9.0).unwrap());
        assert!((q - 4.0 / 13f64.sqrt()).abs() < 1e-12);
        let q = quotient_pj(&pr, 16.0, &punctured_upper_witness(&pr, 16.0).unwrap());
        assert!((q - 1.0).abs() < 1e-6);
    }

    #[test]
    fn far_pairs_are_interior() {
        for d in [
            DomainShape::half_space(3).unwrap(),
            DomainShape::unit_ball(2).unwrap(),
            DomainShape::strip(2, 1.0).unwrap(),
            DomainShape::punctured_at_origin(2).unwrap(),
            DomainShape::ball_complement_in_box(2, 2.0, 1.0).unwrap(),
        ] {
            let (x, y) = far_pair(&d, 1e-6).unwrap();
            assert!(d.contains(&x) && d.contains(&y), "{d}");
        }
    }
}
