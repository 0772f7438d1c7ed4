//! Declarative inequality records `lower * rhs <= p^alpha <= upper * rhs`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::DomainShape;
use crate::metrics::MetricId;

/// Closed-form constants as functions of `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Const {
    One,
    Two,
    Half,
    InvSqrt2,
    /// `2 / sqrt(a)`
    TwoOverSqrtA,
    /// `sqrt(a) / 2`
    SqrtAOver2,
    /// `sqrt(2 / a)`
    SqrtTwoOverA,
    /// `sqrt((a + 4) / a)`
    SqrtAPlus4OverA,
    /// `4 / sqrt(a (4 - a))`
    FourOverSqrtA4MinusA,
    /// `min{1, 2 / sqrt(a)}`
    MinOneTwoOverSqrtA,
    /// `max{1, 2 / sqrt(a)}`
    MaxOneTwoOverSqrtA,
    /// `min{1, sqrt(a) / 2}`
    MinOneSqrtAOver2,
    /// `min{1, 1 / sqrt(a)}`
    MinOneInvSqrtA,
    /// `max{1, 4 / sqrt(a + 4)}`
    MaxOneFourOverSqrtAPlus4,
    /// `max{1 / sqrt 2, sqrt(a) / 2}`
    MaxInvSqrt2SqrtAOver2,
    /// `(1 / sqrt 2) min{1, 2 / sqrt(a)}`
    InvSqrt2MinOneTwoOverSqrtA,
    /// `sqrt(beta / a)`
    SqrtBetaOverA(f64),
}

impl Const {
    pub fn eval(&self, a: f64) -> f64 {
        let sa = a.sqrt();
        match *self {
            Const::One => 1.0,
            Const::Two => 2.0,
            Const::Half => 0.5,
            Const::InvSqrt2 => std::f64::consts::FRAC_1_SQRT_2,
            Const::TwoOverSqrtA => 2.0 / sa,
            Const::SqrtAOver2 => sa / 2.0,
            Const::SqrtTwoOverA => (2.0 / a).sqrt(),
            Const::SqrtAPlus4OverA => ((a + 4.0) / a).sqrt(),
            Const::FourOverSqrtA4MinusA => 4.0 / (a * (4.0 - a)).sqrt(),
            Const::MinOneTwoOverSqrtA => (2.0 / sa).min(1.0),
            Const::MaxOneTwoOverSqrtA => (2.0 / sa).max(1.0),
            Const::MinOneSqrtAOver2 => (sa / 2.0).min(1.0),
            Const::MinOneInvSqrtA => (1.0 / sa).min(1.0),
            Const::MaxOneFourOverSqrtAPlus4 => (4.0 / (a + 4.0).sqrt()).max(1.0),
            Const::MaxInvSqrt2SqrtAOver2 => (sa / 2.0).max(std::f64::consts::FRAC_1_SQRT_2),
            Const::InvSqrt2MinOneTwoOverSqrtA => std::f64::consts::FRAC_1_SQRT_2 * (2.0 / sa).min(1.0),
            Const::SqrtBetaOverA(beta) => (beta / a).sqrt(),
        }
    }

    pub fn formula(&self) -> String {
        match *self {
            Const::One => "1".into(),
            Const::Two => "2".into(),
            Const::Half => "1/2".into(),
            Const::InvSqrt2 => "1/sqrt(2)".into(),
            Const::TwoOverSqrtA => "2/sqrt(a)".into(),
            Const::SqrtAOver2 => "sqrt(a)/2".into(),
            Const::SqrtTwoOverA => "sqrt(2/a)".into(),
            Const::SqrtAPlus4OverA => "sqrt((a+4)/a)".into(),
            Const::FourOverSqrtA4MinusA => "4/sqrt(a(4-a))".into(),
            Const::MinOneTwoOverSqrtA => "min{1, 2/sqrt(a)}".into(),
            Const::MaxOneTwoOverSqrtA => "max{1, 2/sqrt(a)}".into(),
            Const::MinOneSqrtAOver2 => "min{1, sqrt(a)/2}".into(),
            Const::MinOneInvSqrtA => "min{1, 1/sqrt(a)}".into(),
            Const::MaxOneFourOverSqrtAPlus4 => "max{1, 4/sqrt(a+4)}".into(),
            Const::MaxInvSqrt2SqrtAOver2 => "max{1/sqrt(2), sqrt(a)/2}".into(),
            Const::InvSqrt2MinOneTwoOverSqrtA => "min{1, 2/sqrt(a)}/sqrt(2)".into(),
            Const::SqrtBetaOverA(b) => format!("sqrt({b}/a)"),
        }
    }
}

/// Upper end of a branch of a piecewise constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Until {
    /// `alpha < a`
    Below(f64),
    /// `alpha <= a`
    UpTo(f64),
    Rest,
}

impl Until {
    fn covers(&self, alpha: f64) -> bool {
        match *self {
            Until::Below(a) => alpha < a,
            Until::UpTo(a) => alpha <= a,
            Until::Rest => true,
        }
    }
}

/// A constant defined branch by branch, with breakpoints in `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise(pub Vec<(Until, Const)>);

impl Piecewise {
    pub fn single(c: Const) -> Self {
        Piecewise(vec![(Until::Rest, c)])
    }

    pub fn branch(&self, alpha: f64) -> &Const {
        self.0
            .iter()
            .find(|(u, _)| u.covers(alpha))
            .map(|(_, c)| c)
            .unwrap_or(&self.0.last().expect("nonempty piecewise").1)
    }

    pub fn eval(&self, alpha: f64) -> f64 {
        self.branch(alpha).eval(alpha)
    }

    pub fn formula(&self) -> String {
        if self.0.len() == 1 {
            return self.0[0].1.formula();
        }
        self.0
            .iter()
            .map(|(u, c)| match u {
                Until::Below(a) => format!("{} if a < {a}", c.formula()),
                Until::UpTo(a) => format!("{} if a <= {a}", c.formula()),
                Until::Rest => format!("{} otherwise", c.formula()),
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl Serialize for Piecewise {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.formula())
    }
}

/// Which domains a record is stated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Applicability {
    Any,
    ConvexOnly,
    HalfSpace,
    UnitBall,
    /// `R^n` minus a single point.
    SinglePuncture,
}

impl Applicability {
    pub fn admits(&self, d: &DomainShape) -> bool {
        match self {
            Applicability::Any => true,
            Applicability::ConvexOnly => d.is_convex(),
            Applicability::HalfSpace => matches!(d, DomainShape::HalfSpace { .. }),
            Applicability::UnitBall => matches!(d, DomainShape::UnitBall { .. }),
            Applicability::SinglePuncture => {
                matches!(d, DomainShape::PuncturedSpace { punctures, .. } if punctures.len() == 1)
            }
        }
    }
}

/// One inequality `lower(a) * rhs <= p^a <= upper(a) * rhs`.
///
/// `lower`/`upper` are the constants exactly as stated. Where a stated
/// constant fails as a bound, `corrected_lower`/`corrected_upper` hold what
/// the supporting argument yields once its flipped step is fixed; checks use
/// the corrected constant and report the stated one alongside.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRecord {
    pub id: String,
    pub rhs: MetricId,
    pub lower: Piecewise,
    pub upper: Piecewise,
    pub corrected_lower: Option<Piecewise>,
    pub corrected_upper: Option<Piecewise>,
    pub applies_to: Applicability,
    /// Open interval of admissible `alpha`.
    pub alpha_range: (f64, f64),
    pub sharp_lower: bool,
    pub sharp_upper: bool,
    pub citation: String,
    pub note: Option<String>,
}

impl BoundRecord {
    pub fn lower_const(&self, alpha: f64) -> f64 {
        self.lower.eval(alpha)
    }

    pub fn upper_const(&self, alpha: f64) -> f64 {
        self.upper.eval(alpha)
    }

    /// The constant used for pass/fail.
    pub fn effective_lower(&self, alpha: f64) -> f64 {
        self.corrected_lower.as_ref().unwrap_or(&self.lower).eval(alpha)
    }

    pub fn effective_upper(&self, alpha: f64) -> f64 {
        self.corrected_upper.as_ref().unwrap_or(&self.upper).eval(alpha)
    }

    pub fn has_correction(&self) -> bool {
        self.corrected_lower.is_some() || self.corrected_upper.is_some()
    }

    pub fn in_alpha_range(&self, alpha: f64) -> bool {
        alpha > self.alpha_range.0 && alpha < self.alpha_range.1
    }

    /// Errors unless the record is stated for `d` and `alpha`.
    pub fn check_applicable(&self, d: &DomainShape, alpha: f64) -> Result<()> {
        if !self.applies_to.admits(d) {
            return Err(Error::Inapplicable {
                bound: self.id.clone(),
                reason: format!("stated for {:?} domains, not {d}", self.applies_to),
            });
        }
        if !(alpha.is_finite() && self.in_alpha_range(alpha)) {
            return Err(Error::Inapplicable {
                bound: self.id.clone(),
                reason: format!(
                    "alpha = {alpha} outside ({}, {})",
                    self.alpha_range.0, self.alpha_range.1
                ),
            });
        }
        Ok(())
    }

    /// Whether the id selects this record: exact, or the family prefix
    /// (`lem4.1` selects every `lem4.1[beta=..]`).
    pub fn matches(&self, selector: &str) -> bool {
        self.id == selector || self.id.strip_prefix(selector).is_some_and(|rest| rest.starts_with('['))
    }
}

impl fmt::Display for BoundRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: [{}] * {} <= p^a <= [{}] * {}",
            self.id,
            self.lower.formula(),
            self.rhs,
            self.upper.formula(),
            self.rhs
        )
    }
}

/// Values of `beta` for which the monotonicity record is instantiated.
pub const MONOTONICITY_BETAS: [f64; 2] = [4.0, 16.0];

pub fn monotonicity_record(beta: f64) -> BoundRecord {
    BoundRecord {
        id: format!("lem4.1[beta={beta}]"),
        rhs: MetricId::Gpp(beta),
        lower: Piecewise::single(Const::One),
        upper: Piecewise::single(Const::SqrtBetaOverA(beta)),
        corrected_lower: None,
        corrected_upper: None,
        applies_to: Applicability::Any,
        alpha_range: (0.0, beta),
        sharp_lower: true,
        sharp_upper: true,
        citation: "Lemma 4.1".into(),
        note: None,
    }
}

/// Every inequality between `p^alpha` and the comparison metrics.
pub fn catalog() -> Vec<BoundRecord> {
    use Const::*;
    use Until::*;
    let inf = f64::INFINITY;
    let mut out = vec![
        BoundRecord {
            id: "thm3.1".into(),
            rhs: MetricId::JStar,
            lower: Piecewise::single(MinOneTwoOverSqrtA),
            upper: Piecewise::single(SqrtAPlus4OverA),
            corrected_lower: None,
            corrected_upper: None,
            applies_to: Applicability::Any,
            alpha_range: (0.0, inf),
            sharp_lower: true,
            sharp_upper: true,
            citation: "Theorem 3.1; upper constant attained under Lemma 3.2".into(),
            note: None,
        },
        BoundRecord {
            id: "lem3.3".into(),
            rhs: MetricId::JStar,
            lower: Piecewise(vec![(UpTo(4.0), TwoOverSqrtA), (Rest, One)]),
            upper: Piecewise(vec![(UpTo(4.0), SqrtAPlus4OverA), (Rest, MaxOneFourOverSqrtAPlus4)]),
            corrected_lower: Some(Piecewise::single(MinOneTwoOverSqrtA)),
            corrected_upper: None,
            applies_to: Applicability::SinglePuncture,
            alpha_range: (0.0, inf),
            sharp_lower: true,
            sharp_upper: true,
            citation: "Lemma 3.3".into(),
            note: Some(
                "stated lower constants are exchanged between the two alpha ranges; the argument \
                 takes them from the general j* comparison, i.e. min{1, 2/sqrt(a)}"
                    .into(),
            ),
        },
        BoundRecord {
            id: "lem4.2".into(),
            rhs: MetricId::TriangularRatioS,
            lower: Piecewise(vec![(UpTo(4.0), Half), (Rest, InvSqrt2)]),
            upper: Piecewise::single(SqrtAPlus4OverA),
            corrected_lower: Some(Piecewise::single(InvSqrt2MinOneTwoOverSqrtA)),
            corrected_upper: None,
            applies_to: Applicability::Any,
            alpha_range: (0.0, inf),
            sharp_lower: false,
            sharp_upper: false,
            citation: "Lemma 4.2".into(),
            note: Some(
                "the comparison with p uses min{1, sqrt(a)/2} where the monotonicity lemma gives \
                 min{1, 2/sqrt(a)}; with that fixed the argument yields min{1, 2/sqrt(a)}/sqrt(2)"
                    .into(),
            ),
        },
        BoundRecord {
            id: "lem4.2-convex".into(),
            rhs: MetricId::TriangularRatioS,
            lower: Piecewise(vec![(UpTo(4.0), MaxInvSqrt2SqrtAOver2), (Rest, One)]),
            upper: Piecewise::single(SqrtAPlus4OverA),
            corrected_lower: Some(Piecewise::single(MinOneTwoOverSqrtA)),
            corrected_upper: None,
            applies_to: Applicability::ConvexOnly,
            alpha_range: (0.0, inf),
            sharp_lower: false,
            sharp_upper: false,
            citation: "Lemma 4.2, convex domains".into(),
            note: Some("same flipped comparison with p; the corrected argument yields min{1, 2/sqrt(a)}".into()),
        },
        BoundRecord {
            id: "lem4.3".into(),
            rhs: MetricId::TMetric,
            lower: Piecewise(vec![(Below(2.0), One), (Rest, MinOneTwoOverSqrtA)]),
            upper: Piecewise(vec![(Below(2.0), FourOverSqrtA4MinusA), (Rest, Two)]),
            corrected_lower: None,
            corrected_upper: None,
            applies_to: Applicability::Any,
            alpha_range: (0.0, inf),
            sharp_lower: true,
            sharp_upper: true,
            citation: "Lemma 4.3".into(),
            note: None,
        },
        BoundRecord {
            id: "cor5.1".into(),
            rhs: MetricId::ThHalfRho,
            lower: Piecewise::single(MinOneSqrtAOver2),
            upper: Piecewise::single(MaxOneTwoOverSqrtA),
            corrected_lower: Some(Piecewise::single(MinOneTwoOverSqrtA)),
            corrected_upper: None,
            applies_to: Applicability::HalfSpace,
            alpha_range: (0.0, inf),
            sharp_lower: true,
            sharp_upper: true,
            citation: "Corollary 5.1".into(),
            note: Some("th(rho/2) = p, so the monotonicity lemma gives min{1, 2/sqrt(a)} as the lower constant".into()),
        },
        BoundRecord {
            id: "thm5.2".into(),
            rhs: MetricId::ThHalfRho,
            lower: Piecewise::single(MinOneInvSqrtA),
            upper: Piecewise::single(MaxOneTwoOverSqrtA),
            corrected_lower: None,
            corrected_upper: None,
            applies_to: Applicability::UnitBall,
            alpha_range: (0.0, inf),
            sharp_lower: true,
            sharp_upper: true,
            citation: "Theorem 5.2".into(),
            note: None,
        },
    ];
    for beta in MONOTONICITY_BETAS {
        out.insert(2, monotonicity_record(beta));
    }
    out.sort_by_key(|r| order_key(&r.id));
    out
}

fn order_key(id: &str) -> (u32, String) {
    let rank = ["thm3.1", "lem3.3", "lem4.1", "lem4.2", "lem4.3", "cor5.1", "thm5.2"]
        .iter()
        .position(|p| id.starts_with(p))
        .unwrap_or(99) as u32;
    (rank, id.to_string())
}

/// Records selected by `selector` (`all`, an id, or a family prefix).
pub fn select(selector: &str) -> Result<Vec<BoundRecord>> {
    let all = catalog();
    if selector == "all" {
        return Ok(all);
    }
    let picked: Vec<_> = all.into_iter().filter(|r| r.matches(selector)).collect();
    if picked.is_empty() {
        return Err(Error::param("bound", format!("unknown bound id `{selector}`")));
    }
    Ok(picked)
}

pub fn find(id: &str) -> Option<BoundRecord> {
    catalog().into_iter().find(|r| r.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRID: [f64; 9] = [0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 9.0, 16.0];

    #[test]
    fn catalog_examples() {
        let t = find("thm3.1").unwrap();
        assert_eq!(t.lower_const(4.0), 1.0);
        assert_eq!(t.upper_const(4.0), 2f64.sqrt());
        let l = find("lem4.3").unwrap();
        assert_eq!(l.lower_const(2.0), 1.0);
        assert_eq!(l.upper_const(2.0), 2.0);
        let b = find("thm5.2").unwrap();
        assert_eq!(b.lower_const(1.0), 1.0);
        assert_eq!(b.upper_const(1.0), 2.0);
    }

    #[test]
    fn lower_never_exceeds_upper() {
        for r in catalog() {
            for a in GRID.into_iter().filter(|&a| r.in_alpha_range(a)) {
                let (lo, hi) = (r.effective_lower(a), r.effective_upper(a));
                assert!(0.0 < lo && lo <= hi, "{} at {a}: {lo} > {hi}", r.id);
                assert!(r.lower_const(a) <= r.upper_const(a), "{} stated at {a}", r.id);
            }
        }
    }

    #[test]
    fn applicability_predicates() {
        let convex = find("lem4.2-convex").unwrap();
        let pr = DomainShape::punctured_at_origin(2).unwrap();
        assert!(matches!(
            convex.check_applicable(&pr, 1.0),
            Err(Error::Inapplicable { .. })
        ));
        assert!(convex
            .check_applicable(&DomainShape::strip(2, 1.0).unwrap(), 1.0)
            .is_ok());
        let two = DomainShape::punctured(2, vec![crate::Point::xy(0.0, 0.0), crate::Point::xy(1.0, 0.0)]).unwrap();
        assert!(find("lem3.3").unwrap().check_applicable(&two, 1.0).is_err());
        let mono = monotonicity_record(4.0);
        assert!(mono.check_applicable(&pr, 4.0).is_err());
        assert!(mono.check_applicable(&pr, 1.0).is_ok());
    }

    #[test]
    fn selection() {
        assert_eq!(select("lem4.1").unwrap().len(), MONOTONICITY_BETAS.len());
        assert_eq!(select("lem4.2").unwrap().len(), 1);
        assert_eq!(select("all").unwrap().len(), catalog().len());
        assert!(select("thm9.9").is_err());
    }

    #[test]
    fn stated_constants_as_printed() {
        let l33 = find("lem3.3").unwrap();
        assert_eq!(l33.lower_const(1.0), 2.0);
        assert_eq!(l33.lower_const(9.0), 1.0);
        assert_eq!(l33.effective_lower(1.0), 1.0);
        assert_eq!(l33.effective_lower(9.0), 2.0 / 3.0);
        assert!((l33.upper_const(9.0) - 4.0 / 13f64.sqrt()).abs() < 1e-15);
        let c51 = find("cor5.1").unwrap();
        assert_eq!(c51.lower_const(16.0), 1.0);
        assert_eq!(c51.effective_lower(16.0), 0.5);
    }
}
