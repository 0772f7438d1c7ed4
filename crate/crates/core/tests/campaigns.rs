use pointpair_core::bounds::{catalog, check_pair, find, select, verify_bound, DEFAULT_TOL};
use pointpair_core::geometry::{DomainShape, PairSampler};

#[test]
fn campaign_is_reproducible() {
    let b = find("thm3.1").unwrap();
    let d = DomainShape::unit_ball(2).unwrap();
    let s = PairSampler::new(d.clone(), 11, 10_000);
    let r1 = verify_bound(&b, &d, 2.0, &s, DEFAULT_TOL).unwrap();
    let r2 = verify_bound(&b, &d, 2.0, &s, DEFAULT_TOL).unwrap();
    assert_eq!(r1, r2);
    assert_eq!(r1.samples, 10_000);
    assert!(r1.pass);

    let other = verify_bound(&b, &d, 2.0, &PairSampler::new(d.clone(), 12, 10_000), DEFAULT_TOL).unwrap();
    assert_ne!(r1.max_quotient, other.max_quotient);
}

#[test]
fn worst_witness_reproduces_margin() {
    let b = find("thm3.1").unwrap();
    let d = DomainShape::strip(2, 1.0).unwrap();
    let r = verify_bound(&b, &d, 0.5, &PairSampler::new(d.clone(), 3, 5000), DEFAULT_TOL).unwrap();
    let w = r.worst_upper.as_ref().unwrap();
    let m = check_pair(&b, &d, 0.5, &w.x, &w.y).unwrap();
    assert_eq!(m.upper, w.value);
}

#[test]
fn every_record_applies_somewhere() {
    let domains = [
        DomainShape::half_space(2).unwrap(),
        DomainShape::unit_ball(2).unwrap(),
        DomainShape::punctured_at_origin(2).unwrap(),
        DomainShape::strip(2, 1.0).unwrap(),
        DomainShape::ball_complement_in_box(2, 2.0, 0.5).unwrap(),
    ];
    for b in catalog() {
        let a = if b.alpha_range.1.is_finite() {
            b.alpha_range.1 / 2.0
        } else {
            4.0
        };
        assert!(
            domains.iter().any(|d| b.check_applicable(d, a).is_ok()),
            "{} applies nowhere",
            b.id
        );
        assert!(!b.citation.is_empty());
    }
}

#[test]
fn selection() {
    assert_eq!(select("all").unwrap().len(), catalog().len());
    assert_eq!(select("lem4.1").unwrap().len(), 2);
    assert_eq!(select("lem4.2").unwrap().len(), 1);
    assert!(select("nope").is_err());
}

#[test]
fn inapplicable_combination_is_an_error() {
    let b = find("lem3.3").unwrap();
    let h = DomainShape::half_space(2).unwrap();
    assert!(verify_bound(&b, &h, 1.0, &PairSampler::new(h.clone(), 0, 10), DEFAULT_TOL).is_err());
}
