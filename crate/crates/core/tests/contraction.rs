use flatcor::contraction::*;
use flatcor::spans::*;
use flatcor::{Field, GbConfig, Poly, RingRef};

const QQ: Field = Field::Rationals;

fn cfg() -> GbConfig {
    GbConfig::default()
}

fn p(r: &RingRef, s: &str) -> Poly {
    Poly::parse(r, s).unwrap()
}

fn gm() -> AffineScheme {
    AffineScheme::gm(QQ, "t").unwrap()
}

fn point_of_gm(c: i64) -> Correspondence {
    let pt = AffineScheme::point(QQ);
    let r = pt.ring().clone();
    let inv = Poly::constant(&r, QQ.inv(&QQ.from_i64(c)).unwrap());
    Correspondence::from_morphism(&pt, &gm(), vec![Poly::from_i64(&r, c), inv], &cfg()).unwrap().certified(&cfg()).unwrap()
}

fn sqrt_two() -> Correspondence {
    let pt = AffineScheme::point(QQ);
    let r = ring_of(QQ, &["z"], &[]).unwrap();
    Correspondence::new(pt.clone(), gm(), &r, vec![p(&r, "z^2 - 2")], vec![p(&r, "z"), p(&r, "1/2*z")], &cfg())
        .unwrap()
        .certified(&cfg())
        .unwrap()
}

fn square_root_over_gm() -> Correspondence {
    let y = AffineScheme::gm(QQ, "y").unwrap();
    let r = ring_of(QQ, &["y", "z"], &["y"]).unwrap();
    Correspondence::new(y, gm(), &r, vec![p(&r, "z^2 - y")], vec![p(&r, "z"), p(&r, "z*y_inv")], &cfg())
        .unwrap()
        .certified(&cfg())
        .unwrap()
}

#[test]
fn standard_data() {
    let d = standard_contraction_data(1, QQ).unwrap();
    assert_eq!(d.w.to_string(), "t*u - u + 1");
    let d2 = standard_contraction_data(2, QQ).unwrap();
    assert_eq!(d2.w, p(&d2.ring, "(u*t1 + 1 - u)*(u*t2 + 1 - u)"));
    for n in 1..=4 {
        let d = standard_contraction_data(n, QQ).unwrap();
        assert!(d.check_invariants().unwrap().iter().all(|(_, ok)| *ok));
    }
    assert!(matches!(standard_contraction_data(0, QQ), Err(ContractionError::BadDimension)));
}

#[test]
fn identity_contracts_to_the_base_point() {
    let d = standard_contraction_data(1, QQ).unwrap();
    let id = Correspondence::identity(&gm()).certified(&cfg()).unwrap();
    let c = contract(&id, &d, &cfg()).unwrap();
    assert_eq!(c.v_double_prime.len(), 1);
    assert_eq!(c.v_double_prime[0].to_string(), "t*u - u + 1");
    let first = &c.pieces[0].span;
    assert_eq!(first.target_map()[0].to_string(), "t*u - u + 1");
    let r = verify_contraction_endpoints(&id, &d, &c, &cfg()).unwrap();
    assert_eq!((r.identity_at, r.constant_at), (Some(1), Some(0)));
    assert!(r.dichotomy);
}

#[test]
fn rational_point_two() {
    let d = standard_contraction_data(1, QQ).unwrap();
    let a = point_of_gm(2);
    let c = contract(&a, &d, &cfg()).unwrap();
    assert_eq!(c.v_double_prime.len(), 1);
    assert_eq!(c.v_double_prime[0].to_string(), "u + 1");
    assert!(c.avoids_zero && c.avoids_one);
    let r = verify_contraction_endpoints(&a, &d, &c, &cfg()).unwrap();
    assert!(r.dichotomy);
}

#[test]
fn square_root_of_two() {
    let d = standard_contraction_data(1, QQ).unwrap();
    let a = sqrt_two();
    let c = contract(&a, &d, &cfg()).unwrap();
    // resultant of u z + 1 - u and z^2 - 2 in z: 2 u^2 - (1 - u)^2 = u^2 + 2u - 1
    assert_eq!(c.v_double_prime[0].to_string(), "u^2 + 2*u - 1");
    for piece in &c.pieces {
        assert_eq!(degree(&piece.span).unwrap(), 2, "{}", piece.span.certification().unwrap().summary());
    }
    let r = verify_contraction_endpoints(&a, &d, &c, &cfg()).unwrap();
    assert!(r.dichotomy);
    assert_eq!(r.constant_at, Some(0));
}

#[test]
fn rank_two_span_over_gm() {
    let d = standard_contraction_data(1, QQ).unwrap();
    let a = square_root_over_gm();
    let c = contract(&a, &d, &cfg()).unwrap();
    for piece in &c.pieces {
        assert_eq!(degree(&piece.span).unwrap(), 2, "{}", piece.span.certification().unwrap().summary());
    }
    let r = verify_contraction_endpoints(&a, &d, &c, &cfg()).unwrap();
    assert!(r.dichotomy, "{r:?}");
}

#[test]
fn wrong_target_shape() {
    let d = standard_contraction_data(2, QQ).unwrap();
    assert!(matches!(contract(&point_of_gm(3), &d, &cfg()), Err(ContractionError::TargetShape(2))));
}
