use flatcor::groebner::PresentedAlgebra;
use flatcor::spans::*;
use flatcor::{Field, GbConfig, Poly, RingRef};

const QQ: Field = Field::Rationals;

fn cfg() -> GbConfig {
    GbConfig::default()
}

fn p(r: &RingRef, s: &str) -> Poly {
    Poly::parse(r, s).unwrap()
}

/// pt <- Spec k[a]/(f(a)) -> pt
fn point_algebra(var: &str, f: &str) -> Correspondence {
    let pt = AffineScheme::point(QQ);
    let r = ring_of(QQ, &[var], &[]).unwrap();
    Correspondence::new(pt.clone(), pt, &r, vec![p(&r, f)], vec![], &cfg()).unwrap().certified(&cfg()).unwrap()
}

fn gm_identity() -> Correspondence {
    Correspondence::identity(&AffineScheme::gm(QQ, "t").unwrap()).certified(&cfg()).unwrap()
}

#[test]
fn identity_is_neutral_for_composition() {
    let a = point_algebra("a", "a^2 - 2");
    let id = Correspondence::identity(a.source()).certified(&cfg()).unwrap();
    assert!(equals(&compose(&id, &a, &cfg()).unwrap(), &a, &cfg()).unwrap());
    assert!(equals(&compose(&a, &id, &cfg()).unwrap(), &a, &cfg()).unwrap());
    assert_eq!(degree(&id).unwrap(), 1);
}

#[test]
fn dual_numbers_compose_to_rank_four() {
    let a = point_algebra("a", "a^2");
    let c = compose(&a, &a, &cfg()).unwrap();
    let cert = c.certificate().unwrap();
    assert_eq!(cert.rank, 4);
    // staircase {1, a, a_2, a*a_2}, independently: the ideal (a^2, b^2) leaves
    // exactly the square-free monomials
    let mut labels = cert.basis_labels().to_vec();
    labels.sort();
    assert_eq!(labels, vec!["1", "a", "a*a_1", "a_1"]);
}

#[test]
fn degrees_multiply_under_composition() {
    // dimension of Q[a]/(f) is deg f for monic f
    let polys = ["a^2 + 1", "a^3 - a - 1", "a", "a^4 + a^2 + 7", "a^2 - 3*a + 2"];
    for (i, f) in polys.iter().enumerate() {
        let g = polys[(i + 2) % polys.len()];
        let (df, dg) = (degree_of(f), degree_of(g));
        let c = compose(&point_algebra("a", f), &point_algebra("b", &g.replace('a', "b")), &cfg()).unwrap();
        assert_eq!(degree(&c).unwrap(), df * dg, "{f} then {g}");
    }
}

fn degree_of(f: &str) -> usize {
    let r = ring_of(QQ, &["a"], &[]).unwrap();
    p(&r, f).degree_in(0).unwrap() as usize
}

#[test]
fn sums_add_ranks_and_have_a_unit() {
    let a = point_algebra("a", "a^2 + 1");
    let pt = AffineScheme::point(QQ);
    let e = Correspondence::empty(&pt, &pt);
    assert!(equals(&add(&a, &e, &cfg()).unwrap(), &a, &cfg()).unwrap());
    let one = Correspondence::identity(&pt).certified(&cfg()).unwrap();
    assert_eq!(degree(&add(&one, &one, &cfg()).unwrap()).unwrap(), 2);
    assert_eq!(degree(&add(&a, &one, &cfg()).unwrap()).unwrap(), 3);
}

#[test]
fn sum_is_symmetric_up_to_the_canonical_swap() {
    let g = gm_identity();
    let x = AffineScheme::gm(QQ, "t").unwrap();
    let r = ring_of(QQ, &["t", "z"], &["t"]).unwrap();
    let sq = Correspondence::new(x.clone(), x, &r, vec![p(&r, "z^2 - t")], vec![p(&r, "z^2"), p(&r, "t_inv")], &cfg()).unwrap();
    let ab = add(&g, &sq, &cfg()).unwrap();
    let ba = add(&sq, &g, &cfg()).unwrap();
    // ab middle: [t, t_inv, e, z]; ba middle: [t, t_inv, e, z]; swap is e -> 1 - e
    let ring = ab.middle_ring().clone();
    let images = vec![p(&ring, "t"), p(&ring, "t_inv"), p(&ring, "1 - e"), p(&ring, "z")];
    let swapped = ba.reparametrize(&ring, &images, &cfg()).unwrap();
    assert!(equals(&ab, &swapped, &cfg()).unwrap());
}

#[test]
fn tensor_products() {
    let pt = AffineScheme::point(QQ);
    let unit = Correspondence::identity(&pt).certified(&cfg()).unwrap();
    let a = point_algebra("a", "a^2 - 5");
    assert!(equals(&external_tensor(&a, &unit, &cfg()).unwrap(), &a, &cfg()).unwrap());
    let b = point_algebra("b", "b^3 - 2");
    assert_eq!(degree(&external_tensor(&a, &b, &cfg()).unwrap()).unwrap(), 6);

    let dual = point_algebra("a", "a^2");
    let t = external_tensor(&gm_identity(), &dual, &cfg()).unwrap();
    assert_eq!(t.middle_ring().vars.names(), &["t", "t_inv", "a"]);
    assert_eq!(degree(&t).unwrap(), 2);
    let r = t.middle_ring();
    let gens: Vec<String> = t.middle().ideal().groebner(&flatcor::MonomialOrder::Grevlex, &cfg()).unwrap().basis().iter().map(|g| g.to_string()).collect();
    assert_eq!(gens, vec!["a^2".to_string(), "t*t_inv - 1".to_string()]);
    assert_eq!(r.nvars(), 3);
}

#[test]
fn certification_examples() {
    let pt = AffineScheme::point(QQ);
    let r = ring_of(QQ, &["t"], &[]).unwrap();
    let c = Correspondence::new(pt.clone(), pt.clone(), &r, vec![p(&r, "t^3 - 2")], vec![], &cfg()).unwrap();
    assert_eq!(degree(&c.certified(&cfg()).unwrap()).unwrap(), 3);

    let a1 = AffineScheme::affine_line(QQ, "x").unwrap();
    let r = ring_of(QQ, &["x", "t"], &[]).unwrap();
    let c = Correspondence::new(a1.clone(), pt.clone(), &r, vec![p(&r, "t^2 - x")], vec![], &cfg()).unwrap();
    let c = c.certified(&cfg()).unwrap();
    let cert = c.certificate().unwrap();
    assert_eq!(cert.rank, 2);
    assert!(cert.fitting.0.is_zero());
    // multiplication by t on {1, t} is [[0, 1], [x, 0]]
    let m = &cert.mult_matrices[0].1;
    let s: Vec<Vec<String>> = m.iter().map(|row| row.iter().map(|q| q.to_string()).collect()).collect();
    assert_eq!(s, vec![vec!["0", "1"], vec!["x", "0"]]);
    cert.recheck(c.middle(), &a1.algebra(), &cfg()).unwrap();

    let r = ring_of(QQ, &["x", "t"], &["t"]).unwrap();
    let c = Correspondence::new(a1.clone(), pt, &r, vec![p(&r, "1 - x")], vec![], &cfg()).unwrap();
    match certify_flf(&c, &cfg()).unwrap() {
        CertifyOutcome::NotFlat { witness } => assert_eq!(witness[0].to_string(), "x - 1"),
        other => panic!("{}", other.summary()),
    }
}

#[test]
fn non_finite_left_leg_is_reported() {
    let a1 = AffineScheme::affine_line(QQ, "x").unwrap();
    let r = ring_of(QQ, &["x", "y"], &[]).unwrap();
    let c = Correspondence::new(a1, AffineScheme::point(QQ), &r, vec![p(&r, "x*y - 1")], vec![], &cfg()).unwrap();
    assert!(matches!(certify_flf(&c, &cfg()).unwrap(), CertifyOutcome::NotFinite { .. }));
    assert!(matches!(degree(&c), Err(SpanError::Uncertified)));
}

#[test]
fn equality_of_presentations() {
    let a = point_algebra("a", "a^3 - a");
    assert!(equals(&a, &a, &cfg()).unwrap());
    let pt = AffineScheme::point(QQ);
    let r = ring_of(QQ, &["x", "y"], &[]).unwrap();
    let u = Correspondence::new(pt.clone(), pt.clone(), &r, vec![p(&r, "x"), p(&r, "y")], vec![], &cfg()).unwrap();
    let v = Correspondence::new(pt.clone(), pt.clone(), &r, vec![p(&r, "x + y"), p(&r, "y")], vec![], &cfg()).unwrap();
    assert!(equals(&u, &v, &cfg()).unwrap());

    let gm = AffineScheme::gm(QQ, "t").unwrap();
    let r = gm.ring().clone();
    let z1 = Correspondence::new(gm.clone(), pt.clone(), &r, vec![p(&r, "t^2 + 1")], vec![], &cfg()).unwrap();
    let z2 = Correspondence::new(gm, pt.clone(), &r, vec![p(&r, "t^2 + t")], vec![], &cfg()).unwrap();
    assert!(!equals(&z1, &z2, &cfg()).unwrap());
    assert!(matches!(equals(&z1, &point_algebra("a", "a"), &cfg()), Err(SpanError::Incomparable(_))));
}

#[test]
fn degrees_over_the_multiplicative_group() {
    let pt = AffineScheme::point(QQ);
    let r = ring_of(QQ, &["t"], &["t"]).unwrap();
    for (f, d) in [("t^4 + 1", 4), ("t^3 + t", 2)] {
        let c = Correspondence::new(pt.clone(), pt.clone(), &r, vec![p(&r, f)], vec![], &cfg()).unwrap();
        assert_eq!(degree(&c.certified(&cfg()).unwrap()).unwrap(), d, "{f}");
    }
}

#[test]
fn mismatched_interfaces_and_bad_maps_are_rejected() {
    let pt = AffineScheme::point(QQ);
    let a1 = AffineScheme::affine_line(QQ, "x").unwrap();
    let id = Correspondence::identity(&a1);
    assert!(matches!(compose(&id, &point_algebra("a", "a"), &cfg()), Err(SpanError::Interface(_))));
    // x -> 0 does not respect x*x_inv = 1 on the target Gm
    let gm = AffineScheme::gm(QQ, "x").unwrap();
    let r = a1.ring().clone();
    let bad = Correspondence::from_morphism(&a1, &gm, vec![p(&r, "0"), p(&r, "0")], &cfg());
    assert!(matches!(bad, Err(SpanError::NotHomomorphism(_))));
    let _ = pt;
}

#[test]
fn empty_schemes_need_the_explicit_constructor() {
    let r = ring_of(QQ, &["x"], &["x"]).unwrap();
    assert!(matches!(AffineScheme::new(&r, vec![p(&r, "x")], &cfg()), Err(SpanError::EmptyScheme)));
    assert!(AffineScheme::empty(QQ).is_empty(&cfg()).unwrap());
    let _ = PresentedAlgebra::new(&r, vec![]);
}
