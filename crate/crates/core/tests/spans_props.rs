use flatcor::spans::*;
use flatcor::{Field, GbConfig, Poly};
use proptest::prelude::*;

const QQ: Field = Field::Rationals;

fn cfg() -> GbConfig {
    GbConfig::default()
}

/// pt <- Spec Q[a]/(a^d + c a + k) -> pt, rank d.
fn point_span(d: u32, c: i64, k: i64) -> Correspondence {
    let pt = AffineScheme::point(QQ);
    let r = ring_of(QQ, &["a"], &[]).unwrap();
    let f = Poly::parse(&r, &format!("a^{d} + {c}*a + {k}").replace("+ -", "- ")).unwrap();
    Correspondence::new(pt.clone(), pt, &r, vec![f], vec![], &cfg()).unwrap().certified(&cfg()).unwrap()
}

/// A^1 <- Spec Q[x][z]/(z^2 - c x z - k) -> A^1 with x |-> x + m z, rank 2.
fn line_span(c: i64, k: i64, m: i64) -> Correspondence {
    let a1 = AffineScheme::affine_line(QQ, "x").unwrap();
    let r = ring_of(QQ, &["x", "z"], &[]).unwrap();
    let f = Poly::parse(&r, &format!("z^2 - ({c})*x*z - ({k})")).unwrap();
    let img = Poly::parse(&r, &format!("x + ({m})*z")).unwrap();
    Correspondence::new(a1.clone(), a1, &r, vec![f], vec![img], &cfg()).unwrap().certified(&cfg()).unwrap()
}

fn point_strategy() -> impl Strategy<Value = Correspondence> {
    (2u32..4, -2i64..3, -2i64..3).prop_map(|(d, c, k)| point_span(d, c, k))
}

fn line_strategy() -> impl Strategy<Value = Correspondence> {
    (-1i64..2, -2i64..3, -1i64..2).prop_map(|(c, k, m)| line_span(c, k, m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn composition_is_associative_over_points(a in point_strategy(), b in point_strategy(), c in point_strategy()) {
        let left = compose(&compose(&a, &b, &cfg()).unwrap(), &c, &cfg()).unwrap();
        let right = compose(&a, &compose(&b, &c, &cfg()).unwrap(), &cfg()).unwrap();
        prop_assert!(equals(&left, &right, &cfg()).unwrap());
        prop_assert_eq!(degree(&left).unwrap(), degree(&a).unwrap() * degree(&b).unwrap() * degree(&c).unwrap());
    }

    #[test]
    fn composition_is_associative_over_the_line(a in line_strategy(), b in line_strategy(), c in line_strategy()) {
        let left = compose(&compose(&a, &b, &cfg()).unwrap(), &c, &cfg()).unwrap();
        let right = compose(&a, &compose(&b, &c, &cfg()).unwrap(), &cfg()).unwrap();
        prop_assert!(equals(&left, &right, &cfg()).unwrap());
        prop_assert_eq!(degree(&left).unwrap(), 8);
    }

    #[test]
    fn ranks_add_and_multiply(a in point_strategy(), b in point_strategy()) {
        let (da, db) = (degree(&a).unwrap(), degree(&b).unwrap());
        prop_assert_eq!(degree(&add(&a, &b, &cfg()).unwrap()).unwrap(), da + db);
        prop_assert_eq!(degree(&compose(&a, &b, &cfg()).unwrap()).unwrap(), da * db);
        prop_assert_eq!(degree(&external_tensor(&a, &b, &cfg()).unwrap()).unwrap(), da * db);
    }

    #[test]
    fn certificates_reproduce_their_matrices(a in line_strategy(), b in line_strategy()) {
        for c in [compose(&a, &b, &cfg()).unwrap(), add(&a, &b, &cfg()).unwrap()] {
            let cert = c.certificate().unwrap();
            cert.recheck(c.middle(), &c.source().algebra(), &cfg()).map_err(TestCaseError::fail)?;
            // closure: every product of a fiber variable with a basis element reduces
            // to the recorded row
            let ring = c.middle_ring();
            let k = c.source().ring().nvars();
            for (v, (name, m)) in (k..ring.nvars()).zip(&cert.mult_matrices) {
                prop_assert_eq!(name.as_str(), ring.vars.name(v));
                prop_assert_eq!(&cert.multiplication_matrix(&Poly::var(ring, v)), m);
            }
        }
    }

    #[test]
    fn tensor_distributes_over_sums(shift in -2i64..3, b in point_strategy(), c in point_strategy()) {
        let a1 = AffineScheme::affine_line(QQ, "x").unwrap();
        let r = a1.ring().clone();
        let img = Poly::parse(&r, &format!("x + ({shift})")).unwrap();
        let g = Correspondence::from_morphism(&a1, &a1, vec![img], &cfg()).unwrap().certified(&cfg()).unwrap();
        let left = external_tensor(&g, &add(&b, &c, &cfg()).unwrap(), &cfg()).unwrap();
        let right = add(&external_tensor(&g, &b, &cfg()).unwrap(), &external_tensor(&g, &c, &cfg()).unwrap(), &cfg()).unwrap();
        prop_assert!(equals(&left, &right, &cfg()).unwrap());
    }
}

