use gl11::bethe::{enumerate_divisors, verify_on_shell};
use gl11::exactnum::{int, Poly, RatFun, Scalar};
use gl11::fusion::{berezinian_expected, berezinian};
use gl11::monodromy::{cyclicity_and_irreducibility, lax_monodromy, verify_rtt, ModuleSpec};
use gl11::report::random_spec;
use gl11::weylspace::{
    invariant_dimensions, modified_action, plain_character, singular_character, PolyVector, SnAction, Action,
};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| Scalar::frac(p, q))
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(scalar(), 0..=max_deg + 1).prop_map(Poly::new)
}

/// Random V-valued polynomial in n variables of degree ≤ 3.
fn poly_vector(n: usize) -> impl Strategy<Value = PolyVector> {
    let term = (0..1usize << n, prop::collection::vec(0u32..=3, n), scalar());
    prop::collection::vec(term, 0..6).prop_map(move |ts| {
        ts.into_iter().fold(PolyVector::zero(n), |acc, (b, mut m, c)| {
            // cap the total degree at 3
            while m.iter().sum::<u32>() > 3 {
                let i = m.iter().position(|&e| e > 0).unwrap();
                m[i] -= 1;
            }
            acc.add(&PolyVector::basis(n, b, m).scale(&c))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn poly_ring_laws(a in poly(4), b in poly(4), c in poly(3)) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        if !c.is_zero() {
            let (q, r) = a.div_rem(&c);
            prop_assert_eq!(&(&q * &c) + &r, a.clone());
            prop_assert!(r.is_zero() || r.deg() < c.deg());
        }
    }

    #[test]
    fn ratfun_inverse(a in poly(3), b in poly(3)) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let f = RatFun::new(a, b);
        let g = f.inv().unwrap();
        prop_assert_eq!(&f * &g, RatFun::one());
        prop_assert_eq!(f.bracket(2).bracket(-2), f);
    }

    #[test]
    fn modified_action_is_involutive(v in poly_vector(3), i in 1usize..3) {
        prop_assert_eq!(modified_action(i, &modified_action(i, &v).unwrap()).unwrap(), v.clone());
        // degree never grows
        let w = modified_action(i, &v).unwrap();
        prop_assert!(w.degree() <= v.degree());
    }

    #[test]
    fn orbit_sums_are_invariant(v in poly_vector(3)) {
        let act = SnAction::new(3, Action::Modified);
        let w = act.orbit_sum(&v);
        for i in 1..3 {
            prop_assert_eq!(act.apply(i, &w).unwrap(), w.clone());
        }
    }

    #[test]
    fn lax_rtt(points in prop::collection::vec(scalar(), 1..=3)) {
        prop_assert!(verify_rtt(&lax_monodromy(&points)).is_ok());
    }

    #[test]
    fn random_specs_are_cyclic_and_split(seed in 0u64..1000, k in 1usize..=3) {
        let s = random_spec(seed, k, 2, true).unwrap();
        prop_assert!(cyclicity_and_irreducibility(&s).cyclic);
        let g = s.gamma();
        prop_assert!(enumerate_divisors(&g, g.deg()).is_ok());
        prop_assert_eq!(random_spec(seed, k, 2, true).unwrap(), s);
    }

    #[test]
    fn bethe_vectors_on_shell(seed in 0u64..1000) {
        let s = random_spec(seed, 2, 1, true).unwrap();
        let g = s.gamma();
        for l in 0..=g.deg() {
            for y in enumerate_divisors(&g, l).unwrap() {
                let o = verify_on_shell(&s, &y.root_list()).unwrap();
                prop_assert!(o.pass, "{:?} y={}", s, y.y);
            }
        }
    }

    #[test]
    fn berezinian_value(b in scalar(), q1 in 1i64..5, q2 in 1i64..5, w in 1i64..3) {
        let s = ModuleSpec::from_parts(&[(w, 0)], &[b], int(q1), int(q2)).unwrap();
        let r = berezinian(&s).unwrap();
        prop_assert!(r.pass());
        let want = RatFun::new(s.phi(), s.psi()).scale(&Scalar::frac(q1, q2));
        prop_assert_eq!(berezinian_expected(&s), want.clone());
        prop_assert_eq!(r.value, Some(want));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn characters_match_series(n in 1usize..=3, l in 0usize..=3, d in 0u32..=3) {
        prop_assume!(l <= n);
        prop_assert_eq!(invariant_dimensions(n, l, d, false).unwrap().0, plain_character(n, l, d as usize));
        prop_assert_eq!(invariant_dimensions(n, l, d, true).unwrap().0, singular_character(n, l, d as usize));
    }
}
