mod common;

use common::{random_configuration, to_terms, Fq2};
use nodal_quartic::arith::{Field, Gf, Rationals};
use nodal_quartic::defect::{defect_of_points, separating_form};
use nodal_quartic::poly::{monomial_basis, parse_poly, MultiPoly};
use nodal_quartic::projgeo::{eisenbud_koh_check, ProjPoint};
use nodal_quartic::quartic::{build_qqlc, certify_node, contains_quadric_surface, QuadricMembership, QuadricSearch};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gf_form(p: u64, nvars: usize, degree: u32, coeffs: &[u32]) -> MultiPoly<Gf> {
    let g = Gf::prime(p).unwrap();
    let n = monomial_basis(nvars, degree).len();
    let c: Vec<u32> = coeffs.iter().cycle().take(n).map(|&x| x % p as u32).collect();
    MultiPoly::from_coefficients(&g, nvars, degree, &c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn display_parse_round_trip_over_gf(coeffs in prop::collection::vec(0u32..13, 1..40), d in 0u32..5) {
        let f = gf_form(13, 5, d, &coeffs);
        let back = parse_poly(f.field(), &f.to_string(), 5).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn display_parse_round_trip_over_q(coeffs in prop::collection::vec(-50i64..50, 1..20), d in 1u32..4) {
        let n = monomial_basis(4, d).len();
        let c: Vec<_> = coeffs.iter().cycle().take(n).map(|&x| Rationals.from_i64(x)).collect();
        let f = MultiPoly::from_coefficients(&Rationals, 4, d, &c);
        prop_assert_eq!(parse_poly(&Rationals, &f.to_string(), 4).unwrap(), f);
    }

    #[test]
    fn qqlc_identity(cq in prop::collection::vec(0u32..11, 15), cqp in prop::collection::vec(0u32..11, 15),
                     cl in prop::collection::vec(0u32..11, 5), cc in prop::collection::vec(0u32..11, 35),
                     x in prop::collection::vec(0u32..11, 5)) {
        let (q, qp, l, c) = (gf_form(11, 5, 2, &cq), gf_form(11, 5, 2, &cqp), gf_form(11, 5, 1, &cl), gf_form(11, 5, 3, &cc));
        let inp = build_qqlc(q.clone(), qp.clone(), l.clone(), c.clone()).unwrap();
        let g = q.field();
        let lhs = inp.f.eval(&x).unwrap();
        let rhs = g.sub_fast(
            g.mul_fast(q.eval(&x).unwrap(), qp.eval(&x).unwrap()),
            g.mul_fast(l.eval(&x).unwrap(), c.eval(&x).unwrap()),
        );
        prop_assert_eq!(lhs, rhs);
        if !l.is_zero() && !q.is_zero() && !inp.f.is_zero() {
            let r = contains_quadric_surface(&inp.f, QuadricSearch::Candidate { l, q }).unwrap();
            let is_yes = matches!(r, QuadricMembership::Yes { .. });
            prop_assert!(is_yes);
        }
    }

    #[test]
    fn certification_invariants(coeffs in prop::collection::vec(0u32..7, 70), x in prop::collection::vec(0u32..7, 5)) {
        prop_assume!(x.iter().any(|&c| c != 0));
        let f = gf_form(7, 5, 4, &coeffs);
        let g = f.field().clone();
        let pt = ProjPoint::new(&g, x).unwrap();
        let r = certify_node(&f, &pt).unwrap();
        let o = Fq2::new(7, &[]);
        let terms = to_terms(&o, &f);
        let xe: Vec<_> = pt.coords().iter().map(|&c| o.decode(c)).collect();
        let rank = terms.hessian_rank(&o, &xe);
        prop_assert_eq!(r.hessian_rank, rank);
        prop_assert_eq!(r.gradient_zero, terms.gradient(&o, &xe).iter().all(|v| Fq2::is_zero(*v)));
        prop_assert!(!r.is_node || (r.gradient_zero && r.hessian_rank == 4));
        prop_assert!(!(r.gradient_zero && r.hessian_rank == 5));
    }

    #[test]
    fn points_are_normalized(x in prop::collection::vec(0u32..101, 5), k in 1u32..101) {
        prop_assume!(x.iter().any(|&c| c != 0));
        let g = Gf::prime(101).unwrap();
        let a = ProjPoint::new(&g, x.clone()).unwrap();
        let scaled: Vec<u32> = x.iter().map(|&c| g.mul_fast(c, k)).collect();
        let b = ProjPoint::new(&g, scaled).unwrap();
        prop_assert_eq!(&a, &b);
        let lead = a.coords().iter().find(|&&c| c != 0).copied();
        prop_assert_eq!(lead, Some(1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn eisenbud_koh_implies_independence(seed in any::<u64>()) {
        let g = Gf::prime(101).unwrap();
        let cfg = random_configuration(&g, &mut ChaCha8Rng::seed_from_u64(seed));
        if eisenbud_koh_check(&cfg, 3).unwrap().passed {
            prop_assert_eq!(defect_of_points(&cfg, 3).unwrap(), 0);
        }
    }

    #[test]
    fn separating_forms_iff_no_defect(seed in any::<u64>()) {
        let g = Gf::prime(101).unwrap();
        let cfg = random_configuration(&g, &mut ChaCha8Rng::seed_from_u64(seed));
        let all = (0..cfg.len()).all(|i| separating_form(&cfg, i, 3).unwrap().is_some());
        prop_assert_eq!(all, defect_of_points(&cfg, 3).unwrap() == 0);
    }
}
