use proptest::prelude::*;
use serde_json::json;

use upv_core::cover::draw_generic_nu;
use upv_core::cover::enumerate::rng_for;
use upv_core::cover::sigma::build_sigma;
use upv_core::exactalg::linalg::scalar_determinant;
use upv_core::exactalg::modp::{rank_dense, ModPoly};
use upv_core::exactalg::{Ambient, Mono, Poly, PrimeField, Scalar};
use upv_core::report::Params;
use upv_core::unproj::reduce_by_rewriting;
use upv_core::{CheckReport, Status};

fn xy_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-6i64..=6, prop::collection::vec(0i32..=2, 16)), 0..5).prop_map(|terms| {
        Poly::from_terms(Ambient::XY, terms.into_iter().map(|(c, e)| (Mono(e), Scalar::int(c))))
    })
}

fn rational() -> impl Strategy<Value = Scalar> {
    (-50i64..50, 1i64..30).prop_map(|(a, b)| Scalar::frac(a, b))
}

/// Rank as the largest nonvanishing minor, for cross-checking elimination.
fn naive_rank(f: PrimeField, m: &[Vec<u64>]) -> usize {
    let (r, c) = (m.len(), m[0].len());
    let subsets = |n: usize, k: usize| -> Vec<Vec<usize>> {
        (0u32..1 << n).filter(|s| s.count_ones() as usize == k).map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect()).collect()
    };
    for k in (1..=r.min(c)).rev() {
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let sub: Vec<Vec<Scalar>> =
                    rows.iter().map(|i| cols.iter().map(|j| Scalar::fp(f, m[*i][*j])).collect()).collect();
                if !scalar_determinant(&sub).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn substitution_is_a_ring_homomorphism(f in xy_poly(), g in xy_poly()) {
        let s = build_sigma();
        let sf = s.apply(&f).unwrap();
        let sg = s.apply(&g).unwrap();
        prop_assert_eq!(s.apply(&(&f * &g)).unwrap(), &sf * &sg);
        prop_assert_eq!(s.apply(&(&f + &g)).unwrap(), &sf + &sg);
    }

    #[test]
    fn scalar_text_round_trip(a in rational(), b in rational()) {
        prop_assert_eq!(Scalar::parse(&a.to_string()).unwrap(), a.clone());
        let z = &a + &(&b * &Scalar::i());
        prop_assert_eq!(Scalar::parse(&z.to_string()).unwrap(), z);
    }

    #[test]
    fn rank_matches_minors(rows in 1usize..4, cols in 1usize..5, seed in any::<u64>()) {
        let f = PrimeField::new(13).unwrap();
        let mut x = seed;
        let m: Vec<Vec<u64>> = (0..rows)
            .map(|_| (0..cols).map(|_| { x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (x >> 33) % 3 }).collect())
            .collect();
        prop_assert_eq!(rank_dense(f, &m), naive_rank(f, &m));
    }

    #[test]
    fn rewriting_is_idempotent(f in xy_poly()) {
        let once = reduce_by_rewriting(&f);
        prop_assert_eq!(reduce_by_rewriting(&once), once);
    }

    #[test]
    fn modular_evaluation_matches_exact(f in xy_poly(), pt in prop::collection::vec(0u64..13, 16)) {
        let fld = PrimeField::new(13).unwrap();
        let exact = f.eval(&pt.iter().map(|v| Scalar::int(*v as i64)).collect::<Vec<_>>());
        prop_assert_eq!(ModPoly::compile(&f, fld).eval(&pt), exact.to_fp(fld));
    }

    #[test]
    fn report_json_round_trip(ok in any::<bool>(), seed in any::<u64>(), n in 0u64..1000, wall in 0u64..10_000) {
        let mut r = CheckReport::new("cover.free_action", ok, json!({"points": n, "list": [n, n + 1]}))
            .with_params(Params { primes: vec![13, 17], seed: Some(seed), nu: vec!["1/2".into()], lambda: Some("3".into()) });
        r.wall_ms = wall;
        if !ok { r.status = Status::Unstable; }
        prop_assert_eq!(CheckReport::from_json_line(&r.to_json_line()).unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn generic_draws_avoid_known_degenerations(seed in any::<u64>()) {
        let f = PrimeField::new(13).unwrap();
        let (nu, rejected) = draw_generic_nu(f, &mut rng_for(seed, 13));
        prop_assert!(!nu.degenerate());
        prop_assert!(!nu.sign_sum_special());
        prop_assert!(rejected.iter().all(|r| r.sign_sum || r.singular_points > 0));
    }
}
