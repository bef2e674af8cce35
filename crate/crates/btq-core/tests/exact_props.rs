use btq_core::exact::homology::{localization_law_holds, random_complex};
use btq_core::exact::intmat::snf;
use btq_core::exact::{Field, IntMatrix, Place, Poly, RatFunc};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn poly_strategy(q: u32, max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(0..q, 1..=max_deg + 1).prop_map(Poly::from_coeffs)
}

fn ratfunc(q: u32) -> impl Strategy<Value = RatFunc> {
    (poly_strategy(q, 4), poly_strategy(q, 4)).prop_filter_map("nonzero", move |(n, d)| {
        let k = Field::new(q).unwrap();
        if n.is_zero() || d.is_zero() {
            return None;
        }
        RatFunc::new(n, d, &k).ok()
    })
}

fn places(k: &Field, max_deg: usize) -> Vec<Place> {
    let mut out = vec![Place::Infinity];
    for d in 1..=max_deg {
        for p in Poly::monic_irreducibles(k, d) {
            out.push(Place::finite(p, k).unwrap());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn valuation_is_additive(
        (q, f, g) in prop::sample::select(vec![2u32, 3, 5]).prop_flat_map(|q| (Just(q), ratfunc(q), ratfunc(q)))
    ) {
        let k = Field::new(q).unwrap();
        let fg = f.mul(&g, &k);
        for p in places(&k, 2) {
            prop_assert_eq!(
                fg.valuation(&p, &k).unwrap(),
                f.valuation(&p, &k).unwrap() + g.valuation(&p, &k).unwrap()
            );
        }
    }

    #[test]
    fn sum_formula(f in ratfunc(3)) {
        let k = Field::new(3).unwrap();
        let bound = f.num().degree().max(f.den().degree()).max(1) as usize;
        let total: i64 = places(&k, bound)
            .iter()
            .map(|p| p.degree() as i64 * f.valuation(p, &k).unwrap())
            .sum();
        prop_assert_eq!(total, 0);
    }

    #[test]
    fn snf_transforms(rows in 1usize..=8, cols in 1usize..=8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| (rng.next_u64() % 41) as i64 - 20).collect())
            .collect();
        let m = IntMatrix::from_rows(&data);
        let s = snf(&m);
        prop_assert!(s.u.det().abs().is_one());
        prop_assert!(s.v.det().abs().is_one());
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.diagonal());
        prop_assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(rows));
        for w in s.factors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(s.factors.iter().all(|d| *d > BigInt::zero()));
    }

    #[test]
    fn half_localization(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut || rng.next_u64());
        prop_assert!(localization_law_holds(&c));
    }
}
