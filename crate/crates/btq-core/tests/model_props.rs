use btq_core::curve::CurveConfig;
use btq_core::exact::{Coeff, FgAbGroup, Field, IntMatrix};
use btq_core::model::{
    build_cryst, model_quotient, quotient_homology, sn_tilde_h1, special_vertices, units_presentation, CrystGroup,
    Flavor,
};
use btq_core::pic::nagata;
use proptest::prelude::*;

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn pic(q: u32, ps: &[&str]) -> btq_core::pic::PicData {
    let k = Field::new(q).unwrap();
    nagata(&CurveConfig::projective_line(&k, ps).unwrap()).unwrap()
}

fn betti_over_z(h: &[FgAbGroup]) -> Vec<usize> {
    h.iter().map(|g| g.rank()).collect()
}

#[test]
fn two_punctures_give_a_circle() {
    let p = pic(3, &["t", "inf"]);
    let g = build_cryst(&p, Flavor::T);
    assert_eq!(g.rank(), 1);
    let col: Vec<i64> = g.units.column(0).iter().map(|x| i64::try_from(x).unwrap()).collect();
    assert!(col == [1, -1] || col == [-1, 1], "{col:?}");
    let st = build_cryst(&p, Flavor::ST);
    let col: Vec<i64> = st.lattice.column(0).iter().map(|x| i64::try_from(x).unwrap()).collect();
    assert!(col == [2, -2] || col == [-2, 2], "{col:?}");
    let w = g.min_window();
    let h = quotient_homology(&g, w, Coeff::Z).unwrap();
    assert_eq!(h[0], FgAbGroup::free(1));
    assert_eq!(h[1], FgAbGroup::free(1));
    assert!(h[2].is_trivial());
}

#[test]
fn one_rational_puncture_is_contractible() {
    let p = pic(2, &["inf"]);
    for f in [Flavor::T, Flavor::ST, Flavor::N, Flavor::SN] {
        let g = build_cryst(&p, f);
        assert_eq!(g.rank(), 0);
        let h = quotient_homology(&g, g.min_window(), Coeff::Z).unwrap();
        assert_eq!(h[0], FgAbGroup::free(1));
        assert!(h[1..].iter().all(FgAbGroup::is_trivial), "{f:?}");
    }
}

#[test]
fn rank_two_lattice_in_three_space() {
    let t = IntMatrix::from_rows(&[[1, 0], [-1, 1], [0, -1]]);
    let g = CrystGroup::from_unit_lattice(3, &t, Flavor::T);
    let h = quotient_homology(&g, g.min_window(), Coeff::Z).unwrap();
    assert_eq!(betti_over_z(&h), vec![1, 2, 1, 0]);
    assert!(h.iter().all(|x| x.torsion().is_empty()));
    // Künneth: T² × interval, each circle from one basis direction.
    let c = model_quotient(&g, g.min_window()).unwrap().complex;
    assert_eq!(c.euler_characteristic(), 0);
}

#[test]
fn window_too_small_is_rejected() {
    let t = IntMatrix::from_rows(&[[3], [-3]]);
    let g = CrystGroup::from_unit_lattice(2, &t, Flavor::T);
    assert!(quotient_homology(&g, g.min_window() - 1, Coeff::Z).is_err());
    assert!(quotient_homology(&g, g.min_window(), Coeff::Z).is_ok());
}

#[test]
fn unit_rank_matches_lattice_rank() {
    for (q, ps) in [
        (2u32, vec!["t", "inf"]),
        (3, vec!["t", "t+1", "inf"]),
        (5, vec!["t", "t+1", "t+2", "inf"]),
        (3, vec!["t^2+1", "inf"]),
        (2, vec!["t^2+t+1", "t"]),
    ] {
        let p = pic(q, &ps);
        for f in [Flavor::T, Flavor::SN] {
            assert_eq!(build_cryst(&p, f).rank(), p.unit_rank, "{q} {ps:?}");
        }
    }
}

#[test]
fn normalizer_quotients_and_special_vertices() {
    for (q, ps) in [(3u32, vec!["t", "inf"]), (3, vec!["t", "t+1", "inf"]), (5, vec!["t", "t+1", "t+2", "inf"])] {
        let p = pic(q, &ps);
        let r = p.unit_rank;
        let sn = build_cryst(&p, Flavor::SN);
        let sv = special_vertices(&sn).unwrap();
        assert_eq!(sv.len(), 1 << r);
        let m = model_quotient(&sn, sn.min_window()).unwrap();
        // Stabilizer order two exactly at the special vertices.
        let fixed = m.cells[0].iter().filter(|c| c.stabilizer == 2).count();
        assert_eq!(fixed, 1 << r);
        assert!(m.cells.iter().flatten().all(|c| c.stabilizer <= 2));
        // Rational homology of the torus mod ±1: even degrees only.
        let h = quotient_homology(&sn, sn.min_window(), Coeff::ModL(3)).unwrap();
        for (k, g) in h.iter().enumerate() {
            let expect = if k % 2 == 0 { binom(r, k) } else { 0 };
            assert_eq!(g.torsion().len(), expect, "SN q={q} degree {k}");
        }
        let n = build_cryst(&p, Flavor::N);
        assert_eq!(special_vertices(&n).unwrap().len(), 1);
        assert!(special_vertices(&build_cryst(&p, Flavor::T)).is_err());
    }
}

#[test]
fn sn_tilde_h1_vanishes_after_inverting_two() {
    for (q, rank) in [(2u64, 1usize), (5, 2), (3, 1), (7, 3)] {
        let (u, m1) = units_presentation(q, rank);
        assert!(sn_tilde_h1(&u, &m1, Coeff::ZHalf).is_trivial(), "q={q}");
        let z = sn_tilde_h1(&u, &m1, Coeff::Z);
        assert!(z.is_finite() && z.order().unwrap().to_string().chars().all(|c| c.is_ascii_digit()));
        // Integrally a 2-group.
        let ord: u64 = z.order().unwrap().try_into().unwrap();
        assert!(ord.is_power_of_two(), "q={q}: order {ord}");
    }
    // F₂^× × Z: generators t, w with 2t = 0 and 2w = 0.
    let (u, m1) = units_presentation(2, 1);
    assert_eq!(sn_tilde_h1(&u, &m1, Coeff::Z), FgAbGroup::from_u64(0, &[2, 2]));
}

fn lattice_strategy() -> impl Strategy<Value = (usize, IntMatrix)> {
    (1usize..=4)
        .prop_flat_map(|s| (Just(s), 0usize..=s.min(3)))
        .prop_flat_map(|(s, r)| (Just(s), proptest::collection::vec(proptest::collection::vec(-1i64..=1, s), r)))
        .prop_filter_map("independent columns", |(s, cols)| {
            let r = cols.len();
            let rows: Vec<Vec<i64>> = (0..s).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
            let m = if r == 0 { IntMatrix::zeros(s, 0) } else { IntMatrix::from_rows(&rows) };
            let full = r == 0 || btq_core::exact::lattice::image_basis(&m).cols() == r;
            full.then_some((s, m))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn betti_numbers_are_binomial((s, t) in lattice_strategy()) {
        let g = CrystGroup::from_unit_lattice(s, &t, Flavor::T);
        let r = g.rank();
        let h = quotient_homology(&g, g.min_window(), Coeff::Z).unwrap();
        for (k, x) in h.iter().enumerate() {
            prop_assert_eq!(x.rank(), binom(r, k));
            prop_assert!(x.torsion().is_empty());
        }
    }
}
