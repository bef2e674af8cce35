use std::collections::{BTreeMap, BTreeSet};

use btq_core::building::{antipodal_quotient, apartment_link, standard_rp, Building};
use btq_core::exact::{Coeff, FgAbGroup, Field, Place};
use btq_core::tree::Tree;

fn building(q: u32, places: &[&str]) -> Building {
    let k = Field::new(q).unwrap();
    Building::new(places.iter().map(|p| Tree::new(&k, Place::parse(p, &k).unwrap())).collect())
}

#[test]
fn apartment_links_are_spheres() {
    for s in 1..=5 {
        let h = apartment_link(s).chain_complex().homology(Coeff::Z);
        let mut expect = vec![FgAbGroup::trivial(); s];
        expect[0] = FgAbGroup::free(1);
        if s == 1 {
            expect[0] = FgAbGroup::free(2);
        } else {
            expect[s - 1] = FgAbGroup::free(1);
        }
        assert_eq!(h, expect, "s = {s}");
    }
}

#[test]
fn antipodal_quotients_are_projective_spaces() {
    for s in 2..=5 {
        let h = antipodal_quotient(s).chain_complex().homology(Coeff::Z);
        assert_eq!(h, standard_rp(s - 1).homology(Coeff::Z), "s = {s}");
    }
    assert_eq!(antipodal_quotient(2).chain_complex().homology(Coeff::Z)[1], FgAbGroup::free(1));
    let point = antipodal_quotient(1);
    assert_eq!(point.count(0), 1);
}

#[test]
fn balls_are_closed_and_cubes_determined_by_corners() {
    for (q, places) in [(2, vec!["t", "inf"]), (3, vec!["t", "inf"]), (2, vec!["t", "t+1", "inf"]), (2, vec!["t^2+t+1", "t"])] {
        let b = building(q, &places);
        for r in 0..=2 {
            let c = b.ball(&b.base(), r);
            assert!(c.is_closed());
            let mut by_corners: BTreeMap<BTreeSet<Vec<_>>, usize> = BTreeMap::new();
            for l in &c.cubes {
                for cube in l {
                    let corners: BTreeSet<_> = cube.corners().into_iter().collect();
                    assert_eq!(corners.len(), 1 << cube.dim(), "corners distinct");
                    for v in &corners {
                        assert!(b.distance(&b.base(), v) <= r);
                    }
                    *by_corners.entry(corners).or_default() += 1;
                }
            }
            assert!(by_corners.values().all(|&n| n == 1));
            // A ball in a product of trees is contractible.
            let h = c.chain_complex().homology(Coeff::Z);
            assert_eq!(h[0], FgAbGroup::free(1));
            assert!(h[1..].iter().all(FgAbGroup::is_trivial));
        }
    }
}

#[test]
fn link_counts_are_elementary_symmetric() {
    let b = building(3, &["t", "t^2+1", "inf"]);
    let l = b.vertex_link(&b.base());
    let sizes = [4u64, 10, 4];
    assert_eq!(l.count(0), sizes.iter().sum::<u64>());
    assert_eq!(l.count(1), sizes[0] * sizes[1] + sizes[0] * sizes[2] + sizes[1] * sizes[2]);
    assert_eq!(l.count(2), sizes.iter().product::<u64>());
    let sc = l.simplicial();
    for n in 0..3 {
        assert_eq!(sc.count(n) as u64, l.count(n));
    }
    let single = building(2, &["t"]);
    assert_eq!(single.vertex_link(&single.base()).count(1), 0);
}
