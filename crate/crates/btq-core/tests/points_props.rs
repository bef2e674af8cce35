use btq_core::equivariant::bar::cyclic_homology;
use btq_core::exact::FgAbGroup;
use btq_core::points::*;

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn generator_counts() {
    let c = build_points_complex(3, 3, Variant::Plain).unwrap();
    assert_eq!(c.bases[1].len(), 12);
    let a = build_points_complex(3, 3, Variant::Alternating).unwrap();
    assert_eq!(a.bases[2].len(), 4);
    for q in [2u32, 3, 4, 5, 7] {
        let a = build_points_complex(q, q.min(5) as usize, Variant::Alternating).unwrap();
        for (n, b) in a.bases.iter().enumerate() {
            assert_eq!(b.len(), binom(q as usize + 1, n + 1));
        }
        let n = (q as usize).min(4);
        let p = build_points_complex(q, n, Variant::Plain).unwrap();
        for (d, b) in p.bases.iter().enumerate() {
            let expect: usize = (0..=d).map(|i| q as usize + 1 - i).product();
            assert_eq!(b.len(), expect);
        }
    }
    assert!(build_points_complex(3, 4, Variant::Plain).is_err());
}

#[test]
fn boundary_squares_to_zero() {
    // ChainComplex::new rejects d² ≠ 0, so building is the check.
    for q in [2u32, 3, 4, 5, 7] {
        for n in 1..=4.min(q as usize) {
            let variant = if q == 7 && n == 4 { Variant::Alternating } else { Variant::Plain };
            build_points_complex(q, n, variant).unwrap();
            build_points_complex(q, n, Variant::Alternating).unwrap();
        }
    }
}

#[test]
fn resource_cap() {
    assert!(matches!(build_points_complex(13, 7, Variant::Plain), Err(btq_core::Error::ResourceCap(_))));
}

#[test]
fn acyclicity_in_the_contraction_range() {
    let r = acyclicity_check(&build_points_complex(5, 4, Variant::Alternating).unwrap());
    assert_eq!(r.checked.iter().map(|x| x.0).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    assert!(r.acyclic_in_range);
    let r = acyclicity_check(&build_points_complex(5, 4, Variant::Plain).unwrap());
    assert!(r.acyclic_in_range);
    let r = acyclicity_check(&build_points_complex(3, 2, Variant::Plain).unwrap());
    assert_eq!(r.checked[0].0, 0);
    assert!(r.checked[0].1.is_trivial());
    let r = acyclicity_check(&build_points_complex(2, 2, Variant::Plain).unwrap());
    assert_eq!(r.checked.len(), 1);
    assert_eq!(r.outside.len(), 1);
    assert_eq!(r.outside[0].0, 1);
    assert_eq!(r.outside[0].2, "outside contraction range");
    let r = acyclicity_check(&build_points_complex(7, 6, Variant::Alternating).unwrap());
    assert!(r.acyclic_in_range);
    assert_eq!(r.checked.len(), 6);
}

#[test]
fn plain_to_alternating_is_a_chain_map() {
    for q in [2u32, 3, 5] {
        let p = build_points_complex(q, 3.min(q as usize), Variant::Plain).unwrap();
        let (alt, maps) = p.to_alternating().unwrap();
        for n in 1..=p.max_degree {
            let lhs = alt.complex.boundary(n as i64).mul(&maps[n]);
            let rhs = maps[n - 1].mul(&p.complex.boundary(n as i64));
            assert_eq!(lhs.to_dense(), rhs.to_dense(), "q={q} n={n}");
        }
        // Every alternating generator is hit (n + 1)! times up to sign.
        for n in 0..=p.max_degree {
            let fact: usize = (1..=n + 1).product();
            assert_eq!(maps[n].cols(), alt.bases[n].len() * fact);
        }
    }
}

#[test]
fn de_sequence_is_exact() {
    for q in [2u32, 3, 4, 5, 7] {
        let r = de_exactness(q).unwrap();
        assert!(r.chain_maps, "q={q}");
        assert!(r.composite_zero);
        assert!(r.exact_half && r.exact_mod3, "q={q}");
    }
}

#[test]
fn rp1_vanishes_in_low_degrees() {
    for q in [2u32, 3, 4, 5] {
        let r = rp1_low_degree(q, 1).unwrap();
        assert!(r.transitive_points && r.transitive_pairs, "q={q}");
        assert_eq!(r.groups.len(), 2);
        assert!(r.groups.iter().all(FgAbGroup::is_trivial));
    }
    assert!(rp1_low_degree(3, 2).is_err());
    // Degree 2 is only exploratory; it must at least compute.
    rp1_exploratory(3, 2).unwrap();
}

#[test]
fn c1_is_induced_from_the_torus() {
    for q in [2u32, 3] {
        for p in 0..=2 {
            let h = c1_module_homology(q, p).unwrap();
            assert_eq!(h, cyclic_homology(q as usize - 1, p), "q={q} p={p}");
        }
    }
    assert_eq!(c1_module_homology(3, 1).unwrap(), FgAbGroup::cyclic(2));
}

#[test]
fn pair_stabilizer_is_the_normalizer() {
    for q in [2u32, 3, 4, 5] {
        let mut s = pair_stabilizer(q).unwrap();
        s.sort_unstable();
        assert_eq!(s, torus_normalizer_matrices(q).unwrap(), "q={q}");
    }
}
