use std::collections::{BTreeMap, BTreeSet};

use btq_core::building::BuildingVertex;
use btq_core::bundles::*;
use btq_core::curve::CurveConfig;
use btq_core::exact::{Field, Mat2, RatFunc};
use btq_core::pic::kummer;
use btq_core::tree::TreeVertex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn context(q: u32, punctures: &[&str]) -> BundleContext {
    let k = Field::new(q).unwrap();
    BundleContext::new(&CurveConfig::projective_line(&k, punctures).unwrap()).unwrap()
}

fn random_ring_element(ctx: &BundleContext, rng: &mut ChaCha8Rng) -> RatFunc {
    let n = vec![2; ctx.s()];
    let rr = RrSpace::new(&ctx.k, &ctx.places, &n);
    (0..rr.dim()).fold(RatFunc::zero(), |acc, j| {
        let c = rng.gen_range(0..ctx.k.q());
        acc.add(&rr.basis_element(j, &ctx.k).scale(c, &ctx.k), &ctx.k)
    })
}

/// A word of length <= 4 in elementary matrices, their transposes and
/// diagonal units.
fn random_word(ctx: &BundleContext, rng: &mut ChaCha8Rng) -> Mat2 {
    let k = &ctx.k;
    let mut g = Mat2::identity();
    for _ in 0..rng.gen_range(1..=4) {
        let f = random_ring_element(ctx, rng);
        let step = match rng.gen_range(0..3) {
            0 => Mat2::new(RatFunc::one(), f, RatFunc::zero(), RatFunc::one()),
            1 => Mat2::new(RatFunc::one(), RatFunc::zero(), f, RatFunc::one()),
            _ => {
                let mut u = RatFunc::constant(rng.gen_range(1..k.q()));
                for w in &ctx.units {
                    u = u.mul(&w.pow(rng.gen_range(-1..=1), k).unwrap(), k);
                }
                Mat2::diag(u, RatFunc::one())
            }
        };
        g = g.mul(&step, k);
    }
    g
}

fn random_vertex(ctx: &BundleContext, rng: &mut ChaCha8Rng, steps: usize) -> BuildingVertex {
    let mut v = ctx.building.base();
    for _ in 0..steps {
        let i = rng.gen_range(0..ctx.s());
        let link = ctx.trees()[i].link(&v[i]);
        v[i] = link[rng.gen_range(0..link.len())].clone();
    }
    v
}

#[test]
fn classes_are_orbit_invariant_and_transports_exist() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (q, p) in [(2, vec!["inf"]), (3, vec!["t", "inf"]), (2, vec!["t^2+t+1"]), (5, vec!["t"]), (4, vec!["inf"])] {
        let ctx = context(q, &p);
        for _ in 0..20 {
            let v = random_vertex(&ctx, &mut rng, 4);
            let g = random_word(&ctx, &mut rng);
            let w = ctx.act(&g, &v);
            assert_eq!(ctx.classify_vertex(&v), ctx.classify_vertex(&w), "q={q} {p:?}");
            let t = ctx.transport(&v, &w).expect("same orbit");
            assert_eq!(ctx.act(&t, &v), w);
        }
    }
}

#[test]
fn serre_ray() {
    for q in [2u32, 3] {
        let ctx = context(q, &["inf"]);
        for r in 0..=5 {
            let qb = quotient_ball(&ctx, r, GroupFlavor::Sl2).unwrap();
            assert_eq!(qb.count(0), r + 1);
            let ns: Vec<u64> = qb.vertex_classes().iter().map(|c| c.n).collect();
            assert_eq!(ns, (0..=r as u64).collect::<Vec<_>>());
            for c in &qb.cells[0] {
                let n = c.classes[0].n as usize;
                let expect = if n == 0 { StabDescriptor::FullGL2k } else { StabDescriptor::TorusUnipotent { h: n + 1 } };
                assert_eq!(c.stab, expect);
            }
            // A path: r edges joining consecutive vertices.
            assert_eq!(qb.count(1), r);
            for e in &qb.cells[1] {
                let ends: BTreeSet<usize> = qb.edge_ends(e).into_iter().collect();
                let v: Vec<usize> = ends.into_iter().collect();
                assert_eq!(v.len(), 2);
                assert_eq!(v[1], v[0] + 1);
            }
        }
    }
}

/// Orbits of `SL_2(F_q[t])` on the ball, by union-find over elementary and
/// diagonal generators acting on a larger ball.
fn elementary_orbits(q: u32, r: u64, big: u64) -> usize {
    let ctx = context(q, &["inf"]);
    let k = &ctx.k;
    let tree = &ctx.trees()[0];
    let ball = tree.ball(&TreeVertex::base(), big);
    let index: BTreeMap<TreeVertex, usize> = ball.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    let mut parent: Vec<usize> = (0..ball.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut gens = Vec::new();
    for c in 1..k.q() {
        for j in 0..=big as i64 {
            let f = RatFunc::t().pow(j, k).unwrap().scale(c, k);
            gens.push(Mat2::new(RatFunc::one(), f.clone(), RatFunc::zero(), RatFunc::one()));
            gens.push(Mat2::new(RatFunc::one(), RatFunc::zero(), f, RatFunc::one()));
        }
        let cc = RatFunc::constant(c);
        gens.push(Mat2::diag(cc.clone(), cc.inv(k).unwrap()));
    }
    for (i, v) in ball.iter().enumerate() {
        for g in &gens {
            let w = tree.canonicalize(&g.mul(&tree.matrix(v), k)).unwrap();
            if let Some(&j) = index.get(&w) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let inner: BTreeSet<usize> = ball
        .iter()
        .enumerate()
        .filter(|(_, v)| tree.distance(&TreeVertex::base(), v) <= r)
        .map(|(i, _)| find(&mut parent, i))
        .collect();
    inner.len()
}

#[test]
fn serre_ray_matches_elementary_union_find() {
    for (q, r) in [(2, 3), (2, 4), (3, 3)] {
        assert_eq!(elementary_orbits(q, r, r + 2), r as usize + 1, "q={q} r={r}");
    }
}

#[test]
fn parabolic_examples() {
    let ctx = context(3, &["inf"]);
    let base = ctx.building.base();
    let lat = |v: &BuildingVertex| v.iter().cloned().enumerate().collect::<Vec<_>>();
    assert!(is_parabolic(&ctx, &lat(&base)));
    // O ⊕ O to O(-1) ⊕ O, fixed by the diagonal torus.
    let child = vec![ctx.trees()[0].child(&base[0], 0)];
    assert_eq!(ctx.classify_vertex(&child).n, 1);
    let mut edge = lat(&base);
    edge.extend(lat(&child));
    assert!(is_parabolic(&ctx, &edge));
    // An edge towards a non-rational link point is moved by every split torus.
    let ctx = context(3, &["t^2+1"]);
    let base = ctx.building.base();
    let tree = &ctx.trees()[0];
    let w = vec![tree.child(&base[0], 4)];
    assert!(!tree.residue_field().element(4).is_constant());
    let mut edge = lat(&base);
    edge.extend(lat(&w));
    assert!(!is_parabolic(&ctx, &edge));
    assert!(matches!(
        EndAlgebra::new(&ctx.k, &ctx.end_space(&edge)).descriptor(),
        StabDescriptor::NonSplitTorus { .. }
    ));
}

#[test]
fn parabolic_flags_are_face_closed() {
    for (q, p, r) in [(3, vec!["t^2+1"], 3), (2, vec!["t", "inf"], 3), (3, vec!["t", "inf"], 2), (2, vec!["t^2+t+1", "inf"], 2)] {
        let ctx = context(q, &p);
        for flavor in [GroupFlavor::Gl2, GroupFlavor::Sl2] {
            let qb = quotient_ball(&ctx, r, flavor).unwrap();
            for d in 1..qb.cells.len() {
                for c in qb.cells[d].iter().filter(|c| c.parabolic) {
                    for (f, _) in &c.faces {
                        assert!(qb.cells[d - 1][*f].parabolic);
                    }
                    // Faces straight from the representative cube.
                    for j in 0..d {
                        for far in [false, true] {
                            assert!(is_parabolic(&ctx, &cube_lattices(&c.cube.face(j, far))));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn orbit_stabilizer_on_small_balls() {
    for (q, p, r) in [(2, "inf", 2), (2, "t", 2), (3, "inf", 1)] {
        let ctx = context(q, &[p]);
        let k = &ctx.k;
        let base = ctx.building.base();
        // GL_2(F_q), the stabilizer of the base vertex.
        let mut group = Vec::new();
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    for d in 0..q {
                        let m = Mat2::new(RatFunc::constant(a), RatFunc::constant(b), RatFunc::constant(c), RatFunc::constant(d));
                        if !m.det(k).is_zero() {
                            group.push(m);
                        }
                    }
                }
            }
        }
        let ball = ctx.building.ball(&base, r).vertices;
        for v in &ball {
            let orbit: BTreeSet<BuildingVertex> = group.iter().map(|g| ctx.act(g, v)).collect();
            let mut lat: Vec<(usize, TreeVertex)> = vec![(0, base[0].clone())];
            lat.push((0, v[0].clone()));
            let common = ctx.end_space(&lat);
            let stab = EndAlgebra::new(k, &common).unit_count();
            assert_eq!(orbit.len() as u64 * stab, group.len() as u64, "q={q} {p} v={v:?}");
        }
    }
}

#[test]
fn link_action_trichotomy() {
    let mut classes = 0;
    for (q, p, ns) in [
        (2, vec!["inf"], vec![0, 1, 2, 3]),
        (3, vec!["inf"], vec![0, 1, 2]),
        (5, vec!["inf"], vec![0, 1]),
        (4, vec!["t"], vec![0, 2]),
        (3, vec!["t", "inf"], vec![0, 1, 2]),
        (2, vec!["t^2+t+1"], vec![2]),
    ] {
        let ctx = context(q, &p);
        for n in ns {
            let b = BundleClass { n, twist: 0 };
            let act = stabilizer_link_action(&ctx, b).unwrap();
            let v = ctx.normal_vertex(&act.exponents);
            assert_eq!(ctx.classify_vertex(&v), b);
            for (i, dir) in act.directions.iter().enumerate() {
                let qv = ctx.trees()[i].q_v();
                for g in &dir.generators {
                    assert_eq!(fixed_link_points(&ctx, &v, i, &g.matrix), g.fixed, "q={q} {p:?} n={n} dir {i}");
                    let expect = match g.kind {
                        LinkActionKind::Standard => 2,
                        LinkActionKind::BoundaryBorel => 1,
                        LinkActionKind::Trivial => qv as usize + 1,
                    };
                    assert_eq!(g.fixed.len(), expect);
                }
                // Orbits of the whole stabilizer: 0 is always fixed for n > 0.
                if n > 0 {
                    assert!(dir.orbits.contains(&vec![0]));
                }
            }
            classes += 1;
        }
    }
    assert!(classes >= 10);
    let ctx = context(2, &["inf"]);
    let act = stabilizer_link_action(&ctx, BundleClass { n: 0, twist: 0 }).unwrap();
    assert_eq!(act.directions[0].orbits, vec![vec![0, 1, 2]]);
}

#[test]
fn stabilizer_descriptors() {
    let ctx = context(3, &["inf"]);
    let s0 = stabilizer_descriptor(&ctx, BundleClass { n: 0, twist: 0 }).unwrap();
    assert_eq!(s0.descriptor, StabDescriptor::FullGL2k);
    assert_eq!(s0.finite_order, Some(48));
    for n in 1..4 {
        let s = stabilizer_descriptor(&ctx, BundleClass { n, twist: 0 }).unwrap();
        assert_eq!(s.descriptor, StabDescriptor::TorusUnipotent { h: n as usize + 1 });
        // Two torus generators and a basis of the unipotent part.
        assert_eq!(s.generators.len(), 2 + n as usize + 1);
    }
}

#[test]
fn parabolic_components_match_kummer_set() {
    for (q, p, expect) in [
        (2, vec!["inf"], 1),
        (3, vec!["t", "inf"], 1),
        (2, vec!["t", "t+1", "inf"], 1),
        (3, vec!["t^2+1"], 2),
        (2, vec!["t^2+t+1"], 2),
    ] {
        let ctx = context(q, &p);
        let kset = kummer(&ctx.pic.pic).unwrap();
        assert_eq!(kset.len(), expect);
        let r = if p.len() == 3 { 2 } else { 4 };
        let qb = quotient_ball(&ctx, r, GroupFlavor::Gl2).unwrap();
        assert_eq!(qb.components(true), expect, "q={q} {p:?}");
        assert_eq!(qb.components(false), 1);
    }
}
