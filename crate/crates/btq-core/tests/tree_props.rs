use std::collections::BTreeSet;

use btq_core::exact::{Field, Mat2, Place, Poly, RatFunc};
use btq_core::tree::{ball_size, Tree, TreeVertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tree(q: u32, place: &str) -> Tree {
    let k = Field::new(q).unwrap();
    let p = Place::parse(place, &k).unwrap();
    Tree::new(&k, p)
}

fn random_poly(rng: &mut ChaCha8Rng, q: u32, deg: usize) -> Poly {
    Poly::from_coeffs((0..=deg).map(|_| rng.gen_range(0..q)).collect())
}

fn random_matrix(rng: &mut ChaCha8Rng, k: &Field) -> Mat2 {
    loop {
        let mut e = || {
            let n = random_poly(rng, k.q(), 2);
            let d = random_poly(rng, k.q(), 1);
            if d.is_zero() {
                RatFunc::from_poly(n)
            } else {
                RatFunc::new(n, d, k).unwrap()
            }
        };
        let m = Mat2::new(e(), e(), e(), e());
        if !m.det(k).is_zero() {
            return m;
        }
    }
}

/// A random element of `GL_2(O_P)`: a product of elementary matrices with
/// polynomial entries, a transposition and a unit diagonal.
fn random_integral(rng: &mut ChaCha8Rng, tr: &Tree) -> Mat2 {
    let k = tr.field();
    let pi = tr.place().uniformizer();
    let mut g = Mat2::identity();
    for step in 0..4 {
        let x = RatFunc::from_poly(random_poly(rng, k.q(), 2));
        // At infinity polynomials are not integral; use powers of 1/t instead.
        let x = if tr.place().is_infinity() { x.mul(&pi.pow(2, k).unwrap(), k) } else { x };
        let e = if step % 2 == 0 {
            Mat2::new(RatFunc::one(), x, RatFunc::zero(), RatFunc::one())
        } else {
            Mat2::new(RatFunc::one(), RatFunc::zero(), x, RatFunc::one())
        };
        g = g.mul(&e, k);
    }
    let u = rng.gen_range(1..k.q());
    g.mul(&Mat2::diag(RatFunc::constant(u), RatFunc::one()), k)
}

#[test]
fn ball_counts_match_homogeneous_tree() {
    for (q, place) in [(2, "t"), (3, "t"), (5, "t"), (2, "t^2+t+1"), (4, "t"), (3, "inf")] {
        let tr = tree(q, place);
        for r in 0..=4 {
            let ball = tr.ball(&TreeVertex::base(), r);
            let distinct: BTreeSet<_> = ball.iter().cloned().collect();
            assert_eq!(distinct.len(), ball.len(), "cycle in tree q={q} {place}");
            assert_eq!(ball.len() as u64, ball_size(tr.q_v(), r as u32), "q={q} {place} r={r}");
        }
    }
}

#[test]
fn links_agree_with_matrix_action() {
    for (q, place) in [(2, "t"), (3, "t+1"), (2, "t^2+t+1"), (3, "inf")] {
        let tr = tree(q, place);
        let k = tr.field();
        let pi = tr.place().uniformizer();
        for v in tr.ball(&TreeVertex::base(), 2) {
            let m = tr.matrix(&v);
            let link = tr.link(&v);
            assert_eq!(link.len() as u64, tr.q_v() + 1);
            assert_eq!(link.iter().collect::<BTreeSet<_>>().len(), link.len());
            for (x, w) in link.iter().enumerate() {
                let step = if (x as u64) < tr.q_v() {
                    let lift = tr.place().lift(&tr.residue_field().element(x as u64), 0, k);
                    Mat2::new(pi.clone(), lift, RatFunc::zero(), RatFunc::one())
                } else {
                    Mat2::diag(pi.inv(k).unwrap(), RatFunc::one())
                };
                assert_eq!(tr.canonicalize(&m.mul(&step, k)).unwrap(), *w);
                assert_eq!(tr.distance(&v, w), 1);
                assert_ne!(v.vertex_type(), w.vertex_type());
                assert!(tr.link(w).contains(&v));
                assert_eq!(tr.link_position(&v, w), Some(x as u64));
            }
        }
    }
}

#[test]
fn exhaustive_equivalence_small_height() {
    // All matrices over F_2 with entries of degree <= 1.
    let tr = tree(2, "t");
    let k = tr.field();
    let entries: Vec<RatFunc> = (0..4u64).map(|i| RatFunc::from_poly(Poly::from_index(k, i, 2))).collect();
    let mut mats = Vec::new();
    for a in &entries {
        for b in &entries {
            for c in &entries {
                for d in &entries {
                    let m = Mat2::new(a.clone(), b.clone(), c.clone(), d.clone());
                    if !m.det(k).is_zero() {
                        mats.push(m);
                    }
                }
            }
        }
    }
    let canon: Vec<TreeVertex> = mats.iter().map(|m| tr.canonicalize(m).unwrap()).collect();
    for i in 0..mats.len() {
        for j in 0..mats.len() {
            assert_eq!(canon[i] == canon[j], tr.matrix_equivalent(&mats[i], &mats[j]).unwrap());
        }
    }
}

#[test]
fn exhaustive_equivalence_on_ball() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tr = tree(2, "t");
    let k = tr.field();
    let ball = tr.ball(&TreeVertex::base(), 3);
    let reps: Vec<Vec<Mat2>> = ball
        .iter()
        .map(|v| {
            let m = tr.matrix(v);
            let mut out = vec![m.clone()];
            for _ in 0..3 {
                let lambda = RatFunc::new(random_poly(&mut rng, 2, 2).add(&Poly::t().pow(3, k), k), Poly::t(), k).unwrap();
                out.push(m.mul(&random_integral(&mut rng, &tr), k).scale(&lambda, k));
            }
            out
        })
        .collect();
    for (i, ri) in reps.iter().enumerate() {
        for m in ri {
            assert_eq!(tr.canonicalize(m).unwrap(), ball[i]);
        }
        for (j, rj) in reps.iter().enumerate() {
            for (a, b) in ri.iter().zip(rj) {
                assert_eq!(tr.matrix_equivalent(a, b).unwrap(), i == j);
            }
        }
    }
}

#[test]
fn random_pairs_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (q, place) in [(3, "t"), (5, "t+2"), (3, "inf"), (5, "t^2+2")] {
        let tr = tree(q, place);
        let k = tr.field();
        for n in 0..500 {
            let m1 = random_matrix(&mut rng, k);
            let m2 = if n % 2 == 0 { m1.mul(&random_integral(&mut rng, &tr), k) } else { random_matrix(&mut rng, k) };
            let same = tr.canonicalize(&m1).unwrap() == tr.canonicalize(&m2).unwrap();
            assert_eq!(same, tr.matrix_equivalent(&m1, &m2).unwrap());
            if n % 2 == 0 {
                assert!(same);
            }
        }
    }
}

#[test]
fn distance_matches_bfs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (q, place) in [(2, "t"), (3, "inf")] {
        let tr = tree(q, place);
        let ball = tr.ball(&TreeVertex::base(), 3);
        for _ in 0..200 {
            let a = &ball[rng.gen_range(0..ball.len())];
            let b = &ball[rng.gen_range(0..ball.len())];
            assert_eq!(Some(tr.distance(a, b)), tr.distance_bfs(a, b, 6));
            assert_eq!(tr.distance(a, b), tr.distance(b, a));
        }
    }
}

#[test]
fn different_places_are_rejected() {
    let a = tree(3, "t");
    let b = tree(3, "inf");
    let v = TreeVertex::base();
    assert!(btq_core::tree::distance((&a, &v), (&b, &v)).is_err());
    assert_eq!(btq_core::tree::distance((&a, &v), (&a, &v)).unwrap(), 0);
}
