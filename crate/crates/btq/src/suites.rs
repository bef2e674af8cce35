//! Named verification suites. Each suite returns a list of checks; `verify`
//! prints them as TAP and the acceptance test times them.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};

use btq_core::building::{antipodal_quotient, apartment_link, BuildingVertex};
use btq_core::bundles::{
    fixed_link_points, quotient_ball, stabilizer_descriptor, stabilizer_link_action, BundleClass, BundleContext, GroupFlavor, LinkActionKind,
    StabDescriptor,
};
use btq_core::complex::SimplicialComplex;
use btq_core::curve::{enumerate_closed_points, BaseCurve, ClosedPoint, CurveConfig, EllipticCurve};
use btq_core::ellfun::other_points;
use btq_core::equivariant::bar::{bar_homology, SignedPermModule, Subgroup};
use btq_core::equivariant::{
    e1_page, e2_and_total, equivariant_homology, group_homology, module_homology, FiniteGroup, GComplex,
};
use btq_core::exact::homology::{localization_law_holds, random_complex};
use btq_core::exact::lattice::image_basis;
use btq_core::exact::{Coeff, FgAbGroup, Field, IntMatrix, Mat2, Place, Poly, RatFunc, SparseMatrix};
use btq_core::model::{build_cryst, quotient_homology, sn_tilde_h1, special_vertices, units_presentation};
use btq_core::model::{CrystGroup, Flavor};
use btq_core::pic::{check_exactness, kummer, nagata, units_group, PicData, UNIT_BOUND};
use btq_core::points::{acyclicity_check, build_points_complex, de_exactness, rp1_low_degree, Variant};
use btq_core::tree::{Tree, TreeVertex};
use num_bigint::BigInt;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::commands::tree_ball_gcomplex;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub ok: bool,
}

fn check(name: impl Into<String>, ok: bool) -> Check {
    Check { name: name.into(), ok }
}

pub struct Suite {
    pub name: &'static str,
    pub about: &'static str,
    /// Acceptance criterion the suite backs.
    pub criterion: usize,
    pub run: fn(u64) -> Vec<Check>,
}

pub const SUITES: &[Suite] = &[
    Suite { name: "tree-balls", about: "ball sizes and lattice-class canonical forms", criterion: 1, run: tree_balls },
    Suite { name: "apartment-spheres", about: "apartment links are spheres, antipodal quotient is RP2", criterion: 2, run: apartment_spheres },
    Suite { name: "nagata", about: "exactness of the units/punctures/Picard sequence", criterion: 3, run: nagata_suite },
    Suite { name: "serre-ray", about: "SL2(F_q[t]) quotient of the tree is a ray", criterion: 4, run: serre_ray },
    Suite { name: "link-actions", about: "stabilizer actions on links, by brute force", criterion: 5, run: link_actions },
    Suite { name: "parabolic-components", about: "components of the parabolic quotient count K(C)", criterion: 6, run: parabolic_components },
    Suite { name: "model-betti", about: "model quotients are tori; special vertices", criterion: 7, run: model_betti },
    Suite { name: "equivariant-laws", about: "Shapiro, contractible and free-action laws, d1 squared", criterion: 8, run: equivariant_laws },
    Suite { name: "sn-h1", about: "first homology of the extended SN group after inverting 2", criterion: 9, run: sn_h1 },
    Suite { name: "points", about: "complexes of points on the projective line", criterion: 10, run: points_suite },
    Suite { name: "localization", about: "Z[1/2] homology drops exactly the 2-primary torsion", criterion: 11, run: localization },
];

/// Runs a suite, turning a panic into a failed check.
pub fn run_suite(suite: &Suite, seed: u64) -> Vec<Check> {
    match catch_unwind(AssertUnwindSafe(|| (suite.run)(seed))) {
        Ok(checks) if !checks.is_empty() => checks,
        Ok(_) => vec![check("suite produced no checks", false)],
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            vec![check(format!("suite panicked: {msg}"), false)]
        }
    }
}

/// TAP report for the given suites; the flag is true when every check passed.
pub fn run_tap(suites: &[&Suite], seed: u64) -> (String, bool) {
    let results: Vec<(&Suite, Vec<Check>)> = suites.iter().map(|s| (*s, run_suite(s, seed))).collect();
    let total: usize = results.iter().map(|(_, c)| c.len()).sum();
    let mut out = format!("TAP version 13\n1..{total}\n");
    let mut n = 0;
    let mut all = true;
    for (s, checks) in &results {
        out.push_str(&format!("# suite {} (seed {seed})\n", s.name));
        for c in checks {
            n += 1;
            all &= c.ok;
            out.push_str(&format!("{} {n} - {}: {}\n", if c.ok { "ok" } else { "not ok" }, s.name, c.name));
        }
    }
    (out, all)
}

fn field(q: u32) -> Field {
    Field::new(q).expect("field order")
}

fn p1(q: u32, punctures: &[&str]) -> CurveConfig {
    CurveConfig::projective_line(&field(q), punctures).expect("valid punctures")
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

// ---------------------------------------------------------------- trees

fn homogeneous_ball(q: u64, r: u32) -> u64 {
    if r == 0 {
        1
    } else {
        1 + (q + 1) * (q.pow(r) - 1) / (q - 1)
    }
}

fn random_poly(rng: &mut ChaCha8Rng, q: u32, deg: usize) -> Poly {
    Poly::from_coeffs((0..=deg).map(|_| rng.gen_range(0..q)).collect())
}

/// A random element of `GL_2(O)` at a finite place: elementary matrices
/// with polynomial entries and a constant diagonal unit.
fn random_integral(rng: &mut ChaCha8Rng, k: &Field) -> Mat2 {
    let mut g = Mat2::identity();
    for step in 0..4 {
        let x = RatFunc::from_poly(random_poly(rng, k.q(), 2));
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

fn tree_balls(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for q in [2u32, 3, 5] {
        for place in ["t", "inf"] {
            let k = field(q);
            let tree = Tree::new(&k, Place::parse(place, &k).unwrap());
            for r in 0..=4u32 {
                let ball = tree.ball(&TreeVertex::base(), r as u64);
                let distinct: BTreeSet<&TreeVertex> = ball.iter().collect();
                let expect = homogeneous_ball(q as u64, r);
                out.push(check(
                    format!("q={q} place={place} r={r}: {} vertices, expected {expect}", distinct.len()),
                    distinct.len() == ball.len() && ball.len() as u64 == expect,
                ));
            }
        }
    }
    // Every invertible matrix over F_2 with entries of degree <= 1.
    let k = field(2);
    let tree = Tree::new(&k, Place::parse("t", &k).unwrap());
    let entries: Vec<RatFunc> = (0..4u64).map(|i| RatFunc::from_poly(Poly::from_index(&k, i, 2))).collect();
    let mut mats = Vec::new();
    for a in &entries {
        for b in &entries {
            for c in &entries {
                for d in &entries {
                    let m = Mat2::new(a.clone(), b.clone(), c.clone(), d.clone());
                    if !m.det(&k).is_zero() {
                        mats.push(m);
                    }
                }
            }
        }
    }
    let canon: Vec<TreeVertex> = mats.iter().map(|m| tree.canonicalize(m).unwrap()).collect();
    let agree = (0..mats.len()).into_par_iter().all(|i| {
        (0..mats.len()).all(|j| (canon[i] == canon[j]) == tree.matrix_equivalent(&mats[i], &mats[j]).unwrap())
    });
    out.push(check(format!("all {} matrices of degree <= 1 over F_2: canonical forms agree with equivalence", mats.len()), agree));

    // Random representatives of every class in the radius-3 ball.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ball = tree.ball(&TreeVertex::base(), 3);
    let reps: Vec<Vec<Mat2>> = ball
        .iter()
        .map(|v| {
            let m = tree.matrix(v);
            let mut r = vec![m.clone()];
            for _ in 0..3 {
                let lambda = RatFunc::new(random_poly(&mut rng, 2, 2).add(&Poly::t().pow(3, &k), &k), Poly::t(), &k).unwrap();
                r.push(m.mul(&random_integral(&mut rng, &k), &k).scale(&lambda, &k));
            }
            r
        })
        .collect();
    let canon_ok = reps.iter().enumerate().all(|(i, r)| r.iter().all(|m| tree.canonicalize(m).unwrap() == ball[i]));
    out.push(check(format!("radius-3 ball over F_2: {} classes canonicalize from random representatives", ball.len()), canon_ok));
    let pair_ok = (0..reps.len()).into_par_iter().all(|i| {
        reps.iter()
            .enumerate()
            .all(|(j, rj)| reps[i].iter().zip(rj).all(|(a, b)| tree.matrix_equivalent(a, b).unwrap() == (i == j)))
    });
    out.push(check("radius-3 ball over F_2: matrix_equivalent separates classes exhaustively", pair_ok));
    out
}

// ----------------------------------------------------------- apartments

fn apartment_spheres(_: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for s in 1..=5 {
        let h = apartment_link(s).chain_complex().homology(Coeff::Z);
        let mut expect = vec![FgAbGroup::trivial(); s];
        if s == 1 {
            expect[0] = FgAbGroup::free(2);
        } else {
            expect[0] = FgAbGroup::free(1);
            expect[s - 1] = FgAbGroup::free(1);
        }
        let shown: Vec<String> = h.iter().map(FgAbGroup::pretty).collect();
        out.push(check(format!("apartment link s={s} has homology of S^{}: [{}]", s - 1, shown.join(", ")), h == expect));
    }
    let h = antipodal_quotient(3).chain_complex().homology(Coeff::Z);
    let expect = vec![FgAbGroup::free(1), FgAbGroup::cyclic(2), FgAbGroup::trivial()];
    out.push(check("antipodal quotient of S^2 has homology Z, Z/2, 0", h == expect));
    out
}

// --------------------------------------------------------------- nagata

pub fn curve_zoo() -> Vec<CurveConfig> {
    let mut out: Vec<CurveConfig> = [
        (2, vec!["t", "inf"]),
        (2, vec!["t^2+t+1"]),
        (2, vec!["t", "t+1", "inf"]),
        (3, vec!["t^2+1"]),
        (3, vec!["t^2+1", "inf"]),
        (5, vec!["t", "t+1", "inf"]),
        (5, vec!["t^2+2", "t"]),
    ]
    .into_iter()
    .map(|(q, ps)| p1(q, &ps))
    .collect();
    let k5 = field(5);
    for (a, b) in [(-1, 0), (1, 1)] {
        let e = EllipticCurve::short(&k5, a, b).unwrap();
        let pts = e.points();
        out.push(CurveConfig::elliptic(e.clone(), &[None]).unwrap());
        out.push(CurveConfig::elliptic(e.clone(), &[None, pts[1]]).unwrap());
        out.push(CurveConfig::elliptic(e, &[pts[1], pts[2]]).unwrap());
    }
    out
}

fn describe(c: &CurveConfig) -> String {
    let base = match &c.base {
        BaseCurve::ProjectiveLine => "P1".to_string(),
        BaseCurve::Elliptic(e) => format!("E{:?}", e.a),
    };
    let ps: Vec<String> = c.punctures.iter().map(|p| p.display(&c.k)).collect();
    format!("{base}/F_{} minus {{{}}}", c.k.q(), ps.join(", "))
}

/// Closed points away from the punctures, for checking that units have no
/// other zeros or poles.
fn test_points(pic: &PicData) -> Vec<ClosedPoint> {
    let c = &pic.config;
    let mut pts = match &c.base {
        BaseCurve::ProjectiveLine => enumerate_closed_points(&c.k, &c.base, 3).unwrap(),
        BaseCurve::Elliptic(e) => other_points(e, &[]),
    };
    pts.retain(|p| !c.punctures.contains(p));
    pts.truncate(50);
    pts
}

fn nagata_suite(_: u64) -> Vec<Check> {
    curve_zoo()
        .par_iter()
        .map(|c| {
            let name = describe(c);
            let Ok(pic) = nagata(c) else {
                return check(format!("{name}: Picard data"), false);
            };
            let Ok(units) = units_group(&pic, UNIT_BOUND) else {
                return check(format!("{name}: units found"), false);
            };
            let report = check_exactness(&pic, &units, &test_points(&pic));
            let exact = report.as_ref().map(|r| r.all()).unwrap_or(false);
            let ranks = units.units.len() == pic.unit_rank && pic.unit_rank == pic.ker_phi.cols();
            check(format!("{name}: exact at every node, unit rank {} = dim ker phi", pic.unit_rank), exact && ranks)
        })
        .collect()
}

// ------------------------------------------------------------ serre ray

/// Orbits of `SL_2(F_q[t])` on the radius-`r` ball around the standard
/// lattice at infinity, by union-find over elementary and diagonal
/// generators acting on a larger ball.
fn elementary_orbits(q: u32, r: u64, big: u64) -> usize {
    let k = field(q);
    let tree = Tree::new(&k, Place::Infinity);
    let ball = tree.ball(&TreeVertex::base(), big);
    let index: BTreeMap<&TreeVertex, usize> = ball.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut gens = Vec::new();
    for c in 1..k.q() {
        for j in 0..=big as i64 {
            let f = RatFunc::t().pow(j, &k).unwrap().scale(c, &k);
            gens.push(Mat2::new(RatFunc::one(), f.clone(), RatFunc::zero(), RatFunc::one()));
            gens.push(Mat2::new(RatFunc::one(), RatFunc::zero(), f, RatFunc::one()));
        }
        let cc = RatFunc::constant(c);
        gens.push(Mat2::diag(cc.clone(), cc.inv(&k).unwrap()));
    }
    let images: Vec<Vec<usize>> = ball
        .par_iter()
        .map(|v| {
            let m = tree.matrix(v);
            gens.iter().filter_map(|g| index.get(&tree.canonicalize(&g.mul(&m, &k)).unwrap()).copied()).collect()
        })
        .collect();
    let mut parent: Vec<usize> = (0..ball.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, img) in images.iter().enumerate() {
        for &j in img {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
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

fn serre_ray(_: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for q in [2u32, 3] {
        let ctx = BundleContext::new(&p1(q, &["inf"])).unwrap();
        for r in 0..=5usize {
            let qb = match quotient_ball(&ctx, r, GroupFlavor::Sl2) {
                Ok(qb) => qb,
                Err(e) => {
                    out.push(check(format!("q={q} r={r}: quotient ({e})"), false));
                    continue;
                }
            };
            let ns: Vec<u64> = qb.vertex_classes().iter().map(|c| c.n).collect();
            let stabs = qb.cells[0].iter().all(|c| {
                let n = c.classes[0].n as usize;
                let expect = if n == 0 { StabDescriptor::FullGL2k } else { StabDescriptor::TorusUnipotent { h: n + 1 } };
                c.stab == expect
            });
            let path = qb.count(1) == r
                && qb.cells.get(1).into_iter().flatten().all(|e| {
                    let ends: Vec<usize> = qb.edge_ends(e).into_iter().collect::<BTreeSet<_>>().into_iter().collect();
                    ends.len() == 2 && ends[1] == ends[0] + 1
                });
            out.push(check(
                format!("q={q} r={r}: {} vertex orbits forming a path, stabilizers FullGL2k then TorusUnipotent(n+1)", qb.count(0)),
                qb.count(0) == r + 1 && ns == (0..=r as u64).collect::<Vec<_>>() && stabs && path,
            ));
        }
    }
    // Independent count by union-find over generators.
    let cases: Vec<(u32, u64)> = (0..=5).map(|r| (2, r)).chain((0..=4).map(|r| (3, r))).collect();
    let counts: Vec<usize> = cases.par_iter().map(|&(q, r)| elementary_orbits(q, r, r + 2)).collect();
    for ((q, r), n) in cases.iter().zip(counts) {
        out.push(check(format!("q={q} r={r}: generator union-find finds {n} orbits"), n == *r as usize + 1));
    }
    out
}

// --------------------------------------------------------- link actions

/// Permutation of link positions in direction `i` induced by `g`, which
/// must fix `v`.
fn link_permutation(ctx: &BundleContext, v: &BuildingVertex, i: usize, g: &Mat2) -> Option<Vec<u64>> {
    let tree = &ctx.trees()[i];
    tree.link(&v[i])
        .into_iter()
        .map(|w| {
            let mut u = v.clone();
            u[i] = w;
            let img = ctx.act(g, &u);
            tree.link_position(&v[i], &img[i])
        })
        .collect()
}

fn orbits_of(perms: &[Vec<u64>], n: usize) -> Vec<Vec<u64>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start as u64];
        seen[start] = true;
        let mut i = 0;
        while i < orbit.len() {
            for p in perms {
                let y = p[orbit[i] as usize];
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out.sort();
    out
}

fn link_actions(_: u64) -> Vec<Check> {
    let cases: Vec<(u32, Vec<&str>, Vec<u64>)> = vec![
        (2, vec!["inf"], vec![0, 1, 2, 3]),
        (3, vec!["inf"], vec![0, 1, 2]),
        (4, vec!["inf"], vec![0, 1]),
        (5, vec!["inf"], vec![0, 1]),
        (4, vec!["t"], vec![0, 2]),
        (3, vec!["t", "inf"], vec![0, 1, 2]),
        (2, vec!["t^2+t+1"], vec![2]),
    ];
    let mut out = Vec::new();
    let mut classes = 0;
    let mut kinds = BTreeSet::new();
    for (q, ps, ns) in cases {
        let ctx = BundleContext::new(&p1(q, &ps)).unwrap();
        for n in ns {
            let b = BundleClass { n, twist: 0 };
            let name = format!("q={q} {ps:?} n={n}");
            let Ok(act) = stabilizer_link_action(&ctx, b) else {
                out.push(check(format!("{name}: link action"), false));
                continue;
            };
            let v = ctx.normal_vertex(&act.exponents);
            let mut ok = ctx.classify_vertex(&v) == b;
            // Orbits come from the full generating set, which for the trivial
            // bundle includes elements outside the Borel subgroup.
            let Ok(stab) = stabilizer_descriptor(&ctx, b) else {
                out.push(check(format!("{name}: stabilizer generators"), false));
                continue;
            };
            for (i, dir) in act.directions.iter().enumerate() {
                let qv = ctx.trees()[i].q_v() as usize;
                for g in &dir.generators {
                    let Some(p) = link_permutation(&ctx, &v, i, &g.matrix) else {
                        ok = false;
                        continue;
                    };
                    let fixed: Vec<u64> = (0..p.len() as u64).filter(|&x| p[x as usize] == x).collect();
                    let expect = match g.kind {
                        LinkActionKind::Standard => 2,
                        LinkActionKind::BoundaryBorel => 1,
                        LinkActionKind::Trivial => qv + 1,
                    };
                    // Standard fixes {0, ∞}, the Borel case fixes 0 alone.
                    let shape = match g.kind {
                        LinkActionKind::Standard => fixed == [0, qv as u64],
                        LinkActionKind::BoundaryBorel => fixed == [0],
                        LinkActionKind::Trivial => true,
                    };
                    ok &= fixed == g.fixed && fixed.len() == expect && shape;
                    ok &= fixed_link_points(&ctx, &v, i, &g.matrix) == fixed;
                    kinds.insert(g.kind);
                }
                let perms: Option<Vec<Vec<u64>>> =
                    stab.generators.iter().map(|g| link_permutation(&ctx, &v, i, g)).collect();
                let Some(perms) = perms else {
                    ok = false;
                    continue;
                };
                let mut predicted = dir.orbits.clone();
                predicted.iter_mut().for_each(|o| o.sort_unstable());
                predicted.sort();
                ok &= orbits_of(&perms, qv + 1) == predicted;
            }
            classes += 1;
            out.push(check(format!("{name}: generator kinds and stabilizer orbits match brute force"), ok));
        }
    }
    out.push(check(format!("{classes} classes checked, all three action kinds seen"), classes >= 10 && kinds.len() == 3));
    out
}

// ------------------------------------------------- parabolic components

fn parabolic_components(_: u64) -> Vec<Check> {
    let cases: Vec<(u32, Vec<&str>, usize)> = vec![
        (2, vec!["inf"], 1),
        (3, vec!["inf"], 1),
        (2, vec!["t", "inf"], 1),
        (3, vec!["t", "inf"], 1),
        (2, vec!["t^2+t+1"], 2),
        (3, vec!["t^2+1"], 2),
    ];
    cases
        .par_iter()
        .map(|(q, ps, expect)| {
            let ctx = BundleContext::new(&p1(*q, ps)).unwrap();
            let k_size = kummer(&ctx.pic.pic).map(|k| k.len()).unwrap_or(0);
            let comps = quotient_ball(&ctx, 4, GroupFlavor::Gl2).map(|qb| qb.components(true)).unwrap_or(0);
            check(
                format!("q={q} {ps:?}: {comps} parabolic components at radius 4, |K(C)| = {k_size}"),
                comps == k_size && k_size == *expect,
            )
        })
        .collect()
}

// --------------------------------------------------------------- models

fn betti_ok(g: &CrystGroup) -> bool {
    let r = g.rank();
    match quotient_homology(g, g.min_window(), Coeff::Z) {
        Ok(h) => (0..=g.s).all(|k| h.get(k).map_or(0, FgAbGroup::rank) == binom(r, k)),
        Err(_) => false,
    }
}

fn random_lattice(rng: &mut ChaCha8Rng) -> (usize, IntMatrix) {
    loop {
        let s = rng.gen_range(1..=4usize);
        let r = rng.gen_range(0..=s.min(3));
        if r == 0 {
            return (s, IntMatrix::zeros(s, 0));
        }
        let rows: Vec<Vec<i64>> = (0..s).map(|_| (0..r).map(|_| rng.gen_range(-1..=1)).collect()).collect();
        let m = IntMatrix::from_rows(&rows);
        if image_basis(&m).cols() == r {
            return (s, m);
        }
    }
}

fn model_betti(seed: u64) -> Vec<Check> {
    let configs: Vec<(u32, Vec<&str>)> = vec![
        (2, vec!["inf"]),
        (3, vec!["t", "inf"]),
        (3, vec!["t^2+1", "inf"]),
        (2, vec!["t", "t+1", "inf"]),
        (5, vec!["t", "t+1", "inf"]),
        (5, vec!["t", "t+1", "t+2", "inf"]),
    ];
    let mut groups: Vec<(String, usize, IntMatrix)> = Vec::new();
    for (q, ps) in &configs {
        let pic = nagata(&p1(*q, ps)).unwrap();
        let g = build_cryst(&pic, Flavor::T);
        groups.push((format!("q={q} {ps:?}"), g.s, g.units.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..12 {
        let (s, t) = random_lattice(&mut rng);
        groups.push((format!("synthetic #{i} in Z^{s}"), s, t));
    }
    groups
        .par_iter()
        .map(|(name, s, t)| {
            let mut ok = true;
            for flavor in [Flavor::T, Flavor::ST] {
                ok &= betti_ok(&CrystGroup::from_unit_lattice(*s, t, flavor));
            }
            let r = CrystGroup::from_unit_lattice(*s, t, Flavor::T).rank();
            let sn = CrystGroup::from_unit_lattice(*s, t, Flavor::SN);
            ok &= special_vertices(&sn).map(|v| v.len() == 1 << r).unwrap_or(false);
            check(format!("{name}, rank {r}: Betti numbers C({r},k) for T and ST, 2^{r} special vertices"), ok)
        })
        .collect()
}

// ---------------------------------------------------------- equivariant

fn table_cyclic(m: usize) -> FiniteGroup {
    FiniteGroup::from_table(&(0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect::<Vec<_>>()).unwrap()
}

/// Closure of permutation generators, as a multiplication table.
fn perm_group(gens: &[Vec<usize>]) -> FiniteGroup {
    let n = gens[0].len();
    let mut elems: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let p: Vec<usize> = (0..n).map(|x| elems[i][g[x]]).collect();
            if !elems.contains(&p) {
                elems.push(p);
            }
        }
        i += 1;
    }
    let index: BTreeMap<Vec<usize>, usize> = elems.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let table: Vec<Vec<usize>> = elems
        .iter()
        .map(|a| elems.iter().map(|b| index[&(0..n).map(|x| a[b[x]]).collect::<Vec<_>>()]).collect())
        .collect();
    FiniteGroup::from_table(&table).unwrap()
}

/// Every group of order at most 12 up to isomorphism that the engine needs,
/// plus cyclic groups as explicit tables.
fn small_groups() -> Vec<(String, FiniteGroup)> {
    let mut out: Vec<(String, FiniteGroup)> = (1..=12).map(|m| (format!("Z/{m}"), table_cyclic(m))).collect();
    out.push(("S3".into(), FiniteGroup::sl2(2).unwrap()));
    out.push(("V4".into(), FiniteGroup::torus_normalizer(3).unwrap()));
    out.push(("D4".into(), FiniteGroup::torus_normalizer(5).unwrap()));
    out.push(("D6".into(), FiniteGroup::torus_normalizer(7).unwrap()));
    out.push(("A4".into(), perm_group(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])));
    out.push(("Z2xZ6".into(), perm_group(&[vec![1, 0, 2, 3, 4, 5, 6, 7], vec![0, 1, 3, 4, 5, 6, 7, 2]])));
    out
}

fn subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0], (0..g.order()).collect()];
    for a in 1..g.order().min(6) {
        let h = g.generated(&[a]);
        if !out.contains(&h) {
            out.push(h);
        }
    }
    out
}

fn cone_over_cosets(g: &FiniteGroup, h: &[usize]) -> GComplex {
    let m = SignedPermModule::cosets(g, h);
    let k = m.rank;
    let facets: Vec<Vec<usize>> = (1..=k).map(|i| vec![0, i]).collect();
    let sc = SimplicialComplex::from_facets(k + 1, &facets);
    GComplex::from_simplicial(g.clone(), &sc, |a| {
        let mut p = vec![0];
        p.extend((0..k).map(|i| m.act[a][i].0 + 1));
        p
    })
    .unwrap()
}

fn simplex_on_cosets(g: &FiniteGroup, h: &[usize]) -> GComplex {
    let m = SignedPermModule::cosets(g, h);
    let k = m.rank;
    let sc = SimplicialComplex::from_facets(k, &[(0..k).collect()]);
    GComplex::from_simplicial(g.clone(), &sc, |a| (0..k).map(|i| m.act[a][i].0).collect()).unwrap()
}

/// Directed Cayley graph on two generators, with the free left action.
fn cayley_graph(g: &FiniteGroup) -> (GComplex, usize) {
    let n = g.order();
    let gens: Vec<usize> = (1..n).take(2).collect();
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|a| gens.iter().map(move |&s| (a, s))).collect();
    let pos: BTreeMap<(usize, usize), usize> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let bd = SparseMatrix::from_columns(
        n,
        edges
            .iter()
            .map(|&(a, s)| {
                let b = g.mul(a, s);
                if a == b {
                    vec![]
                } else {
                    vec![(a, -1), (b, 1)]
                }
            })
            .collect(),
    );
    let action = (0..n)
        .map(|h| {
            vec![
                (0..n).map(|a| (g.mul(h, a), 1)).collect(),
                edges.iter().map(|&(a, s)| (pos[&(g.mul(h, a), s)], 1)).collect(),
            ]
        })
        .collect();
    (GComplex::from_cells(g.clone(), vec![n, edges.len()], vec![bd], action).unwrap(), gens.len())
}

fn equivariant_laws(_: u64) -> Vec<Check> {
    let groups = small_groups();
    let mut out: Vec<Check> = groups
        .par_iter()
        .map(|(name, g)| {
            let mut ok = true;
            for h in subgroups(g) {
                let m = SignedPermModule::cosets(g, &h);
                let sub = Subgroup::new(g, &h);
                for p in 0..=2 {
                    let full = module_homology(g, &m, p, Coeff::Z);
                    let direct = bar_homology(&sub, &SignedPermModule::trivial(h.len()), p);
                    ok &= matches!((full, direct), (Ok(a), Ok(b)) if a == b);
                }
            }
            check(format!("Shapiro: {name}, induced modules from {} subgroups, p <= 2", subgroups(g).len()), ok)
        })
        .collect();

    out.extend(groups.par_iter().map(|(name, g)| {
        let expect: Vec<FgAbGroup> = (0..=2).map(|n| group_homology(g, n, Coeff::Z).unwrap()).collect();
        let mut ok = true;
        let mut pages = true;
        for h in subgroups(g) {
            let mut cases = vec![cone_over_cosets(g, &h)];
            if g.order() / h.len() <= 3 {
                cases.push(simplex_on_cosets(g, &h));
            }
            for x in &cases {
                let Ok(page) = e1_page(x, Coeff::Z, 2) else {
                    ok = false;
                    continue;
                };
                pages &= page.d1_squared_vanishes();
                let e2 = e2_and_total(&page);
                if let Some(t) = &e2.total {
                    ok &= t == &expect;
                }
                if g.order() <= 8 {
                    ok &= equivariant_homology(x, 2, Coeff::Z).map(|d| d == expect).unwrap_or(false);
                }
            }
        }
        check(format!("contractible law and d1 d1 = 0: {name} on cones and simplices over coset spaces"), ok && pages)
    }).collect::<Vec<_>>());

    out.extend(groups.par_iter().map(|(name, g)| {
        let (x, gens) = cayley_graph(g);
        let ok = match e1_page(&x, Coeff::Z, 2) {
            Ok(page) => {
                let total = e2_and_total(&page).total;
                let quotient = x.orbit_complex().map(|c| c.homology(Coeff::Z)).ok();
                page.d1_squared_vanishes()
                    && match (total, quotient) {
                        (Some(t), Some(qh)) => {
                            t[0] == FgAbGroup::free(1)
                                && t[1] == FgAbGroup::free(gens)
                                && t[2].is_trivial()
                                && t[..2] == qh[..2]
                                && (g.order() > 6 || equivariant_homology(&x, 2, Coeff::Z).map(|d| d == t).unwrap_or(false))
                        }
                        _ => false,
                    }
            }
            Err(_) => false,
        };
        check(format!("free-action law: {name} on its Cayley graph"), ok)
    }).collect::<Vec<_>>());

    // Tree balls are contractible and stabilized by finite matrix groups.
    // Larger matrix groups exceed the explicit-cycle cap.
    for (label, g, r) in [1, 2, 3].map(|r| ("GL2(F_2)", FiniteGroup::gl2(2).unwrap(), r)) {
        let expect: Vec<FgAbGroup> = (0..=2).map(|n| group_homology(&g, n, Coeff::Z).unwrap()).collect();
        let ok = tree_ball_gcomplex(g, r)
            .ok()
            .and_then(|x| e1_page(&x, Coeff::Z, 2).ok())
            .map(|page| page.d1_squared_vanishes() && e2_and_total(&page).total.as_deref().map_or(true, |t| t == expect))
            .unwrap_or(false);
        out.push(check(format!("contractible law: {label} on the radius-{r} tree ball"), ok));
    }
    out
}

// ---------------------------------------------------------------- SN H1

fn sn_h1(_: u64) -> Vec<Check> {
    let mut out: Vec<Check> = curve_zoo()
        .par_iter()
        .map(|c| {
            let name = describe(c);
            match nagata(c) {
                Ok(pic) => {
                    let (units, minus_one) = units_presentation(c.k.q() as u64, pic.unit_rank);
                    let half = sn_tilde_h1(&units, &minus_one, Coeff::ZHalf);
                    let integral = sn_tilde_h1(&units, &minus_one, Coeff::Z);
                    // Integrally the group is finite and killed by inverting 2.
                    let two_group = integral.order().is_some_and(|o| o.magnitude().count_ones() == 1);
                    check(format!("{name}: H1 = {} over Z, 0 over Z[1/2]", integral.pretty()), half.is_trivial() && two_group)
                }
                Err(_) => check(format!("{name}: Picard data"), false),
            }
        })
        .collect();
    // The rank-one model over F_3 has no first homology once 2 is inverted.
    let pic = nagata(&p1(3, &["t", "inf"])).unwrap();
    let g = build_cryst(&pic, Flavor::SN);
    let ok = quotient_homology(&g, g.min_window(), Coeff::ZHalf)
        .map(|h| h[0] == FgAbGroup::free(1) && h.get(1).map_or(true, FgAbGroup::is_trivial))
        .unwrap_or(false);
    out.push(check("SN model for P1/F_3 minus {0, inf}: H0 = Z[1/2], H1 = 0 over Z[1/2]", ok));
    out
}

// --------------------------------------------------------------- points

fn points_suite(_: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let cases: Vec<(u32, usize, Variant)> = [2u32, 3, 4, 5, 7]
        .iter()
        .flat_map(|&q| (1..=4.min(q as usize)).flat_map(move |n| [(q, n, Variant::Plain), (q, n, Variant::Alternating)]))
        .collect();
    let squares: Vec<bool> = cases
        .par_iter()
        .map(|&(q, n, v)| match build_points_complex(q, n, v) {
            Ok(c) => (1..n as i64).all(|d| c.complex.boundary(d).mul(&c.complex.boundary(d + 1)).is_zero()),
            Err(_) => false,
        })
        .collect();
    out.push(check(format!("d^2 = 0 on {} plain and alternating complexes, q <= 7, N <= 4", cases.len()), squares.iter().all(|&x| x)));

    for (q, n, v) in [(3u32, 3usize, Variant::Plain), (5, 4, Variant::Plain), (7, 6, Variant::Alternating)] {
        let ok = build_points_complex(q, n, v)
            .map(|c| {
                let r = acyclicity_check(&c);
                let covered: BTreeSet<usize> = r.checked.iter().map(|x| x.0).collect();
                r.acyclic_in_range && (0..=q as usize - 2).all(|d| covered.contains(&d))
            })
            .unwrap_or(false);
        out.push(check(format!("q={q}: acyclic in degrees <= {}", q - 2), ok));
    }
    for q in [3u32, 5] {
        let ok = de_exactness(q).map(|r| r.chain_maps && r.composite_zero && r.exact_half && r.exact_mod3).unwrap_or(false);
        out.push(check(format!("q={q}: D/E sequence exact after inverting 2 and mod 3"), ok));
    }
    for q in [2u32, 3, 5] {
        let ok = rp1_low_degree(q, 1).map(|r| r.groups.len() == 2 && r.groups.iter().all(FgAbGroup::is_trivial)).unwrap_or(false);
        out.push(check(format!("q={q}: RP1_0 = RP1_1 = 0"), ok));
    }
    out
}

// --------------------------------------------------------- localization

fn localization(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let complexes: Vec<_> = (0..100).map(|_| random_complex(&mut || rng.next_u64())).collect();
    let good = complexes.par_iter().filter(|c| localization_law_holds(c)).count();
    let torsion = complexes
        .iter()
        .filter(|c| c.homology(Coeff::Z).iter().any(|g| g.torsion().iter().any(|t| (t % 2u32) == BigInt::from(0))))
        .count();
    vec![
        check(format!("{good}/100 random complexes satisfy the Z[1/2] law"), good == 100),
        check(format!("{torsion} of them carry 2-primary torsion"), torsion > 0),
    ]
}
