use btq_core::curve::{enumerate_closed_points, BaseCurve, ClosedPoint, CurveConfig, EllipticCurve};
use btq_core::ellfun::other_points;
use btq_core::exact::{FgAbGroup, Field};
use btq_core::pic::{check_exactness, kummer, nagata, units_group, PicData, UNIT_BOUND};
use num_bigint::BigInt;

fn configs() -> Vec<CurveConfig> {
    let mut out = Vec::new();
    for (q, ps) in [
        (2, vec!["t", "inf"]),
        (2, vec!["t^2+t+1"]),
        (2, vec!["t", "t+1", "inf"]),
        (3, vec!["t^2+1"]),
        (3, vec!["t^2+1", "inf"]),
        (5, vec!["t", "t+1", "inf"]),
        (5, vec!["t^2+2", "t"]),
    ] {
        let k = Field::new(q).unwrap();
        out.push(CurveConfig::projective_line(&k, &ps).unwrap());
    }
    let k5 = Field::new(5).unwrap();
    for (a, b) in [(-1, 0), (1, 1)] {
        let e = EllipticCurve::short(&k5, a, b).unwrap();
        let pts = e.points();
        out.push(CurveConfig::elliptic(e.clone(), &[None]).unwrap());
        out.push(CurveConfig::elliptic(e.clone(), &[None, pts[1]]).unwrap());
        out.push(CurveConfig::elliptic(e.clone(), &[pts[1], pts[2]]).unwrap());
    }
    out
}

fn others(pic: &PicData) -> Vec<ClosedPoint> {
    let c = &pic.config;
    let mut pts = match &c.base {
        BaseCurve::ProjectiveLine => enumerate_closed_points(&c.k, &c.base, 3).unwrap(),
        BaseCurve::Elliptic(e) => other_points(e, &[]),
    };
    pts.retain(|p| !c.punctures.contains(p));
    pts.truncate(50);
    pts
}

#[test]
fn sequences_are_exact() {
    for c in configs() {
        let pic = nagata(&c).unwrap();
        let units = units_group(&pic, UNIT_BOUND).unwrap();
        assert_eq!(units.units.len(), pic.unit_rank);
        let report = check_exactness(&pic, &units, &others(&pic)).unwrap();
        assert!(report.all(), "{report:?} for {:?}", c.punctures);
        let ks = kummer(&pic.pic).unwrap();
        let order = pic.pic.order().unwrap();
        let two = pic.pic.torsion_killed_by(2);
        assert_eq!(BigInt::from(2 * ks.len()), order + two.clone());
        assert_eq!(BigInt::from(ks.fixed_points()), two);
    }
}

#[test]
fn documented_examples() {
    let k3 = Field::new(3).unwrap();
    let k5 = Field::new(5).unwrap();
    let e = EllipticCurve::short(&k5, -1, 0).unwrap();
    let pic = nagata(&CurveConfig::elliptic(e.clone(), &[None]).unwrap()).unwrap();
    assert_eq!(pic.pic.order().unwrap(), BigInt::from(e.points().len()));
    assert_eq!(&pic.pic, pic.point_group.as_ref().unwrap().group());
    assert_eq!(pic.unit_rank, 0);
    let two_points = nagata(&CurveConfig::projective_line(&k3, &["t^2+1"]).unwrap()).unwrap();
    assert_eq!(two_points.pic, FgAbGroup::cyclic(2));
    assert_eq!(kummer(&two_points.pic).unwrap().len(), 2);
    // Degree-one points of the cubic are its rational points.
    let pts = enumerate_closed_points(&k5, &BaseCurve::Elliptic(e.clone()), 1).unwrap();
    assert_eq!(pts.len(), e.points().len());
    // Units of P¹ minus {0, 1, ∞}: t and t - 1.
    let c = CurveConfig::projective_line(&k5, &["t", "t+4", "inf"]).unwrap();
    let u = units_group(&nagata(&c).unwrap(), UNIT_BOUND).unwrap();
    assert_eq!(u.units.len(), 2);
}
