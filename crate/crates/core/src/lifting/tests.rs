use super::*;
use crate::groebner::buchberger;

fn ring(vars: &[&str]) -> Ring {
    Ring::new(vars.iter().copied()).unwrap()
}

fn pair(vars: &[&str], f: &str, fp: &str, k: u32) -> (Ring, FamilyPair) {
    let r = ring(vars);
    let p = FamilyPair::new(
        Presentation::parse(&r, f).unwrap(),
        Presentation::parse(&r, fp).unwrap(),
        k,
        None,
    )
    .unwrap();
    (r, p)
}

#[test]
fn pair_validation() {
    let r = ring(&["x", "y"]);
    let f = Presentation::parse(&r, "x*y - t^2").unwrap();
    let bad = Presentation::parse(&r, "x*y - t^2 - t^3").unwrap();
    assert!(matches!(
        FamilyPair::new(f.clone(), bad, 9, None),
        Err(Error::Hypothesis { .. })
    ));
    let two = Presentation::parse(&r, "x, y").unwrap();
    assert!(matches!(FamilyPair::new(f, two, 9, None), Err(Error::Invalid(_))));
}

#[test]
fn lift_equations_examples() {
    let (r, p) = pair(&["x", "y"], "x*y - t^2", "x*y - t^2 - t^9", 9);
    assert_eq!(lift_equations(&p).unwrap(), vec![r.parse("-1").unwrap()]);
    let (r, p) = pair(&["x", "y"], "x*y - t", "x*y - t - t^5*x", 5);
    assert_eq!(lift_equations(&p).unwrap(), vec![r.parse("-x").unwrap()]);
    let (r, p) = pair(&["x", "y"], "x*y - t", "x*y - t", 5);
    assert_eq!(lift_equations(&p).unwrap(), vec![r.zero()]);
}

#[test]
fn lift_relation_examples() {
    let r = ring(&["x", "y"]);
    let xy = Presentation::parse(&r, "x, y").unwrap();
    let a = r.parse_list("y + t^3, -x").unwrap();
    assert_eq!(lift_relation(&a, &xy, 3).unwrap(), r.parse_list("y, -x").unwrap());
    let exact = r.parse_list("y, -x").unwrap();
    assert_eq!(lift_relation(&exact, &xy, 3).unwrap(), exact);
    let f = Presentation::parse(&r, "x*y - t^2").unwrap();
    let out = lift_relation(&[r.parse("t^5").unwrap()], &f, 5).unwrap();
    assert_eq!(out, vec![r.zero()]);
    assert!(matches!(
        lift_relation(&[r.parse("t^4").unwrap()], &f, 5),
        Err(Error::Hypothesis { .. })
    ));
}

#[test]
fn single_step_on_normal_crossing() {
    let (r, p) = pair(&["x", "y"], "x*y - t^2", "x*y - t^2 - t^9", 9);
    let bounds = LiftBounds { n: 2, m: 0 };
    let h = MapTruncation::identity(2, p.window(9));
    let (next, record) = lift_iso_step(&h, &p, &bounds).unwrap();
    assert_eq!(next.order(), 10);
    assert!(!record.skipped);
    for th in &record.theta {
        assert!(th.t_valuation().is_none_or(|v| v >= 5));
    }
    let image = next.apply(&r.parse("x*y - t^2 - t^9").unwrap());
    let gb = buchberger(&r.parse_list("x*y - t^2, t^10").unwrap(), &MonomialOrder::block()).unwrap();
    assert!(gb.contains(&image));
}

#[test]
fn smooth_step_is_exact() {
    let (r, p) = pair(&["z1"], "z1 - t", "z1 - t - t^6", 6);
    let h = MapTruncation::identity(1, p.window(6));
    let (next, _) = lift_iso_step(&h, &p, &LiftBounds { n: 0, m: 0 }).unwrap();
    assert_eq!(next.images()[0], r.parse("z1 + t^6").unwrap());
}

#[test]
fn identical_pair_needs_no_corrections() {
    let (_, p) = pair(&["x", "y"], "x*y - t^2", "x*y - t^2", 9);
    let out = formal_lift(&p, 12, 16).unwrap();
    assert_eq!(out.map, MapTruncation::identity(2, p.window(12)));
    assert!(out.certificate.steps.iter().all(|s| s.skipped));
}

#[test]
fn threshold_is_enforced() {
    let (_, p) = pair(&["x", "y"], "x*y - t^2", "x*y - t^2 - t^8", 8);
    assert!(matches!(formal_lift(&p, 12, 16), Err(Error::Hypothesis { .. })));
}

#[test]
fn normal_crossing_lift_to_sixteen() {
    let (r, p) = pair(&["x", "y"], "x*y - t^2", "x*y - t^2 - t^9", 9);
    let out = formal_lift(&p, 16, 64).unwrap();
    assert_eq!(out.map.order(), 16);
    assert!(out.certificate.agreement_order >= 5);
    assert!(out.map.agrees_with_identity(&p.window(5)));
    verify_lift(&out.map, &p, 16).unwrap();

    // absorb the perturbation into x: x -> (1 + t^7) x
    let closed = MapTruncation::new(vec![r.parse("x + t^7*x").unwrap(), r.parse("y").unwrap()], p.window(16));
    verify_lift(&closed, &p, 16).unwrap();

    let identity = MapTruncation::identity(2, p.window(16));
    assert!(matches!(
        verify_lift(&identity, &p, 16),
        Err(Error::Verification { index: 0, .. })
    ));
}

#[test]
fn smooth_lift() {
    let (r, p) = pair(&["z1"], "z1 - t", "z1 - t - t^6", 6);
    let out = formal_lift(&p, 12, 16).unwrap();
    assert_eq!(out.map.images()[0], r.parse("z1 + t^6").unwrap());
}

#[test]
fn session_tower_is_coherent() {
    let (_, p) = pair(&["x", "y"], "x*y - t", "x*y - t - t^5*x", 5);
    let mut s = LiftSession::new(p, LiftBounds { n: 1, m: 0 }).unwrap();
    s.run_to(12).unwrap();
    for l in 1..9 {
        assert_eq!(s.psi(l + 1).unwrap().restrict(l), s.psi(l).unwrap());
    }
    assert!(s.psi(11).is_none());
}

#[test]
fn tampered_certificate_is_rejected() {
    let (r, p) = pair(&["x", "y"], "x*y - t^2", "x*y - t^2 - t^9", 9);
    let out = formal_lift(&p, 12, 64).unwrap();
    let mut cert = out.certificate.clone();
    cert.cofactors[0] = &cert.cofactors[0] + &r.one();
    assert!(cert.check(&out.map, &p).is_err());
}

#[test]
fn artin_system_shape_and_residual() {
    let (r, p) = pair(&["z1"], "z1 - t", "z1 - t - t^6", 6);
    let sys = emit_artin_system(&p, &r).unwrap();
    assert_eq!(sys.unknowns, vec!["a1".to_string(), "b1_1".to_string()]);
    assert_eq!(
        sys.render(),
        vec!["a1 - t - t^6 - z1*b1_1 + t*b1_1".to_string()]
            .into_iter()
            .map(|s| {
                let e = sys.ring.parse(&s).unwrap();
                sys.ring.render(&e)
            })
            .collect::<Vec<_>>()
    );
    let res = sys
        .residuals(&[r.parse("z1 + t^6").unwrap()], &[vec![r.one()]])
        .unwrap();
    assert!(res[0].is_zero());

    let (r, p) = pair(&["x", "y"], "x*y - t^2", "x*y - t^2 - t^9", 9);
    let out = formal_lift(&p, 16, 64).unwrap();
    let sys = emit_artin_system(&p, &r).unwrap();
    let expected = sys.ring.parse("a1*a2 - t^2 - t^9 - b1_1*(x*y - t^2)").unwrap();
    assert_eq!(sys.equations[0], expected);
    let res = sys.residuals(out.map.images(), &out.certificate.quotients).unwrap();
    assert!(res[0].t_valuation().is_none_or(|v| v >= 16));
}

#[test]
fn divisor_lift() {
    let r = ring(&["x", "y", "w"]);
    let d = Divisor { variable: 2, power: 5 };
    let p = FamilyPair::new(
        Presentation::parse(&r, "x*y - w^2*t").unwrap(),
        Presentation::parse(&r, "x*y - w^2*t - t^5*w^5").unwrap(),
        5,
        Some(d),
    )
    .unwrap();
    let bounds = lift_bounds(&p, 16).unwrap();
    assert_eq!((bounds.n, bounds.m), (1, 1));
    let out = formal_lift_with(&p, 8, bounds).map_err(|e| e.to_string()).unwrap();
    let wimg = &out.map.images()[2];
    assert!(wimg.terms().iter().all(|(m, _)| m.z_exponents()[2] >= 1));
    verify_lift(&out.map, &p, 8).unwrap();
}
