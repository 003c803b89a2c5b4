use std::sync::Arc;

use wandset::instances::fixtures::{AsymmetricSpec, PeeksAheadSpec};
use wandset::wandspec::{check_stage_stability, check_wellbehaved, Mode, SHIPPED_SPECS};
use wandset::{build, spec_by_name, Caps, Error, SpecRef};

#[test]
fn shipped_specs_are_stable_from_depth_two_to_four() {
    for spec in SHIPPED_SPECS {
        let s = spec_by_name(spec).unwrap();
        let small = build(s.clone(), 2, Caps::default()).unwrap();
        let big = build(s, 4, Caps::default()).unwrap();
        let r = check_stage_stability(&small, &big).unwrap();
        assert!(r.passed(), "{spec}: {r}");
    }
}

#[test]
fn peeking_ahead_is_flagged() {
    let s: SpecRef = Arc::new(PeeksAheadSpec::new());
    let small = build(s.clone(), 2, Caps::default()).unwrap();
    let big = build(s, 4, Caps::default()).unwrap();
    match check_stage_stability(&small, &big) {
        Err(Error::StabilityViolation(msg)) => assert!(msg.starts_with("Dom(0, {})"), "{msg}"),
        other => panic!("not flagged: {other:?}"),
    }
}

#[test]
fn asymmetric_equiv_is_repaired_by_the_wrapper() {
    let f = build(Arc::new(AsymmetricSpec::new()), 3, Caps::default()).unwrap();
    let raw = check_wellbehaved(&f, Mode::Raw, 2);
    assert!(!raw.get("equiv-euclidean").unwrap().passed, "{raw}");
    let wrapped = check_wellbehaved(&f, Mode::Wrapped, 2);
    assert!(wrapped.passed(), "{wrapped}");
}

#[test]
fn shipped_specs_are_well_behaved() {
    for spec in SHIPPED_SPECS {
        let f = build(spec_by_name(spec).unwrap(), 3, Caps::default()).unwrap();
        let r = check_wellbehaved(&f, Mode::Wrapped, 2);
        assert!(r.passed(), "{spec}: {r}");
    }
}
