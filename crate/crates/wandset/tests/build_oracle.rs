//! The bland spine of every build against an independent enumeration of
//! the pure hierarchy by Ackermann codes: a hereditarily finite set is the
//! number whose binary digits mark its members.

use wandset::wandspec::SHIPPED_SPECS;
use wandset::{build, spec_by_name, Caps, Fragment, ObjKind};

/// Codes of the sets of rank below `n`: `0..2↑↑n`.
fn pure_level(n: usize) -> Vec<u64> {
    let mut size = 0u64;
    for _ in 0..n {
        size = 1u64 << size;
    }
    (0..size).collect()
}

fn rank(code: u64) -> usize {
    (0..64).filter(|b| code >> b & 1 == 1).map(|b| rank(b) + 1).max().unwrap_or(0)
}

/// Ackermann code of a hereditarily bland object, `None` for anything else.
fn code(f: &Fragment, id: usize) -> Option<u64> {
    match &f.obj(id).kind {
        ObjKind::Bland(m) => m.iter().try_fold(0u64, |acc, &x| code(f, x).map(|c| acc | 1 << c)),
        ObjKind::Tapped(_) => None,
    }
}

#[test]
fn pure_builds_are_the_pure_levels() {
    for depth in 0..=4 {
        let f = build(spec_by_name("pure").unwrap(), depth, Caps::default()).unwrap();
        let mut codes: Vec<u64> = (0..f.len()).map(|i| code(&f, i).unwrap()).collect();
        for (i, &c) in codes.iter().enumerate() {
            assert_eq!(f.obj(i).ordrank, rank(c), "depth {depth}, {}", f.render(i));
        }
        codes.sort();
        assert_eq!(codes, pure_level(depth), "depth {depth}");
    }
}

#[test]
fn hereditarily_bland_part_of_every_build_is_a_pure_level() {
    for spec in SHIPPED_SPECS {
        for depth in 0..=3 {
            let f = build(spec_by_name(spec).unwrap(), depth, Caps::default()).unwrap();
            let mut codes: Vec<u64> = (0..f.len()).filter_map(|i| code(&f, i)).collect();
            codes.sort();
            assert_eq!(codes, pure_level(depth), "{spec}@{depth}");
            for i in 0..f.len() {
                assert_eq!(f.hereditarily_bland(i), code(&f, i).is_some(), "{spec}@{depth} {}", f.render(i));
            }
        }
    }
}

#[test]
fn objects_are_in_canonical_order() {
    for spec in SHIPPED_SPECS {
        let f = build(spec_by_name(spec).unwrap(), 3, Caps::default()).unwrap();
        for i in 1..f.len() {
            let (a, b) = (f.obj(i - 1), f.obj(i));
            let key = |o: &wandset::universe::Obj| (o.ordrank, matches!(o.kind, ObjKind::Tapped(_)));
            assert!(key(a) <= key(b), "{spec}: {} before {}", f.render(i - 1), f.render(i));
            if key(a) == key(b) {
                // bland sets go by cardinality first
                let ok = match (&a.kind, &b.kind) {
                    (ObjKind::Bland(x), ObjKind::Bland(y)) => (x.len(), x) < (y.len(), y),
                    (x, y) => x < y,
                };
                assert!(ok, "{spec}: {} and {}", f.render(i - 1), f.render(i));
            }
        }
    }
}
