//! Structural checks run over a built fragment.

use crate::report::{Check, Report};
use crate::universe::{Fragment, ObjId, ObjKind};
use crate::wandspec::{check_wellbehaved, Mode, SetQuery};

/// Largest member count handed to the subset-search oracles.
const ORACLE_BITS: usize = 12;

/// Wevels, found-at ranks, taps, decomposition and the bland hierarchy.
pub fn check_core(frag: &Fragment) -> Report {
    let mut r = Report::new("core");
    let n = frag.len();
    let wev = frag.wevels().to_vec();
    let is_wev = |x: ObjId| wev.contains(&x);

    let mut order = Check::new("wevels-well-ordered");
    for (i, &s) in wev.iter().enumerate() {
        for (j, &t) in wev.iter().enumerate() {
            let (si, ti) = (frag.members(t).contains(&s), frag.members(s).contains(&t));
            order.case((i < j) == si && (j < i) == ti, || format!("wevels {i} and {j}"));
        }
        let cp = frag.cpot_of(&wev[..i]);
        order.case(matches!(&cp, Ok(p) if p == frag.members(s)), || format!("wevel {i} is not the cpot of the earlier ones"));
    }
    r.push(order);

    let mut rec = Check::new("wevel-recognizer");
    let mut oracle = Check::new("wevel-wistory-oracle");
    if frag.exhaustive() {
        for x in 0..n {
            if !frag.is_bland(x) {
                continue;
            }
            let v = frag.is_wevel(x);
            rec.case(v == is_wev(x), || format!("{} recognized as {v}", frag.render(x)));
            if let Some(o) = frag.is_wevel_by_wistory(x, ORACLE_BITS) {
                oracle.case(o == v, || format!("{}: wistory search says {o}", frag.render(x)));
            }
        }
        r.push(rec);
        r.push(oracle);
    } else {
        r.push(rec.with_note("skipped on a sampled fragment"));
        r.push(oracle.with_note("skipped on a sampled fragment"));
    }

    let mut l1 = Check::new("wevof-and-cpot-exist");
    let mut l2 = Check::new("not-in-own-wevel");
    let mut l3 = Check::new("wevel-subset-iff-not-member");
    let mut l4 = Check::new("wevel-is-own-wevel");
    let mut l5 = Check::new("wevof-monotone-under-subset");
    let mut l6 = Check::new("wevof-monotone-under-member");
    let mut l7 = Check::new("not-self-member");
    let wevof: Vec<Option<usize>> = (0..n).map(|a| frag.wevof_index(a).ok()).collect();
    let subset = |x: ObjId, y: ObjId| frag.members(x).iter().all(|m| frag.members(y).binary_search(m).is_ok());
    for a in 0..n {
        let wa = wevof[a];
        let cp = frag.cpot_set(a);
        l1.case(
            match (wa, &cp) {
                (Some(i), Ok(c)) => frag.find_bland(c).is_some() && c.iter().all(|x| frag.members(wev[i]).binary_search(x).is_ok()),
                (Some(_), Err(_)) => !frag.is_bland(a),
                (None, _) => false,
            },
            || frag.render(a),
        );
        if let Some(i) = wa {
            l2.case(!frag.members(wev[i]).contains(&a), || frag.render(a));
            l6.case(
                frag.members(a).iter().all(|&b| matches!(wevof[b], Some(j) if frag.members(wev[i]).contains(&wev[j]))),
                || frag.render(a),
            );
        }
        l7.case(!frag.members(a).contains(&a), || frag.render(a));
    }
    for (i, &s) in wev.iter().enumerate() {
        l4.case(wevof[s] == Some(i), || format!("wevel {i}"));
        for &t in &wev {
            l3.case(subset(t, s) == !frag.members(t).contains(&s), || format!("{} {}", frag.render(t), frag.render(s)));
        }
    }
    if frag.exhaustive() {
        for a in (0..n).filter(|&a| frag.is_bland(a)) {
            for b in (0..n).filter(|&b| frag.is_bland(b) && subset(b, a)) {
                l5.case(
                    matches!((wevof[a], wevof[b]), (Some(i), Some(j)) if j <= i),
                    || format!("{} within {}", frag.render(b), frag.render(a)),
                );
            }
        }
    }
    for c in [l1, l2, l3, l4, l5, l6, l7] {
        r.push(c);
    }

    let mut potent = Check::new("wevels-wand-potent");
    let mut trans = Check::new("wevels-wand-transitive");
    for &s in &wev {
        if let Ok(cp) = frag.cpot_set(s) {
            potent.case(cp.iter().all(|x| frag.members(s).binary_search(x).is_ok()), || frag.render(s));
        }
        trans.case(frag.members(s).iter().all(|&x| frag.cfoundat(x, s)), || frag.render(s));
    }
    r.push(potent);
    r.push(trans);

    let mut ranklaw = Check::new("tap-rank-law");
    let mut mini = Check::new("minimal-rank-tap");
    let wr = frag.wrapped();
    for c in 0..n {
        let ObjKind::Tapped(class) = &frag.obj(c).kind else { continue };
        let argrank = frag.ordrank(class[0].1);
        ranklaw.case(
            class.iter().all(|&(_, a)| frag.ordrank(a) == argrank) && frag.ordrank(c) == argrank + 1,
            || frag.render(c),
        );
        mini.case(
            class.iter().all(|&(w, a)| wr.minirank(w, a))
                && frag.tap_sources(c).iter().all(|&(_, b)| frag.ordrank(b) >= argrank),
            || frag.render(c),
        );
    }
    r.push(ranklaw);
    r.push(mini);

    let mut round = Check::new("decompose-roundtrip");
    for a in 0..n {
        let (base, path) = frag.decompose(a);
        round.case(
            frag.is_bland(base) && matches!(frag.bigtap(base, &path), Ok(b) if b == a),
            || frag.render(a),
        );
    }
    r.push(round);

    let mut quot = Check::new("tap-identity-is-equiv");
    let taps: Vec<((usize, ObjId), ObjId)> = frag.tap_table().collect();
    for &((w, a), x) in &taps {
        for &((u, b), y) in &taps {
            quot.case((x == y) == wr.equiv(w, a, u, b), || {
                format!("*{w} {} and *{u} {}", frag.render(a), frag.render(b))
            });
        }
    }
    r.push(quot);

    let mut hb = Check::new("hereditarily-bland-iff-in-pure-levels");
    let mut hered = Check::new("hereditarily-bland-recursion");
    if frag.exhaustive() {
        for a in 0..n {
            let h = frag.hereditarily_bland(a);
            hb.case(h == frag.vfrom(&[], a), || frag.render(a));
            let rec = frag.is_bland(a) && frag.members(a).iter().all(|&x| frag.hereditarily_bland(x));
            hered.case(h == rec, || frag.render(a));
        }
        r.push(hb);
        r.push(hered);
    } else {
        r.push(hb.with_note("skipped on a sampled fragment"));
        r.push(hered.with_note("skipped on a sampled fragment"));
    }

    r.push(check_levels(frag));

    let good = check_wellbehaved(frag, Mode::Wrapped, frag.depth().saturating_sub(1));
    r.extend(good);
    r
}

/// Levels over `∅` and over the contents of the wevel of stage 2, computed
/// by recursion, against the history-search recognizer.
fn check_levels(frag: &Fragment) -> Check {
    let mut c = Check::new("levels-recursion-vs-recognizer");
    if !frag.exhaustive() {
        return c.with_note("skipped on a sampled fragment");
    }
    let mut bases: Vec<Vec<ObjId>> = vec![Vec::new()];
    if let Some(w) = frag.wevel(2) {
        bases.push(frag.members(w).to_vec());
    }
    for u in &bases {
        let mut levels: Vec<Vec<ObjId>> = Vec::new();
        for alpha in 0.. {
            match frag.tlev(alpha, u) {
                Ok(l) => {
                    if let Some(v) = frag.is_level_u(u, &l, ORACLE_BITS) {
                        c.case(v, || format!("level {alpha} over {u:?} rejected"));
                    }
                    levels.push(l);
                }
                Err(_) => break,
            }
        }
        // and bland sets that are not levels must be rejected
        for t in 0..frag.len() {
            if !frag.is_bland(t) {
                continue;
            }
            let m = frag.members(t);
            if let Some(v) = frag.is_level_u(u, m, ORACLE_BITS) {
                let known = levels.iter().any(|l| l == m);
                c.case(v == known, || format!("{} vs base {u:?}", frag.render(t)));
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{ChurchSpec, ConwaySpec, FunSpec, PureSpec};
    use crate::universe::{build, Caps};
    use std::sync::Arc;

    #[test]
    fn core_suite_small_fragments() {
        for spec in [
            Arc::new(PureSpec) as crate::wandspec::SpecRef,
            Arc::new(ConwaySpec::new()),
            Arc::new(FunSpec::partial_fun()),
            Arc::new(FunSpec::multiset()),
            Arc::new(ChurchSpec::new(2)),
        ] {
            let f = build(spec, 3, Caps::default()).unwrap();
            let r = check_core(&f);
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn pure_recognizer_rejects_non_wevel() {
        let f = build(Arc::new(PureSpec), 4, Caps::default()).unwrap();
        let x = f.locate_pure(&"{{{}}}".parse().unwrap()).unwrap();
        assert!(!f.is_wevel(x));
        assert_eq!(f.is_wevel_by_wistory(x, 12), Some(false));
        assert!(f.is_wevel(f.locate_pure(&"{}".parse().unwrap()).unwrap()));
    }
}
