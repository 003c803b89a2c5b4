//! Church's universal-set theory: a complement wand `0` and cardinal wands
//! `1..=k`, with the expansive membership and tapping built on top.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::pureset::PureSet;
use crate::report::{Check, Report};
use crate::universe::{Fragment, ObjId};
use crate::wandspec::{SetQuery, WandId, WandSpec};

/// A witness for `a ≈_n b`: `chain[j]` is `f_{n-1-j}` as sorted pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NEquivWitness {
    pub n: usize,
    pub chain: Vec<Vec<(usize, usize)>>,
}

/// Member list of `⋃^n a`. Non-bland objects contribute nothing.
pub fn union_n(q: &dyn SetQuery, a: usize, n: usize) -> Vec<usize> {
    let mut cur = q.members(a).to_vec();
    for _ in 0..n {
        let mut next: Vec<usize> = cur.iter().flat_map(|&x| q.members(x).iter().copied()).collect();
        next.sort();
        next.dedup();
        cur = next;
    }
    cur
}

/// `⋃^n a` as an object of the fragment.
pub fn union_n_obj(frag: &Fragment, a: ObjId, n: usize) -> Result<ObjId> {
    let u = union_n(frag, a, n);
    frag.find_bland(&u)
        .ok_or_else(|| Error::BeyondFragment(format!("union of {}", frag.render(a))))
}

/// `⋃^0 a ... ⋃^{n-1} a`, or `None` if one is empty or has a non-bland member.
fn levels(q: &dyn SetQuery, a: usize, n: usize) -> Option<Vec<Vec<usize>>> {
    if n == 0 || !q.is_bland(a) {
        return None;
    }
    let mut out: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut cur = q.members(a).to_vec();
    for i in 0..n {
        if cur.is_empty() || cur.iter().any(|&x| !q.is_bland(x)) {
            return None;
        }
        let next = if i + 1 < n {
            let mut v: Vec<usize> = cur.iter().flat_map(|&x| q.members(x).iter().copied()).collect();
            v.sort();
            v.dedup();
            Some(v)
        } else {
            None
        };
        out.push(std::mem::take(&mut cur));
        if let Some(v) = next {
            cur = v;
        }
    }
    Some(out)
}

/// `a ≈_n a`, which holds exactly when the level conditions do.
pub fn n_equiv_guard(q: &dyn SetQuery, a: usize, n: usize) -> bool {
    levels(q, a, n).is_some()
}

/// Search for a witness of `a ≈_n b`.
pub fn n_equiv(q: &dyn SetQuery, a: usize, b: usize, n: usize) -> Option<NEquivWitness> {
    let la = levels(q, a, n)?;
    let lb = levels(q, b, n)?;
    if la.iter().zip(&lb).any(|(x, y)| x.len() != y.len()) {
        return None;
    }
    let top_a = &la[n - 1];
    let top_b = &lb[n - 1];
    let k = top_a.len();
    if n == 1 {
        return Some(NEquivWitness {
            n,
            chain: vec![top_a.iter().copied().zip(top_b.iter().copied()).collect()],
        });
    }
    let pos_a: HashMap<usize, usize> = top_a.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let pos_b: HashMap<usize, usize> = top_b.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let below_b: HashMap<Vec<usize>, usize> = lb[n - 2].iter().map(|&x| (positions(q.members(x), &pos_b), x)).collect();
    // members of each level-(n-2) element of a, as positions in top_a,
    // checked once the highest one is assigned
    let mut due: Vec<Vec<Vec<usize>>> = vec![Vec::new(); k];
    for &x in &la[n - 2] {
        let p = positions(q.members(x), &pos_a);
        if let Some(&last) = p.iter().max() {
            due[last].push(p);
        }
    }
    let profile = |lvl: &[usize], pos: &HashMap<usize, usize>| {
        let mut prof: Vec<Vec<usize>> = vec![Vec::new(); k];
        for &x in lvl {
            for &y in q.members(x) {
                prof[pos[&y]].push(q.members(x).len());
            }
        }
        prof.iter_mut().for_each(|p| p.sort());
        prof
    };
    let prof_a = profile(&la[n - 2], &pos_a);
    let prof_b = profile(&lb[n - 2], &pos_b);
    let mut assign = vec![usize::MAX; k];
    let mut used = vec![false; k];
    let mut found = None;
    search(0, &mut assign, &mut used, &mut |assign: &[usize], i: usize| {
        if prof_a[i] != prof_b[assign[i]] {
            return false;
        }
        due[i].iter().all(|p| {
            let mut img: Vec<usize> = p.iter().map(|&j| assign[j]).collect();
            img.sort();
            below_b.contains_key(&img)
        })
    }, &mut |assign: &[usize]| {
        let w = induced_chain(q, &la, &lb, top_a, top_b, assign);
        if w.is_some() {
            found = w;
            true
        } else {
            false
        }
    });
    found.map(|chain| NEquivWitness { n, chain })
}

fn positions(m: &[usize], pos: &HashMap<usize, usize>) -> Vec<usize> {
    let mut v: Vec<usize> = m.iter().map(|y| pos[y]).collect();
    v.sort();
    v
}

/// Backtracking over bijections `0..k → 0..k`; `ok` prunes after each
/// assignment, `done` accepts a full one.
fn search(
    i: usize,
    assign: &mut Vec<usize>,
    used: &mut Vec<bool>,
    ok: &mut dyn FnMut(&[usize], usize) -> bool,
    done: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if i == assign.len() {
        return done(assign);
    }
    for j in 0..assign.len() {
        if used[j] {
            continue;
        }
        assign[i] = j;
        used[j] = true;
        if ok(assign, i) && search(i + 1, assign, used, ok, done) {
            return true;
        }
        used[j] = false;
        assign[i] = usize::MAX;
    }
    false
}

/// Push `f_{n-1}` down the levels; `None` if some induced map misses its target.
fn induced_chain(
    q: &dyn SetQuery,
    la: &[Vec<usize>],
    lb: &[Vec<usize>],
    top_a: &[usize],
    top_b: &[usize],
    assign: &[usize],
) -> Option<Vec<Vec<(usize, usize)>>> {
    let n = la.len();
    let mut f: HashMap<usize, usize> = top_a.iter().enumerate().map(|(i, &x)| (x, top_b[assign[i]])).collect();
    let mut chain = Vec::with_capacity(n);
    let mut sorted: Vec<(usize, usize)> = f.iter().map(|(&x, &y)| (x, y)).collect();
    sorted.sort();
    chain.push(sorted);
    for lvl in (0..n - 1).rev() {
        let targets: HashMap<&[usize], usize> = lb[lvl].iter().map(|&y| (q.members(y), y)).collect();
        let mut next = HashMap::new();
        for &x in &la[lvl] {
            let mut img: Vec<usize> = q.members(x).iter().map(|y| f[y]).collect();
            img.sort();
            next.insert(x, *targets.get(img.as_slice())?);
        }
        let mut sorted: Vec<(usize, usize)> = next.iter().map(|(&x, &y)| (x, y)).collect();
        sorted.sort();
        chain.push(sorted);
        f = next;
    }
    Some(chain)
}

/// Church's wands `0..=k`: complement and the first `k` cardinal wands.
pub struct ChurchSpec {
    k: usize,
    wands: Vec<WandId>,
}

impl ChurchSpec {
    pub fn new(k: usize) -> ChurchSpec {
        ChurchSpec {
            k,
            wands: (0..=k).map(|i| WandId { index: i, code: PureSet::nat(i) }).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Every `d` with `a = ∗0 ∗n d`, where both `d` and `∗n d` are found before `a`.
fn comp_of_card_gens(q: &dyn SetQuery, a: usize, n: usize) -> Vec<usize> {
    if q.is_bland(a) {
        return Vec::new();
    }
    let lim = q.below(q.ordrank(a));
    let mut out = Vec::new();
    for t in 0..lim {
        if q.is_bland(t) || q.resolve_tap(0, t) != Some(a) {
            continue;
        }
        for d in 0..lim {
            if q.resolve_tap(n, d) == Some(t) {
                out.push(d);
            }
        }
    }
    out
}

impl WandSpec for ChurchSpec {
    fn name(&self) -> String {
        format!("church:{}", self.k)
    }

    fn wands(&self) -> &[WandId] {
        &self.wands
    }

    fn raw_dom(&self, w: usize, a: usize, q: &dyn SetQuery) -> bool {
        if w == 0 {
            // a is not the complement of anything bland found before it
            !(0..q.below(q.ordrank(a))).any(|x| q.is_bland(x) && q.resolve_tap(0, x) == Some(a))
        } else {
            w <= self.k && n_equiv_guard(q, a, w)
        }
    }

    fn raw_equiv(&self, m: usize, a: usize, n: usize, b: usize, q: &dyn SetQuery) -> bool {
        if m > self.k || n > self.k {
            return false;
        }
        if m == n && a == b {
            return true;
        }
        if m == n && m > 0 {
            return n_equiv(q, a, b, m).is_some();
        }
        if m == 0 && n > 0 {
            return comp_of_card_gens(q, a, n).into_iter().any(|d| n_equiv(q, d, b, n).is_some());
        }
        if n == 0 && m > 0 {
            return comp_of_card_gens(q, b, m).into_iter().any(|d| n_equiv(q, d, a, m).is_some());
        }
        false
    }

    fn equiv_candidates(&self, w: usize, a: usize, limit: usize, q: &dyn SetQuery) -> Option<Vec<(usize, usize)>> {
        let mut out = vec![(w, a)];
        let same_size = |len: usize| (0..limit).filter(move |&b| q.is_bland(b) && q.members(b).len() == len);
        if w > 0 {
            if q.is_bland(a) {
                out.extend(same_size(q.members(a).len()).map(|b| (w, b)));
                out.extend((0..limit).filter(|&x| !q.is_bland(x)).map(|x| (0, x)));
            }
        } else if !q.is_bland(a) {
            for n in 1..=self.k {
                for d in comp_of_card_gens(q, a, n) {
                    out.extend(same_size(q.members(d).len()).map(|b| (n, b)));
                }
            }
        }
        out.sort();
        out.dedup();
        Some(out)
    }
}

/// The three exclusive shapes of objects in a Church fragment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CusKind {
    Bland,
    /// `∗n c` with `c` bland.
    TapOfBland { n: usize, c: ObjId },
    /// `∗0 ∗n c` with `c` bland and `n > 0`.
    CompOfCard { n: usize, c: ObjId },
}

pub fn classify_kind(frag: &Fragment, a: ObjId) -> Result<CusKind> {
    if frag.is_bland(a) {
        return Ok(CusKind::Bland);
    }
    let srcs = frag.tap_sources(a);
    let tob: Vec<(usize, ObjId)> = srcs.iter().copied().filter(|&(_, c)| frag.is_bland(c)).collect();
    let mut coc: Vec<(usize, ObjId)> = Vec::new();
    for &(w, t) in srcs {
        if w == 0 && !frag.is_bland(t) {
            coc.extend(frag.tap_sources(t).iter().copied().filter(|&(n, c)| n > 0 && frag.is_bland(c)));
        }
    }
    coc.sort();
    let unique_n = |v: &[(usize, ObjId)]| v.iter().all(|&(n, _)| n == v[0].0);
    match (tob.is_empty(), coc.is_empty()) {
        (false, true) if unique_n(&tob) => Ok(CusKind::TapOfBland { n: tob[0].0, c: tob[0].1 }),
        (true, false) if unique_n(&coc) => Ok(CusKind::CompOfCard { n: coc[0].0, c: coc[0].1 }),
        _ => Err(Error::TaxonomyViolation(format!(
            "{}: taps of bland {:?}, complements of cardinals {:?}",
            frag.render(a),
            tob,
            coc
        ))),
    }
}

/// Tapping extended so that complementing `∗0 b` gives back `b`.
pub fn widetap(frag: &Fragment, n: usize, a: ObjId) -> Result<Option<ObjId>> {
    if let Some(c) = frag.tap(n, a)? {
        return Ok(Some(c));
    }
    if n == 0 {
        if let Some(&(_, b)) = frag.tap_sources(a).iter().find(|&&(w, _)| w == 0) {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

/// Expansive membership: complements hold what their argument lacks and
/// cardinals hold what is `n`-equivalent to their argument.
pub fn varin(frag: &Fragment, x: ObjId, a: ObjId) -> Result<bool> {
    Ok(match classify_kind(frag, a)? {
        CusKind::Bland => frag.members(a).binary_search(&x).is_ok(),
        CusKind::TapOfBland { n: 0, c } => frag.members(c).binary_search(&x).is_err(),
        CusKind::TapOfBland { n, c } => n_equiv(frag, x, c, n).is_some(),
        CusKind::CompOfCard { n, c } => n_equiv(frag, x, c, n).is_none(),
    })
}

/// Taps that exist, counting those that land past the last stage.
fn tap_exists(frag: &Fragment, w: usize, a: ObjId) -> bool {
    !matches!(frag.tap(w, a), Ok(None))
}

/// The Church axioms, checked on a fragment built from [`ChurchSpec`].
///
/// Statements involving taps that fall outside the fragment are skipped.
/// Generalized extensionality compares every pair, so it is only run on
/// fragments of at most `ext_limit` objects.
pub fn check_cus_axioms(frag: &Fragment, ext_limit: usize) -> Report {
    let n_obj = frag.len();
    let nw = frag.spec().wands().len();
    let mut r = Report::new("cus");

    let mut kinds = Check::new("kinds-total-exclusive-unique");
    let mut kind_of = Vec::with_capacity(n_obj);
    for a in 0..n_obj {
        let k = classify_kind(frag, a);
        kinds.case(k.is_ok(), || format!("{k:?}"));
        kind_of.push(k.ok());
    }
    r.push(kinds);

    let mut comp = Check::new("complement-law");
    let mut skipped = 0;
    for a in 0..n_obj {
        let Ok(Some(b)) = widetap(frag, 0, a) else {
            skipped += 1;
            continue;
        };
        for x in 0..n_obj {
            let (p, q) = (varin(frag, x, a), varin(frag, x, b));
            comp.case(matches!((p, q), (Ok(p), Ok(q)) if p != q), || {
                format!("x={} a={} widetap={}", frag.render(x), frag.render(a), frag.render(b))
            });
        }
    }
    r.push(comp.with_note(format!("{skipped} objects whose complement lies outside")));

    let mut ext = Check::new("generalized-extensionality");
    if n_obj <= ext_limit {
        let rows: Vec<Vec<bool>> = (0..n_obj)
            .map(|a| (0..n_obj).map(|x| varin(frag, x, a).unwrap_or(false)).collect())
            .collect();
        for a in 0..n_obj {
            for b in a + 1..n_obj {
                ext.case(rows[a] != rows[b], || {
                    format!("{} and {} have the same expansive members", frag.render(a), frag.render(b))
                });
            }
        }
        r.push(ext);
    } else {
        r.push(ext.with_note(format!("skipped above {ext_limit} objects")));
    }

    let taps: Vec<((usize, ObjId), ObjId)> = {
        let mut v: Vec<_> = frag.tap_table().collect();
        v.sort();
        v
    };

    let mut comp1 = Check::new("complement-injective");
    let zero: Vec<(ObjId, ObjId)> = taps.iter().filter(|((w, _), _)| *w == 0).map(|&((_, a), c)| (a, c)).collect();
    for &(a, c) in &zero {
        for &(b, d) in &zero {
            comp1.case(c != d || a == b, || format!("*0 {} = *0 {}", frag.render(a), frag.render(b)));
        }
    }
    r.push(comp1);

    let mut comp2 = Check::new("double-complement");
    for a in 0..n_obj {
        let not_comp_of_bland = frag.tap_sources(a).iter().all(|&(w, b)| w != 0 || !frag.is_bland(b));
        if frag.is_bland(a) || !not_comp_of_bland {
            continue;
        }
        let Ok(Some(t)) = frag.tap(0, a) else { continue };
        let Ok(back) = frag.tap(0, t) else { continue };
        comp2.case(back == Some(a), || format!("*0*0 {} = {:?}", frag.render(a), back.map(|b| frag.render(b))));
    }
    r.push(comp2);

    let cards: Vec<((usize, ObjId), ObjId)> = taps.iter().copied().filter(|((w, _), _)| *w > 0).collect();
    let mut card1 = Check::new("cardinal-identity");
    for &((m, a), x) in &cards {
        for &((n, b), y) in &cards {
            let rhs = m == n && n_equiv(frag, a, b, m).is_some();
            card1.case((x == y) == rhs, || {
                format!("*{m} {} vs *{n} {}", frag.render(a), frag.render(b))
            });
        }
    }
    r.push(card1);

    let mut card2 = Check::new("cardinal-not-complement-of-bland");
    let mut card3 = Check::new("cardinal-not-complement-of-cardinal");
    for &(_, x) in &cards {
        for &(b, y) in &zero {
            if frag.is_bland(b) {
                card2.case(x != y, || format!("{} = *0 {}", frag.render(x), frag.render(b)));
            }
        }
        for &(_, t) in &cards {
            if let Ok(Some(y)) = frag.tap(0, t) {
                card3.case(x != y, || format!("{} = *0 {}", frag.render(x), frag.render(t)));
            }
        }
    }
    r.push(card2);
    r.push(card3);

    let mut making = Check::new("making");
    for w in 0..nw {
        for a in 0..n_obj {
            let rhs = if w == 0 {
                frag.tap_sources(a).iter().all(|&(u, b)| u != 0 || !frag.is_bland(b))
            } else {
                n_equiv_guard(frag, a, w)
            };
            making.case(tap_exists(frag, w, a) == rhs, || format!("wand {w} on {}", frag.render(a)));
        }
    }
    r.push(making);

    let mut rank = Check::new("complement-rank");
    for &(b, t) in &zero {
        if frag.is_bland(b) {
            rank.case(frag.ordrank(b) < frag.ordrank(t), || frag.render(b));
        }
    }
    r.push(rank);

    let mut wide = Check::new("widetap-extension");
    for a in 0..n_obj {
        for w in 0..nw {
            match frag.tap(w, a) {
                Ok(Some(c)) => wide.case(matches!(widetap(frag, w, a), Ok(Some(d)) if d == c), || frag.render(a)),
                Ok(None) => {
                    let fires = matches!(widetap(frag, w, a), Ok(Some(_)));
                    let expect = w == 0 && matches!(kind_of[a], Some(CusKind::TapOfBland { n: 0, .. }));
                    wide.case(fires == expect, || format!("wand {w} on {}", frag.render(a)));
                }
                Err(_) => {}
            }
        }
    }
    r.push(wide);
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pureset::PureSet;
    use crate::universe::{build, Caps};
    use std::sync::Arc;

    fn church(k: usize, depth: usize) -> Fragment {
        build(Arc::new(ChurchSpec::new(k)), depth, Caps::default()).unwrap()
    }

    fn obj(f: &Fragment, s: &str) -> ObjId {
        f.locate_pure(&s.parse::<PureSet>().unwrap()).unwrap()
    }

    #[test]
    fn n_equiv_examples() {
        let f = build(Arc::new(crate::instances::PureSpec), 5, Caps::default()).unwrap();
        let w = n_equiv(&f, obj(&f, "{{}}"), obj(&f, "{{{}}}"), 1).expect("singletons");
        assert_eq!(w.chain.len(), 1);
        assert!(n_equiv(&f, obj(&f, "{}"), obj(&f, "{}"), 1).is_none());
        assert!(n_equiv(&f, obj(&f, "{{{},{{}}}}"), obj(&f, "{{{}},{{{}}}}"), 2).is_none());
        let w = n_equiv(&f, obj(&f, "{{{}},{{},{{}}}}"), obj(&f, "{{{{}}},{{},{{}}}}"), 2).expect("same shape");
        assert_eq!(w.chain.len(), 2);
    }

    #[test]
    fn witness_chain_is_induced() {
        let f = build(Arc::new(crate::instances::PureSpec), 5, Caps::default()).unwrap();
        let sample: Vec<ObjId> = (0..f.len()).step_by(211).chain(0..40).collect();
        for &a in &sample {
            for &b in &sample {
                if let Some(w) = n_equiv(&f, a, b, 2) {
                    let top: HashMap<usize, usize> = w.chain[0].iter().copied().collect();
                    for &(x, y) in &w.chain[1] {
                        let mut img: Vec<usize> = f.members(x).iter().map(|m| top[m]).collect();
                        img.sort();
                        assert_eq!(img, f.members(y));
                    }
                    let lhs: Vec<usize> = w.chain[1].iter().map(|p| p.0).collect();
                    assert_eq!(lhs, f.members(a));
                }
            }
        }
    }

    #[test]
    fn one_equiv_is_equinumerosity() {
        let f = build(Arc::new(crate::instances::PureSpec), 5, Caps::default()).unwrap();
        for a in (0..f.len()).step_by(97) {
            for b in (0..f.len()).step_by(89) {
                let oracle = !f.members(a).is_empty() && f.members(a).len() == f.members(b).len();
                assert_eq!(n_equiv(&f, a, b, 1).is_some(), oracle);
            }
        }
    }

    #[test]
    fn n_equiv_is_an_equivalence() {
        let f = church(2, 4);
        for n in 1..=3 {
            let field: Vec<ObjId> = (0..f.len()).filter(|&a| n_equiv_guard(&f, a, n)).step_by(7).take(60).collect();
            for &a in &field {
                assert!(n_equiv(&f, a, a, n).is_some());
                for &b in &field {
                    let ab = n_equiv(&f, a, b, n).is_some();
                    assert_eq!(ab, n_equiv(&f, b, a, n).is_some());
                    if !ab {
                        continue;
                    }
                    for &c in &field {
                        if n_equiv(&f, b, c, n).is_some() {
                            assert!(n_equiv(&f, a, c, n).is_some());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dom_examples() {
        let f = church(2, 3);
        let spec = ChurchSpec::new(2);
        let e = obj(&f, "{}");
        assert!(spec.raw_dom(0, e, &f));
        let c = f.tap(0, e).unwrap().unwrap();
        assert!(!spec.raw_dom(0, c, &f));
    }

    #[test]
    fn candidates_cover_rows() {
        let f = church(2, 4);
        let spec = ChurchSpec::new(2);
        let n = f.len();
        for w in 0..3 {
            for a in (0..n).step_by(13).chain(0..f.count_before(3)) {
                let cands = spec.equiv_candidates(w, a, n, &f).unwrap();
                for u in 0..3 {
                    for b in 0..n {
                        if spec.raw_equiv(w, a, u, b, &f) {
                            assert!(cands.binary_search(&(u, b)).is_ok(), "({w},{a}) ~ ({u},{b})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn kind_examples() {
        let f = church(1, 4);
        let one = f.locate_pure(&PureSet::singleton(PureSet::empty())).unwrap();
        let e = f.locate_pure(&PureSet::empty()).unwrap();
        assert_eq!(classify_kind(&f, one).unwrap(), CusKind::Bland);
        let c = f.tap(0, e).unwrap().unwrap();
        assert_eq!(classify_kind(&f, c).unwrap(), CusKind::TapOfBland { n: 0, c: e });
        let card = f.tap(1, one).unwrap().unwrap();
        let cc = f.tap(0, card).unwrap().unwrap();
        assert_eq!(classify_kind(&f, cc).unwrap(), CusKind::CompOfCard { n: 1, c: one });
    }

    #[test]
    fn expansive_membership_examples() {
        let f = church(2, 3);
        let e = obj(&f, "{}");
        let v = f.tap(0, e).unwrap().unwrap();
        for x in 0..f.len() {
            assert!(varin(&f, x, v).unwrap());
        }
        let one = obj(&f, "{{}}");
        for x in 0..f.len() {
            assert_eq!(varin(&f, x, one).unwrap(), f.members(one).contains(&x));
        }
        let c1 = f.tap(0, one).unwrap().unwrap();
        assert_eq!(widetap(&f, 0, c1).unwrap(), Some(one));
    }

    #[test]
    fn cus_axioms_depth_three() {
        let f = church(2, 3);
        let r = check_cus_axioms(&f, 200);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn cus_double_complement_is_exercised_at_depth_four() {
        let f = church(2, 4);
        let r = check_cus_axioms(&f, 0);
        assert!(r.passed(), "{r}");
        assert!(r.get("double-complement").unwrap().instances > 0);
    }
}
