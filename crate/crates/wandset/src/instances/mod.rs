//! Concrete wand specs: the pure hierarchy, Conway games, partial
//! functions, multisets and Church's universal-set theory.

mod church;
#[doc(hidden)]
pub mod fixtures;

pub use church::{
    check_cus_axioms, classify_kind, n_equiv, n_equiv_guard, union_n, union_n_obj, varin, widetap, ChurchSpec,
    CusKind, NEquivWitness,
};

use crate::error::{Error, Result};
use crate::pureset::PureSet;
use crate::universe::{Fragment, ObjId};
use crate::wandspec::{SetQuery, WandId, WandSpec};

fn single_wand(code: PureSet) -> Vec<WandId> {
    vec![WandId { index: 0, code }]
}

/// Decode a Kuratowski pair `{{a},{a,b}}` from handles.
pub fn kunpair_q(q: &dyn SetQuery, x: usize) -> Option<(usize, usize)> {
    if !q.is_bland(x) {
        return None;
    }
    let m = q.members(x);
    let only = |s: usize| match q.members(s) {
        [a] if q.is_bland(s) => Some(*a),
        _ => None,
    };
    match *m {
        [s] => only(s).map(|a| (a, a)),
        [s, t] => {
            for (s, t) in [(s, t), (t, s)] {
                if let Some(a) = only(s) {
                    if let [p, r] = *q.members(t) {
                        if p == a {
                            return Some((a, r));
                        }
                        if r == a {
                            return Some((a, p));
                        }
                    }
                }
            }
            None
        }
        _ => None,
    }
}

/// The von Neumann natural coded by `x`, if any.
pub fn nat_value(q: &dyn SetQuery, x: usize) -> Option<usize> {
    if !q.is_bland(x) {
        return None;
    }
    let m = q.members(x);
    let mut seen = vec![false; m.len()];
    for &y in m {
        let v = nat_value(q, y)?;
        if v >= m.len() || seen[v] {
            return None;
        }
        seen[v] = true;
    }
    Some(m.len())
}

/// No wands at all: the fragment is the finite cumulative hierarchy.
pub struct PureSpec;

impl WandSpec for PureSpec {
    fn name(&self) -> String {
        "pure".into()
    }

    fn wands(&self) -> &[WandId] {
        &[]
    }

    fn raw_dom(&self, _w: usize, _a: usize, _q: &dyn SetQuery) -> bool {
        false
    }

    fn raw_equiv(&self, _w: usize, _a: usize, _u: usize, _b: usize, _q: &dyn SetQuery) -> bool {
        false
    }

    fn equiv_candidates(&self, _w: usize, _a: usize, _limit: usize, _q: &dyn SetQuery) -> Option<Vec<(usize, usize)>> {
        Some(Vec::new())
    }
}

/// One wand, `game`, tapping pairs of bland sets with a nonempty right side.
pub struct ConwaySpec {
    wands: Vec<WandId>,
}

impl ConwaySpec {
    pub fn new() -> ConwaySpec {
        ConwaySpec {
            wands: single_wand(PureSet::empty()),
        }
    }
}

impl Default for ConwaySpec {
    fn default() -> Self {
        ConwaySpec::new()
    }
}

impl WandSpec for ConwaySpec {
    fn name(&self) -> String {
        "conway".into()
    }

    fn wands(&self) -> &[WandId] {
        &self.wands
    }

    fn raw_dom(&self, w: usize, x: usize, q: &dyn SetQuery) -> bool {
        // ⟨a, ∅⟩ would just be a, so it is left out
        w == 0
            && matches!(kunpair_q(q, x), Some((a, b)) if q.is_bland(a) && q.is_bland(b) && !q.members(b).is_empty())
    }

    fn raw_equiv(&self, w: usize, a: usize, u: usize, b: usize, _q: &dyn SetQuery) -> bool {
        w == u && a == b
    }

    fn equiv_candidates(&self, w: usize, a: usize, _limit: usize, _q: &dyn SetQuery) -> Option<Vec<(usize, usize)>> {
        Some(vec![(w, a)])
    }
}

/// The pair tapped to make a game.
fn game_pair(frag: &Fragment, y: ObjId) -> Result<(ObjId, ObjId)> {
    let (_, x) = frag.class(y)[0];
    kunpair_q(frag, x).ok_or_else(|| Error::Data(format!("{} is not a game", frag.render(y))))
}

pub fn left_options(frag: &Fragment, y: ObjId) -> Result<Vec<ObjId>> {
    if y >= frag.len() {
        return Err(Error::BeyondFragment(format!("object {y}")));
    }
    if frag.is_bland(y) {
        return Ok(frag.members(y).to_vec());
    }
    let (l, _) = game_pair(frag, y)?;
    Ok(frag.members(l).to_vec())
}

pub fn right_options(frag: &Fragment, y: ObjId) -> Result<Vec<ObjId>> {
    if y >= frag.len() {
        return Err(Error::BeyondFragment(format!("object {y}")));
    }
    if frag.is_bland(y) {
        return Ok(Vec::new());
    }
    let (_, r) = game_pair(frag, y)?;
    Ok(frag.members(r).to_vec())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FunKind {
    Fun,
    Multiset,
}

/// One wand tapping single-valued graphs: partial functions, or multisets
/// when values are restricted to positive naturals.
pub struct FunSpec {
    kind: FunKind,
    wands: Vec<WandId>,
}

impl FunSpec {
    pub fn partial_fun() -> FunSpec {
        FunSpec {
            kind: FunKind::Fun,
            wands: single_wand(PureSet::empty()),
        }
    }

    pub fn multiset() -> FunSpec {
        FunSpec {
            kind: FunKind::Multiset,
            wands: single_wand(PureSet::empty()),
        }
    }

    /// The graph's pairs if `g` is a bland single-valued set of pairs.
    fn graph(q: &dyn SetQuery, g: usize) -> Option<Vec<(usize, usize)>> {
        if !q.is_bland(g) {
            return None;
        }
        let mut pairs = q
            .members(g)
            .iter()
            .map(|&p| kunpair_q(q, p))
            .collect::<Option<Vec<_>>>()?;
        pairs.sort();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        Some(pairs)
    }
}

impl WandSpec for FunSpec {
    fn name(&self) -> String {
        match self.kind {
            FunKind::Fun => "partial-fun".into(),
            FunKind::Multiset => "multiset".into(),
        }
    }

    fn wands(&self) -> &[WandId] {
        &self.wands
    }

    fn raw_dom(&self, w: usize, g: usize, q: &dyn SetQuery) -> bool {
        if w != 0 {
            return false;
        }
        let Some(pairs) = FunSpec::graph(q, g) else {
            return false;
        };
        match self.kind {
            // identity graphs (including ∅) would just be their own field
            FunKind::Fun => !pairs.iter().all(|&(x, y)| x == y),
            // one copy of everything would just be the bland set itself
            FunKind::Multiset => {
                let vals: Option<Vec<usize>> = pairs.iter().map(|&(_, v)| nat_value(q, v)).collect();
                matches!(vals, Some(v) if v.iter().all(|&n| n > 0) && !v.iter().all(|&n| n == 1))
            }
        }
    }

    fn raw_equiv(&self, w: usize, a: usize, u: usize, b: usize, _q: &dyn SetQuery) -> bool {
        w == u && a == b
    }

    fn equiv_candidates(&self, w: usize, a: usize, _limit: usize, _q: &dyn SetQuery) -> Option<Vec<(usize, usize)>> {
        Some(vec![(w, a)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pureset::kpair;
    use crate::universe::{build, BuildMode, Caps};
    use std::sync::Arc;

    fn sampled(max_card: usize) -> Caps {
        Caps {
            max_objects: 4000,
            mode: BuildMode::Sampled { max_card },
        }
    }

    #[test]
    fn kunpair_on_handles() {
        let f = build(Arc::new(PureSpec), 4, Caps::default()).unwrap();
        let e = f.locate_pure(&PureSet::empty()).unwrap();
        let one = f.locate_pure(&PureSet::singleton(PureSet::empty())).unwrap();
        let p = f.locate_pure(&kpair(&PureSet::empty(), &PureSet::singleton(PureSet::empty()))).unwrap();
        assert_eq!(kunpair_q(&f, p), Some((e, one)));
        let d = f.locate_pure(&kpair(&PureSet::empty(), &PureSet::empty())).unwrap();
        assert_eq!(kunpair_q(&f, d), Some((e, e)));
        assert_eq!(kunpair_q(&f, e), None);
        assert_eq!(nat_value(&f, f.locate_pure(&PureSet::nat(2)).unwrap()), Some(2));
        assert_eq!(nat_value(&f, p), None);
    }

    #[test]
    fn bland_options() {
        let f = build(Arc::new(ConwaySpec::new()), 3, Caps::default()).unwrap();
        let one = f.locate_pure(&PureSet::singleton(PureSet::empty())).unwrap();
        let e = f.locate_pure(&PureSet::empty()).unwrap();
        assert_eq!(left_options(&f, one).unwrap(), vec![e]);
        assert!(right_options(&f, one).unwrap().is_empty());
    }

    #[test]
    fn star_game_exists() {
        // ⟨{∅},{∅}⟩ = {{{∅}}} is found at stage 3, so its tap at stage 4
        let f = build(Arc::new(ConwaySpec::new()), 5, Caps::default()).unwrap();
        let one = PureSet::singleton(PureSet::empty());
        let x = f.locate_pure(&kpair(&one, &one)).unwrap();
        let star = f.tap(0, x).unwrap().expect("game");
        let zero = f.locate_pure(&PureSet::empty()).unwrap();
        assert!(!f.is_bland(star));
        assert_eq!(left_options(&f, star).unwrap(), vec![zero]);
        assert_eq!(right_options(&f, star).unwrap(), vec![zero]);
        let z = f.locate_pure(&kpair(&PureSet::empty(), &PureSet::empty())).unwrap();
        assert_eq!(f.tap(0, z).unwrap(), None);
    }

    #[test]
    fn fun_examples() {
        let f = build(Arc::new(FunSpec::partial_fun()), 6, sampled(2)).unwrap();
        let g = f
            .locate_pure(&PureSet::singleton(kpair(&PureSet::singleton(PureSet::empty()), &PureSet::empty())))
            .unwrap();
        let t = f.tap(0, g).unwrap().expect("fun tap");
        assert!(!f.is_bland(t));
        assert_eq!(f.ordrank(t), 5);
        let id = f.locate_pure(&PureSet::singleton(kpair(&PureSet::empty(), &PureSet::empty()))).unwrap();
        assert_eq!(f.tap(0, id).unwrap(), None);
    }

    #[test]
    fn multiset_examples() {
        let f = build(Arc::new(FunSpec::multiset()), 7, sampled(2)).unwrap();
        let two = f.locate_pure(&PureSet::singleton(kpair(&PureSet::empty(), &PureSet::nat(2)))).unwrap();
        assert!(f.tap(0, two).unwrap().is_some());
        let ones = f.locate_pure(&PureSet::singleton(kpair(&PureSet::empty(), &PureSet::nat(1)))).unwrap();
        assert_eq!(f.tap(0, ones).unwrap(), None);
    }
}
