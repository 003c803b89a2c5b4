//! The conch construction: a copy of the universe built from pure sets.
//!
//! Bland objects become carriers `{⟨∅, s⟩}` and a tapped object becomes the
//! set of pairs `⟨Θw, a⟩` in its minimal-rank class. The stages are
//! generated directly on pure sets, with the spec's predicates evaluated
//! over the conches found so far, and then compared with a [`Fragment`]
//! through the map [`xi_all`].

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::pureset::{carrier, is_carrier, kpair, kunpair, lt_levels, mk_set, theta, uncarrier, PureSet};
use crate::report::{Check, Report};
use crate::universe::{Fragment, ObjId, ObjKind};
use crate::wandspec::{GoodCache, SetQuery, SpecRef, WandSpec, Wrapped};

/// The conches found so far, numbered by level and then canonically.
struct ConchWorld {
    conches: Vec<PureSet>,
    index: HashMap<PureSet, usize>,
    level: Vec<usize>,
    level_start: Vec<usize>,
    members: Vec<Vec<usize>>,
    wand_codes: Vec<PureSet>,
    wand_of: HashMap<usize, usize>,
    tap_of: HashMap<(usize, usize), usize>,
    /// Which tap conch holds each `(wand, arg)` pair.
    holder: HashMap<(usize, usize), usize>,
}

impl SetQuery for ConchWorld {
    fn is_bland(&self, h: usize) -> bool {
        is_carrier(&self.conches[h])
    }

    fn members(&self, h: usize) -> &[usize] {
        &self.members[h]
    }

    fn wand_index(&self, h: usize) -> Option<usize> {
        self.wand_of.get(&h).copied()
    }

    fn ordrank(&self, h: usize) -> usize {
        self.level[h]
    }

    fn resolve_tap(&self, w: usize, h: usize) -> Option<usize> {
        self.tap_of.get(&(w, h)).copied()
    }

    fn below(&self, r: usize) -> usize {
        self.level_start.get(r).copied().unwrap_or(self.conches.len())
    }
}

impl ConchWorld {
    fn push_level(&mut self, mut fresh: Vec<PureSet>) {
        let sigma = self.level_start.len();
        self.level_start.push(self.conches.len());
        fresh.sort();
        fresh.dedup();
        for c in fresh {
            let h = self.conches.len();
            let members = match uncarrier(&c) {
                Ok(s) => {
                    let mut m: Vec<usize> = s.elements().iter().map(|x| self.index[x]).collect();
                    m.sort_unstable();
                    m
                }
                Err(_) => {
                    for p in c.elements() {
                        let (tw, b) = kunpair(p).expect("tap conches hold pairs");
                        let u = self.wand_codes.iter().position(|t| *t == tw).expect("wand code");
                        self.holder.insert((u, self.index[&b]), h);
                    }
                    Vec::new()
                }
            };
            if let Some(w) = self.wand_codes.iter().position(|t| *t == c) {
                self.wand_of.insert(h, w);
            }
            self.index.insert(c.clone(), h);
            self.conches.push(c);
            self.level.push(sigma);
            self.members.push(members);
        }
    }
}

type Rows = HashMap<(usize, usize), Vec<(usize, usize)>>;

/// One stage `σ` of the construction.
pub struct ConchStage {
    pub sigma: usize,
    /// `C_σ`: every conch of level at most `σ`, sorted.
    pub c: Vec<PureSet>,
    /// `B_σ`: the conches of level below `σ`, sorted.
    pub b: Vec<PureSet>,
    /// `Dom_σ` as `(wand, conch handle)` pairs.
    dom: Vec<(usize, usize)>,
    /// Rows of `Equiv_σ` for the pairs whose argument has level `σ`.
    rows: Rows,
}

impl ConchStage {
    pub fn dom(&self) -> &[(usize, usize)] {
        &self.dom
    }

    pub fn in_dom(&self, w: usize, a: usize) -> bool {
        self.dom.binary_search(&(w, a)).is_ok()
    }

    pub fn row(&self, w: usize, a: usize) -> Option<&[(usize, usize)]> {
        self.rows.get(&(w, a)).map(|v| v.as_slice())
    }

    /// Rank of `C_σ` as a pure set.
    pub fn rank(&self) -> usize {
        self.c.iter().map(|x| x.rank() + 1).max().unwrap_or(0)
    }
}

/// The generated stages together with the conches they contain.
pub struct ConchStages {
    spec: SpecRef,
    world: ConchWorld,
    pub stages: Vec<ConchStage>,
    /// Taps of last-level conches that would be new conches.
    beyond: HashSet<(usize, usize)>,
    /// Candidate classes that failed one of the tap clauses.
    pub rejected: Vec<String>,
    /// Places where a later stage answered `Dom` or `Equiv` differently.
    pub drift: Vec<String>,
    good: GoodCache,
}

/// Generate `C_0 .. C_{depth-1}` for `spec`.
///
/// Fails with `CapExceeded` when a stage would need more than `max_objects`
/// conches.
/// A `(wand, argument handle)` pair and the conch it taps to.
type Settled = ((usize, usize), PureSet);

pub fn gen_stages(spec: SpecRef, depth: usize, max_objects: usize) -> Result<ConchStages> {
    let wand_codes = spec.wands().iter().map(|w| theta(&w.code)).collect();
    let mut cs = ConchStages {
        spec,
        world: ConchWorld {
            conches: Vec::new(),
            index: HashMap::new(),
            level: Vec::new(),
            level_start: Vec::new(),
            members: Vec::new(),
            wand_codes,
            wand_of: HashMap::new(),
            tap_of: HashMap::new(),
            holder: HashMap::new(),
        },
        stages: Vec::new(),
        beyond: HashSet::new(),
        rejected: Vec::new(),
        drift: Vec::new(),
        good: GoodCache::default(),
    };
    for sigma in 0..depth {
        let n = cs.world.conches.len();
        let needed = 1u128.checked_shl(n as u32).unwrap_or(u128::MAX).saturating_add(n as u128);
        if needed > max_objects as u128 {
            return Err(Error::CapExceeded { needed, cap: max_objects });
        }
        let mut fresh = Vec::new();
        for mask in 0..(1u64 << n) {
            let s = mk_set((0..n).filter(|i| mask >> i & 1 == 1).map(|i| cs.world.conches[i].clone()).collect());
            let c = carrier(&s);
            if !cs.world.index.contains_key(&c) {
                fresh.push(c);
            }
        }
        let mut settle = Vec::new();
        if sigma > 0 {
            let (taps, s) = cs.tap_phase(sigma - 1);
            fresh.extend(taps);
            settle = s;
        }
        cs.world.push_level(fresh);
        for (pair, c) in settle {
            let h = cs.world.index[&c];
            cs.world.tap_of.insert(pair, h);
        }
        let stage = cs.record(sigma);
        cs.stages.push(stage);
    }
    if depth > 0 {
        let (fresh, settle) = cs.tap_phase(depth - 1);
        let fresh: HashSet<PureSet> = fresh.into_iter().collect();
        for (pair, c) in settle {
            if fresh.contains(&c) {
                cs.beyond.insert(pair);
            } else {
                let h = cs.world.index[&c];
                cs.world.tap_of.insert(pair, h);
            }
        }
    }
    Ok(cs)
}

impl ConchStages {
    /// `Dom_σ` and the new `Equiv_σ` rows, checked against the previous stage.
    fn record(&mut self, sigma: usize) -> ConchStage {
        let world = &self.world;
        let wr = Wrapped::new(self.spec.as_ref(), world, &self.good);
        let nw = self.spec.wands().len();
        let n = world.conches.len();
        let mut dom: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (0..nw).map(move |w| (w, a))).filter(|&(w, a)| wr.dom(w, a)).collect();
        dom.sort_unstable();
        let top = world.below(sigma);
        let rows: Rows = (top..n).flat_map(|a| (0..nw).map(move |w| (w, a))).map(|(w, a)| ((w, a), wr.row(w, a, n))).collect();
        if let Some(prev) = self.stages.last() {
            let old: HashSet<_> = prev.dom.iter().collect();
            for &(w, a) in dom.iter().filter(|&&(_, a)| a < top) {
                if !old.contains(&(w, a)) {
                    self.drift.push(format!("Dom gained wand {w} on conch {a} at stage {sigma}"));
                }
            }
            let now: HashSet<_> = dom.iter().collect();
            for p in prev.dom.iter().filter(|p| !now.contains(p)) {
                self.drift.push(format!("Dom lost wand {} on conch {} at stage {sigma}", p.0, p.1));
            }
            for (&(w, a), r) in &prev.rows {
                let again = wr.row(w, a, top);
                if &again != r {
                    self.drift.push(format!("Equiv row of wand {w} on conch {a} changed at stage {sigma}"));
                }
            }
        }
        let mut c = world.conches.clone();
        c.sort();
        let mut b = world.conches[..top].to_vec();
        b.sort();
        ConchStage { sigma, c, b, dom, rows }
    }

    /// Candidate `τ`-taps from the rows recorded at stage `τ`: the new tap
    /// conches, and the conch each admissible pair taps to.
    fn tap_phase(&mut self, tau: usize) -> (Vec<PureSet>, Vec<Settled>) {
        let w = &self.world;
        let stage = &self.stages[tau];
        let mut fresh = Vec::new();
        let mut settle = Vec::new();
        let mut rejected = Vec::new();
        let mut keys: Vec<_> = stage.rows.keys().copied().collect();
        keys.sort_unstable();
        for (wd, a) in keys {
            if !stage.in_dom(wd, a) {
                continue;
            }
            let row = &stage.rows[&(wd, a)];
            if row.iter().all(|&(_, b)| w.level[b] == tau) {
                // every member must be in Dom_τ and have exactly this row
                let ok = row.iter().all(|&(u, b)| stage.in_dom(u, b) && stage.rows.get(&(u, b)) == Some(row));
                if !ok {
                    rejected.push(format!("class of wand {wd} on {} at level {tau}", w.conches[a]));
                    continue;
                }
                let c = mk_set(row.iter().map(|&(u, b)| kpair(&w.wand_codes[u], &w.conches[b])).collect());
                fresh.push(c.clone());
                settle.push(((wd, a), c));
            } else if let Some(&h) = row.iter().find_map(|p| w.holder.get(p)) {
                settle.push(((wd, a), w.conches[h].clone()));
            }
        }
        fresh.sort();
        fresh.dedup();
        self.rejected.extend(rejected);
        (fresh, settle)
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    pub fn spec(&self) -> &dyn WandSpec {
        self.spec.as_ref()
    }

    /// Number of conches generated.
    pub fn len(&self) -> usize {
        self.world.conches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.world.conches.is_empty()
    }

    pub fn conch(&self, h: usize) -> &PureSet {
        &self.world.conches[h]
    }

    pub fn handle(&self, c: &PureSet) -> Option<usize> {
        self.world.index.get(c).copied()
    }

    /// The least `σ` with `c ∈ C_σ`.
    pub fn conchrank(&self, c: &PureSet) -> Result<usize> {
        self.handle(c).map(|h| self.world.level[h]).ok_or(Error::NotAConch)
    }

    /// The conch found by tapping conch `a` with wand `w`.
    pub fn tap(&self, w: usize, a: &PureSet) -> Result<Option<PureSet>> {
        let h = self.handle(a).ok_or(Error::NotAConch)?;
        if let Some(&c) = self.world.tap_of.get(&(w, h)) {
            return Ok(Some(self.world.conches[c].clone()));
        }
        if self.beyond.contains(&(w, h)) {
            return Err(Error::BeyondFragment(format!("tap of {a} by wand {w}")));
        }
        Ok(None)
    }

    /// `⟨w, a⟩ ∈ Dom_{ℓ(a)}`, with `a` a conch handle.
    pub fn dom_at(&self, w: usize, a: usize) -> bool {
        self.stages[self.world.level[a]].in_dom(w, a)
    }

    /// `⟨w, a, u, b⟩ ∈ Equiv_σ` with `σ` the larger level of `a` and `b`.
    ///
    /// Rows are recorded for the higher argument; when `b` is the higher one
    /// the wrapped predicate is evaluated over all generated conches, which
    /// agrees with the recorded stage whenever `drift` is empty.
    pub fn equiv_at(&self, w: usize, a: usize, u: usize, b: usize) -> bool {
        let (la, lb) = (self.world.level[a], self.world.level[b]);
        if la >= lb {
            return self.stages[la].row(w, a).is_some_and(|r| r.binary_search(&(u, b)).is_ok());
        }
        Wrapped::new(self.spec.as_ref(), &self.world, &self.good).equiv(w, a, u, b)
    }

    pub fn level(&self, h: usize) -> usize {
        self.world.level[h]
    }

    /// The wand index coded by the conch with handle `h`.
    pub fn wand_at(&self, h: usize) -> Option<usize> {
        self.world.wand_index(h)
    }

    /// The wand whose code is the conch `c`.
    pub fn wand_of(&self, c: &PureSet) -> Option<usize> {
        self.handle(c).and_then(|h| self.world.wand_index(h))
    }

    /// Largest rank of a wand code.
    pub fn omega(&self) -> usize {
        self.world.wand_codes.iter().map(|c| c.rank()).max().unwrap_or(0)
    }

    /// `(n, rank(C_n), bound)` with bound `Ω + 4n + 4`.
    pub fn rank_bounds(&self) -> Vec<(usize, usize, usize)> {
        let om = self.omega();
        self.stages.iter().map(|s| (s.sigma, s.rank(), om + 4 * s.sigma + 4)).collect()
    }
}

/// The conch of every object of `frag`, indexed by id.
pub fn xi_all(frag: &Fragment) -> Vec<PureSet> {
    let codes: Vec<PureSet> = frag.spec().wands().iter().map(|w| theta(&w.code)).collect();
    let mut out: Vec<PureSet> = Vec::with_capacity(frag.len());
    for id in 0..frag.len() {
        let x = match &frag.obj(id).kind {
            ObjKind::Bland(m) => carrier(&mk_set(m.iter().map(|&y| out[y].clone()).collect())),
            ObjKind::Tapped(class) => mk_set(class.iter().map(|&(w, a)| kpair(&codes[w], &out[a])).collect()),
        };
        out.push(x);
    }
    out
}

pub fn xi(frag: &Fragment, a: ObjId) -> PureSet {
    xi_all(frag).swap_remove(a)
}

/// Most pure sets for which membership preservation is checked pairwise.
const MEMBER_PAIRS_LIMIT: usize = 4096;

/// Compare a fragment with conch stages of the same spec and depth.
pub fn verify_roundtrip(frag: &Fragment, cs: &ConchStages) -> Result<Report> {
    if frag.depth() != cs.depth() || frag.spec().name() != cs.spec.name() {
        return Err(Error::Data(format!(
            "fragment {}@{} against conches {}@{}",
            frag.spec().name(),
            frag.depth(),
            cs.spec.name(),
            cs.depth()
        )));
    }
    let depth = frag.depth();
    let mut r = Report::new("conch");
    let xs = xi_all(frag);
    let n = frag.len();

    // pure sets of rank below the depth against the hereditarily bland objects
    let mut th = Check::new("theta-onto-hereditarily-bland");
    let mut thm = Check::new("theta-preserves-membership");
    let mut thr = Check::new("theta-conch-rank");
    let pures: Vec<PureSet> = match lt_levels(depth + 1, 1 << 20) {
        Ok(v) => v.last().map(|s| s.elements().to_vec()).unwrap_or_default(),
        Err(_) => Vec::new(),
    };
    let located: Vec<Option<ObjId>> = pures.iter().map(|p| frag.locate_pure(p)).collect();
    for (p, &id) in pures.iter().zip(&located) {
        match id {
            Some(id) => {
                th.case(frag.hereditarily_bland(id) && frag.ordrank(id) == p.rank() && xs[id] == theta(p), || {
                    format!("{p} at {}", frag.render(id))
                });
            }
            None => th.case(!frag.exhaustive(), || format!("{p} missing")),
        }
        thr.case(cs.conchrank(&theta(p)).ok() == Some(p.rank()), || format!("{p}"));
    }
    if frag.exhaustive() {
        let hb = (0..n).filter(|&a| frag.hereditarily_bland(a)).count();
        th.case(hb == pures.len(), || format!("{hb} hereditarily bland objects for {} pure sets", pures.len()));
    }
    if pures.len() <= MEMBER_PAIRS_LIMIT {
        for (p, &ip) in pures.iter().zip(&located) {
            for (q, &iq) in pures.iter().zip(&located) {
                if let (Some(ip), Some(iq)) = (ip, iq) {
                    thm.case(p.contains(q) == frag.members(ip).contains(&iq), || format!("{q} in {p}"));
                }
            }
        }
        r.push(th);
        r.push(thm);
    } else {
        r.push(th);
        r.push(thm.with_note("too many pure sets to compare pairwise"));
    }
    r.push(thr);

    let mut wands = Check::new("theta-preserves-wands");
    for (i, w) in frag.spec().wands().iter().enumerate() {
        let t = theta(&w.code);
        if w.code.rank() < depth {
            wands.case(frag.wand_object(i) == frag.locate_pure(&w.code) && frag.wand_object(i).is_some(), || {
                format!("wand {i} object")
            });
            wands.case(cs.wand_of(&t) == Some(i), || format!("wand {i} conch"));
        }
    }
    r.push(wands);

    let mut inj = Check::new("xi-injective");
    let distinct: HashSet<&PureSet> = xs.iter().collect();
    inj.case(distinct.len() == n, || format!("{} distinct images of {n} objects", distinct.len()));
    r.push(inj);

    let mut rank = Check::new("ordrank-is-conchrank-of-xi");
    let mut bland = Check::new("xi-preserves-blandness");
    let mut mem = Check::new("xi-preserves-membership");
    for a in 0..n {
        rank.case(cs.conchrank(&xs[a]).ok() == Some(frag.ordrank(a)), || frag.render(a));
        bland.case(frag.is_bland(a) == is_carrier(&xs[a]), || frag.render(a));
        if let Ok(s) = uncarrier(&xs[a]) {
            let want = mk_set(frag.members(a).iter().map(|&y| xs[y].clone()).collect());
            mem.case(s == want, || frag.render(a));
        }
    }
    r.push(rank);
    r.push(bland);
    r.push(mem);

    let mut tap = Check::new("xi-preserves-taps");
    for a in 0..n {
        for w in 0..frag.spec().wands().len() {
            let ours = frag.tap(w, a).map(|o| o.map(|c| xs[c].clone()));
            let theirs = cs.tap(w, &xs[a]);
            let ok = match (&ours, &theirs) {
                (Ok(x), Ok(y)) => x == y,
                (Err(Error::BeyondFragment(_)), Err(Error::BeyondFragment(_))) => true,
                _ => false,
            };
            tap.case(ok, || format!("wand {w} on {}: {ours:?} vs {theirs:?}", frag.render(a)));
        }
    }
    r.push(tap);

    let mut cross = Check::new("xi-image-is-stages");
    if frag.exhaustive() {
        for st in &cs.stages {
            let mut img: Vec<PureSet> = (0..n).filter(|&a| frag.ordrank(a) <= st.sigma).map(|a| xs[a].clone()).collect();
            img.sort();
            cross.case(img == st.c, || format!("stage {}: {} images, {} conches", st.sigma, img.len(), st.c.len()));
        }
        r.push(cross);
    } else {
        r.push(cross.with_note("skipped on a sampled fragment"));
    }

    r.extend(check_conches(cs));
    Ok(r)
}

/// Checks that need only the conch side.
pub fn check_conches(cs: &ConchStages) -> Report {
    let mut r = Report::new("conch");
    let w = &cs.world;

    let mut tax = Check::new("conch-taxonomy");
    for (h, c) in w.conches.iter().enumerate() {
        if is_carrier(c) {
            tax.case(w.members[h].iter().all(|&m| w.level[m] < w.level[h]), || format!("{c}"));
            continue;
        }
        let shape = !c.is_empty()
            && c.elements().iter().all(|p| match kunpair(p) {
                Ok((t, b)) => {
                    w.wand_codes.contains(&t) && matches!(w.index.get(&b), Some(&bh) if w.level[bh] + 1 == w.level[h])
                }
                Err(_) => false,
            });
        tax.case(shape, || format!("{c}"));
    }
    r.push(tax);

    let mut rej = Check::new("tap-clauses-hold");
    rej.case(cs.rejected.is_empty(), || cs.rejected.join("; "));
    r.push(rej);

    let mut stab = Check::new("conch-stage-stability");
    for d in &cs.drift {
        stab.case(false, || d.clone());
    }
    stab.case(cs.drift.is_empty(), || format!("{} changes", cs.drift.len()));
    r.push(stab);

    let mut bound = Check::new("stage-rank-bound");
    let mut slack = Vec::new();
    for (n, rk, b) in cs.rank_bounds() {
        bound.case(rk <= b, || format!("rank(C_{n}) = {rk} > {b}"));
        slack.push(format!("C_{n}:{}", b as i64 - rk as i64));
    }
    r.push(bound.with_note(format!("slack {}", slack.join(" "))));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{ChurchSpec, ConwaySpec, PureSpec};
    use crate::universe::{build, Caps};
    use crate::wandspec::spec_by_name;
    use std::sync::Arc;

    #[test]
    fn pure_stages_are_theta_images() {
        let cs = gen_stages(Arc::new(PureSpec), 4, 1 << 20).unwrap();
        let sizes: Vec<usize> = cs.stages.iter().map(|s| s.c.len()).collect();
        assert_eq!(sizes, vec![1, 2, 4, 16]);
        for st in &cs.stages {
            for c in &st.c {
                assert_eq!(theta(&crate::pureset::theta_inv(c).unwrap()), *c);
            }
        }
        // the empty set's code has rank 3 and the stage sets grow by 4
        let ranks: Vec<usize> = cs.stages.iter().map(|s| s.rank()).collect();
        assert_eq!(ranks, vec![4, 8, 12, 16]);
    }

    #[test]
    fn conchrank_rejects_strangers() {
        let cs = gen_stages(Arc::new(PureSpec), 2, 1 << 20).unwrap();
        assert!(matches!(cs.conchrank(&PureSet::empty()), Err(Error::NotAConch)));
        assert_eq!(cs.conchrank(&carrier(&PureSet::empty())).unwrap(), 0);
    }

    #[test]
    fn conway_star_conch() {
        let cs = gen_stages(Arc::new(ConwaySpec::new()), 5, 1 << 20).unwrap();
        let one = PureSet::singleton(PureSet::empty());
        let arg = theta(&kpair(&one, &one));
        let star = cs.tap(0, &arg).unwrap().expect("star");
        let want = PureSet::singleton(kpair(&theta(&PureSet::empty()), &arg));
        assert_eq!(star, want);
        assert_eq!(cs.conchrank(&star).unwrap(), 4);
    }

    #[test]
    fn roundtrip_small_specs() {
        for name in ["pure", "conway", "church:2"] {
            let spec = spec_by_name(name).unwrap();
            let f = build(spec.clone(), 3, Caps::default()).unwrap();
            let cs = gen_stages(spec, 3, 1 << 20).unwrap();
            let r = verify_roundtrip(&f, &cs).unwrap();
            assert!(r.passed(), "{name}: {r}");
        }
    }

    #[test]
    fn church_rank_bound_has_slack() {
        let cs = gen_stages(Arc::new(ChurchSpec::new(2)), 4, 1 << 20).unwrap();
        assert_eq!(cs.omega(), 11);
        for (n, rk, b) in cs.rank_bounds() {
            assert!(rk <= b, "C_{n}: {rk} > {b}");
        }
        assert!(cs.drift.is_empty(), "{:?}", cs.drift);
    }

    #[test]
    fn mismatched_depth_is_data_error() {
        let f = build(Arc::new(PureSpec), 2, Caps::default()).unwrap();
        let cs = gen_stages(Arc::new(PureSpec), 3, 1 << 20).unwrap();
        assert!(matches!(verify_roundtrip(&f, &cs), Err(Error::Data(_))));
    }
}
