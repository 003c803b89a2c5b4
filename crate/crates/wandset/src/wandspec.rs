//! Wand behaviour: raw domain and equivalence predicates, and the wrapper
//! that turns them into the official `Dom` and `Equiv`.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::instances;
use crate::pureset::PureSet;
use crate::report::{Check, Report};
use crate::universe::{Fragment, ObjId};

/// A wand: its index in the spec and its hereditarily bland code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WandId {
    pub index: usize,
    pub code: PureSet,
}

/// Read-only view of a universe under construction.
///
/// Handles are plain indices ordered by rank, so the handles of rank below
/// `r` are exactly `0..below(r)`.
pub trait SetQuery {
    fn is_bland(&self, h: usize) -> bool;
    /// Members of a bland object, sorted; empty for anything else.
    fn members(&self, h: usize) -> &[usize];
    /// The wand index coded by `h`, if any.
    fn wand_index(&self, h: usize) -> Option<usize>;
    fn ordrank(&self, h: usize) -> usize;
    /// The object found by tapping `h` with wand `w`, if it is known.
    fn resolve_tap(&self, w: usize, h: usize) -> Option<usize>;
    /// Number of handles of rank strictly below `r`.
    fn below(&self, r: usize) -> usize;
}

/// Pluggable wand behaviour.
///
/// `raw_dom` should only look at objects found no later than `a`, and
/// `raw_equiv` only at objects found no later than the later of `a` and `b`.
pub trait WandSpec: Send + Sync {
    fn name(&self) -> String;
    fn wands(&self) -> &[WandId];
    fn raw_dom(&self, w: usize, a: usize, q: &dyn SetQuery) -> bool;
    fn raw_equiv(&self, w: usize, a: usize, u: usize, b: usize, q: &dyn SetQuery) -> bool;

    /// A superset of the pairs `(u, b)` with `b < limit` and
    /// `raw_equiv(w, a, u, b)`. `None` means every pair is a candidate.
    fn equiv_candidates(
        &self,
        _w: usize,
        _a: usize,
        _limit: usize,
        _q: &dyn SetQuery,
    ) -> Option<Vec<(usize, usize)>> {
        None
    }
}

pub type SpecRef = Arc<dyn WandSpec>;

/// Look a spec up by its registry name.
pub fn spec_by_name(name: &str) -> Result<SpecRef> {
    match name {
        "pure" => Ok(Arc::new(instances::PureSpec)),
        "conway" => Ok(Arc::new(instances::ConwaySpec::new())),
        "partial-fun" => Ok(Arc::new(instances::FunSpec::partial_fun())),
        "multiset" => Ok(Arc::new(instances::FunSpec::multiset())),
        _ => {
            if let Some(k) = name.strip_prefix("church:") {
                let k: usize = k.parse().map_err(|_| Error::UnknownSpec(name.into()))?;
                return Ok(Arc::new(instances::ChurchSpec::new(k)));
            }
            Err(Error::UnknownSpec(name.into()))
        }
    }
}

/// Names accepted by [`spec_by_name`] (with `church:2` standing in for the family).
pub const SHIPPED_SPECS: [&str; 5] = ["pure", "conway", "partial-fun", "multiset", "church:2"];

/// Cache of the per-rank good-behaviour verdicts used by [`Wrapped`].
pub type GoodCache = Mutex<HashMap<usize, bool>>;

/// `Dom` and `Equiv` built from a spec's raw predicates over one view.
pub struct Wrapped<'a> {
    pub spec: &'a dyn WandSpec,
    pub q: &'a dyn SetQuery,
    good: &'a GoodCache,
}

impl<'a> Wrapped<'a> {
    pub fn new(spec: &'a dyn WandSpec, q: &'a dyn SetQuery, good: &'a GoodCache) -> Self {
        Wrapped { spec, q, good }
    }

    pub fn is_wand(&self, w: usize) -> bool {
        w < self.spec.wands().len()
    }

    pub fn dom(&self, w: usize, a: usize) -> bool {
        self.is_wand(w) && self.spec.raw_dom(w, a, self.q)
    }

    pub fn equiv(&self, w: usize, a: usize, u: usize, b: usize) -> bool {
        if !self.is_wand(w) || !self.is_wand(u) {
            return false;
        }
        if w == u && a == b {
            return true;
        }
        let m = self.q.ordrank(a).max(self.q.ordrank(b));
        self.spec.raw_equiv(w, a, u, b, self.q) && self.good(m)
    }

    /// Is raw `E` an equivalence relation, and raw `D` invariant under it,
    /// on the objects of rank at most `m`?
    pub fn good(&self, m: usize) -> bool {
        if let Some(&v) = self.good.lock().unwrap_or_else(|p| p.into_inner()).get(&m) {
            return v;
        }
        let v = raw_behaviour(self.spec, self.q, self.q.below(m + 1)).is_empty();
        self.good.lock().unwrap_or_else(|p| p.into_inner()).insert(m, v);
        v
    }

    /// All `(u, b)` with `b < limit` and `Equiv(w, a, u, b)`, sorted.
    pub fn row(&self, w: usize, a: usize, limit: usize) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = candidates(self.spec, w, a, limit, self.q)
            .into_iter()
            .filter(|&(u, b)| self.equiv(w, a, u, b))
            .collect();
        if a < limit && self.is_wand(w) && !out.contains(&(w, a)) {
            out.push((w, a));
        }
        out.sort();
        out
    }

    /// The minimal-rank members of the equivalence class of `(w, a)`.
    pub fn class(&self, w: usize, a: usize) -> Vec<(usize, usize)> {
        let limit = self.q.below(self.q.ordrank(a) + 1).max(a + 1);
        let row = self.row(w, a, limit);
        let min = row.iter().map(|&(_, b)| self.q.ordrank(b)).min().unwrap_or(0);
        row.into_iter().filter(|&(_, b)| self.q.ordrank(b) == min).collect()
    }

    /// No equivalent of `(w, a)` has lower rank than `a`.
    pub fn minirank(&self, w: usize, a: usize) -> bool {
        let limit = self.q.below(self.q.ordrank(a));
        self.row(w, a, limit).is_empty()
    }
}

fn candidates(spec: &dyn WandSpec, w: usize, a: usize, limit: usize, q: &dyn SetQuery) -> Vec<(usize, usize)> {
    match spec.equiv_candidates(w, a, limit, q) {
        Some(mut v) => {
            v.retain(|&(u, b)| b < limit && u < spec.wands().len());
            v
        }
        None => {
            let nw = spec.wands().len();
            (0..nw).flat_map(|u| (0..limit).map(move |b| (u, b))).collect()
        }
    }
}

/// Violations of the wrapper's two side conditions on the first `n` handles.
///
/// Given reflexivity, `E` is Euclidean exactly when every pair in a row has
/// that same row, which is what gets compared.
pub fn raw_behaviour(spec: &dyn WandSpec, q: &dyn SetQuery, n: usize) -> Vec<String> {
    let nw = spec.wands().len();
    let mut row_ids: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
    let mut rows: HashMap<(usize, usize), usize> = HashMap::new();
    let mut stored: Vec<Vec<(usize, usize)>> = Vec::new();
    for x in 0..nw {
        for c in 0..n {
            let mut row: Vec<(usize, usize)> = candidates(spec, x, c, n, q)
                .into_iter()
                .filter(|&(y, d)| spec.raw_equiv(x, c, y, d, q))
                .collect();
            row.sort();
            row.dedup();
            let next = stored.len();
            let id = *row_ids.entry(row.clone()).or_insert(next);
            if id == next {
                stored.push(row);
            }
            rows.insert((x, c), id);
        }
    }
    let mut out = Vec::new();
    let mut doms: HashMap<(usize, usize), bool> = HashMap::new();
    let mut dom = |w: usize, a: usize| *doms.entry((w, a)).or_insert_with(|| spec.raw_dom(w, a, q));
    for x in 0..nw {
        for c in 0..n {
            let id = rows[&(x, c)];
            let row = &stored[id];
            if row.binary_search(&(x, c)).is_err() {
                out.push(format!("E({x},{c},{x},{c}) fails"));
            }
            for p in row {
                if rows[p] != id {
                    out.push(format!("E({x},{c},{},{}) but the two pairs have different E-rows", p.0, p.1));
                }
                if dom(x, c) && !dom(p.0, p.1) {
                    out.push(format!("D({x},{c}) and E({x},{c},{},{}) but not D({},{})", p.0, p.1, p.0, p.1));
                }
            }
            if out.len() > 32 {
                return out;
            }
        }
    }
    out
}

/// Which predicates [`check_wellbehaved`] should examine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Wrapped,
    Raw,
}

/// Check the six good-behaviour constraints on `Dom`/`Equiv` (or, in raw
/// mode, on `D`/`E`) over the fragment's objects of rank at most `max_rank`.
///
/// One index past the last wand is included as a non-wand probe.
pub fn check_wellbehaved(frag: &Fragment, mode: Mode, max_rank: usize) -> Report {
    let spec = frag.spec();
    let wr = frag.wrapped();
    let n = frag.below(max_rank + 1);
    let nw = spec.wands().len();
    let probes = nw + 1;
    let dom = |w: usize, a: usize| match mode {
        Mode::Wrapped => wr.dom(w, a),
        Mode::Raw => spec.raw_dom(w, a, frag),
    };
    let equiv = |w: usize, a: usize, u: usize, b: usize| match mode {
        Mode::Wrapped => wr.equiv(w, a, u, b),
        Mode::Raw => spec.raw_equiv(w, a, u, b, frag),
    };
    let mut rows: HashMap<(usize, usize), HashSet<(usize, usize)>> = HashMap::new();
    for w in 0..probes {
        for a in 0..n {
            let row = (0..probes)
                .flat_map(|u| (0..n).map(move |b| (u, b)))
                .filter(|&(u, b)| equiv(w, a, u, b))
                .collect();
            rows.insert((w, a), row);
        }
    }
    let mut d1 = Check::new("dom-entails-wand");
    let mut d3 = Check::new("dom-invariant-under-equiv");
    let mut e1 = Check::new("equiv-entails-wands");
    let mut e3r = Check::new("equiv-reflexive-on-wands");
    let mut e3t = Check::new("equiv-euclidean");
    for w in 0..probes {
        for a in 0..n {
            let dwa = dom(w, a);
            d1.case(!dwa || w < nw, || format!("Dom({w},{a}) with non-wand {w}"));
            let row = &rows[&(w, a)];
            if w < nw {
                e3r.case(row.contains(&(w, a)), || format!("not Equiv({w},{a},{w},{a})"));
            }
            for &(u, b) in row {
                e1.case(w < nw && u < nw, || format!("Equiv({w},{a},{u},{b}) with a non-wand"));
                if dwa {
                    d3.case(dom(u, b), || format!("Dom({w},{a}), Equiv({w},{a},{u},{b}), not Dom({u},{b})"));
                }
                for &(v, c) in row {
                    e3t.case(rows[&(u, b)].contains(&(v, c)), || {
                        format!("Equiv({w},{a},{u},{b}), Equiv({w},{a},{v},{c}), not Equiv({u},{b},{v},{c})")
                    });
                }
            }
        }
    }
    let mut r = Report::new("wellbehaved");
    r.checks = vec![d1, d3, e1, e3r, e3t];
    r
}

/// Compare `Dom`/`Equiv` answers computed against a shallow fragment with
/// answers computed against a deeper one, over every object of the shallow
/// fragment.
pub fn check_stage_stability(small: &Fragment, big: &Fragment) -> Result<Report> {
    let d = small.depth();
    let spec = small.spec();
    let nw = spec.wands().len();
    let ws = small.wrapped();
    let wb = big.wrapped();
    let args: Vec<ObjId> = (0..small.len()).collect();
    let mut map = HashMap::new();
    for &a in &args {
        let image = big.locate(small, a).ok_or_else(|| {
            Error::StabilityViolation(format!("object {} of the shallow build is missing from the deep build", small.render(a)))
        })?;
        map.insert(a, image);
    }
    let mut check = Check::new("stage-stability");
    for w in 0..nw {
        for &a in &args {
            let (x, y) = (ws.dom(w, a), wb.dom(w, map[&a]));
            if x != y {
                return Err(Error::StabilityViolation(format!(
                    "Dom({w}, {}) is {x} at depth {d} but {y} at depth {}",
                    small.render(a),
                    big.depth()
                )));
            }
            check.case(true, String::new);
            for u in 0..nw {
                for &b in &args {
                    let (x, y) = (ws.equiv(w, a, u, b), wb.equiv(w, map[&a], u, map[&b]));
                    if x != y {
                        return Err(Error::StabilityViolation(format!(
                            "Equiv({w}, {}, {u}, {}) is {x} at depth {d} but {y} at depth {}",
                            small.render(a),
                            small.render(b),
                            big.depth()
                        )));
                    }
                    check.case(true, String::new);
                }
            }
        }
    }
    let mut r = Report::new("stability");
    r.checks.push(check);
    Ok(r)
}
