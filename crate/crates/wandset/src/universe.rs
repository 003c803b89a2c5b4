//! Stage-by-stage generation of finite fragments of a wand/set universe.
//!
//! Objects are numbered densely in canonical order: by the stage at which
//! they are found, then bland before tapped, then structurally. A tapped
//! object stores its whole minimal-rank equivalence class of (wand, arg)
//! pairs rather than a chosen representative.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::pureset::{mk_set, PureSet};
use crate::wandspec::{GoodCache, SetQuery, SpecRef, WandSpec, Wrapped};

pub type ObjId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjKind {
    Bland(Vec<ObjId>),
    /// Sorted `(wand index, argument)` pairs, all arguments of one rank.
    Tapped(Vec<(usize, ObjId)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obj {
    pub kind: ObjKind,
    /// Index of the stage at which the object is first found.
    pub ordrank: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuildMode {
    /// Every bland subset at every stage.
    Exhaustive,
    /// Only bland subsets of at most `max_card` members (plus each stage's
    /// wevel); the object cap truncates instead of failing.
    Sampled { max_card: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub max_objects: usize,
    pub mode: BuildMode,
}

impl Caps {
    pub fn exhaustive(max_objects: usize) -> Caps {
        Caps {
            max_objects,
            mode: BuildMode::Exhaustive,
        }
    }
}

impl Default for Caps {
    fn default() -> Caps {
        Caps::exhaustive(1 << 20)
    }
}

/// A finite fragment: the objects found at stages `0..depth`.
pub struct Fragment {
    spec: SpecRef,
    depth: usize,
    objs: Vec<Obj>,
    /// `stage_start[α]` is the first id found at stage `α`.
    stage_start: Vec<usize>,
    bland_index: HashMap<Vec<ObjId>, ObjId>,
    tap_index: HashMap<Vec<(usize, ObjId)>, ObjId>,
    taps: HashMap<(usize, ObjId), ObjId>,
    /// Admissible taps whose result would be found after the last stage.
    beyond: HashSet<(usize, ObjId)>,
    /// Reverse of `taps`, sorted per target.
    sources: HashMap<ObjId, Vec<(usize, ObjId)>>,
    wand_objs: Vec<Option<ObjId>>,
    wand_of: HashMap<ObjId, usize>,
    wevels: Vec<ObjId>,
    exhaustive: bool,
    good: GoodCache,
}

impl SetQuery for Fragment {
    fn is_bland(&self, h: usize) -> bool {
        matches!(self.objs[h].kind, ObjKind::Bland(_))
    }

    fn members(&self, h: usize) -> &[usize] {
        match &self.objs[h].kind {
            ObjKind::Bland(m) => m,
            ObjKind::Tapped(_) => &[],
        }
    }

    fn wand_index(&self, h: usize) -> Option<usize> {
        self.wand_of.get(&h).copied()
    }

    fn ordrank(&self, h: usize) -> usize {
        self.objs[h].ordrank
    }

    fn resolve_tap(&self, w: usize, h: usize) -> Option<usize> {
        self.taps.get(&(w, h)).copied()
    }

    fn below(&self, r: usize) -> usize {
        match self.stage_start.get(r) {
            Some(&s) => s,
            None => self.objs.len(),
        }
    }
}

/// Generate the fragment of stages `0..depth` for `spec`.
pub fn build(spec: SpecRef, depth: usize, caps: Caps) -> Result<Fragment> {
    let mut f = Fragment::empty(spec, depth);
    for alpha in 0..depth {
        let blands = f.bland_candidates(alpha, &caps)?;
        let (tapped, pending) = f.tap_phase(alpha);
        if let BuildMode::Exhaustive = caps.mode {
            let needed = f.objs.len() as u128 + blands.len() as u128 + tapped.len() as u128;
            if needed > caps.max_objects as u128 {
                return Err(Error::CapExceeded {
                    needed,
                    cap: caps.max_objects,
                });
            }
        }
        f.commit(alpha, blands, tapped, pending);
    }
    f.finish();
    Ok(f)
}

type Pending = Vec<((usize, ObjId), Vec<(usize, ObjId)>)>;

impl Fragment {
    fn empty(spec: SpecRef, depth: usize) -> Fragment {
        let nw = spec.wands().len();
        Fragment {
            spec,
            depth,
            objs: Vec::new(),
            stage_start: Vec::new(),
            bland_index: HashMap::new(),
            tap_index: HashMap::new(),
            taps: HashMap::new(),
            beyond: HashSet::new(),
            sources: HashMap::new(),
            wand_objs: vec![None; nw],
            wand_of: HashMap::new(),
            wevels: Vec::new(),
            exhaustive: true,
            good: GoodCache::default(),
        }
    }

    /// New bland member-lists for stage `alpha`, unsorted.
    fn bland_candidates(&mut self, alpha: usize, caps: &Caps) -> Result<Vec<Vec<ObjId>>> {
        if alpha == 0 {
            return Ok(vec![Vec::new()]);
        }
        let n = self.objs.len();
        let last = self.stage_start[alpha - 1];
        match caps.mode {
            BuildMode::Exhaustive => {
                let needed = (1u128.checked_shl(n as u32).unwrap_or(u128::MAX))
                    .saturating_sub(1u128 << last.min(127))
                    .saturating_add(n as u128);
                if needed > caps.max_objects as u128 {
                    return Err(Error::CapExceeded {
                        needed,
                        cap: caps.max_objects,
                    });
                }
                // a subset is new exactly when it uses something from the previous stage
                let mut out = Vec::with_capacity((1usize << n) - (1usize << last));
                for mask in (1u64 << last)..(1u64 << n) {
                    out.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
                }
                Ok(out)
            }
            BuildMode::Sampled { max_card } => {
                self.exhaustive = false;
                let budget = caps.max_objects.saturating_sub(n);
                let mut out: Vec<Vec<ObjId>> = vec![(0..n).collect()];
                let mut seen: HashSet<Vec<ObjId>> = out.iter().cloned().collect();
                let mut combo = Vec::new();
                sampled_subsets(n, last, max_card, 0, &mut combo, &mut |s| {
                    if out.len() >= budget {
                        return false;
                    }
                    if seen.insert(s.to_vec()) {
                        out.push(s.to_vec());
                    }
                    true
                });
                Ok(out)
            }
        }
    }

    /// Taps of the previous stage's objects: returns the new classes (deduplicated)
    /// and every admissible pair with its class.
    fn tap_phase(&self, alpha: usize) -> (Vec<Vec<(usize, ObjId)>>, Pending) {
        if alpha == 0 {
            return (Vec::new(), Vec::new());
        }
        let wr = self.wrapped();
        let nw = self.spec.wands().len();
        let mut fresh: Vec<Vec<(usize, ObjId)>> = Vec::new();
        let mut seen: HashSet<Vec<(usize, ObjId)>> = HashSet::new();
        let mut pending = Vec::new();
        for a in self.stage_start[alpha - 1]..self.objs.len() {
            for w in 0..nw {
                if !wr.dom(w, a) {
                    continue;
                }
                let class = wr.class(w, a);
                if !self.tap_index.contains_key(&class) && seen.insert(class.clone()) {
                    fresh.push(class.clone());
                }
                pending.push(((w, a), class));
            }
        }
        (fresh, pending)
    }

    fn commit(&mut self, alpha: usize, mut blands: Vec<Vec<ObjId>>, mut tapped: Vec<Vec<(usize, ObjId)>>, pending: Pending) {
        self.stage_start.push(self.objs.len());
        blands.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        tapped.sort();
        for m in blands {
            let id = self.objs.len();
            self.bland_index.insert(m.clone(), id);
            self.objs.push(Obj {
                kind: ObjKind::Bland(m),
                ordrank: alpha,
            });
        }
        for c in tapped {
            let id = self.objs.len();
            self.tap_index.insert(c.clone(), id);
            self.objs.push(Obj {
                kind: ObjKind::Tapped(c),
                ordrank: alpha,
            });
        }
        for (pair, class) in pending {
            self.taps.insert(pair, self.tap_index[&class]);
        }
    }

    /// Settle taps of last-stage objects that land on already-found objects,
    /// and locate wands and wevels.
    fn finish(&mut self) {
        if self.depth > 0 {
            let (fresh, pending) = self.tap_phase(self.depth);
            let fresh: HashSet<_> = fresh.into_iter().collect();
            for (pair, class) in pending {
                if fresh.contains(&class) {
                    self.beyond.insert(pair);
                } else {
                    self.taps.insert(pair, self.tap_index[&class]);
                }
            }
        }
        for (&pair, &c) in &self.taps {
            self.sources.entry(c).or_default().push(pair);
        }
        for v in self.sources.values_mut() {
            v.sort();
        }
        for (i, w) in self.spec.wands().to_vec().iter().enumerate() {
            if let Some(id) = self.locate_pure(&w.code) {
                self.wand_objs[i] = Some(id);
                self.wand_of.insert(id, i);
            }
        }
        self.wevels = (0..self.depth)
            .map_while(|alpha| self.find_bland(&(0..self.stage_start[alpha]).collect::<Vec<_>>()))
            .collect();
    }

    /// Rebuild a fragment from stored objects, recomputing every tap.
    ///
    /// Fails if the objects are not in canonical order or disagree with
    /// what the spec generates.
    pub fn from_objects(spec: SpecRef, depth: usize, exhaustive: bool, objs: Vec<Obj>) -> Result<Fragment> {
        let mut f = Fragment::empty(spec, depth);
        f.exhaustive = exhaustive;
        let mut i = 0;
        for alpha in 0..depth {
            let mut blands = Vec::new();
            let mut tapped = Vec::new();
            while i < objs.len() && objs[i].ordrank == alpha {
                match &objs[i].kind {
                    ObjKind::Bland(m) => blands.push(m.clone()),
                    ObjKind::Tapped(c) => tapped.push(c.clone()),
                }
                i += 1;
            }
            let (fresh, pending) = f.tap_phase(alpha);
            let mut expect = fresh.clone();
            expect.sort();
            let mut got = tapped.clone();
            got.sort();
            if expect != got {
                return Err(Error::Data(format!("stage {alpha}: stored tapped objects disagree with the spec")));
            }
            let start = f.objs.len();
            let stored: Vec<ObjKind> = objs[start..i].iter().map(|o| o.kind.clone()).collect();
            f.commit(alpha, blands, tapped, pending);
            let canonical: Vec<ObjKind> = f.objs[start..].iter().map(|o| o.kind.clone()).collect();
            if stored != canonical {
                return Err(Error::Data(format!("stage {alpha}: objects are not in canonical order")));
            }
            for o in &f.objs[start..] {
                if let ObjKind::Bland(m) = &o.kind {
                    if m.iter().any(|&x| x >= start) || m.windows(2).any(|p| p[0] >= p[1]) {
                        return Err(Error::Data(format!("stage {alpha}: bad member list")));
                    }
                }
            }
        }
        if i != objs.len() {
            return Err(Error::Data("objects found beyond the stated depth".into()));
        }
        f.finish();
        Ok(f)
    }

    // ---- Accessors ---- //

    pub fn spec(&self) -> &dyn WandSpec {
        &*self.spec
    }

    pub fn spec_ref(&self) -> SpecRef {
        self.spec.clone()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.objs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objs.is_empty()
    }

    pub fn exhaustive(&self) -> bool {
        self.exhaustive
    }

    pub fn obj(&self, id: ObjId) -> &Obj {
        &self.objs[id]
    }

    pub fn objs(&self) -> &[Obj] {
        &self.objs
    }

    pub fn class(&self, id: ObjId) -> &[(usize, ObjId)] {
        match &self.objs[id].kind {
            ObjKind::Tapped(c) => c,
            ObjKind::Bland(_) => &[],
        }
    }

    /// Ids found at stage `alpha`.
    pub fn stage(&self, alpha: usize) -> std::ops::Range<ObjId> {
        self.below(alpha)..self.below(alpha + 1)
    }

    /// Number of objects found strictly before stage `alpha`.
    pub fn count_before(&self, alpha: usize) -> usize {
        self.below(alpha)
    }

    /// The wevel object of stage `alpha`, when it lies in the fragment.
    pub fn wevel(&self, alpha: usize) -> Option<ObjId> {
        self.wevels.get(alpha).copied()
    }

    pub fn wevels(&self) -> &[ObjId] {
        &self.wevels
    }

    pub fn wand_object(&self, w: usize) -> Option<ObjId> {
        self.wand_objs.get(w).copied().flatten()
    }

    /// Objects whose taps may fall outside the fragment.
    pub fn is_boundary(&self, a: ObjId) -> bool {
        self.objs[a].ordrank + 1 >= self.depth
    }

    pub fn wrapped(&self) -> Wrapped<'_> {
        Wrapped::new(&*self.spec, self, &self.good)
    }

    pub fn find_bland(&self, members: &[ObjId]) -> Option<ObjId> {
        self.bland_index.get(members).copied()
    }

    pub fn find_tapped(&self, class: &[(usize, ObjId)]) -> Option<ObjId> {
        self.tap_index.get(class).copied()
    }

    /// All settled taps `((w, a), c)`.
    pub fn tap_table(&self) -> impl Iterator<Item = ((usize, ObjId), ObjId)> + '_ {
        self.taps.iter().map(|(&k, &v)| (k, v))
    }

    /// Every settled `(w, b)` with `tap(w, b) = c`, sorted.
    pub fn tap_sources(&self, c: ObjId) -> &[(usize, ObjId)] {
        self.sources.get(&c).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Tap `a` with wand `w`.
    ///
    /// `Ok(None)` when `Dom(w, a)` fails; `BeyondFragment` when the result
    /// would be found after the last stage.
    pub fn tap(&self, w: usize, a: ObjId) -> Result<Option<ObjId>> {
        if let Some(&c) = self.taps.get(&(w, a)) {
            return Ok(Some(c));
        }
        if self.beyond.contains(&(w, a)) {
            return Err(Error::BeyondFragment(format!("tap of {} by wand {w}", self.render(a))));
        }
        Ok(None)
    }

    // ---- Structure ---- //

    /// Readable rendering: brace notation for bland objects, `*w(arg)` for taps.
    pub fn render(&self, id: ObjId) -> String {
        match &self.objs[id].kind {
            ObjKind::Bland(m) => {
                let inner: Vec<String> = m.iter().map(|&x| self.render(x)).collect();
                format!("{{{}}}", inner.join(","))
            }
            ObjKind::Tapped(c) => {
                let (w, a) = c[0];
                format!("*{w}({})", self.render(a))
            }
        }
    }

    /// The object structurally equal to the pure set `p`, if present.
    pub fn locate_pure(&self, p: &PureSet) -> Option<ObjId> {
        let mut members = p
            .elements()
            .iter()
            .map(|e| self.locate_pure(e))
            .collect::<Option<Vec<_>>>()?;
        members.sort();
        self.find_bland(&members)
    }

    /// The pure set of a hereditarily bland object.
    pub fn decode_pure(&self, id: ObjId) -> Option<PureSet> {
        match &self.objs[id].kind {
            ObjKind::Bland(m) => Some(mk_set(
                m.iter().map(|&x| self.decode_pure(x)).collect::<Option<Vec<_>>>()?,
            )),
            ObjKind::Tapped(_) => None,
        }
    }

    /// The object of `self` structurally matching object `id` of `other`.
    pub fn locate(&self, other: &Fragment, id: ObjId) -> Option<ObjId> {
        match &other.objs[id].kind {
            ObjKind::Bland(m) => {
                let mut mm = m.iter().map(|&x| self.locate(other, x)).collect::<Option<Vec<_>>>()?;
                mm.sort();
                self.find_bland(&mm)
            }
            ObjKind::Tapped(c) => {
                let mut cc = c
                    .iter()
                    .map(|&(w, a)| self.locate(other, a).map(|b| (w, b)))
                    .collect::<Option<Vec<_>>>()?;
                cc.sort();
                self.find_tapped(&cc)
            }
        }
    }

    /// Parse an object reference: a numeric id, `*w(ref)` for a tap, or
    /// `{ref,...}` for a bland set. This reads back what [`Self::render`]
    /// writes.
    pub fn resolve_ref(&self, s: &str) -> Result<ObjId> {
        let mut p = RefParser { s: s.as_bytes(), pos: 0 };
        let id = self.parse_ref(&mut p)?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(id)
    }

    fn parse_ref(&self, p: &mut RefParser) -> Result<ObjId> {
        p.skip_ws();
        match p.peek() {
            Some(b'{') => {
                p.pos += 1;
                let mut members = Vec::new();
                p.skip_ws();
                if p.peek() == Some(b'}') {
                    p.pos += 1;
                } else {
                    loop {
                        members.push(self.parse_ref(p)?);
                        p.skip_ws();
                        match p.bump() {
                            Some(b',') => continue,
                            Some(b'}') => break,
                            _ => return Err(p.error("expected `,` or `}`")),
                        }
                    }
                }
                members.sort();
                members.dedup();
                self.find_bland(&members).ok_or_else(|| {
                    let inner: Vec<String> = members.iter().map(|&x| self.render(x)).collect();
                    Error::BeyondFragment(format!("{{{}}} is not in the fragment", inner.join(",")))
                })
            }
            Some(b'*') => {
                p.pos += 1;
                let w = p.number()?;
                p.skip_ws();
                if p.bump() != Some(b'(') {
                    return Err(p.error("expected `(`"));
                }
                let a = self.parse_ref(p)?;
                p.skip_ws();
                if p.bump() != Some(b')') {
                    return Err(p.error("expected `)`"));
                }
                self.tap(w, a)?
                    .ok_or_else(|| Error::Data(format!("wand {w} does not apply to {}", self.render(a))))
            }
            Some(c) if c.is_ascii_digit() => {
                let at = p.pos;
                let id = p.number()?;
                if id < self.len() {
                    Ok(id)
                } else {
                    p.pos = at;
                    Err(Error::Data(format!("no object with id {id}")))
                }
            }
            _ => Err(p.error("expected an id, `{` or `*`")),
        }
    }

    // ---- Found-at, potentials, wevels ---- //

    /// `x ⋖ r`: `x` is a bland subset of `r`, or a tap of one of `r`'s members.
    pub fn cfoundat(&self, x: ObjId, r: ObjId) -> bool {
        let rm = self.members(r);
        match &self.objs[x].kind {
            ObjKind::Bland(m) => m.iter().all(|y| rm.binary_search(y).is_ok()),
            ObjKind::Tapped(_) => {
                let nw = self.spec.wands().len();
                rm.iter().any(|&b| (0..nw).any(|w| self.taps.get(&(w, b)) == Some(&x)))
            }
        }
    }

    /// `{x : ∃r ∈ rs, x ⋖ r}` as a sorted id list.
    pub fn cpot_of(&self, rs: &[ObjId]) -> Result<Vec<ObjId>> {
        let nw = self.spec.wands().len();
        let mut out: HashSet<ObjId> = HashSet::new();
        for &r in rs {
            let rm = self.members(r);
            if rm.len() <= 16 {
                for mask in 0u32..(1u32 << rm.len()) {
                    let sub: Vec<ObjId> = (0..rm.len()).filter(|i| mask >> i & 1 == 1).map(|i| rm[i]).collect();
                    if let Some(x) = self.find_bland(&sub) {
                        out.insert(x);
                    } else if self.exhaustive {
                        return Err(Error::BeyondFragment(format!("a bland subset of {}", self.render(r))));
                    }
                }
            } else {
                for x in 0..self.len() {
                    if self.is_bland(x) && self.cfoundat(x, r) {
                        out.insert(x);
                    }
                }
            }
            for &b in rm {
                for w in 0..nw {
                    if let Some(&c) = self.taps.get(&(w, b)) {
                        out.insert(c);
                    } else if self.beyond.contains(&(w, b)) {
                        return Err(Error::BeyondFragment(format!("tap of {}", self.render(b))));
                    }
                }
            }
        }
        let mut v: Vec<ObjId> = out.into_iter().collect();
        v.sort();
        Ok(v)
    }

    /// `¢a` as a sorted id list.
    pub fn cpot_set(&self, a: ObjId) -> Result<Vec<ObjId>> {
        if !self.is_bland(a) {
            return Err(Error::NotBland);
        }
        self.cpot_of(self.members(a))
    }

    /// `¢a` as an object.
    pub fn cpot(&self, a: ObjId) -> Result<ObjId> {
        let s = self.cpot_set(a)?;
        self.find_bland(&s)
            .ok_or_else(|| Error::BeyondFragment(format!("cpot of {}", self.render(a))))
    }

    pub fn incpot(&self, x: ObjId, a: ObjId) -> Result<bool> {
        Ok(self.cpot_set(a)?.binary_search(&x).is_ok())
    }

    /// Wevel recognizer via the recursion `s = ¢{r ∈ s : wevel(r)}`.
    pub fn is_wevel(&self, x: ObjId) -> bool {
        let mut memo = HashMap::new();
        self.is_wevel_memo(x, &mut memo)
    }

    fn is_wevel_memo(&self, x: ObjId, memo: &mut HashMap<ObjId, bool>) -> bool {
        if let Some(&v) = memo.get(&x) {
            return v;
        }
        let v = self.is_bland(x) && {
            let inner: Vec<ObjId> = self
                .members(x)
                .iter()
                .copied()
                .filter(|&r| self.is_wevel_memo(r, memo))
                .collect();
            matches!(self.cpot_of(&inner), Ok(p) if p == self.members(x))
        };
        memo.insert(x, v);
        v
    }

    /// Wevel recognizer by searching for a witnessing wistory among the
    /// bland members of `x`. `None` when the search space exceeds `2^max_bits`.
    pub fn is_wevel_by_wistory(&self, x: ObjId, max_bits: usize) -> Option<bool> {
        if !self.is_bland(x) {
            return Some(false);
        }
        let cands: Vec<ObjId> = self.members(x).iter().copied().filter(|&r| self.is_bland(r)).collect();
        if cands.len() > max_bits {
            return None;
        }
        for mask in 0u64..(1u64 << cands.len()) {
            let h: Vec<ObjId> = (0..cands.len()).filter(|i| mask >> i & 1 == 1).map(|i| cands[i]).collect();
            if !matches!(self.cpot_of(&h), Ok(p) if p == self.members(x)) {
                continue;
            }
            let wistory = h.iter().all(|&a| {
                let meet: Vec<ObjId> = h.iter().copied().filter(|r| self.members(a).binary_search(r).is_ok()).collect();
                matches!(self.cpot_of(&meet), Ok(p) if p == self.members(a))
            });
            if wistory {
                return Some(true);
            }
        }
        Some(false)
    }

    /// Index of the least wevel at which `a` is found, computed from the
    /// definition rather than read off the build.
    pub fn wevof_index(&self, a: ObjId) -> Result<usize> {
        self.wevels
            .iter()
            .position(|&s| self.cfoundat(a, s))
            .ok_or_else(|| Error::BeyondFragment(format!("wevel of {}", self.render(a))))
    }

    pub fn wevof(&self, a: ObjId) -> Result<ObjId> {
        Ok(self.wevels[self.wevof_index(a)?])
    }

    // ---- Hereditary blandness ---- //

    /// Bland, with a transitive all-bland superset in the fragment.
    pub fn hereditarily_bland(&self, a: ObjId) -> bool {
        if !self.is_bland(a) {
            return false;
        }
        let mut closure: HashSet<ObjId> = HashSet::new();
        let mut stack: Vec<ObjId> = self.members(a).to_vec();
        while let Some(x) = stack.pop() {
            if !self.is_bland(x) {
                return false;
            }
            if closure.insert(x) {
                stack.extend_from_slice(self.members(x));
            }
        }
        let mut c: Vec<ObjId> = closure.into_iter().collect();
        c.sort();
        if self.find_bland(&c).is_some() {
            return true;
        }
        // any transitive all-bland superset will do
        (0..self.len()).any(|s| {
            self.is_bland(s) && {
                let sm = self.members(s);
                c.iter().all(|x| sm.binary_search(x).is_ok())
                    && sm.iter().all(|&x| {
                        self.is_bland(x) && self.members(x).iter().all(|y| sm.binary_search(y).is_ok())
                    })
            }
        })
    }

    /// `{x ∈ a : x hereditarily bland}`
    pub fn breve_set(&self, a: ObjId) -> Result<Vec<ObjId>> {
        if !self.is_bland(a) {
            return Err(Error::NotBland);
        }
        Ok(self.members(a).iter().copied().filter(|&x| self.hereditarily_bland(x)).collect())
    }

    pub fn breve(&self, a: ObjId) -> Result<ObjId> {
        let s = self.breve_set(a)?;
        self.find_bland(&s)
            .ok_or_else(|| Error::BeyondFragment(format!("breve of {}", self.render(a))))
    }

    // ---- Levels over urelements ---- //

    /// `Tlev_α^U` by recursion, as a sorted id list.
    ///
    /// Fails with `BeyondFragment` when some bland subset of an earlier
    /// level would lie outside the fragment.
    pub fn tlev(&self, alpha: usize, u: &[ObjId]) -> Result<Vec<ObjId>> {
        let mut base: Vec<ObjId> = u.to_vec();
        base.sort();
        base.dedup();
        let mut levels = vec![base.clone()];
        for _ in 1..=alpha {
            let prev = levels.last().expect("nonempty");
            if let Some(&top) = prev.iter().max_by_key(|&&x| self.objs[x].ordrank) {
                if self.objs[top].ordrank + 1 >= self.depth {
                    return Err(Error::BeyondFragment("level outgrows the fragment".into()));
                }
            }
            let earlier: Vec<&Vec<ObjId>> = levels.iter().collect();
            let mut next: Vec<ObjId> = (0..self.len())
                .filter(|&x| {
                    self.is_bland(x)
                        && earlier
                            .iter()
                            .any(|l| self.members(x).iter().all(|y| l.binary_search(y).is_ok()))
                })
                .collect();
            next.extend_from_slice(&base);
            next.sort();
            next.dedup();
            levels.push(next);
        }
        Ok(levels.pop().expect("nonempty"))
    }

    /// Does `x` belong to some level over `u` that fits in the fragment?
    pub fn vfrom(&self, u: &[ObjId], x: ObjId) -> bool {
        let mut alpha = 0;
        let mut last_len = usize::MAX;
        while let Ok(l) = self.tlev(alpha, u) {
            if l.binary_search(&x).is_ok() {
                return true;
            }
            if l.len() == last_len {
                return false;
            }
            last_len = l.len();
            alpha += 1;
        }
        false
    }

    /// `pot_U(A)` over the fragment.
    fn pot_u(&self, u: &[ObjId], a: &[ObjId]) -> Vec<ObjId> {
        let mut out: Vec<ObjId> = (0..self.len())
            .filter(|&x| {
                self.is_bland(x)
                    && a.iter().any(|&c| {
                        let cm = self.members(c);
                        self.members(x).iter().all(|y| cm.binary_search(y).is_ok())
                    })
            })
            .collect();
        out.extend_from_slice(u);
        out.sort();
        out.dedup();
        out
    }

    /// Non-recursive recognizer: is the id set `t` a level over `u`?
    /// `None` when the history search exceeds `2^max_bits` candidates.
    pub fn is_level_u(&self, u: &[ObjId], t: &[ObjId], max_bits: usize) -> Option<bool> {
        let mut t = t.to_vec();
        t.sort();
        t.dedup();
        let cands: Vec<ObjId> = t.iter().copied().filter(|&x| self.is_bland(x)).collect();
        if cands.len() > max_bits {
            return None;
        }
        for mask in 0u64..(1u64 << cands.len()) {
            let h: Vec<ObjId> = (0..cands.len()).filter(|i| mask >> i & 1 == 1).map(|i| cands[i]).collect();
            if self.pot_u(u, &h) != t {
                continue;
            }
            let hist = h.iter().all(|&x| {
                let meet: Vec<ObjId> = h.iter().copied().filter(|r| self.members(x).binary_search(r).is_ok()).collect();
                self.pot_u(u, &meet) == self.members(x)
            });
            if hist {
                return Some(true);
            }
        }
        Some(false)
    }

    // ---- Tap paths ---- //

    /// A bland base and the wands that reach `a` from it, innermost first.
    ///
    /// At each step the least wand of the minimal-rank class is taken.
    pub fn decompose(&self, a: ObjId) -> (ObjId, Vec<usize>) {
        let mut path = Vec::new();
        let mut cur = a;
        while let ObjKind::Tapped(c) = &self.objs[cur].kind {
            let (w, b) = c[0];
            path.push(w);
            cur = b;
        }
        path.reverse();
        (cur, path)
    }

    /// Fold taps over `path`, starting from `base`.
    pub fn bigtap(&self, base: ObjId, path: &[usize]) -> Result<ObjId> {
        let mut cur = base;
        for (i, &w) in path.iter().enumerate() {
            cur = self.tap(w, cur)?.ok_or(Error::TapUndefinedAt(i))?;
        }
        Ok(cur)
    }
}

struct RefParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl RefParser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        self.pos += c.is_some() as usize;
        c
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::ParseError { offset: start, msg: "expected a number".into() })
    }

    fn error(&self, msg: &str) -> Error {
        Error::ParseError {
            offset: self.pos,
            msg: msg.into(),
        }
    }
}

fn sampled_subsets(
    n: usize,
    last: usize,
    max_card: usize,
    start: usize,
    combo: &mut Vec<ObjId>,
    emit: &mut dyn FnMut(&[ObjId]) -> bool,
) -> bool {
    if combo.last().is_some_and(|&x| x >= last) && !emit(combo) {
        return false;
    }
    if combo.len() == max_card {
        return true;
    }
    for i in start..n {
        combo.push(i);
        let go = sampled_subsets(n, last, max_card, i + 1, combo, emit);
        combo.pop();
        if !go {
            return false;
        }
    }
    true
}
