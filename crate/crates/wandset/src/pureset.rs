//! Interned hereditarily finite sets.
//!
//! Every [`PureSet`] is hash-consed through one process-wide table, so two
//! handles are equal exactly when they denote the same set. Elements are kept
//! sorted by the canonical order (rank, cardinality, then elementwise).

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, LazyLock, Mutex};

use crate::error::{Error, Result};

struct Node {
    id: u64,
    rank: u32,
    elems: Box<[PureSet]>,
}

/// Handle to an interned hereditarily finite set.
#[derive(Clone)]
pub struct PureSet(Arc<Node>);

struct Table {
    next: u64,
    map: HashMap<Box<[u64]>, PureSet>,
}

static TABLE: LazyLock<Mutex<Table>> = LazyLock::new(|| {
    Mutex::new(Table {
        next: 0,
        map: HashMap::new(),
    })
});

fn intern(sorted: Vec<PureSet>) -> PureSet {
    let key: Box<[u64]> = sorted.iter().map(|e| e.0.id).collect();
    let mut table = TABLE.lock().unwrap_or_else(|p| p.into_inner());
    if let Some(s) = table.map.get(&key) {
        return s.clone();
    }
    let rank = sorted.iter().map(|e| e.0.rank + 1).max().unwrap_or(0);
    let id = table.next;
    table.next += 1;
    let s = PureSet(Arc::new(Node {
        id,
        rank,
        elems: sorted.into_boxed_slice(),
    }));
    table.map.insert(key, s.clone());
    s
}

/// Build the set with the given elements, deduplicated and sorted.
pub fn mk_set(mut elems: Vec<PureSet>) -> PureSet {
    elems.sort();
    elems.dedup();
    intern(elems)
}

impl PureSet {
    pub fn empty() -> PureSet {
        intern(Vec::new())
    }

    /// `{a}`
    pub fn singleton(a: PureSet) -> PureSet {
        intern(vec![a])
    }

    /// Cumulative rank: 0 for the empty set, else one more than the largest element rank.
    pub fn rank(&self) -> usize {
        self.0.rank as usize
    }

    pub fn elements(&self) -> &[PureSet] {
        &self.0.elems
    }

    pub fn len(&self) -> usize {
        self.0.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elems.is_empty()
    }

    /// Opaque interning id; stable for the life of the process.
    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn contains(&self, x: &PureSet) -> bool {
        self.0.elems.binary_search(x).is_ok()
    }

    pub fn is_subset(&self, other: &PureSet) -> bool {
        self.0.elems.iter().all(|e| other.contains(e))
    }

    /// The von Neumann natural `n`.
    pub fn nat(n: usize) -> PureSet {
        let mut elems = Vec::with_capacity(n);
        for _ in 0..n {
            let next = intern(elems.clone());
            elems.push(next);
        }
        intern(elems)
    }

    /// Inverse of [`PureSet::nat`].
    pub fn as_nat(&self) -> Option<usize> {
        let n = self.len();
        for (i, e) in self.elements().iter().enumerate() {
            if e.rank() != i || e.as_nat() != Some(i) {
                return None;
            }
        }
        Some(n)
    }
}

impl PartialEq for PureSet {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for PureSet {}

impl Hash for PureSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

impl Ord for PureSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0.id == other.0.id {
            return Ordering::Equal;
        }
        self.rank()
            .cmp(&other.rank())
            .then(self.len().cmp(&other.len()))
            .then_with(|| self.elements().cmp(other.elements()))
    }
}

impl PartialOrd for PureSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for PureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PureSet {
    type Err = Error;

    /// Parse brace notation such as `{{},{{}}}`; whitespace is ignored.
    fn from_str(s: &str) -> Result<PureSet> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let set = parse_braces(bytes, &mut pos)?;
        skip_ws(bytes, &mut pos);
        if pos != bytes.len() {
            return Err(Error::ParseError {
                offset: pos,
                msg: "trailing input".into(),
            });
        }
        Ok(set)
    }
}

fn skip_ws(b: &[u8], pos: &mut usize) {
    while *pos < b.len() && b[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_braces(b: &[u8], pos: &mut usize) -> Result<PureSet> {
    skip_ws(b, pos);
    if b.get(*pos) != Some(&b'{') {
        return Err(Error::ParseError {
            offset: *pos,
            msg: "expected `{`".into(),
        });
    }
    *pos += 1;
    let mut elems = Vec::new();
    skip_ws(b, pos);
    if b.get(*pos) == Some(&b'}') {
        *pos += 1;
        return Ok(PureSet::empty());
    }
    loop {
        elems.push(parse_braces(b, pos)?);
        skip_ws(b, pos);
        match b.get(*pos) {
            Some(b',') => *pos += 1,
            Some(b'}') => {
                *pos += 1;
                return Ok(mk_set(elems));
            }
            _ => {
                return Err(Error::ParseError {
                    offset: *pos,
                    msg: "expected `,` or `}`".into(),
                })
            }
        }
    }
}

// ---- Pairs and carriers ---- //

/// Kuratowski pair `{{a},{a,b}}`.
pub fn kpair(a: &PureSet, b: &PureSet) -> PureSet {
    mk_set(vec![
        PureSet::singleton(a.clone()),
        mk_set(vec![a.clone(), b.clone()]),
    ])
}

pub fn kunpair(p: &PureSet) -> Result<(PureSet, PureSet)> {
    match p.elements() {
        [s] if s.len() == 1 => {
            let a = s.elements()[0].clone();
            Ok((a.clone(), a))
        }
        [x, y] => {
            // the singleton sorts first: it has no larger rank and fewer elements
            let (s, d) = if x.len() == 1 { (x, y) } else { (y, x) };
            if s.len() != 1 || d.len() != 2 {
                return Err(Error::NotAPair);
            }
            let a = &s.elements()[0];
            if !d.contains(a) {
                return Err(Error::NotAPair);
            }
            let b = d.elements().iter().find(|e| *e != a).ok_or(Error::NotAPair)?;
            Ok((a.clone(), b.clone()))
        }
        _ => Err(Error::NotAPair),
    }
}

/// `{⟨∅, a⟩}`, the code of a bland conch with contents `a`.
pub fn carrier(a: &PureSet) -> PureSet {
    PureSet::singleton(kpair(&PureSet::empty(), a))
}

pub fn uncarrier(c: &PureSet) -> Result<PureSet> {
    match c.elements() {
        [p] => match kunpair(p) {
            Ok((z, a)) if z.is_empty() => Ok(a),
            _ => Err(Error::NotACarrier),
        },
        _ => Err(Error::NotACarrier),
    }
}

pub fn is_carrier(c: &PureSet) -> bool {
    uncarrier(c).is_ok()
}

// ---- Theta ---- //

/// `Θa = carrier({Θx : x ∈ a})`.
pub fn theta(a: &PureSet) -> PureSet {
    let mut memo = HashMap::new();
    theta_memo(a, &mut memo)
}

fn theta_memo(a: &PureSet, memo: &mut HashMap<PureSet, PureSet>) -> PureSet {
    if let Some(t) = memo.get(a) {
        return t.clone();
    }
    let inner = a.elements().iter().map(|x| theta_memo(x, memo)).collect();
    let t = carrier(&mk_set(inner));
    memo.insert(a.clone(), t.clone());
    t
}

pub fn theta_inv(c: &PureSet) -> Result<PureSet> {
    let inner = uncarrier(c).map_err(|_| Error::NotInThetaImage)?;
    let elems = inner
        .elements()
        .iter()
        .map(theta_inv)
        .collect::<Result<Vec<_>>>()?;
    Ok(mk_set(elems))
}

// ---- Levels over urelements ---- //

/// The level `Ulev_α^U`, as a sorted list.
///
/// `max_size` bounds the number of sets in any intermediate level.
pub fn ulev(alpha: usize, u: &[PureSet], max_size: usize) -> Result<Vec<PureSet>> {
    let base: Vec<PureSet> = {
        let mut v = u.to_vec();
        v.sort();
        v.dedup();
        v
    };
    let mut levels: Vec<Vec<PureSet>> = vec![base.clone()];
    for _ in 1..=alpha {
        let prev = levels.last().expect("at least one level");
        let needed = 1u128.checked_shl(prev.len() as u32).unwrap_or(u128::MAX) + base.len() as u128;
        if needed > max_size as u128 {
            return Err(Error::DepthCapExceeded {
                needed,
                cap: max_size,
            });
        }
        let mut next: HashSet<PureSet> = base.iter().cloned().collect();
        // levels are monotone, so subsets of the previous level cover every earlier one
        for mask in 0u64..(1u64 << prev.len()) {
            let sub = prev
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, x)| x.clone())
                .collect();
            next.insert(carrier(&mk_set(sub)));
        }
        let mut next: Vec<PureSet> = next.into_iter().collect();
        next.sort();
        levels.push(next);
    }
    Ok(levels.pop().expect("at least one level"))
}

/// Does `x` lie in some `Ulev_α^U`?
pub fn ufrom(u: &[PureSet], x: &PureSet) -> bool {
    if u.contains(x) {
        return true;
    }
    match uncarrier(x) {
        Ok(inner) => inner.elements().iter().all(|y| ufrom(u, y)),
        Err(_) => false,
    }
}

/// `pot_U(a)` read on pure sets, where carriers play the bland sets and
/// membership means membership in the uncarried contents.
fn pot_u(u: &[PureSet], a: &[PureSet]) -> Vec<PureSet> {
    let mut out: HashSet<PureSet> = u.iter().cloned().collect();
    for c in a {
        if let Ok(inner) = uncarrier(c) {
            let elems = inner.elements();
            for mask in 0u64..(1u64 << elems.len()) {
                let sub = elems
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, x)| x.clone())
                    .collect();
                out.insert(carrier(&mk_set(sub)));
            }
        }
    }
    let mut v: Vec<PureSet> = out.into_iter().collect();
    v.sort();
    v
}

/// Non-recursive recognizer: is `carrier(t)` a level over `U`, witnessed by
/// some history drawn from the carriers inside `t`?
pub fn is_level_u(u: &[PureSet], t: &[PureSet]) -> bool {
    let candidates: Vec<&PureSet> = t.iter().filter(|x| is_carrier(x)).collect();
    if candidates.len() > 20 {
        return false;
    }
    let mut t_sorted = t.to_vec();
    t_sorted.sort();
    t_sorted.dedup();
    for mask in 0u64..(1u64 << candidates.len()) {
        let h: Vec<PureSet> = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, x)| (*x).clone())
            .collect();
        let is_history = h.iter().all(|x| {
            let inner = uncarrier(x).expect("candidate is a carrier");
            let below: Vec<PureSet> = h.iter().filter(|y| inner.contains(y)).cloned().collect();
            pot_u(u, &below) == inner.elements()
        });
        if is_history && pot_u(u, &h) == t_sorted {
            return true;
        }
    }
    false
}

// ---- Plain levels ---- //

/// The first `n` levels `V_0, V_1, ...` of the cumulative hierarchy.
pub fn lt_levels(n: usize, max_size: usize) -> Result<Vec<PureSet>> {
    let mut out = Vec::with_capacity(n);
    let mut cur = PureSet::empty();
    for _ in 0..n {
        out.push(cur.clone());
        let k = cur.len();
        let needed = 1u128.checked_shl(k as u32).unwrap_or(u128::MAX);
        if out.len() < n {
            if needed > max_size as u128 {
                return Err(Error::DepthCapExceeded {
                    needed,
                    cap: max_size,
                });
            }
            cur = powerset(&cur);
        }
    }
    Ok(out)
}

pub fn powerset(s: &PureSet) -> PureSet {
    let elems = s.elements();
    let mut subs = Vec::with_capacity(1 << elems.len());
    for mask in 0u64..(1u64 << elems.len()) {
        subs.push(intern(
            elems
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, x)| x.clone())
                .collect(),
        ));
    }
    mk_set(subs)
}

/// `{x : ∃r ∈ a, x ⊆ r}`
pub fn pot(a: &PureSet) -> PureSet {
    let mut all = Vec::new();
    for r in a.elements() {
        all.extend(powerset(r).elements().iter().cloned());
    }
    mk_set(all)
}

/// Level recognizer: `s = pot(h)` for some history `h ⊆ s`, where every
/// `x ∈ h` satisfies `x = pot(x ∩ h)`.
pub fn is_lt_level(s: &PureSet) -> bool {
    let elems = s.elements();
    if elems.len() > 20 {
        return false;
    }
    for mask in 0u64..(1u64 << elems.len()) {
        let h = intern(
            elems
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, x)| x.clone())
                .collect(),
        );
        let is_history = h.elements().iter().all(|x| {
            let meet = mk_set(h.elements().iter().filter(|y| x.contains(y)).cloned().collect());
            pot(&meet) == *x
        });
        if is_history && pot(&h) == *s {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e() -> PureSet {
        PureSet::empty()
    }
    fn s(x: &str) -> PureSet {
        x.parse().unwrap()
    }

    #[test]
    fn construction_basics() {
        assert_eq!(mk_set(vec![]), e());
        assert_eq!(mk_set(vec![e(), e()]), s("{{}}"));
        let a = mk_set(vec![s("{{}}"), e()]);
        assert_eq!(a.elements(), &[e(), s("{{}}")]);
        assert_eq!(a.to_string(), "{{},{{}}}");
        assert_eq!(mk_set(vec![a.clone()]), mk_set(vec![a.clone(), a]));
    }

    #[test]
    fn ranks() {
        assert_eq!(e().rank(), 0);
        assert_eq!(s("{{}}").rank(), 1);
        assert_eq!(s("{{{}},{}}").rank(), 2);
    }

    #[test]
    fn pairs() {
        // {{∅},{∅,∅}} collapses to {{∅}}
        assert_eq!(kpair(&e(), &e()), s("{{{}}}"));
        assert_eq!(kunpair(&s("{{{}}}")).unwrap(), (e(), e()));
        assert_eq!(kunpair(&s("{{}}")), Err(Error::NotAPair));
        let a = s("{{}}");
        let b = s("{{{}}}");
        assert_eq!(kunpair(&kpair(&a, &b)).unwrap(), (a.clone(), b.clone()));
        assert_eq!(kunpair(&kpair(&b, &a)).unwrap(), (b, a));
    }

    #[test]
    fn carriers() {
        assert_eq!(carrier(&e()), s("{{{{}}}}"));
        assert_eq!(uncarrier(&s("{{{{}}}}")).unwrap(), e());
        assert_eq!(uncarrier(&e()), Err(Error::NotACarrier));
        assert_eq!(carrier(&e()).rank(), 3);
        let a = s("{{},{{}}}");
        assert_eq!(carrier(&a).rank(), a.rank() + 3);
    }

    #[test]
    fn theta_small() {
        assert_eq!(theta(&e()), s("{{{{}}}}"));
        let one = theta(&s("{{}}"));
        assert_eq!(one, carrier(&mk_set(vec![s("{{{{}}}}")])));
        assert_eq!(theta_inv(&one).unwrap(), s("{{}}"));
        assert_eq!(theta_inv(&s("{{}}")), Err(Error::NotInThetaImage));
    }

    #[test]
    fn ulev_small() {
        assert!(ulev(0, &[], 100).unwrap().is_empty());
        assert_eq!(ulev(1, &[], 100).unwrap(), vec![carrier(&e())]);
        for n in 0..=4 {
            let lev = mk_set(ulev(n, &[], 1 << 17).unwrap());
            assert_eq!(lev.rank(), 4 * n);
        }
        assert!(matches!(ulev(6, &[], 1 << 17), Err(Error::DepthCapExceeded { .. })));
    }

    #[test]
    fn ulev_matches_recognizer() {
        let urs = [s("{{{{}}}}")];
        for u in [&[][..], &urs[..]] {
            for n in 0..=3 {
                let lev = ulev(n, u, 1 << 10).unwrap();
                assert!(is_level_u(u, &lev), "level {n}");
                for x in &lev {
                    assert!(ufrom(u, x));
                }
            }
        }
        // the contents of a level with one extra stray carrier are not a level
        let mut lev = ulev(2, &[], 100).unwrap();
        lev.push(carrier(&mk_set(vec![carrier(&carrier(&e()))])));
        assert!(!is_level_u(&[], &lev));
    }

    #[test]
    fn lt_levels_sizes() {
        let levels = lt_levels(5, 1 << 17).unwrap();
        let sizes: Vec<usize> = levels.iter().map(|l| l.len()).collect();
        assert_eq!(sizes, vec![0, 1, 2, 4, 16]);
        assert_eq!(levels[2], s("{{},{{}}}"));
        for l in &levels[..4] {
            assert!(is_lt_level(l));
        }
        assert!(!is_lt_level(&s("{{{}}}")));
    }

    #[test]
    fn naturals() {
        assert_eq!(PureSet::nat(0), e());
        assert_eq!(PureSet::nat(2), s("{{},{{}}}"));
        assert_eq!(PureSet::nat(3).as_nat(), Some(3));
        assert_eq!(s("{{{}}}").as_nat(), None);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("{".parse::<PureSet>(), Err(Error::ParseError { .. })));
        assert!(matches!("{}x".parse::<PureSet>(), Err(Error::ParseError { offset: 2, .. })));
    }
}
