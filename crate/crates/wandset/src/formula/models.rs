//! Finite models over fragments, pure-set levels and conch stages.

use super::{Model, Signature};
use crate::conch::ConchStages;
use crate::error::{Error, Result};
use crate::instances::{n_equiv, varin};
use crate::pureset::{is_carrier, kpair, lt_levels, theta, ufrom, uncarrier, PureSet};
use crate::universe::Fragment;
use crate::wandspec::{SetQuery, WandSpec};
use std::collections::HashMap;

/// Largest carrier for which pairwise tables are precomputed.
const TABLE_LIMIT: usize = 4096;

/// Square boolean table indexed `[x * n + y]`.
fn table(n: usize, mut f: impl FnMut(usize, usize) -> Result<bool>) -> Result<Vec<bool>> {
    if n > TABLE_LIMIT {
        return Err(Error::CapExceeded {
            needed: n as u128,
            cap: TABLE_LIMIT,
        });
    }
    let mut t = vec![false; n * n];
    for x in 0..n {
        for y in 0..n {
            t[x * n + y] = f(x, y)?;
        }
    }
    Ok(t)
}

/// The natural number coded by each wand of a Church spec, by wand index.
fn church_nats(spec: &dyn WandSpec) -> Option<Vec<usize>> {
    if !spec.name().starts_with("church") {
        return None;
    }
    spec.wands().iter().map(|w| w.code.as_nat()).collect()
}

/// A fragment read in the wand/set signature.
///
/// Besides the primitives it answers `Dom(w, a)` and `Equiv(w, a, u, b)`
/// from the spec, and for Church specs `NEquiv(n, x, y)`, which holds when
/// `n` is a nonzero wand and `x ≈_n y`. Taps that land past the last stage
/// are false.
pub struct WsModel<'a> {
    frag: &'a Fragment,
    nats: Option<Vec<usize>>,
}

impl<'a> WsModel<'a> {
    pub fn new(frag: &'a Fragment) -> WsModel<'a> {
        WsModel {
            frag,
            nats: church_nats(frag.spec()),
        }
    }

    fn nat(&self, n: usize) -> Option<usize> {
        let i = self.frag.wand_index(n)?;
        self.nats.as_ref().map(|v| v[i])
    }
}

impl Model for WsModel<'_> {
    fn len(&self) -> usize {
        self.frag.len()
    }

    fn signature(&self) -> Signature {
        Signature::Ws
    }

    fn bland(&self, x: usize) -> bool {
        self.frag.is_bland(x)
    }

    fn wand(&self, x: usize) -> bool {
        self.frag.wand_index(x).is_some()
    }

    fn member(&self, x: usize, y: usize) -> bool {
        self.frag.members(y).binary_search(&x).is_ok()
    }

    fn tap(&self, w: usize, a: usize, c: usize) -> bool {
        match self.frag.wand_index(w) {
            Some(i) => self.frag.tap(i, a) == Ok(Some(c)),
            None => false,
        }
    }

    fn has_pred(&self, name: &str, arity: usize) -> bool {
        matches!((name, arity), ("Dom", 2) | ("Equiv", 4)) || (name == "NEquiv" && arity == 3 && self.nats.is_some())
    }

    fn pred(&self, name: &str, args: &[usize]) -> bool {
        let wi = |x: usize| self.frag.wand_index(x);
        match name {
            "Dom" => wi(args[0]).is_some_and(|w| self.frag.wrapped().dom(w, args[1])),
            "Equiv" => match (wi(args[0]), wi(args[2])) {
                (Some(w), Some(u)) => self.frag.wrapped().equiv(w, args[1], u, args[3]),
                _ => false,
            },
            "NEquiv" => match self.nat(args[0]) {
                Some(n) if n > 0 => n_equiv(self.frag, args[1], args[2], n).is_some(),
                _ => false,
            },
            _ => panic!("WS model has no predicate {name}"),
        }
    }

    fn label(&self, x: usize) -> String {
        self.frag.render(x)
    }
}

/// The pure sets of `V_depth` with membership, and the spec's wand codes as
/// the wand predicate.
///
/// These are exactly the hereditarily bland objects of a fragment of
/// `depth` stages.
pub struct LtModel {
    sets: Vec<PureSet>,
    members: Vec<bool>,
    wands: Vec<bool>,
}

impl LtModel {
    pub fn new(spec: &dyn WandSpec, depth: usize) -> Result<LtModel> {
        let levels = lt_levels(depth + 1, TABLE_LIMIT)?;
        let sets: Vec<PureSet> = levels.last().expect("depth + 1 levels").elements().to_vec();
        let members = table(sets.len(), |x, y| Ok(sets[y].contains(&sets[x])))?;
        let wands = sets.iter().map(|s| spec.wands().iter().any(|w| &w.code == s)).collect();
        Ok(LtModel { sets, members, wands })
    }

    pub fn sets(&self) -> &[PureSet] {
        &self.sets
    }
}

impl Model for LtModel {
    fn len(&self) -> usize {
        self.sets.len()
    }

    fn signature(&self) -> Signature {
        Signature::Lt
    }

    fn wand(&self, x: usize) -> bool {
        self.wands[x]
    }

    fn member(&self, x: usize, y: usize) -> bool {
        self.members[x * self.sets.len() + y]
    }

    fn label(&self, x: usize) -> String {
        self.sets[x].to_string()
    }
}

/// Pure sets carrying the conch construction, in the level-theory signature.
///
/// The carrier is every generated conch (by handle) followed by the members
/// of `V_3`, none of which is a conch, so that translations relativized to
/// conches have something to exclude. Defined predicates:
///
/// - `Conch(x)`, `Carrier(x)`, `Ufrom0(x)` (built from carriers alone)
/// - `InCarrier(x, y)`: `y` is a carrier and `x` lies in what it carries
/// - `WandCode(w)`: `w` is the image of a wand code under `Θ`
/// - `DomAt(w, a)`: `⟨w, a⟩ ∈ Dom_σ` for `σ` the conchrank of `a`
/// - `EquivAt(w, a, u, b)`: `⟨w, a, u, b⟩ ∈ Equiv_σ` for the larger conchrank
/// - `RankLe(b, a)`: both are conches and `b`'s conchrank is at most `a`'s
/// - `PairIn(u, b, c)`: `⟨u, b⟩ ∈ c`
pub struct ConchModel<'a> {
    cs: &'a ConchStages,
    sets: Vec<PureSet>,
    members: Vec<bool>,
    in_carrier: Vec<bool>,
    carrier: Vec<bool>,
    ufrom0: Vec<bool>,
    wand_lt: Vec<bool>,
    wand_code: Vec<bool>,
    index: HashMap<PureSet, usize>,
}

impl<'a> ConchModel<'a> {
    pub fn new(cs: &'a ConchStages) -> Result<ConchModel<'a>> {
        let mut sets: Vec<PureSet> = (0..cs.len()).map(|h| cs.conch(h).clone()).collect();
        let noise = lt_levels(4, 16)?.pop().expect("four levels");
        sets.extend(noise.elements().iter().filter(|s| cs.handle(s).is_none()).cloned());
        let n = sets.len();
        let members = table(n, |x, y| Ok(sets[y].contains(&sets[x])))?;
        let carried: Vec<Option<PureSet>> = sets.iter().map(|s| uncarrier(s).ok()).collect();
        let in_carrier = table(n, |x, y| Ok(carried[y].as_ref().is_some_and(|c| c.contains(&sets[x]))))?;
        let codes: Vec<PureSet> = cs.spec().wands().iter().map(|w| w.code.clone()).collect();
        let thetas: Vec<PureSet> = codes.iter().map(theta).collect();
        Ok(ConchModel {
            cs,
            carrier: sets.iter().map(is_carrier).collect(),
            ufrom0: sets.iter().map(|s| ufrom(&[], s)).collect(),
            wand_lt: sets.iter().map(|s| codes.contains(s)).collect(),
            wand_code: sets.iter().map(|s| thetas.contains(s)).collect(),
            index: sets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect(),
            sets,
            members,
            in_carrier,
        })
    }

    pub fn sets(&self) -> &[PureSet] {
        &self.sets
    }

    /// Position of a pure set in the carrier.
    pub fn position(&self, s: &PureSet) -> Option<usize> {
        self.index.get(s).copied()
    }

    fn is_conch(&self, x: usize) -> bool {
        x < self.cs.len()
    }

    fn wand_at(&self, x: usize) -> Option<usize> {
        if self.is_conch(x) {
            self.cs.wand_at(x)
        } else {
            None
        }
    }
}

impl Model for ConchModel<'_> {
    fn len(&self) -> usize {
        self.sets.len()
    }

    fn signature(&self) -> Signature {
        Signature::Lt
    }

    fn wand(&self, x: usize) -> bool {
        self.wand_lt[x]
    }

    fn member(&self, x: usize, y: usize) -> bool {
        self.members[x * self.sets.len() + y]
    }

    fn has_pred(&self, name: &str, arity: usize) -> bool {
        matches!(
            (name, arity),
            ("Conch", 1)
                | ("Carrier", 1)
                | ("Ufrom0", 1)
                | ("WandCode", 1)
                | ("InCarrier", 2)
                | ("DomAt", 2)
                | ("RankLe", 2)
                | ("PairIn", 3)
                | ("EquivAt", 4)
        )
    }

    fn pred(&self, name: &str, args: &[usize]) -> bool {
        let n = self.sets.len();
        match name {
            "Conch" => self.is_conch(args[0]),
            "Carrier" => self.carrier[args[0]],
            "Ufrom0" => self.ufrom0[args[0]],
            "WandCode" => self.wand_code[args[0]],
            "InCarrier" => self.in_carrier[args[0] * n + args[1]],
            "DomAt" => self.is_conch(args[1]) && self.wand_at(args[0]).is_some_and(|w| self.cs.dom_at(w, args[1])),
            "RankLe" => self.is_conch(args[0]) && self.is_conch(args[1]) && self.cs.level(args[0]) <= self.cs.level(args[1]),
            "PairIn" => self.sets[args[2]].contains(&kpair(&self.sets[args[0]], &self.sets[args[1]])),
            "EquivAt" => match (self.wand_at(args[0]), self.wand_at(args[2])) {
                (Some(w), Some(u)) if self.is_conch(args[1]) && self.is_conch(args[3]) => {
                    self.cs.equiv_at(w, args[1], u, args[3])
                }
                _ => false,
            },
            _ => panic!("conch model has no predicate {name}"),
        }
    }

    fn label(&self, x: usize) -> String {
        self.sets[x].to_string()
    }
}

/// A Church fragment read with membership alone, where membership is the
/// expansive one (complements and cardinals have members).
///
/// `WandE(n)` picks out the wands and `NEquiv(n, x, y)` is `x ≈_n y` for a
/// nonzero wand `n`; both are read off the fragment.
pub struct EModel<'a> {
    frag: &'a Fragment,
    members: Vec<bool>,
    nats: Vec<usize>,
}

impl<'a> EModel<'a> {
    pub fn new(frag: &'a Fragment) -> Result<EModel<'a>> {
        let nats = church_nats(frag.spec())
            .ok_or_else(|| Error::Data(format!("spec `{}` is not a Church spec", frag.spec().name())))?;
        let members = table(frag.len(), |x, a| varin(frag, x, a))?;
        Ok(EModel { frag, members, nats })
    }
}

impl Model for EModel<'_> {
    fn len(&self) -> usize {
        self.frag.len()
    }

    fn signature(&self) -> Signature {
        Signature::E
    }

    fn member(&self, x: usize, y: usize) -> bool {
        self.members[x * self.frag.len() + y]
    }

    fn has_pred(&self, name: &str, arity: usize) -> bool {
        matches!((name, arity), ("NEquiv", 3) | ("WandE", 1))
    }

    fn pred(&self, name: &str, args: &[usize]) -> bool {
        match name {
            "WandE" => self.frag.wand_index(args[0]).is_some(),
            "NEquiv" => match self.frag.wand_index(args[0]).map(|i| self.nats[i]) {
                Some(n) if n > 0 => n_equiv(self.frag, args[1], args[2], n).is_some(),
                _ => false,
            },
            _ => panic!("E model has no predicate {name}"),
        }
    }

    fn label(&self, x: usize) -> String {
        self.frag.render(x)
    }
}
