//! Identity-preserving translations between the signatures.
//!
//! Each translation rewrites atoms by a fixed clause table and relativizes
//! quantifiers to a domain formula. Variables introduced by the clauses get
//! fresh names of the form `name_k`, chosen to avoid every variable of the
//! input, so no clause can capture a variable of the formula it is applied to.

use super::*;
use crate::error::{Error, Result};
use crate::conch::gen_stages;
use crate::report::{Check, Report};
use crate::universe::Fragment;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Translation {
    /// Level theory into the hereditarily bland objects.
    Tau,
    /// Wand/set theory into conches.
    ToLt,
    /// Church's theory into membership alone.
    Bullet,
    /// Membership alone back into Church's theory, reading `In` as the
    /// expansive membership.
    Circle,
    /// `Bullet` followed by `Circle`.
    BulletCircle,
    /// `Circle` followed by `Bullet`.
    CircleBullet,
}

impl Translation {
    pub const ALL: [Translation; 6] = [
        Translation::Tau,
        Translation::ToLt,
        Translation::Bullet,
        Translation::Circle,
        Translation::BulletCircle,
        Translation::CircleBullet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Translation::Tau => "tau",
            Translation::ToLt => "tolt",
            Translation::Bullet => "bullet",
            Translation::Circle => "circle",
            Translation::BulletCircle => "bullet-circle",
            Translation::CircleBullet => "circle-bullet",
        }
    }

    pub fn source(self) -> Signature {
        match self {
            Translation::Tau => Signature::Lt,
            Translation::ToLt | Translation::Bullet | Translation::BulletCircle => Signature::Ws,
            Translation::Circle | Translation::CircleBullet => Signature::E,
        }
    }

    pub fn target(self) -> Signature {
        match self {
            Translation::Tau | Translation::Circle | Translation::BulletCircle => Signature::Ws,
            Translation::ToLt => Signature::Lt,
            Translation::Bullet | Translation::CircleBullet => Signature::E,
        }
    }

    /// Translate `f`, which must use only primitives of [`Self::source`].
    /// Defined predicates are carried over unless the clause table says
    /// otherwise.
    pub fn apply(self, f: &Formula) -> Result<Formula> {
        if let Some(a) = f.atoms().into_iter().find(|a| !self.source().allows(a)) {
            return Err(Error::SignatureError(format!(
                "`{a}` is not in signature {}, the source of {}",
                self.source(),
                self.name()
            )));
        }
        let mut fresh = Fresh::new(f);
        Ok(match self {
            Translation::BulletCircle => {
                let g = go(Translation::Bullet, f, &mut fresh);
                go(Translation::Circle, &g, &mut fresh)
            }
            Translation::CircleBullet => {
                let g = go(Translation::Circle, f, &mut fresh);
                go(Translation::Bullet, &g, &mut fresh)
            }
            t => go(t, f, &mut fresh),
        })
    }
}

impl FromStr for Translation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Translation> {
        Translation::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Data(format!("unknown translation `{s}`")))
    }
}

impl fmt::Display for Translation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

struct Fresh {
    used: BTreeSet<String>,
    next: usize,
}

impl Fresh {
    fn new(f: &Formula) -> Fresh {
        Fresh {
            used: f.all_vars(),
            next: 0,
        }
    }

    fn var(&mut self, hint: &str) -> String {
        loop {
            self.next += 1;
            let v = format!("{hint}_{}", self.next);
            if self.used.insert(v.clone()) {
                return v;
            }
        }
    }
}

fn bland(x: &str) -> Formula {
    atom(Atom::Bland(x.into()))
}

fn wand(x: &str) -> Formula {
    atom(Atom::Wand(x.into()))
}

fn tap(w: &str, a: &str, c: &str) -> Formula {
    atom(Atom::Tap(w.into(), a.into(), c.into()))
}

fn subset(x: &str, y: &str, fr: &mut Fresh) -> Formula {
    let z = fr.var("z");
    forall(&z, implies(in_(&z, x), in_(&z, y)))
}

/// Nothing is a member of `z`.
fn zero(z: &str, fr: &mut Fresh) -> Formula {
    let y = fr.var("y");
    forall(&y, not(in_(&y, z)))
}

/// Hereditarily bland: bland, inside some bland-closed transitive `c`.
fn hb(a: &str, fr: &mut Fresh) -> Formula {
    let c = fr.var("c");
    let x = fr.var("x");
    let closed = forall(&x, implies(in_(&x, &c), and(bland(&x), subset(&x, &c, fr))));
    and(bland(a), exists(&c, and(subset(a, &c, fr), closed)))
}

/// Blandness as seen through membership alone.
fn bland_bullet(a: &str, fr: &mut Fresh) -> Formula {
    let b = fr.var("b");
    let x = fr.var("x");
    let z = fr.var("z");
    let empty = forall(&z, not(in_(&z, &x)));
    let body = forall(&x, iff(in_(&x, &b), or(in_(&x, a), empty)));
    and(not(in_(a, a)), exists(&b, body))
}

/// The expansive membership `x ∈̌ a`, spelled out by the kind of `a`.
fn varin(x: &str, a: &str, fr: &mut Fresh) -> Formula {
    let zero_wand = |z: &str, fr: &mut Fresh| and(wand(z), zero(z, fr));
    let card_wand = |n: &str, fr: &mut Fresh| and(wand(n), not(zero(n, fr)));
    let comp_of = |c: &str, a: &str, fr: &mut Fresh| {
        let z = fr.var("z");
        exists(&z, and(zero_wand(&z, fr), tap(&z, c, a)))
    };
    let bland_case = and(bland(a), in_(x, a));
    let c = fr.var("c");
    let complement = exists(&c, conj(vec![bland(&c), not(in_(x, &c)), comp_of(&c, a, fr)]));
    let (n, c) = (fr.var("n"), fr.var("c"));
    let cardinal = exists(
        &n,
        and(
            card_wand(&n, fr),
            exists(&c, conj(vec![bland(&c), tap(&n, &c, a), pred("NEquiv", &[&n, x, &c])])),
        ),
    );
    let (n, c, m) = (fr.var("n"), fr.var("c"), fr.var("m"));
    let co_cardinal = exists(
        &n,
        and(
            card_wand(&n, fr),
            exists(
                &c,
                conj(vec![
                    bland(&c),
                    not(pred("NEquiv", &[&n, x, &c])),
                    exists(&m, and(tap(&n, &c, &m), comp_of(&m, a, fr))),
                ]),
            ),
        ),
    );
    disj(vec![bland_case, complement, cardinal, co_cardinal])
}

fn relativize(t: Translation, x: &str, fr: &mut Fresh) -> Option<Formula> {
    match t {
        Translation::Tau => Some(hb(x, fr)),
        Translation::ToLt => Some(pred("Conch", &[x])),
        _ => None,
    }
}

fn go(t: Translation, f: &Formula, fr: &mut Fresh) -> Formula {
    match f {
        Formula::Atom(a) => clause(t, a, fr),
        Formula::Not(g) => not(go(t, g, fr)),
        Formula::Bin(op, g, h) => Formula::Bin(*op, Box::new(go(t, g, fr)), Box::new(go(t, h, fr))),
        Formula::Forall(x, g) => {
            let body = go(t, g, fr);
            match relativize(t, x, fr) {
                Some(d) => forall(x, implies(d, body)),
                None => forall(x, body),
            }
        }
        Formula::Exists(x, g) => {
            let body = go(t, g, fr);
            match relativize(t, x, fr) {
                Some(d) => exists(x, and(d, body)),
                None => exists(x, body),
            }
        }
    }
}

fn clause(t: Translation, a: &Atom, fr: &mut Fresh) -> Formula {
    if let Atom::Eq(..) = a {
        return atom(a.clone());
    }
    match t {
        Translation::Tau => match a {
            Atom::In(x, y) => and(in_(x, y), hb(y, fr)),
            _ => atom(a.clone()),
        },
        Translation::ToLt => match a {
            Atom::Bland(y) => and(pred("Carrier", &[y]), pred("Conch", &[y])),
            Atom::In(x, y) => and(pred("InCarrier", &[x, y]), pred("Conch", &[y])),
            Atom::Wand(w) => and(pred("WandCode", &[w]), pred("Ufrom0", &[w])),
            Atom::Tap(w, x, c) => {
                let (u, b) = (fr.var("u"), fr.var("b"));
                let row = conj(vec![
                    pred("EquivAt", &[w, x, &u, &b]),
                    pred("RankLe", &[&b, x]),
                    pred("PairIn", &[&u, &b, c]),
                ]);
                conj(vec![pred("DomAt", &[w, x]), pred("Conch", &[c]), exists(&u, exists(&b, row))])
            }
            Atom::Pred(n, args) if n == "Dom" => atom(Atom::Pred("DomAt".into(), args.clone())),
            Atom::Pred(n, args) if n == "Equiv" => atom(Atom::Pred("EquivAt".into(), args.clone())),
            _ => atom(a.clone()),
        },
        Translation::Bullet => match a {
            Atom::Bland(x) => bland_bullet(x, fr),
            Atom::Wand(n) => pred("WandE", &[n]),
            Atom::In(x, y) => and(in_(x, y), bland_bullet(y, fr)),
            Atom::Tap(n, x, c) => {
                let d = fr.var("d");
                let (v, v2, v3) = (fr.var("x"), fr.var("x"), fr.var("x"));
                let not_comp = forall(&d, implies(bland_bullet(&d, fr), exists(&v, iff(in_(&v, &d), in_(&v, x)))));
                let complement = conj(vec![
                    zero(n, fr),
                    pred("WandE", &[n]),
                    not_comp,
                    forall(&v2, iff(in_(&v2, c), not(in_(&v2, x)))),
                ]);
                let cardinal = conj(vec![
                    pred("WandE", &[n]),
                    not(zero(n, fr)),
                    pred("NEquiv", &[n, x, x]),
                    forall(&v3, iff(in_(&v3, c), pred("NEquiv", &[n, &v3, x]))),
                ]);
                or(complement, cardinal)
            }
            _ => atom(a.clone()),
        },
        Translation::Circle => match a {
            Atom::In(x, y) => varin(x, y, fr),
            Atom::Pred(n, args) if n == "WandE" && args.len() == 1 => wand(&args[0]),
            _ => atom(a.clone()),
        },
        Translation::BulletCircle | Translation::CircleBullet => unreachable!("composites are split in apply"),
    }
}

/// Check that `t` preserves the truth value of every sentence, evaluating
/// each in `src` and its translation in `dst`. One check per sentence; the
/// note records the common truth value.
pub fn check_interpretation(
    src: &dyn Model,
    dst: &dyn Model,
    t: Translation,
    sentences: &[(String, Formula)],
) -> Result<Report> {
    if src.signature() != t.source() {
        return Err(Error::SignatureError(format!(
            "{} translates from {}, source model is {}",
            t.name(),
            t.source(),
            src.signature()
        )));
    }
    let mut r = Report::new(&format!("interpretation:{}", t.name()));
    for (label, f) in sentences {
        if !f.is_sentence() {
            return Err(Error::Data(format!("{label} is not a sentence")));
        }
        let g = t.apply(f)?;
        let a = eval_sentence(src, f)?;
        let b = eval_sentence(dst, &g)?;
        let mut c = Check::new(label);
        c.case(a == b, || format!("source {a}, translation {b}: {f}"));
        r.push(c.with_note(if a { "true" } else { "false" }));
    }
    Ok(r)
}

/// The model of signature `sig` that a fragment stands for: `V_depth` for
/// LT, the fragment itself for WS, and its expansive-membership reduct for E.
pub fn fragment_model(frag: &Fragment, sig: Signature) -> Result<Box<dyn Model + '_>> {
    Ok(match sig {
        Signature::Lt => Box::new(LtModel::new(frag.spec(), frag.depth())?),
        Signature::Ws => Box::new(WsModel::new(frag)),
        Signature::E => Box::new(EModel::new(frag)?),
    })
}

/// [`check_interpretation`] between the models two fragments stand for.
/// The target of `ToLt` is the conch stages of `dst`'s spec and depth.
pub fn check_translation(
    t: Translation,
    src: &Fragment,
    dst: &Fragment,
    sentences: &[(String, Formula)],
) -> Result<Report> {
    let sm = fragment_model(src, t.source())?;
    if t == Translation::ToLt {
        let cs = gen_stages(dst.spec_ref(), dst.depth(), CONCH_CAP)?;
        let dm = ConchModel::new(&cs)?;
        return check_interpretation(sm.as_ref(), &dm, t, sentences);
    }
    let dm = fragment_model(dst, t.target())?;
    check_interpretation(sm.as_ref(), dm.as_ref(), t, sentences)
}

const CONCH_CAP: usize = 1 << 16;
