//! First-order formulas over the wand/set signatures, their evaluation on
//! finite models, and translations between signatures.

mod eval;
mod models;
mod parse;
mod random;
mod suite;
mod translate;

pub use eval::{eval, eval_sentence, Model};
pub use models::{ConchModel, EModel, LtModel, WsModel};
pub use parse::{parse, parse_labeled, parse_sentences};
pub use random::random_sentence;
pub use suite::{check_formulas, FORMULA_LIMIT};
pub use translate::{check_interpretation, check_translation, fragment_model, Translation};

use std::collections::BTreeSet;
use std::fmt;

/// Which primitives a formula may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Signature {
    /// Membership only.
    E,
    /// Membership and `Wand`.
    Lt,
    /// `Bland`, `Wand`, membership and `Tap`.
    Ws,
}

impl Signature {
    pub fn allows(self, a: &Atom) -> bool {
        match a {
            Atom::In(..) | Atom::Eq(..) | Atom::Pred(..) => true,
            Atom::Wand(_) => self >= Signature::Lt,
            Atom::Bland(_) | Atom::Tap(..) => self == Signature::Ws,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Signature::E => "E",
            Signature::Lt => "LT",
            Signature::Ws => "WS",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Bland(String),
    Wand(String),
    In(String, String),
    Tap(String, String, String),
    Eq(String, String),
    /// A defined predicate whose meaning is supplied by the model.
    Pred(String, Vec<String>),
}

impl Atom {
    pub fn vars(&self) -> Vec<&str> {
        match self {
            Atom::Bland(x) | Atom::Wand(x) => vec![x],
            Atom::In(x, y) | Atom::Eq(x, y) => vec![x, y],
            Atom::Tap(w, a, c) => vec![w, a, c],
            Atom::Pred(_, args) => args.iter().map(|s| s.as_str()).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
    Implies,
    Iff,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "&",
            BinOp::Or => "|",
            BinOp::Implies => "->",
            BinOp::Iff => "<->",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    Bin(BinOp, Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

// ---- Builders ---- //

pub fn atom(a: Atom) -> Formula {
    Formula::Atom(a)
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn and(f: Formula, g: Formula) -> Formula {
    Formula::Bin(BinOp::And, Box::new(f), Box::new(g))
}

pub fn or(f: Formula, g: Formula) -> Formula {
    Formula::Bin(BinOp::Or, Box::new(f), Box::new(g))
}

pub fn implies(f: Formula, g: Formula) -> Formula {
    Formula::Bin(BinOp::Implies, Box::new(f), Box::new(g))
}

pub fn iff(f: Formula, g: Formula) -> Formula {
    Formula::Bin(BinOp::Iff, Box::new(f), Box::new(g))
}

pub fn forall(x: &str, f: Formula) -> Formula {
    Formula::Forall(x.to_string(), Box::new(f))
}

pub fn exists(x: &str, f: Formula) -> Formula {
    Formula::Exists(x.to_string(), Box::new(f))
}

pub fn conj(fs: Vec<Formula>) -> Formula {
    fs.into_iter().reduce(and).expect("empty conjunction")
}

pub fn disj(fs: Vec<Formula>) -> Formula {
    fs.into_iter().reduce(or).expect("empty disjunction")
}

pub fn in_(x: &str, y: &str) -> Formula {
    atom(Atom::In(x.into(), y.into()))
}

pub fn pred(name: &str, args: &[&str]) -> Formula {
    atom(Atom::Pred(name.into(), args.iter().map(|s| s.to_string()).collect()))
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                for v in a.vars() {
                    if !bound.iter().any(|b| b == v) {
                        out.insert(v.to_string());
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::Bin(_, f, g) => {
                f.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            Formula::Forall(x, f) | Formula::Exists(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.walk_atoms(&mut |a| out.push(a));
        out
    }

    fn walk_atoms<'a>(&'a self, f: &mut impl FnMut(&'a Atom)) {
        match self {
            Formula::Atom(a) => f(a),
            Formula::Not(g) => g.walk_atoms(f),
            Formula::Bin(_, g, h) => {
                g.walk_atoms(f);
                h.walk_atoms(f);
            }
            Formula::Forall(_, g) | Formula::Exists(_, g) => g.walk_atoms(f),
        }
    }

    /// The smallest signature containing every primitive used.
    pub fn signature(&self) -> Signature {
        self.atoms()
            .into_iter()
            .map(|a| match a {
                Atom::Bland(_) | Atom::Tap(..) => Signature::Ws,
                Atom::Wand(_) => Signature::Lt,
                _ => Signature::E,
            })
            .max()
            .unwrap_or(Signature::E)
    }

    /// Names of defined predicates with their arities.
    pub fn preds(&self) -> BTreeSet<(String, usize)> {
        self.atoms()
            .into_iter()
            .filter_map(|a| match a {
                Atom::Pred(n, args) => Some((n.clone(), args.len())),
                _ => None,
            })
            .collect()
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.atoms().into_iter().flat_map(|a| a.vars()).map(String::from).collect();
        self.walk_binders(&mut |x| {
            out.insert(x.to_string());
        });
        out
    }

    fn walk_binders(&self, f: &mut impl FnMut(&str)) {
        match self {
            Formula::Atom(_) => {}
            Formula::Not(g) => g.walk_binders(f),
            Formula::Bin(_, g, h) => {
                g.walk_binders(f);
                h.walk_binders(f);
            }
            Formula::Forall(x, g) | Formula::Exists(x, g) => {
                f(x);
                g.walk_binders(f);
            }
        }
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(g) => g.quantifier_depth(),
            Formula::Bin(_, g, h) => g.quantifier_depth().max(h.quantifier_depth()),
            Formula::Forall(_, g) | Formula::Exists(_, g) => 1 + g.quantifier_depth(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Bland(x) => write!(f, "Bland({x})"),
            Atom::Wand(x) => write!(f, "Wand({x})"),
            Atom::In(x, y) => write!(f, "In({x}, {y})"),
            Atom::Tap(w, a, c) => write!(f, "Tap({w}, {a}, {c})"),
            Atom::Eq(x, y) => write!(f, "{x} = {y}"),
            Atom::Pred(n, args) => write!(f, "{n}({})", args.join(", ")),
        }
    }
}

/// Canonical rendering: binary and quantified operands are always
/// parenthesized, so the output reparses to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(g) => {
                f.write_str("~")?;
                operand(f, g)
            }
            Formula::Bin(op, g, h) => {
                operand(f, g)?;
                write!(f, " {} ", op.symbol())?;
                operand(f, h)
            }
            Formula::Forall(x, g) => write!(f, "forall {x}. {g}"),
            Formula::Exists(x, g) => write!(f, "exists {x}. {g}"),
        }
    }
}

fn operand(f: &mut fmt::Formatter<'_>, g: &Formula) -> fmt::Result {
    match g {
        Formula::Atom(Atom::Eq(..)) | Formula::Bin(..) | Formula::Forall(..) | Formula::Exists(..) => write!(f, "({g})"),
        _ => write!(f, "{g}"),
    }
}

/// The shipped axiom lists, in sentence-file format.
pub const LT_AXIOMS: &str = include_str!("../../axioms/lt.txt");
pub const WS_AXIOMS: &str = include_str!("../../axioms/ws.txt");
pub const CUS_AXIOMS: &str = include_str!("../../axioms/cus.txt");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_vars_and_signature() {
        let f = parse("forall x. (In(x, s) -> Tap(w, x, c))").unwrap();
        let fv: Vec<String> = f.free_vars().into_iter().collect();
        assert_eq!(fv, vec!["c", "s", "w"]);
        assert_eq!(f.signature(), Signature::Ws);
        assert_eq!(parse("exists s. Wand(s)").unwrap().signature(), Signature::Lt);
        assert_eq!(parse("forall x. ~In(x, x)").unwrap().signature(), Signature::E);
    }

    #[test]
    fn render_parenthesizes_operands() {
        let f = and(forall("x", in_("x", "y")), not(or(in_("y", "y"), in_("y", "z"))));
        assert_eq!(f.to_string(), "(forall x. In(x, y)) & ~(In(y, y) | In(y, z))");
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }
}
