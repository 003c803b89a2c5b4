//! Tarskian evaluation over finite models.
//!
//! Formulas are compiled to slot-indexed nodes first. Quantifier nodes with
//! at most three free variables are memoized on the values of those
//! variables, which keeps relativizing definitions (say a hereditarily-bland
//! test under every quantifier) from multiplying the cost.

use super::{Atom, BinOp, Formula, Signature};
use crate::error::{Error, Result};
use std::collections::HashMap;

/// A finite structure for one signature plus some defined predicates.
///
/// Elements are `0..len()`. Oracles for primitives outside the signature are
/// never called.
pub trait Model {
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn signature(&self) -> Signature;
    fn bland(&self, _x: usize) -> bool {
        false
    }
    fn wand(&self, _x: usize) -> bool {
        false
    }
    fn member(&self, x: usize, y: usize) -> bool;
    fn tap(&self, _w: usize, _a: usize, _c: usize) -> bool {
        false
    }
    fn has_pred(&self, _name: &str, _arity: usize) -> bool {
        false
    }
    fn pred(&self, name: &str, _args: &[usize]) -> bool {
        panic!("model has no predicate {name}")
    }
    /// Human-readable name of an element.
    fn label(&self, x: usize) -> String {
        x.to_string()
    }
}

/// Evaluate `f` with its free variables bound by `env`.
pub fn eval(model: &dyn Model, f: &Formula, env: &[(&str, usize)]) -> Result<bool> {
    check_signature(model, f)?;
    for v in f.free_vars() {
        match env.iter().find(|(n, _)| *n == v) {
            None => return Err(Error::Data(format!("unbound variable `{v}`"))),
            Some(&(_, x)) if x >= model.len() => {
                return Err(Error::Data(format!("`{v}` = {x} is outside the carrier")))
            }
            Some(_) => {}
        }
    }
    let mut c = Compiled::default();
    let mut scope: Vec<(String, usize)> = Vec::new();
    for (n, _) in env {
        scope.push((n.to_string(), c.slots));
        c.slots += 1;
    }
    let root = c.compile(f, &mut scope);
    let mut vals: Vec<usize> = env.iter().map(|&(_, x)| x).collect();
    vals.resize(c.slots, 0);
    let mut ev = Evaluator {
        m: model,
        c: &c,
        vals,
        memo: HashMap::new(),
    };
    Ok(ev.run(root))
}

pub fn eval_sentence(model: &dyn Model, f: &Formula) -> Result<bool> {
    eval(model, f, &[])
}

fn check_signature(model: &dyn Model, f: &Formula) -> Result<()> {
    let sig = model.signature();
    for a in f.atoms() {
        if !sig.allows(a) {
            return Err(Error::SignatureError(format!("`{a}` is not in signature {sig}")));
        }
        if let Atom::Pred(n, args) = a {
            if !model.has_pred(n, args.len()) {
                return Err(Error::SignatureError(format!(
                    "model has no predicate {n}/{}",
                    args.len()
                )));
            }
        }
    }
    Ok(())
}

type NodeId = usize;

enum Node {
    Bland(usize),
    Wand(usize),
    In(usize, usize),
    Tap(usize, usize, usize),
    Eq(usize, usize),
    Pred(String, Vec<usize>),
    Not(NodeId),
    Bin(BinOp, NodeId, NodeId),
    Quant { all: bool, slot: usize, body: NodeId },
}

#[derive(Default)]
struct Compiled {
    nodes: Vec<Node>,
    /// Free slots per node, when there are few enough to memoize on.
    memo_slots: Vec<Option<Vec<usize>>>,
    slots: usize,
}

impl Compiled {
    /// Returns the node and records its free slots.
    fn compile(&mut self, f: &Formula, scope: &mut Vec<(String, usize)>) -> NodeId {
        let (id, _) = self.go(f, scope);
        id
    }

    fn lookup(scope: &[(String, usize)], v: &str) -> usize {
        scope.iter().rev().find(|(n, _)| n == v).map(|&(_, s)| s).expect("free variables are checked")
    }

    fn push(&mut self, n: Node, free: &[usize], memo: bool) -> NodeId {
        self.nodes.push(n);
        self.memo_slots.push((memo && free.len() <= 3).then(|| free.to_vec()));
        self.nodes.len() - 1
    }

    fn go(&mut self, f: &Formula, scope: &mut Vec<(String, usize)>) -> (NodeId, Vec<usize>) {
        let s = |v: &String| Self::lookup(scope, v);
        match f {
            Formula::Atom(a) => {
                let node = match a {
                    Atom::Bland(x) => Node::Bland(s(x)),
                    Atom::Wand(x) => Node::Wand(s(x)),
                    Atom::In(x, y) => Node::In(s(x), s(y)),
                    Atom::Tap(w, x, c) => Node::Tap(s(w), s(x), s(c)),
                    Atom::Eq(x, y) => Node::Eq(s(x), s(y)),
                    Atom::Pred(n, args) => Node::Pred(n.clone(), args.iter().map(s).collect()),
                };
                let mut free: Vec<usize> = a.vars().iter().map(|v| Self::lookup(scope, v)).collect();
                free.sort_unstable();
                free.dedup();
                (self.push(node, &free, false), free)
            }
            Formula::Not(g) => {
                let (gi, free) = self.go(g, scope);
                (self.push(Node::Not(gi), &free, false), free)
            }
            Formula::Bin(op, g, h) => {
                let (gi, mut free) = self.go(g, scope);
                let (hi, hf) = self.go(h, scope);
                free.extend(hf);
                free.sort_unstable();
                free.dedup();
                (self.push(Node::Bin(*op, gi, hi), &free, false), free)
            }
            Formula::Forall(x, g) | Formula::Exists(x, g) => {
                let slot = self.slots;
                self.slots += 1;
                scope.push((x.clone(), slot));
                let (body, mut free) = self.go(g, scope);
                scope.pop();
                free.retain(|&v| v != slot);
                let all = matches!(f, Formula::Forall(..));
                (self.push(Node::Quant { all, slot, body }, &free, true), free)
            }
        }
    }
}

struct Evaluator<'a> {
    m: &'a dyn Model,
    c: &'a Compiled,
    vals: Vec<usize>,
    memo: HashMap<(NodeId, [usize; 3]), bool>,
}

impl Evaluator<'_> {
    fn run(&mut self, n: NodeId) -> bool {
        let v = |s: &usize| self.vals[*s];
        match &self.c.nodes[n] {
            Node::Bland(x) => self.m.bland(v(x)),
            Node::Wand(x) => self.m.wand(v(x)),
            Node::In(x, y) => self.m.member(v(x), v(y)),
            Node::Tap(w, a, c) => self.m.tap(v(w), v(a), v(c)),
            Node::Eq(x, y) => v(x) == v(y),
            Node::Pred(name, args) => {
                let xs: Vec<usize> = args.iter().map(v).collect();
                self.m.pred(name, &xs)
            }
            Node::Not(g) => !self.run(*g),
            Node::Bin(op, g, h) => {
                let l = self.run(*g);
                match op {
                    BinOp::And => l && self.run(*h),
                    BinOp::Or => l || self.run(*h),
                    BinOp::Implies => !l || self.run(*h),
                    BinOp::Iff => l == self.run(*h),
                }
            }
            Node::Quant { all, slot, body } => {
                let key = self.c.memo_slots[n].as_ref().map(|fs| {
                    let mut k = [usize::MAX; 3];
                    for (i, s) in fs.iter().enumerate() {
                        k[i] = self.vals[*s];
                    }
                    (n, k)
                });
                if let Some(k) = key {
                    if let Some(&r) = self.memo.get(&k) {
                        return r;
                    }
                }
                let (all, slot, body) = (*all, *slot, *body);
                let saved = self.vals[slot];
                let mut r = all;
                for x in 0..self.m.len() {
                    self.vals[slot] = x;
                    if self.run(body) != all {
                        r = !all;
                        break;
                    }
                }
                self.vals[slot] = saved;
                if let Some(k) = key {
                    self.memo.insert(k, r);
                }
                r
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::error::Error;

    /// The finite ordinal `n` under membership, with odd numbers as wands.
    struct Ord(usize);

    impl Model for Ord {
        fn len(&self) -> usize {
            self.0
        }
        fn signature(&self) -> Signature {
            Signature::Lt
        }
        fn wand(&self, x: usize) -> bool {
            x % 2 == 1
        }
        fn member(&self, x: usize, y: usize) -> bool {
            x < y
        }
    }

    #[test]
    fn evaluates_on_ordinals() {
        let m = Ord(5);
        let t = |s: &str| eval_sentence(&m, &parse(s).unwrap()).unwrap();
        assert!(t("exists s. forall x. ~In(x, s)"));
        assert!(!t("forall x. exists y. In(x, y)"));
        assert!(t("forall x. forall y. forall z. (In(x, y) & In(y, z) -> In(x, z))"));
        assert!(!t("forall v. exists w. Wand(w) & In(w, v)"));
        // only 0 and 1 lack an odd member
        assert!(t("forall v. (exists w. Wand(w) & In(w, v)) | (forall y. ~In(y, v)) | (exists z. forall y. (In(y, v) <-> y = z))"));
        assert!(!t("forall v. (exists w. Wand(w) & In(w, v)) | (forall y. ~In(y, v))"));
    }

    #[test]
    fn free_variables_come_from_env() {
        let m = Ord(4);
        let f = parse("In(x, y) & ~Wand(y)").unwrap();
        assert!(eval(&m, &f, &[("x", 1), ("y", 2)]).unwrap());
        assert!(!eval(&m, &f, &[("x", 1), ("y", 3)]).unwrap());
        assert!(matches!(eval(&m, &f, &[("x", 1)]), Err(Error::Data(_))));
        assert!(matches!(eval(&m, &f, &[("x", 1), ("y", 9)]), Err(Error::Data(_))));
    }

    #[test]
    fn signature_is_enforced() {
        let m = Ord(3);
        for s in ["exists x. Bland(x)", "exists x. Tap(x, x, x)", "exists x. Dom(x, x)"] {
            assert!(matches!(eval_sentence(&m, &parse(s).unwrap()), Err(Error::SignatureError(_))), "{s}");
        }
    }

    #[test]
    fn shadowing_uses_innermost_binder() {
        let m = Ord(3);
        let f = parse("forall x. exists x. forall y. ~In(y, x)").unwrap();
        assert!(eval_sentence(&m, &f).unwrap());
        let g = parse("exists x. (In(x, y) & forall x. ~In(x, x))").unwrap();
        assert!(eval(&m, &g, &[("y", 2)]).unwrap());
        assert!(!eval(&m, &g, &[("y", 0)]).unwrap());
    }
}
