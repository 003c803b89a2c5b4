//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! formula := quant | iff
//! quant   := ("forall" | "exists") ident "." formula
//! iff     := imp { "<->" imp }
//! imp     := or { "->" or }
//! or      := and { "|" and }
//! and     := unary { "&" unary }
//! unary   := "~" unary | atom | "(" formula ")"
//! atom    := Name "(" ident { "," ident } ")" | ident "=" ident
//! ```
//!
//! Binary operators associate to the left. A quantifier may also stand as
//! an operand, taking the rest of the enclosing formula as its body. Besides `Bland`, `Wand`, `In`
//! and `Tap`, any capitalized name is read as a defined predicate.

use super::{Atom, BinOp, Formula};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser { src: text, pos: 0 };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

/// Parse a sentence file: one formula per line, `#` starts a comment.
///
/// Errors carry the byte offset within the whole text.
pub fn parse_sentences(text: &str) -> Result<Vec<Formula>> {
    Ok(parse_labeled(text)?.into_iter().map(|(_, f)| f).collect())
}

/// Like [`parse_sentences`], naming each sentence by its trailing comment,
/// or by its line number when there is none.
pub fn parse_labeled(text: &str) -> Result<Vec<(String, Formula)>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for (i, line) in text.split_inclusive('\n').enumerate() {
        let (body, comment) = match line.split_once('#') {
            Some((b, c)) => (b, c.trim()),
            None => (line, ""),
        };
        if !body.trim().is_empty() {
            let f = parse(body).map_err(|e| match e {
                Error::ParseError { offset: o, msg } => Error::ParseError { offset: offset + o, msg },
                e => e,
            })?;
            let label = if comment.is_empty() { format!("line {}", i + 1) } else { comment.to_string() };
            out.push((label, f));
        }
        offset += line.len();
    }
    Ok(out)
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::ParseError {
            offset: self.pos,
            msg: msg.to_string(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{tok}`")))
        }
    }

    fn peek_ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let r = self.rest();
        let mut chars = r.char_indices();
        match chars.next() {
            Some((_, c)) if is_ident_start(c) => {}
            _ => return None,
        }
        let end = chars.find(|&(_, c)| !is_ident_char(c)).map(|(i, _)| i).unwrap_or(r.len());
        Some(&r[..end])
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek_ident() {
            Some(id) => {
                self.pos += id.len();
                Ok(id.to_string())
            }
            None => Err(self.err("expected identifier")),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek_ident() {
            Some(q @ ("forall" | "exists")) => {
                self.pos += q.len();
                let x = self.ident()?;
                self.expect(".")?;
                let body = Box::new(self.formula()?);
                Ok(if q == "forall" { Formula::Forall(x, body) } else { Formula::Exists(x, body) })
            }
            _ => self.iff(),
        }
    }

    fn binary(&mut self, tok: &str, op: BinOp, next: fn(&mut Self) -> Result<Formula>) -> Result<Formula> {
        let mut f = next(self)?;
        loop {
            // `->` must not be read as the tail of `<->`
            if tok == "->" {
                self.skip_ws();
                if self.rest().starts_with("<->") {
                    return Ok(f);
                }
            }
            if !self.eat(tok) {
                return Ok(f);
            }
            let g = next(self)?;
            f = Formula::Bin(op, Box::new(f), Box::new(g));
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        self.binary("<->", BinOp::Iff, Self::imp)
    }

    fn imp(&mut self) -> Result<Formula> {
        self.binary("->", BinOp::Implies, Self::or)
    }

    fn or(&mut self) -> Result<Formula> {
        self.binary("|", BinOp::Or, Self::and)
    }

    fn and(&mut self) -> Result<Formula> {
        self.binary("&", BinOp::And, Self::unary)
    }

    fn unary(&mut self) -> Result<Formula> {
        // a quantifier in operand position extends as far right as it can
        if matches!(self.peek_ident(), Some("forall" | "exists")) {
            return self.formula();
        }
        if self.eat("~") {
            return Ok(Formula::Not(Box::new(self.unary()?)));
        }
        if self.eat("(") {
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        let start = self.pos;
        let name = self.ident()?;
        if self.eat("=") {
            let y = self.ident()?;
            return Ok(Formula::Atom(Atom::Eq(name, y)));
        }
        if !name.starts_with(|c: char| c.is_ascii_uppercase()) {
            return Err(self.err("expected `=` or a predicate"));
        }
        self.expect("(")?;
        let mut args = vec![self.ident()?];
        while self.eat(",") {
            args.push(self.ident()?);
        }
        self.expect(")")?;
        let arity = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::ParseError {
                    offset: start,
                    msg: format!("{name} takes {n} arguments"),
                })
            }
        };
        let a = match name.as_str() {
            "Bland" => {
                arity(1)?;
                Atom::Bland(args.remove(0))
            }
            "Wand" => {
                arity(1)?;
                Atom::Wand(args.remove(0))
            }
            "In" => {
                arity(2)?;
                Atom::In(args[0].clone(), args[1].clone())
            }
            "Tap" => {
                arity(3)?;
                Atom::Tap(args[0].clone(), args[1].clone(), args[2].clone())
            }
            _ => Atom::Pred(name, args),
        };
        Ok(Formula::Atom(a))
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::error::Error;

    #[test]
    fn parses_examples() {
        let f = parse("forall x. ~In(x, x)").unwrap();
        assert_eq!(f, forall("x", not(in_("x", "x"))));
        let g = parse("exists s. (Bland(s) & forall x. ~In(x,s))").unwrap();
        assert_eq!(g.to_string(), "exists s. Bland(s) & (forall x. ~In(x, s))");
        assert!(parse("forall x. x = x").unwrap().is_sentence());
    }

    #[test]
    fn error_offsets() {
        match parse("forall x In(x") {
            Err(Error::ParseError { offset, .. }) => assert_eq!(offset, 9),
            r => panic!("{r:?}"),
        }
        match parse("In(x, y) & ") {
            Err(Error::ParseError { offset, .. }) => assert_eq!(offset, 11),
            r => panic!("{r:?}"),
        }
        assert!(matches!(parse("Tap(x, y)"), Err(Error::ParseError { offset: 0, .. })));
        assert!(matches!(parse_sentences("x = x\n# c\nIn(x"), Err(Error::ParseError { offset: 14, .. })));
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse("In(a,b) | In(b,c) & In(c,a) -> a = b <-> b = c").unwrap();
        let want = iff(
            implies(or(in_("a", "b"), and(in_("b", "c"), in_("c", "a"))), atom(Atom::Eq("a".into(), "b".into()))),
            atom(Atom::Eq("b".into(), "c".into())),
        );
        assert_eq!(f, want);
        let g = parse("a = b -> b = c -> c = a").unwrap();
        assert!(matches!(g, Formula::Bin(BinOp::Implies, ref l, _) if matches!(**l, Formula::Bin(BinOp::Implies, ..))));
    }

    #[test]
    fn shipped_axioms_round_trip() {
        for text in [LT_AXIOMS, WS_AXIOMS, CUS_AXIOMS] {
            for f in parse_sentences(text).unwrap() {
                let r = f.to_string();
                let again = parse(&r).unwrap();
                assert_eq!(again, f);
                assert_eq!(again.to_string(), r);
                assert!(f.is_sentence(), "{r}");
            }
        }
    }
}
