//! Recursive-descent parser for preradical expressions.
//!
//! ```text
//! expr    := coprod ;
//! coprod  := join { ":" join } ;
//! join    := meet { "|" meet } ;
//! meet    := prod { "&" prod } ;
//! prod    := atom { "." atom } ;
//! atom    := "zero" | "id" | "tor" | "ptor" "(" prime ")"
//!          | "alpha" "(" name "," name ")" | "omega" "(" name "," name ")"
//!          | "(" expr ")" ;
//! ```

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::module::ModuleObject;
use crate::preradical::expr::{GeneratingPair, PreradicalExpr};
use crate::ring::is_prime;
use crate::submodule::Submodule;

/// Resolves `alpha`/`omega` arguments.
pub trait NameScope {
    fn module(&self, name: &str) -> Option<&ModuleObject>;
    fn submodule(&self, name: &str) -> Option<&Submodule>;
}

#[derive(Debug, Clone, Default)]
pub struct NameTable {
    pub modules: BTreeMap<String, ModuleObject>,
    pub submodules: BTreeMap<String, Submodule>,
}

impl NameScope for NameTable {
    fn module(&self, name: &str) -> Option<&ModuleObject> {
        self.modules.get(name)
    }

    fn submodule(&self, name: &str) -> Option<&Submodule> {
        self.submodules.get(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Number(i64),
    Punct(char),
    End,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Token::Ident(chars[start..i].iter().map(|&(_, c)| c).collect())));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            let n = s.parse().map_err(|_| Error::Syntax { pos, msg: "number out of range".into() })?;
            out.push((pos, Token::Number(n)));
        } else if "():|&.,".contains(c) {
            out.push((pos, Token::Punct(c)));
            i += 1;
        } else {
            return Err(Error::Syntax { pos, msg: format!("unexpected character `{c}`") });
        }
    }
    out.push((text.len(), Token::End));
    Ok(out)
}

struct Parser<'a, S: NameScope + ?Sized> {
    tokens: Vec<(usize, Token)>,
    at: usize,
    scope: &'a S,
}

impl<S: NameScope + ?Sized> Parser<'_, S> {
    fn peek(&self) -> &Token {
        &self.tokens[self.at].1
    }

    fn pos(&self) -> usize {
        self.tokens[self.at].0
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.at].1.clone();
        if t != Token::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<()> {
        let pos = self.pos();
        match self.next() {
            Token::Punct(d) if d == c => Ok(()),
            _ => Err(Error::Syntax { pos, msg: format!("expected `{c}`") }),
        }
    }

    fn binary(
        &mut self,
        op: char,
        operand: fn(&mut Self) -> Result<PreradicalExpr>,
        build: fn(PreradicalExpr, PreradicalExpr) -> PreradicalExpr,
    ) -> Result<PreradicalExpr> {
        let mut acc = operand(self)?;
        while *self.peek() == Token::Punct(op) {
            self.next();
            let rhs = operand(self)?;
            acc = build(acc, rhs);
        }
        Ok(acc)
    }

    fn coprod(&mut self) -> Result<PreradicalExpr> {
        self.binary(':', Self::join, PreradicalExpr::coproduct)
    }

    fn join(&mut self) -> Result<PreradicalExpr> {
        self.binary('|', Self::meet, PreradicalExpr::join)
    }

    fn meet(&mut self) -> Result<PreradicalExpr> {
        self.binary('&', Self::prod, PreradicalExpr::meet)
    }

    fn prod(&mut self) -> Result<PreradicalExpr> {
        self.binary('.', Self::atom, PreradicalExpr::product)
    }

    fn name(&mut self) -> Result<String> {
        let pos = self.pos();
        match self.next() {
            Token::Ident(s) => Ok(s),
            _ => Err(Error::Syntax { pos, msg: "expected a name".into() }),
        }
    }

    fn pair(&mut self) -> Result<GeneratingPair> {
        self.expect('(')?;
        let m = self.name()?;
        self.expect(',')?;
        let n = self.name()?;
        self.expect(')')?;
        let module = self.scope.module(&m).ok_or_else(|| Error::UnknownName(m.clone()))?;
        let sub = self.scope.submodule(&n).ok_or_else(|| Error::UnknownName(n.clone()))?;
        if sub.parent() != module {
            return Err(Error::InvalidSubmodule(format!("`{n}` is not a submodule of `{m}`")));
        }
        Ok(GeneratingPair::new(&m, &n, sub.clone()))
    }

    fn atom(&mut self) -> Result<PreradicalExpr> {
        let pos = self.pos();
        match self.next() {
            Token::Punct('(') => {
                let e = self.coprod()?;
                self.expect(')')?;
                Ok(e)
            }
            Token::Ident(word) => match word.as_str() {
                "zero" => Ok(PreradicalExpr::Zero),
                "id" => Ok(PreradicalExpr::Identity),
                "tor" => Ok(PreradicalExpr::Torsion),
                "ptor" => {
                    self.expect('(')?;
                    let pos = self.pos();
                    let p = match self.next() {
                        Token::Number(p) => p,
                        _ => return Err(Error::Syntax { pos, msg: "expected a prime".into() }),
                    };
                    self.expect(')')?;
                    if !is_prime(p) {
                        return Err(Error::BadPrime(p));
                    }
                    Ok(PreradicalExpr::PTorsion(p))
                }
                "alpha" => Ok(PreradicalExpr::alpha(self.pair()?)),
                "omega" => Ok(PreradicalExpr::omega(self.pair()?)),
                _ => Err(Error::UnknownName(word)),
            },
            Token::End => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
            _ => Err(Error::Syntax { pos, msg: "expected an operand".into() }),
        }
    }
}

/// Parses an expression whose `alpha`/`omega` names resolve in `scope`.
pub fn parse_with<S: NameScope + ?Sized>(text: &str, scope: &S) -> Result<PreradicalExpr> {
    let mut p = Parser { tokens: tokenize(text)?, at: 0, scope };
    let e = p.coprod()?;
    if *p.peek() != Token::End {
        return Err(Error::Syntax { pos: p.pos(), msg: "trailing input".into() });
    }
    Ok(e)
}

/// Parses an expression with no named modules in scope.
pub fn parse_preradical(text: &str) -> Result<PreradicalExpr> {
    parse_with(text, &NameTable::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;
    use PreradicalExpr as P;

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse_preradical("ptor(2) | ptor(3)").unwrap(),
            P::join(P::PTorsion(2), P::PTorsion(3))
        );
        assert_eq!(
            parse_preradical("tor . (zero : id)").unwrap(),
            P::product(P::Torsion, P::coproduct(P::Zero, P::Identity))
        );
        assert_eq!(parse_preradical("ptor(4)"), Err(Error::BadPrime(4)));
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse_preradical("zero : id | tor & ptor(2) . id").unwrap();
        let expect = P::coproduct(
            P::Zero,
            P::join(P::Identity, P::meet(P::Torsion, P::product(P::PTorsion(2), P::Identity))),
        );
        assert_eq!(e, expect);
        let e = parse_preradical("id . tor . zero").unwrap();
        assert_eq!(e, P::product(P::product(P::Identity, P::Torsion), P::Zero));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_preradical("tor |"), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(parse_preradical("tor $"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_preradical("(tor"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_preradical("alpha(M,N)"), Err(Error::UnknownName(_))));
        assert!(matches!(parse_preradical("torsion"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn printer_round_trips() {
        let mut names = NameTable::default();
        let m = ModuleObject::cyclic(RingSpec::Integers, 4).unwrap();
        names.modules.insert("M".into(), m.clone());
        names.submodules.insert("N".into(), Submodule::whole(&m));
        for text in [
            "zero",
            "ptor(2) | ptor(3)",
            "tor . (zero : id)",
            "(tor : id) : zero",
            "tor : (id : zero)",
            "alpha(M,N) & omega(M,N) . id",
            "(id | tor) & zero",
            "id . (tor . zero)",
        ] {
            let e = parse_with(text, &names).unwrap();
            assert_eq!(parse_with(&e.to_string(), &names).unwrap(), e, "{text}");
        }
    }
}
