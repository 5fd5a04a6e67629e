//! Text format for ordered terms:
//!
//! ```text
//! x                      free name
//! .                      bound occurrence
//! (app M T U)            application with split M
//! (lam (k1 ... kn) T)    abstraction
//! ```
//!
//! Tokens are separated by single spaces on output; `read_ordered` accepts
//! any whitespace, and `write_ordered(read_ordered(s)) == s` for written text.

use std::sync::Arc;

use thiserror::Error;

use super::{KVec, OrderedTerm};
use crate::named::{is_identifier, Name};
use crate::stack;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("offset {offset}: {message}")]
pub struct SexprError {
    pub offset: usize,
    pub message: String,
}

pub fn write_ordered(t: &OrderedTerm) -> String {
    let mut out = String::new();
    write(t, &mut out);
    out
}

fn write(t: &OrderedTerm, out: &mut String) {
    stack::guard(|| match t {
        OrderedTerm::Free(x) => out.push_str(x),
        OrderedTerm::Dot => out.push('.'),
        OrderedTerm::App(f, m, a) => {
            out.push_str("(app ");
            out.push_str(&m.to_string());
            out.push(' ');
            write(f, out);
            out.push(' ');
            write(a, out);
            out.push(')');
        }
        OrderedTerm::Lam(k, b) => {
            out.push_str("(lam (");
            let gaps: Vec<String> = k.iter().map(usize::to_string).collect();
            out.push_str(&gaps.join(" "));
            out.push_str(") ");
            write(b, out);
            out.push(')');
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Dot,
    Atom(String),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, SexprError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            '(' => {
                chars.next();
                out.push((i, Tok::Open));
            }
            ')' => {
                chars.next();
                out.push((i, Tok::Close));
            }
            '.' => {
                chars.next();
                out.push((i, Tok::Dot));
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut atom = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '.') {
                        break;
                    }
                    atom.push(c);
                    chars.next();
                }
                out.push((i, Tok::Atom(atom)));
            }
        }
    }
    Ok(out)
}

struct Reader {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Reader {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SexprError> {
        Err(SexprError { offset: self.offset(), message: message.into() })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), SexprError> {
        if self.toks.get(self.pos).map(|t| &t.1) == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {want:?}"))
        }
    }

    fn number(&mut self) -> Result<usize, SexprError> {
        match self.toks.get(self.pos).map(|t| t.1.clone()) {
            Some(Tok::Atom(a)) if !a.is_empty() && a.bytes().all(|b| b.is_ascii_digit()) => {
                let n = a.parse().or_else(|_| self.err("number out of range"))?;
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected a non-negative integer"),
        }
    }

    fn term(&mut self) -> Result<OrderedTerm, SexprError> {
        stack::guard(|| {
            let start = self.pos;
            match self.next() {
                Some(Tok::Dot) => Ok(OrderedTerm::Dot),
                Some(Tok::Atom(a)) if is_identifier(&a) => Ok(OrderedTerm::Free(Name::from(a))),
                Some(Tok::Open) => match self.next() {
                    Some(Tok::Atom(kw)) if kw == "app" => {
                        let split = self.number()?;
                        let f = self.term()?;
                        let a = self.term()?;
                        self.expect(Tok::Close)?;
                        Ok(OrderedTerm::App(Arc::new(f), split, Arc::new(a)))
                    }
                    Some(Tok::Atom(kw)) if kw == "lam" => {
                        self.expect(Tok::Open)?;
                        let mut gaps = Vec::new();
                        while self.toks.get(self.pos).map(|t| &t.1) != Some(&Tok::Close) {
                            gaps.push(self.number()?);
                        }
                        self.pos += 1;
                        let b = self.term()?;
                        self.expect(Tok::Close)?;
                        Ok(OrderedTerm::Lam(KVec::new(gaps), Arc::new(b)))
                    }
                    _ => {
                        self.pos -= 1;
                        self.err("expected `app` or `lam`")
                    }
                },
                _ => {
                    self.pos = start;
                    self.err("expected an ordered term")
                }
            }
        })
    }
}

pub fn read_ordered(src: &str) -> Result<OrderedTerm, SexprError> {
    let mut r = Reader { toks: lex(src)?, pos: 0, end: src.len() };
    let t = r.term()?;
    if r.pos < r.toks.len() {
        return r.err("trailing input");
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordered::term::tests::ordered_s;
    use proptest::prelude::*;

    const S_TEXT: &str = "(lam (0) (lam (1) (lam (1 1) (app 2 (app 1 . .) (app 1 . .)))))";

    #[test]
    fn writes_the_s_combinator() {
        assert_eq!(write_ordered(&ordered_s()), S_TEXT);
    }

    #[test]
    fn reads_the_s_combinator() {
        assert_eq!(read_ordered(S_TEXT).unwrap(), ordered_s());
        let spaced = "(lam(0)\n  (lam (1) (lam (1 1) (app 2 (app 1 . .) (app 1 . .) ) ) ) )";
        assert_eq!(read_ordered(spaced).unwrap(), ordered_s());
    }

    #[test]
    fn empty_gap_vector_and_free_names() {
        let t = read_ordered("(lam () x)").unwrap();
        assert_eq!(t, OrderedTerm::lam(vec![], OrderedTerm::free("x")));
        assert_eq!(write_ordered(&t), "(lam () x)");
        assert_eq!(read_ordered("x").unwrap(), OrderedTerm::free("x"));
    }

    #[test]
    fn rejects_malformed_text() {
        for bad in ["", "(app 1 .)", "(app x . .)", "(foo 1 . .)", "(lam (1) . ) x", "(lam (-1) .)", "1"] {
            assert!(read_ordered(bad).is_err(), "{bad:?} accepted");
        }
    }

    fn arb_preterm() -> impl Strategy<Value = OrderedTerm> {
        let leaf = prop_oneof![
            Just(OrderedTerm::Dot),
            "[a-e][a-z0-9_']{0,3}".prop_map(|s| OrderedTerm::Free(Name::from(s))),
        ];
        leaf.prop_recursive(6, 48, 3, |inner| {
            prop_oneof![
                (inner.clone(), 0usize..6, inner.clone())
                    .prop_map(|(f, m, a)| OrderedTerm::App(Arc::new(f), m, Arc::new(a))),
                (prop::collection::vec(0usize..4, 0..4), inner)
                    .prop_map(|(k, b)| OrderedTerm::Lam(KVec::new(k), Arc::new(b))),
            ]
        })
    }

    proptest! {
        #[test]
        fn text_round_trips(t in arb_preterm()) {
            let text = write_ordered(&t);
            let back = read_ordered(&text).unwrap();
            prop_assert_eq!(&back, &t);
            prop_assert_eq!(write_ordered(&back), text);
        }
    }
}
