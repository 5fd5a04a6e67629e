use thiserror::Error;

use super::{Name, NamedTerm};
use crate::stack;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lambda,
    Dot,
    Open,
    Close,
    Ident(String),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Lambda => "`\\`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Open => "`(`".into(),
            Tok::Close => "`)`".into(),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::End => "end of input".into(),
        }
    }
}

struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Whether `s` is a valid surface identifier.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if is_ident_start(c)) && chars.all(is_ident_continue)
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, column);
        let simple = match c {
            '\\' | 'λ' => Some(Tok::Lambda),
            '.' => Some(Tok::Dot),
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            _ => None,
        };
        if let Some(tok) = simple {
            chars.next();
            column += 1;
            out.push(Token { tok, line: tl, column: tc });
        } else if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
        } else if c.is_whitespace() {
            chars.next();
            column += 1;
        } else if is_ident_start(c) {
            let mut ident = String::new();
            while let Some(&c) = chars.peek() {
                if !is_ident_continue(c) {
                    break;
                }
                ident.push(c);
                chars.next();
                column += 1;
            }
            out.push(Token { tok: Tok::Ident(ident), line: tl, column: tc });
        } else {
            return Err(ParseError::Syntax {
                line,
                column,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push(Token { tok: Tok::End, line, column });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, message: String) -> ParseError {
        let t = &self.tokens[self.pos];
        ParseError::Syntax { line: t.line, column: t.column, message }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", want.describe(), self.peek().describe())))
        }
    }

    fn term(&mut self) -> Result<NamedTerm, ParseError> {
        stack::guard(|| {
            if *self.peek() == Tok::Lambda {
                return self.lambda();
            }
            let mut acc = self.atom()?;
            loop {
                match self.peek() {
                    Tok::Ident(_) | Tok::Open => {
                        let arg = self.atom()?;
                        acc = NamedTerm::app(acc, arg);
                    }
                    // a trailing abstraction extends to the end, as in `f \x. x`
                    Tok::Lambda => {
                        let arg = self.lambda()?;
                        return Ok(NamedTerm::app(acc, arg));
                    }
                    _ => return Ok(acc),
                }
            }
        })
    }

    fn lambda(&mut self) -> Result<NamedTerm, ParseError> {
        self.expect(Tok::Lambda)?;
        let binder = match self.bump() {
            Tok::Ident(name) => name,
            other => {
                self.pos -= 1;
                return Err(self.error(format!("expected binder, found {}", other.describe())));
            }
        };
        self.expect(Tok::Dot)?;
        let body = self.term()?;
        Ok(NamedTerm::Lam(Name::from(binder), Box::new(body)))
    }

    fn atom(&mut self) -> Result<NamedTerm, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(NamedTerm::Var(Name::from(name)))
            }
            Tok::Open => {
                self.bump();
                let inner = self.term()?;
                self.expect(Tok::Close)?;
                Ok(inner)
            }
            other => Err(self.error(format!("expected a term, found {}", other.describe()))),
        }
    }
}

/// Parses `term ::= '\' ident '.' term | atom+`, `atom ::= ident | '(' term ')'`.
pub fn parse_surface(src: &str) -> Result<NamedTerm, ParseError> {
    let tokens = lex(src)?;
    if tokens.len() == 1 {
        return Err(ParseError::Empty);
    }
    let mut parser = Parser { tokens, pos: 0 };
    let term = parser.term()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error(format!("unexpected {}", parser.peek().describe())));
    }
    Ok(term)
}

/// Renders with minimal parentheses; binders are written `\x. body`.
pub fn print_surface(t: &NamedTerm) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_term(t: &NamedTerm, out: &mut String) {
    stack::guard(|| match t {
        NamedTerm::Var(x) => out.push_str(x),
        NamedTerm::Lam(x, b) => {
            out.push('\\');
            out.push_str(x);
            out.push_str(". ");
            write_term(b, out);
        }
        NamedTerm::App(..) => {
            let (head, args) = t.spine();
            match head {
                NamedTerm::Lam(..) => {
                    out.push('(');
                    write_term(head, out);
                    out.push(')');
                }
                _ => write_term(head, out),
            }
            for arg in args {
                out.push(' ');
                match arg {
                    NamedTerm::Var(x) => out.push_str(x),
                    _ => {
                        out.push('(');
                        write_term(arg, out);
                        out.push(')');
                    }
                }
            }
        }
    })
}
