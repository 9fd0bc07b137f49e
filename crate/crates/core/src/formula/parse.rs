//! Hand-rolled lexer and recursive-descent parser for formulas and class
//! terms. Errors carry byte positions.

use super::{ClassTerm, Formula, Term};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound set variable(s): {0:?}")]
    Unbound(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    In,
    Notin,
    Eq,
    Neq,
    Not,
    And,
    Or,
    Arrow,
    DoubleArrow,
    Forall,
    Exists,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Bar,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '{' => {
                i += 1;
                Tok::LBrace
            }
            '}' => {
                i += 1;
                Tok::RBrace
            }
            '|' => {
                i += 1;
                Tok::Bar
            }
            '=' => {
                i += 1;
                Tok::Eq
            }
            '!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    i += 2;
                    Tok::Neq
                } else {
                    return Err(ParseError::Syntax {
                        pos: i,
                        msg: "expected `!=`".into(),
                    });
                }
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 2;
                    Tok::Arrow
                } else {
                    return Err(ParseError::Syntax {
                        pos: i,
                        msg: "expected `->`".into(),
                    });
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    i += 3;
                    Tok::DoubleArrow
                } else {
                    return Err(ParseError::Syntax {
                        pos: i,
                        msg: "expected `<->`".into(),
                    });
                }
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i + 1;
                while j < bytes.len() {
                    let d = bytes[j] as char;
                    if d.is_ascii_alphanumeric() || d == '_' {
                        j += 1;
                    } else {
                        break;
                    }
                }
                let word = &text[i..j];
                i = j;
                match word {
                    "in" => Tok::In,
                    "notin" => Tok::Notin,
                    "not" => Tok::Not,
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    w if w.chars().next().unwrap().is_ascii_lowercase() => {
                        if !w.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_') {
                            return Err(ParseError::Syntax {
                                pos: start,
                                msg: format!("bad set variable `{w}`"),
                            });
                        }
                        Tok::Lower(w.to_string())
                    }
                    w => {
                        if !w.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_') {
                            return Err(ParseError::Syntax {
                                pos: start,
                                msg: format!("bad class variable `{w}`"),
                            });
                        }
                        Tok::Upper(w.to_string())
                    }
                }
            }
            other => {
                return Err(ParseError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        toks.push((start, tok));
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.at += 1;
            Ok(())
        } else {
            Err(ParseError::Syntax {
                pos: self.pos(),
                msg: format!("expected {what}"),
            })
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.peek() == Some(&Tok::DoubleArrow) {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.imp()?; // right associative
            Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.bump();
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Some(Tok::Forall) | Some(Tok::Exists) => {
                let forall = self.peek() == Some(&Tok::Forall);
                self.bump();
                let v = match self.bump() {
                    Some(Tok::Lower(v)) => v,
                    _ => return self.err("expected a set variable after the quantifier"),
                };
                let body = Box::new(self.unary()?);
                Ok(if forall {
                    Formula::Forall(v, body)
                } else {
                    Formula::Exists(v, body)
                })
            }
            Some(Tok::LParen) => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Lower(_)) | Some(Tok::Upper(_)) => self.atom(),
            _ => self.err("expected a formula"),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.bump() {
            Some(Tok::Lower(n)) => Ok(Term::SetVar(n)),
            Some(Tok::Upper(n)) => Ok(Term::ClassVar(n)),
            _ => {
                self.at -= 1;
                self.err("expected a variable")
            }
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.term()?;
        match self.bump() {
            Some(Tok::In) => Ok(Formula::Member(lhs, self.term()?)),
            Some(Tok::Notin) => Ok(Formula::Not(Box::new(Formula::Member(lhs, self.term()?)))),
            Some(Tok::Eq) => Ok(Formula::Equal(lhs, self.term()?)),
            Some(Tok::Neq) => Ok(Formula::Not(Box::new(Formula::Equal(lhs, self.term()?)))),
            _ => {
                self.at -= 1;
                self.err("expected `in`, `notin`, `=` or `!=`")
            }
        }
    }

    fn class_term(&mut self) -> Result<ClassTerm, ParseError> {
        self.expect(Tok::LBrace, "`{`")?;
        let var = match self.bump() {
            Some(Tok::Lower(v)) => v,
            _ => return self.err("expected the bound set variable"),
        };
        self.expect(Tok::Bar, "`|`")?;
        let body = self.formula()?;
        self.expect(Tok::RBrace, "`}`")?;
        Ok(ClassTerm { var, body })
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at == self.toks.len() {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                pos: self.pos(),
                msg: "trailing input".into(),
            })
        }
    }
}

fn parser(text: &str) -> Result<Parser, ParseError> {
    Ok(Parser {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
    })
}

/// Parses a closed-or-open formula. Free set variables are allowed; callers
/// needing closedness check [`Formula::free_set_vars`].
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = parser(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses `{ x | φ }` and checks that `x` is the only free set variable.
pub fn parse_class_term(text: &str) -> Result<ClassTerm, ParseError> {
    let mut p = parser(text)?;
    let t = p.class_term()?;
    p.finish()?;
    let stray: Vec<String> = t.body.free_set_vars().into_iter().filter(|v| *v != t.var).collect();
    if !stray.is_empty() {
        return Err(ParseError::Unbound(stray));
    }
    Ok(t)
}

/// Either parse result, decided by the leading token.
#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    Formula(Formula),
    ClassTerm(ClassTerm),
}

pub fn parse(text: &str) -> Result<Parsed, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_class_term(text).map(Parsed::ClassTerm)
    } else {
        parse_formula(text).map(Parsed::Formula)
    }
}
