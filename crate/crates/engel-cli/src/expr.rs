//! Parser for surface-component expressions.
//!
//! Grammar: rational literals (integers, fractions `a/b`, decimals, all
//! converted exactly), the chart variables `u1` and `u2`, binary `+ - *`,
//! integer `^`, unary minus and parentheses. Produces canonical
//! [`MultiPoly`] values, so parse-print-parse round-trips are identities.

use engel::poly::MultiPoly;
use engel::scalar::parse_rational;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at {}:{}: {}",
            self.line, self.col, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> u8 {
        let b = self.src[self.pos];
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        b
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let b = self.src[self.pos];
            if b.is_ascii_whitespace() {
                self.bump();
                continue;
            }
            let (line, col) = (self.line, self.col);
            let tok = match b {
                b'+' => {
                    self.bump();
                    Tok::Plus
                }
                b'-' => {
                    self.bump();
                    Tok::Minus
                }
                b'*' => {
                    self.bump();
                    Tok::Star
                }
                b'^' => {
                    self.bump();
                    Tok::Caret
                }
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'0'..=b'9' | b'.' => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_digit()
                            || self.src[self.pos] == b'.'
                            || self.src[self.pos] == b'/')
                    {
                        // a fraction bar binds only between digit runs
                        if self.src[self.pos] == b'/'
                            && !(self.pos + 1 < self.src.len()
                                && self.src[self.pos + 1].is_ascii_digit())
                        {
                            break;
                        }
                        self.bump();
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    Tok::Num(text.to_string())
                }
                b if b.is_ascii_alphabetic() || b == b'_' => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric()
                            || self.src[self.pos] == b'_')
                    {
                        self.bump();
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    Tok::Ident(text.to_string())
                }
                other => {
                    return Err(self.error(format!("unexpected character `{}`", other as char)))
                }
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|&(_, l, c)| (l, c))
            .unwrap_or(self.end)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    fn advance(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {:?}", tok)))
        }
    }

    // Pratt loop over the binary operators.
    fn expr(&mut self, min_bp: u8) -> Result<MultiPoly, ParseError> {
        let mut lhs = self.prefix()?;
        loop {
            let bp = match self.peek() {
                Some(Tok::Plus) | Some(Tok::Minus) => 10u8,
                Some(Tok::Star) => 20,
                Some(Tok::Caret) => 30,
                _ => break,
            };
            if bp < min_bp {
                break;
            }
            let op = self.advance().unwrap();
            match op {
                Tok::Caret => {
                    // exponents are bare integer literals
                    let e = self.exponent()?;
                    lhs = lhs.pow(e);
                }
                Tok::Plus => {
                    let rhs = self.expr(bp + 1)?;
                    lhs = &lhs + &rhs;
                }
                Tok::Minus => {
                    let rhs = self.expr(bp + 1)?;
                    lhs = &lhs - &rhs;
                }
                Tok::Star => {
                    let rhs = self.expr(bp + 1)?;
                    lhs = &lhs * &rhs;
                }
                _ => unreachable!(),
            }
        }
        Ok(lhs)
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        match self.advance() {
            Some(Tok::Num(text)) => {
                if text.contains('.') || text.contains('/') {
                    self.pos -= 1;
                    return Err(self.error("exponent must be a nonnegative integer"));
                }
                text.parse::<u32>().map_err(|_| {
                    self.pos -= 1;
                    self.error("exponent out of range")
                })
            }
            _ => {
                self.pos -= 1;
                Err(self.error("exponent must be a nonnegative integer"))
            }
        }
    }

    fn prefix(&mut self) -> Result<MultiPoly, ParseError> {
        match self.advance() {
            Some(Tok::Minus) => {
                let inner = self.expr(25)?;
                Ok(-&inner)
            }
            Some(Tok::Num(text)) => match parse_rational(&text) {
                Some(r) => Ok(MultiPoly::constant(r)),
                None => {
                    self.pos -= 1;
                    Err(self.error(format!("malformed numeric literal `{text}`")))
                }
            },
            Some(Tok::Ident(name)) => match name.as_str() {
                "u1" => Ok(MultiPoly::var(0)),
                "u2" => Ok(MultiPoly::var(1)),
                other => {
                    self.pos -= 1;
                    Err(self.error(format!("unknown identifier `{other}`; only u1, u2")))
                }
            },
            Some(Tok::LParen) => {
                let inner = self.expr(0)?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => {
                self.pos -= 1;
                Err(self.error("expected a term"))
            }
        }
    }
}

/// Parses an expression into an exact chart polynomial in `(u1, u2)`.
pub fn parse_expression(text: &str) -> Result<MultiPoly, ParseError> {
    let end = {
        let lines: Vec<&str> = text.split('\n').collect();
        (lines.len(), lines.last().map_or(1, |l| l.len() + 1))
    };
    let toks = Lexer::new(text).tokens()?;
    let mut parser = Parser { toks, pos: 0, end };
    if parser.peek().is_none() {
        return Err(parser.error("empty expression"));
    }
    let poly = parser.expr(0)?;
    if parser.peek().is_some() {
        return Err(parser.error("trailing input"));
    }
    Ok(poly)
}

/// Canonical rendering in the chart variables; `parse(print(p)) == p`.
pub fn print_expression(p: &MultiPoly) -> String {
    format!("{}", p.display(&["u1", "u2", "u3", "u4"]))
}
