//! Recursive-descent parser for the DAU text grammar.
//!
//! Precedence, loosest first: `->`, `|`, `&`, `U`/`R`/`BR[N]`, temporal
//! unaries (`X`, `X^t`, `F`, `F[n:m]`, `G`), `!`. Path quantifiers `A`/`E`
//! take a whole implication-level formula. The single-letter operators
//! `X F G A E` are keywords only when followed by something that can start a
//! formula, so an atom may be called `A`.

use thiserror::Error;

use super::{Agents, Formula, Obligation, OughtStatement, Statement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("grammar violation in production `{production}`: {message}")]
    Grammar {
        production: &'static str,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u32),
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Slash,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Caret,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, FormulaError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let push = |tok: Tok, out: &mut Vec<Token>| out.push(Token { tok, line: tl, col: tc });
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            push(Tok::Ident(word), &mut out);
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let n = word.parse::<u32>().map_err(|_| FormulaError::Syntax {
                line: tl,
                col: tc,
                message: format!("number `{word}` out of range"),
            })?;
            push(Tok::Num(n), &mut out);
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, width) = match (c, two.as_str()) {
            (_, "->") => (Tok::Arrow, 2),
            (_, "&&") => (Tok::Amp, 2),
            (_, "||") => (Tok::Pipe, 2),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('[', _) => (Tok::LBrack, 1),
            (']', _) => (Tok::RBrack, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            (',', _) => (Tok::Comma, 1),
            (':', _) => (Tok::Colon, 1),
            ('/', _) => (Tok::Slash, 1),
            ('!' | '~' | '¬', _) => (Tok::Bang, 1),
            ('&' | '∧', _) => (Tok::Amp, 1),
            ('|' | '∨', _) => (Tok::Pipe, 1),
            ('→', _) => (Tok::Arrow, 1),
            ('^', _) => (Tok::Caret, 1),
            _ => {
                return Err(FormulaError::Syntax {
                    line,
                    col,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        push(tok, &mut out);
        i += width;
        col += width;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

const RESERVED: &[&str] = &["U", "R", "BR", "cstit", "dstit", "true", "false"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, FormulaError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, FormulaError> {
        let t = &self.toks[self.pos];
        Err(FormulaError::Syntax {
            line: t.line,
            col: t.col,
            message: message.into(),
        })
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Eof => "end of input".into(),
            other => format!("{other:?}"),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), FormulaError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            let got = Self::describe(self.peek());
            self.err(format!("expected {}, found {got}", Self::describe(&want)))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), FormulaError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            other => {
                let got = Self::describe(other);
                self.err(format!("expected `{kw}`, found {got}"))
            }
        }
    }

    fn expect_num(&mut self) -> Result<u32, FormulaError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            other => self.err(format!("expected a number, found {}", Self::describe(&other))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, FormulaError> {
        match self.peek().clone() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            other => self.err(format!("expected {what}, found {}", Self::describe(&other))),
        }
    }

    fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn can_start_operand(t: &Tok) -> bool {
        match t {
            Tok::Ident(s) => !matches!(s.as_str(), "U" | "R" | "BR" | "cstit" | "dstit"),
            Tok::LParen | Tok::Bang | Tok::LBrack => true,
            _ => false,
        }
    }

    fn is_ought_start(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == "O") && *self.peek_at(1) == Tok::LBrack
    }

    // ---- formulas ------------------------------------------------------

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = lhs.or(rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.binary_temporal()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.binary_temporal()?;
            lhs = lhs.and(rhs);
        }
        Ok(lhs)
    }

    fn binary_temporal(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.unary()?;
        match self.peek().clone() {
            Tok::Ident(s) if s == "U" => {
                self.bump();
                Ok(lhs.until(self.binary_temporal()?))
            }
            Tok::Ident(s) if s == "R" => {
                self.bump();
                Ok(lhs.release(self.binary_temporal()?))
            }
            Tok::Ident(s) if s == "BR" => {
                self.bump();
                self.expect(Tok::LBrack)?;
                let n = self.expect_num()?;
                self.expect(Tok::RBrack)?;
                Ok(lhs.bounded_release(n, self.binary_temporal()?))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        let tok = self.peek().clone();
        match tok {
            Tok::Bang => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Tok::Ident(ref s) if s == "X" => {
                if *self.peek_at(1) == Tok::Caret {
                    self.bump();
                    self.bump();
                    let t = self.expect_num()?;
                    return Ok(self.unary()?.next_pow(t));
                }
                if Self::can_start_operand(self.peek_at(1)) {
                    self.bump();
                    return Ok(self.unary()?.next());
                }
                self.primary()
            }
            Tok::Ident(ref s) if s == "F" => {
                if *self.peek_at(1) == Tok::LBrack && matches!(self.peek_at(2), Tok::Num(_)) {
                    self.bump();
                    self.bump();
                    let (lo, hi) = (self.expect_num()?, {
                        self.expect(Tok::Colon)?;
                        self.expect_num()?
                    });
                    self.expect(Tok::RBrack)?;
                    if lo > hi {
                        return Err(FormulaError::Grammar {
                            production: "F[n:m]",
                            message: format!("bounded eventually requires n <= m, got [{lo}:{hi}]"),
                        });
                    }
                    return Ok(self.unary()?.eventually_within(lo, hi));
                }
                if Self::can_start_operand(self.peek_at(1)) {
                    self.bump();
                    return Ok(self.unary()?.eventually());
                }
                self.primary()
            }
            Tok::Ident(ref s) if s == "G" => {
                if Self::can_start_operand(self.peek_at(1)) {
                    self.bump();
                    return Ok(self.unary()?.always());
                }
                self.primary()
            }
            Tok::Ident(ref s) if s == "A" || s == "E" => {
                if Self::can_start_operand(self.peek_at(1)) {
                    let universal = s == "A";
                    self.bump();
                    let body = self.formula()?;
                    return Ok(if universal { body.forall() } else { body.exists() });
                }
                self.primary()
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, FormulaError> {
        if self.is_ought_start() {
            return Err(FormulaError::Grammar {
                production: "formula",
                message: "an ought `O[...]` cannot appear inside a formula or obligation".into(),
            });
        }
        match self.peek().clone() {
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                self.bump();
                Ok(Formula::Atom(s))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::LBrack => self.stit(),
            other => self.err(format!("expected a formula, found {}", Self::describe(&other))),
        }
    }

    fn stit(&mut self) -> Result<Formula, FormulaError> {
        self.expect(Tok::LBrack)?;
        let agent = self.ident("an agent name")?;
        let kind = match self.peek().clone() {
            Tok::Ident(s) if s == "cstit" || s == "dstit" => {
                self.bump();
                s
            }
            other => return self.err(format!("expected `cstit` or `dstit`, found {}", Self::describe(&other))),
        };
        self.expect(Tok::Colon)?;
        let body = to_obligation(self.formula()?)?;
        self.expect(Tok::RBrack)?;
        Ok(if kind == "cstit" {
            Formula::Cstit(agent, Box::new(body))
        } else {
            Formula::Dstit(agent, Box::new(body))
        })
    }

    fn agents(&mut self) -> Result<Agents, FormulaError> {
        if *self.peek() == Tok::LBrace {
            self.bump();
            let mut members = vec![self.ident("an agent name")?];
            while *self.peek() == Tok::Comma {
                self.bump();
                members.push(self.ident("an agent name")?);
            }
            self.expect(Tok::RBrace)?;
            return Agents::group(members).map_err(|message| FormulaError::Grammar {
                production: "agent group",
                message,
            });
        }
        Ok(Agents::Single(self.ident("an agent name")?))
    }

    fn ought(&mut self) -> Result<OughtStatement, FormulaError> {
        self.expect_keyword("O")?;
        self.expect(Tok::LBrack)?;
        let agents = self.agents()?;
        match self.peek() {
            Tok::Ident(s) if s == "cstit" => {
                self.bump();
            }
            Tok::Ident(s) if s == "dstit" => {
                return Err(FormulaError::Grammar {
                    production: "ought",
                    message: "the dominance ought is only defined with `cstit`".into(),
                })
            }
            other => {
                let got = Self::describe(other);
                return self.err(format!("expected `cstit`, found {got}"));
            }
        }
        self.expect(Tok::Colon)?;
        let body = to_obligation(self.formula()?)?;
        let condition = if *self.peek() == Tok::Slash {
            self.bump();
            Some(to_obligation(self.formula()?)?)
        } else {
            None
        };
        self.expect(Tok::RBrack)?;
        Ok(OughtStatement {
            agents,
            body,
            condition,
        })
    }

    fn finish(&mut self) -> Result<(), FormulaError> {
        if self.at_eof() {
            Ok(())
        } else {
            let got = Self::describe(self.peek());
            self.err(format!("unexpected {got} after complete statement"))
        }
    }
}

/// Converts a parsed formula to an obligation, or reports which production
/// the stit usage violates.
pub(crate) fn to_obligation(f: Formula) -> Result<Obligation, FormulaError> {
    if !f.has_stit() {
        return Ok(Obligation::Plain(f));
    }
    match f {
        Formula::Dstit(a, body) => Ok(Obligation::DstitOf(a, body)),
        Formula::Not(inner) => Ok(Obligation::Negated(Box::new(to_obligation(*inner)?))),
        Formula::Cstit(..) => Err(FormulaError::Grammar {
            production: "obligation",
            message: "`cstit` is not an obligation; use `dstit` (A ::= φ | [α dstit: A] | ¬A)".into(),
        }),
        _ => Err(FormulaError::Grammar {
            production: "obligation",
            message: "stit operators may only appear as `[α dstit: A]` or `¬A` at the top of an obligation (A ::= φ | [α dstit: A] | ¬A)".into(),
        }),
    }
}

/// Parses any statement, classified by the most specific production:
/// an ought, then an obligation containing `dstit`, then a formula.
pub fn parse(text: &str) -> Result<Statement, FormulaError> {
    let mut p = Parser::new(text)?;
    if p.is_ought_start() {
        let o = p.ought()?;
        p.finish()?;
        return Ok(Statement::Ought(o));
    }
    let f = p.formula()?;
    p.finish()?;
    if !f.has_stit() {
        return Ok(Statement::Formula(f));
    }
    match to_obligation(f.clone()) {
        Ok(o) => Ok(Statement::Obligation(o)),
        Err(_) => Ok(Statement::Formula(f)),
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_obligation(text: &str) -> Result<Obligation, FormulaError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    to_obligation(f)
}

pub fn parse_ought(text: &str) -> Result<OughtStatement, FormulaError> {
    let mut p = Parser::new(text)?;
    let o = p.ought()?;
    p.finish()?;
    Ok(o)
}
