//! Surface syntax for events.
//!
//! Grammar (lowest to highest precedence, `and`/`or` left-associative):
//!
//! ```text
//! expr    := term (`or` term)*
//! term    := factor (`and` factor)*
//! factor  := `not` factor | `shift` factor | atom
//! atom    := `bot` | `top` | `blocks()` | `reg(` bitlist `,` bitlist `)` | `(` expr `)`
//! bitlist := `[` (bit (`,` bit)*)? `]`
//! ```
//!
//! `blocks()` is the oscillating stream; everything else is closed under
//! the connectives inside the eventually periodic fragment, and
//! [`elaborate`] exploits that: an expression with no `blocks()` in it
//! elaborates to a canonical periodic presentation plus its convergence
//! witness, anything else to a bare stream.

use std::fmt;

use thiserror::Error;

use crate::actual::ActualEvent;
use crate::event::PotentialEvent;
use crate::omniscience::oscillator;
use crate::regular::{RegularEvent, RegularEventError};

#[derive(Debug, Clone, PartialEq)]
pub enum EventExpr {
    Bot,
    Top,
    /// The oscillator literal `blocks()`.
    Blocks,
    Reg(RegularEvent),
    Not(Box<EventExpr>),
    Shift(Box<EventExpr>),
    And(Box<EventExpr>, Box<EventExpr>),
    Or(Box<EventExpr>, Box<EventExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: found {found}, expected {}", expected.join(" or "))]
    Syntax { line: u32, col: u32, found: String, expected: Vec<&'static str> },
    #[error("at {line}:{col}: the period of a regular literal must be nonempty")]
    EmptyPeriod { line: u32, col: u32 },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Number(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Number(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
        }
    }
}

struct Lexeme {
    tok: Tok,
    line: u32,
    col: u32,
}

fn lex(text: &str) -> Result<(Vec<Lexeme>, (u32, u32)), ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut i = 0;
    while i < chars.len() {
        let (l, co) = (line, col);
        let consumed = match chars[i] {
            c if c.is_whitespace() => 1,
            'a'..='z' => {
                let n = chars[i..].iter().take_while(|c| c.is_ascii_lowercase()).count();
                let w: String = chars[i..i + n].iter().collect();
                out.push(Lexeme { tok: Tok::Word(w), line: l, col: co });
                n
            }
            '0'..='9' => {
                let n = chars[i..].iter().take_while(|c| c.is_ascii_digit()).count();
                let w: String = chars[i..i + n].iter().collect();
                out.push(Lexeme { tok: Tok::Number(w), line: l, col: co });
                n
            }
            c @ ('(' | ')' | '[' | ']' | ',') => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    _ => Tok::Comma,
                };
                out.push(Lexeme { tok, line: l, col: co });
                1
            }
            other => {
                return Err(ParseError::Syntax {
                    line: l,
                    col: co,
                    found: format!("`{other}`"),
                    expected: vec!["a keyword", "a bit", "punctuation"],
                });
            }
        };
        for k in 0..consumed {
            if chars[i + k] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        i += consumed;
    }
    Ok((out, (line, col)))
}

struct Parser {
    toks: Vec<Lexeme>,
    pos: usize,
    end: (u32, u32),
}

const ATOM_EXPECTED: [&str; 7] = ["bot", "top", "blocks()", "reg", "not", "shift", "("];

impl Parser {
    fn peek(&self) -> Option<&Lexeme> {
        self.toks.get(self.pos)
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Lexeme { tok: Tok::Word(x), .. }) if x == w)
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn err_here(&self, expected: Vec<&'static str>) -> ParseError {
        match self.peek() {
            Some(l) => ParseError::Syntax { line: l.line, col: l.col, found: l.tok.text(), expected },
            None => ParseError::Syntax {
                line: self.end.0,
                col: self.end.1,
                found: "end of input".into(),
                expected,
            },
        }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(u32, u32), ParseError> {
        match self.peek() {
            Some(l) if l.tok == tok => {
                let pos = (l.line, l.col);
                self.bump();
                Ok(pos)
            }
            _ => Err(self.err_here(vec![name])),
        }
    }

    fn expr(&mut self) -> Result<EventExpr, ParseError> {
        let mut e = self.term()?;
        while self.at_word("or") {
            self.bump();
            e = EventExpr::Or(Box::new(e), Box::new(self.term()?));
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<EventExpr, ParseError> {
        let mut e = self.factor()?;
        while self.at_word("and") {
            self.bump();
            e = EventExpr::And(Box::new(e), Box::new(self.factor()?));
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<EventExpr, ParseError> {
        if self.at_word("not") {
            self.bump();
            return Ok(EventExpr::Not(Box::new(self.factor()?)));
        }
        if self.at_word("shift") {
            self.bump();
            return Ok(EventExpr::Shift(Box::new(self.factor()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<EventExpr, ParseError> {
        let word = match self.peek() {
            Some(Lexeme { tok: Tok::Word(w), .. }) => Some(w.clone()),
            Some(Lexeme { tok: Tok::LParen, .. }) => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, ")")?;
                return Ok(e);
            }
            _ => None,
        };
        match word.as_deref() {
            Some("bot") => {
                self.bump();
                Ok(EventExpr::Bot)
            }
            Some("top") => {
                self.bump();
                Ok(EventExpr::Top)
            }
            Some("blocks") => {
                self.bump();
                self.expect(Tok::LParen, "(")?;
                self.expect(Tok::RParen, ")")?;
                Ok(EventExpr::Blocks)
            }
            Some("reg") => {
                self.bump();
                self.expect(Tok::LParen, "(")?;
                let (preamble, _) = self.bitlist()?;
                self.expect(Tok::Comma, ",")?;
                let (period, ppos) = self.bitlist()?;
                self.expect(Tok::RParen, ")")?;
                match RegularEvent::new(preamble, period) {
                    Ok(r) => Ok(EventExpr::Reg(r)),
                    Err(RegularEventError::EmptyPeriod) => {
                        Err(ParseError::EmptyPeriod { line: ppos.0, col: ppos.1 })
                    }
                    // the lexer admits only 0/1 into bitlists
                    Err(e) => unreachable!("{e}"),
                }
            }
            _ => Err(self.err_here(ATOM_EXPECTED.to_vec())),
        }
    }

    /// Returns the bits and the position of the opening bracket.
    fn bitlist(&mut self) -> Result<(Vec<u8>, (u32, u32)), ParseError> {
        let open = self.expect(Tok::LBracket, "[")?;
        let mut bits = Vec::new();
        if matches!(self.peek(), Some(Lexeme { tok: Tok::RBracket, .. })) {
            self.bump();
            return Ok((bits, open));
        }
        loop {
            match self.peek() {
                Some(Lexeme { tok: Tok::Number(n), .. }) if n == "0" || n == "1" => {
                    bits.push(if n == "1" { 1 } else { 0 });
                    self.bump();
                }
                _ => return Err(self.err_here(vec!["0", "1"])),
            }
            match self.peek() {
                Some(Lexeme { tok: Tok::Comma, .. }) => self.bump(),
                Some(Lexeme { tok: Tok::RBracket, .. }) => {
                    self.bump();
                    return Ok((bits, open));
                }
                _ => return Err(self.err_here(vec![",", "]"])),
            }
        }
    }
}

pub fn parse(text: &str) -> Result<EventExpr, ParseError> {
    let (toks, end) = lex(text)?;
    let mut p = Parser { toks, pos: 0, end };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err_here(vec!["and", "or", "end of input"]));
    }
    Ok(e)
}

impl EventExpr {
    fn prec(&self) -> u8 {
        match self {
            EventExpr::Or(..) => 1,
            EventExpr::And(..) => 2,
            EventExpr::Not(_) | EventExpr::Shift(_) => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.prec() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            EventExpr::Bot => f.write_str("bot")?,
            EventExpr::Top => f.write_str("top")?,
            EventExpr::Blocks => f.write_str("blocks()")?,
            EventExpr::Reg(r) => write!(f, "{r}")?,
            EventExpr::Not(x) => {
                f.write_str("not ")?;
                x.fmt_prec(f, 3)?;
            }
            EventExpr::Shift(x) => {
                f.write_str("shift ")?;
                x.fmt_prec(f, 3)?;
            }
            EventExpr::And(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" and ")?;
                b.fmt_prec(f, 3)?;
            }
            EventExpr::Or(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" or ")?;
                b.fmt_prec(f, 2)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Canonical rendering: keywords and minimal parentheses. Reparsing the
/// output yields the identical tree.
impl fmt::Display for EventExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// What an expression denotes, as strongly classified as the syntax
/// allows.
pub enum Elaborated {
    /// Everything below the root is eventually periodic: the canonical
    /// presentation plus its convergence witness.
    Regular { event: RegularEvent, witness: ActualEvent },
    /// The expression mentions `blocks()`; only the bare stream is
    /// available.
    General(PotentialEvent),
}

impl Elaborated {
    /// The underlying stream, whichever side it came out on.
    pub fn potential(&self) -> PotentialEvent {
        match self {
            Elaborated::Regular { witness, .. } => witness.event().clone(),
            Elaborated::General(e) => e.clone(),
        }
    }

    pub fn regular_form(&self) -> Option<&RegularEvent> {
        match self {
            Elaborated::Regular { event, .. } => Some(event),
            Elaborated::General(_) => None,
        }
    }
}

fn try_regular(expr: &EventExpr) -> Option<RegularEvent> {
    match expr {
        EventExpr::Bot => Some(RegularEvent::from_bits(&[], &[0])),
        EventExpr::Top => Some(RegularEvent::from_bits(&[], &[1])),
        EventExpr::Blocks => None,
        EventExpr::Reg(r) => Some(r.clone()),
        EventExpr::Not(x) => Some(try_regular(x)?.complement()),
        EventExpr::Shift(x) => Some(try_regular(x)?.shifted()),
        EventExpr::And(a, b) => Some(try_regular(a)?.and(&try_regular(b)?)),
        EventExpr::Or(a, b) => Some(try_regular(a)?.or(&try_regular(b)?)),
    }
}

fn lower(expr: &EventExpr) -> PotentialEvent {
    match expr {
        EventExpr::Bot => PotentialEvent::bottom(),
        EventExpr::Top => PotentialEvent::top(),
        EventExpr::Blocks => oscillator(),
        EventExpr::Reg(r) => r.to_potential(),
        EventExpr::Not(x) => lower(x).complement(),
        EventExpr::Shift(x) => lower(x).shift(),
        EventExpr::And(a, b) => lower(a).and(&lower(b)),
        EventExpr::Or(a, b) => lower(a).or(&lower(b)),
    }
}

/// Classify and build. Total: the periodic fragment closes under every
/// connective (`shift` folds into the preamble), so the only way to land
/// in `General` is to mention `blocks()`.
pub fn elaborate(expr: &EventExpr) -> Elaborated {
    match try_regular(expr) {
        Some(r) => {
            let r = r.canonical();
            Elaborated::Regular { witness: r.to_actual(), event: r }
        }
        None => Elaborated::General(lower(expr)),
    }
}
