//! Text format for multivectors: `-1 + e3 - e12 + 1/2 e123`.
//!
//! Grammar: term (('+'|'-') term)*, term := [coef]['*'][blade],
//! coef := decimal | int '/' int, blade := 'e' digits | '1'.
//! Whitespace is ignored, U+2212 counts as '-', '*' is optional.

use thiserror::Error;

use crate::algebra::{canonical_order, Blade, Multivector, Signature};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("index {index} at {pos} is out of range for {sig}")]
    IndexOutOfRange { pos: usize, index: usize, sig: Signature },
    #[error("blade at {pos} must list distinct indices in ascending order (got e{text})")]
    BadIndexOrder { pos: usize, text: String },
}

struct Lexer {
    chars: Vec<(usize, char)>,
    i: usize,
}

impl Lexer {
    fn new(src: &str) -> Self {
        // positions are character offsets
        Lexer {
            chars: src.chars().enumerate().collect(),
            i: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.i < self.chars.len() && self.chars[self.i].1.is_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.i).map(|&(_, c)| normalize(c))
    }

    fn pos(&self) -> usize {
        self.chars.get(self.i).map(|&(p, _)| p).unwrap_or(self.chars.len())
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.i += 1;
        }
        c
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    /// Digits with an optional fraction and exponent, no sign. Returns None if
    /// nothing number-like is here.
    fn number(&mut self) -> Result<Option<f64>, ParseError> {
        self.skip_ws();
        let start = self.i;
        let mut s = String::new();
        let mut j = self.i;
        let take_digits = |j: &mut usize, s: &mut String, chars: &[(usize, char)]| {
            while *j < chars.len() && chars[*j].1.is_ascii_digit() {
                s.push(chars[*j].1);
                *j += 1;
            }
        };
        take_digits(&mut j, &mut s, &self.chars);
        if j < self.chars.len() && self.chars[j].1 == '.' {
            s.push('.');
            j += 1;
            take_digits(&mut j, &mut s, &self.chars);
        }
        if s.is_empty() || s == "." {
            return Ok(None);
        }
        if j < self.chars.len() && matches!(self.chars[j].1, 'E') {
            // 'E' exponent only; lowercase 'e' starts a blade
            let mut k = j + 1;
            let mut e = String::from("e");
            if k < self.chars.len() && matches!(normalize(self.chars[k].1), '+' | '-') {
                e.push(normalize(self.chars[k].1));
                k += 1;
            }
            let before = e.len();
            take_digits(&mut k, &mut e, &self.chars);
            if e.len() > before {
                s.push_str(&e);
                j = k;
            }
        }
        self.i = j;
        s.parse::<f64>()
            .map(Some)
            .map_err(|_| ParseError::Syntax {
                pos: self.chars[start].0,
                msg: format!("bad number '{s}'"),
            })
    }
}

#[inline]
fn normalize(c: char) -> char {
    if c == '\u{2212}' {
        '-'
    } else {
        c
    }
}

/// Coefficient: number, optionally followed by '/' number.
fn coefficient(lx: &mut Lexer) -> Result<Option<f64>, ParseError> {
    let Some(num) = lx.number()? else {
        return Ok(None);
    };
    if lx.peek() == Some('/') {
        lx.bump();
        let den = lx.number()?.ok_or_else(|| lx.err("expected denominator"))?;
        if den == 0.0 {
            return Err(lx.err("division by zero"));
        }
        return Ok(Some(num / den));
    }
    Ok(Some(num))
}

fn blade(lx: &mut Lexer, sig: Signature) -> Result<Blade, ParseError> {
    let pos = lx.pos();
    lx.bump(); // 'e'
    let mut digits = Vec::new();
    while lx.i < lx.chars.len() && lx.chars[lx.i].1.is_ascii_digit() {
        digits.push(lx.chars[lx.i].1.to_digit(10).unwrap() as usize);
        lx.i += 1;
    }
    if digits.is_empty() {
        return Err(ParseError::Syntax {
            pos,
            msg: "expected indices after 'e'".into(),
        });
    }
    for &d in &digits {
        if d == 0 || d > sig.n() {
            return Err(ParseError::IndexOutOfRange { pos, index: d, sig });
        }
    }
    Blade::from_indices(&digits).ok_or_else(|| ParseError::BadIndexOrder {
        pos,
        text: digits.iter().map(|d| d.to_string()).collect(),
    })
}

fn term(lx: &mut Lexer, sig: Signature) -> Result<(Blade, f64), ParseError> {
    let coef = coefficient(lx)?;
    let star = if lx.peek() == Some('*') {
        if coef.is_none() {
            return Err(lx.err("'*' without a coefficient"));
        }
        lx.bump();
        true
    } else {
        false
    };
    match lx.peek() {
        Some('e') => Ok((blade(lx, sig)?, coef.unwrap_or(1.0))),
        Some('1') if star => {
            lx.bump();
            Ok((Blade::SCALAR, coef.unwrap_or(1.0)))
        }
        _ if star => Err(lx.err("expected blade after '*'")),
        _ => coef
            .map(|c| (Blade::SCALAR, c))
            .ok_or_else(|| lx.err("expected coefficient or blade")),
    }
}

/// Parse a multivector literal in the given algebra. Repeated blades are summed.
pub fn parse_mv(text: &str, sig: Signature) -> Result<Multivector, ParseError> {
    let mut lx = Lexer::new(text);
    let mut m = Multivector::zero(sig);
    let mut sign = match lx.peek() {
        None => return Err(lx.err("empty input")),
        Some('-') => {
            lx.bump();
            -1.0
        }
        Some('+') => {
            lx.bump();
            1.0
        }
        _ => 1.0,
    };
    loop {
        match lx.peek() {
            None => return Err(lx.err("expected term after operator")),
            Some('+') | Some('-') => return Err(lx.err("unexpected operator")),
            _ => {}
        }
        let (b, c) = term(&mut lx, sig)?;
        m.set(b, m.get(b) + sign * c);
        sign = match lx.peek() {
            None => break,
            Some('+') => 1.0,
            Some('-') => -1.0,
            Some(_) => return Err(lx.err("expected '+' or '-'")),
        };
        lx.bump();
    }
    Ok(m)
}

fn fmt_num(x: f64, prec: usize) -> String {
    if prec >= 17 {
        // Rust's shortest round-trip form, never in exponent notation
        return format!("{}", x);
    }
    let p = prec.max(1);
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..15).contains(&mag) {
        let s = format!("{:.*E}", p - 1, x);
        let (m, e) = s.split_once('E').expect("exponent");
        let m = if m.contains('.') { m.trim_end_matches('0').trim_end_matches('.') } else { m };
        return format!("{m}E{e}");
    }
    let decimals = (p as i32 - 1 - mag).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// Print in canonical blade order, dropping zero terms, e.g. `2 + e1 - 0.5 e123`.
pub fn format_mv(a: &Multivector, precision: usize) -> String {
    let mut out = String::new();
    for b in canonical_order(a.sig().n()) {
        let c = a.get(b);
        let s = fmt_num(c, precision);
        if s == "0" || s == "-0" {
            continue;
        }
        let (neg, mag) = match s.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, s),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if b == Blade::SCALAR {
            out.push_str(&mag);
        } else if mag == "1" {
            out.push_str(&b.name());
        } else {
            out.push_str(&mag);
            out.push(' ');
            out.push_str(&b.name());
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}
