//! Surface syntax for classes.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' nat)?
//! atom   := 'w' nat | 'p' nat | 'c' nat | 'V' '{' idx (',' idx)* '}'
//!         | nat | '(' expr ')'
//! idx    := '1/2' | nat
//! ```
//!
//! Whitespace is insignificant. Positions in errors are 1-based columns.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    W,
    P,
    C,
}

impl Generator {
    fn symbol(self) -> char {
        match self {
            Generator::W => 'w',
            Generator::P => 'p',
            Generator::C => 'c',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassExpr {
    /// Terms with a flag for a leading `-`.
    Sum(Vec<(bool, ClassExpr)>),
    Product(Vec<ClassExpr>),
    Power(Box<ClassExpr>, u32),
    Atom(Generator, u32),
    /// `V{...}` in doubled encoding, in source order.
    V(Vec<u32>),
    Int(u64),
    Group(Box<ClassExpr>),
}

impl ClassExpr {
    /// Visit every node, parents before children.
    pub fn walk(&self, f: &mut impl FnMut(&ClassExpr)) {
        f(self);
        match self {
            ClassExpr::Sum(ts) => ts.iter().for_each(|(_, t)| t.walk(f)),
            ClassExpr::Product(fs) => fs.iter().for_each(|x| x.walk(f)),
            ClassExpr::Power(b, _) | ClassExpr::Group(b) => b.walk(f),
            ClassExpr::Atom(..) | ClassExpr::V(_) | ClassExpr::Int(_) => {}
        }
    }

    /// An upper bound on the degree of the value, saturating.
    pub fn degree_bound(&self) -> u64 {
        match self {
            ClassExpr::Sum(ts) => ts.iter().map(|(_, t)| t.degree_bound()).max().unwrap_or(0),
            ClassExpr::Product(fs) => fs.iter().fold(0u64, |a, x| a.saturating_add(x.degree_bound())),
            ClassExpr::Power(b, e) => b.degree_bound().saturating_mul(*e as u64),
            ClassExpr::Group(b) => b.degree_bound(),
            ClassExpr::Atom(Generator::W, i) => *i as u64,
            ClassExpr::Atom(Generator::P, i) => 4 * *i as u64,
            ClassExpr::Atom(Generator::C, i) => 2 * *i as u64,
            ClassExpr::V(ds) => 1 + ds.iter().map(|&d| d as u64).sum::<u64>(),
            ClassExpr::Int(_) => 0,
        }
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpr::Sum(ts) => {
                for (k, (neg, t)) in ts.iter().enumerate() {
                    match (k, neg) {
                        (0, true) => f.write_str("-")?,
                        (0, false) => {}
                        (_, true) => f.write_str(" - ")?,
                        (_, false) => f.write_str(" + ")?,
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            ClassExpr::Product(fs) => {
                for (k, x) in fs.iter().enumerate() {
                    if k > 0 {
                        f.write_str("*")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            ClassExpr::Power(b, e) => write!(f, "{b}^{e}"),
            ClassExpr::Atom(g, i) => write!(f, "{}{i}", g.symbol()),
            ClassExpr::V(ds) => {
                f.write_str("V{")?;
                for (k, &d) in ds.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    if d == 1 {
                        f.write_str("1/2")?;
                    } else {
                        write!(f, "{}", d / 2)?;
                    }
                }
                f.write_str("}")
            }
            ClassExpr::Int(n) => write!(f, "{n}"),
            ClassExpr::Group(e) => write!(f, "({e})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Nat(u64),
    Letter(char),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    End,
}

impl Tok {
    fn describe(self) -> String {
        match self {
            Tok::Nat(n) => format!("number {n}"),
            Tok::Letter(c) => format!("`{c}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn err(column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let column = |k: usize| text[..chars.get(k).map_or(text.len(), |c| c.0)].chars().count() + 1;
    let mut k = 0;
    while k < chars.len() {
        let (_, c) = chars[k];
        let col = column(k);
        let tok = match c {
            c if c.is_whitespace() => {
                k += 1;
                continue;
            }
            '0'..='9' => {
                let start = k;
                while k < chars.len() && chars[k].1.is_ascii_digit() {
                    k += 1;
                }
                let digits: String = chars[start..k].iter().map(|c| c.1).collect();
                let n = digits
                    .parse::<u64>()
                    .map_err(|_| err(col, format!("number {digits} is too large")))?;
                out.push((Tok::Nat(n), col));
                continue;
            }
            'w' | 'p' | 'c' | 'V' => Tok::Letter(c),
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            other => return Err(err(col, format!("unexpected character `{other}`"))),
        };
        out.push((tok, col));
        k += 1;
    }
    out.push((Tok::End, column(chars.len())));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Tok {
        self.toks[self.at].0
    }

    fn col(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at];
        if t.0 != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let (t, col) = self.bump();
        if t == want {
            Ok(())
        } else {
            Err(err(col, format!("expected {}, found {}", want.describe(), t.describe())))
        }
    }

    fn nat(&mut self, what: &str) -> Result<(u64, usize), ParseError> {
        match self.bump() {
            (Tok::Nat(n), col) => Ok((n, col)),
            (t, col) => Err(err(col, format!("expected {what}, found {}", t.describe()))),
        }
    }

    fn index(&mut self) -> Result<u32, ParseError> {
        let (n, col) = self.nat("an index")?;
        if n == 0 {
            return Err(err(col, "index must be positive"));
        }
        u32::try_from(n).map_err(|_| err(col, "index is too large"))
    }

    fn expr(&mut self) -> Result<ClassExpr, ParseError> {
        let mut terms = Vec::new();
        let mut neg = false;
        if self.peek() == Tok::Minus {
            self.bump();
            neg = true;
        }
        loop {
            terms.push((neg, self.term()?));
            match self.peek() {
                Tok::Plus => neg = false,
                Tok::Minus => neg = true,
                _ => break,
            }
            self.bump();
        }
        Ok(if terms.len() == 1 && !terms[0].0 {
            terms.pop().expect("one term").1
        } else {
            ClassExpr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<ClassExpr, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Tok::Star {
            self.bump();
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            ClassExpr::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<ClassExpr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let (e, col) = self.nat("an exponent")?;
        let e = u32::try_from(e).map_err(|_| err(col, "exponent is too large"))?;
        Ok(ClassExpr::Power(Box::new(base), e))
    }

    fn atom(&mut self) -> Result<ClassExpr, ParseError> {
        let (t, col) = self.bump();
        match t {
            Tok::Letter('V') => {
                self.expect(Tok::LBrace)?;
                let mut ds = vec![self.v_index()?];
                while self.peek() == Tok::Comma {
                    self.bump();
                    ds.push(self.v_index()?);
                }
                self.expect(Tok::RBrace)?;
                Ok(ClassExpr::V(ds))
            }
            Tok::Letter(c) => {
                let g = match c {
                    'w' => Generator::W,
                    'p' => Generator::P,
                    _ => Generator::C,
                };
                Ok(ClassExpr::Atom(g, self.index()?))
            }
            Tok::Nat(n) => {
                if self.peek() == Tok::Slash {
                    return Err(err(self.col(), "`1/2` is only allowed inside V{...}"));
                }
                Ok(ClassExpr::Int(n))
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(ClassExpr::Group(Box::new(e)))
            }
            other => Err(err(col, format!("expected a class, found {}", other.describe()))),
        }
    }

    /// `1/2` becomes 1, `k` becomes `2k`.
    fn v_index(&mut self) -> Result<u32, ParseError> {
        let (n, col) = self.nat("an index")?;
        if self.peek() == Tok::Slash {
            self.bump();
            let (den, dcol) = self.nat("`2`")?;
            if n != 1 || den != 2 {
                return Err(err(dcol, "the only fractional index is 1/2"));
            }
            return Ok(1);
        }
        if n == 0 {
            return Err(err(col, "index must be positive"));
        }
        u32::try_from(n)
            .ok()
            .and_then(|k| k.checked_mul(2))
            .ok_or_else(|| err(col, "index is too large"))
    }
}

pub fn parse(text: &str) -> Result<ClassExpr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let e = p.expr()?;
    match p.bump() {
        (Tok::End, _) => Ok(e),
        (t, col) => Err(err(col, format!("unexpected {}", t.describe()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure() {
        let e = parse("w2^2*w1^4 + w3^2").unwrap();
        let ClassExpr::Sum(ts) = &e else { panic!("{e:?}") };
        assert_eq!(ts.len(), 2);
        assert!(matches!(ts[0].1, ClassExpr::Product(_)));
        assert_eq!(e.to_string(), "w2^2*w1^4 + w3^2");
        let e = parse("V{1/2,3}^2 + p2").unwrap();
        assert_eq!(e.to_string(), "V{1/2,3}^2 + p2");
        assert_eq!(parse(" ( w1 +w2 ) ^ 3").unwrap().to_string(), "(w1 + w2)^3");
        assert_eq!(parse("-p1").unwrap(), ClassExpr::Sum(vec![(true, ClassExpr::Atom(Generator::P, 1))]));
    }

    #[test]
    fn precedence() {
        // ^ binds tighter than *, which binds tighter than +
        let e = parse("w1*w2^2+w3").unwrap();
        let ClassExpr::Sum(ts) = e else { panic!() };
        let ClassExpr::Product(fs) = &ts[0].1 else { panic!() };
        assert!(matches!(fs[1], ClassExpr::Power(_, 2)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("w0").unwrap_err();
        assert_eq!((e.column, e.message.as_str()), (2, "index must be positive"));
        assert_eq!(parse("w1 + ").unwrap_err().column, 6);
        assert_eq!(parse("1/2").unwrap_err().column, 2);
        assert_eq!(parse("V{}").unwrap_err().column, 3);
        assert_eq!(parse("V{1/3}").unwrap_err().column, 5);
        assert_eq!(parse("w1 w2").unwrap_err().column, 4);
        assert_eq!(parse("x1").unwrap_err().column, 1);
        assert_eq!(parse("w1^2^3").unwrap_err().column, 5);
        assert!(parse("(w1").is_err());
        assert!(parse("w1^-1").is_err());
    }
}
