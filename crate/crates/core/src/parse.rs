//! Text grammar for polynomials, differential operators and recurrences.
//!
//! ```text
//! equation := expr [ '=' expr ] [ 'for' 'n' '>=' int ]
//! expr     := [ '+' | '-' ] term { ('+' | '-') term }
//! term     := power { [ '*' | '/' ] power }
//! power    := atom [ '^' uint ]
//! atom     := int | var | 'D' | 'a' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Polynomials use a single variable (`t` for operators, `n` for
//! recurrences). `D` is the derivation d/dt and may only be followed by
//! constant factors. `a(n+s)` refers to a sequence term; its argument must be
//! `n` plus an integer. Multiplication may be written by juxtaposition.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Poly,
    Ode,
    Rec,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    Ge,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                out.push((pos, Tok::Num(digits.parse().expect("ascii digits"))));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_alphabetic() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                out.push((pos, Tok::Ident(word)));
            }
            '>' if chars.get(i + 1).map(|&(_, c)| c) == Some('=') => {
                out.push((pos, Tok::Ge));
                i += 2;
            }
            '\u{2265}' => {
                out.push((pos, Tok::Ge));
                i += 1;
            }
            '\u{2212}' => {
                out.push((pos, Tok::Sym('-')));
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' | '=' => {
                out.push((pos, Tok::Sym(c)));
                i += 1;
            }
            _ => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected character '{c}'"),
                })
            }
        }
    }
    Ok(out)
}

/// A linear combination `pure + sum_key ops[key] * X_key` where `X_key` is
/// `D^key` or `a(n+key)`.
#[derive(Clone, Debug, Default)]
struct Lin {
    pure: Poly,
    ops: BTreeMap<i64, Poly>,
}

impl Lin {
    fn pure(p: Poly) -> Self {
        Lin {
            pure: p,
            ops: BTreeMap::new(),
        }
    }

    fn op(key: i64) -> Self {
        let mut ops = BTreeMap::new();
        ops.insert(key, Poly::one());
        Lin {
            pure: Poly::zero(),
            ops,
        }
    }

    fn has_ops(&self) -> bool {
        self.ops.values().any(|p| !p.is_zero())
    }

    fn add(mut self, other: Lin, sign: i64) -> Lin {
        let s = BigRational::from_integer(sign.into());
        self.pure = &self.pure + &other.pure.scale(&s);
        for (k, p) in other.ops {
            let e = self.ops.entry(k).or_default();
            *e = &*e + &p.scale(&s);
        }
        self
    }

    fn scale_poly(self, p: &Poly) -> Lin {
        Lin {
            pure: &self.pure * p,
            ops: self.ops.into_iter().map(|(k, q)| (k, &q * p)).collect(),
        }
    }

    fn as_constant(&self) -> Option<BigRational> {
        if self.has_ops() {
            return None;
        }
        match self.pure.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.pure.coeff(0)),
            Some(_) => None,
        }
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    i: usize,
    mode: Mode,
    var: &'a str,
    end: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &str, mode: Mode, var: &'a str) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(src)?,
            i: 0,
            mode,
            var,
            end: src.len(),
        })
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<Lin> {
        let mut sign = 1;
        if self.eat_sym('-') {
            sign = -1;
        } else {
            self.eat_sym('+');
        }
        let mut acc = Lin::default().add(self.term()?, sign);
        loop {
            if self.eat_sym('+') {
                acc = acc.add(self.term()?, 1);
            } else if self.eat_sym('-') {
                acc = acc.add(self.term()?, -1);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        match self.peek() {
            Some(Tok::Num(_)) | Some(Tok::Sym('(')) => true,
            Some(Tok::Ident(w)) => w != "for",
            _ => false,
        }
    }

    fn term(&mut self) -> Result<Lin> {
        let mut acc = self.power()?;
        loop {
            let pos = self.pos();
            if self.eat_sym('/') {
                let rhs = self.power()?;
                match rhs.as_constant() {
                    Some(c) if !c.is_zero() => acc = acc.scale_poly(&Poly::constant(c.recip())),
                    Some(_) => return Err(Error::Parse { pos, msg: "division by zero".into() }),
                    None => {
                        return Err(Error::Parse {
                            pos,
                            msg: "only division by a nonzero constant is supported".into(),
                        })
                    }
                }
                continue;
            }
            let explicit = self.eat_sym('*');
            if !explicit && !self.starts_factor() {
                return Ok(acc);
            }
            let rhs = self.power()?;
            acc = self.multiply(acc, rhs, pos)?;
        }
    }

    fn multiply(&self, lhs: Lin, rhs: Lin, pos: usize) -> Result<Lin> {
        match (lhs.has_ops(), rhs.has_ops()) {
            (true, true) => Err(Error::Parse {
                pos,
                msg: "product of two operator terms is not linear".into(),
            }),
            (false, _) => Ok(rhs.scale_poly(&lhs.pure)),
            (true, false) => {
                if self.mode == Mode::Ode && rhs.pure.degree().unwrap_or(0) > 0 {
                    return Err(Error::Parse {
                        pos,
                        msg: "polynomial factors must precede D".into(),
                    });
                }
                Ok(lhs.scale_poly(&rhs.pure))
            }
        }
    }

    fn power(&mut self) -> Result<Lin> {
        let base = self.atom()?;
        if !self.eat_sym('^') {
            return Ok(base);
        }
        let pos = self.pos();
        let e = match self.peek() {
            Some(Tok::Num(n)) => n.to_u32().filter(|&e| e <= 10_000),
            _ => None,
        };
        let Some(e) = e else {
            return self.err("expected a small non-negative integer exponent");
        };
        self.i += 1;
        if base.has_ops() {
            // only a bare D may be raised to a power
            let bare_d = self.mode == Mode::Ode
                && base.pure.is_zero()
                && base.ops.len() == 1
                && base.ops.get(&1).is_some_and(|p| *p == Poly::one());
            if !bare_d {
                return Err(Error::Parse {
                    pos,
                    msg: "only D or a polynomial may be raised to a power".into(),
                });
            }
            return Ok(Lin::op(e as i64));
        }
        let p = (0..e).fold(Poly::one(), |acc, _| &acc * &base.pure);
        Ok(Lin::pure(p))
    }

    fn atom(&mut self) -> Result<Lin> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        self.i += 1;
        match tok {
            Tok::Num(n) => Ok(Lin::pure(Poly::constant(BigRational::from_integer(n)))),
            Tok::Sym('(') => {
                let inner = self.expr()?;
                self.expect_sym(')')?;
                Ok(inner)
            }
            Tok::Ident(w) if w == self.var => Ok(Lin::pure(Poly::var())),
            Tok::Ident(w) if w == "D" && self.mode == Mode::Ode => Ok(Lin::op(1)),
            Tok::Ident(w) if w == "a" && self.mode == Mode::Rec => {
                self.expect_sym('(')?;
                let arg_pos = self.pos();
                let arg = self.expr()?;
                self.expect_sym(')')?;
                let shift = linear_shift(&arg).ok_or(Error::Parse {
                    pos: arg_pos,
                    msg: "sequence index must be n plus an integer".into(),
                })?;
                Ok(Lin::op(shift))
            }
            Tok::Ident(w) => Err(Error::Parse {
                pos,
                msg: format!("unknown identifier '{w}'"),
            }),
            _ => Err(Error::Parse {
                pos,
                msg: "expected a number, variable or '('".into(),
            }),
        }
    }

    fn at_end(&self) -> bool {
        self.i == self.toks.len()
    }

    /// `lhs [= rhs]`, as the single expression `lhs - rhs`.
    fn equation(&mut self) -> Result<Lin> {
        let lhs = self.expr()?;
        if self.eat_sym('=') {
            let rhs = self.expr()?;
            Ok(lhs.add(rhs, -1))
        } else {
            Ok(lhs)
        }
    }

    fn for_clause(&mut self) -> Result<Option<i64>> {
        if self.peek() != Some(&Tok::Ident("for".into())) {
            return Ok(None);
        }
        self.i += 1;
        if self.peek() != Some(&Tok::Ident("n".into())) {
            return self.err("expected 'n' after 'for'");
        }
        self.i += 1;
        if self.peek() != Some(&Tok::Ge) {
            return self.err("expected '>='");
        }
        self.i += 1;
        let neg = self.eat_sym('-');
        let v = match self.peek() {
            Some(Tok::Num(n)) => n.to_i64(),
            _ => None,
        };
        let Some(v) = v else {
            return self.err("expected an integer bound");
        };
        self.i += 1;
        Ok(Some(if neg { -v } else { v }))
    }

    fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }
}

fn linear_shift(arg: &Lin) -> Option<i64> {
    if arg.has_ops() || arg.pure.degree() != Some(1) || !arg.pure.coeff(1).is_one() {
        return None;
    }
    let c = arg.pure.coeff(0);
    if !c.is_integer() {
        return None;
    }
    c.to_integer().to_i64()
}

/// Parses a polynomial in `var`, e.g. `"1 - t + 0*t^2"` or `"(n-1)^2"`.
pub fn parse_poly(src: &str, var: &str) -> Result<Poly> {
    let mut p = Parser::new(src, Mode::Poly, var)?;
    let lin = p.expr()?;
    p.finish()?;
    Ok(lin.pure)
}

/// Coefficients `q_j(t)` of `sum_j q_j(t) D^j`, indexed by `j`.
pub fn parse_ode(src: &str) -> Result<Vec<Poly>> {
    let mut p = Parser::new(src, Mode::Ode, "t")?;
    let lin = p.equation()?;
    p.finish()?;
    let mut ops = lin.ops;
    let e = ops.entry(0).or_default();
    *e = &*e + &lin.pure;
    let order = ops
        .iter()
        .filter(|(_, q)| !q.is_zero())
        .map(|(&k, _)| k)
        .max();
    let Some(order) = order else {
        return Err(Error::ZeroOperator);
    };
    Ok((0..=order)
        .map(|j| ops.get(&j).cloned().unwrap_or_default())
        .collect())
}

/// A parsed recurrence `sum_s c_s(n) a(n+s) = 0`, keyed by the shift `s`,
/// with the optional `for n >= k` bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedRecurrence {
    pub by_shift: BTreeMap<i64, Poly>,
    pub n_min: Option<i64>,
}

pub fn parse_recurrence(src: &str) -> Result<ParsedRecurrence> {
    let mut p = Parser::new(src, Mode::Rec, "n")?;
    let lin = p.equation()?;
    let n_min = p.for_clause()?;
    p.finish()?;
    if !lin.pure.is_zero() {
        return Err(Error::Parse {
            pos: 0,
            msg: "inhomogeneous term: every summand must contain a(.)".into(),
        });
    }
    let by_shift: BTreeMap<i64, Poly> =
        lin.ops.into_iter().filter(|(_, q)| !q.is_zero()).collect();
    if by_shift.is_empty() {
        return Err(Error::ZeroOperator);
    }
    Ok(ParsedRecurrence { by_shift, n_min })
}

/// Shared sign-aware rendering: `" - "`/`" + "` separators and a leading `-`.
pub(crate) fn push_signed(out: &mut String, negative: bool) {
    match (out.is_empty(), negative) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
}
