//! Expression grammar for table entries:
//!
//! ```text
//! sum     := ['-'] tensor (('+' | '-') tensor)*
//! tensor  := product ('ox' product)*
//! product := power ('*' power)*
//! power   := atom ['^' integer]
//! atom    := rational | name | 'lambda' | 'd' '(' sum ')' | '(' sum ')'
//! ```

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::diffalg::{d, d_tensor, DerivationTable, LambdaPoly};
use crate::ncpoly::{GenSym, NCPoly, TensorPoly};
use crate::scalar::{q, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let num: String = chars[start..i].iter().collect();
            let mut val = Q::from_integer(num.parse().expect("digits"));
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                let s2 = i + 1;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let den: String = chars[s2..i].iter().collect();
                let den = Q::from_integer(den.parse().expect("digits"));
                if den.is_zero() {
                    return Err(ExprError { col, msg: "zero denominator".into() });
                }
                val /= den;
            }
            out.push((col, Tok::Num(val)));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((col, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*^()⊗".contains(c) {
            out.push((col, if c == '⊗' { Tok::Ident("ox".into()) } else { Tok::Op(c) }));
            i += 1;
        } else {
            return Err(ExprError { col, msg: format!("unexpected character `{}`", c) });
        }
    }
    Ok(out)
}

/// A parsed value: tensors of a fixed rank, keyed by λ-degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Val {
    pub rank: usize,
    pub parts: BTreeMap<u32, TensorPoly>,
}

impl Val {
    fn scalar(c: Q, lambda: u32) -> Val {
        let mut parts = BTreeMap::new();
        parts.insert(lambda, TensorPoly::from_poly(&NCPoly::constant(c)));
        Val { rank: 1, parts }
    }

    fn poly(p: NCPoly) -> Val {
        let mut parts = BTreeMap::new();
        parts.insert(0, TensorPoly::from_poly(&p));
        Val { rank: 1, parts }
    }

    fn is_scalar(&self) -> bool {
        self.rank == 1 && self.parts.values().all(|t| t.terms().all(|(ws, _)| ws[0].is_empty()))
    }

    fn clean(mut self) -> Val {
        self.parts.retain(|_, t| !t.is_zero());
        self
    }

    pub fn lambda_degree(&self) -> u32 {
        self.parts.keys().next_back().copied().unwrap_or(0)
    }

    /// λ-free rank-1 value.
    pub fn into_poly(self) -> Result<NCPoly, String> {
        if self.rank != 1 {
            return Err(format!("expected an element, found a rank-{} tensor", self.rank));
        }
        if self.lambda_degree() > 0 {
            return Err("lambda is not allowed here".into());
        }
        Ok(self.parts.get(&0).map(|t| t.to_poly().expect("rank 1")).unwrap_or_else(NCPoly::zero))
    }

    /// λ-free rank-2 value.
    pub fn into_tensor(self) -> Result<TensorPoly, String> {
        if self.lambda_degree() > 0 {
            return Err("lambda is not allowed here".into());
        }
        self.into_lambda().map(|l| l.coeff([0, 0]))
    }

    /// Rank-2 value as a polynomial in λ; zero is accepted at any rank.
    pub fn into_lambda(self) -> Result<LambdaPoly, String> {
        let v = self.clean();
        if v.parts.is_empty() {
            return Ok(LambdaPoly::zero(2));
        }
        if v.rank != 2 {
            return Err(format!("expected a two-fold tensor (use `ox`), found rank {}", v.rank));
        }
        let mut out = LambdaPoly::zero(2);
        for (k, t) in v.parts {
            out.add_coeff([k, 0], &t);
        }
        Ok(out)
    }
}

fn combine(a: &Val, b: &Val, sign: i64) -> Result<Val, String> {
    let (a, b) = (a.clone().clean(), b.clone().clean());
    if a.parts.is_empty() {
        let mut b = b;
        for t in b.parts.values_mut() {
            *t = t.scale(&q(sign));
        }
        return Ok(b);
    }
    if b.parts.is_empty() {
        return Ok(a);
    }
    if a.rank != b.rank {
        return Err(format!("cannot add tensors of rank {} and {}", a.rank, b.rank));
    }
    let mut out = a;
    for (k, t) in b.parts {
        let slot = out.parts.entry(k).or_insert_with(|| TensorPoly::zero(t.rank()));
        slot.add_scaled(&t, &q(sign));
    }
    Ok(out.clean())
}

fn mul(a: &Val, b: &Val) -> Result<Val, String> {
    let mut parts: BTreeMap<u32, TensorPoly> = BTreeMap::new();
    let rank;
    if a.rank == 1 && b.rank == 1 {
        rank = 1;
        for (k1, t1) in &a.parts {
            for (k2, t2) in &b.parts {
                let p = t1.to_poly().expect("rank 1").mul(&t2.to_poly().expect("rank 1"));
                parts.entry(k1 + k2).or_insert_with(|| TensorPoly::zero(1)).add_assign(&TensorPoly::from_poly(&p));
            }
        }
    } else if a.is_scalar() || b.is_scalar() {
        let (s, t) = if a.is_scalar() { (a, b) } else { (b, a) };
        rank = t.rank;
        for (k1, c) in &s.parts {
            let c = c.terms().next().map(|(_, c)| c.clone()).unwrap_or_else(Q::zero);
            for (k2, x) in &t.parts {
                parts.entry(k1 + k2).or_insert_with(|| TensorPoly::zero(rank)).add_scaled(x, &c);
            }
        }
    } else {
        return Err("only elements and scalars multiply; build tensors with `ox`".into());
    }
    Ok(Val { rank, parts }.clean())
}

fn otimes(a: &Val, b: &Val) -> Result<Val, String> {
    if a.rank + b.rank > crate::ncpoly::MAX_RANK {
        return Err("tensor rank too large".into());
    }
    let mut parts: BTreeMap<u32, TensorPoly> = BTreeMap::new();
    for (k1, t1) in &a.parts {
        for (k2, t2) in &b.parts {
            let t = t1.tensor(t2).map_err(|e| e.to_string())?;
            parts.entry(k1 + k2).or_insert_with(|| TensorPoly::zero(a.rank + b.rank)).add_assign(&t);
        }
    }
    Ok(Val { rank: a.rank + b.rank, parts }.clean())
}

pub struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    lookup: &'a dyn Fn(&str) -> Option<GenSym>,
    derivation: &'a DerivationTable,
}

pub fn parse_expr(
    src: &str,
    lookup: &dyn Fn(&str) -> Option<GenSym>,
    derivation: &DerivationTable,
) -> Result<Val, ExprError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.chars().count() + 1, lookup, derivation };
    if p.toks.is_empty() {
        return Err(ExprError { col: 1, msg: "empty expression".into() });
    }
    let v = p.sum()?;
    if let Some((col, t)) = p.toks.get(p.pos) {
        return Err(ExprError { col: *col, msg: format!("unexpected token {:?}", t) });
    }
    Ok(v)
}

impl Parser<'_> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(c, _)| *c).unwrap_or(self.end)
    }

    fn err<T>(&self, col: usize, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError { col, msg: msg.into() })
    }

    fn peek_op(&self, c: char) -> bool {
        matches!(self.toks.get(self.pos), Some((_, Tok::Op(o))) if *o == c)
    }

    fn peek_ident(&self, s: &str) -> bool {
        matches!(self.toks.get(self.pos), Some((_, Tok::Ident(i))) if i == s)
    }

    fn expect_op(&mut self, c: char) -> Result<(), ExprError> {
        if self.peek_op(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(self.col(), format!("expected `{}`", c))
        }
    }

    fn sum(&mut self) -> Result<Val, ExprError> {
        let col = self.col();
        let neg = self.peek_op('-');
        if neg {
            self.pos += 1;
        }
        let mut acc = self.tensor()?;
        if neg {
            acc = combine(&Val::scalar(Q::zero(), 0), &acc, -1).or_else(|m| self.err(col, m))?;
        }
        loop {
            let sign = if self.peek_op('+') {
                1
            } else if self.peek_op('-') {
                -1
            } else {
                return Ok(acc);
            };
            let col = self.col();
            self.pos += 1;
            let rhs = self.tensor()?;
            acc = combine(&acc, &rhs, sign).or_else(|m| self.err(col, m))?;
        }
    }

    fn tensor(&mut self) -> Result<Val, ExprError> {
        let mut acc = self.product()?;
        while self.peek_ident("ox") {
            let col = self.col();
            self.pos += 1;
            let rhs = self.product()?;
            acc = otimes(&acc, &rhs).or_else(|m| self.err(col, m))?;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Val, ExprError> {
        let mut acc = self.power()?;
        while self.peek_op('*') {
            let col = self.col();
            self.pos += 1;
            let rhs = self.power()?;
            acc = mul(&acc, &rhs).or_else(|m| self.err(col, m))?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Val, ExprError> {
        let base = self.atom()?;
        if !self.peek_op('^') {
            return Ok(base);
        }
        self.pos += 1;
        let col = self.col();
        let k = match self.toks.get(self.pos) {
            Some((_, Tok::Num(n))) if n.is_integer() && *n >= Q::zero() && *n <= q(64) => {
                n.to_integer().to_string().parse::<u32>().expect("small")
            }
            _ => return self.err(col, "exponent must be a small nonnegative integer"),
        };
        self.pos += 1;
        let mut acc = Val::scalar(Q::one(), 0);
        for _ in 0..k {
            acc = mul(&acc, &base).or_else(|m| self.err(col, m))?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Val, ExprError> {
        let col = self.col();
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return self.err(col, "unexpected end of expression");
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Val::scalar(n, 0)),
            Tok::Op('(') => {
                let v = self.sum()?;
                self.expect_op(')')?;
                Ok(v)
            }
            Tok::Ident(name) if name == "lambda" || name == "λ" => Ok(Val::scalar(Q::one(), 1)),
            Tok::Ident(name) if name == "d" && self.peek_op('(') => {
                self.pos += 1;
                let v = self.sum()?;
                self.expect_op(')')?;
                self.derive(v, col)
            }
            Tok::Ident(name) if name == "ox" => self.err(col, "`ox` needs a left operand"),
            Tok::Ident(name) => match (self.lookup)(&name) {
                Some(g) => Ok(Val::poly(NCPoly::sym(g))),
                None => self.err(col, format!("unknown generator `{}`", name)),
            },
            Tok::Op(c) => self.err(col, format!("unexpected `{}`", c)),
        }
    }

    fn derive(&self, v: Val, col: usize) -> Result<Val, ExprError> {
        let mut parts = BTreeMap::new();
        for (k, t) in v.parts {
            let dt = if v.rank == 1 {
                d(&t.to_poly().expect("rank 1"), self.derivation).map(|p| TensorPoly::from_poly(&p))
            } else {
                d_tensor(&t, self.derivation)
            };
            parts.insert(k, dt.map_err(|e| ExprError { col, msg: e.to_string() })?);
        }
        Ok(Val { rank: v.rank, parts }.clean())
    }
}
