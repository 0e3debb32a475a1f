//! The derivation ∂ on the free differential algebra and polynomials in the
//! formal variables λ, μ with tensor coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ncpoly::{otimes1, GenSym, NCPoly, Perm, Side, Sort, TensorPoly, Word};
use crate::scalar::{binom, sign_pow, Q};

pub const DEFAULT_LAMBDA_CAP: u32 = 8;

/// Images ∂a of the A-generators. Jets of A-generators are never stored;
/// ∂a is always replaced by its image.
#[derive(Default)]
pub struct DerivationTable {
    images: BTreeMap<&'static str, NCPoly>,
    memo: Mutex<HashMap<(Word, u32), NCPoly>>,
}

impl Clone for DerivationTable {
    fn clone(&self) -> Self {
        DerivationTable { images: self.images.clone(), memo: Mutex::new(HashMap::new()) }
    }
}

impl PartialEq for DerivationTable {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
    }
}

impl fmt::Debug for DerivationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.images.iter().map(|(k, v)| (k, v.to_string()))).finish()
    }
}

impl DerivationTable {
    pub fn new() -> DerivationTable {
        DerivationTable::default()
    }

    /// Sets ∂a. The image must be a weight-1 element built from jet-0 symbols.
    pub fn set(&mut self, a: GenSym, image: NCPoly) -> Result<()> {
        if a.sort != Sort::A || a.jet != 0 {
            return Err(Error::Weight(format!("derivation key `{}` is not an A-generator", a)));
        }
        if !image.is_homogeneous_of(1) {
            return Err(Error::Weight(format!("image of `{}` is not of weight 1: {}", a, image)));
        }
        if image.max_jet() > 0 {
            return Err(Error::Weight(format!("image of `{}` contains jet symbols", a)));
        }
        self.images.insert(a.name, image);
        self.memo.lock().unwrap_or_else(|e| e.into_inner()).clear();
        Ok(())
    }

    pub fn get(&self, a: &GenSym) -> Option<&NCPoly> {
        self.images.get(a.name)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&&'static str, &NCPoly)> {
        self.images.iter()
    }

    fn image_of(&self, s: &GenSym) -> Result<NCPoly> {
        match s.sort {
            Sort::E => Ok(NCPoly::sym(s.jet(1)?)),
            Sort::A => self.images.get(s.name).cloned().ok_or_else(|| Error::MissingDerivation(s.name.to_string())),
        }
    }

    fn d_word(&self, w: &Word) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        let syms = w.syms();
        for i in 0..syms.len() {
            let img = self.image_of(&syms[i])?;
            let pre = w.slice(0, i);
            let post = w.slice(i + 1, syms.len());
            for (u, c) in img.terms() {
                out.add_term(pre.concat(u).concat(&post), c.clone());
            }
        }
        Ok(out)
    }

    /// ∂^k of a single word, memoized.
    pub fn d_word_pow(&self, w: &Word, k: u32) -> Result<NCPoly> {
        if k == 0 {
            return Ok(NCPoly::word(w.clone()));
        }
        if w.is_empty() {
            return Ok(NCPoly::zero());
        }
        let key = (w.clone(), k);
        if let Some(p) = self.memo.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
            return Ok(p.clone());
        }
        let prev = self.d_word_pow(w, k - 1)?;
        let mut out = NCPoly::zero();
        for (u, c) in prev.terms() {
            out.add_scaled(&self.d_word(u)?, c);
        }
        self.memo.lock().unwrap_or_else(|e| e.into_inner()).insert(key, out.clone());
        Ok(out)
    }
}

pub fn d(p: &NCPoly, table: &DerivationTable) -> Result<NCPoly> {
    d_pow(p, 1, table)
}

pub fn d_pow(p: &NCPoly, k: u32, table: &DerivationTable) -> Result<NCPoly> {
    let mut out = NCPoly::zero();
    for (w, c) in p.terms() {
        out.add_scaled(&table.d_word_pow(w, k)?, c);
    }
    Ok(out)
}

/// Total derivative of a tensor: ∂ applied to each slot in turn.
pub fn d_tensor(t: &TensorPoly, table: &DerivationTable) -> Result<TensorPoly> {
    d_tensor_pow(t, 1, table)
}

/// k-th power of the total derivative, expanded multinomially over the slots.
pub fn d_tensor_pow(t: &TensorPoly, k: u32, table: &DerivationTable) -> Result<TensorPoly> {
    if k == 0 {
        return Ok(t.clone());
    }
    let rank = t.rank();
    let splits = compositions(k, rank);
    t.flat_map(rank, |ws, c| {
        let mut out = TensorPoly::zero(rank);
        for parts in &splits {
            let mut coef = c.clone();
            let mut rest = k;
            for &p in parts {
                coef *= binom(rest, p);
                rest -= p;
            }
            let mut factors = Vec::with_capacity(rank);
            for (w, &p) in ws.iter().zip(parts) {
                factors.push(table.d_word_pow(w, p)?);
            }
            let refs: Vec<&NCPoly> = factors.iter().collect();
            out.add_scaled(&TensorPoly::product(&refs), &coef);
        }
        Ok(out)
    })
}

fn compositions(k: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in 0..=k {
        for mut rest in compositions(k - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Lambda,
    Mu,
}

impl Var {
    fn idx(self) -> usize {
        match self {
            Var::Lambda => 0,
            Var::Mu => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Lambda => "lambda",
            Var::Mu => "mu",
        }
    }
}

pub type Exp = [u32; 2];

/// Polynomial in λ, μ with tensor coefficients of a fixed rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LambdaPoly {
    rank: usize,
    coeffs: BTreeMap<Exp, TensorPoly>,
}

impl LambdaPoly {
    pub fn zero(rank: usize) -> LambdaPoly {
        LambdaPoly { rank, coeffs: BTreeMap::new() }
    }

    pub fn constant(t: TensorPoly) -> LambdaPoly {
        LambdaPoly::monomial(t, [0, 0])
    }

    pub fn monomial(t: TensorPoly, exp: Exp) -> LambdaPoly {
        let mut p = LambdaPoly::zero(t.rank());
        p.add_coeff(exp, &t);
        p
    }

    /// t₀ + t₁λ + t₂λ² + …
    pub fn in_lambda(parts: Vec<TensorPoly>) -> LambdaPoly {
        let rank = parts.first().map(TensorPoly::rank).unwrap_or(2);
        let mut p = LambdaPoly::zero(rank);
        for (i, t) in parts.iter().enumerate() {
            p.add_coeff([i as u32, 0], t);
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &TensorPoly)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, exp: Exp) -> TensorPoly {
        self.coeffs.get(&exp).cloned().unwrap_or_else(|| TensorPoly::zero(self.rank))
    }

    pub fn add_coeff(&mut self, exp: Exp, t: &TensorPoly) {
        assert_eq!(t.rank(), self.rank, "mixed-rank lambda polynomial");
        if t.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(|| TensorPoly::zero(t.rank()));
        entry.add_assign(t);
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn add_scaled_coeff(&mut self, exp: Exp, t: &TensorPoly, c: &Q) {
        if c.is_zero() {
            return;
        }
        self.add_coeff(exp, &t.scale(c));
    }

    pub fn add_assign(&mut self, other: &LambdaPoly) {
        assert_eq!(self.rank, other.rank, "mixed-rank lambda polynomial");
        for (e, t) in &other.coeffs {
            self.add_coeff(*e, t);
        }
    }

    pub fn add(&self, other: &LambdaPoly) -> LambdaPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &LambdaPoly) -> LambdaPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> LambdaPoly {
        let mut out = LambdaPoly::zero(self.rank);
        for (e, t) in &self.coeffs {
            out.add_coeff(*e, &t.scale(c));
        }
        out
    }

    pub fn neg(&self) -> LambdaPoly {
        self.scale(&-Q::one())
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.coeffs.keys().map(|e| e[v.idx()]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.coeffs.keys().map(|e| e[0] + e[1]).max().unwrap_or(0)
    }

    pub fn check_cap(&self, cap: u32) -> Result<()> {
        let degree = self.degree(Var::Lambda).max(self.degree(Var::Mu));
        if degree > cap {
            return Err(Error::LambdaCap { degree, cap });
        }
        Ok(())
    }

    pub fn mul_var_pow(&self, v: Var, k: u32) -> LambdaPoly {
        let mut out = LambdaPoly::zero(self.rank);
        for (e, t) in &self.coeffs {
            let mut e2 = *e;
            e2[v.idx()] += k;
            out.add_coeff(e2, t);
        }
        out
    }

    /// Multiplies by (λ+μ)^k.
    pub fn mul_lambda_plus_mu_pow(&self, k: u32) -> LambdaPoly {
        let mut out = LambdaPoly::zero(self.rank);
        for (e, t) in &self.coeffs {
            for i in 0..=k {
                out.add_scaled_coeff([e[0] + i, e[1] + k - i], t, &binom(k, i));
            }
        }
        out
    }

    /// Replaces λ^p by (λ+μ)^p; μ must not already occur.
    pub fn substitute_lambda_by_sum(&self) -> Result<LambdaPoly> {
        if self.degree(Var::Mu) > 0 {
            return Err(Error::Inconsistent("substitution λ ↦ λ+μ on a polynomial already in μ".into()));
        }
        let mut out = LambdaPoly::zero(self.rank);
        for (e, t) in &self.coeffs {
            out.add_assign(&LambdaPoly::constant(t.clone()).mul_lambda_plus_mu_pow(e[0]));
        }
        Ok(out)
    }

    pub fn map_coeffs<F>(&self, rank: usize, mut f: F) -> Result<LambdaPoly>
    where
        F: FnMut(&TensorPoly) -> Result<TensorPoly>,
    {
        let mut out = LambdaPoly::zero(rank);
        for (e, t) in &self.coeffs {
            out.add_coeff(*e, &f(t)?);
        }
        Ok(out)
    }

    pub fn apply_sigma(&self, s: &Perm) -> Result<LambdaPoly> {
        self.map_coeffs(self.rank, |t| t.apply_sigma(s))
    }

    pub fn star(&self, a: &NCPoly, i: usize, side: Side) -> Result<LambdaPoly> {
        self.map_coeffs(self.rank, |t| t.star(a, i, side))
    }

    /// The coefficient of λ⁰μ⁰ if the polynomial is constant.
    pub fn as_constant(&self) -> Option<TensorPoly> {
        if self.coeffs.keys().all(|e| *e == [0, 0]) {
            Some(self.coeff([0, 0]))
        } else {
            None
        }
    }
}

impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, t) in &self.coeffs {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mut vars = Vec::new();
            for (v, k) in [(Var::Lambda, e[0]), (Var::Mu, e[1])] {
                match k {
                    0 => {}
                    1 => vars.push(v.name().to_string()),
                    _ => vars.push(format!("{}^{}", v.name(), k)),
                }
            }
            if vars.is_empty() {
                write!(f, "({})", t)?;
            } else if t.num_terms() == 1 && t.terms().all(|(ws, c)| c.is_one() && ws.iter().all(Word::is_empty)) {
                let ones = vec!["1"; t.rank()].join(" ox ");
                write!(f, "{}*({})", vars.join("*"), ones)?;
            } else {
                write!(f, "{}*({})", vars.join("*"), t)?;
            }
        }
        Ok(())
    }
}

/// Substitutes `v ↦ a·v + b·∂` with ∂ acting on the whole coefficient as the
/// total derivative: Σ_p c_p (a v + b ∂)^p = Σ_{p,j} C(p,j) a^{p−j} b^j v^{p−j} ∂^j c_p.
pub fn shift(p: &LambdaPoly, v: Var, a: i32, b: i32, table: &DerivationTable) -> Result<LambdaPoly> {
    let sa = Q::from_integer(a.into());
    let sb = Q::from_integer(b.into());
    let mut out = LambdaPoly::zero(p.rank());
    for (e, t) in p.terms() {
        let deg = e[v.idx()];
        for j in 0..=deg {
            let coef = binom(deg, j) * pow_q(&sa, deg - j) * pow_q(&sb, j);
            if coef.is_zero() {
                continue;
            }
            let dt = d_tensor_pow(t, j, table)?;
            let mut e2 = *e;
            e2[v.idx()] = deg - j;
            out.add_scaled_coeff(e2, &dt, &coef);
        }
    }
    Ok(out)
}

fn pow_q(x: &Q, k: u32) -> Q {
    let mut acc = Q::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// Substitutes var ↦ sign·(var + ∂).
pub fn lambda_shift_total(p: &LambdaPoly, v: Var, sign: i32, table: &DerivationTable) -> Result<LambdaPoly> {
    shift(p, v, sign, sign, table)
}

/// Applies (λ+∂)^m with ∂ acting totally on the coefficients.
pub fn lambda_plus_d_pow(p: &LambdaPoly, m: u32, table: &DerivationTable) -> Result<LambdaPoly> {
    let mut out = LambdaPoly::zero(p.rank());
    for j in 0..=m {
        let dp = p.map_coeffs(p.rank(), |t| d_tensor_pow(t, j, table))?;
        out.add_assign(&dp.mul_var_pow(Var::Lambda, m - j).scale(&binom(m, j)));
    }
    Ok(out)
}

/// Multiplies by (−λ)^k.
pub fn minus_lambda_pow(p: &LambdaPoly, k: u32) -> LambdaPoly {
    p.mul_var_pow(Var::Lambda, k).scale(&sign_pow(k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertMode {
    /// (c′·∂^j b)⊗c″
    Star1,
    /// c′⊗∂^j b⊗c″
    Otimes1,
}

/// P(λ+∂)_→ with ∂ acting on the inserted element `b` only.
pub fn arrow_insert(p: &LambdaPoly, b: &NCPoly, mode: InsertMode, table: &DerivationTable) -> Result<LambdaPoly> {
    arrow_insert_var(p, b, mode, Var::Lambda, table)
}

pub fn arrow_insert_var(
    p: &LambdaPoly,
    b: &NCPoly,
    mode: InsertMode,
    v: Var,
    table: &DerivationTable,
) -> Result<LambdaPoly> {
    if p.rank() != 2 {
        return Err(Error::RankMismatch(format!("arrow insertion needs rank 2, found {}", p.rank())));
    }
    let out_rank = match mode {
        InsertMode::Star1 => 2,
        InsertMode::Otimes1 => 3,
    };
    let mut out = LambdaPoly::zero(out_rank);
    for (e, t) in p.terms() {
        let deg = e[v.idx()];
        for j in 0..=deg {
            let db = d_pow(b, j, table)?;
            if db.is_zero() {
                continue;
            }
            let inserted = match mode {
                InsertMode::Star1 => t.mul_slot(0, &db, Side::Right)?,
                InsertMode::Otimes1 => otimes1(t, &TensorPoly::from_poly(&db))?,
            };
            let mut e2 = *e;
            e2[v.idx()] = deg - j;
            out.add_scaled_coeff(e2, &inserted, &binom(deg, j));
        }
    }
    Ok(out)
}

/// (e^{∂∂_λ} a) *₁ P: Σ_j C(p,j) c′⊗((∂^j a)·c″) λ^{p−j}.
pub fn exp_partial_left(a: &NCPoly, p: &LambdaPoly, table: &DerivationTable) -> Result<LambdaPoly> {
    if p.rank() != 2 {
        return Err(Error::RankMismatch(format!("exp-partial insertion needs rank 2, found {}", p.rank())));
    }
    let mut out = LambdaPoly::zero(2);
    for (e, t) in p.terms() {
        let deg = e[0];
        for j in 0..=deg {
            let da = d_pow(a, j, table)?;
            if da.is_zero() {
                continue;
            }
            out.add_scaled_coeff([deg - j, e[1]], &t.mul_slot(1, &da, Side::Left)?, &binom(deg, j));
        }
    }
    Ok(out)
}
