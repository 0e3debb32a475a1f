//! Free noncommutative polynomials over ℚ, tensors of rank 1..=3 and the
//! bimodule actions between them.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{fmt_q, Q};

pub const MAX_RANK: usize = 3;

fn interner() -> &'static Mutex<HashSet<&'static str>> {
    static NAMES: OnceLock<Mutex<HashSet<&'static str>>> = OnceLock::new();
    NAMES.get_or_init(|| Mutex::new(HashSet::new()))
}

/// Interns a generator name. Names live for the whole process; there are only
/// ever a handful of them.
pub fn intern(name: &str) -> &'static str {
    let mut set = interner().lock().unwrap_or_else(|e| e.into_inner());
    if let Some(s) = set.get(name) {
        return s;
    }
    let leaked: &'static str = Box::leak(name.to_string().into_boxed_str());
    set.insert(leaked);
    leaked
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    A,
    E,
}

impl Sort {
    pub fn base_weight(self) -> u32 {
        match self {
            Sort::A => 0,
            Sort::E => 1,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::A => "A",
            Sort::E => "E",
        })
    }
}

/// A generator symbol, possibly a jet `e^(k)` of an E-generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GenSym {
    pub name: &'static str,
    pub sort: Sort,
    pub jet: u32,
}

impl GenSym {
    pub fn a(name: &str) -> GenSym {
        GenSym { name: intern(name), sort: Sort::A, jet: 0 }
    }

    pub fn e(name: &str) -> GenSym {
        GenSym { name: intern(name), sort: Sort::E, jet: 0 }
    }

    pub fn new(name: &str, sort: Sort) -> GenSym {
        GenSym { name: intern(name), sort, jet: 0 }
    }

    pub fn weight(&self) -> u32 {
        self.sort.base_weight() + self.jet
    }

    pub fn base(&self) -> GenSym {
        GenSym { jet: 0, ..*self }
    }

    /// The k-th jet. Only E-generators carry jets.
    pub fn jet(&self, k: u32) -> Result<GenSym> {
        if self.sort == Sort::A && self.jet + k > 0 {
            return Err(Error::Weight(format!("A-generator `{}` cannot carry a jet", self.name)));
        }
        Ok(GenSym { jet: self.jet + k, ..*self })
    }
}

impl PartialOrd for GenSym {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GenSym {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name
            .cmp(other.name)
            .then(self.jet.cmp(&other.jet))
            .then(self.sort.cmp(&other.sort))
    }
}

impl fmt::Display for GenSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.jet {
            f.write_str("d(")?;
        }
        f.write_str(self.name)?;
        for _ in 0..self.jet {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A monomial; the empty word is the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    syms: Vec<GenSym>,
    weight: u32,
}

impl Word {
    pub fn one() -> Word {
        Word::default()
    }

    pub fn from_syms(syms: Vec<GenSym>) -> Word {
        let weight = syms.iter().map(GenSym::weight).sum();
        Word { syms, weight }
    }

    pub fn sym(s: GenSym) -> Word {
        Word::from_syms(vec![s])
    }

    pub fn syms(&self) -> &[GenSym] {
        &self.syms
    }

    pub fn len(&self) -> usize {
        self.syms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syms.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut syms = Vec::with_capacity(self.len() + other.len());
        syms.extend_from_slice(&self.syms);
        syms.extend_from_slice(&other.syms);
        Word { syms, weight: self.weight + other.weight }
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word::from_syms(self.syms[from..to].to_vec())
    }

    /// Position of the unique E-sort factor, if there is exactly one.
    pub fn e_position(&self) -> Option<usize> {
        let mut found = None;
        for (i, s) in self.syms.iter().enumerate() {
            if s.sort == Sort::E {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .cmp(&other.weight)
            .then(self.syms.len().cmp(&other.syms.len()))
            .then_with(|| self.syms.cmp(&other.syms))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syms.is_empty() {
            return f.write_str("1");
        }
        let mut i = 0;
        let mut first = true;
        while i < self.syms.len() {
            let s = self.syms[i];
            let mut run = 1;
            while i + run < self.syms.len() && self.syms[i + run] == s {
                run += 1;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{}^{}", s, run)?;
            } else {
                write!(f, "{}", s)?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Finite ℚ-linear combination with canonical (sorted, zero-free) storage.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, Q>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Collects raw terms, merging duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (K, Q)>>(it: I) -> Self {
        let mut out = Self::new();
        for (k, c) in it {
            out.add_term(k, c);
        }
        out
    }

    pub fn add_term(&mut self, k: K, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: &K) -> Q {
        self.terms.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scaled(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        LinComb { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn into_terms(self) -> BTreeMap<K, Q> {
        self.terms
    }
}

/// Element of the free algebra on the declared generators (and E-jets).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct NCPoly {
    lc: LinComb<Word>,
}

impl NCPoly {
    pub fn zero() -> NCPoly {
        NCPoly::default()
    }

    pub fn one() -> NCPoly {
        NCPoly::word(Word::one())
    }

    pub fn constant(c: Q) -> NCPoly {
        NCPoly::from_terms([(Word::one(), c)])
    }

    pub fn word(w: Word) -> NCPoly {
        NCPoly::from_terms([(w, Q::one())])
    }

    pub fn sym(s: GenSym) -> NCPoly {
        NCPoly::word(Word::sym(s))
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Q)>>(it: I) -> NCPoly {
        NCPoly { lc: LinComb::from_terms(it) }
    }

    pub fn is_zero(&self) -> bool {
        self.lc.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.lc.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.lc.len()
    }

    pub fn coeff(&self, w: &Word) -> Q {
        self.lc.coeff(w)
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        self.lc.add_term(w, c);
    }

    pub fn add_assign(&mut self, other: &NCPoly) {
        self.lc.add_scaled(&other.lc, &Q::one());
    }

    pub fn add_scaled(&mut self, other: &NCPoly, c: &Q) {
        self.lc.add_scaled(&other.lc, c);
    }

    pub fn scale(&self, c: &Q) -> NCPoly {
        NCPoly { lc: self.lc.scaled(c) }
    }

    pub fn neg(&self) -> NCPoly {
        self.scale(&-Q::one())
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub fn mul(&self, other: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> NCPoly {
        let mut out = NCPoly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Multiply every word by `w` on the left.
    pub fn lmul_word(&self, w: &Word) -> NCPoly {
        NCPoly::from_terms(self.terms().map(|(u, c)| (w.concat(u), c.clone())))
    }

    pub fn rmul_word(&self, w: &Word) -> NCPoly {
        NCPoly::from_terms(self.terms().map(|(u, c)| (u.concat(w), c.clone())))
    }

    /// The common weight of all terms, `None` if inhomogeneous. Zero is
    /// homogeneous of every weight and reports `Some(0)`.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut it = self.terms().map(|(w, _)| w.weight());
        let first = match it.next() {
            None => return Some(0),
            Some(w) => w,
        };
        if it.all(|w| w == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn is_homogeneous_of(&self, weight: u32) -> bool {
        self.terms().all(|(w, _)| w.weight() == weight)
    }

    pub fn max_jet(&self) -> u32 {
        self.terms().flat_map(|(w, _)| w.syms().iter().map(|s| s.jet)).max().unwrap_or(0)
    }

    pub fn symbols(&self) -> Vec<GenSym> {
        let mut v: Vec<GenSym> = self.terms().flat_map(|(w, _)| w.syms().to_vec()).collect();
        v.sort();
        v.dedup();
        v
    }
}

fn write_terms<'a, I, F>(f: &mut fmt::Formatter<'_>, terms: I, mut body: F) -> fmt::Result
where
    I: Iterator<Item = (&'a Q, bool)>,
    F: FnMut(&mut fmt::Formatter<'_>, usize) -> fmt::Result,
{
    let mut any = false;
    for (idx, (c, unit_body)) in terms.enumerate() {
        let neg = *c < Q::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        if any {
            f.write_str(if neg { " - " } else { " + " })?;
        } else if neg {
            f.write_str("-")?;
        }
        any = true;
        if abs.is_one() {
            if unit_body {
                f.write_str("1")?;
            } else {
                body(f, idx)?;
            }
        } else {
            f.write_str(&fmt_q(&abs))?;
            if !unit_body {
                f.write_str("*")?;
                body(f, idx)?;
            }
        }
    }
    if !any {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<&Word> = self.terms().map(|(w, _)| w).collect();
        write_terms(f, self.terms().map(|(w, c)| (c, w.is_empty())), |f, i| write!(f, "{}", words[i]))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Element of a tensor power of the free algebra, rank 1..=3.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorPoly {
    rank: usize,
    lc: LinComb<Vec<Word>>,
}

impl TensorPoly {
    pub fn zero(rank: usize) -> TensorPoly {
        assert!((1..=MAX_RANK).contains(&rank), "tensor rank {} unsupported", rank);
        TensorPoly { rank, lc: LinComb::new() }
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<Word>, Q)>>(rank: usize, it: I) -> TensorPoly {
        let mut t = TensorPoly::zero(rank);
        for (ws, c) in it {
            t.add_term(ws, c);
        }
        t
    }

    pub fn pure(words: Vec<Word>, c: Q) -> TensorPoly {
        let rank = words.len();
        TensorPoly::from_terms(rank, [(words, c)])
    }

    /// The unit tensor 1⊗…⊗1.
    pub fn unit(rank: usize) -> TensorPoly {
        TensorPoly::pure(vec![Word::one(); rank], Q::one())
    }

    /// p₁ ⊗ … ⊗ pₙ.
    pub fn product(polys: &[&NCPoly]) -> TensorPoly {
        let rank = polys.len();
        let mut acc: Vec<(Vec<Word>, Q)> = vec![(Vec::new(), Q::one())];
        for p in polys {
            let mut next = Vec::new();
            for (ws, c) in &acc {
                for (w, d) in p.terms() {
                    let mut ws2 = ws.clone();
                    ws2.push(w.clone());
                    next.push((ws2, c * d));
                }
            }
            acc = next;
        }
        TensorPoly::from_terms(rank, acc)
    }

    pub fn from_poly(p: &NCPoly) -> TensorPoly {
        TensorPoly::from_terms(1, p.terms().map(|(w, c)| (vec![w.clone()], c.clone())))
    }

    /// Rank-1 tensor viewed as a polynomial.
    pub fn to_poly(&self) -> Result<NCPoly> {
        if self.rank != 1 {
            return Err(Error::RankMismatch(format!("expected rank 1, found {}", self.rank)));
        }
        Ok(NCPoly::from_terms(self.terms().map(|(ws, c)| (ws[0].clone(), c.clone()))))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.lc.is_zero()
    }

    pub fn num_terms(&self) -> usize {
        self.lc.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &Q)> {
        self.lc.iter()
    }

    pub fn coeff(&self, ws: &[Word]) -> Q {
        self.lc.coeff(&ws.to_vec())
    }

    pub fn add_term(&mut self, ws: Vec<Word>, c: Q) {
        assert_eq!(ws.len(), self.rank, "tensor term of wrong rank");
        self.lc.add_term(ws, c);
    }

    pub fn add_assign(&mut self, other: &TensorPoly) {
        assert_eq!(self.rank, other.rank, "mixed-rank tensor addition");
        self.lc.add_scaled(&other.lc, &Q::one());
    }

    pub fn add_scaled(&mut self, other: &TensorPoly, c: &Q) {
        assert_eq!(self.rank, other.rank, "mixed-rank tensor addition");
        self.lc.add_scaled(&other.lc, c);
    }

    pub fn checked_add(&self, other: &TensorPoly) -> Result<TensorPoly> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(format!("cannot add rank {} and rank {}", self.rank, other.rank)));
        }
        Ok(self.add(other))
    }

    pub fn add(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub fn scale(&self, c: &Q) -> TensorPoly {
        TensorPoly { rank: self.rank, lc: self.lc.scaled(c) }
    }

    pub fn neg(&self) -> TensorPoly {
        self.scale(&-Q::one())
    }

    /// Weights of the individual slots if every term agrees on them.
    pub fn slot_weights(&self) -> Option<Vec<u32>> {
        let mut it = self.terms().map(|(ws, _)| ws.iter().map(Word::weight).collect::<Vec<_>>());
        let first = it.next()?;
        if it.all(|w| w == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn total_weights(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms().map(|(ws, _)| ws.iter().map(Word::weight).sum()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Keeps only terms whose slot weights satisfy `keep`.
    pub fn filter_slots<F: Fn(&[u32]) -> bool>(&self, keep: F) -> TensorPoly {
        let mut out = TensorPoly::zero(self.rank);
        for (ws, c) in self.terms() {
            let wts: Vec<u32> = ws.iter().map(Word::weight).collect();
            if keep(&wts) {
                out.add_term(ws.clone(), c.clone());
            }
        }
        out
    }

    /// Multiplies slot `slot` (0-based) by `a` from the given side.
    pub fn mul_slot(&self, slot: usize, a: &NCPoly, side: Side) -> Result<TensorPoly> {
        if slot >= self.rank {
            return Err(Error::SlotOutOfRange { index: slot, rank: self.rank });
        }
        let mut out = TensorPoly::zero(self.rank);
        for (ws, c) in self.terms() {
            for (w, d) in a.terms() {
                let mut ws2 = ws.clone();
                ws2[slot] = match side {
                    Side::Left => w.concat(&ws[slot]),
                    Side::Right => ws[slot].concat(w),
                };
                out.add_term(ws2, c * d);
            }
        }
        Ok(out)
    }

    /// The `*_i` action: the left action multiplies slot i+1 from the left,
    /// the right action multiplies slot rank−i from the right (1-based).
    pub fn star(&self, a: &NCPoly, i: usize, side: Side) -> Result<TensorPoly> {
        if i >= self.rank {
            return Err(Error::SlotOutOfRange { index: i, rank: self.rank });
        }
        match side {
            Side::Left => self.mul_slot(i, a, Side::Left),
            Side::Right => self.mul_slot(self.rank - 1 - i, a, Side::Right),
        }
    }

    /// Tensor product of two tensors, ranks adding.
    pub fn tensor(&self, other: &TensorPoly) -> Result<TensorPoly> {
        let rank = self.rank + other.rank;
        if rank > MAX_RANK {
            return Err(Error::RankMismatch(format!("tensor rank {} exceeds {}", rank, MAX_RANK)));
        }
        let mut out = TensorPoly::zero(rank);
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                let mut ws = u.clone();
                ws.extend(v.iter().cloned());
                out.add_term(ws, a * b);
            }
        }
        Ok(out)
    }

    pub fn apply_sigma(&self, s: &Perm) -> Result<TensorPoly> {
        if s.size() != self.rank {
            return Err(Error::PermSize { perm: s.size(), rank: self.rank });
        }
        let mut out = TensorPoly::zero(self.rank);
        for (ws, c) in self.terms() {
            let mut moved = vec![Word::one(); self.rank];
            for (i, w) in ws.iter().enumerate() {
                moved[s.image(i)] = w.clone();
            }
            out.add_term(moved, c.clone());
        }
        Ok(out)
    }

    /// Rank-2 swap a⊗b ↦ b⊗a.
    pub fn swap(&self) -> TensorPoly {
        self.apply_sigma(&Perm::transposition()).expect("swap requires rank 2")
    }

    /// Applies `f` to every term (words, coefficient) and sums the results,
    /// which must all have rank `rank`.
    pub fn flat_map<F>(&self, rank: usize, mut f: F) -> Result<TensorPoly>
    where
        F: FnMut(&[Word], &Q) -> Result<TensorPoly>,
    {
        let mut out = TensorPoly::zero(rank);
        for (ws, c) in self.terms() {
            let t = f(ws, c)?;
            if t.rank != rank {
                return Err(Error::RankMismatch(format!("expected rank {}, found {}", rank, t.rank)));
            }
            out.add_assign(&t);
        }
        Ok(out)
    }
}

/// The jump insertion ⊗₁: x ⊗₁ (y⊗z) = y⊗x⊗z and (x⊗y) ⊗₁ z = x⊗z⊗y.
pub fn otimes1(x: &TensorPoly, y: &TensorPoly) -> Result<TensorPoly> {
    match (x.rank(), y.rank()) {
        (1, 2) => {
            let mut out = TensorPoly::zero(3);
            for (a, c) in x.terms() {
                for (bc, d) in y.terms() {
                    out.add_term(vec![bc[0].clone(), a[0].clone(), bc[1].clone()], c * d);
                }
            }
            Ok(out)
        }
        (2, 1) => {
            let mut out = TensorPoly::zero(3);
            for (ab, c) in x.terms() {
                for (z, d) in y.terms() {
                    out.add_term(vec![ab[0].clone(), z[0].clone(), ab[1].clone()], c * d);
                }
            }
            Ok(out)
        }
        (r, s) => Err(Error::RankMismatch(format!(
            "jump insertion needs ranks (1,2) or (2,1), found ({}, {})",
            r, s
        ))),
    }
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let keys: Vec<&Vec<Word>> = self.terms().map(|(ws, _)| ws).collect();
        let unit = |ws: &Vec<Word>| ws.len() == 1 && ws[0].is_empty();
        write_terms(f, self.terms().map(|(ws, c)| (c, unit(ws))), |f, i| {
            let parts: Vec<String> = keys[i].iter().map(|w| w.to_string()).collect();
            f.write_str(&parts.join(" ox "))
        })
    }
}

/// A permutation of {0..n}, stored as its images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm {
    img: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm { img: (0..n).collect() }
    }

    pub fn from_images(img: Vec<usize>) -> Result<Perm> {
        let mut seen = vec![false; img.len()];
        for &i in &img {
            if i >= img.len() || seen[i] {
                return Err(Error::Index(format!("{:?} is not a permutation", img)));
            }
            seen[i] = true;
        }
        Ok(Perm { img })
    }

    /// Cycle notation with 1-based labels, e.g. `cycle(3, &[1, 2, 3])`.
    pub fn cycle(n: usize, labels: &[usize]) -> Perm {
        let mut img: Vec<usize> = (0..n).collect();
        for k in 0..labels.len() {
            let from = labels[k] - 1;
            let to = labels[(k + 1) % labels.len()] - 1;
            img[from] = to;
        }
        Perm { img }
    }

    pub fn transposition() -> Perm {
        Perm { img: vec![1, 0] }
    }

    pub fn size(&self) -> usize {
        self.img.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.img[i]
    }

    /// (self ∘ other)(i) = self(other(i)).
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm { img: other.img.iter().map(|&i| self.img[i]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.img.len()];
        for (i, &j) in self.img.iter().enumerate() {
            inv[j] = i;
        }
        Perm { img: inv }
    }

    pub fn all(n: usize) -> Vec<Perm> {
        fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Perm>) {
            if prefix.len() == n {
                out.push(Perm { img: prefix.clone() });
                return;
            }
            for i in 0..n {
                if !prefix.contains(&i) {
                    prefix.push(i);
                    rec(prefix, n, out);
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), n, &mut out);
        out
    }
}

pub fn sigma_123() -> Perm {
    Perm::cycle(3, &[1, 2, 3])
}

pub fn sigma_132() -> Perm {
    Perm::cycle(3, &[1, 3, 2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn x() -> NCPoly {
        NCPoly::sym(GenSym::a("x"))
    }

    fn w(p: &NCPoly) -> Word {
        p.terms().next().unwrap().0.clone()
    }

    #[test]
    fn difference_of_squares() {
        let a = x().sub(&NCPoly::one());
        let b = x().add(&NCPoly::one());
        let expect = x().mul(&x()).sub(&NCPoly::one());
        assert_eq!(a.mul(&b), expect);
    }

    #[test]
    fn star_actions() {
        let (a, b, c) = (GenSym::a("a"), GenSym::a("b"), GenSym::a("c"));
        let t = TensorPoly::pure(vec![Word::sym(b), Word::sym(c)], q(1));
        let pa = NCPoly::sym(a);
        let l0 = t.star(&pa, 0, Side::Left).unwrap();
        assert_eq!(l0, TensorPoly::pure(vec![Word::from_syms(vec![a, b]), Word::sym(c)], q(1)));
        let l1 = t.star(&pa, 1, Side::Left).unwrap();
        assert_eq!(l1, TensorPoly::pure(vec![Word::sym(b), Word::from_syms(vec![a, c])], q(1)));
        assert_eq!(t.star(&NCPoly::one(), 0, Side::Left).unwrap(), t);
        assert!(t.star(&pa, 2, Side::Left).is_err());
    }

    #[test]
    fn jump_insertion() {
        let (xx, y, z) = (Word::sym(GenSym::a("x")), Word::sym(GenSym::a("y")), Word::sym(GenSym::a("z")));
        let a = TensorPoly::pure(vec![xx.clone()], q(1));
        let yz = TensorPoly::pure(vec![y.clone(), z.clone()], q(1));
        assert_eq!(otimes1(&a, &yz).unwrap(), TensorPoly::pure(vec![y.clone(), xx.clone(), z.clone()], q(1)));
        let xy = TensorPoly::pure(vec![xx.clone(), y.clone()], q(1));
        let zz = TensorPoly::pure(vec![z.clone()], q(1));
        assert_eq!(otimes1(&xy, &zz).unwrap(), TensorPoly::pure(vec![xx, z, y], q(1)));
        assert!(otimes1(&TensorPoly::zero(1), &yz).unwrap().is_zero());
        assert!(otimes1(&yz, &yz).is_err());
    }

    #[test]
    fn sigma_examples() {
        let (a, b, c) = (Word::sym(GenSym::a("a")), Word::sym(GenSym::a("b")), Word::sym(GenSym::a("c")));
        let t = TensorPoly::pure(vec![a.clone(), b.clone(), c.clone()], q(1));
        assert_eq!(t.apply_sigma(&sigma_123()).unwrap(), TensorPoly::pure(vec![c, a.clone(), b.clone()], q(1)));
        let ab = TensorPoly::pure(vec![a.clone(), b.clone()], q(1));
        assert_eq!(ab.swap(), TensorPoly::pure(vec![b, a], q(1)));
        assert!(t.apply_sigma(&Perm::transposition()).is_err());
    }

    #[test]
    fn canonical_order_and_display() {
        let p = x().mul(&x()).add(&x()).add(&NCPoly::constant(q(-2)));
        assert_eq!(p.to_string(), "-2 + x + x^2");
        let e = GenSym::e("e");
        let ej = e.jet(2).unwrap();
        assert_eq!(Word::sym(ej).weight(), 3);
        assert_eq!(ej.to_string(), "d(d(e))");
        assert!(GenSym::a("x").jet(1).is_err());
        assert_eq!(w(&x()).to_string(), "x");
    }
}
