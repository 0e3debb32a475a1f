//! Matrix-entry expansion on Rep_N and the commutative structures induced
//! there by double brackets, double λ-brackets and double Courant–Dorfman
//! structures.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::dcd::{check_cd_axioms, CdValue, DcdStructure};
use crate::diffalg::DerivationTable;
use crate::double_bracket::{check_double_jacobi, satisfies_convention, Convention, DoubleBracketTable};
use crate::dpva::{check_dpva, LambdaBracketTable};
use crate::error::{Error, Result};
use crate::ncpoly::{GenSym, LinComb, NCPoly, Sort, TensorPoly};
use crate::report::{Report, Tally};
use crate::sample::CheckOptions;
use crate::scalar::{binom, fmt_q, q, Q};

pub const MAX_N: usize = 3;

/// The (i, j) entry symbol of a generator, 1-based, possibly a jet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexedSym {
    pub base: GenSym,
    pub i: usize,
    pub j: usize,
    pub jet: u32,
}

impl IndexedSym {
    pub fn new(g: GenSym, i: usize, j: usize) -> IndexedSym {
        IndexedSym { base: g.base(), i, j, jet: g.jet }
    }

    pub fn sort(&self) -> Sort {
        self.base.sort
    }

    pub fn d(&self) -> IndexedSym {
        IndexedSym { jet: self.jet + 1, ..*self }
    }
}

impl fmt::Display for IndexedSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.jet {
            f.write_str("d(")?;
        }
        write!(f, "{}_{}{}", self.base.name, self.i, self.j)?;
        for _ in 0..self.jet {
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::Index(format!("N = {} is outside 1..={}", n, MAX_N)));
    }
    Ok(())
}

fn check_index(i: usize, j: usize, n: usize) -> Result<()> {
    check_n(n)?;
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::Index(format!("entry ({}, {}) out of range for N = {}", i, j, n)));
    }
    Ok(())
}

/// Commutative polynomial in entry symbols; monomials are sorted multisets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CPoly(LinComb<Vec<IndexedSym>>);

impl CPoly {
    pub fn zero() -> CPoly {
        CPoly::default()
    }

    pub fn one() -> CPoly {
        CPoly::constant(q(1))
    }

    pub fn constant(c: Q) -> CPoly {
        CPoly(LinComb::from_terms([(Vec::new(), c)]))
    }

    pub fn sym(s: IndexedSym) -> CPoly {
        CPoly(LinComb::from_terms([(vec![s], q(1))]))
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<IndexedSym>, Q)>>(it: I) -> CPoly {
        CPoly(LinComb::from_terms(it.into_iter().map(|(mut m, c)| {
            m.sort();
            (m, c)
        })))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<IndexedSym>, &Q)> {
        self.0.iter()
    }

    pub fn add_assign(&mut self, other: &CPoly) {
        self.0.add_scaled(&other.0, &q(1));
    }

    pub fn add_scaled(&mut self, other: &CPoly, c: &Q) {
        self.0.add_scaled(&other.0, c);
    }

    pub fn add(&self, other: &CPoly) -> CPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &CPoly) -> CPoly {
        let mut out = self.clone();
        out.add_scaled(other, &q(-1));
        out
    }

    pub fn scale(&self, c: &Q) -> CPoly {
        CPoly(self.0.scaled(c))
    }

    pub fn neg(&self) -> CPoly {
        self.scale(&q(-1))
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        let mut out = LinComb::new();
        for (m1, c1) in self.0.iter() {
            for (m2, c2) in other.0.iter() {
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                m.sort();
                out.add_term(m, c1 * c2);
            }
        }
        CPoly(out)
    }

    pub fn pow(&self, k: u32) -> CPoly {
        (0..k).fold(CPoly::one(), |acc, _| acc.mul(self))
    }

    /// Number of E-sort factors, if every monomial has the same count.
    pub fn e_degree(&self) -> Option<usize> {
        let mut degs = self.0.iter().map(|(m, _)| m.iter().filter(|s| s.sort() == Sort::E).count());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.0.iter() {
            let neg = *c < Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let body: Vec<String> = m.iter().map(|s| s.to_string()).collect();
            if m.is_empty() {
                f.write_str(&fmt_q(&abs))?;
            } else if abs.is_one() {
                f.write_str(&body.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_q(&abs), body.join("*"))?;
            }
        }
        Ok(())
    }
}

/// The (i, j) entry of any element, by matrix multiplication along each word.
pub fn entry(p: &NCPoly, i: usize, j: usize, n: usize) -> Result<CPoly> {
    check_index(i, j, n)?;
    let mut out = CPoly::zero();
    for (w, c) in p.terms() {
        let mut row: Vec<CPoly> = (1..=n).map(|t| if t == i { CPoly::one() } else { CPoly::zero() }).collect();
        for s in w.syms() {
            let mut next = vec![CPoly::zero(); n];
            for (t, v) in row.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                for (t2, slot) in next.iter_mut().enumerate() {
                    slot.add_assign(&v.mul(&CPoly::sym(IndexedSym::new(*s, t + 1, t2 + 1))));
                }
            }
            row = next;
        }
        out.add_scaled(&row[j - 1], c);
    }
    Ok(out)
}

/// (p)_{ij} for p of weight 0.
pub fn rep_entry(p: &NCPoly, i: usize, j: usize, n: usize) -> Result<CPoly> {
    if !p.is_homogeneous_of(0) {
        return Err(Error::Weight(format!("rep_entry needs weight 0, got {}", p)));
    }
    entry(p, i, j, n)
}

/// Element of E_N: a finite sum of E-entry symbols with A_N coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ENElement(BTreeMap<IndexedSym, CPoly>);

impl ENElement {
    pub fn zero() -> ENElement {
        ENElement::default()
    }

    pub fn sym(s: IndexedSym) -> ENElement {
        let mut m = BTreeMap::new();
        m.insert(s, CPoly::one());
        ENElement(m)
    }

    pub fn from_cpoly(p: &CPoly) -> Result<ENElement> {
        let mut out = ENElement::zero();
        for (m, c) in p.terms() {
            let es: Vec<usize> = (0..m.len()).filter(|&k| m[k].sort() == Sort::E).collect();
            if es.len() != 1 {
                return Err(Error::Weight(format!("{} is not linear in E-symbols", p)));
            }
            let mut rest = m.clone();
            let e = rest.remove(es[0]);
            out.add_term(e, &CPoly::from_terms([(rest, c.clone())]));
        }
        Ok(out)
    }

    pub fn to_cpoly(&self) -> CPoly {
        let mut out = CPoly::zero();
        for (e, c) in &self.0 {
            out.add_assign(&c.mul(&CPoly::sym(*e)));
        }
        out
    }

    fn add_term(&mut self, e: IndexedSym, c: &CPoly) {
        let slot = self.0.entry(e).or_default();
        slot.add_assign(c);
        if slot.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexedSym, &CPoly)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_assign(&mut self, other: &ENElement) {
        for (e, c) in &other.0 {
            self.add_term(*e, c);
        }
    }

    pub fn add(&self, other: &ENElement) -> ENElement {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &ENElement) -> ENElement {
        self.add(&other.scale(&CPoly::constant(q(-1))))
    }

    pub fn scale(&self, c: &CPoly) -> ENElement {
        let mut out = ENElement::zero();
        for (e, d) in &self.0 {
            out.add_term(*e, &d.mul(c));
        }
        out
    }
}

impl fmt::Display for ENElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_cpoly().fmt(f)
    }
}

/// (m)_{ij} for m of weight 1.
pub fn rep_module_entry(m: &NCPoly, i: usize, j: usize, n: usize) -> Result<ENElement> {
    if !m.is_homogeneous_of(1) {
        return Err(Error::Weight(format!("rep_module_entry needs weight 1, got {}", m)));
    }
    ENElement::from_cpoly(&entry(m, i, j, n)?)
}

/// Σ c t′_{uj} t″_{iv} over the terms of a rank-2 tensor.
pub fn tensor_entry(t: &TensorPoly, uj: (usize, usize), iv: (usize, usize), n: usize) -> Result<CPoly> {
    let mut out = CPoly::zero();
    for (ws, c) in t.terms() {
        let a = entry(&NCPoly::word(ws[0].clone()), uj.0, uj.1, n)?;
        let b = entry(&NCPoly::word(ws[1].clone()), iv.0, iv.1, n)?;
        out.add_scaled(&a.mul(&b), c);
    }
    Ok(out)
}

/// All entry symbols of the given generators.
pub fn entry_syms(gens: &[GenSym], n: usize) -> Vec<IndexedSym> {
    let mut out = Vec::new();
    for g in gens {
        for i in 1..=n {
            for j in 1..=n {
                out.push(IndexedSym::new(*g, i, j));
            }
        }
    }
    out
}

/// ∂_N: A-entries go to (∂a)_{ij}, E-entries to their next jet.
#[derive(Clone, Debug)]
pub struct EntryDerivation {
    n: usize,
    images: BTreeMap<IndexedSym, CPoly>,
}

impl EntryDerivation {
    pub fn new(table: &DerivationTable, a_gens: &[GenSym], n: usize) -> Result<EntryDerivation> {
        check_n(n)?;
        let mut images = BTreeMap::new();
        for s in entry_syms(a_gens, n) {
            let img = table.get(&s.base).ok_or_else(|| Error::MissingDerivation(s.base.name.into()))?;
            images.insert(s, entry(img, s.i, s.j, n)?);
        }
        Ok(EntryDerivation { n, images })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_sym(&self, s: &IndexedSym) -> Result<CPoly> {
        match s.sort() {
            Sort::E => Ok(CPoly::sym(s.d())),
            Sort::A => self.images.get(s).cloned().ok_or_else(|| Error::MissingDerivation(s.to_string())),
        }
    }

    pub fn d(&self, p: &CPoly) -> Result<CPoly> {
        let mut out = CPoly::zero();
        for (m, c) in p.terms() {
            for k in 0..m.len() {
                let mut rest = m.clone();
                let s = rest.remove(k);
                out.add_scaled(&CPoly::from_terms([(rest, q(1))]).mul(&self.d_sym(&s)?), c);
            }
        }
        Ok(out)
    }

    pub fn d_pow(&self, p: &CPoly, k: u32) -> Result<CPoly> {
        let mut out = p.clone();
        for _ in 0..k {
            out = self.d(&out)?;
        }
        Ok(out)
    }

    pub fn d_module(&self, p: &CPoly) -> Result<ENElement> {
        ENElement::from_cpoly(&self.d(p)?)
    }
}

/// Splits each monomial into (chosen factor, remaining monomial, coefficient).
fn factor_splits(p: &CPoly) -> Vec<(IndexedSym, CPoly, Q)> {
    let mut out = Vec::new();
    for (m, c) in p.terms() {
        for k in 0..m.len() {
            let mut rest = m.clone();
            let s = rest.remove(k);
            out.push((s, CPoly::from_terms([(rest, q(1))]), c.clone()));
        }
    }
    out
}

fn nonzero<T: fmt::Display>(is_zero: bool, x: &T) -> Option<String> {
    (!is_zero).then(|| x.to_string())
}

fn preconditions(report: &mut Report, nc: &Report, tag: &str) {
    if !nc.passed() {
        report.demote_failures();
        let tags: Vec<String> = nc.failing_tags().into_iter().collect();
        report.push_info("preconditions", tag, "noncommutative suite failed".into(), tags.join(", "));
    }
}

// ---------------------------------------------------------------------------
// Poisson brackets

#[derive(Clone, Debug)]
pub struct InducedPoisson {
    n: usize,
    syms: Vec<IndexedSym>,
    table: BTreeMap<(IndexedSym, IndexedSym), CPoly>,
}

impl InducedPoisson {
    pub fn new(t: &DoubleBracketTable, n: usize) -> Result<InducedPoisson> {
        check_n(n)?;
        let syms = entry_syms(t.gens(), n);
        let mut table = BTreeMap::new();
        for a in &syms {
            for b in &syms {
                let v = tensor_entry(&t.get(&a.base, &b.base)?, (b.i, a.j), (a.i, b.j), n)?;
                if !v.is_zero() {
                    table.insert((*a, *b), v);
                }
            }
        }
        Ok(InducedPoisson { n, syms, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn syms(&self) -> &[IndexedSym] {
        &self.syms
    }

    /// {a_{ij}, b_{uv}} on entry symbols.
    pub fn bracket_syms(&self, a: &IndexedSym, b: &IndexedSym) -> CPoly {
        self.table.get(&(*a, *b)).cloned().unwrap_or_default()
    }

    /// Extension to A_N as a biderivation.
    pub fn bracket(&self, p: &CPoly, q_: &CPoly) -> CPoly {
        let mut out = CPoly::zero();
        let right = factor_splits(q_);
        for (s, rest1, c1) in factor_splits(p) {
            for (t, rest2, c2) in &right {
                let b = self.bracket_syms(&s, t);
                if !b.is_zero() {
                    out.add_scaled(&b.mul(&rest1).mul(rest2), &(&c1 * c2));
                }
            }
        }
        out
    }

    pub fn jacobi_residual(&self, a: &CPoly, b: &CPoly, c: &CPoly) -> CPoly {
        self.bracket(a, &self.bracket(b, c))
            .sub(&self.bracket(&self.bracket(a, b), c))
            .sub(&self.bracket(b, &self.bracket(a, c)))
    }

    /// (operation, arguments, value) for every nonzero table entry.
    pub fn rows(&self) -> Vec<(String, String, String)> {
        self.table.iter().map(|((a, b), v)| ("bracket".into(), format!("{}, {}", a, b), v.to_string())).collect()
    }
}

/// Antisymmetry and Jacobi of the induced bracket on all entry symbols.
pub fn check_induced_poisson(p: &InducedPoisson) -> Report {
    let syms: Vec<CPoly> = p.syms.iter().map(|s| CPoly::sym(*s)).collect();
    let mut anti = Tally::new("rep-antisymmetry", "KR-double-Poisson-algebras");
    for (a, sa) in syms.iter().zip(&p.syms) {
        for (b, sb) in syms.iter().zip(&p.syms) {
            let r = p.bracket(a, b).add(&p.bracket(b, a));
            anti.record(|| format!("({}, {})", sa, sb), nonzero(r.is_zero(), &r));
        }
    }
    let triples = all_triples(syms.len());
    let results: Vec<CPoly> =
        triples.par_iter().map(|&(i, j, k)| p.jacobi_residual(&syms[i], &syms[j], &syms[k])).collect();
    let mut jac = Tally::new("rep-jacobi", "KR-double-Poisson-algebras");
    for (&(i, j, k), r) in triples.iter().zip(results) {
        jac.record(|| format!("({}, {}, {})", p.syms[i], p.syms[j], p.syms[k]), nonzero(r.is_zero(), &r));
    }
    let mut report = Report::new(&format!("rep-poisson N={}", p.n));
    report.push_tally(anti);
    report.push_tally(jac);
    report
}

/// The bracket induced on A_N by a double bracket, with its report. Failures
/// only count when the double bracket is itself double Poisson in the
/// antisymmetric convention.
pub fn induced_poisson(t: &DoubleBracketTable, n: usize, opts: &CheckOptions) -> Result<(InducedPoisson, Report)> {
    let p = InducedPoisson::new(t, n)?;
    let mut report = check_induced_poisson(&p);
    let mut nc = check_double_jacobi(t, Convention::Vdb, opts)?;
    if !satisfies_convention(t, Convention::Vdb)? {
        nc.push_status("antisymmetric", "vdb", false, "generators".into(), "convention fails".into());
    }
    preconditions(&mut report, &nc, "double-Poisson");
    Ok((p, report))
}

// ---------------------------------------------------------------------------
// λ-brackets

/// Polynomial in λ (and μ) with A_N coefficients, keyed by [deg λ, deg μ].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CLambda(BTreeMap<[u32; 2], CPoly>);

impl CLambda {
    pub fn zero() -> CLambda {
        CLambda::default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, exp: [u32; 2]) -> CPoly {
        self.0.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 2], &CPoly)> {
        self.0.iter()
    }

    pub fn add_term(&mut self, exp: [u32; 2], p: &CPoly, c: &Q) {
        let slot = self.0.entry(exp).or_default();
        slot.add_scaled(p, c);
        if slot.is_zero() {
            self.0.remove(&exp);
        }
    }

    pub fn add_scaled(&mut self, other: &CLambda, c: &Q) {
        for (e, p) in &other.0 {
            self.add_term(*e, p, c);
        }
    }

    pub fn sub(&self, other: &CLambda) -> CLambda {
        let mut out = self.clone();
        out.add_scaled(other, &q(-1));
        out
    }

    pub fn shift_lambda(&self, k: u32) -> CLambda {
        CLambda(self.0.iter().map(|([l, m], p)| ([l + k, *m], p.clone())).collect())
    }

    /// Swaps λ and μ.
    pub fn lambda_to_mu(&self) -> CLambda {
        CLambda(self.0.iter().map(|([l, m], p)| ([*m, *l], p.clone())).collect())
    }
}

impl fmt::Display for CLambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|([l, m], p)| {
                let mut s = format!("({})", p);
                for (v, k) in [("lambda", l), ("mu", m)] {
                    match k {
                        0 => {}
                        1 => s.push_str(&format!("*{}", v)),
                        _ => s.push_str(&format!("*{}^{}", v, k)),
                    }
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Debug)]
pub struct InducedLambda {
    n: usize,
    syms: Vec<IndexedSym>,
    der: EntryDerivation,
    table: BTreeMap<(IndexedSym, IndexedSym), Vec<CPoly>>,
}

impl InducedLambda {
    pub fn new(t: &LambdaBracketTable, n: usize) -> Result<InducedLambda> {
        check_n(n)?;
        let syms = entry_syms(t.gens(), n);
        let der = EntryDerivation::new(&t.derivation, &t.gens_of(Sort::A), n)?;
        let mut table = BTreeMap::new();
        for a in &syms {
            for b in &syms {
                let lp = t.get(&a.base, &b.base)?;
                let deg = lp.degree(crate::diffalg::Var::Lambda) as usize;
                let mut coeffs = vec![CPoly::zero(); deg + 1];
                for (exp, c) in lp.terms() {
                    coeffs[exp[0] as usize] = tensor_entry(c, (b.i, a.j), (a.i, b.j), n)?;
                }
                if coeffs.iter().any(|c| !c.is_zero()) {
                    table.insert((*a, *b), coeffs);
                }
            }
        }
        Ok(InducedLambda { n, syms, der, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn syms(&self) -> &[IndexedSym] {
        &self.syms
    }

    pub fn derivation(&self) -> &EntryDerivation {
        &self.der
    }

    /// (λ+∂)^k applied to a polynomial in λ alone, ∂ acting on coefficients.
    fn lambda_plus_d(&self, x: &CLambda, k: u32) -> Result<CLambda> {
        let mut out = CLambda::zero();
        for ([l, _], p) in x.terms() {
            for m in 0..=k {
                out.add_term([l + k - m, 0], &self.der.d_pow(p, m)?, &binom(k, m));
            }
        }
        Ok(out)
    }

    /// {s_λ t} on entry symbols, jets included.
    pub fn bracket_syms(&self, s: &IndexedSym, t: &IndexedSym) -> Result<CLambda> {
        let s0 = IndexedSym { jet: 0, ..*s };
        let t0 = IndexedSym { jet: 0, ..*t };
        let mut base = CLambda::zero();
        if let Some(cs) = self.table.get(&(s0, t0)) {
            for (p, c) in cs.iter().enumerate() {
                base.add_term([p as u32, 0], c, &q(1));
            }
        }
        if base.is_zero() {
            return Ok(base);
        }
        let mut out = self.lambda_plus_d(&base, t.jet)?.shift_lambda(s.jet);
        if s.jet % 2 == 1 {
            out = CLambda::zero().sub(&out);
        }
        Ok(out)
    }

    /// {p_λ q} by the commutative Leibniz rules; the result is a polynomial in λ.
    pub fn bracket(&self, p: &CPoly, q_: &CPoly) -> Result<CLambda> {
        let mut out = CLambda::zero();
        let right = factor_splits(q_);
        for (s, rest1, c1) in factor_splits(p) {
            let mut inner = CLambda::zero();
            for (t, rest2, c2) in &right {
                let b = self.bracket_syms(&s, t)?;
                for (e, x) in b.terms() {
                    inner.add_term(*e, &x.mul(rest2), c2);
                }
            }
            // {s_{λ+∂} q}_→ rest1
            for ([l, _], x) in inner.terms() {
                for m in 0..=*l {
                    let dr = self.der.d_pow(&rest1, m)?;
                    out.add_term([l - m, 0], &x.mul(&dr), &(binom(*l, m) * &c1));
                }
            }
        }
        Ok(out)
    }

    /// {p_λ X} for X a polynomial in μ only; μ is a parameter.
    fn bracket_into(&self, p: &CPoly, x: &CLambda) -> Result<CLambda> {
        let mut out = CLambda::zero();
        for ([l, m], c) in x.terms() {
            debug_assert_eq!(*l, 0);
            for ([l2, _], y) in self.bracket(p, c)?.terms() {
                out.add_term([*l2, *m], y, &q(1));
            }
        }
        Ok(out)
    }

    pub fn sesqui_residuals(&self, a: &CPoly, b: &CPoly) -> Result<(CLambda, CLambda)> {
        let ab = self.bracket(a, b)?;
        let left = self.bracket(&self.der.d(a)?, b)?;
        let mut l = left.clone();
        l.add_scaled(&ab.shift_lambda(1), &q(1));
        let right = self.bracket(a, &self.der.d(b)?)?;
        Ok((l, right.sub(&self.lambda_plus_d(&ab, 1)?)))
    }

    /// {a_λ b} + {b_{−λ−∂} a}
    pub fn skew_residual(&self, a: &CPoly, b: &CPoly) -> Result<CLambda> {
        let mut out = self.bracket(a, b)?;
        for ([k, _], x) in self.bracket(b, a)?.terms() {
            let sign = if k % 2 == 0 { q(1) } else { q(-1) };
            for m in 0..=*k {
                out.add_term([k - m, 0], &self.der.d_pow(x, m)?, &(binom(*k, m) * &sign));
            }
        }
        Ok(out)
    }

    /// {a_λ{b_μ c}} − {b_μ{a_λ c}} − {{a_λ b}_{λ+μ} c}
    pub fn jacobi_residual(&self, a: &CPoly, b: &CPoly, c: &CPoly) -> Result<CLambda> {
        let t1 = self.bracket_into(a, &self.bracket(b, c)?.lambda_to_mu())?;
        let t2 = self.bracket_into(b, &self.bracket(a, c)?.lambda_to_mu())?.lambda_to_mu();
        let mut out = t1.sub(&t2);
        for ([n, _], y) in self.bracket(a, b)?.terms() {
            for ([k, _], z) in self.bracket(y, c)?.terms() {
                for r in 0..=*k {
                    out.add_term([n + r, k - r], z, &-binom(*k, r));
                }
            }
        }
        Ok(out)
    }

    pub fn rows(&self) -> Vec<(String, String, String)> {
        let mut out = Vec::new();
        for (a, b) in self.table.keys() {
            let v = self.bracket_syms(a, b).expect("table entry");
            out.push(("lambda-bracket".into(), format!("{}, {}", a, b), v.to_string()));
        }
        out
    }
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
}

fn all_triples(n: usize) -> Vec<(usize, usize, usize)> {
    (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k)))).collect()
}

pub fn check_induced_lambda(l: &InducedLambda) -> Result<Report> {
    let syms: Vec<CPoly> = l.syms.iter().map(|s| CPoly::sym(*s)).collect();
    let name = |i: usize| l.syms[i].to_string();
    let pairs = all_pairs(syms.len());
    let res: Vec<Result<(CLambda, CLambda, CLambda)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = l.sesqui_residuals(&syms[i], &syms[j])?;
            Ok((a, b, l.skew_residual(&syms[i], &syms[j])?))
        })
        .collect();
    let mut left = Tally::new("rep-sesqui-left", "lambda-bracket-comm");
    let mut right = Tally::new("rep-sesqui-right", "lambda-bracket-comm");
    let mut skew = Tally::new("rep-skew", "lambda-bracket-comm");
    for (&(i, j), r) in pairs.iter().zip(res) {
        let (a, b, c) = r?;
        let w = || format!("({}, {})", name(i), name(j));
        left.record(w, nonzero(a.is_zero(), &a));
        right.record(w, nonzero(b.is_zero(), &b));
        skew.record(w, nonzero(c.is_zero(), &c));
    }
    let triples = all_triples(syms.len());
    let res: Vec<Result<CLambda>> =
        triples.par_iter().map(|&(i, j, k)| l.jacobi_residual(&syms[i], &syms[j], &syms[k])).collect();
    let mut jac = Tally::new("rep-jacobi", "lambda-bracket-comm");
    for (&(i, j, k), r) in triples.iter().zip(res) {
        let r = r?;
        jac.record(|| format!("({}, {}, {})", name(i), name(j), name(k)), nonzero(r.is_zero(), &r));
    }
    let mut report = Report::new(&format!("rep-lambda N={}", l.n));
    for t in [left, right, skew, jac] {
        report.push_tally(t);
    }
    Ok(report)
}

/// The λ-bracket induced on V_N, with its report.
pub fn induced_lambda(t: &LambdaBracketTable, n: usize, opts: &CheckOptions) -> Result<(InducedLambda, Report)> {
    let l = InducedLambda::new(t, n)?;
    let mut report = check_induced_lambda(&l)?;
    preconditions(&mut report, &check_dpva(t, opts)?, "DPVA");
    Ok((l, report))
}

// ---------------------------------------------------------------------------
// Courant–Dorfman structures

#[derive(Clone, Debug)]
pub struct InducedCd {
    n: usize,
    a_syms: Vec<IndexedSym>,
    e_syms: Vec<IndexedSym>,
    der: EntryDerivation,
    pairing: BTreeMap<(IndexedSym, IndexedSym), CPoly>,
    bracket: BTreeMap<(IndexedSym, IndexedSym), ENElement>,
}

impl InducedCd {
    pub fn new(s: &DcdStructure, n: usize) -> Result<InducedCd> {
        check_n(n)?;
        let a_syms = entry_syms(s.a_gens(), n);
        let e_syms = entry_syms(s.e_gens(), n);
        let der = EntryDerivation::new(&s.derivation, s.a_gens(), n)?;
        let mut pairing = BTreeMap::new();
        let mut bracket = BTreeMap::new();
        for e in &e_syms {
            for f in &e_syms {
                let (uj, iv) = ((f.i, e.j), (e.i, f.j));
                let p = tensor_entry(&s.pairing_of(&e.base, &f.base), uj, iv, n)?;
                if !p.is_zero() {
                    pairing.insert((*e, *f), p);
                }
                let b = s.bracket_of(&e.base, &f.base);
                let mut v = tensor_entry(&b.l, uj, iv, n)?;
                v.add_assign(&tensor_entry(&b.r, uj, iv, n)?);
                let v = ENElement::from_cpoly(&v)?;
                if !v.is_zero() {
                    bracket.insert((*e, *f), v);
                }
            }
        }
        Ok(InducedCd { n, a_syms, e_syms, der, pairing, bracket })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a_syms(&self) -> &[IndexedSym] {
        &self.a_syms
    }

    pub fn e_syms(&self) -> &[IndexedSym] {
        &self.e_syms
    }

    pub fn d(&self, c: &CPoly) -> Result<ENElement> {
        self.der.d_module(c)
    }

    /// A_N-bilinear extension of the pairing.
    pub fn pair(&self, x: &ENElement, y: &ENElement) -> CPoly {
        let mut out = CPoly::zero();
        for (e, c) in x.terms() {
            for (f, d) in y.terms() {
                if let Some(p) = self.pairing.get(&(*e, *f)) {
                    out.add_assign(&p.mul(c).mul(d));
                }
            }
        }
        out
    }

    /// [c e, d f] = c[e, d f] − ⟨d f, ∂c⟩ e + ⟨e, d f⟩ ∂c, with
    /// [e, d f] = d[e, f] + ⟨e, ∂d⟩ f.
    pub fn bracket(&self, x: &ENElement, y: &ENElement) -> Result<ENElement> {
        let mut out = ENElement::zero();
        for (e, c) in x.terms() {
            let es = ENElement::sym(*e);
            let dc = self.d(c)?;
            for (f, d) in y.terms() {
                let fs = ENElement::sym(*f);
                let df = fs.scale(d);
                let mut inner = self.bracket.get(&(*e, *f)).cloned().unwrap_or_default().scale(d);
                inner.add_assign(&fs.scale(&self.pair(&es, &self.d(d)?)));
                out.add_assign(&inner.scale(c));
                out.add_assign(&es.scale(&self.pair(&df, &dc).neg()));
                out.add_assign(&dc.scale(&self.pair(&es, &df)));
            }
        }
        Ok(out)
    }

    pub fn rows(&self) -> Vec<(String, String, String)> {
        let mut out = Vec::new();
        for s in &self.a_syms {
            out.push(("d".into(), s.to_string(), self.d(&CPoly::sym(*s)).map(|x| x.to_string()).unwrap_or_default()));
        }
        for ((e, f), v) in &self.pairing {
            out.push(("pairing".into(), format!("{}, {}", e, f), v.to_string()));
        }
        for ((e, f), v) in &self.bracket {
            out.push(("bracket".into(), format!("{}, {}", e, f), v.to_string()));
        }
        out
    }

    pub fn comm_a(&self, n1: &ENElement, c: &CPoly, n2: &ENElement) -> Result<ENElement> {
        let lhs = self.bracket(n1, &n2.scale(c))?;
        let rhs = self.bracket(n1, n2)?.scale(c).add(&n2.scale(&self.pair(n1, &self.d(c)?)));
        Ok(lhs.sub(&rhs))
    }

    pub fn comm_b(&self, n1: &ENElement, n2: &ENElement, n3: &ENElement) -> Result<CPoly> {
        let lhs = self.pair(n1, &self.d(&self.pair(n2, n3))?);
        let rhs = self.pair(&self.bracket(n1, n2)?, n3).add(&self.pair(n2, &self.bracket(n1, n3)?));
        Ok(lhs.sub(&rhs))
    }

    pub fn comm_c(&self, n1: &ENElement, n2: &ENElement) -> Result<ENElement> {
        let lhs = self.d(&self.pair(n1, n2))?;
        Ok(lhs.sub(&self.bracket(n1, n2)?).sub(&self.bracket(n2, n1)?))
    }

    pub fn comm_d(&self, n1: &ENElement, n2: &ENElement, n3: &ENElement) -> Result<ENElement> {
        let lhs = self.bracket(n1, &self.bracket(n2, n3)?)?;
        let rhs = self.bracket(&self.bracket(n1, n2)?, n3)?.add(&self.bracket(n2, &self.bracket(n1, n3)?)?);
        Ok(lhs.sub(&rhs))
    }

    pub fn comm_e(&self, c: &CPoly, n: &ENElement) -> Result<ENElement> {
        self.bracket(&self.d(c)?, n)
    }

    pub fn comm_f(&self, c: &CPoly, d: &CPoly) -> Result<CPoly> {
        Ok(self.pair(&self.d(c)?, &self.d(d)?))
    }
}

/// The six commutative axioms on entry symbols.
pub fn check_induced_cd(s: &InducedCd) -> Result<Report> {
    let es: Vec<ENElement> = s.e_syms.iter().map(|e| ENElement::sym(*e)).collect();
    let cs: Vec<CPoly> = s.a_syms.iter().map(|a| CPoly::sym(*a)).collect();
    let en = |i: usize| s.e_syms[i].to_string();
    let an = |i: usize| s.a_syms[i].to_string();
    let mut ta = Tally::new("rep-CD-comm.a", "CD-comm.a");
    let mut tb = Tally::new("rep-CD-comm.b", "CD-comm.b");
    let mut tc = Tally::new("rep-CD-comm.c", "CD-comm.c");
    let mut td = Tally::new("rep-CD-comm.d", "CD-comm.d");
    let mut te = Tally::new("rep-CD-comm.e", "CD-comm.e");
    let mut tf = Tally::new("rep-CD-comm.f", "CD-comm.f");
    for (i, j) in all_pairs(es.len()) {
        for (k, c) in cs.iter().enumerate() {
            let r = s.comm_a(&es[i], c, &es[j])?;
            ta.record(|| format!("({}, {}, {})", en(i), an(k), en(j)), nonzero(r.is_zero(), &r));
        }
        let r = s.comm_c(&es[i], &es[j])?;
        tc.record(|| format!("({}, {})", en(i), en(j)), nonzero(r.is_zero(), &r));
    }
    let triples = all_triples(es.len());
    let res: Vec<Result<(CPoly, ENElement)>> = triples
        .par_iter()
        .map(|&(i, j, k)| Ok((s.comm_b(&es[i], &es[j], &es[k])?, s.comm_d(&es[i], &es[j], &es[k])?)))
        .collect();
    for (&(i, j, k), r) in triples.iter().zip(res) {
        let (b, d) = r?;
        let w = || format!("({}, {}, {})", en(i), en(j), en(k));
        tb.record(w, nonzero(b.is_zero(), &b));
        td.record(w, nonzero(d.is_zero(), &d));
    }
    for (k, c) in cs.iter().enumerate() {
        for (i, n) in es.iter().enumerate() {
            let r = s.comm_e(c, n)?;
            te.record(|| format!("({}, {})", an(k), en(i)), nonzero(r.is_zero(), &r));
        }
        for (l, d) in cs.iter().enumerate() {
            let r = s.comm_f(c, d)?;
            tf.record(|| format!("({}, {})", an(k), an(l)), nonzero(r.is_zero(), &r));
        }
    }
    let mut report = Report::new(&format!("rep-cd N={}", s.n));
    for t in [ta, tb, tc, td, te, tf] {
        report.push_tally(t);
    }
    Ok(report)
}

/// The Courant–Dorfman structure induced on (A_N, E_N), with its report.
pub fn induced_cd(s: &DcdStructure, n: usize, opts: &CheckOptions) -> Result<(InducedCd, Report)> {
    let c = InducedCd::new(s, n)?;
    let mut report = check_induced_cd(&c)?;
    preconditions(&mut report, &check_cd_axioms(s, opts)?, "CD");
    Ok((c, report))
}

/// Entries of a bracket value between two matrix entries, (u,j) and (i,v) rule.
pub fn cd_value_entry(v: &CdValue, ij: (usize, usize), uv: (usize, usize), n: usize) -> Result<CPoly> {
    let (uj, iv) = ((uv.0, ij.1), (ij.0, uv.1));
    tensor_entry(&v.total(), uj, iv, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::cd_to_dpva;
    use crate::fixtures::{hyp, xx_double_poisson, zero};

    fn s(name: &str, sort: Sort, i: usize, j: usize) -> CPoly {
        CPoly::sym(IndexedSym::new(GenSym::new(name, sort), i, j))
    }

    fn x(i: usize, j: usize) -> CPoly {
        s("x", Sort::A, i, j)
    }

    fn delta(a: usize, b: usize) -> CPoly {
        if a == b {
            CPoly::one()
        } else {
            CPoly::zero()
        }
    }

    #[test]
    fn entries() {
        let xp = NCPoly::sym(GenSym::a("x"));
        assert_eq!(rep_entry(&xp.mul(&xp), 1, 1, 2).unwrap(), x(1, 1).mul(&x(1, 1)).add(&x(1, 2).mul(&x(2, 1))));
        assert!(rep_entry(&NCPoly::one(), 1, 2, 2).unwrap().is_zero());
        assert_eq!(rep_entry(&NCPoly::one(), 2, 2, 2).unwrap(), CPoly::one());
        assert_eq!(rep_entry(&xp, 1, 1, 1).unwrap(), x(1, 1));
        assert!(rep_entry(&xp, 0, 1, 2).is_err());
        assert!(rep_entry(&xp, 1, 1, 4).is_err());
        let ep = NCPoly::sym(GenSym::e("e"));
        assert!(rep_entry(&ep, 1, 1, 2).is_err());
        let e = |i, j| s("e", Sort::E, i, j);
        let xe = rep_module_entry(&xp.mul(&ep), 1, 1, 2).unwrap();
        assert_eq!(xe.to_cpoly(), x(1, 1).mul(&e(1, 1)).add(&x(1, 2).mul(&e(2, 1))));
        let ex = rep_module_entry(&ep.mul(&xp), 1, 1, 2).unwrap();
        assert_eq!(ex.to_cpoly(), x(1, 1).mul(&e(1, 1)).add(&x(2, 1).mul(&e(1, 2))));
        assert_eq!(rep_module_entry(&ep, 2, 1, 3).unwrap().to_cpoly(), e(2, 1));
    }

    #[test]
    fn poisson_examples() {
        let opts = CheckOptions { samples: 8, ..CheckOptions::default() };
        let t = xx_double_poisson();
        let (p, report) = induced_poisson(&t, 2, &opts).unwrap();
        assert!(report.passed(), "{}", report.render_text());
        for (i, j, u, v) in (1..=2).flat_map(|i| (1..=2).flat_map(move |j| (1..=2).flat_map(move |u| (1..=2).map(move |v| (i, j, u, v))))) {
            let want = x(u, j).mul(&delta(i, v)).sub(&delta(u, j).mul(&x(i, v)));
            assert_eq!(p.bracket(&x(i, j), &x(u, v)), want);
        }
        let (p1, report) = induced_poisson(&t, 1, &opts).unwrap();
        assert!(report.passed());
        assert!(p1.bracket(&x(1, 1), &x(1, 1)).is_zero());
        let empty = DoubleBracketTable::new(&[GenSym::a("x")]).unwrap();
        let (p0, report) = induced_poisson(&empty, 2, &opts).unwrap();
        assert!(report.passed() && p0.rows().is_empty());
    }

    #[test]
    fn lambda_examples() {
        let opts = CheckOptions { samples: 8, ..CheckOptions::default() };
        let t = cd_to_dpva(&hyp()).unwrap();
        let (l, report) = induced_lambda(&t, 1, &opts).unwrap();
        assert!(report.passed(), "{}", report.render_text());
        let (u, v) = (s("u", Sort::E, 1, 1), s("v", Sort::E, 1, 1));
        let got = l.bracket(&u, &v).unwrap();
        let mut want = CLambda::zero();
        want.add_term([1, 0], &CPoly::one(), &q(1));
        assert_eq!(got, want);
        let (l0, _) = induced_lambda(&cd_to_dpva(&zero()).unwrap(), 2, &opts).unwrap();
        assert!(l0.rows().is_empty());

        let single = cd_to_dpva(&crate::fixtures::single_e()).unwrap();
        let (l2, report) = induced_lambda(&single, 2, &opts).unwrap();
        assert!(report.passed(), "{}", report.render_text());
        let e = |i, j| s("e", Sort::E, i, j);
        for (i, j, a, b) in (1..=2).flat_map(|i| (1..=2).flat_map(move |j| (1..=2).flat_map(move |u| (1..=2).map(move |v| (i, j, u, v))))) {
            let got = l2.bracket(&e(i, j), &e(a, b)).unwrap();
            let coeff = delta(a, j).mul(&delta(i, b));
            let mut want = CLambda::zero();
            want.add_term([1, 0], &coeff, &q(1));
            assert_eq!(got, want);
        }
    }

    #[test]
    fn cd_examples() {
        let opts = CheckOptions { samples: 8, ..CheckOptions::default() };
        let (c, report) = induced_cd(&hyp(), 1, &opts).unwrap();
        assert!(report.passed(), "{}", report.render_text());
        let sym = |n: &str, i, j| ENElement::sym(IndexedSym::new(GenSym::e(n), i, j));
        assert_eq!(c.pair(&sym("u", 1, 1), &sym("v", 1, 1)), CPoly::one());
        assert!(c.bracket(&sym("u", 1, 1), &sym("v", 1, 1)).unwrap().is_zero());
        assert_eq!(c.d(&x(1, 1)).unwrap(), sym("u", 1, 1));
        let (c2, report) = induced_cd(&hyp(), 2, &opts).unwrap();
        assert!(report.passed(), "{}", report.render_text());
        for (i, j, a, b) in (1..=2).flat_map(|i| (1..=2).flat_map(move |j| (1..=2).flat_map(move |u| (1..=2).map(move |v| (i, j, u, v))))) {
            assert_eq!(c2.pair(&sym("u", i, j), &sym("v", a, b)), delta(a, j).mul(&delta(i, b)));
            assert!(c2.pair(&sym("u", i, j), &sym("u", a, b)).is_zero());
        }
        for n in 1..=2 {
            let (_, report) = induced_cd(&zero(), n, &opts).unwrap();
            assert!(report.passed());
        }
    }
}
