//! Double λ-brackets on the free differential algebra and the double Poisson
//! vertex algebra axioms.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::diffalg::{
    arrow_insert, d, d_pow, exp_partial_left, lambda_plus_d_pow, lambda_shift_total, minus_lambda_pow,
    DerivationTable, Exp, InsertMode, LambdaPoly, Var, DEFAULT_LAMBDA_CAP,
};
use crate::error::{Error, Result};
use crate::ncpoly::{GenSym, NCPoly, Perm, Side, Sort, TensorPoly, Word};
use crate::report::{Report, Tally};
use crate::sample::{random_word, rng, CheckOptions, Rng8};
use crate::scalar::multinomial3;

/// Order in which products and jets are taken apart by [`eval_lb_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// Split the first argument at its first factor, then the second
    /// argument, then jets (left before right).
    LeftFirst,
    /// Split the second argument first, then the first argument at its last
    /// factor, then jets (right before left).
    RightFirst,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaBracketTable {
    gens: Vec<GenSym>,
    entries: BTreeMap<(GenSym, GenSym), LambdaPoly>,
    pub derivation: DerivationTable,
    pub graded: bool,
    pub lambda_cap: u32,
}

impl LambdaBracketTable {
    pub fn new(gens: &[GenSym], derivation: DerivationTable) -> Result<LambdaBracketTable> {
        for g in gens {
            if g.jet != 0 {
                return Err(Error::Weight(format!("generator `{}` must have jet 0", g)));
            }
            if g.sort == Sort::A && derivation.get(g).is_none() {
                return Err(Error::MissingDerivation(g.name.to_string()));
            }
        }
        let mut gens = gens.to_vec();
        gens.sort();
        gens.dedup();
        Ok(LambdaBracketTable {
            gens,
            entries: BTreeMap::new(),
            derivation,
            graded: false,
            lambda_cap: DEFAULT_LAMBDA_CAP,
        })
    }

    pub fn gens(&self) -> &[GenSym] {
        &self.gens
    }

    pub fn gens_of(&self, sort: Sort) -> Vec<GenSym> {
        self.gens.iter().copied().filter(|g| g.sort == sort).collect()
    }

    pub fn set(&mut self, a: GenSym, b: GenSym, value: LambdaPoly) -> Result<()> {
        if !self.gens.contains(&a) || !self.gens.contains(&b) {
            return Err(Error::MissingEntry(a.to_string(), b.to_string()));
        }
        if value.rank() != 2 {
            return Err(Error::RankMismatch(format!("λ-bracket value must have rank 2, found {}", value.rank())));
        }
        if value.degree(Var::Mu) > 0 {
            return Err(Error::Inconsistent(format!("table entry ({}, {}) mentions mu", a, b)));
        }
        value.check_cap(self.lambda_cap)?;
        for (_, t) in value.terms() {
            for (ws, _) in t.terms() {
                for w in ws {
                    if let Some(s) = w.syms().iter().find(|s| !self.gens.contains(&s.base())) {
                        return Err(Error::MissingEntry(a.to_string(), format!("undeclared symbol `{}`", s)));
                    }
                }
            }
        }
        if value.is_zero() {
            self.entries.remove(&(a, b));
        } else {
            self.entries.insert((a, b), value);
        }
        Ok(())
    }

    pub fn get(&self, a: &GenSym, b: &GenSym) -> Result<LambdaPoly> {
        if !self.gens.contains(a) || !self.gens.contains(b) {
            return Err(Error::MissingEntry(a.to_string(), b.to_string()));
        }
        Ok(self.entries.get(&(*a, *b)).cloned().unwrap_or_else(|| LambdaPoly::zero(2)))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(GenSym, GenSym), &LambdaPoly)> {
        self.entries.iter()
    }

    /// Same generators, derivation and entries.
    pub fn same_tables(&self, other: &LambdaBracketTable) -> bool {
        self.gens == other.gens && self.entries == other.entries && self.derivation == other.derivation
    }

    fn capped(&self, p: LambdaPoly) -> Result<LambdaPoly> {
        p.check_cap(self.lambda_cap)?;
        Ok(p)
    }

    fn sym_bracket(&self, x: &GenSym, y: &GenSym, order: Reduction) -> Result<LambdaPoly> {
        let base = self.get(&x.base(), &y.base())?;
        let out = match order {
            Reduction::LeftFirst => {
                let l = minus_lambda_pow(&base, x.jet);
                lambda_plus_d_pow(&l, y.jet, &self.derivation)?
            }
            Reduction::RightFirst => {
                let r = lambda_plus_d_pow(&base, y.jet, &self.derivation)?;
                minus_lambda_pow(&r, x.jet)
            }
        };
        self.capped(out)
    }

    fn split_right(&self, u: &Word, v: &Word, order: Reduction) -> Result<LambdaPoly> {
        let mut out = LambdaPoly::zero(2);
        let n = v.len();
        for j in 0..n {
            let inner = self.word_bracket(u, &v.slice(j, j + 1), order)?;
            if inner.is_zero() {
                continue;
            }
            let pre = NCPoly::word(v.slice(0, j));
            let post = NCPoly::word(v.slice(j + 1, n));
            out.add_assign(&inner.star(&pre, 0, Side::Left)?.star(&post, 0, Side::Right)?);
        }
        self.capped(out)
    }

    /// ⟪ab_λ c⟫ = ⟪a_{λ+∂}c⟫_→ *₁ b + (e^{∂∂_λ}a) *₁ ⟪b_λ c⟫
    fn split_left(&self, a: &Word, b: &Word, v: &Word, order: Reduction) -> Result<LambdaPoly> {
        let first = arrow_insert(&self.word_bracket(a, v, order)?, &NCPoly::word(b.clone()), InsertMode::Star1, &self.derivation)?;
        let second = exp_partial_left(&NCPoly::word(a.clone()), &self.word_bracket(b, v, order)?, &self.derivation)?;
        self.capped(first.add(&second))
    }

    fn word_bracket(&self, u: &Word, v: &Word, order: Reduction) -> Result<LambdaPoly> {
        if u.is_empty() || v.is_empty() {
            return Ok(LambdaPoly::zero(2));
        }
        match order {
            Reduction::LeftFirst => {
                if u.len() > 1 {
                    self.split_left(&u.slice(0, 1), &u.slice(1, u.len()), v, order)
                } else if v.len() > 1 {
                    self.split_right(u, v, order)
                } else {
                    self.sym_bracket(&u.syms()[0], &v.syms()[0], order)
                }
            }
            Reduction::RightFirst => {
                if v.len() > 1 {
                    self.split_right(u, v, order)
                } else if u.len() > 1 {
                    let n = u.len();
                    self.split_left(&u.slice(0, n - 1), &u.slice(n - 1, n), v, order)
                } else {
                    self.sym_bracket(&u.syms()[0], &v.syms()[0], order)
                }
            }
        }
    }
}

/// ⟪p_λ q⟫ with the default reduction order.
pub fn eval_lb(p: &NCPoly, q: &NCPoly, t: &LambdaBracketTable) -> Result<LambdaPoly> {
    eval_lb_with(p, q, t, Reduction::LeftFirst)
}

pub fn eval_lb_with(p: &NCPoly, q: &NCPoly, t: &LambdaBracketTable, order: Reduction) -> Result<LambdaPoly> {
    let mut out = LambdaPoly::zero(2);
    for (u, a) in p.terms() {
        for (v, b) in q.terms() {
            out.add_assign(&t.word_bracket(u, v, order)?.scale(&(a * b)));
        }
    }
    Ok(out)
}

/// Moves every λ-exponent to `v`.
fn relabel(p: &LambdaPoly, v: Var) -> LambdaPoly {
    match v {
        Var::Lambda => p.clone(),
        Var::Mu => {
            let mut out = LambdaPoly::zero(p.rank());
            for (e, t) in p.terms() {
                out.add_coeff([e[1], e[0]], t);
            }
            out
        }
    }
}

fn mul_exp(p: &LambdaPoly, e: Exp) -> LambdaPoly {
    p.mul_var_pow(Var::Lambda, e[0]).mul_var_pow(Var::Mu, e[1])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ext {
    /// ⟪a_λ (b⊗c)⟫_L = ⟪a_λ b⟫⊗c
    L,
    /// ⟪a_λ (b⊗c)⟫_R = b⊗⟪a_λ c⟫
    R,
    /// ⟪(a⊗b)_λ c⟫_L = ⟪a_{λ+∂}c⟫_→ ⊗₁ b
    FirstL,
}

/// The rank-3 extensions. For `L`/`R`, `x` is the bracketing element and `t`
/// the rank-2 argument; for `FirstL`, `t` is the rank-2 first argument and `x`
/// the element it is bracketed with.
pub fn lb_ext(x: &NCPoly, t: &TensorPoly, which: Ext, table: &LambdaBracketTable) -> Result<LambdaPoly> {
    if t.rank() != 2 {
        return Err(Error::RankMismatch(format!("λ-bracket extension needs a rank-2 tensor, found {}", t.rank())));
    }
    lb_ext_var(x, &LambdaPoly::constant(t.clone()), which, Var::Lambda, table)
}

fn lb_ext_var(x: &NCPoly, t: &LambdaPoly, which: Ext, v: Var, table: &LambdaBracketTable) -> Result<LambdaPoly> {
    let mut out = LambdaPoly::zero(3);
    for (e, coef) in t.terms() {
        for (ws, c) in coef.terms() {
            let w0 = NCPoly::word(ws[0].clone());
            let w1 = NCPoly::word(ws[1].clone());
            let piece = match which {
                Ext::L => {
                    let inner = relabel(&eval_lb(x, &w0, table)?, v);
                    inner.map_coeffs(3, |s| s.tensor(&TensorPoly::from_poly(&w1)))?
                }
                Ext::R => {
                    let inner = relabel(&eval_lb(x, &w1, table)?, v);
                    inner.map_coeffs(3, |s| TensorPoly::from_poly(&w0).tensor(s))?
                }
                Ext::FirstL => {
                    let inner = eval_lb(&w0, x, table)?;
                    relabel(&arrow_insert(&inner, &w1, InsertMode::Otimes1, &table.derivation)?, v)
                }
            };
            out.add_assign(&mul_exp(&piece, *e).scale(c));
        }
    }
    Ok(out)
}

/// ⟪a_λ⟪b_μ c⟫⟫_L − ⟪b_μ⟪a_λ c⟫⟫_R − ⟪⟪a_λ b⟫_{λ+μ} c⟫_L
pub fn jacobi_residual(a: &NCPoly, b: &NCPoly, c: &NCPoly, t: &LambdaBracketTable) -> Result<LambdaPoly> {
    let bc = relabel(&eval_lb(b, c, t)?, Var::Mu);
    let lhs = lb_ext_var(a, &bc, Ext::L, Var::Lambda, t)?;
    let ac = eval_lb(a, c, t)?;
    let r1 = lb_ext_var(b, &ac, Ext::R, Var::Mu, t)?;
    let ab = eval_lb(a, b, t)?;
    let mut r2 = LambdaPoly::zero(3);
    for (e, coef) in ab.terms() {
        let inner = lb_ext(c, coef, Ext::FirstL, t)?.substitute_lambda_by_sum()?;
        r2.add_assign(&inner.mul_var_pow(Var::Lambda, e[0]));
    }
    Ok(lhs.sub(&r1).sub(&r2))
}

/// The same residual assembled term by term from the λ-coefficients
/// (a_p b)′⊗(a_p b)″ etc., with (λ+μ+∂)^q expanded trinomially on the middle slot.
pub fn jacobi_residual_expanded(a: &NCPoly, b: &NCPoly, c: &NCPoly, t: &LambdaBracketTable) -> Result<LambdaPoly> {
    let mut out = LambdaPoly::zero(3);
    let word = |w: &Word| NCPoly::word(w.clone());
    for (eq, bc) in eval_lb(b, c, t)?.terms() {
        for (ws, k) in bc.terms() {
            for (ep, inner) in eval_lb(a, &word(&ws[0]), t)?.terms() {
                for (ss, m) in inner.terms() {
                    let term = TensorPoly::pure(vec![ss[0].clone(), ss[1].clone(), ws[1].clone()], k * m);
                    out.add_coeff([ep[0], eq[0]], &term);
                }
            }
        }
    }
    for (ep, ac) in eval_lb(a, c, t)?.terms() {
        for (ws, k) in ac.terms() {
            for (eq, inner) in eval_lb(b, &word(&ws[1]), t)?.terms() {
                for (ss, m) in inner.terms() {
                    let term = TensorPoly::pure(vec![ws[0].clone(), ss[0].clone(), ss[1].clone()], -(k * m));
                    out.add_coeff([ep[0], eq[0]], &term);
                }
            }
        }
    }
    for (ep, ab) in eval_lb(a, b, t)?.terms() {
        for (ys, k) in ab.terms() {
            for (eq, z) in eval_lb(&word(&ys[0]), c, t)?.terms() {
                let qd = eq[0];
                for (zs, m) in z.terms() {
                    for i in 0..=qd {
                        for j in 0..=(qd - i) {
                            let kk = qd - i - j;
                            let mid = d_pow(&word(&ys[1]), kk, &t.derivation)?;
                            let coef = -(k * m * multinomial3(i, j, kk));
                            for (w, c2) in mid.terms() {
                                let term = TensorPoly::pure(vec![zs[0].clone(), w.clone(), zs[1].clone()], &coef * c2);
                                out.add_coeff([ep[0] + i, j], &term);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// ⟪a_λ b⟫ + ⟪b_{−λ−∂} a⟫^σ
pub fn skew_residual(a: &NCPoly, b: &NCPoly, t: &LambdaBracketTable) -> Result<LambdaPoly> {
    let ba = lambda_shift_total(&eval_lb(b, a, t)?, Var::Lambda, -1, &t.derivation)?;
    Ok(eval_lb(a, b, t)?.add(&ba.apply_sigma(&Perm::transposition())?))
}

/// (⟪∂p_λ q⟫ + λ⟪p_λ q⟫, ⟪p_λ ∂q⟫ − (λ+∂)⟪p_λ q⟫)
pub fn sesqui_residuals(p: &NCPoly, q: &NCPoly, t: &LambdaBracketTable) -> Result<(LambdaPoly, LambdaPoly)> {
    let base = eval_lb(p, q, t)?;
    let left = eval_lb(&d(p, &t.derivation)?, q, t)?.add(&base.mul_var_pow(Var::Lambda, 1));
    let right = eval_lb(p, &d(q, &t.derivation)?, t)?.sub(&lambda_plus_d_pow(&base, 1, &t.derivation)?);
    Ok((left, right))
}

/// Terms of ⟪u_λ v⟫ violating the weight rule wt(u)+wt(v)−p−1 for words u, v.
pub fn grading_violation(u: &Word, v: &Word, t: &LambdaBracketTable) -> Result<Option<String>> {
    let val = eval_lb(&NCPoly::word(u.clone()), &NCPoly::word(v.clone()), t)?;
    let total = (u.weight() + v.weight()) as i64;
    for (e, coef) in val.terms() {
        let expect = total - e[0] as i64 - 1;
        if coef.total_weights().iter().any(|&w| w as i64 != expect) {
            return Ok(Some(format!("lambda^{} coefficient {} should have weight {}", e[0], coef, expect)));
        }
    }
    Ok(None)
}

fn nonzero(p: &LambdaPoly) -> Option<String> {
    if p.is_zero() {
        None
    } else {
        Some(p.to_string())
    }
}

/// Alphabet for random monomials: the generators and first jets of E-generators.
pub fn sample_alphabet(t: &LambdaBracketTable) -> Vec<GenSym> {
    let mut out = t.gens.clone();
    for g in &t.gens {
        if g.sort == Sort::E {
            out.push(g.jet(1).expect("E-generators carry jets"));
        }
    }
    out
}

pub fn random_monomial(r: &mut Rng8, alphabet: &[GenSym], max_len: usize) -> NCPoly {
    NCPoly::word(random_word(r, alphabet, max_len))
}

fn gen_polys(t: &LambdaBracketTable) -> Vec<NCPoly> {
    t.gens.iter().map(|g| NCPoly::sym(*g)).collect()
}

fn pairs(t: &LambdaBracketTable, opts: &CheckOptions, salt: u64) -> Vec<(NCPoly, NCPoly)> {
    let gens = gen_polys(t);
    let mut out = Vec::new();
    for a in &gens {
        for b in &gens {
            out.push((a.clone(), b.clone()));
        }
    }
    let alphabet = sample_alphabet(t);
    if !alphabet.is_empty() {
        let mut r = rng(opts.seed ^ salt);
        for _ in 0..opts.samples {
            let a = random_monomial(&mut r, &alphabet, opts.max_degree);
            let b = random_monomial(&mut r, &alphabet, opts.max_degree);
            out.push((a, b));
        }
    }
    out
}

/// All generator triples followed by `opts.samples` random monomial triples.
pub fn triples(t: &LambdaBracketTable, opts: &CheckOptions) -> Vec<(NCPoly, NCPoly, NCPoly)> {
    let gens = gen_polys(t);
    let mut out = Vec::new();
    for a in &gens {
        for b in &gens {
            for c in &gens {
                out.push((a.clone(), b.clone(), c.clone()));
            }
        }
    }
    let alphabet = sample_alphabet(t);
    if !alphabet.is_empty() {
        let mut r = rng(opts.seed ^ 0x3a);
        for _ in 0..opts.samples {
            let a = random_monomial(&mut r, &alphabet, opts.max_degree);
            let b = random_monomial(&mut r, &alphabet, opts.max_degree);
            let c = random_monomial(&mut r, &alphabet, opts.max_degree);
            out.push((a, b, c));
        }
    }
    out
}

fn witness2(a: &NCPoly, b: &NCPoly) -> String {
    format!("({}, {})", a, b)
}

pub fn check_sesquilinearity(t: &LambdaBracketTable, opts: &CheckOptions) -> Result<Report> {
    let ps = pairs(t, opts, 0x11);
    let results: Vec<Result<(LambdaPoly, LambdaPoly)>> = ps.par_iter().map(|(a, b)| sesqui_residuals(a, b, t)).collect();
    let mut left = Tally::new("sesqui-left", "4.1a");
    let mut right = Tally::new("sesqui-right", "4.1b");
    for ((a, b), r) in ps.iter().zip(results) {
        let (l, rr) = r?;
        left.record(|| witness2(a, b), nonzero(&l));
        right.record(|| witness2(a, b), nonzero(&rr));
    }
    let mut report = Report::new("sesquilinearity");
    report.push_tally(left);
    report.push_tally(right);
    Ok(report)
}

pub fn check_skew(t: &LambdaBracketTable, opts: &CheckOptions) -> Result<Report> {
    let ps = pairs(t, opts, 0x22);
    let results: Vec<Result<LambdaPoly>> = ps.par_iter().map(|(a, b)| skew_residual(a, b, t)).collect();
    let mut tally = Tally::new("skew", "vertex-skew");
    for ((a, b), r) in ps.iter().zip(results) {
        tally.record(|| witness2(a, b), nonzero(&r?));
    }
    let mut report = Report::new("skewsymmetry");
    report.push_tally(tally);
    Ok(report)
}

pub fn check_jacobi(t: &LambdaBracketTable, opts: &CheckOptions) -> Result<Report> {
    check_jacobi_on(t, &triples(t, opts))
}

pub fn check_jacobi_on(t: &LambdaBracketTable, ts: &[(NCPoly, NCPoly, NCPoly)]) -> Result<Report> {
    let results: Vec<Result<(LambdaPoly, LambdaPoly)>> = ts
        .par_iter()
        .map(|(a, b, c)| Ok((jacobi_residual(a, b, c, t)?, jacobi_residual_expanded(a, b, c, t)?)))
        .collect();
    let mut direct = Tally::new("jacobi", "Jacobi-vertex");
    let mut agree = Tally::new("jacobi-expanded-agrees", "eq-Jacobi-vertex-tensor");
    for ((a, b, c), r) in ts.iter().zip(results) {
        let (res, exp) = r?;
        let w = || format!("({}, {}, {})", a, b, c);
        direct.record(w, nonzero(&res));
        agree.record(w, nonzero(&res.sub(&exp)));
    }
    let mut report = Report::new("jacobi");
    report.push_tally(direct);
    report.push_tally(agree);
    Ok(report)
}

pub fn check_grading(t: &LambdaBracketTable, opts: &CheckOptions) -> Result<Report> {
    let ps = pairs(t, opts, 0x33);
    let results: Vec<Result<Option<String>>> = ps
        .par_iter()
        .map(|(a, b)| {
            let u = a.terms().next().map(|(w, _)| w.clone()).unwrap_or_default();
            let v = b.terms().next().map(|(w, _)| w.clone()).unwrap_or_default();
            grading_violation(&u, &v, t)
        })
        .collect();
    let mut tally = Tally::new("weight", "weight -1");
    for ((a, b), r) in ps.iter().zip(results) {
        tally.record(|| witness2(a, b), r?);
    }
    let mut report = Report::new("grading");
    report.push_tally(tally);
    Ok(report)
}

pub fn check_dpva(t: &LambdaBracketTable, opts: &CheckOptions) -> Result<Report> {
    let mut report = Report::new("dpva");
    report.absorb(check_sesquilinearity(t, opts)?);
    report.absorb(check_skew(t, opts)?);
    report.absorb(check_jacobi(t, opts)?);
    if t.graded {
        report.absorb(check_grading(t, opts)?);
    }
    Ok(report)
}

/// Unit tensor times λ^k, a frequent table value.
pub fn unit_lambda(k: u32) -> LambdaPoly {
    LambdaPoly::monomial(TensorPoly::unit(2), [k, 0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn single() -> (GenSym, NCPoly, LambdaBracketTable) {
        let e = GenSym::e("e");
        let mut t = LambdaBracketTable::new(&[e], DerivationTable::new()).unwrap();
        t.set(e, e, unit_lambda(1)).unwrap();
        (e, NCPoly::sym(e), t)
    }

    #[test]
    fn evaluator_examples() {
        let (e, ep, t) = single();
        let de = NCPoly::sym(e.jet(1).unwrap());
        assert_eq!(eval_lb(&de, &ep, &t).unwrap(), unit_lambda(2).neg());
        let one = NCPoly::one();
        let expect = TensorPoly::product(&[&ep, &one]).add(&TensorPoly::product(&[&one, &ep]));
        assert_eq!(eval_lb(&ep, &ep.mul(&ep), &t).unwrap(), LambdaPoly::monomial(expect, [1, 0]));
        assert!(eval_lb(&one, &ep, &t).unwrap().is_zero());
        assert!(eval_lb(&ep, &one, &t).unwrap().is_zero());
    }

    #[test]
    fn extension_examples() {
        let (_, ep, t) = single();
        let one = NCPoly::one();
        let e1 = TensorPoly::product(&[&ep, &one]);
        let got = lb_ext(&ep, &e1, Ext::FirstL, &t).unwrap();
        assert_eq!(got, LambdaPoly::monomial(TensorPoly::unit(3), [1, 0]));
        let ones = TensorPoly::unit(2);
        assert!(lb_ext(&ep, &ones, Ext::L, &t).unwrap().is_zero());
        let ee = TensorPoly::product(&[&ep, &ep]);
        let l = lb_ext(&ep, &ee, Ext::L, &t).unwrap();
        let r = lb_ext(&ep, &ee, Ext::R, &t).unwrap();
        let reflect = Perm::from_images(vec![2, 1, 0]).unwrap();
        assert_eq!(l.apply_sigma(&reflect).unwrap(), r);
    }

    #[test]
    fn skew_examples() {
        let (e, ep, mut t) = single();
        assert!(check_skew(&t, &CheckOptions::default()).unwrap().passed());
        let one = NCPoly::one();
        let v = TensorPoly::product(&[&ep, &one]).add(&TensorPoly::product(&[&one, &ep]));
        t.set(e, e, LambdaPoly::constant(v)).unwrap();
        assert!(!check_skew(&t, &CheckOptions::default()).unwrap().passed());
        let zero = LambdaBracketTable::new(&[e], DerivationTable::new()).unwrap();
        assert!(check_skew(&zero, &CheckOptions::default()).unwrap().passed());
    }

    #[test]
    fn jacobi_examples() {
        let (e, _, t) = single();
        assert!(check_jacobi(&t, &CheckOptions::default()).unwrap().passed());
        let zero = LambdaBracketTable::new(&[e], DerivationTable::new()).unwrap();
        assert!(check_jacobi(&zero, &CheckOptions::default()).unwrap().passed());
        let f = GenSym::e("f");
        let mut two = LambdaBracketTable::new(&[e, f], DerivationTable::new()).unwrap();
        two.set(e, f, unit_lambda(1)).unwrap();
        two.set(f, e, unit_lambda(1)).unwrap();
        assert!(check_dpva(&two, &CheckOptions::default()).unwrap().passed());
    }

    #[test]
    fn reduction_orders_agree() {
        let x = GenSym::a("x");
        let e = GenSym::e("e");
        let mut der = DerivationTable::new();
        der.set(x, NCPoly::sym(e)).unwrap();
        let mut t = LambdaBracketTable::new(&[x, e], der).unwrap();
        let xp = NCPoly::sym(x);
        let ep = NCPoly::sym(e);
        let one = NCPoly::one();
        t.set(e, e, LambdaPoly::in_lambda(vec![TensorPoly::product(&[&ep, &xp]), TensorPoly::unit(2).scale(&q(2))])).unwrap();
        t.set(x, e, LambdaPoly::constant(TensorPoly::product(&[&xp, &one]))).unwrap();
        let mut r = rng(7);
        let alphabet = sample_alphabet(&t);
        for _ in 0..40 {
            let a = random_monomial(&mut r, &alphabet, 3);
            let b = random_monomial(&mut r, &alphabet, 3);
            assert_eq!(
                eval_lb_with(&a, &b, &t, Reduction::LeftFirst).unwrap(),
                eval_lb_with(&a, &b, &t, Reduction::RightFirst).unwrap(),
                "{} {}",
                a,
                b
            );
        }
    }
}
