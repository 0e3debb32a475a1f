#![allow(dead_code)]

use doublecd::diffalg::{DerivationTable, LambdaPoly};
use doublecd::ncpoly::{GenSym, NCPoly, TensorPoly, Word};
use doublecd::sample::{random_coeff, random_poly, random_word_with_unit, Rng8};
use rand::Rng;

pub fn x() -> GenSym {
    GenSym::a("x")
}

pub fn y() -> GenSym {
    GenSym::a("y")
}

pub fn u() -> GenSym {
    GenSym::e("u")
}

pub fn v() -> GenSym {
    GenSym::e("v")
}

pub fn p(s: GenSym) -> NCPoly {
    NCPoly::sym(s)
}

pub fn a_gens() -> Vec<GenSym> {
    vec![x(), y()]
}

pub fn all_gens() -> Vec<GenSym> {
    vec![x(), y(), u(), v()]
}

/// Random element with exactly one E-letter per term.
pub fn random_weight1(r: &mut Rng8, a: &[GenSym], e: &[GenSym], max_len: usize) -> NCPoly {
    let n = r.gen_range(1..=2);
    let mut out = NCPoly::zero();
    for _ in 0..n {
        let pre = random_word_with_unit(r, a, max_len);
        let post = random_word_with_unit(r, a, max_len);
        let g = e[r.gen_range(0..e.len())];
        out.add_term(pre.concat(&Word::sym(g)).concat(&post), random_coeff(r));
    }
    if out.is_zero() {
        return random_weight1(r, a, e, max_len);
    }
    out
}

/// ∂x, ∂y random weight-1 elements over {x, y, u, v}.
pub fn random_derivation(r: &mut Rng8) -> DerivationTable {
    let mut t = DerivationTable::new();
    for g in a_gens() {
        t.set(g, random_weight1(r, &a_gens(), &[u(), v()], 1)).unwrap();
    }
    t
}

pub fn random_tensor(r: &mut Rng8, alphabet: &[GenSym], rank: usize) -> TensorPoly {
    let mut out = TensorPoly::zero(rank);
    for _ in 0..r.gen_range(1..=3) {
        let parts: Vec<NCPoly> = (0..rank).map(|_| random_poly(r, alphabet, 2, 2)).collect();
        let refs: Vec<&NCPoly> = parts.iter().collect();
        out.add_assign(&TensorPoly::product(&refs));
    }
    out
}

pub fn random_lambda(r: &mut Rng8, alphabet: &[GenSym], rank: usize) -> LambdaPoly {
    let mut out = LambdaPoly::zero(rank);
    for _ in 0..r.gen_range(1..=3) {
        let exp = [r.gen_range(0..3), r.gen_range(0..2)];
        out.add_coeff(exp, &random_tensor(r, alphabet, rank));
    }
    out
}

/// The named fixtures passing the axioms plus a few searched structures.
pub fn small_corpus() -> &'static [doublecd::dcd::DcdStructure] {
    use doublecd::search::{search_corpus, SearchOptions};
    static CORPUS: std::sync::OnceLock<Vec<doublecd::dcd::DcdStructure>> = std::sync::OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut out = vec![doublecd::fixtures::hyp(), doublecd::fixtures::zero(), doublecd::fixtures::single_e()];
        out.extend(search_corpus(&SearchOptions { count: 6, ..SearchOptions::default() }).unwrap());
        out
    })
}
