//! Enumeration of small double Courant–Dorfman structures.
//!
//! The family: up to two A-generators x, y and two E-generators u, v with
//! constant data in {−1, 0, 1}: ∂x = Σ a·e, ⟨⟨e,f⟩⟩ = G·1⊗1 (G symmetric),
//! ⟪e,f⟫ = Σ c·g⊗1 − Σ c′·1⊗g with c′ the transpose forced by ∂⟨⟨e,f⟩⟩ = 0.

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::dcd::{cd_g_residual, cd_jacobi_residual, check_cd_axioms, eval_cd_total, eval_pairing, CdExt, DcdStructure};
use crate::diffalg::{d, DerivationTable};
use crate::error::Result;
use crate::ncpoly::{GenSym, NCPoly, TensorPoly};
use crate::sample::{rng, CheckOptions};
use crate::scalar::q;

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Number of structures to return.
    pub count: usize,
    pub seed: u64,
    /// Options for the full axiom check each kept structure must pass.
    pub check: CheckOptions,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { count: 56, seed: 0xc0de, check: CheckOptions { samples: 16, ..CheckOptions::default() } }
    }
}

fn lattice(n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                [-1i64, 0, 1].into_iter().map(move |c| {
                    let mut v2 = v.clone();
                    v2.push(c);
                    v2
                })
            })
            .collect();
    }
    out
}

fn e_names(n: usize) -> Vec<GenSym> {
    ["u", "v"].iter().take(n).map(|s| GenSym::e(s)).collect()
}

fn a_names(n: usize) -> Vec<GenSym> {
    ["x", "y"].iter().take(n).map(|s| GenSym::a(s)).collect()
}

/// Structure with the given data; `c[(i*n+j)*n+k]` is the coefficient of
/// e_k⊗1 in ⟪e_i,e_j⟫, `g[i*n+j]` the pairing and `a[i*n+k]` the coefficient
/// of e_k in ∂x_i.
pub fn build(n_a: usize, n_e: usize, c: &[i64], g: &[i64], a: &[i64]) -> Result<DcdStructure> {
    let es = e_names(n_e);
    let xs = a_names(n_a);
    let mut der = DerivationTable::new();
    for (i, x) in xs.iter().enumerate() {
        let img = NCPoly::from_terms((0..n_e).map(|k| (crate::ncpoly::Word::sym(es[k]), q(a[i * n_e + k]))));
        der.set(*x, img)?;
    }
    let mut s = DcdStructure::new(&xs, &es, der)?;
    let one = NCPoly::one();
    for i in 0..n_e {
        for j in 0..n_e {
            s.set_pairing(es[i], es[j], TensorPoly::unit(2).scale(&q(g[i * n_e + j])))?;
            let mut val = TensorPoly::zero(2);
            for k in 0..n_e {
                let ek = NCPoly::sym(es[k]);
                val.add_scaled(&TensorPoly::product(&[&ek, &one]), &q(c[(i * n_e + j) * n_e + k]));
                val.add_scaled(&TensorPoly::product(&[&one, &ek]), &q(-c[(j * n_e + i) * n_e + k]));
            }
            s.set_bracket(es[i], es[j], &val)?;
        }
    }
    Ok(s)
}

fn gen_triples_pass<F>(s: &DcdStructure, f: F) -> Result<bool>
where
    F: Fn(&NCPoly, &NCPoly, &NCPoly) -> Result<TensorPoly>,
{
    let gens: Vec<NCPoly> = s.e_gens().iter().map(|g| NCPoly::sym(*g)).collect();
    for a in &gens {
        for b in &gens {
            for c in &gens {
                if !f(a, b, c)?.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Candidates passing every axiom on generators, in enumeration order.
pub fn generator_candidates(n_a: usize, n_e: usize) -> Result<Vec<DcdStructure>> {
    let zeros_g = vec![0; n_e * n_e];
    let zeros_a = vec![0; n_a * n_e];
    let brackets: Vec<Vec<i64>> = lattice(n_e * n_e * n_e)
        .into_par_iter()
        .filter_map(|c| {
            let s = build(n_a, n_e, &c, &zeros_g, &zeros_a).ok()?;
            match gen_triples_pass(&s, |e, f, g| cd_jacobi_residual(e, f, g, &s, CdExt::FirstL)) {
                Ok(true) => Some(c),
                _ => None,
            }
        })
        .collect();
    let pairings: Vec<Vec<i64>> = lattice(n_e * (n_e + 1) / 2)
        .into_iter()
        .map(|upper| {
            let mut g = vec![0; n_e * n_e];
            let mut it = upper.into_iter();
            for i in 0..n_e {
                for j in i..n_e {
                    let v = it.next().expect("upper triangle");
                    g[i * n_e + j] = v;
                    g[j * n_e + i] = v;
                }
            }
            g
        })
        .collect();
    let derivs = lattice(n_a * n_e);
    let mut out = Vec::new();
    for c in &brackets {
        for g in &pairings {
            let s = build(n_a, n_e, c, g, &zeros_a)?;
            if !gen_triples_pass(&s, |e, f, h| cd_g_residual(e, f, h, &s))? {
                continue;
            }
            for a in &derivs {
                let s = build(n_a, n_e, c, g, a)?;
                if generator_level_bc(&s)? {
                    out.push(s);
                }
            }
        }
    }
    Ok(out)
}

fn generator_level_bc(s: &DcdStructure) -> Result<bool> {
    let der = &s.derivation;
    for x in s.a_gens() {
        let dx = d(&NCPoly::sym(*x), der)?;
        for y in s.a_gens() {
            if !eval_pairing(&dx, &d(&NCPoly::sym(*y), der)?, s)?.is_zero() {
                return Ok(false);
            }
        }
        for e in s.e_gens() {
            if !eval_cd_total(&dx, &NCPoly::sym(*e), s)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn nontrivial(s: &DcdStructure) -> bool {
    s.bracket_entries().next().is_some()
        || s.pairing_entries().next().is_some()
        || s.derivation.entries().any(|(_, img)| !img.is_zero())
}

/// A seeded selection of structures from the family passing the full
/// randomized axiom check, at most ≤ 2 generators per sort.
pub fn search_corpus(opts: &SearchOptions) -> Result<Vec<DcdStructure>> {
    let mut pool = Vec::new();
    for n_a in 1..=2 {
        for n_e in 1..=2 {
            pool.extend(generator_candidates(n_a, n_e)?.into_iter().filter(nontrivial));
        }
    }
    let mut r = rng(opts.seed);
    pool.shuffle(&mut r);
    let mut out = Vec::new();
    for chunk in pool.chunks(32) {
        let passed: Vec<Result<Option<DcdStructure>>> = chunk
            .par_iter()
            .map(|s| Ok(if check_cd_axioms(s, &opts.check)?.passed() { Some(s.clone()) } else { None }))
            .collect();
        for p in passed {
            if let Some(s) = p? {
                out.push(s);
            }
        }
        if out.len() >= opts.count {
            out.truncate(opts.count);
            break;
        }
    }
    Ok(out)
}
