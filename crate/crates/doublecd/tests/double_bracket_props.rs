mod common;

use std::collections::BTreeMap;

use common::*;
use doublecd::double_bracket::{
    check_double_jacobi, eval_bb, jacobi_cyclic_residual, jacobi_residual, satisfies_convention, Convention,
    DoubleBracketTable,
};
use doublecd::fixtures::xx_double_poisson;
use doublecd::ncpoly::{NCPoly, Side, TensorPoly, Word};
use doublecd::sample::{random_poly, rng, CheckOptions, Rng8};
use doublecd::scalar::{q, Q};
use proptest::prelude::*;

fn random_table(r: &mut Rng8) -> DoubleBracketTable {
    let mut t = DoubleBracketTable::new(&a_gens()).unwrap();
    for a in a_gens() {
        for b in a_gens() {
            t.set(a, b, random_tensor(r, &a_gens(), 2)).unwrap();
        }
    }
    t
}

/// A table satisfying ⟪b,a⟫ = ε⟪a,b⟫^σ on generators.
fn skew_table(r: &mut Rng8, conv: Convention) -> DoubleBracketTable {
    let eps = conv.sign();
    let mut t = DoubleBracketTable::new(&a_gens()).unwrap();
    let (gx, gy) = (x(), y());
    let m = random_tensor(r, &a_gens(), 2);
    t.set(gx, gy, m.clone()).unwrap();
    t.set(gy, gx, m.swap().scale(&eps)).unwrap();
    for g in [gx, gy] {
        let n = random_tensor(r, &a_gens(), 2);
        t.set(g, g, n.add(&n.swap().scale(&eps))).unwrap();
    }
    t
}

fn a_poly(r: &mut Rng8) -> NCPoly {
    random_poly(r, &a_gens(), 3, 3)
}

fn small_poly(r: &mut Rng8) -> NCPoly {
    random_poly(r, &a_gens(), 2, 2)
}

proptest! {
    #[test]
    fn leibniz_rules(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random_table(&mut r);
        let (a, b, c) = (a_poly(&mut r), a_poly(&mut r), a_poly(&mut r));
        // outer in the second argument: ⟪a,bc⟫ = b⟪a,c⟫ + ⟪a,b⟫c
        let lhs = eval_bb(&a, &b.mul(&c), &t).unwrap();
        let rhs = eval_bb(&a, &c, &t).unwrap().mul_slot(0, &b, Side::Left).unwrap()
            .add(&eval_bb(&a, &b, &t).unwrap().mul_slot(1, &c, Side::Right).unwrap());
        prop_assert_eq!(lhs, rhs);
        // inner in the first: ⟪ab,c⟫ = ⟪a,c⟫ *₁ b + a *₁ ⟪b,c⟫
        let lhs = eval_bb(&a.mul(&b), &c, &t).unwrap();
        let rhs = eval_bb(&a, &c, &t).unwrap().mul_slot(0, &b, Side::Right).unwrap()
            .add(&eval_bb(&b, &c, &t).unwrap().mul_slot(1, &a, Side::Left).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bilinear(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random_table(&mut r);
        let (a, b, c) = (a_poly(&mut r), a_poly(&mut r), a_poly(&mut r));
        let k = q(-5) / q(3);
        let lhs = eval_bb(&a.scale(&k).add(&b), &c, &t).unwrap();
        prop_assert_eq!(lhs, eval_bb(&a, &c, &t).unwrap().scale(&k).add(&eval_bb(&b, &c, &t).unwrap()));
        let lhs = eval_bb(&c, &a.add(&b.scale(&k)), &t).unwrap();
        prop_assert_eq!(lhs, eval_bb(&c, &a, &t).unwrap().add(&eval_bb(&c, &b, &t).unwrap().scale(&k)));
        prop_assert!(eval_bb(&NCPoly::one(), &a, &t).unwrap().is_zero());
    }

    #[test]
    fn skewsymmetry_extends_from_generators(seed in any::<u64>()) {
        let mut r = rng(seed);
        for conv in [Convention::Paper, Convention::Vdb] {
            let t = skew_table(&mut r, conv);
            prop_assert!(satisfies_convention(&t, conv).unwrap());
            let (a, b) = (a_poly(&mut r), a_poly(&mut r));
            let ab = eval_bb(&a, &b, &t).unwrap();
            prop_assert_eq!(ab, eval_bb(&b, &a, &t).unwrap().swap().scale(&conv.sign()));
        }
    }

    #[test]
    fn xx_matches_closed_form(m in 0u32..6, n in 0u32..6) {
        let t = xx_double_poisson();
        let got = eval_bb(&p(x()).pow(m), &p(x()).pow(n), &t).unwrap();
        prop_assert_eq!(got, from_exponents(&xx_oracle(m, n)));
    }

    #[test]
    fn xx_satisfies_jacobi(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = xx_double_poisson();
        let g = [x()];
        let (a, b, c) = (random_poly(&mut r, &g, 4, 3), random_poly(&mut r, &g, 4, 3), random_poly(&mut r, &g, 4, 3));
        prop_assert!(jacobi_residual(&a, &b, &c, &t).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn jacobi_trilinear(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random_table(&mut r);
        let (a, b, c, a2) = (small_poly(&mut r), small_poly(&mut r), small_poly(&mut r), small_poly(&mut r));
        let sum = jacobi_residual(&a.add(&a2), &b, &c, &t).unwrap();
        prop_assert_eq!(sum, jacobi_residual(&a, &b, &c, &t).unwrap().add(&jacobi_residual(&a2, &b, &c, &t).unwrap()));
        let k = q(7);
        let scaled = jacobi_residual(&a, &b, &c.scale(&k), &t).unwrap();
        prop_assert_eq!(scaled, jacobi_residual(&a, &b, &c, &t).unwrap().scale(&k));
    }

    #[test]
    fn formulations_agree_under_skewsymmetry(seed in any::<u64>()) {
        let mut r = rng(seed);
        for conv in [Convention::Paper, Convention::Vdb] {
            let t = skew_table(&mut r, conv);
            let (a, b, c) = (small_poly(&mut r), small_poly(&mut r), small_poly(&mut r));
            prop_assert_eq!(jacobi_residual(&a, &b, &c, &t).unwrap(), jacobi_cyclic_residual(&a, &b, &c, &t, conv).unwrap());
        }
    }
}

/// ⟪x^m, x^n⟫ for ⟪x,x⟫ = x⊗1 − 1⊗x, as exponent pairs: the letter x_i of
/// x^m (i before, m−1−i after) against x_j of x^n gives
/// x^j·t′·x^{m−1−i} ⊗ x^i·t″·x^{n−1−j}.
fn xx_oracle(m: u32, n: u32) -> BTreeMap<(u32, u32), i64> {
    let mut out: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    for i in 0..m {
        for j in 0..n {
            let left = j + m - 1 - i;
            let right = i + n - 1 - j;
            *out.entry((left + 1, right)).or_default() += 1;
            *out.entry((left, right + 1)).or_default() -= 1;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn from_exponents(m: &BTreeMap<(u32, u32), i64>) -> TensorPoly {
    let xp = |k: u32| Word::from_syms(vec![x(); k as usize]);
    TensorPoly::from_terms(2, m.iter().map(|((a, b), c)| (vec![xp(*a), xp(*b)], Q::from_integer((*c).into()))))
}

#[test]
fn xx_small_values() {
    let t = xx_double_poisson();
    let x2 = p(x()).pow(2);
    // ⟪x, x²⟫ = x²⊗1 − 1⊗x²
    let expect = from_exponents(&BTreeMap::from([((2, 0), 1), ((0, 2), -1)]));
    assert_eq!(eval_bb(&p(x()), &x2, &t).unwrap(), expect);
    assert_eq!(xx_oracle(1, 2), BTreeMap::from([((2, 0), 1), ((0, 2), -1)]));
}

#[test]
fn xx_passes_vdb_jacobi_sweep() {
    let t = xx_double_poisson();
    assert!(satisfies_convention(&t, Convention::Vdb).unwrap());
    assert!(!satisfies_convention(&t, Convention::Paper).unwrap());
    let report = check_double_jacobi(&t, Convention::Vdb, &CheckOptions::default()).unwrap();
    assert!(report.passed(), "{}", report.render_text());
}
