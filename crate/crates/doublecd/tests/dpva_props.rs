mod common;

use common::*;
use doublecd::diffalg::{lambda_shift_total, DerivationTable, LambdaPoly, Var};
use doublecd::double_bracket::{self, eval_bb, DoubleBracketTable};
use doublecd::dpva::{
    eval_lb, eval_lb_with, grading_violation, jacobi_residual, jacobi_residual_expanded, random_monomial,
    sample_alphabet, sesqui_residuals, skew_residual, unit_lambda, LambdaBracketTable, Reduction,
};
use doublecd::equivalence::cd_to_dpva;
use doublecd::fixtures::single_e;
use doublecd::ncpoly::{GenSym, NCPoly, Perm, TensorPoly, Word};
use doublecd::sample::{random_poly, rng, Rng8};
use doublecd::scalar::q;
use proptest::prelude::*;

/// Arbitrary λ-bracket on E-generators u, v; no axioms assumed.
fn e_table(r: &mut Rng8) -> LambdaBracketTable {
    let mut t = LambdaBracketTable::new(&[u(), v()], DerivationTable::new()).unwrap();
    for a in [u(), v()] {
        for b in [u(), v()] {
            t.set(a, b, mu_free(random_lambda(r, &[u(), v()], 2))).unwrap();
        }
    }
    t
}

/// As [`e_table`] with one short pure tensor per entry.
fn light_e_table(r: &mut Rng8) -> LambdaBracketTable {
    use doublecd::sample::{random_coeff, random_word_with_unit};
    use rand::Rng;
    let mut t = LambdaBracketTable::new(&[u(), v()], DerivationTable::new()).unwrap();
    for a in [u(), v()] {
        for b in [u(), v()] {
            let ws = vec![random_word_with_unit(r, &[u(), v()], 1), random_word_with_unit(r, &[u(), v()], 1)];
            let k = r.gen_range(0..2);
            t.set(a, b, LambdaPoly::monomial(TensorPoly::pure(ws, random_coeff(r)), [k, 0])).unwrap();
        }
    }
    t
}

fn mu_free(p: LambdaPoly) -> LambdaPoly {
    let mut out = LambdaPoly::zero(p.rank());
    for (e, t) in p.terms() {
        out.add_coeff([e[0], 0], t);
    }
    out
}

/// Arbitrary table on x, u, v with a random ∂x.
fn mixed_table(r: &mut Rng8) -> LambdaBracketTable {
    let mut der = DerivationTable::new();
    der.set(x(), random_weight1(r, &[x()], &[u(), v()], 1)).unwrap();
    let gens = [x(), u(), v()];
    let mut t = LambdaBracketTable::new(&gens, der).unwrap();
    for a in gens {
        for b in gens {
            t.set(a, b, mu_free(random_lambda(r, &gens, 2))).unwrap();
        }
    }
    t
}

fn monomial(r: &mut Rng8, t: &LambdaBracketTable) -> NCPoly {
    random_monomial(r, &sample_alphabet(t), 3)
}

fn short_monomial(r: &mut Rng8, t: &LambdaBracketTable) -> NCPoly {
    random_monomial(r, &sample_alphabet(t), 2)
}

fn corpus_tables() -> Vec<LambdaBracketTable> {
    small_corpus().iter().map(|s| cd_to_dpva(s).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sesquilinear_on_free_e(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = e_table(&mut r);
        let (a, b) = (monomial(&mut r, &t), monomial(&mut r, &t));
        let (left, right) = sesqui_residuals(&a, &b, &t).unwrap();
        prop_assert!(left.is_zero(), "{}", left);
        prop_assert!(right.is_zero(), "{}", right);
    }

    #[test]
    fn reduction_orders_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = mixed_table(&mut r);
        let alphabet = sample_alphabet(&t);
        let a = random_poly(&mut r, &alphabet, 3, 2);
        let b = random_poly(&mut r, &alphabet, 3, 2);
        let left = eval_lb_with(&a, &b, &t, Reduction::LeftFirst).unwrap();
        prop_assert_eq!(left, eval_lb_with(&a, &b, &t, Reduction::RightFirst).unwrap());
    }

    #[test]
    fn corpus_axioms_on_random_monomials(seed in any::<u64>()) {
        let mut r = rng(seed);
        for t in corpus_tables() {
            let (a, b, c) = (monomial(&mut r, &t), monomial(&mut r, &t), monomial(&mut r, &t));
            let (left, right) = sesqui_residuals(&a, &b, &t).unwrap();
            prop_assert!(left.is_zero() && right.is_zero());
            prop_assert!(skew_residual(&a, &b, &t).unwrap().is_zero());
            prop_assert!(jacobi_residual(&a, &b, &c, &t).unwrap().is_zero());
        }
    }

    #[test]
    fn right_leibniz_from_skewsymmetry(seed in any::<u64>()) {
        let mut r = rng(seed);
        for t in corpus_tables() {
            let (a, b, c) = (monomial(&mut r, &t), monomial(&mut r, &t), monomial(&mut r, &t));
            let ab = a.mul(&b);
            let via_skew = lambda_shift_total(&eval_lb(&c, &ab, &t).unwrap(), Var::Lambda, -1, &t.derivation)
                .unwrap()
                .apply_sigma(&Perm::transposition())
                .unwrap()
                .neg();
            prop_assert_eq!(via_skew, eval_lb(&ab, &c, &t).unwrap());
        }
    }

    #[test]
    fn corpus_tables_are_graded(seed in any::<u64>()) {
        let mut r = rng(seed);
        for t in corpus_tables() {
            let alphabet = sample_alphabet(&t);
            let w1 = doublecd::sample::random_word(&mut r, &alphabet, 3);
            let w2 = doublecd::sample::random_word(&mut r, &alphabet, 3);
            prop_assert_eq!(grading_violation(&w1, &w2, &t).unwrap(), None);
        }
    }

    #[test]
    fn degenerate_limit_is_a_double_bracket(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (db, lt) = constant_pair(&mut r);
        let (a, b, c) = (random_poly(&mut r, &a_gens(), 2, 2), random_poly(&mut r, &a_gens(), 2, 2), random_poly(&mut r, &a_gens(), 2, 2));
        prop_assert_eq!(eval_lb(&a, &b, &lt).unwrap(), LambdaPoly::constant(eval_bb(&a, &b, &db).unwrap()));
        let res = double_bracket::jacobi_residual(&a, &b, &c, &db).unwrap();
        prop_assert_eq!(jacobi_residual(&a, &b, &c, &lt).unwrap(), LambdaPoly::constant(res));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_forms_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = light_e_table(&mut r);
        let (a, b, c) = (short_monomial(&mut r, &t), short_monomial(&mut r, &t), short_monomial(&mut r, &t));
        prop_assert_eq!(jacobi_residual(&a, &b, &c, &t).unwrap(), jacobi_residual_expanded(&a, &b, &c, &t).unwrap());
    }
}

/// The same constant table read as a double bracket and as a λ-bracket with ∂ = 0.
fn constant_pair(r: &mut Rng8) -> (DoubleBracketTable, LambdaBracketTable) {
    let mut der = DerivationTable::new();
    for g in a_gens() {
        der.set(g, NCPoly::zero()).unwrap();
    }
    let mut db = DoubleBracketTable::new(&a_gens()).unwrap();
    let mut lt = LambdaBracketTable::new(&a_gens(), der).unwrap();
    for a in a_gens() {
        for b in a_gens() {
            let t = random_tensor(r, &a_gens(), 2);
            db.set(a, b, t.clone()).unwrap();
            lt.set(a, b, LambdaPoly::constant(t)).unwrap();
        }
    }
    (db, lt)
}

#[test]
fn derivative_in_first_argument_is_minus_lambda() {
    let t = cd_to_dpva(&single_e()).unwrap();
    let e = GenSym::e("e");
    let e1 = e.jet(1).unwrap();
    // ⟪e_λ e⟫ = λ(1⊗1), ⟪e′_λ e⟫ = −λ²(1⊗1), ⟪e_λ e′⟫ = λ(λ+∂)(1⊗1) = λ²(1⊗1)
    assert_eq!(eval_lb(&p(e), &p(e), &t).unwrap(), unit_lambda(1));
    assert_eq!(eval_lb(&p(e1), &p(e), &t).unwrap(), unit_lambda(2).neg());
    assert_eq!(eval_lb(&p(e), &p(e1), &t).unwrap(), unit_lambda(2));
    // ⟪e_λ e²⟫ = λ(e⊗1 + 1⊗e)
    let got = eval_lb(&p(e), &p(e).pow(2), &t).unwrap();
    let ew = Word::sym(e);
    let expect = TensorPoly::from_terms(2, [(vec![ew.clone(), Word::one()], q(1)), (vec![Word::one(), ew], q(1))]);
    assert_eq!(got, LambdaPoly::monomial(expect, [1, 0]));
}
