mod common;

use common::*;
use doublecd::dcd::{
    cd_a_residual, cd_d_residual, cd_e_residual, check_appendix_identities, check_cd_axioms, eval_cd, eval_cd_total,
    eval_pairing, random_module_element, DcdStructure,
};
use doublecd::diffalg::d;
use doublecd::fixtures::{bad, hyp};
use doublecd::ncpoly::{NCPoly, Side};
use doublecd::sample::{random_word_with_unit, rng, CheckOptions, Rng8};
use doublecd::search::build;
use proptest::prelude::*;
use rand::Rng;

fn lattice_vec(r: &mut Rng8, n: usize) -> Vec<i64> {
    (0..n).map(|_| r.gen_range(-1..=1)).collect()
}

/// A structure on x, y and two E-generators with random data and a
/// symmetric pairing; no axioms assumed.
fn random_structure(r: &mut Rng8) -> DcdStructure {
    let c = lattice_vec(r, 8);
    let upper = lattice_vec(r, 3);
    let g = vec![upper[0], upper[1], upper[1], upper[2]];
    let a = lattice_vec(r, 4);
    build(2, 2, &c, &g, &a).unwrap()
}

fn a_word(r: &mut Rng8, s: &DcdStructure) -> NCPoly {
    NCPoly::word(random_word_with_unit(r, s.a_gens(), 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairing_is_a_bimodule_morphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_structure(&mut r);
        let e = random_module_element(&mut r, &s, 2);
        let f = random_module_element(&mut r, &s, 2);
        let (a, b) = (a_word(&mut r, &s), a_word(&mut r, &s));
        let base = eval_pairing(&e, &f, &s).unwrap();
        // outer in the second argument
        let outer = eval_pairing(&e, &a.mul(&f).mul(&b), &s).unwrap();
        prop_assert_eq!(outer, base.mul_slot(0, &a, Side::Left).unwrap().mul_slot(1, &b, Side::Right).unwrap());
        // inner in the first
        let inner = eval_pairing(&a.mul(&e).mul(&b), &f, &s).unwrap();
        prop_assert_eq!(inner, base.mul_slot(0, &b, Side::Right).unwrap().mul_slot(1, &a, Side::Left).unwrap());
    }

    #[test]
    fn symmetric_pairing_extends(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_structure(&mut r);
        let e = random_module_element(&mut r, &s, 2);
        let f = random_module_element(&mut r, &s, 2);
        prop_assert_eq!(eval_pairing(&e, &f, &s).unwrap(), eval_pairing(&f, &e, &s).unwrap().swap());
        prop_assert_eq!(cd_a_residual(&f, &e, &s).unwrap(), cd_a_residual(&e, &f, &s).unwrap().swap());
    }

    #[test]
    fn second_argument_leibniz(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_structure(&mut r);
        let e = random_module_element(&mut r, &s, 2);
        let f = random_module_element(&mut r, &s, 2);
        let a = a_word(&mut r, &s);
        prop_assert!(cd_d_residual(&e, &f, &a, &s).unwrap().is_zero());
        prop_assert!(cd_e_residual(&e, &f, &a, &s).unwrap().is_zero());
    }

    #[test]
    fn bracket_values_have_weight_one(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_structure(&mut r);
        let e = random_module_element(&mut r, &s, 2);
        let f = random_module_element(&mut r, &s, 2);
        let v = eval_cd(&e, &f, &s).unwrap();
        prop_assert!(v.scalar.is_zero());
        prop_assert!(v.total().total_weights().iter().all(|&w| w == 1));
        prop_assert!(v.l.terms().all(|(ws, _)| ws[0].weight() == 1 && ws[1].weight() == 0));
        prop_assert!(v.r.terms().all(|(ws, _)| ws[0].weight() == 0 && ws[1].weight() == 1));
        // mixed arguments give A⊗A values
        let a = a_word(&mut r, &s);
        let ea = eval_cd_total(&e, &a, &s).unwrap();
        prop_assert!(ea.total_weights().iter().all(|&w| w == 0));
        prop_assert_eq!(ea, eval_pairing(&e, &d(&a, &s.derivation).unwrap(), &s).unwrap());
    }

    #[test]
    fn hyp_axioms_on_random_elements(seed in any::<u64>()) {
        let s = hyp();
        let mut r = rng(seed);
        let e = random_module_element(&mut r, &s, 2);
        let f = random_module_element(&mut r, &s, 2);
        prop_assert!(cd_a_residual(&e, &f, &s).unwrap().is_zero());
    }
}

#[test]
fn axioms_imply_appendix_identities_on_corpus() {
    let opts = CheckOptions { samples: 8, ..CheckOptions::default() };
    for s in small_corpus() {
        assert!(check_cd_axioms(s, &opts).unwrap().passed());
        let report = check_appendix_identities(s, &opts).unwrap();
        assert!(report.passed(), "{}", report.render_text());
        assert!(report.entries.iter().all(|e| e.id != "preconditions"));
    }
}

#[test]
fn axioms_imply_appendix_identities_on_random_structures() {
    let opts = CheckOptions { samples: 4, ..CheckOptions::default() };
    let mut r = rng(17);
    let mut checked = 0;
    for _ in 0..400 {
        let s = random_structure(&mut r);
        if !check_cd_axioms(&s, &opts).unwrap().passed() {
            continue;
        }
        checked += 1;
        let report = check_appendix_identities(&s, &opts).unwrap();
        assert!(report.passed(), "{}", report.render_text());
    }
    assert!(checked > 0);
}

#[test]
fn bad_fails_only_through_its_pairing() {
    let report = check_cd_axioms(&bad(), &CheckOptions::default()).unwrap();
    let gen_fail: Vec<&str> =
        report.failures().filter(|e| e.id.ends_with(":generators")).map(|e| e.tag.as_str()).collect();
    assert_eq!(gen_fail, vec!["CD.c"]);
    let appendix = check_appendix_identities(&bad(), &CheckOptions::default()).unwrap();
    assert!(appendix.entries.iter().any(|e| e.id == "preconditions"));
}
