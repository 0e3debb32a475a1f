mod common;

use common::*;
use doublecd::dcd::{eval_cd_total, eval_pairing, random_module_element, DcdStructure};
use doublecd::diffalg::{d, LambdaPoly};
use doublecd::dpva::{eval_lb, unit_lambda};
use doublecd::equivalence::{cd_to_dpva, dpva_to_cd, roundtrip_check, roundtrip_check_rev};
use doublecd::fixtures::{bad, hyp};
use doublecd::ncpoly::{NCPoly, TensorPoly};
use doublecd::sample::{random_word, rng, CheckOptions, Rng8};
use doublecd::search::build;
use doublecd::Error;
use proptest::prelude::*;
use rand::Rng;

fn random_structure(r: &mut Rng8) -> DcdStructure {
    let mut v = |n: usize| -> Vec<i64> { (0..n).map(|_| r.gen_range(-1..=1)).collect() };
    let (c, upper, a) = (v(8), v(3), v(4));
    build(2, 2, &c, &[upper[0], upper[1], upper[1], upper[2]], &a).unwrap()
}

fn structures(r: &mut Rng8) -> Vec<DcdStructure> {
    let mut out: Vec<DcdStructure> = small_corpus().to_vec();
    out.push(bad());
    out.push(random_structure(r));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conversions_are_inverse(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_structure(&mut r);
        let t = cd_to_dpva(&s).unwrap();
        prop_assert_eq!(&dpva_to_cd(&t).unwrap(), &s);
        prop_assert!(cd_to_dpva(&dpva_to_cd(&t).unwrap()).unwrap().same_tables(&t));
    }

    #[test]
    fn brackets_transport(seed in any::<u64>()) {
        let mut r = rng(seed);
        for s in structures(&mut r) {
            let t = cd_to_dpva(&s).unwrap();
            if s.e_gens().is_empty() {
                continue;
            }
            let e = random_module_element(&mut r, &s, 2);
            let f = random_module_element(&mut r, &s, 2);
            let expect = LambdaPoly::in_lambda(vec![eval_cd_total(&e, &f, &s).unwrap(), eval_pairing(&e, &f, &s).unwrap()]);
            prop_assert_eq!(eval_lb(&e, &f, &t).unwrap(), expect);
            if s.a_gens().is_empty() {
                continue;
            }
            let a = NCPoly::word(random_word(&mut r, s.a_gens(), 3));
            let b = NCPoly::word(random_word(&mut r, s.a_gens(), 3));
            let da = d(&a, &s.derivation).unwrap();
            prop_assert_eq!(eval_lb(&e, &a, &t).unwrap(), LambdaPoly::constant(eval_pairing(&e, &da, &s).unwrap()));
            prop_assert_eq!(eval_lb(&a, &e, &t).unwrap(), LambdaPoly::constant(eval_pairing(&da, &e, &s).unwrap().neg()));
            prop_assert!(eval_lb(&a, &b, &t).unwrap().is_zero());
        }
    }
}

#[test]
fn corpus_round_trips_both_ways() {
    let opts = CheckOptions { samples: 16, ..CheckOptions::default() };
    for s in small_corpus() {
        let fwd = roundtrip_check(s, &opts).unwrap();
        assert!(fwd.passed(), "{}", fwd.render_text());
        let rev = roundtrip_check_rev(&cd_to_dpva(s).unwrap(), &opts).unwrap();
        assert!(rev.passed(), "{}", rev.render_text());
    }
}

#[test]
fn bad_round_trips_but_is_not_a_dpva() {
    let opts = CheckOptions { samples: 8, ..CheckOptions::default() };
    let report = roundtrip_check(&bad(), &opts).unwrap();
    let rt = report.entries.iter().find(|e| e.id == "dcd-dpva-dcd").unwrap();
    assert_eq!(rt.status, doublecd::report::Status::Pass);
    assert!(!report.passed());
}

#[test]
fn hyp_table_values() {
    let s = hyp();
    let t = cd_to_dpva(&s).unwrap();
    let (gx, gu, gv) = (p(x()), p(u()), p(v()));
    assert_eq!(eval_lb(&gu, &gv, &t).unwrap(), unit_lambda(1));
    assert_eq!(eval_lb(&gv, &gx, &t).unwrap(), unit_lambda(0));
    assert_eq!(eval_lb(&gx, &gv, &t).unwrap(), unit_lambda(0).neg());
    assert!(eval_lb(&gu, &gu, &t).unwrap().is_zero());
}

#[test]
fn ungradable_tables_are_rejected() {
    let t = cd_to_dpva(&hyp()).unwrap();
    let mut ungraded = t.clone();
    ungraded.graded = false;
    assert!(matches!(dpva_to_cd(&ungraded), Err(Error::Grading(_))));

    let mut steep = t.clone();
    steep.set(u(), v(), unit_lambda(2)).unwrap();
    assert!(matches!(dpva_to_cd(&steep), Err(Error::Grading(_))));

    let mut mixed = t.clone();
    mixed.set(u(), x(), LambdaPoly::constant(TensorPoly::unit(2).scale(&doublecd::scalar::q(2)))).unwrap();
    assert!(matches!(dpva_to_cd(&mixed), Err(Error::Inconsistent(_))));
}
