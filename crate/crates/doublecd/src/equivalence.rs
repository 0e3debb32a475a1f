//! The correspondence between double Courant–Dorfman algebras and double
//! Poisson vertex algebras freely generated in weights 0 and 1.

use crate::dcd::{check_cd_axioms, eval_pairing, DcdStructure};
use crate::diffalg::{d, LambdaPoly, Var};
use crate::dpva::{check_dpva, LambdaBracketTable};
use crate::error::{Error, Result};
use crate::ncpoly::{GenSym, NCPoly, Sort};
use crate::report::Report;
use crate::sample::CheckOptions;

/// ⟪e_λ f⟫ = ⟪e,f⟫ + ⟨⟨e,f⟩⟩λ, ⟪e_λ a⟫ = ⟨⟨e,∂a⟩⟩, ⟪a_λ e⟫ = −⟨⟨∂a,e⟩⟩, ⟪a_λ b⟫ = 0.
pub fn cd_to_dpva(s: &DcdStructure) -> Result<LambdaBracketTable> {
    let gens: Vec<GenSym> = s.a_gens().iter().chain(s.e_gens()).copied().collect();
    let mut t = LambdaBracketTable::new(&gens, s.derivation.clone())?;
    t.graded = true;
    for e in s.e_gens() {
        let ep = NCPoly::sym(*e);
        for f in s.e_gens() {
            let val = LambdaPoly::in_lambda(vec![s.bracket_of(e, f).total(), s.pairing_of(e, f)]);
            t.set(*e, *f, val)?;
        }
        for a in s.a_gens() {
            let da = d(&NCPoly::sym(*a), &s.derivation)?;
            t.set(*e, *a, LambdaPoly::constant(eval_pairing(&ep, &da, s)?))?;
            t.set(*a, *e, LambdaPoly::constant(eval_pairing(&da, &ep, s)?.neg()))?;
        }
    }
    Ok(t)
}

/// Reads off the pairing (λ¹ part) and bracket (λ⁰ part) on E-generators and
/// validates the mixed-weight entries against them.
pub fn dpva_to_cd(t: &LambdaBracketTable) -> Result<DcdStructure> {
    if !t.graded {
        return Err(Error::Grading("conversion needs a graded table".into()));
    }
    let a_gens = t.gens_of(Sort::A);
    let e_gens = t.gens_of(Sort::E);
    let mut s = DcdStructure::new(&a_gens, &e_gens, t.derivation.clone())?;
    for e in &e_gens {
        for f in &e_gens {
            let val = t.get(e, f)?;
            if val.degree(Var::Lambda) > 1 {
                return Err(Error::Grading(format!(
                    "entry ({}, {}) has lambda-degree {} but weight -1 allows at most 1",
                    e,
                    f,
                    val.degree(Var::Lambda)
                )));
            }
            let pairing = val.coeff([1, 0]);
            if pairing.terms().any(|(ws, _)| ws.iter().any(|w| w.weight() != 0)) {
                return Err(Error::Grading(format!("lambda coefficient of ({}, {}) is not in A ox A: {}", e, f, pairing)));
            }
            s.set_pairing(*e, *f, pairing)?;
            s.set_bracket(*e, *f, &val.coeff([0, 0]))?;
        }
    }
    let check = |got: LambdaPoly, want: crate::ncpoly::TensorPoly, what: String| -> Result<()> {
        if got != LambdaPoly::constant(want.clone()) {
            return Err(Error::Inconsistent(format!("{} is {} but the pairing forces {}", what, got, want)));
        }
        Ok(())
    };
    for a in &a_gens {
        let da = d(&NCPoly::sym(*a), &s.derivation)?;
        for e in &e_gens {
            let ep = NCPoly::sym(*e);
            check(t.get(e, a)?, eval_pairing(&ep, &da, &s)?, format!("entry ({}, {})", e, a))?;
            check(t.get(a, e)?, eval_pairing(&da, &ep, &s)?.neg(), format!("entry ({}, {})", a, e))?;
        }
        for b in &a_gens {
            check(t.get(a, b)?, crate::ncpoly::TensorPoly::zero(2), format!("entry ({}, {})", a, b))?;
        }
    }
    Ok(s)
}

/// dpva_to_cd ∘ cd_to_dpva = id, plus the DPVA axioms for cd_to_dpva(S).
pub fn roundtrip_check(s: &DcdStructure, opts: &CheckOptions) -> Result<Report> {
    let mut report = Report::new("roundtrip");
    let t = cd_to_dpva(s)?;
    match dpva_to_cd(&t) {
        Ok(back) => {
            let same = back == *s;
            report.push_status("dcd-dpva-dcd", "theorem-CD-DPVA", same, "tables".into(), if same { "0".into() } else { "tables differ".into() });
        }
        Err(e) => report.push_status("dcd-dpva-dcd", "theorem-CD-DPVA", false, "conversion".into(), e.to_string()),
    }
    report.absorb(check_dpva(&t, opts)?);
    Ok(report)
}

/// cd_to_dpva ∘ dpva_to_cd = id, plus the DCD axioms for dpva_to_cd(T).
pub fn roundtrip_check_rev(t: &LambdaBracketTable, opts: &CheckOptions) -> Result<Report> {
    let mut report = Report::new("roundtrip");
    match dpva_to_cd(t) {
        Ok(s) => {
            let back = cd_to_dpva(&s)?;
            let same = back.same_tables(t);
            report.push_status("dpva-dcd-dpva", "theorem-CD-DPVA", same, "tables".into(), if same { "0".into() } else { "tables differ".into() });
            report.absorb(check_cd_axioms(&s, opts)?);
        }
        Err(e) => report.push_status("dpva-dcd-dpva", "theorem-CD-DPVA", false, "conversion".into(), e.to_string()),
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::DerivationTable;
    use crate::dpva::unit_lambda;
    use crate::fixtures::{hyp, single_e, zero};
    use crate::ncpoly::TensorPoly;

    #[test]
    fn hyp_table() {
        let t = cd_to_dpva(&hyp()).unwrap();
        let (x, u, v) = (GenSym::a("x"), GenSym::e("u"), GenSym::e("v"));
        assert_eq!(t.get(&u, &v).unwrap(), unit_lambda(1));
        assert_eq!(t.get(&v, &u).unwrap(), unit_lambda(1));
        assert!(t.get(&u, &u).unwrap().is_zero() && t.get(&v, &v).unwrap().is_zero());
        assert!(t.get(&u, &x).unwrap().is_zero());
        assert_eq!(t.get(&v, &x).unwrap(), LambdaPoly::constant(TensorPoly::unit(2)));
        assert_eq!(t.get(&x, &v).unwrap(), LambdaPoly::constant(TensorPoly::unit(2).neg()));
        assert!(t.graded);
    }

    #[test]
    fn zero_and_single() {
        assert_eq!(cd_to_dpva(&zero()).unwrap().entries().count(), 0);
        let t = cd_to_dpva(&single_e()).unwrap();
        let e = GenSym::e("e");
        assert_eq!(t.get(&e, &e).unwrap(), unit_lambda(1));
    }

    #[test]
    fn reading_off() {
        let e = GenSym::e("e");
        let mut t = LambdaBracketTable::new(&[e], DerivationTable::new()).unwrap();
        t.graded = true;
        t.set(e, e, unit_lambda(1)).unwrap();
        let s = dpva_to_cd(&t).unwrap();
        assert_eq!(s.pairing_of(&e, &e), TensorPoly::unit(2));
        assert!(s.bracket_of(&e, &e).is_zero());
        let mut empty = LambdaBracketTable::new(&[e], DerivationTable::new()).unwrap();
        empty.graded = true;
        let s = dpva_to_cd(&empty).unwrap();
        assert_eq!(s.pairing_entries().count() + s.bracket_entries().count(), 0);
        t.set(e, e, unit_lambda(2)).unwrap();
        assert!(matches!(dpva_to_cd(&t), Err(Error::Grading(_))));
    }

    #[test]
    fn roundtrips_on_fixtures() {
        let opts = CheckOptions { samples: 16, ..CheckOptions::default() };
        for s in [hyp(), zero(), single_e()] {
            let r = roundtrip_check(&s, &opts).unwrap();
            assert!(r.passed(), "{}", r.render_text());
            let r = roundtrip_check_rev(&cd_to_dpva(&s).unwrap(), &opts).unwrap();
            assert!(r.passed(), "{}", r.render_text());
        }
    }
}
