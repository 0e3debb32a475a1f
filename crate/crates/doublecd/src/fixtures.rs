//! Small named structures used by tests, the CLI and the corpus.

use crate::diffalg::DerivationTable;
use crate::double_bracket::DoubleBracketTable;
use crate::dcd::DcdStructure;
use crate::ncpoly::{GenSym, NCPoly, TensorPoly};

/// A free on x, E free on u, v; ∂x = u, ⟨⟨u,v⟩⟩ = ⟨⟨v,u⟩⟩ = 1⊗1, bracket 0.
pub fn hyp() -> DcdStructure {
    hyp_with_uu(false)
}

/// As [`hyp`] but with ⟨⟨u,u⟩⟩ = 1⊗1, which breaks ⟨⟨∂a,∂b⟩⟩ = 0.
pub fn bad() -> DcdStructure {
    hyp_with_uu(true)
}

fn hyp_with_uu(uu: bool) -> DcdStructure {
    let x = GenSym::a("x");
    let u = GenSym::e("u");
    let v = GenSym::e("v");
    let mut der = DerivationTable::new();
    der.set(x, NCPoly::sym(u)).expect("weight-1 image");
    let mut s = DcdStructure::new(&[x], &[u, v], der).expect("valid generators");
    s.set_pairing(u, v, TensorPoly::unit(2)).expect("pairing");
    s.set_pairing(v, u, TensorPoly::unit(2)).expect("pairing");
    if uu {
        s.set_pairing(u, u, TensorPoly::unit(2)).expect("pairing");
    }
    s
}

/// A free on x with ∂x = 0, E free on u; everything zero.
pub fn zero() -> DcdStructure {
    let x = GenSym::a("x");
    let u = GenSym::e("u");
    let mut der = DerivationTable::new();
    der.set(x, NCPoly::zero()).expect("zero image");
    DcdStructure::new(&[x], &[u], der).expect("valid generators")
}

/// A = k, E free on e, ⟨⟨e,e⟩⟩ = 1⊗1.
pub fn single_e() -> DcdStructure {
    let e = GenSym::e("e");
    let mut s = DcdStructure::new(&[], &[e], DerivationTable::new()).expect("valid generators");
    s.set_pairing(e, e, TensorPoly::unit(2)).expect("pairing");
    s
}

/// ⟪x,x⟫ = x⊗1 − 1⊗x on one generator.
pub fn xx_double_poisson() -> DoubleBracketTable {
    let x = GenSym::a("x");
    let xp = NCPoly::sym(x);
    let one = NCPoly::one();
    let mut t = DoubleBracketTable::new(&[x]).expect("A-generator");
    t.set(x, x, TensorPoly::product(&[&xp, &one]).sub(&TensorPoly::product(&[&one, &xp]))).expect("rank 2");
    t
}
