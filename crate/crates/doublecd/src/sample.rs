//! Seeded random generation of test inputs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ncpoly::{GenSym, NCPoly, Word};
use crate::scalar::q;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub samples: usize,
    pub seed: u64,
    pub max_degree: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { samples: 64, seed: 0x5eed, max_degree: 3 }
    }
}

/// A random word of length 1..=max_len over `alphabet`.
pub fn random_word(rng: &mut Rng8, alphabet: &[GenSym], max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len.max(1));
    Word::from_syms((0..len).map(|_| *alphabet.choose(rng).expect("nonempty alphabet")).collect())
}

/// A random word of length 0..=max_len.
pub fn random_word_with_unit(rng: &mut Rng8, alphabet: &[GenSym], max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_syms((0..len).map(|_| *alphabet.choose(rng).expect("nonempty alphabet")).collect())
}

pub fn random_coeff(rng: &mut Rng8) -> crate::scalar::Q {
    let v: i64 = rng.gen_range(-3..=3);
    if v == 0 {
        q(1)
    } else {
        q(v)
    }
}

/// A random combination of up to `terms` words with small integer coefficients.
pub fn random_poly(rng: &mut Rng8, alphabet: &[GenSym], max_len: usize, terms: usize) -> NCPoly {
    let n = rng.gen_range(1..=terms.max(1));
    NCPoly::from_terms((0..n).map(|_| {
        let w = random_word(rng, alphabet, max_len);
        (w, random_coeff(rng))
    }))
}

/// All words of length ≤ max_len over `alphabet`, including the unit.
pub fn all_words(alphabet: &[GenSym], max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::one()];
    let mut layer = vec![Word::one()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for s in alphabet {
                next.push(w.concat(&Word::sym(*s)));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
