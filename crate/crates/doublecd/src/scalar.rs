use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn binom(n: u32, k: u32) -> Q {
    if k > n {
        return Q::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Q::from_integer(acc)
}

/// Multinomial coefficient n! / (a! b! c!) with a + b + c = n.
pub fn multinomial3(a: u32, b: u32, c: u32) -> Q {
    binom(a + b + c, a) * binom(b + c, b)
}

pub fn sign_pow(p: u32) -> Q {
    if p % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

pub fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn is_pm_one(c: &Q) -> bool {
    c.abs().is_one()
}
