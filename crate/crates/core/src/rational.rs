//! Exact rationals, p-adic valuations, and congruences between p-integral
//! rationals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::{mod_inv, to_bigint, FactoredInteger, Residue};
use crate::error::Result;

/// Reduced fraction with positive denominator.
pub type ExactRational = BigRational;

pub fn rational(num: i64, den: i64) -> ExactRational {
    BigRational::new(num.into(), den.into())
}

/// `v_p(x)`, with `Infinite` standing for `v_p(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn at_least(self, k: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= k,
            Valuation::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn p_adic_valuation(x: &ExactRational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    Valuation::Finite(int_valuation(x.numer(), &p) - int_valuation(x.denom(), &p))
}

/// `x ≡ y (mod p^k)` in the localization at `p`.
pub fn padic_congruent(x: &ExactRational, y: &ExactRational, p: u64, k: u32) -> bool {
    p_adic_valuation(&(x - y), p).at_least(k as i64)
}

/// `x ≡ y (mod m)`: `v_p(x - y) >= k` for every `p^k ∥ m`.
pub fn congruent_mod(x: &ExactRational, y: &ExactRational, m: &FactoredInteger) -> bool {
    let diff = x - y;
    m.factors().iter().all(|(p, k)| {
        let p = p.try_into().expect("prime fits in u64");
        p_adic_valuation(&diff, p).at_least(*k as i64)
    })
}

/// Image of `x` in `Z/mZ`; requires `gcd(denominator, m) = 1`.
pub fn to_residue(x: &ExactRational, modulus: &BigUint) -> Result<Residue> {
    let inv = mod_inv(x.denom(), modulus)?;
    Residue::new(&(x.numer() * to_bigint(inv.rep())), modulus)
}

/// The integer `rep` viewed as a rational.
pub fn residue_value(r: &Residue) -> ExactRational {
    BigRational::from_integer(to_bigint(r.rep()))
}

/// Checks that `x` has no factor `p` in its denominator.
pub fn is_p_integral(x: &ExactRational, p: u64) -> bool {
    !(x.denom() % p).is_zero()
}
