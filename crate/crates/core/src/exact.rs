//! Exact-rational evaluation of both sides of every identity.
//!
//! Nothing here reduces modulo anything: sums are accumulated as reduced
//! fractions and Fermat quotients are materialized in full. The verifier
//! uses these values as an oracle for the modular path.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{divisors, factorize_u64, moebius};
use crate::error::{Error, Result};
use crate::fermat::{fermat_quotient, totient_u64};
use crate::rational::ExactRational;
use crate::sums::{SumKind, SumSpec, TermFilter};

/// `sum 1/den` over the retained terms of a sum, exactly.
pub fn exact_sum(n: u64, kind: SumKind, filter: TermFilter) -> ExactRational {
    let spec = SumSpec {
        n,
        kind,
        filter,
        modulus: 1u32.into(),
    };
    spec.denominators()
        .map(|den| BigRational::new(1.into(), den.into()))
        .fold(BigRational::zero(), |acc, t| acc + t)
}

fn frac(num: i64, den: i64) -> ExactRational {
    BigRational::new(num.into(), den.into())
}

/// The quotient polynomial paired with `kind`, with exact `q_n(2)`, `q_n(3)`.
/// Only the quotients the polynomial uses are computed, so `n` need only be
/// coprime to those bases.
pub fn quotient_polynomial_exact(n: u64, kind: SumKind) -> Result<ExactRational> {
    let nn = BigRational::from_integer(n.into());
    let q = |a: i64| -> Result<ExactRational> {
        Ok(BigRational::from_integer(fermat_quotient(n, a)?.value))
    };
    Ok(match kind {
        SumKind::Half => {
            let q2 = q(2)?;
            frac(-2, 1) * &q2 + &nn * &q2 * &q2
        }
        SumKind::Step(3) => {
            let q3 = q(3)?;
            frac(1, 2) * &q3 - frac(1, 4) * &nn * &q3 * &q3
        }
        SumKind::Step(4) => {
            let q2 = q(2)?;
            frac(3, 4) * &q2 - frac(3, 8) * &nn * &q2 * &q2
        }
        SumKind::Step(6) => {
            let (q2, q3) = (q(2)?, q(3)?);
            frac(1, 3) * &q2 + frac(1, 4) * &q3
                - &nn * (frac(1, 6) * &q2 * &q2 + frac(1, 8) * &q3 * &q3)
        }
        SumKind::Step(d) => return Err(Error::InvalidDenominator(d)),
    })
}

/// `q(3)/2`, `3q(2)/4` or `q(2)/3 + q(3)/4` with `q = q_{p^{2α}}` exact.
pub fn lemma2_rhs_exact(p: u64, alpha: u32, d: u64) -> Result<ExactRational> {
    let pa2 = p
        .checked_pow(2 * alpha)
        .ok_or_else(|| Error::PreconditionViolated(format!("{p}^{} overflows", 2 * alpha)))?;
    let q = |a: i64| -> Result<ExactRational> {
        Ok(BigRational::from_integer(fermat_quotient(pa2, a)?.value))
    };
    Ok(match d {
        3 => frac(1, 2) * q(3)?,
        4 => frac(3, 4) * q(2)?,
        6 => frac(1, 3) * q(2)? + frac(1, 4) * q(3)?,
        _ => return Err(Error::InvalidDenominator(d)),
    })
}

/// `(q_{n²}(a), q_n(a) - n q_n(a)²/2)`.
pub fn lemma3_sides_exact(n: u64, a: i64) -> Result<(ExactRational, ExactRational)> {
    let n2 = n
        .checked_mul(n)
        .ok_or_else(|| Error::PreconditionViolated(format!("{n}² overflows")))?;
    let lhs = BigRational::from_integer(fermat_quotient(n2, a)?.value);
    let q = BigRational::from_integer(fermat_quotient(n, a)?.value);
    let rhs = &q - frac(1, 2) * BigRational::from_integer(n.into()) * &q * &q;
    Ok((lhs, rhs))
}

/// `(2q_n - n q_n², (φ(q)/q)(2q_{p^α} - p^α q_{p^α}²))` with `n = p^α q`.
pub fn lemma4_sides_exact(n: u64, a: i64, p: u64) -> Result<(ExactRational, ExactRational)> {
    if p < 2 || n % p != 0 {
        return Err(Error::PrimeDoesNotDivide { p, n });
    }
    let mut pa = 1;
    while n % (pa * p) == 0 {
        pa *= p;
    }
    let q = n / pa;
    let side = |m: u64| -> Result<ExactRational> {
        let v = fermat_quotient(m, a)?.value;
        Ok(BigRational::from_integer(2 * &v - BigInt::from(m) * &v * &v))
    };
    let ratio = BigRational::new(totient_u64(q)?.into(), q.into());
    Ok((side(n)?, ratio * side(pa)?))
}

/// Both sides of the Möbius rearrangement as exact rationals.
pub fn moebius_sides_exact(n: u64, p: u64, d: u64) -> Result<(ExactRational, ExactRational)> {
    let kind = SumKind::step(d)?;
    if p < 2 || n % p != 0 {
        return Err(Error::PrimeDoesNotDivide { p, n });
    }
    let mut q = n;
    while q % p == 0 {
        q /= p;
    }
    let lhs = exact_sum(n, kind, TermFilter::CoprimeToN);
    let mut rhs = BigRational::zero();
    for s in divisors(&factorize_u64(q)?) {
        let s = s.to_u64().expect("divisor of a u64");
        let mu = moebius(&factorize_u64(s)?);
        if mu != 0 {
            rhs += frac(mu.into(), s as i64)
                * exact_sum(n / s, kind, TermFilter::NotDivisibleBy(p));
        }
    }
    Ok((lhs, rhs))
}
