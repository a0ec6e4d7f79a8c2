//! Euler-Fermat quotients `q_n(a) = (a^φ(n) - 1) / n` and the lemma checks
//! built on them.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::arith::{
    euler_phi, factorize_u64, inv_mod_u64, is_prime_u64, mod_pow, pow_mod_u64, to_bigint,
    valuation_u64, Residue,
};
use crate::bernoulli::BernoulliCache;
use crate::error::{Error, Result};
use crate::rational::{p_adic_valuation, to_residue};
use crate::report::{CongruenceReport, IdentityId, Params, PadicVerdict};

/// `q_n(a)` together with its arguments; `n * value = a^φ(n) - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientValue {
    pub n: u64,
    pub a: i64,
    pub value: BigInt,
}

pub fn totient_u64(n: u64) -> Result<u64> {
    let phi = euler_phi(&factorize_u64(n)?);
    Ok(phi.to_u64().expect("φ(n) <= n"))
}

fn check_coprime(n: u64, a: i64) -> Result<()> {
    if n < 2 {
        return Err(Error::PreconditionViolated(format!("n = {n} must exceed 1")));
    }
    if num_integer::gcd(a.unsigned_abs(), n) != 1 {
        return Err(Error::NotCoprime { a, n });
    }
    Ok(())
}

pub fn fermat_quotient(n: u64, a: i64) -> Result<QuotientValue> {
    check_coprime(n, a)?;
    let phi = totient_u64(n)?;
    let power = BigInt::from(a).pow(phi as u32);
    let (value, rem) = (power - BigInt::one()).div_rem(&BigInt::from(n));
    debug_assert!(rem == BigInt::from(0), "Euler's theorem");
    Ok(QuotientValue { n, a, value })
}

/// `q_n(a) mod m`, from `a^φ(n) mod n·m`.
pub fn fermat_quotient_mod(n: u64, a: i64, m: &BigUint) -> Result<Residue> {
    check_coprime(n, a)?;
    let phi = totient_u64(n)?;
    fermat_quotient_mod_phi(n, phi, a, m)
}

/// As [`fermat_quotient_mod`] with `φ(n)` supplied by the caller.
pub(crate) fn fermat_quotient_mod_phi(n: u64, phi: u64, a: i64, m: &BigUint) -> Result<Residue> {
    let nm = BigUint::from(n) * m;
    if let Some(nm64) = nm.to_u64() {
        let base = (a as i128).rem_euclid(nm64 as i128) as u64;
        let x = pow_mod_u64(base, phi, nm64);
        let q = x.checked_sub(1).unwrap_or(nm64 - 1) / n;
        return Residue::new(&BigInt::from(q), m);
    }
    let x = mod_pow(&BigInt::from(a), &BigUint::from(phi), &nm)?;
    let shifted = (x.rep() + &nm - 1u32) % &nm;
    Residue::new(&to_bigint(&(shifted / n)), m)
}

/// `φ(p^α) ≡ p^α B_{φ(p^{2α})} (mod p^{2α})`, decided p-adically.
///
/// The residues stored in the report are both sides reduced mod `p^{2α}`;
/// `p^α B_{φ(p^{2α})}` is p-integral, so this reduction is well defined.
pub fn lemma1_check(p: u64, alpha: u32, cache: &BernoulliCache) -> Result<CongruenceReport> {
    if !is_prime_u64(p) {
        return Err(Error::PreconditionViolated(format!("{p} is not prime")));
    }
    if alpha == 0 {
        return Err(Error::PreconditionViolated("alpha must be positive".into()));
    }
    let pa = BigUint::from(p).pow(alpha);
    let modulus = &pa * &pa;
    let phi_pa = &pa / p * (p - 1);
    let index = (&modulus / p * (p - 1))
        .to_usize()
        .ok_or(Error::IndexCapExceeded {
            index: usize::MAX,
            cap: cache.max_index(),
        })?;
    let b = cache.bernoulli_number(index)?;
    let lhs = BigRational::from_integer(to_bigint(&phi_pa));
    let rhs = b * to_bigint(&pa);
    let valuation = p_adic_valuation(&(&lhs - &rhs), p);
    let required = 2 * alpha;
    Ok(CongruenceReport {
        identity: IdentityId::Lemma1,
        params: Params::default().with_p(p).with_alpha(alpha),
        lhs: Some(to_residue(&lhs, &modulus)?),
        rhs: Some(to_residue(&rhs, &modulus)?),
        modulus,
        holds: valuation.at_least(required as i64),
        padic: Some(PadicVerdict {
            valuation,
            required,
        }),
        skipped_reason: None,
    })
}

/// `q_{n²}(a) ≡ q_n(a) - n q_n(a)² / 2 (mod n²)` for `gcd(n, 6a) = 1`.
pub fn lemma3_check(n: u64, a: i64) -> Result<CongruenceReport> {
    check_coprime(n, a)?;
    if n % 2 == 0 || n % 3 == 0 {
        return Err(Error::NotCoprimeTo6(n));
    }
    let n2 = n.checked_mul(n).ok_or_else(|| {
        Error::PreconditionViolated(format!("n = {n} too large for a word-sized n²"))
    })?;
    let m = BigUint::from(n2);
    let phi = totient_u64(n)?;
    let lhs = fermat_quotient_mod_phi(n2, phi * n, a, &m)?;
    let q = to_bigint(fermat_quotient_mod_phi(n, phi, a, &m)?.rep());
    let half = BigInt::from(inv_mod_u64(2, n2).expect("n odd"));
    let rhs = Residue::new(&(&q - half * n * &q * &q), &m)?;
    Ok(CongruenceReport::compared(
        IdentityId::Lemma3,
        Params::n(n).with_a(a),
        lhs,
        rhs,
    ))
}

/// Localization at `p^α ∥ n`:
/// `2q_n(a) - n q_n(a)² ≡ (φ(q)/q)(2q_{p^α}(a) - p^α q_{p^α}(a)²) (mod p^{2α})`
/// where `n = p^α q`. `α` is read off `n`.
pub fn lemma4_check(n: u64, a: i64, p: u64) -> Result<CongruenceReport> {
    check_coprime(n, a)?;
    if !is_prime_u64(p) {
        return Err(Error::PreconditionViolated(format!("{p} is not prime")));
    }
    if n % p != 0 {
        return Err(Error::PrimeDoesNotDivide { p, n });
    }
    let alpha = valuation_u64(n, p);
    let pa = p.pow(alpha);
    let q = n / pa;
    let modulus = BigUint::from(pa) * pa;

    let side = |m: u64, quotient: &Residue| {
        let qv = to_bigint(quotient.rep());
        BigInt::from(2) * &qv - BigInt::from(m) * &qv * &qv
    };
    let qn = fermat_quotient_mod(n, a, &modulus)?;
    let lhs = Residue::new(&side(n, &qn), &modulus)?;

    let qpa = fermat_quotient_mod(pa, a, &modulus)?;
    let ratio = BigInt::from(totient_u64(q)?)
        * to_bigint(crate::arith::mod_inv(&BigInt::from(q), &modulus)?.rep());
    let rhs = Residue::new(&(ratio * side(pa, &qpa)), &modulus)?;
    Ok(CongruenceReport::compared(
        IdentityId::Lemma4,
        Params::n(n).with_a(a).with_p(p).with_alpha(alpha),
        lhs,
        rhs,
    ))
}
