//! Restricted harmonic sums `sum 1/(n - d r)` reduced modulo `n²` or
//! `p^{2α}`, the Fermat-quotient polynomials they are congruent to, and the
//! Möbius rearrangement that links the two kinds of restriction.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

use crate::arith::{
    divisors, factorize_u64, inv_mod_u64, is_prime_u64, mod_inv, moebius, to_bigint,
    valuation_u64, Residue,
};
use crate::error::{Error, Result};
use crate::fermat::{fermat_quotient_mod_phi, totient_u64};

/// Which sum: `sum 1/r` for `r <= (n-1)/2`, or `sum 1/(n - d r)` for
/// `r <= floor(n/d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SumKind {
    Half,
    Step(u64),
}

impl SumKind {
    pub fn step(d: u64) -> Result<SumKind> {
        match d {
            3 | 4 | 6 => Ok(SumKind::Step(d)),
            _ => Err(Error::InvalidDenominator(d)),
        }
    }
}

/// Condition on the summation index `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TermFilter {
    CoprimeToN,
    NotDivisibleBy(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumSpec {
    pub n: u64,
    pub kind: SumKind,
    pub filter: TermFilter,
    pub modulus: BigUint,
}

impl SumSpec {
    /// Upper bound of the summation index.
    pub fn bound(&self) -> u64 {
        match self.kind {
            SumKind::Half => self.n.saturating_sub(1) / 2,
            SumKind::Step(d) => self.n / d,
        }
    }

    /// Denominators of the retained terms, in increasing `r`.
    pub fn denominators(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.bound())
            .filter(move |&r| match self.filter {
                TermFilter::CoprimeToN => num_integer::gcd(r, self.n) == 1,
                TermFilter::NotDivisibleBy(p) => r % p != 0,
            })
            .map(move |r| match self.kind {
                SumKind::Half => r,
                SumKind::Step(d) => self.n - d * r,
            })
    }
}

/// Sums the inverses of the retained denominators modulo `spec.modulus`,
/// reducing after every term. Fails with `NotInvertible` on the first term
/// that is not a unit.
pub fn restricted_sum(spec: &SumSpec) -> Result<Residue> {
    if let Some(m) = spec.modulus.to_u64() {
        let mut acc: u64 = 0;
        for den in spec.denominators() {
            let inv = inv_mod_u64(den, m).ok_or_else(|| Error::NotInvertible {
                value: den.into(),
                modulus: spec.modulus.clone(),
            })?;
            acc = ((acc as u128 + inv as u128) % m as u128) as u64;
        }
        return Residue::from_u64(acc, m);
    }
    let mut acc = BigInt::from(0);
    for den in spec.denominators() {
        acc += to_bigint(mod_inv(&den.into(), &spec.modulus)?.rep());
        acc %= to_bigint(&spec.modulus);
    }
    Residue::new(&acc, &spec.modulus)
}

fn square(n: u64) -> BigUint {
    BigUint::from(n) * n
}

fn ensure_coprime_to_6(n: u64) -> Result<()> {
    if n % 2 == 0 || n % 3 == 0 {
        Err(Error::NotCoprimeTo6(n))
    } else {
        Ok(())
    }
}

/// `sum_{r <= (n-1)/2, gcd(r, n) = 1} 1/r (mod n²)` for odd `n > 1`.
pub fn half_harmonic(n: u64) -> Result<Residue> {
    if n % 2 == 0 {
        return Err(Error::EvenModulus(n));
    }
    if n < 3 {
        return Err(Error::PreconditionViolated(format!("n = {n} must exceed 1")));
    }
    restricted_sum(&SumSpec {
        n,
        kind: SumKind::Half,
        filter: TermFilter::CoprimeToN,
        modulus: square(n),
    })
}

/// `sum_{r <= n/d, gcd(r, n) = 1} 1/(n - d r) (mod n²)`; empty sums are 0.
pub fn lehmer_sum(n: u64, d: u64) -> Result<Residue> {
    let kind = SumKind::step(d)?;
    if n < 2 {
        return Err(Error::PreconditionViolated(format!("n = {n} must exceed 1")));
    }
    if num_integer::gcd(n, d) != 1 {
        return Err(Error::NotCoprimeToD { n, d });
    }
    restricted_sum(&SumSpec {
        n,
        kind,
        filter: TermFilter::CoprimeToN,
        modulus: square(n),
    })
}

/// `(α, p^{2α})` for a prime `p >= 5` dividing `n` with `gcd(n, 6) = 1`.
fn localize(n: u64, p: u64) -> Result<(u32, BigUint)> {
    if !is_prime_u64(p) || p < 5 {
        return Err(Error::PreconditionViolated(format!("p = {p} must be a prime >= 5")));
    }
    if n == 0 || n % p != 0 {
        return Err(Error::PrimeDoesNotDivide { p, n });
    }
    ensure_coprime_to_6(n)?;
    let alpha = valuation_u64(n, p);
    Ok((alpha, BigUint::from(p).pow(2 * alpha)))
}

/// `sum_{r <= n/d, p ∤ r} 1/(n - d r) (mod p^{2α})` with `p^α ∥ n`.
pub fn lemma2_sum(n: u64, p: u64, d: u64) -> Result<Residue> {
    let kind = SumKind::step(d)?;
    let (_, modulus) = localize(n, p)?;
    restricted_sum(&SumSpec {
        n,
        kind,
        filter: TermFilter::NotDivisibleBy(p),
        modulus,
    })
}

/// Evaluates the Fermat-quotient polynomial paired with `kind`:
///
/// * half: `-2 q(2) + n q(2)²`
/// * d = 3: `q(3)/2 - n q(3)²/4`
/// * d = 4: `3 q(2)/4 - 3 n q(2)²/8`
/// * d = 6: `q(2)/3 + q(3)/4 - n (q(2)²/6 + q(3)²/8)`
///
/// where `q(a)` is the supplied value of a Fermat quotient modulo `modulus`.
/// The constant denominators must be units mod `modulus`.
pub fn quotient_polynomial(
    kind: SumKind,
    n: &BigInt,
    q2: &BigInt,
    q3: &BigInt,
    modulus: &BigUint,
) -> Result<Residue> {
    let inv = |c: u64| -> Result<BigInt> { Ok(to_bigint(mod_inv(&c.into(), modulus)?.rep())) };
    let value = match kind {
        SumKind::Half => -2 * q2 + n * q2 * q2,
        SumKind::Step(3) => inv(2)? * q3 - inv(4)? * n * q3 * q3,
        SumKind::Step(4) => 3 * inv(4)? * q2 - 3 * inv(8)? * n * q2 * q2,
        SumKind::Step(6) => {
            inv(3)? * q2 + inv(4)? * q3 - n * (inv(6)? * q2 * q2 + inv(8)? * q3 * q3)
        }
        SumKind::Step(d) => return Err(Error::InvalidDenominator(d)),
    };
    Residue::new(&value, modulus)
}

fn quotients_mod_square(n: u64, kind: SumKind) -> Result<(BigInt, BigInt)> {
    let m = square(n);
    let phi = totient_u64(n)?;
    let q2 = to_bigint(fermat_quotient_mod_phi(n, phi, 2, &m)?.rep());
    let q3 = match kind {
        SumKind::Half | SumKind::Step(4) => BigInt::from(0),
        _ => to_bigint(fermat_quotient_mod_phi(n, phi, 3, &m)?.rep()),
    };
    Ok((q2, q3))
}

/// Right-hand side of the composite-modulus congruences, mod `n²`,
/// for `gcd(n, 6) = 1`.
pub fn theorem_rhs(n: u64, d: u64) -> Result<Residue> {
    let kind = SumKind::step(d)?;
    if n < 2 {
        return Err(Error::PreconditionViolated(format!("n = {n} must exceed 1")));
    }
    ensure_coprime_to_6(n)?;
    let (q2, q3) = quotients_mod_square(n, kind)?;
    quotient_polynomial(kind, &n.into(), &q2, &q3, &square(n))
}

/// Right-hand side of the half-sum congruence, `-2 q_n(2) + n q_n(2)² (mod n²)`,
/// for odd `n > 1`.
pub fn half_rhs(n: u64) -> Result<Residue> {
    if n % 2 == 0 {
        return Err(Error::EvenModulus(n));
    }
    if n < 3 {
        return Err(Error::PreconditionViolated(format!("n = {n} must exceed 1")));
    }
    let (q2, q3) = quotients_mod_square(n, SumKind::Half)?;
    quotient_polynomial(SumKind::Half, &n.into(), &q2, &q3, &square(n))
}

/// Prime-modulus right-hand sides, mod `p²`. Half sums accept `p >= 3`,
/// the d-sums `p >= 5`.
pub fn lehmer_prime_rhs(p: u64, kind: SumKind) -> Result<Residue> {
    let min = if kind == SumKind::Half { 3 } else { 5 };
    if !is_prime_u64(p) || p < min {
        return Err(Error::PreconditionViolated(format!(
            "p = {p} must be a prime >= {min}"
        )));
    }
    match kind {
        SumKind::Half => half_rhs(p),
        SumKind::Step(d) => theorem_rhs(p, d),
    }
}

/// Right-hand side of the prime-power congruences, mod `p^{2α}`:
/// `q(3)/2`, `3 q(2)/4`, or `q(2)/3 + q(3)/4` with `q = q_{p^{2α}}`.
pub fn lemma2_rhs(p: u64, alpha: u32, d: u64) -> Result<Residue> {
    SumKind::step(d)?;
    let pa = p.checked_pow(alpha).filter(|_| p >= 5 && is_prime_u64(p)).ok_or_else(|| {
        Error::PreconditionViolated(format!("p = {p} must be a prime >= 5"))
    })?;
    let pa2 = pa.checked_mul(pa).ok_or_else(|| {
        Error::PreconditionViolated(format!("p^(2α) = {p}^{} overflows", 2 * alpha))
    })?;
    let modulus = BigUint::from(pa2);
    let phi = pa2 / p * (p - 1);
    let q = |a: i64| -> Result<BigInt> {
        Ok(to_bigint(fermat_quotient_mod_phi(pa2, phi, a, &modulus)?.rep()))
    };
    let inv = |c: u64| -> Result<BigInt> { Ok(to_bigint(mod_inv(&c.into(), &modulus)?.rep())) };
    let value = match d {
        3 => inv(2)? * q(3)?,
        4 => 3 * inv(4)? * q(2)?,
        _ => inv(3)? * q(2)? + inv(4)? * q(3)?,
    };
    Residue::new(&value, &modulus)
}

/// Both sides of the Möbius rearrangement, mod `p^{2α}`:
///
/// `sum_{gcd(r,n)=1} 1/(n - d r)` and
/// `sum_{s | q} (μ(s)/s) sum_{t <= n/(s d), p ∤ t} 1/(n/s - d t)`
/// where `n = p^α q`.
pub fn moebius_decomposition(n: u64, p: u64, d: u64) -> Result<(Residue, Residue)> {
    let kind = SumKind::step(d)?;
    let (alpha, modulus) = localize(n, p)?;
    let q = n / p.pow(alpha);
    let lhs = restricted_sum(&SumSpec {
        n,
        kind,
        filter: TermFilter::CoprimeToN,
        modulus: modulus.clone(),
    })?;
    let mut rhs = BigInt::from(0);
    for s in divisors(&factorize_u64(q)?) {
        let s = s.to_u64().expect("divisor of a u64");
        let mu = moebius(&factorize_u64(s)?);
        if mu == 0 {
            continue;
        }
        let inner = restricted_sum(&SumSpec {
            n: n / s,
            kind,
            filter: TermFilter::NotDivisibleBy(p),
            modulus: modulus.clone(),
        })?;
        let weight = to_bigint(mod_inv(&s.into(), &modulus)?.rep()) * i64::from(mu);
        rhs += weight * to_bigint(inner.rep());
    }
    Ok((lhs, Residue::new(&rhs, &modulus)?))
}

pub fn moebius_decomposition_check(n: u64, p: u64, d: u64) -> Result<bool> {
    let (lhs, rhs) = moebius_decomposition(n, p, d)?;
    Ok(lhs == rhs)
}
