//! Integer and modular arithmetic: residues, powering, inverses, CRT,
//! factorization and the multiplicative functions built on it.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A canonical residue class: `0 <= rep < modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Residue {
    rep: BigUint,
    modulus: BigUint,
}

impl Residue {
    /// Reduces `value` into `[0, modulus)`.
    pub fn new(value: &BigInt, modulus: &BigUint) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::ZeroModulus);
        }
        let m = BigInt::from(modulus.clone());
        let rep = value.mod_floor(&m).to_biguint().expect("mod_floor is nonnegative");
        Ok(Self {
            rep,
            modulus: modulus.clone(),
        })
    }

    pub fn from_u64(value: u64, modulus: u64) -> Result<Self> {
        Self::new(&BigInt::from(value), &BigUint::from(modulus))
    }

    pub fn zero(modulus: &BigUint) -> Result<Self> {
        Self::new(&BigInt::zero(), modulus)
    }

    pub fn rep(&self) -> &BigUint {
        &self.rep
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// Reduces this residue to a modulus dividing the current one.
    pub fn reduce(&self, modulus: &BigUint) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::ZeroModulus);
        }
        if !(&self.modulus % modulus).is_zero() {
            return Err(Error::PreconditionViolated(format!(
                "{} does not divide {}",
                modulus, self.modulus
            )));
        }
        Ok(Self {
            rep: &self.rep % modulus,
            modulus: modulus.clone(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.rep, self.modulus)
    }
}

pub fn mod_pow(base: &BigInt, exponent: &BigUint, modulus: &BigUint) -> Result<Residue> {
    let b = Residue::new(base, modulus)?;
    let rep = b.rep.modpow(exponent, modulus);
    Ok(Residue {
        rep,
        modulus: modulus.clone(),
    })
}

pub fn mod_inv(a: &BigInt, modulus: &BigUint) -> Result<Residue> {
    if modulus.is_zero() {
        return Err(Error::ZeroModulus);
    }
    let m = BigInt::from(modulus.clone());
    let egcd = a.mod_floor(&m).extended_gcd(&m);
    if !egcd.gcd.is_one() {
        return Err(Error::NotInvertible {
            value: a.clone(),
            modulus: modulus.clone(),
        });
    }
    Residue::new(&egcd.x, modulus)
}

/// Inverse of `a` modulo `m` for word-sized moduli, `None` if `gcd(a, m) > 1`.
pub fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = ((a % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Combines residues with pairwise-coprime moduli into one residue modulo
/// their product.
pub fn crt_combine(parts: &[Residue]) -> Result<Residue> {
    let (first, rest) = parts.split_first().ok_or(Error::EmptyCombination)?;
    let mut acc = first.clone();
    for part in rest {
        if !acc.modulus.gcd(&part.modulus).is_one() {
            return Err(Error::ModuliNotCoprime(
                acc.modulus.clone(),
                part.modulus.clone(),
            ));
        }
        // x = r1 + m1 * ((r2 - r1) / m1 mod m2)
        let m1 = BigInt::from(acc.modulus.clone());
        let inv = mod_inv(&m1, &part.modulus)?;
        let delta = BigInt::from(part.rep.clone()) - BigInt::from(acc.rep.clone());
        let t = Residue::new(&(delta * BigInt::from(inv.rep)), &part.modulus)?;
        let modulus = &acc.modulus * &part.modulus;
        let value = BigInt::from(acc.rep.clone()) + m1 * BigInt::from(t.rep);
        acc = Residue::new(&value, &modulus)?;
    }
    Ok(acc)
}

/// A positive integer with its prime factorization, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl FactoredInteger {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// Exponent of `p` in this integer (0 when `p` does not divide it).
    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Splits off the full power of `p`: returns `(p^alpha, cofactor)`.
    pub fn split_prime_power(&self, p: &BigUint) -> (FactoredInteger, FactoredInteger) {
        let (mut pp, mut rest) = (Vec::new(), Vec::new());
        for (q, e) in &self.factors {
            if q == p {
                pp.push((q.clone(), *e));
            } else {
                rest.push((q.clone(), *e));
            }
        }
        (Self::from_factors(pp), Self::from_factors(rest))
    }

    fn from_factors(factors: Vec<(BigUint, u32)>) -> Self {
        let value = factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        Self { value, factors }
    }
}

/// Effort bound for the rho stage of factorization.
#[derive(Debug, Clone, Copy)]
pub struct FactorConfig {
    pub rho_iterations: u64,
    pub seed: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        Self {
            rho_iterations: 1 << 22,
            seed: 0x5eed,
        }
    }
}

const TRIAL_LIMIT: u32 = 1_000_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

pub fn factorize(n: &BigUint) -> Result<FactoredInteger> {
    factorize_with(n, &FactorConfig::default())
}

pub fn factorize_u64(n: u64) -> Result<FactoredInteger> {
    factorize(&BigUint::from(n))
}

pub fn factorize_with(n: &BigUint, config: &FactorConfig) -> Result<FactoredInteger> {
    if n.is_zero() {
        return Err(Error::PreconditionViolated("cannot factor 0".into()));
    }
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let mut rest = n.clone();
    let mut rest_is_prime = false;
    for &p in small_primes() {
        let p64 = p as u64;
        if let Some(r) = rest.to_u64() {
            if p64 * p64 > r {
                rest_is_prime = true;
                break;
            }
        }
        let pb = BigUint::from(p);
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            factors.push((pb, e));
        }
    }
    if !rest.is_one() {
        let limit = BigUint::from(TRIAL_LIMIT as u64 * TRIAL_LIMIT as u64);
        if rest_is_prime || rest < limit {
            factors.push((rest, 1));
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let mut large = Vec::new();
            split_large(rest, config, &mut rng, &mut large)?;
            large.sort();
            for p in large {
                match factors.last_mut() {
                    Some((q, e)) if *q == p => *e += 1,
                    _ => factors.push((p, 1)),
                }
            }
        }
    }
    Ok(FactoredInteger {
        value: n.clone(),
        factors,
    })
}

fn split_large(
    n: BigUint,
    config: &FactorConfig,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<BigUint>,
) -> Result<()> {
    if is_probable_prime(&n) {
        out.push(n);
        return Ok(());
    }
    let d = brent_rho(&n, config, rng).ok_or_else(|| Error::FactorizationLimitExceeded(n.clone()))?;
    let cofactor = &n / &d;
    split_large(d, config, rng, out)?;
    split_large(cofactor, config, rng, out)
}

/// Brent's variant of Pollard's rho. Returns a nontrivial divisor of the
/// composite `n`, or `None` once the iteration budget is spent.
fn brent_rho(n: &BigUint, config: &FactorConfig, rng: &mut ChaCha8Rng) -> Option<BigUint> {
    let one = BigUint::one();
    let mut budget = config.rho_iterations;
    let batch = 128u64;
    while budget > 0 {
        let c = rng.gen_biguint_range(&one, n);
        let mut y = rng.gen_biguint_range(&one, n);
        let step = |v: &BigUint| (v * v + &c) % n;
        let (mut g, mut r, mut q) = (one.clone(), 1u64, one.clone());
        let (mut x, mut ys) = (y.clone(), y.clone());
        while g.is_one() && budget > 0 {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let m = batch.min(r - k);
                for _ in 0..m {
                    y = step(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
                budget = budget.saturating_sub(m);
            }
            r *= 2;
        }
        if &g == n {
            // Batched product overshot; step back one at a time.
            loop {
                ys = step(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && &g != n {
            return Some(g);
        }
    }
    None
}

const WITNESSES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Strong probable-prime test to the first thirteen prime bases; exact below
/// 3.3e24.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &WITNESSES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES[..12] {
        let p = p as u64;
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES[..12] {
        let mut x = pow_mod_u64(a as u64, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn euler_phi(n: &FactoredInteger) -> BigUint {
    n.factors.iter().fold(BigUint::one(), |acc, (p, e)| {
        acc * p.pow(e - 1) * (p - 1u32)
    })
}

pub fn moebius(n: &FactoredInteger) -> i8 {
    if n.factors.iter().any(|&(_, e)| e > 1) {
        0
    } else if n.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn divisors(n: &FactoredInteger) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    for (p, e) in &n.factors {
        let current = out.len();
        let mut pk = BigUint::one();
        for _ in 0..*e {
            pk *= p;
            for i in 0..current {
                out.push(&out[i] * &pk);
            }
        }
    }
    out.sort();
    out
}

/// Exponent of the prime `p` in `n`; `n` must be nonzero.
pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0 && p > 1);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub(crate) fn to_bigint(n: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.clone())
}
