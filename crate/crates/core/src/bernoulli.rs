//! Bernoulli numbers and polynomials over the rationals.
//!
//! Numbers come from the recurrence `sum_{k=0}^{m} C(m+1, k) B_k = 0` and are
//! memoized in a [`BernoulliCache`]. The cache is shared behind a lock: reads
//! run concurrently and extension takes the write lock, so no caller sees a
//! partially filled entry.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::is_prime_u64;
use crate::error::{Error, Result};
use crate::rational::ExactRational;

pub const DEFAULT_CAP: usize = 600;

#[derive(Debug)]
pub struct BernoulliCache {
    max_index: usize,
    table: RwLock<Vec<ExactRational>>,
    rows: RwLock<HashMap<usize, Arc<Vec<BigInt>>>>,
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new(DEFAULT_CAP)
    }
}

impl BernoulliCache {
    pub fn new(max_index: usize) -> Self {
        Self {
            max_index,
            table: RwLock::new(vec![BigRational::one()]),
            rows: RwLock::new(HashMap::new()),
        }
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    /// Number of entries computed so far.
    pub fn filled(&self) -> usize {
        self.table.read().unwrap().len()
    }

    fn check_cap(&self, index: usize) -> Result<()> {
        if index > self.max_index {
            return Err(Error::IndexCapExceeded {
                index,
                cap: self.max_index,
            });
        }
        Ok(())
    }

    pub fn bernoulli_number(&self, m: usize) -> Result<ExactRational> {
        self.check_cap(m)?;
        if let Some(b) = self.table.read().unwrap().get(m) {
            return Ok(b.clone());
        }
        let mut table = self.table.write().unwrap();
        while table.len() <= m {
            let next = next_bernoulli(&table);
            table.push(next);
        }
        Ok(table[m].clone())
    }

    /// `C(n, 0..=n)`, memoized per row.
    pub fn binomial_row(&self, n: usize) -> Arc<Vec<BigInt>> {
        if let Some(row) = self.rows.read().unwrap().get(&n) {
            return Arc::clone(row);
        }
        let row = Arc::new(binomial_row(n));
        self.rows
            .write()
            .unwrap()
            .entry(n)
            .or_insert_with(|| Arc::clone(&row));
        row
    }
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * (n - k) / (k + 1);
        row.push(c.clone());
    }
    row
}

/// Given `B_0..B_{m-1}`, returns `B_m` for `m >= 1`.
fn next_bernoulli(known: &[ExactRational]) -> ExactRational {
    let m = known.len();
    if m >= 3 && m % 2 == 1 {
        return BigRational::zero();
    }
    let mut sum = BigRational::zero();
    let mut c = BigInt::one(); // C(m+1, k)
    for (k, b) in known.iter().enumerate() {
        if !b.is_zero() {
            sum += b * &c;
        }
        c = c * (m + 1 - k) / (k + 1);
    }
    -sum / BigInt::from(m + 1)
}

pub fn bernoulli_number(m: usize, cache: &BernoulliCache) -> Result<ExactRational> {
    cache.bernoulli_number(m)
}

/// `B_m(x) = sum_k C(m, k) B_{m-k} x^k`.
pub fn bernoulli_poly(m: usize, x: &ExactRational, cache: &BernoulliCache) -> Result<ExactRational> {
    cache.check_cap(m)?;
    cache.bernoulli_number(m)?;
    let row = cache.binomial_row(m);
    let table = cache.table.read().unwrap();
    let mut acc = BigRational::zero();
    let mut power = BigRational::one();
    for k in 0..=m {
        let b = &table[m - k];
        if !b.is_zero() {
            acc += b * &power * &row[k];
        }
        power *= x;
    }
    Ok(acc)
}

/// `sum_{r=0}^{count-1} (x + r)^m`, via the Bernoulli-polynomial difference
/// `(B_{m+1}(x + count) - B_{m+1}(x)) / (m + 1)`.
pub fn power_sum(
    x: &ExactRational,
    count: u64,
    m: usize,
    cache: &BernoulliCache,
) -> Result<ExactRational> {
    cache.check_cap(m + 1)?;
    let end = x + BigRational::from_integer(count.into());
    let diff = bernoulli_poly(m + 1, &end, cache)? - bernoulli_poly(m + 1, x, cache)?;
    Ok(diff / BigInt::from(m + 1))
}

/// Closed forms for `B_m(1/d) = B_m((d-1)/d)`, `d` in {3, 4, 6}, `m` even.
pub fn special_value(d: u64, m: usize, cache: &BernoulliCache) -> Result<ExactRational> {
    if m == 0 || m % 2 == 1 {
        return Err(Error::OddIndex(m));
    }
    if !matches!(d, 3 | 4 | 6) {
        return Err(Error::InvalidDenominator(d));
    }
    let b = cache.bernoulli_number(m)?;
    let pow = |base: u32, e: usize| BigInt::from(base).pow(e as u32);
    let two = pow(2, m - 1);
    let three = pow(3, m - 1);
    let one = BigInt::one();
    let factor = match d {
        3 => BigRational::new(&one - &three, BigInt::from(2) * &three),
        4 => BigRational::new(&one - &two, pow(2, 2 * m - 1)),
        _ => BigRational::new((&one - &two) * (&one - &three), pow(2, m) * &three),
    };
    Ok(factor * b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VonStaudtClausen {
    pub integer_part: BigInt,
    pub primes: Vec<u64>,
}

/// Primes `p` with `(p - 1) | m`, and the integer `B_m + sum 1/p`.
pub fn von_staudt_clausen(m: usize, cache: &BernoulliCache) -> Result<VonStaudtClausen> {
    if m == 0 || m % 2 == 1 {
        return Err(Error::OddIndex(m));
    }
    let primes: Vec<u64> = (1..=m as u64)
        .filter(|e| m as u64 % e == 0 && is_prime_u64(e + 1))
        .map(|e| e + 1)
        .collect();
    let total = primes
        .iter()
        .fold(cache.bernoulli_number(m)?, |acc, &p| {
            acc + BigRational::new(BigInt::one(), BigInt::from(p))
        });
    if !total.is_integer() {
        return Err(Error::PreconditionViolated(format!(
            "B_{m} + sum 1/p = {total} is not an integer"
        )));
    }
    Ok(VonStaudtClausen {
        integer_part: total.to_integer(),
        primes,
    })
}
