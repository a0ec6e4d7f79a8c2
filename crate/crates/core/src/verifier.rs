//! Checks identities at single parameter sets and over ranges.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{crt_combine, factorize_u64, is_prime_u64, to_bigint, valuation_u64, Residue};
use crate::bernoulli::BernoulliCache;
use crate::error::{Error, Result};
use crate::exact;
use crate::fermat::{lemma1_check, lemma3_check, lemma4_check};
use crate::rational::to_residue;
use crate::report::{CongruenceReport, IdentityId, Params};
use crate::sums::{
    half_harmonic, half_rhs, lehmer_prime_rhs, lehmer_sum, lemma2_rhs, lemma2_sum,
    moebius_decomposition, restricted_sum, theorem_rhs, SumKind, SumSpec, TermFilter,
};

use IdentityId::*;

/// Which `n` a scan visits. Values rejected here are dropped silently;
/// values accepted here but failing a precondition yield skipped reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Filter {
    All,
    Odd,
    Prime,
    Composite,
    CoprimeTo(u64),
    /// `n ≡ residue (mod modulus)`.
    Class { modulus: u64, residue: u64 },
}

impl Filter {
    pub fn accepts(&self, n: u64) -> bool {
        match *self {
            Filter::All => true,
            Filter::Odd => n % 2 == 1,
            Filter::Prime => is_prime_u64(n),
            Filter::Composite => n > 3 && !is_prime_u64(n),
            Filter::CoprimeTo(m) => n.gcd(&m) == 1,
            Filter::Class { modulus, residue } => n % modulus == residue % modulus,
        }
    }

    /// The natural range restriction of each identity.
    pub fn default_for(identity: IdentityId, base: &Params) -> Filter {
        match identity {
            Thm3 | Thm4 | Thm6 | Lemma2D3 | Lemma2D4 | Lemma2D6 | MoebiusDecomp => {
                Filter::CoprimeTo(6)
            }
            CaiHalf => Filter::Odd,
            LehmerHalf | LehmerP3 | LehmerP4 | LehmerP6 | Lemma1 => Filter::Prime,
            Lemma3 => Filter::CoprimeTo(6 * base.a.unwrap_or(1).unsigned_abs().max(1)),
            Lemma4 => Filter::CoprimeTo(base.a.unwrap_or(1).unsigned_abs().max(1)),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub workers: usize,
    pub exact_oracle: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            exact_oracle: false,
        }
    }
}

fn require<T: Copy>(value: Option<T>, name: &str) -> std::result::Result<T, String> {
    value.ok_or_else(|| format!("parameter {name} is required"))
}

fn prime_at_least(p: u64, min: u64) -> std::result::Result<(), String> {
    if p >= min && is_prime_u64(p) {
        Ok(())
    } else {
        Err(format!("p = {p} is not a prime >= {min}"))
    }
}

fn n_above_one(n: u64) -> std::result::Result<(), String> {
    if n > 1 {
        Ok(())
    } else {
        Err(format!("n = {n} is not > 1"))
    }
}

fn coprime_to(n: u64, m: u64, label: &str) -> std::result::Result<(), String> {
    if n.gcd(&m) == 1 {
        Ok(())
    } else {
        Err(format!("gcd(n, {label}) = {} != 1 for n = {n}", n.gcd(&m)))
    }
}

fn local_prime(n: u64, p: u64, min: u64) -> std::result::Result<u32, String> {
    prime_at_least(p, min)?;
    if n % p != 0 {
        return Err(format!("p = {p} does not divide n = {n}"));
    }
    Ok(valuation_u64(n, p))
}

/// Canonical parameters for `identity`, or the violated precondition.
pub fn check_preconditions(
    identity: IdentityId,
    params: &Params,
) -> std::result::Result<Params, String> {
    match identity {
        LehmerHalf => {
            let p = require(params.p, "p")?;
            prime_at_least(p, 3)?;
            Ok(Params::default().with_p(p))
        }
        LehmerP3 | LehmerP4 | LehmerP6 => {
            let p = require(params.p, "p")?;
            prime_at_least(p, 5)?;
            Ok(Params::default().with_p(p).with_d(identity.step().unwrap()))
        }
        CaiHalf => {
            let n = require(params.n, "n")?;
            n_above_one(n)?;
            if n % 2 == 0 {
                return Err(format!("n = {n} is not odd"));
            }
            Ok(Params::n(n))
        }
        Thm3 | Thm4 | Thm6 => {
            let n = require(params.n, "n")?;
            n_above_one(n)?;
            coprime_to(n, 6, "6")?;
            Ok(Params::n(n).with_d(identity.step().unwrap()))
        }
        Lemma1 => {
            let p = require(params.p, "p")?;
            prime_at_least(p, 3)?;
            let alpha = params.alpha.unwrap_or(1);
            if alpha == 0 {
                return Err("alpha = 0 is not positive".into());
            }
            Ok(Params::default().with_p(p).with_alpha(alpha))
        }
        Lemma2D3 | Lemma2D4 | Lemma2D6 | MoebiusDecomp => {
            let n = require(params.n, "n")?;
            let p = require(params.p, "p")?;
            let d = match identity.step() {
                Some(d) => d,
                None => require(params.d, "d")?,
            };
            if !matches!(d, 3 | 4 | 6) {
                return Err(format!("d = {d} is not one of 3, 4, 6"));
            }
            n_above_one(n)?;
            coprime_to(n, 6, "6")?;
            let alpha = local_prime(n, p, 5)?;
            Ok(Params::n(n).with_p(p).with_d(d).with_alpha(alpha))
        }
        Lemma3 => {
            let n = require(params.n, "n")?;
            let a = require(params.a, "a")?;
            n_above_one(n)?;
            coprime_to(n, 6 * a.unsigned_abs(), "6a")?;
            Ok(Params::n(n).with_a(a))
        }
        Lemma4 => {
            let n = require(params.n, "n")?;
            let a = require(params.a, "a")?;
            let p = require(params.p, "p")?;
            n_above_one(n)?;
            coprime_to(n, a.unsigned_abs(), "a")?;
            let alpha = local_prime(n, p, 2)?;
            Ok(Params::n(n).with_a(a).with_p(p).with_alpha(alpha))
        }
    }
}

/// Modulus of the congruence for `identity` at `params`, as far as it can be
/// read off the parameters (1 when it cannot).
pub fn modulus_for(identity: IdentityId, params: &Params) -> BigUint {
    let square = |v: Option<u64>| v.map_or(BigUint::from(1u32), |v| BigUint::from(v) * v);
    match identity {
        CaiHalf | Thm3 | Thm4 | Thm6 | Lemma3 => square(params.n),
        LehmerHalf | LehmerP3 | LehmerP4 | LehmerP6 => square(params.p),
        Lemma1 => match params.p {
            Some(p) => BigUint::from(p).pow(2 * params.alpha.unwrap_or(1)),
            None => 1u32.into(),
        },
        Lemma2D3 | Lemma2D4 | Lemma2D6 | Lemma4 | MoebiusDecomp => match (params.n, params.p) {
            (Some(n), Some(p)) if p > 1 && n > 0 && n % p == 0 => {
                BigUint::from(p).pow(2 * valuation_u64(n, p))
            }
            _ => 1u32.into(),
        },
    }
}

fn step_of(identity: IdentityId, params: &Params) -> u64 {
    identity.step().or(params.d).expect("checked by preconditions")
}

/// Evaluates both sides of `identity` at `params` on the modular path.
pub fn verify(
    identity: IdentityId,
    params: &Params,
    cache: &BernoulliCache,
) -> Result<CongruenceReport> {
    let params = check_preconditions(identity, params).map_err(Error::PreconditionViolated)?;
    let report = |lhs, rhs| CongruenceReport::compared(identity, params.clone(), lhs, rhs);
    match identity {
        LehmerHalf => {
            let p = params.p.unwrap();
            Ok(report(half_harmonic(p)?, lehmer_prime_rhs(p, SumKind::Half)?))
        }
        LehmerP3 | LehmerP4 | LehmerP6 => {
            let (p, d) = (params.p.unwrap(), step_of(identity, &params));
            Ok(report(lehmer_sum(p, d)?, lehmer_prime_rhs(p, SumKind::Step(d))?))
        }
        CaiHalf => {
            let n = params.n.unwrap();
            Ok(report(half_harmonic(n)?, half_rhs(n)?))
        }
        Thm3 | Thm4 | Thm6 => {
            let (n, d) = (params.n.unwrap(), step_of(identity, &params));
            Ok(report(lehmer_sum(n, d)?, theorem_rhs(n, d)?))
        }
        Lemma1 => lemma1_check(params.p.unwrap(), params.alpha.unwrap(), cache),
        Lemma2D3 | Lemma2D4 | Lemma2D6 => {
            let (n, p, d) = (params.n.unwrap(), params.p.unwrap(), step_of(identity, &params));
            let rhs = lemma2_rhs(p, params.alpha.unwrap(), d)?;
            Ok(report(lemma2_sum(n, p, d)?, rhs))
        }
        Lemma3 => lemma3_check(params.n.unwrap(), params.a.unwrap()),
        Lemma4 => lemma4_check(params.n.unwrap(), params.a.unwrap(), params.p.unwrap()),
        MoebiusDecomp => {
            let (n, p, d) = (params.n.unwrap(), params.p.unwrap(), step_of(identity, &params));
            let (lhs, rhs) = moebius_decomposition(n, p, d)?;
            Ok(report(lhs, rhs))
        }
    }
}

/// Like [`verify`], but a violated precondition becomes a skipped report.
pub fn verify_or_skip(
    identity: IdentityId,
    params: &Params,
    cache: &BernoulliCache,
) -> Result<CongruenceReport> {
    match check_preconditions(identity, params) {
        Ok(_) => verify(identity, params, cache),
        Err(reason) => Ok(CongruenceReport::skipped(
            identity,
            params.clone(),
            modulus_for(identity, params),
            reason,
        )),
    }
}

/// Recomputes both sides from exact rationals and full-size Fermat
/// quotients, then reduces them modulo the identity's modulus.
pub fn verify_exact(
    identity: IdentityId,
    params: &Params,
    cache: &BernoulliCache,
) -> Result<CongruenceReport> {
    let params = check_preconditions(identity, params).map_err(Error::PreconditionViolated)?;
    let modulus = modulus_for(identity, &params);
    let (lhs, rhs) = match identity {
        Lemma1 => return lemma1_check(params.p.unwrap(), params.alpha.unwrap(), cache),
        LehmerHalf => {
            let p = params.p.unwrap();
            (
                exact::exact_sum(p, SumKind::Half, TermFilter::CoprimeToN),
                exact::quotient_polynomial_exact(p, SumKind::Half)?,
            )
        }
        CaiHalf => {
            let n = params.n.unwrap();
            (
                exact::exact_sum(n, SumKind::Half, TermFilter::CoprimeToN),
                exact::quotient_polynomial_exact(n, SumKind::Half)?,
            )
        }
        LehmerP3 | LehmerP4 | LehmerP6 | Thm3 | Thm4 | Thm6 => {
            let n = params.n.or(params.p).unwrap();
            let kind = SumKind::Step(step_of(identity, &params));
            (
                exact::exact_sum(n, kind, TermFilter::CoprimeToN),
                exact::quotient_polynomial_exact(n, kind)?,
            )
        }
        Lemma2D3 | Lemma2D4 | Lemma2D6 => {
            let (n, p, d) = (params.n.unwrap(), params.p.unwrap(), step_of(identity, &params));
            (
                exact::exact_sum(n, SumKind::Step(d), TermFilter::NotDivisibleBy(p)),
                exact::lemma2_rhs_exact(p, params.alpha.unwrap(), d)?,
            )
        }
        Lemma3 => exact::lemma3_sides_exact(params.n.unwrap(), params.a.unwrap())?,
        Lemma4 => {
            exact::lemma4_sides_exact(params.n.unwrap(), params.a.unwrap(), params.p.unwrap())?
        }
        MoebiusDecomp => {
            let (n, p, d) = (params.n.unwrap(), params.p.unwrap(), step_of(identity, &params));
            exact::moebius_sides_exact(n, p, d)?
        }
    };
    Ok(CongruenceReport::compared(
        identity,
        params,
        to_residue(&lhs, &modulus)?,
        to_residue(&rhs, &modulus)?,
    ))
}

/// [`verify_or_skip`], optionally cross-checked against [`verify_exact`].
pub fn verify_checked(
    identity: IdentityId,
    params: &Params,
    cache: &BernoulliCache,
    exact_oracle: bool,
) -> Result<CongruenceReport> {
    let report = verify_or_skip(identity, params, cache)?;
    if exact_oracle && !report.is_skipped() {
        let oracle = verify_exact(identity, params, cache)?;
        if oracle != report {
            return Err(Error::OracleDivergence(format!(
                "{identity} at {}: modular lhs/rhs {:?}/{:?}, exact {:?}/{:?}",
                report.params,
                report.lhs.as_ref().map(|r| r.rep().to_string()),
                report.rhs.as_ref().map(|r| r.rep().to_string()),
                oracle.lhs.as_ref().map(|r| r.rep().to_string()),
                oracle.rhs.as_ref().map(|r| r.rep().to_string()),
            )));
        }
    }
    Ok(report)
}

/// The parameter sets a scan visits at `n`.
fn params_at(identity: IdentityId, n: u64, base: &Params) -> Vec<Params> {
    let with_n = Params {
        n: Some(n),
        ..base.clone()
    };
    match identity {
        LehmerHalf | LehmerP3 | LehmerP4 | LehmerP6 | Lemma1 => vec![Params {
            n: None,
            p: Some(n),
            ..base.clone()
        }],
        Lemma2D3 | Lemma2D4 | Lemma2D6 | MoebiusDecomp | Lemma4 if base.p.is_none() => {
            let min = if identity == Lemma4 { 2 } else { 5 };
            let primes: Vec<u64> = if n > 1 {
                factorize_u64(n)
                    .map(|f| {
                        f.factors()
                            .iter()
                            .filter_map(|(p, _)| p.to_u64())
                            .filter(|&p| p >= min)
                            .collect()
                    })
                    .unwrap_or_default()
            } else {
                Vec::new()
            };
            if primes.is_empty() {
                vec![with_n]
            } else {
                primes
                    .into_iter()
                    .map(|p| Params {
                        p: Some(p),
                        ..with_n.clone()
                    })
                    .collect()
            }
        }
        _ => vec![with_n],
    }
}

/// Checks `identity` for every `n` in `from..=to` accepted by `filter`.
///
/// `base` supplies the parameters other than `n` (`a`, `p`, `d`, `alpha`).
/// For the prime-modulus identities and `lemma1`, `n` plays the role of `p`.
/// For the localized identities without a fixed `p`, every admissible prime
/// divisor of `n` yields its own report. Output is ordered by `n` whatever
/// the worker count.
pub fn scan(
    identity: IdentityId,
    from: u64,
    to: u64,
    filter: Filter,
    base: &Params,
    cache: &BernoulliCache,
    options: ScanOptions,
) -> Result<Vec<CongruenceReport>> {
    if from > to {
        return Ok(Vec::new());
    }
    let ns: Vec<u64> = (from..=to).filter(|&n| filter.accepts(n)).collect();
    let run = |n: u64| -> Result<Vec<CongruenceReport>> {
        params_at(identity, n, base)
            .iter()
            .map(|p| verify_checked(identity, p, cache, options.exact_oracle))
            .collect()
    };
    let chunks: Vec<Result<Vec<CongruenceReport>>> = if options.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.workers)
            .build()
            .map_err(|e| Error::PreconditionViolated(format!("worker pool: {e}")))?;
        pool.install(|| ns.par_iter().map(|&n| run(n)).collect())
    } else {
        ns.iter().map(|&n| run(n)).collect()
    };
    let mut out = Vec::with_capacity(ns.len());
    for chunk in chunks {
        out.extend(chunk?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// The failing report.
    pub report: CongruenceReport,
    /// Values of `n` below the counterexample where one side was undefined.
    pub skipped: Vec<CongruenceReport>,
}

/// Evaluates a composite-modulus congruence outside `gcd(n, 6) = 1`.
///
/// The left side is summed only if every retained term is a unit mod `n²`;
/// the right side is evaluated exactly and reduced only if its denominator
/// is a unit mod `n²`. Returns a skipped report otherwise.
pub fn evaluate_unrestricted(identity: IdentityId, n: u64) -> Result<CongruenceReport> {
    let d = match identity {
        Thm3 | Thm4 | Thm6 => identity.step().unwrap(),
        _ => {
            return Err(Error::PreconditionViolated(format!(
                "{identity} is not one of thm3, thm4, thm6"
            )))
        }
    };
    let params = Params::n(n).with_d(d);
    let modulus = BigUint::from(n) * n;
    let skip = |reason: String| {
        Ok(CongruenceReport::skipped(identity, params.clone(), modulus.clone(), reason))
    };
    if n < 2 {
        return skip(format!("n = {n} is not > 1"));
    }
    let kind = SumKind::Step(d);
    let lhs = match restricted_sum(&SumSpec {
        n,
        kind,
        filter: TermFilter::CoprimeToN,
        modulus: modulus.clone(),
    }) {
        Ok(v) => v,
        Err(Error::NotInvertible { value, .. }) => {
            return skip(format!("term 1/{value} is not a unit mod {modulus}"))
        }
        Err(e) => return Err(e),
    };
    let rhs = match exact::quotient_polynomial_exact(n, kind) {
        Ok(v) => v,
        Err(Error::NotCoprime { a, .. }) => return skip(format!("q_n({a}) is undefined")),
        Err(e) => return Err(e),
    };
    match to_residue(&rhs, &modulus) {
        Ok(rhs) => Ok(CongruenceReport::compared(identity, params, lhs, rhs)),
        Err(_) => skip(format!("right side {rhs} has a non-unit denominator mod {modulus}")),
    }
}

/// Smallest `n` in `2..=bound` accepted by `class` where the congruence
/// fails.
pub fn counterexample_search(identity: IdentityId, class: Filter, bound: u64) -> Result<Counterexample> {
    let mut skipped = Vec::new();
    for n in (2..=bound).filter(|&n| class.accepts(n)) {
        let report = evaluate_unrestricted(identity, n)?;
        if report.is_skipped() {
            skipped.push(report);
        } else if !report.holds {
            return Ok(Counterexample { report, skipped });
        }
    }
    Err(Error::NoCounterexampleInRange(bound))
}

/// Reassembles the per-prime-power verdicts of the composite congruence for
/// `d` through the CRT.
///
/// For each `p^α ∥ n` the difference of both sides is computed modulo
/// `p^{2α}` on its own; the differences are combined modulo `n²`. Returns
/// true when every local difference vanishes, the combination is zero, and
/// this agrees with [`verify`] at `n`.
pub fn crt_reassembly_check(n: u64, d: u64, cache: &BernoulliCache) -> Result<bool> {
    let identity = match d {
        3 => Thm3,
        4 => Thm4,
        6 => Thm6,
        _ => return Err(Error::InvalidDenominator(d)),
    };
    let global = verify(identity, &Params::n(n), cache)?;
    let rhs_global = theorem_rhs(n, d)?;
    let mut parts = Vec::new();
    let mut all_local_zero = true;
    for (p, alpha) in factorize_u64(n)?.factors() {
        let local = p.pow(2 * alpha);
        let lhs = restricted_sum(&SumSpec {
            n,
            kind: SumKind::Step(d),
            filter: TermFilter::CoprimeToN,
            modulus: local.clone(),
        })?;
        let rhs = rhs_global.reduce(&local)?;
        let diff = Residue::new(&(to_bigint(lhs.rep()) - to_bigint(rhs.rep())), &local)?;
        all_local_zero &= diff.is_zero();
        parts.push(diff);
    }
    let combined = crt_combine(&parts)?;
    debug_assert_eq!(combined.modulus(), &global.modulus);
    let combined_zero = combined.rep().is_zero();
    Ok(all_local_zero && combined_zero && combined_zero == global.holds)
}

/// Parses `"r/m"` or `"r mod m"` style residue classes; used by front ends.
pub fn parse_class(text: &str) -> Option<Filter> {
    let (r, m) = text.split_once('/').or_else(|| text.split_once(" mod "))?;
    let (residue, modulus) = (r.trim().parse().ok()?, m.trim().parse::<u64>().ok()?);
    (modulus > 0).then_some(Filter::Class { modulus, residue })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res(r: u64, m: u64) -> Residue {
        Residue::from_u64(r, m).unwrap()
    }

    fn cache() -> BernoulliCache {
        BernoulliCache::default()
    }

    #[test]
    fn verify_examples() {
        let c = cache();
        let r = verify(Thm3, &Params::n(5), &c).unwrap();
        assert!(r.holds);
        assert_eq!((r.lhs.unwrap(), r.rhs.unwrap()), (res(13, 25), res(13, 25)));
        let r = verify(Thm6, &Params::n(5), &c).unwrap();
        assert_eq!((r.lhs.unwrap(), r.rhs.unwrap()), (res(0, 25), res(0, 25)));
        let r = verify(CaiHalf, &Params::n(9), &c).unwrap();
        assert_eq!((r.lhs.unwrap(), r.rhs.unwrap()), (res(22, 81), res(22, 81)));
        assert!(r.holds);
    }

    #[test]
    fn verify_names_violated_precondition() {
        let c = cache();
        let err = verify(Thm3, &Params::n(9), &c).unwrap_err();
        assert_eq!(err, Error::PreconditionViolated("gcd(n, 6) = 3 != 1 for n = 9".into()));
        assert!(matches!(verify(Lemma3, &Params::n(5), &c), Err(Error::PreconditionViolated(m)) if m.contains("a is required")));
        let skipped = verify_or_skip(LehmerP3, &Params::default().with_p(3), &c).unwrap();
        assert!(skipped.is_skipped());
        assert_eq!(skipped.modulus, BigUint::from(9u32));
    }

    #[test]
    fn scan_examples() {
        let c = cache();
        let base = Params::default();
        let reports = scan(Thm3, 5, 55, Filter::CoprimeTo(6), &base, &c, ScanOptions::default()).unwrap();
        let expected = (5..=55u64).filter(|n| n % 2 != 0 && n % 3 != 0).count();
        assert_eq!(reports.len(), expected);
        assert_eq!(expected, 18);
        assert!(reports.iter().all(|r| r.holds));
        assert!(scan(Thm4, 10, 9, Filter::All, &base, &c, ScanOptions::default()).unwrap().is_empty());
        let primes = scan(LehmerP6, 5, 100, Filter::Prime, &base, &c, ScanOptions::default()).unwrap();
        assert_eq!(primes.len(), 23);
        assert!(primes.iter().all(|r| r.holds));
    }

    #[test]
    fn scan_records_skips() {
        let c = cache();
        let reports = scan(Thm3, 1, 7, Filter::All, &Params::default(), &c, ScanOptions::default()).unwrap();
        let skipped: Vec<u64> = reports.iter().filter(|r| r.is_skipped()).map(|r| r.params.n.unwrap()).collect();
        assert_eq!(skipped, vec![1, 2, 3, 4, 6]);
        assert!(reports.iter().filter(|r| !r.is_skipped()).all(|r| r.holds));
    }

    #[test]
    fn scan_expands_prime_divisors() {
        let c = cache();
        let reports = scan(Lemma2D3, 385, 385, Filter::All, &Params::default(), &c, ScanOptions::default()).unwrap();
        let ps: Vec<u64> = reports.iter().map(|r| r.params.p.unwrap()).collect();
        assert_eq!(ps, vec![5, 7, 11]);
        assert!(reports.iter().all(|r| r.holds));
    }

    #[test]
    fn scan_is_worker_independent() {
        let c = cache();
        let base = Params::default().with_a(2);
        let one = scan(Lemma4, 2, 400, Filter::Composite, &base, &c, ScanOptions { workers: 1, exact_oracle: false }).unwrap();
        let four = scan(Lemma4, 2, 400, Filter::Composite, &base, &c, ScanOptions { workers: 4, exact_oracle: false }).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn exact_oracle_agrees() {
        let c = cache();
        for id in IdentityId::ALL {
            let base = Params::default().with_a(2).with_d(4);
            // B_{φ(p²)} stays under the default cap for p <= 23
            let to = if id == Lemma1 { 23 } else { 80 };
            let reports = scan(id, 2, to, Filter::default_for(id, &base), &base, &c, ScanOptions { workers: 2, exact_oracle: true }).unwrap();
            assert!(reports.iter().all(|r| r.is_skipped() || r.holds), "{id}");
        }
    }

    #[test]
    fn counterexamples() {
        let cx = counterexample_search(Thm3, Filter::Class { modulus: 6, residue: 4 }, 1000).unwrap();
        assert_eq!(cx.report.params.n, Some(4));
        assert_eq!((cx.report.lhs.unwrap(), cx.report.rhs.unwrap()), (res(1, 16), res(13, 16)));
        let cx = counterexample_search(Thm4, Filter::Class { modulus: 6, residue: 3 }, 1000).unwrap();
        assert_eq!(cx.report.params.n, Some(3));
        assert_eq!((cx.report.lhs.unwrap(), cx.report.rhs.unwrap()), (res(0, 9), res(3, 9)));
        let n2 = evaluate_unrestricted(Thm3, 2).unwrap();
        assert!(n2.holds);
        assert_eq!(n2.lhs.unwrap(), res(0, 4));
        let cx = counterexample_search(Thm3, Filter::Class { modulus: 6, residue: 2 }, 50).unwrap();
        assert!(cx.report.params.n.unwrap() <= 50);
        assert_eq!(
            counterexample_search(Thm3, Filter::CoprimeTo(6), 300).unwrap_err(),
            Error::NoCounterexampleInRange(300)
        );
        assert!(counterexample_search(Lemma3, Filter::All, 10).is_err());
    }

    #[test]
    fn crt_reassembly_examples() {
        let c = cache();
        assert!(crt_reassembly_check(35, 3, &c).unwrap());
        assert!(crt_reassembly_check(55, 6, &c).unwrap());
        assert!(crt_reassembly_check(13, 4, &c).unwrap());
        assert!(crt_reassembly_check(35, 5, &c).is_err());
    }

    #[test]
    fn class_parsing() {
        assert_eq!(parse_class("4/6"), Some(Filter::Class { modulus: 6, residue: 4 }));
        assert_eq!(parse_class("2 mod 6"), Some(Filter::Class { modulus: 6, residue: 2 }));
        assert_eq!(parse_class("2/0"), None);
    }
}
