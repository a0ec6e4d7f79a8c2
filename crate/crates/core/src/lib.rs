//! Lehmer-type congruences for restricted harmonic sums modulo `n²`.
//!
//! For `gcd(n, 6) = 1` the sums `sum_{r <= n/d, gcd(r,n)=1} 1/(n - d r)`,
//! `d ∈ {3, 4, 6}`, are congruent modulo `n²` to polynomials in the Euler
//! quotients `q_n(2)` and `q_n(3)`. This crate evaluates both sides, checks
//! the supporting prime-power identities (Bernoulli numbers modulo `p^{2α}`,
//! quotient lifting and localization, the Möbius rearrangement), and can
//! recompute every modular value from exact rationals.

pub mod arith;
pub mod bernoulli;
pub mod error;
pub mod exact;
pub mod fermat;
pub mod rational;
pub mod report;
pub mod sums;
pub mod verifier;

pub use arith::{FactoredInteger, Residue};
pub use bernoulli::BernoulliCache;
pub use error::{Error, Result};
pub use rational::{ExactRational, Valuation};
pub use report::{CongruenceReport, IdentityId, Params};
pub use verifier::{Filter, ScanOptions};
