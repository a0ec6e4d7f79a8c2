//! Identity identifiers and verification reports.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::arith::Residue;
use crate::rational::Valuation;

/// Every congruence the verifier knows how to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    /// `sum_{r <= (p-1)/2} 1/r ≡ -2 q_p(2) + p q_p(2)^2 (mod p^2)`, `p` prime.
    LehmerHalf,
    /// The same half sum over `gcd(r, n) = 1` for odd `n > 1`.
    CaiHalf,
    LehmerP3,
    LehmerP4,
    LehmerP6,
    Thm3,
    Thm4,
    Thm6,
    /// `φ(p^α) ≡ p^α B_{φ(p^{2α})} (mod p^{2α})`.
    Lemma1,
    Lemma2D3,
    Lemma2D4,
    Lemma2D6,
    /// `q_{n²}(a) ≡ q_n(a) - n q_n(a)²/2 (mod n²)`.
    Lemma3,
    /// Localization of `2 q_n(a) - n q_n(a)²` at a prime power `p^α ∥ n`.
    Lemma4,
    MoebiusDecomp,
}

impl IdentityId {
    pub const ALL: [IdentityId; 15] = [
        IdentityId::LehmerHalf,
        IdentityId::CaiHalf,
        IdentityId::LehmerP3,
        IdentityId::LehmerP4,
        IdentityId::LehmerP6,
        IdentityId::Thm3,
        IdentityId::Thm4,
        IdentityId::Thm6,
        IdentityId::Lemma1,
        IdentityId::Lemma2D3,
        IdentityId::Lemma2D4,
        IdentityId::Lemma2D6,
        IdentityId::Lemma3,
        IdentityId::Lemma4,
        IdentityId::MoebiusDecomp,
    ];

    /// Short lowercase code used on the command line and in reports.
    pub fn code(self) -> &'static str {
        use IdentityId::*;
        match self {
            LehmerHalf => "lehmer-half",
            CaiHalf => "cai",
            LehmerP3 => "lehmer-p3",
            LehmerP4 => "lehmer-p4",
            LehmerP6 => "lehmer-p6",
            Thm3 => "thm3",
            Thm4 => "thm4",
            Thm6 => "thm6",
            Lemma1 => "lemma1",
            Lemma2D3 | Lemma2D4 | Lemma2D6 => "lemma2",
            Lemma3 => "lemma3",
            Lemma4 => "lemma4",
            MoebiusDecomp => "moebius",
        }
    }

    /// The step `d` of the sum, `None` for half sums and for identities
    /// without a sum (the Möbius check takes `d` as a parameter).
    pub fn step(self) -> Option<u64> {
        use IdentityId::*;
        match self {
            LehmerP3 | Thm3 | Lemma2D3 => Some(3),
            LehmerP4 | Thm4 | Lemma2D4 => Some(4),
            LehmerP6 | Thm6 | Lemma2D6 => Some(6),
            _ => None,
        }
    }

    pub fn lemma2(d: u64) -> Option<IdentityId> {
        match d {
            3 => Some(IdentityId::Lemma2D3),
            4 => Some(IdentityId::Lemma2D4),
            6 => Some(IdentityId::Lemma2D6),
            _ => None,
        }
    }

    /// Resolves a code, using `d` to pick the `lemma2` variant.
    pub fn from_code(code: &str, d: Option<u64>) -> Result<IdentityId, String> {
        if let Some(rest) = code.strip_prefix("lemma2") {
            let d = match rest.strip_prefix("-d") {
                Some(digits) => digits.parse().ok(),
                None if rest.is_empty() => d,
                None => None,
            };
            return d
                .and_then(IdentityId::lemma2)
                .ok_or_else(|| format!("{code} needs d in {{3, 4, 6}}"));
        }
        IdentityId::ALL
            .into_iter()
            .find(|id| id.code() == code)
            .ok_or_else(|| format!("unknown identity '{code}'"))
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for IdentityId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IdentityId::from_code(s, None)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha: Option<u32>,
}

impl Params {
    pub fn n(n: u64) -> Self {
        Self {
            n: Some(n),
            ..Self::default()
        }
    }

    pub fn with_a(mut self, a: i64) -> Self {
        self.a = Some(a);
        self
    }

    pub fn with_p(mut self, p: u64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_d(mut self, d: u64) -> Self {
        self.d = Some(d);
        self
    }

    pub fn with_alpha(mut self, alpha: u32) -> Self {
        self.alpha = Some(alpha);
        self
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = [
            ("n", self.n.map(|v| v.to_string())),
            ("a", self.a.map(|v| v.to_string())),
            ("p", self.p.map(|v| v.to_string())),
            ("d", self.d.map(|v| v.to_string())),
            ("alpha", self.alpha.map(|v| v.to_string())),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| format!("{k}={v}")))
        .collect();
        f.write_str(&parts.join(" "))
    }
}

/// The p-adic side of a `lemma1` check: `v_p(lhs - rhs)` against `2α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicVerdict {
    pub valuation: Valuation,
    pub required: u32,
}

/// Outcome of checking one identity at one parameter set.
///
/// A skipped report carries `skipped_reason`, no residues and `holds = false`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ReportRecord", try_from = "ReportRecord")]
pub struct CongruenceReport {
    pub identity: IdentityId,
    pub params: Params,
    pub modulus: BigUint,
    pub lhs: Option<Residue>,
    pub rhs: Option<Residue>,
    pub holds: bool,
    pub padic: Option<PadicVerdict>,
    pub skipped_reason: Option<String>,
}

impl CongruenceReport {
    /// Builds a report comparing two residues of the same modulus.
    pub fn compared(identity: IdentityId, params: Params, lhs: Residue, rhs: Residue) -> Self {
        debug_assert_eq!(lhs.modulus(), rhs.modulus());
        Self {
            identity,
            params,
            modulus: lhs.modulus().clone(),
            holds: lhs == rhs,
            lhs: Some(lhs),
            rhs: Some(rhs),
            padic: None,
            skipped_reason: None,
        }
    }

    pub fn skipped(identity: IdentityId, params: Params, modulus: BigUint, reason: String) -> Self {
        Self {
            identity,
            params,
            modulus,
            lhs: None,
            rhs: None,
            holds: false,
            padic: None,
            skipped_reason: Some(reason),
        }
    }

    pub fn is_skipped(&self) -> bool {
        self.skipped_reason.is_some()
    }

    /// True when the report was evaluated and the congruence failed.
    pub fn failed(&self) -> bool {
        !self.is_skipped() && !self.holds
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum WireValuation {
    Finite(i64),
    Infinite(String),
}

/// Serialized form: big integers as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ReportRecord {
    identity: String,
    params: Params,
    modulus: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    valuation: Option<WireValuation>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    required: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    skipped_reason: Option<String>,
}

impl From<CongruenceReport> for ReportRecord {
    fn from(r: CongruenceReport) -> Self {
        Self {
            identity: r.identity.code().to_string(),
            params: r.params,
            modulus: r.modulus.to_string(),
            lhs: r.lhs.map(|x| x.rep().to_string()),
            rhs: r.rhs.map(|x| x.rep().to_string()),
            holds: r.skipped_reason.is_none().then_some(r.holds),
            valuation: r.padic.map(|v| match v.valuation {
                Valuation::Finite(k) => WireValuation::Finite(k),
                Valuation::Infinite => WireValuation::Infinite("inf".into()),
            }),
            required: r.padic.map(|v| v.required),
            skipped_reason: r.skipped_reason,
        }
    }
}

impl TryFrom<ReportRecord> for CongruenceReport {
    type Error = String;

    fn try_from(w: ReportRecord) -> Result<Self, Self::Error> {
        let identity = IdentityId::from_code(&w.identity, w.params.d)?;
        let modulus: BigUint = w.modulus.parse().map_err(|e| format!("modulus: {e}"))?;
        let residue = |s: Option<String>| -> Result<Option<Residue>, String> {
            s.map(|s| {
                let v: BigInt = s.parse().map_err(|e| format!("residue: {e}"))?;
                Residue::new(&v, &modulus).map_err(|e| e.to_string())
            })
            .transpose()
        };
        let padic = match (w.valuation, w.required) {
            (Some(v), Some(required)) => Some(PadicVerdict {
                valuation: match v {
                    WireValuation::Finite(k) => Valuation::Finite(k),
                    WireValuation::Infinite(_) => Valuation::Infinite,
                },
                required,
            }),
            (None, None) => None,
            _ => return Err("valuation and required must appear together".into()),
        };
        Ok(Self {
            identity,
            params: w.params,
            lhs: residue(w.lhs)?,
            rhs: residue(w.rhs)?,
            modulus,
            holds: w.holds.unwrap_or(false),
            padic,
            skipped_reason: w.skipped_reason,
        })
    }
}
