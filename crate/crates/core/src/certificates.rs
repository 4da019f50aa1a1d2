//! Infinite-dimensionality certificates for quadratic semigroup algebras.
//!
//! Two witnesses are recognised. An *SE pair* `(a, b)` has neither `ab` nor
//! `ba` in any relation's support, so no power `(ab)^k` lies in the ideal. A
//! *zero-sum* presentation has only binomial relations, so the ideal contains
//! no monomial at all. With `d <= (n^2 + n) / 4` relations one of the two
//! always applies.

use serde::{Deserialize, Serialize};

use crate::coset::{coset_class, EngineLimits};
use crate::error::{Error, Result};
use crate::model::{IdealMode, Pair, Presentation, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CertificateKind {
    SePair { a: u8, b: u8 },
    ZeroSum,
    None { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(flatten)]
    pub kind: CertificateKind,
    pub transcript: Vec<String>,
}

impl Certificate {
    pub fn is_some(&self) -> bool {
        !matches!(self.kind, CertificateKind::None { .. })
    }

    /// Re-check the static condition behind the certificate against `p`.
    pub fn is_valid_for(&self, p: &Presentation) -> bool {
        match self.kind {
            CertificateKind::SePair { a, b } => is_se_pair(p, a, b),
            CertificateKind::ZeroSum => check_zero_sum(p),
            CertificateKind::None { .. } => false,
        }
    }
}

fn covered(p: &Presentation) -> Vec<bool> {
    let n = p.n();
    let mut cov = vec![false; n * n];
    for r in p.relations() {
        for q in r.support() {
            cov[(q.0 as usize - 1) * n + (q.1 as usize - 1)] = true;
        }
    }
    cov
}

fn is_se_pair(p: &Presentation, a: u8, b: u8) -> bool {
    let alpha = p.alphabet();
    if !alpha.contains(a) || !alpha.contains(b) {
        return false;
    }
    let touched = |q: Pair| p.relations().iter().any(|r| r.support().contains(&q));
    !touched(Pair(a, b)) && !touched(Pair(b, a))
}

/// The lexicographically first `(a, b)` with `ab` and `ba` outside every support.
pub fn find_se_pair(p: &Presentation) -> Option<(u8, u8)> {
    let n = p.n();
    let cov = covered(p);
    let hit = |a: usize, b: usize| cov[(a - 1) * n + (b - 1)];
    (1..=n)
        .flat_map(|a| (1..=n).map(move |b| (a, b)))
        .find(|&(a, b)| !hit(a, b) && !hit(b, a))
        .map(|(a, b)| (a as u8, b as u8))
}

/// True iff every relation is a binomial.
pub fn check_zero_sum(p: &Presentation) -> bool {
    p.relations().iter().all(|r| !r.is_zero())
}

/// `4d <= n^2 + n`
pub fn within_bound(p: &Presentation) -> bool {
    let n = p.n() as u64;
    4 * p.len() as u64 <= n * n + n
}

/// An SE pair if one exists, else a zero-sum certificate if every relation is
/// a binomial. Within the bound one of them is guaranteed; above it the
/// search still runs but may come back empty.
pub fn theorem1_certificate(p: &Presentation) -> Certificate {
    let n = p.n() as u64;
    let d = p.len() as u64;
    let mut transcript = vec![format!(
        "n = {n}, d = {d}, 4d = {} vs n^2 + n = {}",
        4 * d,
        n * n + n
    )];
    if let Some((a, b)) = find_se_pair(p) {
        transcript.push(format!(
            "x{a}*x{b} and x{b}*x{a} lie outside every support; (x{a}*x{b})^k is never in the ideal"
        ));
        return Certificate {
            kind: CertificateKind::SePair { a, b },
            transcript,
        };
    }
    transcript.push("every pair is covered in at least one orientation".into());
    if check_zero_sum(p) {
        transcript.push("every relation is a binomial; the ideal contains no monomial".into());
        return Certificate {
            kind: CertificateKind::ZeroSum,
            transcript,
        };
    }
    transcript.push("a zero relation is present".into());
    let reason = if within_bound(p) {
        "no certificate found within the bound".to_string()
    } else {
        "bound exceeded, no certificate found".to_string()
    };
    Certificate {
        kind: CertificateKind::None { reason },
        transcript,
    }
}

/// Dynamic check of an SE pair: `(ab)^k` must be nonzero modulo the full ideal.
pub fn verify_witness(
    a: u8,
    b: u8,
    p: &Presentation,
    k: usize,
    limits: &EngineLimits,
) -> Result<bool> {
    if k == 0 {
        return Err(Error::usage("k must be at least 1"));
    }
    let alpha = p.alphabet();
    if !alpha.contains(a) || !alpha.contains(b) {
        return Err(Error::usage(format!("(x{a}, x{b}) is not a pair of generators")));
    }
    let word = Word::new([a, b].repeat(k))?;
    Ok(!coset_class(&word, p, IdealMode::FullM, limits)?.is_zero())
}
