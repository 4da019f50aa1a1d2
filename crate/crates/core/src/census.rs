//! Exhaustive enumeration of QHS and of small quadratic semigroup
//! presentations, with per-presentation classification.
//!
//! Presentations are labeled: no relabeling of generators is quotiented out.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::hilbert_profile;
use crate::certificates::{theorem1_certificate, verify_witness, CertificateKind};
use crate::coset::{regularity_degree, EngineLimits, Regularity};
use crate::error::{Error, Result};
use crate::model::{
    all_pure, qhs_shape_ok, validate_qhs, Pair, Presentation, Relation,
};

pub const MAX_QHS_CENSUS_N: usize = 5;
pub const MAX_PRESENTATION_CENSUS_N: usize = 3;
/// Upper bound on the number of relation subsets `enumerate_presentations`
/// will visit.
pub const MAX_PRESENTATIONS: u64 = 20_000_000;

/// Call `f` on every QHS on `n` generators, each exactly once.
pub fn for_each_qhs(n: usize, mut f: impl FnMut(Presentation)) -> Result<()> {
    if n == 0 || n > MAX_QHS_CENSUS_N {
        return Err(Error::usage(format!(
            "QHS enumeration supports n in 1..={MAX_QHS_CENSUS_N}"
        )));
    }
    let pairs: Vec<Pair> = (1..=n as u8)
        .flat_map(|a| (1..=a).map(move |b| Pair(a, b)))
        .collect();
    let mut used = vec![false; pairs.len()];
    let mut rels = Vec::new();
    qhs_rec(n, &pairs, &mut used, &mut rels, &mut f);
    Ok(())
}

fn qhs_rec(
    n: usize,
    pairs: &[Pair],
    used: &mut [bool],
    rels: &mut Vec<Relation>,
    f: &mut impl FnMut(Presentation),
) {
    let Some(i) = used.iter().position(|u| !u) else {
        f(Presentation::new(n, rels.iter().copied()).expect("enumerated QHS is well formed"));
        return;
    };
    used[i] = true;
    let p = pairs[i];

    rels.push(Relation::Zero(p));
    qhs_rec(n, pairs, used, rels, f);
    rels.pop();

    for j in i + 1..pairs.len() {
        if used[j] {
            continue;
        }
        let q = pairs[j];
        let rel = if qhs_shape_ok(p, q) {
            Relation::Equal(p, q)
        } else if qhs_shape_ok(q, p) {
            Relation::Equal(q, p)
        } else {
            continue;
        };
        used[j] = true;
        rels.push(rel);
        qhs_rec(n, pairs, used, rels, f);
        rels.pop();
        used[j] = false;
    }
    used[i] = false;
}

/// Every QHS on `n` generators, sorted by canonical serialization.
pub fn enumerate_qhs(n: usize) -> Result<Vec<Presentation>> {
    let mut out = Vec::new();
    for_each_qhs(n, |p| out.push(p))?;
    out.sort_by_cached_key(Presentation::to_json);
    Ok(out)
}

/// Every possible quadratic semigroup relation on `n` generators: `n^2` zero
/// monomials and `C(n^2, 2)` binomials.
pub fn all_relations(n: usize) -> Vec<Relation> {
    let pairs: Vec<Pair> = (1..=n as u8)
        .flat_map(|a| (1..=n as u8).map(move |b| Pair(a, b)))
        .collect();
    let mut out: Vec<Relation> = pairs.iter().map(|&p| Relation::Zero(p)).collect();
    for (i, &p) in pairs.iter().enumerate() {
        for &q in &pairs[i + 1..] {
            out.push(Relation::equal(p, q).expect("distinct pairs"));
        }
    }
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Number of presentations `enumerate_presentations(n, d_max)` yields.
pub fn presentation_count(n: usize, d_max: usize) -> u64 {
    let r = all_relations(n).len() as u64;
    (1..=d_max as u64).map(|d| binomial(r, d.min(r))).sum()
}

/// Call `f` on every non-empty set of at most `d_max` distinct relations.
pub fn for_each_presentation(
    n: usize,
    d_max: usize,
    mut f: impl FnMut(Presentation),
) -> Result<()> {
    if n == 0 || n > MAX_PRESENTATION_CENSUS_N {
        return Err(Error::usage(format!(
            "presentation enumeration supports n in 1..={MAX_PRESENTATION_CENSUS_N}"
        )));
    }
    let rels = all_relations(n);
    let d_max = d_max.min(rels.len());
    if presentation_count(n, d_max) > MAX_PRESENTATIONS {
        return Err(Error::usage(format!(
            "more than {MAX_PRESENTATIONS} presentations for n = {n}, d_max = {d_max}"
        )));
    }
    let mut chosen = Vec::with_capacity(d_max);
    subsets_rec(n, &rels, 0, d_max, &mut chosen, &mut f);
    Ok(())
}

fn subsets_rec(
    n: usize,
    rels: &[Relation],
    start: usize,
    d_max: usize,
    chosen: &mut Vec<Relation>,
    f: &mut impl FnMut(Presentation),
) {
    for i in start..rels.len() {
        chosen.push(rels[i]);
        f(Presentation::new(n, chosen.iter().copied()).expect("distinct relations"));
        if chosen.len() < d_max {
            subsets_rec(n, rels, i + 1, d_max, chosen, f);
        }
        chosen.pop();
    }
}

pub fn enumerate_presentations(n: usize, d_max: usize) -> Result<Vec<Presentation>> {
    let mut out = Vec::new();
    for_each_presentation(n, d_max, |p| out.push(p))?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PureBoundReport {
    pub n: usize,
    pub qhs_total: usize,
    pub all_pure_count: usize,
    /// `ceil((n^2 + 2n) / 4)`
    pub bound: usize,
    pub min_size: Option<usize>,
    /// Number of all-pure QHS per relation count.
    pub sizes: BTreeMap<usize, usize>,
    pub holds: bool,
}

/// Over every QHS whose generators are all pure, compare the relation count
/// with `ceil((n^2 + 2n) / 4)`.
pub fn pure_bound_check(n: usize) -> Result<PureBoundReport> {
    if !(3..=4).contains(&n) {
        return Err(Error::usage("pure bound census runs for n = 3 or 4"));
    }
    let bound = (n * n + 2 * n).div_ceil(4);
    let mut report = PureBoundReport {
        n,
        qhs_total: 0,
        all_pure_count: 0,
        bound,
        min_size: None,
        sizes: BTreeMap::new(),
        holds: true,
    };
    for_each_qhs(n, |p| {
        report.qhs_total += 1;
        if all_pure(&p).expect("enumerated QHS validates") {
            report.all_pure_count += 1;
            *report.sizes.entry(p.len()).or_default() += 1;
            report.min_size = Some(report.min_size.map_or(p.len(), |m| m.min(p.len())));
            if p.len() < bound {
                report.holds = false;
            }
        }
    })?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n: usize,
    /// `floor((n^2 + n) / 4)`
    pub d_max: usize,
    /// Presentations checked, the empty one included.
    pub total: usize,
    pub se_pair: usize,
    pub zero_sum: usize,
    pub uncertified: Vec<String>,
    pub witness_failures: Vec<String>,
}

impl SweepReport {
    pub fn all_certified(&self) -> bool {
        self.uncertified.is_empty() && self.witness_failures.is_empty()
    }
}

/// Certify every presentation with `d <= (n^2 + n) / 4`, checking each SE
/// pair dynamically with `(ab)^witness_k`.
pub fn theorem1_sweep(n: usize, witness_k: usize, limits: &EngineLimits) -> Result<SweepReport> {
    if !(1..=MAX_PRESENTATION_CENSUS_N).contains(&n) {
        return Err(Error::usage("the completeness sweep runs for n <= 3"));
    }
    let d_max = (n * n + n) / 4;
    let mut all = vec![Presentation::new(n, [])?];
    if d_max > 0 {
        all.extend(enumerate_presentations(n, d_max)?);
    }
    let results: Vec<(CertificateKind, bool, String)> = all
        .par_iter()
        .map(|p| {
            let cert = theorem1_certificate(p);
            let ok = cert.is_valid_for(p)
                && match cert.kind {
                    CertificateKind::SePair { a, b } => {
                        verify_witness(a, b, p, witness_k, limits).unwrap_or(false)
                    }
                    CertificateKind::ZeroSum => p.relations().iter().all(|r| !r.is_zero()),
                    CertificateKind::None { .. } => false,
                };
            (cert.kind, ok, p.to_json())
        })
        .collect();
    let mut report = SweepReport {
        n,
        d_max,
        total: all.len(),
        se_pair: 0,
        zero_sum: 0,
        uncertified: Vec::new(),
        witness_failures: Vec::new(),
    };
    for (kind, ok, id) in results {
        match kind {
            CertificateKind::SePair { .. } => report.se_pair += 1,
            CertificateKind::ZeroSum => report.zero_sum += 1,
            CertificateKind::None { .. } => {
                report.uncertified.push(id);
                continue;
            }
        }
        if !ok {
            report.witness_failures.push(id);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub id: String,
    pub d: usize,
    pub qhs: bool,
    pub all_pure: bool,
    pub verdict: String,
    pub certificate: String,
}

/// Caps used for census classification: degree 12, classes of 10^5 words.
pub fn census_limits() -> EngineLimits {
    EngineLimits {
        max_class_size: 100_000,
        max_degree: 12,
    }
}

pub fn classify_presentation(p: &Presentation, limits: &EngineLimits) -> Result<CensusRecord> {
    let qhs = validate_qhs(p).valid;
    let profile = hilbert_profile(p, limits.max_degree, limits)?;
    let mut verdict = match profile.nilpotency_index() {
        Some(k) => format!("finite nil={k}"),
        None if profile.exhausted.is_some() => {
            format!("inconclusive at={}", profile.truncated_at)
        }
        None => format!("unknown upto={}", profile.truncated_at),
    };
    if qhs {
        let reg = match regularity_degree(p, limits)? {
            Regularity::Regular { degree, .. } => degree.to_string(),
            Regularity::IrregularUpTo { .. } => "none".into(),
            Regularity::Inconclusive { .. } => "inconclusive".into(),
        };
        verdict.push_str(&format!(" reg={reg}"));
    }
    let certificate = match theorem1_certificate(p).kind {
        CertificateKind::SePair { a, b } => format!("se_pair({a};{b})"),
        CertificateKind::ZeroSum => "zero_sum".into(),
        CertificateKind::None { .. } => "none".into(),
    };
    Ok(CensusRecord {
        id: p.content_hash()[..16].to_string(),
        d: p.len(),
        qhs,
        all_pure: qhs && all_pure(p)?,
        verdict,
        certificate,
    })
}

/// Classify every QHS on `n` generators; records are sorted by id.
pub fn qhs_census(n: usize, limits: &EngineLimits) -> Result<Vec<CensusRecord>> {
    let all = enumerate_qhs(n)?;
    let mut records: Vec<CensusRecord> = all
        .par_iter()
        .map(|p| classify_presentation(p, limits))
        .collect::<Result<_>>()?;
    records.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(records)
}

pub fn census_csv(records: &[CensusRecord]) -> String {
    let mut out = String::from("id,d,qhs,all_pure,verdict,certificate\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.id, r.d, r.qhs, r.all_pure, r.verdict, r.certificate
        ));
    }
    out
}
