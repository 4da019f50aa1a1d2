//! Graded dimensions of `R = K<X> / J_M`.
//!
//! In a semigroup algebra the nonzero monomial classes of degree `m` form a
//! basis of the degree-`m` component, so `dim R_m` is the size of the
//! degree-`m` minimal basis and no linear algebra over `K` is needed.

use serde::{Deserialize, Serialize};

use crate::coset::{next_minimal_basis_with, EngineLimits, MinimalBasis, RewriteTables};
use crate::error::{Error, Result};
use crate::model::{IdealMode, Presentation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DimensionVerdict {
    /// `nilpotency_index` is the smallest `m >= 1` with `dim R_m = 0`.
    FiniteDimensional { nilpotency_index: usize },
    UnknownUpTo { degree: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertProfile {
    /// `dims[0] = 1` for the unit.
    pub dims: Vec<u64>,
    /// Last degree whose dimension was computed.
    pub truncated_at: usize,
    pub verdict: DimensionVerdict,
    /// Set when a resource cap stopped the computation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exhausted: Option<String>,
}

impl HilbertProfile {
    pub fn nilpotency_index(&self) -> Option<usize> {
        match self.verdict {
            DimensionVerdict::FiniteDimensional { nilpotency_index } => Some(nilpotency_index),
            DimensionVerdict::UnknownUpTo { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.nilpotency_index().is_some()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,dim\n");
        for (d, v) in self.dims.iter().enumerate() {
            out.push_str(&format!("{d},{v}\n"));
        }
        out
    }
}

/// Dimensions of `R_1, R_2, ...` by growing the minimal basis degree by
/// degree, stopping at the first empty degree or at `max_degree`.
pub fn hilbert_profile(
    p: &Presentation,
    max_degree: usize,
    limits: &EngineLimits,
) -> Result<HilbertProfile> {
    hilbert_profile_with_bases(p, max_degree, limits, |_| {})
}

/// As [`hilbert_profile`], handing every computed basis to `on_basis`.
pub fn hilbert_profile_with_bases(
    p: &Presentation,
    max_degree: usize,
    limits: &EngineLimits,
    mut on_basis: impl FnMut(&MinimalBasis),
) -> Result<HilbertProfile> {
    if max_degree == 0 {
        return Err(Error::usage("max_degree must be at least 1"));
    }
    let tables = RewriteTables::new(p, IdealMode::FullM)?;
    let mut dims = vec![1u64];
    let mut basis = MinimalBasis::degree_one(p, IdealMode::FullM);
    loop {
        on_basis(&basis);
        dims.push(basis.len() as u64);
        let degree = basis.degree;
        if basis.is_empty() {
            return Ok(HilbertProfile {
                dims,
                truncated_at: degree,
                verdict: DimensionVerdict::FiniteDimensional {
                    nilpotency_index: degree,
                },
                exhausted: None,
            });
        }
        if degree >= max_degree {
            return Ok(HilbertProfile {
                dims,
                truncated_at: degree,
                verdict: DimensionVerdict::UnknownUpTo { degree },
                exhausted: None,
            });
        }
        match next_minimal_basis_with(&basis, &tables, IdealMode::FullM, limits) {
            Ok(next) => basis = next,
            Err(e @ Error::ResourceExhausted { .. }) => {
                return Ok(HilbertProfile {
                    dims,
                    truncated_at: degree,
                    verdict: DimensionVerdict::UnknownUpTo { degree },
                    exhausted: Some(e.to_string()),
                })
            }
            Err(e) => return Err(e),
        }
    }
}

/// `dim R` when the profile proves finite dimensionality.
pub fn total_dimension(profile: &HilbertProfile) -> Option<u64> {
    profile.is_finite().then(|| profile.dims.iter().sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dim3Report {
    pub dim3: u64,
    /// `n^3 - 2dn` for `n` generators and `d` relations.
    pub gs_value: i64,
}

/// `dim R_3` next to `n^3 - 2dn`. Nothing is asserted about the two.
pub fn dim3_report(p: &Presentation, limits: &EngineLimits) -> Result<Dim3Report> {
    let profile = hilbert_profile(p, 3, limits)?;
    if let Some(reason) = profile.exhausted {
        return Err(Error::usage(format!("dim R_3 not computable: {reason}")));
    }
    let dim3 = profile.dims.get(3).copied().unwrap_or(0);
    let n = p.n() as i64;
    let d = p.len() as i64;
    Ok(Dim3Report {
        dim3,
        gs_value: n * n * n - 2 * d * n,
    })
}
