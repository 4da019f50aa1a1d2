//! Explicit finite-dimensional QHS: the four small base systems, the
//! four-generator extension, the tower reaching `delta(n)` relations for every
//! `n`, and the `x1^q` witness check on the extension.

use serde::{Deserialize, Serialize};

use crate::coset::{search_class, EngineLimits, RewriteTables};
use crate::error::{Error, Result};
use crate::model::{delta, validate_qhs, IdealMode, Pair, Presentation, Relation, Word};

fn eq(a: u8, b: u8, c: u8, d: u8) -> Relation {
    Relation::equal(Pair(a, b), Pair(c, d)).expect("distinct sides")
}

/// The regular base systems on 1 to 4 generators.
pub fn base_qhs(m: usize) -> Result<Presentation> {
    let rels = match m {
        1 => vec![Relation::zero(1, 1)],
        2 => vec![eq(2, 2, 1, 1), Relation::zero(2, 1)],
        3 => vec![
            eq(3, 3, 2, 1),
            eq(3, 2, 1, 1),
            Relation::zero(3, 1),
            Relation::zero(2, 2),
        ],
        4 => vec![
            eq(4, 4, 3, 1),
            eq(4, 3, 2, 1),
            eq(4, 2, 1, 1),
            eq(3, 3, 2, 2),
            Relation::zero(3, 2),
            Relation::zero(4, 1),
        ],
        _ => return Err(Error::usage(format!("base systems exist for m in 1..=4, got {m}"))),
    };
    Presentation::new(m, rels)
}

/// Embed a QHS on `m` generators as `x3..x_{m+2}` inside `n = m + 4`
/// generators and add the extension relations.
///
/// The inner top monomial `x_{n-2} x3` is dropped; it reappears inside
/// `x_{n-1} x_{n-1} = x_{n-2} x3`. The result has `|inner| + 2n - 3` relations.
pub fn extend(inner: &Presentation) -> Result<Presentation> {
    let report = validate_qhs(inner);
    if !report.valid {
        return Err(Error::InvalidPresentation(format!(
            "inner system is not a QHS: {}",
            report.violations[0].detail
        )));
    }
    let m = inner.n();
    let n = m + 4;
    if n > crate::model::MAX_GENERATORS {
        return Err(Error::usage("extension exceeds the maximal alphabet"));
    }
    let shifted = inner.shifted(2, n)?;
    let inner_top = Relation::zero(n as u8 - 2, 3);
    let mut rels: Vec<Relation> = shifted
        .relations()
        .iter()
        .copied()
        .filter(|r| *r != inner_top)
        .collect();

    let n8 = n as u8;
    for j in 2..=n8 - 2 {
        rels.push(eq(n8, j, j, 1));
    }
    for j in 2..=n8 - 3 {
        rels.push(eq(n8 - 1, j + 1, j, 2));
    }
    rels.push(eq(n8, n8, n8 - 1, 1));
    rels.push(eq(n8, n8 - 1, n8 - 2, 2));
    rels.push(eq(n8 - 1, n8 - 1, n8 - 2, 3));
    rels.push(eq(n8 - 1, 2, 1, 1));
    rels.push(Relation::zero(n8, 1));
    Presentation::new(n, rels)
}

/// How a tower on `n` generators decomposes: `n = base_size + 4 * steps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub n: usize,
    pub steps: usize,
    pub base_size: usize,
}

impl TowerSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::usage("tower needs n >= 1"));
        }
        let steps = (n - 1) / 4;
        Ok(TowerSpec {
            n,
            steps,
            base_size: n - 4 * steps,
        })
    }

    pub fn expected_relations(&self) -> u64 {
        delta(self.n as u64)
    }

    /// Relation count after `steps` extensions of a `k`-relation QHS on `m`
    /// generators: `k + 2jm + 4j^2 + j`.
    pub fn extended_size(k: u64, m: u64, steps: u64) -> u64 {
        k + 2 * steps * m + 4 * steps * steps + steps
    }
}

/// A regular QHS on `n` generators with exactly `delta(n)` relations.
pub fn build_regular_qhs(n: usize) -> Result<Presentation> {
    let spec = TowerSpec::new(n)?;
    let mut p = base_qhs(spec.base_size)?;
    for _ in 0..spec.steps {
        p = extend(&p)?;
    }
    Ok(p)
}

/// `(5n - 9) / 2` for odd `n`, `(5n - 8) / 2` for even `n`.
pub fn witness_length(n: usize) -> usize {
    if n % 2 == 1 {
        (5 * n - 9) / 2
    } else {
        (5 * n - 8) / 2
    }
}

/// Whether the class of `word` modulo `I_M` has a member ending in `x_n`.
pub fn class_reaches_top_letter(
    word: &Word,
    p: &Presentation,
    limits: &EngineLimits,
) -> Result<bool> {
    let tables = RewriteTables::new(p, IdealMode::WithoutTop)?;
    let top = p.n() as u8;
    let found = search_class(word, &tables, limits, |v| v.last() == Some(&top))?;
    Ok(found.is_some())
}

/// Search the class of `x1^q` modulo `I_M` of `build_regular_qhs(n)` for a
/// member ending in `x_n`.
pub fn lemma_m1_witness(n: usize, limits: &EngineLimits) -> Result<bool> {
    if n < 5 {
        return Err(Error::usage("the x1^q witness needs n >= 5"));
    }
    let p = build_regular_qhs(n)?;
    let word = Word::power(1, witness_length(n))?;
    class_reaches_top_letter(&word, &p, limits)
}

/// Relation count of the earlier finite-dimensional family this construction
/// improves on: `(n^2 + 2n) / 4` for even `n`, `(n^2 + 2n + 1) / 4` for odd.
pub fn wisliceny_count(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        (n * n + 2 * n) / 4
    } else {
        (n * n + 2 * n + 1) / 4
    }
}
