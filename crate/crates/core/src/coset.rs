//! Coset computations in the free monoid modulo a quadratic semigroup
//! relation set.
//!
//! Two words of degree `m` are congruent when a chain of binomial swaps
//! (`ab <-> cd` at adjacent positions) connects them; a class is zero when
//! one of its words contains a zero pair as a factor. Classes are finite, so
//! a breadth-first search over a class always terminates. Minimality is
//! always decided over the full class, never by greedy reduction.

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{rtl_cmp, sort_rtl, validate_qhs, IdealMode, Presentation, Relation, Word};
use crate::store::{ByteStore, ClassStore, PackedStore, Packing, Visited, WordSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineLimits {
    /// Largest class (and largest per-degree basis) the engine will hold.
    pub max_class_size: usize,
    pub max_degree: usize,
}

impl Default for EngineLimits {
    fn default() -> Self {
        EngineLimits {
            max_class_size: 5_000_000,
            max_degree: 64,
        }
    }
}

impl EngineLimits {
    pub fn new(max_class_size: usize, max_degree: usize) -> Result<Self> {
        if max_class_size == 0 || max_degree == 0 {
            return Err(Error::usage("engine limits must be positive"));
        }
        Ok(EngineLimits {
            max_class_size,
            max_degree,
        })
    }
}

/// Lookup tables for one (presentation, ideal mode): zero pairs, swap
/// partners, and which pairs are the larger side of a binomial.
#[derive(Debug, Clone)]
pub struct RewriteTables {
    n: usize,
    zero: Vec<bool>,
    swaps: Vec<Vec<(u8, u8)>>,
    leading: Vec<bool>,
}

impl RewriteTables {
    pub fn new(p: &Presentation, mode: IdealMode) -> Result<Self> {
        let n = p.n();
        let rels = p.relations_for(mode)?;
        let mut t = RewriteTables {
            n,
            zero: vec![false; n * n],
            swaps: vec![Vec::new(); n * n],
            leading: vec![false; n * n],
        };
        for r in rels {
            match r {
                Relation::Zero(q) => {
                    let i = t.idx(q.0, q.1);
                    t.zero[i] = true;
                }
                Relation::Equal(l, s) => {
                    let li = t.idx(l.0, l.1);
                    let si = t.idx(s.0, s.1);
                    t.swaps[li].push((s.0, s.1));
                    t.swaps[si].push((l.0, l.1));
                    t.leading[li] = true;
                }
            }
        }
        Ok(t)
    }

    #[inline]
    fn idx(&self, a: u8, b: u8) -> usize {
        (a as usize - 1) * self.n + (b as usize - 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_zero_pair(&self, a: u8, b: u8) -> bool {
        self.zero[self.idx(a, b)]
    }

    #[inline]
    pub fn has_zero_factor(&self, w: &[u8]) -> bool {
        w.windows(2).any(|p| self.is_zero_pair(p[0], p[1]))
    }

    /// Pairs that a single swap rewrites into a right-to-left smaller pair.
    #[inline]
    pub fn is_leading_pair(&self, a: u8, b: u8) -> bool {
        self.leading[self.idx(a, b)]
    }

    /// Cheap certificate of non-minimality or zero: a zero factor or a
    /// factor that a directed rewrite strictly decreases.
    #[inline]
    pub fn obviously_reducible(&self, w: &[u8]) -> bool {
        w.windows(2).any(|p| {
            let i = self.idx(p[0], p[1]);
            self.zero[i] || self.leading[i]
        })
    }

    #[inline]
    fn partners(&self, a: u8, b: u8) -> &[(u8, u8)] {
        &self.swaps[self.idx(a, b)]
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        if w.letters().iter().any(|&l| l == 0 || l as usize > self.n) {
            return Err(Error::usage(format!(
                "word {w} uses letters outside x1..x{}",
                self.n
            )));
        }
        Ok(())
    }
}

fn bfs_in<S: ClassStore>(
    mut store: S,
    start: &[u8],
    tables: &RewriteTables,
    limits: &EngineLimits,
    stop: &mut impl FnMut(&[u8]) -> bool,
) -> Result<(S, Option<usize>)> {
    let m = start.len();
    store.insert(start, u32::MAX);
    if stop(start) {
        return Ok((store, Some(0)));
    }
    let mut cur = vec![0u8; m];
    let mut next = vec![0u8; m];
    let mut i = 0;
    while i < store.len() {
        store.load(i, &mut cur);
        for pos in 0..m.saturating_sub(1) {
            for &(c, d) in tables.partners(cur[pos], cur[pos + 1]) {
                next.copy_from_slice(&cur);
                next[pos] = c;
                next[pos + 1] = d;
                if !store.insert(&next, i as u32) {
                    continue;
                }
                if stop(&next) {
                    let hit = store.len() - 1;
                    return Ok((store, Some(hit)));
                }
                if store.len() > limits.max_class_size {
                    return Err(Error::ResourceExhausted {
                        word: Word::from_vec_unchecked(start.to_vec()),
                        reason: format!(
                            "class exceeds max_class_size = {}",
                            limits.max_class_size
                        ),
                    });
                }
            }
        }
        i += 1;
    }
    Ok((store, None))
}

/// Breadth-first search over the swap class of `start`. `stop` sees every
/// word once, in discovery order; returning `true` ends the search early and
/// reports that word's index.
pub(crate) fn bfs_class(
    start: &[u8],
    tables: &RewriteTables,
    limits: &EngineLimits,
    mut stop: impl FnMut(&[u8]) -> bool,
) -> Result<(Visited, Option<usize>)> {
    match Packing::new(tables.n, start.len()) {
        Some(packing) => {
            let (s, hit) = bfs_in(PackedStore::new(packing), start, tables, limits, &mut stop)?;
            Ok((Visited::Packed(s), hit))
        }
        None => {
            let (s, hit) = bfs_in(ByteStore::new(start.len()), start, tables, limits, &mut stop)?;
            Ok((Visited::Bytes(s), hit))
        }
    }
}

/// Search the class of `w` for a member satisfying `pred`, ignoring zero
/// factors. Returns the first such member found.
pub fn search_class(
    w: &Word,
    tables: &RewriteTables,
    limits: &EngineLimits,
    mut pred: impl FnMut(&[u8]) -> bool,
) -> Result<Option<Word>> {
    tables.check_word(w)?;
    let (arena, hit) = bfs_class(w.letters(), tables, limits, &mut pred)?;
    Ok(hit.map(|i| Word::from_vec_unchecked(arena.word(i))))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassVerdict {
    Zero,
    /// `members` is sorted ascending in the right-to-left order, so
    /// `minimal == members[0]`.
    Nonzero { members: Vec<Word>, minimal: Word },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetClass {
    pub degree: usize,
    pub verdict: ClassVerdict,
}

impl CosetClass {
    pub fn is_zero(&self) -> bool {
        matches!(self.verdict, ClassVerdict::Zero)
    }

    pub fn minimal(&self) -> Option<&Word> {
        match &self.verdict {
            ClassVerdict::Zero => None,
            ClassVerdict::Nonzero { minimal, .. } => Some(minimal),
        }
    }

    pub fn members(&self) -> Option<&[Word]> {
        match &self.verdict {
            ClassVerdict::Zero => None,
            ClassVerdict::Nonzero { members, .. } => Some(members),
        }
    }
}

/// The class of `w` modulo the ideal selected by `mode`.
pub fn coset_class(
    w: &Word,
    p: &Presentation,
    mode: IdealMode,
    limits: &EngineLimits,
) -> Result<CosetClass> {
    let tables = RewriteTables::new(p, mode)?;
    coset_class_with(w, &tables, limits)
}

pub fn coset_class_with(
    w: &Word,
    tables: &RewriteTables,
    limits: &EngineLimits,
) -> Result<CosetClass> {
    tables.check_word(w)?;
    let (arena, hit) = bfs_class(w.letters(), tables, limits, |v| tables.has_zero_factor(v))?;
    let verdict = match hit {
        Some(_) => ClassVerdict::Zero,
        None => {
            let mut members: Vec<Word> = Vec::with_capacity(arena.len());
            arena.for_each(|v| members.push(Word::from_vec_unchecked(v.to_vec())));
            sort_rtl(&mut members);
            let minimal = members[0].clone();
            ClassVerdict::Nonzero { members, minimal }
        }
    };
    Ok(CosetClass {
        degree: w.degree(),
        verdict,
    })
}

/// The minimal member of the class of `w`, or `None` when the class is zero.
pub fn minimal_monomial(
    w: &Word,
    p: &Presentation,
    mode: IdealMode,
    limits: &EngineLimits,
) -> Result<Option<Word>> {
    Ok(coset_class(w, p, mode, limits)?.minimal().cloned())
}

/// A chain of words from `from` to `to`, consecutive entries differing by one
/// swap, or `None` when the two words are not congruent.
pub fn swap_chain(
    from: &Word,
    to: &Word,
    p: &Presentation,
    mode: IdealMode,
    limits: &EngineLimits,
) -> Result<Option<Vec<Word>>> {
    let tables = RewriteTables::new(p, mode)?;
    tables.check_word(from)?;
    if from.degree() != to.degree() {
        return Ok(None);
    }
    let target = to.letters();
    let (arena, hit) = bfs_class(from.letters(), &tables, limits, |v| v == target)?;
    Ok(hit.map(|mut i| {
        let mut chain = vec![Word::from_vec_unchecked(arena.word(i))];
        while arena.parent(i) != u32::MAX {
            i = arena.parent(i) as usize;
            chain.push(Word::from_vec_unchecked(arena.word(i)));
        }
        chain.reverse();
        chain
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    Tame,
    Singular,
    NonMinimal,
    Zero,
}

/// `v` witnesses tameness of `w`: some position holds `top` and every later
/// position agrees with `w`.
#[inline]
fn tame_witness(v: &[u8], w: &[u8], top: u8) -> bool {
    for idx in (0..v.len()).rev() {
        if v[idx] == top {
            return true;
        }
        if v[idx] != w[idx] {
            return false;
        }
    }
    false
}

fn require_top(p: &Presentation) -> Result<()> {
    if !p.has_top() {
        return Err(Error::usage(format!(
            "tameness is defined modulo I_M and needs {} = 0",
            p.top_pair()
        )));
    }
    Ok(())
}

/// Classify `w` modulo `I_M` (the ideal without `x_n x_1`). `p` is the full
/// system including `x_n x_1 = 0`.
pub fn classify(w: &Word, p: &Presentation, limits: &EngineLimits) -> Result<Classification> {
    require_top(p)?;
    let tables = RewriteTables::new(p, IdealMode::WithoutTop)?;
    let class = coset_class_with(w, &tables, limits)?;
    let top = p.n() as u8;
    Ok(match class.verdict {
        ClassVerdict::Zero => Classification::Zero,
        ClassVerdict::Nonzero { members, minimal } => {
            if minimal != *w {
                Classification::NonMinimal
            } else if members
                .iter()
                .any(|v| tame_witness(v.letters(), w.letters(), top))
            {
                Classification::Tame
            } else {
                Classification::Singular
            }
        }
    })
}

/// Singularity test with early exits: stops as soon as the class shows a
/// zero factor, a smaller member, or a tameness witness.
pub(crate) fn is_singular_with(
    w: &[u8],
    tables: &RewriteTables,
    limits: &EngineLimits,
) -> Result<bool> {
    if tables.obviously_reducible(w) {
        return Ok(false);
    }
    let top = tables.n as u8;
    let (_, hit) = bfs_class(w, tables, limits, |v| {
        tables.has_zero_factor(v)
            || rtl_cmp(v, w) == std::cmp::Ordering::Less
            || tame_witness(v, w, top)
    })?;
    Ok(hit.is_none())
}

/// All minimal monomials of one degree, with the singular ones tagged when the
/// basis is taken modulo `I_M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalBasis {
    pub degree: usize,
    pub minimals: Vec<Word>,
    pub singular: Vec<Word>,
    pub truncated: bool,
}

impl MinimalBasis {
    /// Degree-1 classes are singletons; a letter is tame iff it is `x_n`.
    pub fn degree_one(p: &Presentation, mode: IdealMode) -> Self {
        let top = p.n() as u8;
        let minimals: Vec<Word> = p
            .alphabet()
            .letters()
            .map(|l| Word::from_vec_unchecked(vec![l]))
            .collect();
        let singular = match mode {
            IdealMode::WithoutTop => minimals.iter().filter(|w| w.last() != top).cloned().collect(),
            IdealMode::FullM => Vec::new(),
        };
        MinimalBasis {
            degree: 1,
            minimals,
            singular,
            truncated: false,
        }
    }

    pub fn len(&self) -> usize {
        self.minimals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.minimals.is_empty()
    }
}

struct ClassInfo {
    minimal: Vec<u8>,
    singular: bool,
}

/// Share-nothing worker state: one memo per chunk of candidates.
fn resolve_chunk(
    candidates: &[Vec<u8>],
    tables: &RewriteTables,
    limits: &EngineLimits,
    tag_singular: bool,
) -> Result<Vec<ClassInfo>> {
    let top = tables.n as u8;
    let mut memo = WordSet::new(tables.n, candidates.first().map_or(0, Vec::len));
    let mut found = Vec::new();
    for cand in candidates {
        if memo.contains(cand) {
            continue;
        }
        let (arena, hit) = bfs_class(cand, tables, limits, |v| tables.has_zero_factor(v))?;
        if hit.is_none() {
            let mut minimal = cand.clone();
            arena.for_each(|v| {
                if rtl_cmp(v, &minimal) == std::cmp::Ordering::Less {
                    minimal.copy_from_slice(v);
                }
            });
            let singular = tag_singular && !arena.any(|v| tame_witness(v, &minimal, top));
            found.push(ClassInfo { minimal, singular });
        }
        arena.for_each(|v| memo.insert(v));
    }
    Ok(found)
}

/// Extend a complete degree-`m` minimal basis to degree `m + 1`.
///
/// Every factor of a minimal word is minimal, so candidates are `u * x` with
/// `u` in the basis whose length-`m` suffix is also in the basis.
pub fn next_minimal_basis(
    basis: &MinimalBasis,
    p: &Presentation,
    mode: IdealMode,
    limits: &EngineLimits,
) -> Result<MinimalBasis> {
    let tables = RewriteTables::new(p, mode)?;
    next_minimal_basis_with(basis, &tables, mode, limits)
}

pub(crate) fn next_minimal_basis_with(
    basis: &MinimalBasis,
    tables: &RewriteTables,
    mode: IdealMode,
    limits: &EngineLimits,
) -> Result<MinimalBasis> {
    let n = tables.n as u8;
    let m = basis.degree;
    let known: FxHashSet<&[u8]> = basis.minimals.iter().map(Word::letters).collect();
    let mut candidates = Vec::new();
    for u in &basis.minimals {
        let u = u.letters();
        for x in 1..=n {
            if tables.obviously_reducible(&[u[m - 1], x]) {
                continue;
            }
            let mut cand = Vec::with_capacity(m + 1);
            cand.extend_from_slice(u);
            cand.push(x);
            if known.contains(&cand[1..]) {
                candidates.push(cand);
            }
        }
    }

    let tag = mode == IdealMode::WithoutTop;
    let chunk = (candidates.len() / (4 * rayon::current_num_threads())).max(64);
    let parts: Vec<Vec<ClassInfo>> = candidates
        .par_chunks(chunk)
        .map(|c| resolve_chunk(c, tables, limits, tag))
        .collect::<Result<_>>()?;

    let mut classes: FxHashMap<Vec<u8>, bool> = FxHashMap::default();
    for info in parts.into_iter().flatten() {
        classes.insert(info.minimal, info.singular);
    }
    if classes.len() > limits.max_class_size {
        return Err(Error::ResourceExhausted {
            word: Word::from_vec_unchecked(basis.minimals[0].letters().to_vec()),
            reason: format!(
                "degree-{} basis exceeds max_class_size = {}",
                m + 1,
                limits.max_class_size
            ),
        });
    }
    let mut minimals = Vec::with_capacity(classes.len());
    let mut singular = Vec::new();
    for (w, sing) in classes {
        let w = Word::from_vec_unchecked(w);
        if sing {
            singular.push(w.clone());
        }
        minimals.push(w);
    }
    sort_rtl(&mut minimals);
    sort_rtl(&mut singular);
    Ok(MinimalBasis {
        degree: m + 1,
        minimals,
        singular,
        truncated: false,
    })
}

/// The singular words of successive degrees modulo `I_M`.
///
/// Singular words are factor-closed, so the degree-`k + 1` layer is found
/// among `u * x` with `u` singular and the length-`k` suffix singular.
pub struct SingularSweep {
    tables: RewriteTables,
    limits: EngineLimits,
    layer: Vec<Word>,
    degree: usize,
}

impl SingularSweep {
    pub fn new(p: &Presentation, limits: &EngineLimits) -> Result<Self> {
        let report = validate_qhs(p);
        if !report.valid {
            return Err(Error::usage(format!(
                "singular monomials need a QHS: {}",
                report.violations[0].detail
            )));
        }
        Ok(SingularSweep {
            tables: RewriteTables::new(p, IdealMode::WithoutTop)?,
            limits: *limits,
            layer: Vec::new(),
            degree: 0,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The current layer (empty before the first `advance`).
    pub fn layer(&self) -> &[Word] {
        &self.layer
    }

    /// Move to the next degree and return its singular words.
    pub fn advance(&mut self) -> Result<&[Word]> {
        let top = self.tables.n as u8;
        if self.degree == 0 {
            self.layer = (1..top).map(|l| Word::from_vec_unchecked(vec![l])).collect();
            self.degree = 1;
            return Ok(&self.layer);
        }
        let k = self.degree;
        let known: FxHashSet<&[u8]> = self.layer.iter().map(Word::letters).collect();
        let mut candidates = Vec::new();
        for u in &self.layer {
            for x in 1..=top {
                let mut cand = Vec::with_capacity(k + 1);
                cand.extend_from_slice(u.letters());
                cand.push(x);
                if known.contains(&cand[1..]) {
                    candidates.push(cand);
                }
            }
        }
        let tables = &self.tables;
        let limits = &self.limits;
        let flags: Vec<bool> = candidates
            .par_iter()
            .map(|c| is_singular_with(c, tables, limits))
            .collect::<Result<_>>()?;
        let mut next: Vec<Word> = candidates
            .into_iter()
            .zip(flags)
            .filter_map(|(c, s)| s.then(|| Word::from_vec_unchecked(c)))
            .collect();
        sort_rtl(&mut next);
        self.layer = next;
        self.degree = k + 1;
        Ok(&self.layer)
    }
}

/// All singular words of degree `m` modulo `I_M` for a QHS `p`.
pub fn singular_monomials(p: &Presentation, m: usize, limits: &EngineLimits) -> Result<Vec<Word>> {
    if m == 0 {
        return Err(Error::usage("degree must be at least 1"));
    }
    let mut sweep = SingularSweep::new(p, limits)?;
    while sweep.degree() < m {
        if sweep.advance()?.is_empty() {
            // factor-closed: empty stays empty
            return Ok(Vec::new());
        }
    }
    Ok(sweep.layer().to_vec())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Regularity {
    /// No singular words of `degree`; the algebra is `(degree + 1)`-step
    /// nilpotent.
    Regular {
        degree: usize,
        nilpotency_bound: usize,
    },
    IrregularUpTo {
        max_degree: usize,
        singular_counts: Vec<usize>,
    },
    Inconclusive { degree: usize, reason: String },
}

/// First degree without singular words, searched up to `limits.max_degree`.
pub fn regularity_degree(p: &Presentation, limits: &EngineLimits) -> Result<Regularity> {
    let mut sweep = SingularSweep::new(p, limits)?;
    let mut counts = Vec::new();
    while sweep.degree() < limits.max_degree {
        let degree = sweep.degree() + 1;
        match sweep.advance() {
            Ok([]) => {
                return Ok(Regularity::Regular {
                    degree,
                    nilpotency_bound: degree + 1,
                })
            }
            Ok(layer) => counts.push(layer.len()),
            Err(e @ Error::ResourceExhausted { .. }) => {
                return Ok(Regularity::Inconclusive {
                    degree,
                    reason: e.to_string(),
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Regularity::IrregularUpTo {
        max_degree: limits.max_degree,
        singular_counts: counts,
    })
}
