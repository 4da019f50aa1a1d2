//! Alphabets, words, quadratic semigroup relations and presentations.
//!
//! Generators are the indices `1..=n` ordered `1 < 2 < ... < n`; generator `i`
//! renders as `x<i>`. Degree-2 monomials are ordered pairs `(left, right)`.
//! Words of a fixed degree are compared right-to-left: the last position where
//! two words differ decides.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Largest supported alphabet; letters are stored as `u8`.
pub const MAX_GENERATORS: usize = 255;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    n: usize,
}

impl Alphabet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GENERATORS {
            return Err(Error::usage(format!(
                "alphabet size must be in 1..={MAX_GENERATORS}, got {n}"
            )));
        }
        Ok(Alphabet { n })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// The minimal generator `a = x1`.
    pub fn min(&self) -> u8 {
        1
    }

    /// The maximal generator `b = x_n`.
    pub fn max(&self) -> u8 {
        self.n as u8
    }

    pub fn contains(&self, letter: u8) -> bool {
        letter >= 1 && (letter as usize) <= self.n
    }

    /// All generators as degree-1 words, ascending.
    pub fn letters(&self) -> impl Iterator<Item = u8> {
        1..=self.n as u8
    }

    /// All `n^m` words of degree `m`, ascending in the right-to-left order.
    pub fn words(&self, degree: usize) -> Vec<Word> {
        let mut out = Vec::with_capacity(self.n.pow(degree as u32));
        let mut cur = vec![1u8; degree];
        if degree == 0 {
            return out;
        }
        loop {
            out.push(Word(cur.clone()));
            // odometer with the least significant letter first
            let mut i = 0;
            loop {
                if i == degree {
                    return out;
                }
                if (cur[i] as usize) < self.n {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 1;
                i += 1;
            }
        }
    }
}

/// A monomial of fixed degree: a non-empty sequence of generator indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: impl Into<Vec<u8>>) -> Result<Self> {
        let letters = letters.into();
        if letters.is_empty() {
            return Err(Error::usage("words must have degree at least 1"));
        }
        if letters.contains(&0) {
            return Err(Error::usage("generator indices start at 1"));
        }
        Ok(Word(letters))
    }

    /// `x_letter^k`
    pub fn power(letter: u8, k: usize) -> Result<Self> {
        Word::new(vec![letter; k])
    }

    pub(crate) fn from_vec_unchecked(letters: Vec<u8>) -> Self {
        debug_assert!(!letters.is_empty());
        Word(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn last(&self) -> u8 {
        self.0[self.0.len() - 1]
    }

    pub fn check_alphabet(&self, alphabet: &Alphabet) -> Result<()> {
        match self.0.iter().find(|&&l| !alphabet.contains(l)) {
            Some(l) => Err(Error::usage(format!(
                "letter x{l} is outside the alphabet x1..x{}",
                alphabet.size()
            ))),
            None => Ok(()),
        }
    }

    /// Append one letter.
    pub fn extended(&self, letter: u8) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(letter);
        Word(v)
    }

    /// The length-`len` prefix, or `None` if `len` is 0 or exceeds the degree.
    pub fn prefix(&self, len: usize) -> Option<Word> {
        (len >= 1 && len <= self.0.len()).then(|| Word(self.0[..len].to_vec()))
    }

    pub fn suffix(&self, len: usize) -> Option<Word> {
        let m = self.0.len();
        (len >= 1 && len <= m).then(|| Word(self.0[m - len..].to_vec()))
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "x{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Right-to-left lexicographic comparison of two words of equal length.
#[inline]
pub(crate) fn rtl_cmp(u: &[u8], v: &[u8]) -> Ordering {
    debug_assert_eq!(u.len(), v.len());
    for (a, b) in u.iter().rev().zip(v.iter().rev()) {
        match a.cmp(b) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Compare two words of the same degree from the last position backwards.
pub fn rtl_lex_cmp(u: &Word, v: &Word) -> Result<Ordering> {
    if u.degree() != v.degree() {
        return Err(Error::usage(format!(
            "cannot compare words of degrees {} and {}",
            u.degree(),
            v.degree()
        )));
    }
    Ok(rtl_cmp(&u.0, &v.0))
}

/// Sort words of one degree ascending in the right-to-left order.
pub fn sort_rtl(words: &mut [Word]) {
    words.sort_by(|u, v| rtl_cmp(&u.0, &v.0));
}

/// A degree-2 monomial `ab`, stored as (left letter, right letter).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pair(pub u8, pub u8);

impl Pair {
    pub fn left(self) -> u8 {
        self.0
    }

    pub fn right(self) -> u8 {
        self.1
    }

    /// Ordering of pairs as degree-2 words (right letter first).
    pub fn rtl_cmp(self, other: Pair) -> Ordering {
        self.1.cmp(&other.1).then(self.0.cmp(&other.0))
    }

    fn rtl_key(self) -> (u8, u8) {
        (self.1, self.0)
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}*x{}", self.0, self.1)
    }
}

impl fmt::Debug for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}x{}", self.0, self.1)
    }
}

/// A quadratic semigroup relation: `ab = 0` or `ab = cd`.
///
/// `Equal` is kept with its right-to-left larger pair first, so `Equal(ab, cd)`
/// reads as the directed rewrite `ab -> cd`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Zero(Pair),
    Equal(Pair, Pair),
}

impl Relation {
    /// Build `lhs = rhs`, orienting the larger pair first.
    pub fn equal(lhs: Pair, rhs: Pair) -> Result<Self> {
        match lhs.rtl_cmp(rhs) {
            Ordering::Equal => Err(Error::InvalidPresentation(format!(
                "relation {lhs} = {rhs} has identical sides"
            ))),
            Ordering::Greater => Ok(Relation::Equal(lhs, rhs)),
            Ordering::Less => Ok(Relation::Equal(rhs, lhs)),
        }
    }

    pub fn zero(a: u8, b: u8) -> Self {
        Relation::Zero(Pair(a, b))
    }

    fn canonical(self) -> Result<Self> {
        match self {
            Relation::Zero(_) => Ok(self),
            Relation::Equal(l, r) => Relation::equal(l, r),
        }
    }

    pub fn support(&self) -> Vec<Pair> {
        match *self {
            Relation::Zero(p) => vec![p],
            Relation::Equal(l, r) => vec![l, r],
        }
    }

    /// The right-to-left larger pair of the support.
    pub fn leading(&self) -> Pair {
        match *self {
            Relation::Zero(p) | Relation::Equal(p, _) => p,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Relation::Zero(_))
    }

    fn sort_key(&self) -> ((u8, u8), u8, (u8, u8)) {
        match *self {
            Relation::Zero(p) => (p.rtl_key(), 0, (0, 0)),
            Relation::Equal(l, r) => (l.rtl_key(), 1, r.rtl_key()),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Zero(p) => write!(f, "{p} = 0"),
            Relation::Equal(l, r) => write!(f, "{l} = {r}"),
        }
    }
}

/// Which ideal a computation works modulo.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdealMode {
    /// The ideal generated by every relation.
    FullM,
    /// The ideal generated by every relation except `x_n x_1 = 0`.
    WithoutTop,
}

/// A quadratic semigroup presentation with canonically ordered relations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation")]
pub struct Presentation {
    n: usize,
    relations: Vec<Relation>,
}

#[derive(Deserialize)]
struct RawPresentation {
    n: usize,
    relations: Vec<Relation>,
}

impl TryFrom<RawPresentation> for Presentation {
    type Error = Error;

    fn try_from(raw: RawPresentation) -> Result<Self> {
        Presentation::new(raw.n, raw.relations)
    }
}

impl Presentation {
    /// Canonicalizes and sorts the relations; rejects bad indices and duplicates.
    pub fn new(n: usize, relations: impl IntoIterator<Item = Relation>) -> Result<Self> {
        let alphabet = Alphabet::new(n)?;
        let mut rels = Vec::new();
        for r in relations {
            let r = r.canonical()?;
            for p in r.support() {
                if !alphabet.contains(p.0) || !alphabet.contains(p.1) {
                    return Err(Error::InvalidPresentation(format!(
                        "relation {r} uses a generator outside x1..x{n}"
                    )));
                }
            }
            rels.push(r);
        }
        rels.sort_by_key(Relation::sort_key);
        if let Some(w) = rels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidPresentation(format!(
                "duplicate relation {}",
                w[0]
            )));
        }
        Ok(Presentation { n, relations: rels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet { n: self.n }
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// The mandatory zero monomial `x_n x_1` of a QHS.
    pub fn top_pair(&self) -> Pair {
        Pair(self.n as u8, 1)
    }

    pub fn has_top(&self) -> bool {
        self.relations.contains(&Relation::Zero(self.top_pair()))
    }

    /// The relations generating the ideal selected by `mode`.
    pub fn relations_for(&self, mode: IdealMode) -> Result<Vec<Relation>> {
        match mode {
            IdealMode::FullM => Ok(self.relations.clone()),
            IdealMode::WithoutTop => Ok(strip_top(self)?.relations),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("presentation serializes")
    }

    /// Hex SHA-256 of the canonical JSON serialization.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    /// Relabel every generator `i` to `i + shift` on an alphabet of size `n`.
    pub(crate) fn shifted(&self, shift: u8, n: usize) -> Result<Presentation> {
        let s = |p: Pair| Pair(p.0 + shift, p.1 + shift);
        Presentation::new(
            n,
            self.relations.iter().map(|r| match *r {
                Relation::Zero(p) => Relation::Zero(s(p)),
                Relation::Equal(l, r) => Relation::Equal(s(l), s(r)),
            }),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ViolationKind {
    DisjointnessViolated,
    CoverageGap,
    BadRelationShape,
    MissingTopMonomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QhsReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl QhsReport {
    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

/// `a >= b > c >= d` or `a > b = c > d` for the rewrite `ab -> cd`.
pub(crate) fn qhs_shape_ok(l: Pair, r: Pair) -> bool {
    let (a, b, c, d) = (l.0, l.1, r.0, r.1);
    (a >= b && b > c && c >= d) || (a > b && b == c && c > d)
}

/// Check the quasi-raising-system conditions: shapes, disjoint supports that
/// cover every pair `ab` with `a >= b`, and presence of `x_n x_1 = 0`.
pub fn validate_qhs(p: &Presentation) -> QhsReport {
    let n = p.n;
    let mut violations = Vec::new();
    let mut owner: Vec<Option<usize>> = vec![None; n * n];
    let idx = |q: Pair| (q.0 as usize - 1) * n + (q.1 as usize - 1);

    for (i, r) in p.relations.iter().enumerate() {
        let shape_ok = match *r {
            Relation::Zero(q) => q.0 >= q.1,
            Relation::Equal(l, rr) => qhs_shape_ok(l, rr),
        };
        if !shape_ok {
            violations.push(Violation {
                kind: ViolationKind::BadRelationShape,
                detail: format!("relation {r} has a shape not allowed in a QHS"),
            });
        }
        for q in r.support() {
            match owner[idx(q)] {
                Some(j) => violations.push(Violation {
                    kind: ViolationKind::DisjointnessViolated,
                    detail: format!(
                        "pair {q:?} lies in the supports of {} and {r}",
                        p.relations[j]
                    ),
                }),
                None => owner[idx(q)] = Some(i),
            }
        }
    }
    for a in 1..=n as u8 {
        for b in 1..=a {
            if owner[idx(Pair(a, b))].is_none() {
                violations.push(Violation {
                    kind: ViolationKind::CoverageGap,
                    detail: format!("pair ({a},{b}) is not covered by any support"),
                });
            }
        }
    }
    if !p.has_top() {
        violations.push(Violation {
            kind: ViolationKind::MissingTopMonomial,
            detail: format!("{} = 0 is missing", p.top_pair()),
        });
    }
    QhsReport {
        valid: violations.is_empty(),
        violations,
    }
}

/// Remove `x_n x_1 = 0`, leaving the generators of the ideal `I_M`.
pub fn strip_top(p: &Presentation) -> Result<Presentation> {
    let top = Relation::Zero(p.top_pair());
    if !p.relations.contains(&top) {
        return Err(Error::usage(format!(
            "presentation does not contain {top}"
        )));
    }
    Ok(Presentation {
        n: p.n,
        relations: p.relations.iter().copied().filter(|r| *r != top).collect(),
    })
}

/// The smallest integer greater than `(n^2 + n) / 4`, by residue of `n` mod 4.
pub fn delta(n: u64) -> u64 {
    assert!(n >= 1, "delta is defined for n >= 1");
    let j = (n - 1) / 4;
    match n - 4 * j {
        1 => 4 * j * j + 3 * j + 1,
        2 => 4 * j * j + 5 * j + 2,
        3 => 4 * j * j + 7 * j + 4,
        _ => 4 * j * j + 9 * j + 6,
    }
}

/// `(delta(n), n(n+1)/2)`: the possible sizes of a QHS on `n` generators.
pub fn qhs_cardinality_bounds(n: u64) -> (u64, u64) {
    (delta(n), n * (n + 1) / 2)
}

/// A generator `c` is pure when no relation `ab - cd` with `d = c` has the
/// shape `a > b = c' > d`, i.e. every such relation has `a >= b > c' >= d`.
pub fn is_pure(generator: u8, p: &Presentation) -> Result<bool> {
    let report = validate_qhs(p);
    if !report.valid {
        return Err(Error::usage("purity is only defined for a QHS"));
    }
    if !p.alphabet().contains(generator) {
        return Err(Error::usage(format!("x{generator} is not a generator")));
    }
    Ok(pure_unchecked(generator, p))
}

pub(crate) fn pure_unchecked(generator: u8, p: &Presentation) -> bool {
    p.relations.iter().all(|r| match *r {
        Relation::Equal(l, r) if r.1 == generator => l.1 > r.0,
        _ => true,
    })
}

/// Whether every generator of a QHS is pure.
pub fn all_pure(p: &Presentation) -> Result<bool> {
    let report = validate_qhs(p);
    if !report.valid {
        return Err(Error::usage("purity is only defined for a QHS"));
    }
    Ok(p.alphabet().letters().all(|c| pure_unchecked(c, p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::base_qhs;

    fn w(v: &[u8]) -> Word {
        Word::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rtl_examples() {
        assert_eq!(rtl_lex_cmp(&w(&[2, 1]), &w(&[1, 2])).unwrap(), Ordering::Less);
        assert_eq!(rtl_lex_cmp(&w(&[1, 1]), &w(&[1, 1])).unwrap(), Ordering::Equal);
        assert!(rtl_lex_cmp(&w(&[1]), &w(&[1, 1])).is_err());

        let mut all = Alphabet::new(2).unwrap().words(2);
        all.reverse();
        sort_rtl(&mut all);
        assert_eq!(all, vec![w(&[1, 1]), w(&[2, 1]), w(&[1, 2]), w(&[2, 2])]);
    }

    #[test]
    fn rtl_is_total_order_exhaustively() {
        for n in 1..=3 {
            let alpha = Alphabet::new(n).unwrap();
            for m in 1..=4 {
                let words = alpha.words(m);
                // words() enumerates in ascending order; check against pairwise cmp
                for (i, u) in words.iter().enumerate() {
                    for (j, v) in words.iter().enumerate() {
                        assert_eq!(rtl_lex_cmp(u, v).unwrap(), i.cmp(&j));
                    }
                }
            }
        }
    }

    #[test]
    fn m4_valid_and_gap_detected() {
        let m4 = base_qhs(4).unwrap();
        assert!(validate_qhs(&m4).valid);
        let without = Presentation::new(
            4,
            m4.relations()
                .iter()
                .copied()
                .filter(|r| *r != Relation::zero(4, 1)),
        )
        .unwrap();
        let report = validate_qhs(&without);
        assert!(!report.valid);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::CoverageGap && v.detail.contains("(4,1)")));
        assert!(report.has(ViolationKind::MissingTopMonomial));
    }

    #[test]
    fn m2_valid() {
        let m2 = Presentation::new(
            2,
            [
                Relation::equal(Pair(2, 2), Pair(1, 1)).unwrap(),
                Relation::zero(2, 1),
            ],
        )
        .unwrap();
        assert!(validate_qhs(&m2).valid);
        assert_eq!(m2, base_qhs(2).unwrap());
    }

    #[test]
    fn shape_and_disjointness_violations() {
        // x1*x2 = 0 has a < b
        let p = Presentation::new(2, [Relation::zero(1, 2)]).unwrap();
        assert!(validate_qhs(&p).has(ViolationKind::BadRelationShape));

        let p = Presentation::new(
            2,
            [
                Relation::equal(Pair(2, 2), Pair(1, 1)).unwrap(),
                Relation::zero(1, 1),
                Relation::zero(2, 1),
            ],
        )
        .unwrap();
        assert!(validate_qhs(&p).has(ViolationKind::DisjointnessViolated));

        // x2*x2 = x2*x1 breaks both allowed shapes (b > c fails, b = c needs a > b)
        let p = Presentation::new(
            2,
            [
                Relation::equal(Pair(2, 2), Pair(2, 1)).unwrap(),
                Relation::zero(1, 1),
            ],
        )
        .unwrap();
        let report = validate_qhs(&p);
        assert!(report.has(ViolationKind::BadRelationShape));
        assert!(report.has(ViolationKind::MissingTopMonomial));
    }

    #[test]
    fn duplicates_and_identical_sides_rejected() {
        assert!(Presentation::new(2, [Relation::zero(2, 1), Relation::zero(2, 1)]).is_err());
        let a = Relation::equal(Pair(2, 2), Pair(1, 1)).unwrap();
        let b = Relation::equal(Pair(1, 1), Pair(2, 2)).unwrap();
        assert_eq!(a, b);
        assert!(Presentation::new(2, [a, b]).is_err());
        assert!(Relation::equal(Pair(1, 2), Pair(1, 2)).is_err());
        assert!(Presentation::new(2, [Relation::zero(3, 1)]).is_err());
    }

    #[test]
    fn strip_top_examples() {
        let m2 = base_qhs(2).unwrap();
        let stripped = strip_top(&m2).unwrap();
        assert_eq!(
            stripped.relations(),
            &[Relation::equal(Pair(2, 2), Pair(1, 1)).unwrap()]
        );
        assert!(strip_top(&base_qhs(1).unwrap()).unwrap().is_empty());
        assert!(strip_top(&stripped).is_err());
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(5), 8);
        assert_eq!(delta(4), 6);
        assert_eq!(delta(7), 15);
        assert_eq!(qhs_cardinality_bounds(4), (6, 10));
        assert_eq!(qhs_cardinality_bounds(1), (1, 1));
        assert_eq!(qhs_cardinality_bounds(3), (4, 6));
        for n in 1..=2000u64 {
            assert_eq!(delta(n), (n * n + n) / 4 + 1, "n={n}");
        }
    }

    #[test]
    fn purity() {
        let m4 = base_qhs(4).unwrap();
        for c in 1..=4 {
            assert!(is_pure(c, &m4).unwrap());
        }
        // x3*x2 = x2*x1 has shape a > b = c > d, so x1 is not pure
        let p = Presentation::new(
            3,
            [
                Relation::equal(Pair(3, 2), Pair(2, 1)).unwrap(),
                Relation::zero(3, 1),
                Relation::zero(3, 3),
                Relation::zero(2, 2),
                Relation::zero(1, 1),
            ],
        )
        .unwrap();
        assert!(validate_qhs(&p).valid);
        assert!(!is_pure(1, &p).unwrap());
        assert!(is_pure(2, &p).unwrap());
        assert!(!all_pure(&p).unwrap());
        let not_qhs = Presentation::new(2, [Relation::zero(2, 1)]).unwrap();
        assert!(is_pure(1, &not_qhs).is_err());
    }

    #[test]
    fn json_shape() {
        let m2 = base_qhs(2).unwrap();
        assert_eq!(
            m2.to_json(),
            r#"{"n":2,"relations":[{"zero":[2,1]},{"equal":[[2,2],[1,1]]}]}"#
        );
        let back: Presentation = serde_json::from_str(&m2.to_json()).unwrap();
        assert_eq!(back, m2);
        let dup = r#"{"n":2,"relations":[{"zero":[2,1]},{"zero":[2,1]}]}"#;
        assert!(serde_json::from_str::<Presentation>(dup).is_err());
    }
}
