//! Brute-force oracle: partition all `n^m` words of one degree with a
//! union-find over single swaps, independent of the engine's BFS.

#![allow(dead_code)]

use std::cmp::Ordering;

use qhs_core::model::{IdealMode, Presentation, Relation};

pub struct Partition {
    pub n: usize,
    pub m: usize,
    /// Component root per word index.
    pub root: Vec<usize>,
    /// Per root: whether some member has a zero factor.
    pub zero: Vec<bool>,
    /// Per root: index of the right-to-left minimal member.
    pub minimal: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn decode(n: usize, m: usize, mut idx: usize) -> Vec<u8> {
    let mut w = vec![0u8; m];
    for slot in w.iter_mut() {
        *slot = (idx % n) as u8 + 1;
        idx /= n;
    }
    w
}

pub fn encode(n: usize, w: &[u8]) -> usize {
    w.iter().rev().fold(0, |acc, &l| acc * n + (l as usize - 1))
}

pub fn rtl(u: &[u8], v: &[u8]) -> Ordering {
    u.iter().rev().cmp(v.iter().rev())
}

pub fn relations(p: &Presentation, mode: IdealMode) -> Vec<Relation> {
    let top = Relation::zero(p.n() as u8, 1);
    p.relations()
        .iter()
        .copied()
        .filter(|r| mode == IdealMode::FullM || *r != top)
        .collect()
}

pub fn partition(p: &Presentation, mode: IdealMode, m: usize) -> Partition {
    let n = p.n();
    let rels = relations(p, mode);
    let total = n.pow(m as u32);
    let mut parent: Vec<usize> = (0..total).collect();
    let mut zero_word = vec![false; total];
    for (idx, is_zero) in zero_word.iter_mut().enumerate() {
        let w = decode(n, m, idx);
        for pos in 0..m.saturating_sub(1) {
            let (a, b) = (w[pos], w[pos + 1]);
            for r in &rels {
                match *r {
                    Relation::Zero(q) => {
                        if q.0 == a && q.1 == b {
                            *is_zero = true;
                        }
                    }
                    Relation::Equal(l, s) => {
                        for (from, to) in [(l, s), (s, l)] {
                            if from.0 == a && from.1 == b {
                                let mut v = w.clone();
                                v[pos] = to.0;
                                v[pos + 1] = to.1;
                                let j = encode(n, &v);
                                let (ra, rb) = (find(&mut parent, idx), find(&mut parent, j));
                                if ra != rb {
                                    parent[ra] = rb;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let root: Vec<usize> = (0..total).map(|i| find(&mut parent, i)).collect();
    let mut zero = vec![false; total];
    let mut minimal: Vec<usize> = (0..total).collect();
    for i in 0..total {
        let r = root[i];
        zero[r] |= zero_word[i];
        if rtl(&decode(n, m, i), &decode(n, m, minimal[r])) == Ordering::Less {
            minimal[r] = i;
        }
    }
    Partition {
        n,
        m,
        root,
        zero,
        minimal,
    }
}

impl Partition {
    /// Minimal representatives of the nonzero components, ascending.
    pub fn nonzero_minimals(&self) -> Vec<Vec<u8>> {
        let mut out: Vec<Vec<u8>> = (0..self.root.len())
            .filter(|&i| self.root[i] == i && !self.zero[i])
            .map(|i| decode(self.n, self.m, self.minimal[i]))
            .collect();
        out.sort_by(|a, b| rtl(a, b));
        out
    }

    pub fn members(&self, root: usize) -> Vec<Vec<u8>> {
        (0..self.root.len())
            .filter(|&i| self.root[i] == root)
            .map(|i| decode(self.n, self.m, i))
            .collect()
    }

    /// Singular words straight from the definition: minimal, nonzero, and no
    /// member carries `x_n` at a position after which it agrees with the word.
    pub fn singular(&self) -> Vec<Vec<u8>> {
        let top = self.n as u8;
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); self.root.len()];
        for (i, &r) in self.root.iter().enumerate() {
            groups[r].push(i);
        }
        let mut out = Vec::new();
        for i in 0..self.root.len() {
            let r = self.root[i];
            if self.zero[r] || self.minimal[r] != i {
                continue;
            }
            let u = decode(self.n, self.m, i);
            let tame = groups[r].iter().any(|&k| {
                let v = decode(self.n, self.m, k);
                (0..self.m).any(|j| v[j] == top && (j + 1..self.m).all(|l| v[l] == u[l]))
            });
            if !tame {
                out.push(u);
            }
        }
        out.sort_by(|a, b| rtl(a, b));
        out
    }
}
