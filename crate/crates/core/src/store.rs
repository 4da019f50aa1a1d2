//! Visited-word storage for class searches.
//!
//! Words whose letters fit in `m * bits <= 128` are packed into a `u128` and
//! kept inline in the hash table; longer words fall back to a byte arena.

use std::hash::BuildHasher;

use hashbrown::HashTable;
use rustc_hash::{FxBuildHasher, FxHashMap, FxHashSet};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Packing {
    bits: u32,
    m: usize,
}

impl Packing {
    pub(crate) fn new(n: usize, m: usize) -> Option<Self> {
        let bits = (usize::BITS - (n.max(2) - 1).leading_zeros()).max(1);
        (m * bits as usize <= 128).then_some(Packing { bits, m })
    }

    #[inline]
    pub(crate) fn pack(&self, w: &[u8]) -> u128 {
        debug_assert_eq!(w.len(), self.m);
        let mut key = 0u128;
        for &l in w.iter().rev() {
            key = (key << self.bits) | (l as u128 - 1);
        }
        key
    }

    #[inline]
    pub(crate) fn unpack(&self, mut key: u128, out: &mut [u8]) {
        let mask = (1u128 << self.bits) - 1;
        for slot in out.iter_mut() {
            *slot = (key & mask) as u8 + 1;
            key >>= self.bits;
        }
    }
}

pub(crate) trait ClassStore {
    fn len(&self) -> usize;
    fn load(&self, i: usize, out: &mut [u8]);
    /// Returns `false` if the word was already present.
    fn insert(&mut self, w: &[u8], parent: u32) -> bool;
    fn parent(&self, i: usize) -> u32;
}

pub(crate) struct PackedStore {
    packing: Packing,
    keys: Vec<u128>,
    parents: Vec<u32>,
    index: FxHashMap<u128, u32>,
}

impl PackedStore {
    pub(crate) fn new(packing: Packing) -> Self {
        PackedStore {
            packing,
            keys: Vec::new(),
            parents: Vec::new(),
            index: FxHashMap::default(),
        }
    }
}

impl ClassStore for PackedStore {
    fn len(&self) -> usize {
        self.keys.len()
    }

    fn load(&self, i: usize, out: &mut [u8]) {
        self.packing.unpack(self.keys[i], out)
    }

    #[inline]
    fn insert(&mut self, w: &[u8], parent: u32) -> bool {
        let key = self.packing.pack(w);
        let id = self.keys.len() as u32;
        match self.index.entry(key) {
            std::collections::hash_map::Entry::Occupied(_) => false,
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(id);
                self.keys.push(key);
                self.parents.push(parent);
                true
            }
        }
    }

    fn parent(&self, i: usize) -> u32 {
        self.parents[i]
    }
}

/// Every visited word stored contiguously with stride `m`.
pub(crate) struct ByteStore {
    m: usize,
    data: Vec<u8>,
    parents: Vec<u32>,
    index: HashTable<u32>,
    hasher: FxBuildHasher,
}

impl ByteStore {
    pub(crate) fn new(m: usize) -> Self {
        ByteStore {
            m,
            data: Vec::new(),
            parents: Vec::new(),
            index: HashTable::new(),
            hasher: FxBuildHasher,
        }
    }
}

impl ClassStore for ByteStore {
    fn len(&self) -> usize {
        self.parents.len()
    }

    fn load(&self, i: usize, out: &mut [u8]) {
        out.copy_from_slice(&self.data[i * self.m..(i + 1) * self.m])
    }

    fn insert(&mut self, w: &[u8], parent: u32) -> bool {
        let hash = self.hasher.hash_one(w);
        let ByteStore {
            m,
            data,
            parents,
            index,
            hasher,
        } = self;
        let m = *m;
        if index
            .find(hash, |i| &data[*i as usize * m..(*i as usize + 1) * m] == w)
            .is_some()
        {
            return false;
        }
        let id = parents.len() as u32;
        index.insert_unique(hash, id, |i| {
            hasher.hash_one(&data[*i as usize * m..(*i as usize + 1) * m])
        });
        data.extend_from_slice(w);
        parents.push(parent);
        true
    }

    fn parent(&self, i: usize) -> u32 {
        self.parents[i]
    }
}

/// A completed or interrupted class search.
pub(crate) enum Visited {
    Packed(PackedStore),
    Bytes(ByteStore),
}

impl Visited {
    pub(crate) fn len(&self) -> usize {
        match self {
            Visited::Packed(s) => s.len(),
            Visited::Bytes(s) => s.len(),
        }
    }

    pub(crate) fn degree(&self) -> usize {
        match self {
            Visited::Packed(s) => s.packing.m,
            Visited::Bytes(s) => s.m,
        }
    }

    pub(crate) fn word(&self, i: usize) -> Vec<u8> {
        let mut out = vec![0u8; self.degree()];
        match self {
            Visited::Packed(s) => s.load(i, &mut out),
            Visited::Bytes(s) => s.load(i, &mut out),
        }
        out
    }

    pub(crate) fn parent(&self, i: usize) -> u32 {
        match self {
            Visited::Packed(s) => s.parent(i),
            Visited::Bytes(s) => s.parent(i),
        }
    }

    pub(crate) fn for_each(&self, mut f: impl FnMut(&[u8])) {
        let mut buf = vec![0u8; self.degree()];
        for i in 0..self.len() {
            match self {
                Visited::Packed(s) => s.load(i, &mut buf),
                Visited::Bytes(s) => s.load(i, &mut buf),
            }
            f(&buf);
        }
    }

    pub(crate) fn any(&self, mut f: impl FnMut(&[u8]) -> bool) -> bool {
        let mut buf = vec![0u8; self.degree()];
        for i in 0..self.len() {
            match self {
                Visited::Packed(s) => s.load(i, &mut buf),
                Visited::Bytes(s) => s.load(i, &mut buf),
            }
            if f(&buf) {
                return true;
            }
        }
        false
    }
}

/// A set of words of one degree, packed when possible.
pub(crate) enum WordSet {
    Packed(Packing, FxHashSet<u128>),
    Bytes(FxHashSet<Vec<u8>>),
}

impl WordSet {
    pub(crate) fn new(n: usize, m: usize) -> Self {
        match Packing::new(n, m) {
            Some(p) => WordSet::Packed(p, FxHashSet::default()),
            None => WordSet::Bytes(FxHashSet::default()),
        }
    }

    pub(crate) fn contains(&self, w: &[u8]) -> bool {
        match self {
            WordSet::Packed(p, s) => s.contains(&p.pack(w)),
            WordSet::Bytes(s) => s.contains(w),
        }
    }

    pub(crate) fn insert(&mut self, w: &[u8]) {
        match self {
            WordSet::Packed(p, s) => {
                s.insert(p.pack(w));
            }
            WordSet::Bytes(s) => {
                s.insert(w.to_vec());
            }
        }
    }
}
