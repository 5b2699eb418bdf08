//! Finite posets and finite (hence complete) lattices.
//!
//! Every [`Poset`] is stored in a canonical labelling: elements are numbered
//! along a linear extension, so `leq(i, j)` implies `i <= j` as integers.
//! Consequently the bottom of a [`Lattice`] is always element `0` and the top
//! is always element `n - 1`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest carrier a [`Lattice`] can hold (element indices are stored as `u16`).
pub const MAX_ELEMENTS: usize = 1 << 16;

/// Largest poset accepted by [`downset_lattice`].
pub const MAX_DOWNSET_BASE: usize = 12;

/// A finite partial order in canonical (linear-extension) labelling.
#[derive(Clone)]
pub struct Poset {
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    /// `original[i]` is the caller's index of canonical element `i`.
    original: Vec<usize>,
}

impl Poset {
    /// Builds the reflexive-transitive closure of `covers` on `0..n`.
    ///
    /// Elements are relabelled along the smallest-index-first linear
    /// extension, so input that is already topologically numbered keeps its
    /// indices.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        for &(a, b) in covers {
            for idx in [a, b] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, size: n });
                }
            }
            if a == b {
                return Err(Error::CycleDetected(a, b));
            }
        }
        // Warshall on bit rows: reach[i] = {j : i <= j}.
        let mut reach: Vec<FixedBitSet> = (0..n)
            .map(|i| {
                let mut row = FixedBitSet::with_capacity(n);
                row.insert(i);
                row
            })
            .collect();
        for &(a, b) in covers {
            reach[a].insert(b);
        }
        for k in 0..n {
            let row_k = reach[k].clone();
            for row in reach.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for i in 0..n {
            for j in reach[i].ones() {
                if j != i && reach[j].contains(i) {
                    return Err(Error::CycleDetected(i.min(j), i.max(j)));
                }
            }
        }

        // Kahn's algorithm over the strict order, smallest original index first.
        let mut indegree: Vec<usize> = (0..n)
            .map(|j| (0..n).filter(|&i| i != j && reach[i].contains(j)).count())
            .collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
        let mut original = Vec::with_capacity(n);
        while let Some(Reverse(i)) = ready.pop() {
            original.push(i);
            for j in reach[i].ones() {
                if j != i {
                    indegree[j] -= 1;
                    if indegree[j] == 0 {
                        ready.push(Reverse(j));
                    }
                }
            }
        }
        debug_assert_eq!(original.len(), n);
        let mut canonical = vec![0; n];
        for (new, &old) in original.iter().enumerate() {
            canonical[old] = new;
        }

        let mut up = vec![FixedBitSet::with_capacity(n); n];
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for old_i in 0..n {
            for old_j in reach[old_i].ones() {
                let (i, j) = (canonical[old_i], canonical[old_j]);
                up[i].insert(j);
                down[j].insert(i);
            }
        }
        Ok(Poset { up, down, original })
    }

    /// Builds a poset from a relation given as a predicate; the relation is
    /// closed reflexively and transitively, then checked for antisymmetry.
    pub fn from_relation(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && leq(i, j))
            .collect();
        Poset::from_covers(n, &pairs)
    }

    pub fn chain(n: usize) -> Self {
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_covers(n, &covers).expect("chain covers are acyclic")
    }

    pub fn antichain(n: usize) -> Self {
        Poset::from_covers(n, &[]).expect("empty cover list")
    }

    /// Trusted constructor for callers that already hold a canonical order.
    fn from_up_sets(up: Vec<FixedBitSet>) -> Self {
        let n = up.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter().enumerate() {
            debug_assert!(row.ones().all(|j| j >= i));
            for j in row.ones() {
                down[j].insert(i);
            }
        }
        Poset {
            up,
            down,
            original: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    /// `{j : i <= j}` as a bitset.
    pub fn up_set(&self, i: usize) -> &FixedBitSet {
        &self.up[i]
    }

    /// `{j : j <= i}` as a bitset.
    pub fn down_set(&self, i: usize) -> &FixedBitSet {
        &self.down[i]
    }

    /// The caller-supplied index of canonical element `i`.
    pub fn original_index(&self, i: usize) -> usize {
        self.original[i]
    }

    /// Pairs `(i, j)` with `i < j` and nothing strictly between, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in self.up[i].ones().filter(|&j| j != i) {
                let between = self.up[i]
                    .ones()
                    .any(|k| k != i && k != j && self.up[k].contains(j));
                if !between {
                    out.push((i, j));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("n", &self.len())
            .field("covers", &self.covers())
            .finish()
    }
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.up == other.up
    }
}

impl Eq for Poset {}

/// A finite lattice with precomputed join and meet tables.
///
/// Equality is structural: two lattices are equal when their canonical order
/// relations coincide, whatever their names.
#[derive(Clone)]
pub struct Lattice {
    name: String,
    poset: Poset,
    join: Vec<u16>,
    meet: Vec<u16>,
}

impl Lattice {
    /// Fills the join and meet tables of `poset`, failing on the first pair
    /// without a least upper or greatest lower bound.
    pub fn from_poset(poset: Poset) -> Result<Self> {
        let n = poset.len();
        if n == 0 {
            return Err(Error::NotALattice { pair: None });
        }
        if n > MAX_ELEMENTS {
            return Err(Error::TooLarge {
                what: "lattice",
                size: n,
                limit: MAX_ELEMENTS,
            });
        }
        let mut join = vec![0u16; n * n];
        let mut meet = vec![0u16; n * n];
        let mut common = FixedBitSet::with_capacity(n);
        for i in 0..n {
            for j in i..n {
                common.clone_from(&poset.up[i]);
                common.intersect_with(&poset.up[j]);
                // In a linear extension the least element of a set, if any,
                // is its smallest index.
                let lub = common
                    .ones()
                    .next()
                    .filter(|&c| common.is_subset(&poset.up[c]))
                    .ok_or(Error::NotALattice {
                        pair: Some((poset.original[i], poset.original[j])),
                    })?;
                common.clone_from(&poset.down[i]);
                common.intersect_with(&poset.down[j]);
                let glb = common
                    .maximum()
                    .filter(|&c| common.is_subset(&poset.down[c]))
                    .ok_or(Error::NotALattice {
                        pair: Some((poset.original[i], poset.original[j])),
                    })?;
                join[i * n + j] = lub as u16;
                join[j * n + i] = lub as u16;
                meet[i * n + j] = glb as u16;
                meet[j * n + i] = glb as u16;
            }
        }
        Ok(Lattice {
            name: String::new(),
            poset,
            join,
            meet,
        })
    }

    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        Lattice::from_poset(Poset::from_covers(n, covers)?)
    }

    pub fn chain(n: usize) -> Self {
        Lattice::from_poset(Poset::chain(n.max(1)))
            .expect("chains are lattices")
            .named(format!("c{}", n.max(1)))
    }

    /// The diamond: bottom, three pairwise incomparable atoms, top.
    pub fn m3() -> Self {
        Lattice::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
            .expect("m3 is a lattice")
            .named("m3")
    }

    /// The pentagon: `0 < 1 < 2 < 4` and `0 < 3 < 4`, with `3` incomparable
    /// to `1` and `2`.
    pub fn n5() -> Self {
        Lattice::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
            .expect("n5 is a lattice")
            .named("n5")
    }

    pub fn boolean(k: usize) -> Result<Self> {
        Ok(downset_lattice(&Poset::antichain(k))?.named(format!("b{k}")))
    }

    /// Cartesian product ordered componentwise; `(a, b)` has index
    /// `a * other.len() + b`.
    pub fn product(&self, other: &Lattice) -> Result<Self> {
        let (na, nb) = (self.len(), other.len());
        let n = na * nb;
        if n > MAX_ELEMENTS {
            return Err(Error::TooLarge {
                what: "product lattice",
                size: n,
                limit: MAX_ELEMENTS,
            });
        }
        let up = (0..n)
            .map(|x| {
                let mut row = FixedBitSet::with_capacity(n);
                for a in self.poset.up[x / nb].ones() {
                    for b in other.poset.up[x % nb].ones() {
                        row.insert(a * nb + b);
                    }
                }
                row
            })
            .collect();
        let poset = Poset::from_up_sets(up);
        let mut join = vec![0u16; n * n];
        let mut meet = vec![0u16; n * n];
        for x in 0..n {
            for y in 0..n {
                let (xa, xb, ya, yb) = (x / nb, x % nb, y / nb, y % nb);
                join[x * n + y] = (self.join(xa, ya) * nb + other.join(xb, yb)) as u16;
                meet[x * n + y] = (self.meet(xa, ya) * nb + other.meet(xb, yb)) as u16;
            }
        }
        Ok(Lattice {
            name: format!("{}x{}", self.name, other.name),
            poset,
            join,
            meet,
        })
    }

    /// The order dual, relabelled so that element `i` of `self` becomes
    /// element `n - 1 - i` of the result (keeping the canonical labelling).
    pub fn dual(&self) -> Self {
        let n = self.len();
        let flip = |i: usize| n - 1 - i;
        let up = (0..n)
            .map(|i| {
                let mut row = FixedBitSet::with_capacity(n);
                for j in self.poset.down[flip(i)].ones() {
                    row.insert(flip(j));
                }
                row
            })
            .collect();
        let mut join = vec![0u16; n * n];
        let mut meet = vec![0u16; n * n];
        for i in 0..n {
            for j in 0..n {
                join[i * n + j] = flip(self.meet(flip(i), flip(j))) as u16;
                meet[i * n + j] = flip(self.join(flip(i), flip(j))) as u16;
            }
        }
        Lattice {
            name: format!("{}^op", self.name),
            poset: Poset::from_up_sets(up),
            join,
            meet,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    /// Always false: lattices have at least one element.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_trivial(&self) -> bool {
        self.len() == 1
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    #[inline]
    pub fn bottom(&self) -> usize {
        0
    }

    #[inline]
    pub fn top(&self) -> usize {
        self.len() - 1
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y] as usize
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y] as usize
    }

    /// Supremum of an arbitrary family; the empty join is the bottom.
    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom(), |acc, x| self.join(acc, x))
    }

    /// Infimum of an arbitrary family; the empty meet is the top.
    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top(), |acc, x| self.meet(acc, x))
    }

    pub fn check_index(&self, x: usize) -> Result<usize> {
        if x < self.len() {
            Ok(x)
        } else {
            Err(Error::IndexOutOfRange {
                index: x,
                size: self.len(),
            })
        }
    }

    pub fn is_chain(&self) -> bool {
        self.elements()
            .all(|x| self.elements().all(|y| self.leq(x, y) || self.leq(y, x)))
    }

    /// Elements with exactly one lower cover, in increasing order.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        let covers = self.poset.covers();
        let mut lower = vec![0usize; self.len()];
        for &(_, j) in &covers {
            lower[j] += 1;
        }
        self.elements().filter(|&x| lower[x] == 1).collect()
    }

    /// Completely join-prime elements: those `x` with `x` not below `o(x)`.
    pub fn completely_join_primes(&self) -> Vec<usize> {
        let o = crate::map::o_values(self);
        self.elements().filter(|&x| !self.leq(x, o[x])).collect()
    }

    /// True when the lattice has no completely join-prime element.
    pub fn is_smooth(&self) -> bool {
        self.completely_join_primes().is_empty()
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.poset.covers()
    }

    pub fn to_doc(&self) -> LatticeDoc {
        LatticeDoc {
            name: self.name.clone(),
            n: self.len(),
            covers: self.covers().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_doc(doc: &LatticeDoc) -> Result<Self> {
        let covers: Vec<_> = doc.covers.iter().map(|&[a, b]| (a, b)).collect();
        Ok(Lattice::from_covers(doc.n, &covers)?.named(doc.name.clone()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("lattice document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: LatticeDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Lattice::from_doc(&doc)
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || self.poset == other.poset
    }
}

impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("name", &self.name)
            .field("n", &self.len())
            .field("covers", &self.covers())
            .finish()
    }
}

/// On-disk form of a lattice: only the Hasse diagram is stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub name: String,
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
}

/// The lattice of downward-closed subsets of `p`, ordered by inclusion.
///
/// Downsets are indexed by (size, bitmask), so the empty downset is the
/// bottom and the whole of `p` is the top.
pub fn downset_lattice(p: &Poset) -> Result<Lattice> {
    let k = p.len();
    if k > MAX_DOWNSET_BASE {
        return Err(Error::TooLarge {
            what: "downset base poset",
            size: k,
            limit: MAX_DOWNSET_BASE,
        });
    }
    let below: Vec<u32> = (0..k)
        .map(|i| p.down_set(i).ones().fold(0u32, |m, j| m | (1 << j)))
        .collect();
    let mut sets: Vec<u32> = (0u32..(1 << k))
        .filter(|&s| (0..k).all(|i| s & (1 << i) == 0 || below[i] & !s == 0))
        .collect();
    sets.sort_by_key(|&s| (s.count_ones(), s));
    let n = sets.len();
    if n > MAX_ELEMENTS {
        return Err(Error::TooLarge {
            what: "downset lattice",
            size: n,
            limit: MAX_ELEMENTS,
        });
    }
    Ok(lattice_of_sets(&sets, |a, b| a | b).named("down"))
}

/// Builds the lattice of an inclusion-ordered family that is closed under
/// intersection and under `join_of` (which must return a family member).
/// `sets` must already be sorted by (size, mask).
pub(crate) fn lattice_of_sets(sets: &[u32], join_of: impl Fn(u32, u32) -> u32) -> Lattice {
    let n = sets.len();
    let index: std::collections::HashMap<u32, usize> =
        sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let up = sets
        .iter()
        .map(|&a| {
            let mut row = FixedBitSet::with_capacity(n);
            for (j, &b) in sets.iter().enumerate() {
                if a & !b == 0 {
                    row.insert(j);
                }
            }
            row
        })
        .collect();
    let mut join = vec![0u16; n * n];
    let mut meet = vec![0u16; n * n];
    for (i, &a) in sets.iter().enumerate() {
        for (j, &b) in sets.iter().enumerate() {
            join[i * n + j] = index[&join_of(a, b)] as u16;
            meet[i * n + j] = index[&(a & b)] as u16;
        }
    }
    Lattice {
        name: String::new(),
        poset: Poset::from_up_sets(up),
        join,
        meet,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_poset() {
        let p = Poset::from_covers(1, &[]).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.leq(0, 0));
    }

    #[test]
    fn covers_close_transitively() {
        let p = Poset::from_covers(3, &[(0, 1), (1, 2)]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(p.leq(i, j), i <= j, "({i},{j})");
            }
        }
    }

    #[test]
    fn two_cycle_is_rejected() {
        assert_eq!(
            Poset::from_covers(2, &[(0, 1), (1, 0)]).unwrap_err(),
            Error::CycleDetected(0, 1)
        );
        assert!(matches!(
            Poset::from_covers(2, &[(0, 2)]),
            Err(Error::IndexOutOfRange { index: 2, size: 2 })
        ));
    }

    #[test]
    fn relabels_into_linear_extension() {
        // 2 < 0 < 1 in the caller's numbering.
        let p = Poset::from_covers(3, &[(2, 0), (0, 1)]).unwrap();
        assert_eq!(
            (0..3).map(|i| p.original_index(i)).collect::<Vec<_>>(),
            vec![2, 0, 1]
        );
        assert!(p.leq(0, 2));
    }

    #[test]
    fn chain_lattice_tables() {
        let c3 = Lattice::from_poset(Poset::chain(3)).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(c3.join(x, y), x.max(y));
                assert_eq!(c3.meet(x, y), x.min(y));
            }
        }
    }

    #[test]
    fn antichain_with_bounds_is_b2() {
        let b2 = Lattice::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(b2.join(1, 2), 3);
        assert_eq!(b2.meet(1, 2), 0);
        assert_eq!(b2, Lattice::boolean(2).unwrap());
    }

    #[test]
    fn bare_antichain_is_not_a_lattice() {
        assert_eq!(
            Lattice::from_poset(Poset::antichain(2)).unwrap_err(),
            Error::NotALattice { pair: Some((0, 1)) }
        );
        assert_eq!(
            Lattice::from_covers(0, &[]).unwrap_err(),
            Error::NotALattice { pair: None }
        );
    }

    #[test]
    fn dual_reverses_indices() {
        let c3 = Lattice::chain(3);
        assert_eq!(c3.dual(), c3);
        let n5 = Lattice::n5();
        let d = n5.dual();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(d.leq(4 - i, 4 - j), n5.leq(j, i));
            }
        }
        assert_eq!(d.dual(), n5);
    }

    #[test]
    fn downsets_of_small_posets() {
        let empty = downset_lattice(&Poset::antichain(0)).unwrap();
        assert_eq!(empty.len(), 1);
        let b2 = downset_lattice(&Poset::antichain(2)).unwrap();
        assert_eq!(b2, Lattice::boolean(2).unwrap());
        assert_eq!(b2.len(), 4);
        let c3 = downset_lattice(&Poset::chain(2)).unwrap();
        assert_eq!(c3, Lattice::chain(3));
        assert!(matches!(
            downset_lattice(&Poset::antichain(13)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn chain_predicate() {
        assert!(Lattice::chain(3).is_chain());
        assert!(Lattice::chain(1).is_chain());
        assert!(!Lattice::boolean(2).unwrap().is_chain());
    }

    #[test]
    fn join_primes_and_smoothness() {
        assert_eq!(Lattice::chain(3).completely_join_primes(), vec![1, 2]);
        assert_eq!(Lattice::boolean(2).unwrap().completely_join_primes(), vec![1, 2]);
        assert!(Lattice::chain(1).completely_join_primes().is_empty());
        assert!(Lattice::chain(1).is_smooth());
        assert!(!Lattice::chain(3).is_smooth());
        assert!(!Lattice::boolean(2).unwrap().is_smooth());
        // Each atom of M3 lies below the join of the other two.
        assert!(Lattice::m3().completely_join_primes().is_empty());
        assert!(Lattice::m3().is_smooth());
    }

    #[test]
    fn product_indexing() {
        let p = Lattice::chain(2).product(&Lattice::chain(3)).unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(p.join(1, 3), 4); // (0,1) v (1,0) = (1,1)
        assert_eq!(p.meet(2, 3), 0);
        assert_eq!(p.name(), "c2xc3");
    }

    #[test]
    fn document_round_trip_is_canonical() {
        let n5 = Lattice::n5();
        let doc = n5.to_doc();
        assert_eq!(doc.covers, vec![[0, 1], [0, 3], [1, 2], [2, 4], [3, 4]]);
        let back = Lattice::from_json(&n5.to_json()).unwrap();
        assert_eq!(back, n5);
        assert_eq!(back.name(), "n5");
    }
}
