#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use raney_core::quantaloid::{enumerate_homset, random_monotone, HomsetEnumeration, DEFAULT_CAP};
use raney_core::{generate, downset_lattice, GeneratorSpec, LatMap, Lattice, Poset};

/// Random poset on `k` points from a bit mask over the pairs `i < j`.
fn poset_from_mask(k: usize, mask: u32) -> Poset {
    let mut covers = Vec::new();
    let mut bit = 0;
    for i in 0..k {
        for j in i + 1..k {
            if mask >> bit & 1 == 1 {
                covers.push((i, j));
            }
            bit += 1;
        }
    }
    Poset::from_covers(k, &covers).expect("i < j is acyclic")
}

/// Lattices with at most `max_n` elements from several generators.
pub fn arb_lattice(max_n: usize) -> impl Strategy<Value = Arc<Lattice>> {
    let random = (any::<u64>(), 1..=max_n)
        .prop_map(|(seed, n)| generate(&GeneratorSpec::Random { seed, n }).unwrap());
    let chain = (1..=max_n).prop_map(Lattice::chain);
    let down = (0usize..=3, any::<u32>()).prop_filter_map("too large", move |(k, mask)| {
        let l = downset_lattice(&poset_from_mask(k, mask)).unwrap();
        (l.len() <= max_n).then_some(l)
    });
    let pool: Vec<Lattice> = [Lattice::chain(1), Lattice::m3(), Lattice::n5()]
        .into_iter()
        .filter(|l| l.len() <= max_n)
        .collect();
    let fixed = proptest::sample::select(pool);
    prop_oneof![4 => random, 1 => chain, 2 => down, 1 => fixed].prop_map(Arc::new)
}

pub fn homset(l: &Arc<Lattice>) -> HomsetEnumeration {
    enumerate_homset(l, l, DEFAULT_CAP).unwrap()
}

pub fn monotone(l: &Arc<Lattice>, seed: u64) -> LatMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    LatMap::new(l.clone(), l.clone(), random_monotone(l, l, &mut rng)).unwrap()
}

pub fn arbitrary(l: &Arc<Lattice>, seed: u64) -> LatMap {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..l.len()).map(|_| rng.random_range(0..l.len())).collect();
    LatMap::new(l.clone(), l.clone(), values).unwrap()
}

pub fn pick(q: &HomsetEnumeration, i: usize) -> LatMap {
    q.get(i % q.len()).clone()
}

/// Greatest element of `maps` under the pointwise order, if one exists.
pub fn greatest(maps: &[LatMap]) -> Option<LatMap> {
    maps.iter().find(|h| maps.iter().all(|k| k.le(h))).cloned()
}
