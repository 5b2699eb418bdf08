//! Deterministic lattice generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{downset_lattice, lattice_of_sets, Lattice, Poset};

pub const MAX_CHAIN: usize = 20;
pub const MAX_PRODUCT: usize = 20;
pub const MAX_BOOLEAN: usize = 4;
pub const MAX_RANDOM: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorSpec {
    Chain(usize),
    Boolean(usize),
    M3,
    N5,
    /// Product of the chains `C_a` and `C_b`.
    Product(usize, usize),
    Downsets(Poset),
    /// A random closure system with at most `n` members.
    Random { seed: u64, n: usize },
}

fn cap(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        Err(Error::TooLarge { what, size, limit })
    } else {
        Ok(())
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Lattice> {
    match *spec {
        GeneratorSpec::Chain(n) => {
            cap("chain", n, MAX_CHAIN)?;
            if n == 0 {
                return Err(Error::NotALattice { pair: None });
            }
            Ok(Lattice::chain(n))
        }
        GeneratorSpec::Boolean(k) => {
            cap("boolean lattice exponent", k, MAX_BOOLEAN)?;
            Lattice::boolean(k)
        }
        GeneratorSpec::M3 => Ok(Lattice::m3()),
        GeneratorSpec::N5 => Ok(Lattice::n5()),
        GeneratorSpec::Product(a, b) => {
            cap("product", a * b, MAX_PRODUCT)?;
            if a == 0 || b == 0 {
                return Err(Error::NotALattice { pair: None });
            }
            Lattice::chain(a).product(&Lattice::chain(b))
        }
        GeneratorSpec::Downsets(ref p) => downset_lattice(p),
        GeneratorSpec::Random { seed, n } => {
            cap("random lattice", n, MAX_RANDOM)?;
            if n == 0 {
                return Err(Error::NotALattice { pair: None });
            }
            Ok(random_closure_system(seed, n).named(format!("random-{seed}-{n}")))
        }
    }
}

/// Grows an intersection-closed family of subsets of an `(n - 1)`-set,
/// starting from the full set and adding random subsets whose closure keeps
/// the family within `n` members. The result has exactly `n` elements unless
/// the attempt budget runs out first.
fn random_closure_system(seed: u64, n: usize) -> Lattice {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ground = n.saturating_sub(1).max(1);
    let full: u32 = (1u32 << ground) - 1;
    let mut family: Vec<u32> = vec![full];
    let mut attempts = 0;
    while family.len() < n && attempts < 10_000 {
        attempts += 1;
        let s: u32 = rng.random_range(0..=full);
        if family.contains(&s) {
            continue;
        }
        let mut grown = family.clone();
        for &f in family.iter().chain(std::iter::once(&s)) {
            let m = f & s;
            if !grown.contains(&m) {
                grown.push(m);
            }
        }
        if grown.len() <= n {
            family = grown;
        }
    }
    family.sort_by_key(|&s| (s.count_ones(), s));
    let members = family.clone();
    // Join in a closure system: the least member containing the union.
    lattice_of_sets(&family, move |a, b| {
        members
            .iter()
            .copied()
            .filter(|&m| (a | b) & !m == 0)
            .fold(full, |acc, m| acc & m)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_generators() {
        let c2 = generate(&GeneratorSpec::Chain(2)).unwrap();
        assert_eq!(c2.len(), 2);
        assert!(c2.leq(0, 1));
        let b2 = generate(&GeneratorSpec::Boolean(2)).unwrap();
        assert_eq!(b2, downset_lattice(&Poset::antichain(2)).unwrap());
        let m3 = generate(&GeneratorSpec::M3).unwrap();
        assert_eq!(m3.len(), 5);
        for a in 1..4 {
            assert!(m3.leq(0, a) && m3.leq(a, 4));
            for b in 1..4 {
                assert_eq!(m3.leq(a, b), a == b);
            }
        }
    }

    #[test]
    fn caps_are_enforced() {
        for spec in [
            GeneratorSpec::Chain(21),
            GeneratorSpec::Boolean(5),
            GeneratorSpec::Product(5, 5),
            GeneratorSpec::Random { seed: 1, n: 13 },
        ] {
            assert!(matches!(generate(&spec), Err(Error::TooLarge { .. })), "{spec:?}");
        }
    }

    #[test]
    fn random_is_seed_deterministic() {
        for seed in 0..20 {
            let spec = GeneratorSpec::Random { seed, n: 7 };
            let a = generate(&spec).unwrap();
            let b = generate(&spec).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.to_json(), b.to_json());
            assert!(a.len() <= 7);
        }
    }

    #[test]
    fn random_reaches_requested_size() {
        for n in 1..=12 {
            for seed in 0..5 {
                let l = generate(&GeneratorSpec::Random { seed, n }).unwrap();
                assert_eq!(l.len(), n, "seed {seed}");
            }
        }
    }
}
