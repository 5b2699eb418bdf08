//! Exhaustive checks over the small members of the built-in corpus.

use std::sync::Arc;

use raney_core::cdcheck::{distributive_oracle, raney_join_criterion};
use raney_core::map::{compose, pointwise_join};
use raney_core::quantaloid::{
    check_involutive_axioms, enumerate_homset, is_central, is_codualizing, is_cyclic,
    is_dualizing, star, DEFAULT_CAP,
};
use raney_core::{builtin_corpus, LatMap, Lattice};

fn small_cd(max: usize) -> Vec<Arc<Lattice>> {
    builtin_corpus()
        .into_iter()
        .filter(|l| l.len() <= max && raney_join_criterion(l).holds)
        .collect()
}

#[test]
fn star_exchanges_cyclic_with_central_and_dualizing_with_codualizing() {
    for l in small_cd(4) {
        let q = enumerate_homset(&l, &l, DEFAULT_CAP).unwrap();
        for a in q.maps() {
            let s = star(a).unwrap();
            assert_eq!(
                is_cyclic(a, &q).unwrap().holds,
                is_central(&s, &q).unwrap().holds,
                "{} {:?}",
                l.name(),
                a.values()
            );
            assert_eq!(
                is_dualizing(a, &q).unwrap().holds,
                is_codualizing(&s, &q).unwrap().holds,
                "{} {:?}",
                l.name(),
                a.values()
            );
        }
    }
}

#[test]
fn quantale_laws_exhaustive() {
    for l in builtin_corpus().into_iter().filter(|l| l.len() <= 4) {
        let q = enumerate_homset(&l, &l, DEFAULT_CAP).unwrap();
        let id = LatMap::identity(&l);
        for f in q.maps() {
            assert_eq!(&compose(f, &id).unwrap(), f);
            assert_eq!(&compose(&id, f).unwrap(), f);
            for g in q.maps() {
                let fg = compose(f, g).unwrap();
                assert!(q.contains(&fg));
                for h in q.maps() {
                    assert_eq!(
                        compose(&fg, h).unwrap(),
                        compose(f, &compose(g, h).unwrap()).unwrap()
                    );
                }
            }
        }
        // Composition distributes over joins on both sides.
        let all = q.maps().to_vec();
        let top = pointwise_join(&all).unwrap();
        for f in q.maps() {
            let left: Vec<LatMap> = all.iter().map(|g| compose(f, g).unwrap()).collect();
            assert_eq!(compose(f, &top).unwrap(), pointwise_join(&left).unwrap());
            let right: Vec<LatMap> = all.iter().map(|g| compose(g, f).unwrap()).collect();
            assert_eq!(compose(&top, f).unwrap(), pointwise_join(&right).unwrap());
        }
    }
}

#[test]
fn homset_lattice_is_distributive_for_tiny_cd_lattices() {
    for l in small_cd(3) {
        let q = enumerate_homset(&l, &l, DEFAULT_CAP).unwrap();
        let ql = q.to_lattice().unwrap();
        assert!(distributive_oracle(&ql).holds, "{}", l.name());
    }
}

#[test]
fn cross_homset_axioms() {
    let c2 = Arc::new(Lattice::chain(2));
    let c3 = Arc::new(Lattice::chain(3));
    let b2 = Arc::new(Lattice::boolean(2).unwrap());
    for (l, m) in [(&c2, &b2), (&c3, &b2), (&b2, &c3), (&c2, &c3)] {
        let r = check_involutive_axioms(l, m).unwrap();
        assert!(r.holds, "({}, {}): {:?}", l.name(), m.name(), r.witness);
    }
    let m3 = Arc::new(Lattice::m3());
    assert!(!check_involutive_axioms(&c2, &m3).unwrap().holds);
}
