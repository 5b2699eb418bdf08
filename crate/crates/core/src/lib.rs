//! Finite complete lattices, join-continuous maps, Raney transforms and the
//! quantale `Q(L)` of join-continuous endomaps.

pub mod cdcheck;
pub mod error;
pub mod generate;
pub mod lattice;
pub mod map;
pub mod quantaloid;
pub mod suite;

pub use error::{Error, Result};
pub use generate::{generate, GeneratorSpec};
pub use lattice::{downset_lattice, Lattice, LatticeDoc, Poset};
pub use map::{LatMap, MapClass, MapDoc, Special};
pub use cdcheck::{CheckResult, Coverage, LatticeProfile, Witness};
pub use quantaloid::{HomsetEnumeration, UnitPair};
pub use suite::{builtin_corpus, registry, run_suite, SuiteReport, TheoremCheck};
