//! Complete-distributivity criteria for finite lattices.
//!
//! Two families of checks live here and are deliberately kept apart:
//! the Raney criteria, built on `o` and `omega`, and the classical
//! triple-distributivity oracle, which only reads the join and meet tables.
//! For finite lattices they must agree.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::map::{o_values, omega_values};

/// A counterexample attached to a failed check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Element { x: usize },
    Elements { xs: Vec<usize> },
    /// A family of element rows, e.g. `x_{i,j}` for a distributivity test.
    Family { rows: Vec<Vec<usize>> },
    /// Maps (as value arrays) violating the named law.
    Maps { law: String, maps: Vec<Vec<usize>> },
    Note { text: String },
}

/// How much of the quantified domain a check visited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Coverage {
    #[default]
    Exhaustive,
    Sampled { draws: usize },
}

/// Verdict of one criterion on one input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub holds: bool,
    pub witness: Option<Witness>,
    #[serde(default)]
    pub coverage: Coverage,
    #[serde(
        rename = "elapsed_ms",
        with = "duration_ms",
        default,
        skip_serializing_if = "Duration::is_zero"
    )]
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            holds: true,
            witness: None,
            coverage: Coverage::Exhaustive,
            elapsed: Duration::ZERO,
        }
    }

    pub fn fail(name: impl Into<String>, witness: Witness) -> Self {
        CheckResult {
            holds: false,
            witness: Some(witness),
            ..CheckResult::pass(name)
        }
    }

    pub fn from_witness(name: impl Into<String>, witness: Option<Witness>) -> Self {
        match witness {
            Some(w) => CheckResult::fail(name, w),
            None => CheckResult::pass(name),
        }
    }

    pub fn with_coverage(mut self, coverage: Coverage) -> Self {
        self.coverage = coverage;
        self
    }

    pub(crate) fn timed(mut self, start: Instant) -> Self {
        self.elapsed = start.elapsed();
        self
    }
}

mod duration_ms {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_millis(u64::deserialize(d)?))
    }
}

/// Order-theoretic summary of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeProfile {
    pub chain: bool,
    pub distributive: bool,
    pub completely_distributive: bool,
    pub smooth: bool,
    pub spatial: bool,
    pub join_primes: Vec<usize>,
}

/// `V { omega(t) : x !<= t } = x` for every `x`.
pub fn raney_join_criterion(l: &Lattice) -> CheckResult {
    let start = Instant::now();
    let omega = omega_values(l);
    let bad = l
        .elements()
        .find(|&x| l.join_all(l.elements().filter(|&t| !l.leq(x, t)).map(|t| omega[t])) != x);
    CheckResult::from_witness("raney-join", bad.map(|x| Witness::Element { x })).timed(start)
}

/// `/\ { o(t) : t !<= y } = y` for every `y`.
pub fn raney_meet_criterion(l: &Lattice) -> CheckResult {
    let start = Instant::now();
    let o = o_values(l);
    let bad = l
        .elements()
        .find(|&y| l.meet_all(l.elements().filter(|&t| !l.leq(t, y)).map(|t| o[t])) != y);
    CheckResult::from_witness("raney-meet", bad.map(|x| Witness::Element { x })).timed(start)
}

/// `x /\ (y v z) = (x /\ y) v (x /\ z)` for all triples.
pub fn distributive_oracle(l: &Lattice) -> CheckResult {
    let start = Instant::now();
    let mut bad = None;
    'outer: for x in l.elements() {
        for y in l.elements() {
            for z in l.elements() {
                if l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z)) {
                    bad = Some(Witness::Elements { xs: vec![x, y, z] });
                    break 'outer;
                }
            }
        }
    }
    CheckResult::from_witness("distributive", bad).timed(start)
}

/// Default work limit for [`bounded_family_cd_check`].
pub const FAMILY_WORK_CAP: usize = 50_000_000;

/// Checks `/\_i V_{j in J_i} x_ij = V_psi /\_i x_{i, psi(i)}` for every family
/// with `1 <= |I| <= max_i`, `1 <= |J_i| <= max_j` and entries ranging over
/// the whole lattice. Families are visited with non-decreasing row lengths.
pub fn bounded_family_cd_check(l: &Lattice, max_i: usize, max_j: usize) -> Result<CheckResult> {
    bounded_family_cd_check_capped(l, max_i, max_j, FAMILY_WORK_CAP)
}

pub fn bounded_family_cd_check_capped(
    l: &Lattice,
    max_i: usize,
    max_j: usize,
    work_cap: usize,
) -> Result<CheckResult> {
    let start = Instant::now();
    let n = l.len();
    let shapes = row_shapes(max_i, max_j);
    let mut work: usize = 0;
    for shape in &shapes {
        let cells: u32 = shape.iter().sum::<usize>() as u32;
        let sections: usize = shape.iter().product();
        let cost = n
            .checked_pow(cells)
            .and_then(|c| c.checked_mul(sections))
            .unwrap_or(usize::MAX);
        work = work.saturating_add(cost);
    }
    if work > work_cap {
        return Err(Error::CapExceeded {
            what: "family evaluations",
            cap: work_cap,
        });
    }
    for shape in &shapes {
        let cells: usize = shape.iter().sum();
        let mut entries = vec![0usize; cells];
        loop {
            let rows = split_rows(&entries, shape);
            let lhs = l.meet_all(rows.iter().map(|r| l.join_all(r.iter().copied())));
            let rhs = sections_join(l, &rows);
            if lhs != rhs {
                return Ok(CheckResult::fail(
                    "bounded-family-cd",
                    Witness::Family {
                        rows: rows.iter().map(|r| r.to_vec()).collect(),
                    },
                )
                .timed(start));
            }
            if !odometer(&mut entries, n) {
                break;
            }
        }
    }
    Ok(CheckResult::pass("bounded-family-cd").timed(start))
}

fn row_shapes(max_i: usize, max_j: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, max_i: usize, max_j: usize, out: &mut Vec<Vec<usize>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if prefix.len() == max_i {
            return;
        }
        let from = prefix.last().copied().unwrap_or(1);
        for len in from..=max_j {
            prefix.push(len);
            extend(prefix, max_i, max_j, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), max_i, max_j, &mut out);
    out.sort_by_key(|s| (s.iter().sum::<usize>(), s.clone()));
    out
}

fn split_rows<'a>(entries: &'a [usize], shape: &[usize]) -> Vec<&'a [usize]> {
    let mut rows = Vec::with_capacity(shape.len());
    let mut rest = entries;
    for &len in shape {
        let (row, tail) = rest.split_at(len);
        rows.push(row);
        rest = tail;
    }
    rows
}

/// `V_psi /\_i rows[i][psi(i)]` over all choice functions `psi`.
fn sections_join(l: &Lattice, rows: &[&[usize]]) -> usize {
    let mut choice = vec![0usize; rows.len()];
    let mut acc = l.bottom();
    loop {
        let m = l.meet_all(rows.iter().zip(&choice).map(|(r, &c)| r[c]));
        acc = l.join(acc, m);
        let mut i = 0;
        loop {
            if i == rows.len() {
                return acc;
            }
            choice[i] += 1;
            if choice[i] < rows[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Advances a base-`n` counter; false once it wraps around.
fn odometer(digits: &mut [usize], n: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < n {
            return true;
        }
        *d = 0;
    }
    false
}

/// True when every element is the join of the completely join-prime elements
/// below it.
pub fn is_spatial(l: &Lattice) -> bool {
    let primes = l.completely_join_primes();
    l.elements()
        .all(|x| l.join_all(primes.iter().copied().filter(|&p| l.leq(p, x))) == x)
}

pub fn classify_lattice(l: &Lattice) -> LatticeProfile {
    let join_primes = l.completely_join_primes();
    LatticeProfile {
        chain: l.is_chain(),
        distributive: distributive_oracle(l).holds,
        completely_distributive: raney_join_criterion(l).holds,
        smooth: join_primes.is_empty(),
        spatial: is_spatial(l),
        join_primes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raney_join_examples() {
        assert!(raney_join_criterion(&Lattice::chain(3)).holds);
        assert!(raney_join_criterion(&Lattice::boolean(2).unwrap()).holds);
        let r = raney_join_criterion(&Lattice::m3());
        assert!(!r.holds);
        assert_eq!(r.witness, Some(Witness::Element { x: 1 }));
    }

    #[test]
    fn raney_meet_examples() {
        assert!(raney_meet_criterion(&Lattice::chain(3)).holds);
        let r = raney_meet_criterion(&Lattice::n5());
        assert!(!r.holds);
        // o on n5 is [0, 3, 4, 2, 4]; at y = 1 the meet over t in {2, 3, 4}
        // is 4 /\ 2 /\ 4 = 2 != 1.
        assert_eq!(r.witness, Some(Witness::Element { x: 1 }));
        for l in [Lattice::n5(), Lattice::m3(), Lattice::chain(4)] {
            assert_eq!(
                raney_meet_criterion(&l).holds,
                raney_join_criterion(&l.dual()).holds
            );
        }
    }

    #[test]
    fn oracle_examples() {
        assert!(distributive_oracle(&Lattice::boolean(2).unwrap()).holds);
        let m3 = distributive_oracle(&Lattice::m3());
        assert_eq!(m3.witness, Some(Witness::Elements { xs: vec![1, 2, 3] }));
        let l = Lattice::m3();
        assert_eq!(l.meet(1, l.join(2, 3)), 1);
        assert_eq!(l.join(l.meet(1, 2), l.meet(1, 3)), 0);
        let n5 = distributive_oracle(&Lattice::n5());
        assert!(!n5.holds);
        assert_eq!(n5.witness, Some(Witness::Elements { xs: vec![2, 1, 3] }));
    }

    #[test]
    fn bounded_family_examples() {
        assert!(bounded_family_cd_check(&Lattice::chain(3), 2, 2).unwrap().holds);
        let m3 = bounded_family_cd_check(&Lattice::m3(), 2, 2).unwrap();
        assert!(!m3.holds);
        for n in 1..=5 {
            assert!(bounded_family_cd_check(&Lattice::chain(n), 3, 2).unwrap().holds);
        }
        assert!(matches!(
            bounded_family_cd_check_capped(&Lattice::chain(5), 3, 3, 1000),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn profiles() {
        let c3 = classify_lattice(&Lattice::chain(3));
        assert_eq!(
            c3,
            LatticeProfile {
                chain: true,
                distributive: true,
                completely_distributive: true,
                smooth: false,
                spatial: true,
                join_primes: vec![1, 2]
            }
        );
        let b2 = classify_lattice(&Lattice::boolean(2).unwrap());
        assert!(!b2.chain && b2.distributive && b2.completely_distributive && b2.spatial);
        assert_eq!(b2.join_primes, vec![1, 2]);
        // M3 has no completely join-prime element: each atom is below the
        // join of the other two.
        let m3 = classify_lattice(&Lattice::m3());
        assert_eq!(
            m3,
            LatticeProfile {
                chain: false,
                distributive: false,
                completely_distributive: false,
                smooth: true,
                spatial: false,
                join_primes: vec![]
            }
        );
    }

    #[test]
    fn check_result_json_omits_zero_elapsed() {
        let r = CheckResult::fail("x", Witness::Element { x: 2 });
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"name":"x","holds":false,"witness":{"kind":"element","x":2},"coverage":{"mode":"exhaustive"}}"#
        );
    }
}
