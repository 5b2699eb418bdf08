//! The quantaloid of join-continuous maps between finite lattices.
//!
//! [`HomsetEnumeration`] lists `Q(L, M)` explicitly. On top of it sit the
//! residuals, the star involution `f* = join(rho(f))`, the dual tensor, and
//! detectors for cyclic, dualizing, central and codualizing elements of the
//! endomorphism quantale `Q(L)`.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::cdcheck::{CheckResult, Coverage, Witness};
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::map::{
    compose_values, interior_values, o_values, preserves_joins, raney_join_values,
    raney_meet_values, right_adjoint_values, LatMap,
};

/// Default bound on the number of maps an enumeration may produce.
pub const DEFAULT_CAP: usize = 1 << 20;

/// All join-continuous maps `dom -> cod`, in a fixed search order.
#[derive(Clone, Debug)]
pub struct HomsetEnumeration {
    dom: Arc<Lattice>,
    cod: Arc<Lattice>,
    maps: Vec<LatMap>,
    index: HashMap<Vec<usize>, usize>,
}

/// The multiplicative unit `id` and the unit `o` of the dual tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitPair {
    pub one: LatMap,
    pub zero: LatMap,
}

impl UnitPair {
    pub fn of(l: &Arc<Lattice>) -> Self {
        UnitPair {
            one: LatMap::identity(l),
            zero: LatMap::from_parts(l.clone(), l.clone(), o_values(l)),
        }
    }
}

/// Enumerates `Q(dom, cod)`.
///
/// A join-continuous map is determined by its values on the join-irreducible
/// elements, where it must be monotone. The search assigns those values in a
/// linear-extension order, each at or above the join of the values already
/// given to smaller irreducibles, extends by `f(x) = V { f(j) : j <= x }`, and
/// keeps the extension when it preserves binary joins. On distributive
/// domains every extension survives.
pub fn enumerate_homset(
    dom: &Arc<Lattice>,
    cod: &Arc<Lattice>,
    cap: usize,
) -> Result<HomsetEnumeration> {
    let irreducibles = dom.join_irreducibles();
    let below: Vec<Vec<usize>> = dom
        .elements()
        .map(|x| {
            (0..irreducibles.len())
                .filter(|&k| dom.leq(irreducibles[k], x))
                .collect()
        })
        .collect();
    // For each irreducible, the earlier irreducibles strictly below it.
    let preds: Vec<Vec<usize>> = irreducibles
        .iter()
        .enumerate()
        .map(|(k, &j)| (0..k).filter(|&p| dom.leq(irreducibles[p], j)).collect())
        .collect();

    let mut search = Search {
        dom,
        cod,
        below: &below,
        preds: &preds,
        assigned: vec![0; irreducibles.len()],
        found: Vec::new(),
        leaves: 0,
        cap,
    };
    search.descend(0)?;
    let maps: Vec<LatMap> = search
        .found
        .into_iter()
        .map(|v| LatMap::from_parts(dom.clone(), cod.clone(), v))
        .collect();
    let index = maps
        .iter()
        .enumerate()
        .map(|(i, f)| (f.values().to_vec(), i))
        .collect();
    Ok(HomsetEnumeration {
        dom: dom.clone(),
        cod: cod.clone(),
        maps,
        index,
    })
}

struct Search<'a> {
    dom: &'a Lattice,
    cod: &'a Lattice,
    below: &'a [Vec<usize>],
    preds: &'a [Vec<usize>],
    assigned: Vec<usize>,
    found: Vec<Vec<usize>>,
    leaves: usize,
    cap: usize,
}

impl Search<'_> {
    fn descend(&mut self, k: usize) -> Result<()> {
        if k == self.assigned.len() {
            self.leaves += 1;
            if self.leaves > self.cap.saturating_mul(64) {
                return Err(Error::CapExceeded {
                    what: "search leaves",
                    cap: self.cap.saturating_mul(64),
                });
            }
            let values: Vec<usize> = self
                .below
                .iter()
                .map(|ks| self.cod.join_all(ks.iter().map(|&p| self.assigned[p])))
                .collect();
            if preserves_joins(self.dom, self.cod, &values) {
                if self.found.len() == self.cap {
                    return Err(Error::CapExceeded {
                        what: "maps",
                        cap: self.cap,
                    });
                }
                self.found.push(values);
            }
            return Ok(());
        }
        let floor = self
            .cod
            .join_all(self.preds[k].iter().map(|&p| self.assigned[p]));
        let candidates: Vec<usize> = self.cod.poset().up_set(floor).ones().collect();
        for v in candidates {
            self.assigned[k] = v;
            self.descend(k + 1)?;
        }
        Ok(())
    }
}

/// All monotone maps `dom -> cod`, in lexicographic order of value arrays.
pub fn enumerate_monotone(dom: &Lattice, cod: &Lattice, cap: usize) -> Result<Vec<Vec<usize>>> {
    fn go(
        x: usize,
        dom: &Lattice,
        cod: &Lattice,
        values: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<()> {
        if x == dom.len() {
            if out.len() == cap {
                return Err(Error::CapExceeded {
                    what: "monotone maps",
                    cap,
                });
            }
            out.push(values.clone());
            return Ok(());
        }
        let floor = cod.join_all(
            dom.poset()
                .down_set(x)
                .ones()
                .filter(|&y| y != x)
                .map(|y| values[y]),
        );
        let candidates: Vec<usize> = cod.poset().up_set(floor).ones().collect();
        for v in candidates {
            values[x] = v;
            go(x + 1, dom, cod, values, out, cap)?;
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(0, dom, cod, &mut vec![0; dom.len()], &mut out, cap)?;
    Ok(out)
}

/// A uniformly drawn value at or above the join of the values on the lower
/// covers, element by element; always monotone.
pub fn random_monotone<R: Rng + ?Sized>(dom: &Lattice, cod: &Lattice, rng: &mut R) -> Vec<usize> {
    let mut values = vec![0; dom.len()];
    for x in dom.elements() {
        let floor = cod.join_all(
            dom.poset()
                .down_set(x)
                .ones()
                .filter(|&y| y != x)
                .map(|y| values[y]),
        );
        let candidates: Vec<usize> = cod.poset().up_set(floor).ones().collect();
        values[x] = candidates[rng.random_range(0..candidates.len())];
    }
    values
}

impl HomsetEnumeration {
    pub fn dom(&self) -> &Arc<Lattice> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Lattice> {
        &self.cod
    }

    pub fn maps(&self) -> &[LatMap] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn get(&self, i: usize) -> &LatMap {
        &self.maps[i]
    }

    pub fn is_endo(&self) -> bool {
        self.dom == self.cod
    }

    pub fn position(&self, f: &LatMap) -> Option<usize> {
        if f.dom() != &self.dom || f.cod() != &self.cod {
            return None;
        }
        self.index.get(f.values()).copied()
    }

    pub fn position_of_values(&self, values: &[usize]) -> Option<usize> {
        self.index.get(values).copied()
    }

    pub fn contains(&self, f: &LatMap) -> bool {
        self.position(f).is_some()
    }

    fn require_endo(&self) -> Result<()> {
        if self.is_endo() {
            Ok(())
        } else {
            Err(Error::NotEndoHomset)
        }
    }

    fn require_member(&self, f: &LatMap) -> Result<()> {
        if self.contains(f) {
            Ok(())
        } else {
            Err(Error::NotInHomset)
        }
    }

    /// The homset as a lattice under the pointwise order.
    pub fn to_lattice(&self) -> Result<Lattice> {
        let cod = &self.cod;
        let le = |i: usize, j: usize| {
            self.maps[i]
                .values()
                .iter()
                .zip(self.maps[j].values())
                .all(|(&a, &b)| cod.leq(a, b))
        };
        Lattice::from_poset(crate::lattice::Poset::from_relation(self.len(), le)?)
            .map(|l| l.named(format!("Q({},{})", self.dom.name(), cod.name())))
    }
}

fn check_jc(f: &LatMap) -> Result<()> {
    if f.is_join_continuous() {
        Ok(())
    } else {
        Err(Error::NotContinuous("join"))
    }
}

fn mismatch(what: &str) -> Error {
    Error::DomainMismatch(what.to_string())
}

/// `g \ h`: the greatest join-continuous `k` with `g . k <= h`, computed as
/// `int(rho(g) . h)`. Here `g : M -> N`, `h : L -> N` and `k : L -> M`.
pub fn residual_left(g: &LatMap, h: &LatMap) -> Result<LatMap> {
    if g.cod() != h.cod() {
        return Err(mismatch("residual g\\h needs g and h with a common codomain"));
    }
    check_jc(g)?;
    check_jc(h)?;
    Ok(LatMap::from_parts(
        h.dom().clone(),
        g.dom().clone(),
        residual_left_values(g.dom(), g.cod(), h.dom(), g.values(), h.values()),
    ))
}

pub(crate) fn residual_left_values(
    m: &Lattice,
    n: &Lattice,
    l: &Lattice,
    g: &[usize],
    h: &[usize],
) -> Vec<usize> {
    let rho_g = right_adjoint_values(m, n, g);
    residual_left_with_adjoint(l, m, &rho_g, h)
}

fn residual_left_with_adjoint(l: &Lattice, m: &Lattice, rho_g: &[usize], h: &[usize]) -> Vec<usize> {
    interior_values(l, m, &compose_values(rho_g, h))
}

/// `h / f`: the greatest join-continuous `k` with `k . f <= h`, computed as
/// the interior of `y |-> /\ { h(x) : y <= f(x) }`. Here `f : L -> M`,
/// `h : L -> N` and `k : M -> N`.
pub fn residual_right(h: &LatMap, f: &LatMap) -> Result<LatMap> {
    if h.dom() != f.dom() {
        return Err(mismatch("residual h/f needs h and f with a common domain"));
    }
    check_jc(h)?;
    check_jc(f)?;
    Ok(LatMap::from_parts(
        f.cod().clone(),
        h.cod().clone(),
        residual_right_values(f.dom(), f.cod(), h.cod(), h.values(), f.values()),
    ))
}

pub(crate) fn residual_right_values(
    l: &Lattice,
    m: &Lattice,
    n: &Lattice,
    h: &[usize],
    f: &[usize],
) -> Vec<usize> {
    let bound: Vec<usize> = m
        .elements()
        .map(|y| n.meet_all(l.elements().filter(|&x| m.leq(y, f[x])).map(|x| h[x])))
        .collect();
    interior_values(m, n, &bound)
}

pub(crate) fn star_values(dom: &Lattice, cod: &Lattice, f: &[usize]) -> Vec<usize> {
    raney_join_values(cod, dom, &right_adjoint_values(dom, cod, f))
}

/// `f* = join(rho(f))`, a map `cod -> dom`.
///
/// The formula is evaluated on any lattices; it is an involution only when
/// both are completely distributive.
pub fn star(f: &LatMap) -> Result<LatMap> {
    check_jc(f)?;
    Ok(LatMap::from_parts(
        f.cod().clone(),
        f.dom().clone(),
        star_values(f.dom(), f.cod(), f.values()),
    ))
}

/// `g (+) f = (f* . g*)*` for `f : L -> M`, `g : M -> N`.
pub fn dual_tensor(g: &LatMap, f: &LatMap) -> Result<LatMap> {
    if f.cod() != g.dom() {
        return Err(mismatch("dual tensor g (+) f needs cod(f) = dom(g)"));
    }
    let inner = crate::map::compose(&star(f)?, &star(g)?)?;
    star(&inner)
}

/// The same dual tensor through Raney transforms: `join(meet(g) . meet(f))`.
pub fn dual_tensor_raney(g: &LatMap, f: &LatMap) -> Result<LatMap> {
    if f.cod() != g.dom() {
        return Err(mismatch("dual tensor g (+) f needs cod(f) = dom(g)"));
    }
    let mg = raney_meet_values(g.dom(), g.cod(), g.values());
    let mf = raney_meet_values(f.dom(), f.cod(), f.values());
    Ok(LatMap::from_parts(
        f.dom().clone(),
        g.cod().clone(),
        raney_join_values(f.dom(), g.cod(), &compose_values(&mg, &mf)),
    ))
}

/// Per-map data reused across the quantifiers of the detectors.
struct EndoTables<'a> {
    l: &'a Lattice,
    maps: Vec<&'a [usize]>,
    rho: Vec<Vec<usize>>,
}

impl<'a> EndoTables<'a> {
    fn new(q: &'a HomsetEnumeration) -> Self {
        let l: &Lattice = q.dom();
        let maps: Vec<&[usize]> = q.maps().iter().map(|f| f.values()).collect();
        let rho = maps.iter().map(|f| right_adjoint_values(l, l, f)).collect();
        EndoTables { l, maps, rho }
    }

    fn left(&self, g: usize, h: &[usize]) -> Vec<usize> {
        residual_left_with_adjoint(self.l, self.l, &self.rho[g], h)
    }

    fn left_values(&self, g: &[usize], h: &[usize]) -> Vec<usize> {
        residual_left_values(self.l, self.l, self.l, g, h)
    }

    fn right(&self, h: &[usize], f: &[usize]) -> Vec<usize> {
        residual_right_values(self.l, self.l, self.l, h, f)
    }

    /// First `f` with `f \ alpha != alpha / f`.
    fn cyclic_witness(&self, alpha: &[usize]) -> Option<usize> {
        (0..self.maps.len()).find(|&f| self.left(f, alpha) != self.right(alpha, self.maps[f]))
    }

    /// First `f` violating `(alpha / f) \ alpha = f = alpha / (f \ alpha)`.
    fn dualizing_witness(&self, alpha: &[usize]) -> Option<usize> {
        (0..self.maps.len()).find(|&f| {
            let fv = self.maps[f];
            let a = self.left_values(&self.right(alpha, fv), alpha);
            let b = self.right(alpha, &self.left(f, alpha));
            a != fv || b != fv
        })
    }

    fn central_witness(&self, beta: &[usize]) -> Option<usize> {
        (0..self.maps.len())
            .find(|&x| compose_values(beta, self.maps[x]) != compose_values(self.maps[x], beta))
    }

    fn codualizing_witness(&self, beta: &[usize]) -> Option<usize> {
        (0..self.maps.len()).find(|&x| {
            let bx = compose_values(beta, self.maps[x]);
            self.left_values(beta, &bx) != self.maps[x]
        })
    }
}

fn detector(
    name: &str,
    alpha: &LatMap,
    q: &HomsetEnumeration,
    find: impl Fn(&EndoTables, &[usize]) -> Option<usize>,
) -> Result<CheckResult> {
    let start = Instant::now();
    q.require_endo()?;
    q.require_member(alpha)?;
    let tables = EndoTables::new(q);
    let witness = find(&tables, alpha.values()).map(|f| Witness::Maps {
        law: name.to_string(),
        maps: vec![q.get(f).values().to_vec()],
    });
    Ok(CheckResult::from_witness(name, witness).timed(start))
}

/// `f \ alpha = alpha / f` for every `f` in `Q(L)`.
pub fn is_cyclic(alpha: &LatMap, q: &HomsetEnumeration) -> Result<CheckResult> {
    detector("cyclic", alpha, q, |t, a| t.cyclic_witness(a))
}

/// `(alpha / f) \ alpha = alpha / (f \ alpha) = f` for every `f` in `Q(L)`.
pub fn is_dualizing(alpha: &LatMap, q: &HomsetEnumeration) -> Result<CheckResult> {
    detector("dualizing", alpha, q, |t, a| t.dualizing_witness(a))
}

/// `beta . x = x . beta` for every `x` in `Q(L)`.
pub fn is_central(beta: &LatMap, q: &HomsetEnumeration) -> Result<CheckResult> {
    detector("central", beta, q, |t, b| t.central_witness(b))
}

/// `x = beta \ (beta . x)` for every `x` in `Q(L)`.
pub fn is_codualizing(beta: &LatMap, q: &HomsetEnumeration) -> Result<CheckResult> {
    detector("codualizing", beta, q, |t, b| t.codualizing_witness(b))
}

fn filter_elements(
    q: &HomsetEnumeration,
    keep: impl Fn(&EndoTables, &[usize]) -> bool + Sync,
) -> Result<Vec<LatMap>> {
    q.require_endo()?;
    let tables = EndoTables::new(q);
    let keep_flags: Vec<bool> = (0..q.len())
        .into_par_iter()
        .map(|i| keep(&tables, tables.maps[i]))
        .collect();
    Ok(q.maps()
        .iter()
        .zip(keep_flags)
        .filter(|(_, k)| *k)
        .map(|(f, _)| f.clone())
        .collect())
}

/// Every cyclic element of `Q(L)`, in enumeration order.
pub fn cyclic_elements(q: &HomsetEnumeration) -> Result<Vec<LatMap>> {
    filter_elements(q, |t, a| t.cyclic_witness(a).is_none())
}

/// Every central element of `Q(L)`, in enumeration order.
pub fn central_elements(q: &HomsetEnumeration) -> Result<Vec<LatMap>> {
    filter_elements(q, |t, b| t.central_witness(b).is_none())
}

/// Every element of `Q(L)` that is both cyclic and dualizing.
pub fn cyclic_dualizing_elements(q: &HomsetEnumeration) -> Result<Vec<LatMap>> {
    filter_elements(q, |t, a| {
        t.cyclic_witness(a).is_none() && t.dualizing_witness(a).is_none()
    })
}

/// Limits for [`check_involutive_axioms_with`].
#[derive(Clone, Copy, Debug)]
pub struct AxiomOptions {
    /// Cap passed to each homset enumeration.
    pub enumeration_cap: usize,
    /// Largest number of quantifier instances visited exhaustively.
    pub work_budget: usize,
    /// When the budget is exceeded, draw this many random instances per law
    /// (with the given seed) instead of failing with `CapExceeded`.
    pub sample: Option<(u64, usize)>,
}

impl Default for AxiomOptions {
    fn default() -> Self {
        AxiomOptions {
            enumeration_cap: DEFAULT_CAP,
            work_budget: 50_000_000,
            sample: None,
        }
    }
}

/// Verifies the involutive-quantaloid laws on the homsets between `l` and `m`
/// with the star of [`star`]:
///
/// * `(f*)* = f` for `f` in `Q(L, M)`;
/// * `f <= g` iff `f . g* <= 0_M` iff `g* . f <= 0_L`, where `0 = id*`;
/// * `g \ h = (h* . g)*` and `h / f = (f . h*)*` (with `N = M`), plus
///   `g \ 0_L = g*` and `0_L / f = f*`;
/// * the rotations `g . f <= h` iff `h* . g <= f*` iff `f . h* <= g*`.
///
/// Returns the first violated instance as witness.
pub fn check_involutive_axioms(l: &Arc<Lattice>, m: &Arc<Lattice>) -> Result<CheckResult> {
    check_involutive_axioms_with(l, m, &AxiomOptions::default())
}

pub fn check_involutive_axioms_with(
    l: &Arc<Lattice>,
    m: &Arc<Lattice>,
    opts: &AxiomOptions,
) -> Result<CheckResult> {
    run_axioms("involutive-axioms", l, m, opts, true)
}

/// Only the residual formulas, the zero residual laws and the rotations of
/// [`check_involutive_axioms`].
pub fn check_residual_laws_with(
    l: &Arc<Lattice>,
    m: &Arc<Lattice>,
    opts: &AxiomOptions,
) -> Result<CheckResult> {
    run_axioms("residual-laws", l, m, opts, false)
}

fn run_axioms(
    name: &str,
    l: &Arc<Lattice>,
    m: &Arc<Lattice>,
    opts: &AxiomOptions,
    full: bool,
) -> Result<CheckResult> {
    let start = Instant::now();
    let mut laws = AxiomLaws::new(l, m, opts.enumeration_cap)?;
    laws.full = full;
    let (nlm, nmm) = (laws.qlm.len(), laws.qmm.len());
    let work = nlm
        .saturating_mul(nlm)
        .saturating_mul(nmm.max(1))
        .saturating_add(nlm.saturating_mul(nmm));
    let (witness, coverage) = if work <= opts.work_budget {
        (laws.exhaustive(), Coverage::Exhaustive)
    } else if let Some((seed, draws)) = opts.sample {
        (laws.sampled(seed, draws), Coverage::Sampled { draws })
    } else {
        return Err(Error::CapExceeded {
            what: "axiom instances",
            cap: opts.work_budget,
        });
    };
    Ok(CheckResult::from_witness(name, witness)
        .with_coverage(coverage)
        .timed(start))
}

/// Bit coding of maps into a fixed codomain: `a <= b` pointwise iff the
/// points of `b` lie inside the up-sets of `a`.
#[derive(Clone, Copy)]
struct PointwiseCode<'a> {
    cod: &'a Lattice,
}

impl<'a> PointwiseCode<'a> {
    fn new(cod: &'a Lattice) -> Self {
        PointwiseCode { cod }
    }

    /// Words per coded map with `len` arguments.
    fn stride(&self, len: usize) -> usize {
        (len * self.cod.len()).div_ceil(64)
    }

    fn words(&self, len: usize) -> Vec<u64> {
        vec![0; self.stride(len)]
    }

    /// Bits `(x, y)` with `a(x) <= y`.
    fn ups(&self, a: &[usize]) -> Vec<u64> {
        let n = self.cod.len();
        let mut w = self.words(a.len());
        for (x, &ax) in a.iter().enumerate() {
            for y in self.cod.poset().up_set(ax).ones() {
                let bit = x * n + y;
                w[bit / 64] |= 1 << (bit % 64);
            }
        }
        w
    }

    /// Bits `(x, b(x))`.
    fn points(&self, b: &[usize]) -> Vec<u64> {
        let n = self.cod.len();
        let mut w = self.words(b.len());
        for (x, &bx) in b.iter().enumerate() {
            let bit = x * n + bx;
            w[bit / 64] |= 1 << (bit % 64);
        }
        w
    }

    fn le(ups_a: &[u64], points_b: &[u64]) -> bool {
        ups_a.iter().zip(points_b).all(|(u, p)| p & !u == 0)
    }
}

struct AxiomLaws<'a> {
    l: &'a Lattice,
    m: &'a Lattice,
    qlm: HomsetEnumeration,
    qmm: HomsetEnumeration,
    qml: HomsetEnumeration,
    /// Stars of `Q(L, M)`, maps `M -> L`.
    star_lm: Vec<Vec<usize>>,
    /// Stars of `Q(M, M)`.
    star_mm: Vec<Vec<usize>>,
    zero_l: Vec<usize>,
    zero_m: Vec<usize>,
    /// Include the involution and order laws.
    full: bool,
}

fn maps_witness(law: &str, maps: &[&[usize]]) -> Witness {
    Witness::Maps {
        law: law.to_string(),
        maps: maps.iter().map(|m| m.to_vec()).collect(),
    }
}

impl<'a> AxiomLaws<'a> {
    fn new(l: &'a Arc<Lattice>, m: &'a Arc<Lattice>, cap: usize) -> Result<Self> {
        let qlm = enumerate_homset(l, m, cap)?;
        let qmm = enumerate_homset(m, m, cap)?;
        let qml = enumerate_homset(m, l, cap)?;
        let star_lm = qlm.maps().iter().map(|f| star_values(l, m, f.values())).collect();
        let star_mm = qmm.maps().iter().map(|f| star_values(m, m, f.values())).collect();
        let id_l: Vec<usize> = l.elements().collect();
        let id_m: Vec<usize> = m.elements().collect();
        Ok(AxiomLaws {
            l,
            m,
            zero_l: star_values(l, l, &id_l),
            zero_m: star_values(m, m, &id_m),
            qlm,
            qmm,
            qml,
            star_lm,
            star_mm,
            full: true,
        })
    }

    fn le(lat: &Lattice, a: &[usize], b: &[usize]) -> bool {
        a.iter().zip(b).all(|(&x, &y)| lat.leq(x, y))
    }

    fn f(&self, i: usize) -> &[usize] {
        self.qlm.get(i).values()
    }

    fn g(&self, i: usize) -> &[usize] {
        self.qmm.get(i).values()
    }

    fn involution(&self, i: usize) -> Option<Witness> {
        if !self.full {
            return None;
        }
        let back = star_values(self.m, self.l, &self.star_lm[i]);
        (back != self.f(i)).then(|| maps_witness("(f*)* = f", &[self.f(i), &back]))
    }

    fn order_law(&self, i: usize, j: usize) -> Option<Witness> {
        if !self.full {
            return None;
        }
        let (f, g, gs) = (self.f(i), self.f(j), &self.star_lm[j]);
        let a = Self::le(self.m, f, g);
        let b = Self::le(self.m, &compose_values(f, gs), &self.zero_m);
        let c = Self::le(self.l, &compose_values(gs, f), &self.zero_l);
        (a != b || b != c).then(|| maps_witness("f <= g iff f.g* <= 0 iff g*.f <= 0", &[f, g]))
    }

    /// `g \ h = (h* . g)*` for `g` in `Q(M, M)`, `h` in `Q(L, M)`.
    fn left_residual_law(&self, gi: usize, hi: usize) -> Option<Witness> {
        let (g, h) = (self.g(gi), self.f(hi));
        let lhs = residual_left_values(self.m, self.m, self.l, g, h);
        let rhs = star_values(self.m, self.l, &compose_values(&self.star_lm[hi], g));
        (lhs != rhs).then(|| maps_witness("g\\h = (h*.g)*", &[g, h]))
    }

    /// `h / f = (f . h*)*` for `f, h` in `Q(L, M)`.
    fn right_residual_law(&self, hi: usize, fi: usize) -> Option<Witness> {
        let (h, f) = (self.f(hi), self.f(fi));
        let lhs = residual_right_values(self.l, self.m, self.m, h, f);
        let rhs = star_values(self.m, self.m, &compose_values(f, &self.star_lm[hi]));
        (lhs != rhs).then(|| maps_witness("h/f = (f.h*)*", &[h, f]))
    }

    /// `g \ 0_L = g*` for `g` in `Q(M, L)` and `0_L / f = f*` for `f` in `Q(L, M)`.
    fn zero_residual_laws(&self) -> Option<Witness> {
        for g in self.qml.maps() {
            let g = g.values();
            let lhs = residual_left_values(self.m, self.l, self.l, g, &self.zero_l);
            if lhs != star_values(self.m, self.l, g) {
                return Some(maps_witness("g\\0 = g*", &[g]));
            }
        }
        for (i, f) in self.qlm.maps().iter().enumerate() {
            let lhs = residual_right_values(self.l, self.m, self.l, &self.zero_l, f.values());
            if lhs != self.star_lm[i] {
                return Some(maps_witness("0/f = f*", &[f.values()]));
            }
        }
        None
    }

    /// `g . f <= h` iff `h* . g <= f*` iff `f . h* <= g*`.
    fn rotation(&self, fi: usize, gi: usize, hi: usize, gf: &[usize]) -> Option<Witness> {
        let (f, g, h) = (self.f(fi), self.g(gi), self.f(hi));
        let a = Self::le(self.m, gf, h);
        let b = Self::le(self.l, &compose_values(&self.star_lm[hi], g), &self.star_lm[fi]);
        let c = Self::le(self.m, &compose_values(f, &self.star_lm[hi]), &self.star_mm[gi]);
        (a != b || b != c).then(|| maps_witness("triangle rotation", &[f, g, h]))
    }

    fn exhaustive(&self) -> Option<Witness> {
        let (nlm, nmm) = (self.qlm.len(), self.qmm.len());
        if let Some(w) = (0..nlm).find_map(|i| self.involution(i)) {
            return Some(w);
        }
        let pairs = |n1: usize, n2: usize| (0..n1).flat_map(move |i| (0..n2).map(move |j| (i, j)));
        if let Some(w) = pairs(nlm, nlm).find_map(|(i, j)| self.order_law(i, j)) {
            return Some(w);
        }
        if let Some(w) = pairs(nmm, nlm).find_map(|(g, h)| self.left_residual_law(g, h)) {
            return Some(w);
        }
        if let Some(w) = pairs(nlm, nlm).find_map(|(h, f)| self.right_residual_law(h, f)) {
            return Some(w);
        }
        if let Some(w) = self.zero_residual_laws() {
            return Some(w);
        }
        // Rotation over all triples; sharded by f, earliest witness wins.
        // Maps are bit-coded so that each comparison is a few word operations,
        // and h* . g is shared by every f, so it is tabulated once.
        let (cl, cm) = (PointwiseCode::new(self.l), PointwiseCode::new(self.m));
        let (wl, wm) = (cl.stride(self.m.len()), cm.stride(self.l.len()));
        let flat = |rows: Vec<Vec<u64>>| rows.concat();
        let h_pts = flat((0..nlm).map(|hi| cm.points(self.f(hi))).collect());
        let fs_pts = flat(self.star_lm.iter().map(|fs| cl.points(fs)).collect());
        let gs_pts = flat(self.star_mm.iter().map(|gs| cm.points(gs)).collect());
        // Indexed [g][h], so the inner loop over h walks memory in order.
        let hs_g = flat(
            (0..nmm)
                .flat_map(|gi| {
                    (0..nlm).map(move |hi| cl.ups(&compose_values(&self.star_lm[hi], self.g(gi))))
                })
                .collect(),
        );
        (0..nlm)
            .into_par_iter()
            .map(|fi| {
                let f_hs = flat(
                    (0..nlm)
                        .map(|hi| cm.ups(&compose_values(self.f(fi), &self.star_lm[hi])))
                        .collect(),
                );
                let fs = &fs_pts[fi * wl..][..wl];
                (0..nmm).find_map(|gi| {
                    let gf = cm.ups(&compose_values(self.g(gi), self.f(fi)));
                    let gs = &gs_pts[gi * wm..][..wm];
                    let row = &hs_g[gi * nlm * wl..][..nlm * wl];
                    (0..nlm).find_map(|hi| {
                        let a = PointwiseCode::le(&gf, &h_pts[hi * wm..][..wm]);
                        let b = PointwiseCode::le(&row[hi * wl..][..wl], fs);
                        let c = PointwiseCode::le(&f_hs[hi * wm..][..wm], gs);
                        (a != b || b != c).then(|| {
                            maps_witness("triangle rotation", &[self.f(fi), self.g(gi), self.f(hi)])
                        })
                    })
                })
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .next()
    }

    fn sampled(&self, seed: u64, draws: usize) -> Option<Witness> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (nlm, nmm) = (self.qlm.len(), self.qmm.len());
        // (f*)* = f is linear in |Q(L, M)|; it stays exhaustive.
        if let Some(w) = (0..nlm).find_map(|i| self.involution(i)) {
            return Some(w);
        }
        for _ in 0..draws {
            let (i, j, k) = (
                rng.random_range(0..nlm),
                rng.random_range(0..nlm),
                rng.random_range(0..nmm),
            );
            let found = self
                .order_law(i, j)
                .or_else(|| self.left_residual_law(k, i))
                .or_else(|| self.right_residual_law(i, j))
                .or_else(|| {
                    let gf = compose_values(self.g(k), self.f(i));
                    self.rotation(i, k, j, &gf)
                });
            if found.is_some() {
                return found;
            }
        }
        self.zero_residual_laws()
    }
}
