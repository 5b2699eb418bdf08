//! Functions between finite lattices.
//!
//! A [`LatMap`] is a plain value table; nothing about monotonicity or
//! continuity is assumed until [`LatMap::classify`] is asked. The operations
//! here (adjoints, interior, Raney transforms, the special maps `c_x`, `a_x`,
//! `alpha_x`, `o`, `omega`, `nu_x`) all work on the value tables directly.
//!
//! Raney transforms use the convention
//!
//! ```text
//! (join f)(x) = V { f(t) : x !<= t }      (meet f)(x) = /\ { f(t) : t !<= x }
//! ```
//!
//! so that `join(id) = o` and `meet(id) = omega`. Empty joins are the bottom
//! and empty meets the top.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Which preservation properties a map has.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapClass {
    pub monotone: bool,
    pub join_continuous: bool,
    pub meet_continuous: bool,
}

/// A function `dom -> cod` given by its values.
#[derive(Clone)]
pub struct LatMap {
    dom: Arc<Lattice>,
    cod: Arc<Lattice>,
    values: Vec<usize>,
    class: OnceLock<MapClass>,
}

impl LatMap {
    pub fn new(dom: Arc<Lattice>, cod: Arc<Lattice>, values: Vec<usize>) -> Result<Self> {
        if values.len() != dom.len() {
            return Err(Error::DomainMismatch(format!(
                "{} values for a domain of {} elements",
                values.len(),
                dom.len()
            )));
        }
        for &v in &values {
            cod.check_index(v)?;
        }
        Ok(LatMap::from_parts(dom, cod, values))
    }

    pub(crate) fn from_parts(dom: Arc<Lattice>, cod: Arc<Lattice>, values: Vec<usize>) -> Self {
        debug_assert_eq!(values.len(), dom.len());
        LatMap {
            dom,
            cod,
            values,
            class: OnceLock::new(),
        }
    }

    pub fn identity(l: &Arc<Lattice>) -> Self {
        LatMap::from_parts(l.clone(), l.clone(), l.elements().collect())
    }

    pub fn dom(&self) -> &Arc<Lattice> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Lattice> {
        &self.cod
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn into_values(self) -> Vec<usize> {
        self.values
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    /// Classifies the map once; later calls return the cached result.
    pub fn classify(&self) -> MapClass {
        *self
            .class
            .get_or_init(|| classify_values(&self.dom, &self.cod, &self.values))
    }

    pub fn is_monotone(&self) -> bool {
        self.classify().monotone
    }

    pub fn is_join_continuous(&self) -> bool {
        self.classify().join_continuous
    }

    pub fn is_meet_continuous(&self) -> bool {
        self.classify().meet_continuous
    }

    pub fn is_endo(&self) -> bool {
        self.dom == self.cod
    }

    /// Pointwise order. Maps with different shapes are incomparable.
    pub fn le(&self, other: &LatMap) -> bool {
        self.same_shape(other)
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(&a, &b)| self.cod.leq(a, b))
    }

    pub fn same_shape(&self, other: &LatMap) -> bool {
        self.dom == other.dom && self.cod == other.cod
    }

    fn require_jc(&self) -> Result<()> {
        if self.is_join_continuous() {
            Ok(())
        } else {
            Err(Error::NotContinuous("join"))
        }
    }

    fn require_mc(&self) -> Result<()> {
        if self.is_meet_continuous() {
            Ok(())
        } else {
            Err(Error::NotContinuous("meet"))
        }
    }

    pub fn to_doc(&self) -> MapDoc {
        MapDoc {
            dom: self.dom.name().to_string(),
            cod: self.cod.name().to_string(),
            values: self.values.clone(),
        }
    }
}

impl PartialEq for LatMap {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values && self.same_shape(other)
    }
}

impl Eq for LatMap {}

impl fmt::Debug for LatMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LatMap({} -> {}, {:?})",
            self.dom.name(),
            self.cod.name(),
            self.values
        )
    }
}

/// On-disk form of a map; lattices are referenced by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDoc {
    pub dom: String,
    pub cod: String,
    pub values: Vec<usize>,
}

pub(crate) fn classify_values(dom: &Lattice, cod: &Lattice, f: &[usize]) -> MapClass {
    let monotone = dom
        .elements()
        .all(|x| dom.poset().up_set(x).ones().all(|y| cod.leq(f[x], f[y])));
    if !monotone {
        return MapClass {
            monotone,
            join_continuous: false,
            meet_continuous: false,
        };
    }
    MapClass {
        monotone,
        join_continuous: preserves_joins(dom, cod, f),
        meet_continuous: f[dom.top()] == cod.top()
            && dom.elements().all(|x| {
                (x..dom.len()).all(|y| f[dom.meet(x, y)] == cod.meet(f[x], f[y]))
            }),
    }
}

/// `f(bottom) = bottom` and `f(x v y) = f(x) v f(y)`; for finite lattices this
/// is preservation of all joins.
pub(crate) fn preserves_joins(dom: &Lattice, cod: &Lattice, f: &[usize]) -> bool {
    f[dom.bottom()] == cod.bottom()
        && dom
            .elements()
            .all(|x| (x..dom.len()).all(|y| f[dom.join(x, y)] == cod.join(f[x], f[y])))
}

pub(crate) fn o_values(l: &Lattice) -> Vec<usize> {
    l.elements()
        .map(|x| l.join_all(l.elements().filter(|&t| !l.leq(x, t))))
        .collect()
}

pub(crate) fn omega_values(l: &Lattice) -> Vec<usize> {
    l.elements()
        .map(|y| l.meet_all(l.elements().filter(|&t| !l.leq(t, y))))
        .collect()
}

pub(crate) fn compose_values(g: &[usize], f: &[usize]) -> Vec<usize> {
    f.iter().map(|&y| g[y]).collect()
}

/// `rho(f)(y) = V { x : f(x) <= y }`, a map `cod -> dom`.
pub(crate) fn right_adjoint_values(dom: &Lattice, cod: &Lattice, f: &[usize]) -> Vec<usize> {
    cod.elements()
        .map(|y| dom.join_all(dom.elements().filter(|&x| cod.leq(f[x], y))))
        .collect()
}

/// `l(g)(x) = /\ { y : x <= g(y) }` for `g : dom -> cod`, a map `cod -> dom`.
pub(crate) fn left_adjoint_values(dom: &Lattice, cod: &Lattice, g: &[usize]) -> Vec<usize> {
    cod.elements()
        .map(|x| dom.meet_all(dom.elements().filter(|&y| cod.leq(x, g[y]))))
        .collect()
}

pub(crate) fn raney_join_values(dom: &Lattice, cod: &Lattice, f: &[usize]) -> Vec<usize> {
    dom.elements()
        .map(|x| cod.join_all(dom.elements().filter(|&t| !dom.leq(x, t)).map(|t| f[t])))
        .collect()
}

pub(crate) fn raney_meet_values(dom: &Lattice, cod: &Lattice, f: &[usize]) -> Vec<usize> {
    dom.elements()
        .map(|x| cod.meet_all(dom.elements().filter(|&t| !dom.leq(t, x)).map(|t| f[t])))
        .collect()
}

/// Greatest join-continuous map below `f`, as a decreasing fixpoint of the
/// constraints `h(bot) = bot`, `h(x) <= h(y)` for `x <= y`, and
/// `h(x v y) <= h(x) v h(y)`.
pub(crate) fn interior_values(dom: &Lattice, cod: &Lattice, f: &[usize]) -> Vec<usize> {
    let n = dom.len();
    let mut h = f.to_vec();
    h[dom.bottom()] = cod.bottom();
    loop {
        let mut changed = false;
        // Top-down sweep makes h monotone in one pass.
        for x in (0..n).rev() {
            let mut v = h[x];
            for y in dom.poset().up_set(x).ones() {
                v = cod.meet(v, h[y]);
            }
            if v != h[x] {
                h[x] = v;
                changed = true;
            }
        }
        for x in 0..n {
            for y in (x + 1)..n {
                let z = dom.join(x, y);
                let v = cod.meet(h[z], cod.join(h[x], h[y]));
                if v != h[z] {
                    h[z] = v;
                    changed = true;
                }
            }
        }
        if !changed {
            return h;
        }
    }
}

pub fn compose(g: &LatMap, f: &LatMap) -> Result<LatMap> {
    if f.cod != g.dom {
        return Err(Error::DomainMismatch(format!(
            "cannot compose {} -> {} after {} -> {}",
            g.dom.name(),
            g.cod.name(),
            f.dom.name(),
            f.cod.name()
        )));
    }
    Ok(LatMap::from_parts(
        f.dom.clone(),
        g.cod.clone(),
        compose_values(&g.values, &f.values),
    ))
}

fn shared_shape(fs: &[LatMap]) -> Result<&LatMap> {
    let first = fs
        .first()
        .ok_or_else(|| Error::DomainMismatch("empty family of maps".into()))?;
    if let Some(bad) = fs.iter().find(|f| !f.same_shape(first)) {
        return Err(Error::DomainMismatch(format!(
            "family mixes {:?} and {:?}",
            first, bad
        )));
    }
    Ok(first)
}

pub fn pointwise_join(fs: &[LatMap]) -> Result<LatMap> {
    let first = shared_shape(fs)?;
    let cod = &first.cod;
    let values = first
        .dom
        .elements()
        .map(|x| cod.join_all(fs.iter().map(|f| f.values[x])))
        .collect();
    Ok(LatMap::from_parts(first.dom.clone(), cod.clone(), values))
}

pub fn pointwise_meet(fs: &[LatMap]) -> Result<LatMap> {
    let first = shared_shape(fs)?;
    let cod = &first.cod;
    let values = first
        .dom
        .elements()
        .map(|x| cod.meet_all(fs.iter().map(|f| f.values[x])))
        .collect();
    Ok(LatMap::from_parts(first.dom.clone(), cod.clone(), values))
}

pub fn right_adjoint(f: &LatMap) -> Result<LatMap> {
    f.require_jc()?;
    Ok(LatMap::from_parts(
        f.cod.clone(),
        f.dom.clone(),
        right_adjoint_values(&f.dom, &f.cod, &f.values),
    ))
}

pub fn left_adjoint(g: &LatMap) -> Result<LatMap> {
    g.require_mc()?;
    Ok(LatMap::from_parts(
        g.cod.clone(),
        g.dom.clone(),
        left_adjoint_values(&g.dom, &g.cod, &g.values),
    ))
}

pub fn interior(f: &LatMap) -> LatMap {
    LatMap::from_parts(
        f.dom.clone(),
        f.cod.clone(),
        interior_values(&f.dom, &f.cod, &f.values),
    )
}

pub fn raney_join(f: &LatMap) -> LatMap {
    LatMap::from_parts(
        f.dom.clone(),
        f.cod.clone(),
        raney_join_values(&f.dom, &f.cod, &f.values),
    )
}

pub fn raney_meet(f: &LatMap) -> LatMap {
    LatMap::from_parts(
        f.dom.clone(),
        f.cod.clone(),
        raney_meet_values(&f.dom, &f.cod, &f.values),
    )
}

/// `g_f(y) = /\ { z : f(z) !<= y }`, the right adjoint of `raney_join(f)`.
pub fn raney_join_adjoint(f: &LatMap) -> LatMap {
    let (dom, cod) = (&f.dom, &f.cod);
    let values = cod
        .elements()
        .map(|y| dom.meet_all(dom.elements().filter(|&z| !cod.leq(f.values[z], y))))
        .collect();
    LatMap::from_parts(cod.clone(), dom.clone(), values)
}

/// The named endomaps of a lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Special {
    /// `c_x(t) = x` for `t != bot`, `c_x(bot) = bot`.
    Const(usize),
    /// `a_x(t) = top` if `t !<= x`, else `bot`.
    Annihilator(usize),
    /// `alpha_x(t) = top` if `x <= t`, else `bot`.
    Alpha(usize),
    /// `o(x) = V { t : x !<= t }`.
    O,
    /// `omega(y) = /\ { t : t !<= y }`.
    Omega,
    /// `nu_x0(t) = bot` if `t <= x0`, else `t`.
    Nu(usize),
}

pub fn special(l: &Arc<Lattice>, kind: Special) -> Result<LatMap> {
    let (bot, top) = (l.bottom(), l.top());
    let values: Vec<usize> = match kind {
        Special::Const(x) => {
            l.check_index(x)?;
            l.elements().map(|t| if t == bot { bot } else { x }).collect()
        }
        Special::Annihilator(x) => {
            l.check_index(x)?;
            l.elements()
                .map(|t| if l.leq(t, x) { bot } else { top })
                .collect()
        }
        Special::Alpha(x) => {
            l.check_index(x)?;
            l.elements()
                .map(|t| if l.leq(x, t) { top } else { bot })
                .collect()
        }
        Special::O => o_values(l),
        Special::Omega => omega_values(l),
        Special::Nu(x0) => {
            l.check_index(x0)?;
            l.elements()
                .map(|t| if l.leq(t, x0) { bot } else { t })
                .collect()
        }
    };
    Ok(LatMap::from_parts(l.clone(), l.clone(), values))
}

/// `(meet-of fs)(x) = V_{x !<= t} /\_i f_i(omega(t))`: always join-continuous,
/// and the infimum of the family among join-continuous maps when the domain
/// is completely distributive.
pub fn big_meet(fs: &[LatMap]) -> Result<LatMap> {
    let first = shared_shape(fs)?;
    for f in fs {
        f.require_jc()?;
    }
    let (dom, cod) = (&first.dom, &first.cod);
    let omega = omega_values(dom);
    let at_omega: Vec<usize> = dom
        .elements()
        .map(|t| cod.meet_all(fs.iter().map(|f| f.values[omega[t]])))
        .collect();
    Ok(LatMap::from_parts(
        dom.clone(),
        cod.clone(),
        raney_join_values(dom, cod, &at_omega),
    ))
}
