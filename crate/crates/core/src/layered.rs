//! Layer structures and the doubling construction.
//!
//! A layer structure splits a poset into a lower and an upper layer of equal
//! size, with a sign map that never decreases along the order and a lifting
//! bijection `lift` from lower to upper that is an order isomorphism moving
//! every element strictly up. The double of a layered poset is the
//! connect-sum of two copies of it, glued along the upper layer of the first
//! copy and its image under the drop map (the inverse of `lift`) in the
//! second.
//!
//! When every element has a least upper-layer element above it and a
//! greatest lower-layer element below it (property (M)), those projections
//! propagate to the double by explicit index formulas, and the Möbius
//! function of the double is expressible through the Möbius functions of the
//! poset and of its upper layer alone.

use crate::incidence::{self, IncidenceError, MobiusTable};
use crate::poset::FinitePoset;
use crate::surgery::{self, EmbeddedSubposet, SurgeryError};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DoubleError {
    #[error("sign map has {got} entries, poset has {expected}")]
    SignLength { got: usize, expected: usize },
    #[error("sign of element {element} is not -1 or +1")]
    BadSignValue { element: usize },
    #[error("sign decreases along {x} <= {y}")]
    SignNotMonotone { x: usize, y: usize },
    #[error("layers have different sizes: {lower} lower, {upper} upper")]
    UnevenLayers { lower: usize, upper: usize },
    #[error("lift domain disagrees with the lower layer at element {element}")]
    LiftDomain { element: usize },
    #[error("lift value for element {element} is not in the upper layer")]
    LiftRange { element: usize },
    #[error("lift sends both {a} and {b} to the same element")]
    LiftNotInjective { a: usize, b: usize },
    #[error("element {element} does not lie strictly below its lift")]
    LiftNotIncreasing { element: usize },
    #[error("lift does not preserve and reflect order on the pair ({a}, {b})")]
    LiftNotOrderIso { a: usize, b: usize },
    #[error("property (M{dir}) fails at element {element}: extremal candidates {extremals:?}")]
    PropertyMFailed { dir: char, element: usize, extremals: Vec<usize> },
    #[error("elements {x} and {y} have no join or no meet")]
    NotALattice { x: usize, y: usize },
    #[error("join of {x} and {y} is {join}, which leaves their layer")]
    JoinEscapesLayer { x: usize, y: usize, join: usize },
    #[error("meet of {x} and {y} is {meet}, which leaves their layer")]
    MeetEscapesLayer { x: usize, y: usize, meet: usize },
    #[error("lift is not a lattice morphism on the pair ({x}, {y})")]
    LiftNotLatticeMorphism { x: usize, y: usize },
    #[error(transparent)]
    Mobius(#[from] IncidenceError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
}

/// A sign map plus a lifting bijection from the lower layer to the upper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerStructure {
    /// One of -1 or +1 per element.
    pub sign: Vec<i8>,
    /// Order isomorphism lower -> upper with `x < lift[x]`.
    pub lift: BTreeMap<usize, usize>,
}

impl LayerStructure {
    /// The canonical layer on a disjoint-union-style index space: elements
    /// `0..half` form the lower layer and `half..2 * half` the upper, with
    /// the lift adding `half`.
    pub fn product_style(half: usize) -> LayerStructure {
        LayerStructure {
            sign: (0..2 * half).map(|i| if i < half { -1 } else { 1 }).collect(),
            lift: (0..half).map(|i| (i, i + half)).collect(),
        }
    }

    /// Indices of the lower layer, ascending.
    pub fn lower(&self) -> Vec<usize> {
        (0..self.sign.len()).filter(|&i| self.sign[i] == -1).collect()
    }

    /// Indices of the upper layer, ascending.
    pub fn upper(&self) -> Vec<usize> {
        (0..self.sign.len()).filter(|&i| self.sign[i] == 1).collect()
    }

    /// The drop map: inverse of `lift`, keyed by upper-layer indices.
    pub fn drop_map(&self) -> BTreeMap<usize, usize> {
        self.lift.iter().map(|(&low, &high)| (high, low)).collect()
    }
}

/// Checks every layer axiom against `p`, reporting the first violation.
pub fn validate_layer(p: &FinitePoset, layer: &LayerStructure) -> Result<(), DoubleError> {
    let m = p.len();
    if layer.sign.len() != m {
        return Err(DoubleError::SignLength { got: layer.sign.len(), expected: m });
    }
    for (element, &s) in layer.sign.iter().enumerate() {
        if s != -1 && s != 1 {
            return Err(DoubleError::BadSignValue { element });
        }
    }
    for x in 0..m {
        for y in 0..m {
            if p.leq(x, y) && layer.sign[x] > layer.sign[y] {
                return Err(DoubleError::SignNotMonotone { x, y });
            }
        }
    }
    let lower = layer.lower();
    let upper = layer.upper();
    if lower.len() != upper.len() {
        return Err(DoubleError::UnevenLayers { lower: lower.len(), upper: upper.len() });
    }
    for (&k, &v) in &layer.lift {
        if k >= m || layer.sign[k] != -1 {
            return Err(DoubleError::LiftDomain { element: k });
        }
        if v >= m || layer.sign[v] != 1 {
            return Err(DoubleError::LiftRange { element: k });
        }
    }
    for &x in &lower {
        if !layer.lift.contains_key(&x) {
            return Err(DoubleError::LiftDomain { element: x });
        }
    }
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for (&k, &v) in &layer.lift {
        if let Some(&other) = seen.get(&v) {
            return Err(DoubleError::LiftNotInjective { a: other, b: k });
        }
        seen.insert(v, k);
    }
    for (&k, &v) in &layer.lift {
        if !p.lt(k, v) {
            return Err(DoubleError::LiftNotIncreasing { element: k });
        }
    }
    for &a in &lower {
        for &b in &lower {
            if p.leq(a, b) != p.leq(layer.lift[&a], layer.lift[&b]) {
                return Err(DoubleError::LiftNotOrderIso { a, b });
            }
        }
    }
    Ok(())
}

/// Checks that both layers are sublattices and that the lift preserves joins
/// and meets. Expects a layer already accepted by `validate_layer`; also
/// verifies that `p` is in fact a lattice.
pub fn validate_lattice_compatibility(
    p: &FinitePoset,
    layer: &LayerStructure,
) -> Result<(), DoubleError> {
    let m = p.len();
    for x in 0..m {
        for y in x..m {
            let join = p.join(x, y).ok_or(DoubleError::NotALattice { x, y })?;
            let meet = p.meet(x, y).ok_or(DoubleError::NotALattice { x, y })?;
            if layer.sign[x] == layer.sign[y] {
                if layer.sign[join] != layer.sign[x] {
                    return Err(DoubleError::JoinEscapesLayer { x, y, join });
                }
                if layer.sign[meet] != layer.sign[x] {
                    return Err(DoubleError::MeetEscapesLayer { x, y, meet });
                }
            }
        }
    }
    for (&a, &la) in &layer.lift {
        for (&b, &lb) in &layer.lift {
            let join = p.join(a, b).expect("joins exist, checked above");
            let meet = p.meet(a, b).expect("meets exist, checked above");
            if layer.lift.get(&join) != p.join(la, lb).as_ref()
                || layer.lift.get(&meet) != p.meet(la, lb).as_ref()
            {
                return Err(DoubleError::LiftNotLatticeMorphism { x: a, y: b });
            }
        }
    }
    Ok(())
}

/// Builds the double: two copies of `p` glued along the upper layer of the
/// first and the dropped lower layer of the second. Copy 0 keeps its
/// indices, copy 1 is offset by `p.len()`; labels get "-" and "+" suffixes.
/// The double carries the canonical product-style layer, which is returned
/// with it.
pub fn double(
    p: &FinitePoset,
    layer: &LayerStructure,
) -> Result<(FinitePoset, LayerStructure), DoubleError> {
    validate_layer(p, layer)?;
    let upper = layer.upper();
    let drop = layer.drop_map();
    let drops: Vec<usize> = upper.iter().map(|u| drop[u]).collect();
    let q = p.induced(&upper);
    let e = EmbeddedSubposet::new(q, upper, drops, p, p)?;
    let (glued, _) = surgery::connect_sum(p, p, &e)?;
    let m = p.len();
    let labels: Vec<String> = (0..2 * m)
        .map(|i| {
            if i < m {
                format!("{}-", p.label(i))
            } else {
                format!("{}+", p.label(i - m))
            }
        })
        .collect();
    Ok((glued.with_labels(labels), LayerStructure::product_style(m)))
}

/// The projections of property (M): for each element, the least upper-layer
/// element above it and the greatest lower-layer element below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyMMaps {
    pub m_plus: Vec<usize>,
    pub m_minus: Vec<usize>,
}

/// Computes the (M) projections by scanning candidate sets, failing with the
/// offending element if some candidate set has several extremal members.
/// Candidate sets are never empty for a valid layer: the lift of a lower
/// element is above it, the drop of an upper element below it.
pub fn property_m_maps(
    p: &FinitePoset,
    layer: &LayerStructure,
) -> Result<PropertyMMaps, DoubleError> {
    validate_layer(p, layer)?;
    let lower = layer.lower();
    let upper = layer.upper();
    let m_plus = extremal_map(p, layer, &upper, '+')?;
    let m_minus = extremal_map(p, layer, &lower, '-')?;
    Ok(PropertyMMaps { m_plus, m_minus })
}

fn extremal_map(
    p: &FinitePoset,
    layer: &LayerStructure,
    pool: &[usize],
    dir: char,
) -> Result<Vec<usize>, DoubleError> {
    let mut map = Vec::with_capacity(p.len());
    for x in 0..p.len() {
        // Shortcut: an element of the pool's layer projects to itself.
        if (dir == '+') == (layer.sign[x] == 1) {
            map.push(x);
            continue;
        }
        let candidates: Vec<usize> = pool
            .iter()
            .copied()
            .filter(|&u| if dir == '+' { p.leq(x, u) } else { p.leq(u, x) })
            .collect();
        assert!(!candidates.is_empty(), "valid layers always provide a candidate");
        let extremals: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&u| {
                !candidates.iter().any(|&w| {
                    w != u && if dir == '+' { p.leq(w, u) } else { p.leq(u, w) }
                })
            })
            .collect();
        match extremals.as_slice() {
            [unique] => map.push(*unique),
            _ => return Err(DoubleError::PropertyMFailed { dir, element: x, extremals }),
        }
    }
    Ok(map)
}

/// The (M) projections of the double, by index formulas instead of scans:
/// in copy 0, the upward projection drops the original one and moves to copy
/// 1, while the downward projection fixes the element; in copy 1 the roles
/// swap, lifting the original downward projection back into copy 0.
pub fn double_property_m(
    p: &FinitePoset,
    layer: &LayerStructure,
) -> Result<PropertyMMaps, DoubleError> {
    let maps = property_m_maps(p, layer)?;
    let drop = layer.drop_map();
    let m = p.len();
    let m_plus = (0..2 * m)
        .map(|x| if x < m { drop[&maps.m_plus[x]] + m } else { x })
        .collect();
    let m_minus = (0..2 * m)
        .map(|x| if x < m { x } else { layer.lift[&maps.m_minus[x - m]] })
        .collect();
    Ok(PropertyMMaps { m_plus, m_minus })
}

/// Möbius table of the double in closed form, assuming property (M): within
/// a copy the original values survive; across copies the value is the
/// negated upper-layer Möbius value `-mu_plus(x0, lift[x1])` when `x0` is
/// upper and `x1` lower, and 0 for every other comparable cross pair.
pub fn mobius_double(
    p: &FinitePoset,
    layer: &LayerStructure,
) -> Result<MobiusTable, DoubleError> {
    property_m_maps(p, layer)?;
    let (doubled, _) = double(p, layer)?;
    let mu = incidence::mobius_by_inversion(p)?;
    let upper = layer.upper();
    let mu_plus = incidence::mobius_by_inversion(&p.induced(&upper))?;
    let upos: BTreeMap<usize, usize> =
        upper.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let m = p.len();
    let mut table = MobiusTable::new(2 * m);
    for ((x, y), v) in mu.iter() {
        table.insert(x, y, v);
        table.insert(x + m, y + m, v);
    }
    for x0 in 0..m {
        for x1 in 0..m {
            if !doubled.leq(x0, x1 + m) {
                continue;
            }
            let value = if layer.sign[x0] == 1 && layer.sign[x1] == -1 {
                let v = mu_plus.get(upos[&x0], upos[&layer.lift[&x1]]);
                v.checked_neg().ok_or(IncidenceError::Overflow { x: x0, y: x1 + m })?
            } else {
                0
            };
            table.insert(x0, x1 + m, value);
        }
    }
    Ok(table)
}
