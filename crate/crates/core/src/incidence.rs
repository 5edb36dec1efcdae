//! The incidence algebra of a finite poset over checked 64-bit integers.
//!
//! The zeta matrix is written in a linear-extension basis, where it is
//! unitriangular; its inverse, the Möbius function, is computed by two
//! deliberately independent routes that the test suites compare entry by
//! entry:
//!
//! 1. [`mobius_by_inversion`]: the nilpotent series
//!    `M = I - N + N^2 - N^3 + ...` with `N` the strict zeta matrix, using
//!    genuine matrix powers;
//! 2. [`mobius_by_recursion`]: the summation recursion
//!    `mu(x, y) = -sum of mu(x, z) over x <= z < y`.
//!
//! All arithmetic is checked; an overflowing combination reports the element
//! pair at which it happened instead of wrapping.

use crate::complex;
use crate::poset::FinitePoset;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IncidenceError {
    #[error("i64 overflow while combining values at element pair ({x}, {y})")]
    Overflow { x: usize, y: usize },
    #[error("elements {x} and {y} are not strictly ordered")]
    NotComparable { x: usize, y: usize },
    #[error("nerve of the open interval exceeded the face cap {cap}")]
    FaceLimitExceeded { cap: usize },
}

/// A square integer matrix indexed by a linear extension of a poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    /// `order[k]` is the element sitting at extension position `k`.
    pub order: Vec<usize>,
    /// `pos[x]` is the extension position of element `x`.
    pub pos: Vec<usize>,
    /// Row-major entries in extension coordinates.
    pub entries: Vec<i64>,
}

impl IncidenceMatrix {
    pub fn size(&self) -> usize {
        self.order.len()
    }

    /// Entry at extension positions `(i, j)`.
    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.size() + j]
    }

    /// Entry for the element pair `(x, y)`.
    pub fn for_elements(&self, x: usize, y: usize) -> i64 {
        self.at(self.pos[x], self.pos[y])
    }

    pub fn is_upper_triangular(&self) -> bool {
        let m = self.size();
        (0..m).all(|i| (0..i).all(|j| self.at(i, j) == 0))
    }
}

/// The zeta matrix: entry 1 exactly where `order[i] <= order[j]`.
/// Unitriangular because the basis is a linear extension.
pub fn zeta_matrix(p: &FinitePoset) -> IncidenceMatrix {
    let m = p.len();
    let order = p.linear_extension_indices();
    let mut pos = vec![0usize; m];
    for (k, &x) in order.iter().enumerate() {
        pos[x] = k;
    }
    let mut entries = vec![0i64; m * m];
    for i in 0..m {
        for j in 0..m {
            if p.leq(order[i], order[j]) {
                entries[i * m + j] = 1;
            }
        }
    }
    IncidenceMatrix { order, pos, entries }
}

/// Möbius values of a poset, stored for comparable pairs only; lookups on
/// incomparable pairs return 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusTable {
    len: usize,
    entries: BTreeMap<(usize, usize), i64>,
}

impl MobiusTable {
    pub fn new(len: usize) -> MobiusTable {
        MobiusTable { len, entries: BTreeMap::new() }
    }

    /// Size of the underlying poset.
    pub fn poset_len(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, x: usize, y: usize, value: i64) {
        self.entries.insert((x, y), value);
    }

    /// `mu(x, y)`, defaulting to 0 for pairs not stored (incomparable ones).
    pub fn get(&self, x: usize, y: usize) -> i64 {
        self.entries.get(&(x, y)).copied().unwrap_or(0)
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.entries.contains_key(&(x, y))
    }

    /// Stored pairs in ascending key order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    /// The set of values the function attains, plus 0.
    pub fn value_range(&self) -> std::collections::BTreeSet<i64> {
        let mut range: std::collections::BTreeSet<i64> =
            self.entries.values().copied().collect();
        range.insert(0);
        range
    }
}

fn add_checked(acc: i64, v: i64, x: usize, y: usize) -> Result<i64, IncidenceError> {
    acc.checked_add(v).ok_or(IncidenceError::Overflow { x, y })
}

fn mul_checked(a: i64, b: i64, x: usize, y: usize) -> Result<i64, IncidenceError> {
    a.checked_mul(b).ok_or(IncidenceError::Overflow { x, y })
}

/// Möbius function as the inverse zeta matrix, computed from the nilpotent
/// series `I - N + N^2 - ...` where `N = zeta - I`. The series is finite: `N`
/// is strictly upper triangular, so it dies after at most the longest chain
/// length. The result is re-checked against both summation recursions before
/// being returned.
pub fn mobius_by_inversion(p: &FinitePoset) -> Result<MobiusTable, IncidenceError> {
    let m = p.len();
    let zeta = zeta_matrix(p);
    let strict: Vec<i64> = (0..m * m)
        .map(|idx| if idx / m == idx % m { 0 } else { zeta.entries[idx] })
        .collect();

    let mut acc = vec![0i64; m * m]; // running sum, starts at I
    for i in 0..m {
        acc[i * m + i] = 1;
    }
    let mut power = strict.clone();
    let mut sign = -1i64;
    while power.iter().any(|&v| v != 0) {
        for i in 0..m {
            for j in i + 1..m {
                let term = mul_checked(sign, power[i * m + j], zeta.order[i], zeta.order[j])?;
                acc[i * m + j] =
                    add_checked(acc[i * m + j], term, zeta.order[i], zeta.order[j])?;
            }
        }
        power = matrix_mul_strict(&power, &strict, m, &zeta.order)?;
        sign = -sign;
    }

    let mut table = MobiusTable::new(m);
    for x in 0..m {
        for y in 0..m {
            if p.leq(x, y) {
                table.insert(x, y, acc[zeta.pos[x] * m + zeta.pos[y]]);
            }
        }
    }
    verify_recursions(p, &table)?;
    Ok(table)
}

// Product of strictly upper triangular matrices, checked.
fn matrix_mul_strict(
    a: &[i64],
    b: &[i64],
    m: usize,
    order: &[usize],
) -> Result<Vec<i64>, IncidenceError> {
    let mut out = vec![0i64; m * m];
    for i in 0..m {
        for k in i + 1..m {
            let aik = a[i * m + k];
            if aik == 0 {
                continue;
            }
            for j in k + 1..m {
                let bkj = b[k * m + j];
                if bkj == 0 {
                    continue;
                }
                let term = mul_checked(aik, bkj, order[i], order[j])?;
                out[i * m + j] = add_checked(out[i * m + j], term, order[i], order[j])?;
            }
        }
    }
    Ok(out)
}

// Both recursions: summing mu(x, z) over x <= z <= y (and dually mu(z, y))
// must give the delta function of the interval.
fn verify_recursions(p: &FinitePoset, table: &MobiusTable) -> Result<(), IncidenceError> {
    let m = p.len();
    for x in 0..m {
        for y in 0..m {
            if !p.leq(x, y) {
                continue;
            }
            let mut left = 0i64;
            let mut right = 0i64;
            for z in 0..m {
                if p.leq(x, z) && p.leq(z, y) {
                    left = add_checked(left, table.get(x, z), x, y)?;
                    right = add_checked(right, table.get(z, y), x, y)?;
                }
            }
            let expected = i64::from(x == y);
            assert_eq!(left, expected, "left Möbius recursion broken at ({x}, {y})");
            assert_eq!(right, expected, "right Möbius recursion broken at ({x}, {y})");
        }
    }
    Ok(())
}

/// Möbius function by the summation recursion `mu(x, x) = 1`,
/// `mu(x, y) = -sum of mu(x, z) over x <= z < y`, filled along a linear
/// extension.
pub fn mobius_by_recursion(p: &FinitePoset) -> Result<MobiusTable, IncidenceError> {
    let m = p.len();
    let order = p.linear_extension_indices();
    let mut table = MobiusTable::new(m);
    for i in 0..m {
        let x = order[i];
        table.insert(x, x, 1);
        for j in i + 1..m {
            let y = order[j];
            if !p.leq(x, y) {
                continue;
            }
            let mut sum = 0i64;
            for &z in &order[i..j] {
                if p.leq(x, z) && p.leq(z, y) {
                    sum = add_checked(sum, table.get(x, z), x, y)?;
                }
            }
            let value = sum.checked_neg().ok_or(IncidenceError::Overflow { x, y })?;
            table.insert(x, y, value);
        }
    }
    Ok(table)
}

/// Möbius inversion: recovers `f` from its upper sums `s`, via
/// `f(x) = sum of mu(x, y) * s(y) over y >= x`.
pub fn mobius_invert(p: &FinitePoset, s: &[i64]) -> Result<Vec<i64>, IncidenceError> {
    assert_eq!(s.len(), p.len(), "function length must match poset size");
    let mu = mobius_by_recursion(p)?;
    let mut out = vec![0i64; p.len()];
    for x in 0..p.len() {
        let mut acc = 0i64;
        for y in 0..p.len() {
            if p.leq(x, y) {
                let term = mul_checked(mu.get(x, y), s[y], x, y)?;
                acc = add_checked(acc, term, x, y)?;
            }
        }
        out[x] = acc;
    }
    Ok(out)
}

/// Upper sums: `(integrate f)(x) = sum of f(y) over y >= x`. The inverse of
/// [`mobius_invert`].
pub fn integrate(p: &FinitePoset, f: &[i64]) -> Result<Vec<i64>, IncidenceError> {
    assert_eq!(f.len(), p.len(), "function length must match poset size");
    let mut out = vec![0i64; p.len()];
    for x in 0..p.len() {
        let mut acc = 0i64;
        for y in 0..p.len() {
            if p.leq(x, y) {
                acc = add_checked(acc, f[y], x, y)?;
            }
        }
        out[x] = acc;
    }
    Ok(out)
}

/// Outcome of the Euler-characteristic identity `1 + mu(x, y) = chi` of the
/// open interval's nerve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HallCheck {
    pub mu: i64,
    pub chi: i64,
    pub ok: bool,
}

/// Compares `mu(x, y)` with the Euler characteristic of the nerve of the
/// open interval `(x, y)`; the empty complex has characteristic 0.
pub fn hall_check(p: &FinitePoset, x: usize, y: usize) -> Result<HallCheck, IncidenceError> {
    if !p.lt(x, y) {
        return Err(IncidenceError::NotComparable { x, y });
    }
    let (closed, elems) = p.interval(x, y, false).expect("x < y was just checked");
    let sub_x = elems.iter().position(|&e| e == x).unwrap();
    let sub_y = elems.iter().position(|&e| e == y).unwrap();
    let mu = mobius_by_recursion(&closed)?.get(sub_x, sub_y);

    let (open, _) = p.interval(x, y, true).expect("x < y was just checked");
    let nerve = complex::nerve(&open, complex::DEFAULT_FACE_CAP).map_err(|e| match e {
        complex::ComplexError::FaceLimitExceeded { cap } => {
            IncidenceError::FaceLimitExceeded { cap }
        }
        complex::ComplexError::Overflow { .. } => unreachable!("nerve does not count"),
    })?;
    let chi = complex::euler_characteristic(&nerve);
    Ok(HallCheck { mu, chi, ok: 1 + mu == chi })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    fn chain(n: usize) -> FinitePoset {
        FinitePoset::from_leq(labels(n), |a, b| a <= b).unwrap()
    }

    fn diamond() -> FinitePoset {
        FinitePoset::from_cover_relations(labels(4), &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    /// Stacked antichains: bottom, `layers` antichains of size `width`, top,
    /// each level entirely below the next. Möbius values grow like
    /// (width - 1)^layers, which makes it an overflow rig.
    fn stacked_antichains(width: usize, layers: usize) -> FinitePoset {
        let m = 2 + width * layers;
        let level = move |v: usize| -> usize {
            if v == 0 {
                0
            } else if v == m - 1 {
                layers + 1
            } else {
                1 + (v - 1) / width
            }
        };
        FinitePoset::from_leq(labels(m), |a, b| a == b || level(a) < level(b)).unwrap()
    }

    #[test]
    fn zeta_is_unitriangular() {
        for p in [chain(5), diamond()] {
            let z = zeta_matrix(&p);
            assert!(z.is_upper_triangular());
            for i in 0..z.size() {
                assert_eq!(z.at(i, i), 1);
            }
        }
    }

    #[test]
    fn chain_mobius_is_minus_one_on_covers() {
        let p = chain(5);
        let mu = mobius_by_inversion(&p).unwrap();
        for x in 0..5 {
            for y in 0..5 {
                let expected = match y as i64 - x as i64 {
                    0 => 1,
                    1 => -1,
                    d if d > 1 => 0,
                    _ => 0,
                };
                assert_eq!(mu.get(x, y), expected, "pair ({x},{y})");
                if y < x {
                    assert!(!mu.contains(x, y));
                }
            }
        }
    }

    #[test]
    fn diamond_mobius_top_value() {
        let mu = mobius_by_inversion(&diamond()).unwrap();
        assert_eq!(mu.get(0, 3), 1);
        assert_eq!(mu.get(0, 1), -1);
        assert_eq!(mu.get(1, 2), 0);
        assert!(!mu.contains(1, 2));
    }

    #[test]
    fn two_routes_agree_and_invert_zeta() {
        for p in [chain(6), diamond(), stacked_antichains(3, 3)] {
            let a = mobius_by_inversion(&p).unwrap();
            let b = mobius_by_recursion(&p).unwrap();
            assert_eq!(a, b);
            // zeta * mobius = identity in extension coordinates.
            let z = zeta_matrix(&p);
            let m = p.len();
            for i in 0..m {
                for j in 0..m {
                    let prod: i64 = (0..m)
                        .map(|k| z.at(i, k) * a.get(z.order[k], z.order[j]))
                        .sum();
                    assert_eq!(prod, i64::from(i == j), "position ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn mobius_of_dual_transposes() {
        for p in [chain(4), diamond(), stacked_antichains(2, 2)] {
            let mu = mobius_by_recursion(&p).unwrap();
            let mu_dual = mobius_by_recursion(&p.dual()).unwrap();
            for x in 0..p.len() {
                for y in 0..p.len() {
                    assert_eq!(mu_dual.get(x, y), mu.get(y, x));
                }
            }
        }
    }

    #[test]
    fn inversion_round_trips_through_integration() {
        let p = diamond();
        let f = vec![3, -1, 4, 1];
        let s = integrate(&p, &f).unwrap();
        assert_eq!(s, vec![3 - 1 + 4 + 1, -1 + 1, 4 + 1, 1]);
        assert_eq!(mobius_invert(&p, &s).unwrap(), f);
        // And the other way round.
        let g = mobius_invert(&p, &f).unwrap();
        assert_eq!(integrate(&p, &g).unwrap(), f);
    }

    #[test]
    fn incomparable_lookups_default_to_zero() {
        let mu = mobius_by_recursion(&diamond()).unwrap();
        assert_eq!(mu.get(2, 1), 0);
        assert_eq!(mu.value_range().into_iter().collect::<Vec<_>>(), vec![-1, 0, 1]);
    }

    #[test]
    fn overflow_is_reported_not_wrapped() {
        // (width-1)^layers = 4^40 far exceeds i64.
        let p = stacked_antichains(5, 40);
        assert!(matches!(
            mobius_by_inversion(&p).unwrap_err(),
            IncidenceError::Overflow { .. }
        ));
        assert!(matches!(
            mobius_by_recursion(&p).unwrap_err(),
            IncidenceError::Overflow { .. }
        ));
    }

    #[test]
    fn hall_check_on_small_intervals() {
        // Cover pair: open interval empty, chi = 0 = 1 + (-1).
        let p = chain(3);
        let h = hall_check(&p, 0, 1).unwrap();
        assert_eq!((h.mu, h.chi, h.ok), (-1, 0, true));
        // Diamond: open interval (0, 3) is a 2-point antichain, chi = 2.
        let h = hall_check(&diamond(), 0, 3).unwrap();
        assert_eq!((h.mu, h.chi, h.ok), (1, 2, true));
        // Chain of length 2: open interval is a point, chi = 1, mu = 0.
        let h = hall_check(&p, 0, 2).unwrap();
        assert_eq!((h.mu, h.chi, h.ok), (0, 1, true));
        assert_eq!(
            hall_check(&p, 1, 1).unwrap_err(),
            IncidenceError::NotComparable { x: 1, y: 1 }
        );
    }
}
