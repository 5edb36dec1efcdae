//! The lattice of shifted subsets of `{1, ..., n}`.
//!
//! Elements are subsets `S` of `{1, ..., n}`, encoded as bitmasks (bit
//! `i - 1` set exactly when `i` is in `S`). The order compares suffix
//! counts: `S <= T` when every tail `[k, n]` holds at least as many
//! elements of `T` as of `S`. Equivalently, `S` is reachable from `T` by
//! repeatedly sliding a mobile bead one position to the left, where a bead
//! at position `t` is mobile when `t = 1` (it slides off the rod) or
//! `t - 1` is unoccupied.
//!
//! The lattice is graded by the element sum, selfdual under complement, and
//! modular. Its Möbius function is supported on elementary pairs, the pairs
//! obtained by sliding several distinct mobile beads one step each; on such
//! a pair it equals `(-1)^(number of slid beads)`. Closed intervals over
//! elementary pairs are boolean, and both facts have independent
//! recursive forms used to cross-check the closed ones.
//!
//! Set-valued operations work on bitmasks directly up to `n = 63`; building
//! the full poset is capped at `n = 11` (2048 elements).

use crate::layered::LayerStructure;
use crate::poset::FinitePoset;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Largest `n` for which `build_ln` materializes the full poset.
pub const LN_CAP: u32 = 11;

// Largest elementary-pair weight for which boolean interval maps are built.
const INTERVAL_WEIGHT_CAP: u32 = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LnError {
    #[error("ground set size {n} exceeds the bitmask limit of 63")]
    TooLarge { n: u32 },
    #[error("bitmask {bits:#x} has elements outside {{1, ..., {n}}}")]
    BadBits { bits: u64, n: u32 },
    #[error("poset for n = {n} exceeds the construction cap n = {cap}")]
    CapExceeded { n: u32, cap: u32 },
    #[error("the pair is not elementary")]
    NotElementary,
    #[error("interval of weight {weight} exceeds the cap of {cap}")]
    IntervalTooLarge { weight: u32, cap: u32 },
    #[error("cannot parse subset: {0}")]
    Parse(String),
}

/// A subset of `{1, ..., n}` as an element of the slide lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LnElement {
    n: u32,
    bits: u64,
}

fn mask(n: u32) -> u64 {
    if n == 0 {
        0
    } else {
        u64::MAX >> (64 - n)
    }
}

fn msb(bits: u64) -> u32 {
    assert!(bits != 0);
    63 - bits.leading_zeros()
}

// Suffix-count comparison on raw masks: true when every tail of t is at
// least as full as the same tail of s.
fn leq_bits(n: u32, s: u64, t: u64) -> bool {
    let (mut cs, mut ct) = (0u32, 0u32);
    for k in (0..n).rev() {
        cs += (s >> k & 1) as u32;
        ct += (t >> k & 1) as u32;
        if cs > ct {
            return false;
        }
    }
    true
}

impl LnElement {
    pub fn new(n: u32, bits: u64) -> Result<LnElement, LnError> {
        if n > 63 {
            return Err(LnError::TooLarge { n });
        }
        if bits & !mask(n) != 0 {
            return Err(LnError::BadBits { bits, n });
        }
        Ok(LnElement { n, bits })
    }

    pub fn empty(n: u32) -> LnElement {
        LnElement::new(n, 0).expect("the empty set always fits")
    }

    pub fn full(n: u32) -> LnElement {
        LnElement::new(n, mask(n)).expect("n was just range-checked")
    }

    /// Parses "1,3", "{1,3}", or "{}" into a subset of `{1, ..., n}`.
    /// Elements must be strictly ascending.
    pub fn parse(n: u32, text: &str) -> Result<LnElement, LnError> {
        if n > 63 {
            return Err(LnError::TooLarge { n });
        }
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .unwrap_or_else(|| text.trim())
            .trim();
        let mut bits = 0u64;
        let mut last = 0u32;
        if !inner.is_empty() {
            for part in inner.split(',') {
                let v: u32 = part
                    .trim()
                    .parse()
                    .map_err(|_| LnError::Parse(format!("bad element {:?}", part.trim())))?;
                if v < 1 || v > n {
                    return Err(LnError::Parse(format!("element {v} outside 1..={n}")));
                }
                if v <= last {
                    return Err(LnError::Parse(format!(
                        "elements must be strictly ascending at {v}"
                    )));
                }
                last = v;
                bits |= 1 << (v - 1);
            }
        }
        Ok(LnElement { n, bits })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Membership of `i` (1-based).
    pub fn contains(&self, i: u32) -> bool {
        i >= 1 && i <= self.n && self.bits >> (i - 1) & 1 == 1
    }

    /// The elements in ascending order, 1-based.
    pub fn elements(&self) -> Vec<u32> {
        (1..=self.n).filter(|&i| self.contains(i)).collect()
    }

    /// The rank: sum of all elements.
    pub fn rank(&self) -> u64 {
        self.elements().iter().map(|&i| u64::from(i)).sum()
    }

    pub fn leq(&self, other: &LnElement) -> bool {
        assert_eq!(self.n, other.n, "elements live in different lattices");
        leq_bits(self.n, self.bits, other.bits)
    }

    pub fn lt(&self, other: &LnElement) -> bool {
        self.bits != other.bits && self.leq(other)
    }

    /// Tail surplus of `other` over `self` at position `k`:
    /// `#(other ∩ [k, n]) - #(self ∩ [k, n])`.
    pub fn delta(&self, other: &LnElement, k: u32) -> i64 {
        assert_eq!(self.n, other.n, "elements live in different lattices");
        assert!(k >= 1 && k <= self.n, "position out of range");
        let tail = !0u64 << (k - 1);
        i64::from((other.bits & tail & mask(self.n)).count_ones())
            - i64::from((self.bits & tail & mask(self.n)).count_ones())
    }

    /// The complement, an order-reversing involution.
    pub fn sigma(&self) -> LnElement {
        LnElement { n: self.n, bits: !self.bits & mask(self.n) }
    }

    /// Mobile positions: `t` with `t = 1` or `t - 1` unoccupied.
    pub fn mobile(&self) -> Vec<u32> {
        self.elements()
            .into_iter()
            .filter(|&t| t == 1 || !self.contains(t - 1))
            .collect()
    }

    /// All single left-slides, ascending by resulting bitmask. These are
    /// exactly the elements covered by `self`.
    pub fn slides(&self) -> Vec<LnElement> {
        let mut out: Vec<LnElement> = self
            .mobile()
            .into_iter()
            .map(|t| {
                let bits = if t == 1 {
                    self.bits & !1
                } else {
                    self.bits & !(1 << (t - 1)) | 1 << (t - 2)
                };
                LnElement { n: self.n, bits }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// The least upper-layer element above `self`: trade the greatest
    /// element for `n` (or keep `self` if `n` is already present).
    pub fn m_plus(&self) -> LnElement {
        assert!(self.n >= 1, "there is no layer on the empty ground set");
        let top = 1 << (self.n - 1);
        let bits = if self.bits & top != 0 {
            self.bits
        } else if self.bits == 0 {
            top
        } else {
            self.bits & !(1 << msb(self.bits)) | top
        };
        LnElement { n: self.n, bits }
    }

    /// The greatest lower-layer element below `self`, by selfduality.
    pub fn m_minus(&self) -> LnElement {
        self.sigma().m_plus().sigma()
    }

    /// Join by the layer recursion on the top coordinate.
    pub fn join(&self, other: &LnElement) -> LnElement {
        assert_eq!(self.n, other.n, "elements live in different lattices");
        LnElement { n: self.n, bits: join_rec(self.n, self.bits, other.bits) }
    }

    /// Meet by the layer recursion on the top coordinate.
    pub fn meet(&self, other: &LnElement) -> LnElement {
        assert_eq!(self.n, other.n, "elements live in different lattices");
        LnElement { n: self.n, bits: meet_rec(self.n, self.bits, other.bits) }
    }

    /// Join by the maxima recursion: peel the largest element of each side,
    /// join the rests, and put back the larger of the two maxima.
    pub fn join_extremes(&self, other: &LnElement) -> LnElement {
        assert_eq!(self.n, other.n, "elements live in different lattices");
        LnElement { n: self.n, bits: join_ext(self.bits, other.bits) }
    }

    /// Meet by the maxima recursion, putting back the smaller maximum.
    pub fn meet_extremes(&self, other: &LnElement) -> LnElement {
        assert_eq!(self.n, other.n, "elements live in different lattices");
        LnElement { n: self.n, bits: meet_ext(self.bits, other.bits) }
    }

    /// Whether the slide-set decomposition of `(self, other)` exists: all
    /// tail surpluses are 0 or 1 and no two adjacent tails both show 1.
    pub fn is_elementary_pair(&self, other: &LnElement) -> bool {
        self.slid_positions(other).is_some()
    }

    // Positions of other whose beads slide one step left to give self, if
    // the pair is elementary.
    fn slid_positions(&self, other: &LnElement) -> Option<u64> {
        assert_eq!(self.n, other.n, "elements live in different lattices");
        let (mut cs, mut ct) = (0u32, 0u32);
        let mut slid = 0u64;
        let mut prev_one = false;
        for k in (0..self.n).rev() {
            cs += (self.bits >> k & 1) as u32;
            ct += (other.bits >> k & 1) as u32;
            match ct.checked_sub(cs) {
                Some(0) => prev_one = false,
                Some(1) if !prev_one => {
                    prev_one = true;
                    slid |= 1 << k;
                }
                _ => return None,
            }
        }
        Some(slid)
    }

    /// Möbius value in closed form: a sign on elementary pairs, 0 anywhere
    /// else.
    pub fn mobius(&self, other: &LnElement) -> i64 {
        match self.slid_positions(other) {
            Some(slid) => {
                if slid.count_ones() % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            None => 0,
        }
    }

    /// Möbius value by the doubling recursion on the top coordinate.
    pub fn mobius_recursive(&self, other: &LnElement) -> i64 {
        assert_eq!(self.n, other.n, "elements live in different lattices");
        mu_rec(self.n, self.bits, other.bits)
    }

    /// Splits `(self, other)` into fixed beads and slid beads, failing on
    /// non-elementary pairs.
    pub fn elementary_decomposition(
        &self,
        other: &LnElement,
    ) -> Result<ElementaryDecomposition, LnError> {
        let slid = self.slid_positions(other).ok_or(LnError::NotElementary)?;
        let dec = ElementaryDecomposition {
            n: self.n,
            slid: (0..self.n).filter(|k| slid >> k & 1 == 1).map(|k| k + 1).collect(),
            fixed: other.bits & !slid,
        };
        // The profile determines both sets; a mismatch would be a bug.
        assert_eq!(dec.source(), *self);
        assert_eq!(dec.target(), *other);
        Ok(dec)
    }

    /// Join reducibility: a gap between consecutive elements yields two
    /// strictly smaller sets joining to `self`; otherwise `self` is an
    /// interval of consecutive integers and covers at most one element.
    pub fn join_reducibility(&self) -> JoinReducibility {
        let elems = self.elements();
        for i in 1..elems.len() {
            if elems[i] - elems[i - 1] > 1 {
                let s0 = LnElement {
                    n: self.n,
                    bits: self.bits & !(1u64 << (elems[i] - 1)) | 1 << (elems[i] - 2),
                };
                let extra = elems.len() as u32 - 1 - i as u32;
                let run = mask(elems[i] + extra) & !mask(elems[i] - 1);
                let s1 = LnElement { n: self.n, bits: run };
                return JoinReducibility::Reducible { s0, s1 };
            }
        }
        let covered = match elems.first() {
            None => None,
            Some(1) => Some(LnElement { n: self.n, bits: self.bits & !1 }),
            Some(&j) => Some(LnElement {
                n: self.n,
                bits: self.bits & !(1u64 << (j - 1)) | 1 << (j - 2),
            }),
        };
        JoinReducibility::Irreducible { covered }
    }
}

impl fmt::Display for LnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

fn join_rec(n: u32, s: u64, t: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let top = 1u64 << (n - 1);
    match (s & top != 0, t & top != 0) {
        (false, false) => join_rec(n - 1, s, t),
        (true, true) => join_rec(n - 1, s & !top, t & !top) | top,
        (false, true) => {
            // Project s through its least upper-layer element: drop its
            // maximum, then join within the layer below the top.
            let s_proj = if s == 0 { 0 } else { s & !(1u64 << msb(s)) };
            join_rec(n - 1, s_proj, t & !top) | top
        }
        (true, false) => join_rec(n, t, s),
    }
}

fn meet_rec(n: u32, s: u64, t: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let top = 1u64 << (n - 1);
    match (s & top != 0, t & top != 0) {
        (false, false) => meet_rec(n - 1, s, t),
        (true, true) => meet_rec(n - 1, s & !top, t & !top) | top,
        (false, true) => {
            // Project t through its greatest lower-layer element.
            let t_proj = LnElement { n, bits: t }.m_minus().bits;
            meet_rec(n - 1, s, t_proj)
        }
        (true, false) => meet_rec(n, t, s),
    }
}

fn join_ext(s: u64, t: u64) -> u64 {
    if s == 0 {
        return t;
    }
    if t == 0 {
        return s;
    }
    let (a, b) = (msb(s), msb(t));
    join_ext(s & !(1u64 << a), t & !(1u64 << b)) | 1u64 << a.max(b)
}

fn meet_ext(s: u64, t: u64) -> u64 {
    if s == 0 || t == 0 {
        return 0;
    }
    let (a, b) = (msb(s), msb(t));
    meet_ext(s & !(1u64 << a), t & !(1u64 << b)) | 1u64 << a.min(b)
}

fn mu_rec(n: u32, s: u64, t: u64) -> i64 {
    if s == t {
        return 1;
    }
    if n <= 1 {
        // The only strict pair of the 2-element lattice.
        return if (s, t) == (0, 1) { -1 } else { 0 };
    }
    let top = 1u64 << (n - 1);
    let sub = 1u64 << (n - 2);
    match (s & top != 0, t & top != 0) {
        (a, b) if a == b => mu_rec(n - 1, s & !top, t & !top),
        (false, true) if s & sub != 0 && t & sub == 0 => -mu_rec(n - 2, s & !sub, t & !top),
        _ => 0,
    }
}

/// An elementary pair split into its unchanged beads and the beads slid one
/// step left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryDecomposition {
    n: u32,
    slid: Vec<u32>,
    fixed: u64,
}

impl ElementaryDecomposition {
    /// How many beads slid: the weight of the pair.
    pub fn weight(&self) -> usize {
        self.slid.len()
    }

    /// Positions (in the target) of the slid beads, ascending.
    pub fn slid(&self) -> &[u32] {
        &self.slid
    }

    /// Where the slid beads land, ascending; a bead at position 1 slides
    /// off the rod and lands nowhere.
    pub fn landings(&self) -> Vec<u32> {
        self.slid.iter().filter(|&&p| p > 1).map(|&p| p - 1).collect()
    }

    /// Whether the bead at position 1 slides off the rod.
    pub fn drops_first(&self) -> bool {
        self.slid.first() == Some(&1)
    }

    /// The smaller set: fixed beads plus all landings.
    pub fn source(&self) -> LnElement {
        let mut bits = self.fixed;
        for p in self.landings() {
            bits |= 1 << (p - 1);
        }
        LnElement { n: self.n, bits }
    }

    /// The larger set: fixed beads plus the slid beads at their original
    /// positions.
    pub fn target(&self) -> LnElement {
        let mut bits = self.fixed;
        for &p in &self.slid {
            bits |= 1 << (p - 1);
        }
        LnElement { n: self.n, bits }
    }
}

/// Verdict of `join_reducibility`, with witnesses either way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JoinReducibility {
    /// Two strictly smaller elements whose join is the element itself.
    Reducible { s0: LnElement, s1: LnElement },
    /// The element covers at most this one element.
    Irreducible { covered: Option<LnElement> },
}

/// Adds `n + 1` to the set when `epsilon` is positive: the isomorphism from
/// the doubled lattice onto the next one. On bitmask indices with copy 1
/// offset by `2^n` this is the identity.
pub fn psi(s: &LnElement, epsilon: i8) -> LnElement {
    assert!(epsilon == -1 || epsilon == 1, "epsilon must be a sign");
    assert!(s.n < 63, "no room for another coordinate");
    let bits = if epsilon == 1 { s.bits | 1 << s.n } else { s.bits };
    LnElement { n: s.n + 1, bits }
}

/// Inverse of `psi`: strips the top coordinate and reports its sign.
pub fn phi(s: &LnElement) -> (LnElement, i8) {
    assert!(s.n >= 1, "nothing to strip");
    let top = 1u64 << (s.n - 1);
    let epsilon = if s.bits & top != 0 { 1 } else { -1 };
    (LnElement { n: s.n - 1, bits: s.bits & !top }, epsilon)
}

/// Every element of the closed interval `[s, t]`, ascending by bitmask:
/// breadth-first closure of left-slides from `t`, filtered by `>= s`.
pub fn interval_elements(s: &LnElement, t: &LnElement) -> Vec<LnElement> {
    assert_eq!(s.n, t.n, "elements live in different lattices");
    let mut seen = BTreeSet::new();
    let mut queue = Vec::new();
    if s.leq(t) {
        seen.insert(t.bits);
        queue.push(*t);
    }
    while let Some(x) = queue.pop() {
        for y in x.slides() {
            if s.leq(&y) && seen.insert(y.bits) {
                queue.push(y);
            }
        }
    }
    seen.into_iter().map(|bits| LnElement { n: s.n, bits }).collect()
}

/// The isomorphism from the closed interval over an elementary pair onto
/// the boolean lattice of its weight: each interval element paired with its
/// boolean coordinates. The result is verified before being returned:
/// right cardinality against an independent interval enumeration, and
/// order-equivalence with bitmask inclusion on all pairs.
pub fn boole_interval_iso(
    s: &LnElement,
    t: &LnElement,
) -> Result<Vec<(LnElement, u64)>, LnError> {
    let dec = s.elementary_decomposition(t)?;
    let weight = dec.weight() as u32;
    if weight > INTERVAL_WEIGHT_CAP {
        return Err(LnError::IntervalTooLarge { weight, cap: INTERVAL_WEIGHT_CAP });
    }
    let raw = xi(s.n, s.bits, t.bits);
    assert_eq!(raw.len(), 1usize << weight, "boolean interval has wrong size");
    let list: Vec<(LnElement, u64)> =
        raw.into_iter().map(|(bits, coord)| (LnElement { n: s.n, bits }, coord)).collect();
    let members: BTreeSet<u64> = list.iter().map(|(e, _)| e.bits).collect();
    assert_eq!(members.len(), list.len(), "interval elements repeat");
    let enumerated: Vec<u64> = interval_elements(s, t).iter().map(|e| e.bits).collect();
    assert_eq!(
        members.iter().copied().collect::<Vec<u64>>(),
        enumerated,
        "boolean coordinates miss part of the interval"
    );
    for (a, ca) in &list {
        for (b, cb) in &list {
            assert_eq!(a.leq(b), ca & !cb == 0, "coordinates distort the order");
        }
    }
    Ok(list)
}

// Recursive construction of the boolean coordinates on [i, j], peeling the
// top coordinate. A slid top bead contributes a fresh boolean coordinate:
// the branch keeping the bead low stays at the old coordinates, the branch
// keeping it high sets the new one.
fn xi(n: u32, i: u64, j: u64) -> Vec<(u64, u64)> {
    if i == j {
        return vec![(i, 0)];
    }
    if n == 1 {
        // i = {} and j = {1}: the bead slides off the rod.
        return vec![(0, 0), (1, 1)];
    }
    let top = 1u64 << (n - 1);
    if j & top == 0 {
        xi(n - 1, i, j)
    } else if i & top != 0 {
        xi(n - 1, i & !top, j & !top).into_iter().map(|(k, b)| (k | top, b)).collect()
    } else {
        // An elementary pair with n in j but not i forces n - 1 into i and
        // out of j; every interval member holds exactly one of the two.
        let sub = 1u64 << (n - 2);
        assert!(i & sub != 0 && j & sub == 0, "pair is not elementary");
        let inner = xi(n - 2, i & !sub, j & !top);
        let coord = 1u64 << inner.len().trailing_zeros();
        let mut out = Vec::with_capacity(inner.len() * 2);
        for (k, b) in inner {
            out.push((k | sub, b));
            out.push((k | top, b | coord));
        }
        out
    }
}

/// Materializes the lattice for `n` up to 11, indexed by bitmask, with
/// braced set labels.
pub fn build_ln(n: u32) -> Result<FinitePoset, LnError> {
    if n > LN_CAP {
        return Err(LnError::CapExceeded { n, cap: LN_CAP });
    }
    let size = 1usize << n;
    let labels: Vec<String> =
        (0..size).map(|bits| LnElement { n, bits: bits as u64 }.to_string()).collect();
    Ok(FinitePoset::from_leq(labels, |x, y| leq_bits(n, x as u64, y as u64))
        .expect("the suffix-count relation is a partial order"))
}

/// The layer structure on the built lattice: sign by membership of `n`,
/// lift by inserting `n`. On bitmask indices this is exactly the
/// product-style layer with lower half `0..2^(n-1)`.
pub fn natural_layer(n: u32) -> LayerStructure {
    assert!((1..=LN_CAP).contains(&n), "layer only available on buildable lattices");
    LayerStructure::product_style(1 << (n - 1))
}

/// Subsets of `{1, ..., d}` ordered by inclusion, indexed by bitmask.
pub fn boolean_poset(d: u32) -> FinitePoset {
    assert!(d <= LN_CAP, "boolean poset capped at the same size as build_ln");
    let size = 1usize << d;
    let labels: Vec<String> =
        (0..size).map(|bits| LnElement { n: d, bits: bits as u64 }.to_string()).collect();
    FinitePoset::from_leq(labels, |x, y| x & !y == 0)
        .expect("inclusion is a partial order")
}
