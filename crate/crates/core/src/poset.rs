//! Dense finite posets.
//!
//! Elements are identified by their index `0..len`; labels are display-only
//! and never affect order logic. The full `<=` relation is stored as
//! bit-packed rows (one row per element, one bit per element), which keeps
//! cover tests, interval extraction, and closure operations word-parallel.
//! Sizes are capped at [`crate::MAX_POSET_SIZE`] so every axiom can be
//! checked exhaustively at construction time.

use crate::bits;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("poset size {size} exceeds the dense-representation cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("element index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("cover digraph has a directed cycle through {cycle:?}")]
    CycleDetected { cycle: Vec<usize> },
    #[error("relation is not reflexive at {x}")]
    NotReflexive { x: usize },
    #[error("relation is not antisymmetric on ({x}, {y})")]
    NotAntisymmetric { x: usize, y: usize },
    #[error("relation is not transitive on ({x}, {y}, {z})")]
    NotTransitive { x: usize, y: usize, z: usize },
    #[error("elements {x} and {y} are not related by <=")]
    NotComparable { x: usize, y: usize },
}

/// Integer ranks, one per element, with `x` covered by `y` implying
/// `rank(y) = rank(x) + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankFunction {
    pub values: Vec<i64>,
}

impl RankFunction {
    pub fn rank(&self, x: usize) -> i64 {
        self.values[x]
    }
}

/// Why a poset admits no rank function.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum NotGraded {
    /// Two maximal chains from `x` to `y` have different lengths.
    #[error("maximal chains from {x} to {y} have lengths {shorter} and {longer}")]
    UnequalChains { x: usize, y: usize, shorter: usize, longer: usize },
    /// Every comparable pair has equal-length maximal chains, but the cover
    /// graph contains a cycle whose rank increments do not cancel, so no
    /// global rank assignment exists.
    #[error("cover-graph cycle {cycle:?} has unbalanced rank increments")]
    InconsistentCycle { cycle: Vec<usize> },
}

/// A finite poset on elements `0..len` with dense bit-packed order rows.
#[derive(Clone, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    len: usize,
    words: usize,
    // up[x] has bit y set iff x <= y; down is the transpose (down[y] bit x iff x <= y).
    up: Vec<u64>,
    down: Vec<u64>,
}

impl std::fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FinitePoset")
            .field("len", &self.len)
            .field("labels", &self.labels)
            .field("covers", &self.cover_pairs())
            .finish()
    }
}

impl FinitePoset {
    /// Builds rows from a comparison oracle without validating axioms.
    /// Callers must guarantee `leq` is a partial order.
    fn build_unchecked<F: FnMut(usize, usize) -> bool>(
        labels: Vec<String>,
        mut leq: F,
    ) -> FinitePoset {
        let len = labels.len();
        let words = bits::words_for(len.max(1));
        let mut up = vec![0u64; len * words];
        let mut down = vec![0u64; len * words];
        for x in 0..len {
            for y in 0..len {
                if leq(x, y) {
                    bits::set(&mut up[x * words..(x + 1) * words], y);
                    bits::set(&mut down[y * words..(y + 1) * words], x);
                }
            }
        }
        FinitePoset { labels, len, words, up, down }
    }

    /// Builds a poset from a comparison oracle, checking reflexivity,
    /// antisymmetry, and transitivity exhaustively.
    pub fn from_leq<F: FnMut(usize, usize) -> bool>(
        labels: Vec<String>,
        leq: F,
    ) -> Result<FinitePoset, PosetError> {
        let len = labels.len();
        if len > crate::MAX_POSET_SIZE {
            return Err(PosetError::TooLarge { size: len, cap: crate::MAX_POSET_SIZE });
        }
        let p = Self::build_unchecked(labels, leq);
        p.validate_axioms()?;
        Ok(p)
    }

    fn validate_axioms(&self) -> Result<(), PosetError> {
        for x in 0..self.len {
            if !self.leq(x, x) {
                return Err(PosetError::NotReflexive { x });
            }
        }
        for x in 0..self.len {
            for y in bits::ones(self.up_row(x)) {
                if y != x && self.leq(y, x) {
                    return Err(PosetError::NotAntisymmetric { x, y });
                }
                // x <= y forces up(y) to be a subset of up(x).
                if !bits::is_subset(self.up_row(y), self.up_row(x)) {
                    let z = bits::ones(self.up_row(y))
                        .find(|&z| !self.leq(x, z))
                        .expect("subset check failed, so a witness bit exists");
                    return Err(PosetError::NotTransitive { x, y, z });
                }
            }
        }
        Ok(())
    }

    /// Builds a poset as the reflexive-transitive closure of a digraph given
    /// by edges `(lower, upper)`. The edges may be any acyclic relation, not
    /// necessarily covers; a directed cycle is reported with a witness.
    pub fn from_cover_relations(
        labels: Vec<String>,
        covers: &[(usize, usize)],
    ) -> Result<FinitePoset, PosetError> {
        let len = labels.len();
        if len > crate::MAX_POSET_SIZE {
            return Err(PosetError::TooLarge { size: len, cap: crate::MAX_POSET_SIZE });
        }
        let mut succ = vec![Vec::new(); len];
        let mut indegree = vec![0usize; len];
        for &(a, b) in covers {
            for i in [a, b] {
                if i >= len {
                    return Err(PosetError::IndexOutOfRange { index: i, size: len });
                }
            }
            if a == b {
                return Err(PosetError::CycleDetected { cycle: vec![a] });
            }
            succ[a].push(b);
            indegree[b] += 1;
        }
        // Kahn's algorithm; anything left over lies on or below a cycle.
        let mut stack: Vec<usize> = (0..len).filter(|&v| indegree[v] == 0).collect();
        let mut topo = Vec::with_capacity(len);
        let mut remaining = indegree.clone();
        while let Some(v) = stack.pop() {
            topo.push(v);
            for &w in &succ[v] {
                remaining[w] -= 1;
                if remaining[w] == 0 {
                    stack.push(w);
                }
            }
        }
        if topo.len() < len {
            return Err(PosetError::CycleDetected {
                cycle: find_cycle(&succ, &remaining),
            });
        }

        let words = bits::words_for(len.max(1));
        let mut up = vec![0u64; len * words];
        for &v in topo.iter().rev() {
            bits::set(&mut up[v * words..(v + 1) * words], v);
            // Split borrows: rows of successors are already complete.
            for i in 0..succ[v].len() {
                let w = succ[v][i];
                let (lo, hi) = up.split_at_mut(v.max(w) * words);
                if w > v {
                    bits::or_into(&mut lo[v * words..(v + 1) * words], &hi[..words]);
                } else {
                    bits::or_into(&mut hi[..words], &lo[w * words..(w + 1) * words]);
                }
            }
        }
        let mut down = vec![0u64; len * words];
        for x in 0..len {
            for y in bits::ones(&up[x * words..(x + 1) * words]) {
                bits::set(&mut down[y * words..(y + 1) * words], x);
            }
        }
        Ok(FinitePoset { labels, len, words, up, down })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub(crate) fn up_row(&self, x: usize) -> &[u64] {
        &self.up[x * self.words..(x + 1) * self.words]
    }

    pub(crate) fn down_row(&self, y: usize) -> &[u64] {
        &self.down[y * self.words..(y + 1) * self.words]
    }

    /// Bits of the strict up-set of `x`.
    pub(crate) fn strict_up_words(&self, x: usize) -> Vec<u64> {
        let mut row = self.up_row(x).to_vec();
        row[x / 64] &= !(1u64 << (x % 64));
        row
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        bits::get(self.up_row(x), y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// True if `y` covers `x`: `x < y` with nothing strictly between.
    pub fn covers(&self, x: usize, y: usize) -> bool {
        if x == y || !self.leq(x, y) {
            return false;
        }
        // The closed interval [x, y] must be exactly {x, y}.
        let closed: usize = self
            .up_row(x)
            .iter()
            .zip(self.down_row(y))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum();
        closed == 2
    }

    /// All cover pairs `(x, y)` with `y` covering `x`, in lexicographic order.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len {
            for y in bits::ones(self.up_row(x)) {
                if y != x && self.covers(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// The opposite poset: same elements and labels, order reversed.
    pub fn dual(&self) -> FinitePoset {
        FinitePoset {
            labels: self.labels.clone(),
            len: self.len,
            words: self.words,
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    /// Induced subposet on the given distinct elements. The result's element
    /// `k` corresponds to `elems[k]`; labels are carried over.
    pub fn induced(&self, elems: &[usize]) -> FinitePoset {
        for &e in elems {
            assert!(e < self.len, "induced: element {e} out of range");
        }
        let mut seen = vec![false; self.len];
        for &e in elems {
            assert!(!seen[e], "induced: element {e} repeated");
            seen[e] = true;
        }
        let labels = elems.iter().map(|&e| self.labels[e].clone()).collect();
        Self::build_unchecked(labels, |a, b| self.leq(elems[a], elems[b]))
    }

    /// The interval between `x` and `y` as an induced subposet, together with
    /// the map from sub-indices back to elements of `self` (ascending).
    /// `open` drops the endpoints.
    pub fn interval(
        &self,
        x: usize,
        y: usize,
        open: bool,
    ) -> Result<(FinitePoset, Vec<usize>), PosetError> {
        if !self.leq(x, y) {
            return Err(PosetError::NotComparable { x, y });
        }
        let mut row = self.up_row(x).to_vec();
        bits::and_into(&mut row, self.down_row(y));
        let mut elems: Vec<usize> = bits::ones(&row).collect();
        if open {
            elems.retain(|&e| e != x && e != y);
        }
        Ok((self.induced(&elems), elems))
    }

    /// Elements lying above at least one member of `xs`, ascending.
    pub fn up_set(&self, xs: &[usize]) -> Vec<usize> {
        let mut row = vec![0u64; self.words];
        for &x in xs {
            bits::or_into(&mut row, self.up_row(x));
        }
        bits::ones(&row).collect()
    }

    /// Elements lying below at least one member of `xs`, ascending.
    pub fn down_set(&self, xs: &[usize]) -> Vec<usize> {
        let mut row = vec![0u64; self.words];
        for &x in xs {
            bits::or_into(&mut row, self.down_row(x));
        }
        bits::ones(&row).collect()
    }

    /// Least upper bound of `x` and `y`, when it exists. The least common
    /// upper bound is the unique `z` with every common bound above it.
    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        let mut common = self.up_row(x).to_vec();
        bits::and_into(&mut common, self.up_row(y));
        let found = bits::ones(&common).find(|&z| bits::is_subset(&common, self.up_row(z)));
        found
    }

    /// Greatest lower bound of `x` and `y`, when it exists.
    pub fn meet(&self, x: usize, y: usize) -> Option<usize> {
        let mut common = self.down_row(x).to_vec();
        bits::and_into(&mut common, self.down_row(y));
        let found = bits::ones(&common).find(|&z| bits::is_subset(&common, self.down_row(z)));
        found
    }

    /// Same poset with new display labels.
    pub fn with_labels(&self, labels: Vec<String>) -> FinitePoset {
        assert_eq!(labels.len(), self.len, "label count must match poset size");
        let mut out = self.clone();
        out.labels = labels;
        out
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len).filter(|&x| bits::count(self.down_row(x)) == 1).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len).filter(|&x| bits::count(self.up_row(x)) == 1).collect()
    }

    /// Minimum and maximum length over all maximal (saturated) chains from
    /// `x` to `y`, or `None` when `x <= y` fails. Length counts cover steps.
    pub fn chain_length_range(&self, x: usize, y: usize) -> Option<(usize, usize)> {
        if !self.leq(x, y) {
            return None;
        }
        let (min_len, max_len) = self.chain_bounds_from(x);
        Some((min_len[y].unwrap(), max_len[y].unwrap()))
    }

    // Saturated-chain length bounds from `x` to every z >= x, by dynamic
    // programming over cover edges in a linear-extension order. Every cover
    // path from x to z stays inside [x, z], so no interval restriction is
    // needed.
    fn chain_bounds_from(&self, x: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
        let order = self.linear_extension_indices();
        let mut min_len = vec![None; self.len];
        let mut max_len = vec![None; self.len];
        min_len[x] = Some(0);
        max_len[x] = Some(0);
        for &z in &order {
            if z == x || !self.leq(x, z) {
                continue;
            }
            let mut lo = usize::MAX;
            let mut hi = 0;
            for p in bits::ones(self.down_row(z)) {
                if p != z && self.leq(x, p) && self.covers(p, z) {
                    lo = lo.min(min_len[p].unwrap() + 1);
                    hi = hi.max(max_len[p].unwrap() + 1);
                }
            }
            // x < z guarantees at least one cover predecessor above x.
            min_len[z] = Some(lo);
            max_len[z] = Some(hi);
        }
        (min_len, max_len)
    }

    /// Elements sorted so that `x < y` implies `x` appears first. Kahn's
    /// algorithm over cover edges, always popping the smallest available
    /// index, so the extension is deterministic.
    pub fn linear_extension_indices(&self) -> Vec<usize> {
        use std::cmp::Reverse;
        let covers = self.cover_pairs();
        let mut succ = vec![Vec::new(); self.len];
        let mut indegree = vec![0usize; self.len];
        for &(a, b) in &covers {
            succ[a].push(b);
            indegree[b] += 1;
        }
        let mut heap: std::collections::BinaryHeap<Reverse<usize>> =
            (0..self.len).filter(|&v| indegree[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(self.len);
        while let Some(Reverse(v)) = heap.pop() {
            order.push(v);
            for &w in &succ[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    heap.push(Reverse(w));
                }
            }
        }
        order
    }

    /// Assigns ranks so covers step by exactly one, or explains why that is
    /// impossible. Ranks are normalized so each connected component of the
    /// cover graph has minimum rank 0.
    pub fn grading(&self) -> Result<RankFunction, NotGraded> {
        let covers = self.cover_pairs();
        let mut neighbors: Vec<Vec<(usize, i64)>> = vec![Vec::new(); self.len];
        for &(a, b) in &covers {
            neighbors[a].push((b, 1));
            neighbors[b].push((a, -1));
        }
        let mut rank = vec![None; self.len];
        let mut parent: Vec<Option<usize>> = vec![None; self.len];
        for root in 0..self.len {
            if rank[root].is_some() {
                continue;
            }
            rank[root] = Some(0i64);
            let mut component = vec![root];
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                let rv = rank[v].unwrap();
                for &(w, step) in &neighbors[v] {
                    match rank[w] {
                        None => {
                            rank[w] = Some(rv + step);
                            parent[w] = Some(v);
                            component.push(w);
                            queue.push_back(w);
                        }
                        Some(rw) if rw != rv + step => {
                            return Err(self.grading_failure(v, w, &parent));
                        }
                        Some(_) => {}
                    }
                }
            }
            let low = component.iter().map(|&v| rank[v].unwrap()).min().unwrap();
            for &v in &component {
                *rank[v].as_mut().unwrap() -= low;
            }
        }
        Ok(RankFunction { values: rank.into_iter().map(Option::unwrap).collect() })
    }

    // Prefers a pair with two different maximal-chain lengths; falls back to
    // the unbalanced cycle met during the BFS.
    fn grading_failure(&self, u: usize, v: usize, parent: &[Option<usize>]) -> NotGraded {
        for x in 0..self.len {
            let (min_len, max_len) = self.chain_bounds_from(x);
            for y in 0..self.len {
                if let (Some(lo), Some(hi)) = (min_len[y], max_len[y]) {
                    if lo != hi {
                        return NotGraded::UnequalChains { x, y, shorter: lo, longer: hi };
                    }
                }
            }
        }
        let path_to_root = |mut a: usize| {
            let mut path = vec![a];
            while let Some(p) = parent[a] {
                path.push(p);
                a = p;
            }
            path
        };
        let pu = path_to_root(u);
        let mut pv = path_to_root(v);
        // Drop the common tail, keeping the meeting point once.
        let on_u: std::collections::HashSet<usize> = pu.iter().copied().collect();
        let met = pv.iter().position(|e| on_u.contains(e)).unwrap_or(pv.len() - 1);
        pv.truncate(met + 1);
        let meet = *pv.last().unwrap();
        let mut cycle: Vec<usize> =
            pu.iter().take_while(|&&e| e != meet).copied().collect();
        cycle.push(meet);
        cycle.extend(pv.iter().rev().skip(1).copied());
        NotGraded::InconsistentCycle { cycle }
    }

    /// Checks that `f` (element of `self` -> element of `other`) is an order
    /// isomorphism: a bijection with `x <= y` iff `f(x) <= f(y)`.
    pub fn verify_isomorphism(&self, other: &FinitePoset, f: &[usize]) -> bool {
        if f.len() != self.len || other.len != self.len {
            return false;
        }
        let mut hit = vec![false; self.len];
        for &u in f {
            if u >= self.len || hit[u] {
                return false;
            }
            hit[u] = true;
        }
        for x in 0..self.len {
            for y in 0..self.len {
                if self.leq(x, y) != other.leq(f[x], f[y]) {
                    return false;
                }
            }
        }
        true
    }

    /// Searches for an order isomorphism onto `other` by backtracking over
    /// color classes refined from degree/height profiles. Returns the map
    /// `self -> other` or `None` when the posets are not isomorphic.
    pub fn find_isomorphism(&self, other: &FinitePoset) -> Option<Vec<usize>> {
        if self.len != other.len {
            return None;
        }
        if self.len == 0 {
            return Some(Vec::new());
        }
        let (colors_p, colors_q) = joint_colors(self, other);
        // Color class sizes must match exactly.
        let census = |colors: &[u32]| {
            let mut c = std::collections::BTreeMap::new();
            for &col in colors {
                *c.entry(col).or_insert(0usize) += 1;
            }
            c
        };
        let census_p = census(&colors_p);
        if census_p != census(&colors_q) {
            return None;
        }
        let mut candidates: std::collections::BTreeMap<u32, Vec<usize>> =
            std::collections::BTreeMap::new();
        for (u, &col) in colors_q.iter().enumerate() {
            candidates.entry(col).or_default().push(u);
        }
        // Most-constrained first: smallest color class, then index.
        let mut order: Vec<usize> = (0..self.len).collect();
        order.sort_by_key(|&x| (census_p[&colors_p[x]], colors_p[x], x));

        let mut map = vec![usize::MAX; self.len];
        let mut used = vec![false; self.len];
        if self.extend_isomorphism(other, &colors_p, &candidates, &order, 0, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_isomorphism(
        &self,
        other: &FinitePoset,
        colors_p: &[u32],
        candidates: &std::collections::BTreeMap<u32, Vec<usize>>,
        order: &[usize],
        depth: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let x = order[depth];
        for &u in &candidates[&colors_p[x]] {
            if used[u] {
                continue;
            }
            let consistent = order[..depth].iter().all(|&y| {
                self.leq(x, y) == other.leq(u, map[y]) && self.leq(y, x) == other.leq(map[y], u)
            });
            if !consistent {
                continue;
            }
            map[x] = u;
            used[u] = true;
            if self.extend_isomorphism(other, colors_p, candidates, order, depth + 1, map, used) {
                return true;
            }
            map[x] = usize::MAX;
            used[u] = false;
        }
        false
    }
}

// Walks successor lists restricted to vertices still carrying in-degree
// (i.e. on or below a cycle) until a vertex repeats.
fn find_cycle(succ: &[Vec<usize>], remaining: &[usize]) -> Vec<usize> {
    let start = (0..succ.len()).find(|&v| remaining[v] > 0).expect("cycle exists");
    let mut seen_at = std::collections::HashMap::new();
    let mut path = Vec::new();
    let mut v = start;
    loop {
        if let Some(&i) = seen_at.get(&v) {
            return path[i..].to_vec();
        }
        seen_at.insert(v, path.len());
        path.push(v);
        v = *succ[v]
            .iter()
            .find(|&&w| remaining[w] > 0)
            .expect("every remaining vertex keeps a remaining successor");
    }
}

/// Iterated refinement of element colors, run jointly over both posets so the
/// color names are comparable. The initial color packs order-theoretic
/// invariants; each round appends the sorted colors of cover neighbors.
fn joint_colors(p: &FinitePoset, q: &FinitePoset) -> (Vec<u32>, Vec<u32>) {
    let profile = |poset: &FinitePoset| -> Vec<(usize, usize, usize, usize)> {
        let covers = poset.cover_pairs();
        let mut up_deg = vec![0usize; poset.len()];
        let mut down_deg = vec![0usize; poset.len()];
        for &(a, b) in &covers {
            up_deg[a] += 1;
            down_deg[b] += 1;
        }
        (0..poset.len())
            .map(|x| {
                (
                    bits::count(poset.down_row(x)),
                    bits::count(poset.up_row(x)),
                    down_deg[x],
                    up_deg[x],
                )
            })
            .collect()
    };
    fn assign<K: Ord>(dict: &mut std::collections::BTreeMap<K, u32>, key: K) -> u32 {
        let next = dict.len() as u32;
        *dict.entry(key).or_insert(next)
    }
    let init_p = profile(p);
    let init_q = profile(q);
    let mut dict = std::collections::BTreeMap::new();
    let mut colors_p: Vec<u32> =
        init_p.into_iter().map(|k| assign(&mut dict, k)).collect();
    let mut colors_q: Vec<u32> =
        init_q.into_iter().map(|k| assign(&mut dict, k)).collect();

    let covers_p = p.cover_pairs();
    let covers_q = q.cover_pairs();
    let mut classes = dict.len();
    loop {
        let refine = |poset: &FinitePoset,
                      covers: &[(usize, usize)],
                      colors: &[u32]|
         -> Vec<(u32, Vec<u32>, Vec<u32>)> {
            let mut below = vec![Vec::new(); poset.len()];
            let mut above = vec![Vec::new(); poset.len()];
            for &(a, b) in covers {
                below[b].push(colors[a]);
                above[a].push(colors[b]);
            }
            (0..poset.len())
                .map(|x| {
                    below[x].sort_unstable();
                    above[x].sort_unstable();
                    (colors[x], below[x].clone(), above[x].clone())
                })
                .collect()
        };
        let keys_p = refine(p, &covers_p, &colors_p);
        let keys_q = refine(q, &covers_q, &colors_q);
        let mut next_dict = std::collections::BTreeMap::new();
        colors_p = keys_p.into_iter().map(|k| assign(&mut next_dict, k)).collect();
        colors_q = keys_q.into_iter().map(|k| assign(&mut next_dict, k)).collect();
        if next_dict.len() == classes {
            return (colors_p, colors_q);
        }
        classes = next_dict.len();
    }
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

    /// Diamond: 0 < 1, 2 < 3 with 1, 2 incomparable.
    fn diamond() -> FinitePoset {
        FinitePoset::from_cover_relations(labels(4), &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn closure_of_chain_edges() {
        let p = FinitePoset::from_cover_relations(labels(3), &[(0, 1), (1, 2)]).unwrap();
        assert!(p.leq(0, 2));
        assert!(p.lt(0, 2));
        assert!(!p.leq(2, 0));
        assert_eq!(p.cover_pairs(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn closure_drops_redundant_edges_from_cover_list() {
        // (0,2) is implied, so the Hasse diagram keeps only the two steps.
        let p = FinitePoset::from_cover_relations(labels(3), &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(p.cover_pairs(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn cycle_is_detected_with_witness() {
        let err = FinitePoset::from_cover_relations(labels(3), &[(0, 1), (1, 2), (2, 0)])
            .unwrap_err();
        match err {
            PosetError::CycleDetected { cycle } => {
                assert_eq!(cycle.len(), 3);
                let mut sorted = cycle.clone();
                sorted.sort_unstable();
                assert_eq!(sorted, vec![0, 1, 2]);
            }
            other => panic!("expected CycleDetected, got {other:?}"),
        }
        let self_loop =
            FinitePoset::from_cover_relations(labels(2), &[(1, 1)]).unwrap_err();
        assert_eq!(self_loop, PosetError::CycleDetected { cycle: vec![1] });
    }

    #[test]
    fn from_leq_rejects_broken_relations() {
        assert_eq!(
            FinitePoset::from_leq(labels(2), |_, _| false).unwrap_err(),
            PosetError::NotReflexive { x: 0 }
        );
        assert_eq!(
            FinitePoset::from_leq(labels(2), |_, _| true).unwrap_err(),
            PosetError::NotAntisymmetric { x: 0, y: 1 }
        );
        // 0 <= 1 <= 2 without 0 <= 2.
        let err = FinitePoset::from_leq(labels(3), |a, b| a == b || b == a + 1).unwrap_err();
        assert_eq!(err, PosetError::NotTransitive { x: 0, y: 1, z: 2 });
    }

    #[test]
    fn size_cap_is_enforced() {
        let big = crate::MAX_POSET_SIZE + 1;
        let err = FinitePoset::from_leq(labels(big), |a, b| a == b).unwrap_err();
        assert!(matches!(err, PosetError::TooLarge { .. }));
    }

    #[test]
    fn empty_poset_is_legal() {
        let p = FinitePoset::from_leq(Vec::new(), |_, _| true).unwrap();
        assert!(p.is_empty());
        assert!(p.cover_pairs().is_empty());
        assert_eq!(p.grading().unwrap().values, Vec::<i64>::new());
        assert_eq!(p.find_isomorphism(&p), Some(Vec::new()));
    }

    #[test]
    fn diamond_cover_pairs_and_extremes() {
        let p = diamond();
        assert_eq!(p.cover_pairs(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(p.minimal_elements(), vec![0]);
        assert_eq!(p.maximal_elements(), vec![3]);
        assert!(!p.comparable(1, 2));
    }

    #[test]
    fn dual_reverses_covers_and_is_involutive() {
        let p = diamond();
        let d = p.dual();
        assert_eq!(d.cover_pairs(), vec![(1, 0), (2, 0), (3, 1), (3, 2)]);
        assert_eq!(d.dual(), p);
    }

    #[test]
    fn intervals_of_a_chain() {
        let p = chain(4);
        let (closed, elems) = p.interval(0, 3, false).unwrap();
        assert_eq!(elems, vec![0, 1, 2, 3]);
        assert_eq!(closed.len(), 4);
        let (open, elems) = p.interval(0, 3, true).unwrap();
        assert_eq!(elems, vec![1, 2]);
        assert_eq!(open.cover_pairs(), vec![(0, 1)]);
        let (point, elems) = p.interval(2, 2, false).unwrap();
        assert_eq!((point.len(), elems), (1, vec![2]));
        let (empty, _) = p.interval(2, 2, true).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn interval_requires_comparability() {
        let p = diamond();
        assert_eq!(p.interval(1, 2, false).unwrap_err(), PosetError::NotComparable { x: 1, y: 2 });
    }

    #[test]
    fn interval_commutes_with_dual() {
        let p = diamond();
        let (sub, elems) = p.interval(0, 3, true).unwrap();
        let (dual_sub, dual_elems) = p.dual().interval(3, 0, true).unwrap();
        assert_eq!(elems, dual_elems);
        assert_eq!(sub.dual(), dual_sub);
    }

    #[test]
    fn up_and_down_sets() {
        let p = diamond();
        assert_eq!(p.up_set(&[1]), vec![1, 3]);
        assert_eq!(p.up_set(&[1, 2]), vec![1, 2, 3]);
        assert_eq!(p.down_set(&[1]), vec![0, 1]);
        assert_eq!(p.up_set(&[]), Vec::<usize>::new());
        assert_eq!(p.up_set(&[0]), vec![0, 1, 2, 3]);
    }

    #[test]
    fn diamond_is_graded() {
        let r = diamond().grading().unwrap();
        assert_eq!(r.values, vec![0, 1, 1, 2]);
    }

    #[test]
    fn pentagon_is_not_graded_with_chain_witness() {
        // 0 < 1 < 4 and 0 < 2 < 3 < 4.
        let p = FinitePoset::from_cover_relations(
            labels(5),
            &[(0, 1), (1, 4), (0, 2), (2, 3), (3, 4)],
        )
        .unwrap();
        match p.grading().unwrap_err() {
            NotGraded::UnequalChains { x, y, shorter, longer } => {
                assert_eq!((x, y), (0, 4));
                assert_eq!((shorter, longer), (2, 3));
            }
            other => panic!("expected UnequalChains, got {other:?}"),
        }
        assert_eq!(p.chain_length_range(0, 4), Some((2, 3)));
        assert_eq!(p.chain_length_range(1, 2), None);
    }

    #[test]
    fn rank_rigidity_can_fail_without_unequal_chains() {
        // Covers 0<1<2, 3<2, 3<4, 0<4: every comparable pair has a unique
        // maximal chain, yet the signed cycle 0,1,2,3,4 sums to +1, so no
        // rank function exists.
        let p = FinitePoset::from_cover_relations(
            labels(5),
            &[(0, 1), (1, 2), (3, 2), (3, 4), (0, 4)],
        )
        .unwrap();
        for x in 0..5 {
            for y in 0..5 {
                if let Some((lo, hi)) = p.chain_length_range(x, y) {
                    assert_eq!(lo, hi, "pair ({x},{y})");
                }
            }
        }
        match p.grading().unwrap_err() {
            NotGraded::InconsistentCycle { cycle } => {
                assert!(cycle.len() >= 4, "cycle {cycle:?} too short");
            }
            other => panic!("expected InconsistentCycle, got {other:?}"),
        }
    }

    #[test]
    fn grading_normalizes_each_component() {
        // Two components: a 2-chain and an isolated point.
        let p = FinitePoset::from_cover_relations(labels(3), &[(1, 2)]).unwrap();
        let r = p.grading().unwrap();
        assert_eq!(r.values, vec![0, 0, 1]);
    }

    #[test]
    fn linear_extension_respects_order() {
        let p = diamond();
        let order = p.linear_extension_indices();
        let pos = |e: usize| order.iter().position(|&x| x == e).unwrap();
        for x in 0..p.len() {
            for y in 0..p.len() {
                if p.lt(x, y) {
                    assert!(pos(x) < pos(y));
                }
            }
        }
        assert_eq!(order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn isomorphism_found_on_relabeled_diamond() {
        let p = diamond();
        // Same shape with the middle pair swapped and extremes moved around.
        let q = FinitePoset::from_cover_relations(labels(4), &[(3, 2), (3, 1), (2, 0), (1, 0)])
            .unwrap();
        let f = p.find_isomorphism(&q).expect("diamonds are isomorphic");
        assert!(p.verify_isomorphism(&q, &f));
        assert_eq!(f[0], 3);
        assert_eq!(f[3], 0);
    }

    #[test]
    fn non_isomorphic_posets_are_rejected() {
        let p = diamond();
        let q = chain(4);
        assert_eq!(p.find_isomorphism(&q), None);
        assert_eq!(p.find_isomorphism(&chain(3)), None);
        // Same degree profiles everywhere, different shape: 2+2 chain vs 1+3.
        let a = FinitePoset::from_cover_relations(labels(4), &[(0, 1), (2, 3)]).unwrap();
        let b = FinitePoset::from_cover_relations(labels(4), &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(a.find_isomorphism(&b), None);
    }

    #[test]
    fn verify_isomorphism_rejects_non_bijections() {
        let p = chain(3);
        assert!(!p.verify_isomorphism(&p, &[0, 0, 1]));
        assert!(!p.verify_isomorphism(&p, &[0, 1]));
        assert!(!p.verify_isomorphism(&p, &[2, 1, 0]));
        assert!(p.verify_isomorphism(&p, &[0, 1, 2]));
    }

    #[test]
    fn joins_and_meets() {
        let p = diamond();
        assert_eq!(p.join(1, 2), Some(3));
        assert_eq!(p.meet(1, 2), Some(0));
        assert_eq!(p.join(0, 1), Some(1));
        assert_eq!(p.meet(3, 3), Some(3));
        // Two incomparable maximal elements have no join.
        let v = FinitePoset::from_cover_relations(labels(3), &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(v.join(1, 2), None);
        assert_eq!(v.meet(1, 2), Some(0));
        // Two incomparable minimal elements have no meet.
        assert_eq!(v.dual().meet(1, 2), None);
    }

    #[test]
    fn covers_by_direct_definition() {
        let p = diamond();
        for x in 0..p.len() {
            for y in 0..p.len() {
                let direct = p.lt(x, y)
                    && (0..p.len()).all(|z| !(p.lt(x, z) && p.lt(z, y)));
                assert_eq!(p.covers(x, y), direct, "pair ({x},{y})");
            }
        }
    }
}
