//! Order complexes: the nerve of a poset and its Euler characteristic.
//!
//! The nerve has one face per nonempty chain. Faces are materialized only in
//! [`nerve`], behind a hard cap; [`chain_count_euler`] computes the Euler
//! characteristic from chain counts alone, which keeps it usable on
//! intervals whose nerves are far too large to enumerate.

use crate::bits;
use crate::poset::FinitePoset;
use thiserror::Error;

/// Default bound on the number of faces [`nerve`] will materialize.
pub const DEFAULT_FACE_CAP: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("nerve enumeration exceeded the face cap {cap}")]
    FaceLimitExceeded { cap: usize },
    #[error("chain-count accumulator overflowed for chains of {elements} elements")]
    Overflow { elements: usize },
}

/// A finite simplicial scheme: vertices plus a downward-closed family of
/// nonempty faces. Faces are ascending vertex lists; the face list itself is
/// sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialScheme {
    pub vertices: Vec<usize>,
    pub faces: Vec<Vec<usize>>,
}

impl SimplicialScheme {
    /// Checks the scheme invariants: faces nonempty, strictly ascending, on
    /// known vertices, deduplicated and sorted, and closed under removing one
    /// vertex (which gives full downward closure by induction).
    pub fn validate(&self) -> bool {
        let vertex_set: std::collections::BTreeSet<usize> =
            self.vertices.iter().copied().collect();
        if vertex_set.len() != self.vertices.len() {
            return false;
        }
        let face_set: std::collections::BTreeSet<&Vec<usize>> = self.faces.iter().collect();
        if face_set.len() != self.faces.len() || !self.faces.windows(2).all(|w| w[0] < w[1]) {
            return false;
        }
        for face in &self.faces {
            if face.is_empty()
                || !face.windows(2).all(|w| w[0] < w[1])
                || !face.iter().all(|v| vertex_set.contains(v))
            {
                return false;
            }
            if face.len() > 1 {
                for drop in 0..face.len() {
                    let mut sub = face.clone();
                    sub.remove(drop);
                    if !face_set.contains(&sub) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// The nerve of a poset: one face per nonempty chain, enumerated by
/// depth-first chain extension. Fails once more than `face_cap` faces exist.
pub fn nerve(p: &FinitePoset, face_cap: usize) -> Result<SimplicialScheme, ComplexError> {
    let m = p.len();
    let strict_up: Vec<Vec<u64>> = (0..m).map(|x| p.strict_up_words(x)).collect();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    let mut chain: Vec<usize> = Vec::new();

    fn extend(
        v: usize,
        candidates: &[u64],
        strict_up: &[Vec<u64>],
        chain: &mut Vec<usize>,
        faces: &mut Vec<Vec<usize>>,
        face_cap: usize,
    ) -> Result<(), ComplexError> {
        chain.push(v);
        if faces.len() == face_cap {
            return Err(ComplexError::FaceLimitExceeded { cap: face_cap });
        }
        let mut face = chain.clone();
        face.sort_unstable();
        faces.push(face);
        for w in bits::ones(candidates) {
            let mut narrowed = candidates.to_vec();
            bits::and_into(&mut narrowed, &strict_up[w]);
            extend(w, &narrowed, strict_up, chain, faces, face_cap)?;
        }
        chain.pop();
        Ok(())
    }

    for v in 0..m {
        extend(v, &strict_up[v], &strict_up, &mut chain, &mut faces, face_cap)?;
    }
    faces.sort_unstable();
    Ok(SimplicialScheme { vertices: (0..m).collect(), faces })
}

/// Face counts by dimension: `f[i]` is the number of faces with `i + 1`
/// vertices. Empty vector for the empty scheme.
pub fn f_vector(k: &SimplicialScheme) -> Vec<usize> {
    let top = k.faces.iter().map(Vec::len).max().unwrap_or(0);
    let mut f = vec![0usize; top];
    for face in &k.faces {
        f[face.len() - 1] += 1;
    }
    f
}

/// Euler characteristic: the alternating sum of the f-vector; 0 for the
/// empty scheme.
pub fn euler_characteristic(k: &SimplicialScheme) -> i64 {
    f_vector(k)
        .iter()
        .enumerate()
        .map(|(dim, &count)| if dim % 2 == 0 { count as i64 } else { -(count as i64) })
        .sum()
}

/// Euler characteristic of the nerve without materializing faces: counts
/// chains with exactly `k` elements by dynamic programming and alternates.
/// Counts are held in `i128`; overflow is reported, not wrapped.
pub fn chain_count_euler(p: &FinitePoset) -> Result<i64, ComplexError> {
    let m = p.len();
    let order = p.linear_extension_indices();
    // ending_at[x] = number of chains of the current length ending at x.
    let mut ending_at: Vec<i128> = vec![1; m];
    let mut chi: i128 = 0;
    let mut elements = 1usize;
    while ending_at.iter().any(|&c| c != 0) {
        let level: i128 = ending_at
            .iter()
            .try_fold(0i128, |a, &c| a.checked_add(c))
            .ok_or(ComplexError::Overflow { elements })?;
        let signed = if elements % 2 == 1 { level } else { -level };
        chi = chi.checked_add(signed).ok_or(ComplexError::Overflow { elements })?;
        let mut next = vec![0i128; m];
        for &y in &order {
            let mut acc: i128 = 0;
            for x in bits::ones(p.down_row(y)) {
                if x != y {
                    acc = acc
                        .checked_add(ending_at[x])
                        .ok_or(ComplexError::Overflow { elements: elements + 1 })?;
                }
            }
            next[y] = acc;
        }
        ending_at = next;
        elements += 1;
    }
    i64::try_from(chi).map_err(|_| ComplexError::Overflow { elements })
}
