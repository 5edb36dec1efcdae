//! Exact combinatorics of finite partially ordered sets.
//!
//! The crate is organized around a dense, bit-packed poset representation
//! ([`FinitePoset`]) and builds up from it:
//!
//! - [`poset`]: construction from cover relations or a comparison oracle,
//!   duals, intervals, up/down sets, grading, and isomorphism search.
//! - [`incidence`]: the incidence algebra over `i64`; zeta matrices, the
//!   Möbius function by two independent routes (nilpotent series inversion
//!   and the summation recursion), Möbius inversion of functions, and the
//!   Euler-characteristic identity `1 + mu(x,y) = chi((x,y))`.
//! - [`surgery`]: gluing two posets along a common embedded subposet
//!   (connect-sum), the bridge matrix of the cross order, the block formula
//!   `mu_cross = -M0 * B * M1`, and the closed form available when the glue
//!   region has unique minimal/maximal projections.
//! - [`layered`]: posets split into a lower and an upper layer by a sign map
//!   with an order-isomorphic lift between them, and the doubling operation
//!   that glues two copies of a poset along its upper layer.
//! - [`ln`]: the lattice of subsets of `{1, .., n}` ordered by right-to-left
//!   domination, realized on `u64` bitmasks; covers are single left slides of
//!   mobile beads, the Möbius function has a closed form on elementary pairs,
//!   and join/meet admit two independent computations.
//! - [`complex`]: order complexes (nerves), f-vectors, and Euler
//!   characteristics, including a chain-count route that avoids materializing
//!   faces.
//! - [`io`]: a small JSON interchange format and DOT export.
//! - [`random`]: seeded generators for fuzzing (random DAG closures, random
//!   order-embeddings, random layered posets).
//!
//! All arithmetic on Möbius values is checked 64-bit; overflow is reported,
//! never wrapped. Every derived structure is validated eagerly: constructors
//! return typed errors with witnesses rather than producing broken values.

#![forbid(unsafe_code)]
// Dense matrix and bit-row code indexes flat buffers by (row, column) pairs;
// iterator rewrites obscure the addressing.
#![allow(clippy::needless_range_loop)]

pub mod complex;
pub mod incidence;
pub mod io;
pub mod layered;
pub mod ln;
pub mod poset;
pub mod random;
pub mod surgery;

pub use complex::SimplicialScheme;
pub use incidence::{IncidenceMatrix, MobiusTable};
pub use layered::LayerStructure;
pub use ln::LnElement;
pub use poset::{FinitePoset, RankFunction};
pub use surgery::{BridgeMatrix, EmbeddedSubposet};

/// Largest poset size the dense representation accepts.
pub const MAX_POSET_SIZE: usize = 2048;

pub(crate) mod bits {
    //! Helpers for rows of `u64`-packed bit sets.

    pub fn words_for(len: usize) -> usize {
        len.div_ceil(64)
    }

    pub fn get(row: &[u64], i: usize) -> bool {
        row[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(row: &mut [u64], i: usize) {
        row[i / 64] |= 1 << (i % 64);
    }

    /// True if every bit of `a` is also set in `b`.
    pub fn is_subset(a: &[u64], b: &[u64]) -> bool {
        a.iter().zip(b).all(|(x, y)| x & !y == 0)
    }

    pub fn count(a: &[u64]) -> usize {
        a.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn or_into(dst: &mut [u64], src: &[u64]) {
        for (d, s) in dst.iter_mut().zip(src) {
            *d |= s;
        }
    }

    pub fn and_into(dst: &mut [u64], src: &[u64]) {
        for (d, s) in dst.iter_mut().zip(src) {
            *d &= s;
        }
    }

    /// Indices of set bits, ascending.
    pub fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
        row.iter().enumerate().flat_map(|(w, &word)| {
            std::iter::successors(Some(word), |&rest| (rest != 0).then(|| rest & (rest - 1)))
                .take_while(|&rest| rest != 0)
                .map(move |rest| w * 64 + rest.trailing_zeros() as usize)
        })
    }
}
