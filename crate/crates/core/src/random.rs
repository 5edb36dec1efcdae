//! Seeded generators for posets, embeddings, and layered structures.
//!
//! Everything here is deterministic in the seed, so fuzz-style checks can
//! be replayed from a single integer. Construction invariants (closure,
//! one-point extension rules, bi-monotone cross relations) make every
//! generated object valid by construction; the validating constructors
//! double-check that.

use crate::layered::LayerStructure;
use crate::poset::FinitePoset;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// A reproducible generator for a given seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random poset with between 1 and `max_size` elements: a random DAG on
/// topologically sorted indices, closed transitively.
pub fn random_poset(rng: &mut ChaCha8Rng, max_size: usize) -> FinitePoset {
    assert!(max_size >= 1, "cannot draw an empty poset");
    let m = rng.gen_range(1..=max_size);
    let density = rng.gen_range(0.1..0.7);
    let mut leq = vec![false; m * m];
    for i in 0..m {
        leq[i * m + i] = true;
        for j in i + 1..m {
            leq[i * m + j] = rng.gen_bool(density);
        }
    }
    for k in 0..m {
        for i in 0..m {
            if leq[i * m + k] {
                for j in 0..m {
                    if leq[k * m + j] {
                        leq[i * m + j] = true;
                    }
                }
            }
        }
    }
    let labels = (0..m).map(|i| format!("v{i}")).collect();
    FinitePoset::from_leq(labels, |a, b| leq[a * m + b])
        .expect("a transitively closed DAG is a partial order")
}

/// Random nonempty induced subposet of `p` together with the element map
/// back into `p`. Induced subposets are always order embeddings.
pub fn random_order_embedding(
    rng: &mut ChaCha8Rng,
    p: &FinitePoset,
) -> (FinitePoset, Vec<usize>) {
    let m = p.len();
    let k = rng.gen_range(1..=m);
    let mut elems: Vec<usize> = (0..m).collect();
    elems.shuffle(rng);
    elems.truncate(k);
    elems.sort_unstable();
    (p.induced(&elems), elems)
}

// Adds one fresh element to p without relating any two old elements: the
// element sits below an up-closed set U and above a down-closed set D whose
// members all lie strictly below every member of U.
fn extend_once(rng: &mut ChaCha8Rng, p: &FinitePoset) -> FinitePoset {
    let m = p.len();
    let mut up = vec![false; m];
    for x in 0..m {
        if rng.gen_bool(0.25) {
            for y in p.up_set(&[x]) {
                up[y] = true;
            }
        }
    }
    let mut down = vec![false; m];
    for x in 0..m {
        if rng.gen_bool(0.25) {
            for y in p.down_set(&[x]) {
                down[y] = true;
            }
        }
    }
    for x in 0..m {
        if down[x] && !(0..m).all(|u| !up[u] || (x != u && p.leq(x, u))) {
            down[x] = false;
        }
    }
    let mut labels: Vec<String> = (0..m).map(|i| p.label(i).to_string()).collect();
    labels.push(format!("w{m}"));
    FinitePoset::from_leq(labels, |a, b| match (a == m, b == m) {
        (true, true) => true,
        (true, false) => up[b],
        (false, true) => down[a],
        (false, false) => p.leq(a, b),
    })
    .expect("a one-point extension is a partial order")
}

/// Random poset containing `q` as an induced subposet, grown by `extra`
/// one-point extensions and then relabeled by a random permutation. Returns
/// the poset and the images of `q`'s elements.
pub fn random_poset_containing(
    rng: &mut ChaCha8Rng,
    q: &FinitePoset,
    extra: usize,
) -> (FinitePoset, Vec<usize>) {
    let mut p = q.clone();
    for _ in 0..extra {
        p = extend_once(rng, &p);
    }
    let m = p.len();
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(rng);
    let relabeled = p.induced(&perm);
    let mut position = vec![0usize; m];
    for (k, &orig) in perm.iter().enumerate() {
        position[orig] = k;
    }
    let image = (0..q.len()).map(|i| position[i]).collect();
    (relabeled, image)
}

/// Random gluing datum: a poset `q` embedded in two independently grown
/// hosts. Host sizes stay within `max_q + extra`.
pub fn random_embedding_pair(
    rng: &mut ChaCha8Rng,
    max_q: usize,
    extra: usize,
) -> (FinitePoset, FinitePoset, FinitePoset, Vec<usize>, Vec<usize>) {
    let q = random_poset(rng, max_q);
    let grow0 = rng.gen_range(0..=extra);
    let grow1 = rng.gen_range(0..=extra);
    let (p0, i0) = random_poset_containing(rng, &q, grow0);
    let (p1, i1) = random_poset_containing(rng, &q, grow1);
    (p0, p1, q, i0, i1)
}

/// Random layered poset: two copies of a random poset with the identity
/// lift, plus extra cross relations closed to bi-monotonicity. The lower
/// half of the result is indices `0..half`.
pub fn random_layered_poset(
    rng: &mut ChaCha8Rng,
    max_half: usize,
) -> (FinitePoset, LayerStructure) {
    let l = random_poset(rng, max_half);
    let m = l.len();
    let mut cross = vec![false; m * m];
    for x in 0..m {
        for y in 0..m {
            cross[x * m + y] = l.leq(x, y) || rng.gen_bool(0.15);
        }
    }
    // Close under lowering the source and raising the target, so the glued
    // relation is transitive.
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..m {
            for y in 0..m {
                if !cross[x * m + y] {
                    continue;
                }
                for a in 0..m {
                    if l.leq(a, x) && !cross[a * m + y] {
                        cross[a * m + y] = true;
                        changed = true;
                    }
                    if l.leq(y, a) && !cross[x * m + a] {
                        cross[x * m + a] = true;
                        changed = true;
                    }
                }
            }
        }
    }
    let mut labels: Vec<String> = (0..m).map(|i| format!("{}-", l.label(i))).collect();
    labels.extend((0..m).map(|i| format!("{}+", l.label(i))));
    let p = FinitePoset::from_leq(labels, |a, b| match (a < m, b < m) {
        (true, true) => l.leq(a, b),
        (false, false) => l.leq(a - m, b - m),
        (true, false) => cross[a * m + (b - m)],
        (false, true) => false,
    })
    .expect("the doubled relation is a partial order");
    (p, LayerStructure::product_style(m))
}
