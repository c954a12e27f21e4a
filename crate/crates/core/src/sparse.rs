//! Sparse vectors over a semiring, keyed by state index.

use alloc::collections::BTreeMap;

use crate::semiring::{Semiring, Weight};

pub(crate) type SparseVec = BTreeMap<usize, Weight>;

/// `v[i] += w`, dropping zeros.
pub(crate) fn accumulate(k: Semiring, v: &mut SparseVec, i: usize, w: Weight) {
    if k.is_zero(&w) {
        return;
    }
    match v.get_mut(&i) {
        Some(acc) => {
            *acc = k.plus(acc, &w);
            if k.is_zero(acc) {
                v.remove(&i);
            }
        }
        None => {
            v.insert(i, w);
        }
    }
}
