//! Clique counts (the e-vector) and the Euler characteristic.
//!
//! Counting extends each clique only by higher-indexed common neighbors, so
//! every complete subspace is visited exactly once, rooted at its least
//! point. The roots partition the work for parallel execution.
//!
//! Counts are `u64`: the bitset representation bounds spaces at 64 points,
//! and `C(64, k) < 2^64` for every `k`, so no count can overflow. The
//! characteristic is accumulated in `i128`.

use std::fmt;

use crate::bits::{ones, BitGraph};
use crate::error::{Error, Result};
use crate::par::{map_ordered, Execution};
use crate::space::DigitalSpace;

pub const DEFAULT_CLIQUE_CAP: usize = 32;

/// `(n_1, ..., n_s)`: `n_k` is the number of complete subspaces with `k` points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EVector(Vec<u64>);

impl EVector {
    /// Trailing zeros are dropped.
    pub fn new(mut counts: Vec<u64>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        EVector(counts)
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    /// Clique number `s`.
    pub fn clique_number(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, k: usize) -> u64 {
        if k == 0 {
            return 0;
        }
        self.0.get(k - 1).copied().unwrap_or(0)
    }

    pub fn euler_characteristic(&self) -> i128 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i128 } else { -(n as i128) })
            .sum()
    }
}

/// Formats as `(n1, n2, ..., ns)`.
impl fmt::Display for EVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

pub fn e_vector(space: &DigitalSpace) -> Result<EVector> {
    e_vector_with(space, DEFAULT_CLIQUE_CAP, Execution::default())
}

pub fn e_vector_with(space: &DigitalSpace, cap: usize, exec: Execution) -> Result<EVector> {
    if space.is_empty() {
        return Err(Error::EmptySpace);
    }
    let g = BitGraph::from_space(space, cap)?;
    Ok(count_cliques(&g, exec))
}

pub fn euler_characteristic(space: &DigitalSpace) -> Result<i128> {
    Ok(e_vector(space)?.euler_characteristic())
}

pub fn euler_characteristic_with(space: &DigitalSpace, cap: usize) -> Result<i128> {
    Ok(e_vector_with(space, cap, Execution::default())?.euler_characteristic())
}

/// e-vector of `v * G` from that of `G`: `(n_1 + 1, n_2 + n_1, ..., n_s + n_{s-1}, n_s)`.
pub fn cone_evector(base: &EVector) -> EVector {
    let e = &base.0;
    let s = e.len();
    let mut out = Vec::with_capacity(s + 1);
    out.push(e.first().copied().unwrap_or(0) + 1);
    for k in 1..=s {
        out.push(e.get(k).copied().unwrap_or(0) + e[k - 1]);
    }
    EVector::new(out)
}

#[inline]
fn above(v: usize) -> u64 {
    u64::MAX.checked_shl(v as u32 + 1).unwrap_or(0)
}

pub(crate) fn count_cliques(g: &BitGraph, exec: Execution) -> EVector {
    let n = g.len();
    let roots: Vec<usize> = (0..n).collect();
    let per_root = map_ordered(&roots, exec, |&v| {
        let mut counts = vec![0u64; n];
        counts[0] = 1;
        extend(g, g.nbrs(v) & above(v), 1, &mut counts);
        counts
    });
    let mut total = vec![0u64; n];
    for counts in per_root {
        for (t, c) in total.iter_mut().zip(counts) {
            *t += c;
        }
    }
    EVector::new(total)
}

fn extend(g: &BitGraph, candidates: u64, size: usize, counts: &mut [u64]) {
    if candidates == 0 {
        return;
    }
    counts[size] += candidates.count_ones() as u64;
    for c in ones(candidates) {
        let next = candidates & g.nbrs(c) & above(c);
        extend(g, next, size + 1, counts);
    }
}

pub(crate) fn characteristic_of(g: &BitGraph) -> i128 {
    count_cliques(g, Execution::Sequential).euler_characteristic()
}
