//! Dense bitset adjacency for spaces of at most 64 points, used by the
//! search-heavy algorithms (contractibility, canonical forms, cliques).

use crate::error::{Error, Result};
use crate::space::DigitalSpace;

pub(crate) const MAX_BITS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct BitGraph {
    adj: Vec<u64>,
}

#[inline]
pub(crate) fn bit(i: usize) -> u64 {
    1u64 << i
}

/// Indices of the set bits, ascending.
pub(crate) fn ones(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

impl BitGraph {
    #[cfg(test)]
    pub(crate) fn from_adjacency(adj: Vec<u64>) -> Self {
        debug_assert!(adj.len() <= MAX_BITS);
        BitGraph { adj }
    }

    pub(crate) fn from_space(space: &DigitalSpace, cap: usize) -> Result<Self> {
        let all: Vec<usize> = (0..space.len()).collect();
        Self::from_space_subset(space, &all, cap)
    }

    /// Induced subgraph of `space` on the sorted index list `keep`.
    pub(crate) fn from_space_subset(space: &DigitalSpace, keep: &[usize], cap: usize) -> Result<Self> {
        let cap = cap.min(MAX_BITS);
        if keep.len() > cap {
            return Err(Error::SizeCapExceeded { size: keep.len(), cap });
        }
        let mut adj = vec![0u64; keep.len()];
        for (a, &i) in keep.iter().enumerate() {
            for &j in space.neighbor_indices(i) {
                if let Ok(b) = keep.binary_search(&j) {
                    adj[a] |= bit(b);
                }
            }
        }
        Ok(BitGraph { adj })
    }

    pub(crate) fn len(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub(crate) fn nbrs(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub(crate) fn full(&self) -> u64 {
        if self.adj.len() == 64 {
            u64::MAX
        } else {
            bit(self.adj.len()) - 1
        }
    }

    #[cfg(test)]
    pub(crate) fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub(crate) fn is_connected_within(&self, mask: u64) -> bool {
        if mask == 0 {
            return true;
        }
        let mut seen = bit(mask.trailing_zeros() as usize);
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for v in ones(frontier) {
                next |= self.adj[v];
            }
            next &= mask & !seen;
            seen |= next;
            frontier = next;
        }
        seen == mask
    }

    /// A point of `mask` adjacent to every other point of `mask`, if any.
    pub(crate) fn dominating_within(&self, mask: u64) -> Option<usize> {
        ones(mask).find(|&v| (self.adj[v] | bit(v)) & mask == mask)
    }

    /// Compacted induced subgraph on `mask`, preserving index order.
    pub(crate) fn induced(&self, mask: u64) -> BitGraph {
        let idx: Vec<usize> = ones(mask).collect();
        let adj = idx
            .iter()
            .map(|&v| {
                let mut row = 0u64;
                for (b, &w) in idx.iter().enumerate() {
                    if self.adj[v] & bit(w) != 0 {
                        row |= bit(b);
                    }
                }
                row
            })
            .collect();
        BitGraph { adj }
    }

    #[cfg(test)]
    pub(crate) fn remove(&self, v: usize) -> BitGraph {
        self.induced(self.full() & !bit(v))
    }
}
