//! Canonical forms and isomorphism testing.
//!
//! The canonical form is the lexicographically least adjacency matrix over
//! all leaves of an individualization-refinement search tree. Subtrees are
//! pruned only when an automorphism already discovered (fixing the current
//! prefix pointwise) maps them onto an explored sibling, so the key is exact:
//! two spaces share a key iff they are isomorphic.

use crate::bits::{bit, ones, BitGraph, MAX_BITS};
use crate::error::{Error, Result};
use crate::space::DigitalSpace;

pub const DEFAULT_ISO_CAP: usize = MAX_BITS;

/// Canonical adjacency matrix serialized as bytes: the point count followed
/// by each row, most significant bit first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn point_count(&self) -> usize {
        self.0[0] as usize
    }
}

impl std::fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CanonicalKey(")?;
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

pub fn canonical_form(space: &DigitalSpace) -> Result<CanonicalKey> {
    canonical_form_capped(space, DEFAULT_ISO_CAP)
}

pub fn canonical_form_capped(space: &DigitalSpace, cap: usize) -> Result<CanonicalKey> {
    if space.is_empty() {
        return Err(Error::EmptySpace);
    }
    Ok(key_of(&BitGraph::from_space(space, cap)?))
}

pub fn are_isomorphic(g: &DigitalSpace, h: &DigitalSpace) -> Result<bool> {
    if g.is_empty() || h.is_empty() {
        return Err(Error::EmptySpace);
    }
    for s in [g, h] {
        if s.len() > DEFAULT_ISO_CAP {
            return Err(Error::SizeCapExceeded { size: s.len(), cap: DEFAULT_ISO_CAP });
        }
    }
    if g.len() != h.len() || g.edge_count() != h.edge_count() || g.degree_sequence() != h.degree_sequence() {
        return Ok(false);
    }
    Ok(canonical_form(g)? == canonical_form(h)?)
}

pub(crate) fn key_of(g: &BitGraph) -> CanonicalKey {
    let order = canonical_order(g);
    let rows = certificate(g, &order);
    let n = g.len();
    let row_bytes = n.div_ceil(8);
    let mut bytes = Vec::with_capacity(1 + n * row_bytes);
    bytes.push(n as u8);
    for row in rows {
        bytes.extend_from_slice(&row.to_be_bytes()[..row_bytes]);
    }
    CanonicalKey(bytes)
}

/// `order[i]` is the vertex placed at canonical position `i`.
pub(crate) fn canonical_order(g: &BitGraph) -> Vec<usize> {
    let n = g.len();
    if n == 0 {
        return Vec::new();
    }
    let mut cells = vec![(0..n).collect::<Vec<_>>()];
    refine(g, &mut cells);
    let mut search = Search { g, best: None, first: None, generators: Vec::new() };
    let mut prefix = Vec::new();
    search.visit(cells, &mut prefix);
    search.best.expect("search reaches at least one leaf").1
}

type Cells = Vec<Vec<usize>>;

/// Refines an ordered partition to the coarsest equitable one: every cell is
/// split by the vector of neighbor counts into each current cell, repeated
/// until stable. New cells are ordered by that vector, which keeps the
/// procedure label-equivariant.
fn refine(g: &BitGraph, cells: &mut Cells) {
    loop {
        let masks: Vec<u64> = cells.iter().map(|c| c.iter().fold(0, |m, &v| m | bit(v))).collect();
        let mut next: Cells = Vec::with_capacity(cells.len());
        for cell in cells.iter() {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u8>, usize)> = cell
                .iter()
                .map(|&v| {
                    let sig = masks.iter().map(|m| (g.nbrs(v) & m).count_ones() as u8).collect();
                    (sig, v)
                })
                .collect();
            keyed.sort_by(|a, b| a.0.cmp(&b.0));
            let mut start = next.len();
            for (i, (sig, v)) in keyed.iter().enumerate() {
                if i == 0 || *sig != keyed[i - 1].0 {
                    next.push(Vec::new());
                    start = next.len() - 1;
                }
                next[start].push(*v);
            }
        }
        let changed = next.len() != cells.len();
        *cells = next;
        if !changed {
            return;
        }
    }
}

fn certificate(g: &BitGraph, order: &[usize]) -> Vec<u64> {
    let mut pos = vec![0usize; g.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    order
        .iter()
        .map(|&v| ones(g.nbrs(v)).fold(0u64, |row, w| row | (1u64 << (63 - pos[w]))))
        .collect()
}

struct Search<'g> {
    g: &'g BitGraph,
    best: Option<(Vec<u64>, Vec<usize>)>,
    first: Option<(Vec<u64>, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn visit(&mut self, cells: Cells, prefix: &mut Vec<usize>) {
        if cells.len() == self.g.len() {
            self.leaf(cells.iter().map(|c| c[0]).collect());
            return;
        }
        let target = cells.iter().position(|c| c.len() > 1).expect("non-discrete partition");
        let candidates = cells[target].clone();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &candidates {
            if !explored.is_empty() {
                let root = self.orbits_fixing(prefix);
                if explored.iter().any(|&w| root[w] == root[v]) {
                    continue;
                }
            }
            explored.push(v);
            let mut child = cells.clone();
            let rest: Vec<usize> = child[target].iter().copied().filter(|&w| w != v).collect();
            child[target] = rest;
            child.insert(target, vec![v]);
            refine(self.g, &mut child);
            prefix.push(v);
            self.visit(child, prefix);
            prefix.pop();
        }
    }

    fn leaf(&mut self, order: Vec<usize>) {
        let cert = certificate(self.g, &order);
        match &self.first {
            None => self.first = Some((cert.clone(), order.clone())),
            Some((c, o)) if *c == cert => {
                let gen = perm_between(o, &order);
                self.generators.push(gen);
            }
            _ => {}
        }
        match &self.best {
            None => self.best = Some((cert, order)),
            Some((c, o)) => {
                if *c == cert {
                    let from_first = self.first.as_ref().is_some_and(|(_, f)| f == o);
                    if !from_first {
                        let gen = perm_between(o, &order);
                        self.generators.push(gen);
                    }
                } else if cert < *c {
                    self.best = Some((cert, order));
                }
            }
        }
    }

    /// Orbit representatives of the group generated by the known
    /// automorphisms that fix every point of `prefix`.
    fn orbits_fixing(&self, prefix: &[usize]) -> Vec<usize> {
        let n = self.g.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for gen in &self.generators {
            if prefix.iter().any(|&p| gen[p] != p) {
                continue;
            }
            for (x, &y) in gen.iter().enumerate() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        (0..n).map(|x| find(&mut parent, x)).collect()
    }
}

/// The permutation sending `from[i]` to `to[i]`.
fn perm_between(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut p = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        p[a] = b;
    }
    p
}
