//! Contractibility, simple points, simple edges and simple pairs.
//!
//! A space is contractible iff some sequence of simple-point deletions
//! reduces it to a single point. It is unknown whether every maximal
//! deletion sequence from a contractible space ends at a point, so the
//! decision procedure backtracks over the choice of point, trying
//! label-least first, and memoizes verdicts on canonical forms. Verdicts
//! of rims and of intermediate states share one cache.
//!
//! Exact shortcuts applied before searching: a single point is
//! contractible, a space with a point adjacent to all others is a cone and
//! so contractible, disconnected spaces are not, and neither is any space
//! whose Euler characteristic differs from 1.

use std::collections::{HashMap, HashSet};
use std::sync::{OnceLock, RwLock};

use crate::bits::{bit, ones, BitGraph, MAX_BITS};
use crate::canon::{key_of, CanonicalKey};
use crate::error::{Error, Result};
use crate::euler::characteristic_of;
use crate::par::{map_ordered, Execution};
use crate::space::{DigitalSpace, PointId, PointSet};

pub const DEFAULT_MAX_SIZE: usize = 25;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractibilityVerdict {
    pub contractible: bool,
    /// When contractible: points removed in order, each simple at its
    /// removal time, leaving exactly one point.
    pub witness: Option<Vec<PointId>>,
}

/// Outcome of deleting the label-least simple point until none is left,
/// with no backtracking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyOutcome {
    pub removed: Vec<PointId>,
    pub remaining: usize,
}

impl GreedyOutcome {
    pub fn reached_point(&self) -> bool {
        self.remaining == 1
    }
}

/// Contractibility oracle with a size cap and a shared verdict cache.
#[derive(Debug)]
pub struct Contractor {
    max_size: usize,
    memo: RwLock<HashMap<CanonicalKey, bool>>,
}

impl Default for Contractor {
    fn default() -> Self {
        Contractor::new(DEFAULT_MAX_SIZE)
    }
}

/// Process-wide oracle with the default cap, used by the free functions.
pub fn shared() -> &'static Contractor {
    static SHARED: OnceLock<Contractor> = OnceLock::new();
    SHARED.get_or_init(Contractor::default)
}

impl Contractor {
    /// `max_size` is clamped to 64, the widest supported space.
    pub fn new(max_size: usize) -> Self {
        Contractor { max_size: max_size.min(MAX_BITS), memo: RwLock::new(HashMap::new()) }
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn cache_len(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }

    pub fn clear_cache(&self) {
        self.memo.write().expect("memo lock").clear();
    }

    fn bits(&self, space: &DigitalSpace) -> Result<BitGraph> {
        if space.is_empty() {
            return Err(Error::EmptySpace);
        }
        BitGraph::from_space(space, self.max_size)
    }

    pub fn is_contractible(&self, space: &DigitalSpace) -> Result<ContractibilityVerdict> {
        let g = self.bits(space)?;
        let witness = if g.is_connected_within(g.full()) { self.witness(&g) } else { None };
        Ok(match witness {
            Some(seq) => ContractibilityVerdict {
                contractible: true,
                witness: Some(seq.into_iter().map(|i| space.points()[i].clone()).collect()),
            },
            None => ContractibilityVerdict { contractible: false, witness: None },
        })
    }

    /// Whether the subspace induced by `subset` is contractible. The empty
    /// subspace is not.
    pub fn is_subspace_contractible(&self, space: &DigitalSpace, subset: &PointSet) -> Result<bool> {
        let idx = subset.iter().map(|p| space.require(p)).collect::<Result<Vec<_>>>()?;
        self.indices_contractible(space, &idx)
    }

    /// `idx` sorted ascending.
    pub(crate) fn indices_contractible(&self, space: &DigitalSpace, idx: &[usize]) -> Result<bool> {
        if idx.is_empty() {
            return Ok(false);
        }
        let g = BitGraph::from_space_subset(space, idx, self.max_size)?;
        Ok(self.collapsible(&g, g.full()))
    }

    pub fn is_simple_point(&self, space: &DigitalSpace, v: &PointId) -> Result<bool> {
        let i = space.require(v)?;
        self.indices_contractible(space, space.neighbor_indices(i))
    }

    pub fn simple_points(&self, space: &DigitalSpace) -> Result<Vec<PointId>> {
        self.simple_points_with(space, Execution::default())
    }

    pub fn simple_points_with(&self, space: &DigitalSpace, exec: Execution) -> Result<Vec<PointId>> {
        if space.is_empty() {
            return Err(Error::EmptySpace);
        }
        let idx: Vec<usize> = (0..space.len()).collect();
        let flags = map_ordered(&idx, exec, |&i| self.indices_contractible(space, space.neighbor_indices(i)));
        collect_flagged(flags, idx.into_iter().map(|i| space.points()[i].clone()))
    }

    fn pair_indices(space: &DigitalSpace, v: &PointId, u: &PointId) -> Result<(usize, usize)> {
        let i = space.require(v)?;
        let j = space.require(u)?;
        if i == j {
            return Err(Error::PreconditionViolated(format!("pair ({v} {u}) needs two distinct points")));
        }
        Ok((i, j))
    }

    fn joint_rim_contractible(&self, space: &DigitalSpace, i: usize, j: usize) -> Result<bool> {
        self.indices_contractible(space, &space.joint_rim_indices(&[i, j]))
    }

    pub fn is_simple_edge_for_deletion(&self, space: &DigitalSpace, v: &PointId, u: &PointId) -> Result<bool> {
        let (i, j) = Self::pair_indices(space, v, u)?;
        if !space.adjacent(v, u) {
            return Ok(false);
        }
        self.joint_rim_contractible(space, i, j)
    }

    pub fn is_simple_edge_for_attachment(&self, space: &DigitalSpace, v: &PointId, u: &PointId) -> Result<bool> {
        let (i, j) = Self::pair_indices(space, v, u)?;
        if space.adjacent(v, u) {
            return Ok(false);
        }
        self.joint_rim_contractible(space, i, j)
    }

    /// Edges `(a, b)`, `a < b`, whose deletion is a simple-edge deletion, in pair order.
    pub fn simple_edges_for_deletion(&self, space: &DigitalSpace, exec: Execution) -> Result<Vec<(PointId, PointId)>> {
        let pairs: Vec<(usize, usize)> = (0..space.len())
            .flat_map(|i| space.neighbor_indices(i).iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
            .collect();
        self.filter_pairs(space, pairs, exec)
    }

    /// Non-adjacent pairs whose joint rim is contractible, in pair order.
    pub fn simple_edges_for_attachment(&self, space: &DigitalSpace, exec: Execution) -> Result<Vec<(PointId, PointId)>> {
        let n = space.len();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| space.neighbor_indices(i).binary_search(&j).is_err())
            .collect();
        self.filter_pairs(space, pairs, exec)
    }

    fn filter_pairs(
        &self,
        space: &DigitalSpace,
        pairs: Vec<(usize, usize)>,
        exec: Execution,
    ) -> Result<Vec<(PointId, PointId)>> {
        let flags = map_ordered(&pairs, exec, |&(i, j)| self.joint_rim_contractible(space, i, j));
        let labels = pairs.iter().map(|&(i, j)| (space.points()[i].clone(), space.points()[j].clone()));
        collect_flagged(flags, labels)
    }

    /// A deletion sequence of simple points taking `space` down to the
    /// subspace induced by `target`. `Ok(None)` means exhaustive search
    /// found none even though both spaces are contractible; such an input
    /// is a counterexample candidate for subspace reachability.
    pub fn collapse_to_subspace(&self, space: &DigitalSpace, target: &PointSet) -> Result<Option<Vec<PointId>>> {
        let g = self.bits(space)?;
        let mut target_mask = 0u64;
        for p in target {
            target_mask |= bit(space.require(p)?);
        }
        if !self.is_contractible(space)?.contractible {
            return Err(Error::PreconditionViolated("space is not contractible".into()));
        }
        if !self.is_subspace_contractible(space, target)? {
            return Err(Error::PreconditionViolated("target subspace is not contractible".into()));
        }
        let mut failed = HashSet::new();
        let mut seq = Vec::new();
        let found = self.collapse_dfs(&g, g.full(), target_mask, &mut failed, &mut seq);
        Ok(found.then(|| seq.into_iter().map(|i| space.points()[i].clone()).collect()))
    }

    fn collapse_dfs(&self, g: &BitGraph, mask: u64, target: u64, failed: &mut HashSet<u64>, seq: &mut Vec<usize>) -> bool {
        if mask == target {
            return true;
        }
        if failed.contains(&mask) {
            return false;
        }
        for v in ones(mask & !target) {
            if self.collapsible(g, g.nbrs(v) & mask) {
                seq.push(v);
                if self.collapse_dfs(g, mask & !bit(v), target, failed, seq) {
                    return true;
                }
                seq.pop();
            }
        }
        failed.insert(mask);
        false
    }

    /// Deletes the label-least simple point (rims decided exactly) until no
    /// simple point remains, never revisiting a choice.
    pub fn greedy_collapse(&self, space: &DigitalSpace) -> Result<GreedyOutcome> {
        let g = self.bits(space)?;
        let mut mask = g.full();
        let mut removed = Vec::new();
        while mask.count_ones() > 1 {
            match ones(mask).find(|&v| self.collapsible(&g, g.nbrs(v) & mask)) {
                Some(v) => {
                    removed.push(space.points()[v].clone());
                    mask &= !bit(v);
                }
                None => break,
            }
        }
        Ok(GreedyOutcome { removed, remaining: mask.count_ones() as usize })
    }

    fn witness(&self, g: &BitGraph) -> Option<Vec<usize>> {
        let mut mask = g.full();
        if !self.collapsible(g, mask) {
            return None;
        }
        let mut seq = Vec::with_capacity(g.len());
        while mask.count_ones() > 1 {
            let v = ones(mask)
                .find(|&v| self.collapsible(g, g.nbrs(v) & mask) && self.collapsible(g, mask & !bit(v)))
                .expect("a collapsible space keeps a collapsible simple-point deletion");
            seq.push(v);
            mask &= !bit(v);
        }
        Some(seq)
    }

    /// Whether the subgraph of `g` induced by `mask` collapses to a point.
    fn collapsible(&self, g: &BitGraph, mask: u64) -> bool {
        match mask.count_ones() {
            0 => return false,
            1 => return true,
            _ => {}
        }
        if g.dominating_within(mask).is_some() {
            return true;
        }
        if !g.is_connected_within(mask) {
            return false;
        }
        let sub = if mask == g.full() { g.clone() } else { g.induced(mask) };
        let key = key_of(&sub);
        if let Some(&known) = self.memo.read().expect("memo lock").get(&key) {
            return known;
        }
        let verdict = characteristic_of(&sub) == 1 && {
            let full = sub.full();
            ones(full).any(|v| self.collapsible(&sub, sub.nbrs(v)) && self.collapsible(&sub, full & !bit(v)))
        };
        *self.memo.write().expect("memo lock").entry(key).or_insert(verdict)
    }
}

fn collect_flagged<T>(flags: Vec<Result<bool>>, items: impl Iterator<Item = T>) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (flag, item) in flags.into_iter().zip(items) {
        if flag? {
            out.push(item);
        }
    }
    Ok(out)
}

/// Whether `{v, u}` is a simple pair: adjacent, and no point of
/// `A = O(v) - O(u) - u` is adjacent to a point of `B = O(u) - O(v) - v`.
/// Its neighborhood `U(v) ∪ U(u)` is then a double cone.
pub fn is_simple_pair(space: &DigitalSpace, v: &PointId, u: &PointId) -> Result<bool> {
    let (i, j) = Contractor::pair_indices(space, v, u)?;
    Ok(simple_pair_indices(space, i, j))
}

pub(crate) fn simple_pair_indices(space: &DigitalSpace, i: usize, j: usize) -> bool {
    let ni = space.neighbor_indices(i);
    let nj = space.neighbor_indices(j);
    if ni.binary_search(&j).is_err() {
        return false;
    }
    let only_i: Vec<usize> = ni.iter().copied().filter(|&x| x != j && nj.binary_search(&x).is_err()).collect();
    let only_j: Vec<usize> = nj.iter().copied().filter(|&x| x != i && ni.binary_search(&x).is_err()).collect();
    only_i
        .iter()
        .all(|&a| only_j.iter().all(|b| space.neighbor_indices(a).binary_search(b).is_err()))
}

/// All simple pairs `(a, b)`, `a < b`, in pair order.
pub fn simple_pairs(space: &DigitalSpace, exec: Execution) -> Vec<(PointId, PointId)> {
    let pairs: Vec<(usize, usize)> = (0..space.len())
        .flat_map(|i| space.neighbor_indices(i).iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
        .collect();
    let flags = map_ordered(&pairs, exec, |&(i, j)| simple_pair_indices(space, i, j));
    pairs
        .into_iter()
        .zip(flags)
        .filter(|(_, f)| *f)
        .map(|((i, j), _)| (space.points()[i].clone(), space.points()[j].clone()))
        .collect()
}

pub fn is_contractible(space: &DigitalSpace) -> Result<ContractibilityVerdict> {
    shared().is_contractible(space)
}

pub fn is_simple_point(space: &DigitalSpace, v: &PointId) -> Result<bool> {
    shared().is_simple_point(space, v)
}

pub fn simple_points(space: &DigitalSpace) -> Result<Vec<PointId>> {
    shared().simple_points(space)
}

pub fn is_simple_edge_for_deletion(space: &DigitalSpace, v: &PointId, u: &PointId) -> Result<bool> {
    shared().is_simple_edge_for_deletion(space, v, u)
}

pub fn is_simple_edge_for_attachment(space: &DigitalSpace, v: &PointId, u: &PointId) -> Result<bool> {
    shared().is_simple_edge_for_attachment(space, v, u)
}

pub fn collapse_to_subspace(space: &DigitalSpace, target: &PointSet) -> Result<Option<Vec<PointId>>> {
    shared().collapse_to_subspace(space, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::pid;

    fn path(labels: &[&str]) -> DigitalSpace {
        let edges: Vec<(&str, &str)> = labels.windows(2).map(|w| (w[0], w[1])).collect();
        DigitalSpace::from_labels(labels, &edges)
    }

    fn cycle(labels: &[&str]) -> DigitalSpace {
        let n = labels.len();
        let edges: Vec<(&str, &str)> = (0..n).map(|i| (labels[i], labels[(i + 1) % n])).collect();
        DigitalSpace::from_labels(labels, &edges)
    }

    fn complete(n: usize) -> DigitalSpace {
        let labels: Vec<String> = (0..n).map(|i| format!("k{i}")).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((labels[i].as_str(), labels[j].as_str()));
            }
        }
        let pts: Vec<&str> = labels.iter().map(String::as_str).collect();
        DigitalSpace::from_labels(&pts, &edges)
    }

    fn c4() -> DigitalSpace {
        cycle(&["1", "2", "3", "4"])
    }

    fn octahedron() -> DigitalSpace {
        let s0 = |a: &str, b: &str| DigitalSpace::from_labels(&[a, b], &[]);
        s0("a0", "b0").join(&s0("a1", "b1")).unwrap().join(&s0("a2", "b2")).unwrap()
    }

    fn set(labels: &[&str]) -> PointSet {
        labels.iter().map(|l| pid(*l)).collect()
    }

    fn replay_ok(space: &DigitalSpace, witness: &[PointId]) -> bool {
        let mut cur = space.clone();
        for p in witness {
            if !is_simple_point(&cur, p).unwrap() {
                return false;
            }
            let mut keep = cur.point_set();
            keep.remove(p);
            cur = cur.induced_subspace(&keep).unwrap();
        }
        cur.len() == 1
    }

    #[test]
    fn contractibility_examples() {
        let k1 = DigitalSpace::from_labels(&["a"], &[]);
        let v = is_contractible(&k1).unwrap();
        assert!(v.contractible);
        assert_eq!(v.witness, Some(vec![]));

        for n in 2..=8 {
            let g = complete(n);
            let v = is_contractible(&g).unwrap();
            assert!(v.contractible, "K({n})");
            assert!(replay_ok(&g, v.witness.as_ref().unwrap()));
        }

        let v = is_contractible(&c4()).unwrap();
        assert_eq!(v, ContractibilityVerdict { contractible: false, witness: None });

        let p = path(&["a", "b", "c", "d"]);
        let v = is_contractible(&p).unwrap();
        assert!(v.contractible);
        let w = v.witness.unwrap();
        assert_eq!(w, vec![pid("a"), pid("b"), pid("c")]);
        assert!(replay_ok(&p, &w));
    }

    #[test]
    fn contractibility_errors() {
        assert_eq!(is_contractible(&DigitalSpace::empty()).unwrap_err(), Error::EmptySpace);
        let small = Contractor::new(3);
        assert_eq!(
            small.is_contractible(&complete(4)).unwrap_err(),
            Error::SizeCapExceeded { size: 4, cap: 3 }
        );
        let disconnected = DigitalSpace::from_labels(&["a", "b"], &[]);
        assert!(!is_contractible(&disconnected).unwrap().contractible);
    }

    #[test]
    fn simple_point_examples() {
        let p = path(&["a", "b", "c"]);
        assert!(is_simple_point(&p, &pid("a")).unwrap());
        assert!(!is_simple_point(&c4(), &pid("1")).unwrap());
        let k4 = complete(4);
        for q in k4.points() {
            assert!(is_simple_point(&k4, q).unwrap());
        }
        let k1 = DigitalSpace::from_labels(&["a"], &[]);
        assert!(!is_simple_point(&k1, &pid("a")).unwrap());
        assert!(is_simple_point(&k1, &pid("z")).is_err());
    }

    #[test]
    fn simple_point_batches() {
        assert!(simple_points(&octahedron()).unwrap().is_empty());
        assert_eq!(simple_points(&complete(3)).unwrap().len(), 3);
        assert_eq!(simple_points(&path(&["a", "b", "c"])).unwrap(), vec![pid("a"), pid("c")]);
        let g = octahedron().join(&path(&["x", "y"])).unwrap();
        assert_eq!(
            shared().simple_points_with(&g, Execution::Sequential).unwrap(),
            shared().simple_points_with(&g, Execution::Parallel).unwrap()
        );
    }

    #[test]
    fn simple_edge_examples() {
        let k3 = DigitalSpace::from_labels(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]);
        assert!(is_simple_edge_for_deletion(&k3, &pid("a"), &pid("b")).unwrap());
        assert!(!is_simple_edge_for_deletion(&c4(), &pid("1"), &pid("2")).unwrap());
        assert!(!is_simple_edge_for_attachment(&k3, &pid("a"), &pid("b")).unwrap());

        let p4 = path(&["1", "2", "3", "4"]);
        assert!(is_simple_edge_for_attachment(&p4, &pid("1"), &pid("3")).unwrap());
        assert!(!is_simple_edge_for_attachment(&c4(), &pid("1"), &pid("3")).unwrap());

        assert!(matches!(
            is_simple_edge_for_deletion(&k3, &pid("a"), &pid("a")),
            Err(Error::PreconditionViolated(_))
        ));
        assert_eq!(
            is_simple_edge_for_attachment(&k3, &pid("a"), &pid("q")).unwrap_err(),
            Error::UnknownPoint(pid("q"))
        );
    }

    #[test]
    fn simple_edge_in_a_triangle_pair() {
        // O(v) = {u, a, c}, O(u) = {v, b, c}: the joint rim {c} is a point.
        let g = DigitalSpace::from_edges(
            &[],
            &[("v", "u"), ("v", "a"), ("v", "c"), ("u", "b"), ("u", "c"), ("a", "c"), ("b", "c")],
        );
        assert!(is_simple_edge_for_deletion(&g, &pid("v"), &pid("u")).unwrap());
    }

    #[test]
    fn simple_pair_examples() {
        let c5 = cycle(&["1", "2", "3", "4", "5"]);
        assert!(is_simple_pair(&c5, &pid("1"), &pid("2")).unwrap());
        assert!(!is_simple_pair(&c4(), &pid("1"), &pid("2")).unwrap());
        assert!(!is_simple_pair(&c5, &pid("1"), &pid("3")).unwrap());

        // A double cone neighborhood with A = {a, a2}, B = {b}, C = {c}.
        let g = DigitalSpace::from_edges(
            &[],
            &[
                ("v", "u"),
                ("v", "a"),
                ("v", "a2"),
                ("v", "c"),
                ("u", "b"),
                ("u", "c"),
                ("a", "a2"),
                ("a", "c"),
                ("b", "c"),
                ("a2", "x"),
                ("b", "x"),
            ],
        );
        assert!(is_simple_pair(&g, &pid("v"), &pid("u")).unwrap());
        let ball = g.ball(&pid("v")).unwrap().union(&g.ball(&pid("u")).unwrap());
        assert!(shared().is_subspace_contractible(&g, &ball).unwrap());

        let pairs = simple_pairs(&c5, Execution::Sequential);
        assert_eq!(pairs.len(), 5);
    }

    #[test]
    fn collapse_to_subspace_examples() {
        let k3 = DigitalSpace::from_labels(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]);
        let seq = collapse_to_subspace(&k3, &set(&["a"])).unwrap().unwrap();
        assert_eq!(seq.len(), 2);
        assert!(!seq.contains(&pid("a")));

        let wheel = DigitalSpace::cone(&pid("v"), &c4()).unwrap();
        let seq = collapse_to_subspace(&wheel, &set(&["v"])).unwrap().unwrap();
        assert_eq!(seq.len(), 4);

        let p = path(&["a", "b", "c"]);
        assert_eq!(collapse_to_subspace(&p, &set(&["b", "c"])).unwrap(), Some(vec![pid("a")]));

        assert!(matches!(
            collapse_to_subspace(&c4(), &set(&["1"])),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            collapse_to_subspace(&p, &set(&["a", "c"])),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn greedy_collapse_on_cone() {
        let wheel = DigitalSpace::cone(&pid("v"), &c4()).unwrap();
        let out = shared().greedy_collapse(&wheel).unwrap();
        assert!(out.reached_point());
        assert_eq!(out.removed.len(), 4);
        let stuck = shared().greedy_collapse(&c4()).unwrap();
        assert_eq!(stuck, GreedyOutcome { removed: vec![], remaining: 4 });
    }

    #[test]
    fn memo_is_populated_and_clearable() {
        let c = Contractor::new(12);
        let g = octahedron().join(&DigitalSpace::from_labels(&["p"], &[])).unwrap();
        assert!(c.is_contractible(&g).unwrap().contractible);
        let before = c.cache_len();
        let _ = c.is_contractible(&octahedron()).unwrap();
        assert!(c.cache_len() >= before);
        c.clear_cache();
        assert_eq!(c.cache_len(), 0);
    }

    #[test]
    fn contractible_subspace_that_no_deletion_sequence_reaches() {
        // Both spaces are contractible, but neither 0 nor 5 is simple in g:
        // each rim contains a 4-cycle.
        let g = DigitalSpace::from_labels(
            &["0", "1", "2", "3", "4", "5", "6"],
            &[
                ("0", "1"), ("0", "2"), ("0", "3"), ("0", "4"), ("0", "5"), ("1", "4"), ("1", "5"),
                ("1", "6"), ("2", "4"), ("2", "5"), ("3", "5"), ("3", "6"), ("5", "6"),
            ],
        );
        let h: PointSet = ["1", "2", "3", "4", "6"].into_iter().map(pid).collect();
        assert!(is_contractible(&g).unwrap().contractible);
        assert!(shared().is_subspace_contractible(&g, &h).unwrap());
        assert!(!is_simple_point(&g, &pid("0")).unwrap());
        assert!(!is_simple_point(&g, &pid("5")).unwrap());
        assert_eq!(collapse_to_subspace(&g, &h).unwrap(), None);
    }
}
