//! Digital spaces: finite simple graphs with rim, ball, joint rim, join,
//! cone and double cone constructions.
//!
//! A [`DigitalSpace`] is immutable. Points are kept sorted under the label
//! order and every neighbor list is sorted, so iteration is deterministic
//! and two spaces compare equal exactly when they have the same labeled
//! points and edges.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Point label. Any nonempty token without whitespace or `#`; the bare
/// tokens `:` and `->` are reserved by the step syntax.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(String);

impl PointId {
    pub fn new(label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let valid = !label.is_empty()
            && !label.chars().any(|c| c.is_whitespace() || c == '#')
            && label != ":"
            && label != "->";
        if valid {
            Ok(PointId(label))
        } else {
            Err(Error::InvalidLabel(label))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl std::str::FromStr for PointId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PointId::new(s)
    }
}

/// Shorthand used heavily by tests and generators. Panics on an invalid label.
pub fn pid(label: impl Into<String>) -> PointId {
    let label = label.into();
    PointId::new(label.clone()).unwrap_or_else(|_| panic!("invalid point label {label:?}"))
}

/// A set of points, interpreted relative to some ambient space.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointSet(BTreeSet<PointId>);

impl PointSet {
    pub fn new() -> Self {
        PointSet(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: &PointId) -> bool {
        self.0.contains(p)
    }

    pub fn insert(&mut self, p: PointId) -> bool {
        self.0.insert(p)
    }

    pub fn remove(&mut self, p: &PointId) -> bool {
        self.0.remove(p)
    }

    /// Members in label order.
    pub fn iter(&self) -> impl Iterator<Item = &PointId> + '_ {
        self.0.iter()
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        PointSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        PointSet(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        PointSet(self.0.difference(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl FromIterator<PointId> for PointSet {
    fn from_iter<I: IntoIterator<Item = PointId>>(iter: I) -> Self {
        PointSet(iter.into_iter().collect())
    }
}

impl<'a> FromIterator<&'a PointId> for PointSet {
    fn from_iter<I: IntoIterator<Item = &'a PointId>>(iter: I) -> Self {
        PointSet(iter.into_iter().cloned().collect())
    }
}

impl IntoIterator for PointSet {
    type Item = PointId;
    type IntoIter = std::collections::btree_set::IntoIter<PointId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a PointId;
    type IntoIter = std::collections::btree_set::Iter<'a, PointId>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A finite digital space `G = (V, W)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DigitalSpace {
    points: Vec<PointId>,
    adj: Vec<Vec<usize>>,
}

impl fmt::Debug for DigitalSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges().map(|(a, b)| format!("{a}-{b}")).collect();
        f.debug_struct("DigitalSpace")
            .field("points", &self.points)
            .field("edges", &edges)
            .finish()
    }
}

impl DigitalSpace {
    /// Builds a space from declared points and unordered edges. Repeated
    /// edges, in either orientation, are stored once.
    pub fn build<P, E>(points: P, edges: E) -> Result<Self>
    where
        P: IntoIterator<Item = PointId>,
        E: IntoIterator<Item = (PointId, PointId)>,
    {
        let mut declared = BTreeSet::new();
        for p in points {
            if declared.contains(&p) {
                return Err(Error::DuplicatePoint(p));
            }
            declared.insert(p);
        }
        let points: Vec<PointId> = declared.into_iter().collect();
        let mut adj = vec![Vec::new(); points.len()];
        for (a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let i = points.binary_search(&a).map_err(|_| Error::UnknownPoint(a.clone()))?;
            let j = points.binary_search(&b).map_err(|_| Error::UnknownPoint(b.clone()))?;
            adj[i].push(j);
            adj[j].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(DigitalSpace { points, adj })
    }

    /// Convenience constructor from string labels. Panics on invalid input;
    /// intended for fixtures.
    pub fn from_labels(points: &[&str], edges: &[(&str, &str)]) -> Self {
        Self::build(
            points.iter().map(|p| pid(*p)),
            edges.iter().map(|(a, b)| (pid(*a), pid(*b))),
        )
        .expect("invalid fixture")
    }

    /// Space whose points are exactly the endpoints of `edges` plus `isolated`.
    pub fn from_edges(isolated: &[&str], edges: &[(&str, &str)]) -> Self {
        let mut pts: BTreeSet<&str> = isolated.iter().copied().collect();
        for (a, b) in edges {
            pts.insert(a);
            pts.insert(b);
        }
        let pts: Vec<&str> = pts.into_iter().collect();
        Self::from_labels(&pts, edges)
    }

    pub fn empty() -> Self {
        DigitalSpace::default()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Points in label order.
    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    pub fn point_set(&self) -> PointSet {
        self.points.iter().collect()
    }

    pub fn contains(&self, p: &PointId) -> bool {
        self.index_of(p).is_some()
    }

    pub(crate) fn index_of(&self, p: &PointId) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    pub(crate) fn require(&self, p: &PointId) -> Result<usize> {
        self.index_of(p).ok_or_else(|| Error::UnknownPoint(p.clone()))
    }

    pub(crate) fn neighbor_indices(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, p: &PointId) -> Result<usize> {
        Ok(self.adj[self.require(p)?].len())
    }

    pub fn adjacent(&self, a: &PointId, b: &PointId) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.adj[i].binary_search(&j).is_ok(),
            _ => false,
        }
    }

    /// Edges as `(a, b)` with `a < b`, in lexicographic pair order.
    pub fn edges(&self) -> impl Iterator<Item = (&PointId, &PointId)> + '_ {
        self.adj.iter().enumerate().flat_map(move |(i, list)| {
            list.iter()
                .filter(move |&&j| j > i)
                .map(move |&j| (&self.points[i], &self.points[j]))
        })
    }

    /// Labels owned, for rebuilding modified spaces.
    pub(crate) fn edge_list(&self) -> Vec<(PointId, PointId)> {
        self.edges().map(|(a, b)| (a.clone(), b.clone())).collect()
    }

    pub fn induced_subspace(&self, subset: &PointSet) -> Result<DigitalSpace> {
        let mut keep = Vec::with_capacity(subset.len());
        for p in subset {
            keep.push(self.require(p)?);
        }
        Ok(self.induced_by_indices(&keep))
    }

    /// `keep` must be sorted ascending.
    pub(crate) fn induced_by_indices(&self, keep: &[usize]) -> DigitalSpace {
        let mut remap = vec![usize::MAX; self.len()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let points = keep.iter().map(|&i| self.points[i].clone()).collect();
        let adj = keep
            .iter()
            .map(|&i| {
                self.adj[i]
                    .iter()
                    .filter_map(|&j| (remap[j] != usize::MAX).then_some(remap[j]))
                    .collect()
            })
            .collect();
        DigitalSpace { points, adj }
    }

    /// The rim `O(v)`: all points adjacent to `v`.
    pub fn rim(&self, v: &PointId) -> Result<PointSet> {
        let i = self.require(v)?;
        Ok(self.adj[i].iter().map(|&j| &self.points[j]).collect())
    }

    /// The ball `U(v) = O(v) ∪ {v}`.
    pub fn ball(&self, v: &PointId) -> Result<PointSet> {
        let mut set = self.rim(v)?;
        set.insert(v.clone());
        Ok(set)
    }

    /// Points adjacent to every member of `subset`.
    pub fn joint_rim(&self, subset: &PointSet) -> Result<PointSet> {
        if subset.is_empty() {
            return Err(Error::EmptySubspace);
        }
        let idx = subset.iter().map(|p| self.require(p)).collect::<Result<Vec<_>>>()?;
        Ok(self.joint_rim_indices(&idx).into_iter().map(|j| self.points[j].clone()).collect())
    }

    pub(crate) fn joint_rim_indices(&self, idx: &[usize]) -> Vec<usize> {
        let mut common: Vec<usize> = self.adj[idx[0]].clone();
        for &i in &idx[1..] {
            let other = &self.adj[i];
            common.retain(|j| other.binary_search(j).is_ok());
        }
        common
    }

    pub(crate) fn joint_rim_pair(&self, v: &PointId, u: &PointId) -> Result<PointSet> {
        let set: PointSet = [v.clone(), u.clone()].into_iter().collect();
        self.joint_rim(&set)
    }

    /// Join `G * H` of spaces with disjoint point sets.
    pub fn join(&self, other: &DigitalSpace) -> Result<DigitalSpace> {
        if let Some(p) = other.points.iter().find(|p| self.contains(p)) {
            return Err(Error::PointCollision(p.clone()));
        }
        let mut edges = self.edge_list();
        edges.extend(other.edge_list());
        for a in &self.points {
            for b in &other.points {
                edges.push((a.clone(), b.clone()));
            }
        }
        let points = self.points.iter().chain(other.points.iter()).cloned();
        DigitalSpace::build(points, edges)
    }

    /// Cone `apex * G`.
    pub fn cone(apex: &PointId, base: &DigitalSpace) -> Result<DigitalSpace> {
        if base.contains(apex) {
            return Err(Error::PointCollision(apex.clone()));
        }
        DigitalSpace::build([apex.clone()], []).and_then(|k1| k1.join(base))
    }

    /// Double cone `{v, u} ∪ A ∪ B ∪ C`: `v ~ u`, `v` coning `A ∪ C`, `u`
    /// coning `B ∪ C`, and no edges between distinct parts.
    pub fn double_cone(
        v: &PointId,
        u: &PointId,
        a: &DigitalSpace,
        b: &DigitalSpace,
        c: &DigitalSpace,
    ) -> Result<DigitalSpace> {
        if v == u {
            return Err(Error::PointCollision(u.clone()));
        }
        let mut seen: BTreeSet<&PointId> = [v, u].into_iter().collect();
        for p in a.points.iter().chain(&b.points).chain(&c.points) {
            if !seen.insert(p) {
                return Err(Error::PointCollision(p.clone()));
            }
        }
        let mut edges = vec![(v.clone(), u.clone())];
        for part in [a, b, c] {
            edges.extend(part.edge_list());
        }
        for p in a.points.iter().chain(&c.points) {
            edges.push((v.clone(), p.clone()));
        }
        for p in b.points.iter().chain(&c.points) {
            edges.push((u.clone(), p.clone()));
        }
        let points = seen.into_iter().cloned().collect::<Vec<_>>();
        DigitalSpace::build(points, edges)
    }

    pub fn is_connected(&self) -> Result<bool> {
        if self.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for &j in &self.adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        Ok(count == self.len())
    }

    pub fn is_complete(&self) -> Result<bool> {
        if self.is_empty() {
            return Err(Error::EmptySpace);
        }
        Ok(self.adj.iter().all(|l| l.len() + 1 == self.len()))
    }

    /// Sorted degree sequence, used as a cheap isomorphism invariant.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        d.sort_unstable();
        d
    }

    /// Same space with every label passed through `f`. `f` must be injective.
    pub fn relabel(&self, mut f: impl FnMut(&PointId) -> PointId) -> Result<DigitalSpace> {
        let map: Vec<PointId> = self.points.iter().map(&mut f).collect();
        let edges = self.edges().map(|(a, b)| {
            let i = self.index_of(a).unwrap();
            let j = self.index_of(b).unwrap();
            (map[i].clone(), map[j].clone())
        });
        let edges: Vec<_> = edges.collect();
        DigitalSpace::build(map.clone(), edges)
    }

    /// Same space with point `v` added, adjacent to exactly `rim`.
    pub(crate) fn with_point(&self, v: &PointId, rim: &PointSet) -> Result<DigitalSpace> {
        if self.contains(v) {
            return Err(Error::PointCollision(v.clone()));
        }
        let mut edges = self.edge_list();
        for p in rim {
            self.require(p)?;
            edges.push((v.clone(), p.clone()));
        }
        DigitalSpace::build(self.points.iter().cloned().chain([v.clone()]), edges)
    }

    pub(crate) fn without_points(&self, drop: &[usize]) -> DigitalSpace {
        let keep: Vec<usize> = (0..self.len()).filter(|i| !drop.contains(i)).collect();
        self.induced_by_indices(&keep)
    }

    pub(crate) fn with_edge_toggled(&self, i: usize, j: usize, present: bool) -> DigitalSpace {
        let mut adj = self.adj.clone();
        if present {
            for (a, b) in [(i, j), (j, i)] {
                if let Err(pos) = adj[a].binary_search(&b) {
                    adj[a].insert(pos, b);
                }
            }
        } else {
            adj[i].retain(|&x| x != j);
            adj[j].retain(|&x| x != i);
        }
        DigitalSpace { points: self.points.clone(), adj }
    }
}
