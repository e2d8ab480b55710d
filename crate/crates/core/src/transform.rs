//! The six contractible transformations as validated rewrites, a
//! deterministic reduction engine, and a one-sided homotopy-equivalence
//! test built on it.
//!
//! Every rewrite checks its precondition first and returns a fresh space;
//! nothing is produced on error.

use std::fmt;
use std::str::FromStr;

use crate::canon::are_isomorphic;
use crate::contract::{shared, simple_pair_indices, Contractor};
use crate::error::{Error, Result};
use crate::euler::{euler_characteristic_with, DEFAULT_CLIQUE_CAP};
use crate::space::{DigitalSpace, PointId, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransformKind {
    /// Delete a simple point.
    Dsp,
    /// Attach a simple point.
    Asp,
    /// Delete a simple edge.
    Dse,
    /// Attach a simple edge.
    Ase,
    /// Replace an edge with a point.
    Rep,
    /// Replace a simple pair with one point.
    Rsp,
}

impl TransformKind {
    pub const ALL: [TransformKind; 6] = [
        TransformKind::Dsp,
        TransformKind::Asp,
        TransformKind::Dse,
        TransformKind::Ase,
        TransformKind::Rep,
        TransformKind::Rsp,
    ];

    pub fn token(self) -> &'static str {
        match self {
            TransformKind::Dsp => "DSP",
            TransformKind::Asp => "ASP",
            TransformKind::Dse => "DSE",
            TransformKind::Ase => "ASE",
            TransformKind::Rep => "REP",
            TransformKind::Rsp => "RSP",
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// One contractible transformation with its parameters.
///
/// Wire syntax, one step per line: `DSP v`, `ASP x : a b c`, `DSE v u`,
/// `ASE v u`, `REP v u -> x`, `RSP v u -> z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TransformStep {
    DeletePoint { point: PointId },
    AttachPoint { point: PointId, rim: PointSet },
    DeleteEdge { v: PointId, u: PointId },
    AttachEdge { v: PointId, u: PointId },
    ReplaceEdge { v: PointId, u: PointId, new: PointId },
    ReplacePair { v: PointId, u: PointId, new: PointId },
}

impl TransformStep {
    pub fn kind(&self) -> TransformKind {
        match self {
            TransformStep::DeletePoint { .. } => TransformKind::Dsp,
            TransformStep::AttachPoint { .. } => TransformKind::Asp,
            TransformStep::DeleteEdge { .. } => TransformKind::Dse,
            TransformStep::AttachEdge { .. } => TransformKind::Ase,
            TransformStep::ReplaceEdge { .. } => TransformKind::Rep,
            TransformStep::ReplacePair { .. } => TransformKind::Rsp,
        }
    }
}

impl fmt::Display for TransformStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = self.kind();
        match self {
            TransformStep::DeletePoint { point } => write!(f, "{kind} {point}"),
            TransformStep::AttachPoint { point, rim } => {
                write!(f, "{kind} {point} :")?;
                for p in rim {
                    write!(f, " {p}")?;
                }
                Ok(())
            }
            TransformStep::DeleteEdge { v, u } | TransformStep::AttachEdge { v, u } => write!(f, "{kind} {v} {u}"),
            TransformStep::ReplaceEdge { v, u, new } | TransformStep::ReplacePair { v, u, new } => {
                write!(f, "{kind} {v} {u} -> {new}")
            }
        }
    }
}

impl FromStr for TransformStep {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::MalformedStep(line.trim().to_string());
        let label = |s: &str| PointId::new(s).map_err(|_| bad());
        let (&kind, rest) = tokens.split_first().ok_or_else(bad)?;
        match (kind, rest) {
            ("DSP", [v]) => Ok(TransformStep::DeletePoint { point: label(v)? }),
            ("ASP", [x, ":", rim @ ..]) => Ok(TransformStep::AttachPoint {
                point: label(x)?,
                rim: rim.iter().map(|p| label(p)).collect::<Result<PointSet>>()?,
            }),
            ("DSE", [v, u]) => Ok(TransformStep::DeleteEdge { v: label(v)?, u: label(u)? }),
            ("ASE", [v, u]) => Ok(TransformStep::AttachEdge { v: label(v)?, u: label(u)? }),
            ("REP", [v, u, "->", x]) => Ok(TransformStep::ReplaceEdge { v: label(v)?, u: label(u)?, new: label(x)? }),
            ("RSP", [v, u, "->", z]) => Ok(TransformStep::ReplacePair { v: label(v)?, u: label(u)?, new: label(z)? }),
            _ => Err(bad()),
        }
    }
}

/// Reserved prefix for minted labels.
pub const FRESH_PREFIX: &str = "_g";

/// The least `_g<n>` with `n >= *counter` that is not a point of `space`;
/// advances the counter past it.
pub fn mint_label(space: &DigitalSpace, counter: &mut usize) -> PointId {
    loop {
        let candidate = PointId::new(format!("{FRESH_PREFIX}{counter}")).expect("valid minted label");
        *counter += 1;
        if !space.contains(&candidate) {
            return candidate;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum ReductionPolicy {
    PointsOnly,
    PointsAndEdges,
    #[default]
    Full,
}

impl FromStr for ReductionPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "points" => Ok(ReductionPolicy::PointsOnly),
            "edges" => Ok(ReductionPolicy::PointsAndEdges),
            "full" => Ok(ReductionPolicy::Full),
            other => Err(Error::PreconditionViolated(format!("unknown policy {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub initial: DigitalSpace,
    pub steps: Vec<TransformStep>,
    pub final_space: DigitalSpace,
}

impl ReductionTrace {
    /// Folds `apply` over the steps starting from `initial`.
    pub fn replay(&self, rewriter: &Rewriter<'_>) -> Result<DigitalSpace> {
        self.steps.iter().try_fold(self.initial.clone(), |g, step| rewriter.apply(&g, step))
    }

    /// The steps in wire syntax, one per line.
    pub fn steps_text(&self) -> String {
        self.steps.iter().map(|s| format!("{s}\n")).collect()
    }
}

/// Three-valued homotopy verdict. `Unknown` is not evidence of inequivalence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Equivalence {
    Equivalent,
    Distinct,
    Unknown,
}

impl fmt::Display for Equivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equivalence::Equivalent => "equivalent",
            Equivalence::Distinct => "distinct",
            Equivalence::Unknown => "unknown",
        })
    }
}

/// Rewrites checked against a particular contractibility oracle.
#[derive(Clone, Copy, Debug)]
pub struct Rewriter<'a> {
    oracle: &'a Contractor,
    clique_cap: usize,
}

impl Default for Rewriter<'static> {
    fn default() -> Self {
        Rewriter::new(shared(), DEFAULT_CLIQUE_CAP)
    }
}

impl<'a> Rewriter<'a> {
    pub fn new(oracle: &'a Contractor, clique_cap: usize) -> Self {
        Rewriter { oracle, clique_cap }
    }

    pub fn oracle(&self) -> &'a Contractor {
        self.oracle
    }

    pub fn delete_simple_point(&self, g: &DigitalSpace, v: &PointId) -> Result<DigitalSpace> {
        let i = g.require(v)?;
        if !self.oracle.is_simple_point(g, v)? {
            return Err(Error::NotSimple(v.clone()));
        }
        Ok(g.without_points(&[i]))
    }

    pub fn attach_simple_point(&self, g: &DigitalSpace, new: &PointId, rim: &PointSet) -> Result<DigitalSpace> {
        if g.contains(new) {
            return Err(Error::PointCollision(new.clone()));
        }
        if !self.oracle.is_subspace_contractible(g, rim)? {
            return Err(Error::RimNotContractible);
        }
        g.with_point(new, rim)
    }

    pub fn delete_simple_edge(&self, g: &DigitalSpace, v: &PointId, u: &PointId) -> Result<DigitalSpace> {
        let (i, j) = (g.require(v)?, g.require(u)?);
        if !g.adjacent(v, u) {
            return Err(Error::NotAdjacent(v.clone(), u.clone()));
        }
        if !self.oracle.is_simple_edge_for_deletion(g, v, u)? {
            return Err(Error::NotSimpleEdge(v.clone(), u.clone()));
        }
        Ok(g.with_edge_toggled(i, j, false))
    }

    pub fn attach_simple_edge(&self, g: &DigitalSpace, v: &PointId, u: &PointId) -> Result<DigitalSpace> {
        let (i, j) = (g.require(v)?, g.require(u)?);
        if g.adjacent(v, u) {
            return Err(Error::AlreadyAdjacent(v.clone(), u.clone()));
        }
        if !self.oracle.is_simple_edge_for_attachment(g, v, u)? {
            return Err(Error::NotSimpleEdge(v.clone(), u.clone()));
        }
        Ok(g.with_edge_toggled(i, j, true))
    }

    /// Attaches `new` over `{v, u} ∪ O(vu)` and removes the edge `(v u)`.
    /// That subspace is always contractible, so adjacency is the only
    /// precondition.
    pub fn replace_edge_with_point(&self, g: &DigitalSpace, v: &PointId, u: &PointId, new: &PointId) -> Result<DigitalSpace> {
        let (i, j) = (g.require(v)?, g.require(u)?);
        if i == j || !g.adjacent(v, u) {
            return Err(Error::NotAdjacent(v.clone(), u.clone()));
        }
        if g.contains(new) {
            return Err(Error::PointCollision(new.clone()));
        }
        let mut rim = g.joint_rim_pair(v, u)?;
        rim.insert(v.clone());
        rim.insert(u.clone());
        g.with_edge_toggled(i, j, false).with_point(new, &rim)
    }

    /// Attaches `new` over `(O(v) ∪ O(u)) - {v, u}` and removes `v` and `u`.
    pub fn replace_simple_pair(&self, g: &DigitalSpace, v: &PointId, u: &PointId, new: &PointId) -> Result<DigitalSpace> {
        let (i, j) = (g.require(v)?, g.require(u)?);
        if i == j || !simple_pair_indices(g, i, j) {
            return Err(Error::NotSimplePair(v.clone(), u.clone()));
        }
        if g.contains(new) {
            return Err(Error::PointCollision(new.clone()));
        }
        let mut rim = g.rim(v)?.union(&g.rim(u)?);
        rim.remove(v);
        rim.remove(u);
        g.with_point(new, &rim)?.induced_subspace(&{
            let mut keep = g.point_set();
            keep.remove(v);
            keep.remove(u);
            keep.insert(new.clone());
            keep
        })
    }

    pub fn apply(&self, g: &DigitalSpace, step: &TransformStep) -> Result<DigitalSpace> {
        match step {
            TransformStep::DeletePoint { point } => self.delete_simple_point(g, point),
            TransformStep::AttachPoint { point, rim } => self.attach_simple_point(g, point, rim),
            TransformStep::DeleteEdge { v, u } => self.delete_simple_edge(g, v, u),
            TransformStep::AttachEdge { v, u } => self.attach_simple_edge(g, v, u),
            TransformStep::ReplaceEdge { v, u, new } => self.replace_edge_with_point(g, v, u, new),
            TransformStep::ReplacePair { v, u, new } => self.replace_simple_pair(g, v, u, new),
        }
    }

    /// Applies, until none applies: DSP on the label-least simple point;
    /// otherwise (policy permitting) DSE on the label-least simple edge;
    /// otherwise (full policy) RSP on the label-least simple pair. Every
    /// success restarts from DSP.
    pub fn reduce(&self, g: &DigitalSpace, policy: ReductionPolicy) -> Result<ReductionTrace> {
        if g.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut cur = g.clone();
        let mut steps = Vec::new();
        let mut counter = 0usize;
        while let Some(step) = self.next_step(&cur, policy, &mut counter)? {
            cur = self.apply(&cur, &step)?;
            steps.push(step);
        }
        Ok(ReductionTrace { initial: g.clone(), steps, final_space: cur })
    }

    fn next_step(&self, g: &DigitalSpace, policy: ReductionPolicy, counter: &mut usize) -> Result<Option<TransformStep>> {
        for p in g.points() {
            if self.oracle.is_simple_point(g, p)? {
                return Ok(Some(TransformStep::DeletePoint { point: p.clone() }));
            }
        }
        if policy >= ReductionPolicy::PointsAndEdges {
            for (v, u) in g.edges() {
                if self.oracle.is_simple_edge_for_deletion(g, v, u)? {
                    return Ok(Some(TransformStep::DeleteEdge { v: v.clone(), u: u.clone() }));
                }
            }
        }
        if policy == ReductionPolicy::Full {
            for (i, _) in g.points().iter().enumerate() {
                for &j in g.neighbor_indices(i).iter().filter(|&&j| j > i) {
                    if simple_pair_indices(g, i, j) {
                        let new = mint_label(g, counter);
                        let (v, u) = (g.points()[i].clone(), g.points()[j].clone());
                        return Ok(Some(TransformStep::ReplacePair { v, u, new }));
                    }
                }
            }
        }
        Ok(None)
    }

    /// `Distinct` when the Euler characteristics differ, `Equivalent` when
    /// the fully reduced forms are isomorphic, `Unknown` otherwise.
    pub fn homotopy_equivalent_by_reduction(&self, g: &DigitalSpace, h: &DigitalSpace) -> Result<Equivalence> {
        if g.is_empty() || h.is_empty() {
            return Err(Error::EmptySpace);
        }
        if euler_characteristic_with(g, self.clique_cap)? != euler_characteristic_with(h, self.clique_cap)? {
            return Ok(Equivalence::Distinct);
        }
        let rg = self.reduce(g, ReductionPolicy::Full)?.final_space;
        let rh = self.reduce(h, ReductionPolicy::Full)?.final_space;
        Ok(if are_isomorphic(&rg, &rh)? { Equivalence::Equivalent } else { Equivalence::Unknown })
    }
}

pub fn delete_simple_point(g: &DigitalSpace, v: &PointId) -> Result<DigitalSpace> {
    Rewriter::default().delete_simple_point(g, v)
}

pub fn attach_simple_point(g: &DigitalSpace, new: &PointId, rim: &PointSet) -> Result<DigitalSpace> {
    Rewriter::default().attach_simple_point(g, new, rim)
}

pub fn delete_simple_edge(g: &DigitalSpace, v: &PointId, u: &PointId) -> Result<DigitalSpace> {
    Rewriter::default().delete_simple_edge(g, v, u)
}

pub fn attach_simple_edge(g: &DigitalSpace, v: &PointId, u: &PointId) -> Result<DigitalSpace> {
    Rewriter::default().attach_simple_edge(g, v, u)
}

pub fn replace_edge_with_point(g: &DigitalSpace, v: &PointId, u: &PointId, new: &PointId) -> Result<DigitalSpace> {
    Rewriter::default().replace_edge_with_point(g, v, u, new)
}

pub fn replace_simple_pair(g: &DigitalSpace, v: &PointId, u: &PointId, new: &PointId) -> Result<DigitalSpace> {
    Rewriter::default().replace_simple_pair(g, v, u, new)
}

pub fn apply(g: &DigitalSpace, step: &TransformStep) -> Result<DigitalSpace> {
    Rewriter::default().apply(g, step)
}

pub fn reduce(g: &DigitalSpace, policy: ReductionPolicy) -> Result<ReductionTrace> {
    Rewriter::default().reduce(g, policy)
}

pub fn homotopy_equivalent_by_reduction(g: &DigitalSpace, h: &DigitalSpace) -> Result<Equivalence> {
    Rewriter::default().homotopy_equivalent_by_reduction(g, h)
}
