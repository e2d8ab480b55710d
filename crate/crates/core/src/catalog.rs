//! Deterministic fixture generators.
//!
//! Labels:
//! - `complete n`, `path n`, `cycle n`, `random n p`: `p1..pn` (path and
//!   cycle in traversal order).
//! - `sphere d`: the join of `d + 1` copies of S0; factor `i` (from 0) holds
//!   the non-adjacent pair `p{2i+1}`, `p{2i+2}`.
//! - `cone G`: apex `v`, base labels prefixed `b.`.
//! - `join G H`: labels of `G` prefixed `l.`, of `H` prefixed `r.`.
//! - `double-cone A B C`: centre pair `v`, `u`; parts prefixed `a.`, `b.`, `c.`.
//!
//! `complete 0` is the empty space, useful as an empty double-cone part.
//!
//! The random family flips one coin per unordered pair of labels, pairs
//! taken in label order (lexicographic on `(first, second)`), using
//! [`Lcg`]: `state <- state * 6364136223846793005 + 1442695040888963407
//! (mod 2^64)`, starting from `state = seed`; each draw advances once and
//! yields `(state >> 11) / 2^53`. The edge is present iff the draw is below
//! the edge probability.

use crate::error::{Error, Result};
use crate::space::{pid, DigitalSpace, PointId, PointSet};

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    Complete(usize),
    Path(usize),
    Cycle(usize),
    Sphere(usize),
    ConeOver(Box<GeneratorSpec>),
    JoinOf(Box<GeneratorSpec>, Box<GeneratorSpec>),
    DoubleCone(Box<GeneratorSpec>, Box<GeneratorSpec>, Box<GeneratorSpec>),
    Random { points: usize, edge_probability: f64, seed: u64 },
}

const MAX_SPHERE_DIM: usize = 31;

impl GeneratorSpec {
    /// Parses a prefix-notation spec such as `join cycle 4 complete 1`.
    /// `seed` is used by every `random` family inside the spec.
    pub fn parse(tokens: &[&str], seed: u64) -> Result<Self> {
        let mut pos = 0;
        let spec = Self::parse_at(tokens, &mut pos, seed)?;
        if pos != tokens.len() {
            return Err(Error::InvalidSpec(format!("unexpected trailing token {:?}", tokens[pos])));
        }
        spec.validate()?;
        Ok(spec)
    }

    fn parse_at(tokens: &[&str], pos: &mut usize, seed: u64) -> Result<Self> {
        let family = *tokens
            .get(*pos)
            .ok_or_else(|| Error::InvalidSpec("missing generator family".into()))?;
        *pos += 1;
        let mut int = |name: &str| -> Result<usize> {
            let tok = tokens
                .get(*pos)
                .ok_or_else(|| Error::InvalidSpec(format!("{family}: missing {name}")))?;
            *pos += 1;
            tok.parse().map_err(|_| Error::InvalidSpec(format!("{family}: {name} must be a nonnegative integer, got {tok:?}")))
        };
        Ok(match family {
            "complete" => GeneratorSpec::Complete(int("n")?),
            "path" => GeneratorSpec::Path(int("n")?),
            "cycle" => GeneratorSpec::Cycle(int("n")?),
            "sphere" => GeneratorSpec::Sphere(int("dim")?),
            "random" => {
                let points = int("n")?;
                let tok = tokens
                    .get(*pos)
                    .ok_or_else(|| Error::InvalidSpec("random: missing edge probability".into()))?;
                *pos += 1;
                let edge_probability = tok
                    .parse()
                    .map_err(|_| Error::InvalidSpec(format!("random: edge probability must be a number, got {tok:?}")))?;
                GeneratorSpec::Random { points, edge_probability, seed }
            }
            "cone" | "cone_over" => GeneratorSpec::ConeOver(Box::new(Self::parse_at(tokens, pos, seed)?)),
            "join" | "join_of" => {
                let a = Self::parse_at(tokens, pos, seed)?;
                let b = Self::parse_at(tokens, pos, seed)?;
                GeneratorSpec::JoinOf(Box::new(a), Box::new(b))
            }
            "double-cone" | "double_cone" => {
                let a = Self::parse_at(tokens, pos, seed)?;
                let b = Self::parse_at(tokens, pos, seed)?;
                let c = Self::parse_at(tokens, pos, seed)?;
                GeneratorSpec::DoubleCone(Box::new(a), Box::new(b), Box::new(c))
            }
            other => return Err(Error::InvalidSpec(format!("unknown family {other:?}"))),
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GeneratorSpec::Complete(_) => Ok(()),
            GeneratorSpec::Path(n) if *n < 1 => Err(Error::InvalidSpec(format!("path: n = {n}, need n >= 1"))),
            GeneratorSpec::Cycle(n) if *n < 3 => Err(Error::InvalidSpec(format!("cycle: n = {n}, need n >= 3"))),
            GeneratorSpec::Sphere(d) if *d > MAX_SPHERE_DIM => {
                Err(Error::InvalidSpec(format!("sphere: dim = {d}, need dim <= {MAX_SPHERE_DIM}")))
            }
            GeneratorSpec::Random { points, edge_probability, .. } => {
                if *points < 1 {
                    Err(Error::InvalidSpec(format!("random: n = {points}, need n >= 1")))
                } else if !(0.0..=1.0).contains(edge_probability) {
                    Err(Error::InvalidSpec(format!("random: p = {edge_probability}, need 0 <= p <= 1")))
                } else {
                    Ok(())
                }
            }
            GeneratorSpec::ConeOver(g) => g.validate(),
            GeneratorSpec::JoinOf(a, b) => a.validate().and(b.validate()),
            GeneratorSpec::DoubleCone(a, b, c) => a.validate().and(b.validate()).and(c.validate()),
            _ => Ok(()),
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<DigitalSpace> {
    spec.validate()?;
    Ok(match spec {
        GeneratorSpec::Complete(n) => complete(*n),
        GeneratorSpec::Path(n) => path(*n),
        GeneratorSpec::Cycle(n) => cycle(*n),
        GeneratorSpec::Sphere(d) => sphere(*d),
        GeneratorSpec::Random { points, edge_probability, seed } => random(*points, *edge_probability, *seed),
        GeneratorSpec::ConeOver(base) => {
            let base = prefixed(&generate(base)?, "b.");
            DigitalSpace::cone(&pid("v"), &base)?
        }
        GeneratorSpec::JoinOf(a, b) => prefixed(&generate(a)?, "l.").join(&prefixed(&generate(b)?, "r."))?,
        GeneratorSpec::DoubleCone(a, b, c) => DigitalSpace::double_cone(
            &pid("v"),
            &pid("u"),
            &prefixed(&generate(a)?, "a."),
            &prefixed(&generate(b)?, "b."),
            &prefixed(&generate(c)?, "c."),
        )?,
    })
}

fn labels(n: usize) -> Vec<PointId> {
    (1..=n).map(|i| pid(format!("p{i}"))).collect()
}

fn prefixed(g: &DigitalSpace, prefix: &str) -> DigitalSpace {
    g.relabel(|p| pid(format!("{prefix}{p}"))).expect("prefixing is injective")
}

pub fn complete(n: usize) -> DigitalSpace {
    let pts = labels(n);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((pts[i].clone(), pts[j].clone()));
        }
    }
    DigitalSpace::build(pts, edges).expect("complete graph")
}

pub fn path(n: usize) -> DigitalSpace {
    let pts = labels(n);
    let edges: Vec<_> = pts.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    DigitalSpace::build(pts, edges).expect("path")
}

pub fn cycle(n: usize) -> DigitalSpace {
    let pts = labels(n);
    let edges: Vec<_> = (0..n).map(|i| (pts[i].clone(), pts[(i + 1) % n].clone())).collect();
    DigitalSpace::build(pts, edges).expect("cycle")
}

/// Join of `dim + 1` copies of S0.
pub fn sphere(dim: usize) -> DigitalSpace {
    let n = 2 * (dim + 1);
    let pts = labels(n);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if i / 2 != j / 2 {
                edges.push((pts[i].clone(), pts[j].clone()));
            }
        }
    }
    DigitalSpace::build(pts, edges).expect("sphere")
}

pub fn random(points: usize, edge_probability: f64, seed: u64) -> DigitalSpace {
    let mut pts = labels(points);
    pts.sort();
    let mut rng = Lcg::new(seed);
    let mut edges = Vec::new();
    for i in 0..points {
        for j in i + 1..points {
            if rng.next_f64() < edge_probability {
                edges.push((pts[i].clone(), pts[j].clone()));
            }
        }
    }
    DigitalSpace::build(pts, edges).expect("random graph")
}

/// A contractible space on `p1..pn` grown by attaching one point at a time
/// over a rim that is contractible by construction: either a cone inside
/// the current space (some point `w` with a random subset of its
/// neighbors), the first `m` points attached so far, or the rim of an
/// earlier attachment.
pub fn random_contractible(points: usize, seed: u64) -> DigitalSpace {
    assert!(points >= 1, "random_contractible needs at least one point");
    let pts = labels(points);
    let mut rng = Lcg::new(seed);
    let mut space = DigitalSpace::build([pts[0].clone()], []).expect("one point");
    let mut used_rims: Vec<PointSet> = Vec::new();
    for k in 1..points {
        let rim: PointSet = match rng.below(3) {
            0 => {
                let centre = &pts[rng.below(k as u64) as usize];
                let mut rim: PointSet = space
                    .rim(centre)
                    .expect("existing point")
                    .into_iter()
                    .filter(|_| rng.next_f64() < 0.5)
                    .collect();
                rim.insert(centre.clone());
                rim
            }
            1 => {
                let m = 1 + rng.below(k as u64) as usize;
                pts[..m].iter().collect()
            }
            _ if !used_rims.is_empty() => used_rims[rng.below(used_rims.len() as u64) as usize].clone(),
            _ => pts[..k].iter().collect(),
        };
        space = space.with_point(&pts[k], &rim).expect("fresh point");
        used_rims.push(rim);
    }
    space
}

/// 64-bit linear congruential generator with the constants documented at
/// module level. Portable and reproducible; not for statistics.
#[derive(Clone, Debug)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(Self::MULTIPLIER).wrapping_add(Self::INCREMENT);
        self.state
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform-ish in `0..n` (`n > 0`), from the top bits.
    pub fn below(&mut self, n: u64) -> u64 {
        ((self.next_u64() >> 32) * n) >> 32
    }
}
