//! Reference oracles written straight from the definitions, sharing no
//! code with the library. Graphs are `Vec<u64>` adjacency masks.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use digitop::{pid, DigitalSpace, PointId, PointSet};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Masks = Vec<u64>;

pub fn label(i: usize) -> PointId {
    pid(format!("x{i:02}"))
}

pub fn to_space(adj: &Masks) -> DigitalSpace {
    let n = adj.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if adj[i] >> j & 1 == 1 {
                edges.push((label(i), label(j)));
            }
        }
    }
    DigitalSpace::build((0..n).map(label), edges).unwrap()
}

/// Masks indexed by the space's sorted point order.
pub fn from_space(g: &DigitalSpace) -> (Vec<PointId>, Masks) {
    let pts = g.points().to_vec();
    let adj = pts
        .iter()
        .map(|p| {
            pts.iter()
                .enumerate()
                .filter(|(_, q)| g.adjacent(p, q))
                .fold(0u64, |m, (j, _)| m | 1 << j)
        })
        .collect();
    (pts, adj)
}

pub fn members(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Contractible as in the attachment definition: one point, or some point
/// whose rim (within `set`) is contractible and whose removal leaves a
/// contractible space. No memo; every removal order is tried.
pub fn brute_contractible(adj: &Masks, set: u64) -> bool {
    match set.count_ones() {
        0 => false,
        1 => true,
        _ => members(set)
            .into_iter()
            .any(|v| brute_contractible(adj, adj[v] & set) && brute_contractible(adj, set & !(1 << v))),
    }
}

pub fn brute_simple(adj: &Masks, set: u64, v: usize) -> bool {
    brute_contractible(adj, adj[v] & set)
}

pub fn is_clique(adj: &Masks, set: u64) -> bool {
    members(set).into_iter().all(|v| set & !(1 << v) & !adj[v] == 0)
}

/// e-vector by testing every nonempty subset.
pub fn brute_evector(adj: &Masks) -> Vec<u64> {
    let n = adj.len();
    assert!(n <= 20);
    let mut counts = vec![0u64; n];
    for s in 1..(1u64 << n) {
        if is_clique(adj, s) {
            counts[s.count_ones() as usize - 1] += 1;
        }
    }
    while counts.last() == Some(&0) {
        counts.pop();
    }
    counts
}

pub fn chi_of(counts: &[u64]) -> i128 {
    counts.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i128 } else { -(c as i128) }).sum()
}

/// Clique count by plain recursion over "add a larger common neighbor";
/// for graphs too big for the subset oracle.
pub fn recursive_chi(adj: &Masks) -> i128 {
    fn go(adj: &Masks, cand: u64, size: usize) -> i128 {
        let mut total = 0;
        for v in members(cand) {
            let sign = if size % 2 == 0 { 1 } else { -1 };
            total += sign + go(adj, cand & adj[v] & !full(v + 1), size + 1);
        }
        total
    }
    go(adj, full(adj.len()), 0)
}

pub fn connected(adj: &Masks, set: u64) -> bool {
    if set == 0 {
        return false;
    }
    let mut seen = set & set.wrapping_neg();
    loop {
        let grown = members(seen).into_iter().fold(seen, |m, v| m | (adj[v] & set));
        if grown == seen {
            return seen == set;
        }
        seen = grown;
    }
}

fn permute(adj: &Masks, perm: &[usize]) -> u128 {
    // Upper triangle under `perm` (perm[new] = old), row-major.
    let n = adj.len();
    let mut bits = 0u128;
    for i in 0..n {
        for j in i + 1..n {
            bits = bits << 1 | (adj[perm[i]] >> perm[j] & 1) as u128;
        }
    }
    bits
}

/// Maximum upper-triangle word over all orderings that list points by
/// decreasing degree. The set of such orderings is relabeling-invariant,
/// so the maximum is a complete invariant. `n <= 16`.
pub fn brute_canon(adj: &Masks) -> (usize, u128) {
    let n = adj.len();
    assert!(n <= 16);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| std::cmp::Reverse(adj[v].count_ones()));
    for v in by_degree {
        match classes.last_mut() {
            Some(c) if adj[c[0]].count_ones() == adj[v].count_ones() => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let mut best = 0u128;
    let mut perm = Vec::with_capacity(n);
    fn rec(adj: &Masks, classes: &mut [Vec<usize>], ci: usize, perm: &mut Vec<usize>, best: &mut u128) {
        if ci == classes.len() {
            *best = (*best).max(permute(adj, perm));
            return;
        }
        let k = classes[ci].len();
        heap(adj, classes, ci, k, perm, best);
    }
    fn heap(adj: &Masks, classes: &mut [Vec<usize>], ci: usize, k: usize, perm: &mut Vec<usize>, best: &mut u128) {
        if k <= 1 {
            let len = perm.len();
            perm.extend_from_slice(&classes[ci]);
            rec(adj, classes, ci + 1, perm, best);
            perm.truncate(len);
            return;
        }
        for i in 0..k {
            heap(adj, classes, ci, k - 1, perm, best);
            let j = if k % 2 == 0 { i } else { 0 };
            classes[ci].swap(j, k - 1);
        }
    }
    rec(adj, &mut classes, 0, &mut perm, &mut best);
    (n, best)
}

pub fn brute_isomorphic(a: &Masks, b: &Masks) -> bool {
    a.len() == b.len() && brute_canon(a) == brute_canon(b)
}

/// Every labeled graph on `n` points, as masks.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Masks> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    (0u64..1 << pairs.len()).map(move |code| {
        let mut adj = vec![0u64; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if code >> k & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
        adj
    })
}

/// One representative per isomorphism class of connected graphs on `n` points.
pub fn connected_classes(n: usize) -> Vec<Masks> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for adj in all_graphs(n) {
        if connected(&adj, full(n)) && seen.insert(brute_canon(&adj)) {
            out.push(adj);
        }
    }
    out
}

pub fn with_point(adj: &Masks, rim: u64) -> Masks {
    let n = adj.len();
    let mut out: Masks = adj.iter().enumerate().map(|(i, &m)| m | ((rim >> i & 1) << n)).collect();
    out.push(rim);
    out
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Masks {
    let mut adj = vec![0u64; n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

/// Random attachment construction from one point. Each new rim is
/// contractible for a reason independent of any classifier: it is a cone
/// (a point with some of its neighbors), an initial segment of the
/// construction, an earlier rim, or a small set that the brute-force
/// search certifies.
pub fn random_contractible<R: Rng>(rng: &mut R, n: usize) -> Masks {
    let mut adj: Masks = vec![0];
    let mut rims: Vec<u64> = Vec::new();
    while adj.len() < n {
        let k = adj.len();
        let rim = loop {
            let rim = match rng.gen_range(0..4) {
                0 => {
                    let w = rng.gen_range(0..k);
                    members(adj[w]).into_iter().filter(|_| rng.gen_bool(0.5)).fold(1u64 << w, |m, v| m | 1 << v)
                }
                1 => full(rng.gen_range(1..=k)),
                2 if !rims.is_empty() => *rims.choose(rng).unwrap(),
                _ => {
                    let s = (0..k).filter(|_| rng.gen_bool(0.4)).fold(0u64, |m, v| m | 1 << v);
                    if s.count_ones() > 6 || !brute_contractible(&adj, s) {
                        continue;
                    }
                    s
                }
            };
            break rim;
        };
        adj = with_point(&adj, rim);
        rims.push(rim);
    }
    adj
}

/// Relabels through a random bijection onto fresh labels.
pub fn shuffled_labels<R: Rng>(rng: &mut R, g: &DigitalSpace) -> DigitalSpace {
    let mut fresh: Vec<usize> = (0..g.len()).collect();
    fresh.shuffle(rng);
    let index: std::collections::HashMap<PointId, usize> =
        g.points().iter().cloned().zip(fresh).collect();
    g.relabel(|p| pid(format!("r{}", index[p]))).unwrap()
}

pub fn set_of(pts: &[PointId], mask: u64) -> PointSet {
    members(mask).into_iter().map(|i| pts[i].clone()).collect()
}

pub fn mask_of(pts: &[PointId], set: &PointSet) -> u64 {
    set.iter().map(|p| 1u64 << pts.iter().position(|q| q == p).unwrap()).fold(0, |a, b| a | b)
}

/// Checks a deletion sequence against the brute-force oracle: every point
/// is simple when removed, and the final set is `target`.
pub fn valid_collapse(adj: &Masks, pts: &[PointId], order: &[PointId], target: u64) -> bool {
    let mut set = full(adj.len());
    let mut seen = BTreeSet::new();
    for p in order {
        let Some(v) = pts.iter().position(|q| q == p) else { return false };
        if set >> v & 1 == 0 || !seen.insert(v) || !brute_simple(adj, set, v) {
            return false;
        }
        set &= !(1 << v);
    }
    set == target
}
