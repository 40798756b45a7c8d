//! Exact 2-domination and 2-independence numbers of trees and forests.
//!
//! A set `S` is 2-dominating when every vertex outside `S` has at least two
//! neighbors in `S`, and 2-independent when every member of `S` has at most
//! one neighbor in `S`. `gamma2` is the minimum size of a 2-dominating set and
//! `alpha2` the maximum size of a 2-independent set.
//!
//! The main entry points are linear-time dynamic programs over a rooted
//! forest. They accept a [`Constraint`] that forces vertices in or out, which
//! is how the "belongs to every / some optimal set" predicates are answered.
//! Subset enumeration versions are provided as an oracle for small orders.

use itertools::Itertools;

use crate::error::SolveError;
use crate::tree::{Acyclic, Vertex, VertexSet};

/// Largest order accepted by the subset-enumeration routines.
pub const BRUTE_FORCE_CAP: usize = 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub value: usize,
    pub witness: VertexSet,
}

/// Vertices that must (or must not) belong to the solution.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Constraint {
    pub forced_in: VertexSet,
    pub forced_out: VertexSet,
}

impl Constraint {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn force_in(mut self, v: Vertex) -> Self {
        self.forced_in.insert(v);
        self
    }

    pub fn force_out(mut self, v: Vertex) -> Self {
        self.forced_out.insert(v);
        self
    }

    fn validate(&self, order: usize) -> Result<(), SolveError> {
        if !self.forced_in.is_disjoint(&self.forced_out) {
            return Err(SolveError::OverlappingConstraint);
        }
        let max = self
            .forced_in
            .last()
            .into_iter()
            .chain(self.forced_out.last())
            .max();
        match max {
            Some(v) if v >= order => Err(SolveError::ConstraintOutOfRange(v)),
            _ => Ok(()),
        }
    }
}

pub fn is_2dominating<G: Acyclic + ?Sized>(g: &G, s: &VertexSet) -> bool {
    (0..g.order()).all(|v| s.contains(v) || s.count_neighbors(g, v) >= 2)
}

pub fn is_2independent<G: Acyclic + ?Sized>(g: &G, s: &VertexSet) -> bool {
    s.iter().all(|v| s.count_neighbors(g, v) <= 1)
}

/// Post-order traversal data for a forest rooted at the smallest vertex of
/// each component.
struct Rooting {
    roots: Vec<Vertex>,
    children: Vec<Vec<Vertex>>,
    /// Every vertex after all of its children.
    post_order: Vec<Vertex>,
}

impl Rooting {
    fn new<G: Acyclic + ?Sized>(g: &G) -> Self {
        let n = g.order();
        let mut seen = vec![false; n];
        let mut children = vec![Vec::new(); n];
        let mut pre_order = Vec::with_capacity(n);
        let mut roots = Vec::new();
        for r in 0..n {
            if seen[r] {
                continue;
            }
            roots.push(r);
            seen[r] = true;
            let mut stack = vec![r];
            while let Some(u) = stack.pop() {
                pre_order.push(u);
                for &w in g.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        children[u].push(w);
                        stack.push(w);
                    }
                }
            }
        }
        for ch in &mut children {
            ch.sort_unstable();
        }
        pre_order.reverse();
        Rooting {
            roots,
            children,
            post_order: pre_order,
        }
    }
}

fn add(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    Some(a? + b?)
}

/// Index of the first minimum (or maximum) among the feasible entries.
fn first_best(values: &[Option<usize>], maximize: bool) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for (i, v) in values.iter().enumerate() {
        if let Some(v) = *v {
            let better = match best {
                None => true,
                Some((_, b)) => {
                    if maximize {
                        v > b
                    } else {
                        v < b
                    }
                }
            };
            if better {
                best = Some((i, v));
            }
        }
    }
    best.map(|(i, _)| i)
}

// gamma2 states
const IN: usize = 0;
const OUT_NEED: usize = 1;
const OUT_SAT: usize = 2;

/// Minimum 2-dominating set respecting `c`.
///
/// Per vertex, the program keeps the cheapest cost of its subtree in three
/// states: in the set; out with exactly one child in the set (the parent must
/// then be in the set); out with at least two children in the set. Among
/// equal-cost alternatives the witness prefers states in that order.
pub fn solve_gamma2<G: Acyclic + ?Sized>(
    g: &G,
    c: &Constraint,
) -> Result<SolveOutcome, SolveError> {
    c.validate(g.order())?;
    let rooting = Rooting::new(g);
    let n = g.order();
    let mut cost = vec![[None::<usize>; 3]; n];
    // prefix[v][i][k]: cheapest cost for the first i children of v (v out)
    // with min(k, 2) of them in the set
    let mut prefix: Vec<Vec<[Option<usize>; 3]>> = vec![Vec::new(); n];

    for &v in &rooting.post_order {
        let children = &rooting.children[v];
        let mut table = Vec::with_capacity(children.len() + 1);
        let mut f = [Some(0), None, None];
        table.push(f);
        for &ch in children {
            let [ch_in, _, ch_sat] = cost[ch];
            let mut next = [None; 3];
            for k in 0..3 {
                let Some(base) = f[k] else { continue };
                if let Some(s) = ch_sat {
                    next[k] = min_opt(next[k], Some(base + s));
                }
                if let Some(i) = ch_in {
                    let k2 = (k + 1).min(2);
                    next[k2] = min_opt(next[k2], Some(base + i));
                }
            }
            f = next;
            table.push(f);
        }
        let in_cost = if c.forced_out.contains(v) {
            None
        } else {
            children
                .iter()
                .try_fold(1, |acc, &ch| Some(acc + cost[ch].iter().flatten().min()?))
        };
        let (need, sat) = if c.forced_in.contains(v) {
            (None, None)
        } else {
            (f[1], f[2])
        };
        cost[v] = [in_cost, need, sat];
        prefix[v] = table;
    }

    let mut state = vec![usize::MAX; n];
    let mut value = 0;
    for &r in &rooting.roots {
        let [i, _, s] = cost[r];
        let pick = first_best(&[i, None, s], false).ok_or(SolveError::Infeasible)?;
        value += cost[r][pick].expect("feasible");
        state[r] = pick;
    }

    let mut witness = VertexSet::new();
    for &v in rooting.post_order.iter().rev() {
        let children = &rooting.children[v];
        match state[v] {
            IN => {
                witness.insert(v);
                for &ch in children {
                    state[ch] = first_best(&cost[ch], false).expect("feasible child");
                }
            }
            OUT_NEED | OUT_SAT => {
                let table = &prefix[v];
                let mut k = state[v];
                for (i, &ch) in children.iter().enumerate().rev() {
                    let target = table[i + 1][k].expect("feasible prefix");
                    let [ch_in, _, ch_sat] = cost[ch];
                    let via_in = (0..3).rev().find(|&kp| {
                        (kp + 1).min(2) == k && add(table[i][kp], ch_in) == Some(target)
                    });
                    if let Some(kp) = via_in {
                        state[ch] = IN;
                        k = kp;
                    } else {
                        debug_assert_eq!(add(table[i][k], ch_sat), Some(target));
                        state[ch] = OUT_SAT;
                    }
                }
            }
            _ => unreachable!("every vertex receives a state from its parent"),
        }
    }
    Ok(SolveOutcome { value, witness })
}

fn min_opt(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

// alpha2 states
const OUT: usize = 0;
const IN_FREE: usize = 1;
const IN_USED: usize = 2;

/// Maximum 2-independent set respecting `c`.
///
/// States per vertex: out of the set; in the set with no child in the set;
/// in the set with exactly one child in the set, that child being in the
/// second state (the parent must then stay out).
pub fn solve_alpha2<G: Acyclic + ?Sized>(
    g: &G,
    c: &Constraint,
) -> Result<SolveOutcome, SolveError> {
    c.validate(g.order())?;
    let rooting = Rooting::new(g);
    let n = g.order();
    let mut cost = vec![[None::<usize>; 3]; n];
    let mut used_child = vec![None::<Vertex>; n];

    for &v in &rooting.post_order {
        let children = &rooting.children[v];
        let out = if c.forced_in.contains(v) {
            None
        } else {
            children
                .iter()
                .try_fold(0, |acc, &ch| Some(acc + cost[ch].iter().flatten().max()?))
        };
        let (free, used) = if c.forced_out.contains(v) {
            (None, None)
        } else {
            let free = children
                .iter()
                .try_fold(1, |acc, &ch| Some(acc + cost[ch][OUT]?));
            let mut best: Option<(usize, Vertex)> = None;
            for &j in children {
                let Some(fj) = cost[j][IN_FREE] else { continue };
                let rest = children
                    .iter()
                    .filter(|&&ch| ch != j)
                    .try_fold(1 + fj, |acc, &ch| Some(acc + cost[ch][OUT]?));
                if let Some(total) = rest {
                    if best.is_none_or(|(b, _)| total > b) {
                        best = Some((total, j));
                    }
                }
            }
            used_child[v] = best.map(|(_, j)| j);
            (free, best.map(|(t, _)| t))
        };
        cost[v] = [out, free, used];
    }

    let mut state = vec![usize::MAX; n];
    let mut value = 0;
    for &r in &rooting.roots {
        let pick = first_best(&cost[r], true).ok_or(SolveError::Infeasible)?;
        value += cost[r][pick].expect("feasible");
        state[r] = pick;
    }

    let mut witness = VertexSet::new();
    for &v in rooting.post_order.iter().rev() {
        let children = &rooting.children[v];
        match state[v] {
            OUT => {
                for &ch in children {
                    state[ch] = first_best(&cost[ch], true).expect("feasible child");
                }
            }
            IN_FREE | IN_USED => {
                witness.insert(v);
                let chosen = if state[v] == IN_USED {
                    used_child[v]
                } else {
                    None
                };
                for &ch in children {
                    state[ch] = if Some(ch) == chosen { IN_FREE } else { OUT };
                }
            }
            _ => unreachable!("every vertex receives a state from its parent"),
        }
    }
    Ok(SolveOutcome { value, witness })
}

pub fn gamma2<G: Acyclic + ?Sized>(g: &G) -> usize {
    solve_gamma2(g, &Constraint::none())
        .expect("unconstrained 2-domination is always feasible")
        .value
}

pub fn alpha2<G: Acyclic + ?Sized>(g: &G) -> usize {
    solve_alpha2(g, &Constraint::none())
        .expect("unconstrained 2-independence is always feasible")
        .value
}

/// True when no minimum 2-dominating set avoids `v`.
pub fn in_every_gamma2_set<G: Acyclic + ?Sized>(g: &G, v: Vertex) -> bool {
    match solve_gamma2(g, &Constraint::none().force_out(v)) {
        Ok(out) => out.value > gamma2(g),
        Err(_) => true,
    }
}

/// True when some minimum 2-dominating set contains `v`.
pub fn in_some_gamma2_set<G: Acyclic + ?Sized>(g: &G, v: Vertex) -> bool {
    solve_gamma2(g, &Constraint::none().force_in(v)).is_ok_and(|out| out.value == gamma2(g))
}

/// True when no maximum 2-independent set avoids `v`.
pub fn in_every_alpha2_set<G: Acyclic + ?Sized>(g: &G, v: Vertex) -> bool {
    match solve_alpha2(g, &Constraint::none().force_out(v)) {
        Ok(out) => out.value < alpha2(g),
        Err(_) => true,
    }
}

fn neighbor_masks<G: Acyclic + ?Sized>(g: &G) -> Result<Vec<u32>, SolveError> {
    let n = g.order();
    if n > BRUTE_FORCE_CAP {
        return Err(SolveError::TooLarge {
            order: n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    Ok((0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect())
}

fn mask_dominates(masks: &[u32], s: u32) -> bool {
    masks
        .iter()
        .enumerate()
        .all(|(v, &m)| s & (1 << v) != 0 || (m & s).count_ones() >= 2)
}

fn mask_independent(masks: &[u32], s: u32) -> bool {
    masks
        .iter()
        .enumerate()
        .all(|(v, &m)| s & (1 << v) == 0 || (m & s).count_ones() <= 1)
}

/// `gamma2` by enumerating all vertex subsets.
pub fn brute_gamma2<G: Acyclic + ?Sized>(g: &G) -> Result<usize, SolveError> {
    let masks = neighbor_masks(g)?;
    let n = masks.len();
    Ok((0u32..1 << n)
        .filter(|&s| mask_dominates(&masks, s))
        .map(u32::count_ones)
        .min()
        .unwrap_or(0) as usize)
}

/// `alpha2` by enumerating all vertex subsets.
pub fn brute_alpha2<G: Acyclic + ?Sized>(g: &G) -> Result<usize, SolveError> {
    let masks = neighbor_masks(g)?;
    let n = masks.len();
    Ok((0u32..1 << n)
        .filter(|&s| mask_independent(&masks, s))
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize)
}

/// A set that is both 2-dominating and 2-independent. Candidates are tried
/// from the largest cardinality down, lexicographically within a cardinality.
///
/// Returns `Ok(None)` only if no such set exists, which never happens for a
/// graph.
pub fn find_2dom_2ind_set<G: Acyclic + ?Sized>(g: &G) -> Result<Option<VertexSet>, SolveError> {
    let masks = neighbor_masks(g)?;
    let n = masks.len();
    for k in (0..=n).rev() {
        for combo in (0..n).combinations(k) {
            let s = combo.iter().fold(0u32, |m, &v| m | (1 << v));
            if mask_independent(&masks, s) && mask_dominates(&masks, s) {
                return Ok(Some(combo.into_iter().collect()));
            }
        }
    }
    Ok(None)
}
