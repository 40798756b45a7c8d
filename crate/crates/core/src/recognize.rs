//! Membership test by inverse operations.
//!
//! A tree of order at least 5 is reduced by locating an augmented pattern
//! (a special tree plus the vertices some operation would have added) and
//! deleting those added vertices. Trees of order at most 4 are members
//! outright. The reductions, reversed and relabeled, form a certificate that
//! replays to the input tree.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::canon::canonical_code;
use crate::construct::{apply_o, Certificate, OpStep, BASE_MAX_ORDER};
use crate::error::{ConstructError, RecognizeError};
use crate::patterns::{augmented_patterns, find_pdi_embeddings, Embedding, OpId, PatternId, Role};
use crate::solvers::{alpha2, gamma2};
use crate::tree::{Tree, Vertex, VertexSet};

/// One inverse operation on the current tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub op: OpId,
    /// `None` for inverse `O3`.
    pub pattern_id: Option<PatternId>,
    /// Embedding of the augmented pattern; `None` for inverse `O3`.
    pub embedding: Option<Embedding>,
    /// Images of the special tree's vertices (for `O3`, just the attacher).
    pub base_image: Vec<Vertex>,
    /// Images of the added vertices, in the order the operation adds them.
    pub removed: Vec<Vertex>,
    /// Inverse `O6` reconnects its attachers.
    pub restored_edge: Option<(Vertex, Vertex)>,
}

impl ReductionStep {
    pub fn removed_set(&self) -> VertexSet {
        self.removed.iter().copied().collect()
    }

    fn from_embedding(e: Embedding) -> Self {
        let op = e.op.expect("augmented pattern");
        let p = augmented_pattern(op, e.pattern);
        let base_order = p.order() - p.added.len();
        let restored_edge = (op == OpId::O6).then(|| {
            let (a, b) = (
                e.role_image(p, Role::V1).expect("O6 patterns carry v1"),
                e.role_image(p, Role::V2).expect("O6 patterns carry v2"),
            );
            (a.min(b), a.max(b))
        });
        ReductionStep {
            op,
            pattern_id: Some(e.pattern),
            base_image: e.map[..base_order].to_vec(),
            removed: e.added_image(p),
            restored_edge,
            embedding: Some(e),
        }
    }
}

fn augmented_pattern(op: OpId, id: PatternId) -> &'static crate::patterns::Pattern {
    augmented_patterns(true)
        .iter()
        .find(|p| p.op == Some(op) && p.id == id)
        .expect("augmented pattern exists")
}

/// Applies a reduction. Returns the smaller tree, densely relabeled in
/// increasing id order, and for each new id its id in `t`.
pub fn reduce(t: &Tree, step: &ReductionStep) -> (Tree, Vec<Vertex>) {
    let (rest, kept) = t.delete_vertices(&step.removed_set());
    let mut edges = rest.edges();
    if let Some((a, b)) = step.restored_edge {
        let pos = |x: Vertex| kept.binary_search(&x).expect("attachers are kept");
        edges.push((pos(a), pos(b)));
    }
    let tree = Tree::new(kept.len(), &edges).expect("a reduction leaves a tree");
    (tree, kept)
}

/// Inverse `O3`: a degree-3 vertex `u2` with two leaf neighbors `u1 < u3`
/// and a third neighbor `v`.
fn o3_reductions(t: &Tree) -> impl Iterator<Item = ReductionStep> + '_ {
    t.vertices().filter_map(move |u2| {
        if t.degree(u2) != 3 {
            return None;
        }
        let nb = t.neighbors(u2);
        let leaves: Vec<Vertex> = nb.iter().copied().filter(|&x| t.is_leaf(x)).collect();
        let others: Vec<Vertex> = nb.iter().copied().filter(|&x| !t.is_leaf(x)).collect();
        let (&[u1, u3], &[v]) = (leaves.as_slice(), others.as_slice()) else {
            return None;
        };
        let (u1, u3) = (u1.min(u3), u1.max(u3));
        Some(ReductionStep {
            op: OpId::O3,
            pattern_id: None,
            embedding: None,
            base_image: vec![v],
            removed: vec![u1, u2, u3],
            restored_edge: None,
        })
    })
}

/// Every reduction applicable to `t`, in scan order: operations `O1..O6`,
/// then admissible patterns in registry order, then embeddings by image.
pub fn all_reductions(t: &Tree, o4_includes_t14: bool) -> Vec<ReductionStep> {
    if t.order() <= BASE_MAX_ORDER {
        return Vec::new();
    }
    let mut out = Vec::new();
    for &op in OpId::ALL {
        if op == OpId::O3 {
            out.extend(o3_reductions(t));
            continue;
        }
        for p in augmented_patterns(o4_includes_t14)
            .iter()
            .filter(|p| p.op == Some(op))
        {
            out.extend(
                find_pdi_embeddings(t, p)
                    .into_iter()
                    .map(ReductionStep::from_embedding),
            );
        }
    }
    out
}

/// The first reduction in scan order, or `None` when the tree has order at
/// most 4 or admits none.
pub fn reduce_once(t: &Tree, o4_includes_t14: bool) -> Option<ReductionStep> {
    if t.order() <= BASE_MAX_ORDER {
        return None;
    }
    for &op in OpId::ALL {
        if op == OpId::O3 {
            if let Some(r) = o3_reductions(t).next() {
                return Some(r);
            }
            continue;
        }
        for p in augmented_patterns(o4_includes_t14)
            .iter()
            .filter(|p| p.op == Some(op))
        {
            if let Some(e) = find_pdi_embeddings(t, p).into_iter().next() {
                return Some(ReductionStep::from_embedding(e));
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecognizeOptions {
    /// Backtrack over every reduction instead of taking the first.
    pub paranoid: bool,
    /// Fail when the outcome disagrees with `gamma2 == alpha2`, or when a
    /// reduction changes `alpha2 - gamma2`.
    pub check_theorem: bool,
    pub o4_includes_t14: bool,
}

impl Default for RecognizeOptions {
    fn default() -> Self {
        RecognizeOptions {
            paranoid: false,
            check_theorem: true,
            o4_includes_t14: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub accepted: bool,
    pub certificate: Option<Certificate>,
    pub gamma2: usize,
    pub alpha2: usize,
}

/// Decides membership with the default options.
pub fn recognize(t: &Tree) -> Result<Verdict, RecognizeError> {
    recognize_with(t, &RecognizeOptions::default())
}

pub fn recognize_with(t: &Tree, opts: &RecognizeOptions) -> Result<Verdict, RecognizeError> {
    let (g, a) = (gamma2(t), alpha2(t));
    let trace = if opts.paranoid {
        search(t, opts.o4_includes_t14, &mut HashSet::new())
    } else {
        greedy(t, opts)?
    };
    let accepted = trace.is_some();
    if opts.check_theorem && accepted != (g == a) {
        return Err(RecognizeError::InternalInconsistency {
            accepted,
            gamma2: g,
            alpha2: a,
        });
    }
    Ok(Verdict {
        accepted,
        certificate: trace.map(|trace| certificate_from(t, &trace)),
        gamma2: g,
        alpha2: a,
    })
}

/// Reductions applied in order, each with the tree it produced and the
/// relabeling back to the previous tree.
type Trace = Vec<(ReductionStep, Tree, Vec<Vertex>)>;

fn greedy(t: &Tree, opts: &RecognizeOptions) -> Result<Option<Trace>, RecognizeError> {
    let mut trace = Trace::new();
    let mut cur = t.clone();
    let mut diff = (gamma2(t), alpha2(t));
    while cur.order() > BASE_MAX_ORDER {
        let Some(step) = reduce_once(&cur, opts.o4_includes_t14) else {
            return Ok(None);
        };
        let (next, kept) = reduce(&cur, &step);
        if opts.check_theorem {
            let after = (gamma2(&next), alpha2(&next));
            if after.1 as i64 - after.0 as i64 != diff.1 as i64 - diff.0 as i64 {
                return Err(RecognizeError::DeltaViolated {
                    op: step.op,
                    before: diff,
                    after,
                });
            }
            diff = after;
        }
        trace.push((step, next.clone(), kept));
        cur = next;
    }
    Ok(Some(trace))
}

/// Depth-first search over all reductions, remembering canonical codes of
/// trees already known to be dead ends.
fn search(t: &Tree, o4_includes_t14: bool, dead: &mut HashSet<String>) -> Option<Trace> {
    if t.order() <= BASE_MAX_ORDER {
        return Some(Trace::new());
    }
    let code = canonical_code(t);
    if dead.contains(&code) {
        return None;
    }
    for step in all_reductions(t, o4_includes_t14) {
        let (next, kept) = reduce(t, &step);
        if let Some(rest) = search(&next, o4_includes_t14, dead) {
            let mut trace = vec![(step, next, kept)];
            trace.extend(rest);
            return Some(trace);
        }
    }
    dead.insert(code);
    None
}

/// Reverses a reduction trace into forward steps on the final tree's labels.
fn certificate_from(t: &Tree, trace: &Trace) -> Certificate {
    let base = trace
        .last()
        .map_or_else(|| t.clone(), |(_, tree, _)| tree.clone());
    // pi[j] = label in the current reduction tree of replay vertex j
    let mut pi: Vec<Vertex> = base.vertices().collect();
    let mut steps = Vec::with_capacity(trace.len());
    for (step, _, kept) in trace.iter().rev() {
        let n = pi.len();
        let mut inv = HashMap::with_capacity(n);
        for (j, &x) in pi.iter().enumerate() {
            inv.insert(x, j);
        }
        // previous-tree label -> reduced-tree label -> replay label
        let to_replay = |x: Vertex| {
            let reduced = kept.binary_search(&x).expect("pattern vertices are kept");
            inv[&reduced]
        };
        let image: Vec<Vertex> = step.base_image.iter().map(|&x| to_replay(x)).collect();
        let forward = match step.pattern_id {
            None => OpStep::o3(n, image[0]),
            Some(id) => OpStep::from_embedding(
                n,
                step.op,
                &Embedding {
                    pattern: id,
                    op: None,
                    map: image,
                },
            ),
        };
        steps.push(forward);
        pi = pi
            .iter()
            .map(|&x| kept[x])
            .chain(step.removed.iter().copied())
            .collect();
    }
    debug_assert!(pi.len() == t.order());
    Certificate { base, steps }
}

/// Why a certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CertificateFault {
    BaseTooLarge(usize),
    BadStep { index: usize, reason: String },
    Mismatch,
}

impl std::fmt::Display for CertificateFault {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CertificateFault::BaseTooLarge(n) => {
                write!(f, "base tree has order {n} > {BASE_MAX_ORDER}")
            }
            CertificateFault::BadStep { index, reason } => write!(f, "step {index}: {reason}"),
            CertificateFault::Mismatch => {
                f.write_str("replayed tree is not isomorphic to the target")
            }
        }
    }
}

/// Replays `c`, re-checking every step, and compares the result with `t` up
/// to isomorphism.
pub fn verify_certificate(c: &Certificate, t: &Tree) -> Result<(), CertificateFault> {
    if c.base.order() > BASE_MAX_ORDER {
        return Err(CertificateFault::BaseTooLarge(c.base.order()));
    }
    let mut cur = c.base.clone();
    for (index, step) in c.steps.iter().enumerate() {
        cur = apply_o(&cur, step).map_err(|e: ConstructError| CertificateFault::BadStep {
            index,
            reason: e.to_string(),
        })?;
    }
    if canonical_code(&cur) != canonical_code(t) {
        return Err(CertificateFault::Mismatch);
    }
    Ok(())
}
