//! Forward construction: the local operations `O1`..`O6` that generate the
//! family of (γ₂, α₂)-trees from trees of order at most 4, the older
//! operations `R1`..`R4` with their global preconditions, and seeded random
//! generation of members.

use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::enumerate::enumerate_free_trees;
use crate::error::{ConstructError, PatternError};
use crate::patterns::{
    admissible, check_embedding, find_pdi_embeddings, pattern, Embedding, OpId, PatternId, Role,
};
use crate::solvers::{alpha2, gamma2, in_every_alpha2_set, in_some_gamma2_set};
use crate::tree::{Tree, Vertex, VertexSet};

pub const BASE_MAX_ORDER: usize = 4;

/// One forward operation applied to the current tree.
///
/// `image` maps the special tree's vertices into the current tree (for `O3`
/// it is the single attacher). `added` are the new ids, always the next free
/// ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpStep {
    pub op: OpId,
    pub pattern_id: Option<PatternId>,
    pub image: Vec<Vertex>,
    #[serde(default)]
    pub roles: BTreeMap<Role, Vertex>,
    pub added: Vec<Vertex>,
    #[serde(default)]
    pub removed_edge: Option<(Vertex, Vertex)>,
}

impl OpStep {
    /// `O3` at vertex `v` of a tree of order `n`.
    pub fn o3(n: usize, v: Vertex) -> Self {
        OpStep {
            op: OpId::O3,
            pattern_id: None,
            image: vec![v],
            roles: BTreeMap::from([(Role::V, v)]),
            added: (n..n + 3).collect(),
            removed_edge: None,
        }
    }

    /// The step applying `op` to a PDI-subtree of a tree of order `n`.
    pub fn from_embedding(n: usize, op: OpId, e: &Embedding) -> Self {
        let p = pattern(e.pattern);
        let roles: BTreeMap<Role, Vertex> = p.roles.iter().map(|(&r, &v)| (r, e.map[v])).collect();
        let removed_edge = (op == OpId::O6).then(|| (roles[&Role::V1], roles[&Role::V2]));
        OpStep {
            op,
            pattern_id: Some(e.pattern),
            image: e.map.clone(),
            roles,
            added: (n..n + op.arity()).collect(),
            removed_edge,
        }
    }

    fn attacher(&self, r: Role) -> Result<Vertex, ConstructError> {
        self.roles
            .get(&r)
            .copied()
            .ok_or_else(|| ConstructError::MalformedStep(format!("missing role {r}")))
    }
}

/// A base tree of order at most 4 and the operations rebuilding a member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub base: Tree,
    pub steps: Vec<OpStep>,
}

impl Certificate {
    /// Replays every step from the base.
    pub fn replay(&self) -> Result<Tree, ConstructError> {
        if self.base.order() > BASE_MAX_ORDER {
            return Err(ConstructError::MalformedStep(format!(
                "base tree has order {} > {BASE_MAX_ORDER}",
                self.base.order()
            )));
        }
        self.steps
            .iter()
            .try_fold(self.base.clone(), |t, step| apply_o(&t, step))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Applies one of `O1`..`O6`, after checking that the step names a PDI
/// embedding of an admissible special tree.
pub fn apply_o(t: &Tree, step: &OpStep) -> Result<Tree, ConstructError> {
    let n = t.order();
    let malformed = |m: String| Err(ConstructError::MalformedStep(m));
    let expected_added: Vec<Vertex> = (n..n + step.op.arity()).collect();
    if step.added != expected_added {
        return malformed(format!(
            "{} adds {:?}, expected {expected_added:?}",
            step.op, step.added
        ));
    }
    if step.removed_edge.is_some() != (step.op == OpId::O6) {
        return malformed("removed_edge must be present exactly for O6".into());
    }

    if step.op == OpId::O3 {
        if step.pattern_id.is_some() {
            return malformed("O3 takes no pattern".into());
        }
        let [v] = step.image[..] else {
            return malformed("O3 image must be a single vertex".into());
        };
        if v >= n {
            return Err(ConstructError::InvalidAttacher(format!(
                "vertex {v} outside a tree of order {n}"
            )));
        }
        if step.roles.iter().any(|(&r, &x)| r != Role::V || x != v) {
            return malformed("O3 roles must be {v}".into());
        }
        let mut edges = t.edges();
        edges.extend([(v, n + 1), (n, n + 1), (n + 1, n + 2)]);
        return Ok(Tree::new(n + 3, &edges)?);
    }

    let Some(id) = step.pattern_id else {
        return malformed(format!("{} needs a pattern", step.op));
    };
    if !admissible(step.op, true).contains(&id) {
        return Err(PatternError::InadmissiblePattern {
            pattern: id,
            op: step.op,
        }
        .into());
    }
    let p = pattern(id);
    check_embedding(t, p, &step.image).map_err(ConstructError::NoSuchEmbedding)?;
    let roles: BTreeMap<Role, Vertex> = p.roles.iter().map(|(&r, &v)| (r, step.image[v])).collect();
    if roles != step.roles {
        return malformed(format!(
            "roles {:?} do not match the image ({roles:?})",
            step.roles
        ));
    }

    let mut edges = t.edges();
    match step.op {
        OpId::O1 => edges.push((step.attacher(Role::V)?, n)),
        OpId::O2 => edges.extend([(step.attacher(Role::V)?, n), (n, n + 1)]),
        OpId::O4 => edges.extend([(step.attacher(Role::V)?, n), (n, n + 1), (n + 1, n + 2)]),
        OpId::O5 => {
            let (v1, v2) = (step.attacher(Role::V1)?, step.attacher(Role::V2)?);
            edges.extend([(v1, n), (n, n + 2), (v2, n + 1)]);
        }
        OpId::O6 => {
            let (v1, v2) = (step.attacher(Role::V1)?, step.attacher(Role::V2)?);
            let want = (v1.min(v2), v1.max(v2));
            let given = step.removed_edge.expect("checked above");
            if (given.0.min(given.1), given.0.max(given.1)) != want {
                return malformed(format!("O6 must remove {want:?}, not {given:?}"));
            }
            let before = edges.len();
            edges.retain(|&e| e != want);
            if edges.len() == before {
                return Err(ConstructError::InvalidAttacher(format!(
                    "{v1} and {v2} are not adjacent"
                )));
            }
            edges.extend([(v1, n), (n, n + 1), (n + 1, n + 2), (v2, n + 1)]);
        }
        OpId::O3 => unreachable!(),
    }
    Ok(Tree::new(n + step.op.arity(), &edges)?)
}

/// Every way of applying `op` to `t`, in scan order (registry order, then
/// embedding order; for `O3`, vertex order).
pub fn applicable_steps(t: &Tree, op: OpId, o4_includes_t14: bool) -> Vec<OpStep> {
    let n = t.order();
    if op == OpId::O3 {
        return t.vertices().map(|v| OpStep::o3(n, v)).collect();
    }
    admissible(op, o4_includes_t14)
        .iter()
        .flat_map(|&id| find_pdi_embeddings(t, pattern(id)))
        .map(|e| OpStep::from_embedding(n, op, &e))
        .collect()
}

/// The operations of the older construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RStep {
    /// Star `K_{1,p}` whose center joins `attach`.
    R1 { p: usize, attach: Vertex },
    /// Double star with `p` leaves at `v` and one at `u`; `v` joins `attach`.
    R2 { p: usize, attach: Vertex },
    /// Path `u'u` with `u` joined to the leaf `attach`.
    R3 { attach: Vertex },
    /// Path `u'uv` with `v` joined to `attach`.
    R4 { attach: Vertex },
}

impl RStep {
    pub fn attach(&self) -> Vertex {
        match *self {
            RStep::R1 { attach, .. }
            | RStep::R2 { attach, .. }
            | RStep::R3 { attach }
            | RStep::R4 { attach } => attach,
        }
    }
}

/// If γ₂(t − w) = γ₂(t) − 1, no neighbor of `w` lies in a minimum
/// 2-dominating set of t − w.
fn neighbors_avoid_gamma2_sets(t: &Tree, w: Vertex, gamma_t: usize) -> bool {
    let (rest, old) = t.delete_vertices(&VertexSet::from([w]));
    if gamma2(&rest) + 1 != gamma_t {
        return true;
    }
    t.neighbors(w).iter().all(|&x| {
        let x_new = old.binary_search(&x).expect("neighbor survives");
        !in_some_gamma2_set(&rest, x_new)
    })
}

/// Checks the global precondition of an `R` operation on `t`.
pub fn check_r_precondition(t: &Tree, step: &RStep) -> Result<(), ConstructError> {
    use ConstructError::PreconditionViolated as Violated;
    let w = step.attach();
    if w >= t.order() {
        return Err(ConstructError::InvalidAttacher(format!(
            "vertex {w} outside a tree of order {}",
            t.order()
        )));
    }
    match *step {
        RStep::R1 { p, .. } => {
            if p < 2 {
                return Err(Violated("R1 needs p >= 2"));
            }
        }
        RStep::R2 { p, .. } => {
            if p < 1 {
                return Err(Violated("R2 needs p >= 1"));
            }
            if !neighbors_avoid_gamma2_sets(t, w, gamma2(t)) {
                return Err(Violated(
                    "R2: a neighbor of w belongs to a gamma2(T - w)-set",
                ));
            }
        }
        RStep::R3 { .. } => {
            if !t.is_leaf(w) {
                return Err(Violated("R3: v is not a leaf"));
            }
            if !in_every_alpha2_set(t, w) {
                return Err(Violated("R3: v is not in every alpha2-set"));
            }
            let (rest, _) = t.delete_vertices(&VertexSet::from([w]));
            if alpha2(&rest) + 1 != alpha2(t) {
                return Err(Violated("R3: alpha2(T - v) + 1 != alpha2(T)"));
            }
        }
        RStep::R4 { .. } => {
            if !in_some_gamma2_set(t, w) {
                return Err(Violated("R4: w is in no gamma2-set"));
            }
            let gamma_t = gamma2(t);
            let (rest, _) = t.delete_vertices(&VertexSet::from([w]));
            if gamma2(&rest) > gamma_t {
                return Err(Violated("R4: gamma2(T - w) > gamma2(T)"));
            }
            if !neighbors_avoid_gamma2_sets(t, w, gamma_t) {
                return Err(Violated(
                    "R4: a neighbor of w belongs to a gamma2(T - w)-set",
                ));
            }
        }
    }
    Ok(())
}

/// Applies an `R` operation after checking its precondition. New vertices
/// take the next free ids, starting with the one joined to `t`.
pub fn apply_r(t: &Tree, step: &RStep) -> Result<Tree, ConstructError> {
    check_r_precondition(t, step)?;
    let n = t.order();
    let w = step.attach();
    let mut edges = t.edges();
    let added = match *step {
        RStep::R1 { p, .. } => {
            edges.push((w, n));
            edges.extend((1..=p).map(|i| (n, n + i)));
            p + 1
        }
        RStep::R2 { p, .. } => {
            // v = n with leaves n+1..=n+p, then u and its leaf
            edges.push((w, n));
            edges.extend((1..=p).map(|i| (n, n + i)));
            let u = n + p + 1;
            edges.extend([(n, u), (u, u + 1)]);
            p + 3
        }
        RStep::R3 { .. } => {
            edges.extend([(w, n), (n, n + 1)]);
            2
        }
        RStep::R4 { .. } => {
            edges.extend([(w, n), (n, n + 1), (n + 1, n + 2)]);
            3
        }
    };
    Ok(Tree::new(n + added, &edges)?)
}

/// Knobs for [`random_member`].
#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    /// Relative weights of `O1`..`O6`.
    pub op_weights: [f64; 6],
    pub o4_includes_t14: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            op_weights: [1.0; 6],
            o4_includes_t14: true,
        }
    }
}

/// The trees of order at most 4, one per isomorphism class.
pub fn base_trees() -> Vec<Tree> {
    (1..=BASE_MAX_ORDER)
        .flat_map(enumerate_free_trees)
        .collect()
}

/// A random member built by `steps` operations from a random base tree.
///
/// At each step an operation is drawn by weight; if it cannot be applied it
/// is dropped and another is drawn. The chosen operation is applied at a
/// uniformly random place.
pub fn random_member(seed: u64, steps: usize, cfg: &GenConfig) -> (Tree, Certificate) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = base_trees()
        .choose(&mut rng)
        .expect("five base trees")
        .clone();
    let mut t = base.clone();
    let mut cert = Certificate {
        base,
        steps: Vec::new(),
    };
    for _ in 0..steps {
        if let Some(step) = random_step(&mut rng, &t, cfg) {
            t = apply_o(&t, &step).expect("generated steps are valid");
            cert.steps.push(step);
        }
    }
    (t, cert)
}

/// One randomly chosen applicable step, or `None` if no operation with
/// positive weight applies.
pub fn random_step<R: Rng + ?Sized>(rng: &mut R, t: &Tree, cfg: &GenConfig) -> Option<OpStep> {
    let mut weights = cfg.op_weights;
    loop {
        let dist = WeightedIndex::new(weights).ok()?;
        let i = dist.sample(rng);
        let candidates = applicable_steps(t, OpId::ALL[i], cfg.o4_includes_t14);
        if let Some(step) = candidates.choose(rng) {
            return Some(step.clone());
        }
        weights[i] = 0.0;
    }
}

/// A random tree of the older family: a star `K_{1,p}` with `1 <= p <= 4`
/// followed by `steps` operations `R1`..`R4`, each drawn until its
/// precondition holds.
pub fn random_r_member(seed: u64, steps: usize) -> (Tree, Vec<RStep>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tree::star(rng.gen_range(1..=4));
    let mut applied = Vec::with_capacity(steps);
    for _ in 0..steps {
        loop {
            let attach = rng.gen_range(0..t.order());
            let step = match rng.gen_range(0..4) {
                0 => RStep::R1 {
                    p: rng.gen_range(2..=3),
                    attach,
                },
                1 => RStep::R2 {
                    p: rng.gen_range(1..=3),
                    attach,
                },
                2 => RStep::R3 {
                    attach: *t.leaves().choose(&mut rng).expect("trees have leaves"),
                },
                _ => RStep::R4 { attach },
            };
            if let Ok(next) = apply_r(&t, &step) {
                t = next;
                applied.push(step);
                break;
            }
        }
    }
    (t, applied)
}
