//! The 25 special trees, their augmented forms, and prescribed-degree
//! induced (PDI) matching.
//!
//! Every special tree has exactly one white vertex; the others are black. A
//! host tree contains a pattern as a PDI-subtree when some vertex subset
//! induces a copy of it in which every black vertex has the same degree in
//! the host as in the pattern. The white vertex is where the copy hangs off
//! the rest of the host, so its degree is free.
//!
//! The shapes, colors, role labels and witness marks live in
//! `fixtures/special_trees.txt`, with the white vertex numbered 0.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::PatternError;
use crate::solvers::{brute_alpha2, brute_gamma2, is_2dominating, is_2independent};
use crate::tree::{Tree, Vertex, VertexSet};

const FIXTURE: &str = include_str!("../fixtures/special_trees.txt");
const FIXTURE_VERSION: &str = "1";

macro_rules! string_enum {
    ($name:ident { $($variant:ident),+ $(,)? }) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => stringify!($variant)),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                $name::ALL
                    .iter()
                    .copied()
                    .find(|x| x.as_str() == s)
                    .ok_or_else(|| format!("unknown {} {s:?}", stringify!($name)))
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(self.as_str())
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_enum!(PatternId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
    T10,
    T11,
    T12,
    T13,
    T14,
    T15,
    B1,
    B2,
    B3,
    B4,
    B5,
    B6,
    B7,
    B8,
    B9,
    B10,
});

string_enum!(OpId {
    O1,
    O2,
    O3,
    O4,
    O5,
    O6
});

impl PatternId {
    /// Index `i` of the group `B_i` the pattern belongs to, for B-patterns:
    /// the distance from the white vertex to its farthest leaf.
    pub fn b_family(self) -> Option<u8> {
        use PatternId::*;
        match self {
            B1 => Some(0),
            B2 => Some(1),
            B3 => Some(2),
            B4 | B5 | B6 => Some(3),
            B7 | B8 => Some(4),
            B9 | B10 => Some(5),
            _ => None,
        }
    }

    pub fn is_b(self) -> bool {
        self.b_family().is_some()
    }
}

impl OpId {
    /// Number of vertices the operation adds.
    pub fn arity(self) -> usize {
        match self {
            OpId::O1 => 1,
            OpId::O2 => 2,
            _ => 3,
        }
    }
}

/// Named vertices of a pattern: the attachers `v`, `v1`, `v2`, the white
/// vertex `w` of B-patterns, and the vertices an operation adds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    V,
    V1,
    V2,
    W,
    U,
    U1,
    U2,
    U3,
}

impl Role {
    pub const ALL: &'static [Role] = &[
        Role::V,
        Role::V1,
        Role::V2,
        Role::W,
        Role::U,
        Role::U1,
        Role::U2,
        Role::U3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::V => "v",
            Role::V1 => "v1",
            Role::V2 => "v2",
            Role::W => "w",
            Role::U => "u",
            Role::U1 => "u1",
            Role::U2 => "u2",
            Role::U3 => "u3",
        }
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Role::ALL
            .iter()
            .copied()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown role {s:?}"))
    }
}

impl Serialize for Role {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Role {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    pub id: PatternId,
    /// Set on augmented patterns: the operation whose added vertices are
    /// included.
    pub op: Option<OpId>,
    pub shape: Tree,
    pub white: Vertex,
    pub roles: BTreeMap<Role, Vertex>,
    /// Minimum 2-dominating set marked on the special tree.
    pub squares: VertexSet,
    /// 2-independent set marked on the special tree.
    pub diamonds: VertexSet,
    /// Vertices added by `op`, in the order `u` / `u1, u2` / `u1, u2, u3`.
    pub added: Vec<Vertex>,
}

impl Pattern {
    pub fn order(&self) -> usize {
        self.shape.order()
    }

    pub fn is_black(&self, v: Vertex) -> bool {
        v != self.white
    }

    pub fn blacks(&self) -> VertexSet {
        self.shape
            .vertices()
            .filter(|&v| self.is_black(v))
            .collect()
    }

    pub fn role(&self, r: Role) -> Option<Vertex> {
        self.roles.get(&r).copied()
    }

    pub fn b_family(&self) -> Option<u8> {
        self.id.b_family()
    }

    /// `T4`, or `T4^O2` for an augmented pattern.
    pub fn label(&self) -> String {
        match self.op {
            Some(op) => format!("{}^{}", self.id, op),
            None => self.id.to_string(),
        }
    }

    /// Checks the invariants of a special tree against brute force.
    pub fn self_check(&self) -> Result<(), PatternError> {
        let fail = |invariant: String| PatternError::SelfCheckFailed {
            pattern: self.id,
            invariant,
        };
        if self.white >= self.order() {
            return Err(fail("white vertex out of range".into()));
        }
        let expected_roles: &[Role] = match self.id {
            PatternId::T6 | PatternId::T14 => &[Role::V, Role::V1, Role::V2],
            id if id.is_b() => &[Role::W],
            _ => &[Role::V],
        };
        let base_roles: Vec<Role> = self
            .roles
            .keys()
            .copied()
            .filter(|r| matches!(r, Role::V | Role::V1 | Role::V2 | Role::W))
            .collect();
        if base_roles != expected_roles {
            return Err(fail(format!(
                "roles {base_roles:?}, expected {expected_roles:?}"
            )));
        }
        if self.is_b() && self.role(Role::W) != Some(self.white) {
            return Err(fail("w must be the white vertex".into()));
        }
        if self.op.is_some() {
            return Ok(());
        }
        if !is_2dominating(&self.shape, &self.squares) {
            return Err(fail("squares are not 2-dominating".into()));
        }
        let gamma2 = brute_gamma2(&self.shape).map_err(|e| fail(e.to_string()))?;
        if self.squares.len() != gamma2 {
            return Err(fail(format!(
                "{} squares but gamma2 = {gamma2}",
                self.squares.len()
            )));
        }
        if !is_2independent(&self.shape, &self.diamonds) {
            return Err(fail("diamonds are not 2-independent".into()));
        }
        Ok(())
    }

    fn is_b(&self) -> bool {
        self.id.is_b()
    }
}

/// Parses the fixture text and self-checks every pattern.
pub fn load_registry(text: &str) -> Result<Vec<Pattern>, PatternError> {
    let mut version_seen = false;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let err = |message: String| PatternError::Fixture {
            line: line_no,
            message,
        };
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(v) = line.strip_prefix("version ") {
            if v.trim() != FIXTURE_VERSION {
                return Err(err(format!("unsupported version {v}")));
            }
            version_seen = true;
            continue;
        }
        if !version_seen {
            return Err(err("missing version line".into()));
        }
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        let [id, order, edges, white, roles, squares, diamonds] = fields[..] else {
            return Err(err(format!("expected 7 fields, found {}", fields.len())));
        };
        let id: PatternId = id.parse().map_err(err)?;
        let order: usize = order
            .parse()
            .map_err(|_| err(format!("bad order {order:?}")))?;
        let num = |s: &str| {
            s.parse::<Vertex>()
                .map_err(|_| err(format!("bad vertex id {s:?}")))
        };
        let mut edge_list = Vec::new();
        if edges != "-" {
            for e in edges.split_whitespace() {
                let (a, b) = e
                    .split_once('-')
                    .ok_or_else(|| err(format!("bad edge {e:?}")))?;
                edge_list.push((num(a)?, num(b)?));
            }
        }
        let shape = Tree::new(order, &edge_list).map_err(|e| err(e.to_string()))?;
        let mut role_map = BTreeMap::new();
        for r in roles.split_whitespace() {
            let (name, v) = r
                .split_once('=')
                .ok_or_else(|| err(format!("bad role {r:?}")))?;
            role_map.insert(name.parse::<Role>().map_err(err)?, num(v)?);
        }
        let set = |s: &str| -> Result<VertexSet, PatternError> {
            s.split_whitespace().map(num).collect()
        };
        let pattern = Pattern {
            id,
            op: None,
            shape,
            white: num(white)?,
            roles: role_map,
            squares: set(squares)?,
            diamonds: set(diamonds)?,
            added: Vec::new(),
        };
        if pattern
            .roles
            .values()
            .chain(pattern.squares.iter().collect::<Vec<_>>().iter())
            .any(|&v| v >= order)
            || pattern.diamonds.iter().any(|v| v >= order)
        {
            return Err(err("vertex id out of range".into()));
        }
        pattern.self_check()?;
        out.push(pattern);
    }
    let ids: Vec<PatternId> = out.iter().map(|p| p.id).collect();
    if ids != PatternId::ALL {
        return Err(PatternError::Fixture {
            line: 0,
            message: format!(
                "expected patterns {:?} in order, found {ids:?}",
                PatternId::ALL
            ),
        });
    }
    Ok(out)
}

/// The 25 special trees in registry order `T1..T15, B1..B10`.
///
/// Panics if the embedded fixture fails its self-checks; see
/// [`try_registry`].
pub fn registry() -> &'static [Pattern] {
    try_registry().unwrap_or_else(|e| panic!("embedded pattern fixture: {e}"))
}

pub fn try_registry() -> Result<&'static [Pattern], &'static PatternError> {
    static REGISTRY: OnceLock<Result<Vec<Pattern>, PatternError>> = OnceLock::new();
    REGISTRY.get_or_init(|| load_registry(FIXTURE)).as_deref()
}

pub fn pattern(id: PatternId) -> &'static Pattern {
    &registry()[PatternId::ALL
        .iter()
        .position(|&p| p == id)
        .expect("known id")]
}

/// Special trees an operation may be applied to. `O3` takes a bare vertex.
///
/// `o4_includes_t14` adds T14 to the `O4` list.
pub fn admissible(op: OpId, o4_includes_t14: bool) -> &'static [PatternId] {
    use PatternId::*;
    match op {
        OpId::O1 => &[T1, T2, T8],
        OpId::O2 => &[T4, T11, T12, T13, T15],
        OpId::O3 => &[],
        OpId::O4 if o4_includes_t14 => &[T1, T2, T3, T5, T6, T7, T9, T10, T14],
        OpId::O4 => &[T1, T2, T3, T5, T6, T7, T9, T10],
        OpId::O5 => &[T6],
        OpId::O6 => &[T14],
    }
}

/// Patterns whose attacher `v` is claimed to satisfy
/// `alpha2(T - v) = alpha2(T) - 1`.
pub const ATTACHER_DROP_PATTERNS: [PatternId; 7] = [
    PatternId::T3,
    PatternId::T4,
    PatternId::T7,
    PatternId::T11,
    PatternId::T12,
    PatternId::T13,
    PatternId::T15,
];

/// The special tree together with the vertices `op` attaches, all black.
///
/// Base vertices keep their ids; added vertices follow in order. `O6` also
/// drops the edge `v1 v2`.
pub fn augment(p: &Pattern, op: OpId) -> Result<Pattern, PatternError> {
    if p.op.is_some() || !admissible(op, true).contains(&p.id) {
        return Err(PatternError::InadmissiblePattern { pattern: p.id, op });
    }
    let k = p.order();
    let role = |r: Role| {
        p.role(r)
            .expect("admissible patterns carry their attachers")
    };
    let mut edges = p.shape.edges();
    let mut roles = p.roles.clone();
    let added: Vec<Vertex> = (k..k + op.arity()).collect();
    match op {
        OpId::O1 => {
            edges.push((role(Role::V), k));
            roles.insert(Role::U, k);
        }
        OpId::O2 => {
            edges.extend([(role(Role::V), k), (k, k + 1)]);
            roles.insert(Role::U1, k);
            roles.insert(Role::U2, k + 1);
        }
        OpId::O4 => {
            edges.extend([(role(Role::V), k), (k, k + 1), (k + 1, k + 2)]);
        }
        OpId::O5 => {
            // u1 = k, u2 = k + 1, u3 = k + 2
            edges.extend([(role(Role::V1), k), (k, k + 2), (role(Role::V2), k + 1)]);
        }
        OpId::O6 => {
            let (v1, v2) = (role(Role::V1), role(Role::V2));
            edges.retain(|&(a, b)| !((a == v1 && b == v2) || (a == v2 && b == v1)));
            edges.extend([(v1, k), (k, k + 1), (k + 1, k + 2), (v2, k + 1)]);
        }
        OpId::O3 => unreachable!("O3 admits no pattern"),
    }
    if op.arity() == 3 {
        roles.insert(Role::U1, k);
        roles.insert(Role::U2, k + 1);
        roles.insert(Role::U3, k + 2);
    }
    let shape = Tree::new(k + op.arity(), &edges).expect("augmentation keeps a tree");
    Ok(Pattern {
        id: p.id,
        op: Some(op),
        shape,
        white: p.white,
        roles,
        squares: p.squares.clone(),
        diamonds: p.diamonds.clone(),
        added,
    })
}

/// Every augmented pattern `(op, pattern)` in scan order: operations
/// `O1, O2, O4, O5, O6`, then registry order.
pub fn augmented_patterns(o4_includes_t14: bool) -> &'static [Pattern] {
    static WITH: OnceLock<Vec<Pattern>> = OnceLock::new();
    static WITHOUT: OnceLock<Vec<Pattern>> = OnceLock::new();
    let cell = if o4_includes_t14 { &WITH } else { &WITHOUT };
    cell.get_or_init(|| {
        let mut out = Vec::new();
        for &op in OpId::ALL {
            for &id in admissible(op, o4_includes_t14) {
                out.push(augment(pattern(id), op).expect("admissible by construction"));
            }
        }
        out
    })
}

/// A prescribed-degree induced copy of a pattern in a host tree:
/// `map[i]` is the host image of pattern vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Embedding {
    pub pattern: PatternId,
    pub op: Option<OpId>,
    pub map: Vec<Vertex>,
}

impl Embedding {
    pub fn image(&self) -> VertexSet {
        self.map.iter().copied().collect()
    }

    pub fn role_image(&self, p: &Pattern, r: Role) -> Option<Vertex> {
        p.role(r).map(|v| self.map[v])
    }

    /// Host images of the added vertices of an augmented pattern.
    pub fn added_image(&self, p: &Pattern) -> Vec<Vertex> {
        p.added.iter().map(|&v| self.map[v]).collect()
    }
}

/// Independent check of the embedding conditions: injective, adjacency and
/// non-adjacency preserved, and black vertices keep their pattern degree.
pub fn check_embedding(host: &Tree, p: &Pattern, map: &[Vertex]) -> Result<(), String> {
    if map.len() != p.order() {
        return Err(format!(
            "map has {} entries for {} vertices",
            map.len(),
            p.order()
        ));
    }
    if let Some(&h) = map.iter().find(|&&h| h >= host.order()) {
        return Err(format!("image {h} outside the host"));
    }
    let image: VertexSet = map.iter().copied().collect();
    if image.len() != map.len() {
        return Err("map is not injective".into());
    }
    for a in p.shape.vertices() {
        for b in a + 1..p.order() {
            if p.shape.has_edge(a, b) != host.has_edge(map[a], map[b]) {
                return Err(format!("pattern pair ({a}, {b}) not preserved"));
            }
        }
        if p.is_black(a) && host.degree(map[a]) != p.shape.degree(a) {
            return Err(format!(
                "black vertex {a} has host degree {} instead of {}",
                host.degree(map[a]),
                p.shape.degree(a)
            ));
        }
    }
    Ok(())
}

/// All PDI embeddings of `p` into `host`.
///
/// Embeddings that agree on the image set and on the image of every named
/// vertex are merged, keeping the lexicographically smallest map. The result
/// is sorted by map.
pub fn find_pdi_embeddings(host: &Tree, p: &Pattern) -> Vec<Embedding> {
    let k = p.order();
    if k > host.order() {
        return Vec::new();
    }
    // pattern vertices in BFS order from the white vertex, with parents
    let mut order = Vec::with_capacity(k);
    let mut parent = vec![usize::MAX; k];
    let mut seen = vec![false; k];
    seen[p.white] = true;
    let mut queue = VecDeque::from([p.white]);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &w in p.shape.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }

    let mut maps = Vec::new();
    let mut map = vec![usize::MAX; k];
    let mut used = vec![false; host.order()];
    for h in host.vertices() {
        map[p.white] = h;
        used[h] = true;
        extend(host, p, &order, &parent, 1, &mut map, &mut used, &mut maps);
        used[h] = false;
    }

    maps.sort_unstable();
    let mut keys = std::collections::HashSet::new();
    maps.into_iter()
        .filter(|m| {
            let named: Vec<Vertex> = p.roles.values().map(|&v| m[v]).collect();
            keys.insert((m.iter().copied().collect::<VertexSet>(), named))
        })
        .map(|map| Embedding {
            pattern: p.id,
            op: p.op,
            map,
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn extend(
    host: &Tree,
    p: &Pattern,
    order: &[Vertex],
    parent: &[Vertex],
    i: usize,
    map: &mut Vec<Vertex>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<Vertex>>,
) {
    if i == order.len() {
        out.push(map.clone());
        return;
    }
    let pv = order[i];
    let want = p.shape.degree(pv);
    for &h in host.neighbors(map[parent[pv]]) {
        if used[h] {
            continue;
        }
        let deg = host.degree(h);
        if (p.is_black(pv) && deg != want) || deg < want {
            continue;
        }
        map[pv] = h;
        used[h] = true;
        extend(host, p, order, parent, i + 1, map, used, out);
        used[h] = false;
    }
    map[pv] = usize::MAX;
}

/// One row of the pattern self-check table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternReport {
    pub id: PatternId,
    pub order: usize,
    pub white: Vertex,
    pub squares: usize,
    pub squares_dominating: bool,
    pub gamma2: usize,
    pub diamonds: usize,
    pub diamonds_independent: bool,
    pub alpha2: usize,
    /// `alpha2(T - v)` for patterns in [`ATTACHER_DROP_PATTERNS`].
    pub alpha2_without_attacher: Option<usize>,
}

impl PatternReport {
    pub fn diamonds_match_alpha2(&self) -> bool {
        self.diamonds == self.alpha2
    }

    /// Whether `alpha2(T - v) = alpha2(T) - 1`, when applicable.
    pub fn attacher_drop_holds(&self) -> Option<bool> {
        self.alpha2_without_attacher.map(|a| a + 1 == self.alpha2)
    }

    /// The invariants every special tree must satisfy.
    pub fn passes(&self) -> bool {
        self.squares_dominating && self.squares == self.gamma2 && self.diamonds_independent
    }
}

/// Brute-force self-check of every registry pattern.
pub fn selfcheck_report() -> Vec<PatternReport> {
    registry()
        .iter()
        .map(|p| {
            let v = p.role(Role::V);
            let alpha2_without_attacher = match v {
                Some(v) if ATTACHER_DROP_PATTERNS.contains(&p.id) => {
                    let (rest, _) = p.shape.delete_vertices(&VertexSet::from([v]));
                    Some(brute_alpha2(&rest).expect("patterns are small"))
                }
                _ => None,
            };
            PatternReport {
                id: p.id,
                order: p.order(),
                white: p.white,
                squares: p.squares.len(),
                squares_dominating: is_2dominating(&p.shape, &p.squares),
                gamma2: brute_gamma2(&p.shape).expect("patterns are small"),
                diamonds: p.diamonds.len(),
                diamonds_independent: is_2independent(&p.shape, &p.diamonds),
                alpha2: brute_alpha2(&p.shape).expect("patterns are small"),
                alpha2_without_attacher,
            }
        })
        .collect()
}
