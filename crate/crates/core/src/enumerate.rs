//! Exhaustive generation of free trees, one per isomorphism class.
//!
//! Trees are produced as canonical level sequences of rooted trees, filtered
//! so that only the center-rooted representative of each free tree survives
//! (Wright, Richmond, Odlyzko and McKay, "Constant time generation of free
//! trees", SIAM J. Comput. 1986). Prüfer decoding of labeled trees is kept as
//! an independent small-order oracle.

use rand::Rng;

use crate::tree::{Tree, Vertex};

/// Iterator over the non-isomorphic free trees of a fixed order, in a
/// deterministic order.
#[derive(Clone, Debug)]
pub struct FreeTrees {
    n: usize,
    layout: Option<Vec<usize>>,
    started: bool,
}

pub fn enumerate_free_trees(n: usize) -> FreeTrees {
    assert!(n >= 1, "tree order must be positive");
    let layout = if n <= 2 {
        Some((0..n).collect())
    } else {
        let mut l: Vec<usize> = (0..=n / 2).collect();
        l.extend(1..n.div_ceil(2));
        Some(l)
    };
    FreeTrees {
        n,
        layout,
        started: false,
    }
}

impl Iterator for FreeTrees {
    type Item = Tree;

    fn next(&mut self) -> Option<Tree> {
        if self.n <= 2 {
            if self.started {
                return None;
            }
            self.started = true;
            return self.layout.take().map(|l| layout_to_tree(&l));
        }
        let current = self.layout.take()?;
        let candidate = if self.started {
            next_rooted_tree(&current, None)?
        } else {
            current
        };
        self.started = true;
        let accepted = next_free_candidate(candidate)?;
        let tree = layout_to_tree(&accepted);
        self.layout = Some(accepted);
        Some(tree)
    }
}

/// Successor of a canonical level sequence in reverse-lexicographic order,
/// optionally forcing the change at position `p`.
fn next_rooted_tree(pred: &[usize], p: Option<usize>) -> Option<Vec<usize>> {
    let p = match p {
        Some(p) => p,
        None => {
            let mut p = pred.len() - 1;
            while pred[p] == 1 {
                p -= 1;
            }
            p
        }
    };
    if p == 0 {
        return None;
    }
    let mut q = p - 1;
    while pred[q] != pred[p] - 1 {
        q -= 1;
    }
    let mut out = pred.to_vec();
    for i in p..out.len() {
        out[i] = out[i - p + q];
    }
    Some(out)
}

fn split(layout: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let m = layout
        .iter()
        .enumerate()
        .filter(|&(_, &d)| d == 1)
        .nth(1)
        .map(|(i, _)| i)
        .unwrap_or(layout.len());
    let left = layout[1..m].iter().map(|&d| d - 1).collect();
    let mut rest = vec![0];
    rest.extend_from_slice(&layout[m..]);
    (left, rest)
}

/// Advances `candidate` until it is the canonical center-rooted sequence of a
/// free tree, or returns `None` when the order is exhausted.
fn next_free_candidate(mut candidate: Vec<usize>) -> Option<Vec<usize>> {
    loop {
        let (left, rest) = split(&candidate);
        let left_height = *left.iter().max().unwrap_or(&0);
        let rest_height = *rest.iter().max().unwrap_or(&0);
        let mut valid = rest_height >= left_height;
        if valid
            && rest_height == left_height
            && (left.len() > rest.len() || (left.len() == rest.len() && left > rest))
        {
            valid = false;
        }
        if valid {
            return Some(candidate);
        }
        let p = left.len();
        let mut next = next_rooted_tree(&candidate, Some(p))?;
        if candidate[p] > 2 {
            let (new_left, _) = split(&next);
            let h = *new_left.iter().max().unwrap_or(&0);
            let len = next.len();
            for (k, slot) in next[len - (h + 1)..].iter_mut().enumerate() {
                *slot = k + 1;
            }
        }
        candidate = next;
    }
}

/// Level sequence to tree: vertex `i` hangs from the latest earlier vertex one
/// level up.
fn layout_to_tree(layout: &[usize]) -> Tree {
    let mut stack: Vec<Vertex> = Vec::new();
    let mut edges = Vec::with_capacity(layout.len().saturating_sub(1));
    for (i, &level) in layout.iter().enumerate() {
        stack.truncate(level);
        if let Some(&parent) = stack.last() {
            edges.push((parent, i));
        }
        stack.push(i);
    }
    Tree::new(layout.len(), &edges).expect("level sequence encodes a tree")
}

/// All `n^(n-2)` labeled trees on `n` vertices, via Prüfer decoding.
pub fn labeled_trees(n: usize) -> impl Iterator<Item = Tree> {
    assert!(n >= 1);
    let len = n.saturating_sub(2);
    let total = if n <= 2 { 1 } else { n.pow(len as u32) };
    (0..total).map(move |mut index| {
        let mut seq = vec![0; len];
        for slot in seq.iter_mut().rev() {
            *slot = index % n;
            index /= n;
        }
        prufer_decode(n, &seq)
    })
}

pub fn prufer_decode(n: usize, seq: &[Vertex]) -> Tree {
    if n == 1 {
        return Tree::single_vertex();
    }
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf remains");
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<Vertex> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Tree::new(n, &edges).expect("Prüfer sequences decode to trees")
}

/// A uniformly random labeled tree on `n` vertices.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Tree {
    assert!(n >= 1);
    let seq: Vec<Vertex> = (0..n.saturating_sub(2))
        .map(|_| rng.gen_range(0..n))
        .collect();
    prufer_decode(n, &seq)
}
