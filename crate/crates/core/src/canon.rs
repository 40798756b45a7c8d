//! AHU canonical codes for free trees.
//!
//! A tree is rooted at its center; bicentered trees take the lexicographically
//! smaller of the two rooted codes. Two trees get equal codes iff they are
//! isomorphic.

use crate::tree::{Tree, Vertex};

pub fn canonical_code(t: &Tree) -> String {
    t.centers()
        .into_iter()
        .map(|c| rooted_code(t, c))
        .min()
        .expect("a tree has at least one center")
}

/// Parenthesized AHU code of `t` rooted at `root`: each vertex is `(` followed
/// by its children's codes in sorted order and `)`.
pub fn rooted_code(t: &Tree, root: Vertex) -> String {
    let rv = t.rooted(root);
    let mut codes: Vec<String> = vec![String::new(); t.order()];
    for &v in rv.bfs_order.iter().rev() {
        let mut child_codes: Vec<String> = rv.children[v]
            .iter()
            .map(|&c| std::mem::take(&mut codes[c]))
            .collect();
        child_codes.sort_unstable();
        let mut code =
            String::with_capacity(2 + child_codes.iter().map(String::len).sum::<usize>());
        code.push('(');
        for c in child_codes {
            code.push_str(&c);
        }
        code.push(')');
        codes[v] = code;
    }
    std::mem::take(&mut codes[root])
}
