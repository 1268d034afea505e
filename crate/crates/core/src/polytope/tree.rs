//! Planar rooted trees (faces of the associahedron), their boundary, and
//! the cellular projection from ordered-partition faces to tree faces.
//!
//! A face of the associahedron on n + 1 leaves is a planar rooted tree
//! whose internal nodes each have at least two children; its dimension is
//! `leaves - 1 - nodes`. The projection sends an ordered partition of
//! {1..n} to a tree by treating element i as the boundary between leaves i
//! and i + 1 and merging components block by block; blocks whose boundaries
//! are not consecutive at their stage collapse the cell, which at chain
//! level means the face maps to zero.

use serde_json::Value;

use super::partition::OrderedPartition;
use super::Chain2;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Tree {
    Leaf(u8),
    Node(Vec<Tree>),
}

impl Tree {
    pub fn leaf_count(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(children) => children.iter().map(Tree::leaf_count).sum(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(children) => 1 + children.iter().map(Tree::node_count).sum::<usize>(),
        }
    }

    /// Cell dimension inside the associahedron on `leaf_count` leaves.
    pub fn dim(&self) -> usize {
        self.leaf_count() - 1 - self.node_count()
    }

    /// Compact word form; the root node is written without parentheses:
    /// `((12)3)4`, `1234`, `(12)(34)`.
    pub fn word(&self) -> String {
        fn inner(t: &Tree, out: &mut String) {
            match t {
                Tree::Leaf(l) => out.push_str(&l.to_string()),
                Tree::Node(children) => {
                    out.push('(');
                    for c in children {
                        inner(c, out);
                    }
                    out.push(')');
                }
            }
        }
        match self {
            Tree::Leaf(l) => l.to_string(),
            Tree::Node(children) => {
                let mut out = String::new();
                for c in children {
                    inner(c, &mut out);
                }
                out
            }
        }
    }

    /// Nested-array form: a leaf is its label, a node is the array of its
    /// children.
    pub fn to_json(&self) -> Value {
        match self {
            Tree::Leaf(l) => Value::from(*l),
            Tree::Node(children) => Value::Array(children.iter().map(Tree::to_json).collect()),
        }
    }
}

impl std::fmt::Display for Tree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.word())
    }
}

/// Cellular projection of an ordered-partition face to a tree face, or
/// None when the cell collapses to lower dimension.
///
/// Components start as the leaves 1..n+1. Each block's elements index gaps
/// between adjacent components; a block must hit a single consecutive run
/// of gaps, and then the spanned components merge under one new node.
pub fn tonks_projection(face: &OrderedPartition) -> Option<Tree> {
    let n = face.n();
    let mut comps: Vec<(Tree, u8, u8)> = (1..=n + 1).map(|l| (Tree::Leaf(l), l, l)).collect();
    for block in face.blocks() {
        let mut gaps: Vec<usize> = block
            .iter()
            .map(|&i| {
                comps
                    .iter()
                    .position(|&(_, lo, hi)| lo <= i && i <= hi)
                    .expect("leaf intervals cover 1..n+1")
            })
            .collect();
        gaps.sort_unstable();
        if gaps.windows(2).any(|w| w[1] != w[0] + 1) {
            return None;
        }
        let (start, end) = (gaps[0], gaps[gaps.len() - 1] + 1);
        let lo = comps[start].1;
        let hi = comps[end].2;
        let children: Vec<Tree> = comps.drain(start..=end).map(|(t, _, _)| t).collect();
        comps.insert(start, (Tree::Node(children), lo, hi));
    }
    assert_eq!(comps.len(), 1, "all boundaries processed");
    Some(comps.pop().expect("single component").0)
}

/// Boundary of a tree face: for every node with c children, each
/// contiguous run of 2..=c-1 children is gathered under a fresh node.
/// Coefficients live in the two-element field.
pub fn tree_boundary(t: &Tree) -> Chain2<Tree> {
    let mut out = Chain2::new();
    match t {
        Tree::Leaf(_) => out,
        Tree::Node(children) => {
            let c = children.len();
            for len in 2..c {
                for start in 0..=c - len {
                    let mut kids = children.clone();
                    let grouped: Vec<Tree> = kids.drain(start..start + len).collect();
                    kids.insert(start, Tree::Node(grouped));
                    out.toggle(Tree::Node(kids));
                }
            }
            for (idx, child) in children.iter().enumerate() {
                for sub in tree_boundary(child).iter() {
                    let mut kids = children.clone();
                    kids[idx] = sub.clone();
                    out.toggle(Tree::Node(kids));
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::super::partition::enumerate_faces;
    use super::*;

    fn face(n: u8, text: &str) -> OrderedPartition {
        OrderedPartition::parse(n, text).unwrap()
    }

    fn project_word(n: u8, text: &str) -> Option<String> {
        tonks_projection(&face(n, text)).map(|t| t.word())
    }

    #[test]
    fn projection_fixtures() {
        assert_eq!(project_word(3, "1|2|3").as_deref(), Some("((12)3)4"));
        assert_eq!(project_word(3, "3|2|1").as_deref(), Some("1(2(34))"));
        assert_eq!(project_word(3, "2|13").as_deref(), Some("1(23)4"));
        assert_eq!(project_word(3, "13|2"), None);
        assert_eq!(project_word(3, "123").as_deref(), Some("1234"));
        assert_eq!(project_word(2, "12").as_deref(), Some("123"));
        assert_eq!(project_word(1, "1").as_deref(), Some("12"));
    }

    #[test]
    fn six_vertices_cover_five_binary_trees() {
        let words: BTreeSet<String> = enumerate_faces(3)
            .unwrap()
            .into_iter()
            .filter(|f| f.dim() == 0)
            .map(|f| tonks_projection(&f).expect("vertices never collapse").word())
            .collect();
        let expect: BTreeSet<String> =
            ["((12)3)4", "(1(23))4", "(12)(34)", "1((23)4)", "1(2(34))"]
                .iter()
                .map(|s| s.to_string())
                .collect();
        assert_eq!(words, expect);
        assert_eq!(project_word(3, "1|3|2"), project_word(3, "3|1|2"));
    }

    #[test]
    fn projection_dimension_is_preserved_or_none() {
        for n in 1..=5u8 {
            for f in enumerate_faces(n).unwrap() {
                if let Some(t) = tonks_projection(&f) {
                    assert_eq!(t.leaf_count(), n as usize + 1);
                    assert_eq!(t.dim() as i64, f.dim(), "{f}");
                }
            }
        }
    }

    #[test]
    fn corolla_boundary_has_five_facets() {
        let corolla = Tree::Node((1..=4).map(Tree::Leaf).collect());
        let bd = tree_boundary(&corolla);
        let words: BTreeSet<String> = bd.iter().map(Tree::word).collect();
        let expect: BTreeSet<String> = ["(12)34", "1(23)4", "12(34)", "(123)4", "1(234)"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(words, expect);
        for t in bd.iter() {
            assert_eq!(t.dim(), corolla.dim() - 1);
        }
    }

    #[test]
    fn boundary_squares_to_zero() {
        for leaves in 2..=6u8 {
            let corolla = Tree::Node((1..=leaves).map(Tree::Leaf).collect());
            let mut second = Chain2::new();
            for t in tree_boundary(&corolla).iter() {
                second.add_assign(&tree_boundary(t));
            }
            assert!(second.is_zero(), "leaves = {leaves}");
        }
        let deep = Tree::Node(vec![
            Tree::Node(vec![Tree::Leaf(1), Tree::Leaf(2), Tree::Leaf(3)]),
            Tree::Leaf(4),
            Tree::Leaf(5),
        ]);
        let mut second = Chain2::new();
        for t in tree_boundary(&deep).iter() {
            second.add_assign(&tree_boundary(t));
        }
        assert!(second.is_zero());
    }

    #[test]
    fn word_and_json_forms() {
        let t = Tree::Node(vec![
            Tree::Node(vec![Tree::Leaf(1), Tree::Leaf(2)]),
            Tree::Leaf(3),
            Tree::Leaf(4),
        ]);
        assert_eq!(t.word(), "(12)34");
        assert_eq!(t.to_json().to_string(), "[[1,2],3,4]");
        assert_eq!(t.dim(), 1);
    }
}
