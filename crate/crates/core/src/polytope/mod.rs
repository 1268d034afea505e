//! Combinatorics of permutahedron and associahedron faces, all with Z_2
//! coefficients: ordered partitions and their cellular boundary, step and
//! derived matrices, complementary pairs, the induced diagonals, and the
//! level-forgetting projection onto planar trees.

pub mod diagonal;
pub mod partition;
pub mod step_matrix;
pub mod tree;

pub use diagonal::{
    chain_map_defect, diagonal_k, diagonal_p, diagonal_top, project_diagonal,
    projected_diagonal_of_tree, tree_chain_map_defect, FacePair, TreePair,
};
pub use partition::{enumerate_faces, OrderedPartition};
pub use step_matrix::{
    brute_force_step_matrices, complementary_pair, derived_matrices, down_shift, from_permutation,
    is_step_matrix, right_shift, step_matrices, to_permutation, IntMatrix,
};
pub use tree::{tonks_projection, tree_boundary, Tree};

use std::collections::BTreeSet;

/// A Z_2 chain: a set of cells, added by symmetric difference.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Chain2<T: Ord> {
    terms: BTreeSet<T>,
}

impl<T: Ord + Clone> Chain2<T> {
    pub fn new() -> Chain2<T> {
        Chain2 { terms: BTreeSet::new() }
    }

    pub fn toggle(&mut self, t: T) {
        if !self.terms.remove(&t) {
            self.terms.insert(t);
        }
    }

    pub fn add_assign(&mut self, other: &Chain2<T>) {
        for t in &other.terms {
            self.toggle(t.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, t: &T) -> bool {
        self.terms.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.terms.iter()
    }
}

impl<T: Ord + Clone> FromIterator<T> for Chain2<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Chain2<T> {
        let mut c = Chain2::new();
        for t in iter {
            c.toggle(t);
        }
        c
    }
}
