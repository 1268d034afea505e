//! Diagonal approximations: the permutahedron diagonal assembled from
//! derived step matrices, its extension to arbitrary faces, the chain-map
//! check, and the induced associahedron diagonal.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::partition::OrderedPartition;
use super::step_matrix::{complementary_pair, derived_matrices, step_matrices};
use super::tree::{tonks_projection, tree_boundary, Tree};
use super::Chain2;
use crate::error::Result;

pub type FacePair = (OrderedPartition, OrderedPartition);
pub type TreePair = (Tree, Tree);

/// Diagonal of the top permutahedron cell on {1..n}: the union over all
/// step matrices of the complementary pairs of their derived matrices.
/// Memoized; results are clones of the cached chain.
pub fn diagonal_top(n: u8) -> Result<Chain2<FacePair>> {
    static CACHE: OnceLock<Mutex<HashMap<u8, Chain2<FacePair>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("diagonal cache").get(&n) {
        return Ok(hit.clone());
    }
    let mut chain = Chain2::new();
    let mut produced = 0usize;
    for e in step_matrices(n)? {
        for f in derived_matrices(&e) {
            let (a, b) = complementary_pair(&f);
            assert_eq!(a.dim() + b.dim(), n as i64 - 1, "left/right dimensions complement");
            chain.toggle((a, b));
            produced += 1;
        }
    }
    // Distinct derived matrices always give distinct pairs; equality here
    // also certifies that derived sets of different step matrices never
    // overlap, so nothing cancels over Z_2.
    assert_eq!(chain.len(), produced, "no repeated terms in the diagonal of {n}");
    cache.lock().expect("diagonal cache").insert(n, chain.clone());
    Ok(chain)
}

/// Diagonal of an arbitrary face A_1|...|A_k: the face is a product of
/// smaller permutahedra, one per block, so its diagonal is the product of
/// top diagonals transported along the order isomorphism {1..|A_t|} -> A_t
/// and concatenated blockwise.
pub fn diagonal_p(face: &OrderedPartition) -> Result<Chain2<FacePair>> {
    let n = face.n();
    // (left blocks, right blocks) accumulated across the cartesian product.
    let mut partial: Vec<(Vec<Vec<u8>>, Vec<Vec<u8>>)> = vec![(Vec::new(), Vec::new())];
    for block in face.blocks() {
        let top = diagonal_top(block.len() as u8)?;
        let relabel = |part: &OrderedPartition| -> Vec<Vec<u8>> {
            part.blocks()
                .iter()
                .map(|b| b.iter().map(|&s| block[s as usize - 1]).collect())
                .collect()
        };
        let mut extended = Vec::with_capacity(partial.len() * top.len());
        for (a, b) in top.iter() {
            let (a_blocks, b_blocks) = (relabel(a), relabel(b));
            for (left, right) in &partial {
                let mut left = left.clone();
                let mut right = right.clone();
                left.extend(a_blocks.iter().cloned());
                right.extend(b_blocks.iter().cloned());
                extended.push((left, right));
            }
        }
        partial = extended;
    }
    let mut out = Chain2::new();
    for (left, right) in partial {
        out.toggle((
            OrderedPartition::new(n, left).expect("blockwise relabeling stays a partition"),
            OrderedPartition::new(n, right).expect("blockwise relabeling stays a partition"),
        ));
    }
    Ok(out)
}

/// The chain-map residual (boundary of the diagonal plus diagonal of the
/// boundary); zero over Z_2 exactly when the diagonal commutes with the
/// cellular boundary on this face.
pub fn chain_map_defect(face: &OrderedPartition) -> Result<Chain2<FacePair>> {
    let mut defect = Chain2::new();
    for (a, b) in diagonal_p(face)?.iter() {
        for da in a.boundary().iter() {
            defect.toggle((da.clone(), b.clone()));
        }
        for db in b.boundary().iter() {
            defect.toggle((a.clone(), db.clone()));
        }
    }
    for f in face.boundary().iter() {
        defect.add_assign(&diagonal_p(f)?);
    }
    Ok(defect)
}

/// Pushes the diagonal of a face through the tree projection on both
/// tensor factors, dropping terms where either factor collapses.
pub fn project_diagonal(face: &OrderedPartition) -> Result<Chain2<TreePair>> {
    let mut out = Chain2::new();
    for (a, b) in diagonal_p(face)?.iter() {
        if let (Some(ta), Some(tb)) = (tonks_projection(a), tonks_projection(b)) {
            out.toggle((ta, tb));
        }
    }
    Ok(out)
}

/// Diagonal of the top associahedron cell on n + 1 leaves, induced from
/// the permutahedron diagonal through the tree projection.
pub fn diagonal_k(n: u8) -> Result<Chain2<TreePair>> {
    project_diagonal(&OrderedPartition::top(n))
}

/// The projected diagonal of a tree, computed from any face in its fiber.
/// Well-definedness across the fiber is a separate test.
pub fn projected_diagonal_of_tree(t: &Tree, n: u8) -> Result<Chain2<TreePair>> {
    let face = super::partition::enumerate_faces(n)?
        .into_iter()
        .find(|f| tonks_projection(f).as_ref() == Some(t))
        .expect("tree lies in the projection image");
    project_diagonal(&face)
}

/// Tree-side chain-map residual for the projected diagonal, used by tests
/// and the certification path.
pub fn tree_chain_map_defect(t: &Tree, n: u8) -> Result<Chain2<TreePair>> {
    let mut defect = Chain2::new();
    for (a, b) in projected_diagonal_of_tree(t, n)?.iter() {
        for da in tree_boundary(a).iter() {
            defect.toggle((da.clone(), b.clone()));
        }
        for db in tree_boundary(b).iter() {
            defect.toggle((a.clone(), db.clone()));
        }
    }
    for sub in tree_boundary(t).iter() {
        defect.add_assign(&projected_diagonal_of_tree(sub, n)?);
    }
    Ok(defect)
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};

    use super::super::partition::enumerate_faces;
    use super::*;

    fn face(n: u8, text: &str) -> OrderedPartition {
        OrderedPartition::parse(n, text).unwrap()
    }

    fn pair_strings(chain: &Chain2<FacePair>) -> BTreeSet<(String, String)> {
        chain.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    fn expect_pairs(list: &[(&str, &str)]) -> BTreeSet<(String, String)> {
        list.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn top_diagonal_smallest_cases() {
        assert_eq!(pair_strings(&diagonal_top(1).unwrap()), expect_pairs(&[("1", "1")]));
        assert_eq!(
            pair_strings(&diagonal_top(2).unwrap()),
            expect_pairs(&[("1|2", "12"), ("12", "2|1")])
        );
    }

    #[test]
    fn top_diagonal_three_has_eight_terms() {
        let got = pair_strings(&diagonal_top(3).unwrap());
        let expect = expect_pairs(&[
            ("1|2|3", "123"),
            ("12|3", "2|13"),
            ("12|3", "23|1"),
            ("13|2", "3|12"),
            ("1|23", "3|12"),
            ("1|23", "13|2"),
            ("2|13", "23|1"),
            ("123", "3|2|1"),
        ]);
        assert_eq!(got, expect);
    }

    #[test]
    fn top_diagonal_extreme_terms() {
        for n in 1..=5u8 {
            let chain = diagonal_top(n).unwrap();
            let identity_vertex: Vec<Vec<u8>> = (1..=n).map(|i| vec![i]).collect();
            let reversed_vertex: Vec<Vec<u8>> = (1..=n).rev().map(|i| vec![i]).collect();
            let top = OrderedPartition::top(n);
            assert!(chain.contains(&(
                OrderedPartition::new(n, identity_vertex).unwrap(),
                top.clone()
            )));
            assert!(chain
                .contains(&(top.clone(), OrderedPartition::new(n, reversed_vertex).unwrap())));
        }
    }

    #[test]
    fn face_diagonal_is_blockwise() {
        let d = diagonal_p(&face(3, "13|2")).unwrap();
        assert_eq!(
            pair_strings(&d),
            expect_pairs(&[("1|3|2", "13|2"), ("13|2", "3|1|2")])
        );
        // A vertex is diagonal on the nose.
        let v = face(3, "2|1|3");
        let dv = diagonal_p(&v).unwrap();
        assert_eq!(dv.len(), 1);
        assert!(dv.contains(&(v.clone(), v.clone())));
        // On the top cell the blockwise construction is the step-matrix one.
        assert_eq!(diagonal_p(&face(3, "123")).unwrap(), diagonal_top(3).unwrap());
    }

    #[test]
    fn diagonal_commutes_with_boundary() {
        for n in 1..=4u8 {
            for f in enumerate_faces(n).unwrap() {
                let defect = chain_map_defect(&f).unwrap();
                assert!(defect.is_zero(), "face {f} has residual of size {}", defect.len());
            }
        }
    }

    #[test]
    fn exactly_two_terms_collapse_for_three() {
        let dying: BTreeSet<(String, String)> = diagonal_top(3)
            .unwrap()
            .iter()
            .filter(|(a, b)| tonks_projection(a).is_none() || tonks_projection(b).is_none())
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(dying, expect_pairs(&[("1|23", "13|2"), ("13|2", "3|12")]));
    }

    #[test]
    fn induced_tree_diagonal_fixture() {
        let got: BTreeSet<(String, String)> = diagonal_k(3)
            .unwrap()
            .iter()
            .map(|(a, b)| (a.word(), b.word()))
            .collect();
        let expect = expect_pairs(&[
            ("((12)3)4", "1234"),
            ("(123)4", "1(23)4"),
            ("(123)4", "1(234)"),
            ("(12)34", "12(34)"),
            ("1(23)4", "1(234)"),
            ("1234", "1(2(34))"),
        ]);
        assert_eq!(got, expect);
        assert_eq!(diagonal_k(2).unwrap().len(), 2);
        assert_eq!(diagonal_k(1).unwrap().len(), 1);
    }

    #[test]
    fn induced_diagonal_is_well_defined_on_fibers() {
        for n in 1..=4u8 {
            let mut fibers: BTreeMap<Tree, Vec<OrderedPartition>> = BTreeMap::new();
            for f in enumerate_faces(n).unwrap() {
                if let Some(t) = tonks_projection(&f) {
                    fibers.entry(t).or_default().push(f);
                }
            }
            for (t, faces) in fibers {
                let images: BTreeSet<Vec<TreePair>> = faces
                    .iter()
                    .map(|f| project_diagonal(f).unwrap().iter().cloned().collect())
                    .collect();
                assert_eq!(images.len(), 1, "fiber of {} disagrees", t.word());
            }
        }
    }

    #[test]
    fn projection_is_a_chain_map() {
        for n in 1..=4u8 {
            for f in enumerate_faces(n).unwrap() {
                let mut lhs = Chain2::new();
                for g in f.boundary().iter() {
                    if let Some(t) = tonks_projection(g) {
                        lhs.toggle(t);
                    }
                }
                let rhs = match tonks_projection(&f) {
                    Some(t) => tree_boundary(&t),
                    None => Chain2::new(),
                };
                assert_eq!(lhs, rhs, "face {f}");
            }
        }
    }

    #[test]
    fn tree_diagonal_chain_map_small() {
        for n in 1..=4u8 {
            let corolla = Tree::Node((1..=n + 1).map(Tree::Leaf).collect());
            let defect = tree_chain_map_defect(&corolla, n).unwrap();
            assert!(defect.is_zero(), "n = {n}, residual {}", defect.len());
        }
    }
}
