//! Faces of the permutahedron on {1..n} as ordered partitions, with the
//! cellular boundary that splits one block into an ordered pair.

use serde_json::Value;

use super::Chain2;
use crate::error::{Error, Result};

/// An ordered sequence of disjoint nonempty blocks covering {1..n}.
/// Blocks are stored with their elements ascending; the block order is the
/// face datum. Dimension is n minus the number of blocks.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OrderedPartition {
    n: u8,
    blocks: Vec<Vec<u8>>,
}

impl OrderedPartition {
    pub fn new(n: u8, mut blocks: Vec<Vec<u8>>) -> Result<OrderedPartition> {
        let mut seen = vec![false; n as usize + 1];
        let mut count = 0usize;
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
            for &e in b.iter() {
                if e < 1 || e > n {
                    return Err(Error::InvalidPartition(format!("element {e} outside 1..{n}")));
                }
                if seen[e as usize] {
                    return Err(Error::InvalidPartition(format!("element {e} repeated")));
                }
                seen[e as usize] = true;
                count += 1;
            }
        }
        if count != n as usize {
            return Err(Error::InvalidPartition(format!("covers {count} of {n} elements")));
        }
        Ok(OrderedPartition { n, blocks })
    }

    /// The top cell, a single block {1..n}.
    pub fn top(n: u8) -> OrderedPartition {
        OrderedPartition { n, blocks: vec![(1..=n).collect()] }
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    pub fn dim(&self) -> i64 {
        self.n as i64 - self.blocks.len() as i64
    }

    /// Parses the compact form "13|2" (single-digit labels, fine for n <= 9).
    pub fn parse(n: u8, text: &str) -> Result<OrderedPartition> {
        let mut blocks = Vec::new();
        for part in text.split('|') {
            let mut block = Vec::new();
            for ch in part.chars() {
                let d = ch
                    .to_digit(10)
                    .ok_or_else(|| Error::InvalidPartition(format!("bad character {ch:?}")))?;
                block.push(d as u8);
            }
            blocks.push(block);
        }
        OrderedPartition::new(n, blocks)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.blocks
                .iter()
                .map(|b| Value::Array(b.iter().map(|&e| Value::from(e)).collect()))
                .collect(),
        )
    }

    /// All single-block refinements A -> B|C over Z_2.
    pub fn boundary(&self) -> Chain2<OrderedPartition> {
        let mut out = Chain2::new();
        for (i, block) in self.blocks.iter().enumerate() {
            let k = block.len();
            if k < 2 {
                continue;
            }
            for mask in 1..((1u16 << k) - 1) {
                let mut left = Vec::new();
                let mut right = Vec::new();
                for (bit, &e) in block.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        left.push(e);
                    } else {
                        right.push(e);
                    }
                }
                let mut blocks = Vec::with_capacity(self.blocks.len() + 1);
                blocks.extend_from_slice(&self.blocks[..i]);
                blocks.push(left);
                blocks.push(right);
                blocks.extend_from_slice(&self.blocks[i + 1..]);
                out.toggle(OrderedPartition { n: self.n, blocks });
            }
        }
        out
    }
}

impl std::fmt::Display for OrderedPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|e| e.to_string()).collect::<String>())
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// Every ordered partition of {1..n}, canonically sorted. Supported for
/// 1 <= n <= 7 (the face count grows like the ordered Bell numbers).
pub fn enumerate_faces(n: u8) -> Result<Vec<OrderedPartition>> {
    if !(1..=7).contains(&n) {
        return Err(Error::OutOfRange(format!("face enumeration needs 1 <= n <= 7, got {n}")));
    }
    let mut acc: Vec<Vec<Vec<u8>>> = vec![vec![vec![1]]];
    for e in 2..=n {
        let mut next = Vec::new();
        for part in &acc {
            for b in 0..part.len() {
                let mut q = part.clone();
                q[b].push(e);
                next.push(q);
            }
            for pos in 0..=part.len() {
                let mut q = part.clone();
                q.insert(pos, vec![e]);
                next.push(q);
            }
        }
        acc = next;
    }
    let mut out: Vec<OrderedPartition> = acc
        .into_iter()
        .map(|blocks| OrderedPartition::new(n, blocks).expect("constructed to be valid"))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_counts_are_ordered_bell() {
        let expect = [1usize, 3, 13, 75, 541, 4683, 47293];
        for n in 1..=7u8 {
            let faces = enumerate_faces(n).unwrap();
            assert_eq!(faces.len(), expect[n as usize - 1], "n = {n}");
        }
        assert!(enumerate_faces(0).is_err());
        assert!(enumerate_faces(8).is_err());
    }

    #[test]
    fn validation_rejects_bad_partitions() {
        assert!(OrderedPartition::new(3, vec![vec![1, 2], vec![2, 3]]).is_err());
        assert!(OrderedPartition::new(3, vec![vec![1, 2]]).is_err());
        assert!(OrderedPartition::new(3, vec![vec![1, 2, 3], vec![]]).is_err());
        assert!(OrderedPartition::new(3, vec![vec![1, 2, 4]]).is_err());
        assert!(OrderedPartition::new(3, vec![vec![1, 3], vec![2]]).is_ok());
    }

    #[test]
    fn parse_display_round_trip() {
        for n in 1..=5u8 {
            for f in enumerate_faces(n).unwrap() {
                let text = f.to_string();
                assert_eq!(OrderedPartition::parse(n, &text).unwrap(), f);
            }
        }
        let p = OrderedPartition::parse(3, "13|2").unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.to_json().to_string(), "[[1,3],[2]]");
    }

    #[test]
    fn boundary_examples() {
        let interval = OrderedPartition::top(2);
        let b = interval.boundary();
        assert_eq!(b.len(), 2);
        assert!(b.contains(&OrderedPartition::parse(2, "1|2").unwrap()));
        assert!(b.contains(&OrderedPartition::parse(2, "2|1").unwrap()));
        assert_eq!(OrderedPartition::top(3).boundary().len(), 6);
        assert!(OrderedPartition::parse(3, "1|2|3").unwrap().boundary().is_zero());
    }

    #[test]
    fn boundary_squares_to_zero() {
        for n in 1..=5u8 {
            for f in enumerate_faces(n).unwrap() {
                let mut dd = Chain2::new();
                for g in f.boundary().iter() {
                    dd.add_assign(&g.boundary());
                }
                assert!(dd.is_zero(), "dd != 0 on {f}");
            }
        }
    }
}
