//! Finite sets, maps between them, (co)products and the partition lattice.
//!
//! Elements of a [`FinSet`] of size `n` are the integers `0..n`. Partitions
//! are kept in restricted-growth form, so equality and the lexicographic
//! enumeration order are plain `Vec` comparisons.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the ground-set size accepted by [`enumerate_partitions`].
/// `Bell(10) = 115975`.
pub const DEFAULT_PARTITION_BOUND: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinSet {
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FinSet {
    pub fn new(size: usize) -> Self {
        FinSet { size, labels: None }
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Malformed(format!("duplicate label {l:?}")));
            }
        }
        Ok(FinSet {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(ls) => ls[i].clone(),
            None => i.to_string(),
        }
    }
}

/// A function between finite sets given by its table of codomain indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinMap {
    pub dom: usize,
    pub cod: usize,
    pub table: Vec<usize>,
}

impl FinMap {
    pub fn new(dom: usize, cod: usize, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom {
            return Err(Error::Malformed(format!(
                "map table has length {} but domain has size {dom}",
                table.len()
            )));
        }
        if let Some((i, &v)) = table.iter().enumerate().find(|(_, &v)| v >= cod) {
            return Err(Error::Malformed(format!(
                "map sends {i} to {v}, outside codomain of size {cod}"
            )));
        }
        Ok(FinMap { dom, cod, table })
    }

    pub fn identity(n: usize) -> Self {
        FinMap {
            dom: n,
            cod: n,
            table: (0..n).collect(),
        }
    }

    pub fn constant(dom: usize, cod: usize, value: usize) -> Self {
        assert!(value < cod || dom == 0);
        FinMap {
            dom,
            cod,
            table: vec![value; dom],
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &FinMap) -> FinMap {
        assert_eq!(first.cod, self.dom, "composing maps with mismatched ends");
        FinMap {
            dom: first.dom,
            cod: self.cod,
            table: first.table.iter().map(|&x| self.table[x]).collect(),
        }
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.cod];
        for &v in &self.table {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.cod];
        for &v in &self.table {
            if hit[v] {
                return false;
            }
            hit[v] = true;
        }
        true
    }

    pub fn is_bijective(&self) -> bool {
        self.dom == self.cod && self.is_injective()
    }

    /// Partition of the domain into the nonempty fibres of the map.
    pub fn kernel(&self) -> Partition {
        Partition::from_labels(&self.table)
    }

    /// Preimage of a subset, as a sorted list of domain elements.
    pub fn preimage(&self, subset: &[bool]) -> Vec<usize> {
        (0..self.dom).filter(|&x| subset[self.table[x]]).collect()
    }
}

/// Iterate over every map `dom -> cod` in lexicographic order of tables.
pub fn all_maps(dom: usize, cod: usize) -> impl Iterator<Item = FinMap> {
    let total = if dom == 0 {
        Some(1usize)
    } else if cod == 0 {
        Some(0)
    } else {
        cod.checked_pow(dom as u32)
    };
    let total = total.expect("map space too large to enumerate");
    (0..total).map(move |mut code| {
        let mut table = vec![0; dom];
        for slot in table.iter_mut().rev() {
            *slot = code % cod;
            code /= cod;
        }
        FinMap { dom, cod, table }
    })
}

/// Product with projections; tuples are encoded in mixed radix with the first
/// factor most significant. The empty product is the one-element set.
pub fn product_with_projections(factors: &[FinSet]) -> (FinSet, Vec<FinMap>) {
    let size: usize = factors.iter().map(|f| f.size).product();
    let mut projections = Vec::with_capacity(factors.len());
    let mut stride = size;
    for f in factors {
        if f.size == 0 {
            stride = 0;
        } else {
            stride /= f.size;
        }
        let table = (0..size)
            .map(|code| if stride == 0 { 0 } else { (code / stride) % f.size })
            .collect();
        projections.push(FinMap {
            dom: size,
            cod: f.size,
            table,
        });
    }
    (FinSet::new(size), projections)
}

/// Encode a tuple as an element of the product built by [`product_with_projections`].
pub fn product_pairing(factors: &[FinSet], coords: &[usize]) -> usize {
    assert_eq!(factors.len(), coords.len());
    factors
        .iter()
        .zip(coords)
        .fold(0, |acc, (f, &c)| acc * f.size + c)
}

/// Coproduct with inclusions; summand `k` occupies a contiguous block.
pub fn coproduct_with_inclusions(summands: &[FinSet]) -> (FinSet, Vec<FinMap>) {
    let size: usize = summands.iter().map(|s| s.size).sum();
    let mut offset = 0;
    let inclusions = summands
        .iter()
        .map(|s| {
            let m = FinMap {
                dom: s.size,
                cod: size,
                table: (offset..offset + s.size).collect(),
            };
            offset += s.size;
            m
        })
        .collect();
    (FinSet::new(size), inclusions)
}

/// Order relation between two partitions under refinement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    Le,
    Ge,
    Eq,
    Incomparable,
}

impl Order {
    pub fn is_le(self) -> bool {
        matches!(self, Order::Le | Order::Eq)
    }
}

/// A set partition in restricted-growth form: `block_of[i]` is the block of
/// element `i`, and blocks are numbered in order of first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: usize,
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::from_rgs(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.block_of
    }
}

impl Partition {
    /// Canonicalise an arbitrary labelling into restricted-growth form.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Partition {
        let mut seen: HashMap<T, usize> = HashMap::new();
        let block_of = labels
            .iter()
            .map(|l| {
                let next = seen.len();
                *seen.entry(l.clone()).or_insert(next)
            })
            .collect();
        Partition {
            block_of,
            blocks: seen.len(),
        }
    }

    /// Accept a list only if it already is a restricted-growth string.
    pub fn from_rgs(block_of: Vec<usize>) -> Result<Partition> {
        let mut next = 0;
        for (i, &b) in block_of.iter().enumerate() {
            if b > next {
                return Err(Error::Malformed(format!(
                    "position {i} uses block {b} before block {next}"
                )));
            }
            if b == next {
                next += 1;
            }
        }
        Ok(Partition {
            block_of,
            blocks: next,
        })
    }

    pub fn discrete(n: usize) -> Partition {
        Partition {
            block_of: (0..n).collect(),
            blocks: n,
        }
    }

    pub fn trivial(n: usize) -> Partition {
        Partition {
            block_of: vec![0; n],
            blocks: usize::from(n > 0),
        }
    }

    pub fn ground(&self) -> usize {
        self.block_of.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.block_of
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (x, &b) in self.block_of.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    /// The projection from the ground set onto the set of blocks.
    pub fn projection(&self) -> FinMap {
        FinMap {
            dom: self.ground(),
            cod: self.blocks,
            table: self.block_of.clone(),
        }
    }

    /// Pull the partition back along `map: X -> ground`.
    pub fn pullback(&self, map: &FinMap) -> Partition {
        assert_eq!(map.cod, self.ground());
        let labels: Vec<usize> = map.table.iter().map(|&y| self.block_of[y]).collect();
        Partition::from_labels(&labels)
    }

    pub fn same_block(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }
}

/// All partitions of `ground` in lexicographic order of their
/// restricted-growth strings.
pub fn enumerate_partitions(ground: &FinSet, bound: usize) -> Result<Vec<Partition>> {
    let n = ground.size;
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "partition enumeration",
            size: n,
            bound,
        });
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn go(n: usize, current: &mut Vec<usize>, max_block: usize, out: &mut Vec<Partition>) {
        if current.len() == n {
            out.push(Partition {
                block_of: current.clone(),
                blocks: if n == 0 { 0 } else { max_block },
            });
            return;
        }
        for b in 0..=max_block {
            current.push(b);
            go(n, current, max_block.max(b + 1), out);
            current.pop();
        }
    }
    go(n, &mut current, 0, &mut out);
    Ok(out)
}

fn check_ground(p: &Partition, q: &Partition) -> Result<()> {
    if p.ground() != q.ground() {
        return Err(Error::GroundMismatch {
            left: p.ground(),
            right: q.ground(),
        });
    }
    Ok(())
}

/// Common refinement: `x ~ y` iff related in both inputs.
pub fn partition_meet(p: &Partition, q: &Partition) -> Result<Partition> {
    check_ground(p, q)?;
    let pairs: Vec<(usize, usize)> = p
        .block_of
        .iter()
        .zip(&q.block_of)
        .map(|(&a, &b)| (a, b))
        .collect();
    Ok(Partition::from_labels(&pairs))
}

fn refines(p: &Partition, q: &Partition) -> bool {
    // p ≤ q iff each p-block maps into a single q-block.
    let mut target = vec![usize::MAX; p.blocks];
    for (x, &b) in p.block_of.iter().enumerate() {
        let qb = q.block_of[x];
        if target[b] == usize::MAX {
            target[b] = qb;
        } else if target[b] != qb {
            return false;
        }
    }
    true
}

pub fn partition_compare(p: &Partition, q: &Partition) -> Result<Order> {
    check_ground(p, q)?;
    Ok(match (refines(p, q), refines(q, p)) {
        (true, true) => Order::Eq,
        (true, false) => Order::Le,
        (false, true) => Order::Ge,
        (false, false) => Order::Incomparable,
    })
}

/// The map on blocks `X_p -> X_q` induced by `p ≤ q`.
pub fn induced_quotient_map(p: &Partition, q: &Partition) -> Result<FinMap> {
    if !partition_compare(p, q)?.is_le() {
        return Err(Error::NotComparable);
    }
    let mut table = vec![0; p.blocks];
    for (x, &b) in p.block_of.iter().enumerate() {
        table[b] = q.block_of[x];
    }
    Ok(FinMap {
        dom: p.blocks,
        cod: q.blocks,
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[usize]) -> Partition {
        Partition::from_rgs(v.to_vec()).unwrap()
    }

    #[test]
    fn empty_and_binary_products() {
        let (p, proj) = product_with_projections(&[]);
        assert_eq!(p.size, 1);
        assert!(proj.is_empty());
        let (p, proj) = product_with_projections(&[FinSet::new(2), FinSet::new(3)]);
        assert_eq!(p.size, 6);
        assert_eq!(proj[0].table, vec![0, 0, 0, 1, 1, 1]);
        assert_eq!(proj[1].table, vec![0, 1, 2, 0, 1, 2]);
    }

    #[test]
    fn coproducts() {
        let (c, inc) = coproduct_with_inclusions(&[]);
        assert_eq!(c.size, 0);
        assert!(inc.is_empty());
        let (c, inc) = coproduct_with_inclusions(&[FinSet::new(1), FinSet::new(1)]);
        assert_eq!(c.size, 2);
        assert_eq!(inc[1].table, vec![1]);
    }

    #[test]
    fn small_partition_counts() {
        assert_eq!(enumerate_partitions(&FinSet::new(0), 10).unwrap().len(), 1);
        assert_eq!(enumerate_partitions(&FinSet::new(3), 10).unwrap().len(), 5);
        assert_eq!(enumerate_partitions(&FinSet::new(6), 10).unwrap().len(), 203);
        assert!(matches!(
            enumerate_partitions(&FinSet::new(11), 10),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let ps = enumerate_partitions(&FinSet::new(4), 10).unwrap();
        for w in ps.windows(2) {
            assert!(w[0].as_slice() < w[1].as_slice());
        }
    }

    #[test]
    fn meet_examples() {
        let p = part(&[0, 0, 1]);
        let q = part(&[0, 1, 1]);
        assert_eq!(partition_meet(&p, &q).unwrap(), Partition::discrete(3));
        assert_eq!(
            partition_meet(&p, &Partition::discrete(3)).unwrap(),
            Partition::discrete(3)
        );
        assert_eq!(partition_meet(&p, &p).unwrap(), p);
        assert!(matches!(
            partition_meet(&p, &Partition::discrete(4)),
            Err(Error::GroundMismatch { .. })
        ));
    }

    #[test]
    fn compare_examples() {
        let p = part(&[0, 0, 1, 1]);
        let q = part(&[0, 1, 0, 1]);
        assert_eq!(partition_compare(&p, &p).unwrap(), Order::Eq);
        assert_eq!(
            partition_compare(&Partition::discrete(4), &p).unwrap(),
            Order::Le
        );
        assert_eq!(partition_compare(&p, &q).unwrap(), Order::Incomparable);
    }

    #[test]
    fn induced_map_examples() {
        let q = part(&[0, 0, 1]);
        assert_eq!(
            induced_quotient_map(&Partition::discrete(3), &q).unwrap().table,
            vec![0, 0, 1]
        );
        assert_eq!(induced_quotient_map(&q, &q).unwrap(), FinMap::identity(2));
        assert_eq!(
            induced_quotient_map(&q, &Partition::discrete(3)),
            Err(Error::NotComparable)
        );
    }

    #[test]
    fn rgs_validation() {
        assert!(Partition::from_rgs(vec![1, 0]).is_err());
        assert!(Partition::from_rgs(vec![0, 2]).is_err());
        let json = serde_json::to_string(&part(&[0, 1, 0])).unwrap();
        assert_eq!(json, "[0,1,0]");
        let back: Partition = serde_json::from_str(&json).unwrap();
        assert_eq!(back, part(&[0, 1, 0]));
        assert!(serde_json::from_str::<Partition>("[1]").is_err());
    }

    #[test]
    fn labels_must_be_distinct() {
        assert!(FinSet::with_labels(vec!["a".into(), "a".into()]).is_err());
        assert_eq!(
            FinSet::with_labels(vec!["a".into(), "b".into()]).unwrap().label(1),
            "b"
        );
    }
}
