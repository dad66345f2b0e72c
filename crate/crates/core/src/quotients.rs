//! Discrete quotients of a tower.
//!
//! With surjective transitions a discrete quotient is a partition of some
//! level, and the quotients representable at depth `D` are exactly the
//! partitions of the top level. Each is stored at the least level it
//! descends to, so structural equality is equality of quotients.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::{
    enumerate_partitions, induced_quotient_map, partition_compare, partition_meet, FinMap, FinSet,
    Order, Partition,
};
use crate::locconst::LocConstMap;
use crate::smallcat::{FinCat, SetDiagram};
use crate::tower::Tower;

/// Cap on `|S_D|` for [`dq_enumerate`]; the count is the Bell number.
pub const DEFAULT_DQ_BOUND: usize = 8;

#[derive(Debug, Clone)]
pub struct DiscreteQuotient {
    tower: Arc<Tower>,
    level: usize,
    partition: Partition,
}

impl PartialEq for DiscreteQuotient {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level && self.partition == other.partition && *self.tower == *other.tower
    }
}

impl Eq for DiscreteQuotient {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscreteQuotientJson {
    pub level: usize,
    pub partition: Vec<usize>,
}

impl DiscreteQuotient {
    /// The quotient given by `partition` of level `level`, canonicalised.
    pub fn new(tower: Arc<Tower>, level: usize, partition: Partition) -> Result<Self> {
        Ok(dq_canonicalize(&Self::declared(tower, level, partition)?))
    }

    /// As declared, without descending to the least level.
    pub fn declared(tower: Arc<Tower>, level: usize, partition: Partition) -> Result<Self> {
        if level > tower.depth() {
            return Err(Error::Malformed(format!(
                "level {level} exceeds tower depth {}",
                tower.depth()
            )));
        }
        if partition.ground() != tower.level_size(level) {
            return Err(Error::GroundMismatch {
                left: partition.ground(),
                right: tower.level_size(level),
            });
        }
        Ok(DiscreteQuotient {
            tower,
            level,
            partition,
        })
    }

    pub fn trivial(tower: Arc<Tower>) -> Self {
        let n = tower.level_size(0);
        Self::new(tower, 0, Partition::trivial(n)).expect("level 0 exists")
    }

    /// The discrete partition of the top level, i.e. the threads themselves.
    pub fn finest(tower: Arc<Tower>) -> Self {
        let d = tower.depth();
        let n = tower.top_size();
        Self::new(tower, d, Partition::discrete(n)).expect("top level exists")
    }

    pub fn from_json(tower: Arc<Tower>, j: &DiscreteQuotientJson) -> Result<Self> {
        let p = Partition::from_rgs(j.partition.clone())?;
        Self::new(tower, j.level, p)
    }

    pub fn to_json(&self) -> DiscreteQuotientJson {
        DiscreteQuotientJson {
            level: self.level,
            partition: self.partition.as_slice().to_vec(),
        }
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn num_blocks(&self) -> usize {
        self.partition.num_blocks()
    }

    /// Block containing the thread with top coordinate `x`.
    pub fn block_of_thread(&self, x: usize) -> usize {
        self.partition.block_of(self.tower.coord(x, self.level))
    }

    /// The quotient map restricted to threads, `S_D -> blocks`.
    pub fn projection_on_threads(&self) -> FinMap {
        FinMap {
            dom: self.tower.top_size(),
            cod: self.num_blocks(),
            table: (0..self.tower.top_size())
                .map(|x| self.block_of_thread(x))
                .collect(),
        }
    }

    /// The same quotient written as a partition of level `m >= level`.
    pub fn lift_to(&self, m: usize) -> Partition {
        assert!(m >= self.level && m <= self.tower.depth());
        self.partition
            .pullback(&self.tower.transition_between(m, self.level))
    }

    /// As a partition of the threads.
    pub fn on_threads(&self) -> Partition {
        self.lift_to(self.tower.depth())
    }

    pub fn is_finest(&self) -> bool {
        self.on_threads().num_blocks() == self.tower.top_size()
    }
}

/// Descend as far as possible: a partition of `S_n` comes from `S_{n-1}`
/// exactly when every fibre of `t_{n-1}` sits inside one block.
pub fn dq_canonicalize(q: &DiscreteQuotient) -> DiscreteQuotient {
    let t = &q.tower;
    let mut level = q.level;
    let mut p = q.partition.clone();
    while level > 0 {
        let tr = t.transition(level - 1);
        let mut label = vec![usize::MAX; tr.cod];
        let mut ok = true;
        for (x, &y) in tr.table.iter().enumerate() {
            let b = p.block_of(x);
            if label[y] == usize::MAX {
                label[y] = b;
            } else if label[y] != b {
                ok = false;
                break;
            }
        }
        if !ok || label.contains(&usize::MAX) {
            break;
        }
        p = Partition::from_labels(&label);
        level -= 1;
    }
    DiscreteQuotient {
        tower: q.tower.clone(),
        level,
        partition: p,
    }
}

fn same_tower(a: &DiscreteQuotient, b: &DiscreteQuotient) -> Result<()> {
    if Arc::ptr_eq(&a.tower, &b.tower) || *a.tower == *b.tower {
        Ok(())
    } else {
        Err(Error::TowerMismatch)
    }
}

/// Refinement order: `Le` means `a` is finer than `b`.
pub fn dq_compare(a: &DiscreteQuotient, b: &DiscreteQuotient) -> Result<Order> {
    same_tower(a, b)?;
    let m = a.level.max(b.level);
    partition_compare(&a.lift_to(m), &b.lift_to(m))
}

pub fn dq_inf(a: &DiscreteQuotient, b: &DiscreteQuotient) -> Result<DiscreteQuotient> {
    same_tower(a, b)?;
    let m = a.level.max(b.level);
    let meet = partition_meet(&a.lift_to(m), &b.lift_to(m))?;
    DiscreteQuotient::new(a.tower.clone(), m, meet)
}

/// The map of block sets induced by `a ≤ b`.
pub fn dq_induced_map(a: &DiscreteQuotient, b: &DiscreteQuotient) -> Result<FinMap> {
    same_tower(a, b)?;
    let m = a.level.max(b.level);
    induced_quotient_map(&a.lift_to(m), &b.lift_to(m))
}

/// The quotient map as a locally constant map onto the block set.
pub fn dq_projection(q: &DiscreteQuotient) -> LocConstMap {
    LocConstMap::new(
        (*q.tower).clone(),
        FinSet::new(q.num_blocks()),
        q.level,
        q.partition.as_slice().to_vec(),
    )
    .expect("block labels are in range")
}

/// All discrete quotients representable at the tower's depth, ordered by
/// level and then by restricted-growth string.
pub fn dq_enumerate(t: &Arc<Tower>, bound: usize) -> Result<Vec<DiscreteQuotient>> {
    let n = t.top_size();
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "discrete quotients",
            size: n,
            bound,
        });
    }
    let mut out: Vec<DiscreteQuotient> = enumerate_partitions(&FinSet::new(n), bound)?
        .into_iter()
        .map(|p| DiscreteQuotient::new(t.clone(), t.depth(), p).expect("top-level partition"))
        .collect();
    out.sort_by(|a, b| {
        (a.level, a.partition.as_slice()).cmp(&(b.level, b.partition.as_slice()))
    });
    Ok(out)
}

/// The diagram of block sets over the quotient poset (arrows go from finer
/// to coarser), with the cone of projections from the threads.
#[derive(Debug, Clone)]
pub struct DqDiagram {
    pub quotients: Vec<DiscreteQuotient>,
    pub diagram: SetDiagram,
    pub cone: Vec<FinMap>,
}

pub fn dq_diagram(t: &Arc<Tower>, bound: usize) -> Result<DqDiagram> {
    let quotients = dq_enumerate(t, bound)?;
    let on_threads: Vec<Partition> = quotients.iter().map(|q| q.on_threads()).collect();
    let leq: Vec<Vec<bool>> = on_threads
        .iter()
        .map(|a| {
            on_threads
                .iter()
                .map(|b| partition_compare(a, b).map(Order::is_le).unwrap_or(false))
                .collect()
        })
        .collect();
    let index = Arc::new(FinCat::from_preorder(&leq)?);
    let value_sets = quotients.iter().map(DiscreteQuotient::num_blocks).collect();
    let value_maps = index
        .arrows()
        .iter()
        .map(|&(i, j)| induced_quotient_map(&on_threads[i], &on_threads[j]))
        .collect::<Result<Vec<_>>>()?;
    let diagram = SetDiagram::new(index, value_sets, value_maps)?;
    let cone = quotients.iter().map(|q| q.projection_on_threads()).collect();
    Ok(DqDiagram {
        quotients,
        diagram,
        cone,
    })
}

impl DqDiagram {
    /// Every triangle `induced ∘ leg_i = leg_j` for `i ≤ j`.
    pub fn cone_commutes(&self) -> bool {
        self.diagram
            .index
            .arrows()
            .iter()
            .zip(&self.diagram.value_maps)
            .all(|(&(i, j), m)| m.after(&self.cone[i]) == self.cone[j])
    }

    pub fn position(&self, q: &DiscreteQuotient) -> Option<usize> {
        self.quotients.iter().position(|p| p == q)
    }
}

/// A family of maps from a finite set into every quotient, indexed like
/// [`dq_enumerate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCone {
    pub apex: usize,
    pub legs: Vec<FinMap>,
}

/// Checks that each test cone is compatible and factors uniquely through the
/// threads. Incompatible cones are an error; a compatible cone that fails to
/// factor yields `Ok(false)`.
pub fn verify_limit_cone(dq: &DqDiagram, cones: &[TestCone]) -> Result<bool> {
    let d = &dq.diagram;
    let finest = dq
        .quotients
        .iter()
        .position(DiscreteQuotient::is_finest)
        .ok_or_else(|| Error::IncompatibleCone("no finest quotient".into()))?;
    let threads = dq.quotients[finest].tower().top_size();
    for (c, cone) in cones.iter().enumerate() {
        if cone.legs.len() != dq.quotients.len() {
            return Err(Error::IncompatibleCone(format!("cone {c} has the wrong number of legs")));
        }
        for (o, leg) in cone.legs.iter().enumerate() {
            if leg.dom != cone.apex || leg.cod != d.value_sets[o] {
                return Err(Error::IncompatibleCone(format!("cone {c}, leg {o} has the wrong type")));
            }
        }
        for (k, &(i, j)) in d.index.arrows().iter().enumerate() {
            if d.value_maps[k].after(&cone.legs[i]) != cone.legs[j] {
                return Err(Error::IncompatibleCone(format!(
                    "cone {c}: legs {i} and {j} disagree"
                )));
            }
        }
        // the finest leg's projection is a bijection onto its blocks
        let proj = &dq.cone[finest];
        let mut back = vec![usize::MAX; proj.cod];
        for x in 0..threads {
            back[proj.apply(x)] = x;
        }
        let u = FinMap {
            dom: cone.apex,
            cod: threads,
            table: cone.legs[finest].table.iter().map(|&b| back[b]).collect(),
        };
        let factors = dq.cone.iter().zip(&cone.legs).all(|(p, l)| p.after(&u) == *l);
        if !factors || !proj.is_bijective() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{standard_tower, StandardTower};

    fn cantor(d: usize) -> Arc<Tower> {
        Arc::new(standard_tower(StandardTower::Cantor, d))
    }

    #[test]
    fn pulled_back_partition_descends() {
        let t = cantor(2);
        let p = Partition::discrete(2).pullback(&t.transition_between(2, 1));
        let q = DiscreteQuotient::new(t.clone(), 2, p).unwrap();
        assert_eq!(q.level(), 1);
        assert_eq!(q.partition(), &Partition::discrete(2));
        assert_eq!(dq_canonicalize(&q), q);
    }

    #[test]
    fn finest_stays_on_top() {
        let t = cantor(3);
        let q = DiscreteQuotient::finest(t);
        assert_eq!(q.level(), 3);
        assert!(q.is_finest());
    }

    #[test]
    fn point_tower_has_one_quotient() {
        let t = Arc::new(standard_tower(StandardTower::Point, 3));
        let qs = dq_enumerate(&t, DEFAULT_DQ_BOUND).unwrap();
        assert_eq!(qs.len(), 1);
        assert_eq!(qs[0].level(), 0);
        assert_eq!(qs[0].num_blocks(), 1);
    }

    #[test]
    fn counts() {
        assert_eq!(dq_enumerate(&cantor(2), 8).unwrap().len(), 15);
        let ec = Arc::new(standard_tower(StandardTower::EventuallyConstant(3), 2));
        assert_eq!(dq_enumerate(&ec, 8).unwrap().len(), 5);
        assert!(matches!(
            dq_enumerate(&cantor(4), 8),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn inf_laws() {
        let t = cantor(2);
        let qs = dq_enumerate(&t, 8).unwrap();
        let finest = DiscreteQuotient::finest(t.clone());
        for a in &qs {
            assert_eq!(&dq_inf(a, a).unwrap(), a);
            assert_eq!(dq_inf(a, &finest).unwrap(), finest);
            for b in &qs {
                let m = dq_inf(a, b).unwrap();
                assert!(dq_compare(&m, a).unwrap().is_le());
                assert!(dq_compare(&m, b).unwrap().is_le());
            }
        }
    }

    #[test]
    fn different_towers_do_not_mix() {
        let a = DiscreteQuotient::trivial(cantor(1));
        let b = DiscreteQuotient::trivial(cantor(2));
        assert_eq!(dq_compare(&a, &b), Err(Error::TowerMismatch));
    }

    #[test]
    fn cantor_depth_one_diagram() {
        let dq = dq_diagram(&cantor(1), 8).unwrap();
        assert_eq!(dq.quotients.len(), 2);
        assert_eq!(dq.diagram.index.num_arrows(), 3);
        assert_eq!(dq.cone[0], FinMap::constant(2, 1, 0));
        assert_eq!(dq.cone[1], FinMap::identity(2));
        assert!(dq.cone_commutes());
        let own = TestCone {
            apex: 2,
            legs: dq.cone.clone(),
        };
        assert!(verify_limit_cone(&dq, &[own]).unwrap());
    }

    #[test]
    fn incompatible_cone_is_rejected() {
        let dq = dq_diagram(&cantor(1), 8).unwrap();
        let pointed = TestCone {
            apex: 1,
            legs: vec![FinMap::constant(1, 1, 0), FinMap::constant(1, 2, 0)],
        };
        assert!(verify_limit_cone(&dq, &[pointed]).unwrap());
        let mut legs = dq.cone.clone();
        legs[0] = FinMap::constant(2, 1, 0);
        legs.swap(0, 1);
        let wrong = TestCone { apex: 2, legs };
        assert!(matches!(
            verify_limit_cone(&dq, &[wrong]),
            Err(Error::IncompatibleCone(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let t = cantor(2);
        let q = DiscreteQuotient::new(t.clone(), 1, Partition::discrete(2)).unwrap();
        let j = q.to_json();
        assert_eq!(serde_json::to_value(&j).unwrap(), serde_json::json!({"level": 1, "partition": [0, 1]}));
        assert_eq!(DiscreteQuotient::from_json(t, &j).unwrap(), q);
    }
}
