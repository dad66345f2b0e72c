//! Locally constant maps out of a tower.
//!
//! A map is stored as a table on one level, always the least level it
//! factors through, so two maps are equal iff their fields are.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::{FinMap, FinSet, Partition};
use crate::presheaf::{check_product_preservation, Section, TowerPresheaf};
use crate::quotients::DiscreteQuotient;
use crate::tower::{clopen_subtower, Tower, TowerMap};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocConstMap {
    src: Tower,
    target: FinSet,
    level: usize,
    table: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocConstMapJson {
    pub level: usize,
    pub table: Vec<usize>,
    pub target: FinSet,
}

/// One fibre of a locally constant map.
#[derive(Debug, Clone)]
pub struct Fibre {
    pub value: usize,
    pub subtower: Tower,
    pub inclusion: TowerMap,
}

impl LocConstMap {
    /// `table` lists the value at each element of level `level`.
    pub fn new(src: Tower, target: FinSet, level: usize, table: Vec<usize>) -> Result<Self> {
        if level > src.depth() {
            return Err(Error::Malformed(format!("level {level} exceeds depth {}", src.depth())));
        }
        if table.len() != src.level_size(level) {
            return Err(Error::Malformed(format!(
                "table has {} entries, level {level} has {} elements",
                table.len(),
                src.level_size(level)
            )));
        }
        if let Some(&v) = table.iter().find(|&&v| v >= target.size) {
            return Err(Error::Malformed(format!(
                "value {v} outside a target of size {}",
                target.size
            )));
        }
        let (level, table) = descend(&src, level, table);
        Ok(LocConstMap {
            src,
            target,
            level,
            table,
        })
    }

    /// The map with the given value on every thread.
    pub fn constant(src: Tower, target: FinSet, value: usize) -> Result<Self> {
        let n = src.level_size(0);
        Self::new(src, target, 0, vec![value; n])
    }

    /// From values on the threads (top level).
    pub fn from_threads(src: Tower, target: FinSet, values: Vec<usize>) -> Result<Self> {
        let d = src.depth();
        Self::new(src, target, d, values)
    }

    pub fn from_json(src: Tower, j: &LocConstMapJson) -> Result<Self> {
        Self::new(src, j.target.clone(), j.level, j.table.clone())
    }

    pub fn to_json(&self) -> LocConstMapJson {
        LocConstMapJson {
            level: self.level,
            table: self.table.clone(),
            target: self.target.clone(),
        }
    }

    pub fn src(&self) -> &Tower {
        &self.src
    }

    pub fn target(&self) -> &FinSet {
        &self.target
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Values on all threads.
    pub fn on_threads(&self) -> Vec<usize> {
        (0..self.src.top_size()).map(|x| lc_eval(self, x)).collect()
    }

    /// `self ∘ g`.
    pub fn precompose(&self, g: &TowerMap) -> LocConstMap {
        assert_eq!(g.dst, self.src, "precomposing with a map into another tower");
        let values = (0..g.src.top_size()).map(|x| lc_eval(self, g.apply(x))).collect();
        LocConstMap::from_threads(g.src.clone(), self.target.clone(), values)
            .expect("values come from a valid map")
    }

    /// `u ∘ self` for a map of targets.
    pub fn postcompose(&self, u: &FinMap) -> LocConstMap {
        assert_eq!(u.dom, self.target.size, "postcomposing with a map from another set");
        let table = self.table.iter().map(|&v| u.apply(v)).collect();
        LocConstMap::new(self.src.clone(), FinSet::new(u.cod), self.level, table)
            .expect("values come from a valid map")
    }
}

fn descend(t: &Tower, mut level: usize, mut table: Vec<usize>) -> (usize, Vec<usize>) {
    while level > 0 {
        let tr = t.transition(level - 1);
        let mut lower = vec![usize::MAX; tr.cod];
        let mut ok = true;
        for (x, &y) in tr.table.iter().enumerate() {
            if lower[y] == usize::MAX {
                lower[y] = table[x];
            } else if lower[y] != table[x] {
                ok = false;
                break;
            }
        }
        if !ok || lower.contains(&usize::MAX) {
            break;
        }
        table = lower;
        level -= 1;
    }
    (level, table)
}

/// Value on the thread with top coordinate `x`.
pub fn lc_eval(f: &LocConstMap, x: usize) -> usize {
    f.table[f.src.coord(x, f.level)]
}

/// Nonempty fibres in increasing order of value.
pub fn lc_fibres(f: &LocConstMap) -> Vec<Fibre> {
    let mut values: Vec<usize> = f.table.clone();
    values.sort_unstable();
    values.dedup();
    values
        .into_iter()
        .map(|v| {
            let subset: Vec<usize> = (0..f.table.len()).filter(|&e| f.table[e] == v).collect();
            let (subtower, inclusion) = clopen_subtower(&f.src, f.level, &subset);
            Fibre {
                value: v,
                subtower,
                inclusion,
            }
        })
        .collect()
}

/// The coarsest quotient `q` and injective `g` with `f = g ∘ π_q`.
pub fn lc_factor_minimal(f: &LocConstMap) -> (DiscreteQuotient, FinMap) {
    let p = Partition::from_labels(&f.table);
    let q = DiscreteQuotient::new(Arc::new(f.src.clone()), f.level, p)
        .expect("table is a partition of its own level");
    let mut table = vec![0; q.num_blocks()];
    for x in 0..f.src.top_size() {
        table[q.block_of_thread(x)] = lc_eval(f, x);
    }
    let g = FinMap {
        dom: q.num_blocks(),
        cod: f.target.size,
        table,
    };
    (q, g)
}

/// Restriction along an inclusion (or any map) into `f.src`.
pub fn lc_restrict(f: &LocConstMap, inc: &TowerMap) -> LocConstMap {
    f.precompose(inc)
}

/// Whether `x` and `y` have equal restrictions to every fibre of `f`. When
/// they do, `x == y` must follow; a violation is reported as an error.
pub fn presheaf_ext_check(
    x_presheaf: &dyn TowerPresheaf,
    f: &LocConstMap,
    x: &Section,
    y: &Section,
    budget: usize,
) -> Result<bool> {
    let fibres = lc_fibres(f);
    let blocks: Vec<Vec<usize>> = fibres
        .iter()
        .map(|fb| fb.inclusion.threads.table.clone())
        .collect();
    let pp = check_product_preservation(x_presheaf, f.src(), &blocks, budget)?;
    if !pp.holds {
        return Err(Error::ProductPreservationFailed(
            pp.witness.unwrap_or_else(|| "decomposition map is not bijective".into()),
        ));
    }
    let agree = fibres.iter().all(|fb| {
        x_presheaf.restrict(&fb.inclusion, x) == x_presheaf.restrict(&fb.inclusion, y)
    });
    if agree && x != y {
        return Err(Error::ExtensionalityViolated);
    }
    Ok(agree)
}
