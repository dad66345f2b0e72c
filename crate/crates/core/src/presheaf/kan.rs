use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::{partition_compare, FinMap, Order, Partition};
use crate::smallcat::{
    certify_functor, restriction_comparison, set_colimit, ComparisonKind, FinCat, FunctorData,
    SetDiagram, DEFAULT_COMMA_BOUND,
};
use crate::tower::{Tower, TowerMap};

use super::oracles::{colimit_index, finite_stage_diagram};
use super::{section_index, TowerPresheaf};

/// Most objects allowed in the truncated comma category.
pub const DEFAULT_KAN_BOUND: usize = 5_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KanReport {
    pub dq_objects: usize,
    pub comma_objects: usize,
    /// `π : dq(S) -> S/ι` has connected, nonempty comma categories.
    pub pi_initial: bool,
    pub dq_colimit_size: usize,
    pub comma_colimit_size: usize,
    pub bijective: bool,
}

impl KanReport {
    /// Initiality must force a bijection.
    pub fn consistent(&self) -> bool {
        !self.pi_initial || self.bijective
    }
}

/// Ordered Bell number: surjections from an `m`-set onto `[n]`, summed over `n`.
fn surjection_count(m: usize) -> Option<usize> {
    let mut a: Vec<usize> = vec![1];
    for k in 1..=m {
        let mut s: usize = 0;
        let mut binom: usize = 1;
        for i in 1..=k {
            binom = binom.checked_mul(k - i + 1)? / i;
            s = s.checked_add(binom.checked_mul(a[k - i])?)?;
        }
        a.push(s);
    }
    Some(a[m])
}

/// All surjections from the threads onto some `[n]`, as tables.
fn surjections(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for n in usize::from(m > 0)..=m {
        for u in crate::finset::all_maps(m, n) {
            let mut hit = vec![false; n];
            for &v in &u.table {
                hit[v] = true;
            }
            if hit.iter().all(|&h| h) {
                out.push(u.table);
            }
        }
    }
    out
}

/// Compares the colimit of `X` over the quotients of `t` with the colimit
/// over the comma category of arrows from `t` to finite sets. Arrows to
/// finite sets are taken surjective, which keeps the comma category finite
/// and thin.
pub fn kan_comparison(x: &dyn TowerPresheaf, t: &Tower, bound: usize) -> Result<KanReport> {
    let m = t.top_size();
    let count = surjection_count(m).unwrap_or(usize::MAX);
    if count > bound {
        return Err(Error::BoundExceeded {
            what: "comma category",
            size: count,
            bound,
        });
    }
    let at = Arc::new(t.clone());
    let (parts, dq_index, _) = colimit_index(&at, m)?;
    let dq_index = Arc::new(dq_index);
    let comma: Vec<Vec<usize>> = surjections(m);
    let kernels: Vec<Partition> = comma.iter().map(|c| Partition::from_labels(c)).collect();
    let leq: Vec<Vec<bool>> = kernels
        .iter()
        .map(|a| {
            kernels
                .iter()
                .map(|b| matches!(partition_compare(a, b), Ok(Order::Le | Order::Eq)))
                .collect()
        })
        .collect();
    let comma_cat = Arc::new(FinCat::from_preorder(&leq)?);
    let obj_map = parts
        .iter()
        .map(|p| {
            comma
                .iter()
                .position(|c| c.as_slice() == p.as_slice())
                .expect("restricted-growth labels are a surjection")
        })
        .collect();
    let pi = FunctorData::between_thin(dq_index.clone(), comma_cat.clone(), obj_map)?;
    let pi_initial = certify_functor(&pi, DEFAULT_COMMA_BOUND)?.is_initial;
    let pi_op = pi.opposite();
    let cert_op = certify_functor(&pi_op, DEFAULT_COMMA_BOUND)?;

    // (S -> F) ↦ X(F) on the opposite of the comma category
    let budget = usize::MAX;
    let finite: Vec<Tower> = comma
        .iter()
        .map(|c| Tower::finite(c.iter().max().map_or(0, |&v| v + 1)))
        .collect();
    let values = finite
        .iter()
        .map(|f| x.sections(f, budget))
        .collect::<Result<Vec<_>>>()?;
    let mut value_maps = Vec::with_capacity(comma_cat.num_arrows());
    for &(i, j) in comma_cat.arrows() {
        let mut table = vec![0; finite[i].top_size()];
        for (e, &b) in comma[i].iter().enumerate() {
            table[b] = comma[j][e];
        }
        let u = TowerMap::new(finite[i].clone(), finite[j].clone(), table)?;
        value_maps.push(FinMap {
            dom: values[j].len(),
            cod: values[i].len(),
            table: values[j]
                .iter()
                .map(|s| section_index(&values[i], &x.restrict(&u, s)).expect("restriction is a section"))
                .collect(),
        });
    }
    let comma_diagram = SetDiagram::new(
        Arc::new(comma_cat.opposite()),
        values.iter().map(Vec::len).collect(),
        value_maps,
    )?;
    let cmp = restriction_comparison(&pi_op, &cert_op, &comma_diagram, ComparisonKind::Colimit)?;
    let dq_diagram = finite_stage_diagram(x, t, &parts, &dq_index, budget)?;
    let dq_colimit = set_colimit(&dq_diagram.diagram);
    debug_assert_eq!(dq_colimit.apex.size, cmp.map.dom);
    Ok(KanReport {
        dq_objects: parts.len(),
        comma_objects: comma.len(),
        pi_initial,
        dq_colimit_size: dq_colimit.apex.size,
        comma_colimit_size: cmp.map.cod,
        bijective: cmp.bijective,
    })
}
