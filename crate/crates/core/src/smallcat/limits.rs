use std::sync::Arc;

use super::comma::FunctorCertificate;
use super::{FinCat, FunctorData};
use crate::error::{Error, Result};
use crate::finset::{FinMap, FinSet};
use crate::unionfind::UnionFind;

/// A functor from a finite index category to finite sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetDiagram {
    pub index: Arc<FinCat>,
    pub value_sets: Vec<usize>,
    pub value_maps: Vec<FinMap>,
}

impl SetDiagram {
    pub fn new(index: Arc<FinCat>, value_sets: Vec<usize>, value_maps: Vec<FinMap>) -> Result<Self> {
        let d = SetDiagram {
            index,
            value_sets,
            value_maps,
        };
        let v = d.violations();
        if v.is_empty() {
            Ok(d)
        } else {
            Err(Error::Malformed(v.join("; ")))
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let c = &self.index;
        let mut out = Vec::new();
        if self.value_sets.len() != c.num_objects() || self.value_maps.len() != c.num_arrows() {
            out.push("diagram sizes do not match the index category".into());
            return out;
        }
        for (k, &(a, b)) in c.arrows().iter().enumerate() {
            let m = &self.value_maps[k];
            if m.dom != self.value_sets[a] || m.cod != self.value_sets[b] {
                out.push(format!("map on arrow {k} has the wrong type"));
                return out;
            }
        }
        for o in 0..c.num_objects() {
            if self.value_maps[c.id(o)] != FinMap::identity(self.value_sets[o]) {
                out.push(format!("identity at {o} is not sent to an identity"));
            }
        }
        for f in 0..c.num_arrows() {
            for &g in c.hom_from(c.arrow(f).1) {
                let gf = c.comp(g, f);
                if self.value_maps[gf] != self.value_maps[g].after(&self.value_maps[f]) {
                    out.push(format!("composite {g} after {f} not preserved"));
                }
            }
        }
        out
    }

    /// Precomposition `self ∘ f`.
    pub fn restrict_along(&self, f: &FunctorData) -> SetDiagram {
        SetDiagram {
            index: f.src.clone(),
            value_sets: f.obj_map.iter().map(|&o| self.value_sets[o]).collect(),
            value_maps: f
                .arrow_map
                .iter()
                .map(|&a| self.value_maps[a].clone())
                .collect(),
        }
    }
}

/// Limit as the set of compatible families; `families[k][o]` is the
/// component at object `o` of the `k`-th family.
#[derive(Debug, Clone)]
pub struct SetLimit {
    pub apex: FinSet,
    pub families: Vec<Vec<usize>>,
    pub projections: Vec<FinMap>,
}

/// Colimit as the disjoint union modulo the generated relation.
#[derive(Debug, Clone)]
pub struct SetColimit {
    pub apex: FinSet,
    pub coprojections: Vec<FinMap>,
}

pub fn set_limit(d: &SetDiagram) -> SetLimit {
    let c = &d.index;
    let n = c.num_objects();
    let mut families = Vec::new();
    let mut current = vec![usize::MAX; n];
    // constraint check only involves arrows between already assigned objects
    fn consistent(d: &SetDiagram, current: &[usize], upto: usize) -> bool {
        let c = &d.index;
        for (k, &(a, b)) in c.arrows().iter().enumerate() {
            if a <= upto && b <= upto && (a == upto || b == upto) {
                if d.value_maps[k].apply(current[a]) != current[b] {
                    return false;
                }
            }
        }
        true
    }
    fn go(d: &SetDiagram, o: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if o == current.len() {
            out.push(current.clone());
            return;
        }
        for x in 0..d.value_sets[o] {
            current[o] = x;
            if consistent(d, current, o) {
                go(d, o + 1, current, out);
            }
        }
        current[o] = usize::MAX;
    }
    go(d, 0, &mut current, &mut families);
    let projections = (0..n)
        .map(|o| FinMap {
            dom: families.len(),
            cod: d.value_sets[o],
            table: families.iter().map(|fam| fam[o]).collect(),
        })
        .collect();
    SetLimit {
        apex: FinSet::new(families.len()),
        families,
        projections,
    }
}

pub fn set_colimit(d: &SetDiagram) -> SetColimit {
    let offsets: Vec<usize> = d
        .value_sets
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let total: usize = d.value_sets.iter().sum();
    let mut uf = UnionFind::new(total);
    for (k, &(a, b)) in d.index.arrows().iter().enumerate() {
        for x in 0..d.value_sets[a] {
            uf.union(offsets[a] + x, offsets[b] + d.value_maps[k].apply(x));
        }
    }
    let (class, count) = uf.classes();
    let coprojections = (0..d.index.num_objects())
        .map(|o| FinMap {
            dom: d.value_sets[o],
            cod: count,
            table: (0..d.value_sets[o]).map(|x| class[offsets[o] + x]).collect(),
        })
        .collect();
    SetColimit {
        apex: FinSet::new(count),
        coprojections,
    }
}

/// The unique map from a cone `(apex, legs)` into the limit, or an error
/// naming the incompatible arrow.
pub fn limit_mediating(d: &SetDiagram, lim: &SetLimit, apex: usize, legs: &[FinMap]) -> Result<FinMap> {
    for (k, &(a, b)) in d.index.arrows().iter().enumerate() {
        if d.value_maps[k].after(&legs[a]) != legs[b] {
            return Err(Error::IncompatibleCone(format!("leg triangle fails on arrow {k}")));
        }
    }
    let lookup: std::collections::HashMap<&[usize], usize> = lim
        .families
        .iter()
        .enumerate()
        .map(|(i, f)| (f.as_slice(), i))
        .collect();
    let table = (0..apex)
        .map(|x| {
            let fam: Vec<usize> = legs.iter().map(|l| l.apply(x)).collect();
            lookup[fam.as_slice()]
        })
        .collect();
    Ok(FinMap {
        dom: apex,
        cod: lim.apex.size,
        table,
    })
}

/// The unique map out of the colimit into a cocone `(apex, legs)`.
pub fn colimit_mediating(
    d: &SetDiagram,
    colim: &SetColimit,
    apex: usize,
    legs: &[FinMap],
) -> Result<FinMap> {
    for (k, &(a, b)) in d.index.arrows().iter().enumerate() {
        if legs[b].after(&d.value_maps[k]) != legs[a] {
            return Err(Error::IncompatibleCone(format!("cocone triangle fails on arrow {k}")));
        }
    }
    let mut table = vec![usize::MAX; colim.apex.size];
    for (o, cop) in colim.coprojections.iter().enumerate() {
        for x in 0..cop.dom {
            let cls = cop.apply(x);
            let v = legs[o].apply(x);
            if table[cls] != usize::MAX && table[cls] != v {
                return Err(Error::IncompatibleCone("cocone does not factor".into()));
            }
            table[cls] = v;
        }
    }
    Ok(FinMap {
        dom: colim.apex.size,
        cod: apex,
        table,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonKind {
    /// `lim G -> lim (G ∘ F)`, an isomorphism when `F` is initial.
    Limit,
    /// `colim (G ∘ F) -> colim G`, an isomorphism when `F` is final.
    Colimit,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub kind: ComparisonKind,
    pub precondition_holds: bool,
    pub map: FinMap,
    pub bijective: bool,
}

impl ComparisonReport {
    /// False only when the precondition holds and the map is still not a bijection.
    pub fn consistent(&self) -> bool {
        !self.precondition_holds || self.bijective
    }
}

/// The canonical comparison between (co)limits of `d` and of `d ∘ f`.
pub fn restriction_comparison(
    f: &FunctorData,
    cert: &FunctorCertificate,
    d: &SetDiagram,
    kind: ComparisonKind,
) -> Result<ComparisonReport> {
    if !cert.matches(f) {
        return Err(Error::PreconditionUnchecked(
            "certificate was computed for a different functor".into(),
        ));
    }
    let restricted = d.restrict_along(f);
    let map = match kind {
        ComparisonKind::Limit => {
            let big = set_limit(d);
            let small = set_limit(&restricted);
            let legs: Vec<FinMap> = f
                .obj_map
                .iter()
                .map(|&o| big.projections[o].clone())
                .collect();
            limit_mediating(&restricted, &small, big.apex.size, &legs)?
        }
        ComparisonKind::Colimit => {
            let big = set_colimit(d);
            let small = set_colimit(&restricted);
            let legs: Vec<FinMap> = f
                .obj_map
                .iter()
                .map(|&o| big.coprojections[o].clone())
                .collect();
            colimit_mediating(&restricted, &small, big.apex.size, &legs)?
        }
    };
    let precondition_holds = match kind {
        ComparisonKind::Limit => cert.is_initial,
        ComparisonKind::Colimit => cert.is_final,
    };
    Ok(ComparisonReport {
        kind,
        precondition_holds,
        bijective: map.is_bijective(),
        map,
    })
}
