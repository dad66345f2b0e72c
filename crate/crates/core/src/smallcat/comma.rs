use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use super::{is_connected, FinCat, FunctorData};
use crate::error::{Error, Result};

/// Largest comma category [`is_initial_functor`] will build by default.
pub const DEFAULT_COMMA_BOUND: usize = 20_000;

/// `Left` builds `F/D` (objects `F(X) -> Y`), `Right` builds `D/F`
/// (objects `Y -> F(X)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommaSide {
    Left,
    Right,
}

/// An object of a comma category: `source` in the domain of the functor,
/// `target` in the codomain, and the connecting arrow of the codomain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CommaObject {
    pub source: usize,
    pub target: usize,
    pub arrow: usize,
}

/// The full comma category `F/D` or `D/F`, with morphisms the commuting squares.
pub fn comma_category(f: &FunctorData, side: CommaSide) -> Result<(FinCat, Vec<CommaObject>)> {
    let c = &f.src;
    let d = &f.dst;
    let mut objects = Vec::new();
    for x in 0..c.num_objects() {
        let fx = f.obj_map[x];
        for y in 0..d.num_objects() {
            let arrows = match side {
                CommaSide::Left => d.hom(fx, y),
                CommaSide::Right => d.hom(y, fx),
            };
            for &a in arrows {
                objects.push(CommaObject {
                    source: x,
                    target: y,
                    arrow: a,
                });
            }
        }
    }
    let mut arrows = Vec::new();
    let mut labels = Vec::new();
    for (i, oi) in objects.iter().enumerate() {
        for (j, oj) in objects.iter().enumerate() {
            for &u in c.hom(oi.source, oj.source) {
                for &v in d.hom(oi.target, oj.target) {
                    let fu = f.arrow_map[u];
                    let commutes = match side {
                        // v ∘ a = a' ∘ F(u)
                        CommaSide::Left => d.compose(v, oi.arrow) == d.compose(oj.arrow, fu),
                        // F(u) ∘ a = a' ∘ v
                        CommaSide::Right => d.compose(fu, oi.arrow) == d.compose(oj.arrow, v),
                    };
                    if commutes {
                        arrows.push((i, j));
                        labels.push((u, v));
                    }
                }
            }
        }
    }
    let index: HashMap<(usize, usize, usize, usize), usize> = arrows
        .iter()
        .zip(&labels)
        .enumerate()
        .map(|(k, (&(i, j), &(u, v)))| ((i, j, u, v), k))
        .collect();
    let mut ids = vec![0; objects.len()];
    for (i, o) in objects.iter().enumerate() {
        ids[i] = index[&(i, i, c.id(o.source), d.id(o.target))];
    }
    let mut comp = Vec::new();
    for (k1, &(i, j)) in arrows.iter().enumerate() {
        for (k2, &(j2, l)) in arrows.iter().enumerate() {
            if j2 != j {
                continue;
            }
            let (u1, v1) = labels[k1];
            let (u2, v2) = labels[k2];
            let key = (i, l, c.comp(u2, u1), d.comp(v2, v1));
            comp.push((k2, k1, index[&key]));
        }
    }
    Ok((FinCat::new(objects.len(), arrows, ids, comp)?, objects))
}

/// The comma category at a single object `d`: for `Left`, objects are arrows
/// `F(X) -> d` and morphisms `u` with `a' ∘ F(u) = a`; for `Right`, objects
/// are arrows `d -> F(X)` and morphisms `u` with `F(u) ∘ a = a'`.
pub fn comma_at(
    f: &FunctorData,
    d: usize,
    side: CommaSide,
    bound: usize,
) -> Result<(FinCat, Vec<CommaObject>)> {
    let c = &f.src;
    let dc = &f.dst;
    let mut objects = Vec::new();
    for x in 0..c.num_objects() {
        let fx = f.obj_map[x];
        let arrows = match side {
            CommaSide::Left => dc.hom(fx, d),
            CommaSide::Right => dc.hom(d, fx),
        };
        for &a in arrows {
            objects.push(CommaObject {
                source: x,
                target: d,
                arrow: a,
            });
        }
        if objects.len() > bound {
            return Err(Error::BoundExceeded {
                what: "comma category",
                size: objects.len(),
                bound,
            });
        }
    }
    let mut by_source: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, o) in objects.iter().enumerate() {
        by_source.entry(o.source).or_default().push(i);
    }
    let mut arrows = Vec::new();
    let mut labels = Vec::new();
    let empty = Vec::new();
    for (i, oi) in objects.iter().enumerate() {
        for &u in c.hom_from(oi.source) {
            let target_src = c.arrow(u).1;
            let fu = f.arrow_map[u];
            for &j in by_source.get(&target_src).unwrap_or(&empty) {
                let oj = objects[j];
                let commutes = match side {
                    CommaSide::Left => dc.compose(oj.arrow, fu) == Some(oi.arrow),
                    CommaSide::Right => dc.compose(fu, oi.arrow) == Some(oj.arrow),
                };
                if commutes {
                    arrows.push((i, j));
                    labels.push(u);
                }
            }
        }
    }
    let index: HashMap<(usize, usize, usize), usize> = arrows
        .iter()
        .zip(&labels)
        .enumerate()
        .map(|(k, (&(i, j), &u))| ((i, j, u), k))
        .collect();
    let ids = objects
        .iter()
        .enumerate()
        .map(|(i, o)| index[&(i, i, c.id(o.source))])
        .collect();
    let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
    for (k, &(i, _)) in arrows.iter().enumerate() {
        out_of[i].push(k);
    }
    let mut comp = Vec::new();
    for (k1, &(i, j)) in arrows.iter().enumerate() {
        for &k2 in &out_of[j] {
            let l = arrows[k2].1;
            let key = (i, l, c.comp(labels[k2], labels[k1]));
            comp.push((k2, k1, index[&key]));
        }
    }
    Ok((FinCat::new(objects.len(), arrows, ids, comp)?, objects))
}

fn all_connected(f: &FunctorData, side: CommaSide, bound: usize) -> Result<bool> {
    for d in 0..f.dst.num_objects() {
        let (cat, _) = comma_at(f, d, side, bound)?;
        if !is_connected(&cat) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every comma category of arrows `F(X) -> d` is nonempty and connected.
pub fn is_initial_functor(f: &FunctorData, bound: usize) -> Result<bool> {
    all_connected(f, CommaSide::Left, bound)
}

/// Every comma category of arrows `d -> F(X)` is nonempty and connected.
pub fn is_final_functor(f: &FunctorData, bound: usize) -> Result<bool> {
    all_connected(f, CommaSide::Right, bound)
}

/// The outcome of the initial/final tests, bound to the functor it was
/// computed for. Required by
/// [`restriction_comparison`](super::restriction_comparison).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorCertificate {
    pub is_initial: bool,
    pub is_final: bool,
    fingerprint: u64,
}

impl FunctorCertificate {
    pub(crate) fn matches(&self, f: &FunctorData) -> bool {
        self.fingerprint == fingerprint(f)
    }
}

pub(crate) fn fingerprint(f: &FunctorData) -> u64 {
    let mut h = DefaultHasher::new();
    f.obj_map.hash(&mut h);
    f.arrow_map.hash(&mut h);
    f.src.arrows().hash(&mut h);
    f.dst.arrows().hash(&mut h);
    h.finish()
}

pub fn certify_functor(f: &FunctorData, bound: usize) -> Result<FunctorCertificate> {
    Ok(FunctorCertificate {
        is_initial: is_initial_functor(f, bound)?,
        is_final: is_final_functor(f, bound)?,
        fingerprint: fingerprint(f),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::smallcat::validate_category;

    fn arrow_cat() -> Arc<FinCat> {
        Arc::new(FinCat::from_preorder(&[vec![true, true], vec![false, true]]).unwrap())
    }

    #[test]
    fn identity_on_point() {
        let c = Arc::new(FinCat::discrete(1));
        let id = FunctorData::identity(c);
        let (comma, _) = comma_category(&id, CommaSide::Left).unwrap();
        assert_eq!(comma.num_objects(), 1);
        assert!(is_initial_functor(&id, 100).unwrap());
        assert!(is_final_functor(&id, 100).unwrap());
    }

    #[test]
    fn inclusion_of_terminal_object() {
        let d = arrow_cat();
        let f = FunctorData::between_thin(Arc::new(FinCat::discrete(1)), d, vec![1]).unwrap();
        let (comma, objs) = comma_category(&f, CommaSide::Right).unwrap();
        assert_eq!(comma.num_objects(), 2);
        assert!(objs.iter().all(|o| o.source == 0));
        assert!(is_connected(&comma));
        assert!(validate_category(&comma).is_empty());
        assert!(is_final_functor(&f, 100).unwrap());
        assert!(!is_initial_functor(&f, 100).unwrap());
    }

    #[test]
    fn inclusion_into_discrete_is_not_final() {
        let d = Arc::new(FinCat::discrete(2));
        let f = FunctorData::between_thin(Arc::new(FinCat::discrete(1)), d, vec![0]).unwrap();
        assert!(!is_final_functor(&f, 100).unwrap());
        let (at_b, _) = comma_at(&f, 1, CommaSide::Right, 100).unwrap();
        assert_eq!(at_b.num_objects(), 0);
    }

    #[test]
    fn empty_source_gives_empty_comma() {
        let f = FunctorData::new(
            Arc::new(FinCat::discrete(0)),
            arrow_cat(),
            vec![],
            vec![],
        )
        .unwrap();
        let (comma, _) = comma_category(&f, CommaSide::Left).unwrap();
        assert_eq!(comma.num_objects(), 0);
        assert!(!is_initial_functor(&f, 100).unwrap());
    }

    #[test]
    fn comma_bound_is_enforced() {
        let d = arrow_cat();
        let id = FunctorData::identity(d);
        assert!(matches!(
            is_initial_functor(&id, 0),
            Err(Error::BoundExceeded { .. })
        ));
    }
}
