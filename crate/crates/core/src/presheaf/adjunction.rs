use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::finset::{FinMap, FinSet};
use crate::locconst::{lc_fibres, LocConstMap};
use crate::tower::{subtower_from_threads, Tower, TowerMap};

use super::{section_index, LocConstPresheaf, Section, TowerPresheaf};

/// `X(point)`.
pub fn underlying(x: &dyn TowerPresheaf, budget: usize) -> Result<Vec<Section>> {
    x.sections(&Tower::point(), budget)
}

/// `Y -> LocConst(point, Y)`, sending `y` to the constant map at `y`, as
/// indices into the sorted sections at the point.
pub fn unit_component(y: &FinSet) -> FinMap {
    let lc = LocConstPresheaf { k: y.size };
    let at_point = lc
        .sections(&Tower::point(), usize::MAX)
        .expect("one section per element");
    let table = (0..y.size)
        .map(|v| section_index(&at_point, &vec![v]).expect("constant map is a section"))
        .collect();
    FinMap {
        dom: y.size,
        cod: at_point.len(),
        table,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductReport {
    pub holds: bool,
    pub source_size: usize,
    pub product_size: usize,
    pub witness: Option<String>,
}

/// Is `X(S) -> ∏ X(S_i)` bijective for the clopen pieces spanned by
/// `blocks` (a partition of the threads)?
pub fn check_product_preservation(
    x: &dyn TowerPresheaf,
    t: &Tower,
    blocks: &[Vec<usize>],
    budget: usize,
) -> Result<ProductReport> {
    let whole = x.sections(t, budget)?;
    let pieces: Vec<(Tower, TowerMap)> = blocks.iter().map(|b| subtower_from_threads(t, b)).collect();
    let piece_sections = pieces
        .iter()
        .map(|(p, _)| x.sections(p, budget))
        .collect::<Result<Vec<_>>>()?;
    let product_size = piece_sections
        .iter()
        .try_fold(1usize, |acc, s| acc.checked_mul(s.len()))
        .unwrap_or(usize::MAX);
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    for (i, s) in whole.iter().enumerate() {
        let key: Vec<usize> = pieces
            .iter()
            .zip(&piece_sections)
            .map(|((_, inc), secs)| {
                section_index(secs, &x.restrict(inc, s)).expect("restriction lands in sections")
            })
            .collect();
        if let Some(j) = seen.insert(key, i) {
            return Ok(ProductReport {
                holds: false,
                source_size: whole.len(),
                product_size,
                witness: Some(format!(
                    "sections {:?} and {:?} have the same restrictions",
                    whole[j], whole[i]
                )),
            });
        }
    }
    let holds = whole.len() == product_size;
    Ok(ProductReport {
        holds,
        source_size: whole.len(),
        product_size,
        witness: (!holds).then(|| {
            format!(
                "{} sections cannot cover a product of {} tuples",
                whole.len(),
                product_size
            )
        }),
    })
}

/// Everything needed to evaluate the counit at one tower repeatedly.
///
/// Gluing is looked up through the one-thread pieces when the presheaf is
/// product-preserving on that decomposition, and found by search otherwise.
pub struct CounitContext<'a> {
    x: &'a dyn TowerPresheaf,
    tower: Tower,
    /// `None` when `X(S)` is over budget; single-fibre gluing still works.
    pub sections: Option<Vec<Section>>,
    pub points: Vec<Section>,
    budget: usize,
    to_point: TowerMap,
    atoms: Option<AtomIndex>,
}

struct AtomIndex {
    point_to_atom: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
}

impl<'a> CounitContext<'a> {
    pub fn new(x: &'a dyn TowerPresheaf, tower: &Tower, budget: usize) -> Result<Self> {
        let sections = match x.sections(tower, budget) {
            Ok(s) => Some(s),
            Err(Error::BoundExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        let points = underlying(x, budget)?;
        let atoms = match &sections {
            Some(s) => build_atom_index(x, tower, s, &points, budget)?,
            None => None,
        };
        Ok(CounitContext {
            x,
            tower: tower.clone(),
            sections,
            points,
            budget,
            to_point: TowerMap::to_point(tower),
            atoms,
        })
    }

    /// The section glued from the values of `f` on its fibres.
    pub fn counit(&self, f: &LocConstMap) -> Result<Section> {
        if f.src() != &self.tower {
            return Err(Error::Malformed("locally constant map lives on another tower".into()));
        }
        if let Some(&v) = f.table().iter().find(|&&v| v >= self.points.len()) {
            return Err(Error::ValueNotInUnderlying {
                value: v,
                size: self.points.len(),
            });
        }
        if f.target().size != self.points.len() {
            return Err(Error::ValueNotInUnderlying {
                value: f.target().size,
                size: self.points.len(),
            });
        }
        let over_budget = || Error::BoundExceeded {
            what: "sections",
            size: self.budget.saturating_add(1),
            bound: self.budget,
        };
        if self.tower.is_empty() {
            return self
                .sections
                .as_ref()
                .ok_or_else(over_budget)?
                .first()
                .cloned()
                .ok_or_else(|| Error::ProductPreservationFailed("no section over the empty tower".into()));
        }
        let fibres = lc_fibres(f);
        if fibres.len() == 1 {
            return Ok(self.x.restrict(&self.to_point, &self.points[fibres[0].value]));
        }
        let expected: Vec<Section> = fibres
            .iter()
            .map(|fb| {
                self.x
                    .restrict(&TowerMap::to_point(&fb.subtower), &self.points[fb.value])
            })
            .collect();
        let satisfies = |e: &Section| {
            fibres
                .iter()
                .zip(&expected)
                .all(|(fb, want)| self.x.restrict(&fb.inclusion, e) == *want)
        };
        if let Some(atoms) = &self.atoms {
            let key: Vec<usize> = f
                .on_threads()
                .into_iter()
                .map(|v| atoms.point_to_atom[v])
                .collect();
            return match atoms.index.get(&key) {
                Some(&i) => {
                    let e = &self.sections.as_ref().expect("index implies sections")[i];
                    if satisfies(e) {
                        Ok(e.clone())
                    } else {
                        Err(Error::ProductPreservationFailed(
                            "glued section misses a fibre value".into(),
                        ))
                    }
                }
                _ => Err(Error::ProductPreservationFailed(
                    "no section restricts to the prescribed fibre values".into(),
                )),
            };
        }
        let sections = match &self.sections {
            Some(s) => s,
            None => {
                let pieces: Vec<(&TowerMap, &Section)> =
                    fibres.iter().map(|fb| &fb.inclusion).zip(&expected).collect();
                return match self.x.glue(&self.tower, &pieces) {
                    Some(e) if satisfies(&e) => Ok(e),
                    _ => Err(over_budget()),
                };
            }
        };
        let mut hits = sections.iter().filter(|e| satisfies(e));
        match (hits.next(), hits.next()) {
            (Some(e), None) => Ok(e.clone()),
            (None, _) => Err(Error::ProductPreservationFailed(
                "no section restricts to the prescribed fibre values".into(),
            )),
            (Some(_), Some(_)) => Err(Error::ProductPreservationFailed(
                "several sections restrict to the prescribed fibre values".into(),
            )),
        }
    }
}

fn build_atom_index(
    x: &dyn TowerPresheaf,
    t: &Tower,
    sections: &[Section],
    points: &[Section],
    budget: usize,
) -> Result<Option<AtomIndex>> {
    if t.is_empty() {
        return Ok(None);
    }
    let incs: Vec<TowerMap> = (0..t.top_size())
        .map(|i| subtower_from_threads(t, &[i]).1)
        .collect();
    // every one-thread piece is the same all-singleton tower
    let atom = incs[0].src.clone();
    let atom_sections = match x.sections(&atom, budget) {
        Ok(s) => s,
        Err(Error::BoundExceeded { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let to_point = TowerMap::to_point(&atom);
    let point_to_atom = points
        .iter()
        .map(|p| section_index(&atom_sections, &x.restrict(&to_point, p)).expect("restriction is a section"))
        .collect();
    let mut index = HashMap::with_capacity(sections.len());
    for (i, s) in sections.iter().enumerate() {
        let key: Vec<usize> = incs
            .iter()
            .map(|inc| section_index(&atom_sections, &x.restrict(inc, s)).expect("restriction is a section"))
            .collect();
        if index.insert(key, i).is_some() {
            return Ok(None);
        }
    }
    Ok(Some(AtomIndex {
        point_to_atom,
        index,
    }))
}

/// The counit at `S` applied to `f : S -> X(point)`.
pub fn counit_component(
    x: &dyn TowerPresheaf,
    s: &Tower,
    f: &LocConstMap,
    budget: usize,
) -> Result<Section> {
    CounitContext::new(x, s, budget)?.counit(f)
}

/// `X(g)(ε_S(f)) = ε_T(f ∘ g)` for `g : T -> S`.
pub fn check_counit_natural_in_s(
    x: &dyn TowerPresheaf,
    g: &TowerMap,
    f: &LocConstMap,
    budget: usize,
) -> Result<bool> {
    let at_s = counit_component(x, &g.dst, f, budget)?;
    let at_t = counit_component(x, &g.src, &f.precompose(g), budget)?;
    Ok(x.restrict(g, &at_s) == at_t)
}

/// A morphism of tower presheaves, given by its components.
pub trait PresheafMorphism {
    fn source(&self) -> &dyn TowerPresheaf;
    fn target(&self) -> &dyn TowerPresheaf;
    fn component(&self, t: &Tower, x: &Section) -> Section;
}

/// `LocConst(-, Y) -> LocConst(-, Z)` induced by `u : Y -> Z`.
#[derive(Debug, Clone)]
pub struct TargetMap {
    pub src: LocConstPresheaf,
    pub dst: LocConstPresheaf,
    pub map: FinMap,
}

impl TargetMap {
    pub fn new(map: FinMap) -> Self {
        TargetMap {
            src: LocConstPresheaf { k: map.dom },
            dst: LocConstPresheaf { k: map.cod },
            map,
        }
    }
}

impl PresheafMorphism for TargetMap {
    fn source(&self) -> &dyn TowerPresheaf {
        &self.src
    }

    fn target(&self) -> &dyn TowerPresheaf {
        &self.dst
    }

    fn component(&self, _t: &Tower, x: &Section) -> Section {
        x.iter().map(|&v| self.map.apply(v)).collect()
    }
}

fn sample_maps_into(s: &Tower, f: &LocConstMap) -> Vec<TowerMap> {
    let mut maps = vec![TowerMap::identity(s), TowerMap::to_point(s)];
    maps.extend(lc_fibres(f).into_iter().map(|fb| fb.inclusion));
    for n in 0..=s.depth() {
        let q = Tower::finite(s.level_size(n));
        maps.push(TowerMap::new(s.clone(), q, s.projection_to(n).table).expect("projection"));
    }
    maps
}

/// `g_S(ε_X(f)) = ε_Y(g_point ∘ f)`, after checking that `g` commutes with
/// restriction along a sample of maps around `S`.
pub fn check_counit_natural_in_x(
    g: &dyn PresheafMorphism,
    s: &Tower,
    f: &LocConstMap,
    budget: usize,
) -> Result<bool> {
    let (xs, ys) = (g.source(), g.target());
    for h in sample_maps_into(s, f) {
        // squares out of an over-budget tower are left to the smaller maps
        let secs = match xs.sections(&h.dst, budget) {
            Ok(secs) => secs,
            Err(Error::BoundExceeded { .. }) => continue,
            Err(e) => return Err(e),
        };
        for sec in secs {
            let one = g.component(&h.src, &xs.restrict(&h, &sec));
            let two = ys.restrict(&h, &g.component(&h.dst, &sec));
            if one != two {
                return Err(Error::NotANaturalTransformation(format!(
                    "square fails for section {sec:?} along a map out of a tower with {} threads",
                    h.src.top_size()
                )));
            }
        }
    }
    let x_points = underlying(xs, budget)?;
    let y_points = underlying(ys, budget)?;
    let point = Tower::point();
    let on_points = FinMap {
        dom: x_points.len(),
        cod: y_points.len(),
        table: x_points
            .iter()
            .map(|p| {
                section_index(&y_points, &g.component(&point, p)).ok_or_else(|| {
                    Error::NotANaturalTransformation("component at the point leaves the sections".into())
                })
            })
            .collect::<Result<_>>()?,
    };
    let lhs = g.component(s, &counit_component(xs, s, f, budget)?);
    let rhs = counit_component(ys, s, &f.postcompose(&on_points), budget)?;
    Ok(lhs == rhs)
}

/// `ε_{L(Y)} ∘ L(η_Y) = id` on every locally constant `f : S -> Y`.
pub fn check_triangle_first(k: usize, s: &Tower, budget: usize) -> Result<bool> {
    let x = LocConstPresheaf { k };
    let eta = unit_component(&FinSet::new(k));
    let ctx = CounitContext::new(&x, s, budget)?;
    for values in super::tables(s.top_size(), k, budget)? {
        let f = LocConstMap::from_threads(s.clone(), FinSet::new(k), values)?;
        if ctx.counit(&f.postcompose(&eta))? != f.on_threads() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `U(ε_X) ∘ η_{U(X)} = id` on every element of `X(point)`.
pub fn check_triangle_second(x: &dyn TowerPresheaf, budget: usize) -> Result<bool> {
    let point = Tower::point();
    let ctx = CounitContext::new(x, &point, budget)?;
    let u = FinSet::new(ctx.points.len());
    for v in 0..u.size {
        let eta = LocConstMap::constant(point.clone(), u.clone(), v)?;
        if ctx.counit(&eta)? != ctx.points[v] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `X(Y) ≅ X(point)^Y` through the point inclusions, and naturality of that
/// comparison along every map `Y -> Y'` with `|Y'| <= |Y|`.
pub fn finite_level_comparison(x: &dyn TowerPresheaf, y: usize, budget: usize) -> Result<bool> {
    let points = underlying(x, budget)?;
    let compare = |n: usize| -> Result<(Vec<Section>, Vec<Vec<usize>>)> {
        let fin = Tower::finite(n);
        let secs = x.sections(&fin, budget)?;
        let incs: Vec<TowerMap> = (0..n)
            .map(|i| TowerMap::new(Tower::point(), fin.clone(), vec![i]).expect("point inclusion"))
            .collect();
        let tuples = secs
            .iter()
            .map(|s| {
                incs.iter()
                    .map(|inc| section_index(&points, &x.restrict(inc, s)).expect("restriction is a section"))
                    .collect()
            })
            .collect();
        Ok((secs, tuples))
    };
    let (secs, tuples) = compare(y)?;
    let mut sorted = tuples.clone();
    sorted.sort();
    sorted.dedup();
    let product = points.len().checked_pow(y as u32).unwrap_or(usize::MAX);
    if sorted.len() != tuples.len() || tuples.len() != product {
        return Err(Error::ProductPreservationFailed(format!(
            "{} sections over a {y}-element set against {product} tuples",
            secs.len()
        )));
    }
    for n in 1..=y {
        let (small_secs, small_tuples) = compare(n)?;
        let fin_y = Tower::finite(y);
        let fin_n = Tower::finite(n);
        for u in crate::finset::all_maps(y, n) {
            let g = TowerMap::new(fin_y.clone(), fin_n.clone(), u.table.clone())?;
            for (s, tup) in small_secs.iter().zip(&small_tuples) {
                let pulled = x.restrict(&g, s);
                let i = section_index(&secs, &pulled).expect("restriction is a section");
                let want: Vec<usize> = (0..y).map(|j| tup[u.apply(j)]).collect();
                if tuples[i] != want {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The equalizer condition along a level-preserving surjection `g : T' -> T`
/// of equal depth: `X(T)` is the equalizer of the two restrictions to
/// `T' ×_T T'`.
pub fn check_equalizer(x: &dyn TowerPresheaf, g: &TowerMap, budget: usize) -> Result<bool> {
    let (src, dst) = (&g.src, &g.dst);
    if src.depth() != dst.depth() || !g.is_level_preserving() || !g.threads.is_surjective() {
        return Err(Error::Malformed(
            "equalizer check needs a level-preserving surjection between towers of equal depth".into(),
        ));
    }
    let d = src.depth();
    let level_maps: Vec<FinMap> = (0..=d).map(|n| g.level_map(n).expect("aligned")).collect();
    let pairs: Vec<Vec<(usize, usize)>> = (0..=d)
        .map(|n| {
            let m = &level_maps[n];
            let size = src.level_size(n);
            (0..size)
                .flat_map(|a| (0..size).map(move |b| (a, b)))
                .filter(|&(a, b)| m.apply(a) == m.apply(b))
                .collect()
        })
        .collect();
    let position = |n: usize, p: (usize, usize)| pairs[n].binary_search(&p).expect("pair present");
    let transitions = (0..d)
        .map(|n| {
            let t = src.transition(n);
            pairs[n + 1]
                .iter()
                .map(|&(a, b)| position(n, (t.apply(a), t.apply(b))))
                .collect()
        })
        .collect();
    let fibre = Tower::new("fibre product", pairs.iter().map(Vec::len).collect(), transitions)?;
    let p1 = TowerMap::new(fibre.clone(), src.clone(), pairs[d].iter().map(|p| p.0).collect())?;
    let p2 = TowerMap::new(fibre, src.clone(), pairs[d].iter().map(|p| p.1).collect())?;
    let lower = x.sections(dst, budget)?;
    let upper = x.sections(src, budget)?;
    let mut image: Vec<Section> = lower.iter().map(|s| x.restrict(g, s)).collect();
    image.sort();
    let injective = image.windows(2).all(|w| w[0] != w[1]);
    let equalized: Vec<&Section> = upper
        .iter()
        .filter(|s| x.restrict(&p1, s) == x.restrict(&p2, s))
        .collect();
    Ok(injective
        && equalized.len() == image.len()
        && equalized.iter().all(|s| image.binary_search(s).is_ok()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::{ConstantPresheafNaive, TowerHomPresheaf};
    use crate::tower::{clopen_subtower, standard_tower, StandardTower};

    fn cantor(d: usize) -> Tower {
        standard_tower(StandardTower::Cantor, d)
    }

    #[test]
    fn unit_is_bijective() {
        for k in 1..5 {
            assert!(unit_component(&FinSet::new(k)).is_bijective());
        }
    }

    #[test]
    fn locconst_products() {
        let x = LocConstPresheaf { k: 2 };
        let t = cantor(2);
        let r = check_product_preservation(&x, &t, &[vec![0, 1], vec![2, 3]], 1000).unwrap();
        assert!(r.holds);
        assert_eq!((r.source_size, r.product_size), (16, 16));
        let trivial = check_product_preservation(&x, &t, &[vec![0, 1, 2, 3]], 1000).unwrap();
        assert!(trivial.holds);
    }

    #[test]
    fn constant_presheaf_is_not_a_product() {
        let x = ConstantPresheafNaive { k: 2 };
        let r = check_product_preservation(&x, &cantor(1), &[vec![0], vec![1]], 1000).unwrap();
        assert!(!r.holds);
        assert!(r.witness.is_some());
    }

    #[test]
    fn counit_glues_two_fibres() {
        let x = LocConstPresheaf { k: 2 };
        let t = cantor(1);
        let f = LocConstMap::from_threads(t.clone(), FinSet::new(2), vec![1, 0]).unwrap();
        assert_eq!(counit_component(&x, &t, &f, 100).unwrap(), vec![1, 0]);
        let bad = LocConstMap::from_threads(t.clone(), FinSet::new(3), vec![2, 0]).unwrap();
        assert!(matches!(
            counit_component(&x, &t, &bad, 100),
            Err(Error::ValueNotInUnderlying { .. })
        ));
    }

    #[test]
    fn counit_on_constant_presheaf_fails_to_glue() {
        let x = ConstantPresheafNaive { k: 2 };
        let t = cantor(1);
        let f = LocConstMap::from_threads(t.clone(), FinSet::new(2), vec![1, 0]).unwrap();
        assert!(matches!(
            counit_component(&x, &t, &f, 100),
            Err(Error::ProductPreservationFailed(_))
        ));
    }

    #[test]
    fn naturality_in_s_along_inclusion() {
        let x = LocConstPresheaf { k: 3 };
        let t = cantor(2);
        let (_, inc) = clopen_subtower(&t, 1, &[1]);
        let f = LocConstMap::from_threads(t.clone(), FinSet::new(3), vec![0, 2, 1, 1]).unwrap();
        assert!(check_counit_natural_in_s(&x, &inc, &f, 1000).unwrap());
    }

    #[test]
    fn naturality_in_x_for_target_map() {
        let g = TargetMap::new(FinMap::new(3, 2, vec![1, 0, 1]).unwrap());
        let t = cantor(1);
        let f = LocConstMap::from_threads(t.clone(), FinSet::new(3), vec![2, 0]).unwrap();
        assert!(check_counit_natural_in_x(&g, &t, &f, 1000).unwrap());
    }

    #[test]
    fn triangles() {
        assert!(check_triangle_first(2, &cantor(2), 1000).unwrap());
        assert!(check_triangle_second(&LocConstPresheaf { k: 3 }, 1000).unwrap());
        assert!(check_triangle_second(&TowerHomPresheaf::cantor(), 1000).unwrap());
    }

    #[test]
    fn finite_levels() {
        assert!(finite_level_comparison(&LocConstPresheaf { k: 2 }, 3, 1000).unwrap());
        assert!(finite_level_comparison(&LocConstPresheaf { k: 2 }, 1, 1000).unwrap());
        assert!(matches!(
            finite_level_comparison(&ConstantPresheafNaive { k: 2 }, 2, 1000),
            Err(Error::ProductPreservationFailed(_))
        ));
    }

    #[test]
    fn equalizer_condition() {
        let t = cantor(2);
        let swap = TowerMap::new(t.clone(), t.clone(), vec![1, 0, 3, 2]).unwrap();
        assert!(check_equalizer(&LocConstPresheaf { k: 2 }, &swap, 1000).unwrap());
        let p = standard_tower(StandardTower::Point, 1);
        let collapse = TowerMap::new(cantor(1), p, vec![0, 0]).unwrap();
        assert!(check_equalizer(&LocConstPresheaf { k: 2 }, &collapse, 1000).unwrap());
        assert!(!check_equalizer(&Zeroing::new(), &collapse, 1000).unwrap());
    }

    // sections are all tables, restrictions forget the last thread's value
    struct Zeroing;

    impl Zeroing {
        fn new() -> Self {
            Zeroing
        }
    }

    impl TowerPresheaf for Zeroing {
        fn name(&self) -> String {
            "zeroing".into()
        }

        fn sections(&self, t: &Tower, budget: usize) -> Result<Vec<Section>> {
            super::super::tables(t.top_size(), 2, budget)
        }

        fn restrict(&self, g: &TowerMap, _x: &Section) -> Section {
            vec![0; g.src.top_size()]
        }
    }
}
