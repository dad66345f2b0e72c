//! A finite-category engine: categories given by explicit composition tables,
//! functors, natural transformations, comma categories, connectedness,
//! initial/final functors, set-valued (co)limits and adjunction checks.

mod adjunction;
mod comma;
mod limits;

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

pub use adjunction::{
    chain_category, check_adjunction, counit_detects_essential_image, essential_image_bruteforce,
    galois_chain_adjunction, is_fully_faithful, natural_isos, unit_iso_from_counterpart,
    AdjunctionData,
};
pub use comma::{
    certify_functor, comma_at, comma_category, is_final_functor, is_initial_functor, CommaObject,
    CommaSide, FunctorCertificate, DEFAULT_COMMA_BOUND,
};
pub use limits::{
    colimit_mediating, limit_mediating, restriction_comparison, set_colimit, set_limit,
    ComparisonKind, ComparisonReport, SetColimit, SetDiagram, SetLimit,
};

/// A finite category. Arrow `k` goes from `arrows[k].0` to `arrows[k].1`;
/// `compose(g, f)` is `g ∘ f` for `f: a -> b`, `g: b -> c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCat {
    objects: usize,
    arrows: Vec<(usize, usize)>,
    ids: Vec<usize>,
    comp: HashMap<(usize, usize), usize>,
    homs: HashMap<(usize, usize), Vec<usize>>,
    out_arrows: Vec<Vec<usize>>,
}

/// JSON form: composition is a flat list of `[g, f, g∘f]` triples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FinCatJson {
    pub objects: usize,
    pub arrows: Vec<(usize, usize)>,
    pub identities: Vec<usize>,
    pub composition: Vec<(usize, usize, usize)>,
}

/// One failed law in [`validate_category`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CategoryViolation {
    MissingComposite { g: usize, f: usize },
    IllTypedComposite { g: usize, f: usize, result: usize },
    LeftIdentity { arrow: usize },
    RightIdentity { arrow: usize },
    Associativity { h: usize, g: usize, f: usize },
}

impl FinCat {
    pub fn new(
        objects: usize,
        arrows: Vec<(usize, usize)>,
        ids: Vec<usize>,
        composition: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<FinCat> {
        if ids.len() != objects {
            return Err(Error::Malformed(format!(
                "{} identities for {objects} objects",
                ids.len()
            )));
        }
        for (k, &(s, t)) in arrows.iter().enumerate() {
            if s >= objects || t >= objects {
                return Err(Error::Malformed(format!("arrow {k} has bad endpoints")));
            }
        }
        for (o, &i) in ids.iter().enumerate() {
            if i >= arrows.len() || arrows[i] != (o, o) {
                return Err(Error::Malformed(format!(
                    "identity of object {o} is not an endomorphism of it"
                )));
            }
        }
        let mut comp = HashMap::new();
        for (g, f, h) in composition {
            if g >= arrows.len() || f >= arrows.len() || h >= arrows.len() {
                return Err(Error::Malformed(format!(
                    "composition entry ({g}, {f}, {h}) names an unknown arrow"
                )));
            }
            comp.insert((g, f), h);
        }
        let mut homs: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (k, &(s, t)) in arrows.iter().enumerate() {
            homs.entry((s, t)).or_default().push(k);
        }
        let mut out_arrows = vec![Vec::new(); objects];
        for (k, &(s, _)) in arrows.iter().enumerate() {
            out_arrows[s].push(k);
        }
        Ok(FinCat {
            objects,
            arrows,
            ids,
            comp,
            homs,
            out_arrows,
        })
    }

    /// Category with the identity composites filled in automatically; only
    /// non-identity composites need to be listed.
    pub fn with_units(
        objects: usize,
        arrows: Vec<(usize, usize)>,
        ids: Vec<usize>,
        composition: Vec<(usize, usize, usize)>,
    ) -> Result<FinCat> {
        let mut all = composition;
        for (k, &(s, t)) in arrows.iter().enumerate() {
            if s < objects && t < objects && ids.len() == objects {
                all.push((ids[t], k, k));
                all.push((k, ids[s], k));
            }
        }
        FinCat::new(objects, arrows, ids, all)
    }

    pub fn from_json(j: FinCatJson) -> Result<FinCat> {
        FinCat::new(j.objects, j.arrows, j.identities, j.composition)
    }

    pub fn to_json(&self) -> FinCatJson {
        let mut composition: Vec<_> = self.comp.iter().map(|(&(g, f), &h)| (g, f, h)).collect();
        composition.sort_unstable();
        FinCatJson {
            objects: self.objects,
            arrows: self.arrows.clone(),
            identities: self.ids.clone(),
            composition,
        }
    }

    /// Thin category of a preorder given as `leq[i][j]`.
    pub fn from_preorder(leq: &[Vec<bool>]) -> Result<FinCat> {
        let n = leq.len();
        let mut arrows = Vec::new();
        let mut index = HashMap::new();
        for i in 0..n {
            for j in 0..n {
                if leq[i][j] {
                    index.insert((i, j), arrows.len());
                    arrows.push((i, j));
                }
            }
        }
        let ids = (0..n)
            .map(|i| {
                index
                    .get(&(i, i))
                    .copied()
                    .ok_or_else(|| Error::Malformed(format!("relation not reflexive at {i}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut comp = Vec::new();
        for (&(a, b), &f) in &index {
            for c in 0..n {
                if let Some(&g) = index.get(&(b, c)) {
                    let h = index.get(&(a, c)).copied().ok_or_else(|| {
                        Error::Malformed(format!("relation not transitive at {a} ≤ {b} ≤ {c}"))
                    })?;
                    comp.push((g, f, h));
                }
            }
        }
        FinCat::new(n, arrows, ids, comp)
    }

    /// Category with `n` objects and only identity arrows.
    pub fn discrete(n: usize) -> FinCat {
        let leq: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        FinCat::from_preorder(&leq).expect("discrete preorder is valid")
    }

    pub fn num_objects(&self) -> usize {
        self.objects
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, k: usize) -> (usize, usize) {
        self.arrows[k]
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn id(&self, o: usize) -> usize {
        self.ids[o]
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        self.homs.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        if self.arrows[f].1 != self.arrows[g].0 {
            return None;
        }
        self.comp.get(&(g, f)).copied()
    }

    /// Like [`FinCat::compose`] but panics on missing entries; for validated categories.
    pub fn comp(&self, g: usize, f: usize) -> usize {
        self.compose(g, f)
            .unwrap_or_else(|| panic!("no composite for ({g}, {f})"))
    }

    pub fn opposite(&self) -> FinCat {
        let arrows = self.arrows.iter().map(|&(s, t)| (t, s)).collect();
        let comp = self.comp.iter().map(|(&(g, f), &h)| (f, g, h));
        FinCat::new(self.objects, arrows, self.ids.clone(), comp).expect("opposite of a valid table")
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverse(f).is_some()
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (a, b) = self.arrows[f];
        self.hom(b, a).iter().copied().find(|&g| {
            self.compose(g, f) == Some(self.ids[a]) && self.compose(f, g) == Some(self.ids[b])
        })
    }
}

/// Every associativity or unit violation in the composition table.
pub fn validate_category(c: &FinCat) -> Vec<CategoryViolation> {
    let mut out = Vec::new();
    let n = c.num_arrows();
    for f in 0..n {
        let (a, b) = c.arrows[f];
        for &g in c.hom_from(b) {
            match c.comp.get(&(g, f)) {
                None => out.push(CategoryViolation::MissingComposite { g, f }),
                Some(&h) if c.arrows[h] != (a, c.arrows[g].1) => {
                    out.push(CategoryViolation::IllTypedComposite { g, f, result: h })
                }
                _ => {}
            }
        }
        if c.comp.get(&(c.ids[b], f)) != Some(&f) {
            out.push(CategoryViolation::LeftIdentity { arrow: f });
        }
        if c.comp.get(&(f, c.ids[a])) != Some(&f) {
            out.push(CategoryViolation::RightIdentity { arrow: f });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for f in 0..n {
        let b = c.arrows[f].1;
        for &g in c.hom_from(b) {
            let gf = c.comp(g, f);
            let cc = c.arrows[g].1;
            for &h in c.hom_from(cc) {
                let hg = c.comp(h, g);
                if c.comp(h, gf) != c.comp(hg, f) {
                    out.push(CategoryViolation::Associativity { h, g, f });
                }
            }
        }
    }
    out
}

impl FinCat {
    /// Arrows with source `a`.
    pub fn hom_from(&self, a: usize) -> &[usize] {
        &self.out_arrows[a]
    }
}

/// Nonempty with a single component in the underlying undirected graph.
pub fn is_connected(c: &FinCat) -> bool {
    if c.num_objects() == 0 {
        return false;
    }
    let mut uf = UnionFind::new(c.num_objects());
    for &(s, t) in c.arrows() {
        uf.union(s, t);
    }
    let r = uf.find(0);
    (1..c.num_objects()).all(|o| uf.find(o) == r)
}

/// A functor between finite categories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorData {
    pub src: Arc<FinCat>,
    pub dst: Arc<FinCat>,
    pub obj_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl FunctorData {
    pub fn new(
        src: Arc<FinCat>,
        dst: Arc<FinCat>,
        obj_map: Vec<usize>,
        arrow_map: Vec<usize>,
    ) -> Result<FunctorData> {
        let f = FunctorData {
            src,
            dst,
            obj_map,
            arrow_map,
        };
        let problems = f.violations();
        if problems.is_empty() {
            Ok(f)
        } else {
            Err(Error::Malformed(problems.join("; ")))
        }
    }

    pub fn identity(c: Arc<FinCat>) -> FunctorData {
        FunctorData {
            obj_map: (0..c.num_objects()).collect(),
            arrow_map: (0..c.num_arrows()).collect(),
            src: c.clone(),
            dst: c,
        }
    }

    /// Functor between thin categories induced by an object map; fails if the
    /// map is not monotone.
    pub fn between_thin(src: Arc<FinCat>, dst: Arc<FinCat>, obj_map: Vec<usize>) -> Result<Self> {
        let mut arrow_map = Vec::with_capacity(src.num_arrows());
        for &(a, b) in src.arrows() {
            let image = dst.hom(obj_map[a], obj_map[b]);
            match image.first() {
                Some(&k) => arrow_map.push(k),
                None => {
                    return Err(Error::Malformed(format!(
                        "object map is not monotone on {a} -> {b}"
                    )))
                }
            }
        }
        FunctorData::new(src, dst, obj_map, arrow_map)
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.obj_map.len() != self.src.num_objects()
            || self.arrow_map.len() != self.src.num_arrows()
        {
            out.push("map lengths do not match the source category".into());
            return out;
        }
        if let Some(&o) = self.obj_map.iter().find(|&&o| o >= self.dst.num_objects()) {
            out.push(format!("object image {o} out of range"));
            return out;
        }
        for (k, &(a, b)) in self.src.arrows().iter().enumerate() {
            let fk = self.arrow_map[k];
            if fk >= self.dst.num_arrows()
                || self.dst.arrow(fk) != (self.obj_map[a], self.obj_map[b])
            {
                out.push(format!("arrow {k} is not sent between the image objects"));
                return out;
            }
        }
        for o in 0..self.src.num_objects() {
            if self.arrow_map[self.src.id(o)] != self.dst.id(self.obj_map[o]) {
                out.push(format!("identity of {o} not preserved"));
            }
        }
        for f in 0..self.src.num_arrows() {
            let b = self.src.arrow(f).1;
            for &g in self.src.hom_from(b) {
                let lhs = self.arrow_map[self.src.comp(g, f)];
                let rhs = self.dst.compose(self.arrow_map[g], self.arrow_map[f]);
                if rhs != Some(lhs) {
                    out.push(format!("composite of {g} after {f} not preserved"));
                }
            }
        }
        out
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FunctorData) -> FunctorData {
        assert!(Arc::ptr_eq(&self.dst, &other.src) || *self.dst == *other.src);
        FunctorData {
            src: self.src.clone(),
            dst: other.dst.clone(),
            obj_map: self.obj_map.iter().map(|&o| other.obj_map[o]).collect(),
            arrow_map: self.arrow_map.iter().map(|&a| other.arrow_map[a]).collect(),
        }
    }

    /// The same functor between opposite categories.
    pub fn opposite(&self) -> FunctorData {
        FunctorData {
            src: Arc::new(self.src.opposite()),
            dst: Arc::new(self.dst.opposite()),
            obj_map: self.obj_map.clone(),
            arrow_map: self.arrow_map.clone(),
        }
    }
}

/// A natural transformation `source ⇒ target`, one arrow per object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTransData {
    pub source: FunctorData,
    pub target: FunctorData,
    pub components: Vec<usize>,
}

impl NatTransData {
    pub fn violations(&self) -> Vec<String> {
        let c = &self.source.src;
        let d = &self.source.dst;
        let mut out = Vec::new();
        if self.components.len() != c.num_objects() {
            out.push("wrong number of components".into());
            return out;
        }
        for o in 0..c.num_objects() {
            let k = self.components[o];
            if k >= d.num_arrows()
                || d.arrow(k) != (self.source.obj_map[o], self.target.obj_map[o])
            {
                out.push(format!("component at {o} has the wrong type"));
                return out;
            }
        }
        for (f, &(a, b)) in c.arrows().iter().enumerate() {
            let lhs = d.compose(self.target.arrow_map[f], self.components[a]);
            let rhs = d.compose(self.components[b], self.source.arrow_map[f]);
            if lhs.is_none() || lhs != rhs {
                out.push(format!("naturality square fails at arrow {f}"));
            }
        }
        out
    }

    pub fn is_natural(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn is_iso(&self) -> bool {
        let d = &self.source.dst;
        self.components.iter().all(|&k| d.is_iso(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn arrow_category() -> FinCat {
        // a -> b
        FinCat::from_preorder(&[vec![true, true], vec![false, true]]).unwrap()
    }

    #[test]
    fn one_arrow_category_is_valid() {
        let c = FinCat::discrete(1);
        assert!(validate_category(&c).is_empty());
    }

    #[test]
    fn broken_associator_is_reported() {
        // monoid {e, x} with x∘x = x, but we break associativity by a
        // three-element monoid table that is not associative:
        // elements e, a, b with a∘a = b, a∘b = a, b∘a = b, b∘b = b.
        let arrows = vec![(0, 0); 3];
        let comp = vec![(1, 1, 2), (1, 2, 1), (2, 1, 2), (2, 2, 2)];
        let c = FinCat::with_units(1, arrows, vec![0], comp).unwrap();
        let v = validate_category(&c);
        assert!(!v.is_empty());
        assert!(v
            .iter()
            .all(|x| matches!(x, CategoryViolation::Associativity { .. })));
        // a∘(a∘b) = a∘a = b, (a∘a)∘b = b∘b = b: fine; a∘(b∘a) = a∘b = a but
        // (a∘b)∘a = a∘a = b: broken.
        assert!(v.contains(&CategoryViolation::Associativity { h: 1, g: 2, f: 1 }));
    }

    #[test]
    fn poset_categories_validate() {
        let leq: Vec<Vec<bool>> = (0..4)
            .map(|i| (0..4).map(|j| i == j || (i == 0) || (j == 3)).collect())
            .collect();
        let c = FinCat::from_preorder(&leq).unwrap();
        assert!(validate_category(&c).is_empty());
        assert!(validate_category(&arrow_category()).is_empty());
    }

    #[test]
    fn connectedness_conventions() {
        assert!(!is_connected(&FinCat::discrete(0)));
        assert!(!is_connected(&FinCat::discrete(2)));
        assert!(is_connected(&arrow_category()));
    }

    #[test]
    fn json_round_trip() {
        let c = arrow_category();
        let j = serde_json::to_string(&c.to_json()).unwrap();
        let back = FinCat::from_json(serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn opposite_swaps_ends() {
        let c = arrow_category();
        let op = c.opposite();
        assert_eq!(op.hom(1, 0).len(), 1);
        assert!(validate_category(&op).is_empty());
        assert_eq!(op.opposite(), c);
    }
}
