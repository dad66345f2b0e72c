//! Presheaves of modules over finite rings.
//!
//! Rings and modules are operation tables, so every axiom is an exhaustive
//! check. The module-level colimit reuses the set-level union-find and then
//! checks that the module operations descend to it.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::{all_maps, FinSet};
use crate::locconst::LocConstMap;
use crate::presheaf::{
    colimit_condition_report, CounitContext, DiscretenessReport, Oracle, OracleOptions,
    ReportStats, Section, TowerPresheaf, Verdict, Witness,
};
use crate::presheaf::{section_index, TowerHomPresheaf};
use crate::smallcat::set_colimit;
use crate::tower::{Tower, TowerMap};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FinRingJson", into = "FinRingJson")]
pub struct FinRing {
    pub carrier: FinSet,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinRingJson {
    pub size: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
}

impl TryFrom<FinRingJson> for FinRing {
    type Error = Error;

    fn try_from(j: FinRingJson) -> Result<FinRing> {
        FinRing::new(j.size, j.add, j.mul, j.zero, j.one)
    }
}

impl From<FinRing> for FinRingJson {
    fn from(r: FinRing) -> Self {
        FinRingJson {
            size: r.carrier.size,
            add: r.add,
            mul: r.mul,
            zero: r.zero,
            one: r.one,
        }
    }
}

fn check_table(name: &str, t: &[Vec<usize>], rows: usize, cols: usize, cod: usize) -> Result<()> {
    if t.len() != rows || t.iter().any(|r| r.len() != cols || r.iter().any(|&v| v >= cod)) {
        return Err(Error::Malformed(format!("{name} table must be {rows}x{cols} with entries below {cod}")));
    }
    Ok(())
}

impl FinRing {
    pub fn new(size: usize, add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>, zero: usize, one: usize) -> Result<Self> {
        check_table("addition", &add, size, size, size)?;
        check_table("multiplication", &mul, size, size, size)?;
        if zero >= size || one >= size {
            return Err(Error::Malformed("zero and one must be elements".into()));
        }
        let r = FinRing {
            carrier: FinSet::new(size),
            add,
            mul,
            zero,
            one,
        };
        let v = r.violations();
        if v.is_empty() {
            Ok(r)
        } else {
            Err(Error::Malformed(v.join("; ")))
        }
    }

    /// `ℤ/n`.
    pub fn zmod(n: usize) -> Self {
        assert!(n > 0);
        let add = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let mul = (0..n).map(|a| (0..n).map(|b| (a * b) % n).collect()).collect();
        FinRing {
            carrier: FinSet::new(n),
            add,
            mul,
            zero: 0,
            one: 1 % n,
        }
    }

    pub fn size(&self) -> usize {
        self.carrier.size
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.size())
            .find(|&b| self.add[a][b] == self.zero)
            .expect("additive inverse")
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    /// Every ring axiom, checked on all tuples.
    pub fn violations(&self) -> Vec<String> {
        let n = self.size();
        let (a_, m_) = (&self.add, &self.mul);
        let mut out = Vec::new();
        for a in 0..n {
            if a_[a][self.zero] != a || a_[self.zero][a] != a {
                out.push(format!("zero is not neutral at {a}"));
            }
            if !(0..n).any(|b| a_[a][b] == self.zero) {
                out.push(format!("{a} has no additive inverse"));
            }
            if m_[a][self.one] != a || m_[self.one][a] != a {
                out.push(format!("one is not neutral at {a}"));
            }
            for b in 0..n {
                if a_[a][b] != a_[b][a] {
                    out.push(format!("addition not commutative at ({a}, {b})"));
                }
                for c in 0..n {
                    if a_[a_[a][b]][c] != a_[a][a_[b][c]] {
                        out.push(format!("addition not associative at ({a}, {b}, {c})"));
                    }
                    if m_[m_[a][b]][c] != m_[a][m_[b][c]] {
                        out.push(format!("multiplication not associative at ({a}, {b}, {c})"));
                    }
                    if m_[a][a_[b][c]] != a_[m_[a][b]][m_[a][c]] || m_[a_[a][b]][c] != a_[m_[a][c]][m_[b][c]] {
                        out.push(format!("distributivity fails at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        out
    }
}

/// A left module; `act[r][m]` is `r · m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinModule {
    pub ring: FinRing,
    pub carrier: FinSet,
    pub add: Vec<Vec<usize>>,
    pub act: Vec<Vec<usize>>,
    pub zero: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinModuleJson {
    pub size: usize,
    pub add: Vec<Vec<usize>>,
    pub act: Vec<Vec<usize>>,
    pub zero: usize,
}

impl FinModule {
    pub fn new(ring: FinRing, size: usize, add: Vec<Vec<usize>>, act: Vec<Vec<usize>>, zero: usize) -> Result<Self> {
        check_table("addition", &add, size, size, size)?;
        check_table("action", &act, ring.size(), size, size)?;
        if zero >= size {
            return Err(Error::Malformed("zero must be an element".into()));
        }
        let m = FinModule {
            ring,
            carrier: FinSet::new(size),
            add,
            act,
            zero,
        };
        let v = m.violations();
        if v.is_empty() {
            Ok(m)
        } else {
            Err(Error::Malformed(v.join("; ")))
        }
    }

    pub fn from_json(ring: FinRing, j: FinModuleJson) -> Result<Self> {
        FinModule::new(ring, j.size, j.add, j.act, j.zero)
    }

    pub fn to_json(&self) -> FinModuleJson {
        FinModuleJson {
            size: self.size(),
            add: self.add.clone(),
            act: self.act.clone(),
            zero: self.zero,
        }
    }

    /// The ring acting on itself.
    pub fn regular(ring: FinRing) -> Self {
        FinModule {
            carrier: ring.carrier.clone(),
            add: ring.add.clone(),
            act: ring.mul.clone(),
            zero: ring.zero,
            ring,
        }
    }

    pub fn zero_module(ring: FinRing) -> Self {
        FinModule {
            carrier: FinSet::new(1),
            add: vec![vec![0]],
            act: vec![vec![0]; ring.size()],
            zero: 0,
            ring,
        }
    }

    /// `R^k`, with tuples encoded in base `|R|`, first coordinate most significant.
    pub fn power(ring: FinRing, k: usize) -> Self {
        let n = ring.size();
        let size = n.pow(k as u32);
        let digits = |mut x: usize| {
            let mut d = vec![0; k];
            for slot in d.iter_mut().rev() {
                *slot = x % n;
                x /= n;
            }
            d
        };
        let encode = |d: &[usize]| d.iter().fold(0, |acc, &v| acc * n + v);
        let add = (0..size)
            .map(|a| {
                (0..size)
                    .map(|b| {
                        let (da, db) = (digits(a), digits(b));
                        let s: Vec<usize> = da.iter().zip(&db).map(|(&x, &y)| ring.add[x][y]).collect();
                        encode(&s)
                    })
                    .collect()
            })
            .collect();
        let act = (0..n)
            .map(|r| {
                (0..size)
                    .map(|a| encode(&digits(a).iter().map(|&x| ring.mul[r][x]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        let zero = encode(&vec![ring.zero; k]);
        FinModule {
            ring,
            carrier: FinSet::new(size),
            add,
            act,
            zero,
        }
    }

    pub fn size(&self) -> usize {
        self.carrier.size
    }

    pub fn violations(&self) -> Vec<String> {
        let n = self.size();
        let r = &self.ring;
        let mut out = Vec::new();
        for a in 0..n {
            if self.add[a][self.zero] != a {
                out.push(format!("zero is not neutral at {a}"));
            }
            if !(0..n).any(|b| self.add[a][b] == self.zero) {
                out.push(format!("{a} has no additive inverse"));
            }
            if self.act[r.one][a] != a {
                out.push(format!("one does not act trivially on {a}"));
            }
            for b in 0..n {
                if self.add[a][b] != self.add[b][a] {
                    out.push(format!("addition not commutative at ({a}, {b})"));
                }
                for c in 0..n {
                    if self.add[self.add[a][b]][c] != self.add[a][self.add[b][c]] {
                        out.push(format!("addition not associative at ({a}, {b}, {c})"));
                    }
                }
                for s in 0..r.size() {
                    if self.act[s][self.add[a][b]] != self.add[self.act[s][a]][self.act[s][b]] {
                        out.push(format!("action of {s} not additive at ({a}, {b})"));
                    }
                }
            }
            for s in 0..r.size() {
                for t in 0..r.size() {
                    if self.act[r.add[s][t]][a] != self.add[self.act[s][a]][self.act[t][a]] {
                        out.push(format!("action not additive in scalars at ({s}, {t}, {a})"));
                    }
                    if self.act[r.mul[s][t]][a] != self.act[s][self.act[t][a]] {
                        out.push(format!("action not associative at ({s}, {t}, {a})"));
                    }
                }
            }
        }
        out
    }
}

/// A tower presheaf whose sections form modules and whose restrictions are
/// linear.
pub trait ModuleTowerPresheaf: TowerPresheaf {
    fn ring(&self) -> &FinRing;
    fn add(&self, t: &Tower, a: &Section, b: &Section) -> Section;
    fn scale(&self, t: &Tower, r: usize, a: &Section) -> Section;
    fn zero(&self, t: &Tower) -> Section;
}

/// The underlying presheaf of sets.
pub struct Forgotten<'a>(pub &'a dyn ModuleTowerPresheaf);

impl TowerPresheaf for Forgotten<'_> {
    fn name(&self) -> String {
        self.0.name()
    }

    fn sections(&self, t: &Tower, budget: usize) -> Result<Vec<Section>> {
        self.0.sections(t, budget)
    }

    fn restrict(&self, g: &TowerMap, x: &Section) -> Section {
        self.0.restrict(g, x)
    }

    fn contains(&self, t: &Tower, x: &Section) -> bool {
        self.0.contains(t, x)
    }

    fn preferred_witness(&self, t: &Tower) -> Option<Section> {
        self.0.preferred_witness(t)
    }

    fn describe(&self, t: &Tower, x: &Section) -> String {
        self.0.describe(t, x)
    }

    fn glue(&self, t: &Tower, pieces: &[(&TowerMap, &Section)]) -> Option<Section> {
        self.0.glue(t, pieces)
    }
}

pub fn forget_presheaf(xm: &dyn ModuleTowerPresheaf) -> Forgotten<'_> {
    Forgotten(xm)
}

/// Locally constant maps into a module, with pointwise operations.
#[derive(Debug, Clone)]
pub struct LocConstModule {
    pub module: FinModule,
}

pub fn locconst_module(m: FinModule) -> LocConstModule {
    LocConstModule { module: m }
}

impl TowerPresheaf for LocConstModule {
    fn name(&self) -> String {
        format!("locconst-mod:{}", self.module.size())
    }

    fn sections(&self, t: &Tower, budget: usize) -> Result<Vec<Section>> {
        crate::presheaf::LocConstPresheaf { k: self.module.size() }.sections(t, budget)
    }

    fn restrict(&self, g: &TowerMap, x: &Section) -> Section {
        (0..g.src.top_size()).map(|i| x[g.apply(i)]).collect()
    }

    fn contains(&self, t: &Tower, x: &Section) -> bool {
        x.len() == t.top_size() && x.iter().all(|&v| v < self.module.size())
    }

    fn glue(&self, t: &Tower, pieces: &[(&TowerMap, &Section)]) -> Option<Section> {
        crate::presheaf::glue_tables(t, pieces)
    }
}

impl ModuleTowerPresheaf for LocConstModule {
    fn ring(&self) -> &FinRing {
        &self.module.ring
    }

    fn add(&self, _t: &Tower, a: &Section, b: &Section) -> Section {
        a.iter().zip(b).map(|(&x, &y)| self.module.add[x][y]).collect()
    }

    fn scale(&self, _t: &Tower, r: usize, a: &Section) -> Section {
        a.iter().map(|&x| self.module.act[r][x]).collect()
    }

    fn zero(&self, t: &Tower) -> Section {
        vec![self.module.zero; t.top_size()]
    }
}

/// Depth-aligned maps into the Cantor tower, seen as the groups
/// `(ℤ/2)^n` with the last coordinate forgotten by each transition.
/// Addition is pointwise XOR of thread tables.
#[derive(Debug, Clone)]
pub struct CantorHomModule {
    inner: TowerHomPresheaf,
    ring: FinRing,
}

impl CantorHomModule {
    pub fn new() -> Self {
        CantorHomModule {
            inner: TowerHomPresheaf::cantor(),
            ring: FinRing::zmod(2),
        }
    }
}

impl Default for CantorHomModule {
    fn default() -> Self {
        Self::new()
    }
}

impl TowerPresheaf for CantorHomModule {
    fn name(&self) -> String {
        "towerhom-mod:cantor".into()
    }

    fn sections(&self, t: &Tower, budget: usize) -> Result<Vec<Section>> {
        self.inner.sections(t, budget)
    }

    fn restrict(&self, g: &TowerMap, x: &Section) -> Section {
        self.inner.restrict(g, x)
    }

    fn contains(&self, t: &Tower, x: &Section) -> bool {
        self.inner.contains(t, x)
    }

    fn preferred_witness(&self, t: &Tower) -> Option<Section> {
        self.inner.preferred_witness(t)
    }

    fn describe(&self, t: &Tower, x: &Section) -> String {
        self.inner.describe(t, x)
    }
}

impl ModuleTowerPresheaf for CantorHomModule {
    fn ring(&self) -> &FinRing {
        &self.ring
    }

    fn add(&self, _t: &Tower, a: &Section, b: &Section) -> Section {
        a.iter().zip(b).map(|(&x, &y)| x ^ y).collect()
    }

    fn scale(&self, t: &Tower, r: usize, a: &Section) -> Section {
        if r == 0 {
            self.zero(t)
        } else {
            a.clone()
        }
    }

    fn zero(&self, t: &Tower) -> Section {
        vec![0; t.top_size()]
    }
}

/// Gluing locally constant maps into `M` is additive, scalar-equivariant
/// and bijective at `S`, checked on all pairs.
pub fn check_counit_linearity(m: &FinModule, s: &Tower, budget: usize) -> Result<bool> {
    let xm = locconst_module(m.clone());
    let x = forget_presheaf(&xm);
    let ctx = CounitContext::new(&x, s, budget)?;
    let sections = ctx.sections.as_ref().ok_or(Error::BoundExceeded {
        what: "sections",
        size: budget.saturating_add(1),
        bound: budget,
    })?;
    // element v of X(point) is the constant table [v]
    let u = ctx.points.len();
    let value = |v: usize| ctx.points[v][0];
    let index_of = |e: usize| ctx.points.iter().position(|p| p[0] == e).expect("module element");
    let maps = crate::presheaf::LocConstPresheaf { k: u }.sections(s, budget)?;
    let glue = |vals: &[usize]| -> Result<Section> {
        ctx.counit(&LocConstMap::from_threads(s.clone(), FinSet::new(u), vals.to_vec())?)
    };
    let glued = maps.iter().map(|f| glue(f)).collect::<Result<Vec<_>>>()?;
    let mut image: Vec<&Section> = glued.iter().collect();
    image.sort();
    image.dedup();
    if image.len() != glued.len() || glued.len() != sections.len() {
        return Ok(false);
    }
    for (i, f) in maps.iter().enumerate() {
        for r in 0..m.ring.size() {
            let rf: Vec<usize> = f.iter().map(|&v| index_of(m.act[r][value(v)])).collect();
            if glue(&rf)? != xm.scale(s, r, &glued[i]) {
                return Ok(false);
            }
        }
        for (j, g) in maps.iter().enumerate() {
            let sum: Vec<usize> = f
                .iter()
                .zip(g)
                .map(|(&a, &b)| index_of(m.add[value(a)][value(b)]))
                .collect();
            if glue(&sum)? != xm.add(s, &glued[i], &glued[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDiscretenessReport {
    pub module: DiscretenessReport,
    pub set: DiscretenessReport,
    pub consistent: bool,
}

/// Pairs checked per index object when testing that the module operations
/// descend to the colimit.
const DESCENT_SAMPLE: usize = 48;

/// The colimit condition for `xm` computed twice: as modules, judging
/// injectivity by the kernel, and for the underlying presheaf of sets.
pub fn module_discreteness_report(
    xm: &dyn ModuleTowerPresheaf,
    t: &Tower,
    opts: &OracleOptions,
) -> Result<ModuleDiscretenessReport> {
    let x = forget_presheaf(xm);
    let set = colimit_condition_report(&x, t, opts)?;
    let module = module_colimit_report(xm, t, opts)?;
    Ok(ModuleDiscretenessReport {
        consistent: module.verdict == set.verdict,
        module,
        set,
    })
}

fn module_colimit_report(
    xm: &dyn ModuleTowerPresheaf,
    t: &Tower,
    opts: &OracleOptions,
) -> Result<DiscretenessReport> {
    use crate::presheaf::oracles::{colimit_index, finite_stage_diagram};
    let x = forget_presheaf(xm);
    let at = Arc::new(t.clone());
    let (parts, index, kind) = colimit_index(&at, opts.poset_bound)?;
    let mut stats = ReportStats {
        tower: t.name().to_string(),
        depth: t.depth(),
        index: format!("{kind}/linear"),
        index_objects: parts.len(),
        generators: 0,
        source_size: 0,
        target_size: 0,
        hit: 0,
        collapsed: 0,
        exhausted_budget: None,
    };
    let mut report = DiscretenessReport {
        oracle: Oracle::Colimit,
        presheaf: format!("{} (modules)", xm.name()),
        depth: t.depth(),
        verdict: Verdict::Inconclusive,
        witness: None,
        stats: Vec::new(),
    };
    let fs = match finite_stage_diagram(&x, t, &parts, &index, opts.budget) {
        Ok(fs) => fs,
        Err(Error::BoundExceeded { .. }) => {
            stats.exhausted_budget = Some(opts.budget);
            report.stats.push(stats);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    stats.generators = fs.values.iter().map(Vec::len).sum();
    let colim = set_colimit(&fs.diagram);
    let n = colim.apex.size;
    stats.source_size = n;

    // the finest quotient receives every class
    let finest = parts
        .iter()
        .position(|p| p.num_blocks() == t.top_size())
        .expect("the thread partition indexes the colimit");
    let fin_tower = Tower::finite(parts[finest].num_blocks());
    let mut rep = vec![usize::MAX; n];
    for (e, _) in fs.values[finest].iter().enumerate() {
        let c = colim.coprojections[finest].apply(e);
        if rep[c] == usize::MAX {
            rep[c] = e;
        }
    }
    if rep.contains(&usize::MAX) {
        return Err(Error::Malformed("a colimit class is missing at the finest stage".into()));
    }
    let class_at = |q: usize, s: &Section| -> usize {
        colim.coprojections[q].apply(section_index(&fs.values[q], s).expect("operation stays in sections"))
    };
    let fin_vals = &fs.values[finest];
    let add_class = |a: usize, b: usize| {
        class_at(finest, &xm.add(&fin_tower, &fin_vals[rep[a]], &fin_vals[rep[b]]))
    };
    let scale_class = |r: usize, a: usize| class_at(finest, &xm.scale(&fin_tower, r, &fin_vals[rep[a]]));

    // operations descend: checked on a deterministic sample of each stage
    for (q, vals) in fs.values.iter().enumerate() {
        let ft = Tower::finite(parts[q].num_blocks());
        let sample = &vals[..vals.len().min(DESCENT_SAMPLE)];
        for a in sample {
            let ca = class_at(q, a);
            for r in 0..xm.ring().size() {
                if class_at(q, &xm.scale(&ft, r, a)) != scale_class(r, ca) {
                    return Err(Error::NotLinear(format!("scalar action does not descend at stage {q}")));
                }
            }
            for b in sample {
                if class_at(q, &xm.add(&ft, a, b)) != add_class(ca, class_at(q, b)) {
                    return Err(Error::NotLinear(format!("addition does not descend at stage {q}")));
                }
            }
        }
    }

    let image: Vec<Section> = (0..n)
        .map(|c| x.restrict(&fs.to_s[finest], &fin_vals[rep[c]]))
        .collect();
    // the comparison map must be linear
    let sample: Vec<usize> = (0..n.min(DESCENT_SAMPLE)).collect();
    for &a in &sample {
        for &b in &sample {
            if image[add_class(a, b)] != xm.add(t, &image[a], &image[b]) {
                return Err(Error::NotLinear("comparison map is not additive".into()));
            }
        }
    }
    let zero = xm.zero(t);
    let kernel: Vec<usize> = (0..n).filter(|&c| image[c] == zero).collect();
    let image_size = n / kernel.len().max(1);
    stats.hit = image_size;
    stats.collapsed = kernel.len().saturating_sub(1);
    let targets = match x.sections(t, opts.budget) {
        Ok(s) => {
            stats.target_size = s.len();
            Some(s)
        }
        Err(Error::BoundExceeded { .. }) => {
            stats.exhausted_budget = Some(opts.budget);
            None
        }
        Err(e) => return Err(e),
    };
    let in_image: HashSet<&Section> = image.iter().collect();
    let missing = xm
        .preferred_witness(t)
        .filter(|w| x.contains(t, w) && !in_image.contains(w))
        .or_else(|| match &targets {
            Some(all) if all.len() != image_size => {
                all.iter().find(|s| !in_image.contains(s)).cloned()
            }
            _ => None,
        });
    let (verdict, witness) = if let Some(s) = missing {
        (
            Verdict::Fail,
            Some(Witness {
                kind: crate::presheaf::WitnessKind::NotHit,
                tower: t.clone(),
                description: x.describe(t, &s),
                sections: vec![s],
            }),
        )
    } else if kernel.len() > 1 {
        let c = kernel.iter().copied().find(|&c| c != class_at(finest, &xm.zero(&fin_tower))).expect("nonzero kernel class");
        (
            Verdict::Fail,
            Some(Witness {
                kind: crate::presheaf::WitnessKind::Collapsed,
                tower: t.clone(),
                sections: vec![fin_vals[rep[c]].clone(), zero.clone()],
                description: "nonzero element of the colimit maps to zero".into(),
            }),
        )
    } else if targets.is_none() {
        (Verdict::Inconclusive, None)
    } else {
        (Verdict::Pass, None)
    };
    report.verdict = verdict;
    report.witness = witness;
    report.stats.push(stats);
    Ok(report)
}

/// A morphism of module presheaves, given by its components.
pub trait ModuleMorphism {
    fn source(&self) -> &dyn ModuleTowerPresheaf;
    fn target(&self) -> &dyn ModuleTowerPresheaf;
    fn component(&self, t: &Tower, x: &Section) -> Section;
}

/// Multiplication by a central scalar on a module presheaf.
pub struct ScalarMultiplication<'a> {
    pub presheaf: &'a dyn ModuleTowerPresheaf,
    pub scalar: usize,
}

impl ModuleMorphism for ScalarMultiplication<'_> {
    fn source(&self) -> &dyn ModuleTowerPresheaf {
        self.presheaf
    }

    fn target(&self) -> &dyn ModuleTowerPresheaf {
        self.presheaf
    }

    fn component(&self, t: &Tower, x: &Section) -> Section {
        self.presheaf.scale(t, self.scalar, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoReflection {
    pub module_iso: bool,
    pub set_iso: bool,
}

impl IsoReflection {
    pub fn consistent(&self) -> bool {
        self.module_iso == self.set_iso
    }
}

/// Whether `g` is an isomorphism of module presheaves and whether its
/// underlying map of presheaves of sets is, on the given towers.
pub fn iso_reflection_check(
    g: &dyn ModuleMorphism,
    towers: &[Tower],
    budget: usize,
) -> Result<IsoReflection> {
    let (src, dst) = (g.source(), g.target());
    let mut module_iso = true;
    let mut set_iso = true;
    for t in towers {
        let xs = src.sections(t, budget)?;
        let ys = dst.sections(t, budget)?;
        let image: Vec<Section> = xs.iter().map(|s| g.component(t, s)).collect();
        for (i, a) in xs.iter().enumerate() {
            for r in 0..src.ring().size() {
                if g.component(t, &src.scale(t, r, a)) != dst.scale(t, r, &image[i]) {
                    return Err(Error::NotLinear(format!("component at {} does not commute with scalar {r}", t.name())));
                }
            }
            for (j, b) in xs.iter().enumerate() {
                if g.component(t, &src.add(t, a, b)) != dst.add(t, &image[i], &image[j]) {
                    return Err(Error::NotLinear(format!("component at {} is not additive", t.name())));
                }
            }
        }
        // underlying sets: a plain bijection check
        let distinct: HashSet<&Section> = image.iter().collect();
        let bijective = distinct.len() == xs.len() && xs.len() == ys.len();
        set_iso &= bijective;
        // modules: trivial kernel and full image size, then the inverse is
        // checked to be additive
        let zero = dst.zero(t);
        let kernel = image.iter().filter(|s| **s == zero).count();
        let inverse: HashMap<&Section, usize> = image.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut iso = kernel == 1 && xs.len() == ys.len();
        if iso {
            'outer: for a in &ys {
                for b in &ys {
                    let s = dst.add(t, a, b);
                    let (ia, ib, is) = (inverse[a], inverse[b], inverse[&s]);
                    if src.add(t, &xs[ia], &xs[ib]) != xs[is] {
                        iso = false;
                        break 'outer;
                    }
                }
            }
        }
        module_iso &= iso;
    }
    Ok(IsoReflection { module_iso, set_iso })
}

/// Naturality of `m ↦ (constant map at m)` along module maps `M -> N`,
/// checked against the counit at `s`.
pub fn unit_counit_natural_in_module(
    m: &FinModule,
    n: &FinModule,
    s: &Tower,
    budget: usize,
) -> Result<bool> {
    let xm = locconst_module(m.clone());
    let xn = locconst_module(n.clone());
    let (fm, fnn) = (forget_presheaf(&xm), forget_presheaf(&xn));
    let cm = CounitContext::new(&fm, s, budget)?;
    let cn = CounitContext::new(&fnn, s, budget)?;
    for u in all_maps(m.size(), n.size()) {
        let linear = (0..m.size()).all(|a| {
            (0..m.size()).all(|b| u.apply(m.add[a][b]) == n.add[u.apply(a)][u.apply(b)])
                && (0..m.ring.size()).all(|r| u.apply(m.act[r][a]) == n.act[r][u.apply(a)])
        });
        if !linear {
            continue;
        }
        for v in 0..m.size() {
            let f = LocConstMap::constant(s.clone(), FinSet::new(m.size()), v)?;
            let left: Section = cm.counit(&f)?.iter().map(|&e| u.apply(e)).collect();
            let right = cn.counit(&f.postcompose(&u))?;
            if left != right {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{standard_tower, StandardTower};

    fn cantor(d: usize) -> Tower {
        standard_tower(StandardTower::Cantor, d)
    }

    #[test]
    fn rings_and_modules() {
        for n in 1..6 {
            assert!(FinRing::zmod(n).violations().is_empty());
            assert!(FinModule::regular(FinRing::zmod(n)).violations().is_empty());
        }
        assert!(FinModule::power(FinRing::zmod(2), 2).violations().is_empty());
        assert!(FinModule::zero_module(FinRing::zmod(4)).violations().is_empty());
        let bad = FinRing::new(2, vec![vec![0, 1], vec![1, 1]], vec![vec![0, 0], vec![0, 1]], 0, 1);
        assert!(bad.is_err());
    }

    #[test]
    fn locconst_module_values() {
        let xm = locconst_module(FinModule::regular(FinRing::zmod(2)));
        assert_eq!(xm.sections(&Tower::point(), 100).unwrap().len(), 2);
        assert_eq!(xm.sections(&cantor(1), 100).unwrap().len(), 4);
    }

    #[test]
    fn counit_is_linear() {
        let z2 = FinModule::regular(FinRing::zmod(2));
        for d in 0..=2 {
            assert!(check_counit_linearity(&z2, &cantor(d), 1000).unwrap());
        }
        let z4 = FinModule::regular(FinRing::zmod(4));
        let ec = standard_tower(StandardTower::EventuallyConstant(2), 2);
        assert!(check_counit_linearity(&z4, &ec, 1000).unwrap());
    }

    #[test]
    fn module_discreteness_on_examples() {
        let opts = OracleOptions::default();
        let xm = locconst_module(FinModule::regular(FinRing::zmod(2)));
        let r = module_discreteness_report(&xm, &cantor(2), &opts).unwrap();
        assert!(r.consistent);
        assert_eq!(r.module.verdict, Verdict::Pass);
        let h = CantorHomModule::new();
        let r = module_discreteness_report(&h, &cantor(2), &opts).unwrap();
        assert!(r.consistent);
        assert_eq!(r.module.verdict, Verdict::Fail);
        assert_eq!(r.module.witness.unwrap().description, "identity tower map");
        let zero = locconst_module(FinModule::zero_module(FinRing::zmod(2)));
        let r = module_discreteness_report(&zero, &cantor(2), &opts).unwrap();
        assert!(r.consistent);
        assert_eq!(r.set.verdict, Verdict::Pass);
    }

    #[test]
    fn scalar_isos() {
        let xm = locconst_module(FinModule::regular(FinRing::zmod(4)));
        let towers = [Tower::point(), cantor(1)];
        let two = iso_reflection_check(&ScalarMultiplication { presheaf: &xm, scalar: 2 }, &towers, 1000).unwrap();
        assert_eq!((two.module_iso, two.set_iso), (false, false));
        let three = iso_reflection_check(&ScalarMultiplication { presheaf: &xm, scalar: 3 }, &towers, 1000).unwrap();
        assert_eq!((three.module_iso, three.set_iso), (true, true));
    }

    #[test]
    fn naturality_in_module() {
        let z2 = FinModule::regular(FinRing::zmod(2));
        let z2sq = FinModule::power(FinRing::zmod(2), 2);
        assert!(unit_counit_natural_in_module(&z2, &z2sq, &cantor(1), 1000).unwrap());
    }
}
