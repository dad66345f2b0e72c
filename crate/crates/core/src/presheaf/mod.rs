//! Presheaves on towers and the discreteness oracles.
//!
//! A [`TowerPresheaf`] assigns to each tower an enumerable set of sections
//! and to each tower map a restriction. Sections are plain `Vec<usize>`
//! values; each presheaf fixes its own encoding.

mod adjunction;
mod kan;
pub(crate) mod oracles;

pub use adjunction::{
    check_counit_natural_in_s, check_counit_natural_in_x, check_equalizer,
    check_product_preservation, check_triangle_first, check_triangle_second, counit_component,
    finite_level_comparison, underlying, unit_component, CounitContext, PresheafMorphism,
    ProductReport, TargetMap,
};
pub use kan::{kan_comparison, KanReport, DEFAULT_KAN_BOUND};
pub use oracles::{
    colimit_condition_report, counit_iso_report, DiscretenessReport, Oracle, OracleOptions,
    ReportStats, Verdict, Witness, WitnessKind,
};

use crate::error::{Error, Result};
use crate::finset::all_maps;
use crate::tower::{standard_tower, StandardTower, Tower, TowerMap};

pub type Section = Vec<usize>;

/// Default cap on the number of sections enumerated at one tower.
pub const DEFAULT_SECTION_BUDGET: usize = 10_000;

pub trait TowerPresheaf: Send + Sync {
    fn name(&self) -> String;

    /// All sections at `t` in increasing lexicographic order, or
    /// `BoundExceeded` when there are more than `budget`.
    fn sections(&self, t: &Tower, budget: usize) -> Result<Vec<Section>>;

    /// `X(g)`: sections over `g.dst` to sections over `g.src`.
    fn restrict(&self, g: &TowerMap, x: &Section) -> Section;

    /// Membership test; the default enumerates.
    fn contains(&self, t: &Tower, x: &Section) -> bool {
        self.sections(t, usize::MAX)
            .map(|s| s.binary_search(x).is_ok())
            .unwrap_or(false)
    }

    /// Direct gluing of sections over the pieces of a decomposition of `t`,
    /// each given with its inclusion. Used when `X(t)` is too large to
    /// search; the result is checked by the caller.
    fn glue(&self, _t: &Tower, _pieces: &[(&TowerMap, &Section)]) -> Option<Section> {
        None
    }

    /// A section worth reporting first when it turns out to be a witness.
    fn preferred_witness(&self, _t: &Tower) -> Option<Section> {
        None
    }

    /// Short human-readable description of a section.
    fn describe(&self, _t: &Tower, x: &Section) -> String {
        format!("{x:?}")
    }
}

/// Gluing for presheaves whose sections are tables on threads.
pub(crate) fn glue_tables(t: &Tower, pieces: &[(&TowerMap, &Section)]) -> Option<Section> {
    let mut out = vec![usize::MAX; t.top_size()];
    for (inc, sec) in pieces {
        for (i, &v) in sec.iter().enumerate() {
            out[inc.apply(i)] = v;
        }
    }
    (!out.contains(&usize::MAX)).then_some(out)
}

/// Position of `x` in a sorted section list.
pub fn section_index(sections: &[Section], x: &Section) -> Option<usize> {
    sections.binary_search(x).ok()
}

fn tables(dom: usize, cod: usize, budget: usize) -> Result<Vec<Section>> {
    let size = if dom == 0 {
        Some(1)
    } else {
        cod.checked_pow(dom as u32)
    };
    match size {
        Some(s) if s <= budget => Ok(all_maps(dom, cod).map(|m| m.table).collect()),
        _ => Err(Error::BoundExceeded {
            what: "sections",
            size: size.unwrap_or(usize::MAX),
            bound: budget,
        }),
    }
}

/// Locally constant maps into a `k`-element set. A section is the table of
/// values on the threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocConstPresheaf {
    pub k: usize,
}

impl TowerPresheaf for LocConstPresheaf {
    fn name(&self) -> String {
        format!("locconst:{}", self.k)
    }

    fn sections(&self, t: &Tower, budget: usize) -> Result<Vec<Section>> {
        tables(t.top_size(), self.k, budget)
    }

    fn restrict(&self, g: &TowerMap, x: &Section) -> Section {
        (0..g.src.top_size()).map(|i| x[g.apply(i)]).collect()
    }

    fn glue(&self, t: &Tower, pieces: &[(&TowerMap, &Section)]) -> Option<Section> {
        glue_tables(t, pieces)
    }

    fn contains(&self, t: &Tower, x: &Section) -> bool {
        x.len() == t.top_size() && x.iter().all(|&v| v < self.k)
    }
}

/// The constant presheaf: `Y` everywhere, identities as restrictions.
/// Not product-preserving once `|Y| > 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantPresheafNaive {
    pub k: usize,
}

impl TowerPresheaf for ConstantPresheafNaive {
    fn name(&self) -> String {
        format!("const:{}", self.k)
    }

    fn sections(&self, _t: &Tower, budget: usize) -> Result<Vec<Section>> {
        if self.k > budget {
            return Err(Error::BoundExceeded {
                what: "sections",
                size: self.k,
                bound: budget,
            });
        }
        Ok((0..self.k).map(|y| vec![y]).collect())
    }

    fn restrict(&self, _g: &TowerMap, x: &Section) -> Section {
        x.clone()
    }
}

/// Like [`LocConstPresheaf`] but only constant tables survive, so value sets
/// are too small for products. Used to exercise failure paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantTables {
    pub k: usize,
}

impl TowerPresheaf for ConstantTables {
    fn name(&self) -> String {
        format!("broken:{}", self.k)
    }

    fn sections(&self, t: &Tower, budget: usize) -> Result<Vec<Section>> {
        if self.k > budget {
            return Err(Error::BoundExceeded {
                what: "sections",
                size: self.k,
                bound: budget,
            });
        }
        Ok((0..self.k).map(|y| vec![y; t.top_size()]).collect())
    }

    fn restrict(&self, g: &TowerMap, x: &Section) -> Section {
        (0..g.src.top_size()).map(|i| x[g.apply(i)]).collect()
    }
}

/// Target of a [`TowerHomPresheaf`], realised at whatever depth is needed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerSource {
    Standard(StandardTower),
    /// Truncated, or continued by identities, to the requested depth.
    Custom(Tower),
}

impl TowerSource {
    pub fn at_depth(&self, d: usize) -> Tower {
        match self {
            TowerSource::Standard(k) => standard_tower(*k, d),
            TowerSource::Custom(t) => t.at_depth(d),
        }
    }

    pub fn name(&self) -> String {
        match self {
            TowerSource::Standard(StandardTower::Cantor) => "cantor".into(),
            TowerSource::Standard(StandardTower::Point) => "point".into(),
            TowerSource::Standard(StandardTower::EventuallyConstant(k)) => {
                format!("eventually_constant:{k}")
            }
            TowerSource::Custom(t) => t.name().to_string(),
        }
    }
}

/// Depth-aligned maps into a tower `M`: at a tower `T` of depth `D`, the
/// maps `T_D -> M_D` whose level-`n` coordinate only depends on level `n`
/// of `T`. A section is the table of the top-level map.
///
/// Restriction along `g` keeps the levels on which `h ∘ g` is still aligned
/// and continues upward with the least-preimage sections of `M`. A finite
/// set is a depth-zero tower, so it only sees `M_0`; for rooted `M` this
/// makes every finite stage a singleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerHomPresheaf {
    pub target: TowerSource,
}

impl TowerHomPresheaf {
    pub fn cantor() -> Self {
        TowerHomPresheaf {
            target: TowerSource::Standard(StandardTower::Cantor),
        }
    }

    fn is_identity_at(&self, t: &Tower, x: &Section) -> bool {
        self.target.at_depth(t.depth()) == *t && x.iter().enumerate().all(|(i, &v)| i == v)
    }
}

impl TowerPresheaf for TowerHomPresheaf {
    fn name(&self) -> String {
        format!("towerhom:{}", self.target.name())
    }

    fn sections(&self, t: &Tower, budget: usize) -> Result<Vec<Section>> {
        let m = self.target.at_depth(t.depth());
        let mut out = Vec::new();
        let mut levels: Vec<Vec<usize>> = vec![Vec::new(); t.depth() + 1];
        let bottom = tables(t.level_size(0), m.level_size(0), budget)?;
        for h0 in bottom {
            levels[0] = h0;
            extend_aligned(t, &m, 1, &mut levels, &mut out, budget)?;
        }
        out.sort();
        Ok(out)
    }

    fn restrict(&self, g: &TowerMap, x: &Section) -> Section {
        let (d_src, d_dst) = (g.src.depth(), g.dst.depth());
        let m = self.target.at_depth(d_src.max(d_dst));
        let composite: Vec<usize> = (0..g.src.top_size()).map(|i| x[g.apply(i)]).collect();
        // `composite` lands in M at depth d_dst
        let to_m = |v: usize, n: usize| m.transition_between(d_dst, n).apply(v);
        let mut k = 0;
        for n in 1..=d_src.min(d_dst) {
            let mut seen = vec![usize::MAX; g.src.level_size(n)];
            let aligned = (0..g.src.top_size()).all(|i| {
                let key = g.src.coord(i, n);
                let v = to_m(composite[i], n);
                if seen[key] == usize::MAX {
                    seen[key] = v;
                }
                seen[key] == v
            });
            if !aligned {
                break;
            }
            k = n;
        }
        let up: Vec<Vec<usize>> = (k..d_src).map(|n| m.least_section(n)).collect();
        composite
            .into_iter()
            .map(|v| up.iter().fold(to_m(v, k), |acc, s| s[acc]))
            .collect()
    }

    fn contains(&self, t: &Tower, x: &Section) -> bool {
        let m = self.target.at_depth(t.depth());
        if x.len() != t.top_size() || x.iter().any(|&v| v >= m.top_size()) {
            return false;
        }
        (0..=t.depth()).all(|n| {
            let mut seen = vec![usize::MAX; t.level_size(n)];
            (0..t.top_size()).all(|i| {
                let key = t.coord(i, n);
                let v = m.coord(x[i], n);
                if seen[key] == usize::MAX {
                    seen[key] = v;
                }
                seen[key] == v
            })
        })
    }

    fn preferred_witness(&self, t: &Tower) -> Option<Section> {
        let id: Section = (0..t.top_size()).collect();
        self.is_identity_at(t, &id).then_some(id)
    }

    fn describe(&self, t: &Tower, x: &Section) -> String {
        if self.is_identity_at(t, x) {
            "identity tower map".into()
        } else {
            format!("tower map with thread table {x:?}")
        }
    }
}

fn extend_aligned(
    t: &Tower,
    m: &Tower,
    n: usize,
    levels: &mut Vec<Vec<usize>>,
    out: &mut Vec<Section>,
    budget: usize,
) -> Result<()> {
    if n > t.depth() {
        if out.len() == budget {
            return Err(Error::BoundExceeded {
                what: "sections",
                size: budget + 1,
                bound: budget,
            });
        }
        out.push(levels[t.depth()].clone());
        return Ok(());
    }
    let mt = m.transition(n - 1);
    let mut preimages: Vec<Vec<usize>> = vec![Vec::new(); mt.cod];
    for (a, &b) in mt.table.iter().enumerate() {
        preimages[b].push(a);
    }
    let tt = t.transition(n - 1);
    let choices: Vec<Vec<usize>> = (0..t.level_size(n))
        .map(|a| preimages[levels[n - 1][tt.apply(a)]].clone())
        .collect();
    if choices.iter().any(Vec::is_empty) {
        return Ok(());
    }
    let mut pick = vec![0usize; choices.len()];
    loop {
        levels[n] = pick.iter().zip(&choices).map(|(&p, c)| c[p]).collect();
        extend_aligned(t, m, n + 1, levels, out, budget)?;
        // odometer, last slot fastest
        let mut i = pick.len();
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// Presheaf named by a string: `locconst:k`, `const:k`, `broken:k`,
/// `towerhom:<tower>` where `<tower>` is a built-in name.
pub fn parse_presheaf(src: &str) -> Result<Box<dyn TowerPresheaf>> {
    let (kind, arg) = src
        .split_once(':')
        .ok_or_else(|| Error::Malformed(format!("presheaf name {src:?} has no ':'")))?;
    let num = || {
        arg.parse::<usize>()
            .map_err(|_| Error::Malformed(format!("expected a number in {src:?}")))
    };
    Ok(match kind {
        "locconst" => Box::new(LocConstPresheaf { k: num()? }),
        "const" => Box::new(ConstantPresheafNaive { k: num()? }),
        "broken" => Box::new(ConstantTables { k: num()? }),
        "towerhom" => Box::new(TowerHomPresheaf {
            target: TowerSource::Standard(standard_kind(arg)?),
        }),
        _ => return Err(Error::Malformed(format!("unknown presheaf kind {kind:?}"))),
    })
}

/// Built-in tower names: `cantor`, `point`, `eventually_constant:k`.
pub fn standard_kind(name: &str) -> Result<StandardTower> {
    match name {
        "cantor" => Ok(StandardTower::Cantor),
        "point" => Ok(StandardTower::Point),
        _ => {
            let k = name
                .strip_prefix("eventually_constant:")
                .or_else(|| name.strip_prefix("eventually_constant("))
                .map(|s| s.trim_end_matches(')'))
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| Error::Malformed(format!("unknown tower {name:?}")))?;
            Ok(StandardTower::EventuallyConstant(k))
        }
    }
}
