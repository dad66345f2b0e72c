use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::{partition_compare, FinMap, FinSet, Order, Partition};
use crate::locconst::LocConstMap;
use crate::quotients::dq_enumerate;
use crate::smallcat::{set_colimit, FinCat, SetDiagram};
use crate::tower::{Tower, TowerMap};

use super::adjunction::CounitContext;
use super::{section_index, Section, TowerPresheaf, DEFAULT_SECTION_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Oracle {
    Counit,
    Colimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    /// Fail beats inconclusive beats pass.
    pub fn combine(self, other: Verdict) -> Verdict {
        self.max(other)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// A section not reached from any finite stage.
    NotHit,
    /// Two different elements sent to the same section.
    Collapsed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub tower: Tower,
    pub sections: Vec<Section>,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportStats {
    pub tower: String,
    pub depth: usize,
    /// `dq_poset`, `level_chain` or `locconst`.
    pub index: String,
    pub index_objects: usize,
    pub generators: usize,
    pub source_size: usize,
    pub target_size: usize,
    pub hit: usize,
    pub collapsed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhausted_budget: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscretenessReport {
    pub oracle: Oracle,
    pub presheaf: String,
    pub depth: usize,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub stats: Vec<ReportStats>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    /// Most sections enumerated at any single tower.
    pub budget: usize,
    /// Largest thread count for which the full quotient poset indexes the
    /// colimit; above it the chain of level quotients is used.
    pub poset_bound: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            budget: DEFAULT_SECTION_BUDGET,
            poset_bound: 6,
        }
    }
}

fn stats_for(t: &Tower, index: &str) -> ReportStats {
    ReportStats {
        tower: t.name().to_string(),
        depth: t.depth(),
        index: index.into(),
        index_objects: 0,
        generators: 0,
        source_size: 0,
        target_size: 0,
        hit: 0,
        collapsed: 0,
        exhausted_budget: None,
    }
}

fn inconclusive(oracle: Oracle, x: &dyn TowerPresheaf, mut stats: ReportStats, budget: usize) -> DiscretenessReport {
    stats.exhausted_budget = Some(budget);
    DiscretenessReport {
        oracle,
        presheaf: x.name(),
        depth: stats.depth,
        verdict: Verdict::Inconclusive,
        witness: None,
        stats: vec![stats],
    }
}

macro_rules! or_inconclusive {
    ($e:expr, $oracle:expr, $x:expr, $stats:expr, $budget:expr) => {
        match $e {
            Ok(v) => v,
            Err(Error::BoundExceeded { .. }) => {
                return Ok(inconclusive($oracle, $x, $stats, $budget))
            }
            Err(e) => return Err(e),
        }
    };
}

/// Compares the images of the generators with `X(S)`. `image[g]` is the
/// section generator `g` lands on and `reps[g]` what it stands for. With
/// `targets` unknown (over budget) only failures can be certified.
fn judge(
    x: &dyn TowerPresheaf,
    t: &Tower,
    targets: Option<&[Section]>,
    image: &[Section],
    reps: &[Section],
    stats: &mut ReportStats,
) -> (Verdict, Option<Witness>) {
    let mut first: HashMap<&Section, usize> = HashMap::new();
    let mut collapsed = None;
    for (g, s) in image.iter().enumerate() {
        if let Some(&h) = first.get(s) {
            stats.collapsed += 1;
            collapsed.get_or_insert((h, g));
        } else {
            first.insert(s, g);
        }
    }
    stats.hit = first.len();
    let not_hit = |s: &Section| !first.contains_key(s);
    let preferred = x
        .preferred_witness(t)
        .filter(|w| x.contains(t, w) && not_hit(w));
    let missing = match targets {
        Some(all) => preferred.or_else(|| all.iter().find(|s| not_hit(s)).cloned()),
        None => preferred,
    };
    if let Some(s) = missing {
        return (
            Verdict::Fail,
            Some(Witness {
                kind: WitnessKind::NotHit,
                tower: t.clone(),
                description: x.describe(t, &s),
                sections: vec![s],
            }),
        );
    }
    if let Some((a, b)) = collapsed {
        let s = &image[a];
        return (
            Verdict::Fail,
            Some(Witness {
                kind: WitnessKind::Collapsed,
                tower: t.clone(),
                sections: vec![reps[a].clone(), reps[b].clone(), s.clone()],
                description: format!("two distinct elements both map to {}", x.describe(t, s)),
            }),
        );
    }
    if targets.is_none() {
        return (Verdict::Inconclusive, None);
    }
    (Verdict::Pass, None)
}

fn sections_or_none(
    x: &dyn TowerPresheaf,
    t: &Tower,
    stats: &mut ReportStats,
    budget: usize,
) -> Result<Option<Vec<Section>>> {
    match x.sections(t, budget) {
        Ok(s) => {
            stats.target_size = s.len();
            Ok(Some(s))
        }
        Err(Error::BoundExceeded { .. }) => {
            stats.exhausted_budget = Some(budget);
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// The partitions of the threads indexing the colimit, with the thin
/// category they form under refinement (arrows go finer to coarser).
pub(crate) fn colimit_index(t: &Arc<Tower>, poset_bound: usize) -> Result<(Vec<Partition>, FinCat, &'static str)> {
    let (parts, kind) = if t.top_size() <= poset_bound {
        let qs = dq_enumerate(t, poset_bound)?;
        (qs.iter().map(|q| q.on_threads()).collect::<Vec<_>>(), "dq_poset")
    } else {
        let mut ps: Vec<Partition> = (0..=t.depth()).map(|n| t.projection_to(n).kernel()).collect();
        ps.dedup();
        (ps, "level_chain")
    };
    let leq: Vec<Vec<bool>> = parts
        .iter()
        .map(|a| {
            parts
                .iter()
                .map(|b| matches!(partition_compare(a, b), Ok(Order::Le | Order::Eq)))
                .collect()
        })
        .collect();
    Ok((parts, FinCat::from_preorder(&leq)?, kind))
}

/// The diagram `q ↦ X(S_q)` on the opposite of the index, where `S_q` is
/// the finite set of blocks, together with the cocone legs `X(S -> S_q)`.
pub(crate) struct FiniteStageDiagram {
    pub values: Vec<Vec<Section>>,
    pub diagram: SetDiagram,
    pub to_s: Vec<TowerMap>,
}

pub(crate) fn finite_stage_diagram(
    x: &dyn TowerPresheaf,
    t: &Tower,
    parts: &[Partition],
    index: &FinCat,
    budget: usize,
) -> Result<FiniteStageDiagram> {
    let finite: Vec<Tower> = parts.iter().map(|p| Tower::finite(p.num_blocks())).collect();
    let values = finite
        .iter()
        .map(|f| x.sections(f, budget))
        .collect::<Result<Vec<_>>>()?;
    let mut value_maps = Vec::with_capacity(index.num_arrows());
    for &(i, j) in index.arrows() {
        // i refines j: u : S_i -> S_j, and X(u) : X(S_j) -> X(S_i)
        let mut table = vec![0; parts[i].num_blocks()];
        for (e, &b) in parts[i].as_slice().iter().enumerate() {
            table[b] = parts[j].block_of(e);
        }
        let u = TowerMap::new(finite[i].clone(), finite[j].clone(), table)?;
        let m = values[j]
            .iter()
            .map(|s| section_index(&values[i], &x.restrict(&u, s)).expect("restriction is a section"))
            .collect();
        value_maps.push(FinMap {
            dom: values[j].len(),
            cod: values[i].len(),
            table: m,
        });
    }
    let diagram = SetDiagram::new(
        Arc::new(index.opposite()),
        values.iter().map(Vec::len).collect(),
        value_maps,
    )?;
    let to_s = parts
        .iter()
        .zip(&finite)
        .map(|(p, f)| TowerMap::new(t.clone(), f.clone(), p.as_slice().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(FiniteStageDiagram {
        values,
        diagram,
        to_s,
    })
}

/// The colimit condition at `t`: the canonical map from the colimit of `X`
/// over the finite quotients of `t` to `X(t)` must be a bijection.
pub fn colimit_condition_report(
    x: &dyn TowerPresheaf,
    t: &Tower,
    opts: &OracleOptions,
) -> Result<DiscretenessReport> {
    let at = Arc::new(t.clone());
    let (parts, index, kind) = colimit_index(&at, opts.poset_bound)?;
    let mut stats = stats_for(t, kind);
    stats.index_objects = parts.len();
    let fs = or_inconclusive!(
        finite_stage_diagram(x, t, &parts, &index, opts.budget),
        Oracle::Colimit,
        x,
        stats,
        opts.budget
    );
    let targets = sections_or_none(x, t, &mut stats, opts.budget)?;
    stats.generators = fs.values.iter().map(Vec::len).sum();
    let colim = set_colimit(&fs.diagram);
    stats.source_size = colim.apex.size;
    let mut image: Vec<Option<Section>> = vec![None; colim.apex.size];
    let mut reps: Vec<Section> = vec![Vec::new(); colim.apex.size];
    for (q, vals) in fs.values.iter().enumerate() {
        for (e, s) in vals.iter().enumerate() {
            let class = colim.coprojections[q].apply(e);
            let r = x.restrict(&fs.to_s[q], s);
            match &image[class] {
                None => {
                    image[class] = Some(r);
                    reps[class] = s.clone();
                }
                Some(prev) if *prev != r => {
                    return Err(Error::Malformed(format!(
                        "{} is not functorial: the cocone does not commute",
                        x.name()
                    )));
                }
                Some(_) => {}
            }
        }
    }
    let image: Vec<Section> = image.into_iter().map(|s| s.expect("every class has a member")).collect();
    let (verdict, witness) = judge(x, t, targets.as_deref(), &image, &reps, &mut stats);
    Ok(DiscretenessReport {
        oracle: Oracle::Colimit,
        presheaf: x.name(),
        depth: t.depth(),
        verdict,
        witness,
        stats: vec![stats],
    })
}

/// The counit oracle: for every tower, gluing locally constant maps into
/// `X(point)` must give a bijection onto `X(S)`.
pub fn counit_iso_report(
    x: &dyn TowerPresheaf,
    towers: &[Tower],
    opts: &OracleOptions,
) -> Result<DiscretenessReport> {
    let mut report = DiscretenessReport {
        oracle: Oracle::Counit,
        presheaf: x.name(),
        depth: towers.iter().map(Tower::depth).max().unwrap_or(0),
        verdict: Verdict::Pass,
        witness: None,
        stats: Vec::new(),
    };
    for t in towers {
        let one = counit_at(x, t, opts)?;
        report.verdict = report.verdict.combine(one.verdict);
        if report.witness.is_none() {
            report.witness = one.witness;
        }
        report.stats.extend(one.stats);
    }
    Ok(report)
}

fn counit_at(x: &dyn TowerPresheaf, t: &Tower, opts: &OracleOptions) -> Result<DiscretenessReport> {
    let mut stats = stats_for(t, "locconst");
    let ctx = or_inconclusive!(CounitContext::new(x, t, opts.budget), Oracle::Counit, x, stats, opts.budget);
    match &ctx.sections {
        Some(s) => stats.target_size = s.len(),
        None => stats.exhausted_budget = Some(opts.budget),
    }
    let u = ctx.points.len();
    let maps = or_inconclusive!(
        super::tables(t.top_size(), u, opts.budget),
        Oracle::Counit,
        x,
        stats,
        opts.budget
    );
    stats.source_size = maps.len();
    stats.generators = maps.len();
    let mut image = Vec::with_capacity(maps.len());
    for values in &maps {
        let f = LocConstMap::from_threads(t.clone(), FinSet::new(u), values.clone())?;
        image.push(or_inconclusive!(ctx.counit(&f), Oracle::Counit, x, stats, opts.budget));
    }
    let (verdict, witness) = judge(x, t, ctx.sections.as_deref(), &image, &maps, &mut stats);
    Ok(DiscretenessReport {
        oracle: Oracle::Counit,
        presheaf: x.name(),
        depth: t.depth(),
        verdict,
        witness,
        stats: vec![stats],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::{LocConstPresheaf, TowerHomPresheaf};
    use crate::tower::{standard_tower, StandardTower};

    fn cantor(d: usize) -> Tower {
        standard_tower(StandardTower::Cantor, d)
    }

    #[test]
    fn locconst_passes_both() {
        let x = LocConstPresheaf { k: 2 };
        let opts = OracleOptions::default();
        for d in 0..=3 {
            let c = colimit_condition_report(&x, &cantor(d), &opts).unwrap();
            assert_eq!(c.verdict, Verdict::Pass, "depth {d}");
            let k = counit_iso_report(&x, &[cantor(d)], &opts).unwrap();
            assert_eq!(k.verdict, Verdict::Pass, "depth {d}");
        }
        let c = colimit_condition_report(&x, &cantor(1), &opts).unwrap();
        assert_eq!(c.stats[0].source_size, 4);
    }

    #[test]
    fn towerhom_fails_both_with_identity() {
        let x = TowerHomPresheaf::cantor();
        let opts = OracleOptions::default();
        for d in 1..=3 {
            for r in [
                colimit_condition_report(&x, &cantor(d), &opts).unwrap(),
                counit_iso_report(&x, &[cantor(d)], &opts).unwrap(),
            ] {
                assert_eq!(r.verdict, Verdict::Fail);
                let w = r.witness.unwrap();
                assert_eq!(w.description, "identity tower map");
                assert_eq!(w.sections[0], (0..1 << d).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn point_passes() {
        let opts = OracleOptions::default();
        let x = TowerHomPresheaf::cantor();
        let r = colimit_condition_report(&x, &Tower::point(), &opts).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn small_budget_is_inconclusive() {
        let x = LocConstPresheaf { k: 2 };
        let opts = OracleOptions {
            budget: 8,
            poset_bound: 6,
        };
        let r = colimit_condition_report(&x, &cantor(2), &opts).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.stats[0].exhausted_budget, Some(8));
    }
}
