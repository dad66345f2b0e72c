//! Suite runner over the library's invariants. Output is deterministic for a
//! fixed configuration: no timings, no hash-ordered collections.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{
    broken_presheaves, functor_corpus, module_corpus, presheaf_corpus, random_tower, rng, tower_corpus,
};
use crate::error::Result;
use crate::finset::{enumerate_partitions, partition_compare, partition_meet, FinMap, FinSet};
use crate::locconst::LocConstMap;
use crate::modules::{check_counit_linearity, module_discreteness_report, FinModule, FinRing};
use crate::presheaf::{
    check_counit_natural_in_s, check_counit_natural_in_x, check_triangle_first, check_triangle_second,
    colimit_condition_report, counit_iso_report, kan_comparison, unit_component, LocConstPresheaf,
    OracleOptions, TargetMap, DEFAULT_KAN_BOUND,
};
use crate::quotients::{dq_compare, dq_diagram, dq_inf, verify_limit_cone, TestCone};
use crate::smallcat::{
    certify_functor, restriction_comparison, ComparisonKind, FinCat, FunctorData, SetDiagram,
    DEFAULT_COMMA_BOUND,
};
use crate::tower::{Tower, TowerMap};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub budget: usize,
    /// Random cases per randomised invariant.
    pub random_cases: usize,
    pub include_broken: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            budget: crate::presheaf::DEFAULT_SECTION_BUDGET,
            random_cases: 100,
            include_broken: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantResult {
    pub suite: String,
    pub invariant: String,
    pub cases: usize,
    pub violations: usize,
    /// First violation, if any.
    pub detail: Option<String>,
}

impl InvariantResult {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub results: Vec<InvariantResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &InvariantResult> {
        self.results.iter().filter(|r| !r.passed())
    }
}

struct Tally {
    suite: &'static str,
    invariant: &'static str,
    cases: usize,
    violations: usize,
    detail: Option<String>,
}

impl Tally {
    fn new(suite: &'static str, invariant: &'static str) -> Self {
        Tally {
            suite,
            invariant,
            cases: 0,
            violations: 0,
            detail: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
            if self.detail.is_none() {
                self.detail = Some(detail());
            }
        }
    }

    /// Errors count as violations.
    fn record_result(&mut self, r: Result<bool>, detail: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(ok, detail),
            Err(e) => {
                let d = detail();
                self.record(false, || format!("{d}: {e}"));
            }
        }
    }

    fn finish(self) -> InvariantResult {
        InvariantResult {
            suite: self.suite.into(),
            invariant: self.invariant.into(),
            cases: self.cases,
            violations: self.violations,
            detail: self.detail,
        }
    }
}

fn bell(n: usize) -> usize {
    // Bell triangle
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().expect("nonempty")];
        for v in &row {
            let last = *next.last().expect("nonempty");
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}

fn lattice_suite(out: &mut Vec<InvariantResult>) {
    let mut counts = Tally::new("lattice", "partition counts are Bell numbers");
    for n in 0..=6 {
        let got = enumerate_partitions(&FinSet::new(n), 1000).map(|p| p.len());
        counts.record(got.as_ref().ok() == Some(&bell(n)), || format!("size {n}: {got:?}"));
    }
    out.push(counts.finish());

    let mut meet = Tally::new("lattice", "meet is the greatest lower bound");
    for n in 0..=4 {
        let all = enumerate_partitions(&FinSet::new(n), 100).expect("small");
        for p in &all {
            for q in &all {
                let m = partition_meet(p, q).expect("same ground");
                let below = |r: &crate::finset::Partition, s| partition_compare(r, s).map(|o| o.is_le()).unwrap_or(false);
                let ok = below(&m, p)
                    && below(&m, q)
                    && all.iter().all(|r| !(below(r, p) && below(r, q)) || below(r, &m));
                meet.record(ok, || format!("{p:?} and {q:?}"));
            }
        }
    }
    out.push(meet.finish());

    let mut dq = Tally::new("lattice", "quotients are cofiltered and the cone commutes");
    for t in tower_corpus(6) {
        let at = Arc::new(t.clone());
        let d = match dq_diagram(&at, 8) {
            Ok(d) => d,
            Err(e) => {
                dq.record(false, || format!("{}: {e}", t.name()));
                continue;
            }
        };
        dq.record(d.cone_commutes(), || format!("{}: cone", t.name()));
        for a in &d.quotients {
            for b in &d.quotients {
                let ok = dq_inf(a, b).is_ok_and(|m| {
                    dq_compare(&m, a).is_ok_and(|o| o.is_le()) && dq_compare(&m, b).is_ok_and(|o| o.is_le())
                });
                dq.record(ok, || format!("{}: no lower bound", t.name()));
            }
        }
    }
    out.push(dq.finish());
}

fn limit_suite(cfg: &VerifyConfig, out: &mut Vec<InvariantResult>) {
    let mut r = rng(cfg.seed ^ 0x11);
    let mut cones = Tally::new("limits", "compatible cones factor through the threads");
    for t in tower_corpus(6) {
        let at = Arc::new(t.clone());
        let Ok(d) = dq_diagram(&at, 8) else {
            cones.record(false, || format!("{}: quotient bound", t.name()));
            continue;
        };
        let batch: Vec<TestCone> = (0..cfg.random_cases)
            .map(|_| {
                let apex = r.gen_range(0..=4);
                let pick: Vec<usize> = (0..apex).map(|_| r.gen_range(0..t.top_size())).collect();
                let pick = FinMap {
                    dom: apex,
                    cod: t.top_size(),
                    table: pick,
                };
                TestCone {
                    apex,
                    legs: d.cone.iter().map(|leg| leg.after(&pick)).collect(),
                }
            })
            .collect();
        cones.record_result(verify_limit_cone(&d, &batch), || t.name().to_string());
    }
    out.push(cones.finish());
}

fn random_map<R: Rng>(r: &mut R, src: &Tower, dst: &Tower) -> TowerMap {
    let table = (0..src.top_size()).map(|_| r.gen_range(0..dst.top_size())).collect();
    TowerMap::new(src.clone(), dst.clone(), table).expect("random map")
}

fn random_lc<R: Rng>(r: &mut R, s: &Tower, k: usize) -> LocConstMap {
    let values = (0..s.top_size()).map(|_| r.gen_range(0..k)).collect();
    LocConstMap::from_threads(s.clone(), FinSet::new(k), values).expect("values in range")
}

fn adjunction_suite(cfg: &VerifyConfig, out: &mut Vec<InvariantResult>) {
    let towers = tower_corpus(8);
    let mut unit = Tally::new("adjunction", "unit is bijective");
    for k in 0..=4 {
        unit.record(unit_component(&FinSet::new(k)).is_bijective(), || format!("size {k}"));
    }
    out.push(unit.finish());

    let mut r = rng(cfg.seed ^ 0x22);
    let mut nat_s = Tally::new("adjunction", "counit is natural in S");
    let mut nat_x = Tally::new("adjunction", "counit is natural in X");
    for i in 0..cfg.random_cases {
        let s = &towers[i % towers.len()];
        let t = random_tower(&mut r, 8);
        let k = r.gen_range(1..=4);
        let x = LocConstPresheaf { k };
        let f = random_lc(&mut r, s, k);
        let g = random_map(&mut r, &t, s);
        nat_s.record_result(check_counit_natural_in_s(&x, &g, &f, cfg.budget), || {
            format!("{} -> {}, k = {k}", t.name(), s.name())
        });
        let kk = r.gen_range(1..=4);
        let u = FinMap {
            dom: k,
            cod: kk,
            table: (0..k).map(|_| r.gen_range(0..kk)).collect(),
        };
        nat_x.record_result(check_counit_natural_in_x(&TargetMap::new(u), s, &f, cfg.budget), || {
            format!("{}, {k} -> {kk}", s.name())
        });
    }
    out.push(nat_s.finish());
    out.push(nat_x.finish());

    let mut tri = Tally::new("adjunction", "triangle identities");
    for s in towers.iter().filter(|t| t.top_size() <= 4) {
        for k in 1..=3 {
            tri.record_result(check_triangle_first(k, s, cfg.budget), || format!("{}, k = {k}", s.name()));
        }
    }
    for x in presheaf_corpus() {
        tri.record_result(check_triangle_second(x.as_ref(), cfg.budget), || x.name());
    }
    out.push(tri.finish());
}

fn oracle_suite(cfg: &VerifyConfig, out: &mut Vec<InvariantResult>) {
    let opts = OracleOptions {
        budget: cfg.budget,
        ..OracleOptions::default()
    };
    let mut presheaves = presheaf_corpus();
    if cfg.include_broken {
        presheaves.extend(broken_presheaves());
    }
    let mut agree = Tally::new("oracles", "counit and colimit verdicts agree");
    for x in &presheaves {
        for t in tower_corpus(8) {
            let a = colimit_condition_report(x.as_ref(), &t, &opts);
            let b = counit_iso_report(x.as_ref(), std::slice::from_ref(&t), &opts);
            let ok = matches!((&a, &b), (Ok(a), Ok(b)) if a.verdict == b.verdict);
            agree.record(ok, || {
                let show = |r: &Result<crate::presheaf::DiscretenessReport>| match r {
                    Ok(r) => format!("{:?}", r.verdict),
                    Err(e) => e.to_string(),
                };
                format!("{} on {}: colimit {}, counit {}", x.name(), t.name(), show(&a), show(&b))
            });
        }
    }
    out.push(agree.finish());
}

fn kan_suite(cfg: &VerifyConfig, out: &mut Vec<InvariantResult>) {
    let mut kan = Tally::new("kan", "quotients are initial among arrows to finite sets");
    let mut towers = tower_corpus(4);
    let mut r = rng(cfg.seed ^ 0x33);
    towers.extend((0..cfg.random_cases.min(10)).map(|_| random_tower(&mut r, 4)));
    for t in &towers {
        for k in 1..=2 {
            let rep = kan_comparison(&LocConstPresheaf { k }, t, DEFAULT_KAN_BOUND);
            kan.record_result(rep.map(|rep| rep.pi_initial && rep.bijective), || format!("{}, k = {k}", t.name()));
        }
    }
    out.push(kan.finish());
}

fn module_suite(cfg: &VerifyConfig, out: &mut Vec<InvariantResult>) {
    let opts = OracleOptions {
        budget: cfg.budget,
        ..OracleOptions::default()
    };
    let towers: Vec<Tower> = tower_corpus(4);
    let mut thc = Tally::new("modules", "module and set verdicts agree");
    for xm in module_corpus() {
        for t in &towers {
            let rep = module_discreteness_report(xm.as_ref(), t, &opts);
            thc.record_result(rep.map(|r| r.consistent), || format!("{} on {}", xm.name(), t.name()));
        }
    }
    out.push(thc.finish());

    let mut lin = Tally::new("modules", "counit is linear");
    let modules = [
        FinModule::regular(FinRing::zmod(2)),
        FinModule::regular(FinRing::zmod(4)),
        FinModule::zero_module(FinRing::zmod(2)),
    ];
    for m in &modules {
        for t in towers.iter().filter(|t| m.size().pow(t.top_size() as u32) <= 256) {
            lin.record_result(check_counit_linearity(m, t, cfg.budget), || {
                format!("module of order {} on {}", m.size(), t.name())
            });
        }
    }
    out.push(lin.finish());
}

/// Covariant representable `hom(d, -)` on `c`.
pub fn representable(c: &Arc<FinCat>, d: usize) -> SetDiagram {
    let value_sets = (0..c.num_objects()).map(|e| c.hom(d, e).len()).collect();
    let value_maps = c
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, &(e, e2))| FinMap {
            dom: c.hom(d, e).len(),
            cod: c.hom(d, e2).len(),
            table: c
                .hom(d, e)
                .iter()
                .map(|&h| {
                    let comp = c.comp(a, h);
                    c.hom(d, e2).iter().position(|&x| x == comp).expect("composite lands in hom")
                })
                .collect(),
        })
        .collect();
    SetDiagram::new(c.clone(), value_sets, value_maps).expect("representables are functors")
}

/// Restriction comparisons along `f` for every representable on its target
/// and the terminal diagram.
pub fn restriction_checks(f: &FunctorData) -> Result<(bool, bool)> {
    let cert = certify_functor(f, DEFAULT_COMMA_BOUND)?;
    let op = f.opposite();
    let op_cert = certify_functor(&op, DEFAULT_COMMA_BOUND)?;
    let duality = cert.is_initial == op_cert.is_final && cert.is_final == op_cert.is_initial;
    let d = &f.dst;
    let mut diagrams: Vec<SetDiagram> = (0..d.num_objects()).map(|o| representable(d, o)).collect();
    diagrams.push(
        SetDiagram::new(
            d.clone(),
            vec![1; d.num_objects()],
            vec![FinMap::identity(1); d.num_arrows()],
        )?,
    );
    let mut restriction = true;
    for g in &diagrams {
        for kind in [ComparisonKind::Limit, ComparisonKind::Colimit] {
            restriction &= restriction_comparison(f, &cert, g, kind)?.consistent();
        }
    }
    Ok((duality, restriction))
}

fn smallcat_suite(out: &mut Vec<InvariantResult>) {
    let mut dual = Tally::new("smallcat", "initial and final are dual");
    let mut restr = Tally::new("smallcat", "restriction along initial or final functors");
    for f in functor_corpus(4, 5) {
        let describe = || format!("functor with object map {:?}", f.obj_map);
        match restriction_checks(&f) {
            Ok((a, b)) => {
                dual.record(a, describe);
                restr.record(b, describe);
            }
            Err(e) => dual.record(false, || format!("{}: {e}", describe())),
        }
    }
    out.push(dual.finish());
    out.push(restr.finish());
}

/// Runs every suite in a fixed order.
pub fn run_verify(cfg: &VerifyConfig) -> VerifyReport {
    let mut results = Vec::new();
    lattice_suite(&mut results);
    limit_suite(cfg, &mut results);
    smallcat_suite(&mut results);
    adjunction_suite(cfg, &mut results);
    oracle_suite(cfg, &mut results);
    kan_suite(cfg, &mut results);
    module_suite(cfg, &mut results);
    let passed = results.iter().all(InvariantResult::passed);
    VerifyReport {
        config: cfg.clone(),
        results,
        passed,
    }
}
