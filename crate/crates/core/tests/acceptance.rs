//! Acceptance suite: one line per criterion, each with a pinned time limit.
//! Criteria run sequentially inside a single test so timings are not skewed
//! by other tests sharing the machine.

mod common;

use std::collections::HashSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use condensed_discrete::cli;
use condensed_discrete::corpus::{
    functor_corpus, module_corpus, presheaf_corpus, random_tower, rng, tower_corpus,
};
use condensed_discrete::finset::enumerate_partitions;
use condensed_discrete::locconst::{lc_factor_minimal, lc_fibres, presheaf_ext_check};
use condensed_discrete::modules::{check_counit_linearity, module_discreteness_report, FinModule, FinRing};
use condensed_discrete::presheaf::{
    check_counit_natural_in_s, check_counit_natural_in_x, check_triangle_first, check_triangle_second,
    colimit_condition_report, counit_iso_report, kan_comparison, unit_component, LocConstPresheaf,
    OracleOptions, TargetMap, TowerHomPresheaf, TowerSource, DEFAULT_KAN_BOUND,
};
use condensed_discrete::quotients::{
    dq_compare, dq_diagram, dq_enumerate, dq_induced_map, dq_inf, dq_projection, verify_limit_cone, TestCone,
};
use condensed_discrete::smallcat::{
    counit_detects_essential_image, essential_image_bruteforce, galois_chain_adjunction, is_fully_faithful,
    natural_isos, set_colimit, set_limit, unit_iso_from_counterpart, check_adjunction, SetDiagram,
};
use condensed_discrete::tower::{clopen_subtower, standard_tower, StandardTower};
use condensed_discrete::verify::{representable, restriction_checks};
use condensed_discrete::{FinMap, FinSet, LocConstMap, Tower, TowerMap, TowerPresheaf, Verdict};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn random_lc<R: Rng>(r: &mut R, s: &Tower, k: usize) -> LocConstMap {
    let values = (0..s.top_size()).map(|_| r.gen_range(0..k)).collect();
    LocConstMap::from_threads(s.clone(), FinSet::new(k), values).unwrap()
}

fn all_lc(s: &Tower, k: usize) -> Vec<LocConstMap> {
    condensed_discrete::finset::all_maps(s.top_size(), k)
        .map(|m| LocConstMap::from_threads(s.clone(), FinSet::new(k), m.table).unwrap())
        .collect()
}

fn c1_partition_counts() -> Outcome {
    let expected = [1, 1, 2, 5, 15, 52, 203];
    for (n, &e) in expected.iter().enumerate() {
        let got = enumerate_partitions(&FinSet::new(n), 1_000).map_err(err)?;
        let oracle = common::equivalence_relations(n);
        ensure(got.len() == e && oracle.len() == e, || format!("size {n}: {} vs oracle {}", got.len(), oracle.len()))?;
        let mine: HashSet<Vec<usize>> = got.iter().map(|p| common::normalize(p.as_slice())).collect();
        ensure(mine.len() == e && mine.iter().all(|p| oracle.contains(p)), || format!("size {n}: different partitions"))?;
    }
    Ok("sizes 0..6 are 1,1,2,5,15,52,203".into())
}

fn c2_dq_lattice() -> Outcome {
    let t = Arc::new(standard_tower(StandardTower::Cantor, 2));
    let qs = dq_enumerate(&t, 8).map_err(err)?;
    ensure(qs.len() == 15, || format!("{} quotients", qs.len()))?;
    let mut triangles = 0;
    for a in &qs {
        for b in &qs {
            let m = dq_inf(a, b).map_err(err)?;
            ensure(dq_compare(&m, a).map_err(err)?.is_le() && dq_compare(&m, b).map_err(err)?.is_le(), || "inf is not a lower bound".into())?;
            if !dq_compare(a, b).map_err(err)?.is_le() {
                continue;
            }
            let ab = dq_induced_map(a, b).map_err(err)?;
            ensure(ab.after(&a.projection_on_threads()) == b.projection_on_threads(), || "projection triangle".into())?;
            for c in &qs {
                if dq_compare(b, c).map_err(err)?.is_le() {
                    let bc = dq_induced_map(b, c).map_err(err)?;
                    let ac = dq_induced_map(a, c).map_err(err)?;
                    ensure(bc.after(&ab) == ac, || "composition triangle".into())?;
                    triangles += 1;
                }
            }
        }
    }
    Ok(format!("15 quotients, {triangles} composable triangles commute"))
}

fn c3_limit_cones() -> Outcome {
    let mut r = rng(3);
    let towers = tower_corpus(6);
    for t in &towers {
        let d = dq_diagram(&Arc::new(t.clone()), 8).map_err(err)?;
        let cones: Vec<TestCone> = (0..100)
            .map(|_| {
                let apex = r.gen_range(1..=5);
                let pick = FinMap::new(apex, t.top_size(), (0..apex).map(|_| r.gen_range(0..t.top_size())).collect()).unwrap();
                TestCone { apex, legs: d.cone.iter().map(|l| l.after(&pick)).collect() }
            })
            .collect();
        ensure(verify_limit_cone(&d, &cones).map_err(err)?, || format!("{}: a cone did not factor", t.name()))?;
    }
    Ok(format!("100 cones on each of {} towers", towers.len()))
}

fn c4_adjunction() -> Outcome {
    let budget = 10_000;
    for k in 0..=4 {
        ensure(unit_component(&FinSet::new(k)).is_bijective(), || format!("unit at {k}"))?;
    }
    let towers = tower_corpus(8);
    let mut r = rng(4);
    let mut checks = 0;
    for s in &towers {
        for k in 1..=4 {
            let x = LocConstPresheaf { k };
            let fs = if (k as f64).powi(s.top_size() as i32) <= 64.0 {
                all_lc(s, k)
            } else {
                (0..32).map(|_| random_lc(&mut r, s, k)).collect()
            };
            for f in &fs {
                let mut gs = vec![TowerMap::identity(s)];
                gs.extend(lc_fibres(f).into_iter().map(|fb| fb.inclusion));
                if s.depth() >= 1 {
                    gs.push(clopen_subtower(s, 1, &[0]).1);
                }
                for g in &gs {
                    ensure(check_counit_natural_in_s(&x, g, f, budget).map_err(err)?, || format!("natural in S on {}", s.name()))?;
                    checks += 1;
                }
            }
            if (k as f64).powi(s.top_size() as i32) <= 1024.0 {
                ensure(check_triangle_first(k, s, budget).map_err(err)?, || format!("first triangle on {}", s.name()))?;
                checks += 1;
            }
        }
        if s.top_size() <= 4 {
            for k in 1..=3 {
                for kk in 1..=3 {
                    for u in condensed_discrete::finset::all_maps(k, kk) {
                        let f = random_lc(&mut r, s, k);
                        ensure(check_counit_natural_in_x(&TargetMap::new(u), s, &f, budget).map_err(err)?, || format!("natural in X on {}", s.name()))?;
                        checks += 1;
                    }
                }
            }
        }
    }
    for x in presheaf_corpus() {
        ensure(check_triangle_second(x.as_ref(), budget).map_err(err)?, || format!("second triangle for {}", x.name()))?;
        checks += 1;
    }
    // seeded random cases
    for _ in 0..500 {
        let s = random_tower(&mut r, 8);
        let t = random_tower(&mut r, 8);
        let k = r.gen_range(1..=4);
        let f = random_lc(&mut r, &s, k);
        let g = TowerMap::new(t.clone(), s.clone(), (0..t.top_size()).map(|_| r.gen_range(0..s.top_size())).collect()).unwrap();
        ensure(check_counit_natural_in_s(&LocConstPresheaf { k }, &g, &f, budget).map_err(err)?, || "random natural in S".into())?;
        let kk = r.gen_range(1..=4);
        let u = FinMap::new(k, kk, (0..k).map(|_| r.gen_range(0..kk)).collect()).unwrap();
        ensure(check_counit_natural_in_x(&TargetMap::new(u), &s, &f, budget).map_err(err)?, || "random natural in X".into())?;
        checks += 2;
    }
    Ok(format!("{checks} checks, zero violations"))
}

fn c5_extensionality() -> Outcome {
    let presheaves: Vec<Box<dyn TowerPresheaf>> = vec![
        Box::new(LocConstPresheaf { k: 1 }),
        Box::new(LocConstPresheaf { k: 2 }),
        Box::new(LocConstPresheaf { k: 3 }),
        Box::new(TowerHomPresheaf { target: TowerSource::Standard(StandardTower::Point) }),
    ];
    let mut pairs = 0usize;
    for x in &presheaves {
        for s in tower_corpus(8) {
            let Ok(secs) = x.sections(&s, 256) else { continue };
            let at = Arc::new(s.clone());
            let fs: Vec<LocConstMap> = if s.top_size() <= 5 {
                dq_enumerate(&at, 8).map_err(err)?.iter().map(dq_projection).collect()
            } else {
                (0..=s.depth())
                    .map(|n| LocConstMap::from_threads(s.clone(), FinSet::new(s.level_size(n)), s.projection_to(n).table).unwrap())
                    .collect()
            };
            for f in &fs {
                let fibres = lc_fibres(f);
                let signature = |sec: &Vec<usize>| -> Vec<Vec<usize>> {
                    fibres.iter().map(|fb| x.restrict(&fb.inclusion, sec)).collect()
                };
                let distinct: HashSet<Vec<Vec<usize>>> = secs.iter().map(signature).collect();
                ensure(distinct.len() == secs.len(), || format!("{} on {}: two sections agree on every fibre", x.name(), s.name()))?;
                pairs += secs.len() * secs.len().saturating_sub(1) / 2;
                // the library check, on neighbouring pairs
                for w in secs.windows(2) {
                    ensure(!presheaf_ext_check(x.as_ref(), f, &w[0], &w[1], 10_000).map_err(err)?, || "library check".into())?;
                }
            }
        }
    }
    Ok(format!("{pairs} distinct pairs separated"))
}

fn c6_minimal_factorization() -> Outcome {
    let mut towers = tower_corpus(5);
    let mut r = rng(6);
    towers.extend((0..10).map(|_| random_tower(&mut r, 5)));
    let mut maps = 0;
    for s in &towers {
        let qs = dq_enumerate(&Arc::new(s.clone()), 8).map_err(err)?;
        for k in 1..=3 {
            for f in all_lc(s, k) {
                let vals = f.on_threads();
                let (q, g) = lc_factor_minimal(&f);
                let reproduced = (0..s.top_size()).all(|x| g.apply(q.block_of_thread(x)) == vals[x]);
                ensure(reproduced, || format!("{}: factorization does not reproduce f", s.name()))?;
                let factors = |p: &[usize]| (0..p.len()).all(|a| (0..p.len()).all(|b| p[a] != p[b] || vals[a] == vals[b]));
                let mine = q.on_threads();
                for other in &qs {
                    let o = other.on_threads();
                    if factors(o.as_slice()) {
                        ensure(
                            condensed_discrete::finset::partition_compare(&o, &mine).map_err(err)?.is_le(),
                            || format!("{}: a coarser quotient factors f", s.name()),
                        )?;
                    }
                }
                maps += 1;
            }
        }
    }
    Ok(format!("{maps} maps on {} towers", towers.len()))
}

fn c7_oracle_agreement() -> Outcome {
    let opts = OracleOptions::default();
    let mut pairs = 0;
    for x in presheaf_corpus() {
        for t in tower_corpus(8) {
            let a = counit_iso_report(x.as_ref(), std::slice::from_ref(&t), &opts).map_err(err)?;
            let b = colimit_condition_report(x.as_ref(), &t, &opts).map_err(err)?;
            ensure(a.verdict == b.verdict, || format!("{} on {}: {:?} vs {:?}", x.name(), t.name(), a.verdict, b.verdict))?;
            pairs += 1;
        }
    }
    let big = OracleOptions { budget: 1 << 17, ..OracleOptions::default() };
    let lc = LocConstPresheaf { k: 2 };
    let th = TowerHomPresheaf::cantor();
    for d in 0..=4 {
        let s = standard_tower(StandardTower::Cantor, d);
        for rep in [counit_iso_report(&lc, std::slice::from_ref(&s), &big), colimit_condition_report(&lc, &s, &big)] {
            let rep = rep.map_err(err)?;
            ensure(rep.verdict == Verdict::Pass, || format!("locconst at depth {d}: {:?}", rep.verdict))?;
        }
        if d == 0 {
            continue;
        }
        for rep in [counit_iso_report(&th, std::slice::from_ref(&s), &big), colimit_condition_report(&th, &s, &big)] {
            let rep = rep.map_err(err)?;
            let w = rep.witness.as_ref();
            let identity: Vec<usize> = (0..s.top_size()).collect();
            ensure(
                rep.verdict == Verdict::Fail
                    && w.is_some_and(|w| w.description == "identity tower map" && w.sections.first() == Some(&identity)),
                || format!("tower maps at depth {d}: {:?}", rep.verdict),
            )?;
        }
    }
    Ok(format!("{pairs} corpus pairs agree; locconst passes to depth 4; identity witness at depths 1..4"))
}

fn c8_kan() -> Outcome {
    let mut towers = tower_corpus(4);
    let mut r = rng(8);
    towers.extend((0..10).map(|_| random_tower(&mut r, 4)));
    let presheaves: Vec<Box<dyn TowerPresheaf>> =
        vec![Box::new(LocConstPresheaf { k: 1 }), Box::new(LocConstPresheaf { k: 2 }), Box::new(TowerHomPresheaf::cantor())];
    let mut n = 0;
    for t in &towers {
        for x in &presheaves {
            let rep = kan_comparison(x.as_ref(), t, DEFAULT_KAN_BOUND).map_err(err)?;
            let oracle = common::quotient_colimit_size(x.as_ref(), t);
            ensure(rep.pi_initial && rep.bijective, || format!("{} on {}", x.name(), t.name()))?;
            ensure(rep.dq_colimit_size == oracle && rep.comma_colimit_size == oracle, || {
                format!("{} on {}: {} / {} vs oracle {oracle}", x.name(), t.name(), rep.dq_colimit_size, rep.comma_colimit_size)
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} comparisons, sizes match the closure oracle"))
}

fn c9_engine() -> Outcome {
    let functors = functor_corpus(4, 6);
    for f in &functors {
        let (dual, restr) = restriction_checks(f).map_err(err)?;
        ensure(dual && restr, || format!("functor with object map {:?}", f.obj_map))?;
        for o in 0..f.dst.num_objects() {
            let d = representable(&f.dst, o);
            ensure(set_limit(&d).apex.size == common::bruteforce_limit_size(&d), || "limit size".into())?;
            ensure(set_colimit(&d).apex.size == common::closure_colimit_size(&d), || "colimit size".into())?;
        }
    }
    // quotient diagrams as further (co)limit inputs
    for t in tower_corpus(4) {
        let d: SetDiagram = dq_diagram(&Arc::new(t.clone()), 8).map_err(err)?.diagram;
        ensure(set_limit(&d).apex.size == common::bruteforce_limit_size(&d), || format!("limit on {}", t.name()))?;
        ensure(set_colimit(&d).apex.size == common::closure_colimit_size(&d), || format!("colimit on {}", t.name()))?;
    }
    let mut adjunctions = 0;
    for k in 1..=3 {
        for m in 1..=4 {
            for embed in condensed_discrete::finset::all_maps(k, m) {
                let e = embed.table;
                if e[0] != 0 || e.windows(2).any(|w| w[0] > w[1]) {
                    continue;
                }
                let adj = galois_chain_adjunction(&e, m).map_err(err)?;
                ensure(check_adjunction(&adj), || format!("laws for {e:?}"))?;
                if is_fully_faithful(&adj.left) {
                    for x in 0..m {
                        ensure(counit_detects_essential_image(&adj, x).map_err(err)? == essential_image_bruteforce(&adj, x), || format!("essential image for {e:?}"))?;
                    }
                }
                let rl = adj.left.then(&adj.right);
                let id = condensed_discrete::smallcat::FunctorData::identity(adj.left.src.clone());
                for w in natural_isos(&rl, &id) {
                    ensure(unit_iso_from_counterpart(&adj, &w).map_err(err)?, || format!("unit for {e:?}"))?;
                }
                adjunctions += 1;
            }
        }
    }
    Ok(format!("{} functors, {adjunctions} Galois connections", functors.len()))
}

fn c10_modules() -> Outcome {
    let opts = OracleOptions::default();
    let towers = tower_corpus(4);
    let mut n = 0;
    for xm in module_corpus() {
        for t in &towers {
            let r = module_discreteness_report(xm.as_ref(), t, &opts).map_err(err)?;
            ensure(r.consistent, || format!("{} on {}: {:?} vs {:?}", xm.name(), t.name(), r.module.verdict, r.set.verdict))?;
            n += 1;
        }
    }
    let modules = [
        FinModule::regular(FinRing::zmod(2)),
        FinModule::regular(FinRing::zmod(4)),
        FinModule::zero_module(FinRing::zmod(2)),
        FinModule::zero_module(FinRing::zmod(4)),
    ];
    let mut lin = 0;
    for m in &modules {
        for t in towers.iter().filter(|t| m.size().pow(t.top_size() as u32) <= 256) {
            ensure(check_counit_linearity(m, t, 10_000).map_err(err)?, || format!("linearity on {}", t.name()))?;
            lin += 1;
        }
    }
    Ok(format!("{n} module instances consistent, {lin} exhaustive linearity checks"))
}

fn c11_determinism() -> Outcome {
    let args = ["condensed", "verify", "--json", "--seed", "11", "--cases", "20"];
    let a = cli::run(args);
    let b = cli::run(args);
    ensure(a.code == 0, || format!("verify exited {}: {}", a.code, a.stderr))?;
    ensure(a.stdout == b.stdout, || "outputs differ".into())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

#[test]
fn acceptance() {
    let criteria: [(usize, &str, Duration, fn() -> Outcome); 11] = [
        (1, "partition-lattice counts", Duration::from_secs(1), c1_partition_counts),
        (2, "quotient lattice of cantor(2)", Duration::from_secs(1), c2_dq_lattice),
        (3, "limit cone", Duration::from_secs(5), c3_limit_cones),
        (4, "adjunction laws", Duration::from_secs(30), c4_adjunction),
        (5, "extensionality", Duration::from_secs(10), c5_extensionality),
        (6, "minimal factorization", Duration::from_secs(10), c6_minimal_factorization),
        (7, "oracle agreement", Duration::from_secs(60), c7_oracle_agreement),
        (8, "Kan comparison", Duration::from_secs(30), c8_kan),
        (9, "finite-category engine", Duration::from_secs(30), c9_engine),
        (10, "modules", Duration::from_secs(30), c10_modules),
        (11, "determinism", Duration::from_secs(60), c11_determinism),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let ok = outcome.is_ok() && elapsed <= limit;
        let note = match &outcome {
            Ok(s) => s.clone(),
            Err(e) => e.clone(),
        };
        println!(
            "criterion {id:>2} {:<30} {}  {:>8.3}s / {}s  {note}",
            name,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        if !ok {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
