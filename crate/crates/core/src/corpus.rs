//! Small categories, towers and presheaves used by the verification suites.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::modules::{locconst_module, CantorHomModule, FinModule, FinRing, ModuleTowerPresheaf};
use crate::presheaf::{ConstantTables, LocConstPresheaf, TowerHomPresheaf, TowerPresheaf, TowerSource};
use crate::smallcat::{FinCat, FunctorData};
use crate::tower::{standard_tower, StandardTower, Tower};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Partial orders on `n` labelled points, one per isomorphism class.
pub fn posets_up_to_iso(n: usize) -> Vec<Vec<Vec<bool>>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask >> b & 1 == 1 {
                leq[i][j] = true;
            }
        }
        let antisymmetric = pairs.iter().all(|&(i, j)| !(leq[i][j] && leq[j][i]));
        let transitive = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(leq[i][j] && leq[j][k]) || leq[i][k])));
        if !antisymmetric || !transitive {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| leq[p[i]][p[j]]).collect::<Vec<_>>())
            .min()
            .expect("nonempty permutation set");
        if seen.insert(canon) {
            out.push(leq);
        }
    }
    out
}

/// One-object and two-object categories that are not preorders.
pub fn non_thin_categories() -> Vec<(String, FinCat)> {
    let z2 = FinCat::with_units(1, vec![(0, 0), (0, 0)], vec![0], vec![(1, 1, 0)]).expect("Z/2");
    let idem = FinCat::with_units(1, vec![(0, 0), (0, 0)], vec![0], vec![(1, 1, 1)]).expect("idempotent");
    let parallel = FinCat::with_units(2, vec![(0, 0), (1, 1), (0, 1), (0, 1)], vec![0, 1], vec![]).expect("parallel pair");
    let iso = FinCat::with_units(
        2,
        vec![(0, 0), (1, 1), (0, 1), (1, 0)],
        vec![0, 1],
        vec![(3, 2, 0), (2, 3, 1)],
    )
    .expect("walking isomorphism");
    // an object with an involution mapping into a second object
    let fork = FinCat::with_units(
        2,
        vec![(0, 0), (1, 1), (0, 0), (0, 1), (0, 1)],
        vec![0, 1],
        vec![(2, 2, 0), (3, 2, 4), (4, 2, 3)],
    )
    .expect("involution with a fork");
    vec![
        ("Z/2".into(), z2),
        ("idempotent".into(), idem),
        ("parallel pair".into(), parallel),
        ("walking iso".into(), iso),
        ("fork".into(), fork),
    ]
}

/// Posets with at most `max_objects` objects up to isomorphism, then the
/// non-thin categories.
pub fn category_corpus(max_objects: usize) -> Vec<(String, Arc<FinCat>)> {
    let mut out = Vec::new();
    for n in 0..=max_objects {
        for (i, leq) in posets_up_to_iso(n).into_iter().enumerate() {
            let c = FinCat::from_preorder(&leq).expect("poset");
            out.push((format!("poset{n}.{i}"), Arc::new(c)));
        }
    }
    for (name, c) in non_thin_categories() {
        if c.num_objects() <= max_objects {
            out.push((name, Arc::new(c)));
        }
    }
    out
}

/// Every functor `c -> d`, by backtracking over object and arrow images.
pub fn all_functors(c: &Arc<FinCat>, d: &Arc<FinCat>) -> Vec<FunctorData> {
    let mut out = Vec::new();
    let n = c.num_objects();
    let m = d.num_objects();
    if n > 0 && m == 0 {
        return out;
    }
    let mut obj = vec![0; n];
    loop {
        let mut arrows = vec![usize::MAX; c.num_arrows()];
        for o in 0..n {
            arrows[c.id(o)] = d.id(obj[o]);
        }
        extend_arrows(c, d, &obj, &mut arrows, 0, &mut out);
        // next object map
        let mut i = 0;
        while i < n {
            obj[i] += 1;
            if obj[i] < m {
                break;
            }
            obj[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out
}

fn extend_arrows(
    c: &Arc<FinCat>,
    d: &Arc<FinCat>,
    obj: &[usize],
    arrows: &mut Vec<usize>,
    k: usize,
    out: &mut Vec<FunctorData>,
) {
    if k == arrows.len() {
        if let Ok(f) = FunctorData::new(c.clone(), d.clone(), obj.to_vec(), arrows.clone()) {
            out.push(f);
        }
        return;
    }
    if arrows[k] != usize::MAX {
        return extend_arrows(c, d, obj, arrows, k + 1, out);
    }
    let (s, t) = c.arrow(k);
    for &a in d.hom(obj[s], obj[t]) {
        arrows[k] = a;
        extend_arrows(c, d, obj, arrows, k + 1, out);
    }
    arrows[k] = usize::MAX;
}

/// Functors between corpus categories whose object counts sum to at most
/// `max_total`.
pub fn functor_corpus(max_objects: usize, max_total: usize) -> Vec<FunctorData> {
    let cats = category_corpus(max_objects);
    let mut out = Vec::new();
    for (_, c) in &cats {
        for (_, d) in &cats {
            if c.num_objects() + d.num_objects() <= max_total {
                out.extend(all_functors(c, d));
            }
        }
    }
    out
}

/// Tower where every element of level `n` has `branching[n]` preimages.
pub fn branching_tower(name: &str, branching: &[usize]) -> Tower {
    let mut levels = vec![1];
    let mut transitions = Vec::new();
    for &b in branching {
        let prev = *levels.last().expect("nonempty");
        levels.push(prev * b);
        transitions.push((0..prev * b).map(|j| j / b).collect());
    }
    Tower::new(name, levels, transitions).expect("branching towers are valid")
}

/// Fixed towers with at most `max_threads` threads.
pub fn tower_corpus(max_threads: usize) -> Vec<Tower> {
    let mut out = vec![Tower::point(), Tower::finite(2), Tower::finite(3)];
    for d in 1..=3 {
        out.push(standard_tower(StandardTower::Cantor, d));
    }
    for d in 1..=3 {
        out.push(standard_tower(StandardTower::EventuallyConstant(2), d));
    }
    for d in 1..=2 {
        out.push(standard_tower(StandardTower::EventuallyConstant(3), d));
    }
    out.push(standard_tower(StandardTower::EventuallyConstant(4), 1));
    out.push(branching_tower("branching[3,2]", &[3, 2]));
    out.push(branching_tower("branching[2,3]", &[2, 3]));
    out.push(branching_tower("branching[2,4]", &[2, 4]));
    out.push(Tower::new("uneven", vec![1, 2, 3], vec![vec![0, 0], vec![0, 1, 1]]).expect("uneven"));
    out.push(Tower::new("lopsided", vec![2, 3, 5], vec![vec![0, 1, 1], vec![0, 0, 1, 1, 2]]).expect("lopsided"));
    out.retain(|t| t.top_size() <= max_threads);
    out
}

/// A random tower of depth at most 3 with at most `max_threads` threads.
pub fn random_tower<R: Rng>(rng: &mut R, max_threads: usize) -> Tower {
    let depth = rng.gen_range(0..=3);
    let mut levels = vec![rng.gen_range(1..=max_threads.clamp(1, 3))];
    let mut transitions = Vec::new();
    for _ in 0..depth {
        let prev = *levels.last().expect("nonempty");
        let size = rng.gen_range(prev..=max_threads.max(prev));
        let mut table: Vec<usize> = (0..prev).collect();
        table.extend((prev..size).map(|_| rng.gen_range(0..prev)));
        // shuffle so the surjection is not always the identity on a prefix
        for i in (1..table.len()).rev() {
            let j = rng.gen_range(0..=i);
            table.swap(i, j);
        }
        levels.push(size);
        transitions.push(table);
    }
    Tower::new("random", levels, transitions).expect("random towers are valid")
}

/// Presheaves whose two discreteness oracles are expected to agree.
pub fn presheaf_corpus() -> Vec<Box<dyn TowerPresheaf>> {
    vec![
        Box::new(LocConstPresheaf { k: 1 }),
        Box::new(LocConstPresheaf { k: 2 }),
        Box::new(LocConstPresheaf { k: 3 }),
        Box::new(TowerHomPresheaf::cantor()),
        Box::new(TowerHomPresheaf {
            target: TowerSource::Standard(StandardTower::Point),
        }),
        Box::new(TowerHomPresheaf {
            target: TowerSource::Standard(StandardTower::EventuallyConstant(2)),
        }),
    ]
}

/// Presheaves that are not product-preserving; suites must flag them.
pub fn broken_presheaves() -> Vec<Box<dyn TowerPresheaf>> {
    vec![Box::new(ConstantTables { k: 2 })]
}

/// Module presheaves over `ℤ/2` and `ℤ/4`.
pub fn module_corpus() -> Vec<Box<dyn ModuleTowerPresheaf>> {
    let z2 = FinRing::zmod(2);
    let z4 = FinRing::zmod(4);
    vec![
        Box::new(locconst_module(FinModule::regular(z2.clone()))),
        Box::new(locconst_module(FinModule::power(z2.clone(), 2))),
        Box::new(locconst_module(FinModule::regular(z4.clone()))),
        Box::new(locconst_module(FinModule::zero_module(z2))),
        Box::new(locconst_module(FinModule::zero_module(z4))),
        Box::new(CantorHomModule::new()),
    ]
}
