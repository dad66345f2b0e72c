//! Brute-force oracles shared by the integration tests. None of them reuse
//! the library's union-find or enumeration code.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use condensed_discrete::quotients::dq_enumerate;
use condensed_discrete::smallcat::SetDiagram;
use condensed_discrete::{Tower, TowerMap, TowerPresheaf};

/// Relabels in order of first appearance.
pub fn normalize(labels: &[usize]) -> Vec<usize> {
    let mut seen: Vec<usize> = Vec::new();
    labels
        .iter()
        .map(|l| match seen.iter().position(|s| s == l) {
            Some(i) => i,
            None => {
                seen.push(*l);
                seen.len() - 1
            }
        })
        .collect()
}

/// Equivalence relations on an `n`-set, as kernels of all maps `n -> n`.
pub fn equivalence_relations(n: usize) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    let total = n.pow(n as u32);
    for mut code in 0..total.max(1) {
        let mut f = vec![0; n];
        for slot in f.iter_mut() {
            *slot = code % n.max(1);
            code /= n.max(1);
        }
        out.insert(normalize(&f));
    }
    out
}

/// Colimit size by fixed-point label propagation over the disjoint union.
pub fn closure_colimit_size(d: &SetDiagram) -> usize {
    let offsets: Vec<usize> = d
        .value_sets
        .iter()
        .scan(0, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        })
        .collect();
    let total: usize = d.value_sets.iter().sum();
    let mut edges = Vec::new();
    for (k, &(a, b)) in d.index.arrows().iter().enumerate() {
        for x in 0..d.value_sets[a] {
            edges.push((offsets[a] + x, offsets[b] + d.value_maps[k].apply(x)));
        }
    }
    let mut label: Vec<usize> = (0..total).collect();
    loop {
        let mut changed = false;
        for &(u, v) in &edges {
            let m = label[u].min(label[v]);
            if label[u] != m || label[v] != m {
                label[u] = m;
                label[v] = m;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    label.iter().collect::<BTreeSet<_>>().len()
}

/// Limit size by testing every element of the product.
pub fn bruteforce_limit_size(d: &SetDiagram) -> usize {
    let n = d.value_sets.len();
    if d.value_sets.iter().any(|&s| s == 0) {
        return 0;
    }
    let mut tuple = vec![0; n];
    let mut count = 0;
    loop {
        let ok = d
            .index
            .arrows()
            .iter()
            .enumerate()
            .all(|(k, &(a, b))| d.value_maps[k].apply(tuple[a]) == tuple[b]);
        count += usize::from(ok);
        let mut i = 0;
        while i < n {
            tuple[i] += 1;
            if tuple[i] < d.value_sets[i] {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if i == n {
            return count;
        }
    }
}

/// Colimit over the discrete quotients of `t` of `x` evaluated at the
/// finite quotient sets, by label propagation over explicit section lists.
pub fn quotient_colimit_size(x: &dyn TowerPresheaf, t: &Tower) -> usize {
    let qs = dq_enumerate(&Arc::new(t.clone()), 8).expect("small tower");
    let labels: Vec<Vec<usize>> = qs.iter().map(|q| q.on_threads().as_slice().to_vec()).collect();
    let stages: Vec<Tower> = qs.iter().map(|q| Tower::finite(q.num_blocks())).collect();
    let values: Vec<Vec<Vec<usize>>> = stages.iter().map(|s| x.sections(s, usize::MAX).unwrap()).collect();
    let mut nodes = Vec::new();
    for (i, v) in values.iter().enumerate() {
        for s in v {
            nodes.push((i, s.clone()));
        }
    }
    let index_of = |i: usize, s: &Vec<usize>| nodes.iter().position(|(j, t)| *j == i && t == s).unwrap();
    let mut edges = Vec::new();
    for i in 0..qs.len() {
        for j in 0..qs.len() {
            // i finer than j: every block of i sits inside a block of j
            let refines = (0..labels[i].len())
                .all(|a| (0..labels[i].len()).all(|b| labels[i][a] != labels[i][b] || labels[j][a] == labels[j][b]));
            if i == j || !refines {
                continue;
            }
            let mut table = vec![0; stages[i].top_size()];
            for (a, &bi) in labels[i].iter().enumerate() {
                table[bi] = labels[j][a];
            }
            let u = TowerMap::new(stages[i].clone(), stages[j].clone(), table).unwrap();
            for s in &values[j] {
                edges.push((index_of(j, s), index_of(i, &x.restrict(&u, s))));
            }
        }
    }
    let mut label: Vec<usize> = (0..nodes.len()).collect();
    loop {
        let mut changed = false;
        for &(u, v) in &edges {
            let m = label[u].min(label[v]);
            if label[u] != m || label[v] != m {
                label[u] = m;
                label[v] = m;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    label.iter().collect::<BTreeSet<_>>().len()
}
