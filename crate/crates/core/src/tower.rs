//! Truncated light profinite sets.
//!
//! A [`Tower`] is a finite inverse system `S_0 <- S_1 <- … <- S_D` of finite
//! sets. With surjective transitions the threads of the system are in
//! bijection with the top level `S_D`, so a thread is identified with its
//! top coordinate throughout the crate. Finite discrete sets enter as towers
//! of depth zero.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::{FinMap, FinSet};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(into = "TowerJson", try_from = "TowerJson")]
pub struct Tower {
    name: String,
    levels: Vec<usize>,
    transitions: Vec<FinMap>,
    // to_level[n][x] is the level-n coordinate of top element x
    to_level: Vec<Vec<usize>>,
}

/// On-disk form. `transitions[k][j]` is the image in level `k` of element `j`
/// of level `k + 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TowerJson {
    #[serde(default)]
    pub name: String,
    pub levels: Vec<usize>,
    #[serde(default)]
    pub transitions: Vec<Vec<usize>>,
}

impl From<Tower> for TowerJson {
    fn from(t: Tower) -> Self {
        TowerJson {
            name: t.name,
            levels: t.levels,
            transitions: t.transitions.into_iter().map(|m| m.table).collect(),
        }
    }
}

impl TryFrom<TowerJson> for Tower {
    type Error = Error;

    fn try_from(j: TowerJson) -> Result<Tower> {
        Tower::new(j.name, j.levels, j.transitions)
    }
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        self.levels == other.levels && self.transitions == other.transitions
    }
}

impl Eq for Tower {}

impl std::hash::Hash for Tower {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.levels.hash(state);
        self.transitions.hash(state);
    }
}

/// A problem found by [`validate_tower`], located at `(level, element)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerViolation {
    pub level: usize,
    pub element: usize,
    pub message: String,
}

impl Tower {
    /// Builds a tower, checking only that every transition is well typed.
    /// Surjectivity is reported by [`validate_tower`].
    pub fn new(name: impl Into<String>, levels: Vec<usize>, transitions: Vec<Vec<usize>>) -> Result<Tower> {
        if levels.is_empty() {
            return Err(Error::Malformed("a tower needs at least one level".into()));
        }
        if transitions.len() + 1 != levels.len() {
            return Err(Error::Malformed(format!(
                "{} levels need {} transitions, got {}",
                levels.len(),
                levels.len() - 1,
                transitions.len()
            )));
        }
        let transitions = transitions
            .into_iter()
            .enumerate()
            .map(|(k, table)| {
                FinMap::new(levels[k + 1], levels[k], table)
                    .map_err(|e| Error::Malformed(format!("transition {k}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Tower::from_parts(name.into(), levels, transitions))
    }

    fn from_parts(name: String, levels: Vec<usize>, transitions: Vec<FinMap>) -> Tower {
        let depth = levels.len() - 1;
        let mut to_level = vec![Vec::new(); depth + 1];
        to_level[depth] = (0..levels[depth]).collect();
        for n in (0..depth).rev() {
            to_level[n] = to_level[n + 1]
                .iter()
                .map(|&x| transitions[n].apply(x))
                .collect();
        }
        Tower {
            name,
            levels,
            transitions,
            to_level,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Tower {
        self.name = name.into();
        self
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn level_size(&self, n: usize) -> usize {
        self.levels[n]
    }

    pub fn transition(&self, n: usize) -> &FinMap {
        &self.transitions[n]
    }

    pub fn top_size(&self) -> usize {
        self.levels[self.depth()]
    }

    pub fn num_threads(&self) -> usize {
        self.top_size()
    }

    pub fn is_empty(&self) -> bool {
        self.top_size() == 0
    }

    /// Level-`n` coordinate of the thread with top coordinate `x`.
    pub fn coord(&self, x: usize, n: usize) -> usize {
        self.to_level[n][x]
    }

    /// The projection `S_D -> S_n`.
    pub fn projection_to(&self, n: usize) -> FinMap {
        FinMap {
            dom: self.top_size(),
            cod: self.levels[n],
            table: self.to_level[n].clone(),
        }
    }

    /// The map `S_m -> S_n` for `n <= m`.
    pub fn transition_between(&self, m: usize, n: usize) -> FinMap {
        assert!(n <= m);
        let mut map = FinMap::identity(self.levels[m]);
        for k in (n..m).rev() {
            map = self.transitions[k].after(&map);
        }
        map
    }

    pub fn thread_set(&self) -> FinSet {
        FinSet::new(self.num_threads())
    }

    pub fn thread(&self, x: usize) -> Vec<usize> {
        (0..=self.depth()).map(|n| self.coord(x, n)).collect()
    }

    /// Keep levels `0..=depth`.
    pub fn truncate(&self, depth: usize) -> Tower {
        let depth = depth.min(self.depth());
        Tower::from_parts(
            self.name.clone(),
            self.levels[..=depth].to_vec(),
            self.transitions[..depth].to_vec(),
        )
    }

    /// Truncate, or continue with identity transitions, to exactly `depth`.
    pub fn at_depth(&self, depth: usize) -> Tower {
        if depth <= self.depth() {
            return self.truncate(depth);
        }
        let mut levels = self.levels.clone();
        let mut transitions = self.transitions.clone();
        while levels.len() <= depth {
            let top = *levels.last().unwrap();
            levels.push(top);
            transitions.push(FinMap::identity(top));
        }
        Tower::from_parts(self.name.clone(), levels, transitions)
    }

    /// Least-preimage sections `S_n -> S_{n+1}` of the transitions. Their
    /// composites are again sections, so extending along them is coherent.
    pub fn least_section(&self, n: usize) -> Vec<usize> {
        let t = &self.transitions[n];
        let mut out = vec![usize::MAX; t.cod];
        for (x, &y) in t.table.iter().enumerate() {
            if out[y] == usize::MAX {
                out[y] = x;
            }
        }
        out
    }

    /// Finite discrete set as a tower of depth zero.
    pub fn finite(size: usize) -> Tower {
        Tower::from_parts(format!("finite({size})"), vec![size], vec![])
    }

    pub fn point() -> Tower {
        Tower::finite(1).with_name("point")
    }
}

pub fn validate_tower(t: &Tower) -> Vec<TowerViolation> {
    let mut out = Vec::new();
    for (k, m) in t.transitions.iter().enumerate() {
        let mut hit = vec![false; m.cod];
        for &v in &m.table {
            hit[v] = true;
        }
        for (e, h) in hit.into_iter().enumerate() {
            if !h {
                out.push(TowerViolation {
                    level: k,
                    element: e,
                    message: format!("element {e} of level {k} has no preimage in level {}", k + 1),
                });
            }
        }
    }
    out
}

/// Built-in tower families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StandardTower {
    /// Level `n` has `2^n` elements; transitions forget the last binary digit.
    Cantor,
    Point,
    /// Level 0 is a point, every later level has `k` elements with identity
    /// transitions.
    EventuallyConstant(usize),
}

pub fn standard_tower(kind: StandardTower, depth: usize) -> Tower {
    match kind {
        StandardTower::Cantor => {
            let levels: Vec<usize> = (0..=depth).map(|n| 1usize << n).collect();
            let transitions = (0..depth)
                .map(|n| FinMap {
                    dom: 1 << (n + 1),
                    cod: 1 << n,
                    table: (0..1usize << (n + 1)).map(|j| j >> 1).collect(),
                })
                .collect();
            Tower::from_parts("cantor".into(), levels, transitions)
        }
        StandardTower::Point => {
            Tower::from_parts("point".into(), vec![1; depth + 1], vec![FinMap::identity(1); depth])
        }
        StandardTower::EventuallyConstant(k) => {
            let mut levels = vec![1];
            let mut transitions = Vec::new();
            for n in 0..depth {
                levels.push(k);
                transitions.push(if n == 0 {
                    FinMap::constant(k, 1, 0)
                } else {
                    FinMap::identity(k)
                });
            }
            Tower::from_parts(format!("eventually_constant({k})"), levels, transitions)
        }
    }
}

/// A continuous map between towers, recorded by its action on threads.
/// Level behaviour is derived: see [`TowerMap::alignment`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TowerMap {
    pub src: Tower,
    pub dst: Tower,
    pub threads: FinMap,
}

impl TowerMap {
    pub fn new(src: Tower, dst: Tower, table: Vec<usize>) -> Result<TowerMap> {
        let threads = FinMap::new(src.top_size(), dst.top_size(), table)?;
        Ok(TowerMap { src, dst, threads })
    }

    pub fn identity(t: &Tower) -> TowerMap {
        TowerMap {
            src: t.clone(),
            dst: t.clone(),
            threads: FinMap::identity(t.top_size()),
        }
    }

    /// The unique map to the one-point tower.
    pub fn to_point(t: &Tower) -> TowerMap {
        TowerMap {
            src: t.clone(),
            dst: Tower::point(),
            threads: FinMap::constant(t.top_size(), 1, 0),
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &TowerMap) -> TowerMap {
        assert_eq!(first.dst, self.src, "composing tower maps with mismatched ends");
        TowerMap {
            src: first.src.clone(),
            dst: self.dst.clone(),
            threads: self.threads.after(&first.threads),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.threads.apply(x)
    }

    /// For each target level `n`, the least source level through which the
    /// level-`n` coordinate of the map factors.
    pub fn alignment(&self) -> Vec<usize> {
        (0..=self.dst.depth())
            .map(|n| {
                (0..=self.src.depth())
                    .find(|&k| self.factors_through(n, k))
                    .expect("every map factors through the top level")
            })
            .collect()
    }

    fn factors_through(&self, target_level: usize, source_level: usize) -> bool {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for x in 0..self.src.top_size() {
            let key = self.src.coord(x, source_level);
            let v = self.dst.coord(self.apply(x), target_level);
            if *seen.entry(key).or_insert(v) != v {
                return false;
            }
        }
        true
    }

    /// Number of leading target levels on which the map does not need more
    /// resolution than it is given: level `n` must factor through source
    /// level `min(n, src.depth)`. A value of `dst.depth + 1` means the map
    /// is level-preserving throughout.
    pub fn level_preserving_prefix(&self) -> usize {
        let d = self.src.depth();
        (0..=self.dst.depth())
            .take_while(|&n| self.factors_through(n, n.min(d)))
            .count()
    }

    pub fn is_level_preserving(&self) -> bool {
        self.level_preserving_prefix() == self.dst.depth() + 1
    }

    /// Level maps `S_n -> T_n` of a level-preserving map.
    pub fn level_map(&self, n: usize) -> Option<FinMap> {
        if n > self.src.depth() || n > self.dst.depth() || !self.factors_through(n, n) {
            return None;
        }
        let mut table = vec![0; self.src.level_size(n)];
        for x in 0..self.src.top_size() {
            table[self.src.coord(x, n)] = self.dst.coord(self.apply(x), n);
        }
        Some(FinMap {
            dom: self.src.level_size(n),
            cod: self.dst.level_size(n),
            table,
        })
    }
}

/// The clopen subtower cut out by `subset` of level `level`: preimages at and
/// above `level`, images below it. Returns the subtower and its inclusion.
pub fn clopen_subtower(t: &Tower, level: usize, subset: &[usize]) -> (Tower, TowerMap) {
    let mut keep = vec![false; t.level_size(level)];
    for &s in subset {
        keep[s] = true;
    }
    let top: Vec<usize> = (0..t.top_size())
        .filter(|&x| keep[t.coord(x, level)])
        .collect();
    subtower_from_threads(t, &top)
}

/// Subtower spanned by a set of threads, relabelled in increasing order.
pub fn subtower_from_threads(t: &Tower, threads: &[usize]) -> (Tower, TowerMap) {
    let d = t.depth();
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let mut m: Vec<usize> = threads.iter().map(|&x| t.coord(x, n)).collect();
        m.sort_unstable();
        m.dedup();
        members.push(m);
    }
    let relabel: Vec<HashMap<usize, usize>> = members
        .iter()
        .map(|m| m.iter().enumerate().map(|(i, &e)| (e, i)).collect())
        .collect();
    let levels = members.iter().map(Vec::len).collect();
    let transitions = (0..d)
        .map(|n| FinMap {
            dom: members[n + 1].len(),
            cod: members[n].len(),
            table: members[n + 1]
                .iter()
                .map(|&e| relabel[n][&t.transition(n).apply(e)])
                .collect(),
        })
        .collect();
    let sub = Tower::from_parts(format!("{}|clopen", t.name()), levels, transitions);
    let inclusion = TowerMap {
        threads: FinMap {
            dom: sub.top_size(),
            cod: t.top_size(),
            table: members[d].clone(),
        },
        src: sub,
        dst: t.clone(),
    };
    (inclusion.src.clone(), inclusion)
}

/// Decomposition of a tower into the clopen pieces given by a partition of
/// its threads; pieces follow block order.
pub fn decompose(t: &Tower, blocks: &[Vec<usize>]) -> Vec<(Tower, TowerMap)> {
    blocks.iter().map(|b| subtower_from_threads(t, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_shapes() {
        assert_eq!(standard_tower(StandardTower::Cantor, 3).levels(), &[1, 2, 4, 8]);
        assert_eq!(standard_tower(StandardTower::Point, 5).num_threads(), 1);
        let ec = standard_tower(StandardTower::EventuallyConstant(3), 2);
        assert_eq!(ec.levels(), &[1, 3, 3]);
        assert_eq!(ec.num_threads(), 3);
        for t in [
            standard_tower(StandardTower::Cantor, 4),
            standard_tower(StandardTower::Point, 2),
            ec,
        ] {
            assert!(validate_tower(&t).is_empty());
        }
    }

    #[test]
    fn non_surjective_transition_is_reported() {
        let t = Tower::new("bad", vec![2, 2], vec![vec![0, 0]]).unwrap();
        let v = validate_tower(&t);
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].level, v[0].element), (0, 1));
    }

    #[test]
    fn malformed_towers_are_rejected() {
        assert!(Tower::new("x", vec![], vec![]).is_err());
        assert!(Tower::new("x", vec![1, 2], vec![]).is_err());
        assert!(Tower::new("x", vec![1, 2], vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn cantor_threads() {
        let t = standard_tower(StandardTower::Cantor, 2);
        assert_eq!(t.num_threads(), 4);
        assert_eq!(t.thread(3), vec![0, 1, 3]);
        assert_eq!(t.thread(2), vec![0, 1, 2]);
    }

    #[test]
    fn clopen_subtower_of_cantor() {
        let t = standard_tower(StandardTower::Cantor, 2);
        let (sub, inc) = clopen_subtower(&t, 1, &[0]);
        assert_eq!(sub.levels(), &[1, 1, 2]);
        assert_eq!(inc.threads.table, vec![0, 1]);
        assert!(inc.is_level_preserving());
        let (whole, inc) = clopen_subtower(&t, 2, &[0, 1, 2, 3]);
        assert_eq!(whole, t);
        assert_eq!(inc.threads, FinMap::identity(4));
        let (single, _) = clopen_subtower(&t, 2, &[2]);
        assert_eq!(single.num_threads(), 1);
        let (empty, _) = clopen_subtower(&t, 1, &[]);
        assert!(empty.is_empty());
    }

    #[test]
    fn alignment_of_projection() {
        let t = standard_tower(StandardTower::Cantor, 2);
        let q = Tower::finite(2);
        let g = TowerMap::new(t.clone(), q, vec![0, 0, 1, 1]).unwrap();
        assert_eq!(g.alignment(), vec![1]);
        assert_eq!(g.level_preserving_prefix(), 0);
        let trunc = TowerMap::new(t.clone(), t.truncate(1), vec![0, 0, 1, 1]).unwrap();
        assert!(trunc.is_level_preserving());
        assert_eq!(trunc.level_map(1).unwrap(), FinMap::identity(2));
    }

    #[test]
    fn json_shape() {
        let t = standard_tower(StandardTower::Cantor, 1);
        let j = serde_json::to_value(&t).unwrap();
        assert_eq!(j["levels"], serde_json::json!([1, 2]));
        assert_eq!(j["transitions"], serde_json::json!([[0, 0]]));
        let back: Tower = serde_json::from_value(j).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn at_depth_extends_by_identities() {
        let t = standard_tower(StandardTower::Cantor, 1).at_depth(3);
        assert_eq!(t.levels(), &[1, 2, 2, 2]);
        assert!(validate_tower(&t).is_empty());
    }
}
