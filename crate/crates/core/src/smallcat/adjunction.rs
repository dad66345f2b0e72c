use std::sync::Arc;

use super::{FinCat, FunctorData, NatTransData};
use crate::error::{Error, Result};

/// `left: C -> D` left adjoint to `right: D -> C`, with unit `Id_C ⇒ R∘L`
/// and counit `L∘R ⇒ Id_D`.
#[derive(Debug, Clone)]
pub struct AdjunctionData {
    pub left: FunctorData,
    pub right: FunctorData,
    pub unit: NatTransData,
    pub counit: NatTransData,
}

impl AdjunctionData {
    pub fn new(
        left: FunctorData,
        right: FunctorData,
        unit_components: Vec<usize>,
        counit_components: Vec<usize>,
    ) -> AdjunctionData {
        let c = left.src.clone();
        let d = left.dst.clone();
        let unit = NatTransData {
            source: FunctorData::identity(c),
            target: left.then(&right),
            components: unit_components,
        };
        let counit = NatTransData {
            source: right.then(&left),
            target: FunctorData::identity(d),
            components: counit_components,
        };
        AdjunctionData {
            left,
            right,
            unit,
            counit,
        }
    }

    pub fn identity(c: Arc<FinCat>) -> AdjunctionData {
        let id = FunctorData::identity(c.clone());
        let comps: Vec<usize> = (0..c.num_objects()).map(|o| c.id(o)).collect();
        AdjunctionData::new(id.clone(), id, comps.clone(), comps)
    }
}

/// Naturality of unit and counit plus both triangle identities, exhaustively.
pub fn check_adjunction(adj: &AdjunctionData) -> bool {
    if !adj.unit.is_natural() || !adj.counit.is_natural() {
        return false;
    }
    let c = &adj.left.src;
    let d = &adj.left.dst;
    // ε_{L c} ∘ L(η_c) = id_{L c}
    for o in 0..c.num_objects() {
        let lo = adj.left.obj_map[o];
        let l_eta = adj.left.arrow_map[adj.unit.components[o]];
        if d.compose(adj.counit.components[lo], l_eta) != Some(d.id(lo)) {
            return false;
        }
    }
    // R(ε_d) ∘ η_{R d} = id_{R d}
    for o in 0..d.num_objects() {
        let ro = adj.right.obj_map[o];
        let r_eps = adj.right.arrow_map[adj.counit.components[o]];
        if c.compose(r_eps, adj.unit.components[ro]) != Some(c.id(ro)) {
            return false;
        }
    }
    true
}

/// Every hom-map `C(a, b) -> D(F a, F b)` is a bijection.
pub fn is_fully_faithful(f: &FunctorData) -> bool {
    let c = &f.src;
    for a in 0..c.num_objects() {
        for b in 0..c.num_objects() {
            let src = c.hom(a, b);
            let dst = f.dst.hom(f.obj_map[a], f.obj_map[b]);
            if src.len() != dst.len() {
                return false;
            }
            let mut images: Vec<usize> = src.iter().map(|&k| f.arrow_map[k]).collect();
            images.sort_unstable();
            images.dedup();
            if images.len() != src.len() {
                return false;
            }
        }
    }
    true
}

/// Whether the counit at `x` is an isomorphism; requires a fully faithful
/// left adjoint, in which case this decides essential-image membership.
pub fn counit_detects_essential_image(adj: &AdjunctionData, x: usize) -> Result<bool> {
    if !is_fully_faithful(&adj.left) {
        return Err(Error::LeftNotFullyFaithful(
            "some hom-map of the left adjoint is not bijective".into(),
        ));
    }
    Ok(adj.left.dst.is_iso(adj.counit.components[x]))
}

/// Brute force: does some `y` admit an isomorphism `L(y) -> x`?
pub fn essential_image_bruteforce(adj: &AdjunctionData, x: usize) -> bool {
    let d = &adj.left.dst;
    (0..adj.left.src.num_objects()).any(|y| {
        d.hom(adj.left.obj_map[y], x)
            .iter()
            .any(|&k| d.is_iso(k))
    })
}

/// All natural isomorphisms `source ⇒ target`, by exhaustive search over
/// iso components.
pub fn natural_isos(source: &FunctorData, target: &FunctorData) -> Vec<NatTransData> {
    let c = &source.src;
    let d = &source.dst;
    let choices: Vec<Vec<usize>> = (0..c.num_objects())
        .map(|o| {
            d.hom(source.obj_map[o], target.obj_map[o])
                .iter()
                .copied()
                .filter(|&k| d.is_iso(k))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(choices.len());
    fn go(
        choices: &[Vec<usize>],
        current: &mut Vec<usize>,
        source: &FunctorData,
        target: &FunctorData,
        out: &mut Vec<NatTransData>,
    ) {
        if current.len() == choices.len() {
            let t = NatTransData {
                source: source.clone(),
                target: target.clone(),
                components: current.clone(),
            };
            if t.is_natural() {
                out.push(t);
            }
            return;
        }
        for &k in &choices[current.len()] {
            current.push(k);
            go(choices, current, source, target, out);
            current.pop();
        }
    }
    go(&choices, &mut current, source, target, &mut out);
    out
}

/// Given a natural isomorphism `R∘L ⇒ Id`, checks that the unit is a
/// componentwise isomorphism and that `L` is fully faithful.
pub fn unit_iso_from_counterpart(adj: &AdjunctionData, witness: &NatTransData) -> Result<bool> {
    if !witness.is_natural() {
        return Err(Error::WitnessNotIso(witness.violations().join("; ")));
    }
    if !witness.is_iso() {
        return Err(Error::WitnessNotIso("some component is not invertible".into()));
    }
    let rl = adj.left.then(&adj.right);
    if witness.source.obj_map != rl.obj_map || witness.source.arrow_map != rl.arrow_map {
        return Err(Error::WitnessNotIso("witness does not start at R∘L".into()));
    }
    Ok(adj.unit.is_iso() && is_fully_faithful(&adj.left))
}

/// The chain `0 < 1 < … < n-1` as a thin category.
pub fn chain_category(n: usize) -> FinCat {
    let leq: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
    FinCat::from_preorder(&leq).expect("chains are partial orders")
}

/// Galois connection between chains: `left: chain(k) -> chain(m)` is the
/// monotone map `embed` (which must satisfy `embed[0] == 0`), and the right
/// adjoint sends `d` to the largest `c` with `embed[c] <= d`.
pub fn galois_chain_adjunction(embed: &[usize], m: usize) -> Result<AdjunctionData> {
    let k = embed.len();
    if k == 0 || embed[0] != 0 || embed.windows(2).any(|w| w[0] > w[1]) || embed[k - 1] >= m {
        return Err(Error::Malformed(
            "left map must be monotone, start at 0 and stay inside the target chain".into(),
        ));
    }
    let c = Arc::new(chain_category(k));
    let d = Arc::new(chain_category(m));
    let left = FunctorData::between_thin(c.clone(), d.clone(), embed.to_vec())?;
    let right_map: Vec<usize> = (0..m)
        .map(|y| (0..k).filter(|&x| embed[x] <= y).max().unwrap_or(0))
        .collect();
    let right = FunctorData::between_thin(d.clone(), c.clone(), right_map.clone())?;
    let unit = (0..k)
        .map(|x| c.hom(x, right_map[embed[x]])[0])
        .collect();
    let counit = (0..m)
        .map(|y| d.hom(embed[right_map[y]], y)[0])
        .collect();
    Ok(AdjunctionData::new(left, right, unit, counit))
}
