//! Finite categories: initial functors, restriction of (co)limits and a
//! Galois connection between chains.

use std::sync::Arc;

use condensed_discrete::smallcat::{
    certify_functor, chain_category, check_adjunction, galois_chain_adjunction, restriction_comparison,
    set_colimit, set_limit, ComparisonKind, FinCat, FunctorData, SetDiagram, DEFAULT_COMMA_BOUND,
};
use condensed_discrete::FinMap;

fn main() -> condensed_discrete::Result<()> {
    // the span  1 <- 0 -> 2  and its inclusion of the apex
    let span = Arc::new(FinCat::from_preorder(&[
        vec![true, true, true],
        vec![false, true, false],
        vec![false, false, true],
    ])?);
    let apex = Arc::new(FinCat::discrete(1));
    let f = FunctorData::between_thin(apex, span.clone(), vec![0])?;
    let cert = certify_functor(&f, DEFAULT_COMMA_BOUND)?;
    println!("apex inclusion: initial {}, final {}", cert.is_initial, cert.is_final);

    // 2 <- 4 -> 3 as a diagram of sets
    let d = SetDiagram::new(
        span.clone(),
        vec![4, 2, 3],
        span.arrows()
            .iter()
            .map(|&(a, b)| match (a, b) {
                (0, 1) => FinMap::new(4, 2, vec![0, 0, 1, 1]),
                (0, 2) => FinMap::new(4, 3, vec![0, 1, 2, 2]),
                (o, _) => Ok(FinMap::identity([4, 2, 3][o])),
            })
            .collect::<condensed_discrete::Result<_>>()?,
    )?;
    println!("limit has {} elements, colimit {}", set_limit(&d).apex.size, set_colimit(&d).apex.size);
    let lim = restriction_comparison(&f, &cert, &d, ComparisonKind::Limit)?;
    println!("limit restricted to the apex: bijective {}", lim.bijective);

    let adj = galois_chain_adjunction(&[0, 2], 4)?;
    println!("chain(2) -> chain(4) Galois connection: laws hold {}", check_adjunction(&adj));
    println!("chain(3) has {} arrows", chain_category(3).num_arrows());
    Ok(())
}
