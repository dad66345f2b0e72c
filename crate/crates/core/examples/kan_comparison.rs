//! Colimit over discrete quotients vs colimit over all maps to finite sets.

use condensed_discrete::presheaf::{kan_comparison, LocConstPresheaf, TowerHomPresheaf, DEFAULT_KAN_BOUND};
use condensed_discrete::tower::{standard_tower, StandardTower};

fn main() -> condensed_discrete::Result<()> {
    for (name, s) in [
        ("cantor(2)", standard_tower(StandardTower::Cantor, 2)),
        ("eventually_constant(3)", standard_tower(StandardTower::EventuallyConstant(3), 2)),
    ] {
        let r = kan_comparison(&LocConstPresheaf { k: 2 }, &s, DEFAULT_KAN_BOUND)?;
        println!(
            "{name}: {} quotients, {} comma objects, initial {}, colimits {} / {}, bijective {}",
            r.dq_objects, r.comma_objects, r.pi_initial, r.dq_colimit_size, r.comma_colimit_size, r.bijective
        );
    }
    let s = standard_tower(StandardTower::Cantor, 1);
    let r = kan_comparison(&TowerHomPresheaf::cantor(), &s, DEFAULT_KAN_BOUND)?;
    println!("tower maps into cantor on cantor(1): colimits {} / {}", r.dq_colimit_size, r.comma_colimit_size);
    Ok(())
}
