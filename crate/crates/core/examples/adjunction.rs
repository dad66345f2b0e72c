//! Unit, counit and triangle identities of the locally constant adjunction.

use condensed_discrete::presheaf::{
    check_counit_natural_in_s, check_product_preservation, check_triangle_first, check_triangle_second,
    counit_component, unit_component, LocConstPresheaf, TowerHomPresheaf,
};
use condensed_discrete::tower::{standard_tower, StandardTower};
use condensed_discrete::{FinSet, LocConstMap, TowerMap};

fn main() -> condensed_discrete::Result<()> {
    let budget = 10_000;
    println!("unit on a 3-set bijective: {}", unit_component(&FinSet::new(3)).is_bijective());

    let s = standard_tower(StandardTower::Cantor, 2);
    let x = LocConstPresheaf { k: 3 };
    let f = LocConstMap::from_threads(s.clone(), FinSet::new(3), vec![2, 2, 0, 1])?;
    println!("counit glues f to {:?}", counit_component(&x, &s, &f, budget)?);

    let t = standard_tower(StandardTower::EventuallyConstant(3), 1);
    let g = TowerMap::new(t, s.clone(), vec![3, 0, 0])?;
    println!("natural in S: {}", check_counit_natural_in_s(&x, &g, &f, budget)?);
    println!("first triangle: {}", check_triangle_first(2, &s, budget)?);
    println!("second triangle: {}", check_triangle_second(&x, budget)?);

    let halves = vec![vec![0, 1], vec![2, 3]];
    let rep = check_product_preservation(&TowerHomPresheaf::cantor(), &s, &halves, budget)?;
    println!(
        "tower maps into cantor over two halves: {} sections vs {} in the product",
        rep.source_size, rep.product_size
    );
    Ok(())
}
