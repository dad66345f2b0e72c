//! Both discreteness oracles on a discrete and a non-discrete presheaf.

use condensed_discrete::presheaf::{
    colimit_condition_report, counit_iso_report, LocConstPresheaf, OracleOptions, TowerHomPresheaf,
};
use condensed_discrete::tower::{standard_tower, StandardTower};
use condensed_discrete::TowerPresheaf;

fn main() -> condensed_discrete::Result<()> {
    let opts = OracleOptions::default();
    let presheaves: Vec<Box<dyn TowerPresheaf>> =
        vec![Box::new(LocConstPresheaf { k: 2 }), Box::new(TowerHomPresheaf::cantor())];
    for x in &presheaves {
        for depth in 0..=3 {
            let s = standard_tower(StandardTower::Cantor, depth);
            let a = counit_iso_report(x.as_ref(), std::slice::from_ref(&s), &opts)?;
            let b = colimit_condition_report(x.as_ref(), &s, &opts)?;
            print!("{:<16} depth {depth}: counit {:?}, colimit {:?}", x.name(), a.verdict, b.verdict);
            if let Some(w) = b.witness {
                print!("  witness: {}", w.description);
            }
            println!();
        }
    }
    Ok(())
}
