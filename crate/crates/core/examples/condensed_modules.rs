//! Module-valued presheaves over Z/2 and Z/4.

use condensed_discrete::modules::{
    check_counit_linearity, iso_reflection_check, locconst_module, module_discreteness_report, CantorHomModule,
    FinModule, FinRing, ScalarMultiplication,
};
use condensed_discrete::presheaf::OracleOptions;
use condensed_discrete::tower::{standard_tower, StandardTower};
use condensed_discrete::Tower;

fn main() -> condensed_discrete::Result<()> {
    let opts = OracleOptions::default();
    let z2 = FinModule::regular(FinRing::zmod(2));
    let s = standard_tower(StandardTower::Cantor, 2);
    println!("counit linear over Z/2 on cantor(2): {}", check_counit_linearity(&z2, &s, 10_000)?);

    let lc = locconst_module(z2);
    let r = module_discreteness_report(&lc, &s, &opts)?;
    println!("locconst(Z/2): modules {:?}, sets {:?}, consistent {}", r.module.verdict, r.set.verdict, r.consistent);
    let h = CantorHomModule::new();
    let r = module_discreteness_report(&h, &s, &opts)?;
    println!("maps into cantor: modules {:?}, sets {:?}, consistent {}", r.module.verdict, r.set.verdict, r.consistent);

    let z4 = locconst_module(FinModule::regular(FinRing::zmod(4)));
    let towers = [Tower::point(), standard_tower(StandardTower::Cantor, 1)];
    for scalar in [1, 2, 3] {
        let g = ScalarMultiplication { presheaf: &z4, scalar };
        let r = iso_reflection_check(&g, &towers, 10_000)?;
        println!("times {scalar} on Z/4: module iso {}, set iso {}", r.module_iso, r.set_iso);
    }
    Ok(())
}
