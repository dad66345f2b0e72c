//! Towers, their discrete quotients and the limit cone over them.

use std::sync::Arc;

use condensed_discrete::quotients::{dq_diagram, dq_inf, verify_limit_cone, TestCone};
use condensed_discrete::tower::{clopen_subtower, standard_tower, StandardTower};
use condensed_discrete::{FinMap, Tower};

fn main() -> condensed_discrete::Result<()> {
    let cantor = Arc::new(standard_tower(StandardTower::Cantor, 2));
    println!("{} levels {:?}, thread 2 = {:?}", cantor.name(), cantor.levels(), cantor.thread(2));

    let d = dq_diagram(&cantor, 8)?;
    println!("discrete quotients: {}", d.quotients.len());
    for q in &d.quotients {
        println!("  level {} {:?}", q.level(), q.partition().as_slice());
    }
    let m = dq_inf(&d.quotients[1], &d.quotients[2])?;
    println!("inf of q1 and q2: level {} {:?}", m.level(), m.partition().as_slice());

    // a cone from a two-element set picking threads 1 and 3
    let pick = FinMap::new(2, 4, vec![1, 3])?;
    let cone = TestCone {
        apex: 2,
        legs: d.cone.iter().map(|leg| leg.after(&pick)).collect(),
    };
    println!("cone factors uniquely: {}", verify_limit_cone(&d, &[cone])?);

    let (sub, _) = clopen_subtower(&cantor, 1, &[1]);
    println!("clopen piece over level-1 point 1: levels {:?}", sub.levels());

    let custom = Tower::new("custom", vec![1, 2, 5], vec![vec![0, 0], vec![0, 0, 1, 1, 1]])?;
    let cd = dq_diagram(&Arc::new(custom), 8)?;
    println!("custom tower: {} quotients", cd.quotients.len());
    Ok(())
}
