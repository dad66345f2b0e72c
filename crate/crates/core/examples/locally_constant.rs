//! Locally constant maps: fibres and the coarsest quotient they factor through.

use condensed_discrete::locconst::{lc_factor_minimal, lc_fibres};
use condensed_discrete::tower::{standard_tower, StandardTower};
use condensed_discrete::{FinSet, LocConstMap};

fn main() -> condensed_discrete::Result<()> {
    let s = standard_tower(StandardTower::Cantor, 3);
    // constant on the two halves, except one thread
    let f = LocConstMap::from_threads(s.clone(), FinSet::new(3), vec![0, 0, 0, 0, 1, 1, 1, 2])?;
    println!("canonical level {}", f.level());
    for fb in lc_fibres(&f) {
        println!("  fibre over {}: {} threads", fb.value, fb.subtower.top_size());
    }
    let (q, g) = lc_factor_minimal(&f);
    println!("factors through level {} {:?} via {:?}", q.level(), q.partition().as_slice(), g.table);

    let h = LocConstMap::from_threads(s, FinSet::new(2), vec![0, 0, 1, 1, 0, 0, 1, 1])?;
    println!("second map lives at level {}", h.level());
    Ok(())
}
