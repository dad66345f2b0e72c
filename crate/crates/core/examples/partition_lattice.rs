//! Partitions of small sets: counts, refinement and meets.

use condensed_discrete::finset::{enumerate_partitions, partition_compare, partition_meet};
use condensed_discrete::{FinSet, Partition};

fn main() -> condensed_discrete::Result<()> {
    for n in 0..=6 {
        let all = enumerate_partitions(&FinSet::new(n), 1_000)?;
        println!("partitions of a {n}-set: {}", all.len());
    }

    let p = Partition::from_labels(&["a", "a", "b", "b"]);
    let q = Partition::from_labels(&[0, 1, 1, 1]);
    let m = partition_meet(&p, &q)?;
    println!("{:?} meet {:?} = {:?}", p.blocks(), q.blocks(), m.blocks());
    println!("meet vs p: {:?}", partition_compare(&m, &p)?);
    println!("p vs q: {:?}", partition_compare(&p, &q)?);
    Ok(())
}
