//! Exact α of a hand-written allocation, with the pair that attains it.

use chorefair::model::{int, is_alpha_efx, min_efx_alpha, Allocation, Instance};

fn main() {
    // Agent 0 holds items 0 and 1 and finds item 2 (agent 1's) cheaper than
    // what is left of her bundle once she drops item 1.
    let inst = Instance::from_integers(&[[3, 1, 2], [1, 1, 1]]).unwrap();
    let alloc = Allocation::new(vec![vec![0, 1], vec![2]]);

    let report = min_efx_alpha(&inst, &alloc).unwrap();
    println!("alpha = {}", report.alpha);
    if let Some(w) = report.witness {
        println!(
            "attained by agent {} against agent {} without item {}",
            w.envier, w.envied, w.item
        );
    }
    for ((i, j), a) in &report.per_pair {
        println!("  pair ({i}, {j}): {a}");
    }
    println!("1-EFX? {}", is_alpha_efx(&inst, &alloc, &int(1)).unwrap());
    println!("2-EFX? {}", is_alpha_efx(&inst, &alloc, &int(2)).unwrap());
}
