//! (n−1)-EFX with two cost values, one instance per branch.

use chorefair::bivalued::solve_bi_general_traced;
use chorefair::model::{min_efx_alpha, Instance};

fn main() {
    let cases: [(&str, Vec<Vec<i64>>); 3] = [
        // Five items costly to everyone: at least n of them.
        (
            "many costly items",
            vec![
                vec![3, 3, 3, 3, 3, 1, 1, 3],
                vec![3, 3, 3, 3, 3, 1, 3, 1],
                vec![3, 3, 3, 3, 3, 3, 1, 1],
                vec![3, 3, 3, 3, 3, 1, 1, 1],
            ],
        ),
        // Cheap items only agent 0 finds cheap pile up on her.
        (
            "one agent with all the cheap items",
            vec![
                vec![1, 1, 1, 1, 1, 1, 1, 3, 3],
                vec![3, 3, 3, 3, 3, 3, 3, 1, 3],
                vec![3, 3, 3, 3, 3, 3, 3, 3, 3],
                vec![3, 3, 3, 3, 3, 3, 3, 3, 3],
            ],
        ),
        (
            "balanced cheap items",
            vec![
                vec![1, 1, 3, 3, 1, 3, 1, 3, 3],
                vec![3, 1, 1, 3, 3, 1, 1, 3, 3],
                vec![1, 3, 1, 1, 3, 3, 1, 1, 3],
                vec![3, 3, 3, 1, 1, 1, 1, 1, 3],
            ],
        ),
    ];
    for (name, rows) in cases {
        let inst = Instance::from_integers(&rows).unwrap();
        let out = solve_bi_general_traced(&inst).unwrap();
        let alpha = min_efx_alpha(&inst, &out.allocation).unwrap().alpha;
        println!("{name}: {:?}", out.branch);
        if let Some(x0) = &out.x0 {
            println!("  partial allocation {:?}", x0.bundles);
        }
        println!(
            "  bundles {:?}, alpha {alpha} (bound {})",
            out.allocation.bundles(),
            inst.n() - 1
        );
    }
}
