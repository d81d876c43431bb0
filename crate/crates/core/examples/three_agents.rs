//! The three-agent solver on a few instances, one per construction.

use chorefair::model::{min_efx_alpha, Instance};
use chorefair::three_agents::solve_three_traced;

fn main() {
    let instances: [(&str, Vec<Vec<i64>>); 4] = [
        (
            "many cheap items",
            vec![
                vec![1; 12],
                vec![2; 12],
                vec![1, 2, 3, 1, 2, 3, 1, 2, 3, 1, 2, 3],
            ],
        ),
        (
            "one costly item each",
            vec![
                vec![40, 1, 1, 1, 1, 1, 1, 1, 1, 1],
                vec![1, 40, 1, 1, 1, 1, 1, 1, 1, 1],
                vec![1, 1, 40, 1, 1, 1, 1, 1, 1, 1],
            ],
        ),
        (
            "one agent with a costly item",
            vec![
                vec![30, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2],
                vec![1; 12],
                vec![2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1],
            ],
        ),
        (
            "cheap tail",
            vec![vec![9, 9, 1, 1], vec![5, 5, 5, 5], vec![1, 2, 3, 4]],
        ),
    ];
    for (name, rows) in instances {
        let inst = Instance::from_integers(&rows).unwrap();
        let out = solve_three_traced(&inst).unwrap();
        let alpha = min_efx_alpha(&inst, &out.allocation).unwrap().alpha;
        println!("{name}: {:?}", out.case);
        println!(
            "  bundles {:?}, alpha {alpha} (bound 5)",
            out.allocation.bundles()
        );
        if let Some(parts) = out.placement {
            println!("  placement {parts:?}");
        }
    }
}
