//! The n >= 4 solver: the tail fallback on a small instance and the full
//! construction on a large one.

use chorefair::general_n::{bound, solve_general_n_traced};
use chorefair::model::{min_efx_alpha, Instance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(name: &str, inst: &Instance) {
    let out = solve_general_n_traced(inst).unwrap();
    let alpha = min_efx_alpha(inst, &out.allocation).unwrap().alpha;
    println!("{name}: n = {}, m = {}", inst.n(), inst.m());
    match out.fallback_agent {
        Some(a) => println!("  tail fallback on agent {a}"),
        None => {
            let sets = out.sets.as_ref().unwrap();
            println!("  items large to everybody: {:?}", sets.common);
            println!("  committed {:?}, sharing {:?}", out.committed, out.sharing);
            if let Some(parts) = &out.partition {
                println!(
                    "  even partition sizes {:?}",
                    parts.iter().map(Vec::len).collect::<Vec<_>>()
                );
            }
        }
    }
    println!("  alpha {alpha} (bound {})", bound(inst.n()));
}

fn main() {
    let small = Instance::from_integers(&[
        [5, 4, 3, 2, 1, 1],
        [1, 2, 3, 4, 5, 6],
        [3, 3, 3, 3, 3, 3],
        [9, 1, 1, 1, 1, 1],
    ])
    .unwrap();
    report("small", &small);

    // Sixty nearly equal items and a few expensive ones: no agent's tail is
    // cheap enough for the fallback.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rows: Vec<Vec<i64>> = (0..4)
        .map(|i| {
            (0..60)
                .map(|e| {
                    if e == i {
                        3000
                    } else {
                        rng.gen_range(950..=1000)
                    }
                })
                .collect()
        })
        .collect();
    report("dense", &Instance::from_integers(&rows).unwrap());
}
