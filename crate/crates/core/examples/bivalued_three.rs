//! Exact EFX for three agents whose costs take two values.

use chorefair::bivalued::{classify_items_bi3, detect_bivalued, solve_bi_three_traced};
use chorefair::model::{min_efx_alpha, Instance};

fn main() {
    // Costs 1 and 4: after rescaling, ε = 1/4.
    let inst = Instance::from_integers(&[
        [1, 4, 4, 1, 4, 1, 1],
        [4, 1, 4, 1, 1, 4, 1],
        [4, 4, 1, 4, 1, 1, 1],
    ])
    .unwrap();
    let profile = detect_bivalued(&inst).unwrap();
    println!("epsilon = {}", profile.epsilon);
    println!(
        "classes: {:?}",
        classify_items_bi3(&profile).unwrap().classes
    );

    let out = solve_bi_three_traced(&inst).unwrap();
    let alpha = min_efx_alpha(&inst, &out.allocation).unwrap().alpha;
    println!("case {:?}", out.case);
    println!("bundles {:?}, alpha {alpha}", out.allocation.bundles());
}
