//! The exhaustive optimum next to what the solvers achieve.

use chorefair::generate::{generate_instance, GenParams, GeneratorKind};
use chorefair::model::min_efx_alpha;
use chorefair::model::ratio;
use chorefair::oracle::{oracle_min_alpha, DEFAULT_BUDGET};
use chorefair::runner::{solve_with, Algorithm};

fn main() {
    let bi = GenParams {
        eps: ratio(1, 3),
        p: ratio(1, 2),
    };
    let cases = [
        (GeneratorKind::Uniform, 3, 9, GenParams::default()),
        (GeneratorKind::Ido, 3, 10, GenParams::default()),
        (GeneratorKind::Bivalued, 3, 8, bi.clone()),
        (GeneratorKind::Bivalued, 4, 8, bi),
        (GeneratorKind::Uniform, 4, 8, GenParams::default()),
    ];
    println!(
        "{:<10} {:>2} {:>3} {:>10} {:>10} {:>8} {:>8}",
        "kind", "n", "m", "oracle", "solver", "bound", "states"
    );
    for (seed, (kind, n, m, params)) in cases.into_iter().enumerate() {
        let inst = generate_instance(kind, n, m, seed as u64, &params)
            .unwrap()
            .instance;
        let best = oracle_min_alpha(&inst, DEFAULT_BUDGET).unwrap();
        let solved = solve_with(&inst, Algorithm::Auto).unwrap();
        let alpha = min_efx_alpha(&inst, &solved.allocation).unwrap().alpha;
        assert!(best.best_alpha <= alpha);
        println!(
            "{:<10} {:>2} {:>3} {:>10} {:>10} {:>8} {:>8}",
            kind.name(),
            n,
            m,
            best.best_alpha.to_string(),
            alpha.to_string(),
            chorefair::model::format_rational(&solved.bound),
            best.states_examined
        );
    }
}
