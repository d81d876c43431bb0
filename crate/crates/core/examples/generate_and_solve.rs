//! Generate an instance file, solve it, write the allocation and verify it
//! again from disk.

use chorefair::generate::{generate_instance, GenParams, GeneratorKind};
use chorefair::io::{self, AllocationFile};
use chorefair::runner::{run_verify, solve_file, Algorithm};

fn main() {
    let dir = std::env::temp_dir().join("chorefair-example");
    std::fs::create_dir_all(&dir).unwrap();
    let inst_path = dir.join("instance.json");
    let alloc_path = dir.join("allocation.json");

    let file = generate_instance(GeneratorKind::Uniform, 5, 20, 42, &GenParams::default()).unwrap();
    io::write_text(&inst_path, &io::emit_instance(&file)).unwrap();

    let loaded = io::load_instance(&inst_path).unwrap();
    let (alloc, report) = solve_file(&loaded, Algorithm::Auto).unwrap();
    io::write_text(
        &alloc_path,
        &io::emit_allocation(&AllocationFile::new(&alloc, loaded.instance.m())),
    )
    .unwrap();
    print!("{}", report.render());

    let again = run_verify(&inst_path, &alloc_path, &report.bound).unwrap();
    assert_eq!(again.alpha, report.alpha);
    println!(
        "re-verified from {}: alpha {}",
        alloc_path.display(),
        again.alpha
    );
}
