//! Build the shift cover of a pattern (coverage exactly |H| at every vertex)
//! and lift it from the hypercube to the corresponding product of paths.
//!
//! ```text
//! cargo run --example shift_partition
//! ```

use cubepack::audit::verify_multiset;
use cubepack::grid::{Grid, PatternGraph, Vertex};
use cubepack::modcover::{lift_to_path_power, shift_l_partition};

fn main() {
    // the corner path 00, 01, 11 inside Q_2
    let pattern = PatternGraph::induced(
        Grid::hypercube(2).unwrap(),
        &[Vertex(vec![0, 0]), Vertex(vec![0, 1]), Vertex(vec![1, 1])],
    )
    .unwrap();

    let cover = shift_l_partition(&pattern, 3).unwrap();
    let report = verify_multiset(&cover);
    println!(
        "shift cover of Q_3 by {} copies: valid = {}",
        cover.entries.len(),
        report.valid
    );
    println!("  coverage counts: {:?}", report.coverage_counts);

    let lifted = lift_to_path_power(&cover, pattern.len() as u32).unwrap();
    let report = verify_multiset(&lifted);
    println!(
        "lifted to (P_6)^3 with {} vertices: valid = {}",
        lifted.host.vertex_count(),
        report.valid
    );
    println!("  coverage counts: {:?}", report.coverage_counts);
}
