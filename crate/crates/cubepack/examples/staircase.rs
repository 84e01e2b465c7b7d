//! Partition `block x P_{l-1}` into l-1 induced copies of P_l, for
//! Hamilton-ordered blocks with and without chords.
//!
//! ```text
//! cargo run --example staircase
//! ```

use cubepack::audit::verify_packing;
use cubepack::grid::Grid;
use cubepack::hampath::HamOrderedBlock;
use cubepack::induced::staircase_partition;

fn main() {
    let cases = [
        ("corner path (induced P_3)", vec![0u64, 1, 3]),
        (
            "spanning path of the square (has the chord 00-10)",
            vec![0, 1, 3, 2],
        ),
    ];
    for (name, order) in cases {
        let block = HamOrderedBlock {
            sub_box: Grid::hypercube(2).unwrap(),
            host_coords: vec![0, 1],
            order,
        };
        let cert = staircase_partition(&block).unwrap();
        let report = verify_packing(&cert);
        println!("{name}:");
        println!(
            "  {} induced paths over host {:?}, valid = {}",
            cert.placements.len(),
            cert.host,
            report.valid
        );
        for pl in &cert.placements {
            let pretty: Vec<String> = pl
                .image
                .iter()
                .map(|&v| cert.host.vertex_at(v).to_string())
                .collect();
            println!("    {}", pretty.join(" -> "));
        }
    }
}
