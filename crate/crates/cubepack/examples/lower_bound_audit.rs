//! The remainder of any `(P_3)^3` packing of `Q_n` separates coordinates:
//! every subcube `{x_i = 1, x_j = 0}` meets each copy in a multiple of 3
//! vertices but has size `2^{n-2}`, so it must contain an uncovered vertex.
//! The uncovered subsets therefore form a separating family and number at
//! least log2(n).
//!
//! ```text
//! cargo run --example lower_bound_audit
//! ```

use cubepack::audit::{codim2_coverage_check, separating_audit, verify_packing};
use cubepack::grid::Grid;
use cubepack::oracle::{greedy_pack, p3_power_copies};

fn main() {
    for n in [6usize, 7] {
        let (pattern, copies) = p3_power_copies(3, n).unwrap();
        let host = Grid::hypercube(n).unwrap();
        let cert = greedy_pack(&host, &pattern, &copies);
        let report = verify_packing(&cert);
        assert!(report.valid);
        println!(
            "Q_{n}: greedy packing places {} copies, {} vertices uncovered",
            cert.placements.len(),
            report.uncovered.len()
        );

        let sep = separating_audit(n, &report.uncovered, 1);
        println!(
            "  separating = {}, |uncovered| = {} vs bound {:.2}",
            sep.is_separating, sep.size, sep.bound
        );

        let codim2 = codim2_coverage_check(&cert).unwrap();
        println!("  codim-2 checks pass = {}", codim2.pass);
    }
}
