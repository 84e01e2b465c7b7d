//! Build induced `(P_3)^t` packings of hypercubes and watch the remainder
//! stay bounded (t=1) or grow linearly (t=2).
//!
//! ```text
//! cargo run --example induced_power
//! ```

use cubepack::audit::verify_packing;
use cubepack::induced::{induced_path_power_packing, induced_power_params};

fn main() {
    let p = induced_power_params(3, Some(2)).unwrap();
    println!(
        "parameters for l=3 with m=2: a={}, b={} (so b+1 = {} blocks)",
        p.a,
        p.b,
        p.b + 1
    );

    println!(
        "\n{:>3} {:>3} {:>8} {:>10}",
        "t", "n", "copies", "uncovered"
    );
    for n in 7..=11 {
        let pack = induced_path_power_packing(3, 1, n, Some(2)).unwrap();
        let report = verify_packing(&pack.certificate());
        assert!(report.valid);
        println!(
            "{:>3} {n:>3} {:>8} {:>10}",
            1,
            pack.placements.len(),
            pack.uncovered.len()
        );
    }
    for n in 14..=16 {
        let pack = induced_path_power_packing(3, 2, n, Some(2)).unwrap();
        let report = verify_packing(&pack.certificate());
        assert!(report.valid);
        println!(
            "{:>3} {n:>3} {:>8} {:>10}",
            2,
            pack.placements.len(),
            pack.uncovered.len()
        );
    }
}
