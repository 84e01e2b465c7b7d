//! Pack hypercubes by products of Hamilton-ordered path blocks and compare
//! the measured remainder with the committed closed form.
//!
//! ```text
//! cargo run --example path_power_packing
//! ```

use cubepack::audit::verify_packing;
use cubepack::hampath::pack_any_path_power;

fn main() {
    println!(
        "{:>3} {:>3} {:>3} {:>10} {:>10}",
        "l", "t", "n", "uncovered", "predicted"
    );
    for (l, t) in [(3u64, 1usize), (3, 2), (5, 1), (6, 1), (6, 2), (4, 2)] {
        let min = cubepack::hampath::any_power_min(l, t).unwrap();
        for n in min..=min + 4 {
            let pack = pack_any_path_power(l, t, n).unwrap();
            let report = verify_packing(&pack.certificate());
            assert!(report.valid);
            println!(
                "{l:>3} {t:>3} {n:>3} {:>10} {:>10}",
                pack.uncovered.len(),
                pack.params.predicted_uncovered
            );
        }
    }
    println!("\nblock orders of the (P_6)^1 packing of Q_4:");
    let pack = pack_any_path_power(6, 1, 4).unwrap();
    for (i, copy) in pack.copies.iter().enumerate() {
        let block = &copy.blocks[0];
        let order: Vec<String> = block
            .order
            .iter()
            .map(|&w| block.sub_box.vertex_at(w).to_string())
            .collect();
        println!(
            "  copy {i}: coords {:?}, order {}",
            block.host_coords,
            order.join(" -> ")
        );
    }
}
