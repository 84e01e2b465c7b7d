//! Partition `Q_{2^s - 1}` into induced paths whose endpoints are antipodal.
//!
//! ```text
//! cargo run --example ramras_paths
//! ```

use cubepack::antipodal::ramras_decomposition;
use cubepack::audit::verify_packing;

fn main() {
    for s in 1..=4 {
        let dec = ramras_decomposition(s).unwrap();
        let report = verify_packing(&dec.certificate());
        println!(
            "s={s}: Q_{} into {} induced antipodal paths of {} vertices, valid = {}",
            dec.n,
            dec.paths.len(),
            dec.n + 1,
            report.valid && report.uncovered.is_empty()
        );
    }

    println!("\nthe two paths of Q_3:");
    let dec = ramras_decomposition(2).unwrap();
    for path in &dec.paths {
        let pretty: Vec<String> = path
            .iter()
            .map(|&v| dec.host.vertex_at(v).to_string())
            .collect();
        println!("  {}", pretty.join(" -> "));
    }
}
