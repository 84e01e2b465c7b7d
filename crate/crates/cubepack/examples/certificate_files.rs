//! The certificate file format: write a packing, read it back, tamper with
//! it, and watch the audit object.
//!
//! ```text
//! cargo run --example certificate_files
//! ```

use cubepack::audit::verify_packing;
use cubepack::certfile::PackingCertificate;
use cubepack::hampath::pack_odd_path_power;

fn main() {
    let pack = pack_odd_path_power(3, 1, 4).unwrap();
    let cert = pack.certificate();
    let text = cert.to_text();
    println!("--- certificate ({} bytes) ---", text.len());
    for line in text.lines().take(6) {
        println!("{line}");
    }
    println!("...");

    let parsed = PackingCertificate::parse(&text).unwrap();
    assert_eq!(parsed, cert);
    println!("round-trip: parse(serialize(x)) == x");

    // perturb one covered vertex: still parses, audit rejects
    let broken = text.replacen("0,0,1,1", "0,1,1,1", 1);
    let tampered = PackingCertificate::parse(&broken).unwrap();
    let report = verify_packing(&tampered);
    println!("tampered certificate valid = {}", report.valid);
    if let Some(first) = report.failures.first() {
        println!("  first failure: {}", first.reason);
    }
}
