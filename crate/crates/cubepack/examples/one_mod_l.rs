//! Residue-1 covers: every vertex of `(P_2l)^k` is covered ≡ 1 (mod l) by
//! isometric copies of a k-dimensional pattern with l vertices. Writes the
//! corner-path cover to a certificate file and re-verifies it from disk.
//!
//! ```text
//! cargo run --example one_mod_l
//! ```

use cubepack::audit::verify_multiset;
use cubepack::certfile::{cover_to_text, parse_any, CertFile};
use cubepack::grid::{Grid, PatternGraph, Vertex};
use cubepack::modcover::one_mod_l_partition;

fn main() {
    let cases: Vec<(&str, PatternGraph)> = vec![
        (
            "edge in Q_1",
            PatternGraph::induced(
                Grid::hypercube(1).unwrap(),
                &[Vertex(vec![0]), Vertex(vec![1])],
            )
            .unwrap(),
        ),
        (
            "corner path in Q_2",
            PatternGraph::induced(
                Grid::hypercube(2).unwrap(),
                &[Vertex(vec![0, 0]), Vertex(vec![0, 1]), Vertex(vec![1, 1])],
            )
            .unwrap(),
        ),
        (
            "spanning 4-path of Q_2 (explicit edges)",
            PatternGraph::with_edges_from_indices(
                Grid::hypercube(2).unwrap(),
                vec![0, 1, 3, 2],
                vec![(0, 1), (1, 2), (2, 3)],
            )
            .unwrap(),
        ),
    ];

    for (name, pattern) in cases {
        let cover = one_mod_l_partition(&pattern).unwrap();
        let report = verify_multiset(&cover);
        println!(
            "{name}: host {:?}, {} entries, modulus {}, valid = {}",
            cover.host,
            cover.entries.len(),
            cover.modulus,
            report.valid
        );
        println!("  residue histogram: {:?}", report.coverage_histogram);

        // round-trip the certificate through its textual form
        let text = cover_to_text(&cover);
        match parse_any(&text).unwrap() {
            CertFile::Cover(parsed) => assert!(verify_multiset(&parsed).valid),
            _ => unreachable!(),
        }
    }
}
