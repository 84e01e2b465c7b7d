//! Search for Hamilton paths of `Q_n` in which every window of `l`
//! consecutive vertices induces a path. Three-windows always work (any
//! second neighbour on a walk differs in two coordinates); longer windows
//! are a finite search per dimension.
//!
//! ```text
//! cargo run --example window_hamilton
//! ```

use cubepack::oracle::{check_window_path, consecutive_induced_hamilton, Budget, SearchOutcome};

fn main() {
    println!("{:>3} {:>3} {:>8}", "l", "n", "result");
    for l in [3usize, 4, 5] {
        for n in 2..=5 {
            let outcome = consecutive_induced_hamilton(n, l, &Budget::default(), 0).unwrap();
            let token = match &outcome {
                SearchOutcome::Found(path) => {
                    assert!(check_window_path(n, l, path));
                    "SAT"
                }
                SearchOutcome::Exhausted => "UNSAT",
                SearchOutcome::OverBudget => "BUDGET",
            };
            println!("{l:>3} {n:>3} {token:>8}");
        }
    }

    // the smallest witness for 4-windows
    if let SearchOutcome::Found(path) =
        consecutive_induced_hamilton(5, 4, &Budget::default(), 0).unwrap()
    {
        println!("\na 4-window Hamilton path of Q_5 (vertex indices):");
        let pretty: Vec<String> = path.iter().map(|v| format!("{v:05b}")).collect();
        println!("  {}", pretty.join(" "));
    }
}
