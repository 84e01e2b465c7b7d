//! Command-line front end: construct certificates, verify them, and emit
//! CSV sweep reports. Exit codes: 0 success, 1 semantic failure (an audit
//! rejected the certificate), 2 usage or parse errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cubepack::antipodal;
use cubepack::audit;
use cubepack::certfile::{self, CertFile};
use cubepack::hampath::{pack_any_path_power, pack_odd_path_power, HamOrderedBlock};
use cubepack::induced::{induced_path_power_packing, staircase_partition};
use cubepack::modcover::{lift_to_path_power, one_mod_l_partition, shift_l_partition};
use cubepack::oracle::Budget;
use cubepack::report::{family_report, hamilton_sweep, FamilyKind};

#[derive(Parser)]
#[command(
    name = "cubepack",
    version,
    about = "Packing certificates for boxes and hypercubes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a certificate and write it to a file
    Construct {
        #[command(subcommand)]
        what: ConstructCmd,
    },
    /// Check a certificate file and print an audit report
    Verify(VerifyArgs),
    /// Emit CSV sweeps
    Report {
        #[command(subcommand)]
        what: ReportCmd,
    },
}

#[derive(Args)]
struct OutArg {
    /// Output path (written atomically)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Cover of Q_n by all shifts of a pattern (coverage exactly |H|)
    ShiftL {
        /// Pattern file (ambient must be a hypercube)
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        n: usize,
        /// Also lift the cover from Q_n to (P_2|H|)^n
        #[arg(long)]
        lift: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Residue-1 cover of (P_2|H|)^k by isometric copies of the pattern
    OneModL {
        #[arg(long)]
        pattern: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Packing of Q_n by block products of odd-length path segments
    OddPower {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Packing of Q_n by block products for any path length
    AnyPower {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Partition of Q_{2^s-1} into induced antipodal paths
    Ramras {
        #[arg(long)]
        s: u32,
        #[command(flatten)]
        out: OutArg,
    },
    /// Staircase partition of block x P_{l-1} (pattern file must carry an order)
    Staircase {
        #[arg(long)]
        pattern: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Induced (P_l)^t packing of Q_n
    InducedPower {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        n: usize,
        /// Cube-factor exponent override (any m with a positive piece length)
        #[arg(long)]
        m: Option<u32>,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Certificate file (pack or mcov, discriminated by header)
    path: PathBuf,
    /// Run the codimension-2 coverage checks (packings in hypercubes)
    #[arg(long)]
    codim2: bool,
    /// Audit the uncovered set as a separating family
    #[arg(long)]
    separating: bool,
    /// Subset size for the separating audit
    #[arg(long, default_value_t = 1)]
    k: usize,
}

#[derive(Subcommand)]
enum ReportCmd {
    /// Uncovered-vs-n table for a packing family
    Family {
        /// odd-power | any-power | induced-power
        #[arg(long)]
        kind: String,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        t: usize,
        /// Inclusive dimension range, e.g. 4..8
        #[arg(long)]
        n: String,
        #[arg(long)]
        m: Option<u32>,
    },
    /// SAT/UNSAT table for the window-constrained Hamilton search
    ConsecutiveHamilton {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        n: String,
        /// Node budget (default: CUBEPACK_BUDGET or 100000000)
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Construct { what } => construct(what).map(|()| ExitCode::SUCCESS),
        Command::Verify(args) => verify(args),
        Command::Report { what } => report(what).map(|()| ExitCode::SUCCESS),
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("bad range `{s}`, expected A..B"))?;
    let from = a
        .trim()
        .parse::<usize>()
        .map_err(|_| format!("bad range start `{a}`"))?;
    let to = b
        .trim()
        .parse::<usize>()
        .map_err(|_| format!("bad range end `{b}`"))?;
    Ok((from, to))
}

fn default_budget() -> Budget {
    match std::env::var("CUBEPACK_BUDGET")
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
    {
        Some(nodes) => Budget::nodes(nodes),
        None => Budget::default(),
    }
}

fn load_pattern(path: &PathBuf) -> Result<certfile::PatternFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    certfile::parse_pattern_file(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_out(path: &PathBuf, content: &str) -> Result<(), String> {
    certfile::write_atomic(path, content).map_err(|e| format!("{}: {e}", path.display()))
}

fn construct(cmd: ConstructCmd) -> Result<(), String> {
    match cmd {
        ConstructCmd::ShiftL {
            pattern,
            n,
            lift,
            out,
        } => {
            let pf = load_pattern(&pattern)?;
            let cover = shift_l_partition(&pf.graph, n).map_err(|e| e.to_string())?;
            let cover = if lift {
                lift_to_path_power(&cover, pf.graph.len() as u32).map_err(|e| e.to_string())?
            } else {
                cover
            };
            println!("entries={}", cover.entries.len());
            println!("modulus={}", cover.modulus);
            println!("residue={}", cover.residue);
            write_out(&out.out, &certfile::cover_to_text(&cover))
        }
        ConstructCmd::OneModL { pattern, out } => {
            let pf = load_pattern(&pattern)?;
            let cover = one_mod_l_partition(&pf.graph).map_err(|e| e.to_string())?;
            println!("entries={}", cover.entries.len());
            println!("modulus={}", cover.modulus);
            println!("residue={}", cover.residue);
            write_out(&out.out, &certfile::cover_to_text(&cover))
        }
        ConstructCmd::OddPower { l, t, n, out } => {
            let pack = pack_odd_path_power(l, t, n).map_err(|e| e.to_string())?;
            println!("m={}", pack.params.m);
            println!("r={}", pack.params.r);
            println!("a={}", pack.params.a);
            println!("copies={}", pack.copies.len());
            println!("uncovered={}", pack.uncovered.len());
            write_out(&out.out, &pack.certificate().to_text())
        }
        ConstructCmd::AnyPower { l, t, n, out } => {
            let pack = pack_any_path_power(l, t, n).map_err(|e| e.to_string())?;
            println!("v={}", pack.params.valuation);
            println!("odd_core={}", pack.params.odd_core);
            println!("m={}", pack.params.m);
            println!("r={}", pack.params.r);
            println!("a={}", pack.params.a);
            println!("copies={}", pack.copies.len());
            println!("uncovered={}", pack.uncovered.len());
            write_out(&out.out, &pack.certificate().to_text())
        }
        ConstructCmd::Ramras { s, out } => {
            let dec = antipodal::ramras_decomposition(s).map_err(|e| e.to_string())?;
            println!("n={}", dec.n);
            println!("paths={}", dec.paths.len());
            println!("uncovered=0");
            write_out(&out.out, &dec.certificate().to_text())
        }
        ConstructCmd::Staircase { pattern, out } => {
            let pf = load_pattern(&pattern)?;
            let order = pf
                .order
                .ok_or_else(|| "staircase needs a pattern file with an order field".to_string())?;
            let block = HamOrderedBlock {
                sub_box: pf.graph.ambient().clone(),
                host_coords: (0..pf.graph.ambient().ndim()).collect(),
                order: order.iter().map(|&pos| pf.graph.verts()[pos]).collect(),
            };
            let cert = staircase_partition(&block).map_err(|e| e.to_string())?;
            println!("paths={}", cert.placements.len());
            println!("uncovered={}", cert.uncovered.len());
            write_out(&out.out, &cert.to_text())
        }
        ConstructCmd::InducedPower { l, t, n, m, out } => {
            let pack = induced_path_power_packing(l, t, n, m).map_err(|e| e.to_string())?;
            println!("m={}", pack.params.m);
            println!("a={}", pack.params.a);
            println!("b={}", pack.params.b);
            println!("copies={}", pack.placements.len());
            println!("uncovered={}", pack.uncovered.len());
            write_out(&out.out, &pack.certificate().to_text())
        }
    }
}

fn verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let text =
        std::fs::read_to_string(&args.path).map_err(|e| format!("{}: {e}", args.path.display()))?;
    let parsed = certfile::parse_any(&text).map_err(|e| format!("{}: {e}", args.path.display()))?;
    match parsed {
        CertFile::Pack(cert) => {
            let base = audit::verify_packing(&cert);
            println!("{}", base.to_json());
            let mut ok = base.valid;
            if args.codim2 {
                match audit::codim2_coverage_check(&cert) {
                    Ok(report) => {
                        println!("{}", report.to_json());
                        ok &= report.pass;
                    }
                    Err(e) => {
                        println!("{{\"codim2_error\":\"{e}\"}}");
                        ok = false;
                    }
                }
            }
            if args.separating {
                if !cert.host.is_hypercube() {
                    return Err("separating audit needs a hypercube host".into());
                }
                let report = audit::separating_audit(cert.host.ndim(), &base.uncovered, args.k);
                println!("{}", report.to_json());
            }
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        CertFile::Cover(cover) => {
            if args.codim2 || args.separating {
                return Err("codim2/separating audits apply to packing certificates".into());
            }
            let report = audit::verify_multiset(&cover);
            println!("{}", report.to_json());
            Ok(if report.valid {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn report(cmd: ReportCmd) -> Result<(), String> {
    match cmd {
        ReportCmd::Family { kind, l, t, n, m } => {
            let (from, to) = parse_range(&n)?;
            let kind = match kind.as_str() {
                "odd-power" => FamilyKind::OddPower,
                "any-power" => FamilyKind::AnyPower,
                "induced-power" => FamilyKind::InducedPower { m_override: m },
                other => return Err(format!("unknown family kind `{other}`")),
            };
            let csv = family_report(kind, l, t, from, to).map_err(|e| e.to_string())?;
            print!("{csv}");
            Ok(())
        }
        ReportCmd::ConsecutiveHamilton { l, n, budget, seed } => {
            let (from, to) = parse_range(&n)?;
            let budget = budget.map(Budget::nodes).unwrap_or_else(default_budget);
            let csv = hamilton_sweep(l, from, to, &budget, seed).map_err(|e| e.to_string())?;
            print!("{csv}");
            Ok(())
        }
    }
}
