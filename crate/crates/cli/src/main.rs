//! kronctrl: controllability of Kronecker product networks from the factor
//! networks' eigenstructure, in exact rational arithmetic.
//!
//! Exit codes: 0 controllable (or success), 1 uncontrollable (or fixture
//! mismatch), 2 parse/dimension errors, 3 oracle-only fallback (irrational
//! spectrum), 4 oracle disagreement or failed self-check.

mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use kronctrl_core::diffcheck::{run_differential, DiffConfig};
use kronctrl_core::{
    check_kron, check_kron_diagonalizable, check_kron_with_oracle, check_mas, check_mas_legacy,
    eigenstructure, fixtures, is_diagonalizable, kalman_oracle, mas_conditions,
    verify_eigenstructure, ControllabilityReport, Error, MASystem, Mat, Method, Verdict,
};

const EXIT_UNCONTROLLABLE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_ORACLE_ONLY: u8 = 3;
const EXIT_DISAGREEMENT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "kronctrl",
    about = "Controllability of Kronecker product networks via exact factor eigenstructure",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckMethod {
    /// Fast path when a factor is diagonalizable, full test otherwise.
    Auto,
    /// Per-collision-class rank test on lifted eigenvector bases.
    Full,
    /// Four-condition test requiring a diagonalizable factor.
    Fast,
}

#[derive(Subcommand)]
enum Command {
    /// Compose two graph files into their Kronecker product graph.
    Kron {
        /// First factor graph file.
        g1: PathBuf,
        /// Second factor graph file.
        g2: PathBuf,
        /// Output path for the composite graph file.
        out: PathBuf,
        /// Also write a DOT rendering with "i,p" pair labels.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Print the exact eigenvalues and left Jordan chains of a matrix or
    /// graph.
    Eigen {
        /// Matrix file or graph file.
        input: PathBuf,
        /// Machine-readable output.
        #[arg(long)]
        json: bool,
        /// Re-verify every chain relation and independence exactly.
        #[arg(long)]
        verify: bool,
    },
    /// Decide controllability of (A1 (x) A2, B1 (x) B2).
    Check {
        /// First factor: matrix or graph file.
        a1: PathBuf,
        /// Actuated nodes of factor 1, e.g. "2" or "1,2" or "all".
        sel1: String,
        /// Second factor: matrix or graph file.
        a2: PathBuf,
        /// Actuated nodes of factor 2.
        sel2: String,
        /// Decision procedure.
        #[arg(long, value_enum, default_value = "auto")]
        method: CheckMethod,
        /// Cross-check against the Kalman rank oracle; exit 4 on
        /// disagreement.
        #[arg(long)]
        verify: bool,
        /// Machine-readable report.
        #[arg(long)]
        json: bool,
    },
    /// Decide controllability of a leader-follower system (-L (x) H,
    /// Delta (x) B) and compare with the legacy two-condition criterion.
    Mas {
        /// Coupling graph file (no self-loops).
        graph: PathBuf,
        /// Leader nodes, e.g. "1" or "1,3" or "all".
        #[arg(long)]
        leaders: String,
        /// Inner coupling matrix H (matrix file).
        #[arg(long)]
        coupling: PathBuf,
        /// Agent input matrix B (matrix file).
        #[arg(long)]
        input: PathBuf,
        /// Machine-readable report.
        #[arg(long)]
        json: bool,
    },
    /// Differential check: random factor pairs, structured test against the
    /// Kalman and eigenvector-orthogonality oracles.
    Verify {
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
    /// Run the bundled worked systems and compare against their known
    /// verdicts.
    Examples {
        /// Machine-readable results array.
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Kron { g1, g2, out, dot } => cmd_kron(&g1, &g2, &out, dot.as_deref()),
        Command::Eigen { input, json, verify } => cmd_eigen(&input, json, verify),
        Command::Check {
            a1,
            sel1,
            a2,
            sel2,
            method,
            verify,
            json,
        } => cmd_check(&a1, &sel1, &a2, &sel2, method, verify, json),
        Command::Mas {
            graph,
            leaders,
            coupling,
            input,
            json,
        } => cmd_mas(&graph, &leaders, &coupling, &input, json),
        Command::Verify {
            trials,
            seed,
            max_size,
        } => cmd_verify(trials, seed, max_size),
        Command::Examples { json } => cmd_examples(json),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_PARSE)
        }
    }
}

fn cmd_kron(
    g1: &std::path::Path,
    g2: &std::path::Path,
    out: &std::path::Path,
    dot: Option<&std::path::Path>,
) -> Result<u8, Error> {
    let first = io::load_graph(g1)?;
    let second = io::load_graph(g2)?;
    let composite = first.kron_graph(&second);
    std::fs::write(out, composite.serialize())
        .map_err(|e| Error::Invalid(format!("{}: {e}", out.display())))?;
    if let Some(dot_path) = dot {
        let rendered = composite.to_dot(Some((first.node_count(), second.node_count())));
        std::fs::write(dot_path, rendered)
            .map_err(|e| Error::Invalid(format!("{}: {e}", dot_path.display())))?;
    }
    println!(
        "composite: {} nodes, {} edges -> {}",
        composite.node_count(),
        composite.edge_count(),
        out.display()
    );
    Ok(0)
}

fn cmd_eigen(input: &std::path::Path, json: bool, verify: bool) -> Result<u8, Error> {
    let a = io::load_matrix(input)?;
    let es = eigenstructure(&a)?;
    let verified = verify.then(|| verify_eigenstructure(&a, &es));
    if json {
        let value = json!({
            "eigenstructure": es,
            "verified": verified,
        });
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    } else {
        println!("dimension: {}", es.dimension);
        println!("complete: {}", es.complete);
        for lambda in es.eigenvalues() {
            let blocks: Vec<&kronctrl_core::JordanBlockChain> =
                es.blocks.iter().filter(|b| b.eigenvalue == lambda).collect();
            let algebraic: usize = blocks.iter().map(|b| b.size).sum();
            println!(
                "eigenvalue {lambda}: algebraic {algebraic}, geometric {}",
                blocks.len()
            );
            for block in blocks {
                println!("  block size {}", block.size);
                for (k, v) in block.chain.iter().enumerate() {
                    println!("    v^{} = {:?}", k + 1, v);
                }
            }
        }
        if let Some(ok) = verified {
            println!("self-check: {}", if ok { "ok" } else { "FAILED" });
        }
    }
    if verified == Some(false) {
        return Ok(EXIT_DISAGREEMENT);
    }
    Ok(0)
}

fn print_report(report: &ControllabilityReport) {
    println!("verdict: {}", verdict_str(report.verdict));
    println!("method: {}", method_str(report.method));
    if !report.classes.is_empty() {
        println!("classes:");
        for c in &report.classes {
            println!(
                "  sigma={} dim={} rank={} {}",
                c.sigma,
                c.dim,
                c.rank,
                if c.pass { "pass" } else { "FAIL" }
            );
        }
    }
    if let Some(w) = &report.witness {
        println!("witness: {w:?}");
    }
    if let Some(agree) = report.oracle_agreement {
        println!("oracle agreement: {agree}");
    }
    if let Some(note) = &report.note {
        println!("note: {note}");
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Controllable => "controllable",
        Verdict::Uncontrollable => "uncontrollable",
        Verdict::OracleOnly => "oracle_only",
    }
}

fn method_str(m: Method) -> &'static str {
    match m {
        Method::CollisionRank => "collision_rank",
        Method::DiagonalizableFactor => "diagonalizable_factor",
        Method::LeaderFollower => "leader_follower",
        Method::KalmanOracle => "kalman_oracle",
    }
}

fn report_exit(report: &ControllabilityReport) -> u8 {
    if report.oracle_agreement == Some(false) {
        return EXIT_DISAGREEMENT;
    }
    match report.verdict {
        Verdict::Controllable => 0,
        Verdict::Uncontrollable => EXIT_UNCONTROLLABLE,
        Verdict::OracleOnly => EXIT_ORACLE_ONLY,
    }
}

fn cmd_check(
    a1_path: &std::path::Path,
    sel1: &str,
    a2_path: &std::path::Path,
    sel2: &str,
    method: CheckMethod,
    verify: bool,
    json: bool,
) -> Result<u8, Error> {
    let a1 = io::load_matrix(a1_path)?;
    let a2 = io::load_matrix(a2_path)?;
    let b1 = io::parse_selection(sel1, a1.rows())?;
    let b2 = io::parse_selection(sel2, a2.rows())?;

    let use_fast = match method {
        CheckMethod::Full => false,
        CheckMethod::Fast => true,
        // The fast path needs both spectra rational and one factor
        // diagonalizable; anything else dispatches to the full test.
        CheckMethod::Auto => match (is_diagonalizable(&a1), is_diagonalizable(&a2)) {
            (Ok(d1), Ok(d2)) => d1 || d2,
            _ => false,
        },
    };
    let mut report = if use_fast {
        check_kron_diagonalizable(&a1, &b1, &a2, &b2)?
    } else if verify {
        check_kron_with_oracle(&a1, &b1, &a2, &b2)?
    } else {
        check_kron(&a1, &b1, &a2, &b2)?
    };
    if verify && report.oracle_agreement.is_none() {
        let oracle = kalman_oracle(&a1.kron(&a2), &b1.matrix().kron(&b2.matrix()))?;
        report.oracle_agreement = Some(match report.is_controllable() {
            Some(answer) => answer == oracle,
            None => true,
        });
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        print_report(&report);
    }
    Ok(report_exit(&report))
}

fn cmd_mas(
    graph: &std::path::Path,
    leaders: &str,
    coupling: &std::path::Path,
    input: &std::path::Path,
    json: bool,
) -> Result<u8, Error> {
    let g = io::load_graph(graph)?;
    let laplacian = g.laplacian()?;
    let leaders = io::parse_selection(leaders, g.node_count())?;
    let h = Mat::parse_text(&io::read_input(coupling)?)?;
    let b = Mat::parse_text(&io::read_input(input)?)?;
    let sys = MASystem::new(laplacian, h, leaders, b)?;

    let conditions = mas_conditions(&sys)?;
    let report = check_mas(&sys)?;
    let legacy = check_mas_legacy(&sys)?;

    if json {
        let value = json!({
            "criterion": report,
            "conditions": {
                "pair_controllable": conditions.pair_controllable,
                "input_full_rank": conditions.input_full_rank,
                "coupling_zero_needs_all_leaders": conditions.coupling_zero_needs_all_leaders,
            },
            "legacy": {
                "verdict": verdict_word(legacy.legacy_controllable),
                "oracle": verdict_word(legacy.oracle_controllable),
                "agrees_with_oracle": legacy.agrees_with_oracle,
            },
        });
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    } else {
        print_report(&report);
        println!("conditions:");
        println!(
            "  (L, Delta) controllable:      {}",
            conditions.pair_controllable
        );
        println!(
            "  rank(B) = agent dimension:    {}",
            conditions.input_full_rank
        );
        println!(
            "  singular H needs all leaders: {}",
            conditions.coupling_zero_needs_all_leaders
        );
        println!(
            "legacy two-condition verdict: {}",
            verdict_word(legacy.legacy_controllable)
        );
        if legacy.agrees_with_oracle {
            println!("legacy criterion agrees with the Kalman oracle");
        } else {
            println!(
                "!! legacy criterion disagrees with the Kalman oracle ({})",
                verdict_word(legacy.oracle_controllable)
            );
        }
    }
    Ok(report_exit(&report))
}

fn verdict_word(controllable: bool) -> &'static str {
    if controllable {
        "controllable"
    } else {
        "uncontrollable"
    }
}

fn cmd_verify(trials: u64, seed: u64, max_size: usize) -> Result<u8, Error> {
    if trials == 0 {
        return Err(Error::Invalid("trials must be at least 1".into()));
    }
    if max_size == 0 {
        return Err(Error::Invalid("max size must be at least 1".into()));
    }
    let cfg = DiffConfig {
        trials,
        seed,
        max_size,
    };
    println!("differential check: trials={trials} seed={seed} max_size={max_size}");
    let summary = run_differential(&cfg);
    print!("{summary}");
    Ok(if summary.failed() == 0 {
        0
    } else {
        EXIT_DISAGREEMENT
    })
}

fn cmd_examples(json: bool) -> Result<u8, Error> {
    struct Row {
        name: &'static str,
        expected: &'static str,
        got: String,
        matched: bool,
    }
    let mut rows = Vec::new();

    for fixture in fixtures::kron_fixtures() {
        let report = check_kron_with_oracle(&fixture.a1, &fixture.b1, &fixture.a2, &fixture.b2)?;
        let matched = report.is_controllable() == Some(fixture.controllable)
            && report.oracle_agreement == Some(true);
        rows.push(Row {
            name: fixture.name,
            expected: verdict_word(fixture.controllable),
            got: verdict_str(report.verdict).to_string(),
            matched,
        });
    }

    let mas = fixtures::path_counterexample();
    let report = check_mas(&mas.system)?;
    let legacy = check_mas_legacy(&mas.system)?;
    let matched = report.is_controllable() == Some(mas.controllable)
        && legacy.legacy_controllable == mas.legacy_controllable
        && legacy.agrees_with_oracle == (mas.controllable == mas.legacy_controllable);
    rows.push(Row {
        name: mas.name,
        expected: verdict_word(mas.controllable),
        got: format!(
            "{} (legacy: {})",
            verdict_str(report.verdict),
            verdict_word(legacy.legacy_controllable)
        ),
        matched,
    });

    let all_ok = rows.iter().all(|r| r.matched);
    if json {
        let value: Vec<serde_json::Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "expected": r.expected,
                    "verdict": r.got,
                    "match": r.matched,
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    } else {
        println!("{:<28} {:<16} {:<40} match", "name", "expected", "verdict");
        for r in &rows {
            println!(
                "{:<28} {:<16} {:<40} {}",
                r.name,
                r.expected,
                r.got,
                if r.matched { "yes" } else { "NO" }
            );
        }
        println!(
            "{}/{} verdicts match",
            rows.iter().filter(|r| r.matched).count(),
            rows.len()
        );
    }
    Ok(if all_ok { 0 } else { EXIT_UNCONTROLLABLE })
}
