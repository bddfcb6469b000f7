//! Command-line interface: analyze, build graphs, enumerate roots, classify
//! against the built-in rank-4 tables, and re-verify those tables.
//!
//! Exit codes: 0 = success / finite / match found; 1 = negative verdict
//! (not i-finite, limits exceeded, no match, failed verification); 2 =
//! usage or parse error; 3 = internal invariant violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use arsys::braiding::{cartan_row, dynkin_of, is_indecomposable, BraidError};
use arsys::cartangraph::{
    build_graph, check_neighborhood_dichotomy, good_a4_at, good_b4_at, is_standard, CartanGraph,
    NeighborhoodReport, DEFAULT_MAX_POINTS,
};
use arsys::classification::{builtin_rows, canonical_assignments, match_diagram, verify_row};
use arsys::rootsystem::{enumerate_roots, FinitenessVerdict, DEFAULT_MAX_POS_ROOTS};
use arsys::textio::{
    export_dot, graph_error_json, graph_json, matches_json, parse_input, reports_json,
    roots_json, ParsedInput,
};

#[derive(Parser)]
#[command(
    name = "arsys",
    version,
    about = "Weyl-groupoid root systems of diagonal braidings, with the rank-4 classification tables built in"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the generalized Cartan matrix and per-index i-finiteness.
    Analyze(InputArgs),
    /// Build the semi-Cartan graph and report its points.
    Graph(InputArgs),
    /// Enumerate real roots and report the finiteness verdict.
    Roots(InputArgs),
    /// Match the input against the built-in rank-4 classification rows.
    Classify(InputArgs),
    /// Report good A4/B4 neighborhoods point by point.
    Neighborhoods(InputArgs),
    /// Re-verify every built-in table row under canonical assignments.
    VerifyTables(Flags),
}

#[derive(Args)]
struct InputArgs {
    /// Input document path.
    input: PathBuf,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Cap on distinct semi-Cartan graph points.
    #[arg(long, default_value_t = DEFAULT_MAX_POINTS)]
    max_points: usize,
    /// Cap on positive roots per point during enumeration.
    #[arg(long, default_value_t = DEFAULT_MAX_POS_ROOTS)]
    max_roots: usize,
    /// Write the exchange graph as DOT to this path.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write a JSON report to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Suppress informational output (never the verdict line).
    #[arg(long)]
    quiet: bool,
}

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze(a) => with_input(&a, cmd_analyze),
        Command::Graph(a) => with_input(&a, cmd_graph),
        Command::Roots(a) => with_input(&a, cmd_roots),
        Command::Classify(a) => with_input(&a, cmd_classify),
        Command::Neighborhoods(a) => with_input(&a, cmd_neighborhoods),
        Command::VerifyTables(f) => cmd_verify_tables(&f),
    };
    ExitCode::from(code)
}

fn with_input(args: &InputArgs, run: fn(&ParsedInput, &Flags) -> u8) -> u8 {
    let text = match std::fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.input.display());
            return EXIT_USAGE;
        }
    };
    let parsed = match parse_input(&text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    for w in &parsed.warnings {
        eprintln!("{w}");
    }
    if !is_indecomposable(&parsed.object.to_braiding()) {
        eprintln!("warning: the braiding matrix is decomposable; proceeding anyway");
    }
    run(&parsed, &args.flags)
}

fn write_out(path: &Option<PathBuf>, contents: &str, what: &str) -> Result<(), u8> {
    if let Some(path) = path {
        if let Err(e) = std::fs::write(path, contents) {
            eprintln!("error: cannot write {what} to {}: {e}", path.display());
            return Err(EXIT_USAGE);
        }
    }
    Ok(())
}

fn built_graph(parsed: &ParsedInput, flags: &Flags) -> Result<CartanGraph, u8> {
    match build_graph(&parsed.object.to_braiding(), flags.max_points) {
        Ok(g) => Ok(g),
        Err(e) => {
            println!("{e}");
            let json = graph_error_json(&e).to_string();
            write_out(&flags.json, &json, "JSON")?;
            Err(EXIT_NEGATIVE)
        }
    }
}

fn cmd_analyze(parsed: &ParsedInput, flags: &Flags) -> u8 {
    let m = parsed.object.to_braiding();
    let d = dynkin_of(&m);
    let mut rows: Vec<Option<Vec<i64>>> = Vec::new();
    for i in 0..d.theta() {
        match cartan_row(&d, i) {
            Ok(row) => {
                if !flags.quiet {
                    println!(
                        "a[{}] = {:?}  (i-finite)",
                        i + 1,
                        row
                    );
                }
                rows.push(Some(row));
            }
            Err(BraidError::NotIFinite { i, j }) => {
                if !flags.quiet {
                    println!("a[{}] undefined: not i-finite at j = {}", i + 1, j + 1);
                }
                rows.push(None);
            }
            Err(e) => {
                eprintln!("internal error: {e}");
                return EXIT_INTERNAL;
            }
        }
    }
    let all_finite = rows.iter().all(Option::is_some);
    println!(
        "verdict: {}",
        if all_finite { "i-finite" } else { "not i-finite" }
    );
    let json = serde_json::json!({
        "cartan_rows": rows,
        "i_finite": all_finite,
        "diagram": d.compact_string(),
    })
    .to_string();
    if let Err(c) = write_out(&flags.json, &json, "JSON") {
        return c;
    }
    if all_finite {
        0
    } else {
        EXIT_NEGATIVE
    }
}

fn cmd_graph(parsed: &ParsedInput, flags: &Flags) -> u8 {
    let g = match built_graph(parsed, flags) {
        Ok(g) => g,
        Err(c) => return c,
    };
    if !flags.quiet {
        for p in g.points() {
            println!("point {}: {}", p.id, p.diagram.compact_string());
        }
    }
    println!(
        "graph: {} points, standard = {}",
        g.points().len(),
        is_standard(&g)
    );
    if let Err(c) = write_out(&flags.dot, &export_dot(&g), "DOT") {
        return c;
    }
    if let Err(c) = write_out(&flags.json, &graph_json(&g).to_string(), "JSON") {
        return c;
    }
    0
}

fn cmd_roots(parsed: &ParsedInput, flags: &Flags) -> u8 {
    let g = match built_graph(parsed, flags) {
        Ok(g) => g,
        Err(c) => return c,
    };
    let verdict = enumerate_roots(&g, flags.max_roots);
    let json = roots_json(&g, &verdict).to_string();
    if let Err(c) = write_out(&flags.json, &json, "JSON") {
        return c;
    }
    if let Err(c) = write_out(&flags.dot, &export_dot(&g), "DOT") {
        return c;
    }
    match &verdict {
        FinitenessVerdict::Finite(r) => {
            if !flags.quiet {
                for x in 0..g.points().len() {
                    println!("point {x}: {} positive roots", r.positive(x).len());
                }
            }
            println!(
                "verdict: Finite ({} positive roots at the origin)",
                r.positive(g.origin()).len()
            );
            0
        }
        FinitenessVerdict::ExceededLimits { stage } => {
            println!("verdict: ExceededLimits ({stage})");
            EXIT_NEGATIVE
        }
        FinitenessVerdict::MixedSignRoot { point, root } => {
            println!("verdict: MixedSignRoot at point {point}: {root:?}");
            EXIT_NEGATIVE
        }
    }
}

fn cmd_classify(parsed: &ParsedInput, flags: &Flags) -> u8 {
    let d = dynkin_of(&parsed.object.to_braiding());
    let matches = match_diagram(&d, &parsed.spec);
    let json = matches_json(&matches).to_string();
    if let Err(c) = write_out(&flags.json, &json, "JSON") {
        return c;
    }
    if matches.is_empty() {
        println!("no match");
        return EXIT_NEGATIVE;
    }
    for m in &matches {
        match &m.assignment {
            Some(v) => println!("row {}, parameter -> {}", m.row, v),
            None => println!("row {}", m.row),
        }
    }
    0
}

fn cmd_neighborhoods(parsed: &ParsedInput, flags: &Flags) -> u8 {
    let g = match built_graph(parsed, flags) {
        Ok(g) => g,
        Err(c) => return c,
    };
    if !flags.quiet {
        for p in g.points() {
            if let Some(w) = good_a4_at(&g, p.id) {
                println!(
                    "point {}: good A4 neighborhood, case {}, perm {:?}, (a, b) = ({}, {})",
                    p.id, w.case, w.perm, w.a, w.b
                );
            } else if let Some(perm) = good_b4_at(&g, p.id) {
                println!("point {}: good B4 neighborhood, perm {perm:?}", p.id);
            } else {
                println!("point {}: no good neighborhood", p.id);
            }
        }
    }
    let report = check_neighborhood_dichotomy(&g);
    println!("neighborhoods: {report:?}");
    let json = serde_json::json!({ "report": format!("{report:?}") }).to_string();
    if let Err(c) = write_out(&flags.json, &json, "JSON") {
        return c;
    }
    if report == NeighborhoodReport::Violation {
        EXIT_NEGATIVE
    } else {
        0
    }
}

fn cmd_verify_tables(flags: &Flags) -> u8 {
    let mut reports = Vec::new();
    let mut passed = 0usize;
    let mut total = 0usize;
    for row in builtin_rows() {
        for (spec, value) in canonical_assignments(row) {
            total += 1;
            let p = spec.characteristic();
            match verify_row(row, &spec, value.as_ref()) {
                Ok(report) => {
                    let ok = report.ok();
                    if ok {
                        passed += 1;
                    }
                    if !flags.quiet || !ok {
                        println!(
                            "row {:>3}  p = {:<2} {:>4}  {} points, {} positive roots{}",
                            report.row,
                            p,
                            if ok { "PASS" } else { "FAIL" },
                            report.points,
                            report.positive_roots,
                            if ok {
                                String::new()
                            } else {
                                format!("  {:?}", report.failures)
                            }
                        );
                    }
                    reports.push((p, report));
                }
                Err(e) => {
                    eprintln!("internal error: row {} rejects its canonical assignment: {e}", row.id);
                    return EXIT_INTERNAL;
                }
            }
        }
    }
    println!("verify-tables: {passed}/{total} PASS");
    let json = reports_json(&reports).to_string();
    if let Err(c) = write_out(&flags.json, &json, "JSON") {
        return c;
    }
    if passed == total {
        0
    } else {
        EXIT_NEGATIVE
    }
}
