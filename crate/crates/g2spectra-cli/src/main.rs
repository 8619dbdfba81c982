//! Command-line front end for the g2spectra library.
//!
//! Everything the library computes exactly — character-table validation,
//! McKay graphs, embedding surveys, joint spectral measures and their
//! verification, moment-map preimages — is exposed here as a subcommand,
//! along with artifact emitters: DOT for graphs, CSV for moment tables, and
//! SVG scatter plots of measure supports on the unit square.
//!
//! Exit codes: 0 on full success, 1 when a verification ran and found a
//! mismatch (an invalid table under `validate`, a moment or mass
//! discrepancy under `moments`/`verify-theorem`), 2 for usage and data
//! errors (unknown flags, missing files, unparsable input).
//!
//! Character-table arguments resolve in three steps: an existing file path
//! is read directly; otherwise a name is looked up in the directory named
//! by `G2SPECTRA_TABLES` (as `NAME` or `NAME.ctab`) when that variable is
//! set; otherwise the name selects one of the seven bundled tables.
//!
//! All output is deterministic: identical invocations on identical inputs
//! produce byte-identical stdout and files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use g2spectra::chartable::CharacterTable;
use g2spectra::cyclotomic::Cyclotomic;
use g2spectra::measurelib::{parse_measure, pointwise_mass, theorem_measure, JointMeasure};
use g2spectra::reptheory::{
    candidate_survey, character_of_multiset, find_embeddings, mckay_graph, CandidateOutcome,
};
use g2spectra::tables;
use g2spectra::torus::torus_preimage;
use g2spectra::verifier::{verify_moments, verify_theorem_case, VerificationReport};

/// Exact spectral data for the finite irreducible subgroups of G2.
#[derive(Parser)]
#[command(name = "g2spectra", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a character table and run its consistency checks.
    Validate {
        /// Table file path, or a name resolved via G2SPECTRA_TABLES and the
        /// bundled set.
        table: String,
    },
    /// Build the McKay graph of a character, optionally writing DOT.
    Mckay {
        /// Table file path or name.
        table: String,
        /// The generating character as irreducible names joined by `+`,
        /// e.g. `Sigma7` or `Sigma1+Sigma3+Sigma3*`.
        #[arg(long)]
        rho: String,
        /// Write the graph in DOT format to this file.
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
    /// Survey seven-dimensional characters and report which ones embed.
    Embeddings {
        /// Table file path or name.
        table: String,
    },
    /// Compare measure moments with conjugacy moments for one embedding.
    Moments {
        /// Table file path or name.
        table: String,
        /// 1-based embedding index in `embeddings` order.
        #[arg(long)]
        embedding: usize,
        /// Largest exponent checked on each axis.
        #[arg(long, default_value_t = g2spectra::verifier::DEFAULT_MAX_MOMENT)]
        max: u32,
        /// Also write the comparison as CSV to this file.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Verify the cataloged joint spectral measures of a group.
    VerifyTheorem {
        /// Group name, e.g. `PSL(2,7)` or `g22`.
        #[arg(long)]
        group: String,
        /// 1-based embedding index; all embeddings when omitted.
        #[arg(long)]
        embedding: Option<usize>,
        /// Verify the measure exactly as printed, including its documented
        /// errata, instead of the corrected form.
        #[arg(long)]
        as_printed: bool,
        /// Largest exponent checked on each axis.
        #[arg(long, default_value_t = g2spectra::verifier::DEFAULT_MAX_MOMENT)]
        max: u32,
    },
    /// Plot the support of a measure as an SVG scatter on the unit square.
    SupportPlot {
        /// Measure file to plot (mutually exclusive with --group).
        #[arg(long, value_name = "FILE")]
        measure: Option<PathBuf>,
        /// Plot the cataloged measure of this group's first embedding.
        #[arg(long)]
        group: Option<String>,
        /// Write the SVG to this file instead of stdout.
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// Invert the moment map: find (θ1, θ2) with Φ1 = x and Φ2 = y.
    Preimage {
        /// Target value of the seven-dimensional character Φ1.
        #[arg(long)]
        x: f64,
        /// Target value of the fourteen-dimensional character Φ2.
        #[arg(long)]
        y: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Validate { table } => cmd_validate(&table),
        Command::Mckay { table, rho, dot } => cmd_mckay(&table, &rho, dot.as_deref()),
        Command::Embeddings { table } => cmd_embeddings(&table),
        Command::Moments {
            table,
            embedding,
            max,
            csv,
        } => cmd_moments(&table, embedding, max, csv.as_deref()),
        Command::VerifyTheorem {
            group,
            embedding,
            as_printed,
            max,
        } => cmd_verify_theorem(&group, embedding, as_printed, max),
        Command::SupportPlot {
            measure,
            group,
            svg,
        } => cmd_support_plot(measure.as_deref(), group.as_deref(), svg.as_deref()),
        Command::Preimage { x, y } => cmd_preimage(x, y),
    }
}

/// Resolves a table argument: existing path, then `G2SPECTRA_TABLES`
/// directory (as given and with `.ctab` appended), then the bundled set.
fn resolve_table(arg: &str) -> Result<CharacterTable, String> {
    let text = resolve_table_text(arg)?;
    match text {
        Some(source) => CharacterTable::parse(&source).map_err(|e| e.to_string()),
        None => tables::load(arg).map_err(|e| e.to_string()),
    }
}

/// The raw text behind a table argument when it names a file, `None` when it
/// should fall through to the bundled set.
fn resolve_table_text(arg: &str) -> Result<Option<String>, String> {
    let direct = Path::new(arg);
    if direct.is_file() {
        return std::fs::read_to_string(direct)
            .map(Some)
            .map_err(|e| format!("cannot read {arg}: {e}"));
    }
    if let Ok(dir) = std::env::var("G2SPECTRA_TABLES") {
        for candidate in [
            Path::new(&dir).join(arg),
            Path::new(&dir).join(format!("{arg}.ctab")),
        ] {
            if candidate.is_file() {
                return std::fs::read_to_string(&candidate)
                    .map(Some)
                    .map_err(|e| format!("cannot read {}: {e}", candidate.display()));
            }
        }
    }
    Ok(None)
}

fn cmd_validate(table: &str) -> Result<ExitCode, String> {
    // For `validate` the table file itself is the object under judgment, so
    // a parse failure there is a negative verdict (exit 1); an unknown name
    // stays a usage error (exit 2).
    let parsed = match resolve_table_text(table)? {
        Some(source) => match CharacterTable::parse(&source) {
            Ok(t) => t,
            Err(e) => {
                println!("INVALID: {e}");
                return Ok(ExitCode::from(1));
            }
        },
        None => tables::load(table).map_err(|e| e.to_string())?,
    };
    let problems = parsed.validate();
    if problems.is_empty() {
        println!("OK");
        Ok(ExitCode::SUCCESS)
    } else {
        println!(
            "INVALID: {} ({} problem(s))",
            parsed.group_name,
            problems.len()
        );
        for p in &problems {
            println!("  - {p}");
        }
        Ok(ExitCode::from(1))
    }
}

/// Formats an exact value for terminal display: `p/q` when rational, a
/// `~`-prefixed float otherwise.
fn fmt_value(v: &Cyclotomic) -> String {
    match v.as_rational() {
        Some(r) => r.to_string(),
        None => format!("~{:.6}", v.to_float().re),
    }
}

fn cmd_mckay(table: &str, rho: &str, dot: Option<&Path>) -> Result<ExitCode, String> {
    let table = resolve_table(table)?;
    let mut mults = vec![0u64; table.irreps.len()];
    for part in rho.split('+') {
        let name = part.trim();
        let index = table
            .irreps
            .iter()
            .position(|r| r.name == name)
            .ok_or_else(|| {
                let known: Vec<&str> = table.irreps.iter().map(|r| r.name.as_str()).collect();
                format!(
                    "unknown character {name:?} in --rho; table {} has: {}",
                    table.group_name,
                    known.join(", ")
                )
            })?;
        mults[index] += 1;
    }
    let chi = character_of_multiset(&table, &mults).map_err(|e| e.to_string())?;
    let graph = mckay_graph(&table, &chi).map_err(|e| e.to_string())?;
    println!("McKay graph for rho = {rho} on {}", table.group_name);
    println!(
        "  vertices: {}, generator degree: {}",
        graph.vertices.len(),
        graph.generator_degree
    );
    println!("  degree balanced: {}", graph.degree_balanced());
    println!("  connected: {}", graph.is_connected());
    for (l, row) in graph.adjacency.iter().enumerate() {
        let targets: Vec<String> = row
            .iter()
            .enumerate()
            .filter(|(_, &mult)| mult > 0)
            .map(|(m, &mult)| {
                if mult == 1 {
                    graph.vertices[m].clone()
                } else {
                    format!("{}*{}", mult, graph.vertices[m])
                }
            })
            .collect();
        println!(
            "  {} ({}) -> {}",
            graph.vertices[l],
            graph.degrees[l],
            if targets.is_empty() {
                "(none)".to_owned()
            } else {
                targets.join(", ")
            }
        );
    }
    if let Some(path) = dot {
        std::fs::write(path, graph.to_dot())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        println!("wrote DOT to {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_embeddings(table: &str) -> Result<ExitCode, String> {
    let table = resolve_table(table)?;
    let reports = candidate_survey(&table).map_err(|e| e.to_string())?;
    let mut accepted = 0usize;
    for report in &reports {
        match &report.outcome {
            CandidateOutcome::Accepted(emb) => {
                accepted += 1;
                println!("candidate {}: ACCEPTED", report.rho1_name);
                println!("  rho2 = {}", emb.rho2_name);
                for (c, class) in table.classes.iter().enumerate() {
                    let (x, y) = emb.xy(c);
                    println!(
                        "  class {} (size {}): t = {}, x = {}, y = {}",
                        class.name,
                        class.size,
                        emb.class_points[c],
                        fmt_value(&x),
                        fmt_value(&y)
                    );
                }
            }
            CandidateOutcome::Rejected(reasons) => {
                println!("candidate {}: rejected", report.rho1_name);
                for r in reasons {
                    println!("  - {r}");
                }
            }
        }
    }
    println!("{} embedding(s) found on {}", accepted, table.group_name);
    Ok(ExitCode::SUCCESS)
}

fn cmd_moments(
    table: &str,
    embedding: usize,
    max: u32,
    csv: Option<&Path>,
) -> Result<ExitCode, String> {
    let table = resolve_table(table)?;
    let embeddings = find_embeddings(&table).map_err(|e| e.to_string())?;
    if embedding == 0 || embedding > embeddings.len() {
        return Err(format!(
            "{} has {} embedding(s); --embedding {embedding} is out of range (1-based)",
            table.group_name,
            embeddings.len()
        ));
    }
    let emb = &embeddings[embedding - 1];
    let mu = theorem_measure(&table.group_name, embedding, false).map_err(|e| e.to_string())?;
    let report = verify_moments(&table, emb, &mu, max).map_err(|e| e.to_string())?;
    print!("{}", render_moment_table(&report, embedding));
    if let Some(path) = csv {
        std::fs::write(path, report.moments_csv())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        println!("wrote CSV to {}", path.display());
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// Renders a full moment comparison as an aligned text table.
fn render_moment_table(report: &VerificationReport, embedding: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "moment comparison for {}, embedding {embedding} ({}), 0 <= m, n <= {}",
        report.group, report.embedding, report.max_moment
    );
    let _ = writeln!(out, "  m  n  conjugacy  measure  diff");
    for e in &report.moments {
        let _ = writeln!(
            out,
            "  {}  {}  {}  {}  {}",
            e.m,
            e.n,
            fmt_value(&e.conjugacy),
            fmt_value(&e.measure),
            fmt_value(&e.diff)
        );
    }
    let failing = report.moments.iter().filter(|e| !e.diff.is_zero()).count();
    if failing == 0 {
        let _ = writeln!(out, "all {} moments match exactly", report.moments.len());
    } else {
        let _ = writeln!(out, "{failing} of {} moments differ", report.moments.len());
    }
    out
}

fn cmd_verify_theorem(
    group: &str,
    embedding: Option<usize>,
    as_printed: bool,
    max: u32,
) -> Result<ExitCode, String> {
    let indices: Vec<usize> = match embedding {
        Some(i) => vec![i],
        None => {
            let table = tables::load(group).map_err(|e| e.to_string())?;
            let embeddings = find_embeddings(&table).map_err(|e| e.to_string())?;
            (1..=embeddings.len()).collect()
        }
    };
    let mut all_passed = true;
    for (k, &index) in indices.iter().enumerate() {
        if k > 0 {
            println!();
        }
        let report =
            verify_theorem_case(group, index, as_printed, max).map_err(|e| e.to_string())?;
        print!("{}", report.render_text());
        all_passed &= report.passed();
    }
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// Renders the support of a measure as a flat SVG scatter: one circle per
/// support point, axes θ1 and θ2 spanning the unit square.
fn support_svg(mu: &JointMeasure) -> Result<String, String> {
    let masses = pointwise_mass(mu).map_err(|e| e.to_string())?;
    // Plot area: (40, 20) to (580, 560); θ2 grows upward.
    let px = |t: f64| 40.0 + t * 540.0;
    let py = |t: f64| 560.0 - t * 540.0;
    let mut out = String::new();
    out.push_str(concat!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 600 600\" ",
        "width=\"600\" height=\"600\">\n",
        "  <rect x=\"0\" y=\"0\" width=\"600\" height=\"600\" fill=\"white\"/>\n",
        "  <rect x=\"40\" y=\"20\" width=\"540\" height=\"540\" fill=\"none\" ",
        "stroke=\"black\"/>\n",
        "  <text x=\"310\" y=\"592\" text-anchor=\"middle\" font-size=\"16\">",
        "\u{03b8}1</text>\n",
        "  <text x=\"14\" y=\"294\" text-anchor=\"middle\" font-size=\"16\">",
        "\u{03b8}2</text>\n",
        "  <text x=\"40\" y=\"578\" text-anchor=\"middle\" font-size=\"12\">0</text>\n",
        "  <text x=\"580\" y=\"578\" text-anchor=\"middle\" font-size=\"12\">1</text>\n",
        "  <text x=\"28\" y=\"564\" text-anchor=\"middle\" font-size=\"12\">0</text>\n",
        "  <text x=\"28\" y=\"24\" text-anchor=\"middle\" font-size=\"12\">1</text>\n",
    ));
    let as_f64 = |r: num::rational::Rational64| *r.numer() as f64 / *r.denom() as f64;
    for point in masses.keys() {
        let _ = writeln!(
            out,
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"black\"/>",
            px(as_f64(point.theta1())),
            py(as_f64(point.theta2()))
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn cmd_support_plot(
    measure: Option<&Path>,
    group: Option<&str>,
    svg: Option<&Path>,
) -> Result<ExitCode, String> {
    let mu = match (measure, group) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            parse_measure(&text).map_err(|e| e.to_string())?
        }
        (None, Some(name)) => theorem_measure(name, 1, false).map_err(|e| e.to_string())?,
        _ => return Err("pass exactly one of --measure FILE or --group NAME".to_owned()),
    };
    let rendered = support_svg(&mu)?;
    match svg {
        Some(path) => {
            std::fs::write(path, &rendered)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            println!("wrote SVG to {}", path.display());
        }
        None => print!("{rendered}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_preimage(x: f64, y: f64) -> Result<ExitCode, String> {
    let (t1, t2) = torus_preimage(x, y).map_err(|e| e.to_string())?;
    println!("preimage of ({x}, {y}): t1 ~ {t1:.6}, t2 ~ {t2:.6}");
    Ok(ExitCode::SUCCESS)
}
