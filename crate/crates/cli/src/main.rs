//! `sfk`: flows on signed graphs at the shell. Exit codes are the machine
//! API: 0 success, 2 parse or usage trouble, 10 not flow-admissible,
//! 11 flow number undecided within budget, 12 builder preconditions unmet,
//! 13 builder invariant breach, 14 certificate invalid.

use clap::{Parser, Subcommand, ValueEnum};
use sfk_cli::format;
use sfk_core::build;
use sfk_core::gen::{self, SignaturePolicy};
use sfk_core::graph::SignedGraph;
use sfk_core::matching;
use sfk_core::oracle::{self, FlowNumberResult, Outcome, Prescriptions, SearchBudget};
use sfk_core::structure;
use sfk_core::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sfk", version, about = "nowhere-zero flows on signed graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Structural summary of a signed graph, TSV to stdout
    Info { file: PathBuf },
    /// Check flow-admissibility; exit 0 yes, 10 no
    Admissible { file: PathBuf },
    /// Exact flow number by exhaustive search
    FlowNumber {
        file: PathBuf,
        /// largest k to try
        #[arg(long = "max-k", default_value_t = 8)]
        max_k: u32,
        /// wall-clock budget in seconds
        #[arg(long)]
        timeout: Option<f64>,
    },
    /// Run a flow builder and write its certificate
    Construct {
        file: PathBuf,
        #[arg(long)]
        method: Method,
        /// certificate file; stdout when absent
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a certificate against its graph; exit 0 valid, 14 invalid
    Verify { file: PathBuf, cert: PathBuf },
    /// Split a graph at a positive 2-edge-cut
    Reduce {
        file: PathBuf,
        /// the cut, as two edge ids `E1,E2`
        #[arg(long)]
        cut: String,
        /// output prefix; input path minus extension when absent
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Sweep a catalog of cubic graphs under a signature policy
    Batch {
        catalog: PathBuf,
        #[arg(long)]
        policy: Policy,
        /// report TSV path
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Bipartite4,
    Bridge6,
    Colorable6,
    Critical6,
    Seven,
    Lift5,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    All,
    Canonical,
    Admissible,
}

/// A finished command: exit code plus optional stderr diagnostic.
struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("{}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| fail(2, format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<SignedGraph, Failure> {
    let text = read_file(path)?;
    format::parse_signed_graph(&text).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Info { file } => info(&file),
        Cmd::Admissible { file } => admissible(&file),
        Cmd::FlowNumber {
            file,
            max_k,
            timeout,
        } => flow_number(&file, max_k, timeout),
        Cmd::Construct {
            file,
            method,
            output,
        } => construct(&file, method, output.as_deref()),
        Cmd::Verify { file, cert } => verify(&file, &cert),
        Cmd::Reduce { file, cut, output } => reduce(&file, &cut, output.as_deref()),
        Cmd::Batch {
            catalog,
            policy,
            report,
        } => batch(&catalog, policy, &report),
    }
}

fn info(file: &Path) -> Result<(), Failure> {
    let g = load_graph(file)?;
    let mut rows: Vec<(String, String)> = Vec::new();
    rows.push(("n".into(), g.n().to_string()));
    rows.push(("m".into(), g.m().to_string()));
    rows.push(("negatives".into(), g.negative_edges().len().to_string()));
    let bridge_list = structure::bridges(&g);
    rows.push((
        "bridges".into(),
        if bridge_list.is_empty() {
            "none".into()
        } else {
            bridge_list
                .iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>()
                .join(",")
        },
    ));
    rows.push(("is_balanced".into(), g.is_balanced().to_string()));
    match structure::admissibility(&g) {
        structure::Admissibility::Admissible => {
            rows.push(("admissible".into(), "true".into()));
        }
        structure::Admissibility::NotAdmissible(reason) => {
            rows.push(("admissible".into(), format!("false\t{reason}")));
        }
    }
    rows.push((
        "bipartite".into(),
        matching::bipartition(&g).is_some().to_string(),
    ));
    rows.push(("cubic".into(), g.is_cubic().to_string()));
    let coloring = matching::three_edge_coloring(&g);
    let colorable = match &coloring {
        Ok(c) => c.is_some().to_string(),
        Err(_) => "-".into(),
    };
    rows.push(("three_edge_colorable".into(), colorable));
    let critical = match &coloring {
        Ok(Some(_)) => "false".into(),
        Ok(None) => match matching::is_critical_snark(&g) {
            Ok(c) => c.to_string(),
            Err(_) => "-".into(),
        },
        Err(_) => "-".into(),
    };
    rows.push(("critical".into(), critical));
    let oddness = match structure::oddness(&g) {
        Ok(o) => o.to_string(),
        Err(_) => "-".into(),
    };
    rows.push(("oddness".into(), oddness));
    let cec = match structure::cyclic_edge_connectivity(&g) {
        Ok(Some(c)) => c.to_string(),
        Ok(None) => "undefined".into(),
        Err(_) => "-".into(),
    };
    rows.push(("cyclic_edge_connectivity".into(), cec));
    for (key, value) in rows {
        println!("{key}\t{value}");
    }
    Ok(())
}

fn admissible(file: &Path) -> Result<(), Failure> {
    let g = load_graph(file)?;
    match structure::admissibility(&g) {
        structure::Admissibility::Admissible => {
            println!("admissible");
            Ok(())
        }
        structure::Admissibility::NotAdmissible(reason) => {
            println!("not flow-admissible: {reason}");
            Err(fail(10, ""))
        }
    }
}

fn budget_with_timeout(timeout: Option<f64>) -> SearchBudget {
    let mut budget = SearchBudget::default();
    if let Some(secs) = timeout {
        budget.deadline =
            Some(std::time::Instant::now() + std::time::Duration::from_secs_f64(secs));
    }
    budget
}

fn flow_number(file: &Path, max_k: u32, timeout: Option<f64>) -> Result<(), Failure> {
    let g = load_graph(file)?;
    if max_k < 2 {
        return Err(fail(2, "--max-k must be at least 2"));
    }
    let budget = budget_with_timeout(timeout);
    match oracle::flow_number(&g, max_k, &budget) {
        Ok(FlowNumberResult::Exact { k, .. }) => {
            println!("{k}");
            Ok(())
        }
        Ok(FlowNumberResult::ExceedsMax { max_k }) => {
            println!("INDETERMINATE");
            Err(fail(
                11,
                format!("every k up to {max_k} refuted; raise --max-k"),
            ))
        }
        Ok(FlowNumberResult::Indeterminate { at_k }) => {
            println!("INDETERMINATE");
            Err(fail(11, format!("search budget exhausted at k = {at_k}")))
        }
        Err(Error::NoFlow(reason)) => Err(fail(10, reason)),
        Err(e) => Err(fail(2, e.to_string())),
    }
}

fn construct_error(e: Error) -> Failure {
    match e {
        Error::InvariantViolation(msg) => fail(13, format!("invariant breach: {msg}")),
        Error::Indeterminate(msg) => fail(12, msg),
        other => fail(12, other.to_string()),
    }
}

fn construct(file: &Path, method: Method, output: Option<&Path>) -> Result<(), Failure> {
    let g = load_graph(file)?;
    let built = match method {
        Method::Bipartite4 => build::bipartite_four_flow(&g).map_err(construct_error)?,
        Method::Bridge6 => build::bridge_six_flow(&g).map_err(construct_error)?,
        Method::Colorable6 => {
            match matching::three_edge_coloring(&g) {
                Ok(Some(_)) => {}
                Ok(None) => {
                    return Err(fail(12, "underlying graph is not 3-edge-colorable"));
                }
                Err(e) => return Err(construct_error(e)),
            }
            build::colorable_or_critical_six_flow(&g).map_err(construct_error)?
        }
        Method::Critical6 => {
            match matching::is_critical_snark(&g) {
                Ok(true) => {}
                Ok(false) => {
                    return Err(fail(
                        12,
                        "underlying graph is not a critical uncolorable graph",
                    ));
                }
                Err(e) => return Err(construct_error(e)),
            }
            build::colorable_or_critical_six_flow(&g).map_err(construct_error)?
        }
        Method::Seven | Method::Auto => build::seven_flow(&g).map_err(construct_error)?,
        Method::Lift5 => lift5(&g).map_err(construct_error)?,
    };
    built
        .flow
        .verify(&g)
        .map_err(|e| fail(13, format!("constructed flow fails verification: {e}")))?;
    let text = format::serialize_certificate(&built.flow, &built.trace.method);
    match output {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| fail(2, format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Search for a 5-flow on the rewired graph with a unit replacement edge,
/// then lift it. The search is the only non-constructive step.
fn lift5(g: &SignedGraph) -> sfk_core::Result<build::Built> {
    let rw = build::rewire_negative_pair(g)?;
    let mut pres = Prescriptions::none();
    pres.magnitude.push((rw.ux, 1));
    match oracle::exists_integer_flow(&rw.graph, 5, &pres, &SearchBudget::default())? {
        Outcome::Yes(f5) => {
            let lifted = build::five_flow_conditional_lift(g, &f5)?;
            Ok(build::Built {
                flow: lifted.flow,
                witness_path: Some(lifted.path),
                trace: build::ConstructionTrace {
                    method: "lift5".to_string(),
                    steps: vec!["5-flow with a unit replacement edge found by search".to_string()],
                },
            })
        }
        Outcome::No => Err(Error::Precondition(
            "no 5-flow with value 1 on the replacement edge exists".to_string(),
        )),
        Outcome::Indeterminate => Err(Error::Indeterminate(
            "5-flow search budget exhausted".to_string(),
        )),
    }
}

fn verify(file: &Path, cert_path: &Path) -> Result<(), Failure> {
    let g = load_graph(file)?;
    let text = read_file(cert_path)?;
    let cert = format::parse_certificate(&text)
        .map_err(|e| fail(2, format!("{}: {e}", cert_path.display())))?;
    let flow = match format::certificate_to_flow(&cert, &g) {
        Ok(flow) => flow,
        Err(violation) => {
            println!("{violation}");
            return Err(fail(14, ""));
        }
    };
    match flow.verify(&g) {
        Ok(()) => {
            println!("valid");
            Ok(())
        }
        Err(e) => {
            println!("{e}");
            Err(fail(14, ""))
        }
    }
}

fn reduce(file: &Path, cut: &str, output: Option<&str>) -> Result<(), Failure> {
    let g = load_graph(file)?;
    let parts: Vec<&str> = cut.split(',').collect();
    let [a, b] = parts[..] else {
        return Err(fail(2, "--cut wants two edge ids, e.g. 3,7"));
    };
    let a: usize = a
        .trim()
        .parse()
        .map_err(|_| fail(2, format!("bad edge id `{a}`")))?;
    let b: usize = b
        .trim()
        .parse()
        .map_err(|_| fail(2, format!("bad edge id `{b}`")))?;
    let r = structure::reduce_two_cut(&g, [a, b]).map_err(|e| fail(2, e.to_string()))?;
    let prefix = match output {
        Some(p) => p.to_string(),
        None => file.with_extension("").display().to_string(),
    };
    let g1_path = format!("{prefix}.g1.sg");
    let g2_path = format!("{prefix}.g2.sg");
    let map_path = format!("{prefix}.map.tsv");
    let write = |path: &str, text: String| -> Result<(), Failure> {
        std::fs::write(path, text).map_err(|e| fail(2, format!("cannot write {path}: {e}")))
    };
    write(&g1_path, format::serialize_signed_graph(&r.g1))?;
    write(&g2_path, format::serialize_signed_graph(&r.g2))?;
    let mut map = String::from("piece\tkind\tnew\told\n");
    for (piece, vertices, edges) in [
        ("g1", &r.g1_vertices, &r.g1_edges),
        ("g2", &r.g2_vertices, &r.g2_edges),
    ] {
        for (new, old) in vertices.iter().enumerate() {
            map.push_str(&format!("{piece}\tvertex\t{new}\t{old}\n"));
        }
        for (new, old) in edges.iter().enumerate() {
            let old = match old {
                Some(o) => o.to_string(),
                None => "synthetic".to_string(),
            };
            map.push_str(&format!("{piece}\tedge\t{new}\t{old}\n"));
        }
    }
    write(&map_path, map)?;
    println!("{g1_path}");
    println!("{g2_path}");
    println!("{map_path}");
    Ok(())
}

struct BatchRow {
    id: String,
    n: usize,
    m: usize,
    admissible: bool,
    bound: String,
    exact: String,
    agreement: String,
}

fn batch(catalog: &Path, policy: Policy, report: &Path) -> Result<(), Failure> {
    let text = read_file(catalog)?;
    let graphs =
        format::parse_catalog(&text).map_err(|e| fail(2, format!("{}: {e}", catalog.display())))?;
    let policy = match policy {
        Policy::All => SignaturePolicy::AllPairs,
        Policy::Canonical => SignaturePolicy::Canonical,
        Policy::Admissible => SignaturePolicy::Admissible,
    };
    let mut instances: Vec<(String, SignedGraph)> = Vec::new();
    for (gi, g) in graphs.iter().enumerate() {
        for pair in gen::two_negative_signatures(g, policy) {
            let id = format!("g{gi}-e{}-e{}", pair[0], pair[1]);
            instances.push((id, gen::with_negatives(g, &pair)));
        }
    }

    let workers = std::env::var("SFK_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&w| w >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|p| p.get())
                .unwrap_or(1)
        });
    let next = std::sync::atomic::AtomicUsize::new(0);
    let rows: Vec<std::sync::Mutex<Option<BatchRow>>> = (0..instances.len())
        .map(|_| std::sync::Mutex::new(None))
        .collect();
    std::thread::scope(|scope| {
        for _ in 0..workers.min(instances.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= instances.len() {
                    break;
                }
                let (id, sg) = &instances[i];
                *rows[i].lock().unwrap() = Some(batch_row(id, sg));
            });
        }
    });

    let mut out = String::from("id\tn\tm\tadmissible\tbound\texact\tagreement\n");
    for cell in rows {
        let row = cell.into_inner().unwrap().expect("worker skipped a row");
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            row.id, row.n, row.m, row.admissible, row.bound, row.exact, row.agreement
        ));
    }
    std::fs::write(report, &out)
        .map_err(|e| fail(2, format!("cannot write {}: {e}", report.display())))?;
    println!(
        "report on {} instances written to {}",
        instances.len(),
        report.display()
    );
    Ok(())
}

fn batch_row(id: &str, sg: &SignedGraph) -> BatchRow {
    let admissible = structure::is_flow_admissible(sg);
    let bound = if admissible {
        match build::seven_flow(sg) {
            Ok(built) => built.flow.k.to_string(),
            Err(e) => format!("error: {e}"),
        }
    } else {
        "-".to_string()
    };
    let budget = SearchBudget {
        node_limit: 5_000_000,
        deadline: None,
    };
    let exact = if admissible {
        match oracle::flow_number(sg, 7, &budget) {
            Ok(FlowNumberResult::Exact { k, .. }) => k.to_string(),
            Ok(_) => "-".to_string(),
            Err(e) => format!("error: {e}"),
        }
    } else {
        "-".to_string()
    };
    let agreement = match (&bound.parse::<u32>(), &exact.parse::<u32>()) {
        (Ok(b), Ok(x)) => (x <= b).to_string(),
        _ if !admissible => "true".to_string(),
        _ => "-".to_string(),
    };
    BatchRow {
        id: id.to_string(),
        n: sg.n(),
        m: sg.m(),
        admissible,
        bound,
        exact,
        agreement,
    }
}
