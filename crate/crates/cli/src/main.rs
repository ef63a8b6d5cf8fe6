use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use flowsort_h::report::{write_csv, write_text};
use flowsort_h::{
    run_deterministic, run_smaa, DefuzzMethod, Error, ErrorCode, FlowSortH, Problem, ReportLevel, Rule, SmaaOptions, Tfn, ROOT,
};

const APPENDIX_A: &str = include_str!("../../../fixtures/appendix_a.json");

/// Sort alternatives into ordered categories with hierarchical FlowSort and
/// stochastic acceptability analysis.
#[derive(Parser)]
#[command(name = "flowsort-h", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a problem file and report the first error.
    Validate { problem: PathBuf },
    /// Compute acceptability indices and write reports.
    Run(RunArgs),
    /// Print a worked example step by step.
    Example {
        /// Example name; only `appendix-a` is available.
        name: String,
    },
}

/// Flags override the `smaa` section of the problem file, which overrides
/// the built-in defaults.
#[derive(clap::Args)]
struct RunArgs {
    problem: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    iterations: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// positive, negative or net
    #[arg(long)]
    rule: Option<Rule>,
    /// category, first-level or all-nodes
    #[arg(long, default_value = "category")]
    level: ReportLevel,
    /// Directory for report.txt and acceptability.csv; without it the text
    /// report goes to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Run the engine once on point estimates instead of sampling.
    #[arg(long)]
    deterministic: bool,
    /// centroid or paper-literal
    #[arg(long)]
    defuzz: Option<DefuzzMethod>,
    /// Fail when a flow falls outside the profile range instead of clamping.
    #[arg(long)]
    strict: bool,
    /// Acceptability the final category must reach to be unmarked.
    #[arg(long)]
    threshold: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Validate { problem } => validate(&problem),
        Command::Run(args) => run(&args),
        Command::Example { name } => example(&name),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match e.path() {
                Some(path) => eprintln!("error[{}] at {path}: {}", e.code(), e.message()),
                None => eprintln!("error[{}]: {}", e.code(), e.message()),
            }
            ExitCode::from(e.code().exit_status() as u8)
        }
    }
}

fn validate(path: &Path) -> Result<(), Error> {
    let problem = Problem::from_path(path)?;
    println!(
        "{}: ok ({} alternatives, {} elementary criteria, {} categories)",
        path.display(),
        problem.alternatives.len(),
        problem.tree.elementary_count(),
        problem.categories()
    );
    Ok(())
}

fn run(args: &RunArgs) -> Result<(), Error> {
    let problem = Problem::from_path(&args.problem)?;
    let mut opts = SmaaOptions::from_problem(&problem);
    if let Some(n) = args.iterations {
        opts.iterations = n;
    }
    if let Some(s) = args.seed {
        opts.seed = s;
    }
    if let Some(r) = args.rule {
        opts.rule = r;
    }
    if let Some(d) = args.defuzz {
        opts.defuzz = d;
    }
    opts.strict |= args.strict;
    opts.threads = args.threads.map(|n| n as usize);
    let threshold = args.threshold.unwrap_or(problem.smaa.threshold);
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::new(ErrorCode::Domain, "threshold must lie in [0, 1]"));
    }

    let result = if args.deterministic {
        run_deterministic(&problem, opts.rule, opts.defuzz, opts.strict)?
    } else {
        run_smaa(&problem, &opts)?
    };
    let text = write_text(&result, &problem, args.level, threshold);
    match &args.out {
        None => print!("{text}"),
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
            let report = dir.join("report.txt");
            let csv = dir.join("acceptability.csv");
            fs::write(&report, &text).map_err(|e| io_error(&report, e))?;
            fs::write(&csv, write_csv(&result, &problem, args.level, threshold)).map_err(|e| io_error(&csv, e))?;
            print!("{}", write_text(&result, &problem, ReportLevel::Category, threshold));
            println!("wrote {} and {}", report.display(), csv.display());
        }
    }
    Ok(())
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::new(ErrorCode::Io, format!("{}: {e}", path.display()))
}

fn example(name: &str) -> Result<(), Error> {
    if name != "appendix-a" {
        return Err(Error::new(ErrorCode::Schema, format!("unknown example `{name}`; available: appendix-a")));
    }
    let problem = Problem::from_json_str(APPENDIX_A)?;
    let inst = problem.point_instance()?;
    let tree = &problem.tree;
    let engine = FlowSortH::new(tree, &inst.weights, &inst.preferences, &inst.profiles, DefuzzMethod::Centroid)?;
    let k1 = problem.categories() + 1;
    let profile = |h: usize| -> Vec<Tfn> { inst.profiles.rows().iter().map(|row| row[h]).collect() };

    println!("Hierarchical FlowSort worked example: 2 macro-criteria, 4 elementary criteria, 2 categories");
    println!();
    println!("Elementary criteria");
    for (pos, &id) in tree.elementary().iter().enumerate() {
        let pref = &inst.preferences[pos];
        println!(
            "  {:<8} {:<8} effective weight {:.3}  profiles {}",
            tree.label_path(id),
            format!("{:?}", pref.direction).to_lowercase(),
            tree.effective_weight(id, &inst.weights),
            inst.profiles.row(pos).iter().map(|t| format!("{}", t.m)).collect::<Vec<_>>().join(" > ")
        );
    }

    for (a, alt) in problem.alternatives.iter().enumerate() {
        let x = &inst.evaluations[a];
        let name = &alt.name;
        println!();
        println!("Preference values for {name}");
        for (pos, &id) in tree.elementary().iter().enumerate() {
            let pref = &inst.preferences[pos];
            let cells: Vec<String> = (0..k1)
                .map(|h| format!("P({name},r{}) = {}", h + 1, pref.between(x[pos].m, inst.profiles.row(pos)[h].m)))
                .collect();
            println!("  {:<8} {}", tree.label_path(id), cells.join("  "));
        }
        println!("Outranking degrees");
        for h in 0..k1 {
            let r = profile(h);
            println!(
                "  π({name},r{h1}) = {:.3}    π(r{h1},{name}) = {:.3}",
                engine.outranking_degree(x, &r)?,
                engine.outranking_degree(&r, x)?,
                h1 = h + 1
            );
        }
        let bundle = engine.evaluate(x)?;
        let overall = bundle.overall();
        let f = overall.alternative;
        println!("Flows");
        println!("  φ+({name}) = {:.3}  φ-({name}) = {:.3}  φ({name}) = {:.3}", f.plus, f.minus, f.net);
        for (h, p) in overall.profiles.iter().enumerate() {
            println!("  φ+(r{h1}) = {:.3}  φ-(r{h1}) = {:.3}  φ(r{h1}) = {:.3}", p.plus, p.minus, p.net, h1 = h + 1);
        }
        let cats: Vec<String> = Rule::ALL
            .iter()
            .map(|&rule| overall.assign(rule).map(|c| format!("{} by {} flow", problem.categories[c], rule.as_str())))
            .collect::<Result<_, _>>()?;
        println!("Assignment: {}", cats.join(", "));
    }

    let x2 = &inst.evaluations[1];
    let bundle = engine.evaluate(x2)?;
    println!();
    println!("Single-criterion flows of x2");
    for id in tree.criteria() {
        let node = bundle.node(id);
        let f = node.alternative;
        let profiles: Vec<String> = node.profiles.iter().enumerate().map(|(h, p)| format!("φ(r{}) = {:.3}", h + 1, p.net)).collect();
        let c = node.assign(Rule::Net)?;
        println!(
            "  {:<8} φ+(x2) = {:.3}  φ(x2) = {:.3}  [{}]  → {}",
            tree.label_path(id),
            f.plus,
            f.net,
            profiles.join(", "),
            problem.categories[c]
        );
    }
    let first = tree.first_level();
    let w: Vec<f64> = first.iter().map(|&id| inst.weights.get(id)).collect();
    let parts: Vec<String> = first.iter().zip(&w).map(|(&id, w)| { let v = bundle.node(id).alternative.net; if v < 0.0 { format!("{w}·({v:.3})") } else { format!("{w}·{v:.3}") } }).collect();
    println!("  overall net flow from first level: {} = {:.3}", parts.join(" + "), bundle.node(ROOT).alternative.net);

    println!();
    println!("Final assignments (net flow)");
    for (a, alt) in problem.alternatives.iter().enumerate() {
        let c = engine.evaluate(&inst.evaluations[a])?.assign(Rule::Net)?;
        println!("  {} → {}", alt.name, problem.categories[c]);
    }
    Ok(())
}
