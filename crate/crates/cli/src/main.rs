use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use zpower_core::appendix::appendix_realizations;
use zpower_core::bounds::{odd_lengths, Bounds, ParamKey};
use zpower_core::catalog::{self, CatalogEntry};
use zpower_core::data::Atlas;
use zpower_core::mlist::MultiplicityList;
use zpower_core::numeric::{
    random_pattern_matrix, skew_multiplicity_list, symmetric_multiplicity_list, RealizationJob,
    RealizationVerdict,
};
use zpower_core::skew::{skew_prune, skew_survey, SkewOptions};
use zpower_core::symmetric::{prune, survey, PruneOptions};
use zpower_core::verdict::{ConstraintVerdict, FeasibilityReport, VerdictStatus};
use zpower_core::{
    gamma_lazy, gamma_walks, CanonicalForm, ForcingRule, GeneralGraph, SearchOptions,
};

#[derive(Parser)]
#[command(
    name = "zpower",
    version,
    about = "Zero forcing bounds on ordered eigenvalue multiplicity lists"
)]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Largest number of undecided pairs enumerated exactly.
    #[arg(long, global = true, default_value_t = zpower_core::DEFAULT_EXHAUST_THRESHOLD)]
    exhaust_threshold: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forcing parameters of a graph as JSON.
    Param {
        /// graph6 string, @catalog-name, or edge-list file.
        graph: String,
        /// Radii of the power parameters to add.
        #[arg(long)]
        r: Vec<usize>,
        /// Walk lengths (comma separated) for a plain-walk parameter.
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<usize>,
        /// Restrict the added parameters to one rule.
        #[arg(long)]
        rule: Option<ForcingRule>,
    },
    /// Pair classes of a walk-counting multigraph.
    Gamma {
        graph: String,
        /// Lazy walks up to this length.
        #[arg(long, conflicts_with = "lengths", required_unless_present = "lengths")]
        r: Option<usize>,
        /// Plain walks with these lengths (comma separated).
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<usize>,
        /// Also print the graph6 of this completion.
        #[arg(long)]
        completion: Option<Completion>,
    },
    /// Verdict for every candidate multiplicity list of a graph.
    Lists {
        graph: String,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long)]
        json: bool,
    },
    /// Verdicts for every connected graph on `n` vertices.
    Survey {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// One CSV row per list instead of one per graph.
        #[arg(long)]
        detail: bool,
        #[arg(long)]
        json: bool,
        /// Atlas numbering file (`id<TAB>graph6` lines).
        #[arg(long)]
        atlas: Option<PathBuf>,
    },
    /// Check realization matrices numerically.
    Verify {
        /// JSON file holding one job or an array of jobs.
        #[arg(required_unless_present_any = ["appendix", "random"])]
        file: Option<PathBuf>,
        /// Check the built-in five-vertex skew realizations.
        #[arg(long, conflicts_with_all = ["file", "random"])]
        appendix: bool,
        /// Extract the list of a random matrix with this pattern.
        #[arg(long, conflicts_with = "file")]
        random: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        skew: bool,
    },
    /// List catalog names, or show one entry.
    Catalog { name: Option<String> },
}

#[derive(clap::Args)]
struct PipelineArgs {
    /// Use the skew-symmetric pipeline.
    #[arg(long)]
    skew: bool,
    #[arg(long, default_value_t = 3)]
    rmax_main: usize,
    #[arg(long, default_value_t = 2)]
    rmax_zp: usize,
    #[arg(long)]
    no_k23: bool,
    #[arg(long)]
    no_partition: bool,
    /// Check every index set for the PSD rule, not just those of small order.
    #[arg(long)]
    full_zp: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Completion {
    AllPresent,
    AllAbsent,
}

enum Failure {
    Domain(String),
    Unverified,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read_graph(input: &str) -> std::result::Result<GeneralGraph, Failure> {
    if input.starts_with('@') {
        return Ok(catalog::lookup(input)?.graph);
    }
    match GeneralGraph::from_graph6(input) {
        Ok(g) => Ok(g),
        Err(g6_err) => {
            let path = Path::new(input);
            if path.is_file() {
                Ok(GeneralGraph::from_edge_list(&fs::read_to_string(path)?)?)
            } else {
                Err(Failure::Domain(format!(
                    "`{input}` is not a catalog name, graph6 string or file ({g6_err})"
                )))
            }
        }
    }
}

/// Writes to stdout; a reader that hung up early is not an error.
fn emit(bytes: &[u8]) -> Outcome {
    let mut out = io::stdout().lock();
    match out.write_all(bytes).and_then(|()| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(value: &T) -> Outcome {
    let mut buf = serde_json::to_vec_pretty(value)?;
    buf.push(b'\n');
    emit(&buf)
}

fn search(cli: &Cli) -> SearchOptions {
    SearchOptions {
        exhaust_threshold: cli.exhaust_threshold,
        include_loops: false,
    }
}

fn param(
    cli: &Cli,
    graph: &str,
    radii: &[usize],
    lengths: &[usize],
    rule: Option<ForcingRule>,
) -> Outcome {
    let g = read_graph(graph)?;
    let mut b = Bounds::new(&g, search(cli))?;
    let wants = |r: ForcingRule| rule.is_none() || rule == Some(r);
    let mut keys = vec![
        ParamKey::Z,
        ParamKey::ZPlus,
        ParamKey::ZMinus,
        ParamKey::ZLoop,
    ];
    if rule == Some(ForcingRule::LoopAware) {
        keys.push(ParamKey::ZHat);
    }
    for &r in radii {
        if wants(ForcingRule::Standard) {
            keys.push(ParamKey::Zr(r));
        }
        if wants(ForcingRule::Psd) {
            keys.push(ParamKey::ZPlusR(r));
        }
        if rule == Some(ForcingRule::Skew) {
            keys.push(ParamKey::ZMinusL(odd_lengths(r)));
        }
    }
    if !lengths.is_empty() {
        if wants(ForcingRule::Standard) {
            keys.push(ParamKey::ZL(lengths.to_vec()));
        }
        if wants(ForcingRule::Skew) {
            keys.push(ParamKey::ZMinusL(lengths.to_vec()));
        }
    }
    for k in &keys {
        b.get(k)?;
    }
    print_json(&b.table())
}

fn gamma(
    graph: &str,
    r: Option<usize>,
    lengths: &[usize],
    completion: Option<Completion>,
) -> Outcome {
    let g = read_graph(graph)?;
    let p = match r {
        Some(r) => gamma_lazy(&g, r)?,
        None => gamma_walks(&g, lengths)?,
    };
    let mut out = format!(
        "# {} of {}\n{}",
        p.spec,
        g.to_graph6(),
        p.result.class_matrix()
    );
    if let Some(c) = completion {
        let env = p.envelope();
        let mut done = env.clone();
        for (i, j) in env.free_pairs() {
            done = done.decide_pair(i, j, matches!(c, Completion::AllPresent))?;
        }
        out.push_str(&done.to_graph().to_graph6());
        out.push('\n');
    }
    emit(out.as_bytes())
}

fn prune_options(cli: &Cli, p: &PipelineArgs) -> PruneOptions {
    PruneOptions {
        rmax_main: p.rmax_main,
        rmax_zp: p.rmax_zp,
        full_zp_sweep: p.full_zp,
        enable_partition: !p.no_partition,
        enable_k23: !p.no_k23,
        search: search(cli),
    }
}

fn skew_options(cli: &Cli) -> SkewOptions {
    SkewOptions {
        search: search(cli),
        ..SkewOptions::default()
    }
}

fn verdict_line(v: &ConstraintVerdict) -> String {
    match &v.status {
        VerdictStatus::Surviving => format!("{}\tsurviving", v.list),
        VerdictStatus::KnownExceptionInfeasible { source } => {
            format!("{}\texception\t{source}", v.list)
        }
        VerdictStatus::Eliminated { certificate: c } => format!(
            "{}\teliminated\t{}\t{} > {} ({}, {:?})",
            v.list,
            c.constraint.rule_id(),
            c.lhs,
            c.rhs,
            c.parameter,
            c.rhs_mode
        ),
    }
}

#[derive(Serialize)]
struct ListsReport<'a> {
    graph: String,
    skew: bool,
    survivors: Vec<&'a MultiplicityList>,
    verdicts: &'a [ConstraintVerdict],
}

fn lists(cli: &Cli, graph: &str, p: &PipelineArgs, json: bool) -> Outcome {
    let g = read_graph(graph)?;
    let verdicts = if p.skew {
        skew_prune(&g, &skew_options(cli))?
    } else {
        prune(&g, &prune_options(cli, p))?
    };
    if json {
        return print_json(&ListsReport {
            graph: g.to_graph6(),
            skew: p.skew,
            survivors: verdicts
                .iter()
                .filter(|v| v.is_surviving())
                .map(|v| &v.list)
                .collect(),
            verdicts: &verdicts,
        });
    }
    let text: String = verdicts.iter().map(|v| verdict_line(v) + "\n").collect();
    emit(text.as_bytes())
}

fn write_csv(
    w: impl Write,
    reports: &BTreeMap<CanonicalForm, FeasibilityReport>,
    skew: bool,
    detail: bool,
) -> Outcome {
    let mut w = csv::Writer::from_writer(w);
    let mut header = vec!["graph6", "atlas_id", "list", "status", "rule", "lhs", "rhs"];
    if skew {
        header.push("exception_source");
    }
    w.write_record(&header)?;
    for r in reports.values() {
        let atlas = r.atlas_id.map(|a| a.to_string()).unwrap_or_default();
        if detail {
            for v in &r.verdicts {
                let (rule, lhs, rhs, source) = match &v.status {
                    VerdictStatus::Eliminated { certificate: c } => (
                        c.constraint.rule_id().to_string(),
                        c.lhs.to_string(),
                        c.rhs.to_string(),
                        String::new(),
                    ),
                    VerdictStatus::KnownExceptionInfeasible { source } => {
                        (String::new(), String::new(), String::new(), source.clone())
                    }
                    VerdictStatus::Surviving => Default::default(),
                };
                let mut row = vec![
                    r.graph6.clone(),
                    atlas.clone(),
                    v.list.joined(),
                    v.status_name().into(),
                    rule,
                    lhs,
                    rhs,
                ];
                if skew {
                    row.push(source);
                }
                w.write_record(&row)?;
            }
        } else {
            let survivors: Vec<String> = r.survivors().iter().map(|l| l.joined()).collect();
            let mut row = vec![
                r.graph6.clone(),
                atlas,
                survivors.join(";"),
                "surviving".into(),
                String::new(),
                String::new(),
                String::new(),
            ];
            if skew {
                let sources: Vec<String> = r
                    .verdicts
                    .iter()
                    .filter_map(|v| match &v.status {
                        VerdictStatus::KnownExceptionInfeasible { source } => {
                            Some(format!("{}: {source}", v.list.joined()))
                        }
                        _ => None,
                    })
                    .collect();
                row.push(sources.join(";"));
            }
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn run_survey(
    cli: &Cli,
    n: usize,
    p: &PipelineArgs,
    out: Option<&Path>,
    detail: bool,
    json: bool,
    atlas: Option<&Path>,
) -> Outcome {
    let atlas = match atlas {
        Some(path) => Some(Atlas::load(path)?),
        None => Atlas::installed(),
    };
    let reports = if p.skew {
        skew_survey(n, &skew_options(cli), atlas.as_ref())?
    } else {
        survey(n, &prune_options(cli, p), atlas.as_ref())?
    };
    let mut buf = Vec::new();
    if json {
        serde_json::to_writer_pretty(&mut buf, &reports.values().collect::<Vec<_>>())?;
        buf.push(b'\n');
    } else {
        write_csv(&mut buf, &reports, p.skew, detail)?;
    }
    match out {
        Some(path) => fs::write(path, buf)?,
        None => emit(&buf)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct NamedVerdict {
    name: String,
    passed: bool,
    verdict: RealizationVerdict,
}

#[derive(Serialize)]
struct RandomReport {
    graph: String,
    seed: u64,
    skew: bool,
    matrix: Vec<Vec<f64>>,
    list: MultiplicityList,
}

fn verify(
    file: Option<&Path>,
    appendix: bool,
    random: Option<&str>,
    seed: u64,
    skew: bool,
) -> Outcome {
    if let Some(graph) = random {
        let g = read_graph(graph)?;
        let a = random_pattern_matrix(&g, skew, seed);
        let list = if skew {
            skew_multiplicity_list(&a, None, None)?
        } else {
            symmetric_multiplicity_list(&a, None)?
        };
        return print_json(&RandomReport {
            graph: g.to_graph6(),
            seed,
            skew,
            matrix: a.rows(),
            list,
        });
    }
    let results: Vec<NamedVerdict> = if appendix {
        appendix_realizations()
            .into_iter()
            .map(|e| {
                let verdict = e.verify();
                NamedVerdict {
                    name: e.name(),
                    passed: verdict.passed(),
                    verdict,
                }
            })
            .collect()
    } else {
        let path = file.expect("clap requires a file");
        let text = fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        let jobs: Vec<RealizationJob> = if value.is_array() {
            serde_json::from_value(value)?
        } else {
            vec![serde_json::from_value(value)?]
        };
        jobs.iter()
            .enumerate()
            .map(|(k, job)| {
                let verdict = job.run()?;
                Ok(NamedVerdict {
                    name: format!("job {k}"),
                    passed: verdict.passed(),
                    verdict,
                })
            })
            .collect::<std::result::Result<_, Failure>>()?
    };
    print_json(&results)?;
    if results.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Unverified)
    }
}

#[derive(Serialize)]
struct CatalogListing {
    names: &'static [&'static str],
    families: [&'static str; 6],
}

fn show_catalog(name: Option<&str>) -> Outcome {
    match name {
        Some(n) => {
            let e: CatalogEntry = catalog::lookup(n)?;
            print_json(&e)
        }
        None => print_json(&CatalogListing {
            names: catalog::NAMES,
            families: ["p<n>", "c<n>", "k<n>", "star<n>", "gl<n>", "gl<n>e"],
        }),
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Param {
            graph,
            r,
            lengths,
            rule,
        } => param(cli, graph, r, lengths, *rule),
        Command::Gamma {
            graph,
            r,
            lengths,
            completion,
        } => gamma(graph, *r, lengths, *completion),
        Command::Lists {
            graph,
            pipeline,
            json,
        } => lists(cli, graph, pipeline, *json),
        Command::Survey {
            n,
            pipeline,
            out,
            detail,
            json,
            atlas,
        } => run_survey(
            cli,
            *n,
            pipeline,
            out.as_deref(),
            *detail,
            *json,
            atlas.as_deref(),
        ),
        Command::Verify {
            file,
            appendix,
            random,
            seed,
            skew,
        } => verify(file.as_deref(), *appendix, random.as_deref(), *seed, *skew),
        Command::Catalog { name } => show_catalog(name.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Unverified) => ExitCode::from(1),
    }
}
