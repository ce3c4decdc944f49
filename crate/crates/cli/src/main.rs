use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use alignbound::fixtures::{builtin_fixture, FIXTURE_NAMES};
use alignbound::gf::{is_prime, DEFAULT_PRIME};
use alignbound::graph::{
    alignment_sets, build_alignment_graph, build_conflict_graph, conflict_bound, has_overlapping_cycles,
    internal_conflict_distance, internal_conflicts,
};
use alignbound::lp::{solve_symmetric_bound, BoundResult, SolverOptions};
use alignbound::nonshannon::{
    augmented_bound, builtin_certificate, check_certificate, dual_certificate, Certificate, Family, CERTIFICATE_NAMES,
    DEFAULT_BUDGET,
};
use alignbound::oracle::brute_force_linear_rate;
use alignbound::scheme::{
    build_no_overlap, build_pattern_search, build_unicast11, verify_scheme, OverlapSpec, PrecodingScheme,
    VerificationReport, DEFAULT_TRIALS,
};
use alignbound::Instance;
use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

/// Outer bounds and linear schemes for the symmetric rate of index coding instances.
#[derive(Debug, Parser)]
#[command(name = "alignbound", version)]
struct Cli {
    /// Print a JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Source {
    /// Built-in instance (see `fixtures`).
    #[arg(long, conflicts_with = "instance")]
    fixture: Option<String>,
    /// Instance file, line form or JSON.
    #[arg(long)]
    instance: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Alignment and conflict graphs, alignment sets, Δ and the conflict bound.
    Analyze {
        #[command(flatten)]
        source: Source,
    },
    /// Exact outer bound on the symmetric rate.
    Bound {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = FamilyArg::Shannon)]
        family: FamilyArg,
        /// Number of Zhang-Yeung or Ingleton tuples to add.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        tuples: usize,
        /// Row limit for the exact LP.
        #[arg(long, default_value_t = SolverOptions::default().max_rows)]
        max_rows: usize,
        /// Skip the floating-point guide and separate rows exactly from the start.
        #[arg(long)]
        exact_only: bool,
        /// Also print the dual certificate.
        #[arg(long)]
        certificate: bool,
    },
    /// Build and verify a linear scheme.
    Achieve {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_PRIME, value_parser = parse_prime)]
        prime: u64,
        /// Search attempts (search method).
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        /// Symbols per message m (search method).
        #[arg(long)]
        symbols: Option<usize>,
        /// Channel uses T (search method).
        #[arg(long)]
        blocklen: Option<usize>,
        /// Target dim(V_i, V_j) on alignment edges (search method, default T - m).
        #[arg(long)]
        union: Option<usize>,
        /// Write the scheme here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a scheme file against an instance.
    VerifyScheme {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        scheme: PathBuf,
    },
    /// Check a weighted-sum certificate.
    CheckCert {
        #[command(flatten)]
        source: Source,
        /// Certificate file.
        #[arg(long, conflicts_with = "builtin")]
        cert: Option<PathBuf>,
        /// Frozen certificate (carries its own instance).
        #[arg(long)]
        builtin: Option<String>,
    },
    /// Exhaustive linear-code search on tiny instances.
    Oracle {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 3)]
        max_t: usize,
        /// Field size, 2 or 3.
        #[arg(long, default_value_t = 2)]
        field: u64,
    },
    /// List built-in instances and certificates, or print one instance.
    Fixtures {
        /// Print this fixture in the line form.
        name: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Shannon,
    Zy,
    Ingleton,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Shannon => Family::Shannon,
            FamilyArg::Zy => Family::ZhangYeung,
            FamilyArg::Ingleton => Family::Ingleton,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    /// Rate Δ/(2Δ+1) for alignment sets without overlapping cycles.
    Theorem7,
    /// The explicit 5/13 scheme for the `unicast11` fixture.
    Unicast11,
    /// Randomized structured search at rate m/T.
    Search,
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|e| format!("{e}"))?;
    if is_prime(p) {
        Ok(p)
    } else {
        Err(format!("{p} is not a prime below 2^32"))
    }
}

fn usage_error(kind: ErrorKind, message: &str) -> ! {
    Cli::command().error(kind, message).exit()
}

fn load(source: &Source) -> Result<Instance> {
    match (&source.fixture, &source.instance) {
        (Some(name), _) => Ok(builtin_fixture(name)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Instance::parse(&text).with_context(|| format!("parsing {}", path.display()))
        }
        (None, None) => usage_error(ErrorKind::MissingRequiredArgument, "one of --fixture or --instance is required"),
    }
}

/// Printed report plus whether the command passed.
struct Outcome {
    text: String,
    json: Value,
    pass: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { text, json, pass: true }
    }
}

fn analyze(inst: &Instance) -> Outcome {
    let a = build_alignment_graph(inst);
    let c = build_conflict_graph(inst);
    let sets = alignment_sets(&a);
    let conflicts = internal_conflicts(&a, &c);
    let overlapping = has_overlapping_cycles(&a);
    let delta = internal_conflict_distance(&a, &c);
    let bound = conflict_bound(delta).ok();
    let any_overlap = overlapping.iter().any(|(_, o)| *o);
    let edge_str = |e: &(u32, u32)| format!("{}-{}", e.0, e.1);
    let a_edges: Vec<String> = a.edges().map(|e| edge_str(&e)).collect();
    let c_edges: Vec<String> = c.edges().map(|e| edge_str(&e)).collect();

    let mut text = format!("instance {}: {}\n", inst.label(), sizes(inst));
    text += &format!("alignment edges ({}): {}\n", a_edges.len(), a_edges.join(" "));
    text += &format!("conflict edges ({}): {}\n", c_edges.len(), c_edges.join(" "));
    let mut set_json = Vec::new();
    for (set, overlap) in &overlapping {
        let set_delta = conflicts
            .iter()
            .filter(|((x, y), _)| set.contains(*x) && set.contains(*y))
            .map(|(_, d)| *d)
            .min();
        let shown = set_delta.map_or("inf".to_string(), |d| d.to_string());
        text += &format!("alignment set {set}: delta={shown} overlapping-cycles={overlap}\n");
        set_json.push(json!({ "messages": set.to_string(), "delta": set_delta, "overlapping_cycles": overlap }));
    }
    text += &format!("delta={}\n", delta.map_or("inf".to_string(), |d| d.to_string()));
    text += &format!("overlapping-cycles={any_overlap}\n");
    text += &match bound {
        Some(b) => format!("conflict-bound={b}\n"),
        None => "conflict-bound=none (no internal conflicts)\n".to_string(),
    };
    debug_assert_eq!(sets.len(), overlapping.len());
    let json = json!({
        "instance": inst.label(),
        "messages": inst.message_count(),
        "alignment_edges": a_edges,
        "conflict_edges": c_edges,
        "alignment_sets": set_json,
        "delta": delta,
        "overlapping_cycles": any_overlap,
        "conflict_bound": bound.map(|b| b.to_string()),
    });
    Outcome::ok(text, json)
}

fn bound(inst: &Instance, family: Family, tuples: usize, opts: &SolverOptions, with_cert: bool) -> Result<Outcome> {
    let result: BoundResult = match family {
        Family::Shannon => solve_symmetric_bound(inst, opts)?,
        _ => augmented_bound(inst, family, tuples, opts)?,
    };
    let cert = dual_certificate(&result);
    let mut text = format!("{}\n", result.rate);
    if with_cert {
        text += &cert.to_string();
    }
    let mut json = result.to_json_value();
    json["instance"] = json!(inst.label());
    json["family"] = json!(family.to_string());
    json["certificate"] = json!(cert.to_string());
    Ok(Outcome::ok(text, json))
}

fn report_text(rep: &VerificationReport) -> String {
    let mut text = format!("{} {}\n", if rep.pass { "pass" } else { "fail" }, rep.rate);
    for d in rep.failures() {
        text += &format!(
            "destination {} fails: union dim {} with interference dim {}\n",
            d.dest + 1,
            d.union_dim,
            d.interference_dim
        );
    }
    let unions: Vec<String> = rep.edge_unions.iter().map(|((i, j), d)| format!("{i}-{j}:{d}")).collect();
    if !unions.is_empty() {
        text += &format!("edge unions: {}\n", unions.join(" "));
    }
    text
}

fn report_json(rep: &VerificationReport) -> Value {
    json!({
        "pass": rep.pass,
        "rate": rep.rate.to_string(),
        "failed_destinations": rep.failures().map(|d| d.dest + 1).collect::<Vec<_>>(),
        "edge_unions": rep.edge_unions.iter().map(|((i, j), d)| json!([i, j, d])).collect::<Vec<_>>(),
    })
}

#[allow(clippy::too_many_arguments)]
fn achieve(
    inst: &Instance,
    method: Method,
    seed: u64,
    prime: u64,
    trials: usize,
    shape: (Option<usize>, Option<usize>),
    union: Option<usize>,
    out: Option<&PathBuf>,
) -> Result<Outcome> {
    let scheme = match method {
        Method::Theorem7 => {
            let delta = internal_conflict_distance(&build_alignment_graph(inst), &build_conflict_graph(inst));
            let Some(delta) = delta else { bail!("no internal conflicts, so no Δ to build for") };
            build_no_overlap(inst, delta, seed, prime)?
        }
        Method::Unicast11 => {
            if inst.message_count() != 11 {
                bail!("the unicast11 scheme needs the 11-message unicast11 instance");
            }
            build_unicast11(seed, prime)?
        }
        Method::Search => {
            let (Some(m), Some(t)) = shape else {
                usage_error(ErrorKind::MissingRequiredArgument, "--method search needs --symbols and --blocklen")
            };
            let spec = OverlapSpec::uniform(union.unwrap_or(t.saturating_sub(m)));
            build_pattern_search(inst, m, t, &spec, seed, prime, trials)?
        }
    };
    let rep = verify_scheme(inst, &scheme)?;
    let mut text = report_text(&rep);
    match out {
        Some(path) => fs::write(path, scheme.to_text()).with_context(|| format!("writing {}", path.display()))?,
        None => text += &scheme.to_text(),
    }
    let mut json = report_json(&rep);
    json["scheme"] = json!(scheme.to_text());
    Ok(Outcome { text, json, pass: rep.pass })
}

fn verify(inst: &Instance, path: &PathBuf) -> Result<Outcome> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let scheme = PrecodingScheme::from_text(&text).with_context(|| format!("parsing {}", path.display()))?;
    let rep = verify_scheme(inst, &scheme)?;
    Ok(Outcome { text: report_text(&rep), json: report_json(&rep), pass: rep.pass })
}

fn check_cert(inst: &Instance, cert: &Certificate) -> Result<Outcome> {
    let v = check_certificate(inst, cert)?;
    let text = if v.valid {
        format!("valid: R <= {}\n", v.implied_bound.expect("valid certificates imply a bound"))
    } else {
        format!("invalid: {}\n", v.reason)
    };
    let json = json!({
        "valid": v.valid,
        "claim": cert.claim.to_string(),
        "implied_bound": v.implied_bound.map(|b| b.to_string()),
        "reason": v.reason,
    });
    Ok(Outcome { text, json, pass: v.valid })
}

fn oracle(inst: &Instance, max_t: usize, q: u64) -> Result<Outcome> {
    let r = brute_force_linear_rate(inst, max_t, q)?;
    let cell = r.scheme.as_ref().map(|s| (s.block_len(), s.symbols()));
    let text = match (r.rate, cell) {
        (Some(rate), Some((t, m))) => format!(
            "best linear rate {rate} (T={t}, m={m}) over GF({q}), {} search, space size {}\n",
            if r.exhaustive { "exhaustive" } else { "partial" },
            r.space_size
        ),
        _ => format!("no linear scheme with T <= {max_t} over GF({q})\n"),
    };
    let json = json!({
        "rate": r.rate.map(|x| x.to_string()),
        "block_len": cell.map(|c| c.0),
        "symbols": cell.map(|c| c.1),
        "field": q,
        "space_size": r.space_size.to_string(),
        "exhaustive": r.exhaustive,
        "scheme": r.scheme.as_ref().map(|s| s.to_text()),
    });
    Ok(Outcome { text, json, pass: r.rate.is_some() })
}

fn fixtures(name: Option<&str>) -> Result<Outcome> {
    if let Some(name) = name {
        let inst = builtin_fixture(name)?;
        let json: Value = serde_json::from_str(&inst.to_json())?;
        return Ok(Outcome::ok(inst.to_text(), json));
    }
    let mut text = String::from("instances:\n");
    for n in FIXTURE_NAMES {
        let inst = builtin_fixture(n)?;
        text += &format!("  {n} ({})\n", sizes(&inst));
    }
    text += "certificates:\n";
    for c in CERTIFICATE_NAMES {
        text += &format!("  {c}\n");
    }
    Ok(Outcome::ok(text, json!({ "instances": FIXTURE_NAMES, "certificates": CERTIFICATE_NAMES })))
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Analyze { source } => Ok(analyze(&load(source)?)),
        Command::Bound { source, family, tuples, max_rows, exact_only, certificate } => {
            let opts = SolverOptions { max_rows: *max_rows, guided: !exact_only, ..SolverOptions::default() };
            bound(&load(source)?, (*family).into(), *tuples, &opts, *certificate)
        }
        Command::Achieve { source, method, seed, prime, trials, symbols, blocklen, union, out } => achieve(
            &load(source)?,
            *method,
            *seed,
            *prime,
            *trials,
            (*symbols, *blocklen),
            *union,
            out.as_ref(),
        ),
        Command::VerifyScheme { source, scheme } => verify(&load(source)?, scheme),
        Command::CheckCert { source, cert, builtin } => {
            let (inst, cert) = match (builtin, cert) {
                (Some(name), _) => builtin_certificate(name)?,
                (None, Some(path)) => {
                    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    (load(source)?, Certificate::parse(&text)?)
                }
                (None, None) => usage_error(ErrorKind::MissingRequiredArgument, "one of --cert or --builtin is required"),
            };
            check_cert(&inst, &cert)
        }
        Command::Oracle { source, max_t, field } => oracle(&load(source)?, *max_t, *field),
        Command::Fixtures { name } => fixtures(name.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&outcome.json).expect("JSON values serialize"));
            } else {
                print!("{}", outcome.text);
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn plural(n: usize, word: &str) -> String {
    format!("{n} {word}{}", if n == 1 { "" } else { "s" })
}

fn sizes(inst: &Instance) -> String {
    format!("{}, {}", plural(inst.message_count(), "message"), plural(inst.destinations().len(), "destination"))
}
