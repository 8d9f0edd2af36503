//! Command-line front end for the `binomial-cayley` library.
//!
//! [`run`] parses arguments, executes one subcommand and returns a
//! [`CommandResult`]; [`render_report`] turns it into JSON or CSV. Exit codes:
//! 0 success or verified, 1 a computed negative answer or mismatch, 2 usage
//! or input error, 3 internal invariant violation.

use std::path::{Path, PathBuf};

use binomial_cayley::cayley::{adjacency_matrix, binomial_transform, binomial_weight, parse_weight_file};
use binomial_cayley::exactla::rank;
use binomial_cayley::groups::GroupSpec;
use binomial_cayley::particlebox::files::{parse_distribution, parse_family};
use binomial_cayley::particlebox::{
    compatibility_check, degeneracy, gram_matrix, observability_check, restrict, restriction_matrix,
    simulate_game, Distribution, MarginalFamily, Observability, RowKey, Sigma, SystemSpec,
};
use binomial_cayley::rational::{format_rat, parse_rat};
use binomial_cayley::rsk::{lis, lis_histogram, rsk};
use binomial_cayley::spectra::verify::verify_spectrum_exact;
use binomial_cayley::spectra::{
    cyclic_kernel_dim, cyclic_spectrum, generic_spectrum, sym_kernel_dim, sym_spectrum, SpectrumReport,
};
use binomial_cayley::suite::{run_all, SuiteMode};
use binomial_cayley::{Error, Rat};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

/// Largest `m` for which symmetric group matrices are materialized.
pub const SYM_EXACT_MAX: usize = 7;
/// Largest `m^n` for which cyclic matrices are materialized.
pub const CYCLIC_EXACT_MAX: u128 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "bincay", about = "Exact spectra of binomial Cayley graphs and particle-box degeneracy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form or character-theoretic spectrum, optionally verified.
    Spectrum {
        #[command(subcommand)]
        group: SpectrumCommand,
    },
    /// Kernel of the restriction matrix.
    Kernel(SystemArgs),
    /// Dimension of the set of distributions with the same marginals.
    Degeneracy {
        #[command(flatten)]
        system: SystemArgs,
        /// Distribution file; the uniform distribution when omitted.
        #[arg(long)]
        dist: Option<PathBuf>,
    },
    /// Decide whether a marginal family comes from a distribution.
    Observe {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        family: PathBuf,
    },
    /// Marginal family of a distribution.
    Restrict {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        dist: PathBuf,
    },
    /// Robinson–Schensted tableaux of a permutation such as 3,1,2.
    Rsk { perm: String },
    /// Permutations of S_m counted by longest increasing subsequence.
    LisCount {
        #[arg(long)]
        m: usize,
    },
    /// Play the observation game with a seeded generator.
    Simulate {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        dist: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        rounds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every verification criterion.
    VerifyAll {
        #[arg(long, conflicts_with = "slow")]
        fast: bool,
        #[arg(long)]
        slow: bool,
    },
}

#[derive(Subcommand, Debug)]
enum SpectrumCommand {
    Sym {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        verify: bool,
    },
    Cyclic {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        verify: bool,
    },
    Custom {
        #[arg(long)]
        weights: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Args, Debug)]
struct SystemArgs {
    #[arg(long, default_value = "all")]
    sigma: String,
    /// Particle count; defaults to `m` for bijections.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
}

impl SystemArgs {
    fn spec(&self) -> Result<SystemSpec, Error> {
        let sigma: Sigma = self.sigma.parse()?;
        let n = match (self.n, sigma) {
            (Some(n), _) => n,
            (None, Sigma::Bij) => self.m,
            (None, Sigma::All) => return Err(Error::InvalidInput("--n is required for --sigma all".into())),
        };
        let spec = SystemSpec::new(n, self.m, self.k, sigma)?;
        guard_group(spec.group())?;
        Ok(spec)
    }
}

/// A table for CSV output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub params: Value,
    pub status: String,
    pub data: Value,
    pub provenance: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub format: Format,
    pub report: Report,
    pub table: Option<Table>,
    /// Help text, printed verbatim instead of a report.
    pub help: Option<String>,
}

impl CommandResult {
    fn usage(command: &str, message: String, usage: String) -> Self {
        CommandResult {
            exit_code: 2,
            format: Format::Json,
            report: Report {
                command: command.to_string(),
                params: Value::Null,
                status: "usage_error".into(),
                data: json!({ "error": message, "usage": usage }),
                provenance: vec![],
            },
            table: None,
            help: None,
        }
    }
}

struct Outcome {
    status: &'static str,
    data: Value,
    provenance: Vec<&'static str>,
    table: Option<Table>,
}

fn exit_code_for(status: &str) -> i32 {
    match status {
        "ok" | "verified" | "observable" | "help" => 0,
        "usage_error" => 2,
        "internal_error" => 3,
        _ => 1,
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, Error> {
    serde_json::to_value(v).map_err(|e| Error::Internal(format!("serialization failed: {e}")))
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn guard_group(g: GroupSpec) -> Result<(), Error> {
    match g {
        GroupSpec::Sym { m } if m > SYM_EXACT_MAX => Err(Error::TooLarge(format!(
            "exact computations on S_m are limited to m ≤ {SYM_EXACT_MAX}, got m = {m}"
        ))),
        GroupSpec::CyclicPower { .. } if g.order() > CYCLIC_EXACT_MAX => Err(Error::TooLarge(format!(
            "exact computations on (Z_m)^n are limited to m^n ≤ {CYCLIC_EXACT_MAX}, got {}",
            g.order()
        ))),
        _ => Ok(()),
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, S>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let mut r = CommandResult::usage("help", String::new(), text.clone());
                    r.exit_code = 0;
                    r.report.status = "help".into();
                    r.help = Some(text);
                    r
                }
                _ => CommandResult::usage("unknown", e.kind().to_string(), text),
            };
        }
    };
    let (name, params) = describe(&cli.command);
    let outcome = execute(&cli.command);
    let (status, data, provenance, table) = match outcome {
        Ok(o) => (o.status.to_string(), o.data, o.provenance, o.table),
        Err(Error::Internal(msg)) => ("internal_error".to_string(), json!({ "error": msg }), vec![], None),
        Err(e) => ("usage_error".to_string(), json!({ "error": e.to_string() }), vec![], None),
    };
    CommandResult {
        exit_code: exit_code_for(&status),
        format: cli.format,
        report: Report {
            command: name,
            params,
            status,
            data,
            provenance: provenance.into_iter().map(String::from).collect(),
        },
        table,
        help: None,
    }
}

fn describe(c: &Command) -> (String, Value) {
    let sys = |s: &SystemArgs| json!({ "sigma": s.sigma, "n": s.n, "m": s.m, "k": s.k });
    match c {
        Command::Spectrum { group } => match group {
            SpectrumCommand::Sym { m, k, verify } => ("spectrum sym".into(), json!({ "m": m, "k": k, "verify": verify })),
            SpectrumCommand::Cyclic { m, n, k, verify } => {
                ("spectrum cyclic".into(), json!({ "m": m, "n": n, "k": k, "verify": verify }))
            }
            SpectrumCommand::Custom { weights, k, verify } => (
                "spectrum custom".into(),
                json!({ "weights": weights.display().to_string(), "k": k, "verify": verify }),
            ),
        },
        Command::Kernel(s) => ("kernel".into(), sys(s)),
        Command::Degeneracy { system, dist } => {
            let mut p = sys(system);
            p["dist"] = dist.as_ref().map_or(json!("uniform"), |d| json!(d.display().to_string()));
            ("degeneracy".into(), p)
        }
        Command::Observe { system, family } => {
            let mut p = sys(system);
            p["family"] = json!(family.display().to_string());
            ("observe".into(), p)
        }
        Command::Restrict { system, dist } => {
            let mut p = sys(system);
            p["dist"] = json!(dist.display().to_string());
            ("restrict".into(), p)
        }
        Command::Rsk { perm } => ("rsk".into(), json!({ "perm": perm })),
        Command::LisCount { m } => ("lis-count".into(), json!({ "m": m })),
        Command::Simulate { system, dist, rounds, seed } => {
            let mut p = sys(system);
            p["dist"] = json!(dist.display().to_string());
            p["rounds"] = json!(rounds);
            p["seed"] = json!(seed);
            ("simulate".into(), p)
        }
        Command::VerifyAll { slow, .. } => ("verify-all".into(), json!({ "mode": if *slow { "slow" } else { "fast" } })),
    }
}

fn spectrum_table(s: &SpectrumReport) -> Table {
    Table {
        header: vec!["eigenvalue".into(), "multiplicity".into()],
        rows: s
            .entries
            .iter()
            .map(|e| vec![format_rat(&e.eigenvalue), e.multiplicity.to_string()])
            .collect(),
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn family_table(keys: &[RowKey], values: &[Rat]) -> Table {
    Table {
        header: vec!["i".into(), "j".into(), "value".into()],
        rows: keys
            .iter()
            .zip(values)
            .map(|(k, v)| vec![join(&k.particles), join(&k.boxes), format_rat(v)])
            .collect(),
    }
}

fn family_json(fam: &MarginalFamily) -> Value {
    Value::Object(
        fam.entries()
            .into_iter()
            .map(|(k, v)| (k.to_string(), Value::String(format_rat(&v))))
            .collect(),
    )
}

fn spectrum_outcome(
    spectrum: SpectrumReport,
    verify: Option<binomial_cayley::cayley::AdjacencyMatrix>,
    provenance: Vec<&'static str>,
) -> Result<Outcome, Error> {
    let table = Some(spectrum_table(&spectrum));
    let mut data = to_value(&spectrum)?;
    data["kernel_dim"] = json!(spectrum.kernel_dim());
    let status = match verify {
        None => "ok",
        Some(a) => {
            let v = verify_spectrum_exact(&a, &spectrum)?;
            data["verification"] = to_value(&v)?;
            if v.verified {
                "verified"
            } else {
                "mismatch"
            }
        }
    };
    Ok(Outcome {
        status,
        data,
        provenance,
        table,
    })
}

fn load_distribution(s: &SystemSpec, path: Option<&Path>) -> Result<Distribution, Error> {
    match path {
        None => Ok(Distribution::uniform(s)),
        Some(p) => parse_distribution(s, &read(p)?),
    }
}

fn execute(c: &Command) -> Result<Outcome, Error> {
    match c {
        Command::Spectrum { group } => match group {
            SpectrumCommand::Sym { m, k, verify } => {
                let g = GroupSpec::sym(*m)?;
                let spectrum = sym_spectrum(*m, *k)?;
                let a = if *verify {
                    guard_group(g)?;
                    Some(adjacency_matrix(&binomial_weight(g, *k as u64)?)?)
                } else {
                    None
                };
                spectrum_outcome(
                    spectrum,
                    a,
                    vec!["eigenvalues of binomial Cayley graphs on symmetric groups (crop counts)"],
                )
            }
            SpectrumCommand::Cyclic { m, n, k, verify } => {
                let g = GroupSpec::cyclic_power(*m, *n)?;
                let spectrum = cyclic_spectrum(*m, *n, *k)?;
                let a = if *verify {
                    guard_group(g)?;
                    Some(adjacency_matrix(&binomial_weight(g, *k as u64)?)?)
                } else {
                    None
                };
                spectrum_outcome(
                    spectrum,
                    a,
                    vec!["eigenvalues of binomial Cayley graphs on powers of cyclic groups"],
                )
            }
            SpectrumCommand::Custom { weights, k, verify } => {
                let w = binomial_transform(&parse_weight_file(&read(weights)?)?, *k)?;
                guard_group(w.group)?;
                let spectrum = generic_spectrum(&w)?;
                let a = if *verify { Some(adjacency_matrix(&w)?) } else { None };
                spectrum_outcome(spectrum, a, vec!["spectra of weighted normal Cayley graphs from characters"])
            }
        },
        Command::Kernel(args) => {
            let s = args.spec()?;
            let m = restriction_matrix(&s)?.to_rat();
            let basis = binomial_cayley::exactla::kernel_basis(&m);
            gram_matrix(&s)?;
            let predicted = match s.sigma {
                Sigma::All => cyclic_kernel_dim(s.n, s.m, s.k)?,
                Sigma::Bij => sym_kernel_dim(s.m, s.k)?,
            };
            let dimension = basis.len();
            let data = json!({
                "rows": m.rows(),
                "cols": m.cols(),
                "rank": rank(&m),
                "dimension": dimension,
                "predicted_dimension": predicted,
                "gram_equals_adjacency": true,
                "basis": basis.iter().map(|v| v.iter().map(format_rat).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            Ok(Outcome {
                status: if predicted == dimension as u128 { "ok" } else { "mismatch" },
                data,
                provenance: vec![
                    "restriction matrix of a particle-box system",
                    "Gram matrix equals binomial Cayley adjacency matrix",
                ],
                table: None,
            })
        }
        Command::Degeneracy { system, dist } => {
            let s = system.spec()?;
            let p = load_distribution(&s, dist.as_deref())?;
            let report = degeneracy(&s, &p)?;
            Ok(Outcome {
                status: "ok",
                data: to_value(&report)?,
                provenance: vec!["degeneracy bounded by the kernel dimension, equal for interior points"],
                table: None,
            })
        }
        Command::Observe { system, family } => {
            let s = system.spec()?;
            let fam = parse_family(&s, &read(family)?)?;
            let verdict = compatibility_check(&fam)?;
            if !verdict.compatible {
                return Ok(Outcome {
                    status: "incompatible",
                    data: json!({ "compatible": false, "violation": to_value(&verdict.violation)? }),
                    provenance: vec!["compatibility of marginal families"],
                    table: None,
                });
            }
            let obs = observability_check(&fam)?;
            let status = match obs {
                Observability::Observable { .. } => "observable",
                _ => "not_observable",
            };
            Ok(Outcome {
                status,
                data: json!({ "compatible": true, "observability": to_value(&obs)? }),
                provenance: vec!["compatibility of marginal families", "observable families"],
                table: None,
            })
        }
        Command::Restrict { system, dist } => {
            let s = system.spec()?;
            let p = parse_distribution(&s, &read(dist)?)?;
            let fam = restrict(&s, &p.as_signed())?;
            Ok(Outcome {
                status: "ok",
                data: json!({ "family": family_json(&fam) }),
                provenance: vec!["k-th restriction of a distribution"],
                table: Some(family_table(&fam.keys(), &fam.values)),
            })
        }
        Command::Rsk { perm } => {
            let p: Vec<usize> = perm
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| Error::InvalidInput(format!("bad permutation {perm:?}"))))
                .collect::<Result<_, _>>()?;
            let (pt, qt) = rsk(&p)?;
            let shape = pt.shape();
            Ok(Outcome {
                status: if shape.first_row() == lis(&p) { "ok" } else { "mismatch" },
                data: json!({
                    "insertion": pt.rows(),
                    "recording": qt.rows(),
                    "shape": shape.parts(),
                    "lis": lis(&p),
                }),
                provenance: vec!["RSK correspondence; first row length equals lis"],
                table: None,
            })
        }
        Command::LisCount { m } => {
            guard_group(GroupSpec::sym(*m)?)?;
            let hist = lis_histogram(*m)?;
            let mut all_agree = true;
            let rows: Vec<Value> = (0..=*m)
                .map(|k| {
                    let short: u64 = hist.iter().take(m - k).sum();
                    let dim = sym_kernel_dim(*m, k)?;
                    all_agree &= dim == short as u128;
                    Ok(json!({ "k": k, "kernel_dim": dim, "without_increasing_run_of_length_m_minus_k": short }))
                })
                .collect::<Result<_, Error>>()?;
            Ok(Outcome {
                status: if all_agree { "verified" } else { "mismatch" },
                data: json!({ "histogram": hist, "kernels": rows }),
                provenance: vec!["kernel dimension counts permutations without long increasing subsequences"],
                table: None,
            })
        }
        Command::Simulate { system, dist, rounds, seed } => {
            let s = system.spec()?;
            let p = parse_distribution(&s, &read(dist)?)?;
            let tally = simulate_game(&s, &p, *rounds, *seed)?;
            let exact = restrict(&s, &p.as_signed())?;
            let keys = s.row_keys();
            let mut data = to_value(&tally)?;
            data["max_deviation"] = json!(tally.max_deviation(&exact.values));
            data["generator"] = json!("ChaCha8 (rand_chacha 0.3), seed_from_u64");
            Ok(Outcome {
                status: "ok",
                data,
                provenance: vec!["observation game: sample an arrangement, reveal k particles"],
                table: Some(family_table(&keys, &tally.frequencies)),
            })
        }
        Command::VerifyAll { slow, .. } => {
            let outcomes = run_all(if *slow { SuiteMode::Slow } else { SuiteMode::Fast });
            let passed = outcomes.iter().all(|o| o.passed);
            Ok(Outcome {
                status: if passed { "verified" } else { "mismatch" },
                data: json!({ "criteria": to_value(&outcomes)? }),
                provenance: vec!["all acceptance criteria"],
                table: Some(Table {
                    header: vec!["criterion".into(), "passed".into(), "title".into(), "detail".into()],
                    rows: outcomes
                        .iter()
                        .map(|o| vec![o.id.to_string(), o.passed.to_string(), o.title.clone(), o.detail.clone()])
                        .collect(),
                }),
            })
        }
    }
}

/// Renders the report. CSV is available only for tabular payloads.
pub fn render_report(result: &CommandResult, format: Format) -> Result<String, Error> {
    match format {
        Format::Json => serde_json::to_string_pretty(&result.report)
            .map(|s| s + "\n")
            .map_err(|e| Error::Internal(format!("serialization failed: {e}"))),
        Format::Csv => {
            let table = result.table.as_ref().ok_or_else(|| {
                Error::InvalidInput(format!("command `{}` has no tabular output; use --format json", result.report.command))
            })?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Internal(format!("csv output failed: {e}"));
            w.write_record(&table.header).map_err(io)?;
            for row in &table.rows {
                w.write_record(row).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Internal(format!("csv output failed: {e}")))?;
            String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
        }
    }
}

/// Renders in the format requested on the command line, falling back to a
/// JSON usage error when that format does not apply.
pub fn render(result: &mut CommandResult) -> String {
    if let Some(help) = &result.help {
        return help.clone();
    }
    match render_report(result, result.format) {
        Ok(text) => text,
        Err(e) => {
            result.exit_code = 2;
            result.report.status = "usage_error".into();
            result.report.data = json!({ "error": e.to_string() });
            result.table = None;
            render_report(result, Format::Json).unwrap_or_else(|e| format!("{e}\n"))
        }
    }
}

/// Reads a marginal family back from `i,j,value` CSV.
pub fn parse_family_csv(s: &SystemSpec, text: &str) -> Result<MarginalFamily, Error> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut entries = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse { line: line + 2, msg: e.to_string() })?;
        if rec.len() != 3 {
            return Err(Error::Parse { line: line + 2, msg: "expected i,j,value".into() });
        }
        let key: RowKey = format!("i=({});j=({})", &rec[0], &rec[1]).parse()?;
        entries.push((key, parse_rat(&rec[2])?));
    }
    MarginalFamily::from_entries(*s, entries)
}

/// Reads a spectrum back from `eigenvalue,multiplicity` CSV.
pub fn parse_spectrum_csv(text: &str) -> Result<Vec<(Rat, u128)>, Error> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse { line: line + 2, msg: e.to_string() })?;
        let mult = rec
            .get(1)
            .and_then(|m| m.parse().ok())
            .ok_or_else(|| Error::Parse { line: line + 2, msg: "bad multiplicity".into() })?;
        out.push((parse_rat(rec.get(0).unwrap_or(""))?, mult));
    }
    Ok(out)
}
