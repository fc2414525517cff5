//! Command-line interface.
//!
//! Exit status: 0 on success (audit counterexamples are findings and still
//! exit 0), 1 when the input structure fails validation, 2 on usage,
//! capacity or parse errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use gsr_core::classify::{partition, IsoClass};
use gsr_core::decompose::{
    central_idempotents, crt_check, maximal_family, pinned_ternary, reduction_modulo_radical,
    spectra_disjoint_union_check, wedderburn_check, PinningSpec,
};
use gsr_core::enumerate::{self as search, Additions, EnumerationResult, SearchSpec};
use gsr_core::modreps::{
    annihilators, audit_representation_theorems, enumerate_modules, is_simple, primitive_ideals,
    submodules,
};
use gsr_core::{validate_with, AssocMode, GammaSemiring, Subset};
use serde::Serialize;
use serde_json::json;

use crate::format::{parse_addition, serialize_structure, ParseError};
use crate::report::{analyze, elements, render_text, CrtView, ModuleBounds};
use crate::store::{read_structure, read_structure_dir, Store, StoreError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "gsr",
    version,
    about = "Finite n-ary Γ-semirings: validation, enumeration, analysis and classification"
)]
pub struct Cli {
    /// Associativity check: compare the two end bracketings, or every window.
    #[arg(long, global = true, value_enum)]
    pub assoc_mode: Option<ModeArg>,
    /// Violations kept per axiom when reporting.
    #[arg(long, global = true, default_value_t = 16)]
    pub max_violations: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    PaperEnds,
    Dornte,
}

impl From<ModeArg> for AssocMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::PaperEnds => AssocMode::PaperEnds,
            ModeArg::Dornte => AssocMode::DornteAllWindows,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check axioms A1–A4 exhaustively.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Enumerate all valid structures of a given shape into a results store.
    Enumerate(EnumerateArgs),
    /// Ideals, thresholds, primes, radicals, spectra, modules and theorem audits.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        report: OutputFormat,
        /// Module slot used for the representation audits.
        #[arg(long, default_value_t = 2)]
        slot: usize,
        /// Largest module carrier searched.
        #[arg(long, default_value_t = 2)]
        max_carrier: usize,
    },
    /// Group the structure files of a directory into isomorphism classes.
    Classify {
        dir: PathBuf,
        /// Also allow relabeling Γ.
        #[arg(long)]
        permute_gamma: bool,
    },
    /// Enumerate slot modules, simple modules and primitive ideals.
    Modules {
        file: PathBuf,
        #[arg(long)]
        slot: usize,
        #[arg(long)]
        max_carrier: usize,
    },
    /// Comaximal families, CRT, Wedderburn–Artin and pinning.
    Decompose {
        file: PathBuf,
        /// Pin this central idempotent to reduce to a ternary structure.
        #[arg(long)]
        pin: Option<u8>,
        /// Write the pinned structure here.
        #[arg(long, requires = "pin")]
        pinned_out: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        slot: usize,
        #[arg(long, default_value_t = 2)]
        max_carrier: usize,
    },
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("additions").required(true).args(["add_file", "all_additions"])))]
pub struct EnumerateArgs {
    /// Carrier size.
    #[arg(short = 'm')]
    pub m: usize,
    /// Arity of the operation (at least 3).
    #[arg(short = 'n')]
    pub n: usize,
    /// Size of Γ.
    #[arg(short = 'r')]
    pub r: usize,
    /// Fixed addition table (rows, or any object with an "add" field).
    #[arg(long)]
    pub add_file: Option<PathBuf>,
    /// Search every commutative monoid addition up to relabeling.
    #[arg(long)]
    pub all_additions: bool,
    /// Keep one canonical representative per isomorphism class.
    #[arg(long)]
    pub canonical: bool,
    /// Treat Γ-relabelings as isomorphisms.
    #[arg(long)]
    pub permute_gamma: bool,
    /// Split the search on the first D free cells.
    #[arg(long, default_value_t = 0)]
    pub shard_depth: usize,
    /// Run only this shard; without it all shards run in parallel.
    #[arg(long)]
    pub shard_index: Option<usize>,
    /// Worker threads for parallel shards (default: available cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Raise the free-cell limit of the search.
    #[arg(long)]
    pub max_free_cells: Option<usize>,
    /// Skip writing analysis reports.
    #[arg(long)]
    pub no_reports: bool,
    /// Results store directory.
    #[arg(short = 'o', long = "out")]
    pub out: PathBuf,
}

/// Error categories that map to exit status 2.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {cause}")]
    Parse { path: PathBuf, cause: ParseError },
    #[error(transparent)]
    Core(#[from] gsr_core::Error),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("{0}")]
    Usage(String),
}

fn load(path: &Path, mode: Option<ModeArg>) -> Result<GammaSemiring, CliError> {
    let s = read_structure(path)?;
    Ok(match mode {
        Some(m) => s.with_assoc_mode(m.into()),
        None => s,
    })
}

/// Parse `args` and run, writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> anyhow::Result<i32> {
    let mode = cli.assoc_mode;
    match &cli.command {
        Command::Validate { file, format } => {
            let s = load(file, mode)?;
            cmd_validate(&s, *format, cli.max_violations, out)
        }
        Command::Enumerate(args) => cmd_enumerate(args, mode, cli.max_violations, out),
        Command::Analyze {
            file,
            report,
            slot,
            max_carrier,
        } => {
            let s = load(file, mode)?;
            let bounds = ModuleBounds {
                slot: *slot,
                max_carrier: *max_carrier,
            };
            let r = analyze(&s, cli.max_violations, bounds).map_err(CliError::from)?;
            match report {
                OutputFormat::Json => out.write_all(r.to_json().as_bytes())?,
                OutputFormat::Text => out.write_all(render_text(&r).as_bytes())?,
            }
            Ok(if r.validation.valid {
                EXIT_OK
            } else {
                EXIT_INVALID
            })
        }
        Command::Classify { dir, permute_gamma } => cmd_classify(dir, *permute_gamma, mode, out),
        Command::Modules {
            file,
            slot,
            max_carrier,
        } => {
            let s = load(file, mode)?;
            cmd_modules(&s, *slot, *max_carrier, cli.max_violations, out)
        }
        Command::Decompose {
            file,
            pin,
            pinned_out,
            slot,
            max_carrier,
        } => {
            let s = load(file, mode)?;
            cmd_decompose(
                &s,
                *pin,
                pinned_out.as_deref(),
                (*slot, *max_carrier),
                cli.max_violations,
                out,
            )
        }
    }
}

fn cmd_validate(
    s: &GammaSemiring,
    format: OutputFormat,
    cap: usize,
    out: &mut dyn Write,
) -> anyhow::Result<i32> {
    let report = validate_with(s, cap);
    match format {
        OutputFormat::Json => {
            let v = json!({ "valid": report.valid, "violations": report.violations });
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        OutputFormat::Text => {
            if report.valid {
                writeln!(out, "valid")?;
            } else {
                writeln!(out, "invalid: {} violation(s)", report.violations.len())?;
                for v in &report.violations {
                    writeln!(out, "  {v}")?;
                }
            }
        }
    }
    Ok(if report.valid { EXIT_OK } else { EXIT_INVALID })
}

/// Refuse to run an invalid structure through commands that presuppose the
/// axioms.
fn require_valid(s: &GammaSemiring, cap: usize, out: &mut dyn Write) -> anyhow::Result<bool> {
    let report = validate_with(s, cap);
    if !report.valid {
        writeln!(out, "invalid: {} violation(s)", report.violations.len())?;
        for v in &report.violations {
            writeln!(out, "  {v}")?;
        }
    }
    Ok(report.valid)
}

#[derive(Serialize)]
struct EnumerationSummary {
    m: usize,
    n: usize,
    r: usize,
    assoc_mode: &'static str,
    canonical_only: bool,
    permute_gamma: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    shard: Option<ShardSummary>,
    additions_searched: usize,
    free_cells: usize,
    total_candidates_scanned: u64,
    valid_count: u64,
    canonical_class_count: u64,
    within_prefill_bound: bool,
    within_crude_bound: bool,
    structures: Vec<String>,
}

#[derive(Serialize)]
struct ShardSummary {
    depth: usize,
    index: usize,
    prefix: Vec<u8>,
}

fn run_shards(specs: Vec<SearchSpec>, jobs: usize) -> Result<Vec<EnumerationResult>, CliError> {
    let jobs = jobs.max(1).min(specs.len().max(1));
    let mut slots: Vec<Option<gsr_core::Result<EnumerationResult>>> =
        (0..specs.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunks: Vec<(usize, &[SearchSpec])> = {
            let per = specs.len().div_ceil(jobs);
            specs
                .chunks(per.max(1))
                .enumerate()
                .map(|(i, c)| (i * per.max(1), c))
                .collect()
        };
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|(start, chunk)| {
                scope.spawn(move || {
                    (
                        start,
                        chunk.iter().map(search::enumerate).collect::<Vec<_>>(),
                    )
                })
            })
            .collect();
        for h in handles {
            let (start, results) = h.join().expect("shard worker panicked");
            for (k, r) in results.into_iter().enumerate() {
                slots[start + k] = Some(r);
            }
        }
    });
    slots
        .into_iter()
        .map(|r| r.expect("every shard ran").map_err(CliError::from))
        .collect()
}

fn cmd_enumerate(
    args: &EnumerateArgs,
    mode: Option<ModeArg>,
    cap: usize,
    out: &mut dyn Write,
) -> anyhow::Result<i32> {
    let additions = match &args.add_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            Additions::Fixed(parse_addition(&text).map_err(|cause| CliError::Parse {
                path: path.clone(),
                cause,
            })?)
        }
        None => Additions::ScanAll,
    };
    let mut spec = SearchSpec::new(args.m, args.n, args.r, additions);
    spec.assoc_mode = mode.map_or(AssocMode::PaperEnds, Into::into);
    spec.canonical_only = args.canonical;
    spec.permute_gamma = args.permute_gamma;
    if let Some(c) = args.max_free_cells {
        spec.max_free_cells = c;
    }
    if args.m == 0 || args.n < 3 || args.r == 0 {
        return Err(CliError::Usage(format!(
            "invalid sizes m={}, n={}, r={}",
            args.m, args.n, args.r
        ))
        .into());
    }
    let shards = search::shard(&spec, args.shard_depth).map_err(CliError::from)?;
    let (result, shard_summary) = match args.shard_index {
        Some(i) => {
            let Some(one) = shards.get(i) else {
                return Err(CliError::Usage(format!(
                    "shard index {i} out of range: depth {} gives {} shards",
                    args.shard_depth,
                    shards.len()
                ))
                .into());
            };
            let r = search::enumerate(one).map_err(CliError::from)?;
            let prefix = one.shard.as_ref().map_or(Vec::new(), |s| s.prefix.clone());
            (
                r,
                Some(ShardSummary {
                    depth: args.shard_depth,
                    index: i,
                    prefix,
                }),
            )
        }
        None if args.shard_depth == 0 => (search::enumerate(&spec).map_err(CliError::from)?, None),
        None => {
            let jobs = args
                .jobs
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let parts = run_shards(shards, jobs)?;
            (search::merge(parts).map_err(CliError::from)?, None)
        }
    };
    let store = Store::open(&args.out).map_err(CliError::from)?;
    let mut written = Vec::with_capacity(result.records.len());
    for rec in &result.records {
        let digest = store
            .put_structure(&rec.structure)
            .map_err(CliError::from)?;
        if !args.no_reports {
            let report =
                analyze(&rec.structure, cap, ModuleBounds::default()).map_err(CliError::from)?;
            store
                .put_report(&digest, &report.to_json())
                .map_err(CliError::from)?;
        }
        written.push(digest);
    }
    store.rebuild_index().map_err(CliError::from)?;
    let summary = EnumerationSummary {
        m: args.m,
        n: args.n,
        r: args.r,
        assoc_mode: spec.assoc_mode.as_str(),
        canonical_only: args.canonical,
        permute_gamma: args.permute_gamma,
        shard: shard_summary,
        additions_searched: result.additions_searched,
        free_cells: result.free_cells,
        total_candidates_scanned: result.total_candidates_scanned,
        valid_count: result.valid_count,
        canonical_class_count: result.canonical_class_count,
        within_prefill_bound: result.within_prefill_bound(),
        within_crude_bound: result.within_crude_bound(args.n, args.r),
        structures: written,
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ClassView {
    shape: (usize, usize, usize),
    digest: String,
    members: Vec<String>,
    collision: bool,
}

fn cmd_classify(
    dir: &Path,
    permute_gamma: bool,
    mode: Option<ModeArg>,
    out: &mut dyn Write,
) -> anyhow::Result<i32> {
    // Accept either a store root or a directory of structure files.
    let structures_dir = if dir.join("structures").is_dir() {
        dir.join("structures")
    } else {
        dir.to_path_buf()
    };
    let files = read_structure_dir(&structures_dir).map_err(CliError::from)?;
    let structures: Vec<GammaSemiring> = files
        .iter()
        .map(|(_, s)| match mode {
            Some(m) => s.clone().with_assoc_mode(m.into()),
            None => s.clone(),
        })
        .collect();
    let classes: Vec<IsoClass> = partition(&structures, permute_gamma).map_err(CliError::from)?;
    let view: Vec<ClassView> = classes
        .into_iter()
        .map(|c| ClassView {
            shape: c.shape,
            digest: c.digest.hex(),
            members: c.members.iter().map(|&i| files[i].0.clone()).collect(),
            collision: c.collision,
        })
        .collect();
    let doc = json!({
        "permute_gamma": permute_gamma,
        "structures": files.len(),
        "class_count": view.len(),
        "classes": view,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    Ok(EXIT_OK)
}

fn cmd_modules(
    s: &GammaSemiring,
    slot: usize,
    max_carrier: usize,
    cap: usize,
    out: &mut dyn Write,
) -> anyhow::Result<i32> {
    if !require_valid(s, cap, out)? {
        return Ok(EXIT_INVALID);
    }
    let modules = enumerate_modules(s, slot, max_carrier).map_err(CliError::from)?;
    let mut listed = Vec::with_capacity(modules.len());
    for md in &modules {
        let ann = annihilators(md);
        listed.push(json!({
            "k": md.k(),
            "addition": md.madd().rows().collect::<Vec<_>>(),
            "action": md.action(),
            "simple": is_simple(md),
            "submodules": submodules(md).into_iter().map(elements).collect::<Vec<_>>(),
            "annihilator": elements(ann.two_sided),
            "left_annihilator": elements(ann.left),
            "right_annihilator": elements(ann.right),
        }));
    }
    let prim = primitive_ideals(s, slot, max_carrier).map_err(CliError::from)?;
    let checks = audit_representation_theorems(s, slot, max_carrier).map_err(CliError::from)?;
    let doc = json!({
        "slot": slot,
        "max_carrier": max_carrier,
        "module_classes": modules.len(),
        "modules": listed,
        "primitive_ideals": prim.ideals.iter().map(|(i, md)| json!({
            "ideal": elements(*i),
            "witness": gsr_core::modreps::describe(md),
        })).collect::<Vec<_>>(),
        "within_bound": format!("module carriers up to {max_carrier}"),
        "checks": checks,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    Ok(EXIT_OK)
}

fn cmd_decompose(
    s: &GammaSemiring,
    pin: Option<u8>,
    pinned_out: Option<&Path>,
    (slot, max_carrier): (usize, usize),
    cap: usize,
    out: &mut dyn Write,
) -> anyhow::Result<i32> {
    if !require_valid(s, cap, out)? {
        return Ok(EXIT_INVALID);
    }
    let maximals = maximal_family(s).map_err(CliError::from)?;
    let crt_maximal: Option<CrtView> = if maximals.len() >= 2 {
        Some(crt_check(s, &maximals).map_err(CliError::from)?.into())
    } else {
        None
    };
    let crt_zero: CrtView = crt_check(s, &[Subset::zero()])
        .map_err(CliError::from)?
        .into();
    let mut checks = vec![
        spectra_disjoint_union_check(s, &maximals).map_err(CliError::from)?,
        reduction_modulo_radical(s).map_err(CliError::from)?,
    ];
    let wedderburn = match wedderburn_check(s, slot, max_carrier) {
        Ok(w) => {
            checks.push(w.audit.clone());
            json!({
                "jacobson_zero": w.jacobson_zero,
                "minimal_primitives": w.minimal_primitives.into_iter().map(elements).collect::<Vec<_>>(),
                "factor_count": w.factor_count,
                "injective": w.injective,
            })
        }
        Err(e) => json!({ "status": "not_run", "reason": e.to_string() }),
    };
    let mut doc = json!({
        "central_idempotents": central_idempotents(s),
        "maximal_ideals": maximals.iter().map(|&m| elements(m)).collect::<Vec<_>>(),
        "crt_zero": crt_zero,
        "crt_maximal": crt_maximal,
        "wedderburn": wedderburn,
        "checks": checks,
    });
    if let Some(e) = pin {
        let spec = PinningSpec::first_last(s, e);
        let pinned = pinned_ternary(s, &spec).map_err(CliError::from)?;
        let text = serialize_structure(&pinned.structure);
        if let Some(path) = pinned_out {
            crate::store::write_atomic(path, text.as_bytes()).map_err(CliError::from)?;
        }
        doc["pinning"] = json!({
            "e": e,
            "gamma_map": spec.gamma_map,
            "structure": serde_json::from_str::<serde_json::Value>(&text)?,
            "audits": pinned.audits,
        });
    }
    writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    Ok(EXIT_OK)
}
