//! Command-line interface: wires `parse → complete → classify → udr`
//! pipelines over the shipped families (or a user presentation file), with
//! JSON output and golden-file comparison for CI.
//!
//! Exit codes: 0 on success (and on a matching `--expected` file), 2 when a
//! golden comparison fails, 1 on any error.  Errors are emitted as one JSON
//! object on stderr.  Identical invocations produce byte-identical output;
//! `--seed` only feeds the randomized fallbacks of the isomorphism search,
//! never a reported value.

mod json;
mod names;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use blockforge_core::algebra::Algebra;
use blockforge_core::classifier::{
    enumerate_endok, name_module, partition, tau3_status, ClassifiedModule, EnumerateOptions,
    ModuleName,
};
use blockforge_core::deformation::{build_ubar, classify_udr, lift_profile, UdrFlags, UdrInput};
use blockforge_core::homology::{ext_dim, tau_period};
use blockforge_core::linalg::FieldElement;
use blockforge_core::presentations::{
    bind_parameters, parse_presentation, print_presentation, AlgebraPresentation, FamilyId,
    ParseError, VertexId,
};
use blockforge_core::repmod::{socle_multiset, IsoOptions, Representation};
use blockforge_core::rewriting::radical_nilpotency;

use json::*;
use names::resolve_module;

#[derive(Parser)]
#[command(
    name = "blockforge",
    version,
    about = "Exact computations with basic algebras of tame blocks: End = k classification and deformation-ring tables"
)]
struct Cli {
    /// Seed for randomized spot checks (never affects reported results).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker-thread cap for parallelizable passes.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct AlgebraArgs {
    /// Shipped family: SD2A1, Q3B, or KleinFour.
    #[arg(long, conflicts_with = "file")]
    family: Option<String>,
    /// Presentation file in the .qa format (user-defined family).
    #[arg(long)]
    file: Option<PathBuf>,
    /// Size parameter n (defect 2^n); KleinFour defaults to 2.
    #[arg(long)]
    n: Option<i64>,
    /// Scalar parameter c as an integer encoding; 2 or 3 land in GF(4).
    #[arg(long)]
    c: Option<u16>,
    /// Override the completion degree cap.
    #[arg(long)]
    degree_cap: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a presentation file.
    Parse {
        #[arg(long)]
        file: PathBuf,
    },
    /// Emit the monomial basis summary of the algebra.
    Basis {
        #[command(flatten)]
        algebra: AlgebraArgs,
    },
    /// Classify all modules with endomorphism ring k.
    Classify {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Composition-length cap for the search.
        #[arg(long, default_value_t = 4)]
        cap: usize,
        /// Compare the report against a golden file; exit 2 on mismatch.
        #[arg(long)]
        expected: Option<PathBuf>,
    },
    /// Dimension of Ext^i(M, N).
    Ext {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        module: String,
        /// Target module (defaults to the module itself).
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Ω²-period of an indecomposable non-projective module.
    Tube {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
    /// The self-extension module of a module with one-dimensional self-Ext.
    Ubar {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        module: String,
    },
    /// Largest truncation order reached by a first-order lift direction.
    Lift {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        module: String,
        /// Comma-separated Ext-coordinates; defaults to (1,0,...,0).
        #[arg(long)]
        direction: Option<String>,
        #[arg(long, default_value_t = 5)]
        max_order: usize,
    },
    /// The symbolic universal deformation ring of a classified module.
    Udr {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        module: String,
        /// Metadata file {module: {height1, tube_correspondence, lifts_over_W}};
        /// defaults to the documented flags shipped with the family.
        #[arg(long)]
        metadata: Option<PathBuf>,
    },
}

struct AppError {
    code: i32,
    body: ErrorOut,
    /// Output that should still reach stdout (the report on a golden mismatch).
    stdout: Option<String>,
}

impl AppError {
    fn new(kind: &str, message: String) -> AppError {
        AppError {
            code: 1,
            body: ErrorOut {
                error: ErrorBody { kind: kind.to_string(), message, line: None, col: None },
            },
            stdout: None,
        }
    }
}

macro_rules! app_error_from {
    ($ty:ty, $kind:expr) => {
        impl From<$ty> for AppError {
            fn from(e: $ty) -> Self {
                AppError::new($kind, e.to_string())
            }
        }
    };
}

app_error_from!(blockforge_core::presentations::CatalogError, "catalog");
app_error_from!(blockforge_core::algebra::BuildError, "build");
app_error_from!(blockforge_core::repmod::ModuleError, "module");
app_error_from!(blockforge_core::deformation::DeformError, "deformation");
app_error_from!(anyhow::Error, "module");
app_error_from!(serde_json::Error, "json");

impl From<ParseError> for AppError {
    fn from(e: ParseError) -> Self {
        AppError {
            code: 1,
            body: ErrorOut {
                error: ErrorBody {
                    kind: "parse".to_string(),
                    message: e.message.clone(),
                    line: Some(e.line),
                    col: Some(e.col),
                },
            },
            stdout: None,
        }
    }
}

/// The built algebra plus the display metadata the reports carry.
struct Resolved {
    alg: Algebra,
    family: String,
    family_id: Option<FamilyId>,
    params: ParamsJson,
}

fn fixture_file_name(id: &FamilyId) -> &'static str {
    match id {
        FamilyId::Sd2a1 => "sd2a1.qa",
        FamilyId::Q3b => "q3b.qa",
        FamilyId::KleinFourLocal => "klein4.qa",
        FamilyId::UserDefined(_) => "",
    }
}

fn resolve_algebra(args: &AlgebraArgs) -> Result<Resolved, AppError> {
    let mut scalars: BTreeMap<String, u16> = BTreeMap::new();
    if let Some(c) = args.c {
        scalars.insert("c".to_string(), c);
    }
    let (presentation, family, family_id, n_used): (
        AlgebraPresentation,
        String,
        Option<FamilyId>,
        Option<i64>,
    ) = if let Some(name) = &args.family {
        let id = FamilyId::parse(name).ok_or_else(|| {
            AppError::new(
                "catalog",
                format!("unknown family `{name}` (expected SD2A1, Q3B, or KleinFour)"),
            )
        })?;
        let n = match (args.n, &id) {
            (Some(n), _) => n,
            (None, FamilyId::KleinFourLocal) => 2,
            (None, _) => return Err(AppError::new("usage", format!("family {id} requires --n"))),
        };
        // BLOCKFORGE_FIXTURES overrides the shipped presentation sources
        let presentation = match std::env::var_os("BLOCKFORGE_FIXTURES") {
            Some(dir) => {
                let path = PathBuf::from(dir).join(fixture_file_name(&id));
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| AppError::new("io", format!("{}: {e}", path.display())))?;
                let symbolic = parse_presentation(&text)?;
                bind_parameters(&symbolic, Some(n), &scalars)?
            }
            None => blockforge_core::presentations::instantiate_family(&id, n, &scalars)?,
        };
        (presentation, id.name().to_string(), Some(id), Some(n))
    } else if let Some(path) = &args.file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::new("io", format!("{}: {e}", path.display())))?;
        let symbolic = parse_presentation(&text)?;
        let bound = bind_parameters(&symbolic, args.n, &scalars)?;
        let name = path
            .file_stem()
            .map_or_else(|| "user".to_string(), |s| s.to_string_lossy().to_string());
        (bound, name, None, args.n)
    } else {
        return Err(AppError::new("usage", "exactly one of --family or --file is required".into()));
    };
    let alg = match args.degree_cap {
        Some(cap) => Algebra::build_with_cap(&presentation, cap)?,
        None => Algebra::build(&presentation)?,
    };
    Ok(Resolved { alg, family, family_id, params: ParamsJson { n: n_used, c: args.c } })
}

fn iso_options(seed: u64) -> IsoOptions {
    IsoOptions { seed, ..IsoOptions::default() }
}

/// Order-preserving parallel map over `0..count` with at most `jobs` workers.
fn parallel_map<R: Send>(jobs: usize, count: usize, f: impl Fn(usize) -> R + Sync) -> Vec<R> {
    if jobs <= 1 || count <= 1 {
        return (0..count).map(f).collect();
    }
    let workers = jobs.min(count);
    let mut slots: Vec<Option<R>> = (0..count).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slot_lock = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= count {
                    break;
                }
                let r = f(i);
                slot_lock.lock().unwrap()[i] = Some(r);
            });
        }
    });
    slots.into_iter().map(|s| s.unwrap()).collect()
}

fn render<T: serde::Serialize>(value: &T, pretty: bool) -> Result<String, AppError> {
    Ok(if pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    })
}

fn embedded_metadata(id: &FamilyId) -> Option<&'static str> {
    match id {
        FamilyId::Sd2a1 => Some(include_str!("../assets/meta/sd2a1.json")),
        FamilyId::Q3b => Some(include_str!("../assets/meta/q3b.json")),
        FamilyId::KleinFourLocal => Some(include_str!("../assets/meta/klein4.json")),
        FamilyId::UserDefined(_) => None,
    }
}

/// Classification report assembly; `jobs` caps the τ-membership workers.
fn build_report(
    resolved: &Resolved,
    cap: usize,
    seed: u64,
    jobs: usize,
) -> Result<ClassifyOut, AppError> {
    let alg = &resolved.alg;
    let opts = EnumerateOptions { iso: iso_options(seed), ..EnumerateOptions::default() };
    let enumeration = enumerate_endok(alg, cap, &opts)?;
    let mut unnamed = 0usize;
    let mut entries: Vec<(ModuleName, usize, Representation)> = Vec::new();
    for rep in enumeration.modules {
        let mut name = name_module(alg, &rep, &opts.iso);
        if matches!(name, ModuleName::Unnamed(_)) {
            name = ModuleName::Unnamed(unnamed);
            unnamed += 1;
        }
        let d1 = ext_dim(alg, &rep, &rep, 1);
        entries.push((name, d1, rep));
    }
    let tau_results = parallel_map(jobs, entries.len(), |i| {
        let (_, d1, rep) = &entries[i];
        tau3_status(alg, rep, *d1, &opts.iso)
    });
    let mut modules: Vec<ClassifiedModule> = Vec::with_capacity(entries.len());
    for ((name, d1, rep), tau3) in entries.into_iter().zip(tau_results) {
        modules.push(ClassifiedModule {
            rep,
            name,
            d1,
            tau3: tau3?,
            absolutely_indecomposable: true,
        });
    }
    modules.sort_by(|a, b| {
        (a.rep.total_dim(), a.name.render(alg)).cmp(&(b.rep.total_dim(), b.name.render(alg)))
    });
    let part = partition(alg, &modules);
    Ok(ClassifyOut {
        family: resolved.family.clone(),
        params: ParamsJson { n: resolved.params.n, c: resolved.params.c },
        field: format!("{}", alg.field()),
        cap,
        cap_boundary_hit: enumeration.cap_boundary_hit,
        modules: modules.iter().map(|m| module_to_json(alg, m)).collect(),
        partition: part.into(),
    })
}

fn parse_direction(text: &str, alg: &Algebra) -> Result<Vec<FieldElement>, AppError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|part| {
            let v: u16 = part
                .trim()
                .parse()
                .map_err(|_| AppError::new("usage", format!("bad direction entry `{part}`")))?;
            alg.field().element(v).map_err(|e| AppError::new("usage", format!("{e}")))
        })
        .collect()
}

fn run(cli: &Cli) -> Result<String, AppError> {
    if cli.jobs == 0 {
        return Err(AppError::new("usage", "--jobs must be at least 1".into()));
    }
    match &cli.command {
        Command::Parse { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| AppError::new("io", format!("{}: {e}", file.display())))?;
            let p = parse_presentation(&text)?;
            // canonical output must reparse to the same presentation
            debug_assert_eq!(parse_presentation(&print_presentation(&p)).as_ref(), Ok(&p));
            let out = ParseOut {
                field: format!("{}", p.field),
                vertices: p.quiver.vertex_count(),
                arrows: p.quiver.arrow_count(),
                relations: p.relations.len(),
                params: p.params.iter().map(|d| d.name.clone()).collect(),
            };
            render(&out, cli.pretty)
        }
        Command::Basis { algebra } => {
            let resolved = resolve_algebra(algebra)?;
            let alg = &resolved.alg;
            let quiver = alg.quiver();
            let mut pairs = BTreeMap::new();
            for ((s, t), count) in alg.basis().pair_counts() {
                let key = format!(
                    "{}->{}",
                    quiver.vertex_label(VertexId(s)),
                    quiver.vertex_label(VertexId(t))
                );
                pairs.insert(key, count);
            }
            let out = BasisOut {
                family: resolved.family.clone(),
                params: resolved.params,
                dimension: alg.dimension(),
                pairs,
                nilpotency: radical_nilpotency(alg.basis()),
            };
            render(&out, cli.pretty)
        }
        Command::Classify { algebra, cap, expected } => {
            if *cap == 0 {
                return Err(AppError::new("usage", "--cap must be at least 1".into()));
            }
            let resolved = resolve_algebra(algebra)?;
            let report = build_report(&resolved, *cap, cli.seed, cli.jobs)?;
            let text = render(&report, cli.pretty)?;
            if let Some(path) = expected {
                let golden_text = std::fs::read_to_string(path)
                    .map_err(|e| AppError::new("io", format!("{}: {e}", path.display())))?;
                let golden: serde_json::Value = serde_json::from_str(&golden_text)?;
                let produced: serde_json::Value = serde_json::to_value(&report)?;
                if golden != produced {
                    return Err(AppError {
                        code: 2,
                        body: ErrorOut {
                            error: ErrorBody {
                                kind: "golden_mismatch".to_string(),
                                message: format!("classification does not match {}", path.display()),
                                line: None,
                                col: None,
                            },
                        },
                        stdout: Some(text),
                    });
                }
            }
            Ok(text)
        }
        Command::Ext { algebra, module, target, degree } => {
            if *degree == 0 {
                return Err(AppError::new("usage", "--degree must be at least 1".into()));
            }
            let resolved = resolve_algebra(algebra)?;
            let alg = &resolved.alg;
            let m = resolve_module(alg, module)?;
            let target_name = target.clone().unwrap_or_else(|| module.clone());
            let t = resolve_module(alg, &target_name)?;
            let dim = ext_dim(alg, &m, &t, *degree);
            let out = ExtOut {
                family: resolved.family.clone(),
                params: resolved.params,
                module: module.clone(),
                target: target_name,
                degree: *degree,
                dim,
            };
            render(&out, cli.pretty)
        }
        Command::Tube { algebra, module, cap } => {
            let resolved = resolve_algebra(algebra)?;
            let alg = &resolved.alg;
            let m = resolve_module(alg, module)?;
            let period = tau_period(alg, &m, *cap, &iso_options(cli.seed))?;
            let out = TubeOut {
                family: resolved.family.clone(),
                params: resolved.params,
                module: module.clone(),
                cap: *cap,
                period,
            };
            render(&out, cli.pretty)
        }
        Command::Ubar { algebra, module } => {
            let resolved = resolve_algebra(algebra)?;
            let alg = &resolved.alg;
            let m = resolve_module(alg, module)?;
            let ubar = build_ubar(alg, &m)?;
            let quiver = alg.quiver();
            let mut socle = BTreeMap::new();
            for (v, mult) in socle_multiset(alg, &ubar.rep).into_iter().enumerate() {
                socle.insert(quiver.vertex_label(VertexId(v)).to_string(), mult);
            }
            let out = UbarOut {
                family: resolved.family.clone(),
                params: resolved.params,
                module: module.clone(),
                dim: ubar.rep.total_dim(),
                socle,
                nonsplit: true,
                routes_agree: true,
                ubar: rep_to_json(alg, &ubar.rep),
            };
            render(&out, cli.pretty)
        }
        Command::Lift { algebra, module, direction, max_order } => {
            if *max_order == 0 {
                return Err(AppError::new("usage", "--max-order must be at least 1".into()));
            }
            let resolved = resolve_algebra(algebra)?;
            let alg = &resolved.alg;
            let m = resolve_module(alg, module)?;
            let d1 = ext_dim(alg, &m, &m, 1);
            let dir: Vec<FieldElement> = match direction {
                Some(text) => parse_direction(text, alg)?,
                None => {
                    let mut v = vec![alg.field().zero(); d1];
                    if let Some(first) = v.first_mut() {
                        *first = alg.field().one();
                    }
                    v
                }
            };
            let profile = lift_profile(alg, &m, &dir, *max_order)?;
            let out = LiftOut {
                family: resolved.family.clone(),
                params: resolved.params,
                module: module.clone(),
                direction: dir.iter().map(|c| c.0 as u16).collect(),
                max_order: *max_order,
                profile,
            };
            render(&out, cli.pretty)
        }
        Command::Udr { algebra, module, metadata } => {
            let resolved = resolve_algebra(algebra)?;
            let alg = &resolved.alg;
            let m = resolve_module(alg, module)?;
            if blockforge_core::repmod::end_dim(alg, &m) != 1 {
                return Err(AppError::new(
                    "deformation",
                    format!("`{module}` does not have endomorphism ring k"),
                ));
            }
            let meta: MetadataFile = match metadata {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| AppError::new("io", format!("{}: {e}", path.display())))?;
                    serde_json::from_str(&text)?
                }
                None => {
                    let id = resolved.family_id.as_ref().ok_or_else(|| {
                        AppError::new(
                            "usage",
                            "--metadata is required for user-defined families".into(),
                        )
                    })?;
                    let text = embedded_metadata(id).ok_or_else(|| {
                        AppError::new("usage", "--metadata is required for this input".into())
                    })?;
                    serde_json::from_str(text)?
                }
            };
            let entry = meta.get(module).cloned().unwrap_or_default();
            let d1 = ext_dim(alg, &m, &m, 1);
            let tau3 = tau3_status(alg, &m, d1, &iso_options(cli.seed))?;
            let input = UdrInput {
                d1,
                tau3,
                two_vertex_quiver: alg.quiver().vertex_count() == 2,
                n: resolved.params.n,
            };
            let flags = UdrFlags {
                height1: entry.height1,
                tube_correspondence: entry.tube_correspondence,
                lifts_over_w: entry.lifts_over_w,
            };
            let ring = classify_udr(&flags, &input)?;
            let out = UdrOut {
                family: resolved.family.clone(),
                params: resolved.params,
                module: module.clone(),
                d1,
                tau3: tau3_str(tau3).to_string(),
                ring: ring.render(),
                q_degree: ring.q_degree,
                flags: entry,
                provenance: ProvenanceJson::default(),
            };
            render(&out, cli.pretty)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            let out = ErrorOut {
                error: ErrorBody {
                    kind: "usage".to_string(),
                    message: e.to_string(),
                    line: None,
                    col: None,
                },
            };
            eprintln!("{}", serde_json::to_string(&out).unwrap());
            std::process::exit(1);
        }
    };
    match run(&cli) {
        Ok(text) => println!("{text}"),
        Err(err) => {
            if let Some(text) = err.stdout {
                println!("{text}");
            }
            eprintln!("{}", serde_json::to_string(&err.body).unwrap());
            std::process::exit(err.code);
        }
    }
}
