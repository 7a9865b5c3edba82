//! Command-line surface over the structure toolkit: validate input
//! files, compute interchange tables, search for deformation
//! witnesses, enumerate and classify structures, and compute the
//! degree-3 cohomology group.
//!
//! Exit codes are a contract: 0 all checks pass, 1 mathematical
//! failure, 2 malformed input or bad invocation, 3 resource refusal.
//! Every command renders the same facts as human-readable text and as
//! canonical JSON; `--format` picks the stdout form and `--out` stores
//! the JSON document of the run.

use anncat::algebra::{validate_bimodule, validate_ring, Bimodule, FiniteRing};
use anncat::cohomology::{H3Options, LinearError};
use anncat::io::{
    detect_kind, parse_bimodule, parse_cochain, parse_pair, parse_quadruple, parse_ring,
    parse_structure, read_json, to_canonical_json, write_json, FileKind, ReadError,
};
use anncat::relations::{check_cocycle_capped, check_structure_capped, AnnStructure};
use anncat::report::{
    classify_report, enumerate_report, h3_report, sigma_report, witness_report, FileCheck,
    ValidateReport,
};
use anncat::skeleton::SigmaMethod;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Method {
    #[default]
    Diagram,
    Printed,
}

#[derive(Debug, Parser)]
#[command(
    name = "anncat",
    about = "Validate, classify, and compute cohomology of categorical ring structures",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check input files: ring and bimodule laws, cochain
    /// normalization, structure relations, cocycle conditions.
    Validate {
        /// Files to check; kinds are detected from their fields.
        files: Vec<PathBuf>,
        /// Ring file giving the ambient ring for dependent checks.
        #[arg(long)]
        ring: Option<PathBuf>,
        /// Bimodule file giving the ambient coefficients.
        #[arg(long)]
        module: Option<PathBuf>,
        /// Also require eta(x,x) = 0 of structure files.
        #[arg(long)]
        regular: bool,
        /// Violation witnesses retained per relation.
        #[arg(long, default_value_t = 10)]
        witness_cap: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Write the JSON report to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve for all valid structures and group them by cohomology
    /// class, with witness spot-checks and closure audits.
    Classify {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        module: PathBuf,
        /// Largest structure count that will be materialized.
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the degree-3 cohomology group of the ring with the
    /// given coefficients.
    H3 {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        module: PathBuf,
        /// Also run an independent method and compare the orders.
        #[arg(long)]
        cross_check: bool,
        /// Work bound on the linear-algebra assembly.
        #[arg(long, default_value_t = 200_000_000)]
        budget: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the interchange table of a structure and compare the
    /// diagram evaluation with the closed-form expansion.
    Sigma {
        /// Structure file.
        structure: PathBuf,
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        module: PathBuf,
        /// How to evaluate the reported table.
        #[arg(long, value_enum, default_value_t)]
        method: Method,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a deformation pair carrying one valid structure to
    /// another.
    Witness {
        /// Structure file to deform.
        from: PathBuf,
        /// Target structure file.
        to: PathBuf,
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        module: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan the whole candidate space and list the valid structures.
    Enumerate {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        module: PathBuf,
        /// Largest candidate space that will be scanned.
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
        /// Keep only regular structures (eta(x,x) = 0).
        #[arg(long)]
        regular: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A command failure with its exit code; the message goes to stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn format(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }
}

impl From<ReadError> for Failure {
    fn from(e: ReadError) -> Failure {
        Failure { code: if e.is_math() { 1 } else { 2 }, message: e.to_string() }
    }
}

impl From<LinearError> for Failure {
    fn from(e: LinearError) -> Failure {
        let code = match &e {
            LinearError::SizeRefusal { .. }
            | LinearError::CountRefusal { .. }
            | LinearError::CrossCheckUnavailable => 3,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<anncat::cochain::CochainError> for Failure {
    fn from(e: anncat::cochain::CochainError) -> Failure {
        Failure { code: 1, message: e.to_string() }
    }
}

/// Prints the chosen form to stdout and stores the JSON form when an
/// output path is given.
fn emit<T: Serialize>(
    text: &str,
    json: &T,
    format: Format,
    out: Option<&Path>,
) -> Result<(), Failure> {
    if let Some(path) = out {
        write_json(path, json)?;
    }
    match format {
        Format::Text => print!("{text}"),
        Format::Json => print!("{}", to_canonical_json(json)),
    }
    Ok(())
}

fn load_ring(path: &Path) -> Result<FiniteRing, Failure> {
    let doc = read_json(path)?;
    let ring = parse_ring(path, &doc)?;
    let failures = validate_ring(&ring);
    if failures.is_empty() {
        Ok(ring)
    } else {
        Err(Failure {
            code: 1,
            message: format!(
                "{}: ring law {} ({}) fails at witness {:?}",
                path.display(),
                failures[0].law,
                failures[0].statement,
                failures[0].witness
            ),
        })
    }
}

fn load_module(path: &Path, ring: &FiniteRing) -> Result<Bimodule, Failure> {
    let doc = read_json(path)?;
    let module = parse_bimodule(path, &doc)?;
    if module.ring_order() != ring.order() {
        return Err(Failure {
            code: 1,
            message: format!(
                "{}: bimodule is over a ring of order {} but the ring has order {}",
                path.display(),
                module.ring_order(),
                ring.order()
            ),
        });
    }
    let failures = validate_bimodule(ring, &module);
    if failures.is_empty() {
        Ok(module)
    } else {
        Err(Failure {
            code: 1,
            message: format!(
                "{}: bimodule law {} ({}) fails at witness {:?}",
                path.display(),
                failures[0].law,
                failures[0].statement,
                failures[0].witness
            ),
        })
    }
}

fn load_structure(
    path: &Path,
    ring: &FiniteRing,
    module: &Bimodule,
) -> Result<AnnStructure, Failure> {
    let doc = read_json(path)?;
    Ok(parse_structure(path, &doc, ring, module)?)
}

/// Ambient context for dependent file checks; laziness keeps `validate
/// ring.json` usable without any flags.
struct Ambient {
    ring: Option<FiniteRing>,
    module: Option<Bimodule>,
}

fn check_one_file(
    path: &Path,
    ambient: &Ambient,
    regular: bool,
    witness_cap: usize,
) -> FileCheck {
    let name = path.display().to_string();
    let doc = match read_json(path) {
        Ok(doc) => doc,
        Err(e) => return FileCheck::failed(&name, "unknown", !e.is_math(), e.to_string()),
    };
    let kind = match detect_kind(&doc) {
        Some(kind) => kind,
        None => {
            return FileCheck::failed(
                &name,
                "unknown",
                true,
                "unrecognized document shape; expected a ring, bimodule, cochain, structure, quadruple, or pair".into(),
            )
        }
    };
    let label = kind.name();
    match kind {
        FileKind::Ring => match parse_ring(path, &doc) {
            Ok(ring) => FileCheck::with_laws(&name, label, validate_ring(&ring)),
            Err(e) => FileCheck::failed(&name, label, !e.is_math(), e.to_string()),
        },
        FileKind::Bimodule => {
            let ring = match &ambient.ring {
                Some(ring) => ring,
                None => {
                    return FileCheck::failed(
                        &name,
                        label,
                        true,
                        "bimodule checks need --ring".into(),
                    )
                }
            };
            match parse_bimodule(path, &doc) {
                Ok(module) if module.ring_order() == ring.order() => {
                    FileCheck::with_laws(&name, label, validate_bimodule(ring, &module))
                }
                Ok(module) => FileCheck::failed(
                    &name,
                    label,
                    false,
                    format!(
                        "bimodule is over a ring of order {} but --ring has order {}",
                        module.ring_order(),
                        ring.order()
                    ),
                ),
                Err(e) => FileCheck::failed(&name, label, !e.is_math(), e.to_string()),
            }
        }
        FileKind::Cochain | FileKind::Structure | FileKind::Quadruple | FileKind::Pair => {
            let (ring, module) = match (&ambient.ring, &ambient.module) {
                (Some(ring), Some(module)) => (ring, module),
                _ => {
                    return FileCheck::failed(
                        &name,
                        label,
                        true,
                        format!("{label} checks need --ring and --module"),
                    )
                }
            };
            let relations = match kind {
                FileKind::Cochain => {
                    return match parse_cochain(path, &doc, ring, module) {
                        Ok(_) => FileCheck::passed(&name, label),
                        Err(e) => FileCheck::failed(&name, label, !e.is_math(), e.to_string()),
                    }
                }
                FileKind::Structure => parse_structure(path, &doc, ring, module).and_then(|f| {
                    check_structure_capped(ring, module, &f, regular, witness_cap)
                        .map_err(|e| ReadError::Content {
                            path: name.clone(),
                            message: e.to_string(),
                        })
                }),
                FileKind::Quadruple => parse_quadruple(path, &doc, ring, module).and_then(|q| {
                    check_cocycle_capped(ring, module, &q, witness_cap).map_err(|e| {
                        ReadError::Content { path: name.clone(), message: e.to_string() }
                    })
                }),
                FileKind::Pair => {
                    return match parse_pair(path, &doc, ring, module) {
                        Ok(_) => FileCheck::passed(&name, label),
                        Err(e) => FileCheck::failed(&name, label, !e.is_math(), e.to_string()),
                    }
                }
                _ => unreachable!("outer match covers the other kinds"),
            };
            match relations {
                Ok(report) => FileCheck::with_relations(&name, label, report),
                Err(e) => FileCheck::failed(&name, label, !e.is_math(), e.to_string()),
            }
        }
    }
}

fn cmd_validate(
    files: &[PathBuf],
    ring_path: Option<&Path>,
    module_path: Option<&Path>,
    regular: bool,
    witness_cap: usize,
    format: Format,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    if files.is_empty() && ring_path.is_none() && module_path.is_none() {
        return Err(Failure::format("nothing to validate: pass files, --ring, or --module"));
    }
    let mut checks = Vec::new();
    let mut ambient = Ambient { ring: None, module: None };

    // Context files are validated first and also count as inputs.
    if let Some(path) = ring_path {
        let name = path.display().to_string();
        match read_json(path).and_then(|doc| parse_ring(path, &doc)) {
            Ok(ring) => {
                checks.push(FileCheck::with_laws(&name, "ring", validate_ring(&ring)));
                ambient.ring = Some(ring);
            }
            Err(e) => checks.push(FileCheck::failed(&name, "ring", !e.is_math(), e.to_string())),
        }
    }
    if let Some(path) = module_path {
        let name = path.display().to_string();
        match (read_json(path).and_then(|doc| parse_bimodule(path, &doc)), &ambient.ring) {
            (Ok(module), Some(ring)) if module.ring_order() == ring.order() => {
                checks.push(FileCheck::with_laws(
                    &name,
                    "bimodule",
                    validate_bimodule(ring, &module),
                ));
                ambient.module = Some(module);
            }
            (Ok(module), Some(ring)) => checks.push(FileCheck::failed(
                &name,
                "bimodule",
                false,
                format!(
                    "bimodule is over a ring of order {} but --ring has order {}",
                    module.ring_order(),
                    ring.order()
                ),
            )),
            (Ok(_), None) => checks.push(FileCheck::failed(
                &name,
                "bimodule",
                true,
                "bimodule checks need --ring".into(),
            )),
            (Err(e), _) => {
                checks.push(FileCheck::failed(&name, "bimodule", !e.is_math(), e.to_string()))
            }
        }
    }
    for path in files {
        checks.push(check_one_file(path, &ambient, regular, witness_cap));
    }

    let report = ValidateReport::new(checks);
    emit(&report.render_text(), &report, format, out)?;
    Ok(report.exit_code() as u8)
}

/// Moves inline representatives of an H3 report into sibling files of
/// the output path, referencing them by name.
fn externalize_representatives(
    report: &mut anncat::report::H3Report,
    out: &Path,
) -> Result<(), Failure> {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("h3");
    let dir = out.parent().map(Path::to_path_buf).unwrap_or_default();
    for (i, rep) in report.representatives.iter_mut().enumerate() {
        let file_name = format!("{stem}-rep{i}.json");
        if let Some(doc) = rep.quadruple.take() {
            write_json(&dir.join(&file_name), &doc)?;
        }
        rep.file = Some(file_name);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Validate { files, ring, module, regular, witness_cap, format, out } => {
            cmd_validate(
                files,
                ring.as_deref(),
                module.as_deref(),
                *regular,
                *witness_cap,
                *format,
                out.as_deref(),
            )
        }
        Command::Classify { ring, module, budget, format, out } => {
            let ring = load_ring(ring)?;
            let module = load_module(module, &ring)?;
            let report = classify_report(&ring, &module, *budget)?;
            emit(&report.render_text(), &report, *format, out.as_deref())?;
            Ok(report.exit_code() as u8)
        }
        Command::H3 { ring, module, cross_check, budget, format, out } => {
            let ring = load_ring(ring)?;
            let module = load_module(module, &ring)?;
            let opts = H3Options {
                cross_check: *cross_check,
                work_budget: *budget,
                ..H3Options::default()
            };
            let mut report = h3_report(&ring, &module, &opts)?;
            if let Some(out_path) = out.as_deref() {
                externalize_representatives(&mut report, out_path)?;
            }
            emit(&report.render_text(), &report, *format, out.as_deref())?;
            Ok(report.exit_code() as u8)
        }
        Command::Sigma { structure, ring, module, method, format, out } => {
            let ring = load_ring(ring)?;
            let module = load_module(module, &ring)?;
            let f = load_structure(structure, &ring, &module)?;
            let method = match method {
                Method::Diagram => SigmaMethod::Diagram,
                Method::Printed => SigmaMethod::Printed,
            };
            let report = sigma_report(&ring, &module, &f, method)?;
            emit(&report.render_text(), &report, *format, out.as_deref())?;
            Ok(report.exit_code() as u8)
        }
        Command::Witness { from, to, ring, module, format, out } => {
            let ring = load_ring(ring)?;
            let module = load_module(module, &ring)?;
            let from = load_structure(from, &ring, &module)?;
            let to = load_structure(to, &ring, &module)?;
            let report = witness_report(&ring, &module, &from, &to)?;
            emit(&report.render_text(), &report, *format, out.as_deref())?;
            Ok(report.exit_code() as u8)
        }
        Command::Enumerate { ring, module, budget, regular, format, out } => {
            let ring = load_ring(ring)?;
            let module = load_module(module, &ring)?;
            let report = enumerate_report(&ring, &module, *budget, *regular)?;
            emit(&report.render_text(), &report, *format, out.as_deref())?;
            Ok(report.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
