//! `scitm` command-line interface.
//!
//! Exit codes are a scripting contract:
//! 0 success, 1 validation/constraint errors, 2 usage or input parse
//! errors, 3 internal errors. Standard output carries only the
//! artifact; diagnostics go to standard error as
//! `severity:line:col:code:message` lines.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use scitm::crimemap::{default_mappings, load_mappings, MappingSet};
use scitm::dot::render_dot;
use scitm::engine::{default_rules, load_rules, RuleSet, ThreatType};
use scitm::model::LayeredModel;
use scitm::parser::parse_model;
use scitm::report::{build_report, render_json, render_markdown};
use scitm::template::{
    default_assignment, emit_template, instantiate_template, load_assignment, SubsystemPattern,
};
use scitm::validate::{validate, Severity};

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "scitm", version, about = "Threat modeling as code for smart city infrastructure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file and print diagnostics.
    Validate {
        /// Model file in the scitm model language.
        model: PathBuf,
    },
    /// Enumerate threats and render a report.
    Analyze {
        model: PathBuf,
        /// Rule set file (defaults to the bundled rules).
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Offence/evidence mapping file (defaults to the bundled tables).
        #[arg(long)]
        mappings: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Write the artifact here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Layer to draw (dot format only).
        #[arg(long, default_value_t = 0)]
        layer: u8,
    },
    /// Emit the bundled Smart City Infrastructure template.
    Template {
        /// Clause-to-group assignment file overriding the default.
        #[arg(long)]
        assignment: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look up offences and evidence for a threat type.
    Map {
        /// Threat type name, e.g. `data-flow-sniffing`.
        threat_type: String,
    },
}

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}

fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Validate { model } => cmd_validate(&model),
        Command::Analyze {
            model,
            rules,
            mappings,
            format,
            out,
            layer,
        } => cmd_analyze(&model, rules.as_deref(), mappings.as_deref(), format, out.as_deref(), layer),
        Command::Template { assignment, out } => cmd_template(assignment.as_deref(), out.as_deref()),
        Command::Map { threat_type } => cmd_map(&threat_type),
    }
}

fn read_file(path: &Path) -> Result<String, u8> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error:0:0:io-error:cannot read {}: {e}", path.display());
        EXIT_USAGE
    })
}

/// Parse a model file; syntax-level garbage is a usage error, semantic
/// model errors are validation failures.
fn load_model(path: &Path) -> Result<LayeredModel, u8> {
    let text = read_file(path)?;
    parse_model(&text).map_err(|e| {
        eprintln!("error:{}:{}:{}:{e}", e.line, e.col, e.code());
        if e.is_syntax() {
            EXIT_USAGE
        } else {
            EXIT_INVALID
        }
    })
}

fn load_rule_set(path: Option<&Path>) -> Result<RuleSet, u8> {
    match path {
        None => Ok(default_rules()),
        Some(p) => load_rules(&read_file(p)?).map_err(|e| {
            eprintln!("error:0:0:rule-error:{e}");
            EXIT_USAGE
        }),
    }
}

fn load_mapping_set(path: Option<&Path>) -> Result<MappingSet, u8> {
    match path {
        None => Ok(default_mappings()),
        Some(p) => load_mappings(&read_file(p)?).map_err(|e| {
            eprintln!("error:0:0:mapping-error:{e}");
            EXIT_USAGE
        }),
    }
}

fn write_artifact(out: Option<&Path>, text: &str) -> u8 {
    match out {
        None => {
            let mut stdout = std::io::stdout();
            if stdout.write_all(text.as_bytes()).is_err() {
                return EXIT_INTERNAL;
            }
            EXIT_OK
        }
        Some(path) => match fs::write(path, text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error:0:0:io-error:cannot write {}: {e}", path.display());
                EXIT_INTERNAL
            }
        },
    }
}

fn cmd_validate(path: &Path) -> u8 {
    let model = match load_model(path) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let diags = validate(&model);
    let mut failed = false;
    for d in &diags {
        eprintln!("{}:0:0:{}:{}", d.severity, d.code, d.message);
        failed |= d.severity == Severity::Error;
    }
    if failed {
        EXIT_INVALID
    } else {
        EXIT_OK
    }
}

fn cmd_analyze(
    model_path: &Path,
    rules_path: Option<&Path>,
    mappings_path: Option<&Path>,
    format: Format,
    out: Option<&Path>,
    layer: u8,
) -> u8 {
    let model = match load_model(model_path) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let diags = validate(&model);
    if !scitm::validate::is_valid(&diags) {
        for d in &diags {
            eprintln!("{}:0:0:{}:{}", d.severity, d.code, d.message);
        }
        return EXIT_INVALID;
    }
    if format == Format::Dot {
        return match render_dot(&model, layer) {
            Ok(text) => write_artifact(out, &text),
            Err(e) => {
                eprintln!("error:0:0:unknown-layer:{e}");
                EXIT_USAGE
            }
        };
    }
    let rules = match load_rule_set(rules_path) {
        Ok(r) => r,
        Err(code) => return code,
    };
    let mappings = match load_mapping_set(mappings_path) {
        Ok(m) => m,
        Err(code) => return code,
    };
    match build_report(&model, &rules, &mappings) {
        Ok(report) => {
            let text = match format {
                Format::Json => render_json(&report),
                Format::Md => render_markdown(&report),
                Format::Dot => unreachable!(),
            };
            write_artifact(out, &text)
        }
        Err(e) => {
            eprintln!("error:0:0:invalid-model:{e}");
            EXIT_INTERNAL
        }
    }
}

fn cmd_template(assignment_path: Option<&Path>, out: Option<&Path>) -> u8 {
    let assignment = match assignment_path {
        None => default_assignment(),
        Some(p) => {
            let text = match read_file(p) {
                Ok(t) => t,
                Err(code) => return code,
            };
            match load_assignment(&text) {
                Ok(a) => a,
                Err(e) => {
                    eprintln!("error:0:0:assignment-error:{e}");
                    return EXIT_INVALID;
                }
            }
        }
    };
    let model = instantiate_template(&assignment, &SubsystemPattern::default());
    write_artifact(out, &emit_template(&model))
}

fn cmd_map(name: &str) -> u8 {
    let Some(threat_type) = ThreatType::parse_cli(name) else {
        eprintln!("error:0:0:unknown-threat-type:`{name}` is not a known threat type");
        eprintln!("valid names:");
        for t in ThreatType::ALL {
            eprintln!("  {}", t.name());
        }
        return EXIT_USAGE;
    };
    let mappings = default_mappings();
    println!("{} ({})", threat_type.display(), threat_type.category().display());
    let articles: Vec<String> = mappings
        .offences_for(threat_type)
        .iter()
        .map(|a| format!("Art. {} ({})", a.number(), a.display()))
        .collect();
    println!("Offences: {}", articles.join(", "));
    println!("Evidence, in order of volatility:");
    let row = mappings.evidence_for(threat_type);
    for source in &row.sources {
        println!("  {}:", source.display());
        for item in row.items.iter().filter(|i| i.source == *source) {
            println!("    {}", item.name);
        }
    }
    EXIT_OK
}
