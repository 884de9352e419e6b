//! Command-line front end: validation reports, condition renderings, model
//! checking, bisimulation queries, first-order translation and preservation
//! checks, with a line-oriented porcelain mode for scripting.

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bisim;
use crate::connective::{is_uniform, ConnectiveSet, Uniformity};
use crate::error::FileError;
use crate::fol;
use crate::interpret;
use crate::logicfile::parse_logic;
use crate::model::{parse_model, CModel};
use crate::presets::{preset, Preset};

#[derive(Parser)]
#[command(
    name = "molog",
    version,
    about = "Workbench for declaratively specified non-classical logics"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a logic declaration: skeletons, sharing, uniformity, Boolean completeness.
    Validate(CommonArgs),
    /// Print the bisimulation conditions induced by the connectives.
    Conditions(CommonArgs),
    /// Interpret a formula in a model.
    Mc(McArgs),
    /// Compute the maximal bisimulation between two models.
    Bisim(BisimArgs),
    /// Translate a formula to first-order logic and export it.
    Translate(TranslateArgs),
    /// Check bounded formula preservation between two pointed models.
    Preserve(PreserveArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Logic declaration file, or a preset name
    /// (modal, lambek, intuitionistic, modal-intuitionistic).
    #[arg(long)]
    logic: String,
    /// Line-oriented machine-readable output.
    #[arg(long, global = true)]
    porcelain: bool,
    /// Seed reserved for randomized batch modes; current commands are
    /// deterministic and ignore it.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Args)]
struct McArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Model file.
    #[arg(long)]
    model: PathBuf,
    /// Formula text, e.g. "(p & dia(p))".
    #[arg(long)]
    formula: String,
}

#[derive(Args)]
struct BisimArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    model2: PathBuf,
    /// Point in the first model, e.g. "(w)" or "w"; defaults to the model
    /// file's point.
    #[arg(long)]
    point: Option<String>,
    /// Point in the second model.
    #[arg(long)]
    point2: Option<String>,
}

#[derive(Args)]
struct TranslateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    formula: String,
    #[arg(long, value_enum)]
    format: ExportFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Tptp,
    Smtlib,
}

#[derive(Args)]
struct PreserveArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    model2: PathBuf,
    #[arg(long)]
    point: Option<String>,
    #[arg(long)]
    point2: Option<String>,
    /// Maximal connective-nesting depth of the enumerated formulas.
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Comma-separated seed letters; defaults to all letters of the logic.
    #[arg(long)]
    letters: Option<String>,
}

/// A domain failure: printed to stderr, exit code 1 (usage errors exit 2).
#[derive(Debug)]
pub struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

struct Logic {
    set: ConnectiveSet,
    preset: Option<Preset>,
    label: String,
}

fn load_logic(arg: &str) -> Result<Logic, CliError> {
    let name = arg.strip_prefix("preset:").unwrap_or(arg);
    if let Some(p) = preset(name) {
        return Ok(Logic {
            set: p.set.clone(),
            label: p.name.to_string(),
            preset: Some(p),
        });
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| CliError(format!("cannot read logic file `{arg}`: {e}")))?;
    let set = parse_logic(&text).map_err(|e: FileError| CliError(format!("{arg}: {e}")))?;
    Ok(Logic {
        set,
        preset: None,
        label: arg.to_string(),
    })
}

fn load_model(logic: &Logic, path: &PathBuf) -> Result<CModel, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError(format!("cannot read model file `{}`: {e}", path.display())))?;
    let raw = parse_model(&text, &logic.set)
        .map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    match &logic.preset {
        Some(p) => Ok(p.prepare_model(&raw)?),
        None => Ok(raw),
    }
}

fn parse_point(model: &CModel, text: &str) -> Result<Vec<u32>, CliError> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(text.trim());
    inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|w| model.world(w).map_err(CliError::from))
        .collect()
}

fn resolve_point(
    model: &CModel,
    flag: &Option<String>,
    which: &str,
) -> Result<Vec<u32>, CliError> {
    match flag {
        Some(text) => parse_point(model, text),
        None => model.point.clone().ok_or_else(|| {
            CliError(format!(
                "no point for {which}: pass --{which} or add a `point` line to the model file"
            ))
        }),
    }
}

pub fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate(args) => cmd_validate(&args),
        Command::Conditions(args) => cmd_conditions(&args),
        Command::Mc(args) => cmd_mc(&args),
        Command::Bisim(args) => cmd_bisim(&args),
        Command::Translate(args) => cmd_translate(&args),
        Command::Preserve(args) => cmd_preserve(&args),
    }
}

fn cmd_validate(args: &CommonArgs) -> Result<(), CliError> {
    let logic = load_logic(&args.logic)?;
    let set = &logic.set;
    let validation = set.validate();
    let (complete, missing) = set.is_complete_for_conj_disj();
    let uniformities: Vec<(String, Result<Uniformity, String>)> = set
        .moleculars()
        .map(|m| {
            (
                m.name.clone(),
                is_uniform(set, m).map_err(|e| e.to_string()),
            )
        })
        .collect();

    if args.porcelain {
        println!("valid\t{}", validation.is_ok());
        println!("complete\t{complete}");
        if !missing.is_empty() {
            let rendered: Vec<String> = missing.iter().map(u32::to_string).collect();
            println!("missing-types\t{}", rendered.join(","));
        }
        for (name, u) in &uniformities {
            match u {
                Ok(u) => println!("uniform\t{name}\t{}", u.is_uniform()),
                Err(e) => println!("uniform-error\t{name}\t{e}"),
            }
        }
        if let Err(errs) = &validation {
            for e in errs {
                println!("error\t{e}");
            }
        }
    } else {
        println!("logic: {}", logic.label);
        println!(
            "declarations: {} letters, {} atomic, {} hidden, {} molecular, booleans at types {:?}",
            set.letters().count(),
            set.atomics().count(),
            set.hidden().count(),
            set.moleculars().count(),
            set.booleans().iter().collect::<Vec<_>>()
        );
        match &validation {
            Ok(()) => println!("skeletons and sharing: ok"),
            Err(errs) => {
                for e in errs {
                    println!("invalid: {e}");
                }
            }
        }
        if complete {
            println!("complete for conjunction/disjunction: yes");
        } else {
            println!(
                "complete for conjunction/disjunction: no (missing types {missing:?})"
            );
        }
        if uniformities.is_empty() {
            println!("uniformity: no molecular connectives");
        } else {
            println!("uniformity:");
            for (name, u) in &uniformities {
                match u {
                    Ok(Uniformity::Uniform) => println!("  {name}: uniform"),
                    Ok(Uniformity::NotUniform { clause, reason }) => {
                        println!("  {name}: not uniform (clause {clause}: {reason})")
                    }
                    Err(e) => println!("  {name}: error: {e}"),
                }
            }
        }
    }
    match validation {
        Ok(()) => Ok(()),
        Err(errs) => Err(CliError(format!(
            "{} validation error(s)",
            errs.len()
        ))),
    }
}

fn cmd_conditions(args: &CommonArgs) -> Result<(), CliError> {
    let logic = load_logic(&args.logic)?;
    let text = match &logic.preset {
        Some(p) => p.conditions_text(),
        None => bisim::generate_clauses(&logic.set)?.render(),
    };
    print!("{text}");
    Ok(())
}

fn cmd_mc(args: &McArgs) -> Result<(), CliError> {
    let logic = load_logic(&args.common.logic)?;
    let model = load_model(&logic, &args.model)?;
    let formula = crate::formula::parse(&args.formula, &logic.set)?;
    let result = interpret::interpret(&logic.set, &model, &formula)?;
    let rendered = model.format_tuples(&result);
    let sat = model
        .point
        .as_ref()
        .map(|p| result.contains(p));
    if args.common.porcelain {
        println!("interp\t{rendered}");
        if let Some(s) = sat {
            println!("sat\t{s}");
        }
    } else {
        println!("[[{formula}]] = {rendered}");
        if let (Some(p), Some(s)) = (&model.point, sat) {
            println!("({}, {}) |= {formula}: {s}", model_label(&model), model.format_tuple(p));
        }
    }
    Ok(())
}

fn model_label(model: &CModel) -> String {
    model.name.clone().unwrap_or_else(|| "model".to_string())
}

fn cmd_bisim(args: &BisimArgs) -> Result<(), CliError> {
    let logic = load_logic(&args.common.logic)?;
    let m1 = load_model(&logic, &args.model)?;
    let m2 = load_model(&logic, &args.model2)?;
    let fam = bisim::maximal_bisimulation(&logic.set, &m1, &m2)?;
    let fwd = fam.z.side_pairs(bisim::Side::Forward).count();
    let bwd = fam.z.side_pairs(bisim::Side::Backward).count();

    let points = match (&args.point, &args.point2, &m1.point, &m2.point) {
        (Some(a), Some(b), _, _) => Some((parse_point(&m1, a)?, parse_point(&m2, b)?)),
        (None, None, Some(a), Some(b)) => Some((a.clone(), b.clone())),
        (None, None, _, _) => None,
        _ => {
            return Err(CliError(
                "pass both --point and --point2, or neither".to_string(),
            ))
        }
    };
    let verdict = points
        .as_ref()
        .map(|(a, b)| fam.z.contains(bisim::Side::Forward, a, b));

    if args.common.porcelain {
        println!("z-forward\t{fwd}");
        println!("z-backward\t{bwd}");
        for ((mol, addr), rel) in &fam.per_vertex {
            println!("vertex\t{mol}/{addr}\t{}", rel.len());
        }
        if let Some(v) = verdict {
            println!("bisimilar\t{v}");
        }
    } else {
        println!("maximal bisimulation: {fwd} forward pairs, {bwd} backward pairs");
        for ((mol, addr), rel) in &fam.per_vertex {
            println!("  Z{{{mol}/{addr}}}: {} pairs", rel.len());
        }
        if let (Some((a, b)), Some(v)) = (&points, verdict) {
            println!(
                "({}, {}) ~ ({}, {}): bisimilar: {v}",
                model_label(&m1),
                m1.format_tuple(a),
                model_label(&m2),
                m2.format_tuple(b)
            );
        }
    }
    Ok(())
}

fn cmd_translate(args: &TranslateArgs) -> Result<(), CliError> {
    let logic = load_logic(&args.common.logic)?;
    let formula = crate::formula::parse(&args.formula, &logic.set)?;
    let ty = formula.check(&logic.set)?;
    let target: Vec<String> = if ty == 1 {
        vec!["x".to_string()]
    } else {
        (1..=ty).map(|i| format!("y{i}")).collect()
    };
    let translated = fol::st_translate(&logic.set, &formula, &target)?;
    let text = match args.format {
        ExportFormat::Tptp => fol::to_tptp(&translated, &logic.label),
        ExportFormat::Smtlib => fol::to_smtlib(&translated, &logic.label),
    };
    print!("{text}");
    Ok(())
}

fn cmd_preserve(args: &PreserveArgs) -> Result<(), CliError> {
    let logic = load_logic(&args.common.logic)?;
    let m1 = load_model(&logic, &args.model)?;
    let m2 = load_model(&logic, &args.model2)?;
    let p1 = resolve_point(&m1, &args.point, "point")?;
    let p2 = resolve_point(&m2, &args.point2, "point2")?;
    let all_letters: Vec<String> = logic.set.letters().map(|(n, _)| n.to_string()).collect();
    let letters: Vec<String> = match &args.letters {
        Some(s) => s.split(',').map(|x| x.trim().to_string()).collect(),
        None => all_letters,
    };
    let letter_refs: Vec<&str> = letters.iter().map(String::as_str).collect();
    let out = bisim::preserves(&logic.set, &m1, &p1, &m2, &p2, args.depth, &letter_refs)?;
    if args.common.porcelain {
        println!("preserves\t{}", out.holds);
        if let Some(c) = &out.counterexample {
            println!("counterexample\t{c}");
        }
    } else {
        println!(
            "preserves up to depth {}: {}",
            args.depth, out.holds
        );
        if let Some(c) = &out.counterexample {
            println!("counterexample: {c}");
        }
    }
    Ok(())
}
