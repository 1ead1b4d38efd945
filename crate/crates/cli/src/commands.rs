//! The verbs of `htk`. Each command writes its report or output file to the given writer
//! and returns the process exit code: 0 on success, 1 on a failed check or construction,
//! 2 on unreadable input or bad usage.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use htk_core::constructions::{deloop, detheorize, theta_checked, ColourSystem};
use htk_core::graded::{
    canonical, convolve, enumerate_algebras, from_projection, pullback, push_left, push_right, terminal_graded, underlying,
    validate_graded, GradedTheoryPresentation,
};
use htk_core::ordcomb::Variance;
use htk_core::theory::{
    endo_planar, enumerate_morphisms, label, materialize, validate_morphism, validate_theory, FinCategory, Label,
    MorphismOptions, TheoryMorphism, TheoryPresentation, ValidationReport,
};
use htk_core::zoo::{
    assoc_operad, bord1_skeleton, category_theory, commutative_operad, cyclic_group, discrete_category,
    field_theories, init_operad, monoidal_theory, terminal_theory, walking_arrow, zc_build, CircleValue, Truth,
};
use thiserror::Error;

use crate::format::{self, Document, FormatError};
use crate::suites::{run_suite, SUITES};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Construction(String),
    #[error("input {path} fails validation: {first}")]
    Invalid { path: PathBuf, first: String },
    #[error("write failed: {0}")]
    Write(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Construction(_) | CliError::Invalid { .. } => 1,
            _ => 2,
        }
    }
}

fn construction(e: impl std::fmt::Display) -> CliError {
    CliError::Construction(e.to_string())
}

/// Finite higher theories: validate, build, transform and enumerate presentation files.
#[derive(Debug, Parser)]
#[command(name = "htk", version)]
pub struct Cli {
    /// Arity bound for constructions and enumerations. Bounds limit the size of every
    /// single index set in an arity, not the total size of its tree.
    #[arg(long, global = true, env = "HTK_BOUND", default_value_t = 2)]
    pub bound: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a file against its laws; exit 0 when it passes, 1 on violations, 2 when unreadable.
    Validate {
        path: PathBuf,
        /// Source theory, when validating a morphism.
        #[arg(long)]
        source: Option<PathBuf>,
        /// Target theory, when validating a morphism.
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Write a named example in canonical form.
    Build(BuildArgs),
    /// Apply a construction to input files.
    Apply(ApplyArgs),
    /// Count (and with --print, list) functors, algebras or field theories.
    Enum(EnumArgs),
    /// Run an acceptance suite, or `all`.
    Check { suite: String },
    /// Rewrite a file in canonical form.
    Fmt { path: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Zoo {
    /// Terminal theory of --dim and --depth.
    Terminal,
    /// Initial operad on one colour.
    Init,
    /// Discrete category on --k objects.
    Disc,
    /// Associative operad.
    E1,
    /// Commutative operad; --non-unital drops the nullary operation.
    Com,
    /// Cyclic group Z/--n as a discrete monoidal 0-theory; --enriched keeps it category-enriched.
    Zn,
    /// The category with two objects and one arrow, as a 1-theory.
    WalkingArrow,
    /// The truth-value 0-theory.
    Truth,
    /// The walking arrow as a category file.
    CatArrow,
    /// The one-object category of Z/--n as a category file.
    CatCyclic,
    /// The discrete category on --k objects as a category file.
    CatDiscrete,
    /// The theory file --over graded over --target along the morphism --along, or its
    /// terminal grading when --along is absent.
    Graded,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    pub zoo: Zoo,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    #[arg(long)]
    pub planar: bool,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long)]
    pub non_unital: bool,
    #[arg(long)]
    pub enriched: bool,
    /// Theory file to grade.
    #[arg(long)]
    pub over: Option<PathBuf>,
    /// Projection morphism file for graded.
    #[arg(long)]
    pub along: Option<PathBuf>,
    /// Target theory of --along.
    #[arg(long)]
    pub target: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    Theta,
    Deloop,
    Pullback,
    #[value(name = "pushL")]
    PushLeft,
    #[value(name = "pushR")]
    PushRight,
    Convolve,
    Detheorize,
    Endo,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    pub verb: Verb,
    pub inputs: Vec<PathBuf>,
    /// Morphism file `P` for pullback, pushL and pushR.
    #[arg(long)]
    pub along: Option<PathBuf>,
    /// Source theory of `P` (pullback).
    #[arg(long)]
    pub source: Option<PathBuf>,
    /// Target theory of `P` (pushL, pushR).
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Colour of the endomorphism theory.
    #[arg(long)]
    pub colour: Option<String>,
    /// Colour system `base:c1,c2;base2:d1` for detheorize.
    #[arg(long, default_value = "")]
    pub colours: String,
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    /// Write the total theory of a graded result instead of the graded file.
    #[arg(long)]
    pub total: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Enumeration {
    Functors,
    Algebras,
    FieldTheories,
}

#[derive(Debug, Args)]
pub struct EnumArgs {
    pub what: Enumeration,
    pub inputs: Vec<PathBuf>,
    /// Print every item, not only the count.
    #[arg(long)]
    pub print: bool,
    /// Print only item K (counting from 0) as a canonical file.
    #[arg(long, value_name = "K")]
    pub nth: Option<usize>,
    /// Total number of colours for algebras.
    #[arg(long, default_value_t = 1)]
    pub budget: usize,
    /// Points of the bordism skeleton for field theories.
    #[arg(long, default_value_t = 3)]
    pub points: usize,
    /// Circles of the bordism skeleton for field theories.
    #[arg(long, default_value_t = 1)]
    pub circles: usize,
    /// Attach endomorphisms modulo conjugation to circles instead of a point.
    #[arg(long)]
    pub hochschild: bool,
}

pub fn read_document(path: &Path) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    format::parse(&text).map_err(|source| CliError::Format { path: path.into(), source })
}

fn read_as<T>(path: &Path, f: impl FnOnce(Document) -> Result<T, FormatError>) -> Result<T, CliError> {
    f(read_document(path)?).map_err(|source| CliError::Format { path: path.into(), source })
}

fn require(report: ValidationReport, path: &Path) -> Result<(), CliError> {
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(CliError::Invalid { path: path.into(), first: v.to_string() }),
    }
}

fn theory_input(path: &Path) -> Result<TheoryPresentation, CliError> {
    let t = read_as(path, Document::into_theory)?;
    require(validate_theory(&t), path)?;
    Ok(t)
}

fn graded_input(path: &Path) -> Result<GradedTheoryPresentation, CliError> {
    let x = read_as(path, Document::into_graded)?;
    require(validate_graded(&x), path)?;
    Ok(x)
}

fn morphism_input(path: &Path, source: &TheoryPresentation, target: &TheoryPresentation) -> Result<TheoryMorphism, CliError> {
    let f = read_as(path, Document::into_morphism)?;
    require(validate_morphism(source, target, &f, source.header.bound), path)?;
    Ok(f)
}

fn one<'a>(inputs: &'a [PathBuf], n: usize, verb: &str) -> Result<&'a [PathBuf], CliError> {
    if inputs.len() == n {
        Ok(inputs)
    } else {
        Err(CliError::Usage(format!("{verb} takes {n} input file(s), got {}", inputs.len())))
    }
}

fn flag<'a>(v: &'a Option<PathBuf>, name: &str) -> Result<&'a Path, CliError> {
    v.as_deref().ok_or_else(|| CliError::Usage(format!("missing --{name}")))
}

/// Parses `base:c1,c2;base2:d1`.
pub fn parse_colour_system(s: &str) -> Result<ColourSystem, CliError> {
    let mut sys = ColourSystem::new();
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (base, cs) = part.split_once(':').ok_or_else(|| CliError::Usage(format!("bad colour entry {part:?}")))?;
        let cs: Vec<Label> = cs.split(',').map(str::trim).filter(|c| !c.is_empty()).map(label).collect();
        sys.insert(label(base.trim()), cs);
    }
    Ok(sys)
}

fn cyclic_category(n: usize) -> FinCategory {
    let x = label("x");
    let arrow = |i: usize| label(&format!("g{i}"));
    let mut c = FinCategory { objects: vec![x.clone()], ..Default::default() };
    c.identities.insert(x.clone(), arrow(0));
    for i in 0..n {
        c.arrows.insert(arrow(i), (x.clone(), x.clone()));
        for j in 0..n {
            c.composition.insert((arrow(i), arrow(j)), arrow((i + j) % n));
        }
    }
    c
}

fn discrete_fin_category(k: usize) -> FinCategory {
    let mut c = FinCategory::default();
    for i in 0..k {
        let (x, id) = (label(&format!("x{i}")), label(&format!("1x{i}")));
        c.objects.push(x.clone());
        c.arrows.insert(id.clone(), (x.clone(), x.clone()));
        c.identities.insert(x, id.clone());
        c.composition.insert((id.clone(), id.clone()), id);
    }
    c
}

pub fn build(args: &BuildArgs, bound: usize) -> Result<Document, CliError> {
    let variance = if args.planar { Variance::Planar } else { Variance::Symmetric };
    Ok(match args.zoo {
        Zoo::Terminal => Document::Theory(terminal_theory(args.dim, args.depth, variance, bound)),
        Zoo::Init => Document::Theory(init_operad(bound)),
        Zoo::Disc => Document::Theory(discrete_category(args.k, bound)),
        Zoo::E1 => Document::Theory(assoc_operad(bound)),
        Zoo::Com => Document::Theory(commutative_operad(!args.non_unital, bound)),
        Zoo::Zn => Document::Theory(monoidal_theory(&cyclic_group(args.n), args.enriched, bound)),
        Zoo::WalkingArrow => Document::Theory(category_theory(&walking_arrow(), bound)),
        Zoo::Truth => Document::Theory(materialize(&Truth { bound }, bound).map_err(construction)?),
        Zoo::CatArrow => Document::Category(walking_arrow()),
        Zoo::CatCyclic => Document::Category(cyclic_category(args.n)),
        Zoo::CatDiscrete => Document::Category(discrete_fin_category(args.k)),
        Zoo::Graded => {
            let v = theory_input(flag(&args.over, "over")?)?;
            let x = match &args.along {
                None => terminal_graded(&v),
                Some(along) => {
                    let u = theory_input(flag(&args.target, "target")?)?;
                    let p = morphism_input(along, &v, &u)?;
                    from_projection(&v, &p, &u)
                }
            };
            Document::Graded(canonical(&x.map_err(construction)?).map_err(construction)?)
        }
    })
}

pub fn apply(args: &ApplyArgs, bound: usize) -> Result<Document, CliError> {
    match apply_verb(args, bound)? {
        Document::Graded(x) if args.total => Ok(Document::Theory(underlying(&x).map_err(construction)?)),
        d => Ok(d),
    }
}

fn apply_verb(args: &ApplyArgs, bound: usize) -> Result<Document, CliError> {
    let graded = |x: Result<GradedTheoryPresentation, _>| -> Result<Document, CliError> {
        Ok(Document::Graded(canonical(&x.map_err(construction)?).map_err(construction)?))
    };
    match args.verb {
        Verb::Theta => {
            let t = theory_input(&one(&args.inputs, 1, "theta")?[0])?;
            Ok(Document::Theory(theta_checked(&t, bound).map_err(construction)?))
        }
        Verb::Deloop => {
            let t = theory_input(&one(&args.inputs, 1, "deloop")?[0])?;
            Ok(Document::Theory(deloop(&t, bound).map_err(construction)?))
        }
        Verb::Endo => {
            let t = theory_input(&one(&args.inputs, 1, "endo")?[0])?;
            let x = args.colour.as_deref().ok_or_else(|| CliError::Usage("missing --colour".into()))?;
            Ok(Document::Theory(endo_planar(&t, x).map_err(construction)?))
        }
        Verb::Detheorize => {
            let t = theory_input(&one(&args.inputs, 1, "detheorize")?[0])?;
            let sys = parse_colour_system(&args.colours)?;
            Ok(Document::Theory(detheorize(&t, args.depth, &sys).map_err(construction)?))
        }
        Verb::Pullback => {
            let z = graded_input(&one(&args.inputs, 1, "pullback")?[0])?;
            let v = theory_input(flag(&args.source, "source")?)?;
            let p = morphism_input(flag(&args.along, "along")?, &v, &z.base)?;
            graded(pullback(&p, &v, &z))
        }
        Verb::PushLeft => {
            let y = graded_input(&one(&args.inputs, 1, "pushL")?[0])?;
            let u = theory_input(flag(&args.target, "target")?)?;
            let p = morphism_input(flag(&args.along, "along")?, &y.base, &u)?;
            graded(push_left(&p, &u, &y))
        }
        Verb::PushRight => {
            let x = graded_input(&one(&args.inputs, 1, "pushR")?[0])?;
            let u = theory_input(flag(&args.target, "target")?)?;
            let p = morphism_input(flag(&args.along, "along")?, &x.base, &u)?;
            graded(push_right(&p, &u, &x, bound))
        }
        Verb::Convolve => {
            let paths = one(&args.inputs, 2, "convolve")?;
            let (x, y) = (graded_input(&paths[0])?, graded_input(&paths[1])?);
            graded(convolve(&x, &y, bound))
        }
    }
}

pub fn validate(path: &Path, source: Option<&Path>, target: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = match read_document(path)? {
        Document::Theory(t) => validate_theory(&t),
        Document::Graded(x) => validate_graded(&x),
        Document::Morphism(f) => {
            let missing = |name: &str| CliError::Usage(format!("validating a morphism needs --{name}"));
            let s = read_as(source.ok_or_else(|| missing("source"))?, Document::into_theory)?;
            let t = read_as(target.ok_or_else(|| missing("target"))?, Document::into_theory)?;
            validate_morphism(&s, &t, &f, s.header.bound)
        }
        Document::Category(c) => {
            let mut r = ValidationReport::default();
            if let Err(e) = c.check() {
                r.violation("category", "category-laws", String::new(), String::new(), e);
            }
            r
        }
    };
    for line in report.lines() {
        writeln!(out, "{line}")?;
    }
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    writeln!(out, "{verdict}: {} instances, {} violations", report.instances, report.violations.len())?;
    Ok(if report.passed() { 0 } else { 1 })
}

pub fn enumerate(args: &EnumArgs, bound: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    match args.what {
        Enumeration::Functors => {
            let paths = one(&args.inputs, 2, "functors")?;
            let (s, t) = (theory_input(&paths[0])?, theory_input(&paths[1])?);
            let found = enumerate_morphisms(&s, &t, MorphismOptions::new(bound)).map_err(construction)?;
            if let Some(k) = args.nth {
                return nth(&found, k, out, format::write_morphism);
            }
            writeln!(out, "functors: {}", found.len())?;
            if args.print {
                for f in &found {
                    write!(out, "{}", format::write_morphism(f))?;
                }
            }
        }
        Enumeration::Algebras => {
            let paths = one(&args.inputs, 2, "algebras")?;
            let (u, v) = (theory_input(&paths[0])?, theory_input(&paths[1])?);
            let found = enumerate_algebras(&u, &v, args.budget, MorphismOptions::new(bound)).map_err(construction)?;
            writeln!(out, "algebras: {}", found.len())?;
            if args.print {
                for a in &found {
                    let sys: Vec<String> = a.colours.iter().map(|(c, xs)| format!("{c}:{}", xs.join(","))).collect();
                    writeln!(out, "colours {}", sys.join(";"))?;
                    write!(out, "{}", format::write_morphism(&a.action))?;
                }
            }
        }
        Enumeration::FieldTheories => {
            let path = &one(&args.inputs, 1, "field-theories")?[0];
            let c = read_as(path, Document::into_category)?;
            let bord = bord1_skeleton(args.points, args.circles);
            let circle = if args.hochschild { CircleValue::Hochschild } else { CircleValue::Point };
            let z = zc_build(&c, &bord, circle).map_err(construction)?;
            let found = field_theories(&bord, &z).map_err(construction)?;
            writeln!(out, "field-theories: {}", found.len())?;
            if args.print {
                for f in &found {
                    let colours: Vec<String> = f.colours.iter().map(|(g, x)| format!("{g}={x}")).collect();
                    let maps: Vec<String> = f.multimaps.iter().map(|(m, l)| format!("{}={l}", bord.show(m))).collect();
                    writeln!(out, "{} | {}", colours.join(" "), maps.join(" "))?;
                }
            }
        }
    }
    Ok(0)
}

pub fn check(suite: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let mut ok = true;
    for name in names {
        let report = run_suite(name).ok_or_else(|| {
            CliError::Usage(format!("unknown suite {name:?}; known: all, {}", SUITES.join(", ")))
        })?;
        for c in &report.claims {
            writeln!(out, "  {c}")?;
        }
        writeln!(out, "{}", report.summary())?;
        ok &= report.passed();
    }
    Ok(if ok { 0 } else { 1 })
}

/// Runs a parsed command line, writing to `out` and errors to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Validate { path, source, target } => validate(path, source.as_deref(), target.as_deref(), out),
        Command::Build(args) => build(args, cli.bound).and_then(|d| emit(&d, out)),
        Command::Apply(args) => apply(args, cli.bound).and_then(|d| emit(&d, out)),
        Command::Enum(args) => enumerate(args, cli.bound, out),
        Command::Check { suite } => check(suite, out),
        Command::Fmt { path } => read_document(path).and_then(|d| emit(&d, out)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn nth<T>(items: &[T], k: usize, out: &mut dyn Write, show: impl Fn(&T) -> String) -> Result<i32, CliError> {
    let item = items.get(k).ok_or_else(|| CliError::Usage(format!("item {k} requested, {} found", items.len())))?;
    out.write_all(show(item).as_bytes())?;
    Ok(0)
}

fn emit(d: &Document, out: &mut dyn Write) -> Result<i32, CliError> {
    out.write_all(d.to_text().as_bytes())?;
    Ok(0)
}

