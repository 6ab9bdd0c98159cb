//! Argument handling and report formatting for the `stratset` binary.
//!
//! Exit codes: 0 success or true, 1 checked false, 2 input error,
//! 3 resource guard.

use std::fmt::Write as _;
use std::fs;

use clap::{Args, Parser, Subcommand, ValueEnum};

use stratset::axioms::{classify, classify_code, classify_untyped, TheoryId};
use stratset::bfext::{parse_graph, BfextGraph};
use stratset::fragment::{build_fragment, export, is_well_founded, rank_partition, verify_seg_lemma};
use stratset::godel::{decode_any, try_encode_formula, GodelCode, Language};
use stratset::hf::{self, DEFAULT_RANK_CAP, HARD_RANK_LIMIT};
use stratset::parser::{parse_formula, parse_typed_formula, parse_with, ParseVariable};
use stratset::sat::{build_tst_model, check_theory, parse_structure, Assignment, Evaluator, ModelError, Sorts};
use stratset::stratify::{collect_constraints, solve};
use stratset::syntax::{Formula, TypedVar, Var, Variable};
use stratset::typed::decorate;

pub const OK: i32 = 0;
pub const FALSE: i32 = 1;
pub const INPUT_ERROR: i32 = 2;
pub const RESOURCE_GUARD: i32 = 3;

/// Largest code, in bits, `godel encode` will build.
pub const MAX_CODE_BITS: u64 = 1 << 24;

#[derive(Parser, Debug)]
#[command(name = "stratset", about = "Stratification, sorted languages, Gödel codes and finite set models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum, Default)]
enum Format {
    #[default]
    Text,
    Tsv,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Input file (formula, graph or structure, depending on the command).
    #[arg(long)]
    file: Option<String>,
    /// Formula text given inline instead of `--file`.
    #[arg(long)]
    formula: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and pretty-print a formula.
    Parse {
        #[command(flatten)]
        common: Common,
        /// Read the sorted syntax (`x@k`).
        #[arg(long)]
        typed: bool,
    },
    /// Find a stratification or an unstratifiability witness.
    Stratify {
        #[command(flatten)]
        common: Common,
    },
    /// Decorate a stratified formula with types.
    Decorate {
        #[command(flatten)]
        common: Common,
    },
    /// Gödel coding.
    Godel {
        #[command(subcommand)]
        op: GodelOp,
    },
    /// Decide axiomhood of a formula or a code.
    AxiomCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        theory: String,
        #[arg(long)]
        code: Option<String>,
    },
    /// Hereditarily finite sets.
    Hf {
        #[command(subcommand)]
        op: HfOp,
    },
    /// Well-founded extensional graphs and fragments.
    Bf {
        #[command(subcommand)]
        op: BfOp,
    },
    /// Finite models.
    Model {
        #[command(subcommand)]
        op: ModelOp,
    },
}

#[derive(Args, Debug, Clone)]
struct Ranked {
    #[arg(long, default_value_t = 3)]
    max_rank: usize,
    /// Allow rank 4.
    #[arg(long)]
    large: bool,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

impl Ranked {
    fn cap(&self) -> usize {
        if self.large {
            HARD_RANK_LIMIT
        } else {
            DEFAULT_RANK_CAP
        }
    }
}

#[derive(Subcommand, Debug)]
enum GodelOp {
    Encode {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        typed: bool,
    },
    Decode {
        #[arg(long)]
        code: String,
        #[arg(long)]
        typed: bool,
    },
}

#[derive(Subcommand, Debug)]
enum HfOp {
    Enumerate {
        #[command(flatten)]
        ranked: Ranked,
    },
}

#[derive(Subcommand, Debug)]
enum BfOp {
    Check {
        #[command(flatten)]
        common: Common,
    },
    Seg {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        node: String,
    },
    Canon {
        #[command(flatten)]
        common: Common,
    },
    Fragment {
        #[command(flatten)]
        ranked: Ranked,
    },
    Verify {
        #[command(flatten)]
        ranked: Ranked,
    },
}

#[derive(Subcommand, Debug)]
enum ModelOp {
    Build {
        #[command(flatten)]
        ranked: Ranked,
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Evaluate `--formula` in the structure read from `--file`.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Values of free variables, as `var=element` (sorted: `x@0=a`).
        #[arg(long)]
        assign: Vec<String>,
    },
    CheckTheory {
        #[command(flatten)]
        ranked: Ranked,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Result of one invocation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn out(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stderr: impl Into<String>) -> Self {
        let mut stderr = stderr.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome { code, stdout: String::new(), stderr }
    }
}

fn input_error(e: impl std::fmt::Display) -> Outcome {
    Outcome::fail(INPUT_ERROR, format!("error: {e}"))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::out(OK, text),
                _ => Outcome::fail(INPUT_ERROR, text),
            };
        }
    };
    dispatch(cli.command).unwrap_or_else(|o| o)
}

type Res = Result<Outcome, Outcome>;

fn read_text(common: &Common) -> Result<String, Outcome> {
    match (&common.formula, &common.file) {
        (Some(f), None) => Ok(f.clone()),
        (None, Some(path)) => fs::read_to_string(path).map_err(|e| input_error(format!("{path}: {e}"))),
        (Some(_), Some(_)) => Err(input_error("give either --file or --formula, not both")),
        (None, None) => Err(input_error("missing --file")),
    }
}

// Formula files may carry `#` comment lines.
fn formula_text(common: &Common) -> Result<String, Outcome> {
    let text = read_text(common)?;
    Ok(text.lines().filter(|l| !l.trim_start().starts_with('#')).collect::<Vec<_>>().join("\n"))
}

fn untyped_input(common: &Common) -> Result<Formula<Var>, Outcome> {
    parse_formula(&formula_text(common)?).map_err(input_error)
}

fn typed_input(common: &Common) -> Result<Formula<TypedVar>, Outcome> {
    parse_typed_formula(&formula_text(common)?).map_err(input_error)
}

fn dispatch(cmd: Command) -> Res {
    match cmd {
        Command::Parse { common, typed } => {
            let text = if typed { typed_input(&common)?.to_string() } else { untyped_input(&common)?.to_string() };
            Ok(Outcome::out(OK, text + "\n"))
        }
        Command::Stratify { common } => stratify_cmd(&common),
        Command::Decorate { common } => {
            let f = untyped_input(&common)?.alpha_separate();
            match solve(&collect_constraints(&f)) {
                Ok(s) => {
                    let d = decorate(&f, &s).map_err(input_error)?;
                    Ok(Outcome::out(OK, format!("{d}\n")))
                }
                Err(w) => Ok(Outcome::out(FALSE, format!("unstratified\n{w}\n"))),
            }
        }
        Command::Godel { op } => godel_cmd(op),
        Command::AxiomCheck { common, theory, code } => axiom_cmd(&common, &theory, code.as_deref()),
        Command::Hf { op: HfOp::Enumerate { ranked } } => {
            let sets = hf::enumerate(ranked.max_rank, ranked.cap()).map_err(guard)?;
            let mut out = String::new();
            if ranked.format == Format::Tsv {
                out.push_str("code\trank\tset\n");
            }
            for (i, s) in sets.iter().enumerate() {
                match ranked.format {
                    Format::Text => writeln!(out, "{i}: {s}"),
                    Format::Tsv => writeln!(out, "{i}\t{}\t{s}", s.rank()),
                }
                .expect("write to string");
            }
            Ok(Outcome::out(OK, out))
        }
        Command::Bf { op } => bf_cmd(op),
        Command::Model { op } => model_cmd(op),
    }
}

fn guard(e: impl std::fmt::Display) -> Outcome {
    Outcome::fail(RESOURCE_GUARD, format!("resource guard: {e}"))
}

fn stratify_cmd(common: &Common) -> Res {
    let f = untyped_input(common)?;
    let sep = f.alpha_separate();
    match solve(&collect_constraints(&sep)) {
        Ok(s) => {
            let body = match common.format {
                Format::Text => {
                    let mut t = String::new();
                    if sep != f {
                        writeln!(t, "separated: {sep}").expect("write to string");
                    }
                    writeln!(t, "stratified: {s}").expect("write to string");
                    t
                }
                Format::Tsv => {
                    let mut t = String::from("term\ttype\n");
                    for (term, k) in s.assignment() {
                        writeln!(t, "{term}\t{k}").expect("write to string");
                    }
                    t
                }
            };
            Ok(Outcome::out(OK, body))
        }
        Err(w) => Ok(Outcome::out(FALSE, format!("unstratified: cycle with nonzero offset\n{w}\n"))),
    }
}

fn godel_cmd(op: GodelOp) -> Res {
    match op {
        GodelOp::Encode { common, typed } => {
            let code = if typed {
                try_encode_formula(&typed_input(&common)?, MAX_CODE_BITS)
            } else {
                try_encode_formula(&untyped_input(&common)?, MAX_CODE_BITS)
            }
            .map_err(guard)?;
            Ok(Outcome::out(OK, format!("{code}\n")))
        }
        GodelOp::Decode { code, typed } => {
            let code: GodelCode = code.trim().parse().map_err(input_error)?;
            let language = if typed { Language::Typed } else { Language::Untyped };
            let f = decode_any(&code, language).map_err(input_error)?;
            Ok(Outcome::out(OK, format!("{f}\n")))
        }
    }
}

fn axiom_cmd(common: &Common, theory: &str, code: Option<&str>) -> Res {
    let theory: TheoryId = theory.parse().map_err(input_error)?;
    let kind = match code {
        Some(c) => {
            if common.file.is_some() || common.formula.is_some() {
                return Err(input_error("give either --code or --file, not both"));
            }
            let code: GodelCode = c.trim().parse().map_err(input_error)?;
            classify_code(&code, theory).map_err(input_error)?
        }
        None if theory.is_typed() => classify(&typed_input(common)?, theory),
        None => classify_untyped(&untyped_input(common)?, theory),
    };
    let (exit, text) = match (kind, common.format) {
        (Some(k), Format::Text) => (OK, format!("axiom of {theory}: {k}\n")),
        (None, Format::Text) => (FALSE, format!("not an axiom of {theory}\n")),
        (Some(k), Format::Tsv) => (OK, format!("theory\taxiom\tkind\n{theory}\ttrue\t{k}\n")),
        (None, Format::Tsv) => (FALSE, format!("theory\taxiom\tkind\n{theory}\tfalse\t-\n")),
    };
    Ok(Outcome::out(exit, text))
}

fn graph_input(common: &Common) -> Result<BfextGraph<String>, Outcome> {
    parse_graph(&read_text(common)?).map_err(input_error)
}

fn bf_cmd(op: BfOp) -> Res {
    match op {
        BfOp::Check { common } => {
            let report = graph_input(&common)?.check();
            Ok(Outcome::out(if report.is_ok() { OK } else { FALSE }, format!("{report}\n")))
        }
        BfOp::Seg { common, node } => {
            let g = graph_input(&common)?;
            Ok(Outcome::out(OK, g.seg(&node).map_err(input_error)?.to_string()))
        }
        BfOp::Canon { common } => match graph_input(&common)?.canonicalize() {
            Ok(t) => Ok(Outcome::out(OK, format!("{t}\n"))),
            Err(e) => Ok(Outcome::out(FALSE, format!("not canonicalizable: {e}\n"))),
        },
        BfOp::Fragment { ranked } => {
            let f = build_fragment(ranked.max_rank, ranked.cap()).map_err(guard)?;
            let mut out = String::new();
            if ranked.format == Format::Tsv {
                out.push_str("type\tlayer\tpredecessors\n");
            }
            for (t, layer, preds) in export(&f) {
                match ranked.format {
                    Format::Text => writeln!(out, "{t}  layer {layer}  preds [{}]", preds.join(", ")),
                    Format::Tsv => writeln!(out, "{t}\t{layer}\t{}", preds.join(" ")),
                }
                .expect("write to string");
            }
            Ok(Outcome::out(OK, out))
        }
        BfOp::Verify { ranked } => {
            let f = build_fragment(ranked.max_rank, ranked.cap()).map_err(guard)?;
            let seg = verify_seg_lemma(&f);
            let sizes: Vec<String> = rank_partition(&f).values().map(|l| l.len().to_string()).collect();
            let (ext, wf) = (f.is_extensional(), is_well_founded(&f));
            let out = match ranked.format {
                Format::Text => format!(
                    "{seg}\nextensional: {}\nwell-founded: {} (cumulative layers {})\n",
                    yes(ext),
                    yes(wf),
                    sizes.join(" ")
                ),
                Format::Tsv => format!(
                    "check\tpassed\ttotal\nseg-lemma\t{}\t{}\nextensional\t{}\t1\nwell-founded\t{}\t1\n",
                    seg.passed(),
                    seg.total(),
                    u8::from(ext),
                    u8::from(wf)
                ),
            };
            Ok(Outcome::out(if seg.all_pass() && ext && wf { OK } else { FALSE }, out))
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn model_error(e: ModelError) -> Outcome {
    match e {
        ModelError::RankCap(e) => guard(e),
        e => input_error(e),
    }
}

fn model_cmd(op: ModelOp) -> Res {
    match op {
        ModelOp::Build { ranked, n } => {
            let model = build_tst_model(ranked.max_rank, n, ranked.cap()).map_err(model_error)?;
            Ok(Outcome::out(OK, model.structure.to_string()))
        }
        ModelOp::Eval { common, assign } => {
            let path = common.file.as_deref().ok_or_else(|| input_error("missing --file (structure)"))?;
            let text = fs::read_to_string(path).map_err(|e| input_error(format!("{path}: {e}")))?;
            let m = parse_structure(&text).map_err(input_error)?;
            let formula = common.formula.as_deref().ok_or_else(|| input_error("missing --formula"))?;
            let value = match m.sorts() {
                Sorts::Many(_) => eval_with(&m, &parse_typed_formula(formula).map_err(input_error)?, &assign, |v| {
                    v.sort().expect("sorted")
                })?,
                Sorts::Single => eval_with(&m, &parse_formula(formula).map_err(input_error)?, &assign, |_| 0)?,
            };
            Ok(Outcome::out(if value { OK } else { FALSE }, format!("{value}\n")))
        }
        ModelOp::CheckTheory { ranked, n, samples, seed } => {
            let model = build_tst_model(ranked.max_rank, n, ranked.cap()).map_err(model_error)?;
            let report = check_theory(&model, samples, seed).map_err(input_error)?;
            let out = match ranked.format {
                Format::Text => format!("{report}\n"),
                Format::Tsv => report.to_tsv(),
            };
            Ok(Outcome::out(if report.as_expected() { OK } else { FALSE }, out))
        }
    }
}

fn eval_with<V: Variable + ParseVariable>(
    m: &stratset::sat::FiniteStructure,
    f: &Formula<V>,
    assign: &[String],
    sort_of: impl Fn(&V) -> usize,
) -> Result<bool, Outcome> {
    let eval = Evaluator::new(m, f).map_err(input_error)?;
    let mut a = Assignment::new();
    for item in assign {
        let (var, id) = item.split_once('=').ok_or_else(|| input_error(format!("bad --assign `{item}`")))?;
        let var = parse_assigned_var::<V>(var.trim())?;
        let sort = sort_of(&var);
        let e = m
            .element(sort, id.trim())
            .ok_or_else(|| input_error(format!("{} is not an element of sort {sort}", id.trim())))?;
        a.insert(var, e);
    }
    eval.eval(&a).map_err(input_error)
}

// Reuses the formula parser on `v = v` to read one variable.
fn parse_assigned_var<V: ParseVariable>(text: &str) -> Result<V, Outcome> {
    let f = parse_with::<V>(&format!("{text} = {text}")).map_err(input_error)?;
    match f {
        Formula::Eq(stratset::syntax::Term::Var(v), _) => Ok(v),
        _ => Err(input_error(format!("bad variable `{text}`"))),
    }
}
