use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use redukto_core::catalog::{catalog_list, catalog_lookup, CatalogItem, Oracle};
use redukto_core::classifiers::{
    check_cycle_soundness, check_determinism, check_monotone, check_preservation, check_shrinking, CheckReport,
    CheckVerdict, PreservationMode,
};
use redukto_core::constructions::{build_hrrwwc, to_shrinking, ConstructionError, SynthesisOptions};
use redukto_core::engine::{
    decide_basic_membership, decide_input_membership, run_deterministic, Decision, Limits, Outcome, Trace, Verdict,
};
use redukto_core::error::EngineError;
use redukto_core::format::{is_grammar_text, parse_automaton, parse_grammar, render_automaton, render_grammar};
use redukto_core::grammar::GnfGrammar;
use redukto_core::languages::{
    compare_languages, decide_hproper_membership, enumerate_language, Comparison, LanguageKind, LanguageQuery,
    LanguageSource,
};
use redukto_core::model::{AutomatonSpec, RewriteForm};
use redukto_core::symbol::{spaced, tokenize, Symbol};
use redukto_core::validate::{classify_automaton, classify_rewrite, validate_automaton, RewriteClass};

const ACCEPT: u8 = 0;
const REJECT: u8 = 1;
const RESOURCE: u8 = 2;
const INVALID: u8 = 3;

/// h-lexicalized restarting automata: run, decide, check and transform.
#[derive(Parser)]
#[command(name = "redukto", version)]
struct Cli {
    /// Resource limits, e.g. `configs=1000000,steps=10000,cycles=100000`
    /// (default: REDUKTO_LIMITS or built-in values).
    #[arg(long, global = true)]
    limits: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an automaton on an input word.
    Run {
        /// Automaton file or catalog name.
        automaton: String,
        /// Word; symbols may be separated by spaces, `-` is the empty word.
        word: String,
        /// Print one line per step.
        #[arg(long)]
        trace: bool,
    },
    /// Decide membership in the input, basic or h-proper language.
    Decide {
        automaton: String,
        word: String,
        #[arg(long, value_enum, default_value = "input")]
        kind: DecideKind,
    },
    /// Bounded check of a property over all words up to a length.
    Check {
        automaton: String,
        /// det, mono, forms, cycle, cpp, epp, cycle-correctness, cycle-error, shrink.
        #[arg(long)]
        what: String,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Override the declared rewrite degree (for `cycle`).
        #[arg(long)]
        mr: Option<usize>,
        /// Required rewrite form for `forms` (CL, DL or SL); defaults to the declared form.
        #[arg(long)]
        form: Option<String>,
    },
    /// Print the validation report and inferred class.
    Validate { automaton: String },
    /// Constructions.
    Transform {
        #[command(subcommand)]
        which: Transform,
    },
    /// List the members of a language, one per line, length-lexicographically.
    Enum {
        automaton: String,
        #[arg(long, value_enum, default_value = "input")]
        kind: EnumKind,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Compare two languages up to a length. Operands: a file or catalog name,
    /// optionally suffixed `@input|basic|proper|hproper`, or `oracle:NAME`.
    Cmp {
        first: String,
        second: String,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// The built-in catalog.
    Catalog {
        #[command(subcommand)]
        action: Option<CatalogAction>,
    },
}

#[derive(Subcommand)]
enum Transform {
    /// GNF grammar to an h-RRWWC automaton.
    Gnf2hrrwwc {
        grammar: String,
        #[arg(long, default_value_t = 3)]
        window: usize,
        /// Largest window tried (defaults to --window).
        #[arg(long)]
        max_window: Option<usize>,
        #[arg(long, default_value_t = 8)]
        train: usize,
        #[arg(long, default_value_t = 12)]
        validate: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// h-automaton to a shrinking automaton with weights.
    Shrink {
        automaton: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Name, tags and description of every entry.
    List,
    /// Print (or write) the file form of an entry.
    Export {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DecideKind {
    Input,
    Basic,
    Hproper,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumKind {
    Input,
    Basic,
    Proper,
    Hproper,
}

impl From<EnumKind> for LanguageKind {
    fn from(k: EnumKind) -> Self {
        match k {
            EnumKind::Input => LanguageKind::Input,
            EnumKind::Basic => LanguageKind::Basic,
            EnumKind::Proper => LanguageKind::Proper,
            EnumKind::Hproper => LanguageKind::HProper,
        }
    }
}

/// A failure with its exit code.
struct Fail(u8, String);

fn invalid(e: impl Display) -> Fail {
    Fail(INVALID, e.to_string())
}

impl From<EngineError> for Fail {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::ResourceExceeded(_) => Fail(RESOURCE, e.to_string()),
            _ => Fail(INVALID, e.to_string()),
        }
    }
}

type CmdResult = Result<u8, Fail>;

enum Loaded {
    Automaton(AutomatonSpec),
    Grammar(GnfGrammar),
}

fn load(arg: &str) -> Result<Loaded, Fail> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{arg}: {e}")))?;
        let parsed = if is_grammar_text(&text) {
            parse_grammar(&text).map(Loaded::Grammar)
        } else {
            parse_automaton(&text).map(Loaded::Automaton)
        };
        return parsed.map_err(|e| invalid(format!("{arg}:{}: {}", e.line, e.message)));
    }
    let entry = catalog_lookup(arg).map_err(|e| invalid(format!("{arg}: no such file or {e}")))?;
    Ok(match entry.item {
        CatalogItem::Automaton(a) => Loaded::Automaton(a),
        CatalogItem::Grammar(g) => Loaded::Grammar(g),
    })
}

fn load_automaton(arg: &str) -> Result<AutomatonSpec, Fail> {
    let spec = match load(arg)? {
        Loaded::Automaton(a) => a,
        Loaded::Grammar(_) => return Err(invalid(format!("{arg} is a grammar, not an automaton"))),
    };
    let report = validate_automaton(&spec);
    if report.has_structural() {
        return Err(invalid(format!("{arg} is not a valid automaton:\n{report}")));
    }
    Ok(spec)
}

fn load_grammar(arg: &str) -> Result<GnfGrammar, Fail> {
    match load(arg)? {
        Loaded::Grammar(g) => Ok(g),
        Loaded::Automaton(_) => Err(invalid(format!("{arg} is an automaton, not a grammar"))),
    }
}

fn word_text(w: &[Symbol]) -> String {
    if w.is_empty() {
        "-".into()
    } else {
        spaced(w)
    }
}

/// Reads an input word, naming the first working symbol that is not an input symbol.
fn input_word(spec: &AutomatonSpec, text: &str) -> Result<Vec<Symbol>, Fail> {
    match tokenize(text, spec.input_alphabet()) {
        Ok(w) => Ok(w),
        Err(e) => match tokenize(text, spec.work_alphabet()) {
            Ok(w) => {
                let s = w.iter().find(|s| !spec.is_input_symbol(s)).map(|s| s.to_string()).unwrap_or_default();
                Err(EngineError::NotInput(s).into())
            }
            Err(_) => Err(invalid(e)),
        },
    }
}

fn print_trace(spec: &AutomatonSpec, trace: &Trace) {
    let k = spec.window();
    for s in &trace.steps {
        let c = &s.config;
        println!(
            "{} {} [{}] {} | {}",
            c.state,
            c.pos,
            spaced(c.window(k)),
            s.instruction,
            spaced(&c.tape)
        );
    }
}

fn print_cycles(trace: &Trace) {
    let mut chain: Vec<String> = Vec::new();
    for (i, (u, v)) in trace.reductions().iter().enumerate() {
        if i == 0 {
            chain.push(word_text(u));
        }
        chain.push(word_text(v));
    }
    if !chain.is_empty() {
        println!("cycles: {}", chain.join(" => "));
    }
}

fn outcome_code(o: Outcome) -> u8 {
    match o {
        Outcome::Accept => ACCEPT,
        Outcome::Reject { .. } | Outcome::InvalidCycle => REJECT,
        Outcome::Diverges | Outcome::LimitExceeded | Outcome::Partial => RESOURCE,
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Member => ACCEPT,
        Verdict::NonMember => REJECT,
        Verdict::ResourceExceeded => RESOURCE,
    }
}

fn cmd_run(spec: &AutomatonSpec, word: &str, trace: bool, limits: &Limits) -> CmdResult {
    let w = input_word(spec, word)?;
    match run_deterministic(spec, &w, limits) {
        Ok(t) => {
            if trace {
                print_trace(spec, &t);
            }
            print_cycles(&t);
            println!("{}", t.outcome);
            Ok(outcome_code(t.outcome))
        }
        Err(EngineError::Nondeterministic) => {
            println!("note: automaton is nondeterministic; deciding by search");
            let d = decide_input_membership(spec, &w, limits)?;
            report_decision(spec, &d, trace);
            Ok(verdict_code(d.verdict))
        }
        Err(e) => Err(e.into()),
    }
}

fn report_decision(spec: &AutomatonSpec, d: &Decision, trace: bool) {
    if let Some(t) = &d.trace {
        if trace {
            print_trace(spec, t);
        }
        print_cycles(t);
    }
    if let Some(w) = &d.witness {
        println!("witness: {}", word_text(w));
    }
    println!("{}", d.verdict);
}

fn cmd_decide(spec: &AutomatonSpec, word: &str, kind: DecideKind, limits: &Limits) -> CmdResult {
    let d = match kind {
        DecideKind::Input => {
            let w = input_word(spec, word)?;
            decide_input_membership(spec, &w, limits)?
        }
        DecideKind::Basic => {
            let w = tokenize(word, spec.work_alphabet()).map_err(invalid)?;
            decide_basic_membership(spec, &w, limits)?
        }
        DecideKind::Hproper => {
            let w = input_word(spec, word)?;
            decide_hproper_membership(spec, &w, limits)?
        }
    };
    report_decision(spec, &d, false);
    Ok(verdict_code(d.verdict))
}

fn report_code(r: &CheckReport) -> u8 {
    match r.verdict {
        CheckVerdict::HoldsUpToBound => ACCEPT,
        CheckVerdict::Violated => REJECT,
        CheckVerdict::ResourceExceeded => RESOURCE,
    }
}

fn parse_form(s: &str) -> Result<RewriteForm, Fail> {
    match s.to_ascii_uppercase().as_str() {
        "CL" => Ok(RewriteForm::Cl),
        "DL" => Ok(RewriteForm::Dl),
        "SL" => Ok(RewriteForm::Sl),
        _ => Err(invalid(format!("unknown rewrite form {s:?}"))),
    }
}

fn form_name(f: RewriteForm) -> &'static str {
    match f {
        RewriteForm::Cl => "CL",
        RewriteForm::Dl => "DL",
        RewriteForm::Sl => "SL",
    }
}

/// Every rewrite must be of the required form or a stronger one.
fn cmd_forms(spec: &AutomatonSpec, form: Option<&str>) -> CmdResult {
    let want = match form {
        Some(f) => parse_form(f)?,
        None => spec.flags().form,
    };
    let rank = |f: RewriteForm| match f {
        RewriteForm::Cl => 0,
        RewriteForm::Dl => 1,
        RewriteForm::Sl => 2,
    };
    let mut counts = [0usize; 4];
    let mut bad = Vec::new();
    for (q, u, ins) in spec.rules() {
        if let redukto_core::model::Instruction::Rewrite { target, .. } = ins {
            let c = classify_rewrite(u, target);
            counts[match c {
                RewriteClass::Cl => 0,
                RewriteClass::DlNotCl => 1,
                RewriteClass::SlNotDl => 2,
                RewriteClass::Illegal => 3,
            }] += 1;
            if c.form().is_none_or(|f| rank(f) > rank(want)) {
                bad.push(format!("({q}, {}) -> {}", spaced(u), word_text(target)));
            }
        }
    }
    println!("rewrites: CL {} DL {} SL {} illegal {}", counts[0], counts[1], counts[2], counts[3]);
    if bad.is_empty() {
        println!("forms {}: holds", form_name(want));
        Ok(ACCEPT)
    } else {
        println!("forms {}: violated", form_name(want));
        for b in bad {
            println!("not {}: {b}", form_name(want));
        }
        Ok(REJECT)
    }
}

fn cmd_check(
    spec: &AutomatonSpec,
    what: &str,
    n: usize,
    mr: Option<usize>,
    form: Option<&str>,
    limits: &Limits,
) -> CmdResult {
    let report = match what {
        "det" => check_determinism(spec),
        "mono" => check_monotone(spec, n, limits)?,
        "cycle" => {
            let s = match mr {
                Some(j) => spec.with_mr_degree(j),
                None => spec.clone(),
            };
            check_cycle_soundness(&s, n, limits)?
        }
        "shrink" => {
            let w = spec.weights().ok_or_else(|| invalid("automaton has no weight function"))?;
            check_shrinking(spec, w, n, limits)?
        }
        "forms" => return cmd_forms(spec, form),
        other => {
            let mode: PreservationMode = other.parse().map_err(invalid)?;
            check_preservation(spec, n, mode, limits)?
        }
    };
    print!("{report}");
    Ok(report_code(&report))
}

fn cmd_validate(spec: &AutomatonSpec) -> CmdResult {
    let report = validate_automaton(spec);
    print!("{report}");
    println!("class: {}", classify_automaton(spec));
    Ok(if report.is_legal() { ACCEPT } else { REJECT })
}

fn write_output(text: &str, output: Option<&Path>) -> Result<(), Fail> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_transform(which: &Transform, limits: &Limits) -> CmdResult {
    match which {
        Transform::Gnf2hrrwwc { grammar, window, max_window, train, validate, output } => {
            let g = load_grammar(grammar)?;
            let opts = SynthesisOptions {
                window: *window,
                max_window: max_window.unwrap_or(*window),
                train_len: *train,
                validate_len: *validate,
                limits: *limits,
            };
            match build_hrrwwc(&g, &opts) {
                Ok((spec, report)) => {
                    if output.is_some() {
                        print!("{report}");
                    } else {
                        eprint!("{report}");
                    }
                    write_output(&render_automaton(&spec), output.as_deref())?;
                    Ok(ACCEPT)
                }
                Err(ConstructionError::SynthesisFailed(report)) => {
                    println!("synthesis-failed");
                    print!("{report}");
                    Ok(REJECT)
                }
                Err(ConstructionError::Engine(e)) => Err(e.into()),
                Err(e) => Err(invalid(e)),
            }
        }
        Transform::Shrink { automaton, output } => {
            let spec = load_automaton(automaton)?;
            let (s, _) = to_shrinking(&spec).map_err(|e| match e {
                ConstructionError::Engine(e) => e.into(),
                e => invalid(e),
            })?;
            write_output(&render_automaton(&s), output.as_deref())?;
            Ok(ACCEPT)
        }
    }
}

fn cmd_enum(spec: &AutomatonSpec, kind: EnumKind, n: usize, limits: &Limits) -> CmdResult {
    let words = enumerate_language(spec, &LanguageQuery { kind: kind.into(), max_len: n, limits: *limits })?;
    for w in words {
        println!("{}", word_text(&w));
    }
    Ok(ACCEPT)
}

enum Operand {
    Automaton(AutomatonSpec, LanguageKind),
    Grammar(GnfGrammar),
    Oracle(Oracle),
}

fn operand(arg: &str) -> Result<Operand, Fail> {
    if let Some(name) = arg.strip_prefix("oracle:") {
        let e = catalog_lookup(name).map_err(invalid)?;
        return Ok(Operand::Oracle(e.oracle));
    }
    let (base, kind) = match arg.rsplit_once('@') {
        Some((b, k)) => (b, Some(k.parse::<LanguageKind>().map_err(invalid)?)),
        None => (arg, None),
    };
    match load(base)? {
        Loaded::Grammar(g) => Ok(Operand::Grammar(g)),
        Loaded::Automaton(a) => {
            let kind = kind.unwrap_or(if a.input_alphabet() == a.work_alphabet() || a.morphism().is_none() {
                LanguageKind::Input
            } else {
                LanguageKind::HProper
            });
            Ok(Operand::Automaton(a, kind))
        }
    }
}

fn source(o: &Operand) -> LanguageSource<'_> {
    match o {
        Operand::Automaton(a, k) => LanguageSource::Automaton(a, *k),
        Operand::Grammar(g) => LanguageSource::Grammar(g),
        Operand::Oracle(o) => LanguageSource::Oracle(o),
    }
}

fn cmd_cmp(first: &str, second: &str, n: usize, limits: &Limits) -> CmdResult {
    let a = operand(first)?;
    let b = operand(second)?;
    let c = compare_languages(&source(&a), &source(&b), n, limits)?;
    println!("{c}");
    Ok(match c {
        Comparison::Equal { .. } => ACCEPT,
        Comparison::Differ { .. } => REJECT,
    })
}

fn cmd_catalog(action: Option<&CatalogAction>) -> CmdResult {
    match action {
        None | Some(CatalogAction::List) => {
            for e in catalog_list() {
                println!("{:<12} {:<28} {}", e.name, e.tags, e.description);
            }
            Ok(ACCEPT)
        }
        Some(CatalogAction::Export { name, output }) => {
            let e = catalog_lookup(name).map_err(invalid)?;
            let text = match &e.item {
                CatalogItem::Automaton(a) => render_automaton(a),
                CatalogItem::Grammar(g) => render_grammar(g),
            };
            write_output(&text, output.as_deref())?;
            Ok(ACCEPT)
        }
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    let limits = match &cli.limits {
        Some(t) => Limits::parse(t),
        None => Limits::from_env(),
    }
    .map_err(invalid)?;
    match &cli.command {
        Command::Run { automaton, word, trace } => cmd_run(&load_automaton(automaton)?, word, *trace, &limits),
        Command::Decide { automaton, word, kind } => cmd_decide(&load_automaton(automaton)?, word, *kind, &limits),
        Command::Check { automaton, what, max_len, mr, form } => {
            cmd_check(&load_automaton(automaton)?, what, *max_len, *mr, form.as_deref(), &limits)
        }
        Command::Validate { automaton } => cmd_validate(&load_automaton(automaton)?),
        Command::Transform { which } => cmd_transform(which, &limits),
        Command::Enum { automaton, kind, max_len } => cmd_enum(&load_automaton(automaton)?, *kind, *max_len, &limits),
        Command::Cmp { first, second, max_len } => cmd_cmp(first, second, *max_len, &limits),
        Command::Catalog { action } => cmd_catalog(action.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INVALID } else { ACCEPT });
        }
    };
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
