//! Subcommands and their dispatch.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nestweight::algebraic::{
    all_words, gnf_to_wnwa, project_nw_series, project_text_series, system_to_srfo, wnwa_to_system, wpa_to_system,
    AlgebraicSystem,
};
use nestweight::bridge::{phi_bullet, phi_circ, phi_inverse, wnwa_to_wpa, wpa_to_wnwa, Embedding};
use nestweight::logic::{classify, exists_nu, exists_tdo, minus, plus, Assignment, Evaluator, Formula, Structure};
use nestweight::nested_word::enumerate_nestings;
use nestweight::text::{enumerate_tdo, enumerate_texts};
use nestweight::{Guards, Semiring, Wnwa, Wpa};
use serde_json::{json, Map, Value};

use crate::checks;
use crate::json::{
    nested_word_json, parse_document, parse_nested_word, parse_system, parse_text, parse_wnwa, parse_wpa, system_json,
    text_json, weight_json, wnwa_json, word_from_str, wpa_json, CliError, CliResult,
};
use crate::random;
use crate::sexpr::parse_formula;

#[derive(Debug, Parser)]
#[command(name = "nestweight", version, about = "Weighted nested-word automata, texts, logic and algebraic series")]
pub struct Cli {
    /// Semiring for formulas and enumerations (automata and systems carry their own).
    #[arg(long, global = true)]
    semiring: Option<String>,
    /// Length bound for bounded checks and series.
    #[arg(long, global = true)]
    max_len: Option<usize>,
    /// State bound for random automata in selfcheck.
    #[arg(long, global = true)]
    max_states: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// How `edge` is read by formulas.
    #[arg(long, global = true, value_enum)]
    signature: Option<SignatureArg>,
    /// Write the result document here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SignatureArg {
    Nested,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EmbeddingArg {
    Circ,
    Bullet,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TranslateKind {
    PhiCirc,
    PhiBullet,
    PhiInverse,
    WpaToWnwa,
    WnwaToWpa,
    WnwaToSystem,
    GnfToWnwa,
    WpaToSystem,
    SystemToSrfo,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EnumerateKind {
    Nestings,
    Texts,
    Tdo,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Behavior of a nested-word automaton on a nested word.
    EvalWnwa { automaton: PathBuf, word: PathBuf },
    /// Behavior of a parenthesizing automaton on a text.
    EvalWpa { automaton: PathBuf, text: PathBuf },
    /// Weighted semantics of a sentence on a nested word or text.
    EvalFormula { formula: String, structure: PathBuf },
    /// The formulas `φ⁺` and `φ⁻`.
    Disambiguate { formula: String },
    /// Fragment membership.
    Classify { formula: String },
    Translate {
        #[arg(value_enum)]
        kind: TranslateKind,
        input: PathBuf,
        /// Variable of a system to translate.
        #[arg(long)]
        variable: Option<String>,
        #[arg(long, value_enum, default_value = "circ")]
        embedding: EmbeddingArg,
    },
    /// Nonzero coefficients of the solution up to `--max-len`, or the coefficient of `--word`.
    SolveSystem {
        system: PathBuf,
        #[arg(long)]
        variable: Option<String>,
        #[arg(long)]
        word: Option<String>,
    },
    /// Projection of an automaton's behavior onto a plain word.
    Project {
        automaton: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Sum of a sentence over all nestings of a word.
    ExistsNu {
        formula: String,
        #[arg(long)]
        word: String,
    },
    /// Sum of a sentence over all alternating texts with the given labels.
    ExistsTdo {
        formula: String,
        #[arg(long)]
        word: String,
    },
    Enumerate {
        #[arg(value_enum)]
        kind: EnumerateKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        labels: Option<String>,
    },
    /// Bounded equivalence of two automata of the same kind.
    Compare { left: PathBuf, right: PathBuf },
    /// Runs the invariant suites on seeded random instances.
    Selfcheck,
}

/// Exit status and the text for both output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> CliResult<Value> {
    parse_document(&read(path)?, &path.display().to_string())
}

/// A formula given inline, as a file of s-expression text, or as a JSON document holding one.
fn load_formula(arg: &str, k: Semiring) -> CliResult<Formula> {
    let src = if arg.trim_start().starts_with('(') { arg.to_string() } else { read(Path::new(arg))? };
    let trimmed = src.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('"') {
        let v = parse_document(&src, arg)?;
        let s = match &v {
            Value::String(s) => s.clone(),
            Value::Object(m) => m
                .get("formula")
                .and_then(Value::as_str)
                .ok_or_else(|| CliError::Input(format!("{arg}: field `formula`: expected a string")))?
                .to_string(),
            _ => return Err(CliError::Input(format!("{arg}: expected a formula"))),
        };
        return parse_formula(&s, k);
    }
    parse_formula(&src, k)
}

fn parse_scale(s: &str) -> CliResult<(u64, u64)> {
    let bad = || CliError::Input(format!("NESTWEIGHT_GUARD_SCALE: cannot read {s:?}"));
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        return if q == 0 { Err(bad()) } else { Ok((p, q)) };
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 9 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        return Ok((int * den + frac, den));
    }
    Ok((s.parse().map_err(|_| bad())?, 1))
}

/// Default guards, scaled by `NESTWEIGHT_GUARD_SCALE` when set.
pub fn guards_from_env() -> CliResult<Guards> {
    match std::env::var("NESTWEIGHT_GUARD_SCALE") {
        Ok(s) => {
            let (p, q) = parse_scale(&s)?;
            Ok(Guards::default().scaled(p, q))
        }
        Err(_) => Ok(Guards::default()),
    }
}

fn choose_variable(sys: &AlgebraicSystem, flag: &Option<String>, designated: Option<String>) -> CliResult<String> {
    let v = flag
        .clone()
        .or(designated)
        .or_else(|| sys.variables().first().cloned())
        .ok_or_else(|| CliError::Input("the system has no variables".into()))?;
    if !sys.is_variable(&v) {
        return Err(CliError::Input(format!("{v} is not a variable of the system")));
    }
    Ok(v)
}

enum Automaton {
    Nested(Wnwa),
    Text(Wpa),
}

fn load_automaton(path: &Path) -> CliResult<Automaton> {
    let v = read_json(path)?;
    if v.get("hstates").is_some() {
        Ok(Automaton::Text(parse_wpa(&v)?))
    } else {
        Ok(Automaton::Nested(parse_wnwa(&v)?))
    }
}

struct Context {
    semiring: Option<Semiring>,
    max_len: Option<usize>,
    max_states: Option<usize>,
    seed: u64,
    signature: SignatureArg,
    guards: Guards,
}

impl Context {
    fn semiring(&self) -> Semiring {
        self.semiring.unwrap_or(Semiring::Natural)
    }
}

/// A result value, and whether the verdict is negative.
type Verdict = (Value, bool);

fn execute(cmd: &Command, cx: &Context) -> CliResult<Verdict> {
    let g = &cx.guards;
    let ok = |v: Value| Ok((v, false));
    match cmd {
        Command::EvalWnwa { automaton, word } => {
            let a = parse_wnwa(&read_json(automaton)?)?;
            let nw = parse_nested_word(&read_json(word)?)?;
            ok(weight_json(&a.behavior(&nw)))
        }
        Command::EvalWpa { automaton, text } => {
            let a = parse_wpa(&read_json(automaton)?)?;
            let t = parse_text(&read_json(text)?)?;
            ok(weight_json(&a.behavior(&t)))
        }
        Command::EvalFormula { formula, structure } => {
            let k = cx.semiring();
            let f = load_formula(formula, k)?;
            let doc = read_json(structure)?;
            let ev = Evaluator::new(&f, k)?;
            let asg = Assignment::new();
            let w = match cx.signature {
                SignatureArg::Nested => ev.eval(Structure::Nested(&parse_nested_word(&doc)?), &asg, g)?,
                SignatureArg::Text => ev.eval(Structure::Text(&parse_text(&doc)?), &asg, g)?,
            };
            ok(weight_json(&w))
        }
        Command::Disambiguate { formula } => {
            let f = load_formula(formula, cx.semiring())?;
            ok(json!({"plus": plus(&f)?.to_string(), "minus": minus(&f)?.to_string()}))
        }
        Command::Classify { formula } => {
            let f = load_formula(formula, cx.semiring())?;
            let mut m = Map::new();
            for (name, member) in classify(&f).flags() {
                m.insert(name.to_string(), Value::Bool(member));
            }
            ok(Value::Object(m))
        }
        Command::Translate { kind, input, variable, embedding } => {
            let doc = read_json(input)?;
            let v = match kind {
                TranslateKind::PhiCirc => text_json(&phi_circ(&parse_nested_word(&doc)?)),
                TranslateKind::PhiBullet => text_json(&phi_bullet(&parse_nested_word(&doc)?)),
                TranslateKind::PhiInverse => {
                    let e = match embedding {
                        EmbeddingArg::Circ => Embedding::Circ,
                        EmbeddingArg::Bullet => Embedding::Bullet,
                    };
                    match phi_inverse(&parse_text(&doc)?, e) {
                        Some(nw) => nested_word_json(&nw),
                        None => Value::Null,
                    }
                }
                TranslateKind::WpaToWnwa => wnwa_json(&wpa_to_wnwa(&parse_wpa(&doc)?)?),
                TranslateKind::WnwaToWpa => wpa_json(&wnwa_to_wpa(&parse_wnwa(&doc)?)?),
                TranslateKind::WnwaToSystem => {
                    let (sys, x) = wnwa_to_system(&parse_wnwa(&doc)?)?;
                    system_json(&sys, Some(&x))
                }
                TranslateKind::WpaToSystem => {
                    let (sys, x) = wpa_to_system(&parse_wpa(&doc)?)?;
                    system_json(&sys, Some(&x))
                }
                TranslateKind::GnfToWnwa => {
                    let (sys, d) = parse_system(&doc)?;
                    let y = choose_variable(&sys, variable, d)?;
                    wnwa_json(&gnf_to_wnwa(&sys, &y)?)
                }
                TranslateKind::SystemToSrfo => {
                    let (sys, d) = parse_system(&doc)?;
                    let y = choose_variable(&sys, variable, d)?;
                    Value::String(system_to_srfo(&sys, &y, g)?.to_string())
                }
            };
            ok(v)
        }
        Command::SolveSystem { system, variable, word: Some(word) } => {
            let (sys, d) = parse_system(&read_json(system)?)?;
            let x = choose_variable(&sys, variable, d)?;
            ok(weight_json(&sys.coefficient(&x, &word_from_str(word))?))
        }
        Command::SolveSystem { system, variable, word: None } => {
            let (sys, _) = parse_system(&read_json(system)?)?;
            let sol = sys.solve_coefficients(cx.max_len.unwrap_or(6), g)?;
            let mut m = Map::new();
            for (x, series) in sol {
                if variable.as_ref().is_some_and(|v| *v != x) {
                    continue;
                }
                let terms: Vec<Value> =
                    series.iter().map(|(w, c)| json!({"word": w, "coeff": weight_json(c)})).collect();
                m.insert(x, Value::Array(terms));
            }
            if let Some(v) = variable {
                if !m.contains_key(v) {
                    return Err(CliError::Input(format!("{v} is not a variable of the system")));
                }
            }
            ok(Value::Object(m))
        }
        Command::Project { automaton, word } => {
            let w = word_from_str(word);
            let v = match load_automaton(automaton)? {
                Automaton::Nested(a) => project_nw_series(&a, &w, g)?,
                Automaton::Text(a) => project_text_series(&a, &w, g)?,
            };
            ok(weight_json(&v))
        }
        Command::ExistsNu { formula, word } => {
            let k = cx.semiring();
            let f = load_formula(formula, k)?;
            ok(weight_json(&exists_nu(&f, k, &word_from_str(word), g)?))
        }
        Command::ExistsTdo { formula, word } => {
            let k = cx.semiring();
            let f = load_formula(formula, k)?;
            ok(weight_json(&exists_tdo(&f, k, &word_from_str(word), g)?))
        }
        Command::Enumerate { kind, n, labels } => {
            let need_n = || n.ok_or_else(|| CliError::Input("--n is required".into()));
            let v = match kind {
                EnumerateKind::Nestings => json!(enumerate_nestings(need_n()?, g)?),
                EnumerateKind::Tdo => json!(enumerate_tdo(need_n()?, g)?),
                EnumerateKind::Texts => {
                    let labels = labels.as_ref().ok_or_else(|| CliError::Input("--labels is required".into()))?;
                    let texts = enumerate_texts(&word_from_str(labels), g)?;
                    Value::Array(texts.iter().map(text_json).collect())
                }
            };
            ok(v)
        }
        Command::Compare { left, right } => compare(left, right, cx),
        Command::Selfcheck => selfcheck(cx),
    }
}

fn compare(left: &Path, right: &Path, cx: &Context) -> CliResult<Verdict> {
    let g = &cx.guards;
    let n = cx.max_len.unwrap_or(5);
    match (load_automaton(left)?, load_automaton(right)?) {
        (Automaton::Nested(a), Automaton::Nested(b)) => match a.bounded_equiv(&b, n, g)? {
            None => Ok((json!("equivalent"), false)),
            Some(w) => Ok((
                json!({
                    "witness": nested_word_json(&w.nested_word),
                    "left": weight_json(&w.left),
                    "right": weight_json(&w.right),
                }),
                true,
            )),
        },
        (Automaton::Text(a), Automaton::Text(b)) => {
            if a.semiring() != b.semiring() {
                return Err(nestweight::Error::SemiringMismatch { left: a.semiring().name(), right: b.semiring().name() }.into());
            }
            let alphabet: Vec<String> = a.alphabet().into_iter().chain(b.alphabet()).collect::<BTreeSet<_>>().into_iter().collect();
            for w in all_words(&alphabet, n, g)?.into_iter().skip(1) {
                for t in enumerate_texts(&w, g)? {
                    let (l, r) = (a.behavior(&t), b.behavior(&t));
                    if l != r {
                        return Ok((
                            json!({"witness": text_json(&t), "left": weight_json(&l), "right": weight_json(&r)}),
                            true,
                        ));
                    }
                }
            }
            Ok((json!("equivalent"), false))
        }
        _ => Err(CliError::Input("compare needs two automata of the same kind".into())),
    }
}

fn selfcheck(cx: &Context) -> CliResult<Verdict> {
    let g = &cx.guards;
    let len = cx.max_len.unwrap_or(4);
    let states = cx.max_states.unwrap_or(2);
    let mut rng = random::rng(cx.seed);
    let rng = &mut rng;
    let suites: Vec<(&str, checks::Outcome)> = vec![
        ("counting", checks::counting(len, g)),
        ("nesting_depth", checks::depth(len, g)),
        ("enumeration", checks::enumeration(len + 4, len.min(6), g)),
        ("phi_coherence", checks::phi_coherence(rng, len, 20, g)),
        ("wnwa_to_wpa", checks::wnwa_to_wpa_suite(rng, 5, states, len.min(4), g)),
        ("wpa_to_wnwa", checks::wpa_to_wnwa_suite(rng, 5, len.min(4), g)),
        ("dp_vs_oracle", checks::dp_vs_oracle(rng, 10, 10, len, g)),
        ("disambiguation", checks::disambiguation(rng, 5, len.min(3), g)),
        ("gnf", checks::gnf_suite(rng, 3, len, g)),
        ("wnwa_to_system", checks::wnwa_system_suite(rng, 3, states, len, g)),
        ("wpa_to_system", checks::wpa_system_suite(rng, 2, len.min(3), g)),
        ("srfo", checks::srfo_suite(len.min(4), g)),
    ];
    let mut failed = false;
    let mut m = Map::new();
    for (name, outcome) in suites {
        let v = match outcome {
            Ok(n) => json!({"status": "pass", "checks": n}),
            Err(e) => {
                failed = true;
                json!({"status": "fail", "detail": e})
            }
        };
        m.insert(name.to_string(), v);
    }
    Ok((json!({"seed": cx.seed, "suites": m}), failed))
}

/// Parses `argv` (program name first), runs the command and renders the outcome.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match run_cli(&cli) {
        Ok((doc, negative)) => {
            let text = format!("{}\n", serde_json::to_string(&json!({"result": doc})).expect("serializable"));
            let code = if negative { 4 } else { 0 };
            match &cli.out {
                Some(path) => match std::fs::write(path, &text) {
                    Ok(()) => Output { code, stdout: String::new(), stderr: String::new() },
                    Err(e) => Output { code: 2, stdout: String::new(), stderr: format!("{}: {e}\n", path.display()) },
                },
                None => Output { code, stdout: text, stderr: String::new() },
            }
        }
        Err(e) => Output {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("{}\n", serde_json::to_string(&json!({"error": e.to_string()})).expect("serializable")),
        },
    }
}

fn run_cli(cli: &Cli) -> CliResult<Verdict> {
    let semiring = match &cli.semiring {
        Some(s) => Some(Semiring::from_name(s)?),
        None => None,
    };
    let cx = Context {
        semiring,
        max_len: cli.max_len,
        max_states: cli.max_states,
        seed: cli.seed.unwrap_or(0),
        signature: cli.signature.unwrap_or(SignatureArg::Nested),
        guards: guards_from_env()?,
    };
    execute(&cli.command, &cx)
}
