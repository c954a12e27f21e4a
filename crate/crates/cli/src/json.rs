//! JSON forms of weights, nested words, texts, automata and systems.

use std::collections::BTreeMap;
use std::fmt;

use nestweight::algebraic::AlgebraicSystem;
use nestweight::semiring::token;
use nestweight::{NestedWord, Semiring, Text, Weight, Wnwa, Wpa};
use serde_json::{json, Map, Value};

/// A failure of a command, mapped onto an exit status.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input.
    Input(String),
    /// An error raised by the library.
    Core(nestweight::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_guard() => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<nestweight::Error> for CliError {
    fn from(e: nestweight::Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn bad(field: &str, msg: impl fmt::Display) -> CliError {
    CliError::Input(format!("field `{field}`: {msg}"))
}

fn get<'a>(v: &'a Value, field: &str) -> CliResult<&'a Value> {
    v.get(field).ok_or_else(|| bad(field, "missing"))
}

fn as_str<'a>(v: &'a Value, field: &str) -> CliResult<&'a str> {
    v.as_str().ok_or_else(|| bad(field, "expected a string"))
}

fn as_array<'a>(v: &'a Value, field: &str) -> CliResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(field, "expected an array"))
}

fn as_object<'a>(v: &'a Value, field: &str) -> CliResult<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(field, "expected an object"))
}

fn as_index(v: &Value, field: &str) -> CliResult<usize> {
    v.as_u64().map(|i| i as usize).ok_or_else(|| bad(field, "expected a non-negative integer"))
}

fn strings(v: &Value, field: &str) -> CliResult<Vec<String>> {
    as_array(v, field)?
        .iter()
        .enumerate()
        .map(|(i, s)| as_str(s, &format!("{field}[{i}]")).map(str::to_string))
        .collect()
}

/// Parses a JSON document, reporting the line and column of syntax errors.
pub fn parse_document(text: &str, what: &str) -> CliResult<Value> {
    serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("{what}: line {} column {}: {e}", e.line(), e.column())))
}

pub fn parse_weight(k: Semiring, v: &Value, field: &str) -> CliResult<Weight> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(bad(field, "expected a weight token")),
    };
    k.parse(&text).map_err(|e| bad(field, e))
}

pub fn weight_json(w: &Weight) -> Value {
    Value::String(token(w))
}

/// A word given as a string of one-character letters, as a whitespace-separated string, or as an array.
pub fn parse_word(v: &Value, field: &str) -> CliResult<Vec<String>> {
    match v {
        Value::String(s) => Ok(word_from_str(s)),
        Value::Array(_) => strings(v, field),
        _ => Err(bad(field, "expected a word")),
    }
}

/// Splits at whitespace when present, otherwise into characters.
pub fn word_from_str(s: &str) -> Vec<String> {
    if s.chars().any(char::is_whitespace) {
        s.split_whitespace().map(str::to_string).collect()
    } else {
        s.chars().map(String::from).collect()
    }
}

pub fn word_json(letters: &[String]) -> Value {
    if letters.iter().all(|l| l.chars().count() == 1) {
        Value::String(letters.concat())
    } else {
        json!(letters)
    }
}

fn semiring_of(v: &Value) -> CliResult<Semiring> {
    let name = as_str(get(v, "semiring")?, "semiring")?;
    Semiring::from_name(name).map_err(|e| bad("semiring", e))
}

pub fn parse_nested_word(v: &Value) -> CliResult<NestedWord> {
    let word = parse_word(get(v, "word")?, "word")?;
    let mut arcs = Vec::new();
    for (i, a) in as_array(get(v, "arcs")?, "arcs")?.iter().enumerate() {
        let field = format!("arcs[{i}]");
        let pair = as_array(a, &field)?;
        if pair.len() != 2 {
            return Err(bad(&field, "expected a pair"));
        }
        arcs.push((as_index(&pair[0], &field)?, as_index(&pair[1], &field)?));
    }
    Ok(NestedWord::new(word, arcs)?)
}

pub fn nested_word_json(nw: &NestedWord) -> Value {
    json!({"word": word_json(nw.letters()), "arcs": nw.arcs()})
}

pub fn parse_text(v: &Value) -> CliResult<Text> {
    let labels = parse_word(get(v, "labels")?, "labels")?;
    let order2 = as_array(get(v, "order2")?, "order2")?
        .iter()
        .enumerate()
        .map(|(i, p)| as_index(p, &format!("order2[{i}]")))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Text::new(labels, order2)?)
}

pub fn text_json(t: &Text) -> Value {
    json!({"labels": word_json(t.labels()), "order2": t.order2()})
}

fn state_weights(k: Semiring, v: &Value, field: &str) -> CliResult<Vec<(String, Weight)>> {
    let mut out = Vec::new();
    for (q, w) in as_object(v, field)? {
        out.push((q.clone(), parse_weight(k, w, &format!("{field}.{q}"))?));
    }
    Ok(out)
}

fn rows<'a>(v: &'a Value, field: &str, arity: usize) -> CliResult<Vec<(String, &'a [Value])>> {
    let mut out = Vec::new();
    let Some(list) = v.get(field) else {
        return Ok(out);
    };
    for (i, row) in as_array(list, field)?.iter().enumerate() {
        let name = format!("{field}[{i}]");
        let cells = as_array(row, &name)?;
        if cells.len() != arity {
            return Err(bad(&name, format!("expected {arity} entries, got {}", cells.len())));
        }
        out.push((name, cells.as_slice()));
    }
    Ok(out)
}

pub fn parse_wnwa(v: &Value) -> CliResult<Wnwa> {
    let k = semiring_of(v)?;
    let states = strings(get(v, "states")?, "states")?;
    let mut a = Wnwa::new(k, states)?;
    let idx = |a: &Wnwa, field: &str, s: &Value| -> CliResult<usize> {
        a.state_index(as_str(s, field)?).map_err(|e| bad(field, e))
    };
    if let Some(iota) = v.get("iota") {
        for (q, w) in state_weights(k, iota, "iota")? {
            let i = a.state_index(&q).map_err(|e| bad("iota", e))?;
            a.add_iota(i, w)?;
        }
    }
    if let Some(kappa) = v.get("kappa") {
        for (q, w) in state_weights(k, kappa, "kappa")? {
            let i = a.state_index(&q).map_err(|e| bad("kappa", e))?;
            a.add_kappa(i, w)?;
        }
    }
    for (f, c) in rows(v, "int", 4)? {
        let (p, q) = (idx(&a, &f, &c[0])?, idx(&a, &f, &c[2])?);
        a.add_internal(p, as_str(&c[1], &f)?, q, parse_weight(k, &c[3], &f)?)?;
    }
    for (f, c) in rows(v, "call", 4)? {
        let (p, q) = (idx(&a, &f, &c[0])?, idx(&a, &f, &c[2])?);
        a.add_call(p, as_str(&c[1], &f)?, q, parse_weight(k, &c[3], &f)?)?;
    }
    for (f, c) in rows(v, "ret", 5)? {
        let (q, p, q2) = (idx(&a, &f, &c[0])?, idx(&a, &f, &c[1])?, idx(&a, &f, &c[3])?);
        a.add_return(q, p, as_str(&c[2], &f)?, q2, parse_weight(k, &c[4], &f)?)?;
    }
    Ok(a)
}

fn named_weights(k: Semiring, names: &[String], get_w: impl Fn(usize) -> Weight) -> Value {
    let mut m = Map::new();
    for (i, q) in names.iter().enumerate() {
        let w = get_w(i);
        if !k.is_zero(&w) {
            m.insert(q.clone(), weight_json(&w));
        }
    }
    Value::Object(m)
}

pub fn wnwa_json(a: &Wnwa) -> Value {
    let k = a.semiring();
    let st = a.states();
    let int: Vec<Value> =
        a.internal().iter().map(|((p, l, q), w)| json!([st[*p], l, st[*q], weight_json(w)])).collect();
    let call: Vec<Value> =
        a.calls().iter().map(|((p, l, q), w)| json!([st[*p], l, st[*q], weight_json(w)])).collect();
    let ret: Vec<Value> = a
        .returns()
        .iter()
        .map(|((q, p, l, q2), w)| json!([st[*q], st[*p], l, st[*q2], weight_json(w)]))
        .collect();
    json!({
        "semiring": k.name(),
        "states": st,
        "iota": named_weights(k, st, |i| a.iota(i).clone()),
        "kappa": named_weights(k, st, |i| a.kappa(i).clone()),
        "int": int,
        "call": call,
        "ret": ret,
    })
}

pub fn parse_wpa(v: &Value) -> CliResult<Wpa> {
    let k = semiring_of(v)?;
    let h = strings(get(v, "hstates")?, "hstates")?;
    let vs = strings(get(v, "vstates")?, "vstates")?;
    let parens = match v.get("parens") {
        Some(p) => strings(p, "parens")?,
        None => Vec::new(),
    };
    let mut a = Wpa::new(k, h, vs, parens)?;
    let idx = |a: &Wpa, field: &str, s: &Value| -> CliResult<usize> {
        a.state_index(as_str(s, field)?).map_err(|e| bad(field, e))
    };
    let par = |a: &Wpa, field: &str, s: &Value| -> CliResult<usize> {
        a.paren_index(as_str(s, field)?).map_err(|e| bad(field, e))
    };
    for (field, target) in [("lambda", true), ("gamma", false)] {
        if let Some(m) = v.get(field) {
            for (q, w) in state_weights(k, m, field)? {
                let i = a.state_index(&q).map_err(|e| bad(field, e))?;
                if target {
                    a.add_lambda(i, w)?;
                } else {
                    a.add_gamma(i, w)?;
                }
            }
        }
    }
    for (f, c) in rows(v, "mu", 4)? {
        let (p, q) = (idx(&a, &f, &c[0])?, idx(&a, &f, &c[2])?);
        a.add_mu(p, as_str(&c[1], &f)?, q, parse_weight(k, &c[3], &f)?)?;
    }
    for (f, c) in rows(v, "mu_open", 4)? {
        let (p, s, q) = (idx(&a, &f, &c[0])?, par(&a, &f, &c[1])?, idx(&a, &f, &c[2])?);
        a.add_open(p, s, q, parse_weight(k, &c[3], &f)?)?;
    }
    for (f, c) in rows(v, "mu_close", 4)? {
        let (p, s, q) = (idx(&a, &f, &c[0])?, par(&a, &f, &c[1])?, idx(&a, &f, &c[2])?);
        a.add_close(p, s, q, parse_weight(k, &c[3], &f)?)?;
    }
    Ok(a)
}

pub fn wpa_json(a: &Wpa) -> Value {
    let k = a.semiring();
    let names: Vec<String> = (0..a.num_states()).map(|q| a.state_name(q).to_string()).collect();
    let pr = a.parens();
    let mu: Vec<Value> =
        a.mu().iter().map(|((p, l, q), w)| json!([names[*p], l, names[*q], weight_json(w)])).collect();
    let bracket = |m: &BTreeMap<(usize, usize, usize), Weight>| -> Vec<Value> {
        m.iter().map(|((p, s, q), w)| json!([names[*p], pr[*s], names[*q], weight_json(w)])).collect()
    };
    json!({
        "semiring": k.name(),
        "hstates": a.hstates(),
        "vstates": a.vstates(),
        "parens": pr,
        "mu": mu,
        "mu_open": bracket(a.mu_open()),
        "mu_close": bracket(a.mu_close()),
        "lambda": named_weights(k, &names, |i| a.lambda(i).clone()),
        "gamma": named_weights(k, &names, |i| a.gamma(i).clone()),
    })
}

/// A system and its optional designated variable.
pub fn parse_system(v: &Value) -> CliResult<(AlgebraicSystem, Option<String>)> {
    let k = semiring_of(v)?;
    let alphabet = strings(get(v, "alphabet")?, "alphabet")?;
    let variables = strings(get(v, "variables")?, "variables")?;
    let mut sys = AlgebraicSystem::new(k, alphabet, variables)?;
    for (x, terms) in as_object(get(v, "polys")?, "polys")? {
        for (i, t) in as_array(terms, &format!("polys.{x}"))?.iter().enumerate() {
            let field = format!("polys.{x}[{i}]");
            let word = strings(get(t, "word").map_err(|_| bad(&field, "missing word"))?, &field)?;
            let w = parse_weight(k, get(t, "coeff").map_err(|_| bad(&field, "missing coeff"))?, &field)?;
            sys.add_term(x, word, w).map_err(|e| bad(&field, e))?;
        }
    }
    let designated = match v.get("designated") {
        Some(d) => {
            let d = as_str(d, "designated")?.to_string();
            if !sys.is_variable(&d) {
                return Err(bad("designated", format!("{d} is not a variable")));
            }
            Some(d)
        }
        None => None,
    };
    Ok((sys, designated))
}

pub fn system_json(sys: &AlgebraicSystem, designated: Option<&str>) -> Value {
    let mut polys = Map::new();
    for x in sys.variables() {
        let terms: Vec<Value> = sys
            .poly(x)
            .map(|p| p.terms().iter().map(|(w, c)| json!({"word": w, "coeff": weight_json(c)})).collect())
            .unwrap_or_default();
        polys.insert(x.clone(), Value::Array(terms));
    }
    let mut out = json!({
        "semiring": sys.semiring().name(),
        "alphabet": sys.alphabet(),
        "variables": sys.variables(),
        "polys": polys,
    });
    if let Some(d) = designated {
        out["designated"] = Value::String(d.to_string());
    }
    out
}
