//! S-expression syntax for formulas.

use nestweight::logic::{and, exists1, exists2, forall1, forall2, or, Atom, Formula};
use nestweight::Semiring;

use crate::json::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Sym(String),
    Str(String),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

#[derive(Debug)]
enum Sexp {
    List(Vec<Sexp>, usize, usize),
    Sym(String, usize, usize),
    Str(String, usize, usize),
}

impl Sexp {
    fn pos(&self) -> (usize, usize) {
        match self {
            Sexp::List(_, l, c) | Sexp::Sym(_, l, c) | Sexp::Str(_, l, c) => (*l, *c),
        }
    }
}

fn err(line: usize, col: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("formula: line {line} column {col}: {msg}"))
}

fn lex(src: &str) -> CliResult<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l0, c0) = (line, col);
        let mut bump = |ch: char| {
            if ch == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        };
        match c {
            '(' | ')' => {
                chars.next();
                bump(c);
                out.push(Spanned { tok: if c == '(' { Tok::Open } else { Tok::Close }, line: l0, col: c0 });
            }
            '"' => {
                chars.next();
                bump(c);
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => {
                            bump('"');
                            break;
                        }
                        Some(ch) => {
                            bump(ch);
                            s.push(ch);
                        }
                        None => return Err(err(l0, c0, "unterminated string")),
                    }
                }
                out.push(Spanned { tok: Tok::Str(s), line: l0, col: c0 });
            }
            c if c.is_whitespace() => {
                chars.next();
                bump(c);
            }
            _ => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_whitespace() || ch == '(' || ch == ')' || ch == '"' {
                        break;
                    }
                    chars.next();
                    bump(ch);
                    s.push(ch);
                }
                out.push(Spanned { tok: Tok::Sym(s), line: l0, col: c0 });
            }
        }
    }
    Ok(out)
}

fn read(toks: &[Spanned], i: &mut usize) -> CliResult<Sexp> {
    let Some(t) = toks.get(*i) else {
        let (l, c) = toks.last().map(|t| (t.line, t.col)).unwrap_or((1, 1));
        return Err(err(l, c, "unexpected end of input"));
    };
    *i += 1;
    match &t.tok {
        Tok::Sym(s) => Ok(Sexp::Sym(s.clone(), t.line, t.col)),
        Tok::Str(s) => Ok(Sexp::Str(s.clone(), t.line, t.col)),
        Tok::Close => Err(err(t.line, t.col, "unexpected `)`")),
        Tok::Open => {
            let mut items = Vec::new();
            loop {
                match toks.get(*i) {
                    Some(Spanned { tok: Tok::Close, .. }) => {
                        *i += 1;
                        return Ok(Sexp::List(items, t.line, t.col));
                    }
                    Some(_) => items.push(read(toks, i)?),
                    None => return Err(err(t.line, t.col, "unclosed `(`")),
                }
            }
        }
    }
}

fn name(s: &Sexp) -> CliResult<String> {
    match s {
        Sexp::Sym(n, ..) => Ok(n.clone()),
        Sexp::Str(n, ..) => Ok(n.clone()),
        Sexp::List(_, l, c) => Err(err(*l, *c, "expected a name")),
    }
}

fn atom(head: &str, args: &[Sexp], line: usize, col: usize) -> CliResult<Option<Atom>> {
    let two = |args: &[Sexp]| -> CliResult<(String, String)> {
        if args.len() != 2 {
            return Err(err(line, col, format!("`{head}` takes two arguments")));
        }
        Ok((name(&args[0])?, name(&args[1])?))
    };
    Ok(Some(match head {
        "=" => {
            let (x, y) = two(args)?;
            Atom::Eq(x, y)
        }
        "lab" => {
            let (a, x) = two(args)?;
            Atom::Lab(a, x)
        }
        "<=" => {
            let (x, y) = two(args)?;
            Atom::Leq(x, y)
        }
        "edge" => {
            let (x, y) = two(args)?;
            Atom::Edge(x, y)
        }
        "in" => {
            let (x, y) = two(args)?;
            Atom::In(x, y)
        }
        _ => return Ok(None),
    }))
}

fn build(s: &Sexp, k: Semiring) -> CliResult<Formula> {
    let Sexp::List(items, line, col) = s else {
        let (l, c) = s.pos();
        return Err(err(l, c, "expected a parenthesized formula"));
    };
    let (line, col) = (*line, *col);
    let Some((head, args)) = items.split_first() else {
        return Err(err(line, col, "empty list"));
    };
    let head = match head {
        Sexp::Sym(h, ..) => h.as_str(),
        other => {
            let (l, c) = other.pos();
            return Err(err(l, c, "expected an operator"));
        }
    };
    if let Some(a) = atom(head, args, line, col)? {
        return Ok(Formula::Atom(a));
    }
    match head {
        "k" => {
            if args.len() != 1 {
                return Err(err(line, col, "`k` takes one weight"));
            }
            let (l, c) = args[0].pos();
            let w = k.parse(&name(&args[0])?).map_err(|e| err(l, c, e))?;
            Ok(Formula::Const(w))
        }
        "not" => {
            let [Sexp::List(inner, l, c)] = args else {
                return Err(err(line, col, "`not` takes one atomic formula"));
            };
            let Some((Sexp::Sym(h, ..), rest)) = inner.split_first() else {
                return Err(err(*l, *c, "`not` takes one atomic formula"));
            };
            match atom(h, rest, *l, *c)? {
                Some(a) => Ok(Formula::NegAtom(a)),
                None => Err(err(*l, *c, "negation applies to atomic formulas only")),
            }
        }
        "and" | "or" => {
            if args.len() < 2 {
                return Err(err(line, col, format!("`{head}` takes at least two formulas")));
            }
            let mut parts = args.iter().map(|a| build(a, k)).collect::<CliResult<Vec<_>>>()?;
            let mut acc = parts.pop().expect("non-empty");
            while let Some(p) = parts.pop() {
                acc = if head == "and" { and(p, acc) } else { or(p, acc) };
            }
            Ok(acc)
        }
        "E1" | "E2" | "A1" | "A2" => {
            if args.len() != 2 {
                return Err(err(line, col, format!("`{head}` takes a variable and a formula")));
            }
            let v = name(&args[0])?;
            let body = build(&args[1], k)?;
            Ok(match head {
                "E1" => exists1(&v, body),
                "E2" => exists2(&v, body),
                "A1" => forall1(&v, body),
                _ => forall2(&v, body),
            })
        }
        other => Err(err(line, col, format!("unknown operator `{other}`"))),
    }
}

/// Parses one formula; constants are read in the semiring `k`.
pub fn parse_formula(src: &str, k: Semiring) -> CliResult<Formula> {
    let toks = lex(src)?;
    let mut i = 0;
    let s = read(&toks, &mut i)?;
    if let Some(t) = toks.get(i) {
        return Err(err(t.line, t.col, "trailing input"));
    }
    let f = build(&s, k)?;
    f.check_sorts()?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let k = Semiring::Rational;
        for src in [
            "(E1 x (k \"3/4\"))",
            "(A1 y (or (not (lab a y)) (E1 x (and (edge y x) (<= x y)))))",
            "(E2 X (A1 x (in x X)))",
        ] {
            let f = parse_formula(src, k).unwrap();
            assert_eq!(f.to_string(), src);
            assert_eq!(parse_formula(&f.to_string(), k).unwrap(), f);
        }
    }

    #[test]
    fn diagnostics() {
        let k = Semiring::Natural;
        let e = parse_formula("(and (lab a x)\n  (foo x))", k).unwrap_err().to_string();
        assert!(e.contains("line 2 column 3"), "{e}");
        assert!(parse_formula("(E1 x (lab a x)", k).is_err());
        assert!(parse_formula("(not (and (lab a x) (lab b x)))", k).is_err());
        assert!(parse_formula("(k \"-1\")", k).is_err());
    }
}
