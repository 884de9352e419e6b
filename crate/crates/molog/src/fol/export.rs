//! TPTP and SMT-LIB exporters with re-parsers for their own output.
//!
//! TPTP output universally closes the free variables (provers want
//! sentences) and keeps the open formula in a header comment; SMT-LIB output
//! declares an uninterpreted sort `World`, the predicates, and the free
//! variables as constants, then asserts the formula.

use crate::error::FolError;

use super::{FOFormula, Term};

fn tptp_var(name: &str) -> String {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) => c.to_ascii_uppercase().to_string() + chars.as_str(),
        None => name.to_string(),
    }
}

fn tptp_pred(name: &str) -> String {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) => c.to_ascii_lowercase().to_string() + chars.as_str(),
        None => name.to_string(),
    }
}

fn tptp_formula(f: &FOFormula) -> String {
    match f {
        FOFormula::False => "$false".to_string(),
        FOFormula::Atom { pred, args } => {
            let rendered: Vec<String> = args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => tptp_var(v),
                    Term::Const(c) => tptp_pred(c),
                })
                .collect();
            format!("{}({})", tptp_pred(pred), rendered.join(","))
        }
        FOFormula::Not(a) => format!("~{}", tptp_unit(a)),
        FOFormula::And(a, b) => format!("({} & {})", tptp_formula(a), tptp_formula(b)),
        FOFormula::Or(a, b) => format!("({} | {})", tptp_formula(a), tptp_formula(b)),
        FOFormula::Implies(a, b) => format!("({} => {})", tptp_formula(a), tptp_formula(b)),
        FOFormula::Forall(x, a) => format!("![{}]: {}", tptp_var(x), tptp_unit(a)),
        FOFormula::Exists(x, a) => format!("?[{}]: {}", tptp_var(x), tptp_unit(a)),
    }
}

fn tptp_unit(f: &FOFormula) -> String {
    match f {
        FOFormula::And(..) | FOFormula::Or(..) | FOFormula::Implies(..) => tptp_formula(f),
        _ => tptp_formula(f),
    }
}

/// Renames variables and predicates to TPTP case conventions, keeping the
/// structure; used to compare against re-parsed output.
pub fn tptp_normalize(f: &FOFormula) -> FOFormula {
    match f {
        FOFormula::False => FOFormula::False,
        FOFormula::Atom { pred, args } => FOFormula::Atom {
            pred: tptp_pred(pred),
            args: args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => Term::Var(tptp_var(v)),
                    Term::Const(c) => Term::Const(tptp_pred(c)),
                })
                .collect(),
        },
        FOFormula::Not(a) => FOFormula::Not(Box::new(tptp_normalize(a))),
        FOFormula::And(a, b) => {
            FOFormula::And(Box::new(tptp_normalize(a)), Box::new(tptp_normalize(b)))
        }
        FOFormula::Or(a, b) => {
            FOFormula::Or(Box::new(tptp_normalize(a)), Box::new(tptp_normalize(b)))
        }
        FOFormula::Implies(a, b) => {
            FOFormula::Implies(Box::new(tptp_normalize(a)), Box::new(tptp_normalize(b)))
        }
        FOFormula::Forall(x, a) => FOFormula::Forall(tptp_var(x), Box::new(tptp_normalize(a))),
        FOFormula::Exists(x, a) => FOFormula::Exists(tptp_var(x), Box::new(tptp_normalize(a))),
    }
}

/// Exports a formula as a TPTP `fof` unit named `f1`, universally closing
/// its free variables. The header names the source logic and preserves the
/// open formula.
pub fn to_tptp(formula: &FOFormula, logic_name: &str) -> String {
    let free: Vec<String> = formula.free_vars().into_iter().collect();
    let mut closed = tptp_normalize(formula);
    for v in free.iter().rev() {
        closed = FOFormula::Forall(tptp_var(v), Box::new(closed));
    }
    let mut out = String::new();
    out.push_str(&format!("% logic: {logic_name}\n"));
    if free.is_empty() {
        out.push_str("% open: (closed formula)\n");
    } else {
        out.push_str(&format!(
            "% open: {formula} with free variables [{}]\n",
            free.join(", ")
        ));
    }
    out.push_str(&format!("fof(f1, axiom, {}).\n", tptp_formula(&closed)));
    out
}

/// One parsed TPTP annotated formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TptpUnit {
    pub name: String,
    pub role: String,
    pub formula: FOFormula,
}

/// Parses the TPTP fragment emitted by [`to_tptp`].
pub fn parse_tptp(text: &str) -> Result<TptpUnit, FolError> {
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('%'))
        .collect::<Vec<_>>()
        .join("\n");
    let mut p = TptpParser {
        bytes: body.as_bytes(),
        pos: 0,
    };
    p.expect_word("fof")?;
    p.expect(b'(')?;
    let name = p.ident()?;
    p.expect(b',')?;
    let role = p.ident()?;
    p.expect(b',')?;
    let formula = p.formula()?;
    p.expect(b')')?;
    p.expect(b'.')?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error("trailing input"));
    }
    Ok(TptpUnit {
        name,
        role,
        formula,
    })
}

struct TptpParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> TptpParser<'a> {
    fn error(&self, message: &str) -> FolError {
        FolError::Parse {
            format: "tptp",
            at: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), FolError> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", b as char)))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<(), FolError> {
        self.skip_ws();
        if self.bytes[self.pos..].starts_with(w.as_bytes()) {
            self.pos += w.len();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{w}`")))
        }
    }

    fn ident(&mut self) -> Result<String, FolError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a name"));
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii")
            .to_string())
    }

    fn formula(&mut self) -> Result<FOFormula, FolError> {
        self.skip_ws();
        match self.bytes.get(self.pos) {
            Some(b'(') => {
                self.pos += 1;
                let left = self.formula()?;
                self.skip_ws();
                let op = if self.bytes[self.pos..].starts_with(b"=>") {
                    self.pos += 2;
                    2u8
                } else {
                    match self.bytes.get(self.pos) {
                        Some(b'&') => {
                            self.pos += 1;
                            0
                        }
                        Some(b'|') => {
                            self.pos += 1;
                            1
                        }
                        _ => return Err(self.error("expected `&`, `|` or `=>`")),
                    }
                };
                let right = self.formula()?;
                self.expect(b')')?;
                Ok(match op {
                    0 => left.and(right),
                    1 => left.or(right),
                    _ => left.implies(right),
                })
            }
            Some(b'~') => {
                self.pos += 1;
                Ok(self.formula()?.not())
            }
            Some(b'!') | Some(b'?') => {
                let existential = self.bytes[self.pos] == b'?';
                self.pos += 1;
                self.expect(b'[')?;
                let mut vars = vec![self.ident()?];
                loop {
                    self.skip_ws();
                    if self.bytes.get(self.pos) == Some(&b',') {
                        self.pos += 1;
                        vars.push(self.ident()?);
                    } else {
                        break;
                    }
                }
                self.expect(b']')?;
                self.expect(b':')?;
                let mut body = self.formula()?;
                for v in vars.into_iter().rev() {
                    body = if existential {
                        FOFormula::Exists(v, Box::new(body))
                    } else {
                        FOFormula::Forall(v, Box::new(body))
                    };
                }
                Ok(body)
            }
            Some(b'$') => {
                self.pos += 1;
                let word = self.ident()?;
                match word.as_str() {
                    "false" => Ok(FOFormula::False),
                    "true" => Ok(FOFormula::False.not()),
                    other => Err(self.error(&format!("unknown defined symbol ${other}"))),
                }
            }
            _ => {
                let name = self.ident()?;
                self.skip_ws();
                let mut args = Vec::new();
                if self.bytes.get(self.pos) == Some(&b'(') {
                    self.pos += 1;
                    loop {
                        let t = self.ident()?;
                        let term = if t.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
                            Term::Var(t)
                        } else {
                            Term::Const(t)
                        };
                        args.push(term);
                        self.skip_ws();
                        match self.bytes.get(self.pos) {
                            Some(b',') => self.pos += 1,
                            Some(b')') => {
                                self.pos += 1;
                                break;
                            }
                            _ => return Err(self.error("expected `,` or `)`")),
                        }
                    }
                }
                Ok(FOFormula::Atom { pred: name, args })
            }
        }
    }
}

/// Exports an SMT-LIB script asserting the formula over an uninterpreted
/// `World` sort, free variables declared as constants.
pub fn to_smtlib(formula: &FOFormula, logic_name: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("; logic: {logic_name}\n"));
    out.push_str("(set-logic UF)\n(declare-sort World 0)\n");
    for (pred, arity) in formula.predicates() {
        let sorts = vec!["World"; arity].join(" ");
        out.push_str(&format!("(declare-fun {pred} ({sorts}) Bool)\n"));
    }
    for v in formula.free_vars() {
        out.push_str(&format!("(declare-const {v} World)\n"));
    }
    for c in formula.constants() {
        out.push_str(&format!("(declare-const {c} World)\n"));
    }
    out.push_str(&format!("(assert {})\n(check-sat)\n", smt_formula(formula)));
    out
}

fn smt_formula(f: &FOFormula) -> String {
    match f {
        FOFormula::False => "false".to_string(),
        FOFormula::Atom { pred, args } => {
            if args.is_empty() {
                pred.clone()
            } else {
                let rendered: Vec<String> = args.iter().map(|t| t.name().to_string()).collect();
                format!("({pred} {})", rendered.join(" "))
            }
        }
        FOFormula::Not(a) => format!("(not {})", smt_formula(a)),
        FOFormula::And(a, b) => format!("(and {} {})", smt_formula(a), smt_formula(b)),
        FOFormula::Or(a, b) => format!("(or {} {})", smt_formula(a), smt_formula(b)),
        FOFormula::Implies(a, b) => format!("(=> {} {})", smt_formula(a), smt_formula(b)),
        FOFormula::Forall(x, a) => format!("(forall (({x} World)) {})", smt_formula(a)),
        FOFormula::Exists(x, a) => format!("(exists (({x} World)) {})", smt_formula(a)),
    }
}

/// A parsed SMT-LIB script in the fragment emitted by [`to_smtlib`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmtScript {
    pub predicates: Vec<(String, usize)>,
    pub constants: Vec<String>,
    pub assertion: FOFormula,
}

pub fn parse_smtlib(text: &str) -> Result<SmtScript, FolError> {
    let err = |at: usize, m: &str| FolError::Parse {
        format: "smtlib",
        at,
        message: m.to_string(),
    };
    let mut forms = Vec::new();
    let mut pos = 0usize;
    let bytes = text.as_bytes();
    while pos < bytes.len() {
        match bytes[pos] {
            b';' => {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            }
            b if b.is_ascii_whitespace() => pos += 1,
            _ => forms.push(read_sexp(bytes, &mut pos)?),
        }
    }
    let mut predicates = Vec::new();
    let mut constants = Vec::new();
    let mut assertion = None;
    for form in &forms {
        let Sexp::List(items) = form else {
            return Err(err(0, "top-level atoms are not expected"));
        };
        let head = match items.first() {
            Some(Sexp::Atom(a)) => a.as_str(),
            _ => return Err(err(0, "empty form")),
        };
        match head {
            "set-logic" | "declare-sort" | "check-sat" => {}
            "declare-fun" => {
                let name = atom_text(&items[1], &err)?;
                let Sexp::List(sorts) = &items[2] else {
                    return Err(err(0, "declare-fun expects a sort list"));
                };
                predicates.push((name, sorts.len()));
            }
            "declare-const" => constants.push(atom_text(&items[1], &err)?),
            "assert" => assertion = Some(sexp_to_formula(&items[1], &err)?),
            other => return Err(err(0, &format!("unknown form `{other}`"))),
        }
    }
    Ok(SmtScript {
        predicates,
        constants,
        assertion: assertion.ok_or_else(|| err(0, "missing assert"))?,
    })
}

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn read_sexp(bytes: &[u8], pos: &mut usize) -> Result<Sexp, FolError> {
    while bytes.get(*pos).is_some_and(|b| b.is_ascii_whitespace()) {
        *pos += 1;
    }
    match bytes.get(*pos) {
        Some(b'(') => {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                while bytes.get(*pos).is_some_and(|b| b.is_ascii_whitespace()) {
                    *pos += 1;
                }
                match bytes.get(*pos) {
                    Some(b')') => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(read_sexp(bytes, pos)?),
                    None => {
                        return Err(FolError::Parse {
                            format: "smtlib",
                            at: *pos,
                            message: "unclosed list".to_string(),
                        })
                    }
                }
            }
        }
        Some(_) => {
            let start = *pos;
            while bytes
                .get(*pos)
                .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'(' && *b != b')')
            {
                *pos += 1;
            }
            Ok(Sexp::Atom(
                std::str::from_utf8(&bytes[start..*pos])
                    .map_err(|_| FolError::Parse {
                        format: "smtlib",
                        at: start,
                        message: "non-utf8 atom".to_string(),
                    })?
                    .to_string(),
            ))
        }
        None => Err(FolError::Parse {
            format: "smtlib",
            at: *pos,
            message: "unexpected end of input".to_string(),
        }),
    }
}

fn atom_text(s: &Sexp, err: &impl Fn(usize, &str) -> FolError) -> Result<String, FolError> {
    match s {
        Sexp::Atom(a) => Ok(a.clone()),
        Sexp::List(_) => Err(err(0, "expected an atom")),
    }
}

fn sexp_to_formula(
    s: &Sexp,
    err: &impl Fn(usize, &str) -> FolError,
) -> Result<FOFormula, FolError> {
    match s {
        Sexp::Atom(a) if a == "false" => Ok(FOFormula::False),
        Sexp::Atom(a) if a == "true" => Ok(FOFormula::False.not()),
        Sexp::Atom(a) => Ok(FOFormula::Atom {
            pred: a.clone(),
            args: vec![],
        }),
        Sexp::List(items) => {
            let head = match items.first() {
                Some(Sexp::Atom(a)) => a.as_str(),
                _ => return Err(err(0, "empty formula")),
            };
            let binary = |ctor: fn(Box<FOFormula>, Box<FOFormula>) -> FOFormula| {
                if items.len() != 3 {
                    return Err(err(0, &format!("`{head}` expects two arguments")));
                }
                Ok(ctor(
                    Box::new(sexp_to_formula(&items[1], err)?),
                    Box::new(sexp_to_formula(&items[2], err)?),
                ))
            };
            match head {
                "and" => binary(FOFormula::And),
                "or" => binary(FOFormula::Or),
                "=>" => binary(FOFormula::Implies),
                "not" => Ok(sexp_to_formula(&items[1], err)?.not()),
                "forall" | "exists" => {
                    let Sexp::List(binders) = &items[1] else {
                        return Err(err(0, "quantifier expects a binder list"));
                    };
                    let mut body = sexp_to_formula(&items[2], err)?;
                    for b in binders.iter().rev() {
                        let Sexp::List(pair) = b else {
                            return Err(err(0, "binder must be (name sort)"));
                        };
                        let name = atom_text(&pair[0], err)?;
                        body = if head == "forall" {
                            FOFormula::Forall(name, Box::new(body))
                        } else {
                            FOFormula::Exists(name, Box::new(body))
                        };
                    }
                    Ok(body)
                }
                _ => {
                    let mut args = Vec::new();
                    for item in &items[1..] {
                        args.push(Term::Var(atom_text(item, err)?));
                    }
                    Ok(FOFormula::Atom {
                        pred: head.to_string(),
                        args,
                    })
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dia_p() -> FOFormula {
        FOFormula::Exists(
            "x1".into(),
            Box::new(
                FOFormula::atom("p", &["x1".into()])
                    .and(FOFormula::atom("r", &["x".into(), "x1".into()])),
            ),
        )
    }

    #[test]
    fn tptp_output_closes_free_variables() {
        let text = to_tptp(&dia_p(), "modal");
        assert!(text.contains("fof(f1, axiom, ![X]: ?[X1]: (p(X1) & r(X,X1)))."));
        let unit = parse_tptp(&text).unwrap();
        assert_eq!(unit.name, "f1");
        assert_eq!(unit.role, "axiom");
        let expected = FOFormula::Forall("X".into(), Box::new(tptp_normalize(&dia_p())));
        assert_eq!(unit.formula, expected);
    }

    #[test]
    fn false_exports_as_the_tptp_constant() {
        let text = to_tptp(&FOFormula::False, "modal");
        assert!(text.contains("$false"));
        assert_eq!(parse_tptp(&text).unwrap().formula, FOFormula::False);
    }

    #[test]
    fn smtlib_roundtrips_exactly() {
        let f = dia_p();
        let text = to_smtlib(&f, "modal");
        assert!(text.contains("(declare-sort World 0)"));
        assert!(text.contains("(declare-const x World)"));
        let script = parse_smtlib(&text).unwrap();
        assert_eq!(script.assertion, f);
        assert_eq!(
            script.predicates,
            vec![("p".to_string(), 1), ("r".to_string(), 2)]
        );
    }
}
