//! Typed formulas over a connective set, with the outermost-connective
//! Boolean negation and a canonical pretty-printer.

use std::fmt;

use crate::connective::{ConnKind, ConnectiveSet};
use crate::error::FormulaError;
use crate::skeleton::AtomicSkeleton;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoolOp {
    And,
    Or,
}

impl fmt::Display for BoolOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoolOp::And => "&",
            BoolOp::Or => "|",
        })
    }
}

/// A formula node. `neg` marks outermost Boolean negation of the letter or
/// connective underneath; it never applies to conjunctions or disjunctions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Letter {
        name: String,
        neg: bool,
    },
    Bool {
        op: BoolOp,
        ty: u32,
        args: Box<(Formula, Formula)>,
    },
    Apply {
        name: String,
        neg: bool,
        args: Vec<Formula>,
    },
}

impl Formula {
    pub fn letter(name: &str) -> Formula {
        Formula::Letter {
            name: name.to_string(),
            neg: false,
        }
    }

    pub fn apply(name: &str, args: Vec<Formula>) -> Formula {
        Formula::Apply {
            name: name.to_string(),
            neg: false,
            args,
        }
    }

    pub fn and(self, other: Formula, ty: u32) -> Formula {
        Formula::Bool {
            op: BoolOp::And,
            ty,
            args: Box::new((self, other)),
        }
    }

    pub fn or(self, other: Formula, ty: u32) -> Formula {
        Formula::Bool {
            op: BoolOp::Or,
            ty,
            args: Box::new((self, other)),
        }
    }

    /// Output type, assuming the formula was checked against `set`.
    pub fn ty(&self, set: &ConnectiveSet) -> Result<u32, FormulaError> {
        match self {
            Formula::Letter { name, .. } => set
                .skeleton_of(name)
                .map(|s| s.output_type())
                .ok_or_else(|| FormulaError::Unknown(name.clone())),
            Formula::Bool { ty, .. } => Ok(*ty),
            Formula::Apply { name, .. } => match set.kind_of(name) {
                Some(ConnKind::Atomic) => Ok(set.skeleton_of(name).unwrap().output_type()),
                Some(ConnKind::Molecular) => Ok(set.molecular(name).unwrap().type_sig().output),
                _ => Err(FormulaError::Unknown(name.clone())),
            },
        }
    }

    /// Depth of connective nesting: letters are 0, every Boolean or
    /// connective application adds one level.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Letter { .. } => 0,
            Formula::Bool { args, .. } => 1 + args.0.depth().max(args.1.depth()),
            Formula::Apply { args, .. } => {
                1 + args.iter().map(Formula::depth).max().unwrap_or(0)
            }
        }
    }

    /// Full type check against a connective set; returns the output type.
    pub fn check(&self, set: &ConnectiveSet) -> Result<u32, FormulaError> {
        match self {
            Formula::Letter { name, .. } => {
                if set.kind_of(name) != Some(ConnKind::Letter) {
                    return Err(FormulaError::Unknown(name.clone()));
                }
                Ok(set.skeleton_of(name).unwrap().output_type())
            }
            Formula::Bool { op: _, ty, args } => {
                let left = args.0.check(set)?;
                let right = args.1.check(set)?;
                if left != right {
                    return Err(FormulaError::BoolType { left, right });
                }
                if left != *ty {
                    return Err(FormulaError::BoolType { left, right: *ty });
                }
                Ok(*ty)
            }
            Formula::Apply { name, args, .. } => {
                let (arity, inputs, output) = match set.kind_of(name) {
                    Some(ConnKind::Atomic) => {
                        let s = set.skeleton_of(name).unwrap();
                        (s.arity(), s.type_sig.inputs.clone(), s.output_type())
                    }
                    Some(ConnKind::Molecular) => {
                        let sig = set.molecular(name).unwrap().type_sig();
                        (sig.arity(), sig.inputs.clone(), sig.output)
                    }
                    _ => return Err(FormulaError::Unknown(name.clone())),
                };
                if args.len() != arity {
                    return Err(FormulaError::Arity {
                        name: name.clone(),
                        expected: arity,
                        got: args.len(),
                    });
                }
                for (j, arg) in args.iter().enumerate() {
                    let got = arg.check(set)?;
                    if got != inputs[j] {
                        return Err(FormulaError::ArgType {
                            name: name.clone(),
                            position: j + 1,
                            expected: inputs[j],
                            got,
                        });
                    }
                }
                Ok(output)
            }
        }
    }

    /// Effective skeleton of the outermost letter or atomic application,
    /// with the negation marker applied. `None` for Booleans and moleculars.
    pub fn head_skeleton(&self, set: &ConnectiveSet) -> Option<AtomicSkeleton> {
        match self {
            Formula::Letter { name, neg } | Formula::Apply { name, neg, .. } => {
                let s = set.skeleton_of(name)?;
                Some(if *neg { s.negated() } else { s.clone() })
            }
            Formula::Bool { .. } => None,
        }
    }
}

/// Boolean negation of a formula: replaces only the outermost skeleton by its
/// Boolean negation (an involution on the marker). Rejected on conjunctions
/// and disjunctions, which carry no skeleton.
pub fn negate(formula: &Formula) -> Result<Formula, FormulaError> {
    match formula {
        Formula::Letter { name, neg } => Ok(Formula::Letter {
            name: name.clone(),
            neg: !neg,
        }),
        Formula::Apply { name, neg, args } => Ok(Formula::Apply {
            name: name.clone(),
            neg: !neg,
            args: args.clone(),
        }),
        Formula::Bool { .. } => Err(FormulaError::NegateBoolean),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Letter { name, neg } => {
                if *neg {
                    write!(f, "-")?;
                }
                f.write_str(name)
            }
            Formula::Bool { op, args, .. } => {
                write!(f, "({} {op} {})", args.0, args.1)
            }
            Formula::Apply { name, neg, args } => {
                if *neg {
                    write!(f, "-")?;
                }
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Parses the formula grammar
///
/// ```text
/// f ::= <letter> | <name>(f, .., f) | (f & f) | (f | f) | -f
/// ```
///
/// type-checking the result against `set`.
pub fn parse(text: &str, set: &ConnectiveSet) -> Result<Formula, FormulaError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        set,
    };
    p.skip_ws();
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error("trailing input"));
    }
    f.check(set)?;
    Ok(f)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    set: &'a ConnectiveSet,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> FormulaError {
        FormulaError::Parse {
            at: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> Result<(), FormulaError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", b as char)))
        }
    }

    fn ident(&mut self) -> Result<String, FormulaError> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_')
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

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        self.skip_ws();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let inner = self.formula()?;
                negate(&inner)
            }
            Some(b'(') => {
                self.pos += 1;
                let left = self.formula()?;
                self.skip_ws();
                let op = match self.peek() {
                    Some(b'&') => BoolOp::And,
                    Some(b'|') => BoolOp::Or,
                    _ => return Err(self.error("expected `&` or `|`")),
                };
                self.pos += 1;
                let right = self.formula()?;
                self.skip_ws();
                self.eat(b')')?;
                let lt = left.check(self.set)?;
                let rt = right.check(self.set)?;
                if lt != rt {
                    return Err(FormulaError::BoolType { left: lt, right: rt });
                }
                Ok(Formula::Bool {
                    op,
                    ty: lt,
                    args: Box::new((left, right)),
                })
            }
            Some(b) if b.is_ascii_alphanumeric() || b == b'_' => {
                let name = self.ident()?;
                self.skip_ws();
                if self.peek() == Some(b'(') {
                    self.pos += 1;
                    let mut args = Vec::new();
                    loop {
                        args.push(self.formula()?);
                        self.skip_ws();
                        match self.peek() {
                            Some(b',') => {
                                self.pos += 1;
                            }
                            Some(b')') => {
                                self.pos += 1;
                                break;
                            }
                            _ => return Err(self.error("expected `,` or `)`")),
                        }
                    }
                    Ok(Formula::Apply {
                        name,
                        neg: false,
                        args,
                    })
                } else {
                    Ok(Formula::Letter { name, neg: false })
                }
            }
            _ => Err(self.error("expected a formula")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;
    use crate::skeleton::{Quant, Sign, TypeSig};

    fn modal_set() -> ConnectiveSet {
        let mut set = ConnectiveSet::new();
        set.add_letter("p", AtomicSkeleton::letter(Sign::Pos, Quant::Ex, 1))
            .unwrap();
        set.add_letter("q2", AtomicSkeleton::letter(Sign::Pos, Quant::Ex, 2))
            .unwrap();
        set.add_atomic(
            "dia",
            AtomicSkeleton::new(
                Permutation::new(vec![2, 1]).unwrap(),
                Sign::Pos,
                Quant::Ex,
                TypeSig::new(1, vec![1]),
                vec![Sign::Pos],
            )
            .unwrap(),
        )
        .unwrap();
        set.add_atomic(
            "box",
            AtomicSkeleton::new(
                Permutation::new(vec![2, 1]).unwrap(),
                Sign::Neg,
                Quant::All,
                TypeSig::new(1, vec![1]),
                vec![Sign::Pos],
            )
            .unwrap(),
        )
        .unwrap();
        set.add_boolean(1);
        set
    }

    #[test]
    fn parses_application_and_booleans() {
        let set = modal_set();
        let f = parse("dia(p)", &set).unwrap();
        assert_eq!(f, Formula::apply("dia", vec![Formula::letter("p")]));
        assert_eq!(f.ty(&set).unwrap(), 1);

        let g = parse("(p & box(p))", &set).unwrap();
        assert_eq!(
            g,
            Formula::letter("p").and(Formula::apply("box", vec![Formula::letter("p")]), 1)
        );
    }

    #[test]
    fn type_errors_are_reported() {
        let set = modal_set();
        match parse("box(q2)", &set) {
            Err(FormulaError::ArgType {
                expected: 1,
                got: 2,
                ..
            }) => {}
            other => panic!("expected a type error, got {other:?}"),
        }
        assert!(matches!(
            parse("dia(p, p)", &set),
            Err(FormulaError::Arity { .. })
        ));
        assert!(matches!(
            parse("zap(p)", &set),
            Err(FormulaError::Unknown(_))
        ));
    }

    #[test]
    fn negation_toggles_the_marker_and_rejects_booleans() {
        let set = modal_set();
        let f = parse("-dia(p)", &set).unwrap();
        assert_eq!(
            f,
            Formula::Apply {
                name: "dia".into(),
                neg: true,
                args: vec![Formula::letter("p")]
            }
        );
        let skel = f.head_skeleton(&set).unwrap();
        assert_eq!(skel.sign, Sign::Neg);
        assert_eq!(skel.quant, Quant::All);
        assert_eq!(skel.tonicity, vec![Sign::Neg]);

        assert_eq!(negate(&f).unwrap(), parse("dia(p)", &set).unwrap());
        assert!(matches!(
            parse("-(p & p)", &set),
            Err(FormulaError::NegateBoolean)
        ));
    }

    #[test]
    fn negating_a_letter_gives_the_dual_letter_skeleton() {
        let set = modal_set();
        let np = negate(&Formula::letter("p")).unwrap();
        let skel = np.head_skeleton(&set).unwrap();
        assert_eq!(skel, AtomicSkeleton::letter(Sign::Neg, Quant::All, 1));
    }

    #[test]
    fn display_uses_canonical_spacing() {
        let set = modal_set();
        let f = parse(" ( p &  dia( p ) ) ", &set).unwrap();
        assert_eq!(f.to_string(), "(p & dia(p))");
        assert_eq!(parse(&f.to_string(), &set).unwrap(), f);
    }
}
