//! The line-oriented logic-spec text format.
//!
//! ```text
//! # comments run to end of line
//! letter p    : sign +, quant E, type 1
//! conn dia    : perm (2,1), sign +, quant E, types (1;1), tonicity (+)
//! skel c1     : perm (2,1), sign -, quant A, types (1;1), tonicity (+)
//! molecular c := c1(c2)
//! bool 1
//! share r dia box
//! ```
//!
//! `letter`/`conn` declare members of the language, `skel` declares a
//! label-only skeleton usable inside decomposition trees. Molecular trees
//! take `id<k>` leaves, letter names, `-`-negated labels, and bare atomic
//! names (which are filled with `id` leaves). In a `share` line the first
//! token names the relation group when it is not a declared connective;
//! otherwise the group is labelled by its first member.

use crate::connective::{ConnKind, ConnectiveSet, TreeNode};
use crate::error::FileError;
use crate::perm::Permutation;
use crate::skeleton::{AtomicSkeleton, Quant, Sign, TypeSig};

pub fn parse_logic(text: &str) -> Result<ConnectiveSet, FileError> {
    let mut set = ConnectiveSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let err = |message: String| FileError::new(lineno, message);
        match keyword {
            "letter" => {
                let (name, spec) = split_decl(rest, ":").map_err(&err)?;
                check_name(&name).map_err(&err)?;
                let fields = Fields::parse(&spec).map_err(&err)?;
                let sign = fields.sign("sign").map_err(&err)?;
                let quant = fields.quant("quant").map_err(&err)?;
                let ty = fields.number("type").map_err(&err)?;
                fields.no_extra(&["sign", "quant", "type"]).map_err(&err)?;
                set.add_letter(&name, AtomicSkeleton::letter(sign, quant, ty))
                    .map_err(|e| err(e.to_string()))?;
            }
            "conn" | "skel" => {
                let (name, spec) = split_decl(rest, ":").map_err(&err)?;
                check_name(&name).map_err(&err)?;
                let fields = Fields::parse(&spec).map_err(&err)?;
                let perm = Permutation::new(fields.number_list("perm", ",").map_err(&err)?)
                    .map_err(|e| err(e.to_string()))?;
                let sign = fields.sign("sign").map_err(&err)?;
                let quant = fields.quant("quant").map_err(&err)?;
                let types = fields.u32_list("types", ";").map_err(&err)?;
                if types.len() < 2 {
                    return Err(err("`types` needs an output and at least one input".into()));
                }
                let tonicity = fields.sign_list("tonicity").map_err(&err)?;
                fields
                    .no_extra(&["perm", "sign", "quant", "types", "tonicity"])
                    .map_err(&err)?;
                let skel = AtomicSkeleton::new(
                    perm,
                    sign,
                    quant,
                    TypeSig::new(types[0], types[1..].to_vec()),
                    tonicity,
                )
                .map_err(|e| err(e.to_string()))?;
                if keyword == "conn" {
                    set.add_atomic(&name, skel).map_err(|e| err(e.to_string()))?;
                } else {
                    set.add_hidden(&name, skel).map_err(|e| err(e.to_string()))?;
                }
            }
            "molecular" => {
                let (name, tree_text) = split_decl(rest, ":=").map_err(&err)?;
                check_name(&name).map_err(&err)?;
                let tree = parse_tree(&tree_text, &set).map_err(&err)?;
                set.add_molecular(&name, tree)
                    .map_err(|e| err(e.to_string()))?;
            }
            "bool" => {
                let ty: u32 = rest
                    .parse()
                    .map_err(|_| err(format!("`bool` expects a type, got `{rest}`")))?;
                if ty == 0 {
                    return Err(err("types must be positive".into()));
                }
                set.add_boolean(ty);
            }
            "share" => {
                let names: Vec<&str> = rest.split_whitespace().collect();
                if names.len() < 2 {
                    return Err(err("`share` expects at least two names".into()));
                }
                set.share(&names).map_err(|e| err(e.to_string()))?;
            }
            other => {
                return Err(err(format!("unknown directive `{other}`")));
            }
        }
    }
    set.validate()
        .map_err(|errs| FileError::new(0, errs[0].to_string()))?;
    Ok(set)
}

fn check_name(name: &str) -> Result<(), String> {
    let mut chars = name.chars();
    let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !ok {
        return Err(format!("`{name}` is not a valid name"));
    }
    if name.strip_prefix("id").is_some_and(|s| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())) {
        return Err(format!("`{name}` is reserved for id leaves"));
    }
    Ok(())
}

fn split_decl(rest: &str, sep: &str) -> Result<(String, String), String> {
    let (name, spec) = rest
        .split_once(sep)
        .ok_or_else(|| format!("expected `<name> {sep} ...`"))?;
    Ok((name.trim().to_string(), spec.trim().to_string()))
}

/// Comma-separated `key value` fields, where parenthesized values may contain
/// commas themselves.
struct Fields {
    entries: Vec<(String, String)>,
}

impl Fields {
    fn parse(spec: &str) -> Result<Fields, String> {
        let mut entries = Vec::new();
        let mut depth = 0usize;
        let mut current = String::new();
        let mut parts = Vec::new();
        for c in spec.chars() {
            match c {
                '(' => {
                    depth += 1;
                    current.push(c);
                }
                ')' => {
                    depth = depth
                        .checked_sub(1)
                        .ok_or_else(|| "unbalanced parentheses".to_string())?;
                    current.push(c);
                }
                ',' if depth == 0 => {
                    parts.push(std::mem::take(&mut current));
                }
                _ => current.push(c),
            }
        }
        if depth != 0 {
            return Err("unbalanced parentheses".into());
        }
        parts.push(current);
        for part in parts {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, value) = part
                .split_once(char::is_whitespace)
                .ok_or_else(|| format!("expected `key value`, got `{part}`"))?;
            entries.push((key.trim().to_string(), value.trim().to_string()));
        }
        Ok(Fields { entries })
    }

    fn get(&self, key: &str) -> Result<&str, String> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| format!("missing field `{key}`"))
    }

    fn no_extra(&self, allowed: &[&str]) -> Result<(), String> {
        for (k, _) in &self.entries {
            if !allowed.contains(&k.as_str()) {
                return Err(format!("unknown field `{k}`"));
            }
        }
        Ok(())
    }

    fn sign(&self, key: &str) -> Result<Sign, String> {
        match self.get(key)? {
            "+" => Ok(Sign::Pos),
            "-" => Ok(Sign::Neg),
            other => Err(format!("field `{key}`: expected `+` or `-`, got `{other}`")),
        }
    }

    fn quant(&self, key: &str) -> Result<Quant, String> {
        match self.get(key)? {
            "A" => Ok(Quant::All),
            "E" => Ok(Quant::Ex),
            other => Err(format!("field `{key}`: expected `A` or `E`, got `{other}`")),
        }
    }

    fn number(&self, key: &str) -> Result<u32, String> {
        self.get(key)?
            .parse()
            .map_err(|_| format!("field `{key}`: expected a number"))
    }

    fn paren_items<'a>(&'a self, key: &str, sep: &str) -> Result<Vec<&'a str>, String> {
        let v = self.get(key)?;
        let inner = v
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| format!("field `{key}`: expected a parenthesized list"))?;
        Ok(inner.split(sep).map(str::trim).collect())
    }

    fn number_list(&self, key: &str, sep: &str) -> Result<Vec<u8>, String> {
        self.paren_items(key, sep)?
            .iter()
            .map(|s| {
                s.parse()
                    .map_err(|_| format!("field `{key}`: `{s}` is not a number"))
            })
            .collect()
    }

    fn u32_list(&self, key: &str, sep: &str) -> Result<Vec<u32>, String> {
        self.paren_items(key, sep)?
            .iter()
            .map(|s| {
                s.parse()
                    .map_err(|_| format!("field `{key}`: `{s}` is not a number"))
            })
            .collect()
    }

    fn sign_list(&self, key: &str) -> Result<Vec<Sign>, String> {
        self.paren_items(key, ",")?
            .iter()
            .map(|s| match *s {
                "+" => Ok(Sign::Pos),
                "-" => Ok(Sign::Neg),
                other => Err(format!("field `{key}`: expected `+` or `-`, got `{other}`")),
            })
            .collect()
    }
}

/// Parses a decomposition tree term: `label(child, ..)`, `-label(..)`,
/// `id<k>`, a letter name, or a bare atomic name which is expanded with `id`
/// leaves matching its arity.
fn parse_tree(text: &str, set: &ConnectiveSet) -> Result<TreeNode, String> {
    let mut p = TreeParser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let node = p.term(set)?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err("trailing input after tree".into());
    }
    Ok(node)
}

struct TreeParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> TreeParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<String, String> {
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
            return Err("expected a name in the tree".into());
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii")
            .to_string())
    }

    fn term(&mut self, set: &ConnectiveSet) -> Result<TreeNode, String> {
        self.skip_ws();
        let negated = if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let name = self.ident()?;
        if let Some(digits) = name.strip_prefix("id") {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                if negated {
                    return Err("id leaves cannot be negated".into());
                }
                let ty: u32 = digits.parse().map_err(|_| "bad id type".to_string())?;
                if ty == 0 {
                    return Err("types must be positive".into());
                }
                return Ok(TreeNode::Id { ty });
            }
        }
        self.skip_ws();
        let children = if self.bytes.get(self.pos) == Some(&b'(') {
            self.pos += 1;
            let mut children = Vec::new();
            loop {
                children.push(self.term(set)?);
                self.skip_ws();
                match self.bytes.get(self.pos) {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err("expected `,` or `)` in tree".into()),
                }
            }
            Some(children)
        } else {
            None
        };
        match set.kind_of(&name) {
            Some(ConnKind::Letter) => {
                if negated || children.is_some() {
                    return Err(format!("letter `{name}` takes no arguments in a tree"));
                }
                Ok(TreeNode::Letter { name })
            }
            Some(ConnKind::Atomic) | Some(ConnKind::Hidden) => {
                let skel = set.skeleton_of(&name).unwrap();
                let children = children.unwrap_or_else(|| {
                    skel.type_sig
                        .inputs
                        .iter()
                        .map(|&ty| TreeNode::Id { ty })
                        .collect()
                });
                Ok(TreeNode::Apply {
                    label: name,
                    negated,
                    children,
                })
            }
            Some(ConnKind::Molecular) => Err(format!(
                "`{name}` is molecular; decomposition trees are built from atomic labels"
            )),
            None => Err(format!("unknown tree label `{name}`")),
        }
    }
}

/// Serializes a connective set back to the logic-spec format. Parsing the
/// result reproduces the set.
pub fn logic_to_text(set: &ConnectiveSet) -> String {
    let mut out = String::new();
    for name in set.names() {
        match set.kind_of(name).unwrap() {
            ConnKind::Letter => {
                let s = set.skeleton_of(name).unwrap();
                out.push_str(&format!(
                    "letter {name} : sign {}, quant {}, type {}\n",
                    s.sign,
                    s.quant,
                    s.output_type()
                ));
            }
            ConnKind::Hidden => {
                let s = set.skeleton_of(name).unwrap();
                out.push_str(&format!("skel {name} : {}\n", skeleton_fields(s)));
            }
            ConnKind::Atomic => {
                let s = set.skeleton_of(name).unwrap();
                out.push_str(&format!("conn {name} : {}\n", skeleton_fields(s)));
            }
            ConnKind::Molecular => {
                let m = set.molecular(name).unwrap();
                out.push_str(&format!(
                    "molecular {} := {}\n",
                    m.name,
                    tree_to_text(&m.tree)
                ));
            }
        }
    }
    for ty in set.booleans() {
        out.push_str(&format!("bool {ty}\n"));
    }
    for (label, members) in set.shares() {
        if members.first().map(String::as_str) == Some(label.as_str()) {
            out.push_str(&format!("share {}\n", members.join(" ")));
        } else {
            out.push_str(&format!("share {label} {}\n", members.join(" ")));
        }
    }
    out
}

fn skeleton_fields(s: &AtomicSkeleton) -> String {
    let types: Vec<String> = std::iter::once(s.type_sig.output)
        .chain(s.type_sig.inputs.iter().copied())
        .map(|k| k.to_string())
        .collect();
    let ton: Vec<String> = s.tonicity.iter().map(|t| t.to_string()).collect();
    format!(
        "perm {}, sign {}, quant {}, types ({}), tonicity ({})",
        s.perm,
        s.sign,
        s.quant,
        types.join(";"),
        ton.join(",")
    )
}

pub fn tree_to_text(node: &TreeNode) -> String {
    match node {
        TreeNode::Id { ty } => format!("id{ty}"),
        TreeNode::Letter { name } => name.clone(),
        TreeNode::Apply {
            label,
            negated,
            children,
        } => {
            let args: Vec<String> = children.iter().map(tree_to_text).collect();
            format!(
                "{}{label}({})",
                if *negated { "-" } else { "" },
                args.join(", ")
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MODAL: &str = "\
# modal logic
letter p  : sign +, quant E, type 1
letter np : sign -, quant A, type 1
conn dia  : perm (2,1), sign +, quant E, types (1;1), tonicity (+)
conn box  : perm (2,1), sign -, quant A, types (1;1), tonicity (+)
bool 1
share p np
share r dia box
";

    #[test]
    fn parses_the_modal_declaration() {
        let set = parse_logic(MODAL).unwrap();
        assert_eq!(set.letters().count(), 2);
        assert_eq!(set.group_of("box"), Some("r"));
        assert_eq!(set.group_of("np"), Some("p"));
        assert!(set.has_boolean(1));
        let dia = set.skeleton_of("dia").unwrap();
        assert_eq!(dia.perm, Permutation::new(vec![2, 1]).unwrap());
        assert_eq!(dia.quant, Quant::Ex);
    }

    #[test]
    fn roundtrips_through_serialization() {
        let set = parse_logic(MODAL).unwrap();
        let text = logic_to_text(&set);
        let reparsed = parse_logic(&text).unwrap();
        assert_eq!(set, reparsed);
    }

    #[test]
    fn parses_molecular_declarations_with_bare_and_negated_labels() {
        let text = "\
letter p : sign +, quant E, type 1
skel c1 : perm (2,1), sign -, quant A, types (1;1), tonicity (+)
skel c3 : perm (2,1), sign +, quant E, types (1;1), tonicity (+)
molecular c := c1(c3)
molecular nc := -c1(c3(id1))
";
        let set = parse_logic(text).unwrap();
        let c = set.molecular("c").unwrap();
        assert_eq!(tree_to_text(&c.tree), "c1(c3(id1))");
        let nc = set.molecular("nc").unwrap();
        assert_eq!(tree_to_text(&nc.tree), "-c1(c3(id1))");
        let text2 = logic_to_text(&set);
        assert_eq!(parse_logic(&text2).unwrap(), set);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "letter p : sign +, quant E, type 1\nconn bad : perm (2,1), sign +, quant E, types (1;1;1), tonicity (+,+)\n";
        let err = parse_logic(text).unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn reserved_id_names_are_rejected() {
        let err = parse_logic("letter id1 : sign +, quant E, type 1\n").unwrap_err();
        assert!(err.message.contains("reserved"));
    }
}
