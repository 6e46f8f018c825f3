//! Parser and printer for the PlantUML class-diagram subset.
//!
//! The grammar is line oriented. Inside a class body a member line whose
//! parentheses are unbalanced is joined with the following physical lines
//! until they balance, which is how long method signatures get wrapped.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    is_identifier, is_multiplicity, Attribute, ClassDef, ClassModel, MacroAlias, Method, Parameter, Relationship,
    Visibility,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParseErrorKind {
    MissingStart,
    MissingEnd,
    BadMemberLine,
    BadRelationshipLine,
    BadClassHeader,
    UnbalancedBraces,
    UnknownDirective,
    /// Syntactically fine but violates a model invariant (duplicate class,
    /// unknown endpoint, generalization cycle, conflicting member).
    InvalidModel,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {kind:?}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, kind: ParseErrorKind, message: impl Into<String>) -> Self {
        Self {
            span: SourceSpan {
                line: line.max(1),
                column: column.max(1),
            },
            kind,
            message: message.into(),
        }
    }
}

/// One class-body line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Member {
    Attribute(Attribute),
    Method(Method),
}

struct Body {
    class_idx: usize,
    /// Last line that carried content for this class (header or member).
    last_content: usize,
}

pub fn parse(text: &str) -> Result<ClassModel, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut model = ClassModel::new();
    let mut rel_lines: Vec<(usize, usize)> = Vec::new();
    let mut started = false;
    let mut ended = false;
    let mut body: Option<Body> = None;

    let mut i = 0;
    while i < lines.len() {
        let lineno = i + 1;
        let raw = lines[i];
        let line = raw.trim();
        let col = indent_of(raw) + 1;
        i += 1;

        if !started {
            if is_start(line) {
                started = true;
            }
            continue;
        }
        if line.is_empty() || line.starts_with('\'') {
            continue;
        }

        if let Some(b) = &mut body {
            if line == "}" {
                body = None;
                continue;
            }
            if looks_structural(line, &model.macro_aliases) {
                return Err(unclosed(&model, b));
            }
            // Join wrapped signatures.
            let mut logical = line.to_owned();
            while paren_depth(&logical) > 0 {
                match lines.get(i).map(|l| l.trim()) {
                    Some(next) if next != "}" && !looks_structural(next, &model.macro_aliases) => {
                        logical.push(' ');
                        logical.push_str(next);
                        i += 1;
                    }
                    _ => {
                        return Err(ParseError::new(
                            lineno,
                            col,
                            ParseErrorKind::BadMemberLine,
                            "unbalanced parentheses in member",
                        ))
                    }
                }
            }
            let member = parse_member_line(&logical)
                .map_err(|(off, msg)| ParseError::new(lineno, col + off, ParseErrorKind::BadMemberLine, msg))?;
            push_member(&mut model.classes[b.class_idx], member)
                .map_err(|msg| ParseError::new(lineno, col, ParseErrorKind::InvalidModel, msg))?;
            b.last_content = i;
            continue;
        }

        if line.starts_with("@enduml") {
            ended = true;
            break;
        }
        if line.starts_with('@') {
            return Err(ParseError::new(
                lineno,
                col,
                ParseErrorKind::UnknownDirective,
                format!("unexpected `{line}`"),
            ));
        }
        if let Some(rest) = line.strip_prefix('!') {
            let alias = parse_define(rest).ok_or_else(|| {
                ParseError::new(
                    lineno,
                    col,
                    ParseErrorKind::UnknownDirective,
                    format!("only `!define <NAME> class` is supported, found `{line}`"),
                )
            })?;
            model.macro_aliases.push(alias);
            continue;
        }
        if line.starts_with('}') {
            return Err(ParseError::new(
                lineno,
                col,
                ParseErrorKind::UnbalancedBraces,
                "`}` without an open class body",
            ));
        }
        if starts_with_keyword(line, &model.macro_aliases) {
            let (name, open) =
                parse_class_header(line).map_err(|(kind, msg)| ParseError::new(lineno, col, kind, msg))?;
            if model.has_class(&name) {
                return Err(ParseError::new(
                    lineno,
                    col,
                    ParseErrorKind::InvalidModel,
                    format!("class `{name}` declared twice"),
                ));
            }
            model.classes.push(ClassDef::new(name));
            if open {
                body = Some(Body {
                    class_idx: model.classes.len() - 1,
                    last_content: lineno,
                });
            }
            continue;
        }
        let rel = parse_relationship_line(line)
            .map_err(|(off, msg)| ParseError::new(lineno, col + off, ParseErrorKind::BadRelationshipLine, msg))?;
        model.relationships.push(rel);
        rel_lines.push((lineno, col));
    }

    if !started {
        return Err(ParseError::new(
            1,
            1,
            ParseErrorKind::MissingStart,
            "no `@startuml` found",
        ));
    }
    if let Some(b) = &body {
        return Err(unclosed(&model, b));
    }
    if !ended {
        return Err(ParseError::new(
            lines.len() + 1,
            1,
            ParseErrorKind::MissingEnd,
            "no `@enduml` found",
        ));
    }

    // Endpoints may be declared after the relationship, so check at the end.
    let mut checked = ClassModel {
        classes: model.classes.clone(),
        relationships: Vec::new(),
        macro_aliases: Vec::new(),
    };
    for (rel, (line, col)) in model.relationships.iter().zip(&rel_lines) {
        checked
            .check_relationship(rel)
            .map_err(|e| ParseError::new(*line, *col, ParseErrorKind::InvalidModel, e.to_string()))?;
        checked.relationships.push(rel.clone());
    }
    Ok(model)
}

fn unclosed(model: &ClassModel, b: &Body) -> ParseError {
    ParseError::new(
        b.last_content + 1,
        1,
        ParseErrorKind::UnbalancedBraces,
        format!("class `{}` body is not closed", model.classes[b.class_idx].name),
    )
}

fn is_start(line: &str) -> bool {
    line == "@startuml" || line.starts_with("@startuml ")
}

fn indent_of(raw: &str) -> usize {
    raw.chars().take_while(|c| c.is_whitespace()).count()
}

fn paren_depth(s: &str) -> i32 {
    s.chars().fold(0, |d, c| match c {
        '(' => d + 1,
        ')' => d - 1,
        _ => d,
    })
}

fn first_word(line: &str) -> &str {
    line.split(|c: char| c.is_whitespace() || c == '{').next().unwrap_or("")
}

fn starts_with_keyword(line: &str, aliases: &[MacroAlias]) -> bool {
    let w = first_word(line);
    w == "class" || aliases.iter().any(|a| a.alias == w)
}

/// Lines that can only appear at top level.
fn looks_structural(line: &str, aliases: &[MacroAlias]) -> bool {
    line.starts_with('@')
        || line.starts_with('!')
        || line.contains("--")
        || (starts_with_keyword(line, aliases) && line.ends_with('{'))
}

fn parse_define(rest: &str) -> Option<MacroAlias> {
    let mut words = rest.split_whitespace();
    match (words.next(), words.next(), words.next(), words.next()) {
        (Some("define"), Some(alias), Some("class"), None) if is_identifier(alias) => Some(MacroAlias::class(alias)),
        _ => None,
    }
}

fn parse_class_header(line: &str) -> Result<(String, bool), (ParseErrorKind, String)> {
    let kw = first_word(line);
    let rest = line[kw.len()..].trim();
    let (name, tail) = match rest.find(|c: char| c.is_whitespace() || c == '{') {
        Some(p) => (&rest[..p], rest[p..].trim()),
        None => (rest, ""),
    };
    if !is_identifier(name) {
        return Err((
            ParseErrorKind::BadClassHeader,
            format!("expected a class name after `{kw}`"),
        ));
    }
    match tail {
        "{" => Ok((name.to_owned(), true)),
        "{}" | "{ }" => Ok((name.to_owned(), false)),
        "" => Err((
            ParseErrorKind::UnbalancedBraces,
            format!("expected `{{` after class `{name}`"),
        )),
        other => Err((
            ParseErrorKind::BadClassHeader,
            format!("unexpected `{other}` in declaration of `{name}`"),
        )),
    }
}

fn push_member(class: &mut ClassDef, member: Member) -> Result<(), String> {
    match member {
        Member::Attribute(a) => {
            if let Some(prev) = class.find_attribute(&a.name) {
                if *prev != a {
                    return Err(format!("attribute `{}` redeclared differently", a.name));
                }
            }
            class.attributes.push(a);
        }
        Member::Method(m) => {
            if let Some(prev) = class.find_method(&m.signature()) {
                if !prev.same_shape(&m) {
                    return Err(format!("method `{}` redeclared differently", m.signature()));
                }
            }
            class.methods.push(m);
        }
    }
    Ok(())
}

/// Byte cursor over one logical line. Errors carry the byte offset.
struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

type LineResult<T> = Result<T, (usize, String)>;

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Self { s, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn at_end(&self) -> bool {
        self.rest().trim().is_empty()
    }

    fn err<T>(&self, msg: impl Into<String>) -> LineResult<T> {
        Err((self.pos, msg.into()))
    }

    fn ident(&mut self, what: &str) -> LineResult<String> {
        let r = self.rest();
        let len = r
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_alphanumeric() || c == '_') || (i == 0 && c.is_ascii_digit()))
            .map(|(i, _)| i)
            .unwrap_or(r.len());
        if len == 0 {
            return self.err(format!("expected {what}"));
        }
        self.pos += len;
        Ok(r[..len].to_owned())
    }

    fn quoted(&mut self) -> LineResult<Option<String>> {
        if !self.eat("\"") {
            return Ok(None);
        }
        let start = self.pos;
        match self.rest().find('"') {
            Some(end) => {
                let v = self.s[start..start + end].to_owned();
                self.pos += end + 1;
                if !is_multiplicity(&v) {
                    return Err((start, format!("invalid multiplicity `{v}`")));
                }
                Ok(Some(v))
            }
            None => self.err("unterminated multiplicity"),
        }
    }
}

/// Parses one (already joined) class-body line. On failure returns the byte
/// offset of the problem within `line` and a message.
pub fn parse_member_line(line: &str) -> Result<Member, (usize, String)> {
    let mut c = Cursor::new(line);
    c.skip_ws();
    let visibility = match c.rest().chars().next().and_then(Visibility::from_marker) {
        Some(v) => {
            c.pos += 1;
            v
        }
        None => Visibility::Public,
    };
    c.skip_ws();
    let name = c.ident("member name")?;
    c.skip_ws();
    if c.eat("(") {
        let mut params = Vec::new();
        c.skip_ws();
        if !c.eat(")") {
            loop {
                c.skip_ws();
                let pname = c.ident("parameter name")?;
                c.skip_ws();
                if !c.eat(":") {
                    return c.err(format!("expected `:` after parameter `{pname}`"));
                }
                c.skip_ws();
                let ptype = c.ident("parameter type")?;
                if params.iter().any(|p: &Parameter| p.name == pname) {
                    return c.err(format!("parameter `{pname}` repeated"));
                }
                params.push(Parameter::new(pname, ptype));
                c.skip_ws();
                if c.eat(")") {
                    break;
                }
                if !c.eat(",") {
                    return c.err("expected `,` or `)`");
                }
            }
        }
        c.skip_ws();
        let return_type = if c.at_end() {
            "void".to_owned()
        } else {
            if !c.eat(":") {
                return c.err("expected `:` before return type");
            }
            c.skip_ws();
            c.ident("return type")?
        };
        if !c.at_end() {
            return c.err("unexpected text after method");
        }
        Ok(Member::Method(Method {
            visibility,
            name,
            params,
            return_type,
            provenance: None,
        }))
    } else {
        if !c.eat(":") {
            return c.err(format!("expected `:` after attribute `{name}`"));
        }
        c.skip_ws();
        let type_name = c.ident("attribute type")?;
        if !c.at_end() {
            return c.err("unexpected text after attribute type");
        }
        Ok(Member::Attribute(Attribute {
            visibility,
            name,
            type_name,
        }))
    }
}

/// Parses one relationship statement: `A --|> B`, `B <|-- A`, or
/// `A "m" -- "n" B : label`.
pub fn parse_relationship_line(line: &str) -> Result<Relationship, (usize, String)> {
    let mut c = Cursor::new(line);
    c.skip_ws();
    let left = c.ident("class name")?;
    c.skip_ws();
    let left_mult = c.quoted()?;
    c.skip_ws();
    let arrow_at = c.pos;
    let arrow = if c.eat("--|>") {
        "--|>"
    } else if c.eat("<|--") {
        "<|--"
    } else if c.eat("--") {
        "--"
    } else {
        return c.err("expected `--`, `--|>` or `<|--`");
    };
    c.skip_ws();
    let right_mult = c.quoted()?;
    c.skip_ws();
    let right = c.ident("class name")?;
    c.skip_ws();
    let label = if c.at_end() {
        None
    } else {
        if !c.eat(":") {
            return c.err("expected `:` before label");
        }
        let l = c.rest().trim();
        if l.is_empty() {
            return c.err("empty label");
        }
        Some(l.to_owned())
    };

    if arrow == "--" {
        match (left_mult, right_mult) {
            (Some(source_mult), Some(target_mult)) => Ok(Relationship::Association {
                source: left,
                source_mult,
                target: right,
                target_mult,
                label,
            }),
            _ => Err((arrow_at, "association needs a multiplicity on both ends".into())),
        }
    } else {
        if left_mult.is_some() || right_mult.is_some() || label.is_some() {
            return Err((arrow_at, "generalization takes no multiplicities or label".into()));
        }
        let (child, parent) = if arrow == "--|>" { (left, right) } else { (right, left) };
        Ok(Relationship::Generalization { child, parent })
    }
}

fn class_keyword(model: &ClassModel) -> &str {
    model
        .macro_aliases
        .iter()
        .find(|a| a.keyword == "class")
        .map(|a| a.alias.as_str())
        .unwrap_or("class")
}

fn method_line(m: &Method) -> String {
    format!("{}{}", m.visibility.marker(), m)
}

/// Prints the model in model order: directives, classes, generalizations,
/// then associations. Output always uses LF line endings.
pub fn print(model: &ClassModel) -> String {
    let mut out = String::from("@startuml\n");
    for a in &model.macro_aliases {
        out.push_str(&format!("!define {} {}\n", a.alias, a.keyword));
    }
    let kw = class_keyword(model);
    if !model.classes.is_empty() {
        out.push('\n');
        for c in &model.classes {
            out.push_str(&format!("{kw} {} {{\n", c.name));
            for a in &c.attributes {
                out.push_str(&format!("    {a}\n"));
            }
            for m in &c.methods {
                out.push_str(&format!("    {}\n", method_line(m)));
            }
            out.push_str("}\n");
        }
    }
    for group in [
        model.generalizations().collect::<Vec<_>>(),
        model.associations().collect::<Vec<_>>(),
    ] {
        if !group.is_empty() {
            out.push('\n');
            for r in group {
                out.push_str(&format!("{r}\n"));
            }
        }
    }
    out.push_str("@enduml\n");
    out
}

/// Prints the canonical form: classes sorted by name, members deduplicated
/// and sorted, relationships sorted. Canonically equal models print
/// byte-identical text.
pub fn print_canonical(model: &ClassModel) -> String {
    let canon = model.canonical();
    let sorted = ClassModel {
        classes: canon
            .classes
            .into_iter()
            .map(|(name, c)| ClassDef {
                name,
                attributes: c.attributes.into_iter().collect(),
                methods: c.methods.into_iter().collect(),
            })
            .collect(),
        relationships: canon.relationships,
        macro_aliases: canon.aliases.into_iter().collect(),
    };
    print(&sorted)
}

/// Parses a single member signature such as `+f(a: T): R` into a method.
pub fn parse_method(text: &str) -> Result<Method, String> {
    match parse_member_line(text.trim()) {
        Ok(Member::Method(m)) => Ok(m),
        Ok(Member::Attribute(_)) => Err(format!("`{text}` is an attribute, not a method")),
        Err((_, msg)) => Err(msg),
    }
}

pub fn parse_attribute(text: &str) -> Result<Attribute, String> {
    match parse_member_line(text.trim()) {
        Ok(Member::Attribute(a)) => Ok(a),
        Ok(Member::Method(_)) => Err(format!("`{text}` is a method, not an attribute")),
        Err((_, msg)) => Err(msg),
    }
}

pub fn parse_relationship(text: &str) -> Result<Relationship, String> {
    parse_relationship_line(text.trim()).map_err(|(_, msg)| msg)
}
