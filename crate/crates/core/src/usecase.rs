//! Use-case tables written as Markdown.
//!
//! A use case is a level-2 heading `## UC<n>: <title>` followed by a
//! two-column `| Attribute | Details |` table. List cells separate items
//! with `<br>` and may number (`1.`) or bullet (`-`) them.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UseCaseError {
    #[error("missing `## UC<n>: <title>` heading")]
    MissingHeading,
    #[error("invalid use-case id `{0}`")]
    InvalidId(String),
    #[error("missing required row `{0}`")]
    Schema(String),
    #[error("row `{0}` appears more than once")]
    DuplicateKey(String),
    #[error("unknown row `{0}`")]
    UnknownKey(String),
    #[error("line {0}: table rows need exactly two cells")]
    MalformedRow(usize),
    #[error("row `{0}` must not be empty")]
    EmptyField(String),
    #[error("heading title `{heading}` does not match `Use Case` row `{row}`")]
    TitleMismatch { heading: String, row: String },
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: UseCaseError },
    #[error("{id} is declared in both {first} and {second}")]
    DuplicateId {
        id: String,
        first: PathBuf,
        second: PathBuf,
    },
    #[error("aliases line {line}: {message}")]
    BadAlias { line: usize, message: String },
}

/// A list-valued cell that may be the literal `N/A`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListCell {
    pub items: Vec<String>,
    /// The cell said `N/A` rather than being left out.
    #[serde(default)]
    pub not_applicable: bool,
}

impl ListCell {
    pub fn not_applicable() -> Self {
        Self {
            items: Vec::new(),
            not_applicable: true,
        }
    }

    pub fn of(items: Vec<String>) -> Self {
        Self {
            items,
            not_applicable: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UseCase {
    pub id: String,
    pub title: String,
    pub actor: String,
    pub description: String,
    pub preconditions: Vec<String>,
    pub triggers: Vec<String>,
    pub main_scenario: Vec<String>,
    pub postconditions: Vec<String>,
    pub extensions: ListCell,
    pub relationships: ListCell,
}

impl UseCase {
    pub fn number(&self) -> u32 {
        id_number(&self.id).unwrap_or(u32::MAX)
    }
}

/// Numeric part of `UC<n>`, or `None` when the id is malformed.
pub fn id_number(id: &str) -> Option<u32> {
    let digits = id.strip_prefix("UC")?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Actor,
    UseCase,
    Description,
    Preconditions,
    Triggers,
    MainScenario,
    Postconditions,
    Extensions,
    Relationships,
}

const KEYS: [(Key, &str); 9] = [
    (Key::Actor, "Actor"),
    (Key::UseCase, "Use Case"),
    (Key::Description, "Description"),
    (Key::Preconditions, "Pre-conditions"),
    (Key::Triggers, "Triggers"),
    (Key::MainScenario, "Main Scenario"),
    (Key::Postconditions, "Post-conditions"),
    (Key::Extensions, "Extensions"),
    (Key::Relationships, "Relationships"),
];

fn key_label(k: Key) -> &'static str {
    KEYS.iter().find(|(key, _)| *key == k).map(|(_, l)| *l).unwrap_or("?")
}

fn classify(raw: &str) -> Option<Key> {
    let norm: String = raw
        .trim()
        .trim_matches('*')
        .trim_end_matches(':')
        .to_ascii_lowercase()
        .chars()
        .filter(|c| !matches!(c, '-' | ' ' | '_'))
        .collect();
    Some(match norm.as_str() {
        "actor" | "actors" => Key::Actor,
        "usecase" | "usecasename" => Key::UseCase,
        "description" => Key::Description,
        "preconditions" | "precondition" => Key::Preconditions,
        "triggers" | "trigger" => Key::Triggers,
        "mainscenario" => Key::MainScenario,
        "postconditions" | "postcondition" => Key::Postconditions,
        // Both words name the same column.
        "extensions" | "extension" | "exceptions" | "exception" => Key::Extensions,
        "relationships" | "relationship" => Key::Relationships,
        _ => return None,
    })
}

/// Splits a row into cells on unescaped `|`.
fn split_row(line: &str) -> Vec<String> {
    let inner = line.trim();
    let inner = inner.strip_prefix('|').unwrap_or(inner);
    let inner = inner.strip_suffix('|').unwrap_or(inner);
    let mut cells = vec![String::new()];
    let mut chars = inner.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\\' if chars.peek() == Some(&'|') => {
                cells.last_mut().unwrap().push('|');
                chars.next();
            }
            '|' => cells.push(String::new()),
            _ => cells.last_mut().unwrap().push(c),
        }
    }
    cells.into_iter().map(|c| c.trim().to_owned()).collect()
}

fn is_separator(cells: &[String]) -> bool {
    cells
        .iter()
        .all(|c| !c.is_empty() && c.chars().all(|ch| matches!(ch, '-' | ':' | ' ')))
}

fn strip_marker(item: &str) -> &str {
    let t = item.trim();
    if let Some(rest) = t.strip_prefix("- ").or_else(|| t.strip_prefix("* ")) {
        return rest.trim();
    }
    let digits = t.bytes().take_while(u8::is_ascii_digit).count();
    if digits > 0 {
        if let Some(rest) = t[digits..].strip_prefix(". ") {
            return rest.trim();
        }
    }
    t
}

fn split_items(cell: &str) -> Vec<String> {
    let mut s = cell.to_owned();
    for br in ["<br/>", "<br />", "<BR>"] {
        s = s.replace(br, "<br>");
    }
    s.split("<br>")
        .map(strip_marker)
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}

fn is_na(cell: &str) -> bool {
    cell.trim().eq_ignore_ascii_case("n/a")
}

fn list(cell: &str) -> Vec<String> {
    if is_na(cell) {
        Vec::new()
    } else {
        split_items(cell)
    }
}

fn list_cell(cell: &str) -> ListCell {
    if is_na(cell) {
        ListCell::not_applicable()
    } else {
        ListCell::of(split_items(cell))
    }
}

pub fn parse_usecase(text: &str) -> Result<UseCase, UseCaseError> {
    let mut heading = None;
    let mut rows: BTreeMap<Key, String> = BTreeMap::new();
    let mut header_seen = false;

    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if heading.is_none() {
            if let Some(h) = t.strip_prefix("## ") {
                heading = Some(h.trim().to_owned());
            }
            continue;
        }
        if !t.starts_with('|') {
            continue;
        }
        let cells = split_row(t);
        if cells.len() != 2 {
            return Err(UseCaseError::MalformedRow(i + 1));
        }
        if is_separator(&cells) {
            continue;
        }
        if !header_seen && matches!(cells[0].to_ascii_lowercase().as_str(), "attribute" | "field") {
            header_seen = true;
            continue;
        }
        let key = classify(&cells[0]).ok_or_else(|| UseCaseError::UnknownKey(cells[0].clone()))?;
        if rows.insert(key, cells[1].clone()).is_some() {
            return Err(UseCaseError::DuplicateKey(key_label(key).to_owned()));
        }
    }

    let heading = heading.ok_or(UseCaseError::MissingHeading)?;
    let (id, title) = heading
        .split_once(':')
        .map(|(a, b)| (a.trim().to_owned(), b.trim().to_owned()))
        .ok_or(UseCaseError::MissingHeading)?;
    if id_number(&id).is_none() {
        return Err(UseCaseError::InvalidId(id));
    }
    for (key, label) in KEYS {
        if !rows.contains_key(&key) {
            return Err(UseCaseError::Schema(label.to_owned()));
        }
    }
    let take = |k: Key| rows[&k].clone();

    let row_title = take(Key::UseCase);
    if row_title != title {
        return Err(UseCaseError::TitleMismatch {
            heading: title,
            row: row_title,
        });
    }
    let actor = take(Key::Actor);
    if actor.is_empty() || is_na(&actor) {
        return Err(UseCaseError::EmptyField("Actor".into()));
    }
    let main_scenario = list(&take(Key::MainScenario));
    if main_scenario.is_empty() {
        return Err(UseCaseError::EmptyField("Main Scenario".into()));
    }
    Ok(UseCase {
        id,
        title,
        actor,
        description: take(Key::Description),
        preconditions: list(&take(Key::Preconditions)),
        triggers: list(&take(Key::Triggers)),
        main_scenario,
        postconditions: list(&take(Key::Postconditions)),
        extensions: list_cell(&take(Key::Extensions)),
        relationships: list_cell(&take(Key::Relationships)),
    })
}

fn escape(s: &str) -> String {
    s.replace('|', "\\|")
}

fn render_list(items: &[String], numbered: bool) -> String {
    match items {
        [] => "N/A".to_owned(),
        [one] if !numbered => escape(one),
        _ => items
            .iter()
            .enumerate()
            .map(|(i, t)| format!("{}. {}", i + 1, escape(t)))
            .collect::<Vec<_>>()
            .join("<br>"),
    }
}

fn render_list_cell(cell: &ListCell) -> String {
    if cell.not_applicable && cell.items.is_empty() {
        "N/A".to_owned()
    } else {
        render_list(&cell.items, false)
    }
}

/// Renders the Markdown form accepted by [`parse_usecase`].
pub fn render_usecase(uc: &UseCase) -> String {
    let rows = [
        ("Actor", escape(&uc.actor)),
        ("Use Case", escape(&uc.title)),
        ("Description", escape(&uc.description)),
        ("Pre-conditions", render_list(&uc.preconditions, false)),
        ("Triggers", render_list(&uc.triggers, false)),
        ("Main Scenario", render_list(&uc.main_scenario, true)),
        ("Post-conditions", render_list(&uc.postconditions, false)),
        ("Extensions", render_list_cell(&uc.extensions)),
        ("Relationships", render_list_cell(&uc.relationships)),
    ];
    let mut out = format!("## {}: {}\n\n| Attribute | Details |\n|---|---|\n", uc.id, uc.title);
    for (k, v) in rows {
        out.push_str(&format!("| {k} | {v} |\n"));
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    /// Sorted by numeric id.
    pub cases: Vec<UseCase>,
    /// Alternative id -> canonical id.
    #[serde(default)]
    pub id_aliases: BTreeMap<String, String>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    /// Canonical id for `id`, following one alias hop if needed.
    pub fn resolve(&self, id: &str) -> Option<&str> {
        if let Some(c) = self.cases.iter().find(|c| c.id == id) {
            return Some(&c.id);
        }
        let target = self.id_aliases.get(id)?;
        self.cases.iter().find(|c| &c.id == target).map(|c| c.id.as_str())
    }

    pub fn get(&self, id: &str) -> Option<&UseCase> {
        let canon = self.resolve(id)?;
        self.cases.iter().find(|c| c.id == canon)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.cases.iter().map(|c| c.id.as_str())
    }
}

/// Parses `alias canonical` lines. Blank lines and `#` comments are skipped.
pub fn parse_aliases(text: &str) -> Result<BTreeMap<String, String>, CorpusError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let bad = |message: String| CorpusError::BadAlias { line: i + 1, message };
        let words: Vec<&str> = t.split_whitespace().collect();
        let [alias, canonical] = words[..] else {
            return Err(bad(format!("expected `alias canonical`, found `{t}`")));
        };
        for id in [alias, canonical] {
            if id_number(id).is_none() {
                return Err(bad(format!("invalid id `{id}`")));
            }
        }
        if out.insert(alias.to_owned(), canonical.to_owned()).is_some() {
            return Err(bad(format!("alias `{alias}` repeated")));
        }
    }
    Ok(out)
}

pub const ALIAS_FILE: &str = "aliases";

/// Loads every `*.md` file in `dir` plus the optional `aliases` file.
pub fn load_corpus(dir: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
    let dir = dir.as_ref();
    let io = |path: &Path| {
        let path = path.to_owned();
        move |source| CorpusError::Io { path, source }
    };
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(io(dir))? {
        let path = entry.map_err(io(dir))?.path();
        if path.extension().is_some_and(|e| e == "md") && path.is_file() {
            paths.push(path);
        }
    }
    paths.sort();

    let mut cases: Vec<(UseCase, PathBuf)> = Vec::new();
    for path in paths {
        let text = fs::read_to_string(&path).map_err(io(&path))?;
        let uc = parse_usecase(&text).map_err(|source| CorpusError::Parse {
            path: path.clone(),
            source,
        })?;
        if let Some((_, first)) = cases.iter().find(|(c, _)| c.id == uc.id) {
            return Err(CorpusError::DuplicateId {
                id: uc.id,
                first: first.clone(),
                second: path,
            });
        }
        cases.push((uc, path));
    }
    cases.sort_by_key(|(c, _)| c.number());

    let alias_path = dir.join(ALIAS_FILE);
    let id_aliases = if alias_path.is_file() {
        let text = fs::read_to_string(&alias_path).map_err(io(&alias_path))?;
        parse_aliases(&text)?
    } else {
        BTreeMap::new()
    };
    for (i, alias) in id_aliases.keys().enumerate() {
        if cases.iter().any(|(c, _)| &c.id == alias) {
            return Err(CorpusError::BadAlias {
                line: i + 1,
                message: format!("alias `{alias}` collides with a declared use case"),
            });
        }
    }
    Ok(Corpus {
        cases: cases.into_iter().map(|(c, _)| c).collect(),
        id_aliases,
    })
}
