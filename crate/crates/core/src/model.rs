//! Typed class-diagram model.
//!
//! A [`ClassModel`] is an immutable value: every mutation returns a new model
//! and never removes or alters an element that was already present.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("duplicate class `{0}`")]
    DuplicateClass(String),
    #[error("method `{signature}` on `{class}` conflicts: existing `{existing}`, proposed `{proposed}`")]
    SignatureConflict {
        class: String,
        signature: String,
        existing: String,
        proposed: String,
    },
    #[error("attribute `{attribute}` on `{class}` already exists with a different definition")]
    AttributeConflict { class: String, attribute: String },
    #[error("generalization `{child} --|> {parent}` would create a cycle")]
    CycleError { child: String, parent: String },
    #[error("invalid multiplicity `{0}`")]
    InvalidMultiplicity(String),
    #[error("invalid member: {0}")]
    InvalidMember(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Visibility {
    #[default]
    Public,
    Private,
    Protected,
    Package,
}

impl Visibility {
    pub const ALL: [Visibility; 4] = [
        Visibility::Public,
        Visibility::Private,
        Visibility::Protected,
        Visibility::Package,
    ];

    pub fn marker(self) -> char {
        match self {
            Visibility::Public => '+',
            Visibility::Private => '-',
            Visibility::Protected => '#',
            Visibility::Package => '~',
        }
    }

    pub fn from_marker(c: char) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.marker() == c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Attribute {
    #[serde(default)]
    pub visibility: Visibility,
    pub name: String,
    pub type_name: String,
}

impl Attribute {
    pub fn new(name: impl Into<String>, type_name: impl Into<String>) -> Self {
        Self {
            visibility: Visibility::Public,
            name: name.into(),
            type_name: type_name.into(),
        }
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}: {}", self.visibility.marker(), self.name, self.type_name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Parameter {
    pub name: String,
    pub type_name: String,
}

impl Parameter {
    pub fn new(name: impl Into<String>, type_name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            type_name: type_name.into(),
        }
    }
}

/// Method identity within a class: name plus ordered parameter types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MethodSignature {
    pub name: String,
    pub param_types: Vec<String>,
}

impl fmt::Display for MethodSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name, self.param_types.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Method {
    #[serde(default)]
    pub visibility: Visibility,
    pub name: String,
    #[serde(default)]
    pub params: Vec<Parameter>,
    pub return_type: String,
    /// Use case that motivated the method, when known. Not part of the
    /// PlantUML text and ignored by canonical equality.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl Method {
    pub fn new(name: impl Into<String>, params: Vec<Parameter>, return_type: impl Into<String>) -> Self {
        Self {
            visibility: Visibility::Public,
            name: name.into(),
            params,
            return_type: return_type.into(),
            provenance: None,
        }
    }

    pub fn signature(&self) -> MethodSignature {
        MethodSignature {
            name: self.name.clone(),
            param_types: self.params.iter().map(|p| p.type_name.clone()).collect(),
        }
    }

    /// Equality ignoring provenance.
    pub fn same_shape(&self, other: &Method) -> bool {
        self.visibility == other.visibility
            && self.name == other.name
            && self.params == other.params
            && self.return_type == other.return_type
    }

    pub fn without_provenance(&self) -> Method {
        Method {
            provenance: None,
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<(), ModelError> {
        if !is_identifier(&self.name) {
            return Err(ModelError::InvalidMember(format!("bad method name `{}`", self.name)));
        }
        if !is_identifier(&self.return_type) {
            return Err(ModelError::InvalidMember(format!(
                "bad return type `{}` on `{}`",
                self.return_type, self.name
            )));
        }
        let mut seen = BTreeSet::new();
        for p in &self.params {
            if !is_identifier(&p.name) || !is_identifier(&p.type_name) {
                return Err(ModelError::InvalidMember(format!(
                    "bad parameter `{}: {}` on `{}`",
                    p.name, p.type_name, self.name
                )));
            }
            if !seen.insert(p.name.as_str()) {
                return Err(ModelError::InvalidMember(format!(
                    "parameter `{}` repeated on `{}`",
                    p.name, self.name
                )));
            }
        }
        Ok(())
    }
}

/// Renders `name(p: T, ...): R`, the form used in traceability tables.
impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, p) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}: {}", p.name, p.type_name)?;
        }
        write!(f, "): {}", self.return_type)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDef {
    pub name: String,
    #[serde(default)]
    pub attributes: Vec<Attribute>,
    #[serde(default)]
    pub methods: Vec<Method>,
}

impl ClassDef {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            attributes: Vec::new(),
            methods: Vec::new(),
        }
    }

    pub fn with_attribute(mut self, a: Attribute) -> Self {
        self.attributes.push(a);
        self
    }

    pub fn with_method(mut self, m: Method) -> Self {
        self.methods.push(m);
        self
    }

    pub fn find_method(&self, sig: &MethodSignature) -> Option<&Method> {
        self.methods.iter().find(|m| &m.signature() == sig)
    }

    pub fn find_attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.name == name)
    }

    /// The class without its methods.
    pub fn shell(&self) -> ClassDef {
        ClassDef {
            name: self.name.clone(),
            attributes: self.attributes.clone(),
            methods: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Relationship {
    Generalization {
        child: String,
        parent: String,
    },
    Association {
        source: String,
        source_mult: String,
        target: String,
        target_mult: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

impl Relationship {
    pub fn generalization(child: impl Into<String>, parent: impl Into<String>) -> Self {
        Relationship::Generalization {
            child: child.into(),
            parent: parent.into(),
        }
    }

    pub fn association(
        source: impl Into<String>,
        source_mult: impl Into<String>,
        target: impl Into<String>,
        target_mult: impl Into<String>,
        label: Option<&str>,
    ) -> Self {
        Relationship::Association {
            source: source.into(),
            source_mult: source_mult.into(),
            target: target.into(),
            target_mult: target_mult.into(),
            label: label.map(str::to_owned),
        }
    }

    /// `(source, target)` for associations, `(child, parent)` for generalizations.
    pub fn endpoints(&self) -> (&str, &str) {
        match self {
            Relationship::Generalization { child, parent } => (child, parent),
            Relationship::Association { source, target, .. } => (source, target),
        }
    }

    pub fn is_generalization(&self) -> bool {
        matches!(self, Relationship::Generalization { .. })
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            Relationship::Association { label, .. } => label.as_deref(),
            Relationship::Generalization { .. } => None,
        }
    }
}

/// The PlantUML statement form.
impl fmt::Display for Relationship {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relationship::Generalization { child, parent } => write!(f, "{child} --|> {parent}"),
            Relationship::Association {
                source,
                source_mult,
                target,
                target_mult,
                label,
            } => {
                write!(f, "{source} \"{source_mult}\" -- \"{target_mult}\" {target}")?;
                if let Some(label) = label {
                    write!(f, " : {label}")?;
                }
                Ok(())
            }
        }
    }
}

/// `!define <alias> <keyword>` directive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MacroAlias {
    pub alias: String,
    pub keyword: String,
}

impl MacroAlias {
    pub fn class(alias: impl Into<String>) -> Self {
        Self {
            alias: alias.into(),
            keyword: "class".to_owned(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassModel {
    #[serde(default)]
    pub classes: Vec<ClassDef>,
    #[serde(default)]
    pub relationships: Vec<Relationship>,
    #[serde(default)]
    pub macro_aliases: Vec<MacroAlias>,
}

impl ClassModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn find_class(&self, name: &str) -> Option<&ClassDef> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn has_class(&self, name: &str) -> bool {
        self.find_class(name).is_some()
    }

    pub fn class_names(&self) -> impl Iterator<Item = &str> {
        self.classes.iter().map(|c| c.name.as_str())
    }

    pub fn method_count(&self) -> usize {
        self.classes.iter().map(|c| c.methods.len()).sum()
    }

    pub fn attribute_count(&self) -> usize {
        self.classes.iter().map(|c| c.attributes.len()).sum()
    }

    pub fn generalizations(&self) -> impl Iterator<Item = &Relationship> {
        self.relationships.iter().filter(|r| r.is_generalization())
    }

    pub fn associations(&self) -> impl Iterator<Item = &Relationship> {
        self.relationships.iter().filter(|r| !r.is_generalization())
    }

    fn class_index(&self, name: &str) -> Result<usize, ModelError> {
        self.classes
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| ModelError::UnknownClass(name.to_owned()))
    }

    /// Appends `method` to `class_name`. Re-adding an identical method is a
    /// no-op; a same-signature method with any other difference is rejected.
    pub fn add_method(&self, class_name: &str, method: Method) -> Result<ClassModel, ModelError> {
        let idx = self.class_index(class_name)?;
        method.validate()?;
        let class = &self.classes[idx];
        if let Some(existing) = class.find_method(&method.signature()) {
            if existing.same_shape(&method) {
                return Ok(self.clone());
            }
            return Err(ModelError::SignatureConflict {
                class: class_name.to_owned(),
                signature: method.signature().to_string(),
                existing: existing.to_string(),
                proposed: method.to_string(),
            });
        }
        let mut next = self.clone();
        next.classes[idx].methods.push(method);
        Ok(next)
    }

    pub fn add_attribute(&self, class_name: &str, attribute: Attribute) -> Result<ClassModel, ModelError> {
        let idx = self.class_index(class_name)?;
        if !is_identifier(&attribute.name) || !is_identifier(&attribute.type_name) {
            return Err(ModelError::InvalidMember(format!(
                "bad attribute `{}: {}`",
                attribute.name, attribute.type_name
            )));
        }
        if let Some(existing) = self.classes[idx].find_attribute(&attribute.name) {
            if *existing == attribute {
                return Ok(self.clone());
            }
            return Err(ModelError::AttributeConflict {
                class: class_name.to_owned(),
                attribute: attribute.name,
            });
        }
        let mut next = self.clone();
        next.classes[idx].attributes.push(attribute);
        Ok(next)
    }

    /// Adds a class. When a class of that name already exists its members
    /// are merged in with the same rules as `add_attribute`/`add_method`.
    pub fn add_class(&self, class: ClassDef) -> Result<ClassModel, ModelError> {
        if !is_identifier(&class.name) {
            return Err(ModelError::InvalidMember(format!("bad class name `{}`", class.name)));
        }
        let mut next = if self.has_class(&class.name) {
            self.clone()
        } else {
            let mut m = self.clone();
            m.classes.push(ClassDef::new(&class.name));
            m
        };
        for a in class.attributes {
            next = next.add_attribute(&class.name, a)?;
        }
        for m in class.methods {
            next = next.add_method(&class.name, m)?;
        }
        Ok(next)
    }

    pub fn add_relationship(&self, rel: Relationship) -> Result<ClassModel, ModelError> {
        self.check_relationship(&rel)?;
        if self.relationships.contains(&rel) {
            return Ok(self.clone());
        }
        let mut next = self.clone();
        next.relationships.push(rel);
        Ok(next)
    }

    pub(crate) fn check_relationship(&self, rel: &Relationship) -> Result<(), ModelError> {
        let (a, b) = rel.endpoints();
        self.class_index(a)?;
        self.class_index(b)?;
        match rel {
            Relationship::Generalization { child, parent } => {
                if child == parent || self.ancestors(parent).contains(child.as_str()) {
                    return Err(ModelError::CycleError {
                        child: child.clone(),
                        parent: parent.clone(),
                    });
                }
            }
            Relationship::Association {
                source_mult,
                target_mult,
                label,
                ..
            } => {
                for m in [source_mult, target_mult] {
                    if !is_multiplicity(m) {
                        return Err(ModelError::InvalidMultiplicity(m.clone()));
                    }
                }
                if label.as_deref().is_some_and(|l| l.trim().is_empty() || l.trim() != l) {
                    return Err(ModelError::InvalidMember(format!("bad association label {label:?}")));
                }
            }
        }
        Ok(())
    }

    /// Transitive generalization parents of `class`.
    pub fn ancestors(&self, class: &str) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        let mut stack = vec![class];
        while let Some(c) = stack.pop() {
            for r in &self.relationships {
                if let Relationship::Generalization { child, parent } = r {
                    if child == c && out.insert(parent.as_str()) {
                        stack.push(parent);
                    }
                }
            }
        }
        out
    }

    /// Checks the structural invariants: unique class names, known
    /// relationship endpoints, valid multiplicities, acyclic generalization,
    /// and non-conflicting members.
    pub fn check_invariants(&self) -> Result<(), ModelError> {
        let mut names = BTreeSet::new();
        for c in &self.classes {
            if !names.insert(c.name.as_str()) {
                return Err(ModelError::DuplicateClass(c.name.clone()));
            }
            let mut attrs: BTreeMap<&str, &Attribute> = BTreeMap::new();
            for a in &c.attributes {
                if let Some(prev) = attrs.insert(&a.name, a) {
                    if prev != a {
                        return Err(ModelError::AttributeConflict {
                            class: c.name.clone(),
                            attribute: a.name.clone(),
                        });
                    }
                }
            }
            let mut sigs: BTreeMap<MethodSignature, &Method> = BTreeMap::new();
            for m in &c.methods {
                m.validate()?;
                if let Some(prev) = sigs.insert(m.signature(), m) {
                    if !prev.same_shape(m) {
                        return Err(ModelError::SignatureConflict {
                            class: c.name.clone(),
                            signature: m.signature().to_string(),
                            existing: prev.to_string(),
                            proposed: m.to_string(),
                        });
                    }
                }
            }
        }
        // Replay relationships so the cycle check sees them incrementally.
        let mut partial = ClassModel {
            classes: self.classes.clone(),
            relationships: Vec::new(),
            macro_aliases: Vec::new(),
        };
        for r in &self.relationships {
            partial.check_relationship(r)?;
            partial.relationships.push(r.clone());
        }
        Ok(())
    }

    pub fn canonical(&self) -> CanonicalModel {
        let mut classes = BTreeMap::new();
        for c in &self.classes {
            let entry = classes.entry(c.name.clone()).or_insert_with(|| CanonicalClass {
                attributes: BTreeSet::new(),
                methods: BTreeSet::new(),
            });
            entry.attributes.extend(c.attributes.iter().cloned());
            entry.methods.extend(c.methods.iter().map(Method::without_provenance));
        }
        let mut relationships = self.relationships.clone();
        relationships.sort();
        CanonicalModel {
            aliases: self.macro_aliases.iter().cloned().collect(),
            classes,
            relationships,
        }
    }

    pub fn canonical_equal(&self, other: &ClassModel) -> bool {
        self.canonical() == other.canonical()
    }

    /// True when every class, member, and relationship of `other` also
    /// occurs in `self` (relationships counted with multiplicity).
    pub fn contains_model(&self, other: &ClassModel) -> bool {
        let mine = self.canonical();
        let theirs = other.canonical();
        let classes_ok = theirs.classes.iter().all(|(name, oc)| {
            mine.classes
                .get(name)
                .is_some_and(|mc| oc.attributes.is_subset(&mc.attributes) && oc.methods.is_subset(&mc.methods))
        });
        classes_ok && multiset_contains(&mine.relationships, &theirs.relationships)
    }
}

fn multiset_contains<T: Ord>(big: &[T], small: &[T]) -> bool {
    let mut counts: BTreeMap<&T, usize> = BTreeMap::new();
    for x in big {
        *counts.entry(x).or_default() += 1;
    }
    small.iter().all(|x| match counts.get_mut(x) {
        Some(n) if *n > 0 => {
            *n -= 1;
            true
        }
        _ => false,
    })
}

pub fn find_class<'a>(model: &'a ClassModel, name: &str) -> Option<&'a ClassDef> {
    model.find_class(name)
}

pub fn canonical_equal(a: &ClassModel, b: &ClassModel) -> bool {
    a.canonical_equal(b)
}

/// Order-insensitive normal form of a [`ClassModel`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalModel {
    pub aliases: BTreeSet<MacroAlias>,
    pub classes: BTreeMap<String, CanonicalClass>,
    /// Sorted; duplicates kept.
    pub relationships: Vec<Relationship>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalClass {
    pub attributes: BTreeSet<Attribute>,
    pub methods: BTreeSet<Method>,
}

/// `[A-Za-z_][A-Za-z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `digits | digits..digits | digits..* | *`
pub fn is_multiplicity(s: &str) -> bool {
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if s == "*" || digits(s) {
        return true;
    }
    match s.split_once("..") {
        Some((lo, hi)) => digits(lo) && (hi == "*" || digits(hi)),
        None => false,
    }
}

pub const PRIMITIVE_TYPES: [&str; 7] = [
    "string", "boolean", "integer", "decimal", "dateTime", "duration", "void",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeOrigin {
    Primitive,
    Class,
    Auxiliary,
}

/// Names a parameter or return type may legally refer to.
///
/// The three partitions are disjoint. Class names win over primitives and
/// auxiliaries, so a name that is both a class and a declared auxiliary
/// resolves as the class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeRegistry {
    pub primitives: BTreeSet<String>,
    pub class_names: BTreeSet<String>,
    pub auxiliary: BTreeSet<String>,
}

impl TypeRegistry {
    pub fn resolve(&self, name: &str) -> Option<TypeOrigin> {
        if self.class_names.contains(name) {
            Some(TypeOrigin::Class)
        } else if self.primitives.contains(name) {
            Some(TypeOrigin::Primitive)
        } else if self.auxiliary.contains(name) {
            Some(TypeOrigin::Auxiliary)
        } else {
            None
        }
    }

    pub fn is_resolvable(&self, name: &str) -> bool {
        self.resolve(name).is_some()
    }
}

pub fn type_registry<I, S>(model: &ClassModel, extra_auxiliary: I) -> TypeRegistry
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let class_names: BTreeSet<String> = model.class_names().map(str::to_owned).collect();
    let primitives: BTreeSet<String> = PRIMITIVE_TYPES
        .iter()
        .map(|s| s.to_string())
        .filter(|p| !class_names.contains(p))
        .collect();
    let auxiliary = extra_auxiliary
        .into_iter()
        .map(Into::into)
        .filter(|a| !class_names.contains(a) && !primitives.contains(a))
        .collect();
    TypeRegistry {
        primitives,
        class_names,
        auxiliary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_classes() -> ClassModel {
        ClassModel::new()
            .add_class(ClassDef::new("A"))
            .unwrap()
            .add_class(ClassDef::new("B"))
            .unwrap()
    }

    #[test]
    fn find_class_on_empty_model() {
        assert!(ClassModel::new().find_class("X").is_none());
    }

    #[test]
    fn add_method_is_idempotent_and_checks_class() {
        let m = two_classes();
        let method = Method::new("run", vec![Parameter::new("x", "string")], "void");
        let once = m.add_method("A", method.clone()).unwrap();
        let twice = once.add_method("A", method.clone()).unwrap();
        assert_eq!(once, twice);
        assert_eq!(once.method_count(), 1);
        assert_eq!(
            m.add_method("Nope", method),
            Err(ModelError::UnknownClass("Nope".into()))
        );
    }

    #[test]
    fn add_method_rejects_conflicting_return_type() {
        let m = two_classes()
            .add_method("A", Method::new("run", vec![], "void"))
            .unwrap();
        let err = m.add_method("A", Method::new("run", vec![], "string")).unwrap_err();
        assert!(matches!(err, ModelError::SignatureConflict { .. }));
        // Different parameter types are a different signature.
        let ok = m
            .add_method("A", Method::new("run", vec![Parameter::new("n", "integer")], "string"))
            .unwrap();
        assert_eq!(ok.method_count(), 2);
    }

    #[test]
    fn add_method_rejects_repeated_parameter_names() {
        let bad = Method::new(
            "f",
            vec![Parameter::new("a", "string"), Parameter::new("a", "integer")],
            "void",
        );
        assert!(matches!(
            two_classes().add_method("A", bad),
            Err(ModelError::InvalidMember(_))
        ));
    }

    #[test]
    fn generalization_two_cycle_is_rejected() {
        let m = two_classes()
            .add_relationship(Relationship::generalization("A", "B"))
            .unwrap();
        assert_eq!(
            m.add_relationship(Relationship::generalization("B", "A")),
            Err(ModelError::CycleError {
                child: "B".into(),
                parent: "A".into()
            })
        );
        assert!(matches!(
            m.add_relationship(Relationship::generalization("A", "A")),
            Err(ModelError::CycleError { .. })
        ));
    }

    #[test]
    fn duplicate_relationship_is_collapsed_but_new_label_is_not() {
        let r = Relationship::association("A", "1", "B", "0..*", Some("x"));
        let m = two_classes().add_relationship(r.clone()).unwrap();
        assert_eq!(m.add_relationship(r).unwrap().relationships.len(), 1);
        let m2 = m
            .add_relationship(Relationship::association("A", "1", "B", "0..*", Some("y")))
            .unwrap();
        assert_eq!(m2.relationships.len(), 2);
    }

    #[test]
    fn relationship_endpoints_and_multiplicities_are_checked() {
        let m = two_classes();
        assert_eq!(
            m.add_relationship(Relationship::association("A", "1", "C", "1", None)),
            Err(ModelError::UnknownClass("C".into()))
        );
        assert_eq!(
            m.add_relationship(Relationship::association("A", "1..", "B", "1", None)),
            Err(ModelError::InvalidMultiplicity("1..".into()))
        );
    }

    #[test]
    fn multiplicity_grammar() {
        for ok in ["1", "*", "0..1", "0..*", "12..40"] {
            assert!(is_multiplicity(ok), "{ok}");
        }
        for bad in ["", "..", "a", "1..", "*..1", "1..2..3", "-1", "1 ..2"] {
            assert!(!is_multiplicity(bad), "{bad}");
        }
    }

    #[test]
    fn canonical_equality_ignores_order_and_provenance() {
        let a = two_classes()
            .add_method("A", Method::new("f", vec![], "void"))
            .unwrap()
            .add_method("A", Method::new("g", vec![], "void"))
            .unwrap();
        let mut b = a.clone();
        b.classes.reverse();
        b.classes[1].methods.reverse();
        b.classes[1].methods[0].provenance = Some("UC1".into());
        assert!(a.canonical_equal(&b));
        assert!(!a.canonical_equal(&two_classes()));
    }

    #[test]
    fn canonical_equality_counts_duplicate_relationships() {
        let r = Relationship::association("A", "1", "B", "1", Some("x"));
        let mut a = two_classes().add_relationship(r.clone()).unwrap();
        let b = a.clone();
        a.relationships.push(r);
        assert!(!a.canonical_equal(&b));
        assert!(a.contains_model(&b));
        assert!(!b.contains_model(&a));
    }

    #[test]
    fn registry_partitions_are_disjoint() {
        let m = two_classes();
        let reg = type_registry(&m, ["A", "Details", "string"]);
        assert_eq!(reg.resolve("A"), Some(TypeOrigin::Class));
        assert_eq!(reg.resolve("string"), Some(TypeOrigin::Primitive));
        assert_eq!(reg.resolve("Details"), Some(TypeOrigin::Auxiliary));
        assert_eq!(reg.resolve("Other"), None);
        assert!(reg.auxiliary.is_disjoint(&reg.class_names));
        assert!(reg.auxiliary.is_disjoint(&reg.primitives));

        let empty = type_registry(&ClassModel::new(), Vec::<String>::new());
        assert_eq!(empty.primitives.len(), PRIMITIVE_TYPES.len());
        assert!(empty.class_names.is_empty() && empty.auxiliary.is_empty());
    }
}
