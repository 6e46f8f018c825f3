//! Structural diff between class models and additive application of
//! suggestion sets.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{Attribute, ClassDef, ClassModel, Method, ModelError, Relationship};
use crate::suggest::{SuggestionKind, SuggestionSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodChange {
    pub class: String,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeChange {
    pub class: String,
    pub attribute: Attribute,
}

/// Difference between two models.
///
/// Classes are listed as shells (name and attributes). Methods of an added
/// or removed class appear in `added_methods`/`removed_methods`, while its
/// attributes stay inside the shell. Methods and attributes compare by full
/// value, so a changed return type shows up as one removal plus one addition.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDelta {
    pub added_classes: Vec<ClassDef>,
    pub added_attributes: Vec<AttributeChange>,
    pub added_methods: Vec<MethodChange>,
    pub added_relationships: Vec<Relationship>,
    pub removed_classes: Vec<ClassDef>,
    pub removed_attributes: Vec<AttributeChange>,
    pub removed_methods: Vec<MethodChange>,
    pub removed_relationships: Vec<Relationship>,
    /// Total method count of the right-hand model.
    pub new_method_total: usize,
}

impl ModelDelta {
    pub fn has_removals(&self) -> bool {
        !(self.removed_classes.is_empty()
            && self.removed_attributes.is_empty()
            && self.removed_methods.is_empty()
            && self.removed_relationships.is_empty())
    }

    pub fn is_empty(&self) -> bool {
        !self.has_removals()
            && self.added_classes.is_empty()
            && self.added_attributes.is_empty()
            && self.added_methods.is_empty()
            && self.added_relationships.is_empty()
    }

    pub fn first_removal(&self) -> Option<String> {
        self.removed_classes
            .first()
            .map(|c| format!("class {}", c.name))
            .or_else(|| {
                self.removed_attributes
                    .first()
                    .map(|a| format!("{}.{}", a.class, a.attribute))
            })
            .or_else(|| {
                self.removed_methods
                    .first()
                    .map(|m| format!("{}.{}", m.class, m.method))
            })
            .or_else(|| self.removed_relationships.first().map(|r| r.to_string()))
    }

    pub fn summarize(&self) -> DeltaSummary {
        summarize(self)
    }
}

fn class_map(model: &ClassModel) -> BTreeMap<&str, &ClassDef> {
    model.classes.iter().map(|c| (c.name.as_str(), c)).collect()
}

fn push_unique<T: PartialEq>(v: &mut Vec<T>, x: T) {
    if !v.contains(&x) {
        v.push(x);
    }
}

/// Elements of `from` missing in `against`, in `from` order.
fn one_way(from: &ClassModel, against: &ClassModel) -> (Vec<ClassDef>, Vec<AttributeChange>, Vec<MethodChange>) {
    let other = class_map(against);
    let mut classes = Vec::new();
    let mut attrs = Vec::new();
    let mut methods = Vec::new();
    for c in &from.classes {
        match other.get(c.name.as_str()) {
            None => {
                let mut shell = ClassDef::new(&c.name);
                for a in &c.attributes {
                    push_unique(&mut shell.attributes, a.clone());
                }
                push_unique(&mut classes, shell);
                for m in &c.methods {
                    push_unique(
                        &mut methods,
                        MethodChange {
                            class: c.name.clone(),
                            method: m.without_provenance(),
                        },
                    );
                }
            }
            Some(o) => {
                for a in &c.attributes {
                    if !o.attributes.contains(a) {
                        push_unique(
                            &mut attrs,
                            AttributeChange {
                                class: c.name.clone(),
                                attribute: a.clone(),
                            },
                        );
                    }
                }
                for m in &c.methods {
                    if !o.methods.iter().any(|om| om.same_shape(m)) {
                        push_unique(
                            &mut methods,
                            MethodChange {
                                class: c.name.clone(),
                                method: m.without_provenance(),
                            },
                        );
                    }
                }
            }
        }
    }
    (classes, attrs, methods)
}

/// Multiset difference `from - against`, in `from` order.
fn relationship_excess(from: &[Relationship], against: &[Relationship]) -> Vec<Relationship> {
    let mut budget: BTreeMap<&Relationship, usize> = BTreeMap::new();
    for r in against {
        *budget.entry(r).or_default() += 1;
    }
    let mut out = Vec::new();
    for r in from {
        match budget.get_mut(r) {
            Some(n) if *n > 0 => *n -= 1,
            _ => out.push(r.clone()),
        }
    }
    out
}

pub fn diff(old: &ClassModel, new: &ClassModel) -> ModelDelta {
    let (added_classes, added_attributes, added_methods) = one_way(new, old);
    let (removed_classes, removed_attributes, removed_methods) = one_way(old, new);
    ModelDelta {
        added_classes,
        added_attributes,
        added_methods,
        added_relationships: relationship_excess(&new.relationships, &old.relationships),
        removed_classes,
        removed_attributes,
        removed_methods,
        removed_relationships: relationship_excess(&old.relationships, &new.relationships),
        new_method_total: new.method_count(),
    }
}

/// Applies every suggestion in order. The result contains every element of
/// `model`; suggestions already satisfied are no-ops.
pub fn apply(model: &ClassModel, set: &SuggestionSet) -> Result<ClassModel, ModelError> {
    let mut current = model.clone();
    for s in set.iter() {
        current = apply_one(&current, &s.kind, Some(&s.source_uc))?;
    }
    Ok(current)
}

pub fn apply_one(model: &ClassModel, kind: &SuggestionKind, source_uc: Option<&str>) -> Result<ClassModel, ModelError> {
    match kind {
        SuggestionKind::AddClass { class_def } => model.add_class(class_def.clone()),
        SuggestionKind::AddAttribute { class, attribute } => model.add_attribute(class, attribute.clone()),
        SuggestionKind::AddMethod { class, method } => {
            let mut m = method.clone();
            if m.provenance.is_none() {
                m.provenance = source_uc.filter(|s| !s.is_empty()).map(str::to_owned);
            }
            model.add_method(class, m)
        }
        SuggestionKind::AddRelationship { relationship } => model.add_relationship(relationship.clone()),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaCounts {
    pub classes: usize,
    pub attributes: usize,
    pub methods: usize,
    pub relationships: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaSummary {
    pub added: DeltaCounts,
    pub removed: DeltaCounts,
    /// Whether the right-hand model has any method at all.
    pub dynamic_behaviors_captured: bool,
}

pub fn summarize(delta: &ModelDelta) -> DeltaSummary {
    DeltaSummary {
        added: DeltaCounts {
            classes: delta.added_classes.len(),
            attributes: delta.added_attributes.len(),
            methods: delta.added_methods.len(),
            relationships: delta.added_relationships.len(),
        },
        removed: DeltaCounts {
            classes: delta.removed_classes.len(),
            attributes: delta.removed_attributes.len(),
            methods: delta.removed_methods.len(),
            relationships: delta.removed_relationships.len(),
        },
        dynamic_behaviors_captured: delta.new_method_total > 0,
    }
}
