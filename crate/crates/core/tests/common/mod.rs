#![allow(dead_code)]

pub mod expected;
pub mod stub;

use proptest::prelude::*;
use proptest::sample::subsequence;

use umlenrich::model::{Attribute, ClassDef, ClassModel, MacroAlias, Method, Parameter, Relationship, Visibility};
use umlenrich::suggest::{Suggestion, SuggestionKind, SuggestionSet};

pub const CLASS_POOL: [&str; 8] = ["User", "Order", "Item", "Cart", "Shop", "Payment", "Review", "Courier"];
pub const ATTR_POOL: [&str; 6] = ["id", "name", "count", "price", "createdAt", "status_code"];
pub const METHOD_POOL: [&str; 6] = ["open", "close", "listAll", "update", "remove_item", "find"];
pub const PARAM_POOL: [&str; 3] = ["a", "b", "details"];
pub const TYPE_POOL: [&str; 9] = [
    "string",
    "boolean",
    "integer",
    "decimal",
    "dateTime",
    "duration",
    "ItemDetails",
    "Order",
    "Payment",
];
pub const MULTS: [&str; 7] = ["1", "0..1", "0..*", "1..*", "*", "2..5", "3"];
pub const LABELS: [&str; 4] = ["has", "owns", "pays_for", "ships"];

pub fn visibility() -> impl Strategy<Value = Visibility> {
    prop::sample::select(Visibility::ALL.to_vec())
}

fn type_name() -> impl Strategy<Value = String> {
    prop::sample::select(TYPE_POOL.to_vec()).prop_map(str::to_owned)
}

fn attribute(name: &'static str) -> impl Strategy<Value = Attribute> {
    (visibility(), type_name()).prop_map(move |(visibility, type_name)| Attribute {
        visibility,
        name: name.to_owned(),
        type_name,
    })
}

fn method(name: &'static str) -> impl Strategy<Value = Method> {
    (
        visibility(),
        subsequence(PARAM_POOL.to_vec(), 0..=PARAM_POOL.len()),
        prop::collection::vec(type_name(), PARAM_POOL.len()),
        prop_oneof![type_name(), Just("void".to_owned())],
    )
        .prop_map(move |(visibility, names, types, ret)| Method {
            visibility,
            name: name.to_owned(),
            params: names.iter().zip(types).map(|(n, t)| Parameter::new(*n, t)).collect(),
            return_type: ret,
            provenance: None,
        })
}

pub fn class_def(name: &'static str) -> impl Strategy<Value = ClassDef> {
    let attrs = subsequence(ATTR_POOL.to_vec(), 0..=3)
        .prop_flat_map(|names| names.into_iter().map(attribute).collect::<Vec<_>>());
    let methods = subsequence(METHOD_POOL.to_vec(), 0..=3)
        .prop_flat_map(|names| names.into_iter().map(method).collect::<Vec<_>>());
    (attrs, methods).prop_map(move |(attributes, methods)| ClassDef {
        name: name.to_owned(),
        attributes,
        methods,
    })
}

fn aliases() -> impl Strategy<Value = Vec<MacroAlias>> {
    subsequence(vec!["RECTANGLE", "ENTITY"], 0..=2).prop_map(|v| v.into_iter().map(MacroAlias::class).collect())
}

/// Relationships over `n` classes: generalizations only point from a later
/// class to an earlier one, so they cannot form a cycle.
fn relationships(names: Vec<String>) -> impl Strategy<Value = Vec<Relationship>> {
    let n = names.len();
    let gens = prop::collection::vec((0..n, 0..n), 0..=3);
    let assocs = prop::collection::vec(
        (
            0..n,
            0..n,
            prop::sample::select(MULTS.to_vec()),
            prop::sample::select(MULTS.to_vec()),
            prop::option::of(prop::sample::select(LABELS.to_vec())),
        ),
        0..=5,
    );
    (gens, assocs).prop_map(move |(gens, assocs)| {
        let mut out: Vec<Relationship> = Vec::new();
        let mut push = |r: Relationship| {
            if !out.contains(&r) {
                out.push(r);
            }
        };
        for (a, b) in gens {
            if a > b {
                push(Relationship::generalization(&names[a], &names[b]));
            }
        }
        for (a, b, m1, m2, label) in assocs {
            push(Relationship::association(&names[a], m1, &names[b], m2, label));
        }
        out
    })
}

/// Models covering every construct of the grammar: aliases, all
/// visibilities, attributes, methods with 0..3 parameters, generalizations,
/// and associations with and without labels.
pub fn model() -> impl Strategy<Value = ClassModel> {
    (subsequence(CLASS_POOL.to_vec(), 0..=6), aliases()).prop_flat_map(|(names, macro_aliases)| {
        let classes: Vec<_> = names.iter().map(|n| class_def(n)).collect();
        let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let rels = if owned.is_empty() {
            Just(Vec::new()).boxed()
        } else {
            relationships(owned).boxed()
        };
        (classes, rels).prop_map(move |(classes, relationships)| ClassModel {
            classes,
            relationships,
            macro_aliases: macro_aliases.clone(),
        })
    })
}

pub fn nonempty_model() -> impl Strategy<Value = ClassModel> {
    model().prop_filter("needs a class", |m| !m.classes.is_empty())
}

/// Additive suggestions for `base`: new classes, fresh members on old and new
/// classes, new relationships, plus some repeats of elements `base` already
/// has (which must be no-ops).
pub fn suggestions_for(base: ClassModel) -> impl Strategy<Value = SuggestionSet> {
    let fresh: Vec<&'static str> = ["Depot", "Invoice", "Truck"].to_vec();
    (
        subsequence(fresh, 0..=2),
        prop::collection::vec((any::<prop::sample::Index>(), visibility(), 0usize..3), 0..=4),
        prop::collection::vec(
            (any::<prop::sample::Index>(), any::<prop::sample::Index>(), 0usize..2),
            0..=3,
        ),
        prop::collection::vec(any::<prop::sample::Index>(), 0..=2),
    )
        .prop_map(move |(new_classes, methods, rels, repeats)| {
            let mut out = Vec::new();
            for c in &new_classes {
                out.push(Suggestion::new(
                    SuggestionKind::AddClass {
                        class_def: ClassDef::new(*c).with_attribute(Attribute::new("ref", "string")),
                    },
                    "UC1",
                ));
            }
            let targets: Vec<String> = base
                .class_names()
                .map(str::to_owned)
                .chain(new_classes.iter().map(|s| s.to_string()))
                .collect();
            if targets.is_empty() {
                return SuggestionSet::new("gen", out);
            }
            for (k, (idx, vis, nparams)) in methods.into_iter().enumerate() {
                let params = (0..nparams)
                    .map(|i| Parameter::new(format!("p{i}"), "string"))
                    .collect();
                let mut m = Method::new(format!("generated{k}"), params, "boolean");
                m.visibility = vis;
                out.push(Suggestion::new(
                    SuggestionKind::AddMethod {
                        class: idx.get(&targets).clone(),
                        method: m,
                    },
                    "UC2",
                ));
            }
            for (k, (a, b, kind)) in rels.into_iter().enumerate() {
                let (a, b) = (a.get(&targets), b.get(&targets));
                let is_new = |c: &String| new_classes.contains(&c.as_str());
                let rel = if kind == 0 || !is_new(a) || is_new(b) {
                    Relationship::association(a, "1", b, "0..*", Some(&format!("gen{k}")))
                } else {
                    // New -> old edges only, so no cycle can appear.
                    Relationship::generalization(a, b)
                };
                out.push(Suggestion::new(
                    SuggestionKind::AddRelationship { relationship: rel },
                    "UC3",
                ));
            }
            for idx in repeats.into_iter().filter(|_| !base.classes.is_empty()) {
                let c = idx.get(&base.classes);
                if let Some(m) = c.methods.first() {
                    out.push(Suggestion::new(
                        SuggestionKind::AddMethod {
                            class: c.name.clone(),
                            method: m.clone(),
                        },
                        "UC4",
                    ));
                }
                if let Some(r) = base.relationships.first() {
                    out.push(Suggestion::new(
                        SuggestionKind::AddRelationship {
                            relationship: r.clone(),
                        },
                        "UC4",
                    ));
                }
            }
            SuggestionSet::new("gen", out)
        })
}

pub fn model_and_suggestions() -> impl Strategy<Value = (ClassModel, SuggestionSet)> {
    model().prop_flat_map(|m| (Just(m.clone()), suggestions_for(m)))
}
