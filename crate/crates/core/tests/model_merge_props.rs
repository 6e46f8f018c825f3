mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use umlenrich::merge::{apply, diff, summarize, ModelDelta};
use umlenrich::model::{Attribute, ClassModel, Method, Relationship};
use umlenrich::report::metrics;
use umlenrich::suggest::{extract_suggestions, suggestions_of, SuggestionKind, SuggestionSet};

type Classes = BTreeMap<String, (BTreeSet<Attribute>, BTreeSet<Method>)>;

/// Brute-force model state: member sets per class and a relationship bag.
fn state(m: &ClassModel) -> (Classes, Vec<Relationship>) {
    let mut classes = Classes::new();
    for c in &m.classes {
        let e = classes.entry(c.name.clone()).or_default();
        e.0.extend(c.attributes.iter().cloned());
        e.1.extend(c.methods.iter().map(Method::without_provenance));
    }
    let mut rels = m.relationships.clone();
    rels.sort();
    (classes, rels)
}

/// Rebuilds `new` from `old` using only the delta lists.
fn reconstruct(old: &ClassModel, d: &ModelDelta) -> (Classes, Vec<Relationship>) {
    let (mut classes, mut rels) = state(old);
    for c in &d.removed_classes {
        classes.remove(&c.name);
    }
    for a in &d.removed_attributes {
        classes.get_mut(&a.class).unwrap().0.remove(&a.attribute);
    }
    for m in &d.removed_methods {
        if let Some(e) = classes.get_mut(&m.class) {
            e.1.remove(&m.method);
        }
    }
    for c in &d.added_classes {
        classes
            .entry(c.name.clone())
            .or_default()
            .0
            .extend(c.attributes.iter().cloned());
    }
    for a in &d.added_attributes {
        classes.get_mut(&a.class).unwrap().0.insert(a.attribute.clone());
    }
    for m in &d.added_methods {
        classes.get_mut(&m.class).unwrap().1.insert(m.method.clone());
    }
    for r in &d.removed_relationships {
        let i = rels.iter().position(|x| x == r).unwrap();
        rels.remove(i);
    }
    rels.extend(d.added_relationships.iter().cloned());
    rels.sort();
    (classes, rels)
}

fn no_overlap<T: PartialEq>(a: &[T], b: &[T]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn canonical_equal_is_an_equivalence(a in common::model(), b in common::model(), c in common::model()) {
        prop_assert!(a.canonical_equal(&a));
        prop_assert_eq!(a.canonical_equal(&b), b.canonical_equal(&a));
        if a.canonical_equal(&b) && b.canonical_equal(&c) {
            prop_assert!(a.canonical_equal(&c));
        }
        let mut reordered = a.clone();
        reordered.classes.reverse();
        prop_assert!(a.canonical_equal(&reordered) && reordered.canonical_equal(&a));
    }

    #[test]
    fn generated_models_satisfy_invariants(m in common::model()) {
        prop_assert!(m.check_invariants().is_ok());
    }

    #[test]
    fn apply_is_monotone((m, s) in common::model_and_suggestions()) {
        let out = apply(&m, &s).unwrap();
        prop_assert!(out.contains_model(&m));
        prop_assert!(out.check_invariants().is_ok());
        // Every suggestion's element is present exactly once.
        for sug in s.iter() {
            match &sug.kind {
                SuggestionKind::AddClass { class_def } => {
                    prop_assert_eq!(out.classes.iter().filter(|c| c.name == class_def.name).count(), 1);
                    let c = out.find_class(&class_def.name).unwrap();
                    prop_assert!(class_def.attributes.iter().all(|a| c.attributes.contains(a)));
                }
                SuggestionKind::AddMethod { class, method } => {
                    let c = out.find_class(class).unwrap();
                    prop_assert_eq!(c.methods.iter().filter(|x| x.same_shape(method)).count(), 1);
                }
                SuggestionKind::AddRelationship { relationship } => {
                    prop_assert_eq!(out.relationships.iter().filter(|r| *r == relationship).count(), 1);
                }
                SuggestionKind::AddAttribute { class, attribute } => {
                    prop_assert!(out.find_class(class).unwrap().attributes.contains(attribute));
                }
            }
        }
    }

    #[test]
    fn apply_is_idempotent((m, s) in common::model_and_suggestions()) {
        let once = apply(&m, &s).unwrap();
        let twice = apply(&once, &s).unwrap();
        prop_assert!(twice.canonical_equal(&once));
        prop_assert_eq!(twice.relationships.len(), once.relationships.len());
    }

    #[test]
    fn diff_apply_inverse_for_additive_deltas((m, s) in common::model_and_suggestions()) {
        let new = apply(&m, &s).unwrap();
        let delta = diff(&m, &new);
        prop_assert!(!delta.has_removals());
        let recovered = apply(&m, &SuggestionSet::new("diff", suggestions_of(&delta, "UC1"))).unwrap();
        prop_assert!(recovered.canonical_equal(&new));
        let extracted = extract_suggestions(&m, &new, "UC1").unwrap();
        prop_assert!(apply(&m, &extracted).unwrap().canonical_equal(&new));
    }

    #[test]
    fn diff_reconstructs_arbitrary_targets(old in common::model(), new in common::model()) {
        let d = diff(&old, &new);
        prop_assert_eq!(reconstruct(&old, &d), state(&new));
        prop_assert!(no_overlap(&d.added_methods, &d.removed_methods));
        prop_assert!(no_overlap(&d.added_attributes, &d.removed_attributes));
        prop_assert!(no_overlap(&d.added_classes, &d.removed_classes));
        let s = summarize(&d);
        prop_assert_eq!(s.added.methods, d.added_methods.len());
        prop_assert_eq!(s.removed.relationships, d.removed_relationships.len());
        prop_assert_eq!(s.dynamic_behaviors_captured, new.method_count() > 0);
    }

    #[test]
    fn disjoint_class_sets_commute((m, s) in common::model_and_suggestions(), k in 0usize..6) {
        prop_assume!(!m.classes.is_empty());
        let target = m.classes[k % m.classes.len()].name.clone();
        let (mine, rest): (Vec<_>, Vec<_>) = s
            .suggestions
            .into_iter()
            .filter(|x| matches!(x.kind, SuggestionKind::AddMethod { .. }))
            .filter(|x| x.kind.required_classes().iter().all(|c| m.has_class(c)))
            .partition(|x| x.kind.required_classes() == vec![target.as_str()]);
        let a = SuggestionSet::new("a", mine);
        let b = SuggestionSet::new("b", rest);
        let ab = apply(&apply(&m, &a).unwrap(), &b).unwrap();
        let ba = apply(&apply(&m, &b).unwrap(), &a).unwrap();
        prop_assert!(ab.canonical_equal(&ba));
    }

    #[test]
    fn metrics_match_enumeration(m in common::model()) {
        let mt = metrics(&m);
        let methods: usize = m.classes.iter().map(|c| c.methods.len()).sum();
        let gens = m.relationships.iter().filter(|r| matches!(r, Relationship::Generalization { .. })).count();
        let assocs = m.relationships.iter().filter(|r| matches!(r, Relationship::Association { .. })).count();
        prop_assert_eq!(mt.class_count, m.classes.len());
        prop_assert_eq!(mt.method_count, methods);
        prop_assert_eq!(mt.relationship_count, gens + assocs);
        prop_assert_eq!(mt.dynamic_behaviors_captured, methods > 0);
    }

    #[test]
    fn add_method_twice_is_add_once(m in common::nonempty_model(), k in 0usize..6) {
        let class = m.classes[k % m.classes.len()].name.clone();
        let x = Method::new("freshlyAdded", vec![], "void");
        let once = m.add_method(&class, x.clone()).unwrap();
        let twice = once.add_method(&class, x).unwrap();
        prop_assert!(twice.canonical_equal(&once));
        prop_assert!(once.contains_model(&m));
    }

    #[test]
    fn generalizations_stay_acyclic(m in common::nonempty_model(), edges in prop::collection::vec((0usize..6, 0usize..6), 0..12)) {
        let names: Vec<String> = m.class_names().map(str::to_owned).collect();
        let mut cur = m;
        for (a, b) in edges {
            let r = Relationship::generalization(&names[a % names.len()], &names[b % names.len()]);
            if let Ok(next) = cur.add_relationship(r) {
                prop_assert!(next.contains_model(&cur));
                cur = next;
            }
        }
        prop_assert!(cur.check_invariants().is_ok());
        for n in &names {
            prop_assert!(!cur.ancestors(n).contains(n.as_str()));
        }
    }
}
