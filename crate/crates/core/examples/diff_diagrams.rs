//! Structural diff between the base and the enriched diagram.

use umlenrich::fixtures::{enhanced_model, initial_model};
use umlenrich::merge::{apply, diff, summarize};
use umlenrich::suggest::{extract_suggestions, suggestions_of, SuggestionSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (old, new) = (initial_model(), enhanced_model());
    let delta = diff(&old, &new);
    let s = summarize(&delta);
    println!(
        "added: {} classes, {} methods, {} relationships; removals: {}",
        s.added.classes,
        s.added.methods,
        s.added.relationships,
        delta.has_removals()
    );
    for m in delta.added_methods.iter().take(5) {
        println!("  + {}.{}", m.class, m.method);
    }

    // The additive part of a diff is itself a suggestion set.
    let set = SuggestionSet::new("diff", suggestions_of(&delta, "UC1"));
    assert!(apply(&old, &set)?.canonical_equal(&new));
    println!("{} suggestions rebuild the enriched diagram", set.len());

    // Going backwards loses elements, which is refused.
    if let Err(e) = extract_suggestions(&new, &old, "UC1") {
        println!("reverse: {e}");
    }
    Ok(())
}
