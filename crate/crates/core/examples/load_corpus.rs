//! Load a directory of use-case tables and resolve id aliases.

use umlenrich::fixtures::corpus_dir;
use umlenrich::usecase::{load_corpus, render_usecase};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = load_corpus(corpus_dir())?;
    println!("{} use cases, aliases {:?}", corpus.len(), corpus.id_aliases);
    for uc in corpus.cases.iter().take(3) {
        println!(
            "{:>5}  {:<45} actor={} steps={}",
            uc.id,
            uc.title,
            uc.actor,
            uc.main_scenario.len()
        );
    }

    let monitoring = corpus.get("UC22").ok_or("alias did not resolve")?;
    println!("\nUC22 resolves to {}: {}", monitoring.id, monitoring.title);
    println!("\n{}", render_usecase(corpus.get("UC7").ok_or("missing UC7")?));
    Ok(())
}
