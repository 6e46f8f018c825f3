//! Parse a PlantUML class diagram, inspect it, and print it back.

use umlenrich::fixtures::INITIAL_PUML;
use umlenrich::plantuml::{parse, print, print_canonical};
use umlenrich::report::metrics;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = parse(INITIAL_PUML)?;
    let m = metrics(&model);
    println!(
        "{} classes, {} relationships, {} attributes",
        m.class_count,
        m.relationship_count,
        model.attribute_count()
    );

    let user = model.find_class("User").ok_or("no User class")?;
    for a in &user.attributes {
        println!("  User.{}: {}", a.name, a.type_name);
    }

    // `print` keeps source order; `print_canonical` sorts everything.
    let text = print(&model);
    assert!(parse(&text)?.canonical_equal(&model));
    println!(
        "\n{}",
        print_canonical(&model).lines().take(12).collect::<Vec<_>>().join("\n")
    );

    match parse("@startuml\nclass A {\n    +x string\n}\n@enduml\n") {
        Ok(_) => unreachable!(),
        Err(e) => println!("\nerror example: {e}"),
    }
    Ok(())
}
