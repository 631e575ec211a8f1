//! The model language end to end: parse a model from a string, see how
//! errors come back located, round-trip through the canonical serializer,
//! and load a model file from the gallery.
//!
//! ```bash
//! cargo run -p chtw --example dsl_tour
//! ```

use std::path::Path;

use chtw::dsl;

const MODEL: &str = r#"
# two coupled branes on a shared 1-D space
space X {
  axis x min 0 max 1 cells 5;
}

cbrane upstream on X { init box [0, 0.4] axis x inside 6 outside 0; }
cbrane downstream on X { init const 0; }

tbrane flow on X {
  rate schedule { 0: const 1, 4: const 2 };   # uptake doubles at step 4
}

hcarrier h upstream -> flow { threshold const 0.5; }

wcarrier w flow -> downstream {
  mode pointwise;
  gain const 1;
}
"#;

fn main() {
    let system = dsl::parse(MODEL).unwrap();
    println!(
        "parsed: {} spaces, {} C-branes, {} T-branes, {} H-carriers, {} W-carriers",
        system.spaces().len(),
        system.cbranes().len(),
        system.tbranes().len(),
        system.hcarriers().len(),
        system.wcarriers().len()
    );
    println!("upstream init: {:?}", system.cbrane("upstream").unwrap().initial);

    // canonical serialization: const/values forms, registration order
    let canonical = dsl::serialize(&system);
    println!("\ncanonical form:\n{canonical}");
    let reparsed = dsl::parse(&canonical).unwrap();
    assert_eq!(system, reparsed);
    println!("round trip: parse(serialize(system)) == system\n");

    // malformed input comes back as located errors, never a panic
    let broken = "space X {\n  axis x min 0 max 1 cells;\n}\ncbrane c on Q { init const 1; }\n";
    match dsl::parse(broken) {
        Ok(_) => unreachable!(),
        Err(errors) => {
            println!("errors in the broken model:");
            for e in &errors {
                println!("  line {}, col {}: [{}] {}", e.line, e.col, e.code, e.message);
            }
        }
    }

    // gallery models live in the crate's models/ directory
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("models/feedback_spatial.chtw");
    let spatial = dsl::parse_file(&path).unwrap();
    println!(
        "\nloaded {}: branes of dimension {:?}",
        path.file_name().unwrap().to_string_lossy(),
        spatial
            .cbranes()
            .iter()
            .map(|b| spatial.space(&b.space).unwrap().dimension())
            .collect::<Vec<_>>()
    );
}
