//! Error-path coverage for the model language: each malformed fixture must
//! produce its specific diagnostic code with a usable location, and error
//! recovery must keep reporting past the first problem.

use std::path::{Path, PathBuf};

use chtw::dsl;
use chtw::model::DiagCode;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/bad")
        .join(name)
}

fn parse_fixture(name: &str) -> Vec<dsl::ParseError> {
    let path = fixture(name);
    let text = std::fs::read_to_string(&path).unwrap();
    dsl::parse_document(&text, path.parent())
        .err()
        .unwrap_or_else(|| panic!("{name} must fail to parse"))
}

#[test]
fn syntax_fixture_reports_each_statement() {
    let errors = parse_fixture("syntax.chtw");
    assert!(errors.iter().all(|e| e.code == DiagCode::SyntaxError));
    // one per broken statement: cells, init, threshold
    assert!(errors.len() >= 3, "{errors:?}");
    assert_eq!(errors[0].line, 2);
}

#[test]
fn unknown_reference_fixture() {
    let errors = parse_fixture("unknown_ref.chtw");
    let codes: Vec<DiagCode> = errors.iter().map(|e| e.code).collect();
    assert_eq!(codes, vec![DiagCode::UnknownReference; 3]);
    // unknown space, unknown T-brane target, unknown T-brane source
    assert_eq!(errors[0].line, 2);
    assert_eq!(errors[1].line, 4);
    assert_eq!(errors[2].line, 5);
}

#[test]
fn duplicate_id_fixture() {
    let errors = parse_fixture("dup_id.chtw");
    assert_eq!(errors.len(), 2);
    assert!(errors.iter().all(|e| e.code == DiagCode::DuplicateId));
}

#[test]
fn shape_mismatch_fixture() {
    let errors = parse_fixture("shape.chtw");
    assert!(errors
        .iter()
        .all(|e| e.code == DiagCode::FieldShapeMismatch));
    assert_eq!(errors.len(), 2); // field and kernel
}

#[test]
fn schedule_fixture() {
    let errors = parse_fixture("bad_schedule.chtw");
    // scheduled init, first key nonzero, non-increasing keys
    assert!(errors.len() >= 3, "{errors:?}");
    assert!(errors.iter().all(|e| e.code == DiagCode::SyntaxError));
}

#[test]
fn missing_csv_fixture() {
    let errors = parse_fixture("csv_missing.chtw");
    assert_eq!(errors.len(), 1);
    assert!(errors[0].message.contains("does_not_exist.csv"));
}

#[test]
fn recovery_continues_past_stray_tokens() {
    let errors = parse_fixture("stray_tokens.chtw");
    // stray punctuation, unknown keyword 'wobble', unknown statement 'flavor'
    assert!(errors.len() >= 3, "{errors:?}");
    let last = errors.last().unwrap();
    assert_eq!(last.line, 3, "recovery must reach the third declaration");
}

#[test]
fn csv_is_resolved_relative_to_the_model_file() {
    // diffusion_1d.chtw references data/ next to it; parsing from another
    // working directory must still find the files
    let model = Path::new(env!("CARGO_MANIFEST_DIR")).join("models/diffusion_1d.chtw");
    let system = dsl::parse_file(&model).unwrap();
    assert_eq!(system.cbrane("blob").unwrap().initial.len(), 10);

    // the same text parsed without a base directory cannot find them
    let text = std::fs::read_to_string(&model).unwrap();
    assert!(dsl::parse(&text).is_err());
}

#[test]
fn document_tracks_declaration_locations() {
    let text = "space X {}\ncbrane c on X { init const 1; }\n";
    let doc = dsl::parse_document(text, None).unwrap();
    let ids: Vec<&str> = doc.declarations.iter().map(|(id, _)| id.as_str()).collect();
    assert_eq!(ids, ["X", "c"]);
    assert_eq!(doc.declarations[1].1.line, 2);
    assert_eq!(doc.source, text);
}

#[test]
fn arbitrary_garbage_never_panics() {
    // a rough corpus of junk inputs; success here is simply not crashing
    let inputs = [
        "",
        "{}{}{}",
        "space",
        "space {",
        "cbrane x on",
        "hcarrier -> -> {",
        "space X { axis axis axis }",
        "values [1,2,",
        "schedule { 0: }",
        "wcarrier w a -> b { mode kernel; kernel csv \"\"; }",
        "\u{1F600} space X {}",
        "space X {} cbrane c on X { init values [1e309]; }",
    ];
    for text in inputs {
        let _ = dsl::parse(text);
    }
}
