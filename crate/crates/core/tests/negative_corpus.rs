//! Invalid inputs are rejected with the right code and location.

use std::path::PathBuf;

use flowsort_h::{ErrorCode, Problem};
use serde_json::{json, Value};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn appendix() -> Value {
    let text = std::fs::read_to_string(fixtures().join("appendix_a.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn shipped_invalid_fixtures() {
    let expected = [
        ("overlapping_profiles.json", ErrorCode::ProfileOverlap, "profiles.criteria.g2/g2.1"),
        ("non_dominant_profiles.json", ErrorCode::ProfileDominance, "profiles.criteria.g1/g1.1"),
        ("bad_ranks.json", ErrorCode::InvalidRanks, "tree.weights.ordinal[0]"),
        ("missing_evaluation.json", ErrorCode::MissingEvaluation, "alternatives[1].values.g2/g2.2"),
    ];
    let dir = fixtures().join("invalid");
    let mut seen = 0;
    for (file, code, path) in expected {
        let err = Problem::from_path(dir.join(file)).expect_err(file);
        assert_eq!(err.code(), code, "{file}: {err}");
        assert_eq!(err.path(), Some(path), "{file}: {err}");
        seen += 1;
    }
    let on_disk = std::fs::read_dir(&dir).unwrap().count();
    assert_eq!(seen, on_disk, "every file in fixtures/invalid needs an expectation");
}

#[test]
fn missing_file_is_io() {
    let err = Problem::from_path(fixtures().join("does_not_exist.json")).unwrap_err();
    assert_eq!(err.code(), ErrorCode::Io);
    assert_eq!(err.code().exit_status(), 2);
}

#[test]
fn malformed_json_is_schema() {
    let err = Problem::from_json_str("{\"schema\": 1, ").unwrap_err();
    assert_eq!(err.code(), ErrorCode::Schema);
    assert_eq!(err.code().exit_status(), 1);
}

type Mutation = fn(&mut Value);

#[test]
fn mutated_appendix() {
    let cases: Vec<(&str, Mutation, ErrorCode)> = vec![
        ("unknown top-level key", |d| d["colour"] = json!("blue"), ErrorCode::Schema),
        ("unsupported schema version", |d| d["schema"] = json!(2), ErrorCode::Schema),
        ("empty tree", |d| d["tree"]["criteria"] = json!([]), ErrorCode::EmptyTree),
        ("duplicate sibling", |d| d["tree"]["criteria"][1]["label"] = json!("g1"), ErrorCode::DuplicateLabel),
        ("weights not summing to one", |d| d["tree"]["weights"] = json!({"deterministic": [0.3, 0.6]}), ErrorCode::WeightSpec),
        ("weight count", |d| d["tree"]["weights"] = json!({"deterministic": [1.0]}), ErrorCode::WeightSpec),
        ("zero rank", |d| d["tree"]["weights"] = json!({"ordinal": [0, 1]}), ErrorCode::InvalidRanks),
        ("empty interval intersection", |d| d["tree"]["weights"] = json!({"interval": [[0.0, 0.2], [0.0, 0.3]]}), ErrorCode::WeightSpec),
        ("q above p", |d| d["preferences"]["default"] = json!({"shape": "level", "q": 3, "p": 1}), ErrorCode::Threshold),
        ("unknown node in preferences", |d| d["preferences"]["criteria"]["g3"] = json!({"shape": "usual"}), ErrorCode::UnknownNode),
        ("profile count", |d| d["profiles"]["criteria"]["g1/g1.1"] = json!([10, 5, 2, 0]), ErrorCode::ProfileCount),
        ("evaluation outside profiles", |d| d["alternatives"][0]["values"][0] = json!(11), ErrorCode::EvaluationOutOfBounds),
        ("evaluation count", |d| d["alternatives"][0]["values"] = json!([8, 1, 16]), ErrorCode::MissingEvaluation),
        ("unknown term", |d| d["alternatives"][0]["values"][0] = json!("high"), ErrorCode::UnknownTerm),
        ("negative spread", |d| d["alternatives"][0]["values"][0] = json!({"tfn": [8, -1, 0]}), ErrorCode::Schema),
        ("bad rule", |d| d["smaa"]["rule"] = json!("best"), ErrorCode::Schema),
        (
            "non-monotone scale",
            |d| d["scales"] = json!({"s": [{"term": "a", "tfn": [8, 0, 0]}, {"term": "b", "tfn": [1, 0, 0]}, {"term": "c", "tfn": [2, 0, 0]}]}),
            ErrorCode::ScaleOrder,
        ),
    ];
    for (name, mutate, code) in cases {
        let mut doc = appendix();
        mutate(&mut doc);
        match Problem::from_json(&doc) {
            Ok(_) => panic!("{name}: accepted"),
            Err(e) => assert_eq!(e.code(), code, "{name}: {e}"),
        }
    }
}
