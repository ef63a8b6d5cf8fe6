//! Writes `fixtures/case_study_synthetic.json`: the maturity-assessment
//! structure (nine processes, each split into existence and five inputs),
//! the nine-term maturity scale, four categories and ordinal priorities,
//! with evaluations for eight institutions drawn from a fixed seed.
//!
//! The evaluations are synthetic. Each institution gets a base maturity, each
//! process a shift around it, and each elementary criterion a small jitter;
//! the result is rounded to the nearest scale term.
//!
//! ```text
//! cargo run -p flowsort-h --example gen_case_study -- fixtures/case_study_synthetic.json
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

const SEED: u64 = 20_190_501;

const PROCESSES: [&str; 9] = ["PP", "TW", "PN", "ProjM", "PE", "PortM", "IPM", "CM", "THR"];
const PROCESS_RANKS: [u32; 9] = [1, 2, 1, 2, 1, 2, 3, 3, 3];
const INPUTS: [&str; 5] = ["IF", "HR", "CR", "WP", "IR"];
const INPUT_RANKS: [u32; 5] = [2, 2, 3, 4, 1];

/// Maturity terms from the top of the scale down, with their modes.
const TERMS: [(&str, f64); 9] = [
    ("EM", 8.0),
    ("HM", 7.0),
    ("VM", 6.0),
    ("SM", 5.0),
    ("M", 4.0),
    ("SI", 3.0),
    ("VI", 2.0),
    ("HI", 1.0),
    ("EI", 0.0),
];

/// Base maturity per institution, chosen to spread them over the categories.
const BASES: [f64; 8] = [4.6, 2.2, 5.6, 3.8, 1.4, 2.0, 1.0, 2.6];

fn term_for(level: f64) -> &'static str {
    let idx = (8.0 - level.clamp(0.0, 8.0)).round() as usize;
    TERMS[idx].0
}

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "fixtures/case_study_synthetic.json".to_owned());
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let scale: Vec<Value> = TERMS
        .iter()
        .map(|&(t, m)| {
            let (a, b) = match t {
                "EM" => (0.75, 0.0),
                "EI" => (0.0, 0.75),
                _ => (0.75, 0.75),
            };
            json!({"term": t, "tfn": [m, a, b]})
        })
        .collect();

    let criteria: Vec<Value> = PROCESSES
        .iter()
        .map(|p| {
            json!({
                "label": p,
                "weights": {"deterministic": [0.6, 0.4]},
                "criteria": [
                    {"label": "existence"},
                    {
                        "label": "inputs",
                        "weights": {"ordinal": INPUT_RANKS},
                        "criteria": INPUTS.iter().map(|i| json!({"label": i})).collect::<Vec<_>>()
                    }
                ]
            })
        })
        .collect();

    let alternatives: Vec<Value> = BASES
        .iter()
        .enumerate()
        .map(|(i, &base)| {
            let mut values = Map::new();
            for p in PROCESSES {
                let process_level = base + rng.random_range(-1.5..=1.5);
                values.insert(format!("{p}/existence"), json!(term_for(process_level + rng.random_range(-1.0..=1.0))));
                for input in INPUTS {
                    values.insert(format!("{p}/inputs/{input}"), json!(term_for(process_level + rng.random_range(-1.0..=1.0))));
                }
            }
            json!({"name": format!("Inst. {}", i + 1), "values": values})
        })
        .collect();

    let doc = json!({
        "schema": 1,
        "description": format!("Synthetic evaluations generated with seed {SEED}; not data from any real assessment."),
        "categories": ["C1", "C2", "C3", "C4"],
        "scales": {"maturity": scale},
        "default_scale": "maturity",
        "tree": {"weights": {"ordinal": PROCESS_RANKS}, "criteria": criteria},
        "preferences": {"default": {"shape": "usual"}},
        "profiles": {"default": [8, "HM", "SM", "SI", 0]},
        "alternatives": alternatives,
        "smaa": {"iterations": 10000, "seed": 0, "rule": "net", "threshold": 0.5}
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    std::fs::write(&out, text).unwrap_or_else(|e| panic!("cannot write {out}: {e}"));
    println!("wrote {out}");
}
