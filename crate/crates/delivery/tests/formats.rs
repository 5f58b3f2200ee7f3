use std::path::Path;

use delivery::dimacs::parse_dimacs;
use delivery::doc::{emit_instance, emit_result, parse_instance, parse_result, parse_schedule};
use delivery::generate::{random_graph, random_tree, GenParams};
use delivery::solve::{solve, Algorithm, SolveOptions};
use delivery_core::Variant;
use proptest::prelude::*;

fn corpus(dir: &str, ext: &str) -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(dir);
    let mut out: Vec<(String, String)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == ext))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

#[test]
fn instance_corpus_reaches_a_fixed_point() {
    for (name, text) in corpus("instances", "json") {
        let inst = parse_instance(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let canonical = emit_instance(&inst);
        assert_eq!(parse_instance(&canonical).unwrap(), inst, "{name}");
        assert_eq!(emit_instance(&parse_instance(&canonical).unwrap()), canonical, "{name}");
        // Same content with keys shuffled and whitespace dropped.
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(emit_instance(&parse_instance(&value.to_string()).unwrap()), canonical, "{name}");
    }
}

#[test]
fn non_lowest_terms_are_normalized() {
    let text = r#"{"version":"delivery-instance/1","vertices":2,"edges":[[1,0,"6/4"]],"source":0,"target":1,
        "variant":"non-returning","agents":[{"at":[0,"2/4"],"budget":"8/2"}]}"#;
    let out = emit_instance(&parse_instance(text).unwrap());
    assert!(out.contains("\"3/2\"") && out.contains("\"1/2\"") && out.contains("\"4\""), "{out}");
    assert!(out.contains("[\n      0,\n      1,"), "{out}");
}

#[test]
fn cnf_corpus_parses() {
    let cnfs = corpus("cnf", "cnf");
    assert!(cnfs.len() >= 5);
    for (name, text) in cnfs {
        let cnf = parse_dimacs(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(cnf.num_vars() <= 3 && cnf.clauses().len() <= 3, "{name}");
    }
}

fn params(n: usize, k: usize, nonreturning: bool) -> GenParams {
    let variant = if nonreturning { Variant::NonReturning } else { Variant::Returning };
    GenParams { vertices: n, agents: k, extra_edges: 2, variant, ..Default::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_instances_round_trip(seed in any::<u64>(), n in 2usize..10, k in 0usize..5, nr in any::<bool>(), tree in any::<bool>()) {
        let p = params(n, k, nr);
        let inst = if tree { random_tree(seed, &p) } else { random_graph(seed, &p) };
        let text = emit_instance(&inst);
        prop_assert_eq!(parse_instance(&text).unwrap(), inst);
        prop_assert_eq!(emit_instance(&parse_instance(&text).unwrap()), text);
    }

    #[test]
    fn results_round_trip(seed in any::<u64>(), n in 2usize..8, k in 1usize..4) {
        let inst = random_tree(seed, &params(n, k, false));
        for algo in [Algorithm::Tree, Algorithm::Aug2, Algorithm::Exact] {
            let r = solve(&inst, algo, &SolveOptions::default()).unwrap();
            let text = emit_result(&r);
            let back = parse_result(&text, inst.graph()).unwrap();
            prop_assert_eq!(&back, &r);
            prop_assert_eq!(emit_result(&back), text.clone());
            if let Some(s) = &r.schedule {
                prop_assert_eq!(&parse_schedule(&text, inst.graph()).unwrap(), s);
            }
        }
    }
}
