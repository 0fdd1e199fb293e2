use std::process::Command;

use serde_json::Value;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");
const SCHEMA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schema/report.schema.json");
const SB: &str = "http://example.org/sleuth/speckled-band/";

fn fx(name: &str) -> String {
    format!("{FIXTURES}/{name}")
}

fn run(args: &[&str]) -> (u8, String) {
    let mut out = Vec::new();
    let mut argv = vec!["sleuth"];
    argv.extend_from_slice(args);
    let code = sleuth_cli::run(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn structured(args: &[&str]) -> (u8, Value) {
    let mut full = vec!["--format", "structured"];
    full.extend_from_slice(args);
    let (code, text) = run(&full);
    (code, serde_json::from_str(&text).unwrap())
}

/// Checks the keywords the report schema uses: type, enum, required,
/// properties, additionalProperties, items and uniqueItems.
fn conforms(schema: &Value, v: &Value) -> Result<(), String> {
    if let Some(t) = schema.get("type").and_then(Value::as_str) {
        let ok = match t {
            "object" => v.is_object(),
            "array" => v.is_array(),
            "string" => v.is_string(),
            "number" => v.is_number(),
            "boolean" => v.is_boolean(),
            _ => false,
        };
        if !ok {
            return Err(format!("{v} is not {t}"));
        }
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(v) {
            return Err(format!("{v} not in enum"));
        }
    }
    if let Some(obj) = v.as_object() {
        for key in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            if !obj.contains_key(key.as_str().unwrap()) {
                return Err(format!("missing {key}"));
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        for (k, child) in obj {
            match props.and_then(|p| p.get(k)) {
                Some(s) => conforms(s, child)?,
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("unexpected {k}"))
                }
                None => {}
            }
        }
    }
    if let Some(items) = v.as_array() {
        if let Some(s) = schema.get("items") {
            for item in items {
                conforms(s, item)?;
            }
        }
        if schema.get("uniqueItems") == Some(&Value::Bool(true)) {
            for (i, a) in items.iter().enumerate() {
                if items[..i].contains(a) {
                    return Err(format!("duplicate {a}"));
                }
            }
        }
    }
    Ok(())
}

fn all_subcommands() -> Vec<Vec<String>> {
    let g = fx("speckled_band.ttl");
    let r = fx("mom.rules");
    [
        vec!["validate", &g],
        vec!["query", &g, "--pattern", &fx("stay.pattern")],
        vec!["mom", &g, "--rules", &r],
        vec!["sat", &fx("scenario.spec"), "--backbone", "--weighted", "--enumerate"],
        vec!["tucker", &g, "--top-k", "5"],
        vec!["ibis", &g, "--rules", &r],
        vec!["eval", "--table", &fx("table2.csv"), "--paired-t", "A", "C"],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect()
}

#[test]
fn every_structured_report_matches_the_schema_and_is_deterministic() {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(SCHEMA).unwrap()).unwrap();
    for args in all_subcommands() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, doc) = structured(&args);
        assert_eq!(code, 0, "{args:?}");
        conforms(&schema, &doc).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert_eq!(doc["pipeline"], args[0]);
        let mut again = vec!["--format", "structured"];
        again.extend_from_slice(&args);
        assert_eq!(run(&again).1, run(&again).1, "{args:?}");
    }
}

#[test]
fn schema_checker_rejects_bad_reports() {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(SCHEMA).unwrap()).unwrap();
    let good =
        serde_json::json!({"pipeline": "mom", "conclusion": [], "scenes_used": [], "steps": {}, "diagnostics": []});
    assert!(conforms(&schema, &good).is_ok());
    let mut extra = good.clone();
    extra["extra"] = Value::Null;
    assert!(conforms(&schema, &extra).is_err());
    let mut dup = good.clone();
    dup["scenes_used"] = serde_json::json!(["a", "a"]);
    assert!(conforms(&schema, &dup).is_err());
    let mut unknown = good;
    unknown["pipeline"] = "oracle".into();
    assert!(conforms(&schema, &unknown).is_err());
}

#[test]
fn validate_fixture() {
    let (code, text) = run(&["validate", &fx("speckled_band.ttl")]);
    assert_eq!((code, text.as_str()), (0, "0 violations\n"));
}

#[test]
fn validate_reports_violations_with_exit_one() {
    let dir = std::env::temp_dir().join(format!("sleuth-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.ttl");
    std::fs::write(
        &bad,
        "@prefix kgc: <http://kgc.knowledge-graph.jp/ontology/kgc.owl#> .\n<http://ex.org/s> a kgc:Statement .\n",
    )
    .unwrap();
    let (code, text) = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(
        text.contains("NO_PRED_PROP") && text.contains("MISSING_INFOSOURCE"),
        "{text}"
    );
    assert!(text.ends_with("2 violations\n"));
}

#[test]
fn query_fixture() {
    let (code, doc) = structured(&["query", &fx("speckled_band.ttl"), "--pattern", &fx("stay.pattern")]);
    assert_eq!(code, 0);
    assert_eq!(doc["steps"]["bindings"].as_array().unwrap().len(), 4);
    assert_eq!(doc["steps"]["vars"], serde_json::json!(["place", "s", "who"]));
}

#[test]
fn mom_names_roylott_money_and_venom() {
    let (code, text) = run(&["mom", &fx("speckled_band.ttl"), "--rules", &fx("mom.rules")]);
    assert_eq!(code, 0);
    assert!(text.contains("top suspects: :Roylott\n"), "{text}");
    assert!(text.contains(":Roylott against :Julia: money"));
    assert!(text.contains(":Roylott by venom killing"));
}

#[test]
fn mom_with_explicit_incident() {
    let g = fx("speckled_band.ttl");
    let r = fx("mom.rules");
    let (_, a) = run(&["mom", &g, "--rules", &r]);
    let (_, b) = run(&["mom", &g, "--rules", &r, "--incident", ":s20"]);
    let full = format!("{SB}s20");
    let (_, c) = run(&["mom", &g, "--rules", &r, "--incident", &full]);
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn sat_backbone_has_roylott_on_both_days() {
    let (code, text) = run(&["sat", &fx("scenario.spec"), "--backbone"]);
    assert_eq!(code, 0);
    assert!(text.contains("\n  guilty(Roylott, JuliaDeath)\n"));
    assert!(text.contains("\n  guilty(Roylott, HelenAttempt)\n"));
    assert!(text.starts_with("SAT, 4 models\n"));
}

#[test]
fn sat_model_limit_truncates() {
    let (code, doc) = structured(&["sat", &fx("scenario.spec"), "--max-models", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["steps"]["report"]["models"], 2);
    assert_eq!(doc["steps"]["report"]["truncated"], true);
    assert_eq!(doc["diagnostics"].as_array().unwrap().len(), 1);
}

#[test]
fn tucker_lines_are_tab_separated() {
    let (code, text) = run(&["tucker", &fx("speckled_band.ttl"), "--top-k", "3", "--seed", "7"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(lines.len(), 3);
    for l in lines {
        let cols: Vec<&str> = l.split('\t').collect();
        assert_eq!(cols.len(), 4);
        let score = cols[0];
        assert_eq!(score.split_once('.').unwrap().1.len(), 6);
    }
}

#[test]
fn ibis_exports_round_trip() {
    let dir = std::env::temp_dir().join(format!("sleuth-ibis-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (json, dot) = (dir.join("ibis.json"), dir.join("ibis.dot"));
    let (code, doc) = structured(&[
        "ibis",
        &fx("speckled_band.ttl"),
        "--rules",
        &fx("mom.rules"),
        "--export",
        json.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["conclusion"], serde_json::json!([format!("{SB}Roylott")]));
    let exported: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(exported, doc["steps"]["ibis"]);
    let back = sleuth_core::ibis::IbisGraph::import(&exported).unwrap();
    assert_eq!(back.export(), exported);
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph ibis {"));
}

#[test]
fn eval_reads_a_trace_written_by_mom() {
    let dir = std::env::temp_dir().join(format!("sleuth-eval-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let trace = dir.join("mom.json");
    let (code, _) = run(&[
        "--format",
        "structured",
        "--out",
        trace.to_str().unwrap(),
        "mom",
        &fx("speckled_band.ttl"),
        "--rules",
        &fx("mom.rules"),
    ]);
    assert_eq!(code, 0);
    let truth = format!("{SB}Roylott");
    let (code, text) = run(&["eval", "--trace", trace.to_str().unwrap(), "--truth", &truth]);
    assert_eq!(code, 0);
    assert_eq!(text, "pipeline mom: knowledge usage 10\ncorrectness: correct\n");
}

#[test]
fn eval_table2() {
    let (code, text) = run(&["eval", "--table", &fx("table2.csv")]);
    assert_eq!(code, 0);
    let averages: Vec<&str> = text.lines().skip(1).map(|l| l.rsplit('\t').next().unwrap()).collect();
    assert_eq!(averages, ["3.31", "3.45", "4.1"]);
}

#[test]
fn exit_codes_from_the_binary() {
    let bin = env!("CARGO_BIN_EXE_sleuth");
    let no_args = Command::new(bin).output().unwrap();
    assert_eq!(no_args.status.code(), Some(2));
    assert!(!no_args.stderr.is_empty());

    let missing = Command::new(bin)
        .args(["validate", "/nonexistent.ttl"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let bad_ranks = Command::new(bin)
        .args(["tucker", &fx("speckled_band.ttl"), "--ranks", "0,1,1"])
        .output()
        .unwrap();
    assert_eq!(bad_ranks.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad_ranks.stderr).starts_with("RANK_OUT_OF_RANGE"));

    let unsat_dir = std::env::temp_dir().join(format!("sleuth-unsat-{}", std::process::id()));
    std::fs::create_dir_all(&unsat_dir).unwrap();
    let spec = unsat_dir.join("unsat.spec");
    std::fs::write(&spec, "domain d = {a}\npred p(d)\naxiom p(a).\naxiom !p(a).\n").unwrap();
    let unsat = Command::new(bin)
        .args(["sat", spec.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(unsat.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&unsat.stdout), "UNSAT\n");

    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
