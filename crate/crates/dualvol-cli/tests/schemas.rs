//! Every subcommand's JSON report must validate against its schema file
//! under schemas/ at the workspace root.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use jsonschema::{Retrieve, Uri, Validator};
use serde_json::Value;

fn schemas_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

/// Resolves any $ref by its file name inside schemas/.
struct DirRetriever {
    schemas: HashMap<String, Value>,
}

impl DirRetriever {
    fn load() -> Self {
        let mut schemas = HashMap::new();
        for entry in fs::read_dir(schemas_dir()).unwrap() {
            let path = entry.unwrap().path();
            if path.extension().is_some_and(|e| e == "json") {
                let value: Value =
                    serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
                schemas.insert(
                    path.file_name().unwrap().to_str().unwrap().to_string(),
                    value,
                );
            }
        }
        Self { schemas }
    }
}

impl Retrieve for DirRetriever {
    fn retrieve(
        &self,
        uri: &Uri<String>,
    ) -> Result<Value, Box<dyn std::error::Error + Send + Sync>> {
        let name = uri.as_str().rsplit('/').next().unwrap_or(uri.as_str());
        self.schemas
            .get(name)
            .cloned()
            .ok_or_else(|| format!("schema not found: {uri}").into())
    }
}

fn validator(schema_file: &str) -> Validator {
    let path = schemas_dir().join(schema_file);
    let schema: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    jsonschema::options()
        .with_retriever(DirRetriever::load())
        .build(&schema)
        .unwrap_or_else(|e| panic!("{schema_file}: {e}"))
}

fn assert_valid(schema_file: &str, instance: &Value) {
    let v = validator(schema_file);
    if let Err(e) = v.validate(instance) {
        panic!("{schema_file} rejected report: {e}");
    }
}

fn report_for(args: &[&str], dir: &Path) -> Value {
    let out_path = dir.join("report.json");
    let mut full: Vec<&str> = args.to_vec();
    let out_str = out_path.to_str().unwrap().to_string();
    full.push("--out");
    full.push(&out_str);
    let out = Command::new(env!("CARGO_BIN_EXE_dualvol"))
        .args(&full)
        .output()
        .expect("binary runs");
    // exit 1 still writes a report; only usage errors leave none
    assert_ne!(
        out.status.code(),
        Some(2),
        "usage error: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap()
}

#[test]
fn every_subcommand_report_validates() {
    let dir = tempfile::tempdir().unwrap();
    let balls = dir.path().join("balls.json");
    fs::write(
        &balls,
        r#"[{"shape":"ball","r":1.0},{"shape":"ball","r":1.0}]"#,
    )
    .unwrap();
    let balls = balls.to_str().unwrap();
    let tensor = dir.path().join("tensor.json");
    fs::write(&tensor, r#"{"order":2,"atoms":2,"entries":[1.0,0.5,0.0,-1.0]}"#).unwrap();
    let tensor = tensor.to_str().unwrap();
    let diag = dir.path().join("diag.json");
    fs::write(&diag, r#"{"order":2,"atoms":2,"entries":[1.0,0.0,0.0,-1.0]}"#).unwrap();
    let diag = diag.to_str().unwrap();
    let measure = dir.path().join("measure.json");
    let w = 2.0 * std::f64::consts::PI / 8.0;
    let masses: Vec<f64> = (0..8).map(|_| 0.5 * w / 2.0).collect();
    fs::write(
        &measure,
        serde_json::json!({ "masses": masses }).to_string(),
    )
    .unwrap();
    let measure = measure.to_str().unwrap();

    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("grid.schema.json", vec!["grid", "--dim", "2", "--grid-res", "8"]),
        ("dmv.schema.json", vec!["dmv", "--bodies", balls]),
        (
            "lutwak.schema.json",
            vec!["lutwak", "--bodies", balls, "--lambdas", "1.0,0.5"],
        ),
        ("pm-variation.schema.json", vec!["pm", "variation", "--tensor", tensor]),
        (
            "pm-semivariation.schema.json",
            vec!["pm", "semivariation", "--tensor", tensor, "--mode", "exact"],
        ),
        ("pm-decompose.schema.json", vec!["pm", "decompose", "--tensor", tensor]),
        ("pm-diagonal.schema.json", vec!["pm", "diagonal", "--tensor", tensor]),
        ("pm-diagonal.schema.json", vec!["pm", "diagonal", "--tensor", diag]),
        ("pm-product.schema.json", vec!["pm", "product", "--tensor", tensor]),
        (
            "characterize.schema.json",
            vec![
                "characterize",
                "--backing",
                measure,
                "--arity",
                "2",
                "--grid-res",
                "8",
                "--trials",
                "4",
            ],
        ),
        ("recover.schema.json", vec!["recover", "--poly-from", measure]),
        ("reduce.schema.json", vec!["reduce", "--measure", measure]),
        ("accept.schema.json", vec!["accept", "--suite", "1,5", "--seed", "0"]),
    ];
    for (schema, args) in cases {
        let report = report_for(&args, dir.path());
        assert_valid(schema, &report);
    }
}

#[test]
fn body_inputs_validate_against_body_schema() {
    let bodies: Value = serde_json::json!([
        {"shape": "ball", "r": 1.0},
        {"shape": "ellipsoid", "axes": [2.0, 1.0, 0.5]},
        {"shape": "hpolytope", "A": [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], "b": [1.0, 1.0, 1.0, 1.0]},
        {"shape": "capbump", "center": [1.0, 0.0], "alpha": 0.5, "h": 1.0},
        {"shape": "radialsum", "terms": [
            {"lambda": 2.0, "body": {"shape": "ball", "r": 1.0}},
            {"lambda": 0.5, "body": {"shape": "ellipsoid", "axes": [1.0, 2.0]}}
        ]}
    ]);
    let v = validator("body.schema.json");
    for body in bodies.as_array().unwrap() {
        assert!(v.validate(body).is_ok(), "rejected {body}");
    }
    assert!(v
        .validate(&serde_json::json!({"shape": "ball", "r": -1.0}))
        .is_err());
    assert!(v
        .validate(&serde_json::json!({"shape": "cube", "side": 1.0}))
        .is_err());
}
