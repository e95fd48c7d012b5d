//! JSON wire formats for grids, bodies, tensors, measures, and reports,
//! plus CSV export for the tabular ones.
//!
//! Field order in the structs fixes the byte layout of every report, so
//! identical inputs always serialize identically.

use dualvol_core::{Error as CoreError, PolyMeasure, SphereGrid, StarBodySpec};
use serde::{Deserialize, Serialize};

/// `{"dim": n, "nodes": [[x,y,...],...], "weights": [...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridJson {
    pub dim: usize,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl GridJson {
    pub fn from_grid(grid: &SphereGrid) -> Self {
        GridJson {
            dim: grid.dim(),
            nodes: grid.nodes().to_vec(),
            weights: grid.weights().to_vec(),
        }
    }

    pub fn into_grid(self) -> Result<SphereGrid, CoreError> {
        SphereGrid::new(self.dim, self.nodes, self.weights)
    }
}

/// Body specs, tagged by `shape`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodyJson {
    Ball {
        r: f64,
    },
    Ellipsoid {
        axes: Vec<f64>,
    },
    Hpolytope {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
    },
    Capbump {
        center: Vec<f64>,
        alpha: f64,
        h: f64,
    },
    Radialsum {
        terms: Vec<BodyTermJson>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BodyTermJson {
    pub lambda: f64,
    pub body: BodyJson,
}

impl BodyJson {
    pub fn into_spec(self) -> StarBodySpec {
        match self {
            BodyJson::Ball { r } => StarBodySpec::Ball { radius: r },
            BodyJson::Ellipsoid { axes } => StarBodySpec::Ellipsoid { semi_axes: axes },
            BodyJson::Hpolytope { a, b } => StarBodySpec::HPolytope {
                normals: a,
                offsets: b,
            },
            BodyJson::Capbump { center, alpha, h } => StarBodySpec::CapBump {
                center,
                width: alpha,
                height: h,
            },
            BodyJson::Radialsum { terms } => StarBodySpec::RadialSum {
                terms: terms
                    .into_iter()
                    .map(|t| (t.lambda, t.body.into_spec()))
                    .collect(),
            },
        }
    }

    pub fn from_spec(spec: &StarBodySpec) -> Self {
        match spec {
            StarBodySpec::Ball { radius } => BodyJson::Ball { r: *radius },
            StarBodySpec::Ellipsoid { semi_axes } => BodyJson::Ellipsoid {
                axes: semi_axes.clone(),
            },
            StarBodySpec::HPolytope { normals, offsets } => BodyJson::Hpolytope {
                a: normals.clone(),
                b: offsets.clone(),
            },
            StarBodySpec::CapBump {
                center,
                width,
                height,
            } => BodyJson::Capbump {
                center: center.clone(),
                alpha: *width,
                h: *height,
            },
            StarBodySpec::RadialSum { terms } => BodyJson::Radialsum {
                terms: terms
                    .iter()
                    .map(|(lambda, body)| BodyTermJson {
                        lambda: *lambda,
                        body: BodyJson::from_spec(body),
                    })
                    .collect(),
            },
        }
    }
}

/// `{"order": m, "atoms": k, "entries": [flat row-major]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorJson {
    pub order: usize,
    pub atoms: usize,
    pub entries: Vec<f64>,
}

impl TensorJson {
    pub fn from_polymeasure(gamma: &PolyMeasure) -> Self {
        TensorJson {
            order: gamma.order(),
            atoms: gamma.num_atoms(),
            entries: gamma.entries().to_vec(),
        }
    }

    pub fn into_polymeasure(self) -> Result<PolyMeasure, CoreError> {
        PolyMeasure::new(self.order, self.atoms, self.entries)
    }
}

/// Node-level measure: `{"masses": [...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureJson {
    pub masses: Vec<f64>,
}

/// Backing file for `characterize`, detected by its fields.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum BackingJson {
    Measure(MeasureJson),
    Tensor(TensorJson),
}

/// Flags the invocation ran with, embedded in every report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigJson {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_res: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_rel: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
}

impl ConfigJson {
    pub fn new(command: &str) -> Self {
        ConfigJson {
            command: command.to_string(),
            dim: None,
            grid_res: None,
            tol_rel: None,
            seed: None,
            trials: None,
            mode: None,
            suite: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DmvReport {
    pub config: ConfigJson,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LutwakReportJson {
    pub config: ConfigJson,
    pub direct: f64,
    pub expanded: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PmVariationReport {
    pub config: ConfigJson,
    pub variation: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PmSemivariationReport {
    pub config: ConfigJson,
    pub value: f64,
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PmDecomposeReport {
    pub config: ConfigJson,
    pub positive: TensorJson,
    pub negative: TensorJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PmDiagonalReport {
    pub config: ConfigJson,
    pub diagonal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub masses: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PmProductReport {
    pub config: ConfigJson,
    pub product: TensorJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub max_violation: f64,
    pub scale: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckJson {
    pub fn from_report(r: &dualvol_core::CheckReport) -> Self {
        CheckJson {
            name: r.name.to_string(),
            max_violation: r.max_violation,
            scale: r.scale,
            pass: r.pass,
            witness: r.witness.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharacterizeReport {
    pub config: ConfigJson,
    pub checks: Vec<CheckJson>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecoverReport {
    pub config: ConfigJson,
    pub degree: usize,
    pub masses: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReduceReportJson {
    pub config: ConfigJson,
    pub c: f64,
    pub residual: f64,
    pub invariance_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionJson {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AcceptReport {
    pub config: ConfigJson,
    pub criteria: Vec<CriterionJson>,
    pub pass: bool,
}

/// Minimal CSV quoting: fields with commas, quotes, or newlines get quoted.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_rows(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let quoted: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
        out.push_str(&quoted.join(","));
        out.push('\n');
    }
    out
}

pub fn grid_csv(grid: &GridJson) -> String {
    let mut header: Vec<String> = (0..grid.dim).map(|i| format!("x{i}")).collect();
    header.push("weight".to_string());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = grid
        .nodes
        .iter()
        .zip(&grid.weights)
        .map(|(node, w)| {
            let mut row: Vec<String> = node.iter().map(|x| format!("{x}")).collect();
            row.push(format!("{w}"));
            row
        })
        .collect();
    csv_rows(&header_refs, &rows)
}

pub fn characterize_csv(report: &CharacterizeReport) -> String {
    let rows: Vec<Vec<String>> = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                format!("{}", c.max_violation),
                format!("{}", c.scale),
                format!("{}", c.pass),
                c.witness.clone().unwrap_or_default(),
            ]
        })
        .collect();
    csv_rows(&["name", "max_violation", "scale", "pass", "witness"], &rows)
}

pub fn accept_csv(report: &AcceptReport) -> String {
    let rows: Vec<Vec<String>> = report
        .criteria
        .iter()
        .map(|c| {
            vec![
                format!("{}", c.id),
                c.name.clone(),
                format!("{}", c.pass),
                c.detail.clone(),
            ]
        })
        .collect();
    csv_rows(&["id", "name", "pass", "detail"], &rows)
}
