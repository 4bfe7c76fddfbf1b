//! File formats: game JSON, decomposition-parts JSON, trajectory and
//! sweep CSVs, and reproducibility manifests.
//!
//! Game JSON: `{"m": 3, "n": 3, "A": [[..]], "B": [[..]]}`, row-major.
//! Entries are JSON numbers in the float backend and decimal or
//! fraction strings (e.g. `"5/6"`) in the exact backend; both backends
//! accept either form on input.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::cfp::CfpTrajectory;
use crate::decompose::{HodgeParts, StrategicParts};
use crate::dfp::Trajectory;
use crate::equivalence::{is_in_subspace, Subspace};
use crate::error::{Error, Result};
use crate::experiments::SweepRecord;
use crate::game::BimatrixGame;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

fn parse_error(message: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        column: 0,
        message: message.into(),
    }
}

fn scalar_from_value<S: Scalar>(value: &Value) -> Result<S> {
    match value {
        Value::Number(num) => {
            if let Some(int) = num.as_i64() {
                Ok(S::from_int(int))
            } else {
                let float = num
                    .as_f64()
                    .ok_or_else(|| parse_error(format!("unrepresentable number {num}")))?;
                S::from_f64_exact(float)
                    .ok_or_else(|| parse_error(format!("non-finite number {num}")))
            }
        }
        Value::String(text) => {
            S::parse(text).ok_or_else(|| parse_error(format!("bad numeric string `{text}`")))
        }
        other => Err(parse_error(format!("expected a number, got {other}"))),
    }
}

fn scalar_to_value<S: Scalar>(value: &S) -> Value {
    if S::EXACT {
        Value::String(value.to_string())
    } else {
        // Shortest round-trip decimal via serde_json's f64 encoding.
        serde_json::Number::from_f64(value.to_f64())
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(value.to_string()))
    }
}

fn matrix_from_value<S: Scalar>(value: &Value, what: &str) -> Result<Matrix<S>> {
    let rows = value
        .as_array()
        .ok_or_else(|| parse_error(format!("{what} must be an array of rows")))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let cells = row
            .as_array()
            .ok_or_else(|| parse_error(format!("{what} rows must be arrays")))?;
        let mut parsed = Vec::with_capacity(cells.len());
        for cell in cells {
            parsed.push(scalar_from_value(cell)?);
        }
        out.push(parsed);
    }
    Matrix::from_rows(out)
}

fn matrix_to_value<S: Scalar>(mat: &Matrix<S>) -> Value {
    Value::Array(
        mat.to_rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(scalar_to_value).collect()))
            .collect(),
    )
}

/// Serializes a game to the interchange JSON object.
pub fn game_to_json<S: Scalar>(game: &BimatrixGame<S>) -> Value {
    json!({
        "m": game.m(),
        "n": game.n(),
        "A": matrix_to_value(game.a()),
        "B": matrix_to_value(game.b()),
    })
}

/// Reads a game out of a parsed JSON object, checking the declared
/// dimensions.
pub fn game_from_json<S: Scalar>(value: &Value) -> Result<BimatrixGame<S>> {
    let object = value
        .as_object()
        .ok_or_else(|| parse_error("top level must be an object"))?;
    let m = object
        .get("m")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_error("missing field `m`"))? as usize;
    let n = object
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_error("missing field `n`"))? as usize;
    let a = matrix_from_value(
        object.get("A").ok_or_else(|| parse_error("missing field `A`"))?,
        "A",
    )?;
    let b = matrix_from_value(
        object.get("B").ok_or_else(|| parse_error("missing field `B`"))?,
        "B",
    )?;
    if a.rows() != m || a.cols() != n {
        return Err(Error::DimensionMismatch {
            expected_rows: m,
            expected_cols: n,
            got_rows: a.rows(),
            got_cols: a.cols(),
        });
    }
    BimatrixGame::new(a, b)
}

fn json_from_path(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|err| Error::Parse {
        line: err.line(),
        column: err.column(),
        message: err.to_string(),
    })
}

/// Loads a game from a JSON file. The path may carry a `#KEY` fragment
/// selecting a component out of a decomposition-parts file.
pub fn load_game<S: Scalar>(path: &str) -> Result<BimatrixGame<S>> {
    match path.split_once('#') {
        None => game_from_json(&json_from_path(Path::new(path))?),
        Some((file, key)) => {
            let root = json_from_path(Path::new(file))?;
            let component = root
                .get(key)
                .ok_or_else(|| parse_error(format!("no component `{key}` in {file}")))?;
            game_from_json(component)
        }
    }
}

/// Writes a game as JSON (strings in the exact backend, numbers in the
/// float backend).
pub fn save_game<S: Scalar>(game: &BimatrixGame<S>, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&game_to_json(game)).expect("valid JSON tree");
    fs::write(path, text + "\n")?;
    Ok(())
}

fn residual_string<S: Scalar>(residual: &S) -> String {
    residual.to_string()
}

/// Parts file for the potential/harmonic/non-strategic split, with a
/// verification block recording the recomposition residual and the
/// membership flags.
pub fn hodge_parts_to_json<S: Scalar>(
    original: &BimatrixGame<S>,
    parts: &HodgeParts<S>,
) -> Value {
    let recomposed = parts.recompose();
    let residual =
        original.a().sub(recomposed.a()).max_abs() + original.b().sub(recomposed.b()).max_abs();
    json!({
        "mode": "hodge",
        "P": game_to_json(&parts.potential),
        "H": game_to_json(&parts.harmonic),
        "E": game_to_json(&parts.nonstrategic),
        "verification": {
            "max_recomposition_residual": residual_string(&residual),
            "memberships": {
                "P": is_in_subspace(&parts.potential, Subspace::Potential),
                "H": is_in_subspace(&parts.harmonic, Subspace::Harmonic),
                "E": is_in_subspace(&parts.nonstrategic, Subspace::NonStrategic),
            },
        },
    })
}

/// Parts file for the identical-interest/zero-sum/dominant split.
pub fn strategic_parts_to_json<S: Scalar>(
    original: &BimatrixGame<S>,
    parts: &StrategicParts<S>,
) -> Value {
    let recomposed = parts.recompose();
    let residual =
        original.a().sub(recomposed.a()).max_abs() + original.b().sub(recomposed.b()).max_abs();
    let identical_ok = is_in_subspace(&parts.identical, Subspace::IdenticalInterest)
        && is_in_subspace(&parts.identical, Subspace::Normalized);
    let zero_sum_ok = is_in_subspace(&parts.zero_sum, Subspace::ZeroSum)
        && is_in_subspace(&parts.zero_sum, Subspace::Normalized);
    json!({
        "mode": "strategic",
        "I_N": game_to_json(&parts.identical),
        "Z_N": game_to_json(&parts.zero_sum),
        "B": game_to_json(&parts.dominant),
        "verification": {
            "max_recomposition_residual": residual_string(&residual),
            "memberships": {
                "I_N": identical_ok,
                "Z_N": zero_sum_ok,
                "B": is_in_subspace(&parts.dominant, Subspace::BothDominant),
            },
        },
    })
}

fn format_float(v: f64) -> String {
    format!("{v}")
}

/// Writes a fictitious-play trajectory:
/// `t,p1..pm,q1..qn,br_i,br_j,U,V,SE,ME` (actions 1-based).
pub fn dfp_csv(traj: &Trajectory<f64>, m: usize, n: usize) -> String {
    let mut out = String::from("t");
    for k in 1..=m {
        let _ = write!(out, ",p{k}");
    }
    for k in 1..=n {
        let _ = write!(out, ",q{k}");
    }
    out.push_str(",br_i,br_j,U,V,SE,ME\n");
    for sample in &traj.samples {
        let _ = write!(out, "{}", sample.t);
        for v in sample.profile.p() {
            let _ = write!(out, ",{}", format_float(*v));
        }
        for v in sample.profile.q() {
            let _ = write!(out, ",{}", format_float(*v));
        }
        let _ = writeln!(
            out,
            ",{},{},{},{},{},{}",
            sample.br_pair.0 + 1,
            sample.br_pair.1 + 1,
            format_float(sample.report.u),
            format_float(sample.report.v),
            format_float(sample.report.se),
            format_float(sample.report.me),
        );
    }
    out
}

/// Writes a CFP trajectory sampled at segment starts:
/// `s,t,p1..,q1..,br_i,br_j,U,ME,segment_id`.
pub fn cfp_csv(traj: &CfpTrajectory, game: &BimatrixGame<f64>) -> String {
    let mut out = String::from("s,t");
    for k in 1..=game.m() {
        let _ = write!(out, ",p{k}");
    }
    for k in 1..=game.n() {
        let _ = write!(out, ",q{k}");
    }
    out.push_str(",br_i,br_j,U,ME,segment_id\n");
    for (id, seg) in traj.segments.iter().enumerate() {
        let profile = &seg.profile_start;
        let report = game.epsilon_report(profile).expect("profile fits the game");
        let _ = write!(out, "{},{}", format_float(seg.s_start), format_float(seg.s_start.exp()));
        for v in profile.p() {
            let _ = write!(out, ",{}", format_float(*v));
        }
        for v in profile.q() {
            let _ = write!(out, ",{}", format_float(*v));
        }
        let _ = writeln!(
            out,
            ",{},{},{},{},{}",
            seg.br_pair().0 + 1,
            seg.br_pair().1 + 1,
            format_float(report.u),
            format_float(report.me),
            id,
        );
    }
    out
}

/// Writes sweep records:
/// `lambda,label,converged,final_me,final_u,p1..,q1..,cycle`.
pub fn sweep_csv<S: Scalar>(records: &[SweepRecord<S>]) -> String {
    let mut out = String::from("lambda,label,converged,final_me,final_u");
    let (m, n) = records
        .first()
        .map(|r| (r.final_profile.p().len(), r.final_profile.q().len()))
        .unwrap_or((0, 0));
    for k in 1..=m {
        let _ = write!(out, ",p{k}");
    }
    for k in 1..=n {
        let _ = write!(out, ",q{k}");
    }
    out.push_str(",cycle\n");
    for record in records {
        let cycle = record
            .cycle
            .as_ref()
            .map(|c| {
                c.pairs
                    .iter()
                    .map(|&(i, j)| format!("({}|{})", i + 1, j + 1))
                    .collect::<Vec<_>>()
                    .join(";")
            })
            .unwrap_or_default();
        let _ = write!(
            out,
            "{},{},{},{},{}",
            record.lambda.to_f64(),
            record.label,
            record.converged,
            format_float(record.final_me),
            format_float(record.final_u),
        );
        for v in record.final_profile.p() {
            let _ = write!(out, ",{}", format_float(*v));
        }
        for v in record.final_profile.q() {
            let _ = write!(out, ",{}", format_float(*v));
        }
        let _ = writeln!(out, ",{cycle}");
    }
    out
}

/// CSV families emitted by the tool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvKind {
    Dfp,
    Cfp,
    Sweep,
}

/// Schema check for the tool's own CSV output: recognized header,
/// consistent field counts, numeric fields parse, and the leading
/// column is non-decreasing.
pub fn validate_csv(text: &str) -> Result<CsvKind> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::InvalidCsv("empty file".into()))?;
    let columns: Vec<&str> = header.split(',').collect();
    let kind = if header.starts_with("t,") && header.ends_with("br_i,br_j,U,V,SE,ME") {
        CsvKind::Dfp
    } else if header.starts_with("s,t,") && header.ends_with("br_i,br_j,U,ME,segment_id") {
        CsvKind::Cfp
    } else if header.starts_with("lambda,label,converged,final_me,final_u")
        && header.ends_with("cycle")
    {
        CsvKind::Sweep
    } else {
        return Err(Error::InvalidCsv(format!("unrecognized header `{header}`")));
    };

    let text_columns: &[&str] = match kind {
        CsvKind::Dfp | CsvKind::Cfp => &[],
        CsvKind::Sweep => &["label", "converged", "cycle"],
    };
    let mut previous_lead = f64::NEG_INFINITY;
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(Error::InvalidCsv(format!(
                "row {} has {} fields, expected {}",
                lineno + 2,
                fields.len(),
                columns.len()
            )));
        }
        for (name, field) in columns.iter().zip(&fields) {
            if text_columns.contains(name) {
                continue;
            }
            if field.parse::<f64>().is_err() {
                return Err(Error::InvalidCsv(format!(
                    "row {}, column `{}`: `{}` is not numeric",
                    lineno + 2,
                    name,
                    field
                )));
            }
        }
        let lead: f64 = fields[0].parse().expect("checked numeric above");
        if lead < previous_lead {
            return Err(Error::InvalidCsv(format!(
                "leading column decreases at row {}",
                lineno + 2
            )));
        }
        previous_lead = lead;
    }
    Ok(kind)
}

/// Reproducibility record written next to experiment outputs.
///
/// Re-running the recorded command with the same inputs reproduces the
/// outputs byte for byte (exact backend) or to within 1e-12 (float
/// backend, where both hold in practice since the code path is
/// deterministic).
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub game_path: String,
    pub config_hash: String,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(
        command: impl Into<String>,
        game_path: impl Into<String>,
        config_fields: &[(&str, String)],
        seed: Option<u64>,
        outputs: Vec<String>,
    ) -> Self {
        let mut canonical = Map::new();
        for (key, value) in config_fields {
            canonical.insert((*key).to_string(), Value::String(value.clone()));
        }
        let payload = serde_json::to_string(&Value::Object(canonical)).expect("valid JSON tree");
        let digest = Sha256::digest(payload.as_bytes());
        RunManifest {
            command: command.into(),
            game_path: game_path.into(),
            config_hash: format!("{digest:x}"),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            outputs,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("serializable");
        fs::write(path, text + "\n")?;
        Ok(())
    }
}
