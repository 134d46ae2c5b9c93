//! JSON scenes and reports, CSV correspondences, curves and experiment tables.

use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::{Matrix3, SVector, Vector2, Vector3};
use posecond_core::bench::{CurveStabilityReport, DistanceReport, RevelationTable};
use posecond_core::curves::CurveSweep;
use posecond_core::geometry::{
    Correspondence, EpipolarModel, EssentialScene, FundamentalScene, Intrinsics, Problem, Rotation, Scene,
    UnitTranslation,
};
use posecond_core::linalg::mat3_to_row_major;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Lossless decimal form of a double (17 significant digits).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn problem_letter(p: Problem) -> &'static str {
    p.letter()
}

pub fn parse_problem(s: &str) -> Result<Problem> {
    match s {
        "E" | "e" | "essential" => Ok(Problem::Essential),
        "F" | "f" | "fundamental" => Ok(Problem::Fundamental),
        _ => Err(CliError::format(format!("problem must be E or F, got {s:?}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicsJson {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
}

impl From<Intrinsics> for IntrinsicsJson {
    fn from(k: Intrinsics) -> Self {
        IntrinsicsJson { fx: k.fx, fy: k.fy, cx: k.cx, cy: k.cy }
    }
}

impl From<IntrinsicsJson> for Intrinsics {
    fn from(k: IntrinsicsJson) -> Self {
        Intrinsics { fx: k.fx, fy: k.fy, cx: k.cx, cy: k.cy }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PoseJson {
    Calibrated {
        #[serde(rename = "R")]
        r: Vec<f64>,
        t: Vec<f64>,
    },
    Normal {
        b: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneJson {
    pub problem: String,
    pub pose: PoseJson,
    pub points: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intrinsics: Option<IntrinsicsJson>,
}

/// A scene with optional intrinsics mapping its image coordinates to pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneFile {
    pub scene: Scene,
    pub intrinsics: Option<Intrinsics>,
}

fn exact_len(v: &[f64], n: usize, field: &str) -> Result<()> {
    if v.len() != n {
        return Err(CliError::format(format!("field `{field}` needs {n} numbers, got {}", v.len())));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(CliError::format(format!("field `{field}` has a non-finite entry")));
    }
    Ok(())
}

impl SceneFile {
    pub fn to_json(&self) -> SceneJson {
        let pose = match &self.scene {
            Scene::Essential(s) => PoseJson::Calibrated {
                r: mat3_to_row_major(s.rotation.matrix()).to_vec(),
                t: s.translation.vector().iter().copied().collect(),
            },
            Scene::Fundamental(s) => PoseJson::Normal { b: s.b.iter().copied().collect() },
        };
        SceneJson {
            problem: self.scene.problem().letter().to_string(),
            pose,
            points: self.scene.points().iter().map(|p| [p.x, p.y, p.z]).collect(),
            intrinsics: self.intrinsics.map(Into::into),
        }
    }

    pub fn from_json(j: &SceneJson) -> Result<Self> {
        let problem = parse_problem(&j.problem).map_err(|_| CliError::format(format!("field `problem`: expected \"E\" or \"F\", got {:?}", j.problem)))?;
        let points: Vec<Vector3<f64>> = j.points.iter().map(|p| Vector3::new(p[0], p[1], p[2])).collect();
        if points.iter().any(|p| !p.iter().all(|v| v.is_finite())) {
            return Err(CliError::format("field `points` has a non-finite entry"));
        }
        let scene = match (&j.pose, problem) {
            (PoseJson::Calibrated { r, t }, Problem::Essential) => {
                exact_len(r, 9, "pose.R")?;
                exact_len(t, 3, "pose.t")?;
                let rot = Rotation::new(Matrix3::from_row_slice(r))
                    .map_err(|e| CliError::format(format!("field `pose.R`: {e}")))?;
                let tv = Vector3::new(t[0], t[1], t[2]);
                if !((tv.norm() - 1.0).abs() <= 1e-9) {
                    return Err(CliError::format(format!("field `pose.t`: norm {} is not 1", tv.norm())));
                }
                let tr = UnitTranslation::new(tv).map_err(|e| CliError::format(format!("field `pose.t`: {e}")))?;
                Scene::Essential(
                    EssentialScene::new(rot, tr, points).map_err(|e| CliError::format(format!("field `points`: {e}")))?,
                )
            }
            (PoseJson::Normal { b }, Problem::Fundamental) => {
                exact_len(b, 7, "pose.b")?;
                Scene::Fundamental(
                    FundamentalScene::new(SVector::<f64, 7>::from_column_slice(b), points)
                        .map_err(|e| CliError::format(format!("field `pose`: {e}")))?,
                )
            }
            (PoseJson::Calibrated { .. }, Problem::Fundamental) => {
                return Err(CliError::format("field `pose`: problem F needs {\"b\": [7 numbers]}"))
            }
            (PoseJson::Normal { .. }, Problem::Essential) => {
                return Err(CliError::format("field `pose`: problem E needs {\"R\": [9], \"t\": [3]}"))
            }
        };
        Ok(SceneFile { scene, intrinsics: j.intrinsics.map(Into::into) })
    }
}

pub fn scene_from_str(s: &str) -> Result<SceneFile> {
    let j: SceneJson = serde_json::from_str(s).map_err(|e| CliError::format(format!("scene: {e}")))?;
    SceneFile::from_json(&j)
}

pub fn scene_to_string(f: &SceneFile) -> String {
    let mut s = serde_json::to_string_pretty(&f.to_json()).expect("finite numbers serialize");
    s.push('\n');
    s
}

pub fn load_scene(path: &Path) -> Result<SceneFile> {
    scene_from_str(&fs::read_to_string(path).map_err(|e| CliError::io(path, e))?)
}

pub fn save_scene(f: &SceneFile, path: &Path) -> Result<()> {
    write_file(path, &scene_to_string(f))
}

pub fn write_file(path: &Path, content: &str) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    file.write_all(content.as_bytes()).map_err(|e| CliError::io(path, e))
}

fn reader(content: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(content.as_bytes())
}

fn parse_field(rec: &csv::StringRecord, i: usize, name: &str, line: usize) -> Result<f64> {
    let s = rec.get(i).ok_or_else(|| CliError::format(format!("line {line}: missing column `{name}`")))?;
    s.parse::<f64>().map_err(|_| CliError::format(format!("line {line}: column `{name}` is not a number: {s:?}")))
}

pub const PAIRS_HEADER: &str = "x1,y1,x2,y2";

/// Correspondences as `x1,y1,x2,y2` rows.
pub fn pairs_to_csv(pairs: &[Correspondence]) -> String {
    let mut s = String::from(PAIRS_HEADER);
    s.push('\n');
    for p in pairs {
        s.push_str(&format!("{},{},{},{}\n", fmt_f64(p.x.x), fmt_f64(p.x.y), fmt_f64(p.y.x), fmt_f64(p.y.y)));
    }
    s
}

pub fn pairs_from_csv(content: &str) -> Result<Vec<Correspondence>> {
    let mut out = Vec::new();
    for (k, rec) in reader(content).records().enumerate() {
        let line = k + 2;
        let rec = rec.map_err(|e| CliError::format(format!("line {line}: {e}")))?;
        let v: Vec<f64> = ["x1", "y1", "x2", "y2"]
            .iter()
            .enumerate()
            .map(|(i, n)| parse_field(&rec, i, n, line))
            .collect::<Result<_>>()?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(CliError::format(format!("line {line}: non-finite coordinate")));
        }
        out.push(Correspondence::new(Vector2::new(v[0], v[1]), Vector2::new(v[2], v[3])));
    }
    Ok(out)
}

pub fn load_pairs(path: &Path) -> Result<Vec<Correspondence>> {
    pairs_from_csv(&fs::read_to_string(path).map_err(|e| CliError::io(path, e))?)
}

pub const CURVE_HEADER: &str = "u,v,residual,branch_id";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub u: f64,
    pub v: f64,
    pub residual: f64,
    pub branch: usize,
}

/// Curve points sorted by `(u, v)`, each with the polyline it belongs to.
pub fn curve_rows(sweep: &CurveSweep) -> Vec<CurveRow> {
    let mut rows = Vec::new();
    for s in &sweep.slices {
        for (&v, &residual) in s.roots.iter().zip(&s.residuals) {
            let branch = sweep
                .segments
                .iter()
                .position(|seg| seg.iter().any(|p| p.x == s.u && p.y == v))
                .unwrap_or(usize::MAX);
            rows.push(CurveRow { u: s.u, v, residual, branch });
        }
    }
    rows.sort_by(|a, b| a.u.total_cmp(&b.u).then(a.v.total_cmp(&b.v)));
    rows
}

pub fn curve_to_csv(sweep: &CurveSweep) -> String {
    let mut s = String::from(CURVE_HEADER);
    s.push('\n');
    for r in curve_rows(sweep) {
        s.push_str(&format!("{},{},{},{}\n", fmt_f64(r.u), fmt_f64(r.v), fmt_f64(r.residual), r.branch));
    }
    s
}

pub fn export_curve_csv(sweep: &CurveSweep, path: &Path) -> Result<()> {
    write_file(path, &curve_to_csv(sweep))
}

pub fn curve_from_csv(content: &str) -> Result<Vec<CurveRow>> {
    let mut out = Vec::new();
    for (k, rec) in reader(content).records().enumerate() {
        let line = k + 2;
        let rec = rec.map_err(|e| CliError::format(format!("line {line}: {e}")))?;
        let branch = rec
            .get(3)
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| CliError::format(format!("line {line}: bad `branch_id`")))?;
        out.push(CurveRow {
            u: parse_field(&rec, 0, "u", line)?,
            v: parse_field(&rec, 1, "v", line)?,
            residual: parse_field(&rec, 2, "residual", line)?,
            branch,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelsJson {
    pub problem: String,
    /// Row-major, unit Frobenius norm.
    pub models: Vec<[f64; 9]>,
    pub real_count: usize,
    pub residual_max: f64,
    pub near_degenerate: bool,
}

pub fn models_json(problem: Problem, models: &[EpipolarModel], residual_max: f64, near_degenerate: bool) -> ModelsJson {
    ModelsJson {
        problem: problem.letter().to_string(),
        models: models.iter().map(|m| mat3_to_row_major(m.matrix())).collect(),
        real_count: models.len(),
        residual_max,
        near_degenerate,
    }
}

pub fn to_json_string<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn revelation_csv(t: &RevelationTable) -> String {
    let mut s = String::from("sigma,tau,ratio,instances\n");
    for (i, sigma) in t.sigmas.iter().enumerate() {
        for (j, tau) in t.taus.iter().enumerate() {
            s.push_str(&format!("{},{},{},{}\n", fmt_f64(*sigma), fmt_f64(*tau), fmt_f64(t.ratios[i][j]), t.instances));
        }
    }
    s
}

pub fn distance_csv(r: &DistanceReport) -> String {
    let mut s = String::from("index,class,n,n_hat,distance,censored\n");
    for rec in &r.records {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            rec.index,
            rec.verdict.class.name(),
            rec.verdict.n,
            rec.verdict.n_hat,
            fmt_f64(rec.distance),
            rec.censored as u8
        ));
    }
    s
}

pub fn distance_summary_csv(r: &DistanceReport) -> String {
    let mut s = String::from("class,count,censored,mean,median,bin_width,histogram\n");
    for c in &r.summaries {
        let h: Vec<String> = c.histogram.iter().map(|v| v.to_string()).collect();
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.class.name(),
            c.count,
            c.censored,
            fmt_f64(c.mean),
            fmt_f64(c.median),
            fmt_f64(r.bin_width),
            h.join(" ")
        ));
    }
    s
}

pub fn curve_stability_csv(r: &CurveStabilityReport) -> String {
    let mut s = String::from("index,clean,perturbed,difference\n");
    for rec in &r.records {
        s.push_str(&format!(
            "{},{},{},{}\n",
            rec.index,
            fmt_f64(rec.clean),
            fmt_f64(rec.perturbed),
            fmt_f64(rec.difference)
        ));
    }
    s
}
