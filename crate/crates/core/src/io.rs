//! CSV / JSON / SVG emitters and run manifests.
//!
//! JSON objects go through `serde_json::Value`, whose map is ordered, so keys
//! always come out sorted. Floats in CSV use 17 significant digits, which
//! round-trips every `f64` exactly.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cloud::{CloudPoint, SpectrumCloud, Tag};
use crate::density::DensityReport;
use crate::embed::EmbeddingResult;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const CSV_HEADER: &str = "re,im,tag";

/// Half-width of the square SVG viewport.
pub const SVG_EXTENT: f64 = 2.2;
const SVG_PIXELS: f64 = 800.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(Error::Argument(format!("unknown format '{other}'"))),
        }
    }
}

pub fn cloud_to_csv<T: Real>(cloud: &SpectrumCloud<T>) -> String {
    let mut out = String::with_capacity(48 * (cloud.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in cloud.points() {
        let _ = writeln!(out, "{:.16e},{:.16e},{}", p.z.re, p.z.im, p.tag);
    }
    out
}

/// Inverse of [`cloud_to_csv`]. Line numbers in errors are zero-based, with
/// the header at line 0.
pub fn cloud_from_csv<T: Real>(text: &str) -> Result<SpectrumCloud<T>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end_matches('\r') == CSV_HEADER => {}
        _ => {
            return Err(Error::Parse {
                index: 0,
                reason: format!("expected header '{CSV_HEADER}'"),
            })
        }
    }
    let mut points = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let bad = |reason: &str| Error::Parse {
            index: i + 1,
            reason: reason.to_string(),
        };
        let mut parts = line.splitn(3, ',');
        let (re, im, tag) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => return Err(bad("expected three fields")),
        };
        let re: T = re.parse().map_err(|_| bad("bad real part"))?;
        let im: T = im.parse().map_err(|_| bad("bad imaginary part"))?;
        points.push(CloudPoint {
            z: Complex::new(re, im),
            tag: Tag::new(tag),
        });
    }
    Ok(SpectrumCloud::from_points(points))
}

fn num<T: Real>(x: T) -> Value {
    // non-finite values have no JSON representation
    x.to_f64()
        .and_then(serde_json::Number::from_f64)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn point_json<T: Real>(z: Complex<T>, tag: &Tag) -> Value {
    json!({ "re": num(z.re), "im": num(z.im), "tag": tag.as_str() })
}

pub fn cloud_to_json<T: Real>(cloud: &SpectrumCloud<T>, params: Value) -> Value {
    let points: Vec<Value> = cloud.points().iter().map(|p| point_json(p.z, &p.tag)).collect();
    let mut obj = json!({ "params": params, "points": points });
    if !cloud.notes().is_empty() {
        obj["notes"] = json!(cloud.notes());
    }
    obj
}

pub fn embedding_to_json<T: Real>(r: &EmbeddingResult<T>) -> Value {
    let targets: Vec<Value> = r.targets.points().iter().map(|p| point_json(p.z, &p.tag)).collect();
    let residuals: Vec<Value> = r.residuals.iter().map(|&x| num(x)).collect();
    let worst = r.worst_residual().map(|(i, x)| json!({ "index": i, "residual": num(x) }));
    let mut obj = json!({
        "k_input": r.k_input.to_string(),
        "k": r.k.to_string(),
        "m": r.m,
        "n": r.n,
        "l": r.l.to_string(),
        "truncated_dim": r.truncated_dim(),
        "targets": targets,
        "residuals": residuals,
        "worst": worst,
        "tol": num(r.tol),
        "verified": r.verified,
        "excluded": r.excluded,
    });
    if let Some(w) = &r.witnesses {
        obj["witnesses"] = json!(w);
    }
    if !r.targets.notes().is_empty() {
        obj["notes"] = json!(r.targets.notes());
    }
    obj
}

pub fn density_to_json(r: &DensityReport) -> Value {
    let mut obj = serde_json::to_value(r).expect("density report is serializable");
    obj["monotone"] = json!(r.is_monotone(1e-12));
    obj
}

/// Pretty-printed with sorted keys and a trailing newline.
pub fn json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("Value always serializes");
    s.push('\n');
    s
}

/// Scatter of the cloud in the square `[-2.2, 2.2]^2`, imaginary axis up.
pub fn cloud_to_svg<T: Real>(cloud: &SpectrumCloud<T>) -> String {
    let e = SVG_EXTENT;
    let r = e / SVG_PIXELS;
    let mut out = String::with_capacity(64 * (cloud.len() + 8));
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{px}" height="{px}" viewBox="{lo} {lo} {w} {w}">"#,
        px = SVG_PIXELS,
        lo = -e,
        w = 2.0 * e
    );
    let _ = writeln!(out, r#"<rect x="{lo}" y="{lo}" width="{w}" height="{w}" fill="white"/>"#, lo = -e, w = 2.0 * e);
    let sw = r / 2.0;
    let _ = writeln!(
        out,
        r#"<path d="M{lo} 0H{e}M0 {lo}V{e}" stroke="lightgray" stroke-width="{sw}"/>"#,
        lo = -e
    );
    let _ = writeln!(out, r#"<g fill="black">"#);
    for p in cloud.points() {
        let (x, y) = (p.z.re.to_f64().unwrap_or(f64::NAN), p.z.im.to_f64().unwrap_or(f64::NAN));
        if !(x.is_finite() && y.is_finite()) {
            continue;
        }
        let _ = writeln!(out, r#"<circle cx="{x:.6}" cy="{:.6}" r="{r:.6}"/>"#, -y);
    }
    out.push_str("</g>\n</svg>\n");
    out
}

pub fn render_cloud<T: Real>(cloud: &SpectrumCloud<T>, format: Format, params: Value) -> String {
    match format {
        Format::Csv => cloud_to_csv(cloud),
        Format::Json => json_string(&cloud_to_json(cloud, params)),
        Format::Svg => cloud_to_svg(cloud),
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Record of one CLI run: what was asked, what was written.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: Value,
    pub version: String,
    pub wall_time_secs: f64,
    pub outputs: Vec<OutputDigest>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, params: Value) -> Self {
        RunManifest {
            command: command.into(),
            params,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_secs: 0.0,
            outputs: Vec::new(),
        }
    }

    /// Writes `contents` to `path` and records its digest. Writing the same
    /// path twice replaces the earlier entry.
    pub fn write_output(&mut self, path: &Path, contents: &[u8]) -> io::Result<()> {
        write_atomic(path, contents)?;
        let key = path.display().to_string();
        self.outputs.retain(|o| o.path != key);
        self.outputs.push(OutputDigest {
            path: key,
            bytes: contents.len(),
            sha256: sha256_hex(contents),
        });
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("manifest is serializable")
    }

    /// `<path>.manifest.json` next to the primary output.
    pub fn path_for(primary: &Path) -> PathBuf {
        let mut s = primary.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    }
}

fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(contents)?;
    f.flush()
}
