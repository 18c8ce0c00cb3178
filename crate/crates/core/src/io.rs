//! Serialization of sampled paths, plot polylines and reports.
//!
//! CSV outputs start with a `# hyperpath <version>` comment line, JSON
//! outputs carry a `"version"` field. Readers skip the header.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperspace::FiniteSubset;
use crate::metric::{GroundPoint, GroundSpace};
use crate::paths::{Leg, SampledHausdorffPath};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default number of segments per leg in plot output.
pub const PLOT_SEGMENTS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// Guesses from a file extension, defaulting to JSON.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

fn header_line() -> String {
    format!("# hyperpath {VERSION}\n")
}

/// One row per point: `t, index, coordinates...`.
pub fn sampled_path_to_csv(space: &GroundSpace, path: &SampledHausdorffPath) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut head = vec!["t".to_string(), "k".to_string()];
    head.extend((0..space.raw_width()).map(|c| format!("c{c}")));
    w.write_record(&head)?;
    for (t, set) in path.samples() {
        for (k, p) in set.points().iter().enumerate() {
            let mut row = vec![t.to_string(), k.to_string()];
            row.extend(p.raw().iter().map(f64::to_string));
            w.write_record(&row)?;
        }
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(header_line() + &String::from_utf8(body).expect("csv output is utf-8"))
}

pub fn sampled_path_from_csv(space: &GroundSpace, text: &str) -> Result<SampledHausdorffPath> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let width = space.raw_width();
    let mut samples: Vec<(f64, Vec<GroundPoint>)> = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 + width {
            return Err(Error::Parse(format!(
                "row {}: expected {} fields, found {}",
                line + 1,
                2 + width,
                rec.len()
            )));
        }
        let num = |i: usize| -> Result<f64> {
            rec[i]
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("row {}, field {}: {e}", line + 1, i + 1)))
        };
        let t = num(0)?;
        let raw = (2..2 + width).map(num).collect::<Result<Vec<_>>>()?;
        let p = space.point_from_raw(&raw)?;
        match samples.last_mut() {
            Some((u, pts)) if *u == t => pts.push(p),
            _ => samples.push((t, vec![p])),
        }
    }
    build_samples(space, samples)
}

fn build_samples(space: &GroundSpace, samples: Vec<(f64, Vec<GroundPoint>)>) -> Result<SampledHausdorffPath> {
    let samples = samples
        .into_iter()
        .map(|(t, pts)| FiniteSubset::new(space, pts).map(|s| (t, s)))
        .collect::<Result<Vec<_>>>()?;
    SampledHausdorffPath::new(samples)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleRecord {
    t: f64,
    points: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampledPathRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    version: Option<String>,
    samples: Vec<SampleRecord>,
}

pub fn sampled_path_to_json(path: &SampledHausdorffPath) -> Result<String> {
    let rec = SampledPathRecord {
        version: Some(VERSION.to_string()),
        samples: path
            .samples()
            .iter()
            .map(|(t, s)| SampleRecord {
                t: *t,
                points: s.to_raw().points,
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&rec)? + "\n")
}

pub fn sampled_path_from_json(space: &GroundSpace, text: &str) -> Result<SampledHausdorffPath> {
    let rec: SampledPathRecord = serde_json::from_str(text)?;
    let samples = rec
        .samples
        .into_iter()
        .map(|s| {
            let pts = s
                .points
                .iter()
                .map(|r| space.point_from_raw(r))
                .collect::<Result<Vec<_>>>()?;
            Ok((s.t, pts))
        })
        .collect::<Result<Vec<_>>>()?;
    build_samples(space, samples)
}

pub fn sampled_path_to_string(space: &GroundSpace, path: &SampledHausdorffPath, format: Format) -> Result<String> {
    match format {
        Format::Csv => sampled_path_to_csv(space, path),
        Format::Json => sampled_path_to_json(path),
    }
}

/// Reads a sampled path file, choosing the format by extension.
pub fn read_sampled_path(space: &GroundSpace, file: &Path) -> Result<SampledHausdorffPath> {
    let text = std::fs::read_to_string(file)?;
    match Format::from_path(file) {
        Format::Csv => sampled_path_from_csv(space, &text),
        Format::Json => sampled_path_from_json(space, &text),
    }
}

/// Plot data: each leg as a polyline of `segments + 1` vertices, one row per
/// vertex `leg, seq, t, coordinates...`.
pub fn plot_csv<'a>(space: &GroundSpace, legs: impl IntoIterator<Item = &'a Leg>, segments: usize) -> Result<String> {
    let segments = segments.max(1);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut head = vec!["leg".to_string(), "seq".to_string(), "t".to_string()];
    head.extend((0..space.raw_width()).map(|c| format!("c{c}")));
    w.write_record(&head)?;
    for (li, leg) in legs.into_iter().enumerate() {
        for q in 0..=segments {
            let t = q as f64 / segments as f64;
            let mut row = vec![li.to_string(), q.to_string(), t.to_string()];
            row.extend(leg.eval(space, t).raw().iter().map(f64::to_string));
            w.write_record(&row)?;
        }
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(header_line() + &String::from_utf8(body).expect("csv output is utf-8"))
}

/// Pretty JSON object with a leading `"version"` field.
pub fn versioned_json<T: Serialize>(command: &str, value: &T) -> Result<String> {
    let mut map = serde_json::Map::new();
    map.insert("version".into(), VERSION.into());
    map.insert("command".into(), command.into());
    match serde_json::to_value(value)? {
        serde_json::Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("result".into(), other);
        }
    }
    Ok(serde_json::to_string_pretty(&serde_json::Value::Object(map))? + "\n")
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
