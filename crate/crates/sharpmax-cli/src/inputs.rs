//! Input documents: spaces as distance matrices or weighted graphs, and
//! function values with their smoothness tag.

use serde::Deserialize;
use sharpmax::Space64;
use std::path::Path;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub n: usize,
    pub measure: Vec<f64>,
    pub metric: MetricDocument,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum MetricDocument {
    #[serde(rename = "matrix")]
    Matrix { d: Vec<Vec<f64>> },
    #[serde(rename = "graph")]
    Graph { edges: Vec<(usize, usize, f64)> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDocument {
    pub values: Vec<f64>,
    pub beta: f64,
}

pub struct LoadedSpace {
    pub space: Space64,
    pub name: Option<String>,
    pub seed: Option<u64>,
    pub metric_type: &'static str,
    pub source: String,
}

fn basename(path: &Path) -> String {
    path.file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn load_space(path: &Path) -> Result<LoadedSpace, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read space file {}: {e}", path.display()))?;
    let doc: SpaceDocument = serde_json::from_str(&text)
        .map_err(|e| format!("space document {}: {e}", path.display()))?;
    if doc.measure.len() != doc.n {
        return Err(format!(
            "space document {}: field 'measure' has {} entries for n = {}",
            path.display(),
            doc.measure.len(),
            doc.n
        ));
    }
    let (space, metric_type) = match &doc.metric {
        MetricDocument::Matrix { d } => {
            if d.len() != doc.n {
                return Err(format!(
                    "space document {}: field 'metric.d' has {} rows for n = {}",
                    path.display(),
                    d.len(),
                    doc.n
                ));
            }
            let space = Space64::from_matrix(d.clone(), doc.measure.clone())
                .map_err(|e| format!("space document {}: {e}", path.display()))?;
            (space, "matrix")
        }
        MetricDocument::Graph { edges } => {
            let space = Space64::from_graph(doc.n, edges, doc.measure.clone())
                .map_err(|e| format!("space document {}: {e}", path.display()))?;
            (space, "graph")
        }
    };
    Ok(LoadedSpace {
        space,
        name: doc.name,
        seed: doc.seed,
        metric_type,
        source: basename(path),
    })
}

pub fn load_function(path: &Path, n: usize) -> Result<FunctionDocument, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read function file {}: {e}", path.display()))?;
    let doc: FunctionDocument = serde_json::from_str(&text)
        .map_err(|e| format!("function document {}: {e}", path.display()))?;
    if doc.values.len() != n {
        return Err(format!(
            "function document {}: field 'values' has {} entries, space has {n} points",
            path.display(),
            doc.values.len()
        ));
    }
    if !(doc.beta > 0.0 && doc.beta <= 1.0) {
        return Err(format!(
            "function document {}: field 'beta' must lie in (0, 1], got {}",
            path.display(),
            doc.beta
        ));
    }
    Ok(doc)
}
