//! File formats: whitespace edge lists, JSON graph documents, layout and
//! field JSON, and the optimizer trace as CSV. Writers are deterministic so
//! identical runs produce byte-identical files.

use crate::error::AppError;
use anisolay_core::{ArlTrace, Edge, Graph, Layout, MonotonicField, TraceRecord};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::Path;

/// One edge per line: `u v [weight]`, `#` starts a comment, blank lines
/// ignored. Node count is one past the largest index seen.
pub fn parse_edge_list(text: &str) -> Result<Graph, AppError> {
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    let mut max_node = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(AppError::Data(format!(
                "line {line_no}: expected `u v [weight]`, got {} fields",
                fields.len()
            )));
        }
        let u: usize = fields[0]
            .parse()
            .map_err(|_| AppError::Data(format!("line {line_no}: bad node index {:?}", fields[0])))?;
        let v: usize = fields[1]
            .parse()
            .map_err(|_| AppError::Data(format!("line {line_no}: bad node index {:?}", fields[1])))?;
        let w: f64 = match fields.get(2) {
            Some(s) => s
                .parse()
                .map_err(|_| AppError::Data(format!("line {line_no}: bad weight {s:?}")))?,
            None => 1.0,
        };
        if u == v {
            return Err(AppError::Data(format!("line {line_no}: self-loop on node {u}")));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(AppError::Data(format!(
                "line {line_no}: weight must be positive and finite, got {w}"
            )));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(AppError::Data(format!(
                "line {line_no}: duplicate edge {{{u}, {v}}}"
            )));
        }
        max_node = max_node.max(u).max(v);
        edges.push(Edge::new(u, v, w));
    }
    if edges.is_empty() {
        return Err(AppError::Data(String::from("no edges in input")));
    }
    Ok(Graph::new(max_node + 1, edges)?)
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    nodes: Vec<NodeDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
struct NodeDoc {
    id: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    group: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    u: usize,
    v: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    w: Option<f64>,
}

/// JSON document form: `{"nodes":[{"id",..}],"edges":[{"u","v","w"?}]}`.
/// Node ids must be a permutation of 0..n.
pub fn parse_graph_json(text: &str) -> Result<Graph, AppError> {
    let doc: GraphDoc =
        serde_json::from_str(text).map_err(|e| AppError::Data(format!("graph json: {e}")))?;
    let n = doc.nodes.len();
    let mut ids: Vec<usize> = doc.nodes.iter().map(|d| d.id).collect();
    ids.sort_unstable();
    if ids != (0..n).collect::<Vec<_>>() {
        return Err(AppError::Data(String::from(
            "graph json: node ids must be a permutation of 0..n",
        )));
    }
    let edges = doc
        .edges
        .iter()
        .map(|e| Edge::new(e.u, e.v, e.w.unwrap_or(1.0)))
        .collect();
    let mut g = Graph::new(n, edges)?;
    for node in doc.nodes {
        if let Some(label) = node.label {
            g.set_label(node.id, label);
        }
        if let Some(group) = node.group {
            g.set_group(node.id, group);
        }
    }
    Ok(g)
}

pub fn graph_to_json(g: &Graph) -> String {
    let doc = GraphDoc {
        nodes: (0..g.node_count())
            .map(|id| NodeDoc {
                id,
                label: g.label(id).map(String::from),
                group: g.group(id).map(String::from),
            })
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                u: e.u,
                v: e.v,
                w: if e.weight == 1.0 { None } else { Some(e.weight) },
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("graph document serializes")
}

/// Loads a graph file, deciding the format by extension (`.json` or edge
/// list otherwise).
pub fn load_graph(path: &Path) -> Result<Graph, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Data(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "json") {
        parse_graph_json(&text)
    } else {
        parse_edge_list(&text)
    }
}

#[derive(Serialize, Deserialize)]
struct LayoutDoc {
    positions: Vec<[f64; 2]>,
}

pub fn layout_to_json(x: &Layout) -> String {
    let doc = LayoutDoc {
        positions: x.positions().to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("layout document serializes")
}

pub fn layout_from_json(text: &str) -> Result<Layout, AppError> {
    let doc: LayoutDoc =
        serde_json::from_str(text).map_err(|e| AppError::Data(format!("layout json: {e}")))?;
    Ok(Layout::new(doc.positions)?)
}

#[derive(Serialize, Deserialize)]
struct FieldDoc {
    center: [f64; 2],
    r_max: f64,
    rays: usize,
    samples_per_ray: usize,
    values: Vec<Vec<f64>>,
}

pub fn field_to_json(f: &MonotonicField) -> String {
    let doc = FieldDoc {
        center: f.center(),
        r_max: f.r_max(),
        rays: f.ray_count(),
        samples_per_ray: f.samples_per_ray(),
        values: (0..f.ray_count()).map(|r| f.ray(r).to_vec()).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("field document serializes")
}

pub fn field_from_json(text: &str) -> Result<MonotonicField, AppError> {
    let doc: FieldDoc =
        serde_json::from_str(text).map_err(|e| AppError::Data(format!("field json: {e}")))?;
    Ok(MonotonicField::from_parts(
        doc.center,
        doc.r_max,
        doc.rays,
        doc.samples_per_ray,
        doc.values.into_iter().flatten().collect(),
    )?)
}

pub fn trace_to_csv(trace: &ArlTrace) -> String {
    let mut out = String::from("iter,sigma,rho,gamma,field_updated\n");
    for r in &trace.records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.iter,
            r.sigma,
            r.rho,
            r.gamma,
            u8::from(r.field_updated)
        ));
    }
    out
}

pub fn trace_from_csv(text: &str) -> Result<ArlTrace, AppError> {
    let mut lines = text.lines();
    match lines.next() {
        Some("iter,sigma,rho,gamma,field_updated") => {}
        other => {
            return Err(AppError::Data(format!(
                "trace csv: unexpected header {other:?}"
            )))
        }
    }
    let mut records = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 5 {
            return Err(AppError::Data(format!(
                "trace csv line {line_no}: expected 5 columns"
            )));
        }
        let bad = |what: &str| AppError::Data(format!("trace csv line {line_no}: bad {what}"));
        records.push(TraceRecord {
            iter: cols[0].parse().map_err(|_| bad("iter"))?,
            sigma: cols[1].parse().map_err(|_| bad("sigma"))?,
            rho: cols[2].parse().map_err(|_| bad("rho"))?,
            gamma: cols[3].parse().map_err(|_| bad("gamma"))?,
            field_updated: match cols[4] {
                "0" => false,
                "1" => true,
                _ => return Err(bad("field_updated")),
            },
        });
    }
    Ok(ArlTrace { records })
}
