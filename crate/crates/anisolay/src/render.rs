//! SVG output. A scene stacks, back to front: the field colormap raster
//! (faded), centrality contour isolines, graph edges, centrality-sized node
//! circles, optional labels, and a colorbar keyed to the field range. All
//! numeric output uses fixed precision so identical inputs give identical
//! bytes.

use crate::colormap::{group_color, Colormap};
use crate::error::AppError;
use anisolay_core::{
    eval_field, extract_contour, CentralityVector, Graph, Layout, MonotonicField,
};
use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine;
use image::codecs::png::PngEncoder;
use image::{ExtendedColorType, ImageEncoder};
use std::fmt::Write as _;

#[derive(Debug, Clone)]
pub struct SceneStyle {
    /// Canvas size in pixels.
    pub width: u32,
    pub height: u32,
    /// Node circle radius range in pixels: a node's radius scales linearly
    /// with its normalized centrality between these bounds.
    pub node_radius: [f64; 2],
    /// Contour levels in field-value units; levels that exceed the field
    /// maximum or collapse to the center are skipped at draw time.
    pub levels: Vec<f64>,
    pub colormap: Colormap,
    /// Opacity of the colormap backdrop.
    pub background_alpha: f64,
    pub labels: bool,
}

impl Default for SceneStyle {
    fn default() -> Self {
        SceneStyle {
            width: 900,
            height: 640,
            node_radius: [3.0, 11.0],
            levels: (1..=10).map(|k| k as f64 / 10.0).collect(),
            colormap: Colormap::Viridis,
            background_alpha: 0.35,
            labels: false,
        }
    }
}

impl SceneStyle {
    pub fn validate(&self) -> Result<(), AppError> {
        if self.width < 100 || self.height < 100 {
            return Err(AppError::Usage(String::from("canvas must be at least 100x100")));
        }
        if !(self.node_radius[0] > 0.0 && self.node_radius[1] >= self.node_radius[0]) {
            return Err(AppError::Usage(String::from(
                "node radius range needs 0 < min <= max",
            )));
        }
        if !(self.background_alpha > 0.0 && self.background_alpha <= 1.0) {
            return Err(AppError::Usage(String::from("alpha must be in (0, 1]")));
        }
        for pair in self.levels.windows(2) {
            if pair[0] > pair[1] {
                return Err(AppError::Usage(String::from("levels must be sorted ascending")));
            }
        }
        if self.levels.iter().any(|l| !(0.0..=1.0).contains(l)) {
            return Err(AppError::Usage(String::from("levels must lie in [0, 1]")));
        }
        Ok(())
    }
}

/// World-to-canvas map: uniform scale plus translation, y flipped to SVG's
/// downward axis.
struct Affine {
    scale: f64,
    cx: f64,
    cy: f64,
    ox: f64,
    oy: f64,
}

impl Affine {
    fn fit(center: [f64; 2], half_extent: f64, px: PlotRect) -> Affine {
        let scale = (px.w.min(px.h)) / (2.0 * half_extent);
        Affine {
            scale,
            cx: center[0],
            cy: center[1],
            ox: px.x + px.w / 2.0,
            oy: px.y + px.h / 2.0,
        }
    }

    fn map(&self, p: [f64; 2]) -> [f64; 2] {
        [
            self.ox + (p[0] - self.cx) * self.scale,
            self.oy - (p[1] - self.cy) * self.scale,
        ]
    }
}

#[derive(Clone, Copy)]
struct PlotRect {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
}

const MARGIN: f64 = 16.0;
const COLORBAR_GUTTER: f64 = 74.0;

fn fmt2(v: f64) -> String {
    format!("{v:.2}")
}

fn svg_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn worker_count(rows: usize) -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    let cap = std::env::var("ANISOLAY_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(8);
    available.min(cap).min(rows).max(1)
}

/// Rasterizes the field over its disk at a 2 px sampling grid and returns
/// the PNG as a base64 payload. Pixels outside the disk stay transparent.
fn field_raster(field: &MonotonicField, side_px: f64, style: &SceneStyle) -> String {
    let n = ((side_px / 2.0).ceil() as usize).max(1);
    let lo = field.min_value();
    let hi = field.max_value();
    let range = (hi - lo).max(1e-12);
    let alpha = (style.background_alpha * 255.0).round() as u8;
    let r_max = field.r_max();
    let step = 2.0 * r_max / n as f64;
    let mut pixels = vec![0u8; n * n * 4];

    let workers = worker_count(n);
    let chunk_rows = n.div_ceil(workers);
    std::thread::scope(|scope| {
        for (band, chunk) in pixels.chunks_mut(chunk_rows * n * 4).enumerate() {
            let row0 = band * chunk_rows;
            scope.spawn(move || {
                for (local, row) in chunk.chunks_mut(n * 4).enumerate() {
                    let j = row0 + local;
                    // sample at cell centers; world y runs upward
                    let wy = field.center()[1] + r_max - (j as f64 + 0.5) * step;
                    for i in 0..n {
                        let wx = field.center()[0] - r_max + (i as f64 + 0.5) * step;
                        let dx = wx - field.center()[0];
                        let dy = wy - field.center()[1];
                        if dx * dx + dy * dy > r_max * r_max {
                            continue;
                        }
                        let t = (eval_field(field, [wx, wy]) - lo) / range;
                        let [r, g, b] = style.colormap.sample(t);
                        row[i * 4..i * 4 + 4].copy_from_slice(&[r, g, b, alpha]);
                    }
                }
            });
        }
    });

    let mut png = Vec::new();
    PngEncoder::new(&mut png)
        .write_image(&pixels, n as u32, n as u32, ExtendedColorType::Rgba8)
        .expect("in-memory png encode");
    BASE64.encode(png)
}

/// Non-degenerate subset of the configured levels: a contour is drawn when
/// it exists (level not above the field maximum) and has positive extent.
fn drawable_contours(field: &MonotonicField, levels: &[f64]) -> Vec<(f64, Vec<[f64; 2]>)> {
    let mut out = Vec::new();
    for &level in levels {
        let ring = extract_contour(field, level);
        if ring.is_empty() {
            continue;
        }
        let degenerate = ring.iter().all(|p| {
            let dx = p[0] - field.center()[0];
            let dy = p[1] - field.center()[1];
            (dx * dx + dy * dy).sqrt() < 1e-9 * field.r_max()
        });
        if !degenerate {
            out.push((level, ring));
        }
    }
    out
}

fn ring_path(ring: &[[f64; 2]], map: &Affine) -> String {
    let mut d = String::new();
    for (k, p) in ring.iter().enumerate() {
        let q = map.map(*p);
        let _ = write!(d, "{}{} {}", if k == 0 { "M" } else { " L" }, fmt2(q[0]), fmt2(q[1]));
    }
    d.push_str(" Z");
    d
}

/// Palette index per node: group tags are numbered in order of first
/// appearance; untagged nodes share one neutral color.
fn node_fills(g: &Graph) -> Vec<String> {
    let mut tags: Vec<String> = Vec::new();
    (0..g.node_count())
        .map(|i| match g.group(i) {
            Some(tag) => {
                let idx = match tags.iter().position(|t| t == tag) {
                    Some(k) => k,
                    None => {
                        tags.push(tag.to_string());
                        tags.len() - 1
                    }
                };
                let [r, gc, b] = group_color(idx);
                format!("rgb({r},{gc},{b})")
            }
            None => String::from("rgb(105,125,150)"),
        })
        .collect()
}

fn node_radius(style: &SceneStyle, c: f64) -> f64 {
    style.node_radius[0] + c * (style.node_radius[1] - style.node_radius[0])
}

fn push_edges(svg: &mut String, g: &Graph, pts: &[[f64; 2]]) {
    svg.push_str("<g class=\"edges\" stroke=\"rgb(130,130,130)\" stroke-width=\"1\" stroke-opacity=\"0.55\">\n");
    for e in g.edges() {
        let a = pts[e.u];
        let b = pts[e.v];
        let _ = writeln!(
            svg,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            fmt2(a[0]),
            fmt2(a[1]),
            fmt2(b[0]),
            fmt2(b[1])
        );
    }
    svg.push_str("</g>\n");
}

fn push_nodes(
    svg: &mut String,
    g: &Graph,
    c: &CentralityVector,
    pts: &[[f64; 2]],
    style: &SceneStyle,
) {
    let fills = node_fills(g);
    svg.push_str("<g class=\"nodes\" stroke=\"white\" stroke-width=\"0.75\">\n");
    for (i, p) in pts.iter().enumerate() {
        let _ = writeln!(
            svg,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>",
            fmt2(p[0]),
            fmt2(p[1]),
            fmt2(node_radius(style, c.normalized()[i])),
            fills[i]
        );
    }
    svg.push_str("</g>\n");
    if style.labels {
        svg.push_str("<g class=\"labels\" font-family=\"sans-serif\" font-size=\"9\" fill=\"rgb(40,40,40)\">\n");
        for (i, p) in pts.iter().enumerate() {
            let text = match g.label(i) {
                Some(l) => l.to_string(),
                None => i.to_string(),
            };
            let r = node_radius(style, c.normalized()[i]);
            let _ = writeln!(
                svg,
                "<text x=\"{}\" y=\"{}\">{}</text>",
                fmt2(p[0] + r + 2.0),
                fmt2(p[1] + 3.0),
                svg_escape(&text)
            );
        }
        svg.push_str("</g>\n");
    }
}

fn push_colorbar(svg: &mut String, field: &MonotonicField, style: &SceneStyle, plot: PlotRect) {
    let x = plot.x + plot.w + 18.0;
    let w = 14.0;
    let lo = field.min_value();
    let hi = field.max_value();
    svg.push_str("<defs><linearGradient id=\"cbar\" x1=\"0\" y1=\"0\" x2=\"0\" y2=\"1\">\n");
    for k in 0..=15 {
        let t = k as f64 / 15.0;
        // top of the bar is the field maximum
        let [r, g, b] = style.colormap.sample(1.0 - t);
        let _ = writeln!(
            svg,
            "<stop offset=\"{}%\" stop-color=\"rgb({r},{g},{b})\"/>",
            fmt2(t * 100.0)
        );
    }
    svg.push_str("</linearGradient></defs>\n");
    let _ = writeln!(
        svg,
        "<g class=\"colorbar\"><rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"url(#cbar)\" stroke=\"rgb(90,90,90)\" stroke-width=\"0.5\"/>",
        fmt2(x),
        fmt2(plot.y),
        fmt2(w),
        fmt2(plot.h)
    );
    let ticks = [(0.0, hi), (0.5, (lo + hi) / 2.0), (1.0, lo)];
    for (frac, value) in ticks {
        let y = plot.y + frac * plot.h;
        let _ = writeln!(
            svg,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"rgb(90,90,90)\" stroke-width=\"1\"/><text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" fill=\"rgb(40,40,40)\">{}</text>",
            fmt2(x + w),
            fmt2(y),
            fmt2(x + w + 4.0),
            fmt2(y),
            fmt2(x + w + 7.0),
            fmt2(y + 3.5),
            fmt2(value)
        );
    }
    svg.push_str("</g>\n");
}

/// Full scene: field backdrop, contours, graph, colorbar.
pub fn render_svg(
    x: &Layout,
    field: &MonotonicField,
    g: &Graph,
    c: &CentralityVector,
    style: &SceneStyle,
) -> Result<String, AppError> {
    style.validate()?;
    if x.len() != g.node_count() || c.len() != g.node_count() {
        return Err(AppError::Data(String::from(
            "layout, centrality, and graph sizes disagree",
        )));
    }
    for (i, p) in x.positions().iter().enumerate() {
        let dx = p[0] - field.center()[0];
        let dy = p[1] - field.center()[1];
        if (dx * dx + dy * dy).sqrt() > field.r_max() * (1.0 + 1e-9) {
            return Err(AppError::Data(format!(
                "node {i} lies outside the field extent; the field was not built for this layout"
            )));
        }
    }

    let plot = PlotRect {
        x: MARGIN,
        y: MARGIN,
        w: style.width as f64 - 2.0 * MARGIN - COLORBAR_GUTTER,
        h: style.height as f64 - 2.0 * MARGIN,
    };
    let map = Affine::fit(field.center(), field.r_max(), plot);
    let side = 2.0 * field.r_max() * map.scale;
    let origin = map.map([
        field.center()[0] - field.r_max(),
        field.center()[1] + field.r_max(),
    ]);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">",
        style.width, style.height
    );
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    let _ = writeln!(
        svg,
        "<image class=\"field\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" preserveAspectRatio=\"none\" xlink:href=\"data:image/png;base64,{}\"/>",
        fmt2(origin[0]),
        fmt2(origin[1]),
        fmt2(side),
        fmt2(side),
        field_raster(field, side, style)
    );

    svg.push_str("<g class=\"contours\" fill=\"none\" stroke=\"rgb(60,60,60)\" stroke-width=\"1\" stroke-opacity=\"0.6\">\n");
    for (level, ring) in drawable_contours(field, &style.levels) {
        let _ = writeln!(
            svg,
            "<path data-level=\"{}\" d=\"{}\"/>",
            fmt2(level),
            ring_path(&ring, &map)
        );
    }
    svg.push_str("</g>\n");

    let pts: Vec<[f64; 2]> = x.positions().iter().map(|p| map.map(*p)).collect();
    push_edges(&mut svg, g, &pts);
    push_nodes(&mut svg, g, c, &pts, style);
    push_colorbar(&mut svg, field, style, plot);
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Side-by-side layout panels without a field backdrop, sharing node sizing
/// and coloring; used to compare plain and constrained results.
pub fn render_comparison(
    panels: &[(&str, &Layout)],
    g: &Graph,
    c: &CentralityVector,
    style: &SceneStyle,
) -> Result<String, AppError> {
    style.validate()?;
    if panels.is_empty() {
        return Err(AppError::Usage(String::from("need at least one layout to render")));
    }
    for (name, x) in panels {
        if x.len() != g.node_count() {
            return Err(AppError::Data(format!(
                "panel {name:?}: layout size does not match the graph"
            )));
        }
    }
    if c.len() != g.node_count() {
        return Err(AppError::Data(String::from("centrality size does not match the graph")));
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">",
        style.width, style.height
    );
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    let panel_w = (style.width as f64 - MARGIN) / panels.len() as f64;
    for (k, (name, x)) in panels.iter().enumerate() {
        let plot = PlotRect {
            x: MARGIN + k as f64 * panel_w,
            y: MARGIN + 14.0,
            w: panel_w - MARGIN,
            h: style.height as f64 - 2.0 * MARGIN - 14.0,
        };
        // fit this panel around the layout's bounding square plus padding
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in x.positions() {
            for a in 0..2 {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        let center = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
        let half = ((hi[0] - lo[0]).max(hi[1] - lo[1]) / 2.0).max(1e-9) * 1.08;
        let map = Affine::fit(center, half, plot);

        let _ = writeln!(
            svg,
            "<g class=\"panel\"><text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"rgb(40,40,40)\">{}</text>",
            fmt2(plot.x + 2.0),
            fmt2(plot.y - 4.0),
            svg_escape(name)
        );
        let pts: Vec<[f64; 2]> = x.positions().iter().map(|p| map.map(*p)).collect();
        push_edges(&mut svg, g, &pts);
        push_nodes(&mut svg, g, c, &pts, style);
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
