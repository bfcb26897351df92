//! Deterministic SVG drawings of a forest over its map.

use std::collections::HashMap;
use std::fmt::Write as _;

use rrf_core::cspace::{Config, Scene};
use rrf_core::forest::{ForestDump, TreeKind};

pub const ROOTED_COLOR: &str = "#2e8b57";
pub const LOCAL_COLOR: &str = "#800080";
pub const PATH_COLOR: &str = "#1e90ff";
pub const SAMPLER_COLOR: &str = "#ff8c00";
pub const INIT_COLOR: &str = "#00a000";
pub const TARGET_COLOR: &str = "#d00000";
const OBSTACLE_COLOR: &str = "#3a3a3a";

/// Longest side of the drawing in pixels.
const CANVAS: f64 = 800.0;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RenderError {
    #[error("dump node {0} has {1} coordinates, the scene has {2}")]
    Dimension(usize, usize, usize),
    #[error("dump node {0} refers to missing {1} {2}")]
    Dangling(usize, &'static str, usize),
}

pub fn render_svg(scene: &Scene, dump: &ForestDump) -> Result<String, RenderError> {
    let dim = scene.spec().dim();
    let grid = scene.grid();
    let scale = CANVAS / grid.world_width().max(grid.world_height());
    let (w, h) = (grid.world_width() * scale, grid.world_height() * scale);
    let point = |c: &[f64]| {
        let p = scene.workspace_point(&Config::new(c.to_vec()));
        (p[0] * scale, p[1] * scale)
    };

    let kinds: HashMap<usize, TreeKind> = dump.trees.iter().map(|t| (t.id, t.kind)).collect();
    let coords: HashMap<usize, &[f64]> = dump.nodes.iter().map(|n| (n.id, n.coords.as_slice())).collect();
    for n in &dump.nodes {
        if n.coords.len() != dim {
            return Err(RenderError::Dimension(n.id, n.coords.len(), dim));
        }
        if !kinds.contains_key(&n.tree) {
            return Err(RenderError::Dangling(n.id, "tree", n.tree));
        }
        if let Some(p) = n.parent.filter(|p| !coords.contains_key(p)) {
            return Err(RenderError::Dangling(n.id, "parent", p));
        }
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let _ = writeln!(svg, r##"<rect class="background" x="0" y="0" width="{w:.3}" height="{h:.3}" fill="#ffffff"/>"##);

    let cell = grid.resolution() * scale;
    let _ = writeln!(svg, r#"<g class="obstacles" fill="{OBSTACLE_COLOR}">"#);
    for row in 0..grid.height() {
        let mut col = 0;
        while col < grid.width() {
            if !grid.is_occupied(col, row) {
                col += 1;
                continue;
            }
            let start = col;
            while col < grid.width() && grid.is_occupied(col, row) {
                col += 1;
            }
            let _ = writeln!(
                svg,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{cell:.3}"/>"#,
                start as f64 * cell,
                row as f64 * cell,
                (col - start) as f64 * cell
            );
        }
    }
    svg.push_str("</g>\n");

    let _ = writeln!(svg, r#"<g class="edges" stroke-width="1">"#);
    for n in &dump.nodes {
        let Some(parent) = n.parent else { continue };
        let (class, color) = match kinds[&n.tree] {
            TreeKind::Local => ("local", LOCAL_COLOR),
            _ => ("rooted", ROOTED_COLOR),
        };
        let (x1, y1) = point(coords[&parent]);
        let (x2, y2) = point(&n.coords);
        let _ = writeln!(
            svg,
            r#"<line class="edge {class}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{color}"/>"#
        );
    }
    svg.push_str("</g>\n");

    if dump.path.len() >= 2 {
        let pts: Vec<String> = dump
            .path
            .iter()
            .map(|c| {
                let (x, y) = point(c);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="path" points="{}" fill="none" stroke="{PATH_COLOR}" stroke-width="3"/>"#,
            pts.join(" ")
        );
    }

    let marker = (cell * 0.4).max(3.0);
    for s in &dump.samplers {
        let (x, y) = point(s);
        let _ = writeln!(
            svg,
            r#"<circle class="sampler" cx="{x:.3}" cy="{y:.3}" r="{marker:.3}" fill="none" stroke="{SAMPLER_COLOR}" stroke-width="2"/>"#
        );
    }
    for t in &dump.trees {
        let (class, color) = match t.kind {
            TreeKind::Init => ("init", INIT_COLOR),
            TreeKind::Target => ("target", TARGET_COLOR),
            TreeKind::Local => continue,
        };
        let Some(c) = coords.get(&t.root) else { continue };
        let (x, y) = point(c);
        let _ = writeln!(
            svg,
            r#"<circle class="{class}" cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="{color}"/>"#,
            marker * 1.5
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
