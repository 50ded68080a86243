//! Deterministic SVG renditions: vertices on a unit circle anti-clockwise
//! with vertex 1 at angle 0, diagonals as chords, spider legs meeting at
//! the foot centroid, pairing arcs as curves bent toward the center.
//!
//! Output is byte-stable for a fixed input: coordinates are formatted to
//! four decimals and every element is emitted in canonical order.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::dissection::{Dissection, PointedDissection, Region};
use crate::pairings::{label_of, LabeledPairing};
use crate::spiders::{AnnularSpiderCollection, SpiderCollection};
use crate::Error;

pub const VIEW_BOX: &str = "-1.2 -1.2 2.4 2.4";

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

fn fmt4(x: f64) -> String {
    let r = (x * 10_000.0).round() / 10_000.0;
    // avoid "-0.0000"
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r:.4}")
}

fn point(k: u32, m: u32) -> (f64, f64) {
    let theta = TAU * f64::from(k - 1) / f64::from(m);
    // SVG y grows downward; negate so anti-clockwise is visually so
    (theta.cos(), -theta.sin())
}

fn header() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{VIEW_BOX}\">\n"
    )
}

fn boundary_circle(out: &mut String) {
    out.push_str("<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"0.01\"/>\n");
}

fn vertex_dots(out: &mut String, m: u32) {
    for v in 1..=m {
        let (x, y) = point(v, m);
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"0.025\" fill=\"#222222\"/>",
            fmt4(x),
            fmt4(y)
        );
    }
}

fn polygon_outline(out: &mut String, m: u32) {
    let mut points = String::new();
    for v in 1..=m {
        let (x, y) = point(v, m);
        if v > 1 {
            points.push(' ');
        }
        let _ = write!(points, "{},{}", fmt4(x), fmt4(y));
    }
    let _ = writeln!(
        out,
        "<polygon points=\"{points}\" fill=\"none\" stroke=\"#222222\" stroke-width=\"0.015\"/>"
    );
}

fn chord(out: &mut String, m: u32, u: u32, w: u32, stroke: &str) {
    let (x1, y1) = point(u, m);
    let (x2, y2) = point(w, m);
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"0.015\"/>",
        fmt4(x1),
        fmt4(y1),
        fmt4(x2),
        fmt4(y2)
    );
}

fn face_fill(out: &mut String, m: u32, face: &Region) {
    let mut points = String::new();
    for (idx, &v) in face.vertices().iter().enumerate() {
        let (x, y) = point(v, m);
        if idx > 0 {
            points.push(' ');
        }
        let _ = write!(points, "{},{}", fmt4(x), fmt4(y));
    }
    let _ = writeln!(out, "<polygon points=\"{points}\" fill=\"#fde6c4\"/>");
}

/// Polygon outline plus diagonals.
pub fn render_dissection(d: &Dissection) -> Result<String, Error> {
    d.validate().map_err(Error::InvalidDissection)?;
    let m = d.vertex_count();
    let mut out = header();
    polygon_outline(&mut out, m);
    for &(u, w) in d.diagonals() {
        chord(&mut out, m, u, w, "#1f77b4");
    }
    vertex_dots(&mut out, m);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Dissection with the base region shaded.
pub fn render_pointed(pd: &PointedDissection) -> Result<String, Error> {
    let d = pd.dissection();
    let m = d.vertex_count();
    let mut out = header();
    face_fill(&mut out, m, pd.base());
    polygon_outline(&mut out, m);
    for &(u, w) in d.diagonals() {
        chord(&mut out, m, u, w, "#1f77b4");
    }
    vertex_dots(&mut out, m);
    out.push_str("</svg>\n");
    Ok(out)
}

fn spider_legs(out: &mut String, m: u32, blocks: &[Vec<u32>]) {
    for (idx, feet) in blocks.iter().enumerate() {
        let stroke = PALETTE[idx % PALETTE.len()];
        let pts: Vec<(f64, f64)> = feet.iter().map(|&v| point(v, m)).collect();
        let cx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
        let cy = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
        for (x, y) in &pts {
            let _ = writeln!(
                out,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"0.02\"/>",
                fmt4(cx),
                fmt4(cy),
                fmt4(*x),
                fmt4(*y)
            );
        }
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"0.03\" fill=\"{stroke}\"/>",
            fmt4(cx),
            fmt4(cy)
        );
    }
}

/// Spiders as star trees from the centroid of their feet.
pub fn render_spiders(c: &SpiderCollection) -> Result<String, Error> {
    c.validate().map_err(Error::InvalidSpiders)?;
    let m = c.s() * c.n();
    let mut out = header();
    boundary_circle(&mut out);
    spider_legs(&mut out, m, c.blocks());
    vertex_dots(&mut out, m);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Spiders plus a small circle marking the hole face.
pub fn render_annular(ac: &AnnularSpiderCollection) -> Result<String, Error> {
    let c = ac.collection();
    let m = c.s() * c.n();
    let mut out = header();
    boundary_circle(&mut out);
    spider_legs(&mut out, m, c.blocks());
    // hole marker in the middle of the marked gap, pulled inward
    let g = ac.hole_gap();
    let theta = TAU * (f64::from(g - 1) + 0.5) / f64::from(m);
    let (hx, hy) = (0.55 * theta.cos(), -0.55 * theta.sin());
    let _ = writeln!(
        out,
        "<circle cx=\"{}\" cy=\"{}\" r=\"0.12\" fill=\"none\" stroke=\"#222222\" stroke-width=\"0.02\"/>",
        fmt4(hx),
        fmt4(hy)
    );
    vertex_dots(&mut out, m);
    out.push_str("</svg>\n");
    Ok(out)
}

/// Non-crossing arc diagram, arcs colored by label.
pub fn render_pairing(p: &LabeledPairing) -> Result<String, Error> {
    p.validate().map_err(Error::InvalidPairing)?;
    let m = p.vertex_count();
    let mut out = header();
    boundary_circle(&mut out);
    for &(u, w) in p.arcs() {
        let label = label_of(p.s(), p.n(), u)?;
        let stroke = PALETTE[((label - 1) % PALETTE.len() as u32) as usize];
        let (x1, y1) = point(u, m);
        let (x2, y2) = point(w, m);
        let (cx, cy) = ((x1 + x2) / 2.0 * 0.3, (y1 + y2) / 2.0 * 0.3);
        let _ = writeln!(
            out,
            "<path d=\"M {} {} Q {} {} {} {}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"0.02\"/>",
            fmt4(x1),
            fmt4(y1),
            fmt4(cx),
            fmt4(cy),
            fmt4(x2),
            fmt4(y2)
        );
    }
    vertex_dots(&mut out, m);
    out.push_str("</svg>\n");
    Ok(out)
}
