//! SVG renders of raster masks, holes, traced cycles and winding labels.

use std::fmt::Write;

use crate::raster::RasterDomain;
use crate::topology::{HoleReport, HoleWinding};

const PALETTE: [&str; 6] = [
    "#e6550d", "#3182bd", "#31a354", "#756bb1", "#de2d26", "#636363",
];

/// What to draw on top of the domain mask.
#[derive(Debug, Default, Clone, Copy)]
pub struct Layers<'a> {
    pub zero_set: Option<&'a RasterDomain>,
    pub holes: Option<&'a HoleReport>,
    pub windings: &'a [HoleWinding],
}

struct Frame {
    ny: usize,
    px: f64,
}

impl Frame {
    fn cell(&self, d: &RasterDomain, c: usize) -> (f64, f64) {
        let (i, j) = d.coords(c);
        (i as f64 * self.px, (self.ny - 1 - j) as f64 * self.px)
    }
}

fn mask_path(d: &RasterDomain, frame: &Frame, keep: impl Fn(usize) -> bool) -> String {
    let mut path = String::new();
    for j in 0..d.ny() {
        let mut i = 0;
        while i < d.nx() {
            if !keep(d.index(i, j)) {
                i += 1;
                continue;
            }
            let start = i;
            while i < d.nx() && keep(d.index(i, j)) {
                i += 1;
            }
            let (x, y) = frame.cell(d, d.index(start, j));
            let w = (i - start) as f64 * frame.px;
            let _ = write!(path, "M{x} {y}h{w}v{}h-{w}z", frame.px);
        }
    }
    path
}

/// Renders the domain `k` with optional zero set, holes (filled, with
/// stroked boundary cycles) and winding annotations.
pub fn render(k: &RasterDomain, layers: &Layers<'_>) -> String {
    let px = (512.0 / k.nx().max(k.ny()) as f64).clamp(1.0, 16.0);
    let frame = Frame { ny: k.ny(), px };
    let (w, h) = (k.nx() as f64 * px, k.ny() as f64 * px);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(out, r##"<rect width="{w}" height="{h}" fill="#ffffff"/>"##);
    let _ = writeln!(
        out,
        r##"<path class="domain" fill="#d9d9d9" d="{}"/>"##,
        mask_path(k, &frame, |c| k.contains(c))
    );
    if let Some(z) = layers.zero_set {
        let _ = writeln!(
            out,
            r##"<path class="zero-set" fill="#252525" d="{}"/>"##,
            mask_path(z, &frame, |c| z.contains(c))
        );
    }
    if let Some(report) = layers.holes {
        for (id, hole) in report.holes.iter().enumerate() {
            let color = PALETTE[id % PALETTE.len()];
            let mut cells = vec![false; k.len()];
            for &c in &hole.cells {
                cells[c] = true;
            }
            let _ = writeln!(
                out,
                r#"<path class="hole" data-hole="{id}" fill="{color}" fill-opacity="0.45" d="{}"/>"#,
                mask_path(k, &frame, |c| cells[c])
            );
            for cycle in &hole.boundary {
                let points: Vec<String> = cycle
                    .cells
                    .iter()
                    .map(|&c| {
                        let (x, y) = frame.cell(k, c);
                        format!("{},{}", x + 0.5 * px, y + 0.5 * px)
                    })
                    .collect();
                let _ = writeln!(
                    out,
                    r#"<polygon class="cycle" data-hole="{id}" fill="none" stroke="{color}" stroke-width="{}" points="{}"/>"#,
                    (0.4 * px).max(1.0),
                    points.join(" ")
                );
            }
        }
    }
    for wn in layers.windings {
        if let Some(c) = k.locate(wn.sample) {
            let (x, y) = frame.cell(k, c);
            let _ = writeln!(
                out,
                r##"<text class="winding" x="{x}" y="{y}" font-family="monospace" font-size="14" fill="#000000">w={}</text>"##,
                wn.winding
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
