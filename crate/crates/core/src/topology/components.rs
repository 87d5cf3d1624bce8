use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::raster::{RasterDomain, DIRS8};

pub const NO_LABEL: u32 = u32::MAX;

/// A closed walk through foreground cells, stored without repeating the
/// first cell at the end. Walks produced by boundary tracing keep the
/// adjacent background component on their left; a cell is visited twice
/// only where the foreground narrows to a one-cell-wide neck.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cycle {
    pub cells: Vec<usize>,
    pub points: Vec<[f64; 2]>,
}

impl Cycle {
    pub fn from_cells(domain: &RasterDomain, cells: Vec<usize>) -> Self {
        let points = cells.iter().map(|&c| domain.center(c)).collect();
        Cycle { cells, points }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Shoelace area of the polygon through the cell centres; positive for
    /// counterclockwise walks.
    pub fn signed_area(&self) -> f64 {
        let n = self.points.len();
        let mut acc = 0.0;
        for k in 0..n {
            let [x0, y0] = self.points[k];
            let [x1, y1] = self.points[(k + 1) % n];
            acc += x0 * y1 - x1 * y0;
        }
        0.5 * acc
    }

    pub fn reversed(&self) -> Self {
        let mut cells = self.cells.clone();
        let mut points = self.points.clone();
        cells.reverse();
        points.reverse();
        Cycle { cells, points }
    }

    /// Same walk started at position `k`.
    pub fn rebased(&self, k: usize) -> Self {
        let mut cells = self.cells.clone();
        let mut points = self.points.clone();
        cells.rotate_left(k % self.len().max(1));
        points.rotate_left(k % self.len().max(1));
        Cycle { cells, points }
    }

    pub fn is_closed_walk(&self, domain: &RasterDomain) -> bool {
        let n = self.cells.len();
        (0..n).all(|k| {
            let a = self.cells[k];
            let b = self.cells[(k + 1) % n];
            n == 1 || domain.neighbors8(a).iter().any(|&x| x == b)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub bounded: bool,
    pub size: usize,
    pub first_cell: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hole {
    pub component: usize,
    pub cells: Vec<usize>,
    /// Every contour separating the hole from an adjacent foreground
    /// component, oriented with the hole on the left (planar rasters only).
    pub boundary: Vec<Cycle>,
    /// Index into `boundary` of the counterclockwise contour enclosing the hole.
    pub outer: Option<usize>,
}

impl Hole {
    pub fn outer_cycle(&self) -> Option<&Cycle> {
        self.outer.map(|k| &self.boundary[k])
    }
}

/// Labelling of the complement of a foreground mask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoleReport {
    /// Component id per grid cell, [`NO_LABEL`] on foreground cells.
    pub labels: Vec<u32>,
    pub components: Vec<Component>,
    pub holes: Vec<Hole>,
}

impl HoleReport {
    pub fn unbounded_count(&self) -> usize {
        self.components.iter().filter(|c| !c.bounded).count()
    }

    /// Hole containing a grid cell, if any.
    pub fn hole_of_cell(&self, cell: usize) -> Option<usize> {
        let label = self.labels[cell];
        if label == NO_LABEL {
            return None;
        }
        self.holes
            .iter()
            .position(|h| h.component == label as usize)
    }

    /// Traced counterclockwise boundary of each hole.
    pub fn boundary_cycles(&self) -> Vec<Option<&Cycle>> {
        self.holes.iter().map(|h| h.outer_cycle()).collect()
    }
}

/// Flood-fills the complement of `z` inside the grid.
///
/// In the plane the foreground is 8-connected and the background
/// 4-connected; the component touching the grid border is the unbounded
/// one, all others are holes. Each hole's contours are traced with Moore
/// neighbour tracing.
pub fn complement_components(z: &RasterDomain) -> HoleReport {
    let (labels, mut components) = label(z, false, |d, c| d.neighbors4(c));
    let mut holes = Vec::new();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); components.len()];
    for (cell, &l) in labels.iter().enumerate() {
        if l != NO_LABEL {
            members[l as usize].push(cell);
        }
    }
    for (id, comp) in components.iter_mut().enumerate() {
        if comp.bounded {
            holes.push(Hole {
                component: id,
                cells: std::mem::take(&mut members[id]),
                boundary: Vec::new(),
                outer: None,
            });
        }
    }
    if z.dim() == 2 && !holes.is_empty() {
        let (fg_labels, fg) = label(z, true, |d, c| d.neighbors8(c));
        let mut seen = vec![usize::MAX; fg.len()];
        for (hole_id, hole) in holes.iter_mut().enumerate() {
            for &cell in &hole.cells {
                for &n in &z.neighbors4(cell) {
                    if !z.contains(n) {
                        continue;
                    }
                    let fl = fg_labels[n] as usize;
                    if seen[fl] == hole_id {
                        continue;
                    }
                    seen[fl] = hole_id;
                    let walk = trace_contour(z, n, cell);
                    hole.boundary.push(Cycle::from_cells(z, walk));
                }
            }
            hole.outer = hole
                .boundary
                .iter()
                .enumerate()
                .filter(|(_, c)| c.signed_area() > 0.0)
                .max_by(|a, b| a.1.signed_area().total_cmp(&b.1.signed_area()))
                .map(|(k, _)| k);
        }
    }
    HoleReport {
        labels,
        components,
        holes,
    }
}

/// Connected components of the cells with `mask == foreground`.
fn label(
    z: &RasterDomain,
    foreground: bool,
    neighbors: impl Fn(&RasterDomain, usize) -> crate::raster::Neighbors,
) -> (Vec<u32>, Vec<Component>) {
    let n = z.len();
    let mut labels = vec![NO_LABEL; n];
    let mut comps = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if z.contains(start) != foreground || labels[start] != NO_LABEL {
            continue;
        }
        let id = comps.len() as u32;
        labels[start] = id;
        queue.push_back(start);
        let mut size = 0;
        let mut touches_border = false;
        while let Some(c) = queue.pop_front() {
            size += 1;
            touches_border |= z.on_border(c);
            for &m in &neighbors(z, c) {
                if z.contains(m) == foreground && labels[m] == NO_LABEL {
                    labels[m] = id;
                    queue.push_back(m);
                }
            }
        }
        comps.push(Component {
            bounded: !touches_border,
            size,
            first_cell: start,
        });
    }
    (labels, comps)
}

fn dir_index(di: isize, dj: isize) -> usize {
    DIRS8
        .iter()
        .position(|&d| d == (di, dj))
        .expect("cells are 8-adjacent")
}

/// Moore neighbour tracing of the contour between the foreground component
/// of `start` and the background component of `back` (a 4-neighbour of
/// `start`). Neighbours are scanned clockwise from the backtrack cell, so
/// the background stays on the left of the walk.
fn trace_contour(z: &RasterDomain, start: usize, back: usize) -> Vec<usize> {
    let step = |c: usize, b: usize| -> Option<(usize, usize)> {
        let (ci, cj) = z.coords(c);
        let (bi, bj) = z.coords(b);
        let d0 = dir_index(bi as isize - ci as isize, bj as isize - cj as isize);
        for k in 1..=8 {
            let d = (d0 + 8 - k) % 8;
            let (di, dj) = DIRS8[d];
            let n = z.offset(ci, cj, di, dj)?;
            if z.contains(n) {
                let (pi, pj) = DIRS8[(d + 1) % 8];
                let prev = z.offset(ci, cj, pi, pj)?;
                return Some((n, prev));
            }
        }
        None
    };
    let Some(first) = step(start, back) else {
        return vec![start];
    };
    let cap = 8 * z.popcount() + 16;
    let mut walk = vec![first.0];
    let mut state = first;
    for _ in 0..cap {
        state = match step(state.0, state.1) {
            Some(s) => s,
            None => break,
        };
        if state == first {
            break;
        }
        walk.push(state.0);
    }
    walk
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::Bbox;

    fn band(r: f64, w: f64, h: f64) -> RasterDomain {
        RasterDomain::rasterize_2d(Bbox::square(2.25), h, 2, |x, y| (x.hypot(y) - r).abs() <= w)
            .unwrap()
    }

    #[test]
    fn empty_foreground_has_one_unbounded_component() {
        let z = band(1.5, -1.0, 0.125);
        let rep = complement_components(&z);
        assert_eq!(rep.components.len(), 1);
        assert_eq!(rep.unbounded_count(), 1);
        assert!(rep.holes.is_empty());
    }

    #[test]
    fn ring_has_one_hole_with_ccw_boundary() {
        let h = 1.0 / 32.0;
        let z = band(1.5, 2.0 * h, h);
        let rep = complement_components(&z);
        assert_eq!(rep.components.len(), 2);
        assert_eq!(rep.holes.len(), 1);
        let hole = &rep.holes[0];
        // flood-fill oracle: every cell strictly inside r < 1.5 - w is in the hole
        for &c in &hole.cells {
            let [x, y] = z.center(c);
            assert!(x.hypot(y) < 1.5);
        }
        let origin = z.locate([0.0, 0.0]).unwrap();
        assert_eq!(rep.hole_of_cell(origin), Some(0));
        assert_eq!(hole.boundary.len(), 1);
        let cyc = hole.outer_cycle().unwrap();
        assert!(cyc.signed_area() > 0.0);
        assert!(cyc.is_closed_walk(&z));
        assert!(cyc.cells.iter().all(|&c| z.contains(c)));
        // the inner contour hugs radius 1.5 - w
        for p in &cyc.points {
            let r = p[0].hypot(p[1]);
            assert!((r - (1.5 - 2.0 * h)).abs() < 2.0 * h, "r = {r}");
        }
    }

    #[test]
    fn island_contour_runs_clockwise() {
        let h = 1.0 / 16.0;
        // ring with a solid disk inside its hole
        let z = RasterDomain::rasterize_2d(Bbox::square(2.25), h, 2, |x, y| {
            let r = x.hypot(y);
            (r - 1.5).abs() <= 0.15 || r <= 0.5
        })
        .unwrap();
        let rep = complement_components(&z);
        assert_eq!(rep.holes.len(), 1);
        let hole = &rep.holes[0];
        assert_eq!(hole.boundary.len(), 2);
        let areas: Vec<f64> = hole.boundary.iter().map(|c| c.signed_area()).collect();
        assert!(areas.iter().any(|&a| a > 0.0));
        assert!(areas.iter().any(|&a| a < 0.0));
    }

    #[test]
    fn one_dimensional_gaps() {
        let h = 1.0 / 64.0;
        let z = RasterDomain::rasterize_1d(-2.0, 2.0, h, 2, |x| {
            (-1.0..=-0.5).contains(&x) || (0.5..=1.0).contains(&x)
        })
        .unwrap();
        let rep = complement_components(&z);
        assert_eq!(rep.components.len(), 3);
        assert_eq!(rep.unbounded_count(), 2);
        assert_eq!(rep.holes.len(), 1);
        // interval oracle: the gap is (-0.5, 0.5) at cell resolution
        let expected = (0..z.len())
            .filter(|&c| {
                let x = z.center(c)[0];
                x > -0.5 && x < 0.5
            })
            .count();
        assert_eq!(rep.holes[0].cells.len(), expected);
    }

    #[test]
    fn square_frame_is_a_digital_jordan_curve() {
        let z = RasterDomain::rasterize_2d(Bbox::square(1.0), 0.1, 2, |x, y| {
            let m = x.abs().max(y.abs());
            (0.5..=0.6).contains(&m)
        })
        .unwrap();
        let rep = complement_components(&z);
        assert_eq!(rep.components.len(), 2);
        assert_eq!(rep.holes.len(), 1);
    }

    #[test]
    fn diagonal_gaps_do_not_leak() {
        // a one-cell diamond: 8-connected foreground ring, 4-connected inside
        let h = 1.0;
        let pts = [(0, 1), (1, 0), (0, -1), (-1, 0)];
        let z = RasterDomain::rasterize_2d(Bbox::square(3.0), h, 2, |x, y| {
            pts.iter().any(|&(a, b)| {
                (x - (a as f64 + 0.5)).abs() < 0.1 && (y - (b as f64 + 0.5)).abs() < 0.1
            })
        })
        .unwrap();
        let rep = complement_components(&z);
        assert_eq!(rep.holes.len(), 1);
        assert_eq!(rep.holes[0].cells.len(), 1);
        let cyc = rep.holes[0].outer_cycle().unwrap();
        assert_eq!(cyc.len(), 4);
    }
}
