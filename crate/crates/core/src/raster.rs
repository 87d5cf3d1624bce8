//! Uniform grids with a bit mask, used as the spectrum of grid-sampled
//! function algebras and as the carrier for all planar/linear topology.
//!
//! Cells are addressed by a linear index `j * nx + i`; `i` runs along x and
//! `j` along y (always 0 for one-dimensional rasters). Every mask keeps a
//! border of at least [`MIN_MARGIN`] empty cells, so the unbounded part of
//! the complement is exactly the part touching the grid border.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_MARGIN: usize = 2;

/// Axis-aligned box; for one-dimensional rasters `ymin == ymax == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bbox {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Bbox {
    pub fn square(half: f64) -> Self {
        Bbox {
            xmin: -half,
            xmax: half,
            ymin: -half,
            ymax: half,
        }
    }

    pub fn interval(xmin: f64, xmax: f64) -> Self {
        Bbox {
            xmin,
            xmax,
            ymin: 0.0,
            ymax: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RasterDomain {
    dim: u8,
    origin: [f64; 2],
    h: f64,
    nx: usize,
    ny: usize,
    margin: usize,
    mask: Vec<bool>,
}

impl RasterDomain {
    /// Rasterizes `{p in bbox : pred(p)}` in the plane with cell size `h`.
    /// The grid covers `bbox` padded by `margin` empty cells on each side.
    pub fn rasterize_2d(
        bbox: Bbox,
        h: f64,
        margin: usize,
        pred: impl Fn(f64, f64) -> bool,
    ) -> Result<Self> {
        check_geometry(h, margin)?;
        let cx = cells_across(bbox.xmin, bbox.xmax, h)?;
        let cy = cells_across(bbox.ymin, bbox.ymax, h)?;
        let nx = cx + 2 * margin;
        let ny = cy + 2 * margin;
        let origin = [bbox.xmin - margin as f64 * h, bbox.ymin - margin as f64 * h];
        let mut mask = vec![false; nx * ny];
        for j in margin..margin + cy {
            for i in margin..margin + cx {
                let x = origin[0] + (i as f64 + 0.5) * h;
                let y = origin[1] + (j as f64 + 0.5) * h;
                mask[j * nx + i] = pred(x, y);
            }
        }
        Ok(RasterDomain {
            dim: 2,
            origin,
            h,
            nx,
            ny,
            margin,
            mask,
        })
    }

    /// Rasterizes `{x in [xmin, xmax] : pred(x)}` on the line.
    pub fn rasterize_1d(
        xmin: f64,
        xmax: f64,
        h: f64,
        margin: usize,
        pred: impl Fn(f64) -> bool,
    ) -> Result<Self> {
        check_geometry(h, margin)?;
        let cx = cells_across(xmin, xmax, h)?;
        let nx = cx + 2 * margin;
        let origin = [xmin - margin as f64 * h, 0.0];
        let mut mask = vec![false; nx];
        for (i, m) in mask.iter_mut().enumerate().take(margin + cx).skip(margin) {
            *m = pred(origin[0] + (i as f64 + 0.5) * h);
        }
        Ok(RasterDomain {
            dim: 1,
            origin,
            h,
            nx,
            ny: 1,
            margin,
            mask,
        })
    }

    pub fn from_parts(
        dim: u8,
        origin: [f64; 2],
        h: f64,
        nx: usize,
        ny: usize,
        margin: usize,
        mask: Vec<bool>,
    ) -> Result<Self> {
        check_geometry(h, margin)?;
        if !(dim == 1 || dim == 2) {
            return Err(Error::InvalidDescriptor(format!("raster dimension {dim}")));
        }
        if dim == 1 && ny != 1 {
            return Err(Error::InvalidDescriptor("1-d raster needs ny = 1".into()));
        }
        if mask.len() != nx * ny {
            return Err(Error::InvalidDescriptor(format!(
                "mask has {} cells, grid has {}",
                mask.len(),
                nx * ny
            )));
        }
        let d = RasterDomain {
            dim,
            origin,
            h,
            nx,
            ny,
            margin,
            mask,
        };
        d.check_margin()?;
        Ok(d)
    }

    /// Same grid geometry, different mask.
    pub fn with_mask(&self, mask: Vec<bool>) -> Result<Self> {
        Self::from_parts(
            self.dim,
            self.origin,
            self.h,
            self.nx,
            self.ny,
            self.margin,
            mask,
        )
    }

    pub fn empty_like(&self) -> Self {
        RasterDomain {
            mask: vec![false; self.mask.len()],
            ..self.clone()
        }
    }

    fn check_margin(&self) -> Result<()> {
        for idx in self.cells() {
            let (i, j) = self.coords(idx);
            let inside_x = i >= self.margin && i + self.margin < self.nx;
            let inside_y = self.dim == 1 || (j >= self.margin && j + self.margin < self.ny);
            if !(inside_x && inside_y) {
                return Err(Error::InvalidDescriptor(format!(
                    "mask cell ({i}, {j}) lies inside the {}-cell margin",
                    self.margin
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn margin(&self) -> usize {
        self.margin
    }
    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Extent of the whole grid, margin included.
    pub fn bbox(&self) -> Bbox {
        Bbox {
            xmin: self.origin[0],
            xmax: self.origin[0] + self.nx as f64 * self.h,
            ymin: self.origin[1],
            ymax: if self.dim == 1 {
                self.origin[1]
            } else {
                self.origin[1] + self.ny as f64 * self.h
            },
        }
    }

    /// Number of grid cells (set or not).
    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    pub fn popcount(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.mask[idx]
    }

    /// Set cells in increasing index order.
    pub fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn center(&self, idx: usize) -> [f64; 2] {
        let (i, j) = self.coords(idx);
        let y = if self.dim == 1 {
            0.0
        } else {
            self.origin[1] + (j as f64 + 0.5) * self.h
        };
        [self.origin[0] + (i as f64 + 0.5) * self.h, y]
    }

    /// Cell containing the point, if it lies on the grid.
    pub fn locate(&self, p: [f64; 2]) -> Option<usize> {
        let fi = ((p[0] - self.origin[0]) / self.h).floor();
        if fi < 0.0 || fi >= self.nx as f64 {
            return None;
        }
        let j = if self.dim == 1 {
            0
        } else {
            let fj = ((p[1] - self.origin[1]) / self.h).floor();
            if fj < 0.0 || fj >= self.ny as f64 {
                return None;
            }
            fj as usize
        };
        Some(self.index(fi as usize, j))
    }

    pub fn on_border(&self, idx: usize) -> bool {
        let (i, j) = self.coords(idx);
        i == 0 || i + 1 == self.nx || (self.dim == 2 && (j == 0 || j + 1 == self.ny))
    }

    /// Edge neighbours (left/right on the line).
    pub fn neighbors4(&self, idx: usize) -> Neighbors {
        self.neighbors_from(idx, &DIRS4)
    }

    /// Edge and corner neighbours (left/right on the line).
    pub fn neighbors8(&self, idx: usize) -> Neighbors {
        self.neighbors_from(idx, &DIRS8)
    }

    fn neighbors_from(&self, idx: usize, dirs: &[(isize, isize)]) -> Neighbors {
        let mut out = Neighbors::default();
        let (i, j) = self.coords(idx);
        for &(di, dj) in dirs {
            if self.dim == 1 && dj != 0 {
                continue;
            }
            if let Some(n) = self.offset(i, j, di, dj) {
                out.push(n);
            }
        }
        out
    }

    pub(crate) fn offset(&self, i: usize, j: usize, di: isize, dj: isize) -> Option<usize> {
        let ni = i as isize + di;
        let nj = j as isize + dj;
        if ni < 0 || nj < 0 || ni >= self.nx as isize || nj >= self.ny as isize {
            return None;
        }
        Some(self.index(ni as usize, nj as usize))
    }

    pub fn same_grid(&self, other: &RasterDomain) -> bool {
        self.dim == other.dim
            && self.nx == other.nx
            && self.ny == other.ny
            && self.margin == other.margin
            && self.h == other.h
            && self.origin == other.origin
    }

    pub fn is_subset_of(&self, other: &RasterDomain) -> bool {
        self.same_grid(other) && self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b)
    }

    /// Cells of the mask whose edge neighbours all belong to the mask.
    pub fn interior(&self) -> RasterDomain {
        let mask = (0..self.len())
            .map(|idx| self.mask[idx] && self.neighbors4(idx).iter().all(|&n| self.mask[n]))
            .collect();
        RasterDomain {
            mask,
            ..self.clone()
        }
    }

    /// For every grid cell, the nearest set cell in Euclidean distance
    /// (ties go to the lowest cell index) together with the squared distance
    /// in cell units. `None` when the mask is empty.
    pub fn nearest_sites(&self) -> Option<NearestSites> {
        nearest_sites(self)
    }

    pub fn to_file(&self) -> MaskFile {
        let rows = (0..self.ny)
            .map(|j| rle_encode(&self.mask[j * self.nx..(j + 1) * self.nx]))
            .collect();
        MaskFile {
            d: self.dim,
            bbox: self.bbox(),
            h: self.h,
            nx: self.nx,
            ny: self.ny,
            margin: self.margin,
            rows,
        }
    }

    pub fn from_file(file: &MaskFile) -> Result<Self> {
        if file.rows.len() != file.ny {
            return Err(Error::InvalidDescriptor(format!(
                "mask file lists {} rows, header says {}",
                file.rows.len(),
                file.ny
            )));
        }
        let mut mask = Vec::with_capacity(file.nx * file.ny);
        for row in &file.rows {
            let decoded = rle_decode(row, file.nx)?;
            mask.extend(decoded);
        }
        Self::from_parts(
            file.d,
            [file.bbox.xmin, file.bbox.ymin],
            file.h,
            file.nx,
            file.ny,
            file.margin,
            mask,
        )
    }
}

fn check_geometry(h: f64, margin: usize) -> Result<()> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidDescriptor(format!("cell size {h}")));
    }
    if margin < MIN_MARGIN {
        return Err(Error::InvalidDescriptor(format!(
            "margin {margin} < {MIN_MARGIN}"
        )));
    }
    Ok(())
}

fn cells_across(lo: f64, hi: f64, h: f64) -> Result<usize> {
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        return Err(Error::InvalidDescriptor(format!(
            "empty extent [{lo}, {hi}]"
        )));
    }
    // Snap before ceil so that e.g. 4 / (1/64) gives exactly 256 cells.
    let n = ((hi - lo) / h - 1e-9).ceil();
    Ok(n.max(1.0) as usize)
}

// Counterclockwise from east; y grows upwards.
pub(crate) const DIRS8: [(isize, isize); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];
const DIRS4: [(isize, isize); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

/// Small fixed-capacity neighbour list.
#[derive(Debug, Default, Clone, Copy)]
pub struct Neighbors {
    buf: [usize; 8],
    len: usize,
}

impl Neighbors {
    fn push(&mut self, v: usize) {
        self.buf[self.len] = v;
        self.len += 1;
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.buf[..self.len].iter()
    }
}

impl<'a> IntoIterator for &'a Neighbors {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;
    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

/// On-disk mask: geometry header plus one run-length row per grid row.
/// Each row alternates run lengths starting with a run of unset cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskFile {
    pub d: u8,
    pub bbox: Bbox,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub margin: usize,
    pub rows: Vec<Vec<u32>>,
}

fn rle_encode(row: &[bool]) -> Vec<u32> {
    let mut runs = Vec::new();
    let mut current = false;
    let mut run = 0u32;
    for &b in row {
        if b == current {
            run += 1;
        } else {
            runs.push(run);
            current = b;
            run = 1;
        }
    }
    runs.push(run);
    runs
}

fn rle_decode(runs: &[u32], nx: usize) -> Result<Vec<bool>> {
    let mut out = Vec::with_capacity(nx);
    let mut bit = false;
    for &r in runs {
        out.extend(std::iter::repeat_n(bit, r as usize));
        bit = !bit;
    }
    if out.len() != nx {
        return Err(Error::InvalidDescriptor(format!(
            "mask row decodes to {} cells, expected {nx}",
            out.len()
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct NearestSites {
    pub site: Vec<usize>,
    pub dist2: Vec<u64>,
}

const INF: u64 = u64::MAX / 4;

/// Exact Euclidean nearest-site transform: a row pass followed by a lower
/// envelope of parabolas along each column.
fn nearest_sites(domain: &RasterDomain) -> Option<NearestSites> {
    if domain.is_empty() {
        return None;
    }
    let (nx, ny) = (domain.nx, domain.ny);
    let mask = &domain.mask;

    // Row pass: nearest set cell within the same row, ties to the left.
    let mut row_d = vec![INF; nx * ny];
    let mut row_site = vec![usize::MAX; nx * ny];
    for j in 0..ny {
        let base = j * nx;
        let mut last: Option<usize> = None;
        for i in 0..nx {
            if mask[base + i] {
                last = Some(i);
            }
            if let Some(l) = last {
                row_d[base + i] = ((i - l) * (i - l)) as u64;
                row_site[base + i] = l;
            }
        }
        let mut next: Option<usize> = None;
        for i in (0..nx).rev() {
            if mask[base + i] {
                next = Some(i);
            }
            if let Some(r) = next {
                let d = ((r - i) * (r - i)) as u64;
                if d < row_d[base + i] {
                    row_d[base + i] = d;
                    row_site[base + i] = r;
                }
            }
        }
    }

    let mut site = vec![usize::MAX; nx * ny];
    let mut dist2 = vec![INF; nx * ny];
    let mut v: Vec<usize> = Vec::with_capacity(ny);
    let mut z: Vec<f64> = Vec::with_capacity(ny + 1);
    for i in 0..nx {
        let g = |r: usize| row_d[r * nx + i];
        let val = |r: usize, j: usize| -> u64 {
            let dj = j.abs_diff(r) as u64;
            g(r) + dj * dj
        };
        v.clear();
        z.clear();
        for q in 0..ny {
            if g(q) >= INF {
                continue;
            }
            if v.is_empty() {
                v.push(q);
                z.push(f64::NEG_INFINITY);
                continue;
            }
            loop {
                let p = *v.last().unwrap();
                let s = ((g(q) as f64 + (q * q) as f64) - (g(p) as f64 + (p * p) as f64))
                    / (2.0 * (q as f64 - p as f64));
                if v.len() > 1 && s <= *z.last().unwrap() {
                    v.pop();
                    z.pop();
                } else {
                    v.push(q);
                    z.push(s);
                    break;
                }
            }
        }
        if v.is_empty() {
            continue;
        }
        let mut k = 0;
        for j in 0..ny {
            while k + 1 < v.len() && z[k + 1] <= j as f64 {
                k += 1;
            }
            // Settle exact integer ties (and float slop) among envelope neighbours.
            let mut best = v[k];
            let mut best_val = val(best, j);
            let lo = k.saturating_sub(1);
            let hi = (k + 1).min(v.len() - 1);
            for &r in &v[lo..=hi] {
                let d = val(r, j);
                if d < best_val || (d == best_val && r < best) {
                    best = r;
                    best_val = d;
                }
            }
            let idx = j * nx + i;
            dist2[idx] = best_val;
            site[idx] = best * nx + row_site[best * nx + i];
        }
    }
    Some(NearestSites { site, dist2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn annulus(h: f64) -> RasterDomain {
        RasterDomain::rasterize_2d(Bbox::square(2.25), h, 2, |x, y| {
            let r = x.hypot(y);
            (1.0..=2.0).contains(&r)
        })
        .unwrap()
    }

    #[test]
    fn margin_is_enforced() {
        let d = annulus(1.0 / 16.0);
        let mut mask = d.mask().to_vec();
        mask[0] = true;
        assert!(d.with_mask(mask).is_err());
        assert!(RasterDomain::rasterize_1d(0.0, 1.0, 0.1, 1, |_| true).is_err());
    }

    #[test]
    fn mask_file_round_trip() {
        let d = annulus(1.0 / 16.0);
        let f = d.to_file();
        let back = RasterDomain::from_file(&f).unwrap();
        assert_eq!(back, d);
        let json = serde_json::to_string(&f).unwrap();
        let f2: MaskFile = serde_json::from_str(&json).unwrap();
        assert_eq!(RasterDomain::from_file(&f2).unwrap(), d);
    }

    #[test]
    fn rle_rejects_wrong_width() {
        assert!(rle_decode(&[2, 3], 6).is_err());
        assert_eq!(rle_decode(&[0, 2, 1], 3).unwrap(), vec![true, true, false]);
    }

    #[test]
    fn locate_inverts_center() {
        let d = annulus(1.0 / 8.0);
        for idx in [0, 17, d.len() - 1] {
            assert_eq!(d.locate(d.center(idx)), Some(idx));
        }
    }

    #[test]
    fn nearest_sites_match_brute_force() {
        let d = RasterDomain::rasterize_2d(Bbox::square(1.0), 0.125, 2, |x, y| {
            (x - 0.3).abs() < 0.2 && y.abs() < 0.1 || (x + 0.5).hypot(y + 0.5) < 0.2
        })
        .unwrap();
        let ns = d.nearest_sites().unwrap();
        let sites: Vec<usize> = d.cells().collect();
        for idx in 0..d.len() {
            let (i, j) = d.coords(idx);
            let mut best = (u64::MAX, usize::MAX);
            for &s in &sites {
                let (si, sj) = d.coords(s);
                let dd = (i.abs_diff(si) * i.abs_diff(si) + j.abs_diff(sj) * j.abs_diff(sj)) as u64;
                if dd < best.0 {
                    best = (dd, s);
                }
            }
            assert_eq!(ns.dist2[idx], best.0, "distance at {idx}");
            assert_eq!(ns.site[idx], best.1, "site at {idx}");
        }
    }
}
