use serde::{Deserialize, Serialize};

use super::components::{complement_components, HoleReport};
use crate::algebra::{default_tol, AlgebraInstance, Element, Instance, Spectrum};
use crate::error::{Error, Result};
use crate::raster::RasterDomain;

/// Finite-difference Lipschitz estimate of `g` over adjacent spectrum
/// points (edge neighbours on grids, consecutive samples on the circle).
pub fn lipschitz_estimate(g: &Element) -> f64 {
    let inst = g.owner();
    let h = inst.step();
    let mut best: f64 = 0.0;
    match inst.spectrum() {
        Spectrum::Grid(d) => {
            for p in 0..inst.len() {
                for &c in &d.neighbors4(inst.cell(p)) {
                    if let Some(q) = inst.point_of_cell(c) {
                        best = best.max((g.get(p) - g.get(q)).norm() / h);
                    }
                }
            }
        }
        Spectrum::Circle { n } => {
            for p in 0..*n {
                best = best.max((g.get(p) - g.get((p + 1) % n)).norm() / h);
            }
        }
        Spectrum::Finite { .. } => {}
    }
    best
}

/// Default zero-set threshold `2 h Lip(g)`, floored at the default
/// invertibility tolerance of `g`.
pub fn default_eps(g: &Element) -> f64 {
    let floor = default_tol(g.sup_norm());
    match g.owner().spectrum() {
        Spectrum::Finite { .. } => floor,
        _ => (2.0 * g.owner().step() * lipschitz_estimate(g)).max(floor),
    }
}

/// The discrete zero set `Z_eps = {p : |g(p)| <= eps}` as a mask on the
/// grid of `g`.
pub fn sublevel_zero_set(g: &Element, eps: f64) -> Result<RasterDomain> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidDescriptor(format!(
            "threshold must be positive, got {eps}"
        )));
    }
    let inst = g.owner();
    let d = inst
        .domain()
        .ok_or_else(|| Error::scope("zero sets are rasters on grid instances"))?;
    let mut mask = vec![false; d.len()];
    for p in 0..inst.len() {
        if g.get(p).norm() <= eps {
            mask[inst.cell(p)] = true;
        }
    }
    d.with_mask(mask)
}

/// Spectrum points where `|g| <= eps` (any instance kind).
pub fn sublevel_points(g: &Element, eps: f64) -> Vec<bool> {
    g.values().iter().map(|v| v.norm() <= eps).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoleVerdict {
    pub hole: usize,
    pub size: usize,
    /// A cell of the hole outside the domain, when one exists.
    pub witness_cell: Option<usize>,
    pub witness_point: Option<[f64; 2]>,
}

impl HoleVerdict {
    pub fn holds(&self) -> bool {
        self.witness_cell.is_some()
    }
}

/// Decision on whether every hole of `Z` escapes the domain `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoleConditionResult {
    pub holds: bool,
    pub verdicts: Vec<HoleVerdict>,
}

impl HoleConditionResult {
    pub fn violations(&self) -> impl Iterator<Item = &HoleVerdict> {
        self.verdicts.iter().filter(|v| !v.holds())
    }
}

/// True iff every bounded component of the complement of `z` contains a
/// cell outside `k`. Requires `z` to be a subset of `k`.
pub fn hole_condition(z: &RasterDomain, k: &RasterDomain) -> Result<HoleConditionResult> {
    let report = complement_components(z);
    hole_condition_with(&report, z, k)
}

pub fn hole_condition_with(
    report: &HoleReport,
    z: &RasterDomain,
    k: &RasterDomain,
) -> Result<HoleConditionResult> {
    if !z.is_subset_of(k) {
        return Err(Error::NotSubset);
    }
    let verdicts: Vec<HoleVerdict> = report
        .holes
        .iter()
        .enumerate()
        .map(|(id, hole)| {
            let witness_cell = hole.cells.iter().copied().find(|&c| !k.contains(c));
            HoleVerdict {
                hole: id,
                size: hole.cells.len(),
                witness_cell,
                witness_point: witness_cell.map(|c| z.center(c)),
            }
        })
        .collect();
    Ok(HoleConditionResult {
        holds: verdicts.iter().all(HoleVerdict::holds),
        verdicts,
    })
}

/// A nonempty cell set `U` inside the 4-interior of `K` with `|g| > eps`
/// on `U` and every edge neighbour of `U` in the zero set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrappedRegion {
    pub cells: Vec<usize>,
    pub sample: [f64; 2],
}

/// Searches for a region of `K` enclosed by the zero set of `g`. One
/// exists exactly when the hole condition fails for `Z_eps`: such a region
/// is a hole of `Z_eps` lying inside `K`.
pub fn b1_falsify(g: &Element, eps: f64) -> Result<Option<TrappedRegion>> {
    let k = g
        .owner()
        .domain()
        .ok_or_else(|| Error::scope("zero sets are rasters on grid instances"))?;
    let z = sublevel_zero_set(g, eps)?;
    let interior = k.interior();
    let candidate: Vec<bool> = (0..k.len())
        .map(|c| interior.contains(c) && !z.contains(c))
        .collect();
    let mut seen = vec![false; k.len()];
    let mut stack = Vec::new();
    for start in 0..k.len() {
        if !candidate[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut cells = Vec::new();
        let mut enclosed = true;
        while let Some(c) = stack.pop() {
            cells.push(c);
            for &n in &k.neighbors4(c) {
                if candidate[n] {
                    if !seen[n] {
                        seen[n] = true;
                        stack.push(n);
                    }
                } else if !z.contains(n) {
                    enclosed = false;
                }
            }
        }
        if enclosed {
            cells.sort_unstable();
            return Ok(Some(TrappedRegion {
                sample: k.center(cells[0]),
                cells,
            }));
        }
    }
    Ok(None)
}

/// Extends a function on a sub-raster `Z` to the grid instance `target`
/// by copying the value at the nearest cell of `Z` (ties to the lowest
/// cell index). The result restricts to `h` on `Z`.
pub fn tietze_extend(h: &Element, target: &Instance) -> Result<Element> {
    let src = h
        .owner()
        .domain()
        .ok_or_else(|| Error::scope("extension works on grid instances"))?;
    let dst = target
        .domain()
        .ok_or_else(|| Error::scope("extension works on grid instances"))?;
    if h.owner().field() != target.field() || !src.is_subset_of(dst) {
        return Err(Error::NotSubset);
    }
    let near = src.nearest_sites().ok_or(Error::EmptySource)?;
    let src_inst: &AlgebraInstance = h.owner();
    let values = target
        .cells()
        .iter()
        .map(|&c| {
            h.get(
                src_inst
                    .point_of_cell(near.site[c])
                    .expect("site is a source cell"),
            )
        })
        .collect();
    Element::new(target, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, Scalar};
    use crate::raster::Bbox;

    fn disk_instance(h: f64) -> Instance {
        let d =
            RasterDomain::rasterize_2d(Bbox::square(2.25), h, 2, |x, y| x.hypot(y) <= 2.0).unwrap();
        AlgebraInstance::grid(Field::Complex, d).unwrap()
    }

    #[test]
    fn ring_zero_set_in_disk_violates() {
        let inst = disk_instance(1.0 / 16.0);
        let g = Element::coordinate(&inst).map(|z| Scalar::new(z.norm() - 1.5, 0.0));
        let eps = default_eps(&g);
        let z = sublevel_zero_set(&g, eps).unwrap();
        let res = hole_condition(&z, inst.domain().unwrap()).unwrap();
        assert!(!res.holds);
        assert_eq!(res.verdicts.len(), 1);
        let trapped = b1_falsify(&g, eps)
            .unwrap()
            .expect("region enclosed by the ring");
        let report = complement_components(&z);
        assert_eq!(trapped.cells, report.holes[0].cells);
    }

    #[test]
    fn ring_zero_set_in_annulus_holds() {
        let d = RasterDomain::rasterize_2d(Bbox::square(2.25), 1.0 / 16.0, 2, |x, y| {
            (1.0..=2.0).contains(&x.hypot(y))
        })
        .unwrap();
        let inst = AlgebraInstance::grid(Field::Complex, d).unwrap();
        let g = Element::coordinate(&inst).map(|z| Scalar::new(z.norm() - 1.5, 0.0));
        let eps = default_eps(&g);
        let z = sublevel_zero_set(&g, eps).unwrap();
        let res = hole_condition(&z, inst.domain().unwrap()).unwrap();
        // the ring has two holes: the disk |z| < 1.5 escapes K, the outside is unbounded
        assert!(res.holds);
        assert!(b1_falsify(&g, eps).unwrap().is_none());
    }

    #[test]
    fn not_subset_is_refused() {
        let inst = disk_instance(0.25);
        let k = inst.domain().unwrap();
        let z = k.with_mask(vec![false; k.len()]).unwrap();
        assert!(hole_condition(k, &z).is_err());
    }

    #[test]
    fn tietze_restricts_to_source() {
        let inst = disk_instance(1.0 / 8.0);
        let g = Element::coordinate(&inst).map(|z| Scalar::new(z.norm() - 1.0, 0.0));
        let z = sublevel_zero_set(&g, 0.3).unwrap();
        let sub = inst.restrict(&z).unwrap();
        let h = Element::coordinate(&sub);
        let ext = tietze_extend(&h, &inst).unwrap();
        assert_eq!(ext.restrict(&sub).unwrap().values(), h.values());
        // values of the extension are attained on the source
        for v in ext.values() {
            assert!(h.values().contains(v));
        }
    }
}
