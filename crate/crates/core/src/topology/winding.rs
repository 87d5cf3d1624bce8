use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::components::{complement_components, Cycle, HoleReport};
use crate::algebra::{AlgebraInstance, Element, Scalar, Spectrum};
use crate::error::{Error, Result};
use crate::raster::RasterDomain;

/// Winding of a function around one bounded complement component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoleWinding {
    pub hole: usize,
    pub winding: i64,
    /// A point inside the hole.
    pub sample: [f64; 2],
}

/// Holes around which a function winds, blocking a continuous logarithm
/// or a zero-free extension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Obstruction {
    pub windings: Vec<HoleWinding>,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, w) in self.windings.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(
                f,
                "winding {} around hole {} near ({:.3}, {:.3})",
                w.winding, w.hole, w.sample[0], w.sample[1]
            )?;
        }
        Ok(())
    }
}

/// Principal phase increment `arg(b / a)`.
pub fn phase_step(a: Scalar, b: Scalar) -> f64 {
    (b * a.conj()).arg()
}

/// Winding number of a closed sampled loop (the last sample connects back
/// to the first). Every phase increment must stay below pi/2.
pub fn winding_number(values: &[Scalar]) -> Result<i64> {
    let n = values.len();
    if let Some(k) = values.iter().position(|v| *v == Scalar::new(0.0, 0.0)) {
        return Err(Error::NotInvertible { min: 0.0, index: k });
    }
    if n < 2 {
        return Ok(0);
    }
    let mut total = 0.0;
    for k in 0..n {
        let step = phase_step(values[k], values[(k + 1) % n]);
        if step.abs() >= FRAC_PI_2 {
            return Err(Error::Resolution {
                from: k,
                to: (k + 1) % n,
                step,
            });
        }
        total += step;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

/// Winding number of a grid element along a cycle of cells in its spectrum.
pub fn winding_along(f: &Element, cycle: &Cycle) -> Result<i64> {
    let owner = f.owner();
    let values = cycle
        .cells
        .iter()
        .map(|&c| {
            owner
                .point_of_cell(c)
                .map(|p| f.get(p))
                .ok_or(Error::NotSubset)
        })
        .collect::<Result<Vec<_>>>()?;
    winding_number(&values)
}

/// Total winding of `f` around every hole of the report: the sum over all
/// contours separating the hole from the surrounding foreground.
pub fn hole_windings(f: &Element, report: &HoleReport) -> Result<Vec<HoleWinding>> {
    let domain = f
        .owner()
        .domain()
        .ok_or_else(|| Error::scope("hole windings need a grid instance"))?;
    report
        .holes
        .iter()
        .enumerate()
        .map(|(k, hole)| {
            let mut w = 0;
            for c in &hole.boundary {
                w += winding_along(f, c)?;
            }
            Ok(HoleWinding {
                hole: k,
                winding: w,
                sample: domain.center(hole.cells[0]),
            })
        })
        .collect()
}

/// A logarithm recovered by phase unwrapping.
#[derive(Debug, Clone)]
pub struct UnwrappedLog {
    element: Element,
    /// Adjacent pairs whose unwrapped phases differ by a multiple of 2 pi;
    /// nonzero only when punctured holes carry winding.
    pub cut_edges: usize,
}

impl UnwrappedLog {
    pub fn element(&self) -> &Element {
        &self.element
    }

    pub fn into_element(self) -> Element {
        self.element
    }
}

/// Continuous logarithm of `f` restricted to the mask `region`.
///
/// Phases are unwrapped along a breadth-first spanning forest of the
/// 8-adjacency graph of the region. If any closing edge disagrees, the
/// winding of `f` around each hole of the region is computed; holes
/// containing one of the `punctures` are allowed to carry winding (the
/// result then has a branch cut), any other winding hole is reported as
/// [`Error::LogObstruction`].
pub fn phase_unwrap_log(
    f: &Element,
    region: &RasterDomain,
    punctures: &[[f64; 2]],
    tol: f64,
) -> Result<UnwrappedLog> {
    let owner = f.owner();
    let domain = owner
        .domain()
        .ok_or_else(|| Error::scope("phase unwrapping needs a grid instance"))?;
    if !region.is_subset_of(domain) {
        return Err(Error::NotSubset);
    }
    let f = if region.mask() == domain.mask() {
        f.clone()
    } else {
        f.restrict(&owner.restrict(region)?)?
    };
    let inst = f.owner().clone();
    let (min, index) = f.min_modulus();
    if min <= tol {
        return Err(Error::NotInvertible { min, index });
    }
    let n = inst.len();
    let vals = f.values();
    let mut theta = vec![f64::NAN; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if !theta[root].is_nan() {
            continue;
        }
        theta[root] = vals[root].arg();
        queue.push_back(root);
        while let Some(p) = queue.pop_front() {
            for q in inst.neighbors(p) {
                if theta[q].is_nan() {
                    let step = phase_step(vals[p], vals[q]);
                    if step.abs() >= FRAC_PI_2 {
                        return Err(Error::Resolution {
                            from: p,
                            to: q,
                            step,
                        });
                    }
                    theta[q] = theta[p] + step;
                    queue.push_back(q);
                }
            }
        }
    }
    // Every edge, tree or not, is checked once.
    let edge_check: Vec<Result<usize>> = (0..n)
        .into_par_iter()
        .map(|p| {
            let mut defects = 0;
            for q in inst.neighbors(p) {
                if q < p {
                    continue;
                }
                let step = phase_step(vals[p], vals[q]);
                if step.abs() >= FRAC_PI_2 {
                    return Err(Error::Resolution {
                        from: p,
                        to: q,
                        step,
                    });
                }
                if (theta[p] + step - theta[q]).abs() > PI {
                    defects += 1;
                }
            }
            Ok(defects)
        })
        .collect();
    let mut cut_edges = 0;
    for r in edge_check {
        cut_edges += r?;
    }
    if cut_edges > 0 {
        let report = complement_components(region);
        let windings = hole_windings(&f, &report)?;
        let punctured = |hole: &super::components::Hole| {
            punctures.iter().any(|&p| {
                region
                    .locate(p)
                    .is_some_and(|c| report.labels[c] == hole.component as u32)
            })
        };
        let blocking: Vec<HoleWinding> = windings
            .iter()
            .filter(|w| w.winding != 0 && !punctured(&report.holes[w.hole]))
            .cloned()
            .collect();
        if !blocking.is_empty() {
            return Err(Error::LogObstruction(Obstruction { windings: blocking }));
        }
        if windings.iter().all(|w| w.winding == 0) {
            // Closing defects without any hole winding means the sampling
            // could not follow the phase.
            let (p, q) = first_defect(&inst, vals, &theta);
            return Err(Error::Resolution {
                from: p,
                to: q,
                step: theta[q] - theta[p],
            });
        }
    }
    let values = (0..n)
        .into_par_iter()
        .map(|k| Scalar::new(vals[k].norm().ln(), theta[k]))
        .collect();
    Ok(UnwrappedLog {
        element: Element::new(&inst, values)?,
        cut_edges,
    })
}

fn first_defect(inst: &AlgebraInstance, vals: &[Scalar], theta: &[f64]) -> (usize, usize) {
    for p in 0..inst.len() {
        for q in inst.neighbors(p) {
            if (theta[p] + phase_step(vals[p], vals[q]) - theta[q]).abs() > PI {
                return (p, q);
            }
        }
    }
    (0, 0)
}

/// Continuous logarithm on the sampled circle; fails with the winding
/// number when it is nonzero.
pub fn circle_log(f: &Element) -> Result<Element> {
    let n = match f.owner().spectrum() {
        Spectrum::Circle { n } => *n,
        _ => return Err(Error::scope("circle logarithm needs a circle instance")),
    };
    let vals = f.values();
    let mut theta = Vec::with_capacity(n);
    theta.push(vals[0].arg());
    for k in 1..n {
        let step = phase_step(vals[k - 1], vals[k]);
        if step.abs() >= FRAC_PI_2 {
            return Err(Error::Resolution {
                from: k - 1,
                to: k,
                step,
            });
        }
        theta.push(theta[k - 1] + step);
    }
    let w = winding_number(vals)?;
    if w != 0 {
        return Err(Error::LogObstruction(Obstruction {
            windings: vec![HoleWinding {
                hole: 0,
                winding: w,
                sample: [0.0, 0.0],
            }],
        }));
    }
    let values = (0..n)
        .map(|k| Scalar::new(vals[k].norm().ln(), theta[k]))
        .collect();
    Element::new(f.owner(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::raster::Bbox;

    fn annulus(h: f64) -> crate::algebra::Instance {
        let d = RasterDomain::rasterize_2d(Bbox::square(2.25), h, 2, |x, y| {
            let r = x.hypot(y);
            (1.0..=2.0).contains(&r)
        })
        .unwrap();
        AlgebraInstance::grid(Field::Complex, d).unwrap()
    }

    #[test]
    fn winding_of_sampled_powers() {
        for k in -3i64..=3 {
            let vals: Vec<Scalar> = (0..64)
                .map(|j| Scalar::from_polar(1.0, k as f64 * 2.0 * PI * j as f64 / 64.0))
                .collect();
            assert_eq!(winding_number(&vals).unwrap(), k);
        }
    }

    #[test]
    fn coarse_loop_is_refused() {
        let vals: Vec<Scalar> = (0..4)
            .map(|j| Scalar::from_polar(1.0, 2.0 * PI * j as f64 / 4.0))
            .collect();
        assert!(matches!(
            winding_number(&vals),
            Err(Error::Resolution { .. })
        ));
    }

    #[test]
    fn annulus_coordinate_has_no_log() {
        let inst = annulus(1.0 / 32.0);
        let z = Element::coordinate(&inst);
        let d = inst.domain().unwrap().clone();
        match phase_unwrap_log(&z, &d, &[], 1e-8) {
            Err(Error::LogObstruction(obs)) => {
                assert_eq!(obs.windings.len(), 1);
                assert_eq!(obs.windings[0].winding, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        let sq = z.mul(&z).unwrap();
        match phase_unwrap_log(&sq.conj(), &d, &[], 1e-8) {
            Err(Error::LogObstruction(obs)) => assert_eq!(obs.windings[0].winding, -2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn puncture_admits_branch_cut() {
        let inst = annulus(1.0 / 32.0);
        let z = Element::coordinate(&inst);
        let d = inst.domain().unwrap().clone();
        let log = phase_unwrap_log(&z, &d, &[[0.0, 0.0]], 1e-8).unwrap();
        assert!(log.cut_edges > 0);
        assert!(log.element().exp().distance(&z).unwrap() < 1e-12);
    }

    #[test]
    fn log_of_zero_free_function_exponentiates_back() {
        let inst = annulus(1.0 / 32.0);
        let f = Element::coordinate(&inst).map(|z| z + Scalar::new(3.0, 0.0));
        let d = inst.domain().unwrap().clone();
        let log = phase_unwrap_log(&f, &d, &[], 1e-8).unwrap();
        assert_eq!(log.cut_edges, 0);
        assert!(log.element().exp().distance(&f).unwrap() < 1e-12);
    }

    #[test]
    fn circle_log_round_trip() {
        let inst = AlgebraInstance::circle(Field::Complex, 128).unwrap();
        let f = Element::coordinate(&inst).map(|z| Scalar::new(2.0, 0.0) + z);
        let h = circle_log(&f).unwrap();
        assert!(h.exp().distance(&f).unwrap() < 1e-12);
    }
}
