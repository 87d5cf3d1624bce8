use std::f64::consts::FRAC_PI_2;

use super::{ExtensionTrace, MobiusFactor};
use crate::algebra::{Element, Field, Instance, Scalar};
use crate::error::{Error, Result};
use crate::topology::{
    hole_windings, phase_step, phase_unwrap_log, tietze_extend, HoleReport, HoleWinding,
    Obstruction,
};

/// A nowhere-vanishing function on `K` agreeing with `f` on the zero set.
#[derive(Debug, Clone)]
pub struct ZeroFreeExtension {
    pub element: Element,
    pub trace: ExtensionTrace,
}

/// Extends `f`, given on the grid instance `C(Z)`, to a zero-free function
/// on the grid instance `k` (with `Z` inside `K`).
///
/// Planar complex case: every hole `C` of `Z` around which `f` winds needs a
/// cell `p_C` outside `K`; then `f / phi` with
/// `phi = prod ((z - p_C) / |z - p_C|)^{w_C}` has a logarithm on `Z`, which
/// is extended by nearest cell and exponentiated. Real interval case: the
/// values on `Z` are copied to the nearest zero-set cell of the same
/// component of `K`, which needs one sign per component.
///
/// A winding hole contained in `K` is reported as
/// [`Error::HoleConditionViolated`].
pub fn zero_free_extension(
    fz: &Element,
    k: &Instance,
    report: &HoleReport,
) -> Result<ZeroFreeExtension> {
    let zd = fz
        .owner()
        .domain()
        .ok_or_else(|| Error::scope("zero-free extension works on grid instances"))?;
    let kd = k
        .domain()
        .ok_or_else(|| Error::scope("zero-free extension works on grid instances"))?;
    if !zd.is_subset_of(kd) || fz.owner().field() != k.field() {
        return Err(Error::NotSubset);
    }
    match (k.field(), kd.dim()) {
        (Field::Complex, 2) => planar(fz, k, report),
        (Field::Real, 1) => interval(fz, k, report),
        (field, d) => Err(Error::scope(format!(
            "zero-free extension needs a complex planar or real interval domain, got {field:?} in dimension {d}"
        ))),
    }
}

fn planar(fz: &Element, k: &Instance, report: &HoleReport) -> Result<ZeroFreeExtension> {
    let zd = fz.owner().domain().expect("grid");
    let kd = k.domain().expect("grid");
    let (min, index) = fz.min_modulus();
    if min <= 0.0 {
        return Err(Error::NotInvertible { min, index });
    }
    let windings = hole_windings(fz, report)?;
    let to_k = kd.nearest_sites().ok_or(Error::EmptySpectrum)?;
    let mut factors = Vec::new();
    let mut violations = Vec::new();
    for w in windings.into_iter().filter(|w| w.winding != 0) {
        let hole = &report.holes[w.hole];
        let mut best: Option<usize> = None;
        for &c in &hole.cells {
            if kd.contains(c) {
                continue;
            }
            if best.is_none_or(|b| to_k.dist2[c] > to_k.dist2[b]) {
                best = Some(c);
            }
        }
        match best {
            Some(c) => factors.push(MobiusFactor {
                hole: w.hole,
                point: zd.center(c),
                winding: w.winding,
            }),
            None => violations.push(w),
        }
    }
    if !violations.is_empty() {
        return Err(Error::HoleConditionViolated(Obstruction {
            windings: violations,
        }));
    }
    let phi = |inst: &Instance| {
        Element::from_fn(inst, |p| {
            let z = inst.coordinate(p);
            let angle: f64 = factors
                .iter()
                .map(|m| m.winding as f64 * (z - Scalar::new(m.point[0], m.point[1])).arg())
                .sum();
            Scalar::from_polar(1.0, angle)
        })
    };
    let q = fz.zip_with(&phi(fz.owner()), |a, b| a / b)?;
    let log_q = phase_unwrap_log(&q, zd, &[], 0.0)?.into_element();
    let ext = tietze_extend(&log_q, k)?;
    let element = phi(k).mul(&ext.exp())?;
    Ok(ZeroFreeExtension {
        element,
        trace: ExtensionTrace::MobiusLog { factors },
    })
}

fn interval(fz: &Element, k: &Instance, report: &HoleReport) -> Result<ZeroFreeExtension> {
    let zd = fz.owner().domain().expect("grid");
    let zinst = fz.owner();
    let value = |c: usize| fz.get(zinst.point_of_cell(c).expect("zero-set cell")).re;
    if let Some(p) = fz.values().iter().position(|v| v.re == 0.0) {
        return Err(Error::NotInvertible { min: 0.0, index: p });
    }
    let mut out = vec![Scalar::new(1.0, 0.0); k.len()];
    let mut violations = Vec::new();
    let cells = k.cells();
    let mut start = 0;
    while start < cells.len() {
        let mut end = start + 1;
        while end < cells.len() && cells[end] == cells[end - 1] + 1 {
            end += 1;
        }
        let run = &cells[start..end];
        let zs: Vec<usize> = run.iter().copied().filter(|&c| zd.contains(c)).collect();
        for pair in zs.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let (sa, sb) = (value(a).signum(), value(b).signum());
            if b > a + 1 && sa != sb {
                let hole = report
                    .hole_of_cell(a + 1)
                    .expect("gap between zero-set cells");
                violations.push(HoleWinding {
                    hole,
                    winding: ((sb - sa) / 2.0) as i64,
                    sample: zd.center(a + 1),
                });
            }
        }
        if !zs.is_empty() {
            let mut next = 0;
            for &c in run {
                while next + 1 < zs.len() && zs[next + 1] <= c {
                    next += 1;
                }
                // nearest of zs[next] and zs[next + 1], ties to the lower cell
                let mut site = zs[next];
                if next + 1 < zs.len() && site < c && zs[next + 1] - c < c - site {
                    site = zs[next + 1];
                }
                let p = k.point_of_cell(c).expect("domain cell");
                out[p] = Scalar::new(value(site), 0.0);
            }
        }
        start = end;
    }
    if !violations.is_empty() {
        return Err(Error::HoleConditionViolated(Obstruction {
            windings: violations,
        }));
    }
    Ok(ZeroFreeExtension {
        element: Element::new(k, out)?,
        trace: ExtensionTrace::NearestSign,
    })
}

/// Zero-free extension on the sampled circle from the marked points:
/// the logarithm of `f` on each arc of marked points is joined linearly to
/// the next arc across the gap. Returns the extension and its logarithm;
/// `None` when every point is marked (the arcs close up into the circle).
pub(crate) fn circle_extension(f: &Element, marked: &[bool]) -> Result<(Element, Option<Element>)> {
    let n = marked.len();
    let start = match (0..n).find(|&k| marked[k] && !marked[(k + n - 1) % n]) {
        Some(s) => s,
        None => return Ok((f.clone(), None)),
    };
    let vals = f.values();
    let mut logs = vec![Scalar::new(f64::NAN, 0.0); n];
    // arcs as (first, last) offsets from `start`
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    let mut k = 0;
    while k < n {
        let p = (start + k) % n;
        if !marked[p] {
            k += 1;
            continue;
        }
        let first = k;
        logs[p] = vals[p].ln();
        k += 1;
        while k < n && marked[(start + k) % n] {
            let prev = (start + k - 1) % n;
            let cur = (start + k) % n;
            let step = phase_step(vals[prev], vals[cur]);
            if step.abs() >= FRAC_PI_2 {
                return Err(Error::Resolution {
                    from: prev,
                    to: cur,
                    step,
                });
            }
            logs[cur] = Scalar::new(vals[cur].norm().ln(), logs[prev].im + step);
            k += 1;
        }
        arcs.push((first, k - 1));
    }
    for (idx, &(_, last)) in arcs.iter().enumerate() {
        let next_first = if idx + 1 < arcs.len() {
            arcs[idx + 1].0
        } else {
            arcs[0].0 + n
        };
        let gap = next_first - last - 1;
        let a = logs[(start + last) % n];
        let b = logs[(start + next_first) % n];
        for j in 1..=gap {
            let t = j as f64 / (gap + 1) as f64;
            logs[(start + last + j) % n] = a + (b - a) * t;
        }
    }
    let values = (0..n)
        .map(|p| if marked[p] { vals[p] } else { logs[p].exp() })
        .collect();
    Ok((
        Element::new(f.owner(), values)?,
        Some(Element::new(f.owner(), logs)?),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraInstance;
    use crate::raster::{Bbox, RasterDomain};
    use crate::topology::{complement_components, sublevel_zero_set};

    fn planar_instance(h: f64, pred: impl Fn(f64, f64) -> bool) -> Instance {
        let d = RasterDomain::rasterize_2d(Bbox::square(2.25), h, 2, pred).unwrap();
        AlgebraInstance::grid(Field::Complex, d).unwrap()
    }

    #[test]
    fn annulus_band_extends() {
        let h = 1.0 / 32.0;
        let k = planar_instance(h, |x, y| (1.0..=2.0).contains(&x.hypot(y)));
        let g = Element::coordinate(&k).map(|z| Scalar::new(z.norm() - 1.5, 0.0));
        let z = sublevel_zero_set(&g, h).unwrap();
        let zinst = k.restrict(&z).unwrap();
        let f = Element::coordinate(&zinst);
        let rep = complement_components(&z);
        let ext = zero_free_extension(&f, &k, &rep).unwrap();
        assert!(ext.element.restrict(&zinst).unwrap().distance(&f).unwrap() < 1e-12);
        assert!(ext.element.min_modulus().0 > 1.4);
        match ext.trace {
            ExtensionTrace::MobiusLog { factors } => {
                assert_eq!(factors.len(), 1);
                assert_eq!(factors[0].winding, 1);
                assert!(factors[0].point[0].hypot(factors[0].point[1]) < h);
            }
            other => panic!("unexpected trace {other:?}"),
        }
    }

    #[test]
    fn disk_band_is_obstructed() {
        let h = 1.0 / 32.0;
        let k = planar_instance(h, |x, y| x.hypot(y) <= 2.0);
        let g = Element::coordinate(&k).map(|z| Scalar::new(z.norm() - 1.0, 0.0));
        let z = sublevel_zero_set(&g, h).unwrap();
        let zinst = k.restrict(&z).unwrap();
        let rep = complement_components(&z);
        match zero_free_extension(&Element::coordinate(&zinst), &k, &rep) {
            Err(Error::HoleConditionViolated(obs)) => assert_eq!(obs.windings[0].winding, 1),
            other => panic!("unexpected {other:?}"),
        }
        let one = Element::one(&zinst);
        let ext = zero_free_extension(&one, &k, &rep).unwrap();
        assert!(ext.element.distance(&Element::one(&k)).unwrap() < 1e-15);
    }

    #[test]
    fn interval_signs() {
        let h = 1.0 / 64.0;
        let d = RasterDomain::rasterize_1d(-2.0, 2.0, h, 2, |x| x.abs() <= 1.5).unwrap();
        let k = AlgebraInstance::grid(Field::Real, d).unwrap();
        let g = Element::from_fn(&k, |p| {
            let x = k.coordinate(p).re;
            Scalar::new(x * x - 1.0, 0.0)
        });
        let z = sublevel_zero_set(&g, 0.05).unwrap();
        let zinst = k.restrict(&z).unwrap();
        let rep = complement_components(&z);
        // f = x changes sign across the gap (-1, 1), which lies inside K
        let f = Element::from_fn(&zinst, |p| zinst.coordinate(p));
        assert!(matches!(
            zero_free_extension(&f, &k, &rep),
            Err(Error::HoleConditionViolated(_))
        ));
        // f = x^2 keeps its sign: extension copies nearest values
        let f2 = f.mul(&f).unwrap();
        let ext = zero_free_extension(&f2, &k, &rep).unwrap();
        assert!(ext.element.restrict(&zinst).unwrap().distance(&f2).unwrap() < 1e-15);
        assert!(ext.element.values().iter().all(|v| v.re > 0.5));
    }

    #[test]
    fn circle_gaps_are_bridged() {
        let inst = AlgebraInstance::circle(Field::Complex, 256).unwrap();
        let f = Element::coordinate(&inst);
        let marked: Vec<bool> = (0..256).map(|k| (k / 32) % 2 == 0).collect();
        let (ext, log) = circle_extension(&f, &marked).unwrap();
        assert!(log.unwrap().exp().distance(&ext).unwrap() < 1e-12);
        assert!(ext.min_modulus().0 > 0.99);
        for (k, m) in marked.iter().enumerate() {
            if *m {
                assert_eq!(ext.get(k), f.get(k));
            }
        }
    }
}
