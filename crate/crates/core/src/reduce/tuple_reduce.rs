use super::extension::{circle_extension, zero_free_extension};
use super::{
    check_pair, cutoff_vector, route, unit_reduction, ExtensionTrace, ReduceOptions,
    ReductionWitness, Route,
};
use crate::algebra::{Element, Scalar, Tuple};
use crate::error::{Error, Result};
use crate::topology::{
    complement_components, hole_condition_with, sublevel_points, sublevel_zero_set,
    HoleConditionResult, Obstruction,
};

/// Why no reduction exists: the windings of `f` around holes of the zero
/// set that lie inside the domain.
#[derive(Debug, Clone)]
pub struct IrreducibleReport {
    pub obstruction: Obstruction,
    pub hole_condition: Option<HoleConditionResult>,
    pub eps: f64,
}

#[derive(Debug, Clone)]
pub enum ReduceOutcome {
    Reducible(ReductionWitness),
    Irreducible(IrreducibleReport),
}

impl ReduceOutcome {
    pub fn witness(&self) -> Option<&ReductionWitness> {
        match self {
            ReduceOutcome::Reducible(w) => Some(w),
            ReduceOutcome::Irreducible(_) => None,
        }
    }

    pub fn is_reducible(&self) -> bool {
        matches!(self, ReduceOutcome::Reducible(_))
    }
}

/// `min |f + a g|`, refusing when it does not clear `tol`.
pub fn verify_reduction(f: &Tuple, g: &Element, a: &Tuple, tol: f64) -> Result<f64> {
    let v = f.add_scaled(g, a)?;
    let (min, index) = v.min_modulus();
    if min <= tol {
        return Err(Error::InvalidWitness(format!(
            "f + a g has modulus {min:e} at spectrum point {index}"
        )));
    }
    Ok(min)
}

/// Finds `a` with `f + a g` invertible, or reports the winding obstruction.
///
/// The zero set `Z = {|g| <= eps}` is computed, `f` is extended from `Z` to
/// a zero-free `F` on the whole spectrum, and `a = chi(|g|) (F - f) / g`
/// with the cutoff `chi` vanishing on `{|g| <= eps/2}`. Constructive for
/// finite products (any length), complex planar grids and real interval
/// grids with `n = 1`, and complex circle pairs. Other grid shapes return
/// [`Error::Scope`], carrying the hole-condition decision when the raster
/// dimension matches the real dimension of the tuple.
pub fn reduce_tuple(f: &Tuple, g: &Element, opts: &ReduceOptions) -> Result<ReduceOutcome> {
    let tol = opts.tol_for(f, g);
    check_pair(f, g, tol)?;
    let eps = opts.eps_for(g);
    let route = match route(f) {
        Ok(r) => r,
        Err((reason, decide)) => {
            let decision = if decide {
                let z = sublevel_zero_set(g, eps)?;
                let k = g.owner().domain().expect("grid");
                let report = complement_components(&z);
                Some(Box::new(hole_condition_with(&report, &z, k)?))
            } else {
                None
            };
            return Err(Error::Scope { reason, decision });
        }
    };
    let marked = sublevel_points(g, eps);
    if !marked.iter().any(|&m| m) {
        let a = unit_reduction(f, g)?;
        return finish(f, g, a, tol, eps, ExtensionTrace::Unit);
    }
    check_threshold(f, &marked, eps, tol)?;
    match route {
        Route::Finite => {
            let a = pointwise_reduction(f, g)?;
            finish(f, g, a, tol, eps, ExtensionTrace::Pointwise)
        }
        Route::Circle => {
            let (big, _) = circle_extension(f.get(0), &marked)?;
            let a = cutoff_vector(f, &Tuple::new(vec![big])?, g, eps)?;
            finish(f, g, a, tol, eps, ExtensionTrace::ArcInterpolation)
        }
        Route::Planar | Route::Interval => {
            let inst = g.owner();
            let k = inst.domain().expect("grid");
            let z = sublevel_zero_set(g, eps)?;
            let zinst = inst.restrict(&z)?;
            let fz = f.get(0).restrict(&zinst)?;
            let report = complement_components(&z);
            match zero_free_extension(&fz, inst, &report) {
                Ok(ext) => {
                    let a = cutoff_vector(f, &Tuple::new(vec![ext.element])?, g, eps)?;
                    finish(f, g, a, tol, eps, ext.trace)
                }
                Err(Error::HoleConditionViolated(obstruction)) => {
                    let hc = hole_condition_with(&report, &z, k)?;
                    Ok(ReduceOutcome::Irreducible(IrreducibleReport {
                        obstruction,
                        hole_condition: Some(hc),
                        eps,
                    }))
                }
                Err(e) => Err(e),
            }
        }
    }
}

fn finish(
    f: &Tuple,
    g: &Element,
    a: Tuple,
    tol: f64,
    eps: f64,
    trace: ExtensionTrace,
) -> Result<ReduceOutcome> {
    let achieved_min = verify_reduction(f, g, &a, tol)?;
    Ok(ReduceOutcome::Reducible(ReductionWitness {
        a,
        achieved_min,
        eps,
        trace,
    }))
}

/// `f` must stay invertible on the zero set of `g`; otherwise the
/// threshold is too coarse to separate the zeros of `f` from those of `g`.
pub(crate) fn check_threshold(f: &Tuple, marked: &[bool], eps: f64, tol: f64) -> Result<()> {
    let norms = f.pointwise_norm();
    let mut worst: Option<(f64, usize)> = None;
    for (p, (&m, &v)) in marked.iter().zip(&norms).enumerate() {
        if m && worst.is_none_or(|(w, _)| v < w) {
            worst = Some((v, p));
        }
    }
    match worst {
        Some((min, index)) if min <= tol => Err(Error::ThresholdTooLarge { eps, min, index }),
        _ => Ok(()),
    }
}

/// Pointwise reduction on a finite spectrum: keep `f` where it is at least
/// half the joint modulus `s = |(f, g)|`, elsewhere move to `s e_1`.
fn pointwise_reduction(f: &Tuple, g: &Element) -> Result<Tuple> {
    let owner = f.owner();
    let joint = f.push(g.clone())?.pointwise_norm();
    let fnorm = f.pointwise_norm();
    let coords = (0..f.len())
        .map(|j| {
            Element::from_fn(owner, |p| {
                if fnorm[p] >= 0.5 * joint[p] {
                    Scalar::new(0.0, 0.0)
                } else {
                    let target = if j == 0 { joint[p] } else { 0.0 };
                    (Scalar::new(target, 0.0) - f.get(j).get(p)) / g.get(p)
                }
            })
        })
        .collect();
    Tuple::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraInstance, Field, Instance};
    use crate::raster::{Bbox, RasterDomain};

    fn planar(h: f64, pred: impl Fn(f64, f64) -> bool) -> Instance {
        let d = RasterDomain::rasterize_2d(Bbox::square(2.25), h, 2, pred).unwrap();
        AlgebraInstance::grid(Field::Complex, d).unwrap()
    }

    fn radial(inst: &Instance, r: f64) -> Element {
        Element::coordinate(inst).map(|z| Scalar::new(z.norm() - r, 0.0))
    }

    #[test]
    fn annulus_reduces_coordinate() {
        let inst = planar(1.0 / 32.0, |x, y| (1.0..=2.0).contains(&x.hypot(y)));
        let g = radial(&inst, 1.5);
        let f = Tuple::new(vec![Element::coordinate(&inst)]).unwrap();
        let out = reduce_tuple(&f, &g, &ReduceOptions::default()).unwrap();
        let w = out.witness().expect("reducible");
        assert!(w.achieved_min > 1.0);
        assert!((verify_reduction(&f, &g, &w.a, 1e-8).unwrap() - w.achieved_min).abs() < 1e-15);
    }

    #[test]
    fn disk_is_irreducible() {
        let inst = planar(1.0 / 32.0, |x, y| x.hypot(y) <= 2.0);
        let g = radial(&inst, 1.0);
        let f = Tuple::new(vec![Element::coordinate(&inst)]).unwrap();
        match reduce_tuple(&f, &g, &ReduceOptions::default()).unwrap() {
            ReduceOutcome::Irreducible(rep) => {
                assert_eq!(rep.obstruction.windings.len(), 1);
                assert_eq!(rep.obstruction.windings[0].winding, 1);
                assert!(!rep.hole_condition.unwrap().holds);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invertible_g_gives_unit() {
        let inst = planar(0.25, |x, y| x.hypot(y) <= 2.0);
        let g = Element::one(&inst);
        let f = Tuple::new(vec![Element::coordinate(&inst)]).unwrap();
        let out = reduce_tuple(&f, &g, &ReduceOptions::default()).unwrap();
        let w = out.witness().unwrap();
        assert!(matches!(w.trace, ExtensionTrace::Unit));
        assert!((w.achieved_min - 1.0).abs() < 1e-12);
    }

    #[test]
    fn finite_products_always_reduce() {
        let inst = AlgebraInstance::finite(Field::Real, 4).unwrap();
        let f = Tuple::new(vec![
            Element::from_real(&inst, vec![0.0, 1.0, -1.0, 1e-12]).unwrap(),
            Element::from_real(&inst, vec![0.0, 0.0, 2.0, 0.0]).unwrap(),
        ])
        .unwrap();
        let g = Element::from_real(&inst, vec![3.0, 0.0, 0.0, 1.0]).unwrap();
        let w = reduce_tuple(&f, &g, &ReduceOptions::default()).unwrap();
        assert!(w.witness().unwrap().achieved_min >= 0.5);
    }

    #[test]
    fn unsupported_shapes_carry_decision() {
        let d = RasterDomain::rasterize_2d(Bbox::square(2.25), 0.125, 2, |x, y| x.hypot(y) <= 2.0)
            .unwrap();
        let inst = AlgebraInstance::grid(Field::Real, d.clone()).unwrap();
        let g = Element::from_fn(&inst, |p| {
            let [x, y] = d.center(inst.cell(p));
            Scalar::new(x.hypot(y) - 1.0, 0.0)
        });
        let f = Tuple::new(vec![Element::one(&inst), Element::zero(&inst)]).unwrap();
        match reduce_tuple(&f, &g, &ReduceOptions::default()) {
            Err(Error::Scope {
                decision: Some(d), ..
            }) => assert!(!d.holds),
            other => panic!("unexpected {other:?}"),
        }
    }
}
