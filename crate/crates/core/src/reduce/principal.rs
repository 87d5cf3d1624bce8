use serde::{Deserialize, Serialize};

use super::extension::circle_extension;
use super::rows::extend_row;
use super::tuple_reduce::{check_threshold, reduce_tuple};
use super::{
    check_pair, cutoff_vector, route, unit_reduction, PrincipalWitness, ReduceOptions, Route,
};
use crate::algebra::{Element, Field, Scalar, Tuple};
use crate::error::{Error, Result};
use crate::matrices::{ExpProduct, MatrixOverA};
use crate::topology::{
    circle_log, phase_unwrap_log, sublevel_points, sublevel_zero_set, tietze_extend, Obstruction,
};

/// Why `f` cannot be moved into the principal component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrincipalObstruction {
    /// `f` winds around holes of the zero set.
    Winding(Obstruction),
    /// Real case: `f` is not positive somewhere on the zero set.
    NonPositive { point: usize, value: f64 },
    /// No reduction exists at all.
    Irreducible(Obstruction),
}

#[derive(Debug, Clone)]
pub enum PrincipalOutcome {
    Principal(PrincipalWitness),
    NotPrincipal(PrincipalObstruction),
}

impl PrincipalOutcome {
    pub fn witness(&self) -> Option<&PrincipalWitness> {
        match self {
            PrincipalOutcome::Principal(w) => Some(w),
            PrincipalOutcome::NotPrincipal(_) => None,
        }
    }

    pub fn is_principal(&self) -> bool {
        matches!(self, PrincipalOutcome::Principal(_))
    }
}

/// `sup |e_1 exp(L_1) ... exp(L_k) - (f + a g)|` for a principal witness.
pub fn verify_principal(f: &Tuple, g: &Element, w: &PrincipalWitness) -> Result<f64> {
    if w.a.len() != f.len() {
        return Err(Error::DimensionMismatch("witness length".into()));
    }
    let v = f.add_scaled(g, &w.a)?;
    let target = w.target()?;
    target.distance(&v)
}

/// Finds `a` with `f + a g` in the principal component, i.e. for `n = 1`
/// an `h` with `f + a g = e^h`.
///
/// For `n = 1` a logarithm of `f` on the zero set `Z` of `g` is computed
/// (phase unwrapping without punctures on planar grids, positivity on real
/// instances), extended by nearest cell to `H`, and `a = chi (e^H - f) / g`.
/// On finite products with `n >= 2` every reduction already lands in the
/// principal component and the factorization comes from a row extension.
pub fn reduce_to_principal(
    f: &Tuple,
    g: &Element,
    opts: &ReduceOptions,
) -> Result<PrincipalOutcome> {
    let tol = opts.tol_for(f, g);
    check_pair(f, g, tol)?;
    let eps = opts.eps_for(g);
    let route = route(f).map_err(|(reason, _)| Error::scope(reason))?;
    let inst = f.owner();
    let n = f.len();
    if n >= 2 {
        if route != Route::Finite {
            return Err(Error::scope(
                "principal witnesses for n >= 2 need a finite product",
            ));
        }
        let red = match reduce_tuple(f, g, opts)? {
            super::ReduceOutcome::Reducible(w) => w,
            super::ReduceOutcome::Irreducible(rep) => {
                return Ok(PrincipalOutcome::NotPrincipal(
                    PrincipalObstruction::Irreducible(rep.obstruction),
                ))
            }
        };
        let v = f.add_scaled(g, &red.a)?;
        let logs = row_factorization(&v, tol)?;
        return Ok(PrincipalOutcome::Principal(PrincipalWitness {
            a: red.a,
            logs,
            h: None,
        }));
    }
    let f0 = f.get(0);
    let marked = sublevel_points(g, eps);
    if !marked.iter().any(|&m| m) {
        let a = unit_reduction(f, g)?;
        return Ok(PrincipalOutcome::Principal(witness_from_log(
            a,
            Element::zero(inst),
        )?));
    }
    check_threshold(f, &marked, eps, tol)?;
    if inst.field() == Field::Real {
        for (p, &m) in marked.iter().enumerate() {
            let value = f0.get(p).re;
            if m && value <= 0.0 {
                return Ok(PrincipalOutcome::NotPrincipal(
                    PrincipalObstruction::NonPositive { point: p, value },
                ));
            }
        }
    }
    let big_h = match route {
        Route::Finite => Element::from_fn(inst, |p| {
            if marked[p] {
                f0.get(p).ln()
            } else {
                Scalar::new(0.0, 0.0)
            }
        }),
        Route::Circle => match circle_extension(f0, &marked)? {
            (_, Some(h)) => h,
            (_, None) => match circle_log(f0) {
                Ok(h) => h,
                Err(Error::LogObstruction(obs)) => {
                    return Ok(PrincipalOutcome::NotPrincipal(
                        PrincipalObstruction::Winding(obs),
                    ))
                }
                Err(e) => return Err(e),
            },
        },
        Route::Planar | Route::Interval => {
            let z = sublevel_zero_set(g, eps)?;
            let zinst = inst.restrict(&z)?;
            let fz = f0.restrict(&zinst)?;
            let hz = if route == Route::Interval {
                fz.map(|v| Scalar::new(v.re.ln(), 0.0))
            } else {
                match phase_unwrap_log(&fz, &z, &[], 0.0) {
                    Ok(log) => log.into_element(),
                    Err(Error::LogObstruction(obs)) => {
                        return Ok(PrincipalOutcome::NotPrincipal(
                            PrincipalObstruction::Winding(obs),
                        ))
                    }
                    Err(e) => return Err(e),
                }
            };
            tietze_extend(&hz, inst)?
        }
    };
    let big_f = Tuple::new(vec![big_h.exp()])?;
    let a = cutoff_vector(f, &big_f, g, eps)?;
    Ok(PrincipalOutcome::Principal(witness_from_log(a, big_h)?))
}

fn witness_from_log(a: Tuple, h: Element) -> Result<PrincipalWitness> {
    let owner = a.owner().clone();
    let l = MatrixOverA::new(&owner, 1, vec![h.clone()])?;
    Ok(PrincipalWitness {
        a,
        logs: ExpProduct::new(vec![l]),
        h: Some(h),
    })
}

/// Logs `E` with `e_1 prod exp(E) = v` for an invertible `v` of length
/// `n >= 2` on a finite product: extend the row `(v_1..v_{n-1}; v_n)` to
/// `W` with `v W = e_1`, then `v = e_1 W^{-1}`.
pub(crate) fn row_factorization(v: &Tuple, tol: f64) -> Result<ExpProduct> {
    let n = v.len();
    let head = Tuple::new(v.coords()[..n - 1].to_vec())?;
    let last = v.get(n - 1).clone();
    let opts = ReduceOptions::default().with_tol(tol);
    let x = match reduce_tuple(&head, &last, &opts)? {
        super::ReduceOutcome::Reducible(w) => w.a,
        super::ReduceOutcome::Irreducible(_) => {
            return Err(Error::InvalidWitness("row cannot be reduced".into()))
        }
    };
    let ext = extend_row(&head, &last, &x, tol)?;
    Ok(ext.logs.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraInstance, Instance};
    use crate::raster::{Bbox, RasterDomain};

    fn annulus(h: f64) -> Instance {
        let d = RasterDomain::rasterize_2d(Bbox::square(2.25), h, 2, |x, y| {
            (1.0..=2.0).contains(&x.hypot(y))
        })
        .unwrap();
        AlgebraInstance::grid(Field::Complex, d).unwrap()
    }

    #[test]
    fn annulus_decisions() {
        let inst = annulus(1.0 / 32.0);
        let g = Element::coordinate(&inst).map(|z| Scalar::new(z.norm() - 1.5, 0.0));
        let f = Tuple::new(vec![Element::coordinate(&inst)]).unwrap();
        match reduce_to_principal(&f, &g, &ReduceOptions::default()).unwrap() {
            PrincipalOutcome::NotPrincipal(PrincipalObstruction::Winding(obs)) => {
                assert_eq!(obs.windings[0].winding, 1)
            }
            other => panic!("unexpected {other:?}"),
        }
        let f = Tuple::new(vec![
            Element::coordinate(&inst).map(|z| Scalar::new(z.norm().exp(), 0.0))
        ])
        .unwrap();
        let out = reduce_to_principal(&f, &g, &ReduceOptions::default()).unwrap();
        let w = out.witness().unwrap();
        assert!(verify_principal(&f, &g, w).unwrap() < 1e-9);
    }

    #[test]
    fn constant_one_is_principal() {
        let inst = annulus(0.125);
        let g = Element::coordinate(&inst).map(|z| Scalar::new(z.norm() - 1.5, 0.0));
        let f = Tuple::new(vec![Element::one(&inst)]).unwrap();
        let w = reduce_to_principal(&f, &g, &ReduceOptions::default()).unwrap();
        let w = w.witness().unwrap();
        assert!(w.a.sup_norm() < 1e-15);
        assert!(w.h.as_ref().unwrap().sup_norm() < 1e-15);
    }

    #[test]
    fn finite_real_signs() {
        let inst = AlgebraInstance::finite(Field::Real, 3).unwrap();
        let g = Element::from_real(&inst, vec![0.0, 1.0, 0.0]).unwrap();
        let pos = Tuple::new(vec![
            Element::from_real(&inst, vec![2.0, -1.0, 0.5]).unwrap()
        ])
        .unwrap();
        let w = reduce_to_principal(&pos, &g, &ReduceOptions::default()).unwrap();
        assert!(verify_principal(&pos, &g, w.witness().unwrap()).unwrap() < 1e-12);
        let neg = Tuple::new(vec![
            Element::from_real(&inst, vec![2.0, 1.0, -0.5]).unwrap()
        ])
        .unwrap();
        assert!(matches!(
            reduce_to_principal(&neg, &g, &ReduceOptions::default()).unwrap(),
            PrincipalOutcome::NotPrincipal(PrincipalObstruction::NonPositive { point: 2, .. })
        ));
    }

    #[test]
    fn finite_pairs_factor_through_rows() {
        let inst = AlgebraInstance::finite(Field::Real, 2).unwrap();
        let g = Element::zero(&inst);
        let f = Tuple::new(vec![
            Element::from_real(&inst, vec![-1.0, 0.0]).unwrap(),
            Element::from_real(&inst, vec![0.0, -3.0]).unwrap(),
        ])
        .unwrap();
        let w = reduce_to_principal(&f, &g, &ReduceOptions::default()).unwrap();
        assert!(verify_principal(&f, &g, w.witness().unwrap()).unwrap() < 1e-10);
    }
}
