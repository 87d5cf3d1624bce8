use super::equivalence::{exp_class_path, ExpEquivalence, PathReport};
use super::principal::verify_principal;
use super::rows::extend_row;
use super::tuple_reduce::verify_reduction;
use super::{
    cutoff, reduce_tuple, PrincipalWitness, ReduceOptions, ReduceOutcome, ReductionWitness,
};
use crate::algebra::{default_tol, Element, Scalar, Tuple};
use crate::error::{Error, Result};
use crate::matrices::{ExpProduct, MatrixOverA};
use crate::topology::sublevel_points;

/// `sum_j e^{x_j} (a_j + b_j g) = 1`.
#[derive(Debug, Clone)]
pub struct ExpReducibilityWitness {
    pub x: Tuple,
    pub b: Tuple,
}

/// `sup |sum_j e^{x_j} (a_j + b_j g) - 1|`.
pub fn verify_exp_reducibility(
    a: &Tuple,
    g: &Element,
    wit: &ExpReducibilityWitness,
) -> Result<f64> {
    if wit.x.len() != a.len() || wit.b.len() != a.len() {
        return Err(Error::DimensionMismatch("witness length".into()));
    }
    let w = a.add_scaled(g, &wit.b)?;
    let ex = Tuple::new(wit.x.coords().iter().map(Element::exp).collect())?;
    let sum = ex.dot(&w)?;
    sum.distance(&Element::one(a.owner()))
}

/// Exponential reducibility of a pair `(a, g)` in an algebra where every
/// invertible pair reduces and every invertible element has a logarithm:
/// reduce to `a + b g` invertible, then `x = -log(a + b g)`.
///
/// Whether the instance really has both properties is not trusted: a
/// failed logarithm comes back as [`Error::LogObstruction`] and a failed
/// reduction as [`Error::HoleConditionViolated`].
pub fn exp_reduce_pair_bsr1(
    a: &Element,
    g: &Element,
    opts: &ReduceOptions,
) -> Result<ExpReducibilityWitness> {
    let f = Tuple::new(vec![a.clone()])?;
    let tol = opts.tol_for(&f, g);
    let b = match reduce_tuple(&f, g, opts)? {
        ReduceOutcome::Reducible(w) => w.a,
        ReduceOutcome::Irreducible(rep) => {
            return Err(Error::HoleConditionViolated(rep.obstruction))
        }
    };
    let v = a.add(&b.get(0).mul(g)?)?;
    let x = v.log(tol)?.neg();
    Ok(ExpReducibilityWitness {
        x: Tuple::new(vec![x])?,
        b,
    })
}

/// Turns an exponential-reducibility witness for `(a, g)` into a principal
/// witness with reduction vector `b`.
///
/// `w = a + b g` and `v = (e^{x_j})` satisfy `v . w = 1`. For `n = 1`,
/// `w = e^{-x}`. Otherwise the row `v` is extended to `W = prod exp(L_j)`
/// with `v W = e_1`; then `P_1 = prod exp(-L_j^t)` has first column `v^t`,
/// so `w P_1 = (1, c_2, ..., c_n)`, which a unipotent `exp(N)` clears to
/// `e_1`. Hence `w = e_1 exp(-N) exp(L_k^t) ... exp(L_1^t)`.
pub fn principal_from_exp_reducible(
    a: &Tuple,
    g: &Element,
    wit: &ExpReducibilityWitness,
) -> Result<PrincipalWitness> {
    let owner = a.owner().clone();
    let n = a.len();
    let residual = verify_exp_reducibility(a, g, wit)?;
    let scale: f64 = wit
        .x
        .coords()
        .iter()
        .map(|x| x.exp().sup_norm())
        .fold(1.0, f64::max)
        * (1.0 + a.add_scaled(g, &wit.b)?.sup_norm());
    if residual > 1e-8 * scale {
        return Err(Error::InvalidWitness(format!(
            "exponential reducibility residual {residual:e}"
        )));
    }
    if n == 1 {
        let h = wit.x.get(0).neg();
        let l = MatrixOverA::new(&owner, 1, vec![h.clone()])?;
        return Ok(PrincipalWitness {
            a: wit.b.clone(),
            logs: ExpProduct::new(vec![l]),
            h: Some(h),
        });
    }
    let w = a.add_scaled(g, &wit.b)?;
    let v = Tuple::new(wit.x.coords().iter().map(Element::exp).collect())?;
    let head = Tuple::new(v.coords()[..n - 1].to_vec())?;
    let last = v.get(n - 1).clone();
    let tol = default_tol(v.sup_norm());
    let ext = extend_row(&head, &last, &Tuple::zeros(&owner, n - 1), tol)?;
    let p1 = ExpProduct::new(
        ext.logs
            .factors
            .iter()
            .map(|l| l.transpose().neg())
            .collect(),
    );
    let c = p1.row_times(&w)?;
    let mut nil = MatrixOverA::zeros(&owner, n);
    for j in 1..n {
        nil.set(0, j, c.get(j).neg())?;
    }
    let mut factors = vec![nil.neg()];
    factors.extend(ext.logs.factors.iter().rev().map(MatrixOverA::transpose));
    Ok(PrincipalWitness {
        a: wit.b.clone(),
        logs: ExpProduct::new(factors),
        h: None,
    })
}

/// The witness a transfer starts from.
#[derive(Debug, Clone)]
pub enum TransferSource {
    Reduction(ReductionWitness),
    Principal(PrincipalWitness),
}

#[derive(Debug, Clone)]
pub enum TransferredWitness {
    Reduction(ReductionWitness),
    Principal(PrincipalWitness),
}

#[derive(Debug, Clone)]
pub enum TransferOutcome {
    Accepted {
        witness: TransferredWitness,
        /// Links `f` to `b`: `f + g x = b exp(D)`.
        link: ExpEquivalence,
        path: PathReport,
        /// Smallest joint modulus along the straight segment from `b` to `f`.
        segment_min: f64,
        gap: f64,
        threshold: f64,
    },
    Rejected {
        gap: f64,
        threshold: f64,
    },
}

/// Moves a witness for `(b, g)` to a nearby `(f, g)` (`n = 1`).
///
/// Accepted when `sup_Z |f - b| <= delta / 2` with `delta = min_Z |f|` on
/// the zero set `Z` of `g`. Then `f / b` has a principal logarithm on `Z`,
/// and with `D = (1 - chi) Log(f / b)` the tuple `(b + a_b g) e^D` is a
/// reduction of `f`: near `Z` it equals `f (b + a_b g) / b`, away from `Z`
/// the cutoff lets `g` absorb the difference.
pub fn perturb_transfer(
    f: &Tuple,
    g: &Element,
    b: &Tuple,
    source: &TransferSource,
    opts: &ReduceOptions,
) -> Result<TransferOutcome> {
    if f.len() != 1 || b.len() != 1 {
        return Err(Error::scope(
            "perturbation transfer is implemented for n = 1",
        ));
    }
    let tol = opts.tol_for(f, g);
    super::check_pair(f, g, tol)?;
    let eps = opts.eps_for(g);
    let owner = f.owner().clone();
    let (f0, b0) = (f.get(0), b.get(0));
    let marked = sublevel_points(g, eps);
    let mut delta = f64::INFINITY;
    let mut gap: f64 = 0.0;
    for (p, &m) in marked.iter().enumerate() {
        if m {
            delta = delta.min(f0.get(p).norm());
            gap = gap.max((f0.get(p) - b0.get(p)).norm());
        }
    }
    let threshold = 0.5 * delta;
    if gap > threshold {
        return Ok(TransferOutcome::Rejected { gap, threshold });
    }
    let a_b = match source {
        TransferSource::Reduction(w) => &w.a,
        TransferSource::Principal(w) => &w.a,
    };
    let base = b.add_scaled(g, a_b)?;
    let d = Element::from_fn(&owner, |p| {
        let chi = cutoff(g.get(p).norm(), eps);
        if chi >= 1.0 {
            Scalar::new(0.0, 0.0)
        } else {
            (f0.get(p) / b0.get(p)).ln() * (1.0 - chi)
        }
    });
    let target = base.get(0).mul(&d.exp())?;
    let a_f = Element::from_fn(&owner, |p| {
        let gp = g.get(p);
        if cutoff(gp.norm(), eps) == 0.0 {
            a_b.get(0).get(p) * f0.get(p) / b0.get(p)
        } else {
            (target.get(p) - f0.get(p)) / gp
        }
    });
    let a_f = Tuple::new(vec![a_f])?;
    let witness = match source {
        TransferSource::Reduction(w) => {
            let achieved_min = verify_reduction(f, g, &a_f, tol)?;
            TransferredWitness::Reduction(ReductionWitness {
                a: a_f.clone(),
                achieved_min,
                eps,
                trace: w.trace.clone(),
            })
        }
        TransferSource::Principal(w) => {
            let h = match &w.h {
                Some(h) => h.add(&d)?,
                None => {
                    let l =
                        w.logs.factors.first().ok_or_else(|| {
                            Error::InvalidWitness("empty logarithm product".into())
                        })?;
                    l.entry(0, 0).add(&d)?
                }
            };
            let pw = PrincipalWitness {
                a: a_f.clone(),
                logs: ExpProduct::new(vec![MatrixOverA::new(&owner, 1, vec![h.clone()])?]),
                h: Some(h),
            };
            let residual = verify_principal(f, g, &pw)?;
            if residual > 1e-6 * (1.0 + target.sup_norm()) {
                return Err(Error::InvalidWitness(format!(
                    "transferred principal residual {residual:e}"
                )));
            }
            TransferredWitness::Principal(pw)
        }
    };
    // f + g (a_f - a_b e^D) = b e^D
    let ed = d.exp();
    let x = a_f.get(0).sub(&a_b.get(0).mul(&ed)?)?;
    let link = ExpEquivalence {
        x: Tuple::new(vec![x])?,
        logs: ExpProduct::new(vec![MatrixOverA::new(&owner, 1, vec![d])?]),
    };
    let path = exp_class_path(f, g, b, &link, 32)?;
    let mut segment_min = f64::INFINITY;
    for s in 0..=32 {
        let t = s as f64 / 32.0;
        let ft = b0.add(&f0.sub(b0)?.scale(Scalar::new(t, 0.0)))?;
        let (m, _) = Tuple::new(vec![ft, g.clone()])?.min_modulus();
        segment_min = segment_min.min(m);
    }
    Ok(TransferOutcome::Accepted {
        witness,
        link,
        path,
        segment_min,
        gap,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraInstance, Field};

    #[test]
    fn scalar_pair() {
        let owner = AlgebraInstance::finite(Field::Complex, 1).unwrap();
        let a = Element::scalar(&owner, Scalar::new(2.0, 0.0));
        let g = Element::zero(&owner);
        let w = exp_reduce_pair_bsr1(&a, &g, &ReduceOptions::default()).unwrap();
        assert!(w.b.sup_norm() < 1e-15);
        assert!((w.x.get(0).get(0) - Scalar::new(-(2f64.ln()), 0.0)).norm() < 1e-15);
        let t = Tuple::new(vec![a]).unwrap();
        assert!(verify_exp_reducibility(&t, &g, &w).unwrap() < 1e-15);
    }

    #[test]
    fn circle_winding_is_surfaced() {
        let owner = AlgebraInstance::circle(Field::Complex, 1024).unwrap();
        let a = Element::coordinate(&owner);
        let g = Element::zero(&owner);
        match exp_reduce_pair_bsr1(&a, &g, &ReduceOptions::default()) {
            Err(Error::LogObstruction(obs)) => assert_eq!(obs.windings[0].winding, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ones_row_gives_principal_witness() {
        let owner = AlgebraInstance::finite(Field::Complex, 1).unwrap();
        let a = Tuple::new(vec![
            Element::scalar(&owner, Scalar::new(0.5, 0.0)),
            Element::scalar(&owner, Scalar::new(0.5, 0.0)),
        ])
        .unwrap();
        let g = Element::zero(&owner);
        let wit = ExpReducibilityWitness {
            x: Tuple::zeros(&owner, 2),
            b: Tuple::zeros(&owner, 2),
        };
        let pw = principal_from_exp_reducible(&a, &g, &wit).unwrap();
        assert!(verify_principal(&a, &g, &pw).unwrap() < 1e-12);
    }
}
