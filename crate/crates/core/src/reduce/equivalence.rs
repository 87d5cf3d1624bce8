use serde::{Deserialize, Serialize};

use crate::algebra::{default_tol, Element, Scalar, Tuple};
use crate::error::{Error, Result};
use crate::matrices::ExpProduct;

/// Links `f` to `f~` inside the invertible pairs with second entry `g`:
/// `f + g x = f~ exp(L_1) ... exp(L_k)`.
#[derive(Debug, Clone)]
pub struct ExpEquivalence {
    pub x: Tuple,
    pub logs: ExpProduct,
}

impl ExpEquivalence {
    /// `x = 0`, empty product.
    pub fn reflexive(f: &Tuple) -> Self {
        ExpEquivalence {
            x: Tuple::zeros(f.owner(), f.len()),
            logs: ExpProduct::new(Vec::new()),
        }
    }

    /// From `f + g x = f~ W` follows `f~ - g x W^{-1} = f W^{-1}`.
    pub fn symmetric(&self) -> Result<Self> {
        let inv = self.logs.inverse();
        let x = inv.row_times(&self.x)?;
        let owner = x.owner().clone();
        let minus = Tuple::zeros(&owner, x.len()).sub(&x)?;
        Ok(ExpEquivalence {
            x: minus,
            logs: inv,
        })
    }

    /// `self` links `f` to `f~`, `next` links `f~` to `f^`; the composite
    /// links `f` to `f^` with `x = x_1 + x_2 W_1` and logs `L_2 ++ L_1`.
    pub fn transitive(&self, next: &ExpEquivalence) -> Result<Self> {
        let shifted = self.logs.row_times(&next.x)?;
        Ok(ExpEquivalence {
            x: self.x.add(&shifted)?,
            logs: next.logs.concat(&self.logs),
        })
    }

    /// `sup |f + g x - f~ prod exp(L)|`.
    pub fn residual(&self, f: &Tuple, g: &Element, other: &Tuple) -> Result<f64> {
        let lhs = f.add_scaled(g, &self.x)?;
        let rhs = self.logs.row_times(other)?;
        lhs.distance(&rhs)
    }
}

/// Samples along the path `H(t) = f~ prod exp(t L_j) - t g x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathReport {
    pub samples: Vec<PathSample>,
    pub min_modulus: f64,
    pub endpoint_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub t: f64,
    pub min_modulus: f64,
}

/// Walks the path from `f~` (t = 0) to `f` (t = 1) given by an
/// equivalence witness and checks that `(H(t), g)` stays invertible at each
/// of `samples` equally spaced parameters. A witness whose path does not
/// end at `f` is rejected as well.
pub fn exp_class_path(
    f: &Tuple,
    g: &Element,
    other: &Tuple,
    witness: &ExpEquivalence,
    samples: usize,
) -> Result<PathReport> {
    let tol = default_tol(f.sup_norm().max(g.sup_norm()));
    let samples = samples.max(2);
    let mut out = Vec::with_capacity(samples);
    let mut overall = f64::INFINITY;
    let mut endpoint_residual = 0.0;
    for s in 0..samples {
        let t = s as f64 / (samples - 1) as f64;
        let scaled = ExpProduct::new(
            witness
                .logs
                .factors
                .iter()
                .map(|l| l.scale(Scalar::new(t, 0.0)))
                .collect(),
        );
        let moved = scaled.row_times(other)?;
        let h = moved.sub(
            &witness
                .x
                .scale_by(g)?
                .scale_by(&Element::scalar(g.owner(), Scalar::new(t, 0.0)))?,
        )?;
        let (min, _) = h.push(g.clone())?.min_modulus();
        if min <= tol {
            return Err(Error::PathLeavesInvertible { t, min });
        }
        overall = overall.min(min);
        out.push(PathSample {
            t,
            min_modulus: min,
        });
        if s == samples - 1 {
            endpoint_residual = h.distance(f)?;
        }
    }
    let scale = 1.0 + f.sup_norm();
    if endpoint_residual > 1e-8 * scale {
        return Err(Error::PathEndpointMismatch {
            residual: endpoint_residual,
        });
    }
    Ok(PathReport {
        samples: out,
        min_modulus: overall,
        endpoint_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraInstance, Field};
    use crate::matrices::MatrixOverA;

    #[test]
    fn identity_path_is_constant() {
        let owner = AlgebraInstance::finite(Field::Complex, 3).unwrap();
        let f = Tuple::new(vec![Element::one(&owner), Element::zero(&owner)]).unwrap();
        let g = Element::zero(&owner);
        let w = ExpEquivalence::reflexive(&f);
        let rep = exp_class_path(&f, &g, &f, &w, 16).unwrap();
        assert_eq!(rep.samples.len(), 16);
        assert!((rep.min_modulus - 1.0).abs() < 1e-15);
    }

    #[test]
    fn corrupted_endpoint_is_flagged() {
        let owner = AlgebraInstance::finite(Field::Complex, 2).unwrap();
        let f = Tuple::new(vec![Element::one(&owner)]).unwrap();
        let g = Element::zero(&owner);
        let l = MatrixOverA::new(
            &owner,
            1,
            vec![Element::scalar(&owner, Scalar::new(0.5, 0.0))],
        )
        .unwrap();
        let w = ExpEquivalence {
            x: Tuple::zeros(&owner, 1),
            logs: ExpProduct::new(vec![l]),
        };
        assert!(matches!(
            exp_class_path(&f, &g, &f, &w, 8),
            Err(Error::PathEndpointMismatch { .. })
        ));
    }
}
