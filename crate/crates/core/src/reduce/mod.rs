//! Reducibility, reducibility to the principal component, row extension
//! and exponential reducibility, each returned with a witness that can be
//! checked by evaluating residuals.
//!
//! For a tuple `f = (f_1..f_n)` and an element `g` with `(f, g)` invertible,
//! a *reduction* is a tuple `a` with `f + a g` invertible. It lands in the
//! *principal component* when `f + a g = e_1 exp(L_1) ... exp(L_k)`; for
//! `n = 1` this reads `f + a g = e^h`.

mod equivalence;
mod exp;
mod extension;
mod principal;
mod rows;
mod tuple_reduce;

pub use equivalence::{exp_class_path, ExpEquivalence, PathReport};
pub use exp::{
    exp_reduce_pair_bsr1, perturb_transfer, principal_from_exp_reducible, verify_exp_reducibility,
    ExpReducibilityWitness, TransferOutcome, TransferSource, TransferredWitness,
};
pub use extension::{zero_free_extension, ZeroFreeExtension};
pub use principal::{
    reduce_to_principal, verify_principal, PrincipalObstruction, PrincipalOutcome,
};
pub use rows::{extend_row, permute_principal_witness, RowExtension, RowResiduals};
pub use tuple_reduce::{reduce_tuple, verify_reduction, IrreducibleReport, ReduceOutcome};

use serde::{Deserialize, Serialize};

use crate::algebra::{default_tol, Element, Field, Kind, Scalar, Tuple};
use crate::error::{Error, Result};
use crate::matrices::ExpProduct;
use crate::topology::default_eps;

/// Overrides for the zero-set threshold and the invertibility tolerance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ReduceOptions {
    pub eps: Option<f64>,
    pub tol: Option<f64>,
}

impl ReduceOptions {
    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = Some(eps);
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = Some(tol);
        self
    }

    pub(crate) fn eps_for(&self, g: &Element) -> f64 {
        self.eps.unwrap_or_else(|| default_eps(g))
    }

    pub(crate) fn tol_for(&self, f: &Tuple, g: &Element) -> f64 {
        self.tol
            .unwrap_or_else(|| default_tol(f.sup_norm().max(g.sup_norm())))
    }
}

/// One factor `((z - p) / |z - p|)^w` of a planar zero-free extension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MobiusFactor {
    pub hole: usize,
    pub point: [f64; 2],
    pub winding: i64,
}

/// How the zero-free extension behind a reduction was built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum ExtensionTrace {
    /// `g` has no zeros: `f + a g = e_1`.
    Unit,
    /// Pointwise choice on a finite spectrum.
    Pointwise,
    /// Planar: Mobius-power factors times the exponential of a nearest-cell
    /// extension of `log(f / phi)`.
    MobiusLog { factors: Vec<MobiusFactor> },
    /// Nearest zero-set value inside each component of the interval domain.
    NearestSign,
    /// Circle: logarithm interpolated linearly across gaps of the zero set.
    ArcInterpolation,
    /// Exponential of a nearest-cell extension of a logarithm of `f`.
    LogExtension,
}

/// A reduction vector with the achieved minimum modulus of `f + a g`.
#[derive(Debug, Clone)]
pub struct ReductionWitness {
    pub a: Tuple,
    pub achieved_min: f64,
    pub eps: f64,
    pub trace: ExtensionTrace,
}

/// A reduction landing in the principal component:
/// `f + a g = e_1 exp(L_1) ... exp(L_k)`; for `n = 1`, `h` with `f + a g = e^h`.
#[derive(Debug, Clone)]
pub struct PrincipalWitness {
    pub a: Tuple,
    pub logs: ExpProduct,
    pub h: Option<Element>,
}

impl PrincipalWitness {
    /// `e_1 exp(L_1) ... exp(L_k)`.
    pub fn target(&self) -> Result<Tuple> {
        let owner = self.a.owner();
        let n = self.a.len();
        self.logs.row_times(&Tuple::unit(owner, n, 0))
    }
}

/// Piecewise-linear cutoff in `|g|`: 0 below `eps/2`, 1 above `eps`.
pub fn cutoff(modulus: f64, eps: f64) -> f64 {
    if modulus <= 0.5 * eps {
        0.0
    } else if modulus >= eps {
        1.0
    } else {
        (modulus - 0.5 * eps) / (0.5 * eps)
    }
}

/// Solution of the Bezout equation `sum x_j f_j = 1`:
/// `x_j = conj(f_j) / |f|^2` pointwise.
pub fn bezout(f: &Tuple, tol: f64) -> Result<Tuple> {
    f.check_invertible(tol)?;
    let norm2: Vec<f64> = f.pointwise_norm().iter().map(|v| v * v).collect();
    let coords = f
        .coords()
        .iter()
        .map(|c| Element::from_fn(c.owner(), |p| c.get(p).conj() / norm2[p]))
        .collect();
    Tuple::new(coords)
}

/// `a = chi(|g|) (F - f) / g` coordinatewise; zero where the cutoff vanishes.
pub(crate) fn cutoff_vector(f: &Tuple, target: &Tuple, g: &Element, eps: f64) -> Result<Tuple> {
    let coords = f
        .coords()
        .iter()
        .zip(target.coords())
        .map(|(fj, tj)| {
            Element::from_fn(fj.owner(), |p| {
                let gp = g.get(p);
                let chi = cutoff(gp.norm(), eps);
                if chi == 0.0 {
                    Scalar::new(0.0, 0.0)
                } else {
                    (tj.get(p) - fj.get(p)) * chi / gp
                }
            })
        })
        .collect();
    Tuple::new(coords)
}

/// The reduction `a = (e_1 - f) / g`, valid when `g` has no zeros.
pub(crate) fn unit_reduction(f: &Tuple, g: &Element) -> Result<Tuple> {
    let owner = f.owner();
    let e1 = Tuple::unit(owner, f.len(), 0);
    let coords = f
        .coords()
        .iter()
        .zip(e1.coords())
        .map(|(fj, ej)| Element::from_fn(owner, |p| (ej.get(p) - fj.get(p)) / g.get(p)))
        .collect();
    Tuple::new(coords)
}

/// Checks the tuple `(f, g)` is invertible and shares one owner.
pub(crate) fn check_pair(f: &Tuple, g: &Element, tol: f64) -> Result<()> {
    if !f.same_owner(g) {
        return Err(Error::OwnerMismatch);
    }
    f.push(g.clone())?.check_invertible(tol)
}

/// Which constructive path applies to an instance and tuple length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Route {
    Finite,
    Planar,
    Interval,
    Circle,
}

pub(crate) fn route(f: &Tuple) -> std::result::Result<Route, (String, bool)> {
    let inst = f.owner();
    let n = f.len();
    let field = inst.field();
    match inst.kind() {
        Kind::FiniteProduct => Ok(Route::Finite),
        Kind::Circle if n == 1 && field == Field::Complex => Ok(Route::Circle),
        Kind::Circle => Err((
            format!("circle instances are constructive only for complex pairs, got n = {n}, field {field:?}"),
            false,
        )),
        Kind::GridFunction => {
            let d = inst.domain().expect("grid").dim() as usize;
            let real_dim = if field == Field::Complex { 2 * n } else { n };
            match (field, d, n) {
                (Field::Complex, 2, 1) => Ok(Route::Planar),
                (Field::Real, 1, 1) => Ok(Route::Interval),
                _ => Err((
                    format!(
                        "no constructive reduction for field {field:?}, raster dimension {d}, tuple length {n}"
                    ),
                    real_dim == d,
                )),
            }
        }
    }
}
