use serde::{Deserialize, Serialize};

use super::{bezout, PrincipalWitness};
use crate::algebra::{default_tol, Element, Instance, Scalar, Tuple};
use crate::error::{Error, Result};
use crate::matrices::{det_residual, so_log, ExpProduct, MatrixOverA, PointMatrix};

/// Sup-norm residuals of the four row-extension identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowResiduals {
    /// `|u W - e_1|`
    pub row: f64,
    /// `|det W - 1|`
    pub det: f64,
    /// `|prod exp(L_j) - W_1 W_2 W_3|`
    pub product: f64,
    /// `|e_1 W^{-1} - u|`
    pub inverse_row: f64,
}

impl RowResiduals {
    pub fn max(&self) -> f64 {
        self.row
            .max(self.det)
            .max(self.product)
            .max(self.inverse_row)
    }
}

/// A determinant-one matrix `W = exp(L_1) ... exp(L_4)` with `u W = e_1`,
/// so that `u` is the first row of the invertible matrix `W^{-1}`.
#[derive(Debug, Clone)]
pub struct RowExtension {
    pub logs: ExpProduct,
    pub w: MatrixOverA,
    pub residuals: RowResiduals,
}

impl RowExtension {
    /// `W^{-1}`, whose first row is `u`.
    pub fn completion(&self) -> Result<MatrixOverA> {
        self.w.inverse(0.0)
    }
}

fn nilpotent_last_row(owner: &Instance, n1: usize, row: &[Element]) -> Result<MatrixOverA> {
    let mut m = MatrixOverA::zeros(owner, n1);
    for (j, e) in row.iter().enumerate() {
        m.set(n1 - 1, j, e.clone())?;
    }
    Ok(m)
}

/// The signed cyclic permutation with columns `e_{n+1}, (-1)^n e_1, e_2, ..., e_n`.
fn cyclic_w3(n: usize) -> PointMatrix {
    let n1 = n + 1;
    let mut m = PointMatrix::zeros(n1, n1);
    m[(n1 - 1, 0)] = Scalar::new(1.0, 0.0);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    m[(0, 1)] = Scalar::new(sign, 0.0);
    for k in 2..n1 {
        m[(k - 1, k)] = Scalar::new(1.0, 0.0);
    }
    m
}

/// Extends the row `u = (f_1..f_n, g)` to an invertible matrix, given a
/// reduction vector `x` with `v = f + g x` invertible.
///
/// With `y = (1 - g) v* / |v|^2` (so `y . v = 1 - g`), the matrices
/// `M_1 = I + e_{n+1} (x, 0)`, `M_2 = I + (y, 0)^t e_{n+1}`,
/// `W_2 = I - e_{n+1} (v, 0)` and the signed cycle `W_3` satisfy
/// `u M_1 M_2 W_2 W_3 = e_1`. The first three are `exp` of their nilpotent
/// parts; `W_3` is special orthogonal and has a real skew logarithm.
pub fn extend_row(f: &Tuple, g: &Element, x: &Tuple, tol: f64) -> Result<RowExtension> {
    if !f.same_owner(g) || !x.same_owner(g) {
        return Err(Error::OwnerMismatch);
    }
    let n = f.len();
    if x.len() != n {
        return Err(Error::DimensionMismatch("reduction vector length".into()));
    }
    let owner = f.owner().clone();
    let v = f.add_scaled(g, x)?;
    let (min, index) = v.min_modulus();
    if min <= tol {
        return Err(Error::InvalidWitness(format!(
            "f + g x has modulus {min:e} at spectrum point {index}"
        )));
    }
    let one_minus_g = Element::one(&owner).sub(g)?;
    let y = bezout(&v, tol)?.scale_by(&one_minus_g)?;
    let n1 = n + 1;
    let zero = Element::zero(&owner);

    let mut row1: Vec<Element> = x.coords().to_vec();
    row1.push(zero.clone());
    let n_1 = nilpotent_last_row(&owner, n1, &row1)?;

    let mut n_2 = MatrixOverA::zeros(&owner, n1);
    for (i, yi) in y.coords().iter().enumerate() {
        n_2.set(i, n1 - 1, yi.clone())?;
    }

    let mut row3: Vec<Element> = v.coords().iter().map(Element::neg).collect();
    row3.push(zero);
    let n_3 = nilpotent_last_row(&owner, n1, &row3)?;

    let w3 = MatrixOverA::constant(&owner, &cyclic_w3(n))?;
    let l_3 = so_log(&w3)?;

    let id = MatrixOverA::identity(&owner, n1);
    let explicit = id
        .add(&n_1)?
        .mul(&id.add(&n_2)?)?
        .mul(&id.add(&n_3)?)?
        .mul(&w3)?;
    let logs = ExpProduct::new(vec![n_1, n_2, n_3, l_3]);
    let w = logs.evaluate().expect("nonempty");

    let u = f.push(g.clone())?;
    let e1 = Tuple::unit(&owner, n1, 0);
    let residuals = RowResiduals {
        row: w.row_times(&u)?.distance(&e1)?,
        det: det_residual(&w),
        product: w.distance(&explicit)?,
        inverse_row: w.inverse(0.0)?.row(0).distance(&u)?,
    };
    Ok(RowExtension { logs, w, residuals })
}

fn permutation_matrix(owner: &Instance, perm: &[usize]) -> Result<MatrixOverA> {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidDescriptor(format!(
                "{perm:?} is not a permutation"
            )));
        }
        seen[p] = true;
    }
    // (f P)_j = f_{perm[j]}
    let mut m = PointMatrix::zeros(n, n);
    for (j, &p) in perm.iter().enumerate() {
        m[(p, j)] = Scalar::new(1.0, 0.0);
    }
    MatrixOverA::constant(owner, &m)
}

fn permutation_sign(perm: &[usize]) -> i32 {
    let mut sign = 1;
    let mut seen = vec![false; perm.len()];
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Transports a principal witness for `(f, g)` to one for `(f P, g)`, where
/// `(f P)_j = f_{perm[j]}`.
///
/// For an even permutation `P = exp(log P)` is appended. For an odd one,
/// with `S` the swap of the first and last coordinates, `Q = P S` is
/// special orthogonal and `e_1 W P = e_n (S W S)(S Q S)`; the factors are
/// conjugated by `S` and `e_n` is reached from `e_1` by a signed cycle.
pub fn permute_principal_witness(
    f: &Tuple,
    g: &Element,
    perm: &[usize],
    witness: &PrincipalWitness,
) -> Result<PrincipalWitness> {
    let n = f.len();
    if perm.len() != n || witness.a.len() != n {
        return Err(Error::DimensionMismatch("permutation length".into()));
    }
    let owner = f.owner().clone();
    let tol = default_tol(f.sup_norm().max(g.sup_norm()));
    let residual = super::principal::verify_principal(f, g, witness)?;
    let scale = 1.0 + f.add_scaled(g, &witness.a)?.sup_norm();
    if residual > 1e-6 * scale {
        return Err(Error::InvalidWitness(format!(
            "principal residual {residual:e}"
        )));
    }
    let p = permutation_matrix(&owner, perm)?;
    let a = witness.a.permuted(perm)?;
    let logs = if permutation_sign(perm) > 0 {
        let mut factors = witness.logs.factors.clone();
        if perm.iter().enumerate().any(|(j, &q)| j != q) {
            factors.push(so_log(&p)?);
        }
        ExpProduct::new(factors)
    } else {
        let mut swap = PointMatrix::identity(n, n);
        swap.swap_columns(0, n - 1);
        let s = MatrixOverA::constant(&owner, &swap)?;
        let q = p.mul(&s)?;
        let mut cycle = PointMatrix::zeros(n, n);
        cycle[(0, n - 1)] = Scalar::new(1.0, 0.0);
        let sign = if (n - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
        cycle[(1, 0)] = Scalar::new(sign, 0.0);
        for i in 2..n {
            cycle[(i, i - 1)] = Scalar::new(1.0, 0.0);
        }
        let wc = MatrixOverA::constant(&owner, &cycle)?;
        let mut factors = vec![so_log(&wc)?];
        factors.extend(witness.logs.conjugate(&s, tol)?.factors);
        factors.push(so_log(&q)?.conjugate(&s, tol)?);
        ExpProduct::new(factors)
    };
    Ok(PrincipalWitness {
        a,
        logs,
        h: if n == 1 { witness.h.clone() } else { None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraInstance, Field};

    fn c1() -> Instance {
        AlgebraInstance::finite(Field::Complex, 1).unwrap()
    }

    fn real(owner: &Instance, v: f64) -> Element {
        Element::scalar(owner, Scalar::new(v, 0.0))
    }

    #[test]
    fn scalar_row_matches_hand_computation() {
        let owner = c1();
        let f = Tuple::new(vec![Element::one(&owner)]).unwrap();
        let g = Element::zero(&owner);
        let x = Tuple::zeros(&owner, 1);
        let ext = extend_row(&f, &g, &x, 1e-12).unwrap();
        let expected =
            PointMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0].map(|v| Scalar::new(v, 0.0)));
        let err = (ext.w.at(0) - expected)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "W = {}", ext.w.at(0));
        assert!(ext.residuals.max() < 1e-12);
    }

    #[test]
    fn w3_has_unit_determinant() {
        for n in 1..6 {
            let d = cyclic_w3(n).determinant();
            assert!((d - Scalar::new(1.0, 0.0)).norm() < 1e-14, "n = {n}");
        }
        // n = 2: columns e_3, e_1, e_2
        let w = cyclic_w3(2);
        assert_eq!(w[(2, 0)], Scalar::new(1.0, 0.0));
        assert_eq!(w[(0, 1)], Scalar::new(1.0, 0.0));
        assert_eq!(w[(1, 2)], Scalar::new(1.0, 0.0));
    }

    #[test]
    fn unit_vector_extends() {
        let owner = AlgebraInstance::finite(Field::Complex, 3).unwrap();
        let f = Tuple::unit(&owner, 3, 0);
        let g = Element::zero(&owner);
        let ext = extend_row(&f, &g, &Tuple::zeros(&owner, 3), 1e-12).unwrap();
        assert!(ext.residuals.max() < 1e-10);
    }

    #[test]
    fn swap_of_constants() {
        let owner = c1();
        let f = Tuple::new(vec![real(&owner, 3.0), real(&owner, 4.0)]).unwrap();
        let g = Element::zero(&owner);
        let logs = super::super::principal::row_factorization(&f, 1e-12).unwrap();
        let w = PrincipalWitness {
            a: Tuple::zeros(&owner, 2),
            logs,
            h: None,
        };
        assert!(super::super::verify_principal(&f, &g, &w).unwrap() < 1e-12);
        let swapped = permute_principal_witness(&f, &g, &[1, 0], &w).unwrap();
        let fp = f.permuted(&[1, 0]).unwrap();
        assert!(super::super::verify_principal(&fp, &g, &swapped).unwrap() < 1e-9);
        let same = permute_principal_witness(&f, &g, &[0, 1], &w).unwrap();
        assert_eq!(same.logs.len(), w.logs.len());
    }

    #[test]
    fn sign_of_permutations() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
    }
}
