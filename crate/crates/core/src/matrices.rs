//! Square matrices with entries in an algebra instance, evaluated
//! pointwise on the spectrum: products, determinants, inverses,
//! exponentials and the logarithms used to certify exponential products.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{default_tol, sup, AlgebraInstance, Element, Field, Instance, Scalar, Tuple};
use crate::error::{Error, Result};

pub type PointMatrix = DMatrix<Scalar>;

/// An `n x n` matrix over an algebra instance, row-major.
#[derive(Debug, Clone)]
pub struct MatrixOverA {
    owner: Instance,
    n: usize,
    entries: Vec<Element>,
}

impl MatrixOverA {
    pub fn new(owner: &Instance, n: usize, entries: Vec<Element>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n} x {n} matrix",
                entries.len()
            )));
        }
        for e in &entries {
            if !AlgebraInstance::same(owner, e.owner()) {
                return Err(Error::OwnerMismatch);
            }
        }
        Ok(MatrixOverA {
            owner: owner.clone(),
            n,
            entries,
        })
    }

    pub fn from_fn(
        owner: &Instance,
        n: usize,
        mut f: impl FnMut(usize, usize) -> Element,
    ) -> Result<Self> {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self::new(owner, n, entries)
    }

    pub fn zeros(owner: &Instance, n: usize) -> Self {
        MatrixOverA {
            owner: owner.clone(),
            n,
            entries: (0..n * n).map(|_| Element::zero(owner)).collect(),
        }
    }

    pub fn identity(owner: &Instance, n: usize) -> Self {
        let mut m = Self::zeros(owner, n);
        for i in 0..n {
            m.entries[i * n + i] = Element::one(owner);
        }
        m
    }

    /// The same scalar matrix at every spectrum point.
    pub fn constant(owner: &Instance, c: &PointMatrix) -> Result<Self> {
        if !c.is_square() {
            return Err(Error::DimensionMismatch(
                "constant matrix is not square".into(),
            ));
        }
        let n = c.nrows();
        Self::from_fn(owner, n, |i, j| Element::scalar(owner, c[(i, j)]))
    }

    /// Assembles a matrix from its value at each spectrum point. On real
    /// instances imaginary parts are dropped.
    pub fn from_points(owner: &Instance, n: usize, points: &[PointMatrix]) -> Result<Self> {
        if points.len() != owner.len() {
            return Err(Error::DimensionMismatch(
                "one matrix per spectrum point".into(),
            ));
        }
        let entries = (0..n * n)
            .map(|k| Element::from_fn(owner, |p| points[p][(k / n, k % n)]))
            .collect();
        Self::new(owner, n, entries)
    }

    pub fn owner(&self) -> &Instance {
        &self.owner
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &Element {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: Element) -> Result<()> {
        if !AlgebraInstance::same(&self.owner, e.owner()) {
            return Err(Error::OwnerMismatch);
        }
        self.entries[i * self.n + j] = e;
        Ok(())
    }

    pub fn row(&self, i: usize) -> Tuple {
        Tuple::new(self.entries[i * self.n..(i + 1) * self.n].to_vec()).expect("nonempty row")
    }

    pub fn column(&self, j: usize) -> Tuple {
        Tuple::new((0..self.n).map(|i| self.entry(i, j).clone()).collect()).expect("nonempty")
    }

    /// The scalar matrix at one spectrum point.
    pub fn at(&self, p: usize) -> PointMatrix {
        PointMatrix::from_fn(self.n, self.n, |i, j| self.entries[i * self.n + j].get(p))
    }

    /// Applies a scalar matrix map at every spectrum point in parallel.
    pub fn map_points(&self, f: impl Fn(PointMatrix) -> PointMatrix + Sync) -> Result<Self> {
        let pts: Vec<PointMatrix> = (0..self.owner.len())
            .into_par_iter()
            .map(|p| f(self.at(p)))
            .collect();
        let n = pts.first().map_or(self.n, |m| m.nrows());
        Self::from_points(&self.owner, n, &pts)
    }

    fn try_map_points(
        &self,
        f: impl Fn(usize, PointMatrix) -> Result<PointMatrix> + Sync,
    ) -> Result<Self> {
        let pts: Vec<PointMatrix> = (0..self.owner.len())
            .into_par_iter()
            .map(|p| f(p, self.at(p)))
            .collect::<Result<_>>()?;
        Self::from_points(&self.owner, self.n, &pts)
    }

    fn check(&self, other: &MatrixOverA) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "{} x {} and {} x {} matrices",
                self.n, self.n, other.n, other.n
            )));
        }
        if !AlgebraInstance::same(&self.owner, &other.owner) {
            return Err(Error::OwnerMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &MatrixOverA) -> Result<Self> {
        self.check(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Self::new(&self.owner, self.n, entries)
    }

    pub fn sub(&self, other: &MatrixOverA) -> Result<Self> {
        self.check(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<_>>()?;
        Self::new(&self.owner, self.n, entries)
    }

    pub fn neg(&self) -> Self {
        MatrixOverA {
            owner: self.owner.clone(),
            n: self.n,
            entries: self.entries.iter().map(Element::neg).collect(),
        }
    }

    pub fn scale(&self, c: Scalar) -> Self {
        MatrixOverA {
            owner: self.owner.clone(),
            n: self.n,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    pub fn mul(&self, other: &MatrixOverA) -> Result<Self> {
        self.check(other)?;
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Element::zero(&self.owner);
                for k in 0..n {
                    acc = acc.add(&self.entry(i, k).mul(other.entry(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Self::new(&self.owner, n, entries)
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        MatrixOverA {
            owner: self.owner.clone(),
            n,
            entries: (0..n * n)
                .map(|k| self.entry(k % n, k / n).clone())
                .collect(),
        }
    }

    /// Row vector times matrix, `u M`.
    pub fn row_times(&self, u: &Tuple) -> Result<Tuple> {
        if u.len() != self.n {
            return Err(Error::DimensionMismatch("row length".into()));
        }
        let coords = (0..self.n)
            .map(|j| u.dot(&self.column(j)))
            .collect::<Result<Vec<_>>>()?;
        Tuple::new(coords)
    }

    /// Matrix times column vector, `M v`.
    pub fn times_column(&self, v: &Tuple) -> Result<Tuple> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch("column length".into()));
        }
        let coords = (0..self.n)
            .map(|i| self.row(i).dot(v))
            .collect::<Result<Vec<_>>>()?;
        Tuple::new(coords)
    }

    pub fn det(&self) -> Element {
        let dets: Vec<Scalar> = (0..self.owner.len())
            .into_par_iter()
            .map(|p| self.at(p).determinant())
            .collect();
        Element::from_fn(&self.owner, |p| dets[p])
    }

    /// Pointwise inverse; refuses when `|det|` does not clear `tol` somewhere.
    pub fn inverse(&self, tol: f64) -> Result<Self> {
        let det = self.det();
        let (min, index) = det.min_modulus();
        if min <= tol {
            return Err(Error::NotInvertible { min, index });
        }
        self.try_map_points(|p, m| {
            m.try_inverse()
                .ok_or(Error::NotInvertible { min: 0.0, index: p })
        })
    }

    /// Pointwise matrix exponential (scaling and squaring with Pade).
    pub fn exp(&self) -> Self {
        self.map_points(|m| m.exp()).expect("same shape")
    }

    /// Largest entry sup norm.
    pub fn sup_norm(&self) -> f64 {
        sup(self.entries.iter().map(Element::sup_norm))
    }

    /// Bound on the operator norm: max over rows of the sum of the entry sup
    /// norms.
    pub fn op_norm_bound(&self) -> f64 {
        sup((0..self.n).map(|i| {
            (0..self.n)
                .map(|j| self.entry(i, j).sup_norm())
                .sum::<f64>()
        }))
    }

    pub fn distance(&self, other: &MatrixOverA) -> Result<f64> {
        Ok(self.sub(other)?.sup_norm())
    }

    /// `S^{-1} M S`.
    pub fn conjugate(&self, s: &MatrixOverA, tol: f64) -> Result<Self> {
        let det = s.det();
        let (min_det, _) = det.min_modulus();
        if min_det <= tol {
            return Err(Error::SingularS { min_det });
        }
        s.inverse(tol)?.mul(self)?.mul(s)
    }
}

/// Logarithm of a unipotent matrix `I + N` by the terminating series
/// `sum_{k<n} (-1)^{k+1} N^k / k`.
pub fn log_unipotent(m: &MatrixOverA) -> Result<MatrixOverA> {
    let n = m.n();
    let id = MatrixOverA::identity(m.owner(), n);
    let nil = m.sub(&id)?;
    let scale = 1.0 + nil.sup_norm();
    let mut power = nil.clone();
    let mut terms = vec![nil.clone()];
    for _ in 1..n {
        power = power.mul(&nil)?;
        terms.push(power.clone());
    }
    // terms[n-1] = N^n
    let residual = terms[n - 1].sup_norm();
    if residual > 1e-10 * scale.powi(n as i32) {
        return Err(Error::NotUnipotent { power: n, residual });
    }
    let mut acc = MatrixOverA::zeros(m.owner(), n);
    for (k, t) in terms.iter().take(n - 1).enumerate() {
        let k1 = (k + 1) as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc = acc.add(&t.scale(Scalar::new(sign / k1, 0.0)))?;
    }
    Ok(acc)
}

const SERIES_CAP: usize = 10_000;

/// Logarithm of a matrix within operator distance 1 of the identity by
/// the Mercator series, summed pointwise.
pub fn log_near_identity(m: &MatrixOverA) -> Result<MatrixOverA> {
    let n = m.n();
    let nil = m.sub(&MatrixOverA::identity(m.owner(), n))?;
    let norm = nil.op_norm_bound();
    if norm >= 1.0 {
        return Err(Error::NotNearIdentity { norm });
    }
    nil.map_points(|x| {
        let mut acc = PointMatrix::zeros(n, n);
        let mut power = x.clone();
        for k in 1..=SERIES_CAP {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let term = power.scale(sign / k as f64);
            let size = term.iter().map(|v| v.norm()).fold(0.0, f64::max);
            acc += term;
            if size < 1e-16 {
                break;
            }
            power = &power * &x;
        }
        acc
    })
}

/// Real logarithm of a special orthogonal scalar matrix, skew-symmetric.
///
/// Uses the eigendecomposition of the symmetric part `S`: on the eigenspace
/// of `S` for `cos t` the matrix acts as `cos t + K` with `K` the skew part,
/// so its logarithm is `t / sin t * K`; on the `-1` eigenspace a rotation by
/// `pi` in orthonormal pairs is used.
pub fn so_log_point(w: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = w.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let orth = (w.transpose() * w - &id).amax();
    if orth > 1e-9 {
        return Err(Error::NotSpecialOrthogonal(format!(
            "|W^T W - I| = {orth:e}"
        )));
    }
    let det = w.determinant();
    if (det - 1.0).abs() > 1e-9 {
        return Err(Error::NotSpecialOrthogonal(format!("det = {det}")));
    }
    let sym = (w + w.transpose()) * 0.5;
    let skew = (w - w.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut log = DMatrix::<f64>::zeros(n, n);
    let mut minus_one = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    for &k in &order {
        let c = eig.eigenvalues[k].clamp(-1.0, 1.0);
        let v = eig.eigenvectors.column(k).into_owned();
        if c <= -1.0 + 1e-6 {
            minus_one.push(v);
            continue;
        }
        let t = c.acos();
        let factor = if t < 1e-8 { 1.0 } else { t / t.sin() };
        log += (&skew * &v * v.transpose()) * factor;
    }
    if minus_one.len() % 2 == 1 {
        return Err(Error::NotSpecialOrthogonal(
            "odd-dimensional -1 eigenspace".into(),
        ));
    }
    for pair in minus_one.chunks(2) {
        let (a, b) = (&pair[0], &pair[1]);
        log += (b * a.transpose() - a * b.transpose()) * std::f64::consts::PI;
    }
    let back = log.exp();
    let err = (&back - w).amax();
    if err > 1e-8 {
        return Err(Error::NotSpecialOrthogonal(format!(
            "logarithm residual {err:e}"
        )));
    }
    Ok(log)
}

/// Pointwise special-orthogonal logarithm of a real-valued matrix.
pub fn so_log(w: &MatrixOverA) -> Result<MatrixOverA> {
    let tol = default_tol(w.sup_norm());
    if is_constant(w) {
        let m = w.at(0);
        if m.iter().any(|v| v.im.abs() > tol) {
            return Err(Error::NotSpecialOrthogonal("complex entries".into()));
        }
        let log = so_log_point(&m.map(|v| v.re))?.map(|v| Scalar::new(v, 0.0));
        return MatrixOverA::constant(w.owner(), &log);
    }
    w.try_map_points(|_, m| {
        if m.iter().any(|v| v.im.abs() > tol) {
            return Err(Error::NotSpecialOrthogonal("complex entries".into()));
        }
        let real = m.map(|v| v.re);
        Ok(so_log_point(&real)?.map(|v| Scalar::new(v, 0.0)))
    })
}

/// Whether every entry takes a single value over the whole spectrum.
pub fn is_constant(m: &MatrixOverA) -> bool {
    m.entries()
        .iter()
        .all(|e| e.values().iter().all(|v| *v == e.get(0)))
}

/// A product `exp(L_1) exp(L_2) ... exp(L_k)`.
#[derive(Debug, Clone)]
pub struct ExpProduct {
    pub factors: Vec<MatrixOverA>,
}

impl ExpProduct {
    pub fn new(factors: Vec<MatrixOverA>) -> Self {
        ExpProduct { factors }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// The product of the exponentials; `None` only for an empty product
    /// (which is the identity of unknown size).
    pub fn evaluate(&self) -> Option<MatrixOverA> {
        let mut it = self.factors.iter();
        let first = it.next()?.exp();
        Some(it.fold(first, |acc, l| acc.mul(&l.exp()).expect("same shape")))
    }

    pub fn evaluate_or_identity(&self, owner: &Instance, n: usize) -> MatrixOverA {
        self.evaluate()
            .unwrap_or_else(|| MatrixOverA::identity(owner, n))
    }

    /// Inverse product `exp(-L_k) ... exp(-L_1)`.
    pub fn inverse(&self) -> Self {
        ExpProduct {
            factors: self.factors.iter().rev().map(MatrixOverA::neg).collect(),
        }
    }

    /// Every factor conjugated by `S`; evaluates to `S^{-1} W S`.
    pub fn conjugate(&self, s: &MatrixOverA, tol: f64) -> Result<Self> {
        let det = s.det();
        let (min_det, _) = det.min_modulus();
        if min_det <= tol {
            return Err(Error::SingularS { min_det });
        }
        let inv = s.inverse(tol)?;
        let factors = self
            .factors
            .iter()
            .map(|l| inv.mul(l)?.mul(s))
            .collect::<Result<_>>()?;
        Ok(ExpProduct { factors })
    }

    pub fn concat(&self, other: &ExpProduct) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        ExpProduct { factors }
    }

    /// Row vector `x` times the product.
    pub fn row_times(&self, x: &Tuple) -> Result<Tuple> {
        match self.evaluate() {
            Some(m) => m.row_times(x),
            None => Ok(x.clone()),
        }
    }
}

/// Sup distance between the evaluated product and `w`.
pub fn verify_exp_product(e: &ExpProduct, w: &MatrixOverA) -> Result<f64> {
    e.evaluate_or_identity(w.owner(), w.n()).distance(w)
}

/// Determinant-one check helper used by witnesses: `sup |det M - 1|`.
pub fn det_residual(m: &MatrixOverA) -> f64 {
    sup(m
        .det()
        .values()
        .iter()
        .map(|d| (d - Scalar::new(1.0, 0.0)).norm()))
}

/// Whether every entry of the matrix is real-valued (always true over a
/// real instance).
pub fn is_real(m: &MatrixOverA) -> bool {
    m.owner().field() == Field::Real
        || m.entries()
            .iter()
            .all(|e| e.values().iter().all(|v| v.im == 0.0))
}

/// Serializable scalar matrix used in certificates and fixtures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarMatrix {
    pub n: usize,
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub im: Vec<f64>,
}

impl From<&PointMatrix> for ScalarMatrix {
    fn from(m: &PointMatrix) -> Self {
        let n = m.nrows();
        let re = (0..n * n).map(|k| m[(k / n, k % n)].re).collect();
        let im: Vec<f64> = (0..n * n).map(|k| m[(k / n, k % n)].im).collect();
        ScalarMatrix {
            n,
            re,
            im: if im.iter().all(|v| *v == 0.0) {
                Vec::new()
            } else {
                im
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraInstance, Field};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn finite(m: usize) -> Instance {
        AlgebraInstance::finite(Field::Complex, m).unwrap()
    }

    fn random_matrix(owner: &Instance, n: usize, scale: f64, rng: &mut ChaCha8Rng) -> MatrixOverA {
        MatrixOverA::from_fn(owner, n, |_, _| {
            let vals = (0..owner.len())
                .map(|_| Scalar::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)))
                .collect();
            Element::new(owner, vals).unwrap()
        })
        .unwrap()
    }

    fn cmax(m: &PointMatrix) -> f64 {
        m.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    // Plain Taylor series oracle for small matrices.
    fn taylor_exp(m: &PointMatrix) -> PointMatrix {
        let n = m.nrows();
        let mut acc = PointMatrix::identity(n, n);
        let mut term = PointMatrix::identity(n, n);
        for k in 1..60 {
            term = &term * m / Scalar::new(k as f64, 0.0);
            acc += &term;
        }
        acc
    }

    #[test]
    fn exp_matches_taylor_series() {
        let inst = finite(5);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = random_matrix(&inst, 3, 0.8, &mut rng);
        let e = m.exp();
        for p in 0..5 {
            let err = cmax(&(e.at(p) - taylor_exp(&m.at(p))));
            assert!(err < 1e-12, "err {err}");
        }
    }

    #[test]
    fn det_and_inverse() {
        let inst = finite(4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_matrix(&inst, 3, 1.0, &mut rng)
            .add(&MatrixOverA::identity(&inst, 3).scale(Scalar::new(4.0, 0.0)))
            .unwrap();
        let inv = m.inverse(1e-12).unwrap();
        let prod = m.mul(&inv).unwrap();
        assert!(prod.distance(&MatrixOverA::identity(&inst, 3)).unwrap() < 1e-12);
        // cofactor oracle for 3x3
        for p in 0..4 {
            let a = m.at(p);
            let cof = a[(0, 0)] * (a[(1, 1)] * a[(2, 2)] - a[(1, 2)] * a[(2, 1)])
                - a[(0, 1)] * (a[(1, 0)] * a[(2, 2)] - a[(1, 2)] * a[(2, 0)])
                + a[(0, 2)] * (a[(1, 0)] * a[(2, 1)] - a[(1, 1)] * a[(2, 0)]);
            assert!((m.det().get(p) - cof).norm() < 1e-12);
        }
    }

    #[test]
    fn unipotent_log_inverts_exp() {
        let inst = finite(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut n = MatrixOverA::zeros(&inst, 4);
        for i in 0..4 {
            for j in i + 1..4 {
                let vals = (0..3)
                    .map(|_| Scalar::new(rng.gen_range(-2.0..2.0), 0.0))
                    .collect();
                n.set(i, j, Element::new(&inst, vals).unwrap()).unwrap();
            }
        }
        let l = log_unipotent(&n.exp()).unwrap();
        assert!(l.distance(&n).unwrap() < 1e-10);
        let not_unipotent = MatrixOverA::identity(&inst, 2).scale(Scalar::new(2.0, 0.0));
        assert!(matches!(
            log_unipotent(&not_unipotent),
            Err(Error::NotUnipotent { .. })
        ));
    }

    #[test]
    fn near_identity_log() {
        let inst = finite(6);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let l = random_matrix(&inst, 3, 0.1, &mut rng);
        let back = log_near_identity(&l.exp()).unwrap();
        assert!(back.distance(&l).unwrap() < 1e-12);
        let far = MatrixOverA::identity(&inst, 2).scale(Scalar::new(3.0, 0.0));
        assert!(matches!(
            log_near_identity(&far),
            Err(Error::NotNearIdentity { .. })
        ));
    }

    #[test]
    fn so_log_of_rotations_and_permutations() {
        // rotation by 3 pi / 4 in a plane, pi in another
        let t: f64 = 0.75 * std::f64::consts::PI;
        let mut w = DMatrix::<f64>::identity(5, 5);
        w[(0, 0)] = t.cos();
        w[(0, 1)] = -t.sin();
        w[(1, 0)] = t.sin();
        w[(1, 1)] = t.cos();
        w[(2, 2)] = -1.0;
        w[(3, 3)] = -1.0;
        let l = so_log_point(&w).unwrap();
        assert!((&l + l.transpose()).amax() < 1e-12);
        assert!((l.exp() - &w).amax() < 1e-12);
        // cyclic permutation of order 3
        let p =
            DMatrix::<f64>::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        let l = so_log_point(&p).unwrap();
        assert!((l.exp() - &p).amax() < 1e-12);
        let reflection = DMatrix::<f64>::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(so_log_point(&reflection).is_err());
    }

    #[test]
    fn exp_product_conjugation() {
        let inst = finite(2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let e = ExpProduct::new(vec![
            random_matrix(&inst, 2, 0.5, &mut rng),
            random_matrix(&inst, 2, 0.5, &mut rng),
        ]);
        let s = random_matrix(&inst, 2, 1.0, &mut rng)
            .add(&MatrixOverA::identity(&inst, 2).scale(Scalar::new(3.0, 0.0)))
            .unwrap();
        let w = e.evaluate().unwrap();
        let conj = e.conjugate(&s, 1e-12).unwrap();
        let target = w.conjugate(&s, 1e-12).unwrap();
        assert!(verify_exp_product(&conj, &target).unwrap() < 1e-10);
        let inv = e.inverse().evaluate().unwrap();
        assert!(
            w.mul(&inv)
                .unwrap()
                .distance(&MatrixOverA::identity(&inst, 2))
                .unwrap()
                < 1e-12
        );
        let singular = MatrixOverA::zeros(&inst, 2);
        assert!(matches!(
            e.conjugate(&singular, 1e-12),
            Err(Error::SingularS { .. })
        ));
    }
}
