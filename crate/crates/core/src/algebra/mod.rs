//! Concrete commutative unital Banach algebras with a finite, explicit
//! spectrum: functions sampled on a raster mask, finite products `K^m`, and
//! functions sampled on the unit circle.
//!
//! Because the spectrum is a finite point set, the Gelfand transform is the
//! identity and restriction to a subset of the spectrum is literal. All
//! values are stored as complex doubles; real instances keep every
//! imaginary part exactly zero.

mod tuple;

pub use tuple::Tuple;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::RasterDomain;
use crate::topology;

pub type Scalar = Complex64;

pub const MIN_CIRCLE_SAMPLES: usize = 8;

/// Maximum of non-negative values; NaN if any value is NaN.
pub fn sup(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m: f64, v| {
        if v.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(v)
        }
    })
}

/// Scale-aware default invertibility tolerance.
pub fn default_tol(norm: f64) -> f64 {
    1e-8 * (1.0 + norm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "R")]
    Real,
    #[serde(rename = "C")]
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    GridFunction,
    FiniteProduct,
    Circle,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Spectrum {
    Grid(RasterDomain),
    Finite { m: usize },
    Circle { n: usize },
}

#[derive(Debug)]
pub struct AlgebraInstance {
    field: Field,
    spectrum: Spectrum,
    // grid only: spectrum point -> cell, cell -> spectrum point
    cells: Vec<usize>,
    point_of_cell: Vec<u32>,
    bsr1_connected: bool,
}

pub type Instance = Arc<AlgebraInstance>;

const NO_POINT: u32 = u32::MAX;

impl AlgebraInstance {
    /// `C(K, field)` sampled on the set cells of `domain`.
    pub fn grid(field: Field, domain: RasterDomain) -> Result<Instance> {
        let cells: Vec<usize> = domain.cells().collect();
        if cells.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        let mut point_of_cell = vec![NO_POINT; domain.len()];
        for (k, &c) in cells.iter().enumerate() {
            point_of_cell[c] = k as u32;
        }
        Ok(Arc::new(AlgebraInstance {
            field,
            spectrum: Spectrum::Grid(domain),
            cells,
            point_of_cell,
            bsr1_connected: false,
        }))
    }

    pub fn finite(field: Field, m: usize) -> Result<Instance> {
        if m == 0 {
            return Err(Error::EmptySpectrum);
        }
        Ok(Arc::new(AlgebraInstance {
            field,
            spectrum: Spectrum::Finite { m },
            cells: Vec::new(),
            point_of_cell: Vec::new(),
            // the invertibles of C^m are connected, those of R^m are not
            bsr1_connected: field == Field::Complex,
        }))
    }

    pub fn circle(field: Field, n: usize) -> Result<Instance> {
        if n < MIN_CIRCLE_SAMPLES {
            return Err(Error::InvalidDescriptor(format!(
                "circle needs at least {MIN_CIRCLE_SAMPLES} samples, got {n}"
            )));
        }
        Ok(Arc::new(AlgebraInstance {
            field,
            spectrum: Spectrum::Circle { n },
            cells: Vec::new(),
            point_of_cell: Vec::new(),
            bsr1_connected: false,
        }))
    }

    /// Marks a grid instance as having bsr 1 and connected invertibles.
    /// The flag is advisory: constructors that rely on it still surface a
    /// log obstruction if the annotation is wrong.
    pub fn grid_flagged_bsr1(field: Field, domain: RasterDomain) -> Result<Instance> {
        let inst = Self::grid(field, domain)?;
        let mut inst = Arc::try_unwrap(inst).expect("fresh instance");
        inst.bsr1_connected = true;
        Ok(Arc::new(inst))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn kind(&self) -> Kind {
        match self.spectrum {
            Spectrum::Grid(_) => Kind::GridFunction,
            Spectrum::Finite { .. } => Kind::FiniteProduct,
            Spectrum::Circle { .. } => Kind::Circle,
        }
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn domain(&self) -> Option<&RasterDomain> {
        match &self.spectrum {
            Spectrum::Grid(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_bsr1_connected(&self) -> bool {
        self.bsr1_connected
    }

    /// Number of spectrum points.
    pub fn len(&self) -> usize {
        match &self.spectrum {
            Spectrum::Grid(_) => self.cells.len(),
            Spectrum::Finite { m } => *m,
            Spectrum::Circle { n } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid cell of a spectrum point (grid instances only).
    pub fn cell(&self, point: usize) -> usize {
        self.cells[point]
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn point_of_cell(&self, cell: usize) -> Option<usize> {
        match self.point_of_cell.get(cell) {
            Some(&p) if p != NO_POINT => Some(p as usize),
            _ => None,
        }
    }

    /// Natural complex coordinate of a spectrum point: `x + iy` on grids,
    /// `e^{i theta}` on the circle, the index on finite products.
    pub fn coordinate(&self, point: usize) -> Scalar {
        match &self.spectrum {
            Spectrum::Grid(d) => {
                let [x, y] = d.center(self.cells[point]);
                Scalar::new(x, y)
            }
            Spectrum::Finite { .. } => Scalar::new(point as f64, 0.0),
            Spectrum::Circle { n } => Scalar::from_polar(1.0, 2.0 * PI * point as f64 / *n as f64),
        }
    }

    /// Spacing between neighbouring spectrum points (1 on finite products).
    pub fn step(&self) -> f64 {
        match &self.spectrum {
            Spectrum::Grid(d) => d.h(),
            Spectrum::Finite { .. } => 1.0,
            Spectrum::Circle { n } => 2.0 * PI / *n as f64,
        }
    }

    /// Neighbouring spectrum points (8-neighbourhood on grids, the two
    /// adjacent samples on the circle, none on finite products).
    pub fn neighbors(&self, point: usize) -> Vec<usize> {
        match &self.spectrum {
            Spectrum::Grid(d) => d
                .neighbors8(self.cells[point])
                .iter()
                .filter_map(|&c| self.point_of_cell(c))
                .collect(),
            Spectrum::Circle { n } => vec![(point + n - 1) % n, (point + 1) % n],
            Spectrum::Finite { .. } => Vec::new(),
        }
    }

    /// Restriction algebra `C(R)` for a sub-mask `R` of a grid instance.
    pub fn restrict(self: &Arc<Self>, sub: &RasterDomain) -> Result<Instance> {
        let d = self
            .domain()
            .ok_or_else(|| Error::scope("restriction needs a grid instance"))?;
        if !sub.is_subset_of(d) {
            return Err(Error::NotSubset);
        }
        AlgebraInstance::grid(self.field, sub.clone())
    }

    pub fn same(a: &Instance, b: &Instance) -> bool {
        Arc::ptr_eq(a, b) || (a.field == b.field && a.spectrum == b.spectrum)
    }
}

/// A member of an algebra instance: one scalar per spectrum point.
#[derive(Debug, Clone)]
pub struct Element {
    owner: Instance,
    values: Vec<Scalar>,
}

impl Element {
    pub fn new(owner: &Instance, values: Vec<Scalar>) -> Result<Self> {
        if values.len() != owner.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a spectrum of {} points",
                values.len(),
                owner.len()
            )));
        }
        if owner.field == Field::Real {
            if let Some(k) = values.iter().position(|v| v.im != 0.0) {
                return Err(Error::InvalidDescriptor(format!(
                    "real instance got complex value {} at point {k}",
                    values[k]
                )));
            }
        }
        Ok(Element {
            owner: owner.clone(),
            values,
        })
    }

    pub fn from_real(owner: &Instance, values: Vec<f64>) -> Result<Self> {
        Self::new(
            owner,
            values.into_iter().map(|v| Scalar::new(v, 0.0)).collect(),
        )
    }

    /// Builds an element from a function of the spectrum point. Imaginary
    /// parts are dropped on real instances.
    pub fn from_fn(owner: &Instance, f: impl Fn(usize) -> Scalar) -> Self {
        let real = owner.field == Field::Real;
        let values = (0..owner.len())
            .map(|k| {
                let v = f(k);
                if real {
                    Scalar::new(v.re, 0.0)
                } else {
                    v
                }
            })
            .collect();
        Element {
            owner: owner.clone(),
            values,
        }
    }

    /// Embeds a scalar as a constant function.
    pub fn scalar(owner: &Instance, c: Scalar) -> Self {
        Self::from_fn(owner, |_| c)
    }

    pub fn zero(owner: &Instance) -> Self {
        Self::scalar(owner, Scalar::new(0.0, 0.0))
    }

    pub fn one(owner: &Instance) -> Self {
        Self::scalar(owner, Scalar::new(1.0, 0.0))
    }

    /// The coordinate function (`z` on grids, `e^{i theta}` on the circle).
    pub fn coordinate(owner: &Instance) -> Self {
        Self::from_fn(owner, |k| owner.coordinate(k))
    }

    pub fn owner(&self) -> &Instance {
        &self.owner
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Scalar> {
        self.values
    }

    pub fn get(&self, point: usize) -> Scalar {
        self.values[point]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn check_owner(&self, other: &Element) -> Result<()> {
        if AlgebraInstance::same(&self.owner, &other.owner) {
            Ok(())
        } else {
            Err(Error::OwnerMismatch)
        }
    }

    /// Pointwise map, keeping real instances real.
    pub fn map(&self, f: impl Fn(Scalar) -> Scalar) -> Self {
        Self::from_fn(&self.owner, |k| f(self.values[k]))
    }

    pub fn zip_with(&self, other: &Element, f: impl Fn(Scalar, Scalar) -> Scalar) -> Result<Self> {
        self.check_owner(other)?;
        Ok(Self::from_fn(&self.owner, |k| {
            f(self.values[k], other.values[k])
        }))
    }

    pub fn add(&self, other: &Element) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Element) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Element) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a)
    }

    pub fn scale(&self, c: Scalar) -> Self {
        self.map(|a| a * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|a| a.conj())
    }

    /// Pointwise modulus as an element.
    pub fn modulus(&self) -> Self {
        self.map(|a| Scalar::new(a.norm(), 0.0))
    }

    pub fn sup_norm(&self) -> f64 {
        sup(self.values.iter().map(|v| v.norm()))
    }

    /// Minimum of `|a|` over the spectrum and the point attaining it.
    pub fn min_modulus(&self) -> (f64, usize) {
        let mut best = (f64::INFINITY, 0);
        for (k, v) in self.values.iter().enumerate() {
            let m = v.norm();
            if m.is_nan() {
                return (m, k);
            }
            if m < best.0 {
                best = (m, k);
            }
        }
        best
    }

    pub fn default_tol(&self) -> f64 {
        default_tol(self.sup_norm())
    }

    /// Multiplicative inverse; refuses when `min |a| <= tol`.
    pub fn invert(&self, tol: f64) -> Result<Self> {
        let (min, index) = self.min_modulus();
        if min <= tol {
            return Err(Error::NotInvertible { min, index });
        }
        Ok(self.map(|a| a.inv()))
    }

    pub fn exp(&self) -> Self {
        self.map(|a| a.exp())
    }

    /// A continuous logarithm: `exp(log(a)) = a`.
    ///
    /// Real instances need positive values. Complex instances on the grid
    /// or the circle need a continuous phase branch; a nonzero winding is
    /// reported as [`Error::LogObstruction`].
    pub fn log(&self, tol: f64) -> Result<Self> {
        let (min, index) = self.min_modulus();
        if min <= tol {
            return Err(Error::NotInvertible { min, index });
        }
        if self.owner.field == Field::Real {
            if let Some(k) = self.values.iter().position(|v| v.re <= 0.0) {
                return Err(Error::NonPositiveValue {
                    index: k,
                    value: self.values[k].re,
                });
            }
            return Ok(self.map(|a| Scalar::new(a.re.ln(), 0.0)));
        }
        match &self.owner.spectrum {
            Spectrum::Finite { .. } => Ok(self.map(|a| a.ln())),
            Spectrum::Circle { .. } => topology::circle_log(self),
            Spectrum::Grid(d) => {
                let log = topology::phase_unwrap_log(self, d, &[], tol)?;
                Ok(log.into_element())
            }
        }
    }

    /// Restriction to the spectrum of a sub-instance (grid only).
    pub fn restrict(&self, sub: &Instance) -> Result<Self> {
        let big = self
            .owner
            .domain()
            .ok_or_else(|| Error::scope("restriction needs a grid instance"))?;
        let small = sub
            .domain()
            .ok_or_else(|| Error::scope("restriction needs a grid instance"))?;
        if sub.field != self.owner.field || !small.is_subset_of(big) {
            return Err(Error::NotSubset);
        }
        let values = sub
            .cells()
            .iter()
            .map(|&c| self.values[self.owner.point_of_cell(c).expect("subset")])
            .collect();
        Ok(Element {
            owner: sub.clone(),
            values,
        })
    }

    /// `sup |a - b|`.
    pub fn distance(&self, other: &Element) -> Result<f64> {
        self.check_owner(other)?;
        Ok(sup(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::Bbox;

    fn annulus(h: f64) -> Instance {
        let d = RasterDomain::rasterize_2d(Bbox::square(2.25), h, 2, |x, y| {
            (1.0..=2.0).contains(&x.hypot(y))
        })
        .unwrap();
        AlgebraInstance::grid(Field::Complex, d).unwrap()
    }

    #[test]
    fn norms_do_not_hide_nan() {
        let inst = AlgebraInstance::finite(Field::Complex, 3).unwrap();
        let e = Element::new(
            &inst,
            vec![
                Scalar::new(1.0, 0.0),
                Scalar::new(f64::NAN, 0.0),
                Scalar::new(2.0, 0.0),
            ],
        )
        .unwrap();
        assert!(e.sup_norm().is_nan());
        assert!(e.min_modulus().0.is_nan());
        assert!(e.distance(&Element::one(&inst)).unwrap().is_nan());
        assert!(Tuple::new(vec![e.clone()]).unwrap().sup_norm().is_nan());
    }

    #[test]
    fn finite_product_instance() {
        let a = AlgebraInstance::finite(Field::Real, 3).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(a.kind(), Kind::FiniteProduct);
        assert_eq!(Element::one(&a).sup_norm(), 1.0);
        assert!(matches!(
            AlgebraInstance::finite(Field::Real, 0),
            Err(Error::EmptySpectrum)
        ));
    }

    #[test]
    fn circle_samples_angles() {
        let c = AlgebraInstance::circle(Field::Complex, 1024).unwrap();
        let z = c.coordinate(256);
        assert!((z - Scalar::new(0.0, 1.0)).norm() < 1e-15);
        assert!(AlgebraInstance::circle(Field::Complex, 4).is_err());
    }

    #[test]
    fn grid_instance_counts_mask_cells() {
        let h = 1.0 / 64.0;
        let inst = annulus(h);
        // independent count: enumerate cell centres directly
        let n = (4.5 / h).round() as i64;
        let mut count = 0;
        for j in 0..n {
            for i in 0..n {
                let x = -2.25 + (i as f64 + 0.5) * h;
                let y = -2.25 + (j as f64 + 0.5) * h;
                let r = (x * x + y * y).sqrt();
                if (1.0..=2.0).contains(&r) {
                    count += 1;
                }
            }
        }
        assert_eq!(inst.len(), count);
    }

    #[test]
    fn empty_mask_is_rejected() {
        let d = RasterDomain::rasterize_2d(Bbox::square(1.0), 0.25, 2, |_, _| false).unwrap();
        assert!(matches!(
            AlgebraInstance::grid(Field::Real, d),
            Err(Error::EmptySpectrum)
        ));
    }

    #[test]
    fn invert_componentwise() {
        let a = AlgebraInstance::finite(Field::Real, 3).unwrap();
        let x = Element::from_real(&a, vec![1.0, 2.0, 4.0]).unwrap();
        let inv = x.invert(1e-12).unwrap();
        let want = [1.0, 0.5, 0.25];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(inv.get(k).re, *w);
        }
        let one = Element::one(&a);
        assert_eq!(one.invert(1e-12).unwrap().values(), one.values());
        let z = Element::from_real(&a, vec![1.0, 0.0, 4.0]).unwrap();
        assert!(matches!(
            z.invert(1e-12),
            Err(Error::NotInvertible { index: 1, .. })
        ));
    }

    #[test]
    fn owner_mismatch_is_reported() {
        let a = AlgebraInstance::finite(Field::Real, 3).unwrap();
        let b = AlgebraInstance::finite(Field::Real, 4).unwrap();
        assert!(matches!(
            Element::one(&a).add(&Element::one(&b)),
            Err(Error::OwnerMismatch)
        ));
        // structurally equal instances interoperate
        let c = AlgebraInstance::finite(Field::Real, 3).unwrap();
        assert!(Element::one(&a).add(&Element::one(&c)).is_ok());
    }

    #[test]
    fn real_instances_reject_complex_values() {
        let a = AlgebraInstance::finite(Field::Real, 1).unwrap();
        assert!(Element::new(&a, vec![Scalar::new(0.0, 1.0)]).is_err());
    }

    #[test]
    fn exp_and_log_componentwise() {
        let a = AlgebraInstance::finite(Field::Real, 2).unwrap();
        assert_eq!(Element::zero(&a).exp().values(), Element::one(&a).values());
        let x = Element::from_real(&a, vec![1.0, std::f64::consts::E]).unwrap();
        let l = x.log(1e-12).unwrap();
        assert_eq!(l.get(0).re, 0.0);
        assert!((l.get(1).re - 1.0).abs() < 1e-15);
        let neg = Element::from_real(&a, vec![1.0, -1.0]).unwrap();
        assert!(matches!(
            neg.log(1e-12),
            Err(Error::NonPositiveValue { index: 1, .. })
        ));
    }

    #[test]
    fn circle_log_of_identity_is_obstructed() {
        let c = AlgebraInstance::circle(Field::Complex, 1024).unwrap();
        let z = Element::coordinate(&c);
        match z.log(1e-8) {
            Err(Error::LogObstruction(obs)) => assert_eq!(obs.windings[0].winding, 1),
            other => panic!("expected obstruction, got {other:?}"),
        }
    }

    #[test]
    fn min_modulus_on_annulus() {
        let inst = annulus(1.0 / 64.0);
        let z = Element::coordinate(&inst);
        let g = z.modulus().map(|r| r - 1.5);
        let t = Tuple::new(vec![z, g]).unwrap();
        let (m, _) = t.min_modulus();
        // oracle: minimise sqrt(r^2 + (r - 1.5)^2) over r in [1, 2] by dense scan
        let oracle = (0..=100_000)
            .map(|k| 1.0 + k as f64 / 100_000.0)
            .map(|r| (r * r + (r - 1.5) * (r - 1.5)).sqrt())
            .fold(f64::INFINITY, f64::min);
        assert!((oracle - 1.25f64.sqrt()).abs() < 1e-9);
        // cell centres sit at most half a diagonal inside the unit circle's rim
        assert!(m >= oracle && m - oracle < 1.0 / 64.0, "{m} vs {oracle}");
    }
}
