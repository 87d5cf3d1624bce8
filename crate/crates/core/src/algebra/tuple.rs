use super::{default_tol, AlgebraInstance, Element, Instance, Scalar};
use crate::error::{Error, Result};

/// An ordered tuple of elements sharing one owner.
#[derive(Debug, Clone)]
pub struct Tuple {
    coords: Vec<Element>,
}

impl Tuple {
    pub fn new(coords: Vec<Element>) -> Result<Self> {
        let first = coords
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty tuple".into()))?;
        for c in &coords[1..] {
            first.check_owner(c)?;
        }
        Ok(Tuple { coords })
    }

    pub fn zeros(owner: &Instance, n: usize) -> Self {
        Tuple {
            coords: (0..n).map(|_| Element::zero(owner)).collect(),
        }
    }

    /// The unit vector `e_j` (zero-based).
    pub fn unit(owner: &Instance, n: usize, j: usize) -> Self {
        let mut t = Self::zeros(owner, n);
        t.coords[j] = Element::one(owner);
        t
    }

    pub fn owner(&self) -> &Instance {
        self.coords[0].owner()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Element] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Element> {
        self.coords
    }

    pub fn get(&self, j: usize) -> &Element {
        &self.coords[j]
    }

    /// Appends one more coordinate, e.g. to form `(f, g)`.
    pub fn push(&self, e: Element) -> Result<Self> {
        self.coords[0].check_owner(&e)?;
        let mut coords = self.coords.clone();
        coords.push(e);
        Ok(Tuple { coords })
    }

    /// The values of the tuple at a spectrum point.
    pub fn at(&self, point: usize) -> Vec<Scalar> {
        self.coords.iter().map(|c| c.get(point)).collect()
    }

    /// Pointwise Euclidean norm `|f|(p) = sqrt(sum |f_j(p)|^2)`.
    pub fn pointwise_norm(&self) -> Vec<f64> {
        let n = self.owner().len();
        (0..n)
            .map(|k| {
                self.coords
                    .iter()
                    .map(|c| c.get(k).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }

    pub fn norm_element(&self) -> Element {
        let norms = self.pointwise_norm();
        Element::from_fn(self.owner(), |k| Scalar::new(norms[k], 0.0))
    }

    /// `min_p |f|(p)` and the point attaining it.
    pub fn min_modulus(&self) -> (f64, usize) {
        let mut best = (f64::INFINITY, 0);
        for (k, m) in self.pointwise_norm().into_iter().enumerate() {
            if m.is_nan() {
                return (m, k);
            }
            if m < best.0 {
                best = (m, k);
            }
        }
        best
    }

    pub fn sup_norm(&self) -> f64 {
        super::sup(self.pointwise_norm())
    }

    pub fn default_tol(&self) -> f64 {
        default_tol(self.sup_norm())
    }

    /// Refuses tuples whose minimum modulus does not clear `tol`.
    pub fn check_invertible(&self, tol: f64) -> Result<()> {
        let (min, index) = self.min_modulus();
        if min > tol {
            Ok(())
        } else {
            Err(Error::NotInvertibleTuple { min, index })
        }
    }

    pub fn add(&self, other: &Tuple) -> Result<Self> {
        self.check_len(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(Tuple { coords })
    }

    pub fn sub(&self, other: &Tuple) -> Result<Self> {
        self.check_len(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<_>>()?;
        Ok(Tuple { coords })
    }

    /// Multiplies every coordinate by the element `g`.
    pub fn scale_by(&self, g: &Element) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .map(|a| a.mul(g))
            .collect::<Result<_>>()?;
        Ok(Tuple { coords })
    }

    /// `f + g x`.
    pub fn add_scaled(&self, g: &Element, x: &Tuple) -> Result<Self> {
        self.add(&x.scale_by(g)?)
    }

    /// Bilinear pairing `<f, x> = sum f_j x_j` (no conjugation).
    pub fn dot(&self, other: &Tuple) -> Result<Element> {
        self.check_len(other)?;
        let mut acc = Element::zero(self.owner());
        for (a, b) in self.coords.iter().zip(&other.coords) {
            acc = acc.add(&a.mul(b)?)?;
        }
        Ok(acc)
    }

    /// `sup_p |f(p) - g(p)|` with the pointwise Euclidean norm.
    pub fn distance(&self, other: &Tuple) -> Result<f64> {
        self.sub(other).map(|d| d.sup_norm())
    }

    /// Coordinates permuted: result_j = self_{perm[j]}.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::DimensionMismatch("permutation length".into()));
        }
        Ok(Tuple {
            coords: perm.iter().map(|&p| self.coords[p].clone()).collect(),
        })
    }

    pub fn same_owner(&self, e: &Element) -> bool {
        AlgebraInstance::same(self.owner(), e.owner())
    }

    fn check_len(&self, other: &Tuple) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "tuples of length {} and {}",
                self.len(),
                other.len()
            )));
        }
        self.coords[0].check_owner(&other.coords[0])
    }
}
