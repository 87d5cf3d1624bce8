//! Standard planar domains and functions used by the demos and tests.

use std::f64::consts::PI;

use crate::algebra::{AlgebraInstance, Element, Field, Instance, Scalar, Spectrum};
use crate::error::Result;
use crate::raster::{Bbox, RasterDomain};

/// Half-width of the square frame around the fixtures.
pub const FRAME: f64 = 2.25;
pub const MARGIN: usize = 2;

/// The closed annulus `1 <= |z| <= 2`.
pub fn annulus(field: Field, h: f64) -> Result<Instance> {
    let d = RasterDomain::rasterize_2d(Bbox::square(FRAME), h, MARGIN, |x, y| {
        (1.0..=2.0).contains(&x.hypot(y))
    })?;
    AlgebraInstance::grid(field, d)
}

/// The closed disk `|z| <= 2`.
pub fn disk(field: Field, h: f64) -> Result<Instance> {
    let d = RasterDomain::rasterize_2d(Bbox::square(FRAME), h, MARGIN, |x, y| x.hypot(y) <= 2.0)?;
    AlgebraInstance::grid(field, d)
}

/// `|z| - r` on a planar grid, from the cell centres.
pub fn radial(inst: &Instance, r: f64) -> Element {
    let d = inst.domain().expect("grid instance").clone();
    Element::from_fn(inst, |p| {
        let [x, y] = d.center(inst.cell(p));
        Scalar::new(x.hypot(y) - r, 0.0)
    })
}

/// `e^{i k theta}` on the sampled circle.
pub fn circle_power(inst: &Instance, k: i64) -> Element {
    let n = match inst.spectrum() {
        Spectrum::Circle { n } => *n,
        _ => panic!("circle instance expected"),
    };
    Element::from_fn(inst, |p| {
        let theta = 2.0 * PI * ((k * p as i64).rem_euclid(n as i64)) as f64 / n as f64;
        Scalar::from_polar(1.0, theta)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annulus_excludes_centre() {
        let inst = annulus(Field::Complex, 0.125).unwrap();
        let d = inst.domain().unwrap();
        let centre = d.locate([0.0, 0.0]).unwrap();
        assert!(!d.contains(centre));
        let g = radial(&inst, 1.5);
        assert!(g.sup_norm() <= 0.5 + 0.125);
    }
}
