//! Inputs shared by the benchmarks: the annulus fixture with its zero set,
//! and deterministic tuples and matrices over finite products.

use banach_reduce::fixtures::{annulus, radial};
use banach_reduce::matrices::MatrixOverA;
use banach_reduce::topology::sublevel_zero_set;
use banach_reduce::{AlgebraInstance, Element, Field, Instance, RasterDomain, Scalar, Tuple};

/// The annulus at step `h` with `g = |z| - 1.5` and its zero set.
pub fn annulus_case(h: f64) -> (Instance, Element, RasterDomain) {
    let inst = annulus(Field::Complex, h).expect("annulus");
    let g = radial(&inst, 1.5);
    let z = sublevel_zero_set(&g, 4.0 * h).expect("zero set");
    (inst, g, z)
}

fn wave(k: usize, j: usize) -> Scalar {
    let t = (k * 7 + j * 13) as f64;
    Scalar::new(
        (0.37 * t).sin() + 1.5 * (j == 0) as u8 as f64,
        (0.91 * t).cos(),
    )
}

/// An invertible `(f, g)` over `C^m` with `n` coordinates in `f` and `g`
/// vanishing on every third point.
pub fn finite_row(m: usize, n: usize) -> (Tuple, Element) {
    let inst = AlgebraInstance::finite(Field::Complex, m).expect("instance");
    let f = Tuple::new(
        (0..n)
            .map(|j| Element::from_fn(&inst, |k| wave(k, j)))
            .collect(),
    )
    .expect("tuple");
    let g = Element::from_fn(&inst, |k| {
        if k % 3 == 0 {
            Scalar::new(0.0, 0.0)
        } else {
            wave(k, n)
        }
    });
    (f, g)
}

/// A dense `n x n` matrix over `C^m` with entries of modulus at most `size`.
pub fn finite_matrix(m: usize, n: usize, size: f64) -> MatrixOverA {
    let inst = AlgebraInstance::finite(Field::Complex, m).expect("instance");
    MatrixOverA::from_fn(&inst, n, |i, j| {
        Element::from_fn(&inst, |k| wave(k, i * n + j) * (size / 2.5))
    })
    .expect("matrix")
}
