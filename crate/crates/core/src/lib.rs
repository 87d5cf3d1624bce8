//! Decisions and checkable witnesses for reducibility of invertible tuples
//! over concrete commutative Banach algebras: grid-sampled continuous
//! functions on planar or interval domains, finite products `K^m`, and the
//! sampled circle.
//!
//! The pipeline runs from [`raster`] masks through [`topology`] (holes,
//! windings, zero sets) and [`matrices`] (exponential products) to
//! [`reduce`], which returns witnesses that [`cert`] can seal and re-check.

pub mod algebra;
pub mod cert;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod matrices;
pub mod raster;
pub mod reduce;
pub mod svg;
pub mod topology;

pub use algebra::{AlgebraInstance, Element, Field, Instance, Kind, Scalar, Spectrum, Tuple};
pub use cert::{certify, Certificate, CertifyReport, Claim};
pub use error::{Error, Result};
pub use io::{ElementFile, Encoding, InstanceDescriptor, Values};
pub use raster::{Bbox, RasterDomain};
