//! JSON forms of instances, elements, tuples and matrices, and the element
//! file format (header plus row-major text or little-endian `f64` payload).

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraInstance, Element, Field, Instance, Kind, Scalar, Spectrum, Tuple};
use crate::error::{Error, Result};
use crate::matrices::MatrixOverA;
use crate::raster::{Bbox, MaskFile, RasterDomain};

/// Everything needed to rebuild an algebra instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceDescriptor {
    GridFunction {
        field: Field,
        mask: MaskFile,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        bsr1_connected: bool,
    },
    FiniteProduct {
        field: Field,
        m: usize,
    },
    Circle {
        field: Field,
        n: usize,
    },
}

impl InstanceDescriptor {
    pub fn of(inst: &Instance) -> Self {
        let field = inst.field();
        match inst.spectrum() {
            Spectrum::Grid(d) => InstanceDescriptor::GridFunction {
                field,
                mask: d.to_file(),
                bsr1_connected: inst.is_bsr1_connected(),
            },
            Spectrum::Finite { m } => InstanceDescriptor::FiniteProduct { field, m: *m },
            Spectrum::Circle { n } => InstanceDescriptor::Circle { field, n: *n },
        }
    }

    pub fn build(&self) -> Result<Instance> {
        match self {
            InstanceDescriptor::GridFunction {
                field,
                mask,
                bsr1_connected,
            } => {
                let d = RasterDomain::from_file(mask)?;
                if *bsr1_connected {
                    AlgebraInstance::grid_flagged_bsr1(*field, d)
                } else {
                    AlgebraInstance::grid(*field, d)
                }
            }
            InstanceDescriptor::FiniteProduct { field, m } => AlgebraInstance::finite(*field, *m),
            InstanceDescriptor::Circle { field, n } => AlgebraInstance::circle(*field, *n),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            InstanceDescriptor::GridFunction { field, .. }
            | InstanceDescriptor::FiniteProduct { field, .. }
            | InstanceDescriptor::Circle { field, .. } => *field,
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            InstanceDescriptor::GridFunction { .. } => Kind::GridFunction,
            InstanceDescriptor::FiniteProduct { .. } => Kind::FiniteProduct,
            InstanceDescriptor::Circle { .. } => Kind::Circle,
        }
    }
}

/// Values at the spectrum points, real numbers or `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Values {
    Real(Vec<f64>),
    Complex(Vec<[f64; 2]>),
}

impl Values {
    pub fn of(e: &Element) -> Self {
        if e.owner().field() == Field::Real {
            Values::Real(e.values().iter().map(|v| v.re).collect())
        } else {
            Values::Complex(e.values().iter().map(|v| [v.re, v.im]).collect())
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Values::Real(v) => v.len(),
            Values::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn scalars(&self) -> Vec<Scalar> {
        match self {
            Values::Real(v) => v.iter().map(|&r| Scalar::new(r, 0.0)).collect(),
            Values::Complex(v) => v.iter().map(|&[r, i]| Scalar::new(r, i)).collect(),
        }
    }

    pub fn to_element(&self, owner: &Instance) -> Result<Element> {
        Element::new(owner, self.scalars())
    }
}

pub fn tuple_values(t: &Tuple) -> Vec<Values> {
    t.coords().iter().map(Values::of).collect()
}

pub fn tuple_from_values(owner: &Instance, values: &[Values]) -> Result<Tuple> {
    Tuple::new(
        values
            .iter()
            .map(|v| v.to_element(owner))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// A matrix over the algebra as `n * n` row-major entry arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixValues {
    pub n: usize,
    pub entries: Vec<Values>,
}

impl MatrixValues {
    pub fn of(m: &MatrixOverA) -> Self {
        MatrixValues {
            n: m.n(),
            entries: m.entries().iter().map(Values::of).collect(),
        }
    }

    pub fn to_matrix(&self, owner: &Instance) -> Result<MatrixOverA> {
        let entries = self
            .entries
            .iter()
            .map(|v| v.to_element(owner))
            .collect::<Result<Vec<_>>>()?;
        MatrixOverA::new(owner, self.n, entries)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Encoding {
    #[serde(rename = "text")]
    Text,
    #[serde(rename = "f64le-base64")]
    Binary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementData {
    Text(Values),
    Binary(String),
}

/// An element on disk. Grid elements cover the whole `ny x nx` grid in
/// row-major order with zeros outside the mask; complex values are stored
/// as `(re, im)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementFile {
    pub instance: InstanceDescriptor,
    pub shape: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bbox: Option<Bbox>,
    pub encoding: Encoding,
    pub data: ElementData,
}

impl ElementFile {
    pub fn encode(e: &Element, encoding: Encoding) -> Self {
        let inst = e.owner();
        let (shape, h, bbox, full) = match inst.spectrum() {
            Spectrum::Grid(d) => {
                let mut full = vec![Scalar::new(0.0, 0.0); d.len()];
                for (p, v) in e.values().iter().enumerate() {
                    full[inst.cell(p)] = *v;
                }
                let (nx, ny) = (d.nx(), d.ny());
                let shape = if ny == 1 { vec![nx] } else { vec![ny, nx] };
                (shape, Some(d.h()), Some(d.bbox()), full)
            }
            _ => (vec![e.len()], None, None, e.values().to_vec()),
        };
        let real = inst.field() == Field::Real;
        let data = match encoding {
            Encoding::Text => ElementData::Text(if real {
                Values::Real(full.iter().map(|v| v.re).collect())
            } else {
                Values::Complex(full.iter().map(|v| [v.re, v.im]).collect())
            }),
            Encoding::Binary => {
                let mut bytes = Vec::with_capacity(full.len() * if real { 8 } else { 16 });
                for v in &full {
                    bytes.extend_from_slice(&v.re.to_le_bytes());
                    if !real {
                        bytes.extend_from_slice(&v.im.to_le_bytes());
                    }
                }
                ElementData::Binary(STANDARD.encode(bytes))
            }
        };
        ElementFile {
            instance: InstanceDescriptor::of(inst),
            shape,
            h,
            bbox,
            encoding,
            data,
        }
    }

    /// Rebuilds the element on a fresh instance.
    pub fn decode(&self) -> Result<Element> {
        let inst = self.instance.build()?;
        self.decode_on(&inst)
    }

    /// Reads the values onto an existing instance, which must match the
    /// header.
    pub fn decode_on(&self, inst: &Instance) -> Result<Element> {
        if InstanceDescriptor::of(inst) != self.instance {
            return Err(Error::InvalidDescriptor(
                "element file belongs to a different instance".into(),
            ));
        }
        let total: usize = self.shape.iter().product();
        let real = self.instance.field() == Field::Real;
        let full: Vec<Scalar> = match (&self.encoding, &self.data) {
            (Encoding::Text, ElementData::Text(v)) => v.scalars(),
            (Encoding::Binary, ElementData::Binary(s)) => {
                let bytes = STANDARD
                    .decode(s)
                    .map_err(|e| Error::Serialization(format!("base64 payload: {e}")))?;
                let width = if real { 8 } else { 16 };
                if bytes.len() % width != 0 {
                    return Err(Error::Serialization(format!(
                        "payload of {} bytes is not a multiple of {width}",
                        bytes.len()
                    )));
                }
                bytes
                    .chunks_exact(width)
                    .map(|c| {
                        let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
                        let im = if real {
                            0.0
                        } else {
                            f64::from_le_bytes(c[8..].try_into().expect("8 bytes"))
                        };
                        Scalar::new(re, im)
                    })
                    .collect()
            }
            _ => {
                return Err(Error::Serialization(
                    "payload does not match the declared encoding".into(),
                ))
            }
        };
        if full.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "{} values for shape {:?}",
                full.len(),
                self.shape
            )));
        }
        let values = match inst.spectrum() {
            Spectrum::Grid(_) => inst.cells().iter().map(|&c| full[c]).collect(),
            _ => full,
        };
        Element::new(inst, values)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
