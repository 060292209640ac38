//! Quiver representations with exact rational matrices.
//!
//! The matrix of an arrow `x: s -> t` has shape `dim(t) x dim(s)`. In JSON a
//! matrix is the row-major array of its entries as `"p/q"` strings; the shape
//! is implied by the dimension vector.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::quiver::{DimVector, Quiver};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRepresentation", into = "RawRepresentation")]
pub struct Representation {
    quiver: Quiver,
    dims: DimVector,
    matrices: BTreeMap<String, Matrix>,
}

#[derive(Serialize, Deserialize)]
struct RawRepresentation {
    quiver: Quiver,
    dims: DimVector,
    matrices: BTreeMap<String, Entries>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct Entries(#[serde(with = "rational::serde_q_vec")] Vec<Rational>);

impl TryFrom<RawRepresentation> for Representation {
    type Error = Error;
    fn try_from(raw: RawRepresentation) -> Result<Self> {
        raw.dims.validate(&raw.quiver)?;
        let mut matrices = BTreeMap::new();
        for (id, Entries(data)) in raw.matrices {
            let a = raw.quiver.arrow(&id)?;
            let m = Matrix::from_data(raw.dims.get(&a.tgt), raw.dims.get(&a.src), data)?;
            matrices.insert(id, m);
        }
        Representation::new(raw.quiver, raw.dims, matrices)
    }
}

impl From<Representation> for RawRepresentation {
    fn from(r: Representation) -> Self {
        RawRepresentation {
            quiver: r.quiver,
            dims: r.dims,
            matrices: r.matrices.into_iter().map(|(k, m)| (k, Entries(m.into_data()))).collect(),
        }
    }
}

impl Representation {
    pub fn new(quiver: Quiver, dims: DimVector, matrices: BTreeMap<String, Matrix>) -> Result<Self> {
        dims.validate(&quiver)?;
        for a in quiver.arrows() {
            let m = matrices
                .get(&a.id)
                .ok_or_else(|| Error::Shape(format!("no matrix for arrow `{}`", a.id)))?;
            let want = (dims.get(&a.tgt), dims.get(&a.src));
            if m.shape() != want {
                return Err(Error::Shape(format!(
                    "arrow `{}` needs {}x{}, got {}x{}",
                    a.id,
                    want.0,
                    want.1,
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if let Some(extra) = matrices.keys().find(|k| quiver.arrow(k).is_err()) {
            return Err(Error::UnknownArrow(extra.clone()));
        }
        Ok(Representation { quiver, dims, matrices })
    }

    pub fn zero(quiver: Quiver, dims: DimVector) -> Result<Self> {
        dims.validate(&quiver)?;
        let matrices = quiver
            .arrows()
            .iter()
            .map(|a| (a.id.clone(), Matrix::zeros(dims.get(&a.tgt), dims.get(&a.src))))
            .collect();
        Representation::new(quiver, dims, matrices)
    }

    /// Random representation with integer entries in `[-bound, bound]`.
    pub fn random<R: Rng>(quiver: Quiver, dims: DimVector, bound: i64, rng: &mut R) -> Result<Self> {
        let mut rep = Representation::zero(quiver, dims)?;
        for m in rep.matrices.values_mut() {
            let (r, c) = m.shape();
            let data = (0..r * c).map(|_| rational::int(rng.gen_range(-bound..=bound))).collect();
            *m = Matrix::from_data(r, c, data)?;
        }
        Ok(rep)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn matrix(&self, arrow: &str) -> Result<&Matrix> {
        self.matrices.get(arrow).ok_or_else(|| Error::UnknownArrow(arrow.into()))
    }

    pub fn matrices(&self) -> &BTreeMap<String, Matrix> {
        &self.matrices
    }

    pub fn set_matrix(&mut self, arrow: &str, m: Matrix) -> Result<()> {
        let a = self.quiver.arrow(arrow)?;
        let want = (self.dims.get(&a.tgt), self.dims.get(&a.src));
        if m.shape() != want {
            return Err(Error::Shape(format!("arrow `{arrow}` needs {}x{}", want.0, want.1)));
        }
        self.matrices.insert(arrow.to_string(), m);
        Ok(())
    }

    /// Base change `M_x -> g_tgt M_x g_src^{-1}`. Vertices missing from
    /// `gauge` (in particular the framing vertex) keep the identity.
    pub fn conjugate(&self, gauge: &BTreeMap<String, Matrix>) -> Result<Representation> {
        let mut inverses = BTreeMap::new();
        for (v, g) in gauge {
            if g.shape() != (self.dims.get(v), self.dims.get(v)) {
                return Err(Error::Shape(format!("gauge at `{v}` has wrong size")));
            }
            let inv = g.inverse().ok_or_else(|| Error::InvalidParameter(format!("gauge at `{v}` is singular")))?;
            inverses.insert(v.clone(), inv);
        }
        let mut out = self.clone();
        for a in self.quiver.arrows() {
            let mut m = self.matrices[&a.id].clone();
            if let Some(inv) = inverses.get(&a.src) {
                m = &m * inv;
            }
            if let Some(g) = gauge.get(&a.tgt) {
                m = g * &m;
            }
            out.matrices.insert(a.id.clone(), m);
        }
        Ok(out)
    }
}
