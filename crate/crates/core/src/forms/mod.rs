//! Weight functions, the bilinear forms `⟨·,·⟩` and `(·,·)` on the unit
//! circle, residue weights and closed-form norms.
//!
//! Everything here runs on the float backend. Polynomials are usually built
//! exactly and converted with [`LaurentPoly::to_mp`].

mod closed;
mod quadrature;
mod residue;
mod suite;
mod weight;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::qpoch::product_tol_for;
use crate::scalar::{MpComplex, Scalar, DEFAULT_PRECISION, MIN_PRECISION};

pub use closed::{
    constant_term_closed, diagonal_closed, grand_ratio_closed, shift_ratio_closed, DiagonalKind,
};
pub use quadrature::{pair, FormKind, Quadrature};
pub use residue::{residue_contour, residue_weight, ResidueVariant};
pub use suite::{verify_forms, FormsOptions};
pub use weight::{alpha, weight, WeightVariant};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSettings {
    /// Node count of the first level; a power of two, at least 16.
    pub n0: usize,
    /// Convergence threshold relative to the size of the integrand.
    pub tol: f64,
    pub max_doublings: u32,
    /// Truncation tolerance of the infinite products.
    pub product_tol: f64,
    pub prec: u32,
}

impl QuadratureSettings {
    pub fn for_precision(prec: u32) -> Self {
        QuadratureSettings {
            n0: 32,
            tol: 2f64.powf(-0.75 * prec as f64),
            max_doublings: 12,
            product_tol: product_tol_for(prec),
            prec,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n0 < 16 || !self.n0.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "initial node count {} must be a power of two ≥ 16",
                self.n0
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(
                "quadrature tolerance must be positive".into(),
            ));
        }
        if self.max_doublings < 1 {
            return Err(Error::InvalidParameter(
                "at least one doubling is needed".into(),
            ));
        }
        if !(self.product_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "product tolerance must be positive".into(),
            ));
        }
        if self.prec < MIN_PRECISION {
            return Err(Error::InvalidParameter(format!(
                "precision {} is below {MIN_PRECISION} bits",
                self.prec
            )));
        }
        Ok(())
    }
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self::for_precision(DEFAULT_PRECISION)
    }
}

/// A quadrature result.
#[derive(Clone, Debug, PartialEq)]
pub struct FormValue {
    pub value: MpComplex,
    /// `|S_N − S_{N/2}|`.
    pub err: f64,
    pub nodes: usize,
}

impl FormValue {
    pub fn to_json(&self) -> Value {
        json!({ "value": self.value.to_json(), "err": self.err, "nodes": self.nodes })
    }
}
