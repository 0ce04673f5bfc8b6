//! JSON tuple files.
//!
//! ```json
//! {"p": 2, "m": 1, "r": 2, "degrees": [1, 1], "forms": [[1, 0, 0], [0, 1, 0]]}
//! ```
//!
//! `forms[i]` lists the coefficients of form `i` in graded-lex order, each
//! an element encoding in `0..q`. `modulus` is optional; when present it
//! must equal the modulus the library picks for `F_{p^m}`.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::GaloisField;
use super::form::{monomial_count, Form, TupleInstance};
use crate::error::{require, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleFile {
    pub p: u64,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    pub r: u32,
    pub degrees: Vec<u32>,
    pub forms: Vec<Vec<u64>>,
}

impl TupleFile {
    pub fn from_instance(tuple: &TupleInstance) -> Self {
        let field = tuple.field();
        TupleFile {
            p: field.p() as u64,
            m: field.m(),
            modulus: Some(field.modulus().to_vec()),
            r: tuple.r(),
            degrees: tuple.degrees(),
            forms: tuple.forms().iter().map(|f| f.coeffs().iter().map(|&c| c as u64).collect()).collect(),
        }
    }

    pub fn to_instance(&self) -> Result<TupleInstance> {
        let field = GaloisField::new(self.p, self.m)?;
        if let Some(modulus) = &self.modulus {
            require(modulus.as_slice() == field.modulus(), || {
                format!("modulus {modulus:?} differs from the library modulus {:?}", field.modulus())
            })?;
        }
        require(self.forms.len() == self.degrees.len(), || {
            format!("{} forms listed for {} degrees", self.forms.len(), self.degrees.len())
        })?;
        let q = field.q() as u64;
        let forms = self
            .degrees
            .iter()
            .zip(&self.forms)
            .enumerate()
            .map(|(i, (&d, coeffs))| {
                let n = monomial_count(self.r as usize + 1, d);
                require(coeffs.len() == n, || {
                    format!("form {i} has {} coefficients, degree {d} needs {n}", coeffs.len())
                })?;
                if let Some(c) = coeffs.iter().find(|&&c| c >= q) {
                    return Err(Error::Input(format!("form {i}: coefficient {c} is not an element of F_{q}")));
                }
                Form::from_coeffs(self.r, d, coeffs.iter().map(|&c| c as u32).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        TupleInstance::new(Arc::new(field), forms)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}
