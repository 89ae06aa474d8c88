//! JSON symbol format:
//! `{"m": 2, "n": 2, "coeffs": [{"k": -1, "re": [[..]], "im": [[..]]}]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::MatrixLaurentPoly;
use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};

/// A complex matrix as separate real and imaginary row-major tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMat) -> Self {
        let re = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect()).collect();
        let im = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect()).collect();
        Self { re, im }
    }

    /// Parses into a `rows x cols` matrix; an empty `im` means zero imaginary part.
    pub fn to_matrix(&self, rows: usize, cols: usize, what: &str) -> Result<CMat> {
        let bad = |msg: String| Error::InvalidInput(format!("{what}: {msg}"));
        if self.re.len() != rows || self.re.iter().any(|r| r.len() != cols) {
            return Err(bad(format!("\"re\" must be {rows}x{cols}")));
        }
        let has_im = !self.im.is_empty();
        if has_im && (self.im.len() != rows || self.im.iter().any(|r| r.len() != cols)) {
            return Err(bad(format!("\"im\" must be {rows}x{cols}")));
        }
        let mut m = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let im = if has_im { self.im[i][j] } else { 0.0 };
                let (re, im) = (self.re[i][j], im);
                if !re.is_finite() || !im.is_finite() {
                    return Err(bad(format!("non-finite entry at ({i}, {j})")));
                }
                m[(i, j)] = C64::new(re, im);
            }
        }
        Ok(m)
    }

    /// Shape-agnostic parse (shape taken from `re`).
    pub fn to_matrix_any(&self, what: &str) -> Result<CMat> {
        let rows = self.re.len();
        let cols = self.re.first().map_or(0, Vec::len);
        self.to_matrix(rows, cols, what)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub k: i32,
    #[serde(flatten)]
    pub value: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolFile {
    pub m: usize,
    pub n: usize,
    pub coeffs: Vec<CoeffJson>,
}

impl SymbolFile {
    pub fn from_poly(p: &MatrixLaurentPoly) -> Self {
        let coeffs = p.coeffs().map(|(k, c)| CoeffJson { k, value: MatrixJson::from_matrix(c) }).collect();
        Self { m: p.rows(), n: p.cols(), coeffs }
    }

    pub fn to_poly(&self) -> Result<MatrixLaurentPoly> {
        let mut cs = Vec::with_capacity(self.coeffs.len());
        for (idx, c) in self.coeffs.iter().enumerate() {
            let what = format!("coeffs[{idx}] (k = {})", c.k);
            cs.push((c.k, c.value.to_matrix(self.m, self.n, &what)?));
        }
        MatrixLaurentPoly::from_coeffs(self.m, self.n, cs)
    }
}

impl MatrixLaurentPoly {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str::<SymbolFile>(s)?.to_poly()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&SymbolFile::from_poly(self)).expect("symbol serializes")
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let s = serde_json::to_string_pretty(&SymbolFile::from_poly(self))?;
        std::fs::write(path, s)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_format() {
        let s = r#"{"m":1,"n":2,"coeffs":[{"k":-1,"re":[[1.0,0.0]],"im":[[0.0,2.0]]},{"k":0,"re":[[0.5,0.0]]}]}"#;
        let p = MatrixLaurentPoly::from_json_str(s).unwrap();
        assert_eq!((p.rows(), p.cols()), (1, 2));
        assert_eq!(p.coeff(-1).unwrap()[(0, 1)], C64::new(0.0, 2.0));
        assert_eq!(p.coeff(0).unwrap()[(0, 0)], C64::new(0.5, 0.0));
    }

    #[test]
    fn rejects_bad_shapes_and_garbage() {
        let s = r#"{"m":2,"n":2,"coeffs":[{"k":0,"re":[[1.0,0.0]],"im":[[0.0,0.0]]}]}"#;
        assert!(matches!(MatrixLaurentPoly::from_json_str(s), Err(Error::InvalidInput(_))));
        assert!(matches!(MatrixLaurentPoly::from_json_str("not json"), Err(Error::Json(_))));
        let s = r#"{"m":0,"n":2,"coeffs":[]}"#;
        assert!(MatrixLaurentPoly::from_json_str(s).is_err());
    }
}
