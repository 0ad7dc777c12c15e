//! Linear pencils `A(x) = Σ x_i A_i` of constant matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, PrimeField};
use crate::matrix::Matrix;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearPencil<F: Field> {
    field: F,
    n: usize,
    rows: usize,
    cols: usize,
    coeffs: Vec<Matrix<F>>,
}

impl<F: Field> LinearPencil<F> {
    pub fn new(field: &F, coeffs: Vec<Matrix<F>>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::Shape("a pencil needs at least one coefficient matrix".into()));
        };
        let (rows, cols) = first.shape();
        if coeffs.iter().any(|m| m.shape() != (rows, cols)) {
            return Err(Error::Shape("coefficient matrices differ in shape".into()));
        }
        Ok(LinearPencil { field: field.clone(), n: coeffs.len() - 1, rows, cols, coeffs })
    }

    pub fn zero(field: &F, n: usize, rows: usize, cols: usize) -> Self {
        let coeffs = vec![Matrix::zeros(field, rows, cols); n + 1];
        LinearPencil { field: field.clone(), n, rows, cols, coeffs }
    }

    /// From a matrix of linear forms given as `entries[r][c][i]`, the coefficient of `x_i`.
    pub fn from_linear_forms(field: &F, n: usize, entries: &[Vec<Vec<F::Elem>>]) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        let mut p = Self::zero(field, n, rows, cols);
        for (r, row) in entries.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape("ragged linear-form matrix".into()));
            }
            for (c, form) in row.iter().enumerate() {
                if form.len() != n + 1 {
                    return Err(Error::Shape(format!("linear form at ({r},{c}) has {} coefficients", form.len())));
                }
                for (i, v) in form.iter().enumerate() {
                    p.coeffs[i].set(r, c, v.clone());
                }
            }
        }
        Ok(p)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn coeffs(&self) -> &[Matrix<F>] {
        &self.coeffs
    }
    pub fn coeff(&self, i: usize) -> &Matrix<F> {
        &self.coeffs[i]
    }

    pub fn eval(&self, point: &[F::Elem]) -> Result<Matrix<F>> {
        if point.len() != self.n + 1 {
            return Err(Error::Shape(format!("point has {} coordinates, expected {}", point.len(), self.n + 1)));
        }
        if point.iter().all(|v| self.field.is_zero(v)) {
            return Err(Error::ZeroPoint);
        }
        let mut m = Matrix::zeros(&self.field, self.rows, self.cols);
        for (c, a) in point.iter().zip(&self.coeffs) {
            m.add_scaled(c, a);
        }
        Ok(m)
    }

    pub fn entry(&self, r: usize, c: usize) -> Poly<F> {
        let form: Vec<F::Elem> = self.coeffs.iter().map(|a| a.get(r, c).clone()).collect();
        Poly::linear(&self.field, &form)
    }

    pub fn transpose(&self) -> Self {
        let coeffs = self.coeffs.iter().map(Matrix::transpose).collect();
        LinearPencil { field: self.field.clone(), n: self.n, rows: self.cols, cols: self.rows, coeffs }
    }

    /// `left · A(x) · right`.
    pub fn transform(&self, left: &Matrix<F>, right: &Matrix<F>) -> Self {
        let coeffs: Vec<Matrix<F>> = self.coeffs.iter().map(|a| left.mul(a).mul(right)).collect();
        LinearPencil { field: self.field.clone(), n: self.n, rows: left.rows(), cols: right.cols(), coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Matrix::is_zero)
    }

    /// Reduction of every coefficient into F_q.
    pub fn reduce_mod(&self, q: u64) -> Result<LinearPencil<PrimeField>> {
        let fq = PrimeField::new(q)?;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let m = a.map_field(&fq, |v| self.field.residue(v, q)).ok_or_else(|| {
                let bad = a.data().iter().find(|v| self.field.residue(v, q).is_none()).expect("failing entry");
                Error::FieldReductionImpossible { value: self.field.format(bad), modulus: q }
            })?;
            coeffs.push(m);
        }
        LinearPencil::new(&fq, coeffs)
    }

    /// Human-readable matrix of linear forms.
    pub fn render(&self) -> String {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.entry(r, c).to_string_with(&self.field)).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        cells
            .iter()
            .map(|row| {
                let body: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                format!("[ {} ]\n", body.join("  "))
            })
            .collect()
    }

    pub fn to_document(&self, provenance: serde_json::Value) -> PencilDocument {
        PencilDocument {
            format_version: PENCIL_FORMAT_VERSION,
            n: self.n,
            rows: self.rows,
            cols: self.cols,
            field: self.field.spec(),
            coefficients: self
                .coeffs
                .iter()
                .map(|a| a.data().iter().map(|v| self.field.format(v)).collect())
                .collect(),
            provenance,
        }
    }
}

pub const PENCIL_FORMAT_VERSION: u32 = 1;

/// Canonical JSON form: `coefficients[i]` is `A_i` in row-major order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PencilDocument {
    pub format_version: u32,
    pub n: usize,
    pub rows: usize,
    pub cols: usize,
    pub field: FieldSpec,
    pub coefficients: Vec<Vec<String>>,
    #[serde(default)]
    pub provenance: serde_json::Value,
}

impl PencilDocument {
    pub fn to_pencil<F: Field>(&self, field: &F) -> Result<LinearPencil<F>> {
        if self.format_version != PENCIL_FORMAT_VERSION {
            return Err(Error::Document(format!("unsupported format_version {}", self.format_version)));
        }
        if self.coefficients.len() != self.n + 1 {
            return Err(Error::Document(format!("expected {} coefficient matrices", self.n + 1)));
        }
        let mut coeffs = Vec::new();
        for arr in &self.coefficients {
            if arr.len() != self.rows * self.cols {
                return Err(Error::Document("coefficient array length disagrees with the shape".into()));
            }
            let data = arr.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>()?;
            coeffs.push(Matrix::from_vec(field, self.rows, self.cols, data)?);
        }
        if coeffs.is_empty() {
            return Err(Error::Document("no coefficients".into()));
        }
        Ok(LinearPencil { field: field.clone(), n: self.n, rows: self.rows, cols: self.cols, coeffs })
    }
}
