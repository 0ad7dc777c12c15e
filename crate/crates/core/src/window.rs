//! Graded modules carried on a finite degree range `[lo, hi]`.
//!
//! A window stores `dim M_d` and the multiplication maps `X_{i,d}: M_d -> M_{d+1}`
//! acting on column vectors. Degrees below `lo` are treated as zero, so a
//! window always describes the truncation `M_{>=lo}` as far as degree `hi`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::free::{GradedFreeMap, GradedFreeModule};
use crate::matrix::{Matrix, Subquotient};
use crate::poly::QPoly;

#[derive(Clone, Debug, PartialEq)]
pub struct GradedModuleWindow<F: Field> {
    field: F,
    n: usize,
    lo: i64,
    hi: i64,
    dims: Vec<usize>,
    actions: Vec<Vec<Matrix<F>>>,
}

/// Anything that carries a degreewise action of the variables.
pub trait GradedAction<F: Field> {
    fn dim_at(&self, d: i64) -> usize;
    /// Multiplication by `x_var` on the columns of `v`, vectors of degree `d`.
    fn act_on(&self, var: usize, d: i64, v: &Matrix<F>) -> Matrix<F>;
}

pub(crate) struct FreeAction<'a, F: Field> {
    pub field: &'a F,
    pub n: usize,
    pub module: &'a GradedFreeModule,
}

impl<F: Field> GradedAction<F> for FreeAction<'_, F> {
    fn dim_at(&self, d: i64) -> usize {
        self.module.dim(self.n, d)
    }
    fn act_on(&self, var: usize, d: i64, v: &Matrix<F>) -> Matrix<F> {
        self.module.act(self.field, self.n, var, d, v)
    }
}

impl<F: Field> GradedAction<F> for GradedModuleWindow<F> {
    fn dim_at(&self, d: i64) -> usize {
        self.dim(d)
    }
    fn act_on(&self, var: usize, d: i64, v: &Matrix<F>) -> Matrix<F> {
        self.action(var, d).mul(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    pub lo: i64,
    pub values: Vec<usize>,
    pub polynomial: QPoly,
    pub module_dimension: usize,
    pub module_degree: BigRational,
    pub artinian: bool,
}

impl HilbertData {
    /// Rank of the associated sheaf, read off the leading coefficient.
    pub fn sheaf_rank(&self, n: usize) -> i64 {
        if self.polynomial.degree() != Some(n) {
            return 0;
        }
        let fact: i64 = (1..=n as i64).product();
        (self.polynomial.leading() * BigRational::from_integer(BigInt::from(fact)))
            .to_integer()
            .to_i64()
            .unwrap_or(0)
    }
}

impl<F: Field> GradedModuleWindow<F> {
    /// Validated constructor; `actions[d - lo][i]` is `X_{i,d}` for `lo <= d < hi`.
    pub fn new(field: &F, n: usize, lo: i64, hi: i64, dims: Vec<usize>, actions: Vec<Vec<Matrix<F>>>) -> Result<Self> {
        let w = Self::new_unchecked(field, n, lo, hi, dims, actions)?;
        w.check_commutativity()?;
        Ok(w)
    }

    pub(crate) fn new_unchecked(
        field: &F,
        n: usize,
        lo: i64,
        hi: i64,
        dims: Vec<usize>,
        actions: Vec<Vec<Matrix<F>>>,
    ) -> Result<Self> {
        if hi < lo {
            return Err(Error::Shape(format!("empty window [{lo}, {hi}]")));
        }
        let len = (hi - lo + 1) as usize;
        if dims.len() != len || actions.len() != len - 1 {
            return Err(Error::Shape("dims/actions length does not match the window".into()));
        }
        for (k, per_var) in actions.iter().enumerate() {
            if per_var.len() != n + 1 {
                return Err(Error::Shape(format!("expected {} action maps in degree {}", n + 1, lo + k as i64)));
            }
            for x in per_var {
                if x.shape() != (dims[k + 1], dims[k]) {
                    return Err(Error::Shape(format!("action in degree {} has shape {:?}", lo + k as i64, x.shape())));
                }
            }
        }
        Ok(GradedModuleWindow { field: field.clone(), n, lo, hi, dims, actions })
    }

    pub fn check_commutativity(&self) -> Result<()> {
        for k in 0..self.actions.len().saturating_sub(1) {
            for i in 0..=self.n {
                for j in (i + 1)..=self.n {
                    let a = self.actions[k + 1][j].mul(&self.actions[k][i]);
                    let b = self.actions[k + 1][i].mul(&self.actions[k][j]);
                    if a != b {
                        return Err(Error::NotCommutative(format!(
                            "x{i}, x{j} in degree {}",
                            self.lo + k as i64
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The zero module on `[lo, hi]`.
    pub fn zero(field: &F, n: usize, lo: i64, hi: i64) -> Self {
        let len = (hi - lo + 1) as usize;
        let actions = vec![vec![Matrix::zeros(field, 0, 0); n + 1]; len - 1];
        GradedModuleWindow { field: field.clone(), n, lo, hi, dims: vec![0; len], actions }
    }

    /// Window of `⊕ R(-q_i)`.
    pub fn free(field: &F, n: usize, twists: &[i64], lo: i64, hi: i64) -> Self {
        let module = GradedFreeModule::new(twists.to_vec());
        let map = GradedFreeMap::zero(field, n, GradedFreeModule::new(vec![]), module);
        Self::from_presentation(&map, lo, hi).expect("free module window")
    }

    /// Cokernel of a presentation, computed degree by degree.
    pub fn from_presentation(pres: &GradedFreeMap<F>, lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(Error::Shape(format!("empty window [{lo}, {hi}]")));
        }
        if let Some(&q) = pres.source.twists.iter().find(|&&q| q > hi) {
            return Err(Error::DegreeWindowTooSmall(format!("relation in degree {q} lies above hi = {hi}")));
        }
        let f = &pres.field;
        let ambient = FreeAction { field: f, n: pres.n, module: &pres.target };
        let parts: Vec<Subquotient<F>> = (lo..=hi)
            .map(|d| {
                let dim = pres.target.dim(pres.n, d);
                Subquotient::new(&pres.degree_matrix(d), &Matrix::identity(f, dim))
            })
            .collect();
        Ok(Self::from_subquotients(f, pres.n, lo, &ambient, &parts))
    }

    /// Assembles a window from degreewise subquotients of an ambient module
    /// (one per degree, starting at `lo`). The subquotients must be stable
    /// under the ambient action.
    pub fn from_subquotients(field: &F, n: usize, lo: i64, ambient: &impl GradedAction<F>, parts: &[Subquotient<F>]) -> Self {
        let hi = lo + parts.len() as i64 - 1;
        let dims = parts.iter().map(Subquotient::dim).collect();
        let actions = (0..parts.len() - 1)
            .map(|k| {
                let d = lo + k as i64;
                (0..=n)
                    .map(|i| {
                        if parts[k].dim() == 0 || parts[k + 1].dim() == 0 {
                            return Matrix::zeros(field, parts[k + 1].dim(), parts[k].dim());
                        }
                        let moved = ambient.act_on(i, d, &parts[k].basis);
                        parts[k + 1].coords.mul(&moved)
                    })
                    .collect()
            })
            .collect();
        GradedModuleWindow { field: field.clone(), n, lo, hi, dims, actions }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn lo(&self) -> i64 {
        self.lo
    }
    pub fn hi(&self) -> i64 {
        self.hi
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `dim M_d`, zero outside the window.
    pub fn dim(&self, d: i64) -> usize {
        if d < self.lo || d > self.hi {
            0
        } else {
            self.dims[(d - self.lo) as usize]
        }
    }

    /// `X_{i,d}`; a zero matrix when either side lies outside the window.
    pub fn action(&self, i: usize, d: i64) -> Matrix<F> {
        if d >= self.lo && d < self.hi {
            self.actions[(d - self.lo) as usize][i].clone()
        } else {
            Matrix::zeros(&self.field, self.dim(d + 1), self.dim(d))
        }
    }


    pub fn truncate(&self, m: i64) -> Result<Self> {
        if m < self.lo || m > self.hi {
            return Err(Error::OutOfRange(m));
        }
        let k = (m - self.lo) as usize;
        Ok(GradedModuleWindow {
            field: self.field.clone(),
            n: self.n,
            lo: m,
            hi: self.hi,
            dims: self.dims[k..].to_vec(),
            actions: self.actions[k..].to_vec(),
        })
    }

    /// Restricts the upper end of the window.
    pub fn restrict_hi(&self, hi: i64) -> Result<Self> {
        if hi < self.lo || hi > self.hi {
            return Err(Error::OutOfRange(hi));
        }
        let len = (hi - self.lo + 1) as usize;
        Ok(GradedModuleWindow {
            field: self.field.clone(),
            n: self.n,
            lo: self.lo,
            hi,
            dims: self.dims[..len].to_vec(),
            actions: self.actions[..len - 1].to_vec(),
        })
    }

    /// Extends the window upward with zero components; only meaningful
    /// for modules known to vanish above `hi`.
    pub fn pad_zero(&self, hi: i64) -> Self {
        if hi <= self.hi {
            return self.clone();
        }
        let dims: Vec<usize> = (self.lo..=hi).map(|d| self.dim(d)).collect();
        let actions = (self.lo..hi).map(|d| (0..=self.n).map(|v| self.action(v, d)).collect()).collect();
        GradedModuleWindow { field: self.field.clone(), n: self.n, lo: self.lo, hi, dims, actions }
    }

    /// `M(q)`, with `M(q)_p = M_{p+q}`.
    pub fn shift(&self, q: i64) -> Self {
        let mut w = self.clone();
        w.lo -= q;
        w.hi -= q;
        w
    }

    /// Direct sum over the intersection of the two windows.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::WindowMismatch(format!("n = {} vs n = {}", self.n, other.n)));
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi.min(other.hi);
        if hi < self.lo.max(other.lo) {
            return Err(Error::WindowMismatch("windows do not overlap".into()));
        }
        let dims = (lo..=hi).map(|d| self.dim(d) + other.dim(d)).collect();
        let actions = (lo..hi)
            .map(|d| (0..=self.n).map(|i| self.action(i, d).block_diag(&other.action(i, d))).collect())
            .collect();
        Ok(GradedModuleWindow { field: self.field.clone(), n: self.n, lo, hi, dims, actions })
    }

    /// Lowest degree with a nonzero component.
    pub fn first_nonzero(&self) -> Option<i64> {
        (self.lo..=self.hi).find(|&d| self.dim(d) > 0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn hilbert_data(&self) -> Result<HilbertData> {
        let need = self.n as i64 + 2;
        if self.hi - self.lo + 1 < need {
            return Err(Error::WindowTooShort(format!(
                "Hilbert polynomial needs {need} degrees, window has {}",
                self.hi - self.lo + 1
            )));
        }
        let pts: Vec<(i64, BigRational)> = (self.hi - need + 1..=self.hi)
            .map(|d| (d, BigRational::from_integer(BigInt::from(self.dim(d)))))
            .collect();
        let polynomial = QPoly::interpolate(&pts);
        let top_zero = pts.iter().all(|(_, v)| v.is_zero());
        let (module_dimension, module_degree) = match polynomial.degree() {
            None => (0, BigRational::from_integer(BigInt::from(self.total_dim()))),
            Some(k) => {
                let fact: i64 = (1..=k as i64).product();
                (k + 1, polynomial.leading() * BigRational::from_integer(BigInt::from(fact)))
            }
        };
        Ok(HilbertData {
            lo: self.lo,
            values: self.dims.clone(),
            artinian: polynomial.is_zero() && top_zero,
            polynomial,
            module_dimension,
            module_degree,
        })
    }

    pub fn to_document(&self) -> WindowDocument {
        let f = &self.field;
        WindowDocument {
            format_version: FORMAT_VERSION,
            field: f.spec(),
            n: self.n,
            lo: self.lo,
            hi: self.hi,
            dims: self.dims.clone(),
            actions: self
                .actions
                .iter()
                .map(|per_var| {
                    per_var
                        .iter()
                        .map(|m| (0..m.rows()).map(|r| m.row(r).iter().map(|v| f.format(v)).collect()).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

pub const FORMAT_VERSION: u32 = 1;

/// JSON form of a window: action entries are exact strings, indexed
/// `[degree - lo][variable][row][column]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowDocument {
    pub format_version: u32,
    pub field: FieldSpec,
    pub n: usize,
    pub lo: i64,
    pub hi: i64,
    pub dims: Vec<usize>,
    pub actions: Vec<Vec<Vec<Vec<String>>>>,
}

impl WindowDocument {
    pub fn to_window<F: Field>(&self, field: &F) -> Result<GradedModuleWindow<F>> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Document(format!("unsupported format_version {}", self.format_version)));
        }
        let actions = self
            .actions
            .iter()
            .enumerate()
            .map(|(k, per_var)| {
                per_var
                    .iter()
                    .map(|rows| {
                        let cols = self.dims.get(k).copied().unwrap_or(0);
                        let data = rows
                            .iter()
                            .map(|r| r.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>())
                            .collect::<Result<Vec<_>>>()?;
                        let flat: Vec<F::Elem> = data.into_iter().flatten().collect();
                        Matrix::from_vec(field, rows.len(), cols, flat)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GradedModuleWindow::new(field, self.n, self.lo, self.hi, self.dims.clone(), actions)
    }
}
