//! Graded free modules `⊕ R(-q_i)` and maps between them given by matrices
//! of homogeneous polynomials.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::poly::{basis_table, ring_dim, Monomial, Poly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedFreeModule {
    pub twists: Vec<i64>,
}

impl GradedFreeModule {
    pub fn new(twists: Vec<i64>) -> Self {
        GradedFreeModule { twists }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn dim(&self, n: usize, d: i64) -> usize {
        self.twists.iter().map(|&q| ring_dim(n, d - q)).sum()
    }

    /// Start of each summand's block in degree `d`.
    pub fn offsets(&self, n: usize, d: i64) -> Vec<usize> {
        let mut acc = 0;
        self.twists
            .iter()
            .map(|&q| {
                let o = acc;
                acc += ring_dim(n, d - q);
                o
            })
            .collect()
    }

    /// Sorted twists with multiplicities, e.g. `[(1, 2), (2, 4)]`.
    pub fn twist_counts(&self) -> Vec<(i64, usize)> {
        let mut t = self.twists.clone();
        t.sort_unstable();
        let mut out: Vec<(i64, usize)> = Vec::new();
        for q in t {
            match out.last_mut() {
                Some((v, c)) if *v == q => *c += 1,
                _ => out.push((q, 1)),
            }
        }
        out
    }

    /// Multiplication by `x_var` applied to the columns of `v` (vectors in degree `d`).
    pub fn act<F: Field>(&self, field: &F, n: usize, var: usize, d: i64, v: &Matrix<F>) -> Matrix<F> {
        let src = self.offsets(n, d);
        let dst = self.offsets(n, d + 1);
        let mut out = Matrix::zeros(field, self.dim(n, d + 1), v.cols());
        for (j, &q) in self.twists.iter().enumerate() {
            let e = d - q;
            if e < 0 {
                continue;
            }
            let table = basis_table(n, e as usize);
            for (k, &t) in table.times[var].iter().enumerate() {
                for c in 0..v.cols() {
                    let val = v.get(src[j] + k, c);
                    if !field.is_zero(val) {
                        out.set(dst[j] + t, c, val.clone());
                    }
                }
            }
        }
        out
    }

    /// Locates the basis element with the given index in degree `d`.
    pub fn locate(&self, n: usize, d: i64, idx: usize) -> (usize, Monomial) {
        let offs = self.offsets(n, d);
        for j in (0..self.twists.len()).rev() {
            if idx >= offs[j] && ring_dim(n, d - self.twists[j]) > idx - offs[j] {
                let t = basis_table(n, (d - self.twists[j]) as usize);
                return (j, t.monomials[idx - offs[j]].clone());
            }
        }
        panic!("index {idx} out of range in degree {d}");
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradedFreeMap<F: Field> {
    pub field: F,
    pub n: usize,
    pub source: GradedFreeModule,
    pub target: GradedFreeModule,
    /// `entries[r][c]`, rows indexed by target summands, columns by source summands.
    pub entries: Vec<Vec<Poly<F>>>,
}

impl<F: Field> GradedFreeMap<F> {
    pub fn new(
        field: &F,
        n: usize,
        source: GradedFreeModule,
        target: GradedFreeModule,
        entries: Vec<Vec<Poly<F>>>,
    ) -> Result<Self> {
        if entries.len() != target.rank() || entries.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::Shape(format!(
                "entry matrix must be {}x{}",
                target.rank(),
                source.rank()
            )));
        }
        for (r, row) in entries.iter().enumerate() {
            for (c, p) in row.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                let want = source.twists[c] - target.twists[r];
                if p.homogeneous_degree().map(i64::from) != Some(want) {
                    return Err(Error::Shape(format!("entry ({r},{c}) is not homogeneous of degree {want}")));
                }
            }
        }
        Ok(GradedFreeMap { field: field.clone(), n, source, target, entries })
    }

    pub fn zero(field: &F, n: usize, source: GradedFreeModule, target: GradedFreeModule) -> Self {
        let entries = vec![vec![Poly::zero(n); source.rank()]; target.rank()];
        GradedFreeMap { field: field.clone(), n, source, target, entries }
    }

    /// The degree-`d` component as a constant matrix in monomial bases.
    pub fn degree_matrix(&self, d: i64) -> Matrix<F> {
        let f = &self.field;
        let n = self.n;
        let toff = self.target.offsets(n, d);
        let soff = self.source.offsets(n, d);
        let mut m = Matrix::zeros(f, self.target.dim(n, d), self.source.dim(n, d));
        for (c, &qs) in self.source.twists.iter().enumerate() {
            let e = d - qs;
            if e < 0 {
                continue;
            }
            let sb = basis_table(n, e as usize);
            for (r, &qt) in self.target.twists.iter().enumerate() {
                let p = &self.entries[r][c];
                if p.is_zero() || d - qt < 0 {
                    continue;
                }
                let tb = basis_table(n, (d - qt) as usize);
                for (k, u) in sb.monomials.iter().enumerate() {
                    for (mono, coef) in &p.terms {
                        let row = toff[r] + tb.index[&mono.mul(u)];
                        let col = soff[c] + k;
                        let v = f.add(m.get(row, col), coef);
                        m.set(row, col, v);
                    }
                }
            }
        }
        m
    }

    /// Builds the map whose columns are the given elements of the target,
    /// each `(degree, coordinate vector in that degree)`.
    pub fn from_elements(field: &F, n: usize, target: GradedFreeModule, elements: &[(i64, Vec<F::Elem>)]) -> Self {
        let mut entries = vec![Vec::with_capacity(elements.len()); target.rank()];
        for (d, vec) in elements {
            let offs = target.offsets(n, *d);
            for (r, &q) in target.twists.iter().enumerate() {
                let mut p = Poly::zero(n);
                if d - q >= 0 {
                    let tb = basis_table(n, (d - q) as usize);
                    for (k, m) in tb.monomials.iter().enumerate() {
                        p.add_term(field, m.clone(), vec[offs[r] + k].clone());
                    }
                }
                entries[r].push(p);
            }
        }
        let source = GradedFreeModule::new(elements.iter().map(|(d, _)| *d).collect());
        GradedFreeMap { field: field.clone(), n, source, target, entries }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.target != self.source {
            return Err(Error::Shape("composition of incompatible maps".into()));
        }
        let f = &self.field;
        let mut entries = vec![vec![Poly::zero(self.n); other.source.rank()]; self.target.rank()];
        for (r, row) in entries.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                for k in 0..self.source.rank() {
                    let t = self.entries[r][k].mul(f, &other.entries[k][c]);
                    *e = e.add(f, &t);
                }
            }
        }
        Ok(GradedFreeMap {
            field: f.clone(),
            n: self.n,
            source: other.source.clone(),
            target: self.target.clone(),
            entries,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Poly::is_zero)
    }

    /// No nonzero constant entries.
    pub fn is_minimal(&self) -> bool {
        self.entries.iter().flatten().all(|p| p.is_zero() || p.homogeneous_degree() != Some(0))
    }

    pub fn transpose(&self) -> Vec<Vec<Poly<F>>> {
        (0..self.source.rank())
            .map(|c| (0..self.target.rank()).map(|r| self.entries[r][c].clone()).collect())
            .collect()
    }

    /// Evaluates the polynomial matrix at a point.
    pub fn eval(&self, point: &[F::Elem]) -> Matrix<F> {
        let f = &self.field;
        let mut m = Matrix::zeros(f, self.target.rank(), self.source.rank());
        for (r, row) in self.entries.iter().enumerate() {
            for (c, p) in row.iter().enumerate() {
                m.set(r, c, p.eval(f, point));
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn degree_matrix_of_koszul_column() {
        let q = Rationals;
        let n = 2;
        let entries = (0..3).map(|i| vec![Poly::var(&q, n, i)]).collect();
        let m = GradedFreeMap::new(
            &q,
            n,
            GradedFreeModule::new(vec![1]),
            GradedFreeModule::new(vec![0, 0, 0]),
            entries,
        )
        .unwrap();
        for d in 0..5 {
            let dm = m.degree_matrix(d);
            assert_eq!(dm.shape(), (3 * ring_dim(2, d), ring_dim(2, d - 1)));
            assert_eq!(dm.rank(), ring_dim(2, d - 1));
        }
    }

    #[test]
    fn rejects_inhomogeneous_entries() {
        let q = Rationals;
        let entries = vec![vec![Poly::var(&q, 1, 0)]];
        let r = GradedFreeMap::new(&q, 1, GradedFreeModule::new(vec![2]), GradedFreeModule::new(vec![0]), entries);
        assert!(r.is_err());
    }

    #[test]
    fn action_matches_degree_matrix() {
        let q = Rationals;
        let m = GradedFreeModule::new(vec![0, 1]);
        let id = Matrix::identity(&q, m.dim(2, 2));
        let a = m.act(&q, 2, 1, 2, &id);
        assert_eq!(a.shape(), (m.dim(2, 3), m.dim(2, 2)));
        assert_eq!(a.rank(), m.dim(2, 2));
    }
}
