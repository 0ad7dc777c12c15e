//! Monomials in graded-lex order, homogeneous polynomials, and univariate
//! rational polynomials (Hilbert polynomials, truncation polynomials).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Rationals};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n + 1])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n + 1];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn times_var(&self, i: usize) -> Monomial {
        let mut e = self.0.clone();
        e[i] += 1;
        Monomial(e)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// All monomials of degree `d` in `n + 1` variables, graded-lex:
/// exponent vectors in decreasing lexicographic order, so `x0^d` comes first.
pub fn monomial_basis(n: usize, d: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n + 1];
    fill(&mut out, &mut cur, 0, d as u32);
    out
}

fn fill(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, pos: usize, left: u32) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(Monomial(cur.clone()));
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e;
        fill(out, cur, pos + 1, left - e);
    }
    cur[pos] = 0;
}

pub fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n as u128 - i as u128) / (i as u128 + 1);
    }
    r as u64
}

/// `dim R_d` for `R = k[x_0..x_n]`; zero for negative `d`.
pub fn ring_dim(n: usize, d: i64) -> usize {
    if d < 0 {
        0
    } else {
        binomial(d + n as i64, n as i64) as usize
    }
}

/// Cached monomial basis with reverse index and multiplication tables.
#[derive(Debug)]
pub struct BasisTable {
    pub monomials: Vec<Monomial>,
    pub index: HashMap<Monomial, usize>,
    /// `times[v][k]` is the index of `x_v * monomials[k]` in degree `d + 1`.
    pub times: Vec<Vec<usize>>,
    /// For `d > 0`: `(v, k)` with `monomials[i] = x_v * basis(d-1)[k]`, `v` minimal.
    pub peel: Vec<(usize, usize)>,
}

type Key = (usize, usize);
static TABLES: Lazy<Mutex<HashMap<Key, Arc<BasisTable>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn index_of(monos: &[Monomial]) -> HashMap<Monomial, usize> {
    monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}

pub fn basis_table(n: usize, d: usize) -> Arc<BasisTable> {
    if let Some(t) = TABLES.lock().unwrap().get(&(n, d)) {
        return t.clone();
    }
    let monomials = monomial_basis(n, d);
    let index = index_of(&monomials);
    let up = index_of(&monomial_basis(n, d + 1));
    let times = (0..=n).map(|v| monomials.iter().map(|m| up[&m.times_var(v)]).collect()).collect();
    let peel = if d == 0 {
        Vec::new()
    } else {
        let down = index_of(&monomial_basis(n, d - 1));
        monomials
            .iter()
            .map(|m| {
                let v = m.0.iter().position(|&e| e > 0).unwrap();
                let mut e = m.0.clone();
                e[v] -= 1;
                (v, down[&Monomial(e)])
            })
            .collect()
    };
    let t = Arc::new(BasisTable { monomials, index, times, peel });
    TABLES.lock().unwrap().insert((n, d), t.clone());
    t
}

/// A polynomial stored as a map from monomials to nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F: Field> {
    pub n: usize,
    pub terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn zero(n: usize) -> Self {
        Poly { n, terms: BTreeMap::new() }
    }

    pub fn constant(field: &F, n: usize, c: F::Elem) -> Self {
        Self::monomial(field, c, Monomial::one(n))
    }

    pub fn monomial(field: &F, c: F::Elem, m: Monomial) -> Self {
        let n = m.0.len() - 1;
        let mut terms = BTreeMap::new();
        if !field.is_zero(&c) {
            terms.insert(m, c);
        }
        Poly { n, terms }
    }

    pub fn var(field: &F, n: usize, i: usize) -> Self {
        Self::monomial(field, field.one(), Monomial::var(n, i))
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear(field: &F, coeffs: &[F::Elem]) -> Self {
        let n = coeffs.len() - 1;
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(field, Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, field: &F, m: Monomial, c: F::Elem) {
        if field.is_zero(&c) {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(|| field.zero());
        *e = field.add(e, &c);
        if field.is_zero(e) {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, field: &F, other: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(field, m.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, field: &F, c: &F::Elem) -> Self {
        let mut r = Self::zero(self.n);
        for (m, v) in &self.terms {
            r.add_term(field, m.clone(), field.mul(v, c));
        }
        r
    }

    pub fn mul(&self, field: &F, other: &Self) -> Self {
        let mut r = Self::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(field, m1.mul(m2), field.mul(c1, c2));
            }
        }
        r
    }

    /// Degree of a homogeneous polynomial (`None` for zero or inhomogeneous).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn eval(&self, field: &F, point: &[F::Elem]) -> F::Elem {
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t = field.mul(&t, x);
                }
            }
            acc = field.add(&acc, &t);
        }
        acc
    }

    pub fn to_string_with(&self, field: &F) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let cs = field.format(c);
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if k > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            let mono = m.to_string();
            match (mag.as_str(), mono.as_str()) {
                (_, "1") => s.push_str(&mag),
                ("1", _) => s.push_str(&mono),
                _ => s.push_str(&format!("{mag}*{mono}")),
            }
        }
        s
    }

    /// Exact serialization: `[[coefficient, [exponents]], ...]`.
    pub fn to_terms(&self, field: &F) -> Vec<(String, Vec<u32>)> {
        self.terms.iter().map(|(m, c)| (field.format(c), m.0.clone())).collect()
    }

    pub fn from_terms(field: &F, n: usize, terms: &[(String, Vec<u32>)]) -> Result<Self> {
        let mut p = Self::zero(n);
        for (c, e) in terms {
            if e.len() != n + 1 {
                return Err(Error::Document(format!("monomial {e:?} has wrong arity")));
            }
            p.add_term(field, Monomial(e.clone()), field.parse(c)?);
        }
        Ok(p)
    }
}

/// Univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    pub coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_i64(&self, x: i64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(x)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let z = BigRational::zero();
        let c = (0..len)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
            .collect();
        Self::from_coeffs(c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::from_coeffs(c)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `prod (k + a)` over the given shifts `a`.
    pub fn product_of_shifts(shifts: &[i64]) -> Self {
        shifts.iter().fold(Self::from_i64(&[1]), |acc, &a| acc.mul(&Self::from_i64(&[a, 1])))
    }

    /// Lagrange interpolation through `(x_i, y_i)`.
    pub fn interpolate(points: &[(i64, BigRational)]) -> Self {
        let mut out = Self::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = Self::from_i64(&[1]);
            let mut denom = BigRational::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&Self::from_i64(&[-xj, 1]));
                    denom *= BigRational::from_integer(BigInt::from(xi - xj));
                }
            }
            out = out.add(&basis.scale(&(yi / denom)));
        }
        out
    }

    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = Rationals.format(&Rational::from_big(c.clone()));
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(r) => (true, r.to_string()),
                None => (false, cs),
            };
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let pow = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                s.push_str(&mag);
            } else if mag == "1" {
                s.push_str(&pow);
            } else {
                s.push_str(&format!("{mag}*{pow}"));
            }
        }
        s
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var("k"))
    }
}
