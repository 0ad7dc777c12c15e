//! Graded Betti numbers from Koszul homology, closed-form truncation
//! predictions, and the Herzog–Kühl solver for pure degree sequences.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::poly::{binomial, QPoly};
use crate::window::GradedModuleWindow;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    #[serde(with = "entry_list")]
    entries: BTreeMap<(usize, i64), usize>,
    /// Rows `j - i` up to this value are exact; rows above were not computed.
    pub certified_row_max: Option<i64>,
}

/// JSON form of the entries: `[[i, j, β_{i,j}], ...]`.
mod entry_list {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<(usize, i64), usize>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(usize, i64, usize)> = m.iter().map(|(&(i, j), &b)| (i, j, b)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(usize, i64), usize>, D::Error> {
        let v: Vec<(usize, i64, usize)> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|(i, j, b)| ((i, j), b)).collect())
    }
}

impl BettiTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Linear strand `β_{i, m+i} = strand[i]`.
    pub fn from_strand(m: i64, strand: &[usize]) -> Self {
        let mut t = Self::new();
        for (i, &b) in strand.iter().enumerate() {
            t.set(i, m + i as i64, b);
        }
        t
    }

    pub fn get(&self, i: usize, j: i64) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: usize, j: i64, v: usize) {
        if v == 0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    /// Nonzero entries as `((i, j), β_{i,j})`.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, i64), usize)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().map(|&(i, _)| i).max()
    }

    pub fn min_row(&self) -> Option<i64> {
        self.entries.keys().map(|&(i, j)| j - i as i64).min()
    }

    pub fn max_row(&self) -> Option<i64> {
        self.entries.keys().map(|&(i, j)| j - i as i64).max()
    }

    /// Castelnuovo–Mumford regularity as far as the table is known.
    pub fn regularity(&self) -> Option<i64> {
        self.max_row()
    }

    /// Total Betti number `β_i`.
    pub fn total(&self, i: usize) -> usize {
        self.entries.iter().filter(|(&(k, _), _)| k == i).map(|(_, &v)| v).sum()
    }

    /// `β_{i, m+i}` for `i = 0..len`, with `len` covering every nonzero entry of the row.
    pub fn strand(&self, m: i64) -> Vec<usize> {
        let top = self
            .entries
            .keys()
            .filter(|&&(i, j)| j - i as i64 == m)
            .map(|&(i, _)| i + 1)
            .max()
            .unwrap_or(0);
        (0..top).map(|i| self.get(i, m + i as i64)).collect()
    }

    /// `Some(m)` when every nonzero entry lies in row `m`.
    pub fn linear_row(&self) -> Option<i64> {
        let m = self.min_row()?;
        (self.max_row() == Some(m)).then_some(m)
    }

    /// Generators only in degree `m` and relations only in degree `m + 1`.
    pub fn is_linearly_presented(&self, m: i64) -> bool {
        self.entries
            .keys()
            .all(|&(i, j)| i > 1 || j - i as i64 == m)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.clone();
        for ((i, j), v) in other.iter() {
            t.set(i, j, t.get(i, j) + v);
        }
        t.certified_row_max = match (self.certified_row_max, other.certified_row_max) {
            (Some(a), Some(b)) => Some(a.min(b)),
            _ => None,
        };
        t
    }

    pub fn scale(&self, k: usize) -> Self {
        let mut t = Self::new();
        for ((i, j), v) in self.iter() {
            t.set(i, j, v * k);
        }
        t.certified_row_max = self.certified_row_max;
        t
    }

    /// Entries restricted to rows `<= row`.
    pub fn up_to_row(&self, row: i64) -> Self {
        let mut t = Self::new();
        for ((i, j), v) in self.iter().filter(|&((i, j), _)| j - i as i64 <= row) {
            t.set(i, j, v);
        }
        t.certified_row_max = Some(row);
        t
    }

    /// Table with nonzero entries only; used for comparisons ignoring certification.
    pub fn same_entries(&self, other: &Self) -> bool {
        self.entries == other.entries
    }

    /// Dot-matrix layout: rows are `j - i`, columns are `i`, zeros print as `.`.
    pub fn render(&self) -> String {
        let (Some(r0), Some(r1), Some(imax)) = (self.min_row(), self.max_row(), self.max_index()) else {
            return "0\n".into();
        };
        let cells: Vec<Vec<String>> = (r0..=r1)
            .map(|r| {
                (0..=imax)
                    .map(|i| match self.get(i, r + i as i64) {
                        0 => ".".to_string(),
                        v => v.to_string(),
                    })
                    .collect()
            })
            .collect();
        let totals: Vec<String> = (0..=imax).map(|i| self.total(i).to_string()).collect();
        let width = cells
            .iter()
            .flatten()
            .chain(&totals)
            .map(String::len)
            .max()
            .unwrap_or(1);
        let label_w = format!("{r1}").len().max(format!("{r0}").len()).max(6);
        let mut out = String::new();
        out.push_str(&format!("{:>label_w$} ", ""));
        out.push_str(&(0..=imax).map(|i| format!("{i:>width$}")).collect::<Vec<_>>().join(" "));
        out.push('\n');
        out.push_str(&format!("{:>label_w$} ", "total:"));
        out.push_str(&totals.iter().map(|t| format!("{t:>width$}")).collect::<Vec<_>>().join(" "));
        out.push('\n');
        for (r, row) in (r0..=r1).zip(cells) {
            out.push_str(&format!("{:>label_w$} ", format!("{r}:")));
            out.push_str(&row.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

fn subsets(n_vars: usize, k: usize) -> Vec<u32> {
    let mut out: Vec<u32> = (0u32..(1 << n_vars)).filter(|s| s.count_ones() as usize == k).collect();
    out.sort_by_key(|s| (0..n_vars).map(|b| (s >> b) & 1 == 0).collect::<Vec<_>>());
    out
}

/// Koszul differential `M_d ⊗ Λ^i V -> M_{d+1} ⊗ Λ^{i-1} V`,
/// `m ⊗ e_S ↦ Σ_p (-1)^p x_{s_p} m ⊗ e_{S \ s_p}`.
pub fn koszul_differential<F: Field>(w: &GradedModuleWindow<F>, i: usize, d: i64) -> Matrix<F> {
    let f = w.field();
    let nv = w.n() + 1;
    let (src_dim, dst_dim) = (w.dim(d), w.dim(d + 1));
    let src = subsets(nv, i);
    let dst = if i == 0 { Vec::new() } else { subsets(nv, i - 1) };
    let dst_index: HashMap<u32, usize> = dst.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    let mut m = Matrix::zeros(f, dst.len() * dst_dim, src.len() * src_dim);
    if src_dim == 0 || dst_dim == 0 || i == 0 {
        return m;
    }
    for (c, &s) in src.iter().enumerate() {
        let mut sign_pos = 0;
        for v in 0..nv {
            if (s >> v) & 1 == 0 {
                continue;
            }
            let r = dst_index[&(s & !(1 << v))];
            let x = w.action(v, d);
            let negate = sign_pos % 2 == 1;
            for a in 0..dst_dim {
                for b in 0..src_dim {
                    let val = x.get(a, b);
                    if !f.is_zero(val) {
                        m.set(r * dst_dim + a, c * src_dim + b, if negate { f.neg(val) } else { val.clone() });
                    }
                }
            }
            sign_pos += 1;
        }
    }
    m
}

/// `β_{i,j}` for `i <= i_max` and `j` in `j_range`, from Koszul homology.
pub fn koszul_betti<F: Field>(w: &GradedModuleWindow<F>, i_max: usize, j_range: (i64, i64)) -> Result<BettiTable> {
    let i_max = i_max.min(w.n() + 1);
    let (j0, j1) = j_range;
    let mut pairs = Vec::new();
    for i in 0..=i_max {
        for j in j0..=j1 {
            let d = j - i as i64;
            if d < w.lo() {
                continue;
            }
            if i > 0 && d >= w.hi() || i == 0 && d > w.hi() {
                return Err(Error::WindowTooShort(format!(
                    "β_{{{i},{j}}} needs degree {} but the window ends at {}",
                    d + 1,
                    w.hi()
                )));
            }
            pairs.push((i, j));
        }
    }
    let mut table = koszul_pairs(w, &pairs);
    table.certified_row_max = Some(j1 - i_max as i64);
    Ok(table)
}

fn koszul_pairs<F: Field>(w: &GradedModuleWindow<F>, pairs: &[(usize, i64)]) -> BettiTable {
    let n = w.n();
    let mut rank_keys: Vec<(usize, i64)> = Vec::new();
    for &(i, j) in pairs {
        let d = j - i as i64;
        if i >= 1 {
            rank_keys.push((i, d));
        }
        if i + 1 <= n + 1 {
            rank_keys.push((i + 1, d - 1));
        }
    }
    rank_keys.sort_unstable();
    rank_keys.dedup();
    let ranks: HashMap<(usize, i64), usize> = rank_keys
        .par_iter()
        .map(|&(i, d)| {
            let r = if w.dim(d) == 0 || w.dim(d + 1) == 0 { 0 } else { koszul_differential(w, i, d).rank() };
            ((i, d), r)
        })
        .collect();
    let mut table = BettiTable::new();
    for &(i, j) in pairs {
        let d = j - i as i64;
        let chains = w.dim(d) * binomial(n as i64 + 1, i as i64) as usize;
        let out = if i >= 1 { ranks[&(i, d)] } else { 0 };
        let inc = ranks.get(&(i + 1, d - 1)).copied().unwrap_or(0);
        table.set(i, j, chains - out - inc);
    }
    table
}

/// Every Betti number the window determines: all rows `j - i <= hi - 1`.
pub fn betti_table<F: Field>(w: &GradedModuleWindow<F>) -> BettiTable {
    let mut pairs = Vec::new();
    for i in 0..=w.n() + 1 {
        let top = if i == 0 { w.hi() } else { w.hi() - 1 };
        for d in w.lo()..=top {
            pairs.push((i, d + i as i64));
        }
    }
    let mut table = koszul_pairs(w, &pairs);
    table.certified_row_max = Some(w.hi() - 1);
    table
}

/// `β_{0,*}` through degree `hi` and `β_{1,*}` through degree `hi`.
pub fn presentation_betti<F: Field>(w: &GradedModuleWindow<F>) -> BettiTable {
    let mut pairs: Vec<(usize, i64)> = (w.lo()..=w.hi()).map(|j| (0, j)).collect();
    pairs.extend((w.lo() + 1..=w.hi()).map(|j| (1, j)));
    let mut t = koszul_pairs(w, &pairs);
    t.certified_row_max = Some(w.hi() - 1);
    t
}

/// `p_n^{(i)}(k) = binom(n,i)/n! · Π_{t ∈ {0..n}, t ≠ i} (k + t)`.
pub fn recurrence_poly(n: usize, i: usize) -> QPoly {
    assert!(i <= n, "index {i} exceeds n = {n}");
    let shifts: Vec<i64> = (0..=n as i64).filter(|&t| t != i as i64).collect();
    let fact: i64 = (1..=n as i64).product();
    let c = BigRational::new(BigInt::from(binomial(n as i64, i as i64)), BigInt::from(fact));
    QPoly::product_of_shifts(&shifts).scale(&c)
}

/// Values `a_k^{(i)}` of the recursion
/// `a_{k+1} = Σ_{j=0}^{n} (-1)^j binom(n+1, j+1) a_{k-j}`.
#[derive(Clone, Debug)]
pub struct TruncationPredictor {
    pub n: usize,
    /// `sequences[i][k + n - 1]` holds `a_k^{(i)}` for `k >= 1 - n`.
    pub sequences: Vec<Vec<i64>>,
    pub polynomials: Vec<QPoly>,
}

impl TruncationPredictor {
    pub fn new(n: usize, k_max: usize) -> Self {
        let sequences = (0..=n).map(|i| Self::sequence(n, i, k_max)).collect();
        let polynomials = (0..=n).map(|i| recurrence_poly(n, i)).collect();
        TruncationPredictor { n, sequences, polynomials }
    }

    fn sequence(n: usize, i: usize, k_max: usize) -> Vec<i64> {
        let off = n as i64 - 1;
        let mut a = vec![0i64; (k_max as i64 + off + 1).max(off + 2) as usize];
        if i + 1 <= n {
            a[(off - i as i64) as usize] = if i % 2 == 0 { 1 } else { -1 };
        }
        a[(1 + off) as usize] = binomial(n as i64 + 1, i as i64 + 1) as i64;
        for k in 1..k_max as i64 {
            let mut next = 0i64;
            for j in 0..=n as i64 {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                next += sign * binomial(n as i64 + 1, j + 1) as i64 * a[(k - j + off) as usize];
            }
            a[(k + 1 + off) as usize] = next;
        }
        a
    }

    /// `a_k^{(i)}` for `1 - n <= k <= k_max`.
    pub fn a(&self, i: usize, k: i64) -> i64 {
        self.sequences[i][(k + self.n as i64 - 1) as usize]
    }
}

/// Linear strand of `M_{>=m+k}` predicted from the linear strand of `M` at `m`.
pub fn predict_truncation_betti(b: &BettiTable, n: usize, k: usize) -> Result<BettiTable> {
    let Some(m) = b.min_row() else {
        return Ok(BettiTable::new());
    };
    if b.linear_row() != Some(m) {
        return Err(Error::NonLinearInput(format!("entries outside row {m}")));
    }
    if b.max_index().unwrap_or(0) > n + 1 {
        return Err(Error::NonLinearInput("homological index exceeds n + 1".into()));
    }
    if k == 0 {
        return Ok(b.clone());
    }
    let strand = b.strand(m);
    let polys: Vec<QPoly> = (0..=n).map(|i| recurrence_poly(n, i)).collect();
    let mut out = BettiTable::new();
    for (i, p) in polys.iter().enumerate() {
        let mut acc = BigRational::zero();
        for (j, &beta) in strand.iter().enumerate() {
            let term = p.eval_i64(k as i64 - j as i64) * BigRational::from_integer(BigInt::from(beta));
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let v = acc
            .to_integer()
            .to_i64()
            .filter(|v| *v >= 0 && acc.is_integer())
            .ok_or_else(|| Error::NonLinearInput(format!("prediction {acc} is not a Betti number")))?;
        out.set(i, m + k as i64 + i as i64, v as usize);
    }
    Ok(out)
}

/// Linear strand `α_i = p_n^{(i)}(m)(s+r) - p_n^{(i)}(-1) s` of the truncation
/// at degree `m` of the cokernel of `O(-m-1)^s -> O^{s+r}`.
pub fn steiner_truncation_betti(n: usize, s: usize, r: usize, m: usize) -> Vec<usize> {
    (0..=n)
        .map(|i| {
            let p = recurrence_poly(n, i);
            let v = p.eval_i64(m as i64) * BigRational::from_integer(BigInt::from(s + r))
                - p.eval_i64(-1) * BigRational::from_integer(BigInt::from(s));
            v.to_integer().to_usize().expect("nonnegative Betti number")
        })
        .collect()
}

/// The same module truncated further, at degree `t >= m`.
pub fn steiner_truncation_betti_at(n: usize, s: usize, r: usize, m: usize, t: usize) -> Result<Vec<usize>> {
    if t < m {
        return Err(Error::OutOfRange(t as i64));
    }
    let base = BettiTable::from_strand(m as i64, &steiner_truncation_betti(n, s, r, m));
    let out = predict_truncation_betti(&base, n, t - m)?;
    Ok((0..=n).map(|i| out.get(i, t as i64 + i as i64)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HkSolution {
    pub degrees: Vec<i64>,
    pub q: u64,
    pub betti: Vec<u64>,
}

/// Minimal solution of `β_i = q · Π_{j≠i} 1/|d_j - d_i|`.
pub fn herzog_kuhl(degrees: &[i64]) -> Result<HkSolution> {
    if degrees.len() < 2 || degrees.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Shape(format!("degree sequence {degrees:?} is not strictly increasing")));
    }
    let denoms: Vec<u64> = (0..degrees.len())
        .map(|i| {
            (0..degrees.len())
                .filter(|&j| j != i)
                .map(|j| degrees[j].abs_diff(degrees[i]))
                .product()
        })
        .collect();
    let q = denoms.iter().fold(1u64, |acc, &d| acc.lcm(&d));
    Ok(HkSolution { degrees: degrees.to_vec(), q, betti: denoms.iter().map(|d| q / d).collect() })
}
