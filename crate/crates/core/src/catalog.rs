//! Pure Artinian modules used as reduction edges: residue fields and graded
//! duals of the power quotients `R/m^t`, with numeric compatibility filtering.

use std::cmp::Reverse;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::betti::{betti_table, herzog_kuhl, BettiTable};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::free::{GradedFreeMap, GradedFreeModule};
use crate::matrix::Matrix;
use crate::poly::{basis_table, monomial_basis, ring_dim, Poly};
use crate::window::GradedModuleWindow;

/// Which pure module a candidate is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CandidateKind {
    /// The residue field `k`.
    Koszul,
    /// The graded dual of `R/m^t`.
    MatlisPower { t: usize },
}

impl CandidateKind {
    /// Degree sequence normalized to start at 0.
    pub fn degree_sequence(&self, n: usize) -> Vec<i64> {
        match *self {
            CandidateKind::Koszul => (0..=n as i64 + 1).collect(),
            CandidateKind::MatlisPower { t } => {
                let mut d: Vec<i64> = (0..=n as i64).collect();
                d.push(n as i64 + t as i64);
                d
            }
        }
    }

    /// Betti numbers along the degree sequence, from the Herzog–Kühl equations.
    pub fn betti(&self, n: usize) -> Vec<usize> {
        herzog_kuhl(&self.degree_sequence(n))
            .expect("increasing sequence")
            .betti
            .into_iter()
            .map(|b| b as usize)
            .collect()
    }

    /// Position in the fixed edge order used by the construction tree.
    pub fn order_index(&self) -> usize {
        match *self {
            CandidateKind::Koszul => 0,
            CandidateKind::MatlisPower { t } => t - 1,
        }
    }
}

impl fmt::Display for CandidateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CandidateKind::Koszul => write!(f, "k"),
            CandidateKind::MatlisPower { t } => write!(f, "(R/m^{t})^v"),
        }
    }
}

/// A pure Artinian module `G` (or a direct sum of at most two of them),
/// described numerically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSpec {
    pub parts: Vec<(CandidateKind, usize)>,
    pub n: usize,
    /// Shift: the generators sit in degree `m`.
    pub m: i64,
}

impl CandidateSpec {
    pub fn pure(kind: CandidateKind, multiplicity: usize, m: i64, n: usize) -> Self {
        CandidateSpec { parts: vec![(kind, multiplicity)], n, m }
    }

    /// `β_{i, m+d_i}` summed over the parts; index `i` runs over `0..=n+1`.
    pub fn strand_totals(&self) -> Vec<usize> {
        let mut out = vec![0; self.n + 2];
        for &(kind, q) in &self.parts {
            for (i, b) in kind.betti(self.n).into_iter().enumerate() {
                out[i] += q * b;
            }
        }
        out
    }

    pub fn betti(&self) -> BettiTable {
        let mut t = BettiTable::new();
        for &(kind, q) in &self.parts {
            for (i, (b, d)) in kind.betti(self.n).into_iter().zip(kind.degree_sequence(self.n)).enumerate() {
                let j = self.m + d;
                t.set(i, j, t.get(i, j) + q * b);
            }
        }
        t
    }

    pub fn label(&self) -> String {
        self.parts
            .iter()
            .map(|(k, q)| {
                let b: Vec<String> = k.betti(self.n).iter().map(usize::to_string).collect();
                format!("{q}x({})", b.join(","))
            })
            .collect::<Vec<_>>()
            .join("+")
    }

    pub fn build<F: Field>(&self, field: &F, hi: i64) -> Result<ArtinianCandidate<F>> {
        let mut window: Option<GradedModuleWindow<F>> = None;
        for &(kind, q) in &self.parts {
            let one = match kind {
                CandidateKind::Koszul => koszul_residue_window(field, 1, self.m, self.n, hi),
                CandidateKind::MatlisPower { t } => matlis_dual_power_window(field, t, self.m, self.n, hi),
            };
            for _ in 0..q {
                window = Some(match window {
                    None => one.clone(),
                    Some(w) => w.direct_sum(&one)?,
                });
            }
        }
        let window = window.ok_or_else(|| Error::Shape("empty candidate".into()))?;
        let betti = betti_table(&window);
        let expected = self.betti();
        if !betti.same_entries(&expected) {
            return Err(Error::PurityCheckFailed(format!("{}: computed\n{}", self.label(), betti.render())));
        }
        let dseq = if self.parts.len() == 1 {
            self.parts[0].0.degree_sequence(self.n).iter().map(|d| d + self.m).collect()
        } else {
            Vec::new()
        };
        Ok(ArtinianCandidate { spec: self.clone(), window, dseq, betti })
    }
}

#[derive(Clone, Debug)]
pub struct ArtinianCandidate<F: Field> {
    pub spec: CandidateSpec,
    pub window: GradedModuleWindow<F>,
    /// Degree sequence (empty for mixed sums).
    pub dseq: Vec<i64>,
    pub betti: BettiTable,
}

impl<F: Field> ArtinianCandidate<F> {
    pub fn multiplicity(&self) -> usize {
        self.spec.parts.iter().map(|p| p.1).sum()
    }
}

/// `k(-m)^q` on `[m, max(hi, m + n + 2)]`.
pub fn koszul_residue_window<F: Field>(field: &F, q: usize, m: i64, n: usize, hi: i64) -> GradedModuleWindow<F> {
    let hi = hi.max(m + n as i64 + 2);
    let mut dims = vec![0; (hi - m + 1) as usize];
    dims[0] = q;
    let actions = (m..hi)
        .map(|d| (0..=n).map(|_| Matrix::zeros(field, dims[(d - m + 1) as usize], dims[(d - m) as usize])).collect())
        .collect();
    GradedModuleWindow::new(field, n, m, hi, dims, actions).expect("residue window")
}

/// Graded dual of `R/m^t`, generated in degree `m`: the degree `m + e`
/// piece has the dual monomials of degree `t - 1 - e`, and `x_i`
/// contracts (`x_i · (x^u)^* = (x^u / x_i)^*`).
pub fn matlis_dual_power_window<F: Field>(field: &F, t: usize, m: i64, n: usize, hi: i64) -> GradedModuleWindow<F> {
    assert!(t >= 1, "power must be positive");
    let top = m + t as i64 - 1;
    let hi = hi.max(top + n as i64 + 2);
    let deg_at = |d: i64| -> Option<usize> { (d >= m && d <= top).then(|| (top - d) as usize) };
    let dims: Vec<usize> = (m..=hi).map(|d| deg_at(d).map_or(0, |e| ring_dim(n, e as i64))).collect();
    let actions = (m..hi)
        .map(|d| {
            (0..=n)
                .map(|v| {
                    let (rows, cols) = (dims[(d - m + 1) as usize], dims[(d - m) as usize]);
                    let mut x = Matrix::zeros(field, rows, cols);
                    if let (Some(e), Some(_)) = (deg_at(d), deg_at(d + 1)) {
                        let lower = basis_table(n, e - 1);
                        for (c, u) in monomial_basis(n, e).iter().enumerate() {
                            if u.0[v] > 0 {
                                let mut w = u.0.clone();
                                w[v] -= 1;
                                x.set(lower.index[&crate::poly::Monomial(w)], c, field.one());
                            }
                        }
                    }
                    x
                })
                .collect()
        })
        .collect();
    GradedModuleWindow::new(field, n, m, hi, dims, actions).expect("dual power window")
}

/// `R/m^t` on `[0, hi]`.
pub fn power_quotient_window<F: Field>(field: &F, t: usize, n: usize, hi: i64) -> Result<GradedModuleWindow<F>> {
    let monos = monomial_basis(n, t);
    let entries = vec![monos.iter().map(|u| Poly::monomial(field, field.one(), u.clone())).collect()];
    let pres = GradedFreeMap::new(
        field,
        n,
        GradedFreeModule::new(vec![t as i64; monos.len()]),
        GradedFreeModule::new(vec![0]),
        entries,
    )?;
    GradedModuleWindow::from_presentation(&pres, 0, hi)
}

/// `k(-m)^q` as a checked candidate.
pub fn koszul_residue<F: Field>(field: &F, q: usize, m: i64, n: usize) -> Result<ArtinianCandidate<F>> {
    CandidateSpec::pure(CandidateKind::Koszul, q, m, n).build(field, m + n as i64 + 2)
}

/// Dual of `R/m^t` generated in degree `m`, as a checked candidate.
pub fn matlis_dual_power<F: Field>(field: &F, t: usize, m: i64, n: usize) -> Result<ArtinianCandidate<F>> {
    if t < 2 {
        return Err(Error::Shape(format!("power t = {t} must be at least 2")));
    }
    CandidateSpec::pure(CandidateKind::MatlisPower { t }, 1, m, n).build(field, m + t as i64 + n as i64 + 1)
}

/// Filtering options for [`compatible_candidates`].
#[derive(Clone, Debug)]
pub struct CompatibilityOptions {
    pub max_multiplicity: usize,
    /// Largest `t` for the dual power quotients.
    pub max_power: usize,
    /// Rank of the sheaf of the module being reduced; enables `b >= a - r`.
    pub sheaf_rank: Option<i64>,
    /// Also return sums of two different pure types.
    pub include_mixed: bool,
}

impl Default for CompatibilityOptions {
    fn default() -> Self {
        CompatibilityOptions { max_multiplicity: 16, max_power: 12, sheaf_rank: None, include_mixed: false }
    }
}

/// Candidates `G` with `β_0(G) < β_0(E)` and `β_1(G) < β_1(E)`, and with
/// `b >= a - r` for the reduced `a × b` pencil when the sheaf rank `r` is known.
/// Sorted by decreasing pencil size.
pub fn compatible_candidates(strand: &[usize], m: i64, n: usize, opts: &CompatibilityOptions) -> Vec<CandidateSpec> {
    let e0 = strand.first().copied().unwrap_or(0);
    let e1 = strand.get(1).copied().unwrap_or(0);
    let kinds: Vec<CandidateKind> = std::iter::once(CandidateKind::Koszul)
        .chain((2..=opts.max_power).map(|t| CandidateKind::MatlisPower { t }))
        .collect();
    let fits = |spec: &CandidateSpec| -> bool {
        let g = spec.strand_totals();
        if g[0] >= e0 || g[1] >= e1 {
            return false;
        }
        let (a, b) = ((e0 - g[0]) as i64, (e1 - g[1]) as i64);
        opts.sheaf_rank.map_or(true, |r| b >= a - r)
    };
    let mut out = Vec::new();
    for (ki, &k) in kinds.iter().enumerate() {
        for q in 1..=opts.max_multiplicity {
            let spec = CandidateSpec::pure(k, q, m, n);
            if fits(&spec) {
                out.push(spec.clone());
            }
            if opts.include_mixed {
                for &k2 in &kinds[ki + 1..] {
                    for q2 in 1..=opts.max_multiplicity {
                        let mixed = CandidateSpec { parts: vec![(k, q), (k2, q2)], n, m };
                        if fits(&mixed) {
                            out.push(mixed);
                        }
                    }
                }
            }
        }
    }
    out.sort_by_key(|s| {
        let g = s.strand_totals();
        let (a, b) = (e0 - g[0], e1 - g[1]);
        (Reverse(a * b), Reverse(a), s.parts.clone())
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    #[test]
    fn residue_candidates() {
        let q = Rationals;
        let c = koszul_residue(&q, 1, 2, 2).unwrap();
        assert_eq!(c.betti.strand(2), vec![1, 3, 3, 1]);
        let c2 = koszul_residue(&q, 2, 2, 3).unwrap();
        assert_eq!(c2.betti.strand(2), vec![2, 8, 12, 8, 2]);
        assert_eq!(koszul_residue(&q, 1, 0, 3).unwrap().dseq, vec![0, 1, 2, 3, 4]);
        assert!(c.window.hilbert_data().unwrap().artinian);
    }

    #[test]
    fn dual_power_candidates() {
        let q = Rationals;
        for (t, b) in [(2, vec![3, 8, 6]), (3, vec![6, 15, 10]), (4, vec![10, 24, 15])] {
            let c = matlis_dual_power(&q, t, 0, 2).unwrap();
            assert_eq!(c.betti.strand(0), b);
            assert_eq!(c.betti.get(3, 2 + t as i64), 1);
            assert_eq!(c.dseq, vec![0, 1, 2, 2 + t as i64]);
        }
    }

    #[test]
    fn dual_power_reverses_power_quotient() {
        let q = Rationals;
        for n in 2..=3usize {
            for t in 2..=3usize {
                let quotient = betti_table(&power_quotient_window(&q, t, n, t as i64 + n as i64 + 2).unwrap());
                let dual = matlis_dual_power(&q, t, 0, n).unwrap().betti;
                let tot_q: Vec<usize> = (0..=n + 1).map(|i| quotient.total(i)).collect();
                let mut tot_d: Vec<usize> = (0..=n + 1).map(|i| dual.total(i)).collect();
                tot_d.reverse();
                assert_eq!(tot_q, tot_d, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn figure_root_candidates() {
        let opts = CompatibilityOptions { sheaf_rank: Some(2), ..Default::default() };
        let c = compatible_candidates(&[24, 37, 15], 3, 2, &opts);
        let count = |k: CandidateKind| c.iter().filter(|s| s.parts[0].0 == k).map(|s| s.parts[0].1).max();
        assert_eq!(count(CandidateKind::Koszul), Some(7));
        assert_eq!(count(CandidateKind::MatlisPower { t: 2 }), Some(3));
        assert_eq!(count(CandidateKind::MatlisPower { t: 3 }), Some(1));
        assert_eq!(count(CandidateKind::MatlisPower { t: 4 }), Some(1));
        assert_eq!(count(CandidateKind::MatlisPower { t: 5 }), None);
        assert_eq!(c.len(), 12);
        assert!(compatible_candidates(&[1, 0, 0], 0, 2, &opts).is_empty());
        let lb = compatible_candidates(&[6, 8, 3], 2, 2, &CompatibilityOptions::default());
        assert!(lb.contains(&CandidateSpec::pure(CandidateKind::Koszul, 1, 2, 2)));
    }

    #[test]
    fn mixed_sums_are_optional() {
        let opts = CompatibilityOptions { sheaf_rank: Some(2), include_mixed: true, ..Default::default() };
        let c = compatible_candidates(&[24, 37, 15], 3, 2, &opts);
        assert!(c.iter().any(|s| s.parts.len() == 2));
        let mixed = c.iter().find(|s| s.parts.len() == 2).unwrap();
        let built = mixed.build(&Rationals, 8).unwrap();
        assert!(built.window.hilbert_data().unwrap().artinian);
    }
}
