//! Minimal presentations and bounded minimal free resolutions computed
//! degree by degree, plus Ext and local cohomology windows obtained by
//! dualizing a resolution.

use crate::betti::BettiTable;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::free::{GradedFreeMap, GradedFreeModule};
use crate::matrix::{extend_basis, Matrix, Subquotient};
use crate::pencil::LinearPencil;
use crate::poly::{basis_table, ring_dim};
use crate::window::{FreeAction, GradedModuleWindow};

#[derive(Clone, Debug)]
pub struct MinimalPresentation<F: Field> {
    /// Generator degrees with their lifts in the window.
    pub generators: Vec<(i64, Vec<F::Elem>)>,
    pub relation_map: GradedFreeMap<F>,
    /// Degree-`(m+1)` relations restricted to the degree-`m` generators,
    /// where `m` is the lowest generator degree.
    pub linear_part: Option<LinearPencil<F>>,
    /// Relations are complete through this degree.
    pub certified_degree: i64,
}

impl<F: Field> MinimalPresentation<F> {
    pub fn generator_degrees(&self) -> Vec<i64> {
        self.relation_map.target.twists.clone()
    }

    pub fn relation_degrees(&self) -> Vec<i64> {
        self.relation_map.source.twists.clone()
    }

    /// `β_{0,*}` and `β_{1,*}` read off the presentation.
    pub fn betti(&self) -> BettiTable {
        let mut t = BettiTable::new();
        for &d in &self.relation_map.target.twists {
            t.set(0, d, t.get(0, d) + 1);
        }
        for &d in &self.relation_map.source.twists {
            t.set(1, d, t.get(1, d) + 1);
        }
        t
    }

    /// Generators in one degree `m` and relations only in degree `m + 1`.
    pub fn is_linear(&self) -> bool {
        let g = &self.relation_map.target.twists;
        let Some(&m) = g.iter().min() else {
            return true;
        };
        g.iter().all(|&d| d == m) && self.relation_map.source.twists.iter().all(|&d| d == m + 1)
    }
}

/// Minimal generators of the degreewise subspaces `K_d` of a free module,
/// where `kernel(d)` returns a basis of `K_d` and `K` is a submodule.
fn minimal_submodule_generators<F: Field>(
    field: &F,
    n: usize,
    module: &GradedFreeModule,
    d_range: (i64, i64),
    mut kernel: impl FnMut(i64) -> Matrix<F>,
) -> Vec<(i64, Vec<F::Elem>)> {
    let act = FreeAction { field, n, module };
    let mut prev: Option<Matrix<F>> = None;
    let mut gens = Vec::new();
    for d in d_range.0..=d_range.1 {
        let k = kernel(d);
        let dim = module.dim(n, d);
        let mut span = Matrix::zeros(field, dim, 0);
        if let Some(p) = prev.as_ref().filter(|p| p.cols() > 0) {
            for v in 0..=n {
                span = span.hstack(&crate::window::GradedAction::act_on(&act, v, d - 1, p));
            }
        }
        if k.cols() > 0 {
            for idx in extend_basis(&span, &k) {
                gens.push((d, k.column(idx)));
            }
        }
        prev = Some(k);
    }
    gens
}

/// Evaluation matrices `ε_d: F0_d -> M_d` of the free cover given by the generators.
struct Evaluation<'a, F: Field> {
    window: &'a GradedModuleWindow<F>,
    gens: &'a [(i64, Vec<F::Elem>)],
    /// `blocks[j]`: image of the monomial basis times generator `j` in the current degree.
    blocks: Vec<Option<Matrix<F>>>,
    degree: i64,
}

impl<'a, F: Field> Evaluation<'a, F> {
    fn new(window: &'a GradedModuleWindow<F>, gens: &'a [(i64, Vec<F::Elem>)]) -> Self {
        Evaluation { window, gens, blocks: vec![None; gens.len()], degree: window.lo() - 1 }
    }

    /// Advances to degree `degree + 1` and returns `ε` there.
    fn next(&mut self) -> Matrix<F> {
        let w = self.window;
        let f = w.field();
        let n = w.n();
        let d = self.degree + 1;
        self.degree = d;
        let dim = w.dim(d);
        let mut out = Matrix::zeros(f, dim, 0);
        for (j, (g, lift)) in self.gens.iter().enumerate() {
            let e = d - g;
            let block = if e < 0 {
                None
            } else if e == 0 {
                Some(Matrix::from_columns(f, dim, &[lift.clone()]))
            } else {
                let prev = self.blocks[j].as_ref().expect("previous block");
                let table = basis_table(n, e as usize);
                let moved: Vec<Matrix<F>> = (0..=n).map(|v| w.action(v, d - 1).mul(prev)).collect();
                let cols: Vec<Vec<F::Elem>> = table.peel.iter().map(|&(v, k)| moved[v].column(k)).collect();
                Some(Matrix::from_columns(f, dim, &cols))
            };
            if let Some(b) = &block {
                out = out.hstack(b);
            }
            self.blocks[j] = block;
        }
        out
    }
}

/// Minimal presentation of the module carried by the window, with relations
/// computed through `syzygy_degree_bound`.
pub fn minimal_presentation<F: Field>(w: &GradedModuleWindow<F>, syzygy_degree_bound: i64) -> Result<MinimalPresentation<F>> {
    if syzygy_degree_bound > w.hi() {
        return Err(Error::WindowTooShort(format!(
            "relations through degree {syzygy_degree_bound} need the window to reach it (hi = {})",
            w.hi()
        )));
    }
    let f = w.field();
    let n = w.n();
    let mut generators: Vec<(i64, Vec<F::Elem>)> = Vec::new();
    for d in w.lo()..=w.hi() {
        let dim = w.dim(d);
        if dim == 0 {
            continue;
        }
        let mut span = Matrix::zeros(f, dim, 0);
        if d > w.lo() && w.dim(d - 1) > 0 {
            for v in 0..=n {
                span = span.hstack(&w.action(v, d - 1));
            }
        }
        let new = extend_basis(&span, &Matrix::identity(f, dim));
        if !new.is_empty() && d == w.hi() {
            return Err(Error::NotFinitelyGeneratedInWindow(d));
        }
        for idx in new {
            let mut e = vec![f.zero(); dim];
            e[idx] = f.one();
            generators.push((d, e));
        }
    }
    let f0 = GradedFreeModule::new(generators.iter().map(|(d, _)| *d).collect());
    let mut eval = Evaluation::new(w, &generators);
    let relations = minimal_submodule_generators(f, n, &f0, (w.lo(), syzygy_degree_bound), |_| eval.next().kernel_basis());
    let relation_map = GradedFreeMap::from_elements(f, n, f0, &relations);
    let linear_part = linear_part(&relation_map);
    Ok(MinimalPresentation { generators, relation_map, linear_part, certified_degree: syzygy_degree_bound })
}

/// Coefficients of the degree-`(m+1)` columns on the degree-`m` rows.
pub fn linear_part<F: Field>(map: &GradedFreeMap<F>) -> Option<LinearPencil<F>> {
    let f = &map.field;
    let n = map.n;
    let m = *map.target.twists.iter().min()?;
    let rows: Vec<usize> = (0..map.target.rank()).filter(|&r| map.target.twists[r] == m).collect();
    let cols: Vec<usize> = (0..map.source.rank()).filter(|&c| map.source.twists[c] == m + 1).collect();
    let mut p = LinearPencil::zero(f, n, rows.len(), cols.len());
    let mut coeffs: Vec<Matrix<F>> = p.coeffs().to_vec();
    for (a, &r) in rows.iter().enumerate() {
        for (b, &c) in cols.iter().enumerate() {
            for (mono, v) in &map.entries[r][c].terms {
                let var = mono.0.iter().position(|&e| e == 1).expect("linear entry");
                coeffs[var].set(a, b, v.clone());
            }
        }
    }
    p = LinearPencil::new(f, coeffs).unwrap_or(p);
    Some(p)
}

#[derive(Clone, Debug)]
pub struct ResolutionChain<F: Field> {
    pub n: usize,
    /// `modules[i]` is `F_i`.
    pub modules: Vec<GradedFreeModule>,
    /// `maps[i]` is the differential `F_{i+1} -> F_i`.
    pub maps: Vec<GradedFreeMap<F>>,
    /// Syzygies of step `i + 1` are complete through `certified_degrees[i]`.
    pub certified_degrees: Vec<i64>,
    /// The last computed module has no syzygies at all.
    pub complete: bool,
    pub presentation: MinimalPresentation<F>,
}

impl<F: Field> ResolutionChain<F> {
    pub fn steps(&self) -> usize {
        self.maps.len()
    }

    pub fn betti(&self) -> BettiTable {
        let mut t = BettiTable::new();
        for (i, m) in self.modules.iter().enumerate() {
            for &d in &m.twists {
                t.set(i, d, t.get(i, d) + 1);
            }
        }
        t
    }

    /// Ranks `F_0, F_1, ...`.
    pub fn shape(&self) -> Vec<usize> {
        self.modules.iter().map(GradedFreeModule::rank).collect()
    }
}

/// Minimal free resolution with `steps` differentials. The presentation is
/// taken from the window (relations through `min(degree_bound, hi)`); later
/// syzygies are computed from polynomial matrices through `degree_bound`.
pub fn free_resolution<F: Field>(w: &GradedModuleWindow<F>, steps: usize, degree_bound: i64) -> Result<ResolutionChain<F>> {
    let f = w.field();
    let n = w.n();
    let pres = minimal_presentation(w, degree_bound.min(w.hi()))?;
    let mut modules = vec![pres.relation_map.target.clone()];
    let mut maps = Vec::new();
    let mut certified_degrees = Vec::new();
    let mut complete = false;
    if steps >= 1 {
        modules.push(pres.relation_map.source.clone());
        maps.push(pres.relation_map.clone());
        certified_degrees.push(pres.certified_degree);
        if pres.relation_map.source.rank() == 0 && pres.certified_degree >= degree_bound {
            complete = true;
        }
    }
    while maps.len() < steps && !complete {
        let last = maps.last().expect("at least one map").clone();
        let src = last.source.clone();
        let lo = src.twists.iter().min().copied().unwrap_or(degree_bound);
        let syz = minimal_submodule_generators(f, n, &src, (lo, degree_bound), |d| last.degree_matrix(d).kernel_basis());
        let next = GradedFreeMap::from_elements(f, n, src, &syz);
        complete = next.source.rank() == 0 && injective_generically(&last);
        modules.push(next.source.clone());
        maps.push(next);
        certified_degrees.push(degree_bound);
    }
    Ok(ResolutionChain { n, modules, maps, certified_degrees, complete, presentation: pres })
}

/// A map of free modules is injective iff it has full column rank over the
/// fraction field; checked at a random point of a large prime field and,
/// failing that, at small integer points.
fn injective_generically<F: Field>(map: &GradedFreeMap<F>) -> bool {
    let f = &map.field;
    let cols = map.source.rank();
    if cols == 0 {
        return true;
    }
    let mut state = 0x9e37_79b9u64;
    for _ in 0..8 {
        let point: Vec<F::Elem> = (0..=map.n)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                f.from_i64(((state >> 33) % 97) as i64 - 48)
            })
            .collect();
        if map.eval(&point).rank() == cols {
            return true;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CohomologyKind {
    Ext { index: usize, twist: i64 },
    Local { index: usize },
}

#[derive(Clone, Debug)]
pub struct CohomologyWindow<F: Field> {
    pub which: CohomologyKind,
    pub window: GradedModuleWindow<F>,
}

fn dual_module(m: &GradedFreeModule, c: i64) -> GradedFreeModule {
    GradedFreeModule::new(m.twists.iter().map(|a| -a - c).collect())
}

/// `Hom(φ, R(c))` for `φ: S -> T`, as a map `T^* -> S^*`.
fn dual_map<F: Field>(map: &GradedFreeMap<F>, c: i64) -> GradedFreeMap<F> {
    GradedFreeMap {
        field: map.field.clone(),
        n: map.n,
        source: dual_module(&map.target, c),
        target: dual_module(&map.source, c),
        entries: map.transpose(),
    }
}

/// `Ext^i(M, R(c))` on degrees `[out_lo, out_hi]`.
pub fn ext_window<F: Field>(chain: &ResolutionChain<F>, i: usize, c: i64, out_lo: i64, out_hi: i64) -> Result<CohomologyWindow<F>> {
    let have_next = chain.maps.len() > i
        || (chain.modules.len() > i && (chain.complete || i == chain.n + 1));
    if !have_next {
        return Err(Error::InsufficientChain(format!(
            "Ext^{i} needs the differential out of F_{}, chain has {} steps",
            i + 1,
            chain.maps.len()
        )));
    }
    if out_hi < out_lo {
        return Err(Error::Shape(format!("empty degree range [{out_lo}, {out_hi}]")));
    }
    let n = chain.n;
    let field = chain.presentation.relation_map.field.clone();
    let fi_dual = dual_module(&chain.modules[i], c);
    let outgoing = chain.maps.get(i).map(|m| dual_map(m, c));
    let incoming = if i == 0 { None } else { Some(dual_map(&chain.maps[i - 1], c)) };
    let parts: Vec<Subquotient<F>> = (out_lo..=out_hi)
        .map(|t| {
            let dim = fi_dual.dim(n, t);
            let whole = match &outgoing {
                Some(m) => m.degree_matrix(t).kernel_basis(),
                None => Matrix::identity(&field, dim),
            };
            let sub = match &incoming {
                Some(m) => m.degree_matrix(t),
                None => Matrix::zeros(&field, dim, 0),
            };
            Subquotient::new(&sub, &whole)
        })
        .collect();
    let act = FreeAction { field: &field, n, module: &fi_dual };
    let window = GradedModuleWindow::from_subquotients(&field, n, out_lo, &act, &parts);
    Ok(CohomologyWindow { which: CohomologyKind::Ext { index: i, twist: c }, window })
}

/// Graded dual: `(W^∨)_t = (W_{-t})^*`, actions transposed.
pub fn matlis_dual<F: Field>(w: &GradedModuleWindow<F>) -> GradedModuleWindow<F> {
    let f = w.field();
    let (lo, hi) = (-w.hi(), -w.lo());
    let dims = (lo..=hi).map(|t| w.dim(-t)).collect();
    let actions = (lo..hi)
        .map(|t| (0..=w.n()).map(|v| w.action(v, -t - 1).transpose()).collect())
        .collect();
    GradedModuleWindow::new_unchecked(f, w.n(), lo, hi, dims, actions).expect("dual shapes")
}

/// `H^i_m(M)` on degrees `[out_lo, out_hi]` via
/// `H^i_m(M)_t ≅ (Ext^{n+1-i}(M, R(-n-1))_{-t})^*`.
pub fn local_cohomology_window<F: Field>(
    chain: &ResolutionChain<F>,
    i: usize,
    out_lo: i64,
    out_hi: i64,
) -> Result<CohomologyWindow<F>> {
    let n = chain.n;
    if i > n + 1 {
        return Err(Error::InsufficientChain(format!("H^{i} vanishes beyond n + 1")));
    }
    let ext = ext_window(chain, n + 1 - i, -(n as i64) - 1, -out_hi, -out_lo)?;
    Ok(CohomologyWindow { which: CohomologyKind::Local { index: i }, window: matlis_dual(&ext.window) })
}

/// Chain long enough for every local cohomology module of a window.
pub fn full_resolution<F: Field>(w: &GradedModuleWindow<F>, degree_bound: i64) -> Result<ResolutionChain<F>> {
    free_resolution(w, w.n() + 1, degree_bound)
}

/// Sum of `dim R_{d - q}` over the twists of a module.
pub fn free_dim(m: &GradedFreeModule, n: usize, d: i64) -> usize {
    m.twists.iter().map(|&q| ring_dim(n, d - q)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betti::betti_table;
    use crate::field::Rationals;
    use crate::poly::Poly;

    fn ring(n: usize, lo: i64, hi: i64) -> GradedModuleWindow<Rationals> {
        GradedModuleWindow::free(&Rationals, n, &[0], 0, hi).truncate(lo).unwrap()
    }

    fn residue(n: usize, hi: i64) -> GradedModuleWindow<Rationals> {
        let q = Rationals;
        let entries = vec![(0..=n).map(|i| Poly::var(&q, n, i)).collect()];
        let pres = GradedFreeMap::new(&q, n, GradedFreeModule::new(vec![1; n + 1]), GradedFreeModule::new(vec![0]), entries).unwrap();
        GradedModuleWindow::from_presentation(&pres, 0, hi).unwrap()
    }

    #[test]
    fn truncated_ring_presentation() {
        let w = ring(2, 2, 6);
        let p = minimal_presentation(&w, 5).unwrap();
        assert_eq!(p.generator_degrees(), vec![2; 6]);
        assert_eq!(p.relation_degrees(), vec![3; 8]);
        assert!(p.is_linear());
        let lp = p.linear_part.unwrap();
        assert_eq!((lp.rows(), lp.cols()), (6, 8));
        let chain = free_resolution(&w, 2, 6).unwrap();
        assert_eq!(chain.shape(), vec![6, 8, 3]);
        for pair in chain.maps.windows(2) {
            assert!(pair[0].compose(&pair[1]).unwrap().is_zero());
        }
    }

    #[test]
    fn residue_field_resolution() {
        let w = residue(2, 4);
        let chain = free_resolution(&w, 4, 5).unwrap();
        assert_eq!(chain.shape(), vec![1, 3, 3, 1, 0]);
        assert!(chain.complete);
        assert!(chain.betti().same_entries(&betti_table(&w)));
    }

    #[test]
    fn ext_of_residue_field() {
        let w = residue(2, 4);
        let chain = free_resolution(&w, 3, 5).unwrap();
        let e = ext_window(&chain, 3, -3, -2, 2).unwrap();
        assert_eq!(e.window.dims(), &[0, 0, 1, 0, 0]);
        let e1 = ext_window(&chain, 1, -3, -2, 2).unwrap();
        assert_eq!(e1.window.total_dim(), 0);
    }

    #[test]
    fn ext_of_ring() {
        let w = ring(2, 0, 3);
        let chain = free_resolution(&w, 1, 3).unwrap();
        let e0 = ext_window(&chain, 0, -1, 0, 3).unwrap();
        assert_eq!(e0.window.dims(), &[0, 1, 3, 6]);
        let e1 = ext_window(&chain, 1, -1, 0, 3).unwrap();
        assert_eq!(e1.window.total_dim(), 0);
    }

    #[test]
    fn top_local_cohomology_of_ring() {
        let w = ring(2, 0, 3);
        let chain = full_resolution(&w, 3).unwrap();
        let h = local_cohomology_window(&chain, 3, -6, -1).unwrap();
        assert_eq!(h.window.dims(), &[10, 6, 3, 1, 0, 0]);
        let trunc = ring(2, 2, 7);
        let chain = full_resolution(&trunc, 7).unwrap();
        for i in [0usize, 1] {
            let h = local_cohomology_window(&chain, i, -3, 4).unwrap();
            if i == 0 {
                assert_eq!(h.window.total_dim(), 0);
            }
        }
        let h1 = local_cohomology_window(&chain, 1, -3, 4).unwrap();
        assert_eq!(h1.window.dims(), &[0, 0, 0, 1, 3, 0, 0, 0]);
    }

    #[test]
    fn insufficient_chain_is_reported() {
        let w = ring(2, 2, 5);
        let chain = free_resolution(&w, 1, 5).unwrap();
        assert!(matches!(ext_window(&chain, 1, 0, 0, 1), Err(Error::InsufficientChain(_))));
    }

    #[test]
    fn presentation_roundtrip_keeps_twists() {
        let q = Rationals;
        let entries = (0..3).map(|i| vec![Poly::var(&q, 2, i)]).collect();
        let pres = GradedFreeMap::new(&q, 2, GradedFreeModule::new(vec![1]), GradedFreeModule::new(vec![0, 0, 0]), entries).unwrap();
        let w = GradedModuleWindow::from_presentation(&pres, 0, 5).unwrap();
        let p = minimal_presentation(&w, 5).unwrap();
        assert_eq!(p.generator_degrees(), vec![0, 0, 0]);
        assert_eq!(p.relation_degrees(), vec![1]);
    }
}
