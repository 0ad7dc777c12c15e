//! One reduction step: choose `μ ∈ Hom(E, G)_0` onto an Artinian `G`, form
//! `F = ker μ`, check the hypotheses degree by degree and extract the linear
//! part of the presentation of `F`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::betti::{koszul_differential, presentation_betti};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::free::{GradedFreeMap, GradedFreeModule};
use crate::matrix::{Matrix, Subquotient};
use crate::pencil::LinearPencil;
use crate::poly::Poly;
use crate::resolution::{minimal_presentation, MinimalPresentation};
use crate::window::GradedModuleWindow;

/// Basis of `Hom(E, G)_0`; each element is the family `f_d: E_d -> G_d`, `lo <= d <= hi`.
#[derive(Clone, Debug)]
pub struct HomSpace<F: Field> {
    pub lo: i64,
    pub hi: i64,
    pub basis: Vec<Vec<Matrix<F>>>,
}

impl<F: Field> HomSpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `Σ c_k basis_k`.
    pub fn combine(&self, field: &F, coeffs: &[F::Elem]) -> Vec<Matrix<F>> {
        let mut out: Vec<Matrix<F>> = self.basis[0].iter().map(|m| Matrix::zeros(field, m.rows(), m.cols())).collect();
        for (c, b) in coeffs.iter().zip(&self.basis) {
            for (o, m) in out.iter_mut().zip(b) {
                o.add_scaled(c, m);
            }
        }
        out
    }
}

fn artinian_padding<F: Field>(e: &GradedModuleWindow<F>, g: &GradedModuleWindow<F>) -> Result<GradedModuleWindow<F>> {
    if e.n() != g.n() {
        return Err(Error::WindowMismatch(format!("n = {} vs n = {}", e.n(), g.n())));
    }
    if g.hi() >= e.hi() {
        return Ok(g.clone());
    }
    let top = (g.hi() - e.n() as i64 - 1).max(g.lo())..=g.hi();
    if top.clone().any(|d| g.dim(d) != 0) {
        return Err(Error::WindowMismatch(format!(
            "target window ends at {} below the source window end {} and is not visibly Artinian",
            g.hi(),
            e.hi()
        )));
    }
    Ok(g.pad_zero(e.hi()))
}

/// Solves `X^G_{i,d} f_d = f_{d+1} X^E_{i,d}` for all degrees of the source
/// window, with `f_d = 0` wherever `G` vanishes.
pub fn hom_degree_zero<F: Field>(e: &GradedModuleWindow<F>, g: &GradedModuleWindow<F>) -> Result<HomSpace<F>> {
    let g = artinian_padding(e, g)?;
    let f = e.field();
    let n = e.n();
    let (lo, hi) = (e.lo(), e.hi());
    if g.hi() < lo {
        return Err(Error::WindowMismatch("windows do not overlap".into()));
    }
    let mut offsets = Vec::new();
    let mut total = 0;
    for d in lo..=hi {
        offsets.push(total);
        total += g.dim(d) * e.dim(d);
    }
    let var = |d: i64, r: usize, c: usize| offsets[(d - lo) as usize] + r * e.dim(d) + c;
    let mut rows: Vec<Vec<(usize, F::Elem)>> = Vec::new();
    for d in lo..hi {
        for i in 0..=n {
            let xg = g.action(i, d);
            let xe = e.action(i, d);
            for r in 0..g.dim(d + 1) {
                for c in 0..e.dim(d) {
                    let mut row = Vec::new();
                    for k in 0..g.dim(d) {
                        let a = xg.get(r, k);
                        if !f.is_zero(a) {
                            row.push((var(d, k, c), a.clone()));
                        }
                    }
                    for k in 0..e.dim(d + 1) {
                        let b = xe.get(k, c);
                        if !f.is_zero(b) {
                            row.push((var(d + 1, r, k), f.neg(b)));
                        }
                    }
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let mut system = Matrix::zeros(f, rows.len(), total);
    for (r, row) in rows.into_iter().enumerate() {
        for (c, v) in row {
            let cur = f.add(system.get(r, c), &v);
            system.set(r, c, cur);
        }
    }
    let kernel = system.kernel_basis();
    let basis = (0..kernel.cols())
        .map(|k| {
            (lo..=hi)
                .map(|d| {
                    let mut m = Matrix::zeros(f, g.dim(d), e.dim(d));
                    for r in 0..g.dim(d) {
                        for c in 0..e.dim(d) {
                            m.set(r, c, kernel.get(var(d, r, c), k).clone());
                        }
                    }
                    m
                })
                .collect()
        })
        .collect();
    Ok(HomSpace { lo, hi, basis })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionDiagnostics {
    pub mu_surjective: bool,
    pub mu1_surjective: bool,
    pub mu2_surjective: bool,
    /// Corank of `μ¹` on the linear first syzygies.
    pub mu1_corank: usize,
    pub mu2_corank: usize,
    /// `coker(linear part)` and `F` agree in the top window degree.
    pub coker_nu2_artinian: bool,
    pub betti_subtraction_ok: bool,
    pub presentation_linear: bool,
    /// `(β_0(E) - β_0(G), β_1(E) - β_1(G))` on the linear strand.
    pub expected_shape: (i64, i64),
    pub pencil_shape: (usize, usize),
}

impl ReductionDiagnostics {
    /// Ordering used to pick the best of several sampled morphisms.
    pub fn score(&self) -> (bool, bool, bool) {
        (self.mu2_surjective, self.coker_nu2_artinian, self.pencil_shape.0 > 0 && self.pencil_shape.1 > 0)
    }
}

#[derive(Clone, Debug)]
pub struct ReductionResult<F: Field> {
    pub kernel: GradedModuleWindow<F>,
    pub presentation: MinimalPresentation<F>,
    pub pencil: Option<LinearPencil<F>>,
    pub diagnostics: ReductionDiagnostics,
    pub mu: Vec<Matrix<F>>,
}

pub const REDUCTION_FORMAT_VERSION: u32 = 1;

impl<F: Field> ReductionResult<F> {
    pub fn to_json(&self, provenance: serde_json::Value) -> serde_json::Value {
        serde_json::json!({
            "format_version": REDUCTION_FORMAT_VERSION,
            "diagnostics": self.diagnostics,
            "kernel_dims": self.kernel.dims(),
            "kernel_lo": self.kernel.lo(),
            "presentation_betti": self.presentation.betti(),
            "pencil": self.pencil.as_ref().map(|p| p.to_document(provenance)),
        })
    }
}

/// Rank of `μ_m ⊗ id` on the Koszul cycles `Z_i(E) ⊆ E_m ⊗ Λ^i V`, and `dim Z_i(G)`.
fn koszul_cycle_map_rank<F: Field>(
    e: &GradedModuleWindow<F>,
    g: &GradedModuleWindow<F>,
    mu_m: &Matrix<F>,
    m: i64,
    i: usize,
) -> (usize, usize) {
    let f = e.field();
    let z_e = koszul_differential(e, i, m).kernel_basis();
    let z_g_dim = g.dim(m) * crate::poly::binomial(e.n() as i64 + 1, i as i64) as usize
        - koszul_differential(g, i, m).rank();
    let blocks = crate::poly::binomial(e.n() as i64 + 1, i as i64) as usize;
    let mut big = Matrix::zeros(f, 0, 0);
    for _ in 0..blocks {
        big = big.block_diag(mu_m);
    }
    (big.mul(&z_e).rank(), z_g_dim)
}

/// `F = ker μ` with hypotheses checked and the linear part extracted.
pub fn reduce<F: Field>(e: &GradedModuleWindow<F>, g: &GradedModuleWindow<F>, mu: &[Matrix<F>]) -> Result<ReductionResult<F>> {
    let g = artinian_padding(e, g)?;
    let f = e.field();
    let n = e.n();
    let (lo, hi) = (e.lo(), e.hi());
    if hi - lo < 2 {
        return Err(Error::WindowTooShort(format!("reduction needs at least three degrees, window is [{lo}, {hi}]")));
    }
    if mu.len() != (hi - lo + 1) as usize {
        return Err(Error::Shape("morphism does not cover the source window".into()));
    }
    for d in lo..=hi {
        if mu[(d - lo) as usize].rank() != g.dim(d) {
            return Err(Error::MuNotSurjective(d));
        }
    }
    let m = e.first_nonzero().ok_or_else(|| Error::NonLinearInput("source module is zero".into()))?;
    let e_pres = presentation_betti(e);
    if !e_pres.is_linearly_presented(m) {
        return Err(Error::NonLinearInput(format!("source is not linearly presented in degree {m}")));
    }
    let g_pres = presentation_betti(&g);

    let parts: Vec<Subquotient<F>> = (lo..=hi)
        .map(|d| {
            let k = mu[(d - lo) as usize].kernel_basis();
            Subquotient::new(&Matrix::zeros(f, e.dim(d), 0), &k)
        })
        .collect();
    let kernel = GradedModuleWindow::from_subquotients(f, n, lo, e, &parts);
    let presentation = minimal_presentation(&kernel, hi)?;
    let pencil = presentation.linear_part.clone();

    let mu_m = &mu[(m - lo) as usize];
    let (r1, z1) = koszul_cycle_map_rank(e, &g, mu_m, m, 1);
    let (r2, z2) = koszul_cycle_map_rank(e, &g, mu_m, m, 2);
    let mu1_surjective = r1 == z1;
    let mu2_surjective = r2 == z2;

    let expected_shape = (
        e_pres.get(0, m) as i64 - g_pres.get(0, m) as i64,
        e_pres.get(1, m + 1) as i64 - g_pres.get(1, m + 1) as i64,
    );
    let f_betti = presentation.betti();
    let beta0_ok = f_betti.get(0, m) as i64 == expected_shape.0;
    let beta1_ok = f_betti.get(1, m + 1) as i64 == expected_shape.1;
    let presentation_linear = presentation.is_linear();
    let betti_subtraction_ok = (!mu1_surjective || beta0_ok)
        && (!(mu1_surjective && mu2_surjective) || (beta1_ok && presentation_linear));

    let pencil_shape = pencil.as_ref().map_or((0, 0), |p| (p.rows(), p.cols()));
    let coker_nu2_artinian = mu1_surjective && {
        let p = pencil.as_ref().expect("kernel has generators");
        let lin = pencil_map(p, m);
        let total = p.rows() * crate::poly::ring_dim(n, hi - m);
        let generated_at_m = presentation.generator_degrees().iter().all(|&d| d == m);
        match total.checked_sub(kernel.dim(hi)) {
            // `coker(lin)` surjects onto `F`, so the rank is at most `need`.
            Some(need) if generated_at_m => lin.degree_matrix(hi).rank_at_least(need),
            _ => total - lin.degree_matrix(hi).rank() == kernel.dim(hi),
        }
    };
    Ok(ReductionResult {
        kernel,
        presentation,
        pencil,
        diagnostics: ReductionDiagnostics {
            mu_surjective: true,
            mu1_surjective,
            mu2_surjective,
            mu1_corank: z1 - r1,
            mu2_corank: z2 - r2,
            coker_nu2_artinian,
            betti_subtraction_ok,
            presentation_linear,
            expected_shape,
            pencil_shape,
        },
        mu: mu.to_vec(),
    })
}

/// The pencil as a map `R(-m-1)^b -> R(-m)^a`.
pub fn pencil_map<F: Field>(p: &LinearPencil<F>, m: i64) -> GradedFreeMap<F> {
    let f = p.field();
    let entries = (0..p.rows()).map(|r| (0..p.cols()).map(|c| p.entry(r, c)).collect()).collect::<Vec<Vec<Poly<F>>>>();
    GradedFreeMap {
        field: f.clone(),
        n: p.n(),
        source: GradedFreeModule::new(vec![m + 1; p.cols()]),
        target: GradedFreeModule::new(vec![m; p.rows()]),
        entries,
    }
}

/// Draws `μ` with random coefficients on a basis of `Hom(E, G)_0` and keeps
/// the best result by [`ReductionDiagnostics::score`]; stops early at a
/// result with every flag set.
pub fn sample_reduction<F: Field>(
    e: &GradedModuleWindow<F>,
    g: &GradedModuleWindow<F>,
    attempts: usize,
    seed: u64,
) -> Result<ReductionResult<F>> {
    let f = e.field();
    let hom = hom_degree_zero(e, g)?;
    if hom.dim() == 0 {
        return Err(Error::NoSurjectionFound(attempts));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<ReductionResult<F>> = None;
    for _ in 0..attempts {
        let coeffs: Vec<F::Elem> = (0..hom.dim()).map(|_| f.sample(&mut rng)).collect();
        let mu = hom.combine(f, &coeffs);
        let res = match reduce(e, g, &mu) {
            Ok(r) => r,
            Err(Error::MuNotSurjective(_)) => continue,
            Err(err) => return Err(err),
        };
        let top = res.diagnostics.score() == (true, true, true);
        if best.as_ref().map_or(true, |b| res.diagnostics.score() > b.diagnostics.score()) {
            best = Some(res);
        }
        if top {
            break;
        }
    }
    best.ok_or(Error::NoSurjectionFound(attempts))
}
