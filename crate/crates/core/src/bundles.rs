//! Source modules and pencils: Westwick pencils, the line-bundle pipeline,
//! generalized Steiner modules, cohomology modules of linear monads and
//! projections of pencils.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::{koszul_residue, CandidateKind, CandidateSpec};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::free::{GradedFreeMap, GradedFreeModule};
use crate::matrix::{Matrix, Subquotient};
use crate::pencil::LinearPencil;
use crate::poly::{binomial, monomial_basis, Poly};
use crate::reduction::{sample_reduction, ReductionDiagnostics, ReductionResult};
use crate::resolution::minimal_presentation;
use crate::window::{FreeAction, GradedModuleWindow};

/// `H_{n,k}`: a `(kn+1) x (kn+n-1)` pencil on `P^n`. With 1-based indices,
/// `h_{i,j} = x_{j-i+1}` when `0 <= j-i+1 <= n`, scaled by `a-j+i-1` in the
/// columns `j = a(k+1)`.
pub fn westwick_pencil<F: Field>(field: &F, n: usize, k: usize) -> LinearPencil<F> {
    let rows = k * n + 1;
    let cols = k * n + n - 1;
    let mut p = LinearPencil::zero(field, n, rows, cols);
    let mut coeffs: Vec<Matrix<F>> = p.coeffs().to_vec();
    for i in 1..=rows as i64 {
        for j in 1..=cols as i64 {
            let l = j - i + 1;
            if !(0..=n as i64).contains(&l) {
                continue;
            }
            let c = if j % (k as i64 + 1) != 0 { 1 } else { j / (k as i64 + 1) - j + i - 1 };
            coeffs[l as usize].set((i - 1) as usize, (j - 1) as usize, field.from_i64(c));
        }
    }
    p = LinearPencil::new(field, coeffs).expect("uniform shape");
    p
}

/// The 5x5 pencil of constant rank 4 obtained from `R_{>=2}` on `P^2`.
pub fn westwick_display<F: Field>(field: &F) -> LinearPencil<F> {
    // Each entry is (sign, variable); sign 0 means zero.
    let rows: [[(i64, usize); 5]; 5] = [
        [(-1, 1), (-1, 2), (0, 0), (0, 0), (0, 0)],
        [(1, 0), (-1, 1), (-1, 2), (0, 0), (0, 0)],
        [(0, 0), (1, 0), (0, 0), (-1, 2), (0, 0)],
        [(0, 0), (0, 0), (1, 0), (1, 1), (-1, 2)],
        [(0, 0), (0, 0), (0, 0), (1, 0), (1, 1)],
    ];
    let entries: Vec<Vec<Vec<F::Elem>>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|&(s, v)| (0..3).map(|i| field.from_i64(if i == v { s } else { 0 })).collect())
                .collect()
        })
        .collect();
    LinearPencil::from_linear_forms(field, 2, &entries).expect("5x5 forms")
}

/// Signs with `b(x) = diag(rows) · a(vars ∘ x) · diag(cols)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignNormalization {
    pub var_signs: Vec<i8>,
    pub row_signs: Vec<i8>,
    pub col_signs: Vec<i8>,
}

/// Searches variable sign flips, then propagates row and column signs along
/// the nonzero entries.
pub fn sign_normalization<F: Field>(a: &LinearPencil<F>, b: &LinearPencil<F>) -> Option<SignNormalization> {
    let f = a.field();
    if (a.n(), a.rows(), a.cols()) != (b.n(), b.rows(), b.cols()) {
        return None;
    }
    let (n, rows, cols) = (a.n(), a.rows(), a.cols());
    // (variable, row, col, sign relating b to a)
    let mut rel = Vec::new();
    for v in 0..=n {
        for r in 0..rows {
            for c in 0..cols {
                let (x, y) = (a.coeff(v).get(r, c), b.coeff(v).get(r, c));
                match (f.is_zero(x), f.is_zero(y)) {
                    (true, true) => {}
                    (false, false) if x == y => rel.push((v, r, c, 1i8)),
                    (false, false) if f.neg(x) == *y => rel.push((v, r, c, -1i8)),
                    _ => return None,
                }
            }
        }
    }
    'flips: for mask in 0u32..(1 << (n + 1)) {
        let var_signs: Vec<i8> = (0..=n).map(|v| if mask >> v & 1 == 1 { -1 } else { 1 }).collect();
        let mut sign: Vec<Option<i8>> = vec![None; rows + cols];
        let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); rows + cols];
        for &(v, r, c, s) in &rel {
            let p = s * var_signs[v];
            adj[r].push((rows + c, p));
            adj[rows + c].push((r, p));
        }
        for start in 0..rows + cols {
            if sign[start].is_some() {
                continue;
            }
            sign[start] = Some(1);
            let mut queue = vec![start];
            while let Some(u) = queue.pop() {
                let su = sign[u].expect("visited");
                for &(w, p) in &adj[u] {
                    match sign[w] {
                        None => {
                            sign[w] = Some(su * p);
                            queue.push(w);
                        }
                        Some(sw) if sw != su * p => continue 'flips,
                        Some(_) => {}
                    }
                }
            }
        }
        let sign: Vec<i8> = sign.into_iter().map(|s| s.expect("assigned")).collect();
        return Some(SignNormalization { var_signs, row_signs: sign[..rows].to_vec(), col_signs: sign[rows..].to_vec() });
    }
    None
}

impl SignNormalization {
    pub fn apply<F: Field>(&self, a: &LinearPencil<F>) -> LinearPencil<F> {
        let f = a.field();
        let diag = |signs: &[i8]| {
            let mut m = Matrix::zeros(f, signs.len(), signs.len());
            for (i, s) in signs.iter().enumerate() {
                m.set(i, i, f.from_i64(i64::from(*s)));
            }
            m
        };
        let coeffs = a
            .coeffs()
            .iter()
            .zip(&self.var_signs)
            .map(|(m, s)| diag(&self.row_signs).mul(m).mul(&diag(&self.col_signs)).scale(&f.from_i64(i64::from(*s))))
            .collect();
        LinearPencil::new(f, coeffs).expect("same shape")
    }
}

/// Output of the line-bundle pipeline on `P^2`.
#[derive(Clone, Debug)]
pub struct LineBundlePencil<F: Field> {
    pub pencil: LinearPencil<F>,
    pub source_strand: (usize, usize),
    /// Label of the subtracted module; `None` when `R_{>=s}` is presented directly.
    pub subtracted: Option<String>,
    pub diagnostics: Option<ReductionDiagnostics>,
}

/// `(2s+1) x (2s+1)` pencil of constant rank `2s` from `R_{>=s}` on `P^2`,
/// reduced by the pure module with degree sequence `(0,1,2,s+1)` generated in
/// degree `s`. For `s = 1` the presentation of `R_{>=1}` already has that shape.
pub fn line_bundle_pipeline<F: Field>(field: &F, s: usize, seed: u64) -> Result<LineBundlePencil<F>> {
    if s == 0 {
        return Err(Error::OutOfRange(0));
    }
    let n = 2;
    let m = s as i64;
    let hi = 2 * m + 2;
    let e = GradedModuleWindow::free(field, n, &[0], 0, hi).truncate(m)?;
    let source = minimal_presentation(&e, hi)?;
    let source_strand = (source.generator_degrees().len(), source.relation_degrees().len());
    if s == 1 {
        let pencil = source.linear_part.ok_or_else(|| Error::RootNotLinear("R_{>=1} has no linear part".into()))?;
        return Ok(LineBundlePencil { pencil, source_strand, subtracted: None, diagnostics: None });
    }
    let kind = if s == 2 { CandidateKind::Koszul } else { CandidateKind::MatlisPower { t: s - 1 } };
    let spec = CandidateSpec::pure(kind, 1, m, n);
    let g = spec.build(field, hi)?;
    const RESEEDS: u64 = 8;
    for k in 0..RESEEDS {
        let r = match sample_reduction(&e, &g.window, 8, seed.wrapping_add(k)) {
            Ok(r) => r,
            Err(Error::NoSurjectionFound(_)) => continue,
            Err(err) => return Err(err),
        };
        if r.diagnostics.score() == (true, true, true) && r.diagnostics.pencil_shape == (2 * s + 1, 2 * s + 1) {
            let pencil = r.pencil.expect("pencil present");
            return Ok(LineBundlePencil { pencil, source_strand, subtracted: Some(spec.label()), diagnostics: Some(r.diagnostics) });
        }
    }
    Err(Error::NoSurjectionFound((RESEEDS * 8) as usize))
}

fn random_form<F: Field, R: Rng>(field: &F, n: usize, degree: usize, rng: &mut R) -> Poly<F> {
    let mut p = Poly::zero(n);
    for mono in monomial_basis(n, degree) {
        p.add_term(field, mono, field.sample(rng));
    }
    p
}

fn random_point<F: Field, R: Rng>(field: &F, n: usize, rng: &mut R) -> Vec<F::Elem> {
    loop {
        let p: Vec<F::Elem> = (0..=n).map(|_| field.from_i64(rng.gen_range(-1000..=1000))).collect();
        if p.iter().any(|v| !field.is_zero(v)) {
            return p;
        }
    }
}

const POINT_CHECKS: usize = 16;

/// `dim_d` of the cokernel of `R(-m-1)^s -> R^{s+r}` when the map is injective.
pub fn steiner_dim(n: usize, s: usize, r: usize, m: i64, d: i64) -> usize {
    let dim = |e: i64| if e < 0 { 0 } else { binomial(e + n as i64, n as i64) as usize };
    dim(d) * (s + r) - dim(d - m - 1) * s
}

/// Section module window `[0, hi]` of the cokernel of a random
/// `φ: R(-m-1)^s -> R^{s+r}`. Samples that drop rank at a test point or fail
/// the dimension count are redrawn a few times before giving up.
pub fn steiner_module<F: Field>(field: &F, n: usize, s: usize, r: usize, m: i64, hi: i64, seed: u64) -> Result<GradedModuleWindow<F>> {
    if r < n || s == 0 || m < 0 {
        return Err(Error::Shape(format!("Steiner data needs r >= n, s >= 1, m >= 0 (n={n}, s={s}, r={r}, m={m})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        let entries: Vec<Vec<Poly<F>>> =
            (0..s + r).map(|_| (0..s).map(|_| random_form(field, n, (m + 1) as usize, &mut rng)).collect()).collect();
        let phi = GradedFreeMap::new(
            field,
            n,
            GradedFreeModule::new(vec![m + 1; s]),
            GradedFreeModule::new(vec![0; s + r]),
            entries,
        )?;
        let degenerate = (0..POINT_CHECKS).any(|_| phi.eval(&random_point(field, n, &mut rng)).rank() < s);
        if degenerate {
            continue;
        }
        let w = GradedModuleWindow::from_presentation(&phi, 0, hi.max(m + 1))?;
        if (0..=w.hi()).all(|d| w.dim(d) == steiner_dim(n, s, r, m, d)) {
            return if hi < m + 1 { w.restrict_hi(hi) } else { Ok(w) };
        }
    }
    Err(Error::DegenerateSample(format!("no nondegenerate map found for n={n}, s={s}, r={r}, m={m}")))
}

/// A monad `A --f--> B --g--> C` of free modules.
#[derive(Clone, Debug)]
pub struct MonadSpec<F: Field> {
    pub n: usize,
    pub a: GradedFreeModule,
    pub b: GradedFreeModule,
    pub c: GradedFreeModule,
    pub f: GradedFreeMap<F>,
    pub g: GradedFreeMap<F>,
}

impl<F: Field> MonadSpec<F> {
    /// `g ∘ f = 0`, `f(x)` injective and `g(x)` surjective at random points.
    pub fn check(&self, seed: u64) -> Result<()> {
        if !self.g.compose(&self.f)?.is_zero() {
            return Err(Error::MonadConditionFailed("g f is not zero".into()));
        }
        let field = &self.f.field;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..POINT_CHECKS {
            let p = random_point(field, self.n, &mut rng);
            if self.f.eval(&p).rank() < self.a.rank() || self.g.eval(&p).rank() < self.c.rank() {
                return Err(Error::MonadConditionFailed(format!("rank drops at {:?}", p.iter().map(|v| field.format(v)).collect::<Vec<_>>())));
            }
        }
        Ok(())
    }

    /// Rank of the middle cohomology sheaf.
    pub fn sheaf_rank(&self) -> usize {
        self.b.rank() - self.a.rank() - self.c.rank()
    }
}

/// `ker g_d / im f_d` on `[lo, hi]` with the induced action.
pub fn monad_cohomology_module<F: Field>(spec: &MonadSpec<F>, lo: i64, hi: i64, seed: u64) -> Result<GradedModuleWindow<F>> {
    if hi <= lo {
        return Err(Error::WindowTooShort(format!("monad window [{lo}, {hi}] needs two degrees")));
    }
    spec.check(seed)?;
    let field = &spec.f.field;
    let parts: Vec<Subquotient<F>> = (lo..=hi)
        .map(|d| Subquotient::new(&spec.f.degree_matrix(d), &spec.g.degree_matrix(d).kernel_basis()))
        .collect();
    let ambient = FreeAction { field, n: spec.n, module: &spec.b };
    Ok(GradedModuleWindow::from_subquotients(field, spec.n, lo, &ambient, &parts))
}

fn linear_entries<F: Field>(field: &F, rows: &[Vec<Vec<i64>>]) -> Vec<Vec<Poly<F>>> {
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|form| {
                    let coeffs: Vec<F::Elem> = form.iter().map(|&v| field.from_i64(v)).collect();
                    Poly::linear(field, &coeffs)
                })
                .collect()
        })
        .collect()
}

fn instanton_modules(k: usize, r: usize) -> (GradedFreeModule, GradedFreeModule, GradedFreeModule) {
    (GradedFreeModule::new(vec![1; k]), GradedFreeModule::new(vec![0; 2 * k + r]), GradedFreeModule::new(vec![-1; k]))
}

/// The special charge-2 rank-2 instanton monad `R(-1)^2 -> R^6 -> R(1)^2` on `P^3`.
pub fn special_instanton_monad<F: Field>(field: &F) -> MonadSpec<F> {
    let x = |i: usize| {
        let mut v = vec![0i64; 4];
        v[i] = 1;
        v
    };
    let neg = |i: usize| {
        let mut v = vec![0i64; 4];
        v[i] = -1;
        v
    };
    let z = vec![0i64; 4];
    let f_rows = vec![
        vec![z.clone(), x(1)],
        vec![x(1), x(0)],
        vec![x(0), z.clone()],
        vec![z.clone(), neg(3)],
        vec![neg(3), neg(2)],
        vec![neg(2), z.clone()],
    ];
    let g_rows = vec![
        vec![x(2), x(3), z.clone(), x(0), x(1), z.clone()],
        vec![z.clone(), x(2), x(3), z.clone(), x(0), x(1)],
    ];
    let (a, b, c) = instanton_modules(2, 2);
    let f = GradedFreeMap::new(field, 3, a.clone(), b.clone(), linear_entries(field, &f_rows)).expect("f");
    let g = GradedFreeMap::new(field, 3, b.clone(), c.clone(), linear_entries(field, &g_rows)).expect("g");
    MonadSpec { n: 3, a, b, c, f, g }
}

/// Null-correlation monad `R(-1) -> R^4 -> R(1)` with `f = P x` and
/// `g = (J P x)^T` for a random invertible `P` and the standard symplectic `J`.
pub fn null_correlation_monad<F: Field>(field: &F, seed: u64) -> MonadSpec<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = loop {
        let m = Matrix::from_vec(field, 4, 4, (0..16).map(|_| field.sample(&mut rng)).collect()).expect("4x4");
        if m.rank() == 4 {
            break m;
        }
    };
    let j = Matrix::from_i64_rows(field, &[vec![0, 1, 0, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, -1, 0]]);
    let jp = j.mul(&p);
    let f_entries = (0..4).map(|r| vec![Poly::linear(field, p.row(r))]).collect();
    let g_entries = vec![(0..4).map(|c| Poly::linear(field, jp.row(c))).collect()];
    let (a, b, c) = (GradedFreeModule::new(vec![1]), GradedFreeModule::new(vec![0; 4]), GradedFreeModule::new(vec![-1]));
    let f = GradedFreeMap::new(field, 3, a.clone(), b.clone(), f_entries).expect("f");
    let g = GradedFreeMap::new(field, 3, b.clone(), c.clone(), g_entries).expect("g");
    MonadSpec { n: 3, a, b, c, f, g }
}

/// Random instanton-type monad `R(-1)^k -> R^{2k+r} -> R(1)^k` on `P^3`:
/// `g` is random and the columns of `f` are random linear syzygies of `g`.
pub fn random_instanton_monad<F: Field>(field: &F, k: usize, r: usize, seed: u64) -> Result<MonadSpec<F>> {
    let n = 3;
    let (a, b, c) = instanton_modules(k, r);
    let width = 2 * k + r;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..8u64 {
        let g_entries: Vec<Vec<Poly<F>>> =
            (0..k).map(|_| (0..width).map(|_| random_form(field, n, 1, &mut rng)).collect()).collect();
        let g = GradedFreeMap::new(field, n, b.clone(), c.clone(), g_entries)?;
        // Linear syzygies of g: kernel of g in degree 1 of B.
        let syz = g.degree_matrix(1).kernel_basis();
        if syz.cols() < k {
            continue;
        }
        let combos = Matrix::from_vec(field, syz.cols(), k, (0..syz.cols() * k).map(|_| field.sample(&mut rng)).collect())?;
        let cols = syz.mul(&combos);
        let elements: Vec<(i64, Vec<F::Elem>)> = (0..k).map(|j| (1, cols.column(j))).collect();
        let f = GradedFreeMap::from_elements(field, n, b.clone(), &elements);
        let spec = MonadSpec { n, a: a.clone(), b: b.clone(), c: c.clone(), f, g };
        if spec.check(seed ^ attempt).is_ok() {
            return Ok(spec);
        }
    }
    Err(Error::MonadConditionFailed(format!("no random monad found for k={k}, r={r}")))
}

/// Upper end of the window used for the special instanton section module.
pub const INSTANTON_WINDOW_HI: i64 = 6;

/// Section module of the special instanton on `[0, INSTANTON_WINDOW_HI]`.
pub fn special_instanton_module<F: Field>(field: &F, seed: u64) -> Result<GradedModuleWindow<F>> {
    monad_cohomology_module(&special_instanton_monad(field), 0, INSTANTON_WINDOW_HI, seed)
}

/// Reduction of the section module truncated at 2 by `k(-2)^2`, sampling
/// `attempts` morphisms. The expected linear part is `10 x 10` of rank 8.
pub fn special_instanton_reduction<F: Field>(field: &F, seed: u64, attempts: usize) -> Result<ReductionResult<F>> {
    let e = special_instanton_module(field, seed)?.truncate(2)?;
    let g = koszul_residue(field, 2, 2, 3)?;
    sample_reduction(&e, &g.window, attempts, seed)
}

/// `L · A(x) · R` for random full-rank constant `L` (alpha x rows) and
/// `R` (cols x beta). The full shape returns `A` unchanged.
pub fn project_pencil<F: Field>(a: &LinearPencil<F>, alpha: usize, beta: usize, seed: u64) -> Result<LinearPencil<F>> {
    if alpha > a.rows() || beta > a.cols() {
        return Err(Error::Shape(format!("cannot project {}x{} to {alpha}x{beta}", a.rows(), a.cols())));
    }
    if alpha == a.rows() && beta == a.cols() {
        return Ok(a.clone());
    }
    let f = a.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut full_rank = |r: usize, c: usize| loop {
        let m = Matrix::from_vec(f, r, c, (0..r * c).map(|_| f.sample(&mut rng)).collect()).expect("shape");
        if m.rank() == r.min(c) {
            break m;
        }
    };
    let left = full_rank(alpha, a.rows());
    let right = full_rank(a.cols(), beta);
    Ok(a.transform(&left, &right))
}
