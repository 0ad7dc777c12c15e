//! Constant-rank certification by exhaustive finite-field scans and random
//! rational samples; skewness checks and left skew-symmetrization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};
use crate::matrix::Matrix;
use crate::pencil::LinearPencil;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankStrategy {
    /// Every point of `P^n(F_q)`.
    ExhaustiveFq(u64),
    /// `count` points with integer coordinates in `[-SAMPLE_BOUND, SAMPLE_BOUND]`.
    RandomRational { count: usize, seed: u64 },
}

pub const SAMPLE_BOUND: i64 = 1000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankProfile {
    pub min_rank: usize,
    pub max_rank: usize,
    pub min_witness: Vec<String>,
    pub max_witness: Vec<String>,
    pub strategy: RankStrategy,
    pub points_checked: usize,
}

/// Number of points of `P^n(F_q)`.
pub fn projective_point_count(n: usize, q: u64) -> u64 {
    (0..=n as u32).map(|k| q.pow(k)).sum()
}

/// The `idx`-th point of `P^n(F_q)`, normalized so that the first nonzero
/// coordinate is 1.
pub fn projective_point(n: usize, q: u64, mut idx: u64) -> Vec<u64> {
    let mut lead = 0;
    loop {
        let block = q.pow((n - lead) as u32);
        if idx < block {
            break;
        }
        idx -= block;
        lead += 1;
    }
    let mut p = vec![0; n + 1];
    p[lead] = 1;
    for c in (lead + 1..=n).rev() {
        p[c] = idx % q;
        idx /= q;
    }
    p
}

fn scan<F: Field>(a: &LinearPencil<F>, points: &[Vec<F::Elem>]) -> Result<(usize, usize, usize, usize)> {
    let ranks = points
        .par_iter()
        .map(|p| a.eval(p).map(|m| m.rank()))
        .collect::<Result<Vec<usize>>>()?;
    let (mut lo, mut hi) = (0, 0);
    for (i, r) in ranks.iter().enumerate() {
        if *r < ranks[lo] {
            lo = i;
        }
        if *r > ranks[hi] {
            hi = i;
        }
    }
    Ok((ranks[lo], lo, ranks[hi], hi))
}

pub fn rank_profile<F: Field>(a: &LinearPencil<F>, strategy: RankStrategy) -> Result<RankProfile> {
    let n = a.n();
    match strategy {
        RankStrategy::ExhaustiveFq(q) => {
            let fq = PrimeField::new(q)?;
            let red = a.reduce_mod(q)?;
            let total = projective_point_count(n, q);
            let points: Vec<Vec<u64>> = (0..total).map(|i| projective_point(n, q, i)).collect();
            let (min_rank, lo, max_rank, hi) = scan(&red, &points)?;
            let fmt = |p: &Vec<u64>| p.iter().map(|v| fq.format(v)).collect();
            Ok(RankProfile {
                min_rank,
                max_rank,
                min_witness: fmt(&points[lo]),
                max_witness: fmt(&points[hi]),
                strategy,
                points_checked: points.len(),
            })
        }
        RankStrategy::RandomRational { count, seed } => {
            let f = a.field();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut points = Vec::with_capacity(count);
            while points.len() < count.max(1) {
                let p: Vec<i64> = (0..=n).map(|_| rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND)).collect();
                let p: Vec<F::Elem> = p.into_iter().map(|v| f.from_i64(v)).collect();
                if p.iter().any(|v| !f.is_zero(v)) {
                    points.push(p);
                }
            }
            let (min_rank, lo, max_rank, hi) = scan(a, &points)?;
            let fmt = |p: &Vec<F::Elem>| p.iter().map(|v| f.format(v)).collect();
            Ok(RankProfile {
                min_rank,
                max_rank,
                min_witness: fmt(&points[lo]),
                max_witness: fmt(&points[hi]),
                strategy,
                points_checked: points.len(),
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificationPlan {
    pub primes: Vec<u64>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for CertificationPlan {
    fn default() -> Self {
        CertificationPlan { primes: vec![5, 7], samples: 1000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Certified { rank: usize, profiles: Vec<RankProfile> },
    Refuted { expected: usize, rank: usize, witness: Vec<String>, strategy: RankStrategy },
    Inconclusive { reason: String, profiles: Vec<RankProfile> },
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Certified { .. } => 0,
            Verdict::Refuted { .. } => 2,
            Verdict::Inconclusive { .. } => 3,
        }
    }
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified { .. })
    }
}

/// Rank of the pencil over its own field at the symmetric lift of an F_q point.
fn lifted_rank<F: Field>(a: &LinearPencil<F>, q: u64, witness: &[String]) -> Result<usize> {
    let fq = PrimeField::new(q)?;
    let f = a.field();
    let point = witness
        .iter()
        .map(|s| fq.parse(s).map(|v| f.from_i64(fq.lift(v))))
        .collect::<Result<Vec<_>>>()?;
    Ok(a.eval(&point)?.rank())
}

/// Checks that every point has rank `rho`. A drop seen only after reduction
/// mod `q` (the lifted point has rank `rho`) disqualifies that prime without
/// refuting the pencil.
pub fn assert_constant_rank<F: Field>(a: &LinearPencil<F>, rho: usize, plan: &CertificationPlan) -> Verdict {
    let mut profiles = Vec::new();
    let mut notes = Vec::new();
    let mut clean_primes = 0;
    for &q in &plan.primes {
        let strategy = RankStrategy::ExhaustiveFq(q);
        let p = match rank_profile(a, strategy) {
            Ok(p) => p,
            Err(e) => {
                notes.push(format!("q={q}: {e}"));
                continue;
            }
        };
        if p.max_rank > rho {
            return Verdict::Refuted { expected: rho, rank: p.max_rank, witness: p.max_witness, strategy };
        }
        if p.min_rank < rho {
            match lifted_rank(a, q, &p.min_witness) {
                Ok(r) if r < rho => {
                    return Verdict::Refuted { expected: rho, rank: p.min_rank, witness: p.min_witness, strategy }
                }
                _ => notes.push(format!("q={q}: rank drop only after reduction at {:?}", p.min_witness)),
            }
        } else {
            clean_primes += 1;
        }
        profiles.push(p);
    }
    let strategy = RankStrategy::RandomRational { count: plan.samples, seed: plan.seed };
    let mut samples_ok = false;
    match rank_profile(a, strategy) {
        Ok(p) if plan.samples > 0 => {
            if p.max_rank > rho {
                return Verdict::Refuted { expected: rho, rank: p.max_rank, witness: p.max_witness, strategy };
            }
            if p.min_rank < rho {
                return Verdict::Refuted { expected: rho, rank: p.min_rank, witness: p.min_witness, strategy };
            }
            profiles.push(p);
            samples_ok = true;
        }
        Ok(_) => notes.push("no random samples requested".into()),
        Err(e) => notes.push(format!("samples: {e}")),
    }
    if clean_primes >= 2 && samples_ok {
        Verdict::Certified { rank: rho, profiles }
    } else {
        let reason = if notes.is_empty() {
            format!("{clean_primes} clean prime scan(s); at least two are required")
        } else {
            notes.join("; ")
        };
        Verdict::Inconclusive { reason, profiles }
    }
}

pub fn is_skew<F: Field>(a: &LinearPencil<F>) -> bool {
    let f = a.field();
    a.rows() == a.cols() && a.coeffs().iter().all(|m| m.transpose() == m.scale(&f.neg(&f.one())))
}

/// An invertible `S` with `S·A(x)` skew for all `x`, if a random element of
/// the solution space is invertible within a few draws.
pub fn left_skew_symmetrize<F: Field>(a: &LinearPencil<F>, seed: u64) -> Result<Option<Matrix<F>>> {
    let (rows, cols) = (a.rows(), a.cols());
    if rows != cols {
        return Err(Error::NotSquare(rows, cols));
    }
    let f = a.field();
    let k = rows;
    // Unknown S[u][w] at index u*k + w; (S A)_{rc} = Σ_w S[r][w] A[w][c].
    let mut eqs = Vec::new();
    for m in a.coeffs() {
        for r in 0..k {
            for c in r..k {
                let mut row = vec![f.zero(); k * k];
                for w in 0..k {
                    row[r * k + w] = f.add(&row[r * k + w], m.get(w, c));
                    row[c * k + w] = f.add(&row[c * k + w], m.get(w, r));
                }
                eqs.push(row);
            }
        }
    }
    let system = Matrix::from_rows(f, eqs)?;
    let kernel = system.kernel_basis();
    if kernel.cols() == 0 {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..16 {
        let coeffs: Vec<F::Elem> = (0..kernel.cols())
            .map(|j| if kernel.cols() == 1 || attempt == 0 && j == 0 { f.one() } else { f.sample(&mut rng) })
            .collect();
        let v = kernel.mul_vec(&coeffs);
        let s = Matrix::from_vec(f, k, k, v)?;
        if s.rank() == k {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Upper triangles (diagonal included) of the built-in 10x10 skew pencil, one
/// string per row; entries below the diagonal are filled in by skew symmetry.
const SKEW_UPPER: [[&str; 10]; 4] = [
    [
        "0 108 594 54 36 876 108 18 0 0",
        "0 0 0 -18 192 0 -36 0 0",
        "0 0 36 192 0 18 0 0",
        "0 0 0 0 0 0 0",
        "0 18 18 0 0 0",
        "0 -48 -36 0 0",
        "0 -36 0 0",
        "0 0 0",
        "0 0",
        "0",
    ],
    [
        "0 -324 162 0 -64 -492 -324 -193/4 0 0",
        "0 0 0 -16 48 0 -41/2 0 0",
        "0 0 -16 264 0 -163/4 0 0",
        "0 0 24 0 -9/4 0 0",
        "0 16 4 0 0 0",
        "0 -48 -89/2 0 0",
        "0 -17/2 0 0",
        "0 27/2 0",
        "0 0",
        "0",
    ],
    [
        "0 -438 -534 -108 -36 -1590 -495/2 -36 -324 54",
        "0 300 0 18 0 -75 18 0 0",
        "0 -54 -36 -876 -705/2 -36 0 0",
        "0 0 0 -27/2 0 0 0",
        "0 -18 -18 0 0 0",
        "0 -219 18 0 0",
        "0 18 81 0",
        "0 0 0",
        "0 0",
        "0",
    ],
    [
        "0 -498 978 319/4 64 1058/3 -438 64 0 0",
        "0 612 23/2 16 368/3 -48 16 0 0",
        "0 -35/4 16 -2116/3 -444 16 0 0",
        "0 0 -23/2 1/2 0 27/2 0",
        "0 -16 -4 0 0 0",
        "0 -128/3 16 144 -24",
        "0 4 0 0",
        "0 0 0",
        "0 0",
        "0",
    ],
];

/// The built-in 10x10 skew pencil on `P^3`, completed from its upper triangles.
pub fn skew_example() -> LinearPencil<Rationals> {
    let q = Rationals;
    let coeffs = SKEW_UPPER
        .iter()
        .map(|rows| {
            let mut m = Matrix::zeros(&q, 10, 10);
            for (r, line) in rows.iter().enumerate() {
                for (off, tok) in line.split_whitespace().enumerate() {
                    let v = q.parse(tok).expect("built-in entry");
                    let c = r + off;
                    if r != c {
                        m.set(c, r, q.neg(&v));
                    }
                    m.set(r, c, v);
                }
            }
            m
        })
        .collect();
    LinearPencil::new(&q, coeffs).expect("built-in shape")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_points(n: usize, q: u64) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        let total = q.pow(n as u32 + 1);
        for mut i in 0..total {
            let mut p = vec![0; n + 1];
            for c in (0..=n).rev() {
                p[c] = i % q;
                i /= q;
            }
            if let Some(first) = p.iter().find(|v| **v != 0) {
                if *first == 1 {
                    out.push(p);
                }
            }
        }
        out
    }

    #[test]
    fn point_enumeration_is_a_bijection() {
        for (n, q) in [(1, 5), (2, 7), (3, 5)] {
            let mut ours: Vec<_> = (0..projective_point_count(n, q)).map(|i| projective_point(n, q, i)).collect();
            ours.sort();
            assert_eq!(ours, brute_points(n, q));
        }
        assert_eq!(projective_point_count(3, 7), 400);
        assert_eq!(projective_point_count(2, 7), 57);
    }

    #[test]
    fn zero_pencil_has_rank_zero() {
        let z = LinearPencil::zero(&Rationals, 2, 3, 4);
        let p = rank_profile(&z, RankStrategy::ExhaustiveFq(5)).unwrap();
        assert_eq!((p.min_rank, p.max_rank, p.points_checked), (0, 0, 31));
    }

    #[test]
    fn skew_example_is_skew_with_even_constant_rank() {
        let a = skew_example();
        assert!(is_skew(&a));
        assert_eq!(a.eval(&[Rationals.one(), Rationals.zero(), Rationals.zero(), Rationals.zero()]).unwrap().get(0, 7), &Rationals.from_i64(18));
        let p = rank_profile(&a, RankStrategy::ExhaustiveFq(7)).unwrap();
        assert_eq!((p.min_rank, p.max_rank), (8, 8));
        assert_eq!(p.points_checked, 400);
    }

    #[test]
    fn denominators_block_reduction() {
        let q = Rationals;
        let a = LinearPencil::from_linear_forms(&q, 1, &[vec![vec![q.parse("1/35").unwrap(), q.one()]]]).unwrap();
        assert!(matches!(rank_profile(&a, RankStrategy::ExhaustiveFq(5)), Err(Error::FieldReductionImpossible { .. })));
        let v = assert_constant_rank(&a, 1, &CertificationPlan { primes: vec![5, 7], samples: 10, seed: 1 });
        assert_eq!(v.exit_code(), 3);
    }

    #[test]
    fn rank_drop_is_refuted() {
        let q = Rationals;
        // [[x0, x1]] has rank 1 everywhere; [[x0, 0]] drops at (0:1).
        let good = LinearPencil::from_linear_forms(&q, 1, &[vec![vec![q.one(), q.zero()], vec![q.zero(), q.one()]]]).unwrap();
        assert!(assert_constant_rank(&good, 1, &CertificationPlan::default()).is_certified());
        let bad = LinearPencil::from_linear_forms(&q, 1, &[vec![vec![q.one(), q.zero()], vec![q.zero(), q.zero()]]]).unwrap();
        match assert_constant_rank(&bad, 1, &CertificationPlan::default()) {
            Verdict::Refuted { rank, witness, .. } => {
                assert_eq!(rank, 0);
                assert_eq!(witness, vec!["0", "1"]);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn reduction_artifacts_do_not_refute() {
        let q = Rationals;
        // [[x0, 5 x1]] over Q has rank 1 everywhere; mod 5 it drops at (0:1).
        let a = LinearPencil::from_linear_forms(&q, 1, &[vec![vec![q.one(), q.zero()], vec![q.zero(), q.from_i64(5)]]]).unwrap();
        let v = assert_constant_rank(&a, 1, &CertificationPlan::default());
        assert_eq!(v.exit_code(), 3, "{v:?}");
        assert!(assert_constant_rank(&a, 1, &CertificationPlan { primes: vec![7, 11], ..Default::default() }).is_certified());
    }

    #[test]
    fn left_symmetrization_undoes_a_row_change() {
        let q = Rationals;
        let a = skew_example();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = loop {
            let data = (0..100).map(|_| q.sample(&mut rng)).collect();
            let p = Matrix::from_vec(&q, 10, 10, data).unwrap();
            if p.rank() == 10 {
                break p;
            }
        };
        let b = a.transform(&p, &Matrix::identity(&q, 10));
        assert!(!is_skew(&b));
        let s = left_skew_symmetrize(&b, 5).unwrap().expect("symmetrizable");
        assert!(is_skew(&b.transform(&s, &Matrix::identity(&q, 10))));
    }

    #[test]
    fn generic_pencil_is_not_symmetrizable() {
        let q = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let coeffs = (0..4)
            .map(|_| Matrix::from_vec(&q, 4, 4, (0..16).map(|_| q.sample(&mut rng)).collect()).unwrap())
            .collect();
        let a = LinearPencil::new(&q, coeffs).unwrap();
        assert!(left_skew_symmetrize(&a, 0).unwrap().is_none());
        assert!(matches!(left_skew_symmetrize(&LinearPencil::zero(&q, 1, 2, 3), 0), Err(Error::NotSquare(2, 3))));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn profile_is_invariant_under_basis_change(seed in 0u64..1000) {
            let f = PrimeField::new(7).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coeffs = (0..3).map(|_| Matrix::from_vec(&f, 3, 4, (0..12).map(|_| f.sample(&mut rng)).collect()).unwrap()).collect();
            let a = LinearPencil::new(&f, coeffs).unwrap();
            let invertible = |rng: &mut ChaCha8Rng, k: usize| loop {
                let m = Matrix::from_vec(&f, k, k, (0..k * k).map(|_| f.sample(rng)).collect()).unwrap();
                if m.rank() == k { break m; }
            };
            let (l, r) = (invertible(&mut rng, 3), invertible(&mut rng, 4));
            let b = a.transform(&l, &r);
            let pa = rank_profile(&a, RankStrategy::ExhaustiveFq(7)).unwrap();
            let pb = rank_profile(&b, RankStrategy::ExhaustiveFq(7)).unwrap();
            proptest::prop_assert_eq!((pa.min_rank, pa.max_rank), (pb.min_rank, pb.max_rank));
        }
    }
}
