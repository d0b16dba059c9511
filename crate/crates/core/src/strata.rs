//! Jet-separation matrices and codimension estimates for the singular
//! strata of the family, plus the per-fiber surjectivity criterion used
//! on members with isolated singularities.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{
    clear_denominators, rank_of_integer_columns, rat_int, ExactMatrix, Rational,
};
use crate::poly::{
    binom, jacobian_generators, monomial_basis, monomial_index, stabilization_degree,
    tjurina_total, HomogPoly, ProblemSpec, Tjurina,
};

/// Points of P^n with a jet order and a bundle degree: the data of one
/// jet-separation question for O(d).
#[derive(Debug, Clone)]
pub struct JetSpec {
    /// homogeneous coordinate vectors, pairwise non-proportional
    pub points: Vec<Vec<Rational>>,
    pub r: usize,
    pub d: usize,
}

fn proportional(a: &[Rational], b: &[Rational]) -> bool {
    // rank of the 2 x (n+1) coordinate matrix is < 2
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    true
}

impl JetSpec {
    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::InvalidArgument("need at least one point".into()));
        }
        let n_vars = self.points[0].len();
        for p in &self.points {
            if p.len() != n_vars {
                return Err(Error::DimensionMismatch {
                    expected: n_vars,
                    got: p.len(),
                });
            }
            if p.iter().all(|c| c.is_zero()) {
                return Err(Error::InvalidArgument("zero coordinate vector".into()));
            }
        }
        for i in 0..self.points.len() {
            for j in (i + 1)..self.points.len() {
                if proportional(&self.points[i], &self.points[j]) {
                    return Err(Error::CoincidentPoints);
                }
            }
        }
        Ok(())
    }
}

/// Jet rows of one point: all derivatives of order <= r of the
/// dehomogenized monomials of S_d, in the affine chart of the largest
/// coordinate (first maximum). Row order: derivative multi-indices by
/// total order, graded-lex within.
fn jet_rows_at_point(
    point: &[Rational],
    r: usize,
    d: usize,
    basis: &[crate::poly::Exps],
) -> Vec<Vec<Rational>> {
    let n_vars = point.len();
    let n = n_vars - 1;
    // chart: first coordinate of maximal absolute value
    let mut chart = 0usize;
    for i in 1..n_vars {
        if point[i].abs() > point[chart].abs() {
            chart = i;
        }
    }
    let affine: Vec<usize> = (0..n_vars).filter(|&i| i != chart).collect();
    // affine coordinates of the point
    let u: Vec<Rational> = affine.iter().map(|&i| &point[i] / &point[chart]).collect();
    let mut gammas: Vec<Vec<u8>> = Vec::new();
    for order in 0..=r {
        gammas.extend(monomial_basis(n, order));
    }
    let mut rows = Vec::with_capacity(gammas.len());
    for gamma in &gammas {
        let mut row = Vec::with_capacity(basis.len());
        for mono in basis {
            debug_assert_eq!(mono.iter().map(|&e| e as usize).sum::<usize>(), d);
            // d^gamma of prod_i u_i^{mono[affine[i]]} evaluated at u
            let mut val = rat_int(1);
            let mut zero = false;
            for (t, &i) in affine.iter().enumerate() {
                let e = mono[i] as i64;
                let g = gamma[t] as i64;
                if g > e {
                    zero = true;
                    break;
                }
                for s in 0..g {
                    val *= rat_int(e - s);
                }
                for _ in 0..(e - g) {
                    val *= &u[t];
                }
            }
            row.push(if zero { Rational::zero() } else { val });
        }
        rows.push(row);
    }
    rows
}

/// The restriction matrix `S_d -> (+)_i (jets of order r at x_i)`.
pub fn jet_matrix(spec: &JetSpec) -> Result<ExactMatrix> {
    spec.validate()?;
    let n_vars = spec.points[0].len();
    let n = n_vars - 1;
    let basis = monomial_basis(n_vars, spec.d);
    let jet_dim = binom(n + spec.r, n);
    let mut mat = ExactMatrix::new(spec.points.len() * jet_dim, basis.len());
    for (pi, point) in spec.points.iter().enumerate() {
        let rows = jet_rows_at_point(point, spec.r, spec.d, &basis);
        debug_assert_eq!(rows.len(), jet_dim);
        for (ri, row) in rows.into_iter().enumerate() {
            for (ci, v) in row.into_iter().enumerate() {
                if !v.is_zero() {
                    mat.set(pi * jet_dim + ri, ci, v);
                }
            }
        }
    }
    Ok(mat)
}

/// True iff the restriction map is surjective (full row rank).
pub fn jet_separation_check(spec: &JetSpec) -> Result<bool> {
    let mat = jet_matrix(spec)?;
    Ok(mat.rank() == mat.rows())
}

/// Which singular stratum is being estimated.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum StrataMode {
    /// hypersurfaces with at least N singular points
    MultiNode { n_points: usize },
    /// hypersurfaces with a point of multiplicity at least r
    Multiplicity { r: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct StrataReport {
    pub n: usize,
    pub d: usize,
    pub mode: StrataMode,
    pub trials: usize,
    pub seed: u64,
    /// sampled point coordinates per trial, echoed for replay
    pub sample_points: Vec<Vec<Vec<i64>>>,
    pub condition_count: usize,
    /// min over trials of (jet rank - point moduli)
    pub observed_codim: usize,
    pub bound: usize,
    pub pass: bool,
}

fn random_point(rng: &mut ChaCha8Rng, n_vars: usize) -> Vec<i64> {
    loop {
        let p: Vec<i64> = (0..n_vars).map(|_| rng.gen_range(-5..=5)).collect();
        if p.iter().any(|&c| c != 0) {
            return p;
        }
    }
}

/// Lower bound on the codimension of a singular stratum, certified on
/// random bounded-height rational points: the singularity conditions at
/// the sampled points are put in a jet matrix, and the minimal observed
/// rank minus the moduli of the points is compared with the bound.
pub fn stratum_codim_estimate(
    spec: &ProblemSpec,
    mode: StrataMode,
    trials: usize,
    seed: u64,
) -> Result<StrataReport> {
    if trials < 1 {
        return Err(Error::InvalidArgument("need trials >= 1".into()));
    }
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n_points, jet_order, moduli, bound) = match mode {
        StrataMode::MultiNode { n_points } => (n_points, 1usize, n_points * n, n_points),
        StrataMode::Multiplicity { r } => {
            if r < 2 {
                return Err(Error::InvalidArgument("need multiplicity r >= 2".into()));
            }
            (1usize, r - 1, n, r - 1)
        }
    };
    let condition_count = n_points * binom(n + jet_order, n);
    let mut observed = usize::MAX;
    let mut sample_points = Vec::with_capacity(trials);
    for _ in 0..trials {
        let points: Vec<Vec<i64>> = loop {
            let candidate: Vec<Vec<i64>> =
                (0..n_points).map(|_| random_point(&mut rng, n + 1)).collect();
            let rational: Vec<Vec<Rational>> = candidate
                .iter()
                .map(|p| p.iter().map(|&c| rat_int(c)).collect())
                .collect();
            let ok = (0..rational.len()).all(|i| {
                ((i + 1)..rational.len()).all(|j| !proportional(&rational[i], &rational[j]))
            });
            if ok {
                break candidate;
            }
        };
        let jet_spec = JetSpec {
            points: points
                .iter()
                .map(|p| p.iter().map(|&c| rat_int(c)).collect())
                .collect(),
            r: jet_order,
            d: spec.d,
        };
        let rank = jet_matrix(&jet_spec)?.rank();
        observed = observed.min(rank.saturating_sub(moduli));
        sample_points.push(points);
    }
    Ok(StrataReport {
        n,
        d: spec.d,
        mode,
        trials,
        seed,
        sample_points,
        condition_count,
        observed_codim: observed,
        bound,
        pass: observed >= bound,
    })
}

/// Surjectivity of the restriction `S_{kd-n-1} -> H^0(O_Y)` onto the
/// finite singular scheme Y of f: the image is computed inside the
/// stabilized Jacobian quotient, pushing degrees up with powers of
/// several seeded linear forms (a lower bound for each form; the maximum
/// over generic forms is the image dimension).
pub fn fiber_surjectivity_check(f: &HomogPoly, k: usize) -> Result<bool> {
    let n = f.n_vars - 1;
    let tau = match tjurina_total(f)? {
        Tjurina::NonIsolated => return Err(Error::NonIsolatedSingularities),
        Tjurina::Finite(t) => t,
    };
    let e = k as i64 * f.degree as i64 - n as i64 - 1;
    if e < 0 {
        return Ok(tau == 0);
    }
    let e = e as usize;
    let e_star = stabilization_degree(f).max(e);
    let lift = e_star - e;
    let jac = jacobian_generators(f)?;
    let target = monomial_basis(f.n_vars, e_star);
    let index = monomial_index(&target);
    let mut jac_cols: Vec<Vec<(u32, BigInt)>> = Vec::new();
    for g in &jac.partials {
        if g.degree > e_star {
            continue;
        }
        for m in monomial_basis(f.n_vars, e_star - g.degree) {
            jac_cols.push(clear_denominators(&g.mul_monomial(&m).sparse_column(&index)));
        }
    }
    let jac_rank = rank_of_integer_columns(jac_cols.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut best = 0usize;
    for attempt in 0..4 {
        let mut ell = HomogPoly::zero(f.n_vars, 1);
        for i in 0..f.n_vars {
            let c = if attempt == 0 {
                1
            } else {
                rng.gen_range(1..=7i64)
            };
            let mut exps = vec![0u8; f.n_vars];
            exps[i] = 1;
            ell.add_term(exps, rat_int(c));
        }
        let ell_pow = ell.pow(lift);
        let mut cols = jac_cols.clone();
        for m in monomial_basis(f.n_vars, e) {
            cols.push(clear_denominators(
                &ell_pow.mul_monomial(&m).sparse_column(&index),
            ));
        }
        let image = rank_of_integer_columns(cols) - jac_rank;
        best = best.max(image);
        if best == tau {
            break;
        }
    }
    Ok(best == tau)
}
