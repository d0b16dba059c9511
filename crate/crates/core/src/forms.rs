//! Twisted differential forms on `P^n`, modeled on the affine cone.
//!
//! A global section of `Omega^p(m)` is a p-form with homogeneous
//! degree-(m-p) coefficients that is killed by contraction against the
//! Euler vector field `E = sum x_i d/dx_i`. This turns every section
//! space into the literal kernel of one sparse matrix, and the exterior
//! derivative and wedge product into elementary operations.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{rat_int, ExactMatrix, Rational};
use crate::poly::{binom, monomial_basis, Exps, HomogPoly, ProblemSpec};

/// Sorted index set `I` labelling the frame element `dx_I`.
pub type IndexSet = Vec<u8>;

/// p-form with homogeneous polynomial coefficients on the cone over `P^n`.
/// Twist = coefficient degree + p; descent to `P^n` holds iff the Euler
/// contraction vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedForm {
    pub n_vars: usize,
    pub p: usize,
    pub coeff_degree: usize,
    pub comps: BTreeMap<IndexSet, HomogPoly>,
}

impl TwistedForm {
    pub fn zero(n_vars: usize, p: usize, coeff_degree: usize) -> Self {
        TwistedForm {
            n_vars,
            p,
            coeff_degree,
            comps: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// The twist m with coefficients in degree m - p.
    pub fn twist(&self) -> usize {
        self.coeff_degree + self.p
    }

    pub fn add_component(&mut self, idx: IndexSet, poly: HomogPoly) {
        debug_assert_eq!(idx.len(), self.p);
        debug_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        if poly.is_zero() {
            return;
        }
        debug_assert_eq!(poly.degree, self.coeff_degree);
        match self.comps.get_mut(&idx) {
            Some(g) => {
                *g = g.add(&poly).unwrap();
                if g.is_zero() {
                    self.comps.remove(&idx);
                }
            }
            None => {
                self.comps.insert(idx, poly);
            }
        }
    }

    pub fn add(&self, other: &TwistedForm) -> Result<TwistedForm> {
        // a zero form is a valid summand regardless of its declared degree
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.p != other.p || self.coeff_degree != other.coeff_degree {
            return Err(Error::InvalidArgument(
                "cannot add forms of different type".into(),
            ));
        }
        let mut out = self.clone();
        for (idx, g) in &other.comps {
            out.add_component(idx.clone(), g.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> TwistedForm {
        if c.is_zero() {
            return TwistedForm::zero(self.n_vars, self.p, self.coeff_degree);
        }
        TwistedForm {
            n_vars: self.n_vars,
            p: self.p,
            coeff_degree: self.coeff_degree,
            comps: self
                .comps
                .iter()
                .map(|(i, g)| (i.clone(), g.scale(c)))
                .collect(),
        }
    }

    /// Multiplication by a polynomial (raises the twist by its degree).
    pub fn mul_poly(&self, f: &HomogPoly) -> TwistedForm {
        let mut out = TwistedForm::zero(self.n_vars, self.p, self.coeff_degree + f.degree);
        for (idx, g) in &self.comps {
            out.add_component(idx.clone(), g.multiply(f).unwrap());
        }
        out
    }
}

/// Sign of `dx_I /\ dx_J` relative to the sorted merge; `None` on overlap.
pub fn wedge_sign(i_set: &[u8], j_set: &[u8]) -> Option<(IndexSet, i32)> {
    let mut merged: IndexSet = Vec::with_capacity(i_set.len() + j_set.len());
    let mut inversions = 0usize;
    let (mut a, mut b) = (0usize, 0usize);
    while a < i_set.len() || b < j_set.len() {
        if b == j_set.len() || (a < i_set.len() && i_set[a] < j_set[b]) {
            merged.push(i_set[a]);
            a += 1;
        } else if a == i_set.len() || j_set[b] < i_set[a] {
            // every remaining element of I past position a is > j_set[b]
            inversions += i_set.len() - a;
            merged.push(j_set[b]);
            b += 1;
        } else {
            return None;
        }
    }
    Some((merged, if inversions % 2 == 0 { 1 } else { -1 }))
}

/// Euler contraction `iota_E`; the kernel condition defining descent.
pub fn euler_contract(omega: &TwistedForm) -> TwistedForm {
    assert!(omega.p >= 1, "contraction needs p >= 1");
    let mut out = TwistedForm::zero(omega.n_vars, omega.p - 1, omega.coeff_degree + 1);
    for (idx, g) in &omega.comps {
        for (j, &i) in idx.iter().enumerate() {
            let mut rest = idx.clone();
            rest.remove(j);
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let mut e = vec![0u8; omega.n_vars];
            e[i as usize] = 1;
            out.add_component(rest, g.mul_monomial(&e).scale(&rat_int(sign)));
        }
    }
    out
}

/// Exterior derivative in the x-variables.
pub fn exterior_d_form(omega: &TwistedForm) -> TwistedForm {
    let mut out = TwistedForm::zero(
        omega.n_vars,
        omega.p + 1,
        omega.coeff_degree.saturating_sub(1),
    );
    if omega.coeff_degree == 0 {
        return out;
    }
    for (idx, g) in &omega.comps {
        for i in 0..omega.n_vars {
            let dg = g.partial(i).unwrap();
            if dg.is_zero() {
                continue;
            }
            if let Some((merged, sign)) = wedge_sign(&[i as u8], idx) {
                out.add_component(merged, dg.scale(&rat_int(sign as i64)));
            }
        }
    }
    out
}

/// Graded-antisymmetric product with exact sign bookkeeping.
pub fn wedge(omega1: &TwistedForm, omega2: &TwistedForm) -> Result<TwistedForm> {
    if omega1.n_vars != omega2.n_vars {
        return Err(Error::VariableMismatch(omega1.n_vars, omega2.n_vars));
    }
    if omega1.p + omega2.p > omega1.n_vars {
        return Err(Error::InvalidArgument("wedge degree exceeds variables".into()));
    }
    let mut out = TwistedForm::zero(
        omega1.n_vars,
        omega1.p + omega2.p,
        omega1.coeff_degree + omega2.coeff_degree,
    );
    for (i_set, g1) in &omega1.comps {
        for (j_set, g2) in &omega2.comps {
            if let Some((merged, sign)) = wedge_sign(i_set, j_set) {
                out.add_component(merged, g1.multiply(g2)?.scale(&rat_int(sign as i64)));
            }
        }
    }
    Ok(out)
}

/// `df = sum_i (d_i f) dx_i` as a 1-form.
pub fn differential_of(f: &HomogPoly) -> TwistedForm {
    let mut out = TwistedForm::zero(f.n_vars, 1, f.degree.saturating_sub(1));
    if f.degree == 0 {
        return out;
    }
    for i in 0..f.n_vars {
        let df = f.partial(i).unwrap();
        out.add_component(vec![i as u8], df);
    }
    out
}

/// The distinguished n-form `Omega = sum_i (-1)^i x_i dx_0 /\ ... omit i
/// ... /\ dx_n` of twist n+1; every section of `Omega^n(m)` is `A * Omega`
/// with `A` of degree m-n-1.
pub fn volume_form(n_vars: usize) -> TwistedForm {
    let mut out = TwistedForm::zero(n_vars, n_vars - 1, 1);
    for i in 0..n_vars {
        let idx: IndexSet = (0..n_vars as u8).filter(|&j| j as usize != i).collect();
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let mut e = vec![0u8; n_vars];
        e[i] = 1;
        out.add_component(idx, HomogPoly::monomial(n_vars, e, rat_int(sign)));
    }
    out
}

/// Recovers `A` from a top-form known to be `A * Omega`: the
/// `dx_1/\.../\dx_n` component equals `x_0 * A`, and the division is
/// exact precisely for descent forms.
pub fn volume_coefficient(omega: &TwistedForm) -> Result<HomogPoly> {
    let n_vars = omega.n_vars;
    if omega.p + 1 != n_vars {
        return Err(Error::InvalidArgument("expected a top form".into()));
    }
    let top: IndexSet = (1..n_vars as u8).collect();
    let Some(comp) = omega.comps.get(&top) else {
        // a descent top-form with zero dx_1..dx_n component is zero
        if omega.is_zero() {
            return Ok(HomogPoly::zero(n_vars, omega.coeff_degree.saturating_sub(1)));
        }
        return Err(Error::InvalidArgument("form is not a multiple of Omega".into()));
    };
    let mut out = HomogPoly::zero(n_vars, comp.degree - 1);
    for (m, c) in &comp.coeffs {
        if m[0] == 0 {
            return Err(Error::InvalidArgument("form is not a multiple of Omega".into()));
        }
        let mut e = m.clone();
        e[0] -= 1;
        out.add_term(e, c.clone());
    }
    Ok(out)
}

/// Rational p-form `eta / f^k` with a polynomial numerator of twist
/// k * deg f; representatives are never reduced.
#[derive(Debug, Clone)]
pub struct RationalFormRep {
    pub numerator: TwistedForm,
    pub pole_order: usize,
}

/// `d(eta/f^k) = (f d eta - k df /\ eta) / f^{k+1}`, on the nose.
pub fn exterior_d(rep: &RationalFormRep, f: &HomogPoly) -> Result<RationalFormRep> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("zero denominator".into()));
    }
    let d_eta = exterior_d_form(&rep.numerator).mul_poly(f);
    let df_eta = wedge(&differential_of(f), &rep.numerator)?
        .scale(&rat_int(-(rep.pole_order as i64)));
    Ok(RationalFormRep {
        numerator: d_eta.add(&df_eta)?,
        pole_order: rep.pole_order + 1,
    })
}

fn index_subsets(n_vars: usize, p: usize) -> Vec<IndexSet> {
    let mut out = Vec::new();
    let mut cur: IndexSet = Vec::with_capacity(p);
    fn rec(out: &mut Vec<IndexSet>, cur: &mut IndexSet, start: u8, n_vars: u8, p: usize) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n_vars {
            cur.push(i);
            rec(out, cur, i + 1, n_vars, p);
            cur.pop();
        }
    }
    rec(&mut out, &mut cur, 0, n_vars as u8, p);
    out
}

/// Basis of `H^0(P^n, Omega^p(m))` as Euler-contraction kernels, computed
/// one torus weight at a time (the contraction preserves the multidegree
/// of a term, so the kernel splits into blocks of at most binom(n+1,p)
/// columns each).
pub fn twisted_form_basis(n: usize, p: usize, m: i64) -> Vec<TwistedForm> {
    assert!(p <= n);
    let n_vars = n + 1;
    let coeff_degree = m - p as i64;
    if coeff_degree < 0 {
        return Vec::new();
    }
    let coeff_degree = coeff_degree as usize;
    let mut basis = Vec::new();
    if p == 0 {
        for mono in monomial_basis(n_vars, coeff_degree) {
            let mut f = TwistedForm::zero(n_vars, 0, coeff_degree);
            f.add_component(Vec::new(), HomogPoly::monomial(n_vars, mono, Rational::one()));
            basis.push(f);
        }
        return basis;
    }
    let subsets = index_subsets(n_vars, p);
    let small_subsets = index_subsets(n_vars, p - 1);
    let row_index: BTreeMap<&IndexSet, usize> =
        small_subsets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    // weights of total degree m; a column (I, x^{w - e_I}) exists when
    // w has support on I
    for w in monomial_basis(n_vars, coeff_degree + p) {
        let cols: Vec<&IndexSet> = subsets
            .iter()
            .filter(|idx| idx.iter().all(|&i| w[i as usize] >= 1))
            .collect();
        if cols.is_empty() {
            continue;
        }
        let mut mat = ExactMatrix::new(small_subsets.len(), cols.len());
        for (c, idx) in cols.iter().enumerate() {
            for (j, _) in idx.iter().enumerate() {
                let mut rest = (*idx).clone();
                rest.remove(j);
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let r = row_index[&rest];
                let prev = mat.get(r, c);
                mat.set(r, c, prev + rat_int(sign));
            }
        }
        for vec in mat.kernel_basis().vectors {
            let mut form = TwistedForm::zero(n_vars, p, coeff_degree);
            for (c, idx) in cols.iter().enumerate() {
                if vec[c].is_zero() {
                    continue;
                }
                let mono: Exps = w
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| e - if idx.contains(&(i as u8)) { 1 } else { 0 })
                    .collect();
                form.add_component(
                    (*idx).clone(),
                    HomogPoly::monomial(n_vars, mono, vec[c].clone()),
                );
            }
            debug_assert!(euler_contract(&form).is_zero());
            basis.push(form);
        }
    }
    basis
}

/// Bott's formula: `dim H^q(P^n, Omega^p(m))` in closed form.
pub fn bott_h(n: usize, p: usize, q: usize, m: i64) -> usize {
    assert!(p <= n && q <= n);
    if q == 0 && m > p as i64 {
        let m = m as usize;
        binom(m + n - p, m) * binom(m - 1, p)
    } else if q == p && m == 0 {
        1
    } else if q == n && m < p as i64 - n as i64 {
        let neg = (-m) as usize;
        binom(neg + p, neg) * binom(neg - 1, n - p)
    } else {
        0
    }
}

/// Seeded randomized verification of the two calculus invariants on the
/// Fermat family `x0^d + ... + xn^d`: the pole-raising differential
/// squares to zero on rational-form representatives, and it preserves
/// Euler descent. Returns (d^2 failures, descent failures); both are 0
/// when the calculus is consistent.
pub fn calculus_invariant_trials(spec: &ProblemSpec, trials: usize, seed: u64) -> (usize, usize) {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let n_vars = spec.vars();
    let mut f = HomogPoly::zero(n_vars, spec.d);
    for i in 0..n_vars {
        let mut e = vec![0u8; n_vars];
        e[i] = spec.d as u8;
        f.add_term(e, rat_int(1));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bases: BTreeMap<(usize, usize), Vec<TwistedForm>> = BTreeMap::new();
    let mut bad_d2 = 0usize;
    let mut bad_descent = 0usize;
    for _ in 0..trials {
        let p = rng.gen_range(0..=spec.n);
        let mut k = rng.gen_range(1..=2usize);
        if k * spec.d < p {
            k = 2;
        }
        let basis = bases
            .entry((p, k))
            .or_insert_with(|| twisted_form_basis(spec.n, p, (k * spec.d) as i64));
        let mut eta = TwistedForm::zero(n_vars, p, k * spec.d - p);
        for b in basis.iter() {
            let c = rat_int(rng.gen_range(-2..=2));
            eta = eta.add(&b.scale(&c)).expect("matching degrees");
        }
        let rep = RationalFormRep {
            numerator: eta,
            pole_order: k,
        };
        let d1 = exterior_d(&rep, &f).expect("differential defined");
        if !euler_contract(&d1.numerator).is_zero() {
            bad_descent += 1;
        }
        if d1.numerator.p + 1 <= n_vars {
            let d2 = exterior_d(&d1, &f).expect("differential defined");
            if !d2.numerator.is_zero() {
                bad_d2 += 1;
            }
        }
    }
    (bad_d2, bad_descent)
}

/// Positivity hypothesis of the theory: `H^q(P^n, Omega^p(k d)) = 0` for
/// all q >= 1 and 1 <= k <= k_max.
pub fn check_ampleness_condition(spec: &ProblemSpec, k_max: usize) -> bool {
    for p in 0..=spec.n {
        for q in 1..=spec.n {
            for k in 1..=k_max {
                if bott_h(spec.n, p, q, (k * spec.d) as i64) != 0 {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn x(n_vars: usize, i: usize) -> HomogPoly {
        HomogPoly::variable(n_vars, i)
    }

    fn one_form(n_vars: usize, i: usize, coeff: HomogPoly) -> TwistedForm {
        let mut f = TwistedForm::zero(n_vars, 1, coeff.degree);
        f.add_component(vec![i as u8], coeff);
        f
    }

    #[test]
    fn euler_contract_examples() {
        // iota_E(x0 dx1 - x1 dx0) = 0
        let omega = one_form(2, 1, x(2, 0))
            .add(&one_form(2, 0, x(2, 1)).scale(&rat_int(-1)))
            .unwrap();
        assert!(euler_contract(&omega).is_zero());
        // iota_E(dx0 /\ dx1) = x0 dx1 - x1 dx0
        let mut two = TwistedForm::zero(2, 2, 0);
        two.add_component(vec![0, 1], HomogPoly::monomial(2, vec![0, 0], rat_int(1)));
        let c = euler_contract(&two);
        assert_eq!(c, omega);
        assert!(euler_contract(&volume_form(4)).is_zero());
    }

    #[test]
    fn wedge_examples() {
        let dx0 = one_form(3, 0, HomogPoly::monomial(3, vec![0, 0, 0], rat_int(1)));
        let dx1 = one_form(3, 1, HomogPoly::monomial(3, vec![0, 0, 0], rat_int(1)));
        assert!(wedge(&dx0, &dx0).unwrap().is_zero());
        let a = wedge(&dx0, &dx1).unwrap();
        let b = wedge(&dx1, &dx0).unwrap().scale(&rat_int(-1));
        assert_eq!(a, b);
        // (x0 dx1) /\ (x1 dx0) = -x0 x1 dx0 /\ dx1
        let w = wedge(&one_form(3, 1, x(3, 0)), &one_form(3, 0, x(3, 1))).unwrap();
        let mut expect = TwistedForm::zero(3, 2, 2);
        expect.add_component(
            vec![0, 1],
            HomogPoly::monomial(3, vec![1, 1, 0], rat_int(-1)),
        );
        assert_eq!(w, expect);
    }

    #[test]
    fn wedge_anticommutes_graded() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let w1 = random_form(&mut rng, 4, 1, 2);
            let w2 = random_form(&mut rng, 4, 2, 1);
            let lhs = wedge(&w1, &w2).unwrap();
            let sign = if (w1.p * w2.p) % 2 == 0 { 1 } else { -1 };
            let rhs = wedge(&w2, &w1).unwrap().scale(&rat_int(sign));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn basis_dims_match_bott() {
        assert_eq!(twisted_form_basis(2, 1, 2).len(), 3);
        assert_eq!(twisted_form_basis(2, 2, 3).len(), 1);
        assert_eq!(twisted_form_basis(1, 1, 2).len(), 1);
        for n in 1..=3usize {
            for p in 0..=n {
                for m in 0..=8i64 {
                    assert_eq!(
                        twisted_form_basis(n, p, m).len(),
                        bott_h(n, p, 0, m),
                        "n={} p={} m={}",
                        n,
                        p,
                        m
                    );
                }
            }
        }
    }

    #[test]
    fn bott_examples() {
        assert_eq!(bott_h(2, 1, 1, 0), 1);
        assert_eq!(bott_h(2, 1, 0, 2), 3);
        assert_eq!(bott_h(2, 1, 1, 5), 0);
        assert_eq!(bott_h(2, 2, 0, 3), 1);
        // Serre duality spot check: h^n(Omega^p(m)) = h^0(Omega^{n-p}(-m))
        assert_eq!(bott_h(2, 2, 2, -4), bott_h(2, 0, 0, 4));
    }

    #[test]
    fn ampleness_examples() {
        assert!(check_ampleness_condition(&ProblemSpec::new(2, 3).unwrap(), 5));
        assert!(check_ampleness_condition(&ProblemSpec::new(3, 2).unwrap(), 5));
        assert!(check_ampleness_condition(&ProblemSpec::new(1, 2).unwrap(), 10));
    }

    #[test]
    fn volume_form_coefficient_round_trip() {
        for n_vars in 2..=4usize {
            let omega = volume_form(n_vars);
            assert_eq!(omega.twist(), n_vars);
            let a = HomogPoly::parse("x0 + 2*x1", n_vars).unwrap();
            let recovered = volume_coefficient(&omega.mul_poly(&a)).unwrap();
            assert_eq!(recovered, a);
        }
    }

    fn random_form(
        rng: &mut ChaCha8Rng,
        n_vars: usize,
        p: usize,
        coeff_degree: usize,
    ) -> TwistedForm {
        let mut out = TwistedForm::zero(n_vars, p, coeff_degree);
        for idx in index_subsets(n_vars, p) {
            for mono in monomial_basis(n_vars, coeff_degree) {
                if rng.gen_range(0..3) == 0 {
                    let c = rat_int(rng.gen_range(-4..=4));
                    out.add_component(idx.clone(), HomogPoly::monomial(n_vars, mono.clone(), c));
                }
            }
        }
        out
    }

    #[test]
    fn d_squared_is_zero_on_rational_reps() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = HomogPoly::parse("x0^3 + x1^3 + x2^3 - 2*x0*x1*x2", 3).unwrap();
        for _ in 0..100 {
            let p = rng.gen_range(0..=1usize);
            let k = rng.gen_range(1..=2usize);
            let eta = random_form(&mut rng, 3, p, k * 3 - p);
            let rep = RationalFormRep {
                numerator: eta,
                pole_order: k,
            };
            let d1 = exterior_d(&rep, &f).unwrap();
            let d2 = exterior_d(&d1, &f).unwrap();
            assert!(d2.numerator.is_zero());
        }
    }

    #[test]
    fn exterior_d_preserves_descent() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = HomogPoly::parse("x0^4 + x1^4 + x2^4", 3).unwrap();
        let basis = twisted_form_basis(2, 1, 4);
        for _ in 0..100 {
            let mut eta = TwistedForm::zero(3, 1, 3);
            for b in &basis {
                let c = rat_int(rng.gen_range(-2..=2));
                eta = eta.add(&b.scale(&c)).unwrap();
            }
            let rep = RationalFormRep {
                numerator: eta,
                pole_order: 1,
            };
            let d1 = exterior_d(&rep, &f).unwrap();
            assert!(euler_contract(&d1.numerator).is_zero());
        }
    }

    #[test]
    fn simple_pole_derivative() {
        // d(1/f) = -df / f^2
        let f = HomogPoly::parse("x0^2 + x1^2", 2).unwrap();
        let mut one = TwistedForm::zero(2, 0, 0);
        one.add_component(Vec::new(), HomogPoly::monomial(2, vec![0, 0], rat_int(1)));
        let rep = RationalFormRep {
            numerator: one,
            pole_order: 1,
        };
        let d = exterior_d(&rep, &f).unwrap();
        assert_eq!(d.pole_order, 2);
        assert_eq!(d.numerator, differential_of(&f).scale(&rat_int(-1)));
    }
}
