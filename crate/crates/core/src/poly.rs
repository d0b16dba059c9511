//! Graded and bigraded polynomial rings.
//!
//! `S = Q[x_0..x_n]` carries the hypersurface equations; the bigraded ring
//! `B = Q[a_J][x_0..x_n]`, with one `a`-variable per monomial of `S_d`,
//! carries the universal hypersurface `F = sum_J a_J x^J`. All ideal
//! dimension questions are answered degree by degree with exact linear
//! algebra; there is no Groebner machinery anywhere.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{rank_of_integer_columns, clear_denominators, Rational, SubspaceBasis};

/// Exponent vector of a monomial; entry `i` is the exponent of `x_i`.
pub type Exps = Vec<u8>;

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// The family under study: degree-`d` hypersurfaces in `P^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProblemSpec {
    pub n: usize,
    pub d: usize,
}

impl ProblemSpec {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument("need n >= 1".into()));
        }
        if d < 2 {
            return Err(Error::InvalidArgument("need d >= 2".into()));
        }
        Ok(ProblemSpec { n, d })
    }

    /// Number of x-variables.
    pub fn vars(&self) -> usize {
        self.n + 1
    }

    /// `dim V = dim S_d`, the space of degree-d forms.
    pub fn dim_v(&self) -> usize {
        binom(self.n + self.d, self.n)
    }

    /// Dimension of the parameter space `P = P(V)`.
    pub fn dim_p(&self) -> usize {
        self.dim_v() - 1
    }

    /// `dim S_e` for this number of variables (0 for negative e).
    pub fn dim_s(&self, e: i64) -> usize {
        if e < 0 {
            0
        } else {
            binom(e as usize + self.n, self.n)
        }
    }

    /// `dim Q[a]_k` where the a-variables are dual to the monomials of S_d.
    pub fn dim_a(&self, k: i64) -> usize {
        if k < 0 {
            0
        } else {
            binom(k as usize + self.dim_v() - 1, self.dim_v() - 1)
        }
    }
}

/// All exponent vectors of the given degree, in graded-lex order
/// (`x_0`-dominant first). The order is the column order of every matrix
/// downstream, so it must stay deterministic.
pub fn monomial_basis(n_vars: usize, degree: usize) -> Vec<Exps> {
    assert!(n_vars >= 1);
    let mut out = Vec::with_capacity(binom(degree + n_vars - 1, n_vars - 1));
    let mut cur = vec![0u8; n_vars];
    fn rec(out: &mut Vec<Exps>, cur: &mut Exps, pos: usize, left: usize) {
        if pos + 1 == cur.len() {
            cur[pos] = left as u8;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e as u8;
            rec(out, cur, pos + 1, left - e);
        }
    }
    rec(&mut out, &mut cur, 0, degree);
    out
}

/// Index lookup for a monomial basis.
pub fn monomial_index(basis: &[Exps]) -> BTreeMap<Exps, usize> {
    basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect()
}

/// Homogeneous polynomial in the x-variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogPoly {
    pub n_vars: usize,
    pub degree: usize,
    pub coeffs: BTreeMap<Exps, Rational>,
}

impl HomogPoly {
    pub fn zero(n_vars: usize, degree: usize) -> Self {
        HomogPoly {
            n_vars,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn monomial(n_vars: usize, exps: Exps, coeff: Rational) -> Self {
        let degree = exps.iter().map(|&e| e as usize).sum();
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exps, coeff);
        }
        HomogPoly {
            n_vars,
            degree,
            coeffs,
        }
    }

    pub fn variable(n_vars: usize, i: usize) -> Self {
        let mut exps = vec![0u8; n_vars];
        exps[i] = 1;
        Self::monomial(n_vars, exps, Rational::one())
    }

    pub fn add_term(&mut self, exps: Exps, coeff: Rational) {
        let entry = self.coeffs.entry(exps).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            // find and drop the zero entry
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &HomogPoly) -> Result<HomogPoly> {
        if self.n_vars != other.n_vars {
            return Err(Error::VariableMismatch(self.n_vars, other.n_vars));
        }
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> HomogPoly {
        if c.is_zero() {
            return HomogPoly::zero(self.n_vars, self.degree);
        }
        HomogPoly {
            n_vars: self.n_vars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn multiply(&self, other: &HomogPoly) -> Result<HomogPoly> {
        if self.n_vars != other.n_vars {
            return Err(Error::VariableMismatch(self.n_vars, other.n_vars));
        }
        let mut out = HomogPoly::zero(self.n_vars, self.degree + other.degree);
        for (m1, c1) in &self.coeffs {
            for (m2, c2) in &other.coeffs {
                let m: Exps = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn mul_monomial(&self, exps: &Exps) -> HomogPoly {
        let extra: usize = exps.iter().map(|&e| e as usize).sum();
        HomogPoly {
            n_vars: self.n_vars,
            degree: self.degree + extra,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| {
                    (
                        m.iter().zip(exps).map(|(a, b)| a + b).collect(),
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    pub fn pow(&self, k: usize) -> HomogPoly {
        let mut acc = HomogPoly::monomial(self.n_vars, vec![0; self.n_vars], Rational::one());
        for _ in 0..k {
            acc = acc.multiply(self).unwrap();
        }
        acc
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Result<HomogPoly> {
        if i >= self.n_vars {
            return Err(Error::IndexOutOfRange {
                index: i,
                limit: self.n_vars,
            });
        }
        let degree = self.degree.saturating_sub(1);
        let mut out = HomogPoly::zero(self.n_vars, degree);
        for (m, c) in &self.coeffs {
            if m[i] > 0 {
                let mut e = m.clone();
                e[i] -= 1;
                out.add_term(e, c * Rational::from_integer(BigInt::from(m[i])));
            }
        }
        Ok(out)
    }

    /// Coordinate vector with respect to `monomial_basis(n_vars, degree)`.
    pub fn coordinates(&self, index: &BTreeMap<Exps, usize>, dim: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); dim];
        for (m, c) in &self.coeffs {
            v[*index.get(m).expect("monomial outside basis")] = c.clone();
        }
        v
    }

    pub fn sparse_column(&self, index: &BTreeMap<Exps, usize>) -> Vec<(u32, Rational)> {
        self.coeffs
            .iter()
            .map(|(m, c)| (index[m] as u32, c.clone()))
            .collect()
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.coeffs {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Canonical text form; inverse of `parse`.
    pub fn render(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let is_const = m.iter().all(|&e| e == 0);
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || is_const {
                if abs.is_integer() {
                    factors.push(abs.numer().to_string());
                } else {
                    factors.push(format!("{}/{}", abs.numer(), abs.denom()));
                }
            }
            for (j, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", j)),
                    _ => factors.push(format!("x{}^{}", j, e)),
                }
            }
            let _ = write!(s, "{}", factors.join("*"));
        }
        s
    }

    /// Parses the expanded-term grammar: terms `c*x0^e0*x1^e1*...` joined
    /// by `+`/`-`, rational coefficients `p/q`, whitespace insignificant.
    /// Unexpanded input (parentheses) is rejected with a position error.
    pub fn parse(text: &str, n_vars: usize) -> Result<HomogPoly> {
        let bytes = text.as_bytes();
        let mut pos = 0usize;
        let err = |pos: usize, msg: &str| Error::Parse {
            pos,
            msg: msg.to_string(),
        };
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let read_uint = |pos: &mut usize| -> Result<u64> {
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if *pos == start {
                return Err(err(start, "expected a number"));
            }
            text[start..*pos]
                .parse::<u64>()
                .map_err(|_| err(start, "number too large"))
        };

        struct Term {
            coeff: Rational,
            exps: Exps,
            pos: usize,
        }
        let mut terms: Vec<Term> = Vec::new();
        skip_ws(&mut pos);
        if pos == bytes.len() {
            return Err(err(0, "empty polynomial"));
        }
        let mut first = true;
        while pos < bytes.len() {
            skip_ws(&mut pos);
            let term_pos = pos;
            let mut sign = Rational::one();
            match bytes.get(pos) {
                Some(b'+') => {
                    pos += 1;
                    if first {
                        return Err(err(term_pos, "unexpected leading '+'"));
                    }
                }
                Some(b'-') => {
                    sign = -sign;
                    pos += 1;
                }
                _ if first => {}
                _ => return Err(err(pos, "expected '+' or '-' between terms")),
            }
            first = false;
            skip_ws(&mut pos);
            let mut coeff = sign;
            let mut exps = vec![0u8; n_vars];
            loop {
                skip_ws(&mut pos);
                match bytes.get(pos) {
                    Some(b'(') | Some(b')') => {
                        return Err(err(pos, "parentheses are not allowed; expand the input"))
                    }
                    Some(c) if c.is_ascii_digit() => {
                        let numer = read_uint(&mut pos)?;
                        let mut q = Rational::from_integer(BigInt::from(numer));
                        skip_ws(&mut pos);
                        if bytes.get(pos) == Some(&b'/') {
                            pos += 1;
                            skip_ws(&mut pos);
                            let dpos = pos;
                            let denom = read_uint(&mut pos)?;
                            if denom == 0 {
                                return Err(err(dpos, "zero denominator"));
                            }
                            q /= Rational::from_integer(BigInt::from(denom));
                        }
                        coeff *= q;
                    }
                    Some(b'x') => {
                        pos += 1;
                        let ipos = pos;
                        let idx = read_uint(&mut pos)? as usize;
                        if idx >= n_vars {
                            return Err(err(ipos, &format!("variable x{} out of range", idx)));
                        }
                        let mut e = 1u64;
                        skip_ws(&mut pos);
                        if bytes.get(pos) == Some(&b'^') {
                            pos += 1;
                            skip_ws(&mut pos);
                            e = read_uint(&mut pos)?;
                        }
                        if e > u8::MAX as u64 || exps[idx] as u64 + e > u8::MAX as u64 {
                            return Err(err(ipos, "exponent too large"));
                        }
                        exps[idx] += e as u8;
                    }
                    _ => return Err(err(pos, "expected a coefficient or a variable")),
                }
                skip_ws(&mut pos);
                if bytes.get(pos) == Some(&b'*') {
                    pos += 1;
                    continue;
                }
                break;
            }
            terms.push(Term {
                coeff,
                exps,
                pos: term_pos,
            });
            skip_ws(&mut pos);
            if pos == bytes.len() {
                break;
            }
            match bytes[pos] {
                b'+' | b'-' => continue,
                b'(' | b')' => {
                    return Err(err(pos, "parentheses are not allowed; expand the input"))
                }
                _ => return Err(err(pos, "unexpected character")),
            }
        }
        let degrees: Vec<usize> = terms
            .iter()
            .map(|t| t.exps.iter().map(|&e| e as usize).sum())
            .collect();
        let degree = degrees[0];
        if degrees.iter().any(|&g| g != degree) {
            return Err(Error::Inhomogeneous(degrees));
        }
        let mut out = HomogPoly::zero(n_vars, degree);
        for t in terms {
            let _ = t.pos;
            out.add_term(t.exps, t.coeff);
        }
        Ok(out)
    }
}

/// Bigraded polynomial in `Q[a_J][x_i]`; the a-variables are indexed by
/// the graded-lex monomial basis of `S_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigradedPoly {
    pub a_vars: usize,
    pub x_vars: usize,
    pub a_degree: usize,
    pub x_degree: usize,
    pub coeffs: BTreeMap<(Exps, Exps), Rational>,
}

impl BigradedPoly {
    pub fn zero(a_vars: usize, x_vars: usize, a_degree: usize, x_degree: usize) -> Self {
        BigradedPoly {
            a_vars,
            x_vars,
            a_degree,
            x_degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, a: Exps, x: Exps, coeff: Rational) {
        let entry = self
            .coeffs
            .entry((a, x))
            .or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    /// Substitutes rational values for the a-variables.
    pub fn specialize(&self, a_values: &[Rational]) -> HomogPoly {
        assert_eq!(a_values.len(), self.a_vars);
        let mut out = HomogPoly::zero(self.x_vars, self.x_degree);
        for ((a, x), c) in &self.coeffs {
            let mut t = c.clone();
            for (i, &e) in a.iter().enumerate() {
                for _ in 0..e {
                    t *= &a_values[i];
                }
            }
            if !t.is_zero() {
                out.add_term(x.clone(), t);
            }
        }
        out
    }
}

/// A hypersurface equation together with its partial derivatives; the
/// Euler relation is verified at construction time.
#[derive(Debug, Clone)]
pub struct JacobianData {
    pub f: HomogPoly,
    pub partials: Vec<HomogPoly>,
}

pub fn jacobian_generators(f: &HomogPoly) -> Result<JacobianData> {
    if f.degree < 1 || f.is_zero() {
        return Err(Error::InvalidArgument(
            "jacobian requires a nonzero form of degree >= 1".into(),
        ));
    }
    let partials: Vec<HomogPoly> = (0..f.n_vars)
        .map(|i| f.partial(i))
        .collect::<Result<_>>()?;
    // Euler relation: sum x_i d_i f = d * f
    let mut euler = HomogPoly::zero(f.n_vars, f.degree);
    for (i, p) in partials.iter().enumerate() {
        let mut e = vec![0u8; f.n_vars];
        e[i] = 1;
        euler = euler.add(&p.mul_monomial(&e))?;
    }
    let scaled = f.scale(&Rational::from_integer(BigInt::from(f.degree)));
    if euler != scaled {
        return Err(Error::InvalidArgument(
            "Euler relation failed; input not homogeneous?".into(),
        ));
    }
    Ok(JacobianData {
        f: f.clone(),
        partials,
    })
}

/// Sparse columns spanning the degree-`target` piece of the ideal
/// generated by `generators`, in the monomial coordinates of that degree.
fn ideal_span_columns(
    generators: &[HomogPoly],
    target_degree: usize,
) -> (usize, Vec<Vec<(u32, Rational)>>) {
    let n_vars = generators
        .first()
        .map(|g| g.n_vars)
        .expect("need at least one generator");
    let basis = monomial_basis(n_vars, target_degree);
    let index = monomial_index(&basis);
    let mut cols = Vec::new();
    for g in generators {
        if g.is_zero() || g.degree > target_degree {
            continue;
        }
        for m in monomial_basis(n_vars, target_degree - g.degree) {
            cols.push(g.mul_monomial(&m).sparse_column(&index));
        }
    }
    (basis.len(), cols)
}

/// Basis of the span `{ m * g }` inside the monomial coordinate space of
/// `target_degree`.
pub fn ideal_graded_piece(generators: &[HomogPoly], target_degree: usize) -> SubspaceBasis {
    let (dim, cols) = ideal_span_columns(generators, target_degree);
    // column echelon over the rationals; sizes here are moderate
    let mut rows_used: BTreeMap<u32, Vec<Rational>> = BTreeMap::new();
    let mut vectors: Vec<Vec<Rational>> = Vec::new();
    for col in cols {
        let mut v = vec![Rational::zero(); dim];
        for (r, c) in col {
            v[r as usize] = c;
        }
        // reduce against existing pivots
        loop {
            let Some((&pivot, _)) = rows_used
                .iter()
                .find(|(&r, _)| !v[r as usize].is_zero())
                .map(|(r, w)| (r, w))
            else {
                break;
            };
            let factor = v[pivot as usize].clone();
            let w = &rows_used[&pivot];
            for i in 0..dim {
                let t = &w[i] * &factor;
                v[i] -= t;
            }
        }
        if let Some(first) = (0..dim).find(|&i| !v[i].is_zero()) {
            let inv = v[first].recip();
            for x in v.iter_mut() {
                *x *= &inv;
            }
            rows_used.insert(first as u32, v.clone());
            vectors.push(v);
        }
    }
    SubspaceBasis {
        ambient_dim: dim,
        vectors,
    }
}

fn ideal_piece_rank(generators: &[HomogPoly], target_degree: usize) -> (usize, usize) {
    let (dim, cols) = ideal_span_columns(generators, target_degree);
    let int_cols = cols.iter().map(|c| clear_denominators(c)).collect();
    (dim, rank_of_integer_columns(int_cols))
}

/// `dim (S/J(f))_e`: the graded piece of the Jacobian ring.
pub fn quotient_ring_dim(f: &HomogPoly, e: usize) -> Result<usize> {
    let jac = jacobian_generators(f)?;
    let (dim, rank) = ideal_piece_rank(&jac.partials, e);
    Ok(dim - rank)
}

/// Smoothness via the socle-degree cutoff: a degree-d hypersurface in
/// `P^n` is smooth iff `(S/J)_e = 0` at `e = (n+1)(d-2)+1`.
pub fn is_smooth(f: &HomogPoly) -> Result<bool> {
    if f.degree < 2 {
        return Err(Error::InvalidArgument("need degree >= 2".into()));
    }
    let n = f.n_vars - 1;
    let e = (n + 1) * (f.degree - 2) + 1;
    Ok(quotient_ring_dim(f, e)? == 0)
}

/// Total Tjurina number of a hypersurface with isolated singularities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tjurina {
    Finite(usize),
    NonIsolated,
}

/// Detects stabilization of `dim (S/J)_e` over a window of width `n+2`
/// past the socle degree. The window width is a heuristic detector, and
/// reports accordingly; the stabilized value is the total Tjurina number
/// when the singularities are isolated.
pub fn tjurina_total(f: &HomogPoly) -> Result<Tjurina> {
    let n = f.n_vars - 1;
    let sigma = (n + 1) * (f.degree.saturating_sub(2));
    let window: Vec<usize> = (sigma + 1..=sigma + n + 2)
        .map(|e| quotient_ring_dim(f, e))
        .collect::<Result<_>>()?;
    if window.iter().all(|&v| v == window[0]) {
        Ok(Tjurina::Finite(window[0]))
    } else {
        Ok(Tjurina::NonIsolated)
    }
}

/// Stabilized degree used when restricting to the singular scheme.
pub fn stabilization_degree(f: &HomogPoly) -> usize {
    let n = f.n_vars - 1;
    (n + 1) * (f.degree.saturating_sub(2)) + n + 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rat_int;

    fn p(text: &str, n_vars: usize) -> HomogPoly {
        HomogPoly::parse(text, n_vars).unwrap()
    }

    #[test]
    fn monomial_basis_counts() {
        assert_eq!(monomial_basis(2, 2).len(), 3);
        assert_eq!(monomial_basis(3, 3).len(), 10);
        assert_eq!(monomial_basis(4, 4).len(), 35);
        // graded-lex: x0^2 first
        assert_eq!(monomial_basis(2, 2)[0], vec![2, 0]);
    }

    #[test]
    fn multiply_examples() {
        let x0 = HomogPoly::variable(2, 0);
        let x1 = HomogPoly::variable(2, 1);
        let prod = x0.multiply(&x1).unwrap();
        assert_eq!(prod, p("x0*x1", 2));
        let s = x0.add(&x1).unwrap();
        assert_eq!(s.multiply(&s).unwrap(), p("x0^2 + 2*x0*x1 + x1^2", 2));
        let z = HomogPoly::zero(2, 3);
        assert!(s.multiply(&z).unwrap().is_zero());
    }

    #[test]
    fn partial_examples() {
        assert_eq!(p("x0^4", 3).partial(0).unwrap(), p("4*x0^3", 3));
        assert_eq!(
            p("x0^4+x1^4+x2^4", 3).partial(1).unwrap(),
            p("4*x1^3", 3)
        );
        assert!(p("x1", 2).partial(0).unwrap().is_zero());
        assert!(p("x1", 2).partial(5).is_err());
    }

    #[test]
    fn jacobian_examples() {
        let jd = jacobian_generators(&p("x0^4+x1^4+x2^4", 3)).unwrap();
        assert_eq!(jd.partials[0], p("4*x0^3", 3));
        assert_eq!(jd.partials[2], p("4*x2^3", 3));
        let nodal = p("x1^2*x2 - x0^3 - x0^2*x2", 3);
        let jd = jacobian_generators(&nodal).unwrap();
        assert_eq!(jd.partials[0], p("-3*x0^2 - 2*x0*x2", 3));
        assert_eq!(jd.partials[1], p("2*x1*x2", 3));
        assert_eq!(jd.partials[2], p("x1^2 - x0^2", 3));
        let jd = jacobian_generators(&p("x0*x1", 2)).unwrap();
        assert_eq!(jd.partials[0], p("x1", 2));
        assert_eq!(jd.partials[1], p("x0", 2));
    }

    #[test]
    fn ideal_graded_piece_examples() {
        let gens = vec![p("x0^3", 3), p("x1^3", 3), p("x2^3", 3)];
        assert_eq!(ideal_graded_piece(&gens, 5).dim(), 18);
        assert_eq!(ideal_graded_piece(&gens, 2).dim(), 0);
        let gens = vec![p("x1", 2), p("x0", 2)];
        assert_eq!(ideal_graded_piece(&gens, 1).dim(), 2);
    }

    #[test]
    fn quotient_ring_examples() {
        let fermat4 = p("x0^4+x1^4+x2^4", 3);
        assert_eq!(quotient_ring_dim(&fermat4, 1).unwrap(), 3);
        assert_eq!(quotient_ring_dim(&fermat4, 5).unwrap(), 3);
        let fermat3 = p("x0^3+x1^3+x2^3", 3);
        assert_eq!(quotient_ring_dim(&fermat3, 3).unwrap(), 1);
    }

    #[test]
    fn smoothness_examples() {
        assert!(is_smooth(&p("x0^4+x1^4+x2^4", 3)).unwrap());
        assert!(!is_smooth(&p("x1^2*x2 - x0^3 - x0^2*x2", 3)).unwrap());
        assert!(!is_smooth(&p("x0^2", 2)).unwrap());
    }

    #[test]
    fn tjurina_examples() {
        let nodal = p("x1^2*x2 - x0^3 - x0^2*x2", 3);
        assert_eq!(tjurina_total(&nodal).unwrap(), Tjurina::Finite(1));
        let cusp = p("x1^2*x2 - x0^3", 3);
        assert_eq!(tjurina_total(&cusp).unwrap(), Tjurina::Finite(2));
        // x0^2 * (generic quadric): nonreduced along a line
        let f = p("x0^2", 3)
            .multiply(&p("x0^2 + 2*x1^2 + 3*x2^2 + x0*x1 + 5*x1*x2 + 7*x0*x2", 3))
            .unwrap();
        assert_eq!(tjurina_total(&f).unwrap(), Tjurina::NonIsolated);
    }

    #[test]
    fn gorenstein_symmetry_for_smooth_fixture() {
        // (S/J)_e = (S/J)_{sigma-e} with sigma = (n+1)(d-2)
        let f = p("x0^4+x1^4+x2^4 + x0*x1*x2^2", 3);
        assert!(is_smooth(&f).unwrap());
        let sigma = 3 * 2;
        for e in 0..=sigma {
            assert_eq!(
                quotient_ring_dim(&f, e).unwrap(),
                quotient_ring_dim(&f, sigma - e).unwrap()
            );
        }
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("x0^4 + x1^4 + x2^4", 3).coeffs.len(), 3);
        assert_eq!(p("x1^2*x2 - x0^3 - x0^2*x2", 3).degree, 3);
        match HomogPoly::parse("x0 + x1^2", 2) {
            Err(Error::Inhomogeneous(degs)) => assert_eq!(degs, vec![1, 2]),
            other => panic!("expected inhomogeneity error, got {:?}", other),
        }
        match HomogPoly::parse("x1^2*x2 - x0^2*(x0+x2)", 3) {
            Err(Error::Parse { pos, .. }) => assert!(pos > 0),
            other => panic!("expected parse error, got {:?}", other),
        }
        assert!(HomogPoly::parse("1/2*x0^2 - 3/4*x1^2", 2).is_ok());
    }

    #[test]
    fn parse_render_round_trip() {
        for text in [
            "x0^4 + x1^4 + x2^4",
            "x1^2*x2 - x0^3 - x0^2*x2",
            "1/2*x0^2 - 3*x0*x1 + x1^2",
            "2*x0*x1",
        ] {
            let q = p(text, 3);
            assert_eq!(HomogPoly::parse(&q.render(), 3).unwrap(), q);
        }
    }

    #[test]
    fn bigraded_specialization() {
        // F = a0 x0^2 + a1 x0 x1 + a2 x1^2, specialized at coefficients of f
        let basis = monomial_basis(2, 2);
        let mut big = BigradedPoly::zero(3, 2, 1, 2);
        for (i, m) in basis.iter().enumerate() {
            let mut a = vec![0u8; 3];
            a[i] = 1;
            big.add_term(a, m.clone(), Rational::one());
        }
        let f = p("x0^2 + 5*x0*x1 - 2*x1^2", 2);
        let vals = vec![rat_int(1), rat_int(5), rat_int(-2)];
        assert_eq!(big.specialize(&vals), f);
    }

    #[test]
    fn problem_spec_dims() {
        let s = ProblemSpec::new(2, 4).unwrap();
        assert_eq!(s.dim_v(), 15);
        assert_eq!(s.dim_p(), 14);
        assert_eq!(s.dim_a(2), 120);
        assert!(ProblemSpec::new(0, 4).is_err());
        assert!(ProblemSpec::new(2, 1).is_err());
    }
}
