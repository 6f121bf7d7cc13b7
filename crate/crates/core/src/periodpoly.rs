//! Period polynomials of level one.
//!
//! Exact side: the space of `r in S^{2n}H` with `(1 + S) r = 0` and
//! `(1 + U + U^2) r = 0`, its even/odd parts, and the quotient by the
//! coboundary `b^{2n} - a^{2n}`.
//!
//! Numeric side: the modular symbol
//! `r_f(a, b) = -(2 pi i)^{2n+1} int_0^oo f(iy) (b - iy a)^{2n} d(iy)`
//! of a cusp form, through the moments `I_m = int_0^oo f(iy) y^m dy`.
//! The integral is split at `y = 1`; the lower half is folded onto
//! `[1, oo)` with `f(i/y) = (iy)^{2n+2} f(iy)`, and every
//! `int_1^oo e^{-2 pi k y} y^m dy` is summed in closed form.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Matrix, Vector};
use crate::modforms::Series;
use crate::scalar::{Rational, Real, Scalar, ToReal};
use crate::sl2::{poly_action_matrix, Poly, Sl2Z};
use crate::PolyAB;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Full,
    Plus,
    Minus,
}

/// A subspace of period polynomials, given by an echelonized basis.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodSpace {
    pub two_n: usize,
    pub parity: Parity,
    /// Whether the coboundary has been quotiented out.
    pub cuspidal: bool,
    pub basis: Vec<PolyAB>,
}

impl PeriodSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn flavor(&self) -> &'static str {
        match (self.parity, self.cuspidal) {
            (Parity::Full, false) => "full-cocycle",
            (Parity::Full, true) => "cuspidal",
            (Parity::Plus, _) => "plus",
            (Parity::Minus, _) => "minus",
        }
    }

    /// Whether `p` lies in the span of the basis.
    pub fn contains(&self, p: &PolyAB) -> bool {
        if p.degree() != self.two_n {
            return false;
        }
        let mut rows: Vec<Vec<Rational>> = self.basis.iter().map(|b| b.coeffs()).collect();
        rows.push(p.coeffs());
        Matrix::from_rows(rows).rank() == self.basis.len()
    }
}

fn check_two_n(two_n: usize) -> Result<()> {
    if two_n < 2 || two_n % 2 == 1 {
        return Err(Error::InvalidWeight(format!("period polynomials need even degree >= 2, got {two_n}")));
    }
    Ok(())
}

/// Stacked matrix of the maps `1 + S` and `1 + U + U^2` on `S^{2n}H`.
pub fn cocycle_matrix(two_n: usize) -> Matrix<Rational> {
    let id = Matrix::identity(two_n + 1);
    let s = poly_action_matrix(&Sl2Z::S, two_n);
    let u = poly_action_matrix(&Sl2Z::U, two_n);
    let u2 = poly_action_matrix(&Sl2Z::U.pow(2), two_n);
    let sum = |ms: &[&Matrix<Rational>]| {
        let mut out = Matrix::zeros(two_n + 1, two_n + 1);
        for m in ms {
            for r in 0..=two_n {
                for c in 0..=two_n {
                    let v = out.get(r, c) + m.get(r, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    };
    sum(&[&id, &s]).vstack(&sum(&[&id, &u, &u2]))
}

fn echelon_basis(vectors: &[Vector<Rational>], two_n: usize) -> Vec<PolyAB> {
    if vectors.is_empty() {
        return vec![];
    }
    let m = Matrix::from_rows(vectors.iter().map(Vector::to_dense).collect());
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| Poly::from_coeffs(r.row(i).to_dense())).inspect(|p: &PolyAB| debug_assert_eq!(p.degree(), two_n)).collect()
}

/// All solutions of the two cocycle relations in degree `two_n`.
pub fn cocycle_space(two_n: usize) -> Result<PeriodSpace> {
    check_two_n(two_n)?;
    let kernel = cocycle_matrix(two_n).kernel_basis();
    Ok(PeriodSpace { two_n, parity: Parity::Full, cuspidal: false, basis: echelon_basis(&kernel, two_n) })
}

/// Subspace of `space` whose members only have exponents of `a` of the given parity.
fn parity_subspace(space: &PeriodSpace, parity: Parity) -> PeriodSpace {
    let n = space.two_n;
    let banned: Vec<usize> = match parity {
        Parity::Plus => (1..=n).step_by(2).collect(),
        Parity::Minus => (0..=n).step_by(2).collect(),
        Parity::Full => vec![],
    };
    let k = space.basis.len();
    // combinations x of the basis with sum x_i B_i vanishing on the banned exponents
    let mut m = Matrix::zeros(banned.len(), k);
    for (r, &j) in banned.iter().enumerate() {
        for (c, b) in space.basis.iter().enumerate() {
            m.set(r, c, b.coeff(j));
        }
    }
    let members: Vec<Vector<Rational>> = m
        .kernel_basis()
        .iter()
        .map(|x| {
            let mut p = Poly::zero(n);
            for (i, c) in x.iter() {
                p.add_scaled(&space.basis[i], c);
            }
            Vector::from_dense(p.coeffs())
        })
        .collect();
    PeriodSpace { two_n: n, parity, cuspidal: space.cuspidal, basis: echelon_basis(&members, n) }
}

/// Even and odd members of a full (or cuspidal) cocycle space.
pub fn split_parity(space: &PeriodSpace) -> Result<(PeriodSpace, PeriodSpace)> {
    if space.parity != Parity::Full {
        return Err(Error::InvalidArgument(format!("cannot split a {} space", space.flavor())));
    }
    Ok((parity_subspace(space, Parity::Plus), parity_subspace(space, Parity::Minus)))
}

/// The coboundary `b^{2n} - a^{2n}` of `a^{2n}`, evaluated on `S`.
pub fn coboundary(two_n: usize) -> PolyAB {
    let mut p = Poly::monomial(two_n, 0);
    p.add_term(two_n, -Rational::from_int(1));
    p
}

/// Quotient by the coboundary, with representatives free of `a^{2n}` (hence of `b^{2n}`).
pub fn cuspidal_quotient(space: &PeriodSpace) -> Result<PeriodSpace> {
    if space.cuspidal {
        return Err(Error::InvalidArgument("space is already cuspidal".into()));
    }
    let n = space.two_n;
    if space.basis.is_empty() {
        return Ok(PeriodSpace { cuspidal: true, ..space.clone() });
    }
    // echelonize with the a^{2n} coefficient as the first column
    let order: Vec<usize> = std::iter::once(n).chain(0..n).collect();
    let m = Matrix::from_rows(space.basis.iter().map(|b| order.iter().map(|&j| b.coeff(j)).collect()).collect());
    let (r, pivots) = m.rref();
    let mut basis = Vec::new();
    let mut dropped = false;
    for (i, &p) in pivots.iter().enumerate() {
        if p == 0 {
            dropped = true;
            continue;
        }
        let mut poly = Poly::zero(n);
        for (col, c) in r.row(i).iter() {
            poly.add_term(order[col], c.clone());
        }
        basis.push(poly);
    }
    if dropped && !space.contains(&coboundary(n)) {
        return Err(Error::InvalidArgument("space has a^{2n} terms but does not contain the coboundary".into()));
    }
    Ok(PeriodSpace { two_n: n, parity: space.parity, cuspidal: true, basis })
}

/// Cuspidal part of the given parity (the `Full` parity gives the whole cuspidal quotient).
pub fn cuspidal_space(two_n: usize, parity: Parity) -> Result<PeriodSpace> {
    let full = cocycle_space(two_n)?;
    let part = match parity {
        Parity::Full => full,
        _ => {
            let (plus, minus) = split_parity(&full)?;
            if parity == Parity::Plus {
                plus
            } else {
                minus
            }
        }
    };
    cuspidal_quotient(&part)
}

/// Numerically computed modular symbol of a cusp form.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericPolynomial<F> {
    pub two_n: usize,
    /// Coefficient of `a^m b^{2n-m}`, `m = 0..=2n`.
    pub coeffs: Vec<Complex<F>>,
    /// Bound on the q-expansion truncation error, in the units of `coeffs`.
    pub error_estimate: F,
}

impl<F: Real> NumericPolynomial<F> {
    /// Real polynomial `r^+` (even exponents of `a`; real parts).
    pub fn plus_part(&self) -> Vec<F> {
        self.coeffs.iter().enumerate().map(|(m, c)| if m % 2 == 0 { c.re } else { F::zero() }).collect()
    }

    /// Real polynomial `r^-` with `r = r^+ + i r^-` (odd exponents; imaginary parts).
    pub fn minus_part(&self) -> Vec<F> {
        self.coeffs.iter().enumerate().map(|(m, c)| if m % 2 == 1 { c.im } else { F::zero() }).collect()
    }

    /// Scale so that the first coefficient of non-negligible size is 1.
    pub fn normalized(&self) -> Vec<Complex<F>> {
        normalize_complex(&self.coeffs)
    }

    /// Relative residual of `(1 + S) r` and `(1 + U + U^2) r`.
    pub fn cocycle_residual(&self) -> F {
        cocycle_residual_complex(&self.coeffs)
    }
}

fn normalize_complex<F: Real>(v: &[Complex<F>]) -> Vec<Complex<F>> {
    let max = v.iter().map(|c| c.norm()).fold(F::zero(), F::max);
    let lead = v.iter().find(|c| c.norm() > max * F::lit(1e-9)).copied().unwrap_or(Complex::new(F::one(), F::zero()));
    v.iter().map(|c| *c / lead).collect()
}

/// Relative residual of the two cocycle relations applied to a real or complex coefficient vector.
pub fn cocycle_residual_complex<F: Real>(coeffs: &[Complex<F>]) -> F {
    let n = coeffs.len() - 1;
    let m = cocycle_matrix(n);
    let scale = coeffs.iter().map(|c| c.norm()).fold(F::zero(), F::max);
    if scale == F::zero() {
        return F::zero();
    }
    let mut worst = F::zero();
    for r in 0..m.rows() {
        let mut acc = Complex::new(F::zero(), F::zero());
        for (c, x) in m.row(r).iter() {
            acc = acc + coeffs[c] * <Rational as ToReal<F>>::to_real(x);
        }
        worst = worst.max(acc.norm() / scale);
    }
    worst
}

pub fn cocycle_residual_real<F: Real>(coeffs: &[F]) -> F {
    let v: Vec<Complex<F>> = coeffs.iter().map(|&x| Complex::new(x, F::zero())).collect();
    cocycle_residual_complex(&v)
}

/// `int_1^oo e^{-2 pi k y} y^m dy = m! e^{-2 pi k} sum_{i=0}^{m} (2 pi k)^{i-m-1} / i!`.
pub fn tail_moment<F: Real>(k: usize, m: usize) -> F {
    let lambda = F::lit(2.0) * F::PI() * F::lit(k as f64);
    let mut sum = F::zero();
    // term_i = m!/i! * lambda^{i-m-1}, accumulated from i = m downwards
    let mut term = F::one() / lambda;
    for i in (0..=m).rev() {
        sum = sum + term;
        term = term * F::lit(i as f64) / lambda;
    }
    sum * (-lambda).exp()
}

/// Modular symbol of the cusp form `f` of weight `2n + 2`.
pub fn numeric_period_polynomial<F: Real>(f: &Series<Rational>) -> Result<NumericPolynomial<F>> {
    if f.is_quasi_modular() {
        return Err(Error::InvalidWeight("quasi-modular series have no period polynomial".into()));
    }
    if !f.is_cuspidal() {
        return Err(Error::InvalidArgument("period polynomials need a cusp form (zero constant term)".into()));
    }
    let weight = f.weight();
    if weight < 4 {
        return Err(Error::InvalidWeight(format!("cusp form weight must be at least 4, got {weight}")));
    }
    if f.precision() < 16 {
        return Err(Error::InvalidArgument(format!("need at least 16 q-expansion terms, got {}", f.precision())));
    }
    let two_n = weight - 2;
    let n = two_n / 2;
    let a: Vec<F> = f.coeffs().iter().map(|c| c.to_real()).collect();
    let terms = a.len();
    let tail: Vec<F> = (0..=two_n)
        .into_par_iter()
        .map(|m| (1..terms).fold(F::zero(), |acc, k| acc + a[k] * tail_moment::<F>(k, m)))
        .collect();
    // I_m = J_m + (-1)^{n+1} J_{2n-m}
    let fold_sign = if n.is_multiple_of(2) { -F::one() } else { F::one() };
    let moments: Vec<F> = (0..=two_n).map(|m| tail[m] + fold_sign * tail[two_n - m]).collect();
    // prefactor -(2 pi i)^{2n+1} i = (-1)^n (2 pi)^{2n+1}
    let two_pi = F::lit(2.0) * F::PI();
    let sign = if n.is_multiple_of(2) { F::one() } else { -F::one() };
    let pref = sign * two_pi.powi(two_n as i32 + 1);
    let mut binom = F::one();
    let mut coeffs = Vec::with_capacity(two_n + 1);
    let mut worst_tail = F::zero();
    let last = a[terms - 1].abs().max(F::one());
    for (m, &moment) in moments.iter().enumerate() {
        // (-i)^m is one of 1, -i, -1, i
        let x = pref * binom * moment;
        coeffs.push(match m % 4 {
            0 => Complex::new(x, F::zero()),
            1 => Complex::new(F::zero(), -x),
            2 => Complex::new(-x, F::zero()),
            _ => Complex::new(F::zero(), x),
        });
        let t = last * (tail_moment::<F>(terms, m) + tail_moment::<F>(terms, two_n - m));
        worst_tail = worst_tail.max(pref.abs() * binom * t);
        binom = binom * F::lit((two_n - m) as f64) / F::lit((m + 1) as f64);
    }
    Ok(NumericPolynomial { two_n, coeffs, error_estimate: worst_tail })
}

/// `min_lambda |u - lambda v| / |u|`.
pub fn projective_deviation<F: Real>(u: &[F], v: &[F]) -> F {
    distance_to_span(u, &[v.to_vec()])
}

/// Relative distance from `u` to the span of `basis`, by Gram–Schmidt.
pub fn distance_to_span<F: Real>(u: &[F], basis: &[Vec<F>]) -> F {
    let norm = |x: &[F]| x.iter().fold(F::zero(), |acc, &y| acc + y * y).sqrt();
    let dot = |x: &[F], y: &[F]| x.iter().zip(y).fold(F::zero(), |acc, (&p, &q)| acc + p * q);
    let un = norm(u);
    if un == F::zero() {
        return F::zero();
    }
    let mut ortho: Vec<Vec<F>> = Vec::new();
    for b in basis {
        let mut v = b.clone();
        for e in &ortho {
            let c = dot(&v, e);
            v.iter_mut().zip(e).for_each(|(x, &y)| *x = *x - c * y);
        }
        let vn = norm(&v);
        if vn > F::lit(1e-300) {
            ortho.push(v.iter().map(|&x| x / vn).collect());
        }
    }
    let mut r = u.to_vec();
    for e in &ortho {
        let c = dot(&r, e);
        r.iter_mut().zip(e).for_each(|(x, &y)| *x = *x - c * y);
    }
    norm(&r) / un
}

/// Coefficients of an exact polynomial as floats.
pub fn poly_to_real<F: Real, S: Scalar + ToReal<F>>(p: &Poly<S>) -> Vec<F> {
    p.coeffs().iter().map(|c| c.to_real()).collect()
}
