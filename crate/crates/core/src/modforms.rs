//! Level one modular forms as truncated q-expansions with exact coefficients.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Matrix;
use crate::scalar::{Rational, Scalar};

/// Number of q-expansion terms used when the caller does not specify one.
pub const DEFAULT_TERMS: usize = 64;

/// `sum_{k < precision} c_k q^k` of a declared weight.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<S> {
    weight: usize,
    quasi_modular: bool,
    coeffs: Vec<S>,
}

impl<S: Scalar> Series<S> {
    pub fn new(weight: usize, coeffs: Vec<S>) -> Result<Self> {
        if weight % 2 == 1 {
            return Err(Error::InvalidWeight(format!("level one weights are even, got {weight}")));
        }
        Ok(Self { weight, quasi_modular: false, coeffs })
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    /// Only true for `G_2`, which transforms with an extra term.
    pub fn is_quasi_modular(&self) -> bool {
        self.quasi_modular
    }

    pub fn is_cuspidal(&self) -> bool {
        self.coeffs.first().is_none_or(|c| c.is_zero())
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let mut s = self.clone();
        s.coeffs.truncate(precision);
        s
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            weight: self.weight,
            quasi_modular: self.quasi_modular,
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    /// Sum of two series of the same weight, to the smaller precision.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.weight != other.weight {
            return Err(Error::InvalidWeight(format!(
                "cannot add series of weights {} and {}",
                self.weight, other.weight
            )));
        }
        let n = self.precision().min(other.precision());
        Ok(Self {
            weight: self.weight,
            quasi_modular: self.quasi_modular || other.quasi_modular,
            coeffs: (0..n).map(|k| self.coeffs[k].clone() + other.coeffs[k].clone()).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    /// Product; weights add and the precision is the smaller of the two.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        let coeffs = (0..n)
            .map(|k| {
                (0..=k)
                    .filter(|&i| !self.coeffs[i].is_zero())
                    .fold(S::zero(), |acc, i| acc + self.coeffs[i].clone() * other.coeffs[k - i].clone())
            })
            .collect();
        Self {
            weight: self.weight + other.weight,
            quasi_modular: self.quasi_modular || other.quasi_modular,
            coeffs,
        }
    }

    pub fn pow(&self, e: usize, precision: usize) -> Self {
        let mut one = vec![S::zero(); precision];
        if precision > 0 {
            one[0] = S::one();
        }
        let mut acc = Series { weight: 0, quasi_modular: false, coeffs: one };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Bernoulli number `B_n` with `B_1 = -1/2`, by the Akiyama–Tanigawa transform.
pub fn bernoulli(n: usize) -> Rational {
    let mut row: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        row.push(Rational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            row[j - 1] = (row[j - 1].clone() - row[j].clone()) * Rational::from_integer(BigInt::from(j));
        }
    }
    // the transform yields B_1 = +1/2
    if n == 1 {
        -row[0].clone()
    } else {
        row[0].clone()
    }
}

/// `sigma_r(n) = sum_{d | n} d^r`.
pub fn divisor_sigma(r: u32, n: u64) -> BigInt {
    assert!(n >= 1);
    let mut total = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += BigInt::from(d).pow(r);
            let e = n / d;
            if e != d {
                total += BigInt::from(e).pow(r);
            }
        }
        d += 1;
    }
    total
}

fn check_even_weight(weight: usize, min: usize) -> Result<()> {
    if weight % 2 == 1 || weight < min {
        return Err(Error::InvalidWeight(format!("expected an even weight >= {min}, got {weight}")));
    }
    Ok(())
}

fn g_series(weight: usize, terms: usize) -> Vec<Rational> {
    let mut coeffs = Vec::with_capacity(terms);
    if terms > 0 {
        coeffs.push(-bernoulli(weight) / Rational::from_integer(BigInt::from(2 * weight)));
    }
    for k in 1..terms {
        coeffs.push(Rational::from_integer(divisor_sigma(weight as u32 - 1, k as u64)));
    }
    coeffs
}

/// `G_{2n} = -B_{2n}/4n + sum_{k >= 1} sigma_{2n-1}(k) q^k`.
pub fn eisenstein_g(weight: usize, terms: usize) -> Result<Series<Rational>> {
    check_even_weight(weight, 4)?;
    Series::new(weight, g_series(weight, terms))
}

/// `G_2 = -1/24 + sum sigma_1(k) q^k`, flagged quasi-modular.
pub fn eisenstein_g2(terms: usize) -> Series<Rational> {
    Series { weight: 2, quasi_modular: true, coeffs: g_series(2, terms) }
}

/// `E_{2n} = G_{2n} / G_{2n}(constant term)`, constant term 1.
pub fn eisenstein_e(weight: usize, terms: usize) -> Result<Series<Rational>> {
    let g = eisenstein_g(weight, terms)?;
    if terms == 0 {
        return Ok(g);
    }
    let c = g.coeff(0);
    Ok(g.scale(&(Rational::one() / c)))
}

/// Pairs `(alpha, beta)` with `4 alpha + 6 beta = k`, alpha descending.
pub fn weight_decompositions(k: usize) -> Vec<(usize, usize)> {
    if k % 2 == 1 {
        return vec![];
    }
    (0..=k / 4).rev().filter(|a| (k - 4 * a).is_multiple_of(6)).map(|a| (a, (k - 4 * a) / 6)).collect()
}

pub fn dim_modular_forms(k: usize) -> usize {
    weight_decompositions(k).len()
}

pub fn dim_cusp_forms(k: usize) -> usize {
    dim_modular_forms(k).saturating_sub(1)
}

/// The monomials `E_4^alpha E_6^beta` spanning `M_k`.
pub fn mform_basis(k: usize, terms: usize) -> Result<Vec<Series<Rational>>> {
    if k % 2 == 1 {
        return Err(Error::InvalidWeight(format!("level one weights are even, got {k}")));
    }
    let decomps = weight_decompositions(k);
    if decomps.is_empty() {
        return Ok(vec![]);
    }
    let e4 = eisenstein_e(4, terms)?;
    let e6 = eisenstein_e(6, terms)?;
    Ok(decomps.into_iter().map(|(a, b)| e4.pow(a, terms).mul(&e6.pow(b, terms))).collect())
}

/// Echelon basis of `S_k` with leading terms `q, q^2, ...`.
///
/// `terms` must exceed `dim S_k` for the echelon form to be visible.
pub fn cusp_basis(k: usize, terms: usize) -> Result<Vec<Series<Rational>>> {
    let basis = mform_basis(k, terms)?;
    if basis.len() < 2 {
        return Ok(vec![]);
    }
    if terms < basis.len() {
        return Err(Error::InvalidArgument(format!(
            "need more than {} terms to separate the cusp forms of weight {k}",
            basis.len() - 1
        )));
    }
    let m = Matrix::from_rows(basis.iter().map(|s| s.coeffs.clone()).collect());
    let (r, pivots) = m.rref();
    Ok((0..pivots.len())
        .filter(|&i| pivots[i] != 0)
        .map(|i| Series { weight: k, quasi_modular: false, coeffs: r.row(i).to_dense() })
        .collect())
}

/// `Delta = (E_4^3 - E_6^2) / 1728`.
pub fn delta(terms: usize) -> Series<Rational> {
    let e4 = eisenstein_e(4, terms).expect("weight 4");
    let e6 = eisenstein_e(6, terms).expect("weight 6");
    let diff = e4.pow(3, terms).sub(&e6.pow(2, terms)).expect("both weight 12");
    diff.scale(&Rational::new(BigInt::one(), BigInt::from(1728)))
}

/// JSON shape `{weight, coeffs: ["num/den", ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub weight: usize,
    pub coeffs: Vec<String>,
}

impl From<&Series<Rational>> for SeriesJson {
    fn from(s: &Series<Rational>) -> Self {
        SeriesJson { weight: s.weight, coeffs: s.coeffs.iter().map(|c| c.to_string()).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qq};

    /// Independent oracle: `sum_{k=0}^{n} C(n+1, k) B_k = 0`.
    fn bernoulli_recurrence(n: usize) -> Vec<Rational> {
        let mut b: Vec<Rational> = vec![q(1)];
        for m in 1..=n {
            let mut binom = BigInt::one();
            let mut s = Rational::zero();
            for (k, bk) in b.iter().enumerate() {
                s += Rational::from_integer(binom.clone()) * bk.clone();
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-s / q(m as i64 + 1));
        }
        b
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0), q(1));
        assert_eq!(bernoulli(1), qq(-1, 2));
        assert_eq!(bernoulli(2), qq(1, 6));
        assert_eq!(bernoulli(4), qq(-1, 30));
        assert_eq!(bernoulli(6), qq(1, 42));
        assert_eq!(bernoulli(12), qq(-691, 2730));
        let oracle = bernoulli_recurrence(30);
        for (n, b) in oracle.iter().enumerate() {
            assert_eq!(&bernoulli(n), b, "B_{n}");
        }
    }

    #[test]
    fn sigma_values() {
        assert_eq!(divisor_sigma(3, 2), BigInt::from(9));
        assert_eq!(divisor_sigma(3, 3), BigInt::from(28));
        assert_eq!(divisor_sigma(1, 12), BigInt::from(28));
        assert_eq!(divisor_sigma(0, 36), BigInt::from(9));
    }

    #[test]
    fn g4_and_g6() {
        let g4 = eisenstein_g(4, 4).unwrap();
        assert_eq!(g4.coeffs(), &[qq(1, 240), q(1), q(9), q(28)]);
        assert_eq!(eisenstein_g(6, 2).unwrap().coeff(0), qq(-1, 504));
        for w in [4, 6, 8, 10, 12] {
            let g = eisenstein_g(w, 30).unwrap();
            for c in &g.coeffs()[1..] {
                assert!(c.is_integer() && *c > q(0));
            }
        }
        assert!(eisenstein_g(2, 4).is_err());
        assert!(eisenstein_g(5, 4).is_err());
    }

    #[test]
    fn g2_is_quasi_modular() {
        let g2 = eisenstein_g2(3);
        assert_eq!(g2.coeffs(), &[qq(-1, 24), q(1), q(3)]);
        assert_eq!(g2.weight(), 2);
        assert!(g2.is_quasi_modular());
    }

    #[test]
    fn mform_basis_sizes() {
        assert_eq!(mform_basis(12, 8).unwrap().len(), 2);
        assert_eq!(mform_basis(14, 8).unwrap().len(), 1);
        assert!(mform_basis(2, 8).unwrap().is_empty());
        assert_eq!(mform_basis(0, 4).unwrap().len(), 1);
        let hand = [(0, 1), (2, 0), (4, 1), (6, 1), (8, 1), (10, 1), (12, 2), (14, 1), (16, 2), (18, 2), (20, 2), (22, 2), (24, 3), (26, 2)];
        for (k, d) in hand {
            assert_eq!(dim_modular_forms(k), d, "k = {k}");
        }
    }

    #[test]
    fn delta_from_eisenstein() {
        let e4 = eisenstein_e(4, 10).unwrap();
        let e6 = eisenstein_e(6, 10).unwrap();
        let diff = e4.pow(3, 10).sub(&e6.pow(2, 10)).unwrap();
        assert_eq!(diff.coeff(0), q(0));
        assert_eq!(diff.coeff(1), q(1728));
        let d = delta(6);
        assert_eq!(d.coeffs(), &[q(0), q(1), q(-24), q(252), q(-1472), q(4830)]);
    }

    #[test]
    fn cusp_bases() {
        let s12 = cusp_basis(12, 6).unwrap();
        assert_eq!(s12.len(), 1);
        assert_eq!(s12[0], delta(6));
        assert!(cusp_basis(10, 6).unwrap().is_empty());
        let s24 = cusp_basis(24, 8).unwrap();
        assert_eq!(s24.len(), 2);
        assert_eq!((s24[0].coeff(1), s24[0].coeff(2)), (q(1), q(0)));
        assert_eq!((s24[1].coeff(1), s24[1].coeff(2)), (q(0), q(1)));
        for f in &s24 {
            assert!(f.is_cuspidal());
            assert!(f.coeffs().iter().all(|c| c.is_integer()));
        }
    }

    #[test]
    fn mixed_weight_addition_rejected() {
        let g4 = eisenstein_g(4, 4).unwrap();
        let g6 = eisenstein_g(6, 4).unwrap();
        assert!(g4.add(&g6).is_err());
        assert_eq!(g4.add(&g4.truncate(2)).unwrap().precision(), 2);
    }
}
