//! Quadratic relations between the derivations `eps_{2j+2}`.
//!
//! For a cusp weight `2n + 2` the brackets `[eps_{2j+2}, eps_{2k+2}]` with
//! `j + k = n`, `0 < j < k` are derivations of degree `2n + 4`, fixed by their
//! values on `a` and `b` in Lie degree `2n + 5`. A linear relation among them is
//! a kernel vector of the matrix whose columns are those coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::deriv::{bracket_der, coordinates, epsilon, Deriv};
use crate::error::{Error, Result};
use crate::exact::{Matrix, Vector};
use crate::freelie::FreeLie;
use crate::modforms::{cusp_basis, dim_cusp_forms, DEFAULT_TERMS};
use crate::periodpoly::{cuspidal_space, distance_to_span, numeric_period_polynomial, poly_to_real, Parity};
use crate::scalar::{rational_to_string, Rational, Scalar};
use crate::{Derivation, PolyAB};

pub const DEFAULT_MAX_WEIGHT: usize = 18;
pub const LARGE_MAX_WEIGHT: usize = 22;

#[derive(Clone, Debug)]
pub struct RelationConfig {
    /// Largest accepted cusp weight.
    pub max_weight: usize,
    /// Permit weights up to [`LARGE_MAX_WEIGHT`].
    pub allow_large: bool,
    /// q-expansion length for the numeric comparison.
    pub terms: usize,
}

impl Default for RelationConfig {
    fn default() -> Self {
        Self { max_weight: DEFAULT_MAX_WEIGHT, allow_large: false, terms: DEFAULT_TERMS }
    }
}

impl RelationConfig {
    fn weight_cap(&self) -> usize {
        if self.allow_large {
            self.max_weight.max(LARGE_MAX_WEIGHT)
        } else {
            self.max_weight.min(LARGE_MAX_WEIGHT)
        }
    }

    /// Validate a cusp weight and return `n` with `weight = 2n + 2`.
    pub fn check_weight(&self, weight: usize) -> Result<usize> {
        if weight < 6 || weight % 2 == 1 {
            return Err(Error::InvalidWeight(format!("weight must be even and ≥ 6, got {weight}")));
        }
        let cap = self.weight_cap();
        if weight > cap {
            let hint = if self.allow_large { "" } else { " (weights up to 22 need the large-weight flag)" };
            return Err(Error::InvalidWeight(format!("weight {weight} exceeds the maximum {cap}{hint}")));
        }
        Ok((weight - 2) / 2)
    }

    fn algebra(&self, n: usize) -> Result<FreeLie> {
        FreeLie::new(2 * n + 5)
    }
}

/// Pairs `(j, k)` with `j + k = n`, `0 < j < k`, in increasing `j`.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (1..n).filter(|&j| j < n - j).map(|j| (j, n - j)).collect()
}

/// `sum_{j<k} c_{jk} [eps_{2j+2}, eps_{2k+2}]` for a cusp weight `2n + 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationCandidate {
    pub n: usize,
    pub coefficients: Vec<((usize, usize), Rational)>,
}

impl RelationCandidate {
    pub fn weight(&self) -> usize {
        2 * self.n + 2
    }

    /// Interior polynomial `sum c_j a^{2j} b^{2n-2j}` with `c_j = c_{jk}` and `c_k = -c_{jk}`.
    pub fn polynomial(&self) -> PolyAB {
        let mut p = PolyAB::zero(2 * self.n);
        for ((j, k), c) in &self.coefficients {
            p.add_term(2 * j, c.clone());
            p.add_term(2 * k, -c.clone());
        }
        p
    }

    /// The same relation written in the generators `e_{2m} = 2 eps_{2m} / (2m - 2)!`.
    pub fn e_generator_coefficients(&self) -> Vec<((usize, usize), Rational)> {
        let fact = |m: usize| (1..=m).fold(Rational::one(), |acc, i| acc * Rational::from_int(i as i64));
        self.coefficients
            .iter()
            .map(|&((j, k), ref c)| ((j, k), c * fact(2 * j) * fact(2 * k) / Rational::from_int(4)))
            .collect()
    }
}

/// The highest weight derivations `eps_{2j+2}` needed for weight `2n + 2`, indexed by `j`.
fn epsilons(alg: &FreeLie, n: usize) -> Result<Vec<Derivation>> {
    (0..n).into_par_iter().map(|j| Ok(epsilon::<Rational>(alg, j + 1)?.derivation)).collect()
}

fn brackets(alg: &FreeLie, n: usize) -> Result<Vec<Derivation>> {
    let eps = epsilons(alg, n)?;
    pairs(n).into_par_iter().map(|(j, k)| bracket_der(alg, &eps[j], &eps[k])).collect()
}

fn assemble(alg: &FreeLie, n: usize, columns: &[Derivation]) -> Result<Matrix<Rational>> {
    let len = 2 * alg.lyndon_basis(2 * n + 5)?.len();
    let coords: Vec<Vector<Rational>> = columns
        .par_iter()
        .map(|d| {
            if d.is_zero() {
                Ok(Vector::zeros(len))
            } else {
                coordinates(alg, d)
            }
        })
        .collect::<Result<_>>()?;
    Ok(Matrix::from_columns(len, &coords))
}

/// Coordinates of the brackets `[eps_{2j+2}, eps_{2k+2}]`, one column per pair.
pub fn bracket_matrix(n: usize, cfg: &RelationConfig) -> Result<Matrix<Rational>> {
    cfg.check_weight(2 * n + 2)?;
    let alg = cfg.algebra(n)?;
    assemble(&alg, n, &brackets(&alg, n)?)
}

/// Kernel of the rows of `m` that are not identically zero.
fn compact_kernel(m: &Matrix<Rational>) -> Vec<Vector<Rational>> {
    let rows: Vec<Vec<Rational>> =
        (0..m.rows()).map(|r| m.row(r)).filter(|r| !r.is_zero()).map(|r| r.to_dense()).collect();
    if rows.is_empty() {
        return (0..m.cols()).map(|c| Vector::unit(m.cols(), c)).collect();
    }
    Matrix::from_rows(rows).kernel_basis()
}

/// Smallest integer multiple with a positive first entry.
fn primitive(x: &Vector<Rational>) -> Vector<Rational> {
    let den = x.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let num = x.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(&(c.numer() * &den / c.denom())));
    let sign = x.iter().next().map_or(BigInt::one(), |(_, c)| if c.is_negative() { -BigInt::one() } else { BigInt::one() });
    if num.is_zero() {
        return x.clone();
    }
    x.scaled(&Rational::new(den * sign, num))
}

fn combine(columns: &[Derivation], x: &Vector<Rational>) -> Result<Derivation> {
    let mut sum = Deriv::zero(columns.first().map_or(0, Deriv::degree));
    for (i, c) in x.iter() {
        sum = sum.add(&columns[i].scale(c))?;
    }
    Ok(sum)
}

/// Exact kernel of [`bracket_matrix`], each vector re-checked to give the zero derivation.
pub fn quadratic_relations(n: usize, cfg: &RelationConfig) -> Result<Vec<RelationCandidate>> {
    cfg.check_weight(2 * n + 2)?;
    let alg = cfg.algebra(n)?;
    let columns = brackets(&alg, n)?;
    let m = assemble(&alg, n, &columns)?;
    let ps = pairs(n);
    let mut out = Vec::new();
    for x in compact_kernel(&m).iter().map(primitive) {
        if !combine(&columns, &x)?.is_zero() {
            return Err(Error::InvalidArgument(format!("kernel vector of weight {} is not a relation", 2 * n + 2)));
        }
        out.push(RelationCandidate { n, coefficients: x.iter().map(|(i, c)| (ps[i], c.clone())).collect() });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodMatch {
    /// Every relation polynomial lies in the exact cuspidal plus space.
    pub exact_member: bool,
    /// Largest relative distance of a relation polynomial from the numeric `r_f^+` span;
    /// absent when there is nothing to compare.
    pub numeric_relative_deviation: Option<f64>,
    pub cusp_dimension: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport {
    pub weight: usize,
    pub pairs: Vec<(usize, usize)>,
    pub relations: Vec<RelationCandidate>,
    pub period_match: PeriodMatch,
}

/// Dense coefficient row of a relation in the pair order.
fn dense(pairs: &[(usize, usize)], coeffs: &[((usize, usize), Rational)]) -> Vec<Rational> {
    pairs.iter().map(|p| coeffs.iter().find(|(q, _)| q == p).map_or_else(Rational::zero, |(_, c)| c.clone())).collect()
}

impl RelationReport {
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        self.relations.iter().map(|r| dense(&self.pairs, &r.coefficients)).collect()
    }

    pub fn e_generator_scaling(&self) -> Vec<Vec<Rational>> {
        self.relations.iter().map(|r| dense(&self.pairs, &r.e_generator_coefficients())).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let strings = |rows: Vec<Vec<Rational>>| -> Vec<Vec<String>> {
            rows.iter().map(|r| r.iter().map(rational_to_string).collect()).collect()
        };
        serde_json::json!({
            "weight": self.weight,
            "pairs": self.pairs.iter().map(|&(j, k)| [j, k]).collect::<Vec<_>>(),
            "kernel": strings(self.kernel()),
            "e_generator_scaling": strings(self.e_generator_scaling()),
            "period_match": self.period_match,
        })
    }
}

/// Relations of weight `2n + 2` compared with even period polynomials of cusp forms.
pub fn match_to_period_polynomials(n: usize, cfg: &RelationConfig) -> Result<RelationReport> {
    let relations = quadratic_relations(n, cfg)?;
    let two_n = 2 * n;
    let weight = two_n + 2;
    let plus = cuspidal_space(two_n, Parity::Plus)?;
    let exact_member = relations.iter().all(|r| plus.contains(&r.polynomial()));
    let cusp_dimension = dim_cusp_forms(weight);
    let numeric_relative_deviation = if relations.is_empty() || cusp_dimension == 0 {
        None
    } else {
        let interior = |v: Vec<f64>| v[1..two_n].to_vec();
        let span: Vec<Vec<f64>> = cusp_basis(weight, cfg.terms)?
            .iter()
            .map(|f| Ok(interior(numeric_period_polynomial::<f64>(f)?.plus_part())))
            .collect::<Result<_>>()?;
        let worst = relations
            .iter()
            .map(|r| distance_to_span(&interior(poly_to_real(&r.polynomial())), &span))
            .fold(0.0, f64::max);
        Some(worst)
    };
    Ok(RelationReport {
        weight,
        pairs: pairs(n),
        relations,
        period_match: PeriodMatch { exact_member, numeric_relative_deviation, cusp_dimension },
    })
}
