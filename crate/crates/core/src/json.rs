//! JSON documents for exact and numeric results.
//!
//! Rationals are written as strings `"num/den"` (or `"num"`), complex numbers
//! as `[re, im]` pairs. Every document type parses back to the value it was
//! written from.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freelie::{LieElem, LyndonWord, Word};
use crate::periodpoly::{NumericPolynomial, Parity, PeriodSpace};
use crate::scalar::{parse_rational, rational_to_string, Rational};
use crate::sl2::Poly;
use crate::{Derivation, LieElement, PolyAB};

fn rational(s: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| Error::Parse(format!("not a rational number: {s:?}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: String,
    pub coeff: String,
}

pub fn lie_to_json(x: &LieElement) -> Vec<TermJson> {
    x.iter().map(|(w, c)| TermJson { word: w.to_string(), coeff: rational_to_string(c) }).collect()
}

pub fn lie_from_json(terms: &[TermJson]) -> Result<LieElement> {
    let mut x = LieElem::zero();
    for t in terms {
        let w: Word = t.word.parse()?;
        let lw = LyndonWord::new(w).ok_or_else(|| Error::Parse(format!("{} is not a Lyndon word", t.word)))?;
        x.add_term(lw, rational(&t.coeff)?);
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationJson {
    pub degree: usize,
    pub on_a: Vec<TermJson>,
    pub on_b: Vec<TermJson>,
}

impl From<&Derivation> for DerivationJson {
    fn from(d: &Derivation) -> Self {
        Self { degree: d.degree(), on_a: lie_to_json(d.on_a()), on_b: lie_to_json(d.on_b()) }
    }
}

impl TryFrom<&DerivationJson> for Derivation {
    type Error = Error;

    fn try_from(j: &DerivationJson) -> Result<Self> {
        Derivation::new(j.degree, lie_from_json(&j.on_a)?, lie_from_json(&j.on_b)?)
    }
}

/// Coefficients of `a^0 b^d, ..., a^d b^0`.
pub fn poly_to_json(p: &PolyAB) -> Vec<String> {
    p.coeffs().iter().map(rational_to_string).collect()
}

pub fn poly_from_json(coeffs: &[String]) -> Result<PolyAB> {
    if coeffs.is_empty() {
        return Err(Error::Parse("a polynomial needs at least one coefficient".into()));
    }
    Ok(Poly::from_coeffs(coeffs.iter().map(|c| rational(c)).collect::<Result<_>>()?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodSpaceJson {
    pub weight: usize,
    pub two_n: usize,
    pub parity: Parity,
    pub cuspidal: bool,
    pub dimension: usize,
    pub basis: Vec<Vec<String>>,
}

impl From<&PeriodSpace> for PeriodSpaceJson {
    fn from(s: &PeriodSpace) -> Self {
        Self {
            weight: s.two_n + 2,
            two_n: s.two_n,
            parity: s.parity,
            cuspidal: s.cuspidal,
            dimension: s.dim(),
            basis: s.basis.iter().map(poly_to_json).collect(),
        }
    }
}

impl TryFrom<&PeriodSpaceJson> for PeriodSpace {
    type Error = Error;

    fn try_from(j: &PeriodSpaceJson) -> Result<Self> {
        let basis = j.basis.iter().map(|c| poly_from_json(c)).collect::<Result<Vec<_>>>()?;
        if basis.iter().any(|p| p.degree() != j.two_n) {
            return Err(Error::Parse("basis polynomial of the wrong degree".into()));
        }
        Ok(PeriodSpace { two_n: j.two_n, parity: j.parity, cuspidal: j.cuspidal, basis })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericPolyJson {
    pub weight: usize,
    pub coeffs: Vec<[f64; 2]>,
    pub error_estimate: f64,
}

impl From<&NumericPolynomial<f64>> for NumericPolyJson {
    fn from(p: &NumericPolynomial<f64>) -> Self {
        Self { weight: p.two_n + 2, coeffs: p.coeffs.iter().map(|c| [c.re, c.im]).collect(), error_estimate: p.error_estimate }
    }
}

impl From<&NumericPolyJson> for NumericPolynomial<f64> {
    fn from(j: &NumericPolyJson) -> Self {
        NumericPolynomial {
            two_n: j.weight - 2,
            coeffs: j.coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
            error_estimate: j.error_estimate,
        }
    }
}
