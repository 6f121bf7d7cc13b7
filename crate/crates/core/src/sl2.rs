//! SL2(Z) and sl2 acting on `H = Qa + Qb`, on `S^{2n}H` and on the free Lie algebra.
//!
//! Convention: `g` acts on the row vector `(a, -b)` by right multiplication,
//! `(a, -b) -> (a, -b) g`. For `g = [[p, q], [r, s]]` this is
//! `a -> p a - r b`, `b -> -q a + s b`, and the substitution maps compose as
//! `act(g1 g2) = act(g1) o act(g2)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::deriv::{self, Deriv};
use crate::error::{Error, Result};
use crate::freelie::{FreeLie, LieElem, Tensor, Word};
use crate::scalar::{Rational, Scalar};

/// An integer 2x2 matrix of determinant one, `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Sl2Z {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2Z {
    pub const IDENTITY: Sl2Z = Sl2Z { a: 1, b: 0, c: 0, d: 1 };
    pub const MINUS_IDENTITY: Sl2Z = Sl2Z { a: -1, b: 0, c: 0, d: -1 };
    pub const S: Sl2Z = Sl2Z { a: 0, b: -1, c: 1, d: 0 };
    pub const T: Sl2Z = Sl2Z { a: 1, b: 1, c: 0, d: 1 };
    /// `U = S T`.
    pub const U: Sl2Z = Sl2Z { a: 0, b: -1, c: 1, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::NotSl2([a, b, c, d]));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn from_rows(rows: [[i64; 2]; 2]) -> Result<Self> {
        Self::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn mul(&self, o: &Sl2Z) -> Sl2Z {
        Sl2Z {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Sl2Z {
        Sl2Z { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn pow(&self, e: i64) -> Sl2Z {
        let base = if e < 0 { self.inverse() } else { *self };
        (0..e.unsigned_abs()).fold(Sl2Z::IDENTITY, |acc, _| acc.mul(&base))
    }

    /// Coefficients `((p, -r), (-q, s))` of the images of `a` and `b` in the basis `a, b`.
    pub fn images(&self) -> ((i64, i64), (i64, i64)) {
        ((self.a, -self.c), (-self.b, self.d))
    }

    /// Parse a word such as `"S*T^-2"`, `"U^2"` or `"ST"`; lowercase letters denote inverses.
    pub fn parse_word(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::Parse("empty group word".into()));
        }
        let mut acc = Sl2Z::IDENTITY;
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            i += 1;
            let (gen, inverse) = match c {
                '*' => continue,
                'S' => (Sl2Z::S, false),
                'T' => (Sl2Z::T, false),
                'U' => (Sl2Z::U, false),
                'I' => (Sl2Z::IDENTITY, false),
                's' => (Sl2Z::S, true),
                't' => (Sl2Z::T, true),
                'u' => (Sl2Z::U, true),
                '-' if chars.get(i) == Some(&'I') => {
                    i += 1;
                    (Sl2Z::MINUS_IDENTITY, false)
                }
                _ => return Err(Error::Parse(format!("unexpected {c:?} in group word {s:?}"))),
            };
            let mut exp = 1i64;
            if chars.get(i) == Some(&'^') {
                i += 1;
                let start = i;
                if chars.get(i) == Some(&'-') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                exp = text.parse().map_err(|_| Error::Parse(format!("bad exponent {text:?} in {s:?}")))?;
            }
            if inverse {
                exp = -exp;
            }
            acc = acc.mul(&gen.pow(exp));
        }
        Ok(acc)
    }

    /// Möbius action on a point of the upper half plane.
    pub fn mobius(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        let (a, b, c, d) = (self.a as f64, self.b as f64, self.c as f64, self.d as f64);
        (z * a + b) / (z * c + d)
    }
}

impl fmt::Display for Sl2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for Sl2Z {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_word(s)
    }
}

/// Homogeneous polynomial in `a, b`: `sum_j c_j a^j b^{deg - j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    degree: usize,
    terms: BTreeMap<usize, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(degree: usize) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    /// `a^j b^{degree - j}`.
    pub fn monomial(degree: usize, j: usize) -> Self {
        let mut p = Self::zero(degree);
        p.add_term(j, S::one());
        p
    }

    /// From dense coefficients indexed by the exponent of `a`.
    pub fn from_coeffs(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "a homogeneous polynomial needs degree + 1 coefficients");
        let mut p = Self::zero(coeffs.len() - 1);
        for (j, c) in coeffs.into_iter().enumerate() {
            p.add_term(j, c);
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `a^j b^{degree - j}`.
    pub fn coeff(&self, j: usize) -> S {
        self.terms.get(&j).cloned().unwrap_or_else(S::zero)
    }

    pub fn coeffs(&self) -> Vec<S> {
        (0..=self.degree).map(|j| self.coeff(j)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &S)> {
        self.terms.iter().map(|(j, c)| (*j, c))
    }

    pub fn add_term(&mut self, j: usize, c: S) {
        assert!(j <= self.degree, "exponent {j} exceeds degree {}", self.degree);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(j).or_insert_with(S::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&j);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &S) {
        assert_eq!(self.degree, other.degree);
        for (j, x) in &other.terms {
            self.add_term(*j, x.clone() * c.clone());
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.degree);
        out.add_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (i, x) in &self.terms {
            for (j, y) in &other.terms {
                out.add_term(i + j, x.clone() * y.clone());
            }
        }
        out
    }

    /// Terms with even exponent of `a`.
    pub fn even_part(&self) -> Self {
        self.filter(|j| j % 2 == 0)
    }

    /// Terms with odd exponent of `a`.
    pub fn odd_part(&self) -> Self {
        self.filter(|j| j % 2 == 1)
    }

    fn filter(&self, keep: impl Fn(usize) -> bool) -> Self {
        Self {
            degree: self.degree,
            terms: self.terms.iter().filter(|(j, _)| keep(**j)).map(|(j, c)| (*j, c.clone())).collect(),
        }
    }

    /// Apply the linear derivation with `a -> alpha a + beta b`, `b -> gamma a + delta b`.
    pub fn derive(&self, image_a: (S, S), image_b: (S, S)) -> Self {
        let n = self.degree;
        let mut out = Self::zero(n);
        for (j, c) in &self.terms {
            let (j, k) = (*j, n - *j);
            if j > 0 {
                let f = c.clone() * S::from_int(j as i64);
                // a^{j-1} b^k (alpha a + beta b)
                out.add_term(j, f.clone() * image_a.0.clone());
                out.add_term(j - 1, f * image_a.1.clone());
            }
            if k > 0 {
                let f = c.clone() * S::from_int(k as i64);
                out.add_term(j + 1, f.clone() * image_b.0.clone());
                out.add_term(j, f * image_b.1.clone());
            }
        }
        out
    }
}

impl<S: Scalar> fmt::Display for Poly<S> {
    /// Highest power of `b` first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let n = self.degree;
        for (i, (j, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*a^{j}*b^{}", n - j)?;
        }
        Ok(())
    }
}

/// Images of the generators `a` and `b` under `g`, as degree-one Lie elements.
pub fn act_on_h<S: Scalar>(g: &Sl2Z) -> (LieElem<S>, LieElem<S>) {
    let ((pa, pb), (qa, qb)) = g.images();
    let lin = |x: i64, y: i64| {
        let mut e = LieElem::<S>::a().scale(&S::from_int(x));
        e.add_scaled(&LieElem::b(), &S::from_int(y));
        e
    };
    (lin(pa, pb), lin(qa, qb))
}

fn linear_form<S: Scalar>(x: i64, y: i64) -> Poly<S> {
    Poly::from_coeffs(vec![S::from_int(y), S::from_int(x)])
}

/// Substitution action of `g` on `S^n H`.
pub fn act_on_poly<S: Scalar>(g: &Sl2Z, p: &Poly<S>) -> Poly<S> {
    let n = p.degree();
    let ((pa, pb), (qa, qb)) = g.images();
    let (la, lb) = (linear_form::<S>(pa, pb), linear_form::<S>(qa, qb));
    let powers = |l: &Poly<S>| {
        let mut v = vec![Poly::from_coeffs(vec![S::one()])];
        for i in 0..n {
            let next = v[i].mul(l);
            v.push(next);
        }
        v
    };
    let (pow_a, pow_b) = (powers(&la), powers(&lb));
    let mut out = Poly::zero(n);
    for (j, c) in p.iter() {
        out.add_scaled(&pow_a[j].mul(&pow_b[n - j]), c);
    }
    out
}

/// `g` extended to the free Lie algebra as an automorphism.
pub fn act_on_lie<S: Scalar>(alg: &FreeLie, g: &Sl2Z, x: &LieElem<S>) -> Result<LieElem<S>> {
    let (ia, ib) = act_on_h::<S>(g);
    let t = alg.to_tensor(x)?.substitute(&alg.to_tensor(&ia)?, &alg.to_tensor(&ib)?);
    alg.from_tensor(&t)
}

/// `g d g^{-1}`.
pub fn conjugate<S: Scalar>(alg: &FreeLie, g: &Sl2Z, d: &Deriv<S>) -> Result<Deriv<S>> {
    let inv = g.inverse();
    let (ia, ib) = act_on_h::<S>(&inv);
    let on_a = act_on_lie(alg, g, &deriv::apply(alg, d, &ia)?)?;
    let on_b = act_on_lie(alg, g, &deriv::apply(alg, d, &ib)?)?;
    Deriv::new(d.degree(), on_a, on_b)
}

/// A degree-zero derivation (an element of `gl(H)` acting on the free Lie algebra).
pub type LinDeriv<S> = Deriv<S>;

/// The lowering operator `e0 = -a d/db`: `a -> 0`, `b -> -a`.
pub fn e0<S: Scalar>() -> LinDeriv<S> {
    Deriv::new(0, LieElem::zero(), -LieElem::a()).expect("degree-one values")
}

/// The raising operator: `a -> b`, `b -> 0`.
pub fn raising<S: Scalar>() -> LinDeriv<S> {
    Deriv::new(0, LieElem::b(), LieElem::zero()).expect("degree-one values")
}

pub fn linear_derivation_action<S: Scalar>(alg: &FreeLie, l: &LinDeriv<S>, x: &LieElem<S>) -> Result<LieElem<S>> {
    if l.degree() != 0 {
        return Err(Error::InvalidArgument("linear derivations have degree 0".into()));
    }
    deriv::apply(alg, l, x)
}

/// sl2 weight of a word: number of `b` minus number of `a`.
pub fn word_weight(w: Word) -> i64 {
    let (na, nb) = w.multidegree();
    nb as i64 - na as i64
}

/// Exact action of `g` on degree-`n` polynomials as a matrix on the monomial basis
/// `a^0 b^n, ..., a^n b^0` (column `j` is the image of `a^j b^{n-j}`).
pub fn poly_action_matrix(g: &Sl2Z, n: usize) -> crate::exact::Matrix<Rational> {
    let mut m = crate::exact::Matrix::zeros(n + 1, n + 1);
    for j in 0..=n {
        let img = act_on_poly(g, &Poly::<Rational>::monomial(n, j));
        for (i, c) in img.iter() {
            m.set(i, j, c.clone());
        }
    }
    m
}

/// Tensor algebra helper re-exported for callers that act on words directly.
pub fn act_on_tensor<S: Scalar>(alg: &FreeLie, g: &Sl2Z, t: &Tensor<S>) -> Result<Tensor<S>> {
    let (ia, ib) = act_on_h::<S>(g);
    Ok(t.substitute(&alg.to_tensor(&ia)?, &alg.to_tensor(&ib)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::LieElement;
    use crate::scalar::q;
    use crate::PolyAB;
    use proptest::prelude::*;

    fn lin(x: i64, y: i64) -> LieElement {
        let mut e = LieElement::a().scale(&q(x));
        e.add_scaled(&LieElement::b(), &q(y));
        e
    }

    #[test]
    fn sl2_membership_checked() {
        assert!(Sl2Z::new(1, 2, 3, 4).is_err());
        assert_eq!(Sl2Z::new(2, 1, 1, 1).unwrap().rows(), [[2, 1], [1, 1]]);
        assert_eq!(Sl2Z::S.mul(&Sl2Z::T), Sl2Z::U);
    }

    #[test]
    fn presentation_relations() {
        assert_eq!(Sl2Z::S.pow(2), Sl2Z::MINUS_IDENTITY);
        assert_eq!(Sl2Z::U.pow(3), Sl2Z::MINUS_IDENTITY);
        assert_eq!(Sl2Z::S.pow(4), Sl2Z::IDENTITY);
        assert_eq!(Sl2Z::U.pow(6), Sl2Z::IDENTITY);
        assert_eq!(act_on_h::<Rational>(&Sl2Z::S.pow(2)), act_on_h::<Rational>(&Sl2Z::U.pow(3)));
    }

    #[test]
    fn parse_words() {
        assert_eq!(Sl2Z::parse_word("S*T^-2").unwrap(), Sl2Z::S.mul(&Sl2Z::T.pow(-2)));
        assert_eq!(Sl2Z::parse_word("ST").unwrap(), Sl2Z::U);
        assert_eq!(Sl2Z::parse_word("t").unwrap(), Sl2Z::T.inverse());
        assert_eq!(Sl2Z::parse_word("u^2").unwrap(), Sl2Z::U.pow(-2));
        assert_eq!(Sl2Z::parse_word("-I").unwrap(), Sl2Z::MINUS_IDENTITY);
        assert!(Sl2Z::parse_word("X").is_err());
        assert!(Sl2Z::parse_word("").is_err());
        assert!(Sl2Z::parse_word("S^").is_err());
    }

    #[test]
    fn act_on_h_examples() {
        assert_eq!(act_on_h::<Rational>(&Sl2Z::S), (lin(0, -1), lin(1, 0)));
        assert_eq!(act_on_h::<Rational>(&Sl2Z::T), (lin(1, 0), lin(-1, 1)));
        assert_eq!(act_on_h::<Rational>(&Sl2Z::IDENTITY), (lin(1, 0), lin(0, 1)));
    }

    #[test]
    fn act_on_poly_examples() {
        let a2 = PolyAB::monomial(2, 2);
        assert_eq!(act_on_poly(&Sl2Z::S, &a2), PolyAB::monomial(2, 0));
        let p = PolyAB::from_coeffs(vec![q(3), q(-1), q(0), q(5), q(2)]);
        assert_eq!(act_on_poly(&Sl2Z::MINUS_IDENTITY, &p), p);
        // b^2 - a^2 is killed by 1 + U + U^2
        let r = PolyAB::from_coeffs(vec![q(1), q(0), q(-1)]);
        let mut sum = r.clone();
        sum.add_scaled(&act_on_poly(&Sl2Z::U, &r), &q(1));
        sum.add_scaled(&act_on_poly(&Sl2Z::U.pow(2), &r), &q(1));
        assert!(sum.is_zero());
    }

    #[test]
    fn act_on_lie_examples() {
        let alg = FreeLie::default();
        let ab = alg.bracket(&LieElement::a(), &LieElement::b()).unwrap();
        assert_eq!(act_on_lie(&alg, &Sl2Z::S, &ab).unwrap(), ab);
        let x = alg.bracket(&ab, &LieElement::b()).unwrap();
        assert_eq!(act_on_lie(&alg, &Sl2Z::IDENTITY, &x).unwrap(), x);
    }

    #[test]
    fn linear_derivation_examples() {
        let alg = FreeLie::default();
        let ab = alg.bracket(&LieElement::a(), &LieElement::b()).unwrap();
        assert!(linear_derivation_action(&alg, &e0(), &ab).unwrap().is_zero());
        assert_eq!(linear_derivation_action(&alg, &e0(), &LieElement::b()).unwrap(), -LieElement::a());
        assert_eq!(linear_derivation_action(&alg, &raising(), &LieElement::a()).unwrap(), LieElement::b());
    }

    #[test]
    fn e0_lowers_weight_by_two() {
        let alg = FreeLie::default();
        for d in 1..=6 {
            for &w in alg.lyndon_basis(d).unwrap().iter() {
                let x = LieElement::basis(crate::freelie::LyndonWord::new(w).unwrap());
                let y = linear_derivation_action(&alg, &e0(), &x).unwrap();
                let t = alg.to_tensor(&y).unwrap();
                for (u, _) in t.iter() {
                    assert_eq!(word_weight(u), word_weight(w) - 2);
                }
            }
        }
        // on polynomials: e0 = -a d/db
        let p = PolyAB::monomial(4, 1);
        let lowered = p.derive((q(0), q(0)), (q(-1), q(0)));
        assert_eq!(lowered, PolyAB::monomial(4, 2).scale(&q(-3)));
    }

    fn gen() -> impl Strategy<Value = Sl2Z> {
        prop_oneof![Just(Sl2Z::S), Just(Sl2Z::T), Just(Sl2Z::U), Just(Sl2Z::T.inverse())]
    }

    fn poly() -> impl Strategy<Value = PolyAB> {
        (0usize..=10).prop_flat_map(|n| {
            proptest::collection::vec(-5i64..=5, n + 1).prop_map(|c| PolyAB::from_coeffs(c.into_iter().map(q).collect()))
        })
    }

    proptest! {
        #[test]
        fn group_law_on_polys(g1 in gen(), g2 in gen(), p in poly()) {
            let lhs = act_on_poly(&g1.mul(&g2), &p);
            let rhs = act_on_poly(&g1, &act_on_poly(&g2, &p));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn act_on_lie_preserves_brackets(g in gen(), x in 0usize..5, y in 0usize..5) {
            let alg = FreeLie::default();
            let basis: Vec<LieElement> = (1..=3)
                .flat_map(|d| alg.lyndon_words(d).unwrap())
                .map(LieElement::basis)
                .collect();
            let (x, y) = (&basis[x], &basis[y]);
            let lhs = act_on_lie(&alg, &g, &alg.bracket(x, y).unwrap()).unwrap();
            let rhs = alg.bracket(&act_on_lie(&alg, &g, x).unwrap(), &act_on_lie(&alg, &g, y).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
