//! Derivations of the free Lie algebra on `a, b`.
//!
//! A derivation is stored by its values on the two generators; every other
//! value follows from the Leibniz rule. Evaluation extends the derivation to
//! the tensor algebra (where Leibniz is applied letter by letter) and rewrites
//! the result back into the Lyndon basis.

use crate::error::{Error, Result};
use crate::exact::Vector;
use crate::freelie::{FreeLie, LieElem, Tensor};
use crate::scalar::{Rational, Scalar};

/// Homogeneous derivation raising Lie degree by `degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct Deriv<S> {
    degree: usize,
    on_a: LieElem<S>,
    on_b: LieElem<S>,
}

impl<S: Scalar> Deriv<S> {
    /// Build from generator values; both must be homogeneous of degree `degree + 1` (or zero).
    pub fn new(degree: usize, on_a: LieElem<S>, on_b: LieElem<S>) -> Result<Self> {
        for (name, v) in [("a", &on_a), ("b", &on_b)] {
            if !v.is_zero() && v.degree() != Some(degree + 1) {
                return Err(Error::InvalidArgument(format!(
                    "value on {name} must be homogeneous of degree {}, got {v}",
                    degree + 1
                )));
            }
        }
        Ok(Self { degree, on_a, on_b })
    }

    pub fn zero(degree: usize) -> Self {
        Self { degree, on_a: LieElem::zero(), on_b: LieElem::zero() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn on_a(&self) -> &LieElem<S> {
        &self.on_a
    }

    pub fn on_b(&self) -> &LieElem<S> {
        &self.on_b
    }

    pub fn is_zero(&self) -> bool {
        self.on_a.is_zero() && self.on_b.is_zero()
    }

    pub fn scale(&self, c: &S) -> Self {
        Self { degree: self.degree, on_a: self.on_a.scale(c), on_b: self.on_b.scale(c) }
    }

    /// Sum of two derivations of the same degree.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_degree(other)?;
        Ok(Self { degree: self.degree, on_a: &self.on_a + &other.on_a, on_b: &self.on_b + &other.on_b })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_degree(other)?;
        Ok(Self { degree: self.degree, on_a: &self.on_a - &other.on_a, on_b: &self.on_b - &other.on_b })
    }

    fn same_degree(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "cannot add derivations of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    fn tensors(&self, alg: &FreeLie) -> Result<(Tensor<S>, Tensor<S>)> {
        Ok((alg.to_tensor(&self.on_a)?, alg.to_tensor(&self.on_b)?))
    }
}

/// Value of `d` on an arbitrary Lie element (Leibniz extension).
pub fn apply<S: Scalar>(alg: &FreeLie, d: &Deriv<S>, x: &LieElem<S>) -> Result<LieElem<S>> {
    if x.is_zero() || d.is_zero() {
        return Ok(LieElem::zero());
    }
    alg.check_degree(x.max_degree() + d.degree)?;
    let (ta, tb) = d.tensors(alg)?;
    alg.from_tensor(&alg.to_tensor(x)?.derive(&ta, &tb))
}

/// The inner derivation `ad(u) = [u, -]`.
pub fn inner<S: Scalar>(alg: &FreeLie, u: &LieElem<S>) -> Result<Deriv<S>> {
    if u.is_zero() {
        return Ok(Deriv::zero(0));
    }
    let deg = u.degree().ok_or_else(|| Error::InvalidArgument("inner derivation of an inhomogeneous element".into()))?;
    let on_a = alg.bracket(u, &LieElem::a())?;
    let on_b = alg.bracket(u, &LieElem::b())?;
    Deriv::new(deg, on_a, on_b)
}

/// `[d1, d2] = d1 d2 - d2 d1`.
pub fn bracket_der<S: Scalar>(alg: &FreeLie, d1: &Deriv<S>, d2: &Deriv<S>) -> Result<Deriv<S>> {
    let degree = d1.degree + d2.degree;
    if d1.is_zero() || d2.is_zero() {
        return Ok(Deriv::zero(degree));
    }
    alg.check_degree(degree + 1)?;
    let (a1, b1) = d1.tensors(alg)?;
    let (a2, b2) = d2.tensors(alg)?;
    let minus_one = -S::one();
    let mut on_a = a2.derive(&a1, &b1);
    on_a.add_scaled(&a1.derive(&a2, &b2), &minus_one);
    let mut on_b = b2.derive(&a1, &b1);
    on_b.add_scaled(&b1.derive(&a2, &b2), &minus_one);
    Ok(Deriv { degree, on_a: alg.from_tensor(&on_a)?, on_b: alg.from_tensor(&on_b)? })
}

/// Whether `d` kills `[a, b]`.
pub fn is_der0<S: Scalar>(alg: &FreeLie, d: &Deriv<S>) -> Result<bool> {
    let ab = alg.bracket(&LieElem::a(), &LieElem::b())?;
    Ok(apply(alg, d, &ab)?.is_zero())
}

/// Coordinates of `d`: Lyndon coefficients of the value on `a` followed by those of
/// the value on `b`, both in `lyndon_basis(degree + 1)`.
pub fn coordinates<S: Scalar>(alg: &FreeLie, d: &Deriv<S>) -> Result<Vector<S>> {
    let deg = d.degree + 1;
    let n = alg.lyndon_basis(deg)?.len();
    let mut v = Vector::zeros(2 * n);
    for (i, c) in alg.coordinates(&d.on_a, deg)? {
        v.set(i, c);
    }
    for (i, c) in alg.coordinates(&d.on_b, deg)? {
        v.set(n + i, c);
    }
    Ok(v)
}

/// Which generator the bracket-sum correction of `eps_{2n}` is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrectionSlot {
    /// The correction multiplies `d/da`, i.e. `d/dv2` for `(v1, v2) = (b, a)`.
    OnA,
    /// The correction multiplies `d/db`.
    OnB,
}

/// The distinguished derivation `eps_{2n} = eps_{2n}(b, a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Epsilon<S> {
    pub n: usize,
    pub derivation: Deriv<S>,
}

/// `eps_{2n}(b, a)`.
///
/// For `n = 0` this is `e0 = -a d/db`. For `n > 0` it is `ad(w) - s d/da` with
/// `w = ad_b^{2n-1}(a)` and `s = sum_{j+k=2n-1, j>k>0} (-1)^j [ad_b^j(a), ad_b^k(a)]`.
pub fn epsilon<S: Scalar>(alg: &FreeLie, n: usize) -> Result<Epsilon<S>> {
    epsilon_with_slot(alg, n, CorrectionSlot::OnA)
}

pub fn epsilon_with_slot<S: Scalar>(alg: &FreeLie, n: usize, slot: CorrectionSlot) -> Result<Epsilon<S>> {
    let (a, b) = (LieElem::<S>::a(), LieElem::<S>::b());
    if n == 0 {
        return Ok(Epsilon { n, derivation: Deriv::new(0, LieElem::zero(), -&a)? });
    }
    alg.check_degree(2 * n + 1)?;
    let top = 2 * n - 1;
    let powers: Vec<LieElem<S>> = {
        let mut v = vec![a.clone()];
        for _ in 0..top {
            let next = alg.bracket(&b, v.last().unwrap())?;
            v.push(next);
        }
        v
    };
    let w = &powers[top];
    let mut correction = LieElem::zero();
    for k in 1..=top {
        let j = top - k;
        if j <= k {
            break;
        }
        let term = alg.bracket(&powers[j], &powers[k])?;
        let sign = if j.is_multiple_of(2) { S::one() } else { -S::one() };
        correction.add_scaled(&term, &sign);
    }
    let mut on_a = alg.bracket(w, &a)?;
    let mut on_b = alg.bracket(w, &b)?;
    match slot {
        CorrectionSlot::OnA => on_a.add_scaled(&correction, &-S::one()),
        CorrectionSlot::OnB => on_b.add_scaled(&correction, &-S::one()),
    }
    Ok(Epsilon { n, derivation: Deriv::new(2 * n, on_a, on_b)? })
}

pub type RationalEpsilon = Epsilon<Rational>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::{LieElement, LyndonWord};
    use crate::scalar::q;
    use crate::Derivation;

    fn alg() -> FreeLie {
        FreeLie::new(20).unwrap()
    }

    fn ab(alg: &FreeLie) -> LieElement {
        alg.bracket(&LieElement::a(), &LieElement::b()).unwrap()
    }

    #[test]
    fn apply_on_generators_returns_stored_values() {
        let alg = alg();
        let d = inner(&alg, &ab(&alg)).unwrap();
        assert_eq!(apply(&alg, &d, &LieElement::a()).unwrap(), *d.on_a());
        assert_eq!(apply(&alg, &d, &LieElement::b()).unwrap(), *d.on_b());
    }

    #[test]
    fn inner_examples() {
        let alg = alg();
        let ba = -ab(&alg);
        let d = inner(&alg, &ba).unwrap();
        assert!(apply(&alg, &d, &ab(&alg)).unwrap().is_zero());
        assert_eq!(d.degree(), 2);
        let da = inner(&alg, &LieElement::a()).unwrap();
        assert_eq!(apply(&alg, &da, &LieElement::b()).unwrap(), ab(&alg));
        assert_eq!(da.degree(), 1);
    }

    #[test]
    fn der0_examples() {
        let alg = alg();
        assert!(is_der0(&alg, &inner(&alg, &-ab(&alg)).unwrap()).unwrap());
        assert!(!is_der0(&alg, &inner(&alg, &LieElement::a()).unwrap()).unwrap());
    }

    #[test]
    fn epsilon_zero_is_e0() {
        let e = epsilon::<Rational>(&alg(), 0).unwrap();
        assert!(e.derivation.on_a().is_zero());
        assert_eq!(*e.derivation.on_b(), -LieElement::a());
    }

    #[test]
    fn epsilon_one_is_inner_ba() {
        let alg = alg();
        let e = epsilon::<Rational>(&alg, 1).unwrap();
        assert_eq!(e.derivation, inner(&alg, &-ab(&alg)).unwrap());
    }

    #[test]
    fn epsilon_two_expanded() {
        // eps_4: a -> [w, a] - [ad_b^2 a, ad_b a], b -> [w, b], with w = ad_b^3 a.
        // Expected values computed independently in the tensor algebra.
        let alg = alg();
        let (a, b) = (Tensor::<Rational>::word("a".parse().unwrap()), Tensor::word("b".parse().unwrap()));
        let ad_b = |x: &Tensor<Rational>| b.commutator(x);
        let p1 = ad_b(&a);
        let p2 = ad_b(&p1);
        let w = ad_b(&p2);
        let mut on_a = w.commutator(&a);
        on_a.add_scaled(&p2.commutator(&p1), &q(-1));
        let on_b = w.commutator(&b);
        let e = epsilon::<Rational>(&alg, 2).unwrap();
        assert_eq!(alg.to_tensor(e.derivation.on_a()).unwrap(), on_a);
        assert_eq!(alg.to_tensor(e.derivation.on_b()).unwrap(), on_b);
        assert!(is_der0(&alg, &e.derivation).unwrap());
    }

    #[test]
    fn epsilon_in_der0_small() {
        let alg = alg();
        for n in 0..=5 {
            let e = epsilon::<Rational>(&alg, n).unwrap();
            assert!(is_der0(&alg, &e.derivation).unwrap(), "n = {n}");
            assert_eq!(e.derivation.degree(), 2 * n);
        }
    }

    #[test]
    fn correction_on_b_leaves_der0() {
        let alg = alg();
        for n in 2..=4 {
            let e = epsilon_with_slot::<Rational>(&alg, n, CorrectionSlot::OnB).unwrap();
            assert!(!is_der0(&alg, &e.derivation).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn bracket_der_examples() {
        let alg = alg();
        let e2 = epsilon::<Rational>(&alg, 2).unwrap().derivation;
        assert!(bracket_der(&alg, &e2, &e2).unwrap().is_zero());
        let raise = Derivation::new(0, LieElement::b(), LieElement::zero()).unwrap();
        let e1 = epsilon::<Rational>(&alg, 1).unwrap().derivation;
        assert!(bracket_der(&alg, &raise, &e1).unwrap().is_zero());
    }

    #[test]
    fn coordinates_examples() {
        let alg = alg();
        let z = coordinates(&alg, &Derivation::zero(2)).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.len(), 2 * alg.lyndon_basis(3).unwrap().len());
        let d = inner(&alg, &-ab(&alg)).unwrap();
        // [[b,a],a] = [a,[a,b]] = aab ; [[b,a],b] = -[[a,b],b] = -abb
        let v = coordinates(&alg, &d).unwrap();
        assert_eq!(v.to_dense(), vec![q(1), q(0), q(0), q(-1)]);
        let aab = LyndonWord::new("aab".parse().unwrap()).unwrap();
        assert_eq!(*d.on_a(), LieElement::basis(aab));
    }

    #[test]
    fn apply_respects_degree_cap() {
        let alg = FreeLie::new(5).unwrap();
        let e = epsilon::<Rational>(&alg, 2).unwrap().derivation;
        assert!(matches!(apply(&alg, &e, &ab(&alg)), Err(Error::DegreeCap { .. })));
    }
}
