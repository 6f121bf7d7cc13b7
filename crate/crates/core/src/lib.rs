//! Exact and numerical algebra for the Eisenstein part of the monodromy of SL2(Z).
//!
//! * [`exact`]: sparse Gauss-Jordan elimination over a field.
//! * [`freelie`]: the free Lie algebra on `a, b` in the Lyndon basis.
//! * [`sl2`]: SL2(Z) and sl2 acting on `H`, on `S^{2n}H` and on the free Lie algebra.
//! * [`deriv`]: derivations of the free Lie algebra and the highest weight derivations `eps_{2n}`.
//! * [`modforms`]: q-expansions of level one Eisenstein series and cusp forms.
//! * [`periodpoly`]: exact period polynomial spaces and numerical period polynomials.
//! * [`relations`]: quadratic relations between the `eps_{2n}` and their match with cusp forms.
//! * [`transport`]: iterated integrals of the Eisenstein connection and its monodromy cocycle.
//!
//! Algebraic containers are generic over the scalar field ([`scalar::Scalar`]) and the
//! numerical ones over the float type ([`scalar::Real`]); the aliases below fix the
//! instantiations used throughout the binary and the tests.

pub mod deriv;
pub mod error;
pub mod exact;
pub mod freelie;
pub mod json;
pub mod modforms;
pub mod periodpoly;
pub mod relations;
pub mod scalar;
pub mod sl2;
pub mod transport;

pub use error::{Error, Result};
pub use scalar::{Rational, Real, Scalar};

pub type QMatrix = exact::Matrix<Rational>;
pub type QVector = exact::Vector<Rational>;
pub type LieElement = freelie::LieElem<Rational>;
pub type Derivation = deriv::Deriv<Rational>;
pub type PolyAB = sl2::Poly<Rational>;
pub type QSeries = modforms::Series<Rational>;
pub type NumericPoly = periodpoly::NumericPolynomial<f64>;
pub type GroupLike = transport::GroupLikeElem<f64>;
