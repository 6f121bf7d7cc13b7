//! Iterated integrals of the Eisenstein connection along paths in the upper half plane.
//!
//! The connection is `omega = sum_{n, j} 2 pi i G_{2n}(tau) tau^j / j! dtau  e0^j.e_{2n}`
//! over a finite set of weights `2n`. Transport along a path is the truncated
//! series `1 + int omega + int omega omega + ...` in the free algebra on the
//! symbols `e0^j.e_{2n}`, with `int omega omega = int_{t1 < t2} omega(t1) omega(t2)`.
//! It solves `dC/dt = C A(t)` and is integrated with the fourth order Magnus
//! scheme on two Gauss points per step.
//!
//! With this word order transport is multiplicative under concatenation,
//! `C(alpha * beta) = C(alpha) C(beta)`, and `Theta(g) = C(tau0 -> g tau0)`
//! satisfies `Theta(g h) = Theta(g) (g . Theta(h))`.

use std::fmt;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modforms::eisenstein_g;
use crate::scalar::{Rational, Real, Scalar, ToReal};
use crate::sl2::{act_on_poly, Poly, Sl2Z};

pub const MIN_STEPS: usize = 8;

/// The symbol `e0^j . e_{2n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EisSymbol {
    pub n: usize,
    pub j: usize,
}

impl EisSymbol {
    pub fn new(n: usize, j: usize) -> Result<Self> {
        if n < 2 || j > 2 * n - 2 {
            return Err(Error::InvalidArgument(format!("no symbol e0^{j}.e{} (need n >= 2, j <= 2n - 2)", 2 * n)));
        }
        Ok(Self { n, j })
    }

    pub fn weight(&self) -> usize {
        2 * self.n
    }
}

impl fmt::Display for EisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e0^{}.e{}", self.j, 2 * self.n)
    }
}

/// Sorted, deduplicated list of weights, each even and at least 4.
pub fn normalize_weights(weights: &[usize]) -> Result<Vec<usize>> {
    if weights.is_empty() {
        return Err(Error::InvalidWeight("need at least one weight".into()));
    }
    let mut w = weights.to_vec();
    w.sort_unstable();
    w.dedup();
    if let Some(bad) = w.iter().find(|&&k| k < 4 || k % 2 == 1) {
        return Err(Error::InvalidWeight(format!("connection weights must be even and >= 4, got {bad}")));
    }
    Ok(w)
}

/// All symbols of the given weights, grouped by weight, `j` ascending.
pub fn alphabet(weights: &[usize]) -> Result<Vec<EisSymbol>> {
    Ok(normalize_weights(weights)?
        .into_iter()
        .flat_map(|w| (0..=w - 2).map(move |j| EisSymbol { n: w / 2, j }))
        .collect())
}

/// Truncated element of the completed free algebra on an alphabet of symbols.
///
/// Level `l` is stored densely: the word `s_{i1} ... s_{il}` sits at index
/// `i1 K^{l-1} + ... + il` for an alphabet of size `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupLikeElem<F> {
    depth: usize,
    weights: Vec<usize>,
    symbols: Vec<EisSymbol>,
    levels: Vec<Vec<Complex<F>>>,
}

fn czero<F: Real>() -> Complex<F> {
    Complex::new(F::zero(), F::zero())
}

impl<F: Real> GroupLikeElem<F> {
    pub fn identity(depth: usize, weights: &[usize]) -> Result<Self> {
        let weights = normalize_weights(weights)?;
        let symbols = alphabet(&weights)?;
        let k = symbols.len();
        let levels = (0..=depth)
            .map(|l| {
                let mut v = vec![czero(); k.pow(l as u32)];
                if l == 0 {
                    v[0] = Complex::new(F::one(), F::zero());
                }
                v
            })
            .collect();
        Ok(Self { depth, weights, symbols, levels })
    }

    fn zero_like(&self) -> Self {
        let mut z = self.clone();
        z.levels.iter_mut().for_each(|l| l.iter_mut().for_each(|c| *c = czero()));
        z
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn symbols(&self) -> &[EisSymbol] {
        &self.symbols
    }

    pub fn level(&self, l: usize) -> &[Complex<F>] {
        &self.levels[l]
    }

    fn index(&self, word: &[EisSymbol]) -> Option<usize> {
        word.iter().try_fold(0, |acc, s| Some(acc * self.symbols.len() + self.symbols.iter().position(|t| t == s)?))
    }

    /// Coefficient of a word; zero for words over other symbols, `None` beyond the depth.
    pub fn coeff(&self, word: &[EisSymbol]) -> Option<Complex<F>> {
        if word.len() > self.depth {
            return None;
        }
        Some(self.index(word).map_or_else(czero, |i| self.levels[word.len()][i]))
    }

    fn word_at(&self, level: usize, mut index: usize) -> Vec<EisSymbol> {
        let k = self.symbols.len();
        let mut w = vec![self.symbols[0]; level];
        for slot in (0..level).rev() {
            w[slot] = self.symbols[index % k];
            index /= k;
        }
        w
    }

    /// All words with their coefficients, shortest first.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<EisSymbol>, Complex<F>)> + '_ {
        self.levels
            .iter()
            .enumerate()
            .flat_map(move |(l, v)| v.iter().enumerate().map(move |(i, c)| (self.word_at(l, i), *c)))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.depth != other.depth || self.symbols != other.symbols {
            return Err(Error::InvalidArgument("group-like elements over different alphabets or depths".into()));
        }
        Ok(())
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.zero_like();
        for (l, target) in out.levels.iter_mut().enumerate() {
            for i in 0..=l {
                let (x, y) = (&self.levels[i], &other.levels[l - i]);
                let width = y.len();
                for (p, &xv) in x.iter().enumerate() {
                    if xv == czero() {
                        continue;
                    }
                    for (q, &yv) in y.iter().enumerate() {
                        target[p * width + q] = target[p * width + q] + xv * yv;
                    }
                }
            }
        }
        Ok(out)
    }

    fn add_scaled(&mut self, other: &Self, c: Complex<F>) {
        for (x, y) in self.levels.iter_mut().zip(&other.levels) {
            x.iter_mut().zip(y).for_each(|(p, &q)| *p = *p + q * c);
        }
    }

    /// `sum_m (-Y)^m` for `self = 1 + Y`.
    pub fn inverse(&self) -> Self {
        let mut y = self.clone();
        y.levels[0][0] = czero();
        let minus_one = Complex::new(-F::one(), F::zero());
        let mut out = self.zero_like();
        out.levels[0][0] = Complex::new(F::one(), F::zero());
        let mut power = out.clone();
        for _ in 0..self.depth {
            let mut next = power.mul(&y).expect("same alphabet");
            next.levels.iter_mut().flatten().for_each(|c| *c = *c * minus_one);
            out.add_scaled(&next, Complex::new(F::one(), F::zero()));
            power = next;
        }
        out
    }

    /// Truncated exponential of an element with zero constant term.
    fn exp_of(x: &Self) -> Self {
        let mut out = x.zero_like();
        out.levels[0][0] = Complex::new(F::one(), F::zero());
        let mut power = out.clone();
        for m in 1..=x.depth {
            power = power.mul(x).expect("same alphabet");
            let c = Complex::new(F::one() / F::lit((1..=m).product::<usize>() as f64), F::zero());
            out.add_scaled(&power, c);
        }
        out
    }

    /// Largest coefficient of `self - other` in absolute value.
    pub fn max_abs_diff(&self, other: &Self) -> Result<F> {
        self.check_compatible(other)?;
        Ok(self
            .levels
            .iter()
            .flatten()
            .zip(other.levels.iter().flatten())
            .map(|(a, b)| (*a - *b).norm())
            .fold(F::zero(), F::max))
    }

    /// `g` acting on each symbol slot through its `S^{2n-2}H` block.
    pub fn act(&self, g: &Sl2Z) -> Self {
        let k = self.symbols.len();
        let m = symbol_action_matrix::<F>(g, &self.symbols);
        let mut out = self.clone();
        for l in 1..=self.depth {
            // apply m on every slot in turn
            let mut cur = self.levels[l].clone();
            for slot in 0..l {
                let stride = k.pow((l - 1 - slot) as u32);
                let mut next = vec![czero(); cur.len()];
                for (idx, &v) in cur.iter().enumerate() {
                    if v == czero() {
                        continue;
                    }
                    let s = (idx / stride) % k;
                    let base = idx - s * stride;
                    for (r, row) in m.iter().enumerate() {
                        let e = row[s];
                        if e != F::zero() {
                            next[base + r * stride] = next[base + r * stride] + v * e;
                        }
                    }
                }
                cur = next;
            }
            out.levels[l] = cur;
        }
        out
    }

    /// Coefficients keyed by word (`"1"` for the empty word, symbols separated by spaces).
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .iter()
            .map(|(w, c)| {
                let key = if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
                };
                let re = c.re.to_f64().unwrap_or(f64::NAN);
                let im = c.im.to_f64().unwrap_or(f64::NAN);
                (key, serde_json::json!([re, im]))
            })
            .collect();
        serde_json::Value::Object(map)
    }
}

/// Matrix of `g` on the span of the symbols: `g . s = sum_r m[r][s] s_r`.
///
/// The symbol `e0^j . e_{2n}` is identified with `e0^j b^{2n-2}
/// = (-1)^j (2n-2)!/(2n-2-j)! a^j b^{2n-2-j}` in `S^{2n-2}H`.
pub fn symbol_action_matrix<F: Real>(g: &Sl2Z, symbols: &[EisSymbol]) -> Vec<Vec<F>> {
    let k = symbols.len();
    let mut m = vec![vec![F::zero(); k]; k];
    let scale = |deg: usize, j: usize| {
        let falling = ((deg - j + 1)..=deg).fold(Rational::from_int(1), |acc, i| acc * Rational::from_int(i as i64));
        if j.is_multiple_of(2) {
            falling
        } else {
            -falling
        }
    };
    for (s, sym) in symbols.iter().enumerate() {
        let deg = sym.weight() - 2;
        let img = act_on_poly(g, &Poly::<Rational>::monomial(deg, sym.j).scale(&scale(deg, sym.j)));
        for (i, c) in img.iter() {
            let r = symbols.iter().position(|t| t.n == sym.n && t.j == i).expect("same weight block");
            m[r][s] = (c / scale(deg, i)).to_real();
        }
    }
    m
}

/// Parse `"x+yi"`, `"x-yi"`, `"yi"`, `"i"` or `"x"`.
pub fn parse_complex(s: &str) -> Result<Complex<f64>> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || Error::Parse(format!("cannot read complex number {s:?}"));
    if t.is_empty() {
        return Err(err());
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex::new(t.parse().map_err(|_| err())?, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(p) => (&body[..p], &body[p..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse().map_err(|_| err())?,
    };
    Ok(Complex::new(re.parse().map_err(|_| err())?, im))
}

fn check_upper<F: Real>(z: Complex<F>) -> Result<()> {
    if z.im > F::zero() && z.im.is_finite() && z.re.is_finite() {
        Ok(())
    } else {
        Err(Error::NotInUpperHalfPlane(format!("{}{:+}i", z.re, z.im)))
    }
}

/// Straight segment `t -> start + t (end - start)`, `t in [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment<F> {
    pub start: Complex<F>,
    pub end: Complex<F>,
}

impl<F: Real> Segment<F> {
    pub fn point(&self, t: F) -> Complex<F> {
        self.start + (self.end - self.start) * t
    }

    pub fn derivative(&self) -> Complex<F> {
        self.end - self.start
    }
}

/// Piecewise linear path in the upper half plane.
#[derive(Clone, Debug, PartialEq)]
pub struct UPath<F> {
    segments: Vec<Segment<F>>,
}

impl<F: Real> UPath<F> {
    /// Polygonal path through the given vertices.
    pub fn polygon(vertices: &[Complex<F>]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::BrokenPath("a path needs at least one point".into()));
        }
        vertices.iter().try_for_each(|&z| check_upper(z))?;
        let segments = vertices.windows(2).map(|w| Segment { start: w[0], end: w[1] }).collect();
        Ok(Self { segments })
    }

    pub fn from_segments(segments: Vec<Segment<F>>) -> Result<Self> {
        for s in &segments {
            check_upper(s.start)?;
            check_upper(s.end)?;
        }
        for (i, w) in segments.windows(2).enumerate() {
            let gap = (w[0].end - w[1].start).norm();
            if gap > F::lit(1e-12) * (F::one() + w[1].start.norm()) {
                return Err(Error::BrokenPath(format!("segment {} ends where segment {} does not start", i, i + 1)));
            }
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[Segment<F>] {
        &self.segments
    }

    pub fn reversed(&self) -> Self {
        Self { segments: self.segments.iter().rev().map(|s| Segment { start: s.end, end: s.start }).collect() }
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut s = self.segments.clone();
        s.extend_from_slice(&other.segments);
        Self::from_segments(s)
    }

    /// Image under a Mobius transformation is not a polygon, so this maps the vertices only.
    pub fn map_vertices(&self, f: impl Fn(Complex<F>) -> Complex<F>) -> Result<Self> {
        Self::from_segments(self.segments.iter().map(|s| Segment { start: f(s.start), end: f(s.end) }).collect())
    }
}

/// The Eisenstein connection restricted to finitely many weights.
#[derive(Clone, Debug)]
pub struct EisensteinConnection<F> {
    weights: Vec<usize>,
    symbols: Vec<EisSymbol>,
    /// `G_{2n}` q-coefficients per weight, in the order of `weights`.
    series: Vec<Vec<F>>,
}

impl<F: Real> EisensteinConnection<F> {
    pub fn new(weights: &[usize], terms: usize) -> Result<Self> {
        let weights = normalize_weights(weights)?;
        let series = weights
            .iter()
            .map(|&w| Ok(eisenstein_g(w, terms)?.coeffs().iter().map(|c| c.to_real()).collect()))
            .collect::<Result<_>>()?;
        Ok(Self { symbols: alphabet(&weights)?, weights, series })
    }

    pub fn symbols(&self) -> &[EisSymbol] {
        &self.symbols
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    /// Coefficients of `omega` against `dtau`, one per symbol.
    pub fn omega(&self, tau: Complex<F>) -> Result<Vec<Complex<F>>> {
        check_upper(tau)?;
        Ok(self.omega_unchecked(tau))
    }

    fn omega_unchecked(&self, tau: Complex<F>) -> Vec<Complex<F>> {
        let two_pi_i = Complex::new(F::zero(), F::lit(2.0) * F::PI());
        let q = (two_pi_i * tau).exp();
        let mut out = Vec::with_capacity(self.symbols.len());
        for (w, coeffs) in self.weights.iter().zip(&self.series) {
            let g = coeffs.iter().rev().fold(czero(), |acc, &c| acc * q + c);
            let mut term = two_pi_i * g;
            for j in 0..=w - 2 {
                if j > 0 {
                    term = term * tau / F::lit(j as f64);
                }
                out.push(term);
            }
        }
        out
    }

    fn level_one(&self, depth: usize, v: Vec<Complex<F>>) -> GroupLikeElem<F> {
        let mut x = GroupLikeElem::identity(depth, &self.weights).expect("validated weights");
        x.levels[0][0] = czero();
        if depth >= 1 {
            x.levels[1] = v;
        }
        x
    }

    /// `exp(Omega)` for one step `[t, t + h]` of a segment.
    fn step(&self, seg: &Segment<F>, t: F, h: F, depth: usize) -> GroupLikeElem<F> {
        let half = F::lit(0.5);
        let off = F::lit(3f64.sqrt() / 6.0);
        let d = seg.derivative();
        let a1: Vec<Complex<F>> = self.omega_unchecked(seg.point(t + h * (half - off))).into_iter().map(|c| c * d).collect();
        let a2: Vec<Complex<F>> = self.omega_unchecked(seg.point(t + h * (half + off))).into_iter().map(|c| c * d).collect();
        let first: Vec<Complex<F>> = a1.iter().zip(&a2).map(|(x, y)| (*x + *y) * (h * half)).collect();
        let mut omega = self.level_one(depth, first);
        if depth >= 2 {
            let k = a1.len();
            let c = h * h * F::lit(3f64.sqrt() / 12.0);
            for p in 0..k {
                for q in 0..k {
                    omega.levels[2][p * k + q] = (a1[p] * a2[q] - a2[p] * a1[q]) * c;
                }
            }
        }
        GroupLikeElem::exp_of(&omega)
    }

    /// `1 + int omega + int omega omega + ...` along `path`, truncated at `depth`.
    pub fn transport_inverse(&self, path: &UPath<F>, depth: usize, steps: usize) -> Result<GroupLikeElem<F>> {
        if depth == 0 {
            return Err(Error::InvalidArgument("depth must be at least 1".into()));
        }
        if steps < MIN_STEPS {
            return Err(Error::InvalidArgument(format!("need at least {MIN_STEPS} steps per segment, got {steps}")));
        }
        let mut acc = GroupLikeElem::identity(depth, &self.weights)?;
        for seg in path.segments() {
            if seg.derivative().norm() == F::zero() {
                continue;
            }
            let h = F::one() / F::lit(steps as f64);
            let pieces: Vec<GroupLikeElem<F>> =
                (0..steps).into_par_iter().map(|i| self.step(seg, h * F::lit(i as f64), h, depth)).collect();
            for p in &pieces {
                acc = acc.mul(p)?;
            }
        }
        Ok(acc)
    }

    /// `Theta(g)`: transport along the straight segment `base -> g base`.
    pub fn theta(&self, g: &Sl2Z, base: Complex<F>, depth: usize, steps: usize) -> Result<GroupLikeElem<F>> {
        check_upper(base)?;
        let end = mobius(g, base);
        self.transport_inverse(&UPath::polygon(&[base, end])?, depth, steps)
    }

    /// `max |Theta(g h) - Theta(g) (g . Theta(h))|`.
    pub fn cocycle_residual(&self, g: &Sl2Z, h: &Sl2Z, base: Complex<F>, depth: usize, steps: usize) -> Result<F> {
        let lhs = self.theta(&g.mul(h), base, depth, steps)?;
        let rhs = self.theta(g, base, depth, steps)?.mul(&self.theta(h, base, depth, steps)?.act(g))?;
        lhs.max_abs_diff(&rhs)
    }
}

pub fn mobius<F: Real>(g: &Sl2Z, z: Complex<F>) -> Complex<F> {
    let f = |x: i64| F::lit(x as f64);
    (z * f(g.a) + f(g.b)) / (z * f(g.c) + f(g.d))
}

pub fn omega_b<F: Real>(tau: Complex<F>, weights: &[usize], terms: usize) -> Result<Vec<(EisSymbol, Complex<F>)>> {
    let conn = EisensteinConnection::new(weights, terms)?;
    Ok(conn.symbols().iter().copied().zip(conn.omega(tau)?).collect())
}

pub fn transport_inverse<F: Real>(path: &UPath<F>, depth: usize, weights: &[usize], steps: usize, terms: usize) -> Result<GroupLikeElem<F>> {
    EisensteinConnection::new(weights, terms)?.transport_inverse(path, depth, steps)
}

pub fn theta<F: Real>(g: &Sl2Z, base: Complex<F>, depth: usize, weights: &[usize], steps: usize, terms: usize) -> Result<GroupLikeElem<F>> {
    EisensteinConnection::new(weights, terms)?.theta(g, base, depth, steps)
}

#[allow(clippy::too_many_arguments)]
pub fn cocycle_residual<F: Real>(
    g: &Sl2Z,
    h: &Sl2Z,
    base: Complex<F>,
    depth: usize,
    weights: &[usize],
    steps: usize,
    terms: usize,
) -> Result<F> {
    EisensteinConnection::new(weights, terms)?.cocycle_residual(g, h, base, depth, steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::DEFAULT_TERMS;
    use num_complex::Complex64;

    fn conn(weights: &[usize]) -> EisensteinConnection<f64> {
        EisensteinConnection::new(weights, DEFAULT_TERMS).unwrap()
    }

    const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

    /// `int_{z0}^{z1} e^{2 pi i k tau} tau^j dtau` by repeated integration by parts.
    fn antiderivative(k: usize, j: usize, z: Complex64) -> Complex64 {
        if k == 0 {
            return z.powu(j as u32 + 1) / (j as f64 + 1.0);
        }
        let c = Complex64::new(0.0, 2.0 * std::f64::consts::PI * k as f64);
        // sum_{r=0}^{j} (-1)^r j!/(j-r)! tau^{j-r} / c^{r+1}
        let mut sum = Complex64::new(0.0, 0.0);
        let mut falling = 1.0;
        for r in 0..=j {
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            sum += z.powu((j - r) as u32) * (sign * falling) / c.powu(r as u32 + 1);
            falling *= (j - r) as f64;
        }
        (c * z).exp() * sum
    }

    fn depth_one_oracle(weight: usize, j: usize, z0: Complex64, z1: Complex64) -> Complex64 {
        let g = eisenstein_g(weight, DEFAULT_TERMS).unwrap();
        let fact: f64 = (1..=j).map(|i| i as f64).product();
        let mut total = Complex64::new(0.0, 0.0);
        for (k, c) in g.coeffs().iter().enumerate() {
            let c: f64 = c.to_real();
            total += (antiderivative(k, j, z1) - antiderivative(k, j, z0)) * c;
        }
        total * Complex64::new(0.0, 2.0 * std::f64::consts::PI) / fact
    }

    #[test]
    fn parse_complex_forms() {
        assert_eq!(parse_complex("i").unwrap(), I);
        assert_eq!(parse_complex("0.5+1.2i").unwrap(), Complex64::new(0.5, 1.2));
        assert_eq!(parse_complex("-1-i").unwrap(), Complex64::new(-1.0, -1.0));
        assert_eq!(parse_complex("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("3").unwrap(), Complex64::new(3.0, 0.0));
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), Complex64::new(1e-3, 20.0));
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn omega_limits_and_periodicity() {
        let c = conn(&[4, 6]);
        let far = c.omega(Complex64::new(0.3, 40.0)).unwrap();
        // -B4/8 = 1/240
        let expected = Complex64::new(0.0, 2.0 * std::f64::consts::PI / 240.0);
        assert!((far[0] - expected).norm() < 1e-12);
        let tau = Complex64::new(0.2, 0.7);
        let (w0, w1) = (c.omega(tau).unwrap(), c.omega(tau + 1.0).unwrap());
        // j = 0 slots of each weight
        assert!((w0[0] - w1[0]).norm() < 1e-10);
        assert!((w0[3] - w1[3]).norm() < 1e-10);
        assert!(c.omega(Complex64::new(0.0, -1.0)).is_err());
    }

    #[test]
    fn symbols_and_validation() {
        assert_eq!(alphabet(&[6, 4, 4]).unwrap().len(), 3 + 5);
        assert!(alphabet(&[5]).is_err());
        assert!(alphabet(&[2]).is_err());
        assert!(EisSymbol::new(2, 3).is_err());
        assert_eq!(EisSymbol::new(3, 2).unwrap().to_string(), "e0^2.e6");
    }

    #[test]
    fn constant_path_gives_identity() {
        let c = conn(&[4]);
        let t = c.transport_inverse(&UPath::polygon(&[I]).unwrap(), 2, 16).unwrap();
        assert_eq!(t, GroupLikeElem::identity(2, &[4]).unwrap());
        let s = c.theta(&Sl2Z::S, I, 2, 16).unwrap();
        assert_eq!(s, GroupLikeElem::identity(2, &[4]).unwrap());
    }

    #[test]
    fn depth_one_matches_termwise_integrals() {
        let c = conn(&[4, 6]);
        let (z0, z1) = (I, I + 1.0);
        let t = c.theta(&Sl2Z::T, I, 1, 64).unwrap();
        for sym in c.symbols() {
            let got = t.coeff(&[*sym]).unwrap();
            let want = depth_one_oracle(sym.weight(), sym.j, z0, z1);
            assert!((got - want).norm() < 1e-10 * (1.0 + want.norm()), "{sym}: {got} vs {want}");
        }
        let path = UPath::polygon(&[Complex64::new(-0.3, 0.8), Complex64::new(0.4, 1.5)]).unwrap();
        let t = c.transport_inverse(&path, 1, 256).unwrap();
        for sym in c.symbols() {
            let want = depth_one_oracle(sym.weight(), sym.j, Complex64::new(-0.3, 0.8), Complex64::new(0.4, 1.5));
            let got = t.coeff(&[*sym]).unwrap();
            assert!((got - want).norm() < 1e-10 * (1.0 + want.norm()), "{sym}: {got} vs {want}");
        }
    }

    #[test]
    fn reversal_is_inverse() {
        let c = conn(&[4, 6]);
        let path = UPath::polygon(&[I, Complex64::new(0.7, 1.3), Complex64::new(1.0, 0.6)]).unwrap();
        let fwd = c.transport_inverse(&path, 2, 128).unwrap();
        let back = c.transport_inverse(&path.reversed(), 2, 128).unwrap();
        assert!(back.max_abs_diff(&fwd.inverse()).unwrap() < 1e-9);
        let prod = fwd.mul(&back).unwrap();
        assert!(prod.max_abs_diff(&GroupLikeElem::identity(2, &[4, 6]).unwrap()).unwrap() < 1e-9);
        let t = c.theta(&Sl2Z::T, I, 2, 128).unwrap();
        let tinv = c.transport_inverse(&UPath::polygon(&[I + 1.0, I]).unwrap(), 2, 128).unwrap();
        assert!(tinv.max_abs_diff(&t.inverse()).unwrap() < 1e-9);
    }

    #[test]
    fn concatenation_multiplies() {
        let c = conn(&[4]);
        let a = UPath::polygon(&[I, Complex64::new(0.5, 1.2)]).unwrap();
        let b = UPath::polygon(&[Complex64::new(0.5, 1.2), Complex64::new(1.0, 0.9)]).unwrap();
        let whole = c.transport_inverse(&a.concat(&b).unwrap(), 3, 32).unwrap();
        let parts = c.transport_inverse(&a, 3, 32).unwrap().mul(&c.transport_inverse(&b, 3, 32).unwrap()).unwrap();
        assert!(whole.max_abs_diff(&parts).unwrap() < 1e-12);
    }

    #[test]
    fn depth_one_is_path_independent() {
        let c = conn(&[4, 6]);
        let (z0, z1) = (I, Complex64::new(1.0, 0.8));
        let direct = c.transport_inverse(&UPath::polygon(&[z0, z1]).unwrap(), 1, 128).unwrap();
        let detour = c.transport_inverse(&UPath::polygon(&[z0, Complex64::new(-0.4, 1.6), z1]).unwrap(), 1, 128).unwrap();
        assert!(direct.max_abs_diff(&detour).unwrap() < 1e-9);
    }

    #[test]
    fn cocycle_law_t_t_and_identity() {
        let c = conn(&[4, 6]);
        assert!(c.cocycle_residual(&Sl2Z::T, &Sl2Z::T, I, 2, 256).unwrap() < 1e-9);
        assert_eq!(c.cocycle_residual(&Sl2Z::IDENTITY, &Sl2Z::T, I, 2, 16).unwrap(), 0.0);
    }

    #[test]
    fn action_is_a_representation() {
        let syms = alphabet(&[4, 6]).unwrap();
        let (g, h) = (Sl2Z::S, Sl2Z::T);
        let prod = |a: &[Vec<f64>], b: &[Vec<f64>]| -> Vec<Vec<f64>> {
            (0..a.len()).map(|r| (0..a.len()).map(|c| (0..a.len()).map(|k| a[r][k] * b[k][c]).sum()).collect()).collect()
        };
        let lhs = symbol_action_matrix::<f64>(&g.mul(&h), &syms);
        let rhs = prod(&symbol_action_matrix(&g, &syms), &symbol_action_matrix(&h, &syms));
        for (x, y) in lhs.iter().flatten().zip(rhs.iter().flatten()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn magnus_step_is_fourth_order() {
        let c = conn(&[4, 6]);
        let path = UPath::polygon(&[I, Complex64::new(1.0, 0.5)]).unwrap();
        let fine = c.transport_inverse(&path, 2, 512).unwrap();
        let e1 = c.transport_inverse(&path, 2, 16).unwrap().max_abs_diff(&fine).unwrap();
        let e2 = c.transport_inverse(&path, 2, 32).unwrap().max_abs_diff(&fine).unwrap();
        let ratio = e1 / e2;
        assert!(ratio > 12.0 && ratio < 20.0, "error ratio {ratio}");
    }
}
