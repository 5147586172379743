//! The Picard lattice `Z^{1,n}` of an `n`-fold blow-up of the plane.
//!
//! Classes are written `a·H − Σ mᵢ·Eᵢ`, where `H` is the pullback of a line
//! and `Eᵢ` the total transform of the `i`-th exceptional curve. The form is
//! `H² = 1`, `Eᵢ² = −1`, all mixed products zero. With this sign convention
//! the proper transform of a plane curve of degree `d` through the points
//! with multiplicities `mᵢ` has nonnegative coordinates `(d; m₁, …, mₙ)`,
//! an exceptional class `Eᵢ` has `mᵢ = −1`, and the canonical class is
//! `K = (−3; −1, …, −1)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Roots;
use num_traits::{Signed, Zero};

use crate::{format_rational, Error, Rational, Result};

/// Largest number of blow-ups accepted by lattice arithmetic.
pub const MAX_BLOWUPS: usize = 10;

/// Largest number of blow-ups for which (-1)-classes and roots are enumerated
/// (the del Pezzo range, `(−K)² ≥ 1`).
pub const MAX_ENUMERATION_BLOWUPS: usize = 8;

/// An element `a·H − Σ mᵢ·Eᵢ` of `Pic ⊗ Q` with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    a: Rational,
    m: Vec<Rational>,
}

impl DivisorClass {
    pub fn new(a: Rational, m: Vec<Rational>) -> Result<Self> {
        check_rank(m.len())?;
        Ok(DivisorClass { a, m })
    }

    /// Integral constructor, mostly for tests and fixtures.
    pub fn from_ints(a: i64, m: &[i64]) -> Result<Self> {
        Self::new(Rational::from_integer(a), m.iter().map(|&x| Rational::from_integer(x)).collect())
    }

    pub fn zero(n: usize) -> Result<Self> {
        check_rank(n)?;
        Ok(DivisorClass { a: Rational::zero(), m: vec![Rational::zero(); n] })
    }

    /// The pullback `H` of a line.
    pub fn hyperplane(n: usize) -> Result<Self> {
        let mut c = Self::zero(n)?;
        c.a = Rational::from_integer(1);
        Ok(c)
    }

    /// The total transform `Eᵢ` of the `i`-th exceptional curve (1-based).
    pub fn exceptional(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::InvalidArgument(format!("exceptional index {i} outside 1..={n}")));
        }
        let mut c = Self::zero(n)?;
        c.m[i - 1] = Rational::from_integer(-1);
        Ok(c)
    }

    /// Number of blow-ups of the ambient lattice.
    pub fn n(&self) -> usize {
        self.m.len()
    }

    /// Coefficient of `H`.
    pub fn a(&self) -> Rational {
        self.a
    }

    /// Multiplicities `mᵢ` (the class is `a·H − Σ mᵢ·Eᵢ`).
    pub fn m(&self) -> &[Rational] {
        &self.m
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.m.iter().all(|x| x.is_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.m.iter().all(|x| x.is_zero())
    }

    pub fn intersect(&self, other: &DivisorClass) -> Result<Rational> {
        if self.n() != other.n() {
            return Err(Error::InvalidArgument(format!(
                "classes live in lattices of different rank (n={} vs n={})",
                self.n(),
                other.n()
            )));
        }
        Ok(self.dot(other))
    }

    pub fn square(&self) -> Rational {
        self.dot(self)
    }

    /// Unchecked form; callers guarantee equal `n`.
    pub(crate) fn dot(&self, other: &DivisorClass) -> Rational {
        debug_assert_eq!(self.n(), other.n());
        self.m.iter().zip(&other.m).fold(self.a * other.a, |acc, (x, y)| acc - x * y)
    }

    pub fn checked_add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.intersect(other)?;
        Ok(self.clone() + other.clone())
    }

    pub fn scale(&self, k: Rational) -> DivisorClass {
        DivisorClass { a: self.a * k, m: self.m.iter().map(|x| x * k).collect() }
    }

    /// Coordinates as integers, if integral.
    pub fn to_ints(&self) -> Option<(i64, Vec<i64>)> {
        if !self.is_integral() {
            return None;
        }
        Some((self.a.to_integer(), self.m.iter().map(|x| x.to_integer()).collect()))
    }

    fn zip_with(self, rhs: DivisorClass, f: impl Fn(Rational, Rational) -> Rational) -> DivisorClass {
        assert_eq!(self.n(), rhs.n(), "lattice rank mismatch");
        DivisorClass { a: f(self.a, rhs.a), m: self.m.into_iter().zip(rhs.m).map(|(x, y)| f(x, y)).collect() }
    }
}

fn check_rank(n: usize) -> Result<()> {
    if n > MAX_BLOWUPS {
        return Err(Error::InvalidArgument(format!("n = {n} exceeds the supported maximum {MAX_BLOWUPS}")));
    }
    Ok(())
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |x, y| x + y)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |x, y| x - y)
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(Rational::from_integer(-1))
    }
}

impl Mul<DivisorClass> for Rational {
    type Output = DivisorClass;
    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

impl fmt::Display for DivisorClass {
    /// Renders e.g. `3H - 2E1 - E2 + E3`; the zero class renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // (coefficient, basis label) with the sign folded into the coefficient
        let mut terms: Vec<(Rational, String)> = Vec::new();
        if !self.a.is_zero() {
            terms.push((self.a, "H".to_string()));
        }
        for (i, m) in self.m.iter().enumerate() {
            if !m.is_zero() {
                terms.push((-m, format!("E{}", i + 1)));
            }
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (c, label)) in terms.iter().enumerate() {
            let mag = c.abs();
            let coeff = if mag == Rational::from_integer(1) { String::new() } else { format_rational(&mag) };
            match (k, c.is_negative()) {
                (0, false) => write!(f, "{coeff}{label}")?,
                (0, true) => write!(f, "-{coeff}{label}")?,
                (_, false) => write!(f, " + {coeff}{label}")?,
                (_, true) => write!(f, " - {coeff}{label}")?,
            }
        }
        Ok(())
    }
}

/// `K = −3H + Σ Eᵢ`, i.e. `(−3; −1, …, −1)`, with `K² = 9 − n`.
pub fn canonical_class(n: usize) -> Result<DivisorClass> {
    check_rank(n)?;
    DivisorClass::new(Rational::from_integer(-3), vec![Rational::from_integer(-1); n])
}

/// All integral classes with `C² = −1` and `C·K = −1`, for `n ≤ 8`.
///
/// # Completeness
///
/// Write `C = a·H − Σ mᵢEᵢ`. Then `C·K = −3a + Σ mᵢ` and
/// `C² = a² − Σ mᵢ²`, so a (-1)-class satisfies `Σ mᵢ = 3a − 1` and
/// `Σ mᵢ² = a² + 1`. Cauchy–Schwarz on the `n` coordinates gives
/// `(3a − 1)² ≤ n(a² + 1)`, a quadratic in `a` with leading coefficient
/// `9 − n > 0`; for `n = 8` it reads `(a − 7)(a + 1) ≤ 0`, and `a = 7` is
/// excluded by integrality (equality in Cauchy–Schwarz would need all
/// `mᵢ = 5/2`), so `−1 ≤ a ≤ 6`. Applying the same inequality to the
/// `n − 1` coordinates other than `mᵢ` bounds each `|mᵢ| ≤ 3`. For roots
/// (`Σ mᵢ = 3a`, `Σ mᵢ² = a² + 2`) the same argument gives `|a| ≤ 4`.
///
/// The search below applies these inequalities exactly rather than via a
/// fixed box: `a` ranges over the integer solutions of the quadratic, and
/// each partial assignment of the `mᵢ` is pruned by the Cauchy–Schwarz
/// condition on the remaining coordinates, which is necessary for any
/// completion. Nothing satisfying both equations is skipped.
pub fn enumerate_minus1(n: usize) -> Result<Vec<DivisorClass>> {
    enumerate_standard(n, -1, -1)
}

/// All integral classes with `C² = −2` and `C·K = 0`, for `n ≤ 8`.
///
/// The output is closed under negation; see [`enumerate_minus1`] for the
/// completeness argument.
pub fn enumerate_roots(n: usize) -> Result<Vec<DivisorClass>> {
    enumerate_standard(n, -2, 0)
}

fn enumerate_standard(n: usize, square: i64, k_degree: i64) -> Result<Vec<DivisorClass>> {
    if n > MAX_ENUMERATION_BLOWUPS {
        return Err(Error::InvalidArgument(format!(
            "enumeration is limited to n <= {MAX_ENUMERATION_BLOWUPS}, got {n}"
        )));
    }
    let nn = n as i64;
    // Σm = 3a + t, Σm² = a² − s; feasibility of a: (3a + t)² ≤ n(a² − s).
    let feasible = |a: i64| {
        let sum = 3 * a + k_degree;
        let sumsq = a * a - square;
        sumsq >= 0 && sum * sum <= nn * sumsq
    };
    let mut a_values = Vec::new();
    // f(a) = (3a+t)² − n(a² − s) is convex with minimum at a* = −3t/(9 − n).
    let vertex = (-3 * k_degree) as f64 / (9 - nn) as f64;
    let mut a = vertex.floor() as i64;
    while feasible(a) {
        a_values.push(a);
        a -= 1;
    }
    let mut a = vertex.floor() as i64 + 1;
    while feasible(a) {
        a_values.push(a);
        a += 1;
    }
    a_values.sort_unstable();

    let mut out = Vec::new();
    let mut m = Vec::with_capacity(n);
    for a in a_values {
        fill_multiplicities(n, 3 * a + k_degree, a * a - square, &mut m, &mut |m| {
            out.push(DivisorClass::from_ints(a, m).expect("rank checked"));
        });
    }
    out.sort();
    Ok(out)
}

/// Enumerates integer vectors of length `n` with the given coordinate sum and
/// sum of squares, pruning with `sum² ≤ k·sumsq` on the `k` free coordinates.
fn fill_multiplicities(n: usize, sum: i64, sumsq: i64, m: &mut Vec<i64>, emit: &mut dyn FnMut(&[i64])) {
    let left = (n - m.len()) as i64;
    if left == 0 {
        if sum == 0 && sumsq == 0 {
            emit(m);
        }
        return;
    }
    if sumsq < 0 || sum * sum > left * sumsq {
        return;
    }
    let bound = sumsq.sqrt();
    for x in -bound..=bound {
        m.push(x);
        fill_multiplicities(n, sum - x, sumsq - x * x, m, emit);
        m.pop();
    }
}

/// All integral classes `x` with `x² = square`, `x·K = k_degree`, and
/// `x·c = 0` for every `c` in `orthogonal_to`.
///
/// This handles the lattice of a surface obtained after contracting curves
/// (where `K` is the transformed canonical class and the contracted classes
/// are excluded via orthogonality). It requires `K² > 0` and uses the
/// positive-definite majorant `Q(x) = 2(x·K)²/K² − x²` of the Lorentzian
/// form: every solution has `Q(x) = 2·k_degree²/K² − square`, and lattice
/// vectors of bounded `Q` are listed exhaustively by Fincke–Pohst
/// enumeration over an exact LDLᵀ factorisation.
pub fn enumerate_in_complement(
    canonical: &DivisorClass,
    orthogonal_to: &[DivisorClass],
    square: i64,
    k_degree: i64,
) -> Result<Vec<DivisorClass>> {
    let n = canonical.n();
    if !canonical.is_integral() {
        return Err(Error::InvalidArgument("canonical class must be integral".into()));
    }
    if orthogonal_to.iter().any(|c| c.n() != n) {
        return Err(Error::InvalidArgument("constraint class rank mismatch".into()));
    }
    let degree = canonical.square();
    if degree <= Rational::zero() {
        return Err(Error::InvalidArgument(format!("K² = {degree} is not positive")));
    }
    let dim = n + 1;
    // w = J·k so that x·K = xᵀw; G = 2wwᵀ/d − J.
    let mut w = vec![canonical.a()];
    w.extend(canonical.m().iter().map(|x| -x));
    let two = Rational::from_integer(2);
    let mut gram = vec![vec![Rational::zero(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            gram[i][j] = two * w[i] * w[j] / degree;
        }
        gram[i][i] += if i == 0 { -1 } else { 1 };
    }
    let bound = two * Rational::from_integer(k_degree * k_degree) / degree - Rational::from_integer(square);
    let target_sq = Rational::from_integer(square);
    let target_k = Rational::from_integer(k_degree);
    let mut out = Vec::new();
    for v in short_vectors(&gram, bound) {
        let x = DivisorClass::from_ints(v[0], &v[1..]).expect("rank checked");
        if x.square() == target_sq && x.dot(canonical) == target_k && orthogonal_to.iter().all(|c| x.dot(c).is_zero()) {
            out.push(x);
        }
    }
    out.sort();
    Ok(out)
}

/// Integer vectors `x` with `xᵀ G x ≤ bound` for positive-definite rational `G`.
fn short_vectors(gram: &[Vec<Rational>], bound: Rational) -> Vec<Vec<i64>> {
    let dim = gram.len();
    // q[i][i] holds the pivots, q[i][j] (j > i) the normalised multipliers.
    let mut q = gram.to_vec();
    for i in 0..dim {
        assert!(q[i][i] > Rational::zero(), "majorant is not positive definite");
        for j in i + 1..dim {
            q[j][i] = q[i][j];
            q[i][j] = q[i][j] / q[i][i];
        }
        for k in i + 1..dim {
            for l in k..dim {
                let delta = q[k][i] * q[i][l];
                q[k][l] -= delta;
            }
        }
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; dim];
    descend(&q, dim, &mut x, bound, &mut out);
    out
}

fn descend(q: &[Vec<Rational>], level: usize, x: &mut [i64], remaining: Rational, out: &mut Vec<Vec<i64>>) {
    if level == 0 {
        out.push(x.to_vec());
        return;
    }
    let i = level - 1;
    let dim = q.len();
    let center = -(i + 1..dim).fold(Rational::zero(), |acc, j| acc + q[i][j] * Rational::from_integer(x[j]));
    let pivot = q[i][i];
    let cost = |v: i64| {
        let d = Rational::from_integer(v) - center;
        pivot * d * d
    };
    let start = center.floor().to_integer();
    let mut v = start;
    while cost(v) <= remaining {
        x[i] = v;
        descend(q, i, x, remaining - cost(v), out);
        v -= 1;
    }
    let mut v = start + 1;
    while cost(v) <= remaining {
        x[i] = v;
        descend(q, i, x, remaining - cost(v), out);
        v += 1;
    }
    x[i] = 0;
}

/// A formal `Q`-linear combination of named curves.
///
/// Zero coefficients are never stored, so the key set is the support.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QDivisor {
    terms: BTreeMap<String, Rational>,
}

impl QDivisor {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets the coefficient of `id`, removing the entry when it is zero.
    pub fn set(&mut self, id: impl Into<String>, coeff: Rational) {
        let id = id.into();
        if coeff.is_zero() {
            self.terms.remove(&id);
        } else {
            self.terms.insert(id, coeff);
        }
    }

    pub fn add_to(&mut self, id: &str, delta: Rational) {
        let c = self.coefficient(id) + delta;
        self.set(id, c);
    }

    pub fn coefficient(&self, id: &str) -> Rational {
        self.terms.get(id).copied().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Rational)> {
        self.terms.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn support(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().map(String::as_str)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.terms.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// All coefficients strictly positive.
    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// `Σ cᵢ·class(idᵢ)` in a lattice of rank `n`.
    pub fn class<'a>(&self, n: usize, lookup: impl Fn(&str) -> Option<&'a DivisorClass>) -> Result<DivisorClass> {
        let mut total = DivisorClass::zero(n)?;
        for (id, c) in self.iter() {
            let class = lookup(id).ok_or_else(|| Error::InvalidReference(format!("unknown curve {id:?}")))?;
            total = total.checked_add(&class.scale(c))?;
        }
        Ok(total)
    }
}

impl FromIterator<(String, Rational)> for QDivisor {
    fn from_iter<I: IntoIterator<Item = (String, Rational)>>(iter: I) -> Self {
        let mut d = QDivisor::new();
        for (k, v) in iter {
            d.add_to(&k, v);
        }
        d
    }
}
