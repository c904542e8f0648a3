//! Exact sparse polynomials over the rationals.
//!
//! Used to expand the numerator of `K_II` for polynomial profiles
//! `α = f′`, `β = g′` without rounding, so that "all coefficients vanish"
//! can be decided exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::expr::Expr;

pub type Rational = num::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Univariate sparse polynomial `Σ c_k x^k`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly1 {
    coeffs: BTreeMap<u32, Rational>,
}

impl Poly1 {
    pub fn zero() -> Poly1 {
        Poly1::default()
    }

    pub fn constant(c: Rational) -> Poly1 {
        Poly1::monomial(c, 0)
    }

    pub fn monomial(c: Rational, degree: u32) -> Poly1 {
        let mut p = Poly1::zero();
        p.add_term(degree, c);
        p
    }

    /// `coeffs[k]` is the coefficient of `x^k`.
    pub fn from_coeffs(coeffs: &[Rational]) -> Poly1 {
        let mut p = Poly1::zero();
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(k as u32, c.clone());
        }
        p
    }

    fn add_term(&mut self, degree: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(degree).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&degree);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.values().next_back()
    }

    pub fn coeff(&self, degree: u32) -> Rational {
        self.coeffs.get(&degree).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn derivative(&self) -> Poly1 {
        let mut p = Poly1::zero();
        for (&k, c) in &self.coeffs {
            if k > 0 {
                p.add_term(k - 1, c * int(i64::from(k)));
            }
        }
        p
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly1 {
        let mut p = Poly1::zero();
        for (&k, c) in &self.coeffs {
            p.add_term(k + 1, c / int(i64::from(k) + 1));
        }
        p
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        // Horner over the dense range of degrees
        let Some(top) = self.degree() else {
            return Rational::zero();
        };
        let mut acc = Rational::zero();
        for k in (0..=top).rev() {
            acc = acc * x + self.coeff(k);
        }
        acc
    }

    pub fn lift_u(&self) -> Poly2 {
        let mut p = Poly2::zero();
        for (&k, c) in &self.coeffs {
            p.add_term((k, 0), c.clone());
        }
        p
    }

    pub fn lift_v(&self) -> Poly2 {
        let mut p = Poly2::zero();
        for (&k, c) in &self.coeffs {
            p.add_term((0, k), c.clone());
        }
        p
    }

    /// The polynomial as a floating-point expression tree in `variable`.
    pub fn to_expr(&self, variable: &str) -> Expr {
        let mut out = Expr::constant(0.0);
        for (&k, c) in &self.coeffs {
            let c = Expr::constant(to_f64(c));
            out = out + c * Expr::var(variable).powi(k as i32);
        }
        out
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    num::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.coeffs.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            f.write_str("(")?;
            write_rational(f, c)?;
            f.write_str(")")?;
            match k {
                0 => {}
                1 => f.write_str("*x")?,
                _ => write!(f, "*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly1 {
    type Output = Poly1;
    fn add(self, rhs: &Poly1) -> Poly1 {
        let mut out = self.clone();
        for (&k, c) in &rhs.coeffs {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Sub for &Poly1 {
    type Output = Poly1;
    fn sub(self, rhs: &Poly1) -> Poly1 {
        self + &(-rhs)
    }
}

impl Neg for &Poly1 {
    type Output = Poly1;
    fn neg(self) -> Poly1 {
        Poly1 {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &Poly1 {
    type Output = Poly1;
    fn mul(self, rhs: &Poly1) -> Poly1 {
        let mut out = Poly1::zero();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &rhs.coeffs {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

/// Bivariate sparse polynomial `Σ c_ij u^i v^j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    coeffs: BTreeMap<(u32, u32), Rational>,
}

impl Poly2 {
    pub fn zero() -> Poly2 {
        Poly2::default()
    }

    pub fn constant(c: Rational) -> Poly2 {
        let mut p = Poly2::zero();
        p.add_term((0, 0), c);
        p
    }

    fn add_term(&mut self, key: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(key).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, deg_u: u32, deg_v: u32) -> Rational {
        self.coeffs.get(&(deg_u, deg_v)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Rational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Monomial with the largest `u` degree, ties broken by `v` degree.
    pub fn leading_term(&self) -> Option<((u32, u32), &Rational)> {
        self.coeffs.iter().next_back().map(|(k, c)| (*k, c))
    }

    pub fn scale(&self, s: &Rational) -> Poly2 {
        let mut out = Poly2::zero();
        for (&k, c) in &self.coeffs {
            out.add_term(k, c * s);
        }
        out
    }

    pub fn eval(&self, u: &Rational, v: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.coeffs {
            acc += c * pow(u, i) * pow(v, j);
        }
        acc
    }
}

fn pow(x: &Rational, k: u32) -> Rational {
    num::pow(x.clone(), k as usize)
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, ((a, b), c)) in self.coeffs.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            f.write_str("(")?;
            write_rational(f, c)?;
            write!(f, ")*u^{a}*v^{b}")?;
        }
        Ok(())
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&k, c) in &rhs.coeffs {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        self + &(-rhs)
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i, j), a) in &self.coeffs {
            for (&(k, l), b) in &rhs.coeffs {
                out.add_term((i + k, j + l), a * b);
            }
        }
        out
    }
}

/// Dense integer polynomial `Σ c_k x^k`, the working form of [`num_poly`].
#[derive(Debug, Clone)]
struct Dense(Vec<BigInt>);

impl Dense {
    /// `p = Dense / denominator` with the least common denominator.
    fn cleared(p: &Poly1) -> (Dense, BigInt) {
        let denominator = p
            .terms()
            .fold(BigInt::one(), |acc, (_, c)| num::integer::lcm(acc, c.denom().clone()));
        let len = p.degree().map_or(0, |d| d as usize + 1);
        let mut coeffs = vec![BigInt::zero(); len];
        for (k, c) in p.terms() {
            coeffs[k as usize] = c.numer() * (&denominator / c.denom());
        }
        (Dense(coeffs), denominator)
    }

    fn one() -> Dense {
        Dense(vec![BigInt::one()])
    }

    fn derivative(&self) -> Dense {
        Dense(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    fn mul(&self, rhs: &Dense) -> Dense {
        if self.0.is_empty() || rhs.0.is_empty() {
            return Dense(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Dense(out)
    }
}

/// Exact expansion of the numerator of `K_II` for `α(u)`, `β(v)`.
///
/// Every one of the twelve terms is `c · U(u) · V(v)` with at most four
/// factors on each side. With `α = A/d` and `β = B/e` over the integers the
/// sum is expanded as `d⁴e⁴ · num` in `ℤ[u, v]` and divided once at the end.
pub fn num_poly(alpha: &Poly1, beta: &Poly1) -> Poly2 {
    let (a, d) = Dense::cleared(alpha);
    let (b, e) = Dense::cleared(beta);
    let (a1, b1) = (a.derivative(), b.derivative());
    let (a2, b2) = (a1.derivative(), b1.derivative());
    let terms: [(i64, Vec<&Dense>, Vec<&Dense>); 12] = [
        (-2, vec![&a, &a, &a1, &a1], vec![&b1]),
        (-2, vec![&a1], vec![&b, &b, &b1, &b1]),
        (2, vec![&a, &a, &a1], vec![&b1, &b1]),
        (2, vec![&a1, &a1], vec![&b, &b, &b1]),
        (2, vec![&a1], vec![&b1, &b1]),
        (2, vec![&a1, &a1], vec![&b1]),
        (1, vec![&a1], vec![&b, &b2]),
        (1, vec![&a, &a2], vec![&b1]),
        (1, vec![&a, &a, &a1], vec![&b, &b2]),
        (1, vec![&a, &a2], vec![&b, &b, &b1]),
        (1, vec![&a1], vec![&b, &b, &b, &b2]),
        (1, vec![&a, &a, &a, &a2], vec![&b1]),
    ];
    let mut grid: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
    for (c, us, vs) in &terms {
        let left = us.iter().fold(Dense::one(), |acc, f| acc.mul(f));
        let right = vs.iter().fold(Dense::one(), |acc, f| acc.mul(f));
        // restore the common scale d⁴e⁴ for terms with fewer factors
        let scale = BigInt::from(*c) * num::pow(d.clone(), 4 - us.len()) * num::pow(e.clone(), 4 - vs.len());
        for (i, x) in left.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let sx = &scale * x;
            for (j, y) in right.0.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                *grid.entry((i as u32, j as u32)).or_insert_with(BigInt::zero) += &sx * y;
            }
        }
    }
    let denominator = num::pow(d, 4) * num::pow(e, 4);
    let mut out = Poly2::zero();
    for (key, c) in grid {
        if !c.is_zero() {
            out.coeffs.insert(key, Rational::new(c, denominator.clone()));
        }
    }
    out
}

/// Product of a list of bivariate factors times an integer coefficient.
fn term(coeff: i64, factors: &[&Poly2]) -> Poly2 {
    let mut acc = Poly2::constant(int(coeff));
    for f in factors {
        acc = &acc * f;
    }
    acc
}

/// Coefficient of `u^{4m−2} v^{n−1}` in [`num_poly`] for `deg α = m > deg β = n ≥ 2`.
pub fn dominant_coefficient(alpha: &Poly1, beta: &Poly1) -> Result<((u32, u32), Rational), PolyError> {
    let (m, n) = match (alpha.degree(), beta.degree()) {
        (Some(m), Some(n)) if m > n && n >= 2 => (m, n),
        (m, n) => {
            return Err(PolyError::Precondition(format!(
                "need deg α > deg β ≥ 2, got deg α = {m:?}, deg β = {n:?}"
            )))
        }
    };
    let monomial = (4 * m - 2, n - 1);
    let coeff = num_poly(alpha, beta).coeff(monomial.0, monomial.1);
    Ok((monomial, coeff))
}

/// `−m n (m + 1) a_m⁴ b_n`, the predicted dominant coefficient.
pub fn dominant_coefficient_law(m: u32, n: u32, a_m: &Rational, b_n: &Rational) -> Rational {
    let (m, n) = (i64::from(m), i64::from(n));
    int(-m * n * (m + 1)) * pow(a_m, 4) * b_n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanStatus {
    Nonvanishing,
    Vanishing,
}

impl ScanStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanStatus::Nonvanishing => "nonzero",
            ScanStatus::Vanishing => "VANISHES",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub m: u32,
    pub n: u32,
    pub draw: u32,
    pub alpha: Poly1,
    pub beta: Poly1,
    pub status: ScanStatus,
    /// Leading monomial of the numerator (`(0, 0)` with coefficient 0 if it vanishes).
    pub witness: (u32, u32),
    pub coeff: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    pub fn all_nonvanishing(&self) -> bool {
        self.rows.iter().all(|r| r.status == ScanStatus::Nonvanishing)
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &ScanRow> {
        self.rows.iter().filter(|r| r.status == ScanStatus::Vanishing)
    }
}

fn draw_rational(rng: &mut ChaCha8Rng) -> Rational {
    let mut num = rng.gen_range(-3i64..=2);
    if num >= 0 {
        num += 1;
    }
    rat(num, rng.gen_range(1i64..=3))
}

/// Random polynomial of exact degree `degree` with coefficients from
/// `{±1, ±2, ±3} / {1, 2, 3}`.
pub fn random_poly(rng: &mut ChaCha8Rng, degree: u32) -> Poly1 {
    let coeffs: Vec<Rational> = (0..=degree).map(|_| draw_rational(rng)).collect();
    Poly1::from_coeffs(&coeffs)
}

/// Checks that no polynomial translation surface is II-flat on a bounded
/// set of shapes: for every `1 ≤ m ≤ max_m`, `1 ≤ n ≤ max_n` and each
/// draw, the numerator of `K_II` for random `α` of degree `m` and `β` of
/// degree `n` must be a nonzero polynomial.
///
/// Each `(m, n)` pair draws from its own ChaCha stream, so rows are
/// reproducible from `seed` whatever the thread schedule.
pub fn theorem1_scan(max_m: u32, max_n: u32, draws: u32, seed: u64) -> Result<ScanReport, PolyError> {
    if max_m < 1 || max_n < 1 {
        return Err(PolyError::Precondition(format!(
            "degrees must be at least 1 (got max_m = {max_m}, max_n = {max_n}); constant slopes give cylinders"
        )));
    }
    let pairs: Vec<(u32, u32)> = (1..=max_m).flat_map(|m| (1..=max_n).map(move |n| (m, n))).collect();
    let rows = pairs
        .par_iter()
        .map(|&(m, n)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((u64::from(m) << 32) | u64::from(n));
            (0..draws)
                .map(|draw| {
                    let alpha = random_poly(&mut rng, m);
                    let beta = random_poly(&mut rng, n);
                    let num = num_poly(&alpha, &beta);
                    let (status, witness, coeff) = match num.leading_term() {
                        Some((w, c)) => (ScanStatus::Nonvanishing, w, c.clone()),
                        None => (ScanStatus::Vanishing, (0, 0), Rational::zero()),
                    };
                    ScanRow {
                        m,
                        n,
                        draw,
                        alpha,
                        beta,
                        status,
                        witness,
                        coeff,
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(ScanReport { rows })
}

/// `num − 2λα′β′(α′ + β²α′ + β′ + α²β′)`, which vanishes identically
/// exactly when `K_II = λH`.
pub fn weingarten_poly_residual(alpha: &Poly1, beta: &Poly1, lambda: &Rational) -> Poly2 {
    let a = alpha.lift_u();
    let a1 = alpha.derivative().lift_u();
    let b = beta.lift_v();
    let b1 = beta.derivative().lift_v();
    let inner = &(&(&a1 + &term(1, &[&b, &b, &a1])) + &b1) + &term(1, &[&a, &a, &b1]);
    let rhs = term(2, &[&a1, &b1, &inner]).scale(lambda);
    &num_poly(alpha, beta) - &rhs
}

/// Sum of terms `c · u^p v^q` with exact rational exponents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PowerTermMap {
    terms: BTreeMap<(Rational, Rational), Rational>,
}

impl PowerTermMap {
    pub fn insert(&mut self, exp_u: Rational, exp_v: Rational, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let key = (exp_u, exp_v);
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Rational, Rational), &Rational)> {
        self.terms.iter()
    }
}

/// The vanishing-`K_II` condition for `α = a u^p`, `β = b v^q` as a sum of
/// power terms with like exponents combined.
pub fn power_terms(p: &Rational, q: &Rational, a: &Rational, b: &Rational) -> Result<PowerTermMap, PolyError> {
    if p.is_zero() || q.is_zero() || a.is_zero() || b.is_zero() {
        return Err(PolyError::Precondition("p, q, a, b must all be nonzero".into()));
    }
    let one = Rational::one();
    let two = int(2);
    let three = int(3);
    let mut map = PowerTermMap::default();
    map.insert(p.clone(), one.clone(), a * (&three * p - &one));
    map.insert(&two * p + &one, q.clone(), a * a * b * (&three * q - &one));
    map.insert(&three * p, one.clone(), a * a * a * (-p - &one));
    map.insert(one.clone(), q.clone(), b * (&three * q - &one));
    map.insert(p.clone(), &two * q + &one, a * b * b * (&three * p - &one));
    map.insert(one, &three * q, b * b * b * (-q - int(1)));
    Ok(map)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PowerSolution {
    pub p: Rational,
    pub q: Rational,
    pub a: Rational,
    pub b: Rational,
}

impl fmt::Display for PowerSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p, q, a, b) = ({}, {}, {}, {})", self.p, self.q, self.a, self.b)
    }
}

/// All grid points `(p, q, a, b)` whose power terms cancel completely.
pub fn power_scan(exponents: &[Rational], coeffs: &[Rational]) -> Result<Vec<PowerSolution>, PolyError> {
    if exponents.iter().chain(coeffs).any(Zero::is_zero) {
        return Err(PolyError::Precondition("grids must exclude 0".into()));
    }
    let mut out = Vec::new();
    for p in exponents {
        for q in exponents {
            for a in coeffs {
                for b in coeffs {
                    if power_terms(p, q, a, b)?.is_empty() {
                        out.push(PowerSolution {
                            p: p.clone(),
                            q: q.clone(),
                            a: a.clone(),
                            b: b.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `{k/denominator : 1 ≤ |k| ≤ max_numerator}`.
pub fn exponent_grid(denominator: i64, max_numerator: i64) -> Vec<Rational> {
    (-max_numerator..=max_numerator)
        .filter(|k| *k != 0)
        .map(|k| rat(k, denominator))
        .collect()
}

pub fn default_exponent_grid() -> Vec<Rational> {
    exponent_grid(6, 12)
}

pub fn default_coeff_grid() -> Vec<Rational> {
    [-2, -1, 1, 2].into_iter().map(int).collect()
}

/// Members of the family `(1/3, 1/3, a, −a)` that lie in the given grids,
/// in the order [`power_scan`] reports them.
pub fn expected_power_family(exponents: &[Rational], coeffs: &[Rational]) -> Vec<PowerSolution> {
    let third = rat(1, 3);
    if !exponents.contains(&third) {
        return Vec::new();
    }
    coeffs
        .iter()
        .filter(|a| coeffs.contains(&-(*a).clone()))
        .map(|a| PowerSolution {
            p: third.clone(),
            q: third.clone(),
            a: a.clone(),
            b: -a.clone(),
        })
        .collect()
}
