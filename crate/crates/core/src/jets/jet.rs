//! Truncated Taylor jets of order 3 in three variables.
//!
//! A [`Jet3`] stores the normalized Taylor coefficients `c[a,b,c] =
//! ∂^(a+b+c) f / (a! b! c!)` for all multi-indices with `a+b+c <= 3`.
//! Arithmetic is exact up to truncation: the coefficients of a product or
//! composition through total order 3 depend only on the coefficients of the
//! operands through total order 3.
//!
//! Taking a partial derivative lowers the order that is meaningful: the
//! top-order coefficients of `partial(k)` are set to zero and should be read
//! as unknown. Downstream quantities built from derivatives of derivatives
//! are therefore only valid up to the remaining order, which is how the
//! curvature pipeline uses them (metric order 3 → Christoffel order 2 →
//! curvature order 1 → Cotton order 0).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

/// Number of coefficients of an order-3 jet in 3 variables.
pub const JET_LEN: usize = 20;

/// Multi-indices ordered by total degree, then lexicographically descending.
pub const MULTI_INDICES: [[u8; 3]; JET_LEN] = [
    [0, 0, 0],
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [2, 0, 0],
    [1, 1, 0],
    [1, 0, 1],
    [0, 2, 0],
    [0, 1, 1],
    [0, 0, 2],
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

const fn degree(m: [u8; 3]) -> u8 {
    m[0] + m[1] + m[2]
}

/// Position of a multi-index in [`MULTI_INDICES`], or `None` above order 3.
pub const fn index_of(a: u8, b: u8, c: u8) -> Option<usize> {
    let mut i = 0;
    while i < JET_LEN {
        let m = MULTI_INDICES[i];
        if m[0] == a && m[1] == b && m[2] == c {
            return Some(i);
        }
        i += 1;
    }
    None
}

const PRODUCT_TERMS: usize = 84;

/// `(i, j, k)` such that `x^i * x^j = x^k` with total degree at most 3.
const PRODUCT_TABLE: [(u8, u8, u8); PRODUCT_TERMS] = {
    let mut table = [(0u8, 0u8, 0u8); PRODUCT_TERMS];
    let mut n = 0;
    let mut i = 0;
    while i < JET_LEN {
        let mut j = 0;
        while j < JET_LEN {
            let a = MULTI_INDICES[i];
            let b = MULTI_INDICES[j];
            if degree(a) + degree(b) <= 3 {
                let k = match index_of(a[0] + b[0], a[1] + b[1], a[2] + b[2]) {
                    Some(k) => k,
                    None => panic!("product index out of range"),
                };
                table[n] = (i as u8, j as u8, k as u8);
                n += 1;
            }
            j += 1;
        }
        i += 1;
    }
    assert!(n == PRODUCT_TERMS);
    table
};

/// `(source, target, factor)` for `∂_k`: coefficient `source` contributes
/// `factor * c[source]` to coefficient `target` of the derivative.
const fn partial_table(k: usize) -> [(u8, u8, f64); 10] {
    let mut table = [(0u8, 0u8, 0.0f64); 10];
    let mut n = 0;
    let mut i = 0;
    while i < JET_LEN {
        let m = MULTI_INDICES[i];
        if m[k] > 0 {
            let mut t = m;
            t[k] -= 1;
            let target = match index_of(t[0], t[1], t[2]) {
                Some(x) => x,
                None => panic!("derivative index out of range"),
            };
            table[n] = (i as u8, target as u8, m[k] as f64);
            n += 1;
        }
        i += 1;
    }
    assert!(n == 10);
    table
}

const PARTIAL_TABLES: [[(u8, u8, f64); 10]; 3] =
    [partial_table(0), partial_table(1), partial_table(2)];

#[derive(Clone, Copy, PartialEq)]
pub struct Jet3 {
    coeffs: [f64; JET_LEN],
}

impl fmt::Debug for Jet3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet3")
            .field("value", &self.coeffs[0])
            .field("coeffs", &&self.coeffs[1..])
            .finish()
    }
}

impl Default for Jet3 {
    fn default() -> Self {
        Self::constant(0.0)
    }
}

impl Jet3 {
    pub const fn from_coeffs(coeffs: [f64; JET_LEN]) -> Self {
        Self { coeffs }
    }

    pub const fn constant(c: f64) -> Self {
        let mut coeffs = [0.0; JET_LEN];
        coeffs[0] = c;
        Self { coeffs }
    }

    /// The coordinate function `x_{k+1}` expanded at a point where it takes
    /// the value `value`.
    pub fn variable(k: usize, value: f64) -> Self {
        assert!(k < 3, "variable index out of range");
        let mut j = Self::constant(value);
        j.coeffs[1 + k] = 1.0;
        j
    }

    pub fn coeffs(&self) -> &[f64; JET_LEN] {
        &self.coeffs
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Normalized Taylor coefficient of `x1^a x2^b x3^c`.
    pub fn coeff(&self, a: u8, b: u8, c: u8) -> f64 {
        index_of(a, b, c).map_or(0.0, |i| self.coeffs[i])
    }

    /// Partial derivative `∂^(a+b+c) f / ∂x1^a ∂x2^b ∂x3^c` at the expansion point.
    pub fn derivative(&self, a: u8, b: u8, c: u8) -> f64 {
        self.coeff(a, b, c) * factorial(a) * factorial(b) * factorial(c)
    }

    pub fn gradient(&self) -> [f64; 3] {
        [self.coeffs[1], self.coeffs[2], self.coeffs[3]]
    }

    pub fn hessian(&self) -> [[f64; 3]; 3] {
        let mut h = [[0.0; 3]; 3];
        for (i, row) in h.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let mut m = [0u8; 3];
                m[i] += 1;
                m[j] += 1;
                *v = self.derivative(m[0], m[1], m[2]);
            }
        }
        h
    }

    /// Jet of `∂f/∂x_{k+1}`. Its order-3 coefficients are zero (unknown).
    pub fn partial(&self, k: usize) -> Self {
        let mut out = [0.0; JET_LEN];
        for &(src, dst, factor) in PARTIAL_TABLES[k].iter() {
            out[dst as usize] = factor * self.coeffs[src as usize];
        }
        Self { coeffs: out }
    }

    /// Keep only the coefficients of total degree `<= order`.
    pub fn truncate(&self, order: u8) -> Self {
        let mut out = *self;
        for (c, m) in out.coeffs.iter_mut().zip(MULTI_INDICES.iter()) {
            if degree(*m) > order {
                *c = 0.0;
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Evaluate the cubic Taylor polynomial at displacement `h` from the
    /// expansion point.
    pub fn eval_polynomial(&self, h: [f64; 3]) -> f64 {
        MULTI_INDICES
            .iter()
            .zip(self.coeffs.iter())
            .map(|(m, c)| {
                c * h[0].powi(m[0] as i32) * h[1].powi(m[1] as i32) * h[2].powi(m[2] as i32)
            })
            .sum()
    }

    /// Compose with a scalar function given its derivatives `[f, f', f'', f''']`
    /// at the value of `self`.
    pub fn compose(&self, d: [f64; 4]) -> Self {
        let mut delta = *self;
        delta.coeffs[0] = 0.0;
        let d2 = delta * delta;
        let d3 = d2 * delta;
        let mut out = Self::constant(d[0]);
        for i in 1..JET_LEN {
            out.coeffs[i] =
                d[1] * delta.coeffs[i] + 0.5 * d[2] * d2.coeffs[i] + d[3] / 6.0 * d3.coeffs[i];
        }
        out
    }

    pub fn recip(&self) -> Self {
        let x = self.value();
        let r = 1.0 / x;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn tan(&self) -> Self {
        let t = self.value().tan();
        let sec2 = 1.0 + t * t;
        self.compose([t, sec2, 2.0 * t * sec2, 2.0 * sec2 * (1.0 + 3.0 * t * t)])
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose([e, e, e, e])
    }

    pub fn ln(&self) -> Self {
        let x = self.value();
        let r = 1.0 / x;
        self.compose([x.ln(), r, -r * r, 2.0 * r * r * r])
    }

    pub fn sqrt(&self) -> Self {
        let x = self.value();
        let s = x.sqrt();
        self.compose([s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)])
    }

    pub fn sinh(&self) -> Self {
        let x = self.value();
        let (s, c) = (x.sinh(), x.cosh());
        self.compose([s, c, s, c])
    }

    pub fn cosh(&self) -> Self {
        let x = self.value();
        let (s, c) = (x.sinh(), x.cosh());
        self.compose([c, s, c, s])
    }

    pub fn tanh(&self) -> Self {
        let t = self.value().tanh();
        let sech2 = 1.0 - t * t;
        self.compose([t, sech2, -2.0 * t * sech2, sech2 * (6.0 * t * t - 2.0)])
    }

    /// Integer power by repeated squaring; negative exponents go through `recip`.
    pub fn powi(&self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::constant(1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

fn factorial(n: u8) -> f64 {
    match n {
        0 | 1 => 1.0,
        2 => 2.0,
        3 => 6.0,
        _ => (2..=n as u32).map(f64::from).product(),
    }
}

impl Add for Jet3 {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for Jet3 {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b;
        }
    }
}

impl Sub for Jet3 {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl SubAssign for Jet3 {
    fn sub_assign(&mut self, rhs: Self) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= b;
        }
    }
}

impl Neg for Jet3 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for Jet3 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = [0.0; JET_LEN];
        for &(i, j, k) in PRODUCT_TABLE.iter() {
            out[k as usize] += self.coeffs[i as usize] * rhs.coeffs[j as usize];
        }
        Self { coeffs: out }
    }
}

impl MulAssign for Jet3 {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Div for Jet3 {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl Add<f64> for Jet3 {
    type Output = Self;
    fn add(mut self, rhs: f64) -> Self {
        self.coeffs[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet3 {
    type Output = Self;
    fn sub(mut self, rhs: f64) -> Self {
        self.coeffs[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet3 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<Jet3> for f64 {
    type Output = Jet3;
    fn mul(self, rhs: Jet3) -> Jet3 {
        rhs.scale(self)
    }
}

impl Zero for Jet3 {
    fn zero() -> Self {
        Self::constant(0.0)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0.0)
    }
}

impl One for Jet3 {
    fn one() -> Self {
        Self::constant(1.0)
    }
}

impl std::iter::Sum for Jet3 {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_consistent() {
        for (i, m) in MULTI_INDICES.iter().enumerate() {
            assert_eq!(index_of(m[0], m[1], m[2]), Some(i));
        }
        assert_eq!(index_of(2, 2, 0), None);
    }

    #[test]
    fn bilinear_monomial() {
        let x = Jet3::variable(0, 0.0);
        let y = Jet3::variable(1, 0.0);
        let p = x * y;
        for (i, m) in MULTI_INDICES.iter().enumerate() {
            let expect = if *m == [1, 1, 0] { 1.0 } else { 0.0 };
            assert_eq!(p.coeffs()[i], expect);
        }
    }

    #[test]
    fn sine_series_at_origin() {
        let s = Jet3::variable(0, 0.0).sin();
        assert_eq!(s.coeff(1, 0, 0), 1.0);
        assert!((s.coeff(3, 0, 0) + 1.0 / 6.0).abs() < 1e-16);
        assert_eq!(s.coeff(2, 0, 0), 0.0);
        assert_eq!(s.value(), 0.0);
    }

    #[test]
    fn partial_lowers_order() {
        // f = x^2 y  → ∂_x f = 2 x y
        let x = Jet3::variable(0, 1.0);
        let y = Jet3::variable(1, 2.0);
        let f = x * x * y;
        let fx = f.partial(0);
        assert!((fx.value() - 4.0).abs() < 1e-15);
        assert!((fx.derivative(1, 0, 0) - 4.0).abs() < 1e-15);
        assert!((fx.derivative(0, 1, 0) - 2.0).abs() < 1e-15);
        assert!((fx.derivative(1, 1, 0) - 2.0).abs() < 1e-15);
        assert_eq!(fx.coeff(1, 1, 1), 0.0);
    }

    #[test]
    fn powi_matches_products() {
        let x = Jet3::variable(2, 1.3) + Jet3::variable(0, 0.0);
        let p = x.powi(3);
        let q = x * x * x;
        for i in 0..JET_LEN {
            assert!((p.coeffs()[i] - q.coeffs()[i]).abs() < 1e-14);
        }
        let r = x.powi(-2) * x.powi(2);
        assert!((r.value() - 1.0).abs() < 1e-14);
        assert!(r.coeffs()[1..].iter().all(|c| c.abs() < 1e-13));
    }

    #[test]
    fn recip_inverts() {
        let x = Jet3::variable(0, 0.7) * Jet3::variable(1, 1.1).exp();
        let one = x * x.recip();
        assert!((one.value() - 1.0).abs() < 1e-15);
        assert!(one.coeffs()[1..].iter().all(|c| c.abs() < 1e-13));
    }
}
