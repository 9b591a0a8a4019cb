//! Differential forms on a 3-dimensional chart with values in a ring.
//!
//! A form of degree `k` stores one coefficient per strictly increasing index
//! tuple of length `k` (1, 3, 3, 1 coefficients for k = 0..3), so
//! `a = Σ_I a_I dx^I`. Every sign comes from sorting index tuples.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Matrix3;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::jets::Jet3;
use crate::tensor::{Mat3, Orientation, SymMat3};

/// Increasing index tuples for each degree, in storage order.
pub const FORM_INDICES: [&[&[usize]]; 4] = [
    &[&[]],
    &[&[0], &[1], &[2]],
    &[&[0, 1], &[0, 2], &[1, 2]],
    &[&[0, 1, 2]],
];

/// Coefficient ring of a form: scalars, matrices, or their jets.
/// Multiplication need not commute.
pub trait FormCoeff:
    Clone + Zero + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> + Mul<Output = Self>
{
    fn scale(&self, s: f64) -> Self;
}

pub trait Trace {
    type Output;
    fn trace(&self) -> Self::Output;
}

/// Partial derivative along chart coordinate `k`.
pub trait Partial {
    fn partial(&self, k: usize) -> Self;
}

/// Drop the derivative information of a jet-valued coefficient.
pub trait AtPoint {
    type Value;
    fn at_point(&self) -> Self::Value;
}

impl FormCoeff for f64 {
    fn scale(&self, s: f64) -> Self {
        self * s
    }
}

impl FormCoeff for Mat3 {
    fn scale(&self, s: f64) -> Self {
        self * s
    }
}

impl FormCoeff for Jet3 {
    fn scale(&self, s: f64) -> Self {
        Jet3::scale(self, s)
    }
}

impl FormCoeff for Matrix3<Jet3> {
    fn scale(&self, s: f64) -> Self {
        self.map(|j| j.scale(s))
    }
}

impl Trace for Mat3 {
    type Output = f64;
    fn trace(&self) -> f64 {
        self[(0, 0)] + self[(1, 1)] + self[(2, 2)]
    }
}

impl Trace for Matrix3<Jet3> {
    type Output = Jet3;
    fn trace(&self) -> Jet3 {
        self[(0, 0)] + self[(1, 1)] + self[(2, 2)]
    }
}

impl Partial for Jet3 {
    fn partial(&self, k: usize) -> Self {
        Jet3::partial(self, k)
    }
}

impl Partial for Matrix3<Jet3> {
    fn partial(&self, k: usize) -> Self {
        self.map(|j| j.partial(k))
    }
}

impl AtPoint for Jet3 {
    type Value = f64;
    fn at_point(&self) -> f64 {
        self.value()
    }
}

impl AtPoint for Matrix3<Jet3> {
    type Value = Mat3;
    fn at_point(&self) -> Mat3 {
        self.map(|j| j.value())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Form<V> {
    degree: usize,
    coeffs: Vec<V>,
}

/// Matrix-valued form.
pub type MVForm = Form<Mat3>;
/// Real-valued form.
pub type ScalarForm = Form<f64>;

fn slot(degree: usize, idx: &[usize]) -> usize {
    FORM_INDICES[degree]
        .iter()
        .position(|t| *t == idx)
        .expect("increasing index tuple")
}

/// Sign of the permutation sorting `idx`, or `None` on a repeated index.
fn sort_sign(idx: &[usize]) -> Option<(f64, Vec<usize>)> {
    let mut v = idx.to_vec();
    let mut sign = 1.0;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, v))
}

impl<V: FormCoeff> Form<V> {
    pub fn zero(degree: usize) -> Result<Self> {
        if degree > 3 {
            return Err(Error::Degree { degree });
        }
        Ok(Self {
            degree,
            coeffs: vec![V::zero(); FORM_INDICES[degree].len()],
        })
    }

    pub fn new(degree: usize, coeffs: Vec<V>) -> Result<Self> {
        if degree > 3 {
            return Err(Error::Degree { degree });
        }
        if coeffs.len() != FORM_INDICES[degree].len() {
            return Err(Error::InvalidArgument(format!(
                "a {degree}-form has {} coefficients, got {}",
                FORM_INDICES[degree].len(),
                coeffs.len()
            )));
        }
        Ok(Self { degree, coeffs })
    }

    /// 1-form `Σ_k c[k] dx^k`.
    pub fn one_form(c: [V; 3]) -> Self {
        Self {
            degree: 1,
            coeffs: c.to_vec(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[V] {
        &self.coeffs
    }

    /// Coefficient of `dx^I` for an increasing tuple `I`.
    pub fn coeff(&self, idx: &[usize]) -> &V {
        &self.coeffs[slot(self.degree, idx)]
    }

    /// Component on an arbitrary index tuple via antisymmetric extension.
    pub fn component(&self, idx: &[usize]) -> V {
        assert_eq!(
            idx.len(),
            self.degree,
            "index tuple length must equal the degree"
        );
        match sort_sign(idx) {
            None => V::zero(),
            Some((s, sorted)) => self.coeff(&sorted).scale(s),
        }
    }

    /// Coefficient of `dx¹∧dx²∧dx³` of a 3-form.
    pub fn top(&self) -> &V {
        assert_eq!(self.degree, 3, "top coefficient of a non-3-form");
        &self.coeffs[0]
    }

    pub fn map<W>(&self, f: impl Fn(&V) -> W) -> Form<W> {
        Form {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|c| c.scale(s))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            self.degree, other.degree,
            "adding forms of different degree"
        );
        Self {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }
}

impl<V: AtPoint> Form<V> {
    pub fn at_point(&self) -> Form<V::Value> {
        Form {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(AtPoint::at_point).collect(),
        }
    }
}

/// `(a∧b)_K = Σ sign(I,J) a_I b_J` over increasing `I`, `J` with `I ∪ J = K`;
/// values multiply in the order `a · b`.
pub fn wedge<V: FormCoeff>(a: &Form<V>, b: &Form<V>) -> Result<Form<V>> {
    let degree = a.degree + b.degree;
    let mut out = Form::<V>::zero(degree)?;
    for (i, ii) in FORM_INDICES[a.degree].iter().enumerate() {
        for (j, jj) in FORM_INDICES[b.degree].iter().enumerate() {
            let joined: Vec<usize> = ii.iter().chain(jj.iter()).copied().collect();
            if let Some((sign, sorted)) = sort_sign(&joined) {
                let k = slot(degree, &sorted);
                let term = (a.coeffs[i].clone() * b.coeffs[j].clone()).scale(sign);
                out.coeffs[k] = out.coeffs[k].clone() + term;
            }
        }
    }
    Ok(out)
}

pub fn trace_form<V>(a: &Form<V>) -> Form<V::Output>
where
    V: Trace,
{
    Form {
        degree: a.degree,
        coeffs: a.coeffs.iter().map(Trace::trace).collect(),
    }
}

/// `d(Σ a_I dx^I) = Σ_m ∂_m a_I dx^m ∧ dx^I`. Forms of degree 3 have no
/// exterior derivative in dimension 3 and produce `DegreeError`.
pub fn exterior_derivative<V: FormCoeff + Partial>(a: &Form<V>) -> Result<Form<V>> {
    let degree = a.degree + 1;
    let mut out = Form::<V>::zero(degree)?;
    for (k, kk) in FORM_INDICES[degree].iter().enumerate() {
        for (pos, &m) in kk.iter().enumerate() {
            let rest: Vec<usize> = kk.iter().copied().filter(|&x| x != m).collect();
            let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
            let term = a.coeff(&rest).partial(m).scale(sign);
            out.coeffs[k] = out.coeffs[k].clone() + term;
        }
    }
    Ok(out)
}

/// Determinant of the submatrix of `m` with the given rows and columns.
fn minor(m: &Mat3, rows: &[usize], cols: &[usize]) -> f64 {
    match rows.len() {
        0 => 1.0,
        1 => m[(rows[0], cols[0])],
        2 => {
            m[(rows[0], cols[0])] * m[(rows[1], cols[1])]
                - m[(rows[0], cols[1])] * m[(rows[1], cols[0])]
        }
        _ => m.determinant(),
    }
}

impl ScalarForm {
    /// Components with all indices raised by `g⁻¹`.
    pub fn raised(&self, g_inv: &Mat3) -> Vec<f64> {
        let idx = FORM_INDICES[self.degree];
        idx.iter()
            .map(|i| {
                idx.iter()
                    .zip(&self.coeffs)
                    .map(|(j, a)| minor(g_inv, i, j) * a)
                    .sum()
            })
            .collect()
    }

    /// Induced inner product `Σ_I a_I b^I`.
    pub fn inner(&self, other: &ScalarForm, g: &SymMat3) -> Result<f64> {
        assert_eq!(self.degree, other.degree);
        let g_inv = g
            .inverse()
            .ok_or(Error::NotPositiveDefinite { point: None })?;
        let raised = other.raised(g_inv.matrix());
        Ok(self.coeffs.iter().zip(&raised).map(|(a, b)| a * b).sum())
    }
}

/// Hodge star of a real form. On an oriented `g`-orthonormal coframe
/// `S¹, S², S³` it sends `1 ↦ S¹∧S²∧S³`, `S¹ ↦ S²∧S³`, `S² ↦ S³∧S¹`,
/// `S³ ↦ S¹∧S²`; in chart components that reads
/// `(*a)_K = o √det g · sign(I,K) · a^I` with `I` the complement of `K`.
pub fn hodge_star(g: &SymMat3, orientation: Orientation, a: &ScalarForm) -> Result<ScalarForm> {
    if !g.is_positive_definite() {
        return Err(Error::NotPositiveDefinite { point: None });
    }
    let g_inv = g
        .inverse()
        .ok_or(Error::NotPositiveDefinite { point: None })?;
    let raised = a.raised(g_inv.matrix());
    let vol = orientation.sign() * g.determinant().sqrt();
    let out_degree = 3 - a.degree;
    let coeffs = FORM_INDICES[out_degree]
        .iter()
        .map(|kk| {
            let ii: Vec<usize> = (0..3).filter(|x| !kk.contains(x)).collect();
            let joined: Vec<usize> = ii.iter().chain(kk.iter()).copied().collect();
            let (sign, _) = sort_sign(&joined).expect("complementary tuples");
            vol * sign * raised[slot(a.degree, &ii)]
        })
        .collect();
    Form::new(out_degree, coeffs)
}
