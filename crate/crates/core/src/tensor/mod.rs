//! Dense multilinear algebra in dimension 3.

mod form;

pub use form::{
    exterior_derivative, hodge_star, trace_form, wedge, AtPoint, Form, FormCoeff, MVForm, Partial,
    ScalarForm, Trace, FORM_INDICES,
};

use nalgebra::{Matrix3, Vector3};
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::jets::Jet3;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;
pub type JetMat3 = Matrix3<Jet3>;

/// `Γ[k][i][j]` style rank-3 array.
pub type Tensor3 = [[[f64; 3]; 3]; 3];
/// Rank-4 array, indices in declaration order.
pub type Tensor4 = [[[[f64; 3]; 3]; 3]; 3];

pub fn mat_to_rows(m: &Mat3) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = m[(i, j)];
        }
    }
    out
}

pub fn max_abs(m: &Mat3) -> f64 {
    m.iter().fold(0.0, |a, v| a.max(v.abs()))
}

pub fn jet_values(m: &JetMat3) -> Mat3 {
    m.map(|j| j.value())
}

pub fn jet_zeros() -> JetMat3 {
    JetMat3::from_element(Jet3::zero())
}

pub fn jet_identity() -> JetMat3 {
    let mut m = jet_zeros();
    for i in 0..3 {
        m[(i, i)] = Jet3::constant(1.0);
    }
    m
}

pub fn jet_determinant(m: &JetMat3) -> Jet3 {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}

/// Inverse by adjugate. The caller guarantees the value is invertible.
pub fn jet_inverse(m: &JetMat3) -> JetMat3 {
    let c = |i: usize, j: usize| {
        let (r0, r1) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let (c0, c1) = match j {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let minor = m[(r0, c0)] * m[(r1, c1)] - m[(r0, c1)] * m[(r1, c0)];
        if (i + j).is_multiple_of(2) {
            minor
        } else {
            -minor
        }
    };
    let inv_det = jet_determinant(m).recip();
    let mut out = jet_zeros();
    for i in 0..3 {
        for j in 0..3 {
            out[(i, j)] = c(j, i) * inv_det;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn from_sign(s: i64) -> Option<Self> {
        match s {
            1 => Some(Orientation::Positive),
            -1 => Some(Orientation::Negative),
            _ => None,
        }
    }
}

impl Serialize for Orientation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.sign() as i8)
    }
}

/// Symmetric bilinear form stored as a full matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMat3(Mat3);

impl SymMat3 {
    /// Symmetrizes its input, so the stored matrix is exactly symmetric.
    pub fn from_matrix(m: &Mat3) -> Self {
        Self((m + m.transpose()) * 0.5)
    }

    /// Components in the order `g11, g12, g13, g22, g23, g33`.
    pub fn from_upper(c: [f64; 6]) -> Self {
        Self(Mat3::new(
            c[0], c[1], c[2], c[1], c[3], c[4], c[2], c[4], c[5],
        ))
    }

    pub fn identity() -> Self {
        Self(Mat3::identity())
    }

    pub fn zeros() -> Self {
        Self(Mat3::zeros())
    }

    pub fn diagonal(a: f64, b: f64, c: f64) -> Self {
        Self(Mat3::from_diagonal(&Vec3::new(a, b, c)))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// Leading principal minors all positive.
    pub fn is_positive_definite(&self) -> bool {
        let m = &self.0;
        let d1 = m[(0, 0)];
        let d2 = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        let d3 = m.determinant();
        d1 > 0.0 && d2 > 0.0 && d3 > 0.0
    }

    pub fn inverse(&self) -> Option<SymMat3> {
        self.0.try_inverse().map(|m| SymMat3::from_matrix(&m))
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn inner(&self, u: &Vec3, v: &Vec3) -> f64 {
        u.dot(&(self.0 * v))
    }

    /// Trace with respect to the metric `g`: `g^{ij} self_{ij}`.
    pub fn trace_with(&self, g_inv: &SymMat3) -> f64 {
        self.0.component_mul(&g_inv.0).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0 * s)
    }
}

impl std::ops::Add for SymMat3 {
    type Output = SymMat3;
    fn add(self, o: SymMat3) -> SymMat3 {
        SymMat3(self.0 + o.0)
    }
}

impl std::ops::Sub for SymMat3 {
    type Output = SymMat3;
    fn sub(self, o: SymMat3) -> SymMat3 {
        SymMat3(self.0 - o.0)
    }
}

impl Serialize for SymMat3 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        mat_to_rows(&self.0).serialize(s)
    }
}

/// Three frame vectors `S1, S2, S3` stored as the columns of a matrix of
/// chart components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame(Mat3);

impl Frame {
    pub fn from_columns(cols: [Vec3; 3]) -> Self {
        Self(Mat3::from_columns(&cols))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn vector(&self, a: usize) -> Vec3 {
        self.0.column(a).into_owned()
    }

    /// `max |Sᵀ g S − I|`.
    pub fn orthonormality_defect(&self, g: &SymMat3) -> f64 {
        max_abs(&(self.0.transpose() * g.matrix() * self.0 - Mat3::identity()))
    }

    pub fn orientation(&self) -> Orientation {
        if self.0.determinant() >= 0.0 {
            Orientation::Positive
        } else {
            Orientation::Negative
        }
    }
}

/// Gram–Schmidt of `seed` with respect to `g`. The first output vector is
/// parallel to `seed[0]` and the orientation of the seed is preserved.
pub fn gram_schmidt(g: &SymMat3, seed: [Vec3; 3]) -> Result<Frame> {
    if !g.is_positive_definite() {
        return Err(Error::NotPositiveDefinite { point: None });
    }
    let det = Mat3::from_columns(&seed).determinant();
    if det.abs() < 1e-12 {
        return Err(Error::DegenerateSeed { det });
    }
    let mut out: [Vec3; 3] = [Vec3::zeros(); 3];
    for a in 0..3 {
        let mut v = seed[a];
        // Two passes keep the result orthonormal to rounding for poorly
        // conditioned seeds.
        for _ in 0..2 {
            for b in 0..a {
                v -= out[b] * g.inner(&out[b], &v);
            }
        }
        let n = g.inner(&v, &v).sqrt();
        out[a] = v / n;
    }
    Ok(Frame::from_columns(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_schmidt_identity_and_diagonal() {
        let e = [Vec3::x(), Vec3::y(), Vec3::z()];
        let f = gram_schmidt(&SymMat3::identity(), e).unwrap();
        assert_eq!(*f.matrix(), Mat3::identity());

        let f = gram_schmidt(&SymMat3::diagonal(4.0, 1.0, 1.0), e).unwrap();
        assert_eq!(f.vector(0), Vec3::new(0.5, 0.0, 0.0));
        assert_eq!(f.vector(1), Vec3::y());
        assert_eq!(f.vector(2), Vec3::z());
    }

    #[test]
    fn gram_schmidt_rejects_degenerate_seed() {
        let seed = [Vec3::x(), Vec3::y(), Vec3::x() + Vec3::y()];
        assert_eq!(
            gram_schmidt(&SymMat3::identity(), seed).unwrap_err().name(),
            "DegenerateSeed"
        );
    }

    #[test]
    fn gram_schmidt_keeps_orientation() {
        let seed = [Vec3::y(), Vec3::x(), Vec3::z()];
        let g = SymMat3::from_upper([2.0, 0.3, 0.1, 1.5, -0.2, 1.0]);
        let f = gram_schmidt(&g, seed).unwrap();
        assert_eq!(f.orientation(), Orientation::Negative);
        assert!(f.orthonormality_defect(&g) < 1e-14);
        assert!(f.vector(0).cross(&Vec3::y()).norm() < 1e-15);
    }

    #[test]
    fn positive_definite_check() {
        assert!(SymMat3::identity().is_positive_definite());
        assert!(!SymMat3::diagonal(1.0, -1.0, 1.0).is_positive_definite());
        assert!(!SymMat3::from_upper([1.0, 2.0, 0.0, 1.0, 0.0, 1.0]).is_positive_definite());
    }

    #[test]
    fn jet_inverse_roundtrip() {
        use crate::jets::Jet3;
        let x = Jet3::variable(0, 0.4);
        let y = Jet3::variable(1, -0.2);
        let mut m = jet_identity();
        m[(0, 0)] = x.exp();
        m[(0, 1)] = x * y;
        m[(1, 0)] = x * y;
        m[(2, 2)] = Jet3::constant(2.0) + y.sin();
        m[(1, 2)] = y;
        m[(2, 1)] = y;
        let p = m * jet_inverse(&m);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((p[(i, j)].value() - expect).abs() < 1e-14);
                assert!(p[(i, j)].coeffs()[1..].iter().all(|c| c.abs() < 1e-12));
            }
        }
    }
}
