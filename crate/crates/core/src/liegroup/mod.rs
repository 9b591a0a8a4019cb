//! Left-invariant metrics on three-dimensional Lie groups, where the
//! connection, curvature, Cotton tensor and Chern–Simons density are all
//! constant in a left-invariant frame and reduce to linear algebra on the
//! structure constants.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::levi_civita;
use crate::tensor::{trace_form, wedge, Form, Mat3, SymMat3, Tensor3, Vec3};

/// Tolerance for user-supplied structure constants.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// A Lie algebra with basis `e_1, e_2, e_3` and an inner product.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraData {
    pub name: String,
    /// `c[k][i][j] = c^k_{ij}`, so `[e_i, e_j] = Σ_k c^k_{ij} e_k`.
    pub c: Tensor3,
    pub ip: SymMat3,
    /// Riemannian volume of the compact group, if known.
    pub total_volume: Option<f64>,
}

fn su2_constants() -> Tensor3 {
    // [e1, e2] = 2 e3 and cyclically.
    let mut c = [[[0.0; 3]; 3]; 3];
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        c[k][i][j] = 2.0;
        c[k][j][i] = -2.0;
    }
    c
}

impl LieAlgebraData {
    /// Validates antisymmetry, the Jacobi identity and positivity of `ip`.
    pub fn new(
        name: impl Into<String>,
        c: Tensor3,
        ip: SymMat3,
        total_volume: Option<f64>,
    ) -> Result<Self> {
        let mut anti: f64 = 0.0;
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    anti = anti.max((c[k][i][j] + c[k][j][i]).abs());
                }
            }
        }
        if !(anti <= STRUCTURE_TOL) {
            return Err(Error::NotAntisymmetric { defect: anti });
        }
        let jac = jacobi_defect(&c);
        if !(jac <= STRUCTURE_TOL) {
            return Err(Error::JacobiViolation { defect: jac });
        }
        if !ip.is_positive_definite() {
            return Err(Error::NotPositiveDefinite { point: None });
        }
        if let Some(v) = total_volume {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "total volume must be positive, got {v}"
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            c,
            ip,
            total_volume,
        })
    }

    /// `so(3)` with `[I, J] = 2K` cyclically and `ip = I`; SO(3) then has
    /// volume `π²`.
    pub fn so3() -> Self {
        Self::new("so3", su2_constants(), SymMat3::identity(), Some(PI * PI)).expect("valid")
    }

    /// Same brackets as [`Self::so3`], on the double cover S³ of volume `2π²`.
    pub fn su2() -> Self {
        Self::new(
            "su2",
            su2_constants(),
            SymMat3::identity(),
            Some(2.0 * PI * PI),
        )
        .expect("valid")
    }

    /// Berger metric `diag(t, 1, 1)` on S³.
    pub fn berger(t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "Berger parameter must be positive, got {t}"
            )));
        }
        Self::new(
            format!("berger:t={t}"),
            su2_constants(),
            SymMat3::diagonal(t, 1.0, 1.0),
            Some(2.0 * PI * PI * t.sqrt()),
        )
    }

    /// `[e1, e2] = e3`.
    pub fn heisenberg() -> Self {
        let mut c = [[[0.0; 3]; 3]; 3];
        c[2][0][1] = 1.0;
        c[2][1][0] = -1.0;
        Self::new("heisenberg", c, SymMat3::identity(), None).expect("valid")
    }

    /// The abelian algebra, a flat 3-torus of unit volume.
    pub fn abelian() -> Self {
        Self::new(
            "abelian",
            [[[0.0; 3]; 3]; 3],
            SymMat3::identity(),
            Some(1.0),
        )
        .expect("valid")
    }

    /// Catalog lookup: `so3`, `su2`, `s3` (alias of `su2`), `heisenberg`,
    /// `abelian`, `berger:t=<real>`.
    pub fn from_catalog(key: &str) -> Result<Self> {
        match key {
            "so3" => Ok(Self::so3()),
            "su2" | "s3" => Ok(Self::su2()),
            "heisenberg" => Ok(Self::heisenberg()),
            "abelian" => Ok(Self::abelian()),
            _ => match key.strip_prefix("berger:t=") {
                Some(t) => {
                    let t: f64 = t.parse().map_err(|_| {
                        Error::InvalidArgument(format!("bad Berger parameter in {key:?}"))
                    })?;
                    Self::berger(t)
                }
                None => Err(Error::InvalidArgument(format!("unknown group {key:?}"))),
            },
        }
    }

    pub fn bracket(&self, u: &Vec3, v: &Vec3) -> Vec3 {
        Vec3::from_fn(|k, _| {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += self.c[k][i][j] * u[i] * v[j];
                }
            }
            s
        })
    }

    /// `P` with `Pᵀ ip P = I` and `det P > 0`; `f_a = Σ_b P_{ba} e_b` is an
    /// oriented orthonormal basis.
    pub fn orthonormalizer(&self) -> Mat3 {
        let l = self
            .ip
            .matrix()
            .cholesky()
            .expect("validated positive definite")
            .unpack();
        l.transpose().try_inverse().expect("invertible")
    }

    /// Structure constants in the orthonormal basis.
    pub fn orthonormal_constants(&self) -> Tensor3 {
        let p = self.orthonormalizer();
        let p_inv = p.try_inverse().expect("invertible");
        let mut out = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let b = self.bracket(&p.column(i).into_owned(), &p.column(j).into_owned());
                let b = p_inv * b;
                for k in 0..3 {
                    out[k][i][j] = b[k];
                }
            }
        }
        out
    }
}

/// `max |Σ_cyc Σ_m c^m_{ij} c^l_{mk}|`.
pub fn jacobi_defect(c: &Tensor3) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let mut s = 0.0;
                    for m in 0..3 {
                        s += c[m][i][j] * c[l][m][k]
                            + c[m][j][k] * c[l][m][i]
                            + c[m][k][i] * c[l][m][j];
                    }
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}

/// Koszul table `K[i][j][l] = ⟨∇_{e_i} e_j, e_l⟩`.
fn koszul(c: &Tensor3, ip: &Mat3) -> Tensor3 {
    let br = |i: usize, j: usize, l: usize| (0..3).map(|m| c[m][i][j] * ip[(m, l)]).sum::<f64>();
    let mut k = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for l in 0..3 {
                k[i][j][l] = 0.5 * (br(i, j, l) + br(l, i, j) + br(l, j, i));
            }
        }
    }
    k
}

/// `nabla[i][j][k]` is the `e_k` coefficient of `∇_{e_i} e_j`.
pub fn levi_civita_leftinv(l: &LieAlgebraData) -> Result<Tensor3> {
    let ip = l.ip.matrix();
    let ip_inv =
        l.ip.inverse()
            .ok_or(Error::NotPositiveDefinite { point: None })?;
    let k = koszul(&l.c, ip);
    let mut out = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for a in 0..3 {
                out[i][j][a] = (0..3).map(|b| ip_inv.get(a, b) * k[i][j][b]).sum();
            }
        }
    }
    Ok(out)
}

/// The connection of an oriented orthonormal left-invariant frame `f`.
#[derive(Debug, Clone)]
pub struct LeftInvariantConnection {
    /// Structure constants in `f`.
    pub c: Tensor3,
    /// `n[k]_{ab} = ⟨∇_{f_k} f_b, f_a⟩ = ω(f_k)_{ab}`.
    pub n: [Mat3; 3],
}

impl LeftInvariantConnection {
    pub fn new(l: &LieAlgebraData) -> Self {
        let c = l.orthonormal_constants();
        let k = koszul(&c, &Mat3::identity());
        let n = [0, 1, 2].map(|i| Mat3::from_fn(|a, b| k[i][b][a]));
        Self { c, n }
    }

    /// `ω` as a form on the coframe of `f`.
    pub fn omega(&self) -> Form<Mat3> {
        Form::one_form(self.n)
    }

    /// `dω(f_i, f_j) = −ω([f_i, f_j])`.
    pub fn d_omega(&self) -> Form<Mat3> {
        let coeffs = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| -(0..3).fold(Mat3::zeros(), |acc, m| acc + self.n[m] * self.c[m][i][j]))
            .collect();
        Form::new(2, coeffs).expect("2-form")
    }

    /// `Ω(f_i, f_j) = dω(f_i, f_j) + [ω(f_i), ω(f_j)]`.
    pub fn curvature(&self) -> Form<Mat3> {
        self.d_omega()
            .add(&wedge(&self.omega(), &self.omega()).expect("2-form"))
    }

    /// `⟨R(f_c, f_d) f_b, f_a⟩` as `[a][b][c][d]`.
    pub fn riemann(&self) -> [[[[f64; 3]; 3]; 3]; 3] {
        let omega = self.curvature();
        let mut r = [[[[0.0; 3]; 3]; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        r[a][b][c][d] = omega.component(&[c, d])[(a, b)];
                    }
                }
            }
        }
        r
    }

    /// `Sch = Ric − scal/4 · δ` in `f`.
    pub fn schouten(&self) -> Mat3 {
        let r = self.riemann();
        let ric = Mat3::from_fn(|b, d| (0..3).map(|a| r[a][b][a][d]).sum());
        ric - Mat3::identity() * (ric.trace() / 4.0)
    }

    /// Cotton tensor in `f`, for the orientation of `f`.
    pub fn cotton(&self) -> Mat3 {
        let sch = self.schouten();
        // (∇_i Sch)_{jk} = −Sch(∇_i f_j, f_k) − Sch(f_j, ∇_i f_k).
        let nabla = |i: usize, j: usize, k: usize| {
            -(0..3)
                .map(|a| self.n[i][(a, j)] * sch[(a, k)] + self.n[i][(a, k)] * sch[(j, a)])
                .sum::<f64>()
        };
        Mat3::from_fn(|m, k| {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    let e = levi_civita(i, j, m);
                    if e != 0.0 {
                        s += e * (nabla(i, j, k) - nabla(j, i, k));
                    }
                }
            }
            0.5 * s
        })
    }
}

/// Coefficients of `dvol` in the pieces of `cs(ω)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CsDensity {
    #[serde(rename = "trOmegaDOmega")]
    pub tr_omega_d_omega: f64,
    #[serde(rename = "trOmegaCubed")]
    pub tr_omega_cubed: f64,
    pub cs: f64,
}

pub fn cs_density_parts(l: &LieAlgebraData) -> CsDensity {
    let conn = LeftInvariantConnection::new(l);
    let w = conn.omega();
    let a = trace_form(&wedge(&w, &conn.d_omega()).expect("3-form"))
        .top()
        .to_owned();
    let w3 = wedge(&wedge(&w, &w).expect("2-form"), &w).expect("3-form");
    let b = *trace_form(&w3).top();
    CsDensity {
        tr_omega_d_omega: a,
        tr_omega_cubed: b,
        cs: a + 2.0 / 3.0 * b,
    }
}

/// `λ` with `cs(ω) = λ dvol` for the left-invariant orthonormal frame.
pub fn cs_density_leftinv(l: &LieAlgebraData) -> Result<f64> {
    Ok(cs_density_parts(l).cs)
}

/// `CS = −λ · volume / 16π²`.
pub fn cs_invariant_group(lambda: f64, volume: f64) -> Result<f64> {
    if !(volume > 0.0 && volume.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "volume must be positive, got {volume}"
        )));
    }
    Ok(-lambda * volume / (16.0 * PI * PI))
}

/// Closed-form CS invariant of a compact group with known volume.
pub fn cs_invariant(l: &LieAlgebraData) -> Result<f64> {
    let vol = l
        .total_volume
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no total volume", l.name)))?;
    cs_invariant_group(cs_density_leftinv(l)?, vol)
}

/// `Σ_σ sgn σ · tr(ρ_{σ1} ρ_{σ2} ρ_{σ3}) / √det ip`, the coefficient of
/// `dvol` in `tr(ω_MC³)` for a representation `ρ` of the basis.
pub fn mc_cube_trace_rep(rep: &[DMatrix<Complex<f64>>; 3], ip: &SymMat3) -> f64 {
    let mut s = Complex::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let e = levi_civita(i, j, k);
                if e != 0.0 {
                    s += (&rep[i] * &rep[j] * &rep[k]).trace() * e;
                }
            }
        }
    }
    s.re / ip.determinant().sqrt()
}

/// `ad(e_i)`, with `(ad_i)_{kj} = c^k_{ij}`.
pub fn adjoint_representation(l: &LieAlgebraData) -> [DMatrix<Complex<f64>>; 3] {
    [0, 1, 2].map(|i| DMatrix::from_fn(3, 3, |k, j| Complex::new(l.c[k][i][j], 0.0)))
}

/// `tr(ω_MC³)` coefficient in the adjoint representation.
pub fn mc_cube_trace(l: &LieAlgebraData) -> f64 {
    mc_cube_trace_rep(&adjoint_representation(l), &l.ip)
}

/// The quaternion units `i, j, k` as 2×2 complex matrices.
pub fn su2_defining_representation() -> [DMatrix<Complex<f64>>; 3] {
    let c = Complex::new;
    let (z, o, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    [
        DMatrix::from_row_slice(2, 2, &[i, z, z, -i]),
        DMatrix::from_row_slice(2, 2, &[z, o, -o, z]),
        DMatrix::from_row_slice(2, 2, &[z, i, i, z]),
    ]
}

/// Cotton tensor `Cott(e_a, e_b)` in the given (not necessarily
/// orthonormal) basis, for the orientation of that basis.
pub fn cotton_leftinv(l: &LieAlgebraData) -> Result<Mat3> {
    let p_inv = l
        .orthonormalizer()
        .try_inverse()
        .ok_or(Error::NotPositiveDefinite { point: None })?;
    let cf = LeftInvariantConnection::new(l).cotton();
    Ok(p_inv.transpose() * cf * p_inv)
}

/// Finite-difference check of `dCS/dt = −(1/8π²) ⟨ġ, Cott⟩ vol` along the
/// Berger family, with `ġ = diag(1, 0, 0)` in the coframe.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VariationalReport {
    pub t: f64,
    pub step: f64,
    #[serde(rename = "finiteDifference")]
    pub finite_difference: f64,
    #[serde(rename = "cottonPairing")]
    pub cotton_pairing: f64,
    /// `|fd − pairing|`, relative to the pairing or absolute where the
    /// pairing vanishes.
    #[serde(rename = "relativeError")]
    pub relative_error: f64,
    /// Same with the pairing's sign reversed, `|fd + pairing|`.
    #[serde(rename = "reversedSignError")]
    pub reversed_sign_error: f64,
}

pub fn berger_variational_check(t: f64, step: f64) -> Result<VariationalReport> {
    if !(step > 0.0 && step < t) {
        return Err(Error::InvalidArgument(format!(
            "step {step} must lie in (0, {t})"
        )));
    }
    let cs = |s: f64| cs_invariant(&LieAlgebraData::berger(s)?);
    let fd = (cs(t + step)? - cs(t - step)?) / (2.0 * step);
    let l = LieAlgebraData::berger(t)?;
    let cott = cotton_leftinv(&l)?;
    // ⟨ġ, Cott⟩_g = g^{11} g^{11} Cott_11.
    let pairing_density = cott[(0, 0)] / (t * t);
    let vol = l.total_volume.expect("Berger volume");
    let pairing = -pairing_density * vol / (8.0 * PI * PI);
    let rel = |diff: f64| {
        if pairing.abs() > 1e-8 {
            diff / pairing.abs()
        } else {
            diff
        }
    };
    Ok(VariationalReport {
        t,
        step,
        finite_difference: fd,
        cotton_pairing: pairing,
        relative_error: rel((fd - pairing).abs()),
        reversed_sign_error: rel((fd + pairing).abs()),
    })
}
