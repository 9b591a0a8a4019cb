use num_traits::Zero;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::{MetricField, MetricSpec};
use crate::jets::{Expr, Jet3};
use crate::tensor::{
    jet_inverse, jet_zeros, JetMat3, Mat3, Orientation, SymMat3, Tensor3, Tensor4, Vec3,
};
use crate::Point;

pub type JetTensor3 = [[[Jet3; 3]; 3]; 3];
pub type JetTensor4 = [[[[Jet3; 3]; 3]; 3]; 3];

/// Levi-Civita symbol of `(i, j, k)`.
pub(crate) fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `Γ^k_{ij}` as jets, indexed `[k][i][j]`; exact through second order when
/// `g` is exact through third.
pub fn christoffel_jets(g: &JetMat3, g_inv: &JetMat3) -> JetTensor3 {
    let dg: [JetMat3; 3] = [0, 1, 2].map(|k| g.map(|x| x.partial(k)));

    let mut gamma = zero3();
    for a in 0..3 {
        for b in 0..3 {
            for c in b..3 {
                let mut s = Jet3::zero();
                for d in 0..3 {
                    let t = dg[b][(c, d)] + dg[c][(b, d)] - dg[d][(b, c)];
                    s += g_inv[(a, d)] * t;
                }
                let s = s.scale(0.5);
                gamma[a][b][c] = s;
                gamma[a][c][b] = s;
            }
        }
    }
    gamma
}

/// The whole pipeline carried as jets about one point.
///
/// The metric jet is exact through order 3, so Γ is valid through order 2,
/// the curvature tensors through order 1 and `∇Sch` at the point itself.
#[derive(Debug, Clone)]
pub struct CurvatureJets {
    pub point: Point,
    pub orientation: Orientation,
    pub g: JetMat3,
    pub g_inv: JetMat3,
    /// `gamma[k][i][j] = Γ^k_{ij}`.
    pub gamma: JetTensor3,
    /// `riem_up[a][b][c][d] = R^a_{bcd}`, with `R(∂_c, ∂_d)∂_b = R^a_{bcd} ∂_a`.
    pub riem_up: JetTensor4,
    /// `riem[i][j][k][l] = g_{ie} R^e_{jkl}`.
    pub riem: JetTensor4,
    pub ric: JetMat3,
    pub scal: Jet3,
    pub sch: JetMat3,
}

fn zero3() -> JetTensor3 {
    [[[Jet3::zero(); 3]; 3]; 3]
}

fn zero4() -> JetTensor4 {
    [[[[Jet3::zero(); 3]; 3]; 3]; 3]
}

impl CurvatureJets {
    pub fn compute<M: MetricField + ?Sized>(m: &M, p: &Point) -> Result<Self> {
        let g = m.metric_jet(p)?;
        Ok(Self::from_metric_jet(g, *p, m.orientation()))
    }

    /// Runs the pipeline on a metric jet whose value is positive definite.
    pub fn from_metric_jet(g: JetMat3, point: Point, orientation: Orientation) -> Self {
        let g_inv = jet_inverse(&g);
        let gamma = christoffel_jets(&g, &g_inv);

        let dgamma: [JetTensor3; 3] = [0, 1, 2].map(|k| {
            let mut out = zero3();
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        out[a][b][c] = gamma[a][b][c].partial(k);
                    }
                }
            }
            out
        });

        let mut riem_up = zero4();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in (c + 1)..3 {
                        let mut s = dgamma[c][a][d][b] - dgamma[d][a][c][b];
                        for e in 0..3 {
                            s += gamma[a][c][e] * gamma[e][d][b] - gamma[a][d][e] * gamma[e][c][b];
                        }
                        riem_up[a][b][c][d] = s;
                        riem_up[a][b][d][c] = -s;
                    }
                }
            }
        }

        let mut riem = zero4();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let mut s = Jet3::zero();
                        for e in 0..3 {
                            s += g[(i, e)] * riem_up[e][j][k][l];
                        }
                        riem[i][j][k][l] = s;
                    }
                }
            }
        }

        let mut ric = jet_zeros();
        for j in 0..3 {
            for k in j..3 {
                let mut s = Jet3::zero();
                for a in 0..3 {
                    for b in 0..3 {
                        s += g_inv[(a, b)] * riem[a][j][b][k];
                    }
                }
                ric[(j, k)] = s;
                ric[(k, j)] = s;
            }
        }

        let mut scal = Jet3::zero();
        for j in 0..3 {
            for k in 0..3 {
                scal += g_inv[(j, k)] * ric[(j, k)];
            }
        }
        let quarter = scal.scale(0.25);
        let sch = ric.zip_map(&g, |r, gg| r - quarter * gg);

        Self {
            point,
            orientation,
            g,
            g_inv,
            gamma,
            riem_up,
            riem,
            ric,
            scal,
            sch,
        }
    }

    pub fn metric(&self) -> SymMat3 {
        SymMat3::from_matrix(&self.g.map(|j| j.value()))
    }

    pub fn metric_inverse(&self) -> SymMat3 {
        SymMat3::from_matrix(&self.g_inv.map(|j| j.value()))
    }

    pub fn gamma_values(&self) -> Tensor3 {
        self.gamma.map(|a| a.map(|b| b.map(|c| c.value())))
    }

    pub fn riemann_values(&self) -> Tensor4 {
        self.riem
            .map(|a| a.map(|b| b.map(|c| c.map(|d| d.value()))))
    }

    pub fn riemann_up_values(&self) -> Tensor4 {
        self.riem_up
            .map(|a| a.map(|b| b.map(|c| c.map(|d| d.value()))))
    }

    /// `[i][j][k] = (∇_i Sch)_{jk}`.
    pub fn nabla_sch(&self) -> Tensor3 {
        let gam = self.gamma_values();
        let sch = self.sch.map(|j| j.value());
        let mut out = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let mut s = self.sch[(j, k)].gradient()[i];
                    for m in 0..3 {
                        s -= gam[m][i][j] * sch[(m, k)] + gam[m][i][k] * sch[(j, m)];
                    }
                    out[i][j][k] = s;
                }
            }
        }
        out
    }

    /// `C_{ijk} = (∇_i Sch)_{jk} − (∇_j Sch)_{ik}`.
    pub fn cotton_form(&self) -> Tensor3 {
        let ns = self.nabla_sch();
        let mut c = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    c[i][j][k] = ns[i][j][k] - ns[j][i][k];
                }
            }
        }
        c
    }

    pub fn cotton_tensor(&self) -> Mat3 {
        cotton_tensor(&self.cotton_form(), &self.metric(), self.orientation)
    }

    /// `[m][i][j][k][l] = (∇_m R)_{ijkl}`.
    pub fn nabla_riemann(&self) -> [Tensor4; 3] {
        let gam = self.gamma_values();
        let r = self.riemann_values();
        let mut out = [[[[[0.0; 3]; 3]; 3]; 3]; 3];
        for (m, out_m) in out.iter_mut().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        for l in 0..3 {
                            let mut s = self.riem[i][j][k][l].gradient()[m];
                            for p in 0..3 {
                                s -= gam[p][m][i] * r[p][j][k][l]
                                    + gam[p][m][j] * r[i][p][k][l]
                                    + gam[p][m][k] * r[i][j][p][l]
                                    + gam[p][m][l] * r[i][j][k][p];
                            }
                            out_m[i][j][k][l] = s;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn packet(&self) -> CurvaturePacket {
        let g = self.metric();
        let cotton_form = self.cotton_form();
        CurvaturePacket {
            point: self.point,
            gamma: self.gamma_values(),
            riemann: self.riemann_values(),
            ricci: SymMat3::from_matrix(&self.ric.map(|j| j.value())),
            scalar: self.scal.value(),
            schouten: SymMat3::from_matrix(&self.sch.map(|j| j.value())),
            cotton_tensor: crate::tensor::mat_to_rows(&cotton_tensor(
                &cotton_form,
                &g,
                self.orientation,
            )),
            cotton_form,
            metric: g,
        }
    }
}

/// Pointwise output of the pipeline. `Gamma[k][i][j] = Γ^k_{ij}`,
/// `Riem[i][j][k][l] = ⟨R(∂_k, ∂_l)∂_j, ∂_i⟩`, `cottonForm[i][j][k] =
/// (∇_i Sch)_{jk} − (∇_j Sch)_{ik}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvaturePacket {
    pub point: Point,
    #[serde(rename = "g")]
    pub metric: SymMat3,
    #[serde(rename = "Gamma")]
    pub gamma: Tensor3,
    #[serde(rename = "Riem")]
    pub riemann: Tensor4,
    #[serde(rename = "Ric")]
    pub ricci: SymMat3,
    #[serde(rename = "scal")]
    pub scalar: f64,
    #[serde(rename = "Sch")]
    pub schouten: SymMat3,
    #[serde(rename = "cottonForm")]
    pub cotton_form: Tensor3,
    #[serde(rename = "cottonTensor")]
    pub cotton_tensor: [[f64; 3]; 3],
}

pub fn curvature_packet<M: MetricField + ?Sized>(m: &M, p: &Point) -> Result<CurvaturePacket> {
    Ok(CurvatureJets::compute(m, p)?.packet())
}

/// `Γ^k_{ij}` at `p`, indexed `[k][i][j]`.
pub fn christoffels<M: MetricField + ?Sized>(m: &M, p: &Point) -> Result<Tensor3> {
    Ok(CurvatureJets::compute(m, p)?.gamma_values())
}

/// Fully covariant `R_{ijkl}` at `p`.
pub fn riemann<M: MetricField + ?Sized>(m: &M, p: &Point) -> Result<Tensor4> {
    Ok(CurvatureJets::compute(m, p)?.riemann_values())
}

/// `Ric_{jk} = g^{ab} R_{ajbk}` and `scal = g^{jk} Ric_{jk}`.
pub fn ricci_scalar(r: &Tensor4, g: &SymMat3) -> (SymMat3, f64) {
    let g_inv = g.inverse().expect("invertible metric");
    let mut ric = Mat3::zeros();
    for j in 0..3 {
        for k in 0..3 {
            for a in 0..3 {
                for b in 0..3 {
                    ric[(j, k)] += g_inv.get(a, b) * r[a][j][b][k];
                }
            }
        }
    }
    let ric = SymMat3::from_matrix(&ric);
    let scal = ric.trace_with(&g_inv);
    (ric, scal)
}

pub fn schouten(ric: &SymMat3, scal: f64, g: &SymMat3) -> SymMat3 {
    *ric - g.scale(scal / 4.0)
}

pub fn cotton_form<M: MetricField + ?Sized>(m: &M, p: &Point) -> Result<Tensor3> {
    Ok(CurvatureJets::compute(m, p)?.cotton_form())
}

/// Hodge star on the 2-form slot:
/// `Cott_{mk} = ½ o √det g ε_{ijm} g^{ia} g^{jb} C_{abk}`.
pub fn cotton_tensor(c: &Tensor3, g: &SymMat3, orientation: Orientation) -> Mat3 {
    let g_inv = g.inverse().expect("invertible metric");
    let vol = orientation.sign() * g.determinant().sqrt();
    let mut raised = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut s = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        s += g_inv.get(i, a) * g_inv.get(j, b) * c[a][b][k];
                    }
                }
                raised[i][j][k] = s;
            }
        }
    }
    let mut out = Mat3::zeros();
    for m in 0..3 {
        for k in 0..3 {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += levi_civita(i, j, m) * raised[i][j][k];
                }
            }
            out[(m, k)] = 0.5 * vol * s;
        }
    }
    out
}

pub fn cotton_tensor_at<M: MetricField + ?Sized>(m: &M, p: &Point) -> Result<Mat3> {
    Ok(CurvatureJets::compute(m, p)?.cotton_tensor())
}

/// `(δh)_j = −g^{ia} (∇_a h)_{ij}` for a symmetric field whose jets are valid
/// through first order.
pub fn divergence_sym2<M, F>(m: &M, field: F, p: &Point) -> Result<Vec3>
where
    M: MetricField + ?Sized,
    F: Fn(&Point) -> Result<JetMat3>,
{
    let cj = CurvatureJets::compute(m, p)?;
    let gam = cj.gamma_values();
    let g_inv = cj.metric_inverse();
    let h = field(p)?;
    let hv = h.map(|x| x.value());
    let mut out = Vec3::zeros();
    for j in 0..3 {
        let mut s = 0.0;
        for i in 0..3 {
            for a in 0..3 {
                let mut nab = h[(i, j)].gradient()[a];
                for mm in 0..3 {
                    nab -= gam[mm][a][i] * hv[(mm, j)] + gam[mm][a][j] * hv[(i, mm)];
                }
                s += g_inv.get(i, a) * nab;
            }
        }
        out[j] = -s;
    }
    Ok(out)
}

/// First-order jet of a matrix field from three-level Richardson extrapolated
/// central differences with base step `h`; truncation error is `O(h⁶)`.
pub fn fd_field_jet<F>(f: F, p: &Point, h: f64) -> Result<JetMat3>
where
    F: Fn(&Point) -> Result<Mat3>,
{
    let value = f(p)?;
    let mut grad = [Mat3::zeros(); 3];
    for (k, gk) in grad.iter_mut().enumerate() {
        let mut d = [Mat3::zeros(); 3];
        for (level, dl) in d.iter_mut().enumerate() {
            let step = h / f64::from(1u32 << level);
            let mut plus = *p;
            let mut minus = *p;
            plus[k] += step;
            minus[k] -= step;
            *dl = (f(&plus)? - f(&minus)?) / (2.0 * step);
        }
        let r1 = (d[1] * 4.0 - d[0]) / 3.0;
        let r2 = (d[2] * 4.0 - d[1]) / 3.0;
        *gk = (r2 * 16.0 - r1) / 15.0;
    }
    let mut out = jet_zeros();
    for i in 0..3 {
        for j in 0..3 {
            let mut c = [0.0; crate::jets::JET_LEN];
            c[0] = value[(i, j)];
            c[1] = grad[0][(i, j)];
            c[2] = grad[1][(i, j)];
            c[3] = grad[2][(i, j)];
            out[(i, j)] = Jet3::from_coeffs(c);
        }
    }
    Ok(out)
}

/// `δCott` at `p`. The Cotton tensor already consumes third derivatives of
/// the metric, so its own derivative comes from [`fd_field_jet`].
pub fn cotton_divergence<M: MetricField + ?Sized>(m: &M, p: &Point, h: f64) -> Result<Vec3> {
    divergence_sym2(m, |q| fd_field_jet(|x| cotton_tensor_at(m, x), q, h), p)
}

/// `e^{2f} g`, built on the expression trees.
pub fn conformal_rescale(m: &MetricSpec, f: &Expr) -> MetricSpec {
    if f.is_zero_constant() {
        return m.clone();
    }
    let factor = (f.clone() * 2.0).exp();
    let g = m.g.clone().map(|e| {
        if e.is_zero_constant() {
            e
        } else {
            factor.clone() * e
        }
    });
    MetricSpec::new(format!("{}-rescaled", m.name), g, m.domain, m.orientation)
}

/// `R_{U,V}X` rebuilt from the Schouten tensor, as a vector.
pub fn curvature_from_schouten(sch: &SymMat3, g: &SymMat3, u: &Vec3, v: &Vec3, x: &Vec3) -> Vec3 {
    let g_inv = g.inverse().expect("invertible metric");
    let sch_vec = |w: &Vec3| g_inv.matrix() * (sch.matrix() * w);
    sch_vec(u) * g.inner(x, v) + u * sch.inner(x, v)
        - v * sch.inner(x, u)
        - sch_vec(v) * g.inner(u, x)
}

/// `R_{U,V}X` from the covariant Riemann tensor.
pub fn riemann_apply(riem: &Tensor4, g: &SymMat3, u: &Vec3, v: &Vec3, x: &Vec3) -> Vec3 {
    let g_inv = g.inverse().expect("invertible metric");
    let mut low = Vec3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    low[i] += riem[i][j][k][l] * x[j] * u[k] * v[l];
                }
            }
        }
    }
    g_inv.matrix() * low
}
