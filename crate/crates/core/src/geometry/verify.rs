//! Numerical checks of curvature identities at a point. Every function
//! returns a relative defect that should be at rounding level.

use crate::error::Result;
use crate::geometry::curvature::{cotton_divergence, levi_civita, CurvatureJets};
use crate::geometry::MetricField;
use crate::tensor::{gram_schmidt, Vec3};
use crate::Point;

fn max4(t: &crate::tensor::Tensor4) -> f64 {
    t.iter()
        .flatten()
        .flatten()
        .flatten()
        .fold(0.0, |a, v| a.max(v.abs()))
}

/// `R_{ijkl} + R_{jkil} + R_{kijl}` relative to `1 + max |R|`.
pub fn bianchi_first(cj: &CurvatureJets) -> f64 {
    let r = cj.riemann_values();
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    worst = worst.max((r[i][j][k][l] + r[j][k][i][l] + r[k][i][j][l]).abs());
                }
            }
        }
    }
    worst / (1.0 + max4(&r))
}

/// `∇_m R_{ijkl} + ∇_k R_{ijlm} + ∇_l R_{ijmk}`, cycling the derivative
/// slot with the 2-form slot `(k, l)`. Relative to `1 + max |∇R|`.
pub fn bianchi_second(cj: &CurvatureJets) -> f64 {
    let nr = cj.nabla_riemann();
    let scale = nr.iter().map(max4).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for m in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let s = nr[m][i][j][k][l] + nr[k][i][j][l][m] + nr[l][i][j][m][k];
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
    }
    worst / (1.0 + scale)
}

/// Index symmetries `R_{ijkl} = −R_{jikl} = −R_{ijlk} = R_{klij}`.
pub fn riemann_symmetry_defect(cj: &CurvatureJets) -> f64 {
    let r = cj.riemann_values();
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let v = r[i][j][k][l];
                    worst = worst
                        .max((v + r[j][i][k][l]).abs())
                        .max((v + r[i][j][l][k]).abs())
                        .max((v - r[k][l][i][j]).abs());
                }
            }
        }
    }
    worst / (1.0 + max4(&r))
}

/// `∇_k g_{ij}` through second order of the jets, relative to `1 + max |∂g|`.
pub fn metric_compatibility(cj: &CurvatureJets) -> f64 {
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let dg = cj.g[(i, j)].partial(k);
                let mut res = dg;
                for m in 0..3 {
                    res -= cj.gamma[m][k][i] * cj.g[(m, j)] + cj.gamma[m][k][j] * cj.g[(i, m)];
                }
                let res = res.truncate(2);
                let dg = dg.truncate(2);
                worst = res.coeffs().iter().fold(worst, |a, v| a.max(v.abs()));
                scale = dg.coeffs().iter().fold(scale, |a, v| a.max(v.abs()));
            }
        }
    }
    worst / (1.0 + scale)
}

fn nabla_sch_scale(cj: &CurvatureJets) -> f64 {
    1.0 + cj
        .nabla_sch()
        .iter()
        .flatten()
        .flatten()
        .fold(0.0, |a: f64, v| a.max(v.abs()))
}

/// `g^{ik} C_{ijk}`, the trace of the Cotton form over its first and last slot.
pub fn tr13_defect(cj: &CurvatureJets) -> f64 {
    let c = cj.cotton_form();
    let g_inv = cj.metric_inverse();
    let mut worst: f64 = 0.0;
    for j in 0..3 {
        let mut s = 0.0;
        for i in 0..3 {
            for k in 0..3 {
                s += g_inv.get(i, k) * c[i][j][k];
            }
        }
        worst = worst.max(s.abs());
    }
    worst / nabla_sch_scale(cj)
}

/// For `T(X,Y,Z,W) = ⟨R(X,Y)Z, W⟩` in an orthonormal frame,
/// `¼ ε_{abm} ε_{cdn} T_{abcd} = Ric_{mn} − ½ scal δ_{mn}`.
pub fn double_hodge_defect(cj: &CurvatureJets) -> Result<f64> {
    let g = cj.metric();
    let s = gram_schmidt(&g, [Vec3::x(), Vec3::y(), Vec3::z()])?;
    let s = s.matrix();
    let r = cj.riemann_values();
    let mut t = [[[[0.0; 3]; 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    let mut v = 0.0;
                    for i in 0..3 {
                        for j in 0..3 {
                            for k in 0..3 {
                                for l in 0..3 {
                                    // T_{ijkl} = R_{ijlk} = −R_{ijkl}
                                    v -= r[i][j][k][l]
                                        * s[(i, a)]
                                        * s[(j, b)]
                                        * s[(k, c)]
                                        * s[(l, d)];
                                }
                            }
                        }
                    }
                    t[a][b][c][d] = v;
                }
            }
        }
    }
    let ric = s.transpose() * cj.ric.map(|j| j.value()) * s;
    let scal = cj.scal.value();
    let mut worst: f64 = 0.0;
    for m in 0..3 {
        for n in 0..3 {
            let mut lhs = 0.0;
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        for d in 0..3 {
                            lhs +=
                                0.25 * levi_civita(a, b, m) * levi_civita(c, d, n) * t[a][b][c][d];
                        }
                    }
                }
            }
            let rhs = ric[(m, n)] - if m == n { 0.5 * scal } else { 0.0 };
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst / (1.0 + max4(&r)))
}

/// Normalized defects of the Cotton tensor identities at one point.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CottonProperties {
    pub symmetry: f64,
    pub trace: f64,
    pub divergence: f64,
}

/// Symmetry, trace and divergence of `Cott`, each divided by
/// `1 + max |∇Sch|`. `h` is the finite-difference step for `δCott`.
pub fn cotton_properties<M: MetricField + ?Sized>(
    m: &M,
    p: &Point,
    h: f64,
) -> Result<CottonProperties> {
    let cj = CurvatureJets::compute(m, p)?;
    let scale = nabla_sch_scale(&cj);
    let cott = cj.cotton_tensor();
    let sym = crate::tensor::max_abs(&(cott - cott.transpose()));
    let tr = cott.component_mul(cj.metric_inverse().matrix()).sum();
    let div = cotton_divergence(m, p, h)?;
    let div = div.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    Ok(CottonProperties {
        symmetry: sym / scale,
        trace: tr.abs() / scale,
        divergence: div / scale,
    })
}
