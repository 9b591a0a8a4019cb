//! Finite-difference and interpolatory weights on uniform grids.

/// Fornberg weights for the `order`-th derivative at 0 from values at
/// `offsets` (in units of the spacing).
pub fn fd_weights(offsets: &[f64], order: usize) -> Vec<f64> {
    let n = offsets.len();
    assert!(n > order);
    // c[j][k]: weight of node j for the k-th derivative.
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = offsets[0];
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = offsets[i];
        for j in 0..i {
            let c3 = offsets[i] - offsets[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

const STENCIL: usize = 7;

/// First derivative at index `i` of a line of `n` samples with spacing `h`,
/// from a 7-point stencil (centered where it fits, shifted at the ends).
pub fn grid_derivative<F: Fn(usize) -> f64>(v: F, i: usize, n: usize, h: f64) -> f64 {
    assert!(n >= STENCIL);
    let half = STENCIL / 2;
    let start = i.saturating_sub(half).min(n - STENCIL);
    let offsets: Vec<f64> = (start..start + STENCIL)
        .map(|t| t as f64 - i as f64)
        .collect();
    let w = fd_weights(&offsets, 1);
    (start..start + STENCIL)
        .zip(w)
        .map(|(t, w)| w * v(t))
        .sum::<f64>()
        / h
}

/// Weights `w` with `∫_0^1 p = Σ w_j p(nodes_j)` for polynomials `p` of
/// degree below `nodes.len()`.
pub fn interval_weights(nodes: &[f64]) -> Vec<f64> {
    // Integrate each Lagrange basis polynomial exactly via its monomial
    // coefficients.
    let n = nodes.len();
    (0..n)
        .map(|j| {
            let mut poly = vec![1.0];
            let mut denom = 1.0;
            for (m, &xm) in nodes.iter().enumerate() {
                if m == j {
                    continue;
                }
                denom *= nodes[j] - xm;
                let mut next = vec![0.0; poly.len() + 1];
                for (d, &a) in poly.iter().enumerate() {
                    next[d + 1] += a;
                    next[d] -= a * xm;
                }
                poly = next;
            }
            poly.iter()
                .enumerate()
                .map(|(d, a)| a / (d as f64 + 1.0))
                .sum::<f64>()
                / denom
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_weights() {
        let w = fd_weights(&[-1.0, 0.0, 1.0], 1);
        assert!((w[0] + 0.5).abs() < 1e-15 && w[1].abs() < 1e-15 && (w[2] - 0.5).abs() < 1e-15);
        let w = fd_weights(&[-1.0, 0.0, 1.0], 2);
        assert!((w[0] - 1.0).abs() < 1e-15 && (w[1] + 2.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_is_sixth_order_everywhere() {
        let n = 21;
        for (h, tol) in [(0.05, 1e-8), (0.025, 2e-10)] {
            for i in 0..n {
                let d = grid_derivative(|t| (t as f64 * h).sin(), i, n, h);
                assert!((d - (i as f64 * h).cos()).abs() < tol, "i={i} h={h}");
            }
        }
    }

    #[test]
    fn interval_rule_is_exact_for_cubics() {
        let w = interval_weights(&[-1.0, 0.0, 1.0, 2.0]);
        let expect = [-1.0 / 24.0, 13.0 / 24.0, 13.0 / 24.0, -1.0 / 24.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
