//! Gauss-Legendre quadrature. Nodes are roots of the Legendre polynomial,
//! found by Newton iteration on the three-term recurrence; all nodes are
//! interior, which matters here because curvature integrands are delicate
//! 0/0 limits at bolts and nuts.

/// `P_n(x)` and `P_n'(x)` by the recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0_f64;
    let mut p = x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "quadrature order must be at least 2");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Integrate `f` over `(a, b)` at the given order.
pub fn integrate<E>(
    a: f64,
    b: f64,
    order: usize,
    mut f: impl FnMut(f64) -> Result<f64, E>,
) -> Result<f64, E> {
    let (nodes, weights) = gauss_legendre(order);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        acc += w * f(mid + half * x)?;
    }
    Ok(acc * half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn exact(order: usize, f: impl FnMut(f64) -> Result<f64, Infallible>, expect: f64, tol: f64) {
        let got = integrate(-1.0, 1.0, order, f).unwrap();
        assert!((got - expect).abs() < tol, "got {got}, expected {expect}");
    }

    #[test]
    fn polynomial_exactness() {
        // order n integrates degree 2n-1 exactly
        exact(5, |x| Ok(x.powi(8)), 2.0 / 9.0, 1e-15);
        exact(5, |x| Ok(x.powi(9)), 0.0, 1e-15);
        exact(2, |x| Ok(x.powi(3) + x.powi(2)), 2.0 / 3.0, 1e-15);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in [2, 7, 64, 129, 256] {
            let (nodes, weights) = gauss_legendre(n);
            let total: f64 = weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-12, "order {n}: {total}");
            assert!(nodes.windows(2).all(|w| w[0] < w[1]));
            assert!(nodes[0] > -1.0 && nodes[n - 1] < 1.0);
        }
    }

    #[test]
    fn smooth_integral_converges() {
        let got = integrate(0.0, std::f64::consts::PI, 16, |x| {
            Ok::<_, Infallible>(x.sin())
        })
        .unwrap();
        assert!((got - 2.0).abs() < 1e-14);
    }
}
