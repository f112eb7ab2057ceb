//! Gauss–Legendre rules.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// found by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite rule: `panels` equal panels of an `order`-point rule on `[a, b]`.
pub fn composite<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for j in 0..panels {
        let mid = a + (j as f64 + 0.5) * h;
        let mut part = 0.0;
        for (xi, wi) in x.iter().zip(&w) {
            part += wi * f(mid + 0.5 * h * xi);
        }
        total += 0.5 * h * part;
    }
    total
}

/// [`composite`] for a complex integrand, with nodes and weights supplied so
/// repeated calls can share one rule.
pub fn composite_complex<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    rule: &(Vec<f64>, Vec<f64>),
) -> Complex64 {
    let (x, w) = rule;
    let h = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..panels {
        let mid = a + (j as f64 + 0.5) * h;
        let mut part = Complex64::new(0.0, 0.0);
        for (xi, wi) in x.iter().zip(w) {
            part += f(mid + 0.5 * h * xi) * *wi;
        }
        total += part * (0.5 * h);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in 1..=10 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for deg in 0..2 * n {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - want).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn composite_exp() {
        let v = composite(f64::exp, 0.0, 1.0, 10, 5);
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-14);
    }
}
