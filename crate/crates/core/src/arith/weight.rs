use super::factor::factorize;

/// The multiplicative weight `w_k(q)`: on `p^(uk+v)` with `1 <= v <= k` it is
/// `k p^(-u-1/2)` when `v = 1` and `p^(-u-1)` otherwise.
pub fn weight_w(k: u32, q: u64) -> f64 {
    assert!(k >= 2 && q >= 1);
    factorize(q)
        .factors()
        .iter()
        .map(|&(p, e)| {
            let u = (e - 1) / k;
            let v = e - u * k;
            let p = p as f64;
            if v == 1 {
                k as f64 * p.powf(-(u as f64) - 0.5)
            } else {
                p.powi(-(u as i32) - 1)
            }
        })
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Finds `(u, v)` with `e = u k + v`, `1 <= v <= k` by enumeration.
    fn decompose(e: u32, k: u32) -> (u32, u32) {
        (0..=e)
            .flat_map(|u| (1..=k).map(move |v| (u, v)))
            .find(|&(u, v)| u * k + v == e)
            .unwrap()
    }

    #[test]
    fn spot_values() {
        assert_eq!(weight_w(2, 1), 1.0);
        assert!((weight_w(2, 2) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(decompose(4, 4), (0, 4));
        assert!((weight_w(4, 16) - 0.5).abs() < 1e-15);
        assert!((weight_w(4, 32) - 4.0 * 2f64.powf(-1.5)).abs() < 1e-15);
    }

    #[test]
    fn lower_bound_and_multiplicativity() {
        for k in [2, 4] {
            for q in 1..3000u64 {
                assert!(weight_w(k, q) >= (q as f64).powf(-0.5) * (1.0 - 1e-12), "k={k} q={q}");
            }
            assert!((weight_w(k, 12 * 35) - weight_w(k, 12) * weight_w(k, 35)).abs() < 1e-15);
        }
    }
}
