/// `R_s(n)` by plain nested enumeration: every ordered `s`-tuple of fourth
/// powers, then every `x_1`, with `x_2` tested for being a perfect square.
/// Deliberately independent of the table builders.
pub fn brute_force_count(s: u32, n: u64) -> u64 {
    assert!(s == 3 || s == 4, "s must be 3 or 4");
    fn is_square(m: u64) -> Option<u64> {
        let r = (m as f64).sqrt().round() as u64;
        (r * r == m).then_some(r)
    }
    fn tuples(left: u32, rest: u64) -> u64 {
        if left == 0 {
            let mut total = 0;
            let mut x1 = 1u64;
            while x1 * x1 < rest {
                if let Some(x2) = is_square(rest - x1 * x1) {
                    if x2 >= 1 {
                        total += 1;
                    }
                }
                x1 += 1;
            }
            return total;
        }
        let mut total = 0;
        let mut y = 1u64;
        while y.pow(4) < rest {
            total += tuples(left - 1, rest - y.pow(4));
            y += 1;
        }
        total
    }
    tuples(s, n)
}
