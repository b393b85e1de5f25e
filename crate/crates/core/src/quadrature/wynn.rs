/// Wynn's epsilon algorithm applied to a sequence of partial sums.
///
/// Returns the extrapolated limit and an error estimate taken from the
/// difference of the last two entries of the best even column.
pub fn wynn_epsilon(sums: &[f64]) -> (f64, f64) {
    let n = sums.len();
    match n {
        0 => return (0.0, f64::INFINITY),
        1 => return (sums[0], f64::INFINITY),
        2 => return (sums[1], (sums[1] - sums[0]).abs()),
        _ => {}
    }
    let mut best = (sums[n - 1], (sums[n - 1] - sums[n - 2]).abs());
    let mut prev: Vec<f64> = vec![0.0; n + 1];
    let mut cur: Vec<f64> = sums.to_vec();
    for k in 1..n {
        let len = n - k;
        let mut next = Vec::with_capacity(len);
        for i in 0..len {
            let d = cur[i + 1] - cur[i];
            if d == 0.0 || !d.is_finite() {
                // Exact stall: the sequence has converged to working precision.
                if k % 2 == 1 && i + 1 == len {
                    return (cur[i + 1], f64::EPSILON * cur[i + 1].abs());
                }
                return best;
            }
            next.push(prev[i + 1] + 1.0 / d);
        }
        if k % 2 == 0 && len >= 2 {
            let e = (next[len - 1] - next[len - 2]).abs();
            if e < best.1 && next[len - 1].is_finite() {
                best = (next[len - 1], e);
            }
        }
        prev = cur;
        cur = next;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accelerates_alternating_series() {
        let mut s = 0.0;
        let sums: Vec<f64> = (0..20)
            .map(|k| {
                s += if k % 2 == 0 { 1.0 } else { -1.0 } / (k as f64 + 1.0);
                s
            })
            .collect();
        let (v, e) = wynn_epsilon(&sums);
        assert!((v - std::f64::consts::LN_2).abs() < 1e-12, "{v} {e}");
    }
}
