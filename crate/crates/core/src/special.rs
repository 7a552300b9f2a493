//! Riccati-Bessel functions and Legendre polynomials for partial-wave work.
//!
//! `riccati_s(l, x) = x·j_l(x)` (regular) and `riccati_c(l, x) = -x·y_l(x)`
//! (singular), with derivatives. The regular family is generated by downward
//! Miller recurrence (upward is unstable for l > x), the singular one upward.

/// Regular Riccati-Bessel functions `Ŝ_l(x)` and derivatives for `l = 0..=l_max`.
pub fn riccati_s_all(l_max: usize, x: f64) -> Vec<(f64, f64)> {
    assert!(x > 0.0, "riccati_s_all needs x > 0");
    let j = spherical_j_all(l_max, x);
    let mut out = Vec::with_capacity(l_max + 1);
    for l in 0..=l_max {
        let s = x * j[l];
        // (x j_l)' = x j_{l-1} - l j_l, with j_{-1}(x) = cos x / x.
        let j_prev = if l == 0 { x.cos() / x } else { j[l - 1] };
        let sp = x * j_prev - l as f64 * j[l];
        out.push((s, sp));
    }
    out
}

/// Singular Riccati-Bessel functions `Ĉ_l(x) = -x·y_l(x)` and derivatives.
pub fn riccati_c_all(l_max: usize, x: f64) -> Vec<(f64, f64)> {
    assert!(x > 0.0, "riccati_c_all needs x > 0");
    let y = spherical_y_all(l_max, x);
    let mut out = Vec::with_capacity(l_max + 1);
    for l in 0..=l_max {
        let c = -x * y[l];
        // y_{-1}(x) = sin x / x.
        let y_prev = if l == 0 { x.sin() / x } else { y[l - 1] };
        let cp = -(x * y_prev - l as f64 * y[l]);
        out.push((c, cp));
    }
    out
}

/// Spherical Bessel `j_l(x)` for `l = 0..=l_max` by downward Miller
/// recurrence normalized against `j_0`.
pub fn spherical_j_all(l_max: usize, x: f64) -> Vec<f64> {
    let j0 = if x.abs() < 1e-4 {
        1.0 - x * x / 6.0 + x.powi(4) / 120.0
    } else {
        x.sin() / x
    };
    if l_max == 0 {
        return vec![j0];
    }
    // Start the downward recurrence well above both l_max and x.
    let start = l_max + 16 + (1.5 * x) as usize;
    let mut next = 0.0f64;
    let mut curr = 1e-280f64;
    let mut vals = vec![0.0f64; l_max + 1];
    for l in (0..=start).rev() {
        let prev = (2.0 * l as f64 + 3.0) / x * curr - next;
        if l <= l_max {
            vals[l] = prev;
        }
        next = curr;
        curr = prev;
        if curr.abs() > 1e250 {
            // Rescale to dodge overflow; only ratios matter until the end.
            let s = 1.0 / curr.abs();
            next *= s;
            curr *= s;
            for v in vals.iter_mut() {
                *v *= s;
            }
        }
    }
    let scale = j0 / vals[0];
    for v in vals.iter_mut() {
        *v *= scale;
    }
    vals
}

/// Spherical Bessel `y_l(x)` by upward recurrence (stable for the singular
/// family).
pub fn spherical_y_all(l_max: usize, x: f64) -> Vec<f64> {
    let mut vals = Vec::with_capacity(l_max + 1);
    let y0 = -x.cos() / x;
    vals.push(y0);
    if l_max == 0 {
        return vals;
    }
    let y1 = -x.cos() / (x * x) - x.sin() / x;
    vals.push(y1);
    for l in 1..l_max {
        let next = (2.0 * l as f64 + 1.0) / x * vals[l] - vals[l - 1];
        vals.push(next);
    }
    vals
}

/// Legendre polynomials `P_l(t)` for `l = 0..=l_max`.
pub fn legendre_all(l_max: usize, t: f64) -> Vec<f64> {
    let mut vals = Vec::with_capacity(l_max + 1);
    vals.push(1.0);
    if l_max == 0 {
        return vals;
    }
    vals.push(t);
    for l in 1..l_max {
        let lf = l as f64;
        let next = ((2.0 * lf + 1.0) * t * vals[l] - lf * vals[l - 1]) / (lf + 1.0);
        vals.push(next);
    }
    vals
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_riccati_match_trig_forms() {
        // Ŝ₀ = sin x, Ŝ₁ = sin x / x - cos x; Ĉ₀ = cos x, Ĉ₁ = cos x / x + sin x.
        for x in [0.3, 1.0, 2.7, 10.0] {
            let s = riccati_s_all(1, x);
            assert!((s[0].0 - x.sin()).abs() < 1e-13);
            assert!((s[0].1 - x.cos()).abs() < 1e-13);
            assert!((s[1].0 - (x.sin() / x - x.cos())).abs() < 1e-13);

            let c = riccati_c_all(1, x);
            assert!((c[0].0 - x.cos()).abs() < 1e-13);
            assert!((c[0].1 + x.sin()).abs() < 1e-13);
            assert!((c[1].0 - (x.cos() / x + x.sin())).abs() < 1e-13);
        }
    }

    #[test]
    fn wronskian_identity_all_orders() {
        // Ŝ_l Ĉ'_l - Ŝ'_l Ĉ_l = -1 for every l.
        for x in [0.5, 1.0, 4.0, 20.0] {
            let s = riccati_s_all(40, x);
            let c = riccati_c_all(40, x);
            for l in 0..=40 {
                let w = s[l].0 * c[l].1 - s[l].1 * c[l].0;
                assert!((w + 1.0).abs() < 1e-10, "l={l} x={x} W={w}");
            }
        }
    }

    #[test]
    fn small_argument_asymptotics() {
        // j_l(x) → x^l / (2l+1)!! for small x.
        let x = 0.01;
        let j = spherical_j_all(6, x);
        let mut double_fact = 1.0;
        for l in 0..=6usize {
            if l > 0 {
                double_fact *= 2.0 * l as f64 + 1.0;
            }
            let want = x.powi(l as i32) / double_fact;
            assert!(
                ((j[l] - want) / want).abs() < 1e-4,
                "l={l} got={} want={want}",
                j[l]
            );
        }
    }

    #[test]
    fn legendre_recurrence_matches_known_values() {
        let p = legendre_all(4, 0.5);
        assert!((p[0] - 1.0).abs() < 1e-15);
        assert!((p[1] - 0.5).abs() < 1e-15);
        assert!((p[2] + 0.125).abs() < 1e-15);
        // P₃(x) = (5x³-3x)/2, P₄(x) = (35x⁴-30x²+3)/8 at x = 0.5.
        assert!((p[3] + 0.4375).abs() < 1e-15);
        assert!((p[4] + 0.2890625).abs() < 1e-15);
        // P_l(1) = 1 for all l.
        for v in legendre_all(30, 1.0) {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }
}
