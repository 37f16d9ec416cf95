//! Divided differences of `ln` and the logarithmic mean.
//!
//! These are the kernels of the Daleckii–Krein formulas for Fréchet
//! derivatives of `ln` and `exp` in an eigenbasis. Near-coincident arguments
//! switch to series expansions about the mean so that tiny populations keep
//! their relative accuracy.

const FIRST_SERIES: f64 = 1e-2;
const SECOND_SERIES: f64 = 1e-3;

/// `(ln x - ln y) / (x - y)`, equal to `1/x` at `x == y`. Both arguments
/// must be positive.
pub fn log_first(x: f64, y: f64) -> f64 {
    debug_assert!(x > 0.0 && y > 0.0);
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if hi - lo <= FIRST_SERIES * hi {
        let c = 0.5 * (hi + lo);
        let u = (0.5 * (hi - lo) / c).powi(2);
        (1.0 + u * (1.0 / 3.0 + u * (1.0 / 5.0 + u / 7.0))) / c
    } else {
        ((hi - lo) / lo).ln_1p() / (hi - lo)
    }
}

/// Second divided difference of `ln`, `f[x, y, z]`, for positive arguments.
/// Symmetric; equals `-1/(2x²)` when all three coincide.
pub fn log_second(x: f64, y: f64, z: f64) -> f64 {
    debug_assert!(x > 0.0 && y > 0.0 && z > 0.0);
    let mut v = [x, y, z];
    v.sort_by(f64::total_cmp);
    let [lo, mid, hi] = v;
    if hi - lo <= SECOND_SERIES * hi {
        let c = (x + y + z) / 3.0;
        let d = [x - c, y - c, z - c];
        let p2: f64 = d.iter().map(|t| t * t).sum();
        let p3: f64 = d.iter().map(|t| t * t * t).sum();
        let p4: f64 = d.iter().map(|t| t.powi(4)).sum();
        let c2 = c * c;
        -(0.5 / c2 + p2 / (8.0 * c2 * c2) - p3 / (15.0 * c2 * c2 * c)
            + (p4 / 4.0 + p2 * p2 / 8.0) / (6.0 * c2 * c2 * c2))
    } else {
        (log_first(hi, mid) - log_first(lo, mid)) / (hi - lo)
    }
}

/// Logarithmic mean `(p - q) / (ln p - ln q)` with `L(p, p) = p` and
/// `L(p, 0) = 0`.
pub fn logarithmic_mean(p: f64, q: f64) -> f64 {
    if p <= 0.0 || q <= 0.0 {
        0.0
    } else {
        1.0 / log_first(p, q)
    }
}

/// Arithmetic minus logarithmic mean, `(p + q)/2 - L(p, q) >= 0`, without
/// cancellation for close arguments.
pub fn mean_gap(p: f64, q: f64) -> f64 {
    if p <= 0.0 || q <= 0.0 {
        return 0.5 * (p.max(0.0) + q.max(0.0));
    }
    let (hi, lo) = if p >= q { (p, q) } else { (q, p) };
    let c = 0.5 * (hi + lo);
    if hi - lo <= FIRST_SERIES * hi {
        let u = (0.5 * (hi - lo) / c).powi(2);
        let s_minus_1 = u * (1.0 / 3.0 + u * (1.0 / 5.0 + u / 7.0));
        c * s_minus_1 / (1.0 + s_minus_1)
    } else {
        (c - logarithmic_mean(hi, lo)).max(0.0)
    }
}
