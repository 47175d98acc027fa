//! Deterministic numeric kernels used everywhere else.
//!
//! Every aggregation in the library funnels through [`pairwise_sum`] so that
//! results are reproducible bit for bit across runs and platforms with IEEE
//! doubles. Reductions never depend on iteration order of hash maps or on
//! threading; inputs are plain slices in canonical layout.

/// Pairwise (cascade) summation over a slice in its given order.
///
/// Splits recursively at the midpoint down to blocks of at most eight
/// elements, which are summed left to right. Deterministic for a fixed input
/// slice, and far more accurate than a naive left fold on long inputs.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Index of the largest value, breaking ties toward the lowest index.
///
/// Inputs are finite by construction elsewhere in the crate; a NaN would
/// compare false on `>` and therefore never displace the running maximum.
pub fn argmax_lowest(xs: &[f64]) -> usize {
    debug_assert!(!xs.is_empty());
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

/// Index of the smallest value, breaking ties toward the lowest index.
pub fn argmin_lowest(xs: &[f64]) -> usize {
    debug_assert!(!xs.is_empty());
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x < xs[best] {
            best = i;
        }
    }
    best
}

/// Maximum entry of a non-empty slice.
pub fn max_entry(xs: &[f64]) -> f64 {
    xs[argmax_lowest(xs)]
}

/// Euclidean projection of `x` onto the probability simplex, in place.
///
/// Sort-based algorithm: sort a copy in descending order, find the largest
/// `rho` with `sorted[rho] + (1 - prefix_sum(rho + 1)) / (rho + 1) > 0`, set
/// the shift `theta` from that prefix, then clamp `x_i - theta` at zero.
/// Deterministic: ties in the sort cannot change `theta` or the output.
pub fn project_to_simplex(x: &mut [f64]) {
    let n = x.len();
    debug_assert!(n > 0);
    let mut sorted = x.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut prefix = 0.0;
    let mut theta = 0.0;
    for (k, &v) in sorted.iter().enumerate() {
        prefix += v;
        let candidate = (prefix - 1.0) / (k + 1) as f64;
        if v - candidate > 0.0 {
            theta = candidate;
        }
    }
    for xi in x.iter_mut() {
        *xi = (*xi - theta).max(0.0);
    }
}

/// Squared Euclidean norm.
pub fn norm_sq(xs: &[f64]) -> f64 {
    let sq: Vec<f64> = xs.iter().map(|&x| x * x).collect();
    pairwise_sum(&sq)
}

/// Maximum absolute entry (0 for an empty slice).
pub fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0_f64, |m, &x| m.max(x.abs()))
}

/// Numerically safe softmax of `(v - max v) / tau`, normalized to sum to one.
///
/// At `tau -> 0` this approaches the argmax vertex; exact ties keep exactly
/// equal weights at every temperature, which is what the smoothed solvers
/// rely on at indifference points.
pub fn softmax_shifted(vals: &[f64], tau: f64, out: &mut Vec<f64>) {
    debug_assert!(tau > 0.0);
    let vmax = max_entry(vals);
    out.clear();
    out.extend(vals.iter().map(|&v| ((v - vmax) / tau).exp()));
    let total = pairwise_sum(out);
    for w in out.iter_mut() {
        *w /= total;
    }
}
