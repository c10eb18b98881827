//! Pool-adjacent-violators isotonic regression.

/// Least-squares nondecreasing fit with equal weights.
pub fn isotonic_nondecreasing(ys: &[f64]) -> Vec<f64> {
    // blocks of (mean, count), merged whenever a new value violates order
    let mut means: Vec<f64> = Vec::with_capacity(ys.len());
    let mut counts: Vec<usize> = Vec::with_capacity(ys.len());
    for &y in ys {
        means.push(y);
        counts.push(1);
        while means.len() > 1 && means[means.len() - 2] > means[means.len() - 1] {
            let (m2, c2) = (means.pop().unwrap(), counts.pop().unwrap());
            let k = means.len() - 1;
            let c1 = counts[k];
            means[k] = (means[k] * c1 as f64 + m2 * c2 as f64) / (c1 + c2) as f64;
            counts[k] = c1 + c2;
        }
    }
    let mut out = Vec::with_capacity(ys.len());
    for (m, c) in means.iter().zip(&counts) {
        out.extend(std::iter::repeat_n(*m, *c));
    }
    out
}
