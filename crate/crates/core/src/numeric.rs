//! Floating point helpers shared by the evaluation code.

/// `x^e` for `x >= 0` computed as `exp(e ln x)`, with `0^e := 0` for `e > 0`.
#[inline]
pub fn pow0(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        (e * x.ln()).exp()
    }
}

/// Terms beyond this count are summed with Kahan compensation.
pub const COMPENSATION_THRESHOLD: usize = 32;

/// Sums `terms`, switching to compensated summation for long inputs.
pub fn sum(terms: impl ExactSizeIterator<Item = f64>) -> f64 {
    if terms.len() > COMPENSATION_THRESHOLD {
        kahan_sum(terms)
    } else {
        terms.fold(0.0, |acc, x| acc + x)
    }
}

pub fn kahan_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut total = 0.0;
    let mut carry = 0.0;
    for x in terms {
        let y = x - carry;
        let t = total + y;
        carry = (t - total) - y;
        total = t;
    }
    total
}
