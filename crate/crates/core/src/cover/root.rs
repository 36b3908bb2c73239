//! Bracketing bisection for critical exponents.
//!
//! The cover value `M(alpha)` of a feasible problem is continuous and
//! strictly decreasing with `M -> inf` as `alpha -> -inf` and `M -> 0` as
//! `alpha -> +inf`, so `M(alpha) = 1` has a unique root. The bisection
//! sequence is a pure function of the initial bracket and the signs of
//! `M - 1` at visited midpoints, which makes results reproducible
//! bit-for-bit across runs and worker counts.

use crate::error::CoverError;

pub const MAX_BRACKET_DOUBLINGS: usize = 60;

/// Root of `value(alpha) = 1` to within `tol`, starting from the bracket
/// `[-halfwidth, +halfwidth]` and expanding geometrically when the sign
/// change lies outside.
pub fn bisect_critical<F: FnMut(f64) -> f64>(
    mut value: F,
    halfwidth: f64,
    tol: f64,
) -> Result<f64, CoverError> {
    let mut lo = -halfwidth.max(1.0);
    let mut hi = halfwidth.max(1.0);
    let mut doublings = 0;
    while value(lo) <= 1.0 {
        let w = hi - lo;
        lo -= w;
        doublings += 1;
        if doublings > MAX_BRACKET_DOUBLINGS {
            return Err(CoverError::BracketFailure { doublings });
        }
    }
    while value(hi) > 1.0 {
        let w = hi - lo;
        hi += w;
        doublings += 1;
        if doublings > MAX_BRACKET_DOUBLINGS {
            return Err(CoverError::BracketFailure { doublings });
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // float resolution exhausted
        }
        if value(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_simple_root() {
        // M(alpha) = e^{-3(alpha - 2)} crosses 1 at alpha = 2
        let root = bisect_critical(|a| (-3.0 * (a - 2.0)).exp(), 1.0, 1e-9).unwrap();
        assert!((root - 2.0).abs() < 1e-9);
    }

    #[test]
    fn expands_bracket_when_needed() {
        let root = bisect_critical(|a| (-(a - 40.0)).exp(), 1.0, 1e-8).unwrap();
        assert!((root - 40.0).abs() < 1e-8);
        let root = bisect_critical(|a| (-(a + 35.0)).exp(), 1.0, 1e-8).unwrap();
        assert!((root + 35.0).abs() < 1e-8);
    }

    #[test]
    fn degenerate_value_fails_bracket() {
        let err = bisect_critical(|_| 0.5, 1.0, 1e-6);
        assert!(matches!(err, Err(CoverError::BracketFailure { .. })));
    }

    #[test]
    fn bisection_is_monotone_in_the_value_function() {
        // pointwise smaller value functions yield roots that are never larger
        let small = bisect_critical(|a| (-2.0 * a).exp(), 2.0, 1e-10).unwrap();
        let large = bisect_critical(|a| 3.0 * (-2.0 * a).exp(), 2.0, 1e-10).unwrap();
        assert!(small <= large);
    }
}
