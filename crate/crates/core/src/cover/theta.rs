//! Exact rational handling of the interpolation parameter and the
//! admissible-length window `N <= n < N/theta + 1`.
//!
//! Window boundaries are decided in integer arithmetic
//! (`num * (n - 1) < den * N`), never in floating point, so a length is
//! either admissible or not with no boundary misclassification.

use std::fmt;
use std::str::FromStr;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A rational interpolation parameter in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Theta {
    num: u64,
    den: u64,
}

impl Theta {
    /// Reduced `num/den`; panics when the value lies outside `[0, 1]`.
    pub fn new(num: u64, den: u64) -> Theta {
        assert!(den > 0, "theta denominator must be positive");
        assert!(num <= den, "theta must lie in [0, 1]");
        if num == 0 {
            return Theta { num: 0, den: 1 };
        }
        let g = gcd(num, den);
        Theta { num: num / g, den: den / g }
    }

    pub fn zero() -> Theta {
        Theta { num: 0, den: 1 }
    }

    pub fn one() -> Theta {
        Theta { num: 1, den: 1 }
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Evenly spaced grid `0, 1/(k-1), .., 1` as exact rationals.
    pub fn grid(k: usize) -> Vec<Theta> {
        assert!(k >= 2);
        (0..k).map(|i| Theta::new(i as u64, (k - 1) as u64)).collect()
    }
}

impl PartialOrd for Theta {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Theta {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // cross-multiply in u128 to stay exact
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Theta {
    /// Exact decimal when the denominator divides a power of ten,
    /// otherwise `num/den`. Both forms parse back via [`FromStr`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            return write!(f, "{}", self.num);
        }
        let mut d = self.den;
        let mut tens = 0u32;
        while d % 2 == 0 {
            d /= 2;
            tens += 1;
        }
        let mut fives = 0u32;
        while d % 5 == 0 {
            d /= 5;
            fives += 1;
        }
        if d == 1 {
            let digits = tens.max(fives);
            let scale = 10u128.pow(digits);
            let scaled = self.num as u128 * scale / self.den as u128;
            let int = scaled / scale;
            let frac = scaled % scale;
            let frac_str = format!("{:0width$}", frac, width = digits as usize);
            let trimmed = frac_str.trim_end_matches('0');
            write!(f, "{int}.{trimmed}")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl serde::Serialize for Theta {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Theta {
    /// Accepts `"0.3"`, `"3/10"`, or a JSON number (converted through its
    /// shortest decimal representation, so `0.3` means exactly `3/10`).
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        let raw = Raw::deserialize(deserializer)?;
        let text = match raw {
            Raw::Text(s) => s,
            Raw::Number(v) => format!("{v}"),
        };
        text.parse().map_err(D::Error::custom)
    }
}

#[derive(Debug, thiserror::Error)]
#[error("invalid theta value {0:?}: expected a rational in [0, 1] like \"0.3\" or \"3/10\"")]
pub struct ParseThetaError(String);

impl FromStr for Theta {
    type Err = ParseThetaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseThetaError(s.to_string());
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let num: u64 = n.trim().parse().map_err(|_| bad())?;
            let den: u64 = d.trim().parse().map_err(|_| bad())?;
            if den == 0 || num > den {
                return Err(bad());
            }
            return Ok(Theta::new(num, den));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let scale = 10u64.pow(frac.len() as u32);
            let frac: u64 = frac.parse().map_err(|_| bad())?;
            let num = int.checked_mul(scale).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
            if num > scale {
                return Err(bad());
            }
            return Ok(Theta::new(num, scale));
        }
        let int: u64 = s.parse().map_err(|_| bad())?;
        if int > 1 {
            return Err(bad());
        }
        Ok(Theta::new(int, 1))
    }
}

/// The admissible candidate lengths at one scale: `{n : N <= n < N/theta + 1}`
/// for positive `theta`, and `{n : N <= n <= cap}` at `theta = 0`.
#[derive(Debug, Clone, Copy)]
pub struct ThetaWindow {
    pub scale: usize,
    pub theta: Theta,
    /// Finite stand-in for the unbounded window at `theta = 0`; ignored
    /// for positive `theta`.
    pub cap: usize,
}

impl ThetaWindow {
    pub fn new(scale: usize, theta: Theta, cap: usize) -> ThetaWindow {
        assert!(scale >= 1);
        ThetaWindow { scale, theta, cap }
    }

    /// Largest admissible length.
    pub fn max_length(&self) -> usize {
        if self.theta.is_zero() {
            return self.cap.max(self.scale);
        }
        // largest n with num*(n-1) < den*N
        let den_n = self.theta.denom() as u128 * self.scale as u128;
        let k = (den_n - 1) / self.theta.numer() as u128;
        (k + 1) as usize
    }

    pub fn lengths(&self) -> std::ops::RangeInclusive<usize> {
        self.scale..=self.max_length()
    }

    pub fn contains(&self, n: usize) -> bool {
        if n < self.scale {
            return false;
        }
        if self.theta.is_zero() {
            return n <= self.cap.max(self.scale);
        }
        // num*(n-1) < den*N, exactly
        (self.theta.numer() as u128 * (n as u128 - 1))
            < (self.theta.denom() as u128 * self.scale as u128)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_collapses_at_one() {
        let w = ThetaWindow::new(3, Theta::one(), 0);
        assert_eq!(w.lengths().collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn window_half() {
        // theta = 0.5, N = 4: 4 <= n < 9
        let w = ThetaWindow::new(4, Theta::new(1, 2), 0);
        assert_eq!(w.lengths().collect::<Vec<_>>(), (4..=8).collect::<Vec<_>>());
    }

    #[test]
    fn window_zero_capped() {
        let w = ThetaWindow::new(2, Theta::zero(), 10);
        assert_eq!(w.lengths().collect::<Vec<_>>(), (2..=10).collect::<Vec<_>>());
    }

    #[test]
    fn window_boundary_is_exact() {
        // theta = 3/10, N = 4: n < 40/3 + 1, so n <= 14
        let w = ThetaWindow::new(4, Theta::new(3, 10), 0);
        assert_eq!(w.max_length(), 14);
        assert!(w.contains(14));
        assert!(!w.contains(15));
        // theta = 1/10, N = 6: n < 61
        let w = ThetaWindow::new(6, Theta::new(1, 10), 0);
        assert_eq!(w.max_length(), 60);
    }

    #[test]
    fn theta_parse_and_display() {
        assert_eq!("0.3".parse::<Theta>().unwrap(), Theta::new(3, 10));
        assert_eq!("3/10".parse::<Theta>().unwrap(), Theta::new(3, 10));
        assert_eq!("1".parse::<Theta>().unwrap(), Theta::one());
        assert_eq!("0".parse::<Theta>().unwrap(), Theta::zero());
        assert_eq!("0.25".parse::<Theta>().unwrap(), Theta::new(1, 4));
        assert!("1.5".parse::<Theta>().is_err());
        assert!("2/1".parse::<Theta>().is_err());
        assert!("1/0".parse::<Theta>().is_err());

        assert_eq!(Theta::new(3, 10).to_string(), "0.3");
        assert_eq!(Theta::new(1, 4).to_string(), "0.25");
        assert_eq!(Theta::new(1, 3).to_string(), "1/3");
        assert_eq!(Theta::one().to_string(), "1");
        // round-trips
        for t in [Theta::new(1, 3), Theta::new(7, 20), Theta::zero(), Theta::one()] {
            assert_eq!(t.to_string().parse::<Theta>().unwrap(), t);
        }
    }

    #[test]
    fn grid_is_sorted_and_exact() {
        let g = Theta::grid(11);
        assert_eq!(g.len(), 11);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g[5], Theta::new(1, 2));
    }
}
