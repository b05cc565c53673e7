//! Reference transforms H and the beta-expectation identities behind the
//! one-sample dominance conditions.
//!
//! Each [`ReferenceTransform`] is a CDF `H` whose quantile `H⁻¹` defines a
//! convexity class: F belongs to the class when `H⁻¹ ∘ F` is convex. For
//! `B ~ beta(i, n−i+1)` the expectation `E[H⁻¹(B)]` has a closed form for
//! each of the four transforms; comparing two such expectations is the
//! rank condition of the corresponding class.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{beta_pdf_unchecked, harmonic_tail, psi};

/// The four reference distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceTransform {
    /// H(x) = x on [0, 1].
    Uniform,
    /// Standard logistic; H⁻¹ is the log-odds.
    Logit,
    /// Unit exponential; H⁻¹ is the cumulative hazard −ln(1−p).
    Exponential,
    /// H(x) = x/(1+x); H⁻¹ is the odds p/(1−p).
    Odds,
}

impl ReferenceTransform {
    pub const ALL: [ReferenceTransform; 4] = [
        ReferenceTransform::Uniform,
        ReferenceTransform::Logit,
        ReferenceTransform::Exponential,
        ReferenceTransform::Odds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::Logit => "logit",
            Self::Exponential => "exponential",
            Self::Odds => "odds",
        }
    }

    /// H(x).
    pub fn cdf(self, x: f64) -> f64 {
        match self {
            Self::Uniform => x.clamp(0.0, 1.0),
            Self::Logit => 1.0 / (1.0 + (-x).exp()),
            Self::Exponential => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-x).exp_m1()
                }
            }
            Self::Odds => {
                if x <= 0.0 {
                    0.0
                } else if x.is_infinite() {
                    1.0
                } else {
                    x / (1.0 + x)
                }
            }
        }
    }

    /// H⁻¹(p). Returns ±∞ at the ends of (0, 1) where the support is
    /// unbounded.
    pub fn quantile(self, p: f64) -> f64 {
        match self {
            Self::Uniform => p,
            Self::Logit => (p / (1.0 - p)).ln(),
            Self::Exponential => -(-p).ln_1p(),
            Self::Odds => p / (1.0 - p),
        }
    }

    /// Whether H⁻¹(0) = H(0) = 0, the anchoring the convexity test needs.
    pub fn anchored_at_zero(self) -> bool {
        !matches!(self, Self::Logit)
    }

    /// Whether H⁻¹ is convex (true for the exponential and odds transforms).
    pub fn quantile_is_convex(self) -> bool {
        matches!(self, Self::Exponential | Self::Odds)
    }
}

/// Identifies the order statistic X_{i:n}, the lifetime of an
/// (n−i+1)-out-of-n system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct OrderStatSpec {
    rank: u32,
    size: u32,
}

#[derive(Deserialize)]
struct RawSpec {
    rank: u32,
    size: u32,
}

impl TryFrom<RawSpec> for OrderStatSpec {
    type Error = Error;
    fn try_from(raw: RawSpec) -> Result<Self> {
        Self::new(raw.rank, raw.size)
    }
}

impl OrderStatSpec {
    pub fn new(rank: u32, size: u32) -> Result<Self> {
        if rank < 1 || rank > size {
            return Err(Error::InvalidArgument(format!(
                "order statistic requires 1 <= i <= n, got i={rank}, n={size}"
            )));
        }
        Ok(Self { rank, size })
    }

    /// The sample maximum X_{k:k}.
    pub fn maximum(k: u32) -> Result<Self> {
        Self::new(k, k)
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Shape parameters (i, n−i+1) of the beta law of F(X_{i:n}).
    pub fn beta_params(&self) -> (f64, f64) {
        (self.rank as f64, (self.size - self.rank + 1) as f64)
    }
}

impl std::fmt::Display for OrderStatSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "X({}:{})", self.rank, self.size)
    }
}

/// E[H⁻¹(B)] for B ~ beta(i, n−i+1).
///
/// The odds transform at i = n returns `f64::INFINITY`; downstream
/// comparisons treat an infinite left-hand side as satisfied.
pub fn expected_transformed_beta(t: ReferenceTransform, s: OrderStatSpec) -> f64 {
    let i = s.rank as u64;
    let n = s.size as u64;
    match t {
        ReferenceTransform::Uniform => i as f64 / (n + 1) as f64,
        ReferenceTransform::Logit => psi(i as f64) - psi((n - i + 1) as f64),
        ReferenceTransform::Exponential => {
            harmonic_tail(n - i + 1, n).expect("1 <= n-i+1 <= n by construction")
        }
        ReferenceTransform::Odds => {
            if i == n {
                f64::INFINITY
            } else {
                i as f64 / (n - i) as f64
            }
        }
    }
}

/// Sign-change structure of two beta densities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaCrossingReport {
    /// a1 >= a2 and b1 <= b2: the density ratio f1/f2 is increasing.
    pub ratio_monotone_increasing: bool,
    /// a1 >= a2: f1 − f2 changes sign at most twice, starting with −.
    pub density_sign_changes_le_2_starting_minus: bool,
    /// Signs of f1 − f2 observed on the grid, zeros dropped and runs merged.
    pub grid_sign_pattern: Vec<i8>,
    /// Whether the grid scan contradicts either analytic flag.
    pub grid_disagrees: bool,
}

/// Classifies the crossings of beta(a1, b1) and beta(a2, b2) densities
/// from the parameter conditions, cross-checked on a 10⁴-point grid.
pub fn beta_ratio_crossings(a1: f64, b1: f64, a2: f64, b2: f64) -> Result<BetaCrossingReport> {
    for (name, v) in [("a1", a1), ("b1", b1), ("a2", a2), ("b2", b2)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "beta parameter {name} must be positive, got {v}"
            )));
        }
    }
    let ratio_monotone_increasing = a1 >= a2 && b1 <= b2;
    let density_flag = a1 >= a2;

    const GRID: usize = 10_000;
    let mut pattern: Vec<i8> = Vec::new();
    let mut prev_log_ratio = f64::NEG_INFINITY;
    let mut ratio_decreased = false;
    for k in 1..GRID {
        let x = k as f64 / GRID as f64;
        let f1 = beta_pdf_unchecked(x, a1, b1);
        let f2 = beta_pdf_unchecked(x, a2, b2);
        let diff = f1 - f2;
        let scale = f1.abs().max(f2.abs()).max(1e-300);
        if diff.abs() > 1e-12 * scale {
            let s = if diff > 0.0 { 1 } else { -1 };
            if pattern.last() != Some(&s) {
                pattern.push(s);
            }
        }
        let log_ratio = f1.ln() - f2.ln();
        if log_ratio < prev_log_ratio - 1e-10 * prev_log_ratio.abs().max(1.0) {
            ratio_decreased = true;
        }
        prev_log_ratio = log_ratio;
    }
    let changes = pattern.len().saturating_sub(1);
    let starts_minus = pattern.first().is_none_or(|&s| s < 0);
    let grid_disagrees = (ratio_monotone_increasing && ratio_decreased)
        || (density_flag && (changes > 2 || !starts_minus));
    Ok(BetaCrossingReport {
        ratio_monotone_increasing,
        density_sign_changes_le_2_starting_minus: density_flag,
        grid_sign_pattern: pattern,
        grid_disagrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec(i: u32, n: u32) -> OrderStatSpec {
        OrderStatSpec::new(i, n).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(OrderStatSpec::new(0, 3).is_err());
        assert!(OrderStatSpec::new(4, 3).is_err());
        assert_eq!(spec(2, 5).beta_params(), (2.0, 4.0));
    }

    #[test]
    fn closed_forms() {
        use ReferenceTransform::*;
        assert_abs_diff_eq!(expected_transformed_beta(Uniform, spec(1, 1)), 0.5);
        assert_abs_diff_eq!(
            expected_transformed_beta(Exponential, spec(3, 3)),
            11.0 / 6.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(expected_transformed_beta(Odds, spec(43, 44)), 43.0);
        assert_eq!(expected_transformed_beta(Odds, spec(5, 5)), f64::INFINITY);
        // symmetric ranks have zero mean log-odds
        assert_abs_diff_eq!(
            expected_transformed_beta(Logit, spec(4, 7)),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn transform_round_trips() {
        for t in ReferenceTransform::ALL {
            for &x in &[0.01, 0.3, 0.9] {
                let x = if t == ReferenceTransform::Logit {
                    x * 10.0 - 3.0
                } else {
                    x
                };
                assert_abs_diff_eq!(t.quantile(t.cdf(x)), x, epsilon = 1e-9);
            }
        }
        assert!(!ReferenceTransform::Logit.anchored_at_zero());
        assert_eq!(ReferenceTransform::Odds.quantile(0.0), 0.0);
    }

    #[test]
    fn expectation_increasing_in_rank() {
        for t in ReferenceTransform::ALL {
            for n in 1..=60 {
                for i in 1..n {
                    let lo = expected_transformed_beta(t, spec(i, n));
                    let hi = expected_transformed_beta(t, spec(i + 1, n));
                    assert!(hi > lo, "{t:?} i={i} n={n}");
                }
            }
        }
    }

    #[test]
    fn beta_crossings_examples() {
        let r = beta_ratio_crossings(3.0, 2.0, 2.0, 3.0).unwrap();
        assert!(r.ratio_monotone_increasing && r.density_sign_changes_le_2_starting_minus);
        assert!(!r.grid_disagrees);

        let r = beta_ratio_crossings(2.0, 2.0, 2.0, 2.0).unwrap();
        assert!(r.ratio_monotone_increasing && r.density_sign_changes_le_2_starting_minus);
        assert!(r.grid_sign_pattern.is_empty());

        let r = beta_ratio_crossings(5.0, 4.0, 2.0, 6.0).unwrap();
        assert!(
            r.grid_sign_pattern == vec![-1, 1] || r.grid_sign_pattern == vec![-1, 1, -1],
            "{:?}",
            r.grid_sign_pattern
        );
        assert!(!r.grid_disagrees);

        // a1 >= a2 with b1 > b2: ratio not monotone, but still <= 2 changes.
        let r = beta_ratio_crossings(4.0, 9.0, 2.0, 2.0).unwrap();
        assert!(!r.ratio_monotone_increasing);
        assert_eq!(r.grid_sign_pattern, vec![-1, 1, -1]);
        assert!(!r.grid_disagrees);

        assert!(beta_ratio_crossings(0.0, 1.0, 1.0, 1.0).is_err());
    }
}
