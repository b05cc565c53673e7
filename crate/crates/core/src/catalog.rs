//! Parametric lifetime families with evaluators, inverse-transform
//! samplers, and convexity-class membership.
//!
//! A [`Distribution`] is a validated [`Family`]. Distributions are plain
//! values (`Copy`), so they can be shared across threads freely; sampling
//! always takes an explicit seed or RNG.

use std::fmt;
use std::str::FromStr;

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reference::ReferenceTransform;
use crate::special::{
    beta_cdf_unchecked, beta_pdf_unchecked, beta_quantile_unchecked, gamma_p_inverse,
    gamma_p_unchecked, gamma_q_inverse, ln_gamma, normal_cdf, normal_quantile_unchecked,
    EULER_GAMMA,
};

/// Parameterisations follow the usual reliability conventions: `a` is a
/// shape, `b` a scale (or upper/lower support bound for the uniform,
/// power-function and Pareto families), `mu`/`sigma` location and scale.
/// The exponential uses the rate `a`; the gamma uses scale `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Uniform {
        a: f64,
        b: f64,
    },
    #[serde(rename = "power")]
    PowerFunction {
        a: f64,
        b: f64,
    },
    Logistic {
        mu: f64,
        sigma: f64,
    },
    Gumbel {
        mu: f64,
        sigma: f64,
    },
    Exponential {
        a: f64,
    },
    Normal {
        mu: f64,
        sigma: f64,
    },
    Beta {
        a: f64,
        b: f64,
    },
    Gamma {
        a: f64,
        b: f64,
    },
    Weibull {
        a: f64,
        b: f64,
    },
    Cauchy {
        mu: f64,
        sigma: f64,
    },
    Lognormal {
        mu: f64,
        sigma: f64,
    },
    LogLogistic {
        a: f64,
        b: f64,
    },
    Pareto {
        a: f64,
        b: f64,
    },
    /// F(x) = (1 + (b/x)^a)^(−p).
    Dagum {
        a: f64,
        p: f64,
        b: f64,
    },
}

/// A family with validated parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Family", into = "Family")]
pub struct Distribution {
    family: Family,
}

impl From<Distribution> for Family {
    fn from(d: Distribution) -> Self {
        d.family
    }
}

impl TryFrom<Family> for Distribution {
    type Error = Error;

    fn try_from(family: Family) -> Result<Self> {
        use Family::*;
        let positive = |name: &str, v: f64| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "{}: parameter {name} must be positive and finite, got {v}",
                    family_name(&family)
                )))
            }
        };
        let finite = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "{}: parameter {name} must be finite, got {v}",
                    family_name(&family)
                )))
            }
        };
        match family {
            Uniform { a, b } => {
                finite("a", a)?;
                finite("b", b)?;
                if !(b > a) {
                    return Err(Error::InvalidArgument(format!(
                        "uniform: requires b > a, got a={a}, b={b}"
                    )));
                }
            }
            Logistic { mu, sigma }
            | Gumbel { mu, sigma }
            | Normal { mu, sigma }
            | Cauchy { mu, sigma }
            | Lognormal { mu, sigma } => {
                finite("mu", mu)?;
                positive("sigma", sigma)?;
            }
            Exponential { a } => positive("a", a)?,
            PowerFunction { a, b }
            | Beta { a, b }
            | Gamma { a, b }
            | Weibull { a, b }
            | LogLogistic { a, b }
            | Pareto { a, b } => {
                positive("a", a)?;
                positive("b", b)?;
            }
            Dagum { a, p, b } => {
                positive("a", a)?;
                positive("p", p)?;
                positive("b", b)?;
            }
        }
        Ok(Self { family })
    }
}

fn family_name(f: &Family) -> &'static str {
    match f {
        Family::Uniform { .. } => "uniform",
        Family::PowerFunction { .. } => "power",
        Family::Logistic { .. } => "logistic",
        Family::Gumbel { .. } => "gumbel",
        Family::Exponential { .. } => "exponential",
        Family::Normal { .. } => "normal",
        Family::Beta { .. } => "beta",
        Family::Gamma { .. } => "gamma",
        Family::Weibull { .. } => "weibull",
        Family::Cauchy { .. } => "cauchy",
        Family::Lognormal { .. } => "lognormal",
        Family::LogLogistic { .. } => "loglogistic",
        Family::Pareto { .. } => "pareto",
        Family::Dagum { .. } => "dagum",
    }
}

/// The four convexity classes, each defined by a reference transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvexityClass {
    /// Convex CDF.
    C,
    /// Convex log-odds.
    CL,
    /// Convex cumulative hazard (increasing failure rate).
    IFR,
    /// Convex odds.
    CO,
}

impl ConvexityClass {
    pub const ALL: [ConvexityClass; 4] = [Self::C, Self::CL, Self::IFR, Self::CO];

    pub fn transform(self) -> ReferenceTransform {
        match self {
            Self::C => ReferenceTransform::Uniform,
            Self::CL => ReferenceTransform::Logit,
            Self::IFR => ReferenceTransform::Exponential,
            Self::CO => ReferenceTransform::Odds,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::C => "c",
            Self::CL => "cl",
            Self::IFR => "ifr",
            Self::CO => "co",
        }
    }
}

impl FromStr for ConvexityClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "c" => Ok(Self::C),
            "cl" => Ok(Self::CL),
            "ifr" => Ok(Self::IFR),
            "co" => Ok(Self::CO),
            other => Err(Error::InvalidArgument(format!(
                "unknown convexity class `{other}` (expected c, cl, ifr or co)"
            ))),
        }
    }
}

impl fmt::Display for ConvexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How a membership answer was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "basis")]
pub enum MembershipBasis {
    /// Tabulated entry, with the parameter condition it depends on.
    Table { condition: Option<String> },
    /// Family not tabulated; decided by the grid convexity check.
    Numerical,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    #[serde(flatten)]
    pub basis: MembershipBasis,
}

impl Distribution {
    pub fn new(family: Family) -> Result<Self> {
        Self::try_from(family)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn name(&self) -> &'static str {
        family_name(&self.family)
    }

    /// Parameter names and values in canonical order.
    pub fn parameters(&self) -> Vec<(&'static str, f64)> {
        use Family::*;
        match self.family {
            Uniform { a, b }
            | PowerFunction { a, b }
            | Beta { a, b }
            | Gamma { a, b }
            | Weibull { a, b }
            | LogLogistic { a, b }
            | Pareto { a, b } => vec![("a", a), ("b", b)],
            Logistic { mu, sigma }
            | Gumbel { mu, sigma }
            | Normal { mu, sigma }
            | Cauchy { mu, sigma }
            | Lognormal { mu, sigma } => vec![("mu", mu), ("sigma", sigma)],
            Exponential { a } => vec![("a", a)],
            Dagum { a, p, b } => vec![("a", a), ("p", p), ("b", b)],
        }
    }

    /// Copy with one parameter replaced, revalidated.
    pub fn with_parameter(&self, name: &str, value: f64) -> Result<Self> {
        use Family::*;
        let mut family = self.family;
        let slot: Option<&mut f64> = match (&mut family, name) {
            (
                Uniform { a, .. }
                | PowerFunction { a, .. }
                | Beta { a, .. }
                | Gamma { a, .. }
                | Weibull { a, .. }
                | LogLogistic { a, .. }
                | Pareto { a, .. }
                | Exponential { a }
                | Dagum { a, .. },
                "a",
            ) => Some(a),
            (
                Uniform { b, .. }
                | PowerFunction { b, .. }
                | Beta { b, .. }
                | Gamma { b, .. }
                | Weibull { b, .. }
                | LogLogistic { b, .. }
                | Pareto { b, .. }
                | Dagum { b, .. },
                "b",
            ) => Some(b),
            (Dagum { p, .. }, "p") => Some(p),
            (
                Logistic { mu, .. }
                | Gumbel { mu, .. }
                | Normal { mu, .. }
                | Cauchy { mu, .. }
                | Lognormal { mu, .. },
                "mu",
            ) => Some(mu),
            (
                Logistic { sigma, .. }
                | Gumbel { sigma, .. }
                | Normal { sigma, .. }
                | Cauchy { sigma, .. }
                | Lognormal { sigma, .. },
                "sigma",
            ) => Some(sigma),
            _ => None,
        };
        match slot {
            Some(v) => *v = value,
            None => {
                return Err(Error::InvalidArgument(format!(
                    "{} has no parameter `{name}`",
                    self.name()
                )))
            }
        }
        Self::new(family)
    }

    /// Closed support interval (possibly infinite ends).
    pub fn support(&self) -> (f64, f64) {
        use Family::*;
        match self.family {
            Uniform { a, b } => (a, b),
            PowerFunction { b, .. } => (0.0, b),
            Beta { .. } => (0.0, 1.0),
            Logistic { .. } | Gumbel { .. } | Normal { .. } | Cauchy { .. } => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            Exponential { .. }
            | Gamma { .. }
            | Weibull { .. }
            | Lognormal { .. }
            | LogLogistic { .. }
            | Dagum { .. } => (0.0, f64::INFINITY),
            Pareto { b, .. } => (b, f64::INFINITY),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        use Family::*;
        if x.is_nan() {
            return f64::NAN;
        }
        let (lo, hi) = self.support();
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        match self.family {
            Uniform { a, b } => (x - a) / (b - a),
            PowerFunction { a, b } => (x / b).powf(a),
            Logistic { mu, sigma } => 1.0 / (1.0 + ((mu - x) / sigma).exp()),
            Gumbel { mu, sigma } => -(-((x - mu) / sigma).exp()).exp_m1(),
            Exponential { a } => -(-a * x).exp_m1(),
            Normal { mu, sigma } => normal_cdf((x - mu) / sigma),
            Beta { a, b } => beta_cdf_unchecked(x, a, b),
            Gamma { a, b } => gamma_p_unchecked(a, x / b),
            Weibull { a, b } => -(-(x / b).powf(a)).exp_m1(),
            Cauchy { mu, sigma } => {
                let z = (x - mu) / sigma;
                if z < 0.0 {
                    (-1.0 / z).atan() / std::f64::consts::PI
                } else {
                    0.5 + z.atan() / std::f64::consts::PI
                }
            }
            Lognormal { mu, sigma } => normal_cdf((x.ln() - mu) / sigma),
            LogLogistic { a, b } => 1.0 / (1.0 + (x / b).powf(-a)),
            Pareto { a, b } => -(a * (b / x).ln()).exp_m1(),
            Dagum { a, p, b } => (-p * ((b / x).powf(a)).ln_1p()).exp(),
        }
    }

    /// Survival function 1 − F(x), computed without cancellation where the
    /// family allows it.
    pub fn sf(&self, x: f64) -> f64 {
        use Family::*;
        let (lo, hi) = self.support();
        if x <= lo {
            return 1.0;
        }
        if x >= hi {
            return 0.0;
        }
        match self.family {
            Exponential { a } => (-a * x).exp(),
            Weibull { a, b } => (-(x / b).powf(a)).exp(),
            Gumbel { mu, sigma } => (-((x - mu) / sigma).exp()).exp(),
            Pareto { a, b } => (b / x).powf(a),
            LogLogistic { a, b } => 1.0 / (1.0 + (x / b).powf(a)),
            Logistic { mu, sigma } => 1.0 / (1.0 + ((x - mu) / sigma).exp()),
            Normal { mu, sigma } => normal_cdf((mu - x) / sigma),
            Lognormal { mu, sigma } => normal_cdf((mu - x.ln()) / sigma),
            Cauchy { mu, sigma } => {
                let z = (x - mu) / sigma;
                if z > 0.0 {
                    (1.0 / z).atan() / std::f64::consts::PI
                } else {
                    0.5 - z.atan() / std::f64::consts::PI
                }
            }
            Beta { a, b } => beta_cdf_unchecked(1.0 - x, b, a),
            Gamma { a, b } => crate::special::gamma_q_unchecked(a, x / b),
            Dagum { a, p, b } => -(-p * ((b / x).powf(a)).ln_1p()).exp_m1(),
            _ => 1.0 - self.cdf(x),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        use Family::*;
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return 0.0;
        }
        match self.family {
            Uniform { a, b } => 1.0 / (b - a),
            PowerFunction { a, b } => a / b * (x / b).powf(a - 1.0),
            Logistic { mu, sigma } => {
                let e = (-(x - mu).abs() / sigma).exp();
                e / (sigma * (1.0 + e) * (1.0 + e))
            }
            Gumbel { mu, sigma } => {
                let z = (x - mu) / sigma;
                (z - z.exp()).exp() / sigma
            }
            Exponential { a } => a * (-a * x).exp(),
            Normal { mu, sigma } => {
                let z = (x - mu) / sigma;
                (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
            }
            Beta { a, b } => beta_pdf_unchecked(x, a, b),
            Gamma { a, b } => {
                if x == 0.0 {
                    return crate::special::gamma_density_unit_scale(a, 0.0) / b;
                }
                ((a - 1.0) * (x / b).ln() - x / b - ln_gamma(a)).exp() / b
            }
            Weibull { a, b } => {
                let z = x / b;
                a / b * z.powf(a - 1.0) * (-z.powf(a)).exp()
            }
            Cauchy { mu, sigma } => {
                let z = (x - mu) / sigma;
                1.0 / (std::f64::consts::PI * sigma * (1.0 + z * z))
            }
            Lognormal { mu, sigma } => {
                if x == 0.0 {
                    return 0.0;
                }
                let z = (x.ln() - mu) / sigma;
                (-0.5 * z * z).exp() / (x * sigma * (2.0 * std::f64::consts::PI).sqrt())
            }
            LogLogistic { a, b } => {
                let z = (x / b).powf(a);
                a / x * z / ((1.0 + z) * (1.0 + z))
            }
            Pareto { a, b } => a * b.powf(a) / x.powf(a + 1.0),
            Dagum { a, p, b } => {
                let z = (b / x).powf(a);
                a * p / x * z * (-(p + 1.0) * z.ln_1p()).exp()
            }
        }
    }

    /// F⁻¹(p) for p in [0, 1].
    pub fn quantile(&self, p: f64) -> f64 {
        use Family::*;
        if p.is_nan() {
            return f64::NAN;
        }
        let (lo, hi) = self.support();
        if p <= 0.0 {
            return lo;
        }
        if p >= 1.0 {
            return hi;
        }
        match self.family {
            Uniform { a, b } => a + p * (b - a),
            PowerFunction { a, b } => b * p.powf(1.0 / a),
            Logistic { mu, sigma } => mu + sigma * (p / (1.0 - p)).ln(),
            Gumbel { mu, sigma } => mu + sigma * (-(-p).ln_1p()).ln(),
            Exponential { a } => -(-p).ln_1p() / a,
            Normal { mu, sigma } => mu + sigma * normal_quantile_unchecked(p),
            Beta { a, b } => beta_quantile_unchecked(p, a, b),
            Gamma { a, b } => b * gamma_p_inverse(a, p),
            Weibull { a, b } => b * (-(-p).ln_1p()).powf(1.0 / a),
            Cauchy { mu, sigma } => mu + sigma * (std::f64::consts::PI * (p - 0.5)).tan(),
            Lognormal { mu, sigma } => (mu + sigma * normal_quantile_unchecked(p)).exp(),
            LogLogistic { a, b } => b * (p / (1.0 - p)).powf(1.0 / a),
            Pareto { a, b } => b * (-(-p).ln_1p() / a).exp(),
            Dagum { a, p: shape, b } => {
                // (b/x)^a = p^(-1/shape) - 1
                let t = (-p.ln() / shape).exp_m1();
                b * t.powf(-1.0 / a)
            }
        }
    }

    /// Inverse survival function Q(1 − q), accurate for q near zero.
    pub fn isf(&self, q: f64) -> f64 {
        use Family::*;
        if q.is_nan() {
            return f64::NAN;
        }
        let (lo, hi) = self.support();
        if q <= 0.0 {
            return hi;
        }
        if q >= 1.0 {
            return lo;
        }
        match self.family {
            Logistic { mu, sigma } => mu + sigma * ((1.0 - q) / q).ln(),
            Gumbel { mu, sigma } => mu + sigma * (-q.ln()).ln(),
            Exponential { a } => -q.ln() / a,
            Normal { mu, sigma } => mu - sigma * normal_quantile_unchecked(q),
            Beta { a, b } => 1.0 - beta_quantile_unchecked(q, b, a),
            Gamma { a, b } => b * gamma_q_inverse(a, q),
            Weibull { a, b } => b * (-q.ln()).powf(1.0 / a),
            Cauchy { mu, sigma } => mu + sigma / (std::f64::consts::PI * q).tan(),
            Lognormal { mu, sigma } => (mu - sigma * normal_quantile_unchecked(q)).exp(),
            LogLogistic { a, b } => b * ((1.0 - q) / q).powf(1.0 / a),
            Pareto { a, b } => b * q.powf(-1.0 / a),
            Dagum { a, p, b } => {
                let t = (-(-q).ln_1p() / p).exp_m1();
                b * t.powf(-1.0 / a)
            }
            Uniform { .. } | PowerFunction { .. } => self.quantile(1.0 - q),
        }
    }

    /// Mean, or `None` when it does not exist.
    pub fn mean(&self) -> Option<f64> {
        use Family::*;
        let v = match self.family {
            Uniform { a, b } => 0.5 * (a + b),
            PowerFunction { a, b } => a * b / (a + 1.0),
            Logistic { mu, .. } | Normal { mu, .. } => mu,
            Gumbel { mu, sigma } => mu - EULER_GAMMA * sigma,
            Exponential { a } => 1.0 / a,
            Beta { a, b } => a / (a + b),
            Gamma { a, b } => a * b,
            Weibull { a, b } => b * ln_gamma(1.0 + 1.0 / a).exp(),
            Cauchy { .. } => return None,
            Lognormal { mu, sigma } => (mu + 0.5 * sigma * sigma).exp(),
            LogLogistic { a, b } => {
                if a <= 1.0 {
                    return None;
                }
                let t = std::f64::consts::PI / a;
                b * t / t.sin()
            }
            Pareto { a, b } => {
                if a <= 1.0 {
                    return None;
                }
                a * b / (a - 1.0)
            }
            Dagum { a, p, b } => {
                if a <= 1.0 {
                    return None;
                }
                b * (ln_gamma(p + 1.0 / a) + ln_gamma(1.0 - 1.0 / a) - ln_gamma(p)).exp()
            }
        };
        Some(v)
    }

    /// `(α, ln c)` with F(lo + t) ~ c·t^α as t → 0+, for families with a
    /// finite lower endpoint lo; α = ∞ marks a tail thinner than any power.
    pub(crate) fn lower_tail_law(&self) -> Option<(f64, f64)> {
        use Family::*;
        let law = match self.family {
            Uniform { a, b } => (1.0, -(b - a).ln()),
            PowerFunction { a, b } | Weibull { a, b } | LogLogistic { a, b } => (a, -a * b.ln()),
            Exponential { a } => (1.0, a.ln()),
            Beta { a, b } => (a, -a.ln() - crate::special::ln_beta(a, b)),
            Gamma { a, b } => (a, -a * b.ln() - ln_gamma(a + 1.0)),
            Lognormal { .. } => (f64::INFINITY, 0.0),
            Pareto { a, b } => (1.0, (a / b).ln()),
            Dagum { a, p, b } => (a * p, -a * p * b.ln()),
            Logistic { .. } | Gumbel { .. } | Normal { .. } | Cauchy { .. } => return None,
        };
        Some(law)
    }

    /// `(α, ln c)` with 1 − F(x) ~ c·x^(−α) as x → ∞, for families with an
    /// infinite upper endpoint; α = ∞ marks a tail thinner than any power.
    pub(crate) fn upper_tail_law(&self) -> Option<(f64, f64)> {
        use Family::*;
        let law = match self.family {
            Uniform { .. } | PowerFunction { .. } | Beta { .. } => return None,
            LogLogistic { a, b } | Pareto { a, b } => (a, a * b.ln()),
            Dagum { a, p, b } => (a, p.ln() + a * b.ln()),
            Cauchy { sigma, .. } => (1.0, (sigma / std::f64::consts::PI).ln()),
            _ => (f64::INFINITY, 0.0),
        };
        Some(law)
    }

    /// Power-law index α of the right tail, 1 − F(x) ~ x^(−α); `None` when
    /// every moment is finite.
    pub fn right_tail_index(&self) -> Option<f64> {
        use Family::*;
        match self.family {
            Cauchy { .. } => Some(1.0),
            LogLogistic { a, .. } | Pareto { a, .. } | Dagum { a, .. } => Some(a),
            _ => None,
        }
    }

    /// Power-law index of the left tail, F(x) ~ |x|^(−α) as x → −∞.
    pub fn left_tail_index(&self) -> Option<f64> {
        match self.family {
            Family::Cauchy { .. } => Some(1.0),
            _ => None,
        }
    }

    /// One variate by inverse transform.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        self.quantile(u)
    }

    /// `n` i.i.d. variates sorted ascending; deterministic in `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut xs: Vec<f64> = (0..n).map(|_| self.draw(&mut rng)).collect();
        xs.sort_by(f64::total_cmp);
        xs
    }

    /// Tabulated class membership evaluated at this distribution's
    /// parameters. The Dagum family is not tabulated and falls back to
    /// [`Distribution::numerical_convexity`].
    pub fn class_membership(&self, class: ConvexityClass) -> Membership {
        use ConvexityClass as K;
        use Family::*;
        let table = |member: bool, condition: Option<&str>| Membership {
            member,
            basis: MembershipBasis::Table {
                condition: condition.map(str::to_owned),
            },
        };
        match (self.family, class) {
            (Uniform { .. }, K::CL) => table(false, None),
            (Uniform { .. }, _) => table(true, None),
            (PowerFunction { .. }, K::CL) => table(false, None),
            (PowerFunction { a, .. }, _) => table(a >= 1.0, Some("a >= 1")),
            (Logistic { .. } | Gumbel { .. }, K::C) => table(false, None),
            (Logistic { .. } | Gumbel { .. }, _) => table(true, None),
            (Exponential { .. } | Normal { .. }, K::C | K::CL) => table(false, None),
            (Exponential { .. } | Normal { .. }, _) => table(true, None),
            (Beta { a, b }, K::C) => table(a <= 1.0 && b <= 1.0, Some("a, b <= 1")),
            (Beta { .. }, K::CL) => table(false, None),
            (Beta { a, .. }, _) => table(a >= 1.0, Some("a >= 1")),
            (Gamma { .. } | Weibull { .. }, K::C | K::CL) => table(false, None),
            (Gamma { a, .. } | Weibull { a, .. }, _) => table(a >= 1.0, Some("a >= 1")),
            (Cauchy { .. } | Lognormal { .. }, K::CO) => table(true, None),
            (Cauchy { .. } | Lognormal { .. }, _) => table(false, None),
            (LogLogistic { a, .. } | Pareto { a, .. }, K::CO) => table(a >= 1.0, Some("a >= 1")),
            (LogLogistic { .. } | Pareto { .. }, _) => table(false, None),
            (Dagum { .. }, _) => Membership {
                member: self.numerical_convexity(class),
                basis: MembershipBasis::Numerical,
            },
        }
    }

    /// Checks convexity of H⁻¹ ∘ F through nondecreasing difference
    /// quotients on a 200-point quantile grid over p ∈ [0.005, 0.995].
    pub fn numerical_convexity(&self, class: ConvexityClass) -> bool {
        let t = class.transform();
        const N: usize = 200;
        let pts: Vec<(f64, f64)> = (0..N)
            .map(|k| {
                let p = 0.005 + 0.99 * k as f64 / (N - 1) as f64;
                (self.quantile(p), t.quantile(p))
            })
            .collect();
        let slopes: Vec<f64> = pts
            .windows(2)
            .filter(|w| w[1].0 > w[0].0)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect();
        slopes.windows(2).all(|s| {
            let tol = 1e-6 * s[0].abs().max(s[1].abs()) + 1e-12;
            s[1] >= s[0] - tol
        })
    }
}

struct ParamSpec {
    name: &'static str,
    default: Option<f64>,
}

const fn req(name: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        default: None,
    }
}

const fn opt(name: &'static str, default: f64) -> ParamSpec {
    ParamSpec {
        name,
        default: Some(default),
    }
}

fn family_params(name: &str) -> Option<(&'static str, Vec<ParamSpec>)> {
    let entry = match name {
        "uniform" => ("uniform", vec![opt("a", 0.0), opt("b", 1.0)]),
        "power" | "powerfunction" | "power-function" => ("power", vec![req("a"), opt("b", 1.0)]),
        "logistic" => ("logistic", vec![opt("mu", 0.0), opt("sigma", 1.0)]),
        "gumbel" => ("gumbel", vec![opt("mu", 0.0), opt("sigma", 1.0)]),
        "exponential" | "exp" => ("exponential", vec![opt("a", 1.0)]),
        "normal" | "gaussian" => ("normal", vec![opt("mu", 0.0), opt("sigma", 1.0)]),
        "beta" => ("beta", vec![req("a"), req("b")]),
        "gamma" => ("gamma", vec![req("a"), opt("b", 1.0)]),
        "weibull" => ("weibull", vec![req("a"), opt("b", 1.0)]),
        "cauchy" => ("cauchy", vec![opt("mu", 0.0), opt("sigma", 1.0)]),
        "lognormal" | "log-normal" => ("lognormal", vec![opt("mu", 0.0), opt("sigma", 1.0)]),
        "loglogistic" | "log-logistic" => ("loglogistic", vec![req("a"), opt("b", 1.0)]),
        "pareto" => ("pareto", vec![req("a"), opt("b", 1.0)]),
        "dagum" => ("dagum", vec![req("a"), opt("p", 1.0), opt("b", 1.0)]),
        _ => return None,
    };
    Some(entry)
}

/// Parses `family(name=value, ...)`; positional values are accepted in the
/// family's parameter order, e.g. `gamma(2, 1)`.
impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let perr = |position: usize, message: String| Error::Parse { position, message };
        let open = s
            .find('(')
            .ok_or_else(|| perr(s.len(), "expected `(` after family name".into()))?;
        let name = s[..open].trim().to_ascii_lowercase();
        if name.is_empty() {
            return Err(perr(0, "missing family name".into()));
        }
        let (canonical, params) =
            family_params(&name).ok_or_else(|| Error::UnknownFamily(name.clone()))?;
        let close = s
            .rfind(')')
            .filter(|&c| c > open)
            .ok_or_else(|| perr(s.len(), "expected closing `)`".into()))?;
        if !s[close + 1..].trim().is_empty() {
            return Err(perr(close + 1, "unexpected trailing input".into()));
        }

        let mut values: Vec<Option<f64>> = vec![None; params.len()];
        let body = &s[open + 1..close];
        let mut offset = open + 1;
        let mut positional = 0usize;
        if !body.trim().is_empty() {
            for item in body.split(',') {
                let item_pos = offset + (item.len() - item.trim_start().len());
                offset += item.len() + 1;
                let item = item.trim();
                if item.is_empty() {
                    return Err(perr(item_pos, "empty parameter".into()));
                }
                let (slot, raw, value_pos) = match item.split_once('=') {
                    Some((key, raw)) => {
                        let key = key.trim().to_ascii_lowercase();
                        let slot = params.iter().position(|p| p.name == key).ok_or_else(|| {
                            perr(item_pos, format!("{canonical} has no parameter `{key}`"))
                        })?;
                        (slot, raw.trim(), item_pos + item.find('=').unwrap() + 1)
                    }
                    None => {
                        if positional >= params.len() {
                            return Err(perr(item_pos, "too many parameters".into()));
                        }
                        positional += 1;
                        (positional - 1, item, item_pos)
                    }
                };
                if values[slot].is_some() {
                    return Err(perr(
                        item_pos,
                        format!("parameter `{}` given twice", params[slot].name),
                    ));
                }
                let v: f64 = raw
                    .parse()
                    .map_err(|_| perr(value_pos, format!("`{raw}` is not a number")))?;
                values[slot] = Some(v);
            }
        }
        let mut resolved = Vec::with_capacity(params.len());
        for (p, v) in params.iter().zip(&values) {
            match v.or(p.default) {
                Some(v) => resolved.push(v),
                None => {
                    return Err(perr(
                        close,
                        format!("missing required parameter `{}` for {canonical}", p.name),
                    ))
                }
            }
        }
        let r = &resolved;
        let family = match canonical {
            "uniform" => Family::Uniform { a: r[0], b: r[1] },
            "power" => Family::PowerFunction { a: r[0], b: r[1] },
            "logistic" => Family::Logistic {
                mu: r[0],
                sigma: r[1],
            },
            "gumbel" => Family::Gumbel {
                mu: r[0],
                sigma: r[1],
            },
            "exponential" => Family::Exponential { a: r[0] },
            "normal" => Family::Normal {
                mu: r[0],
                sigma: r[1],
            },
            "beta" => Family::Beta { a: r[0], b: r[1] },
            "gamma" => Family::Gamma { a: r[0], b: r[1] },
            "weibull" => Family::Weibull { a: r[0], b: r[1] },
            "cauchy" => Family::Cauchy {
                mu: r[0],
                sigma: r[1],
            },
            "lognormal" => Family::Lognormal {
                mu: r[0],
                sigma: r[1],
            },
            "loglogistic" => Family::LogLogistic { a: r[0], b: r[1] },
            "pareto" => Family::Pareto { a: r[0], b: r[1] },
            "dagum" => Family::Dagum {
                a: r[0],
                p: r[1],
                b: r[2],
            },
            _ => unreachable!("canonical names come from family_params"),
        };
        Distribution::new(family)
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Family::*;
        let name = self.name();
        match self.family {
            Uniform { a, b }
            | PowerFunction { a, b }
            | Beta { a, b }
            | Gamma { a, b }
            | Weibull { a, b }
            | LogLogistic { a, b }
            | Pareto { a, b } => write!(f, "{name}(a={a},b={b})"),
            Logistic { mu, sigma }
            | Gumbel { mu, sigma }
            | Normal { mu, sigma }
            | Cauchy { mu, sigma }
            | Lognormal { mu, sigma } => write!(f, "{name}(mu={mu},sigma={sigma})"),
            Exponential { a } => write!(f, "{name}(a={a})"),
            Dagum { a, p, b } => write!(f, "{name}(a={a},p={p},b={b})"),
        }
    }
}
