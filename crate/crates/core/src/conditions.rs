//! Sufficient rank conditions for X_{i:n} ≥₂ X_{j:m}, and searches built
//! on them.
//!
//! A verdict that is not certified means the condition cannot decide the
//! pair; it never asserts that dominance fails.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{ConvexityClass, Distribution};
use crate::dominance::{dominance_degree, Degree, DominanceDegree};
use crate::error::{Error, Result};
use crate::reference::OrderStatSpec;
use crate::special::harmonic_tail;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceVerdict {
    pub certified: bool,
    /// The class whose condition certified the pair; `None` when not
    /// certified.
    pub condition_used: Option<ConvexityClass>,
    #[serde(with = "crate::real")]
    pub lhs: f64,
    #[serde(with = "crate::real")]
    pub rhs: f64,
    pub rank_ok: bool,
    /// For the two-sample condition: whether the rank is within the
    /// dominance degree.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_ok: Option<bool>,
}

/// ψ(i) − ψ(n−i+1) as a signed harmonic sum.
fn log_odds_mean(i: u32, n: u32) -> f64 {
    let r = n - i + 1;
    match i.cmp(&r) {
        std::cmp::Ordering::Greater => harmonic_tail(r as u64, i as u64 - 1).expect("r <= i-1"),
        std::cmp::Ordering::Less => -harmonic_tail(i as u64, r as u64 - 1).expect("i <= r-1"),
        std::cmp::Ordering::Equal => 0.0,
    }
}

fn hazard_mean(i: u32, n: u32) -> f64 {
    harmonic_tail((n - i + 1) as u64, n as u64).expect("1 <= n-i+1 <= n")
}

/// One-sample condition for a parent in `class`.
pub fn corollary1(class: ConvexityClass, si: OrderStatSpec, sj: OrderStatSpec) -> DominanceVerdict {
    let (i, n) = (si.rank(), si.size());
    let (j, m) = (sj.rank(), sj.size());
    let rank_ok = i >= j;
    let (lhs, rhs, holds) = match class {
        ConvexityClass::C => (
            i as f64 / (n + 1) as f64,
            j as f64 / (m + 1) as f64,
            i as u64 * (m as u64 + 1) >= j as u64 * (n as u64 + 1),
        ),
        ConvexityClass::CL => {
            let (l, r) = (log_odds_mean(i, n), log_odds_mean(j, m));
            (l, r, si == sj || l >= r)
        }
        ConvexityClass::IFR => {
            let (l, r) = (hazard_mean(i, n), hazard_mean(j, m));
            (l, r, si == sj || l >= r)
        }
        ConvexityClass::CO => (
            i as f64 / n as f64,
            j as f64 / m as f64,
            i as u64 * m as u64 >= j as u64 * n as u64,
        ),
    };
    let certified = rank_ok && holds;
    DominanceVerdict {
        certified,
        condition_used: certified.then_some(class),
        lhs,
        rhs,
        rank_ok,
        degree_ok: None,
    }
}

/// Two-sample condition: Y's parent in `class_of_y`, X dominating Y with
/// the given degree.
pub fn corollary2(
    class_of_y: ConvexityClass,
    degree: &DominanceDegree,
    si: OrderStatSpec,
    sj: OrderStatSpec,
) -> DominanceVerdict {
    let mut v = corollary1(class_of_y, si, sj);
    let degree_ok = degree.covers(si.rank());
    v.certified &= degree_ok;
    if !v.certified {
        v.condition_used = None;
    }
    v.degree_ok = Some(degree_ok);
    v
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankStep {
    pub i: u32,
    #[serde(with = "crate::real")]
    pub lhs: f64,
    #[serde(with = "crate::real")]
    pub rhs: f64,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinRank {
    pub rank: Option<u32>,
    pub trace: Vec<RankStep>,
}

/// Smallest i in j..=n certified by `class` for X_{i:n} ≥₂ X_{j:m}.
pub fn min_rank(class: ConvexityClass, n: u32, sj: OrderStatSpec) -> Result<MinRank> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "sample size n must be positive".into(),
        ));
    }
    let mut trace = Vec::new();
    let mut rank = None;
    for i in sj.rank()..=n {
        let v = corollary1(class, OrderStatSpec::new(i, n)?, sj);
        trace.push(RankStep {
            i,
            lhs: v.lhs,
            rhs: v.rhs,
            certified: v.certified,
        });
        if v.certified {
            rank = Some(i);
            break;
        }
    }
    Ok(MinRank { rank, trace })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CandidateStatus {
    Certified { degree: Degree },
    NotCertified { reason: String },
    PreconditionViolated { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub value: f64,
    #[serde(flatten)]
    pub status: CandidateStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamRange {
    pub parameter: String,
    /// Certified interval; endpoints are certified values within the
    /// search resolution of the boundary.
    pub lower: f64,
    pub upper: f64,
    pub resolution: f64,
    pub trace: Vec<Candidate>,
}

/// Options for [`param_range_search`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub coarse_points: usize,
    pub resolution: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            coarse_points: 32,
            resolution: 1e-4,
        }
    }
}

fn evaluate(
    template: &Distribution,
    parameter: &str,
    value: f64,
    dy: &Distribution,
    class_of_y: ConvexityClass,
    si: OrderStatSpec,
    sj: OrderStatSpec,
) -> Result<Candidate> {
    let dx = template.with_parameter(parameter, value)?;
    let status = match dominance_degree(&dx, dy, si.rank()) {
        Ok(deg) => {
            if corollary2(class_of_y, &deg, si, sj).certified {
                CandidateStatus::Certified { degree: deg.k }
            } else {
                CandidateStatus::NotCertified {
                    reason: format!("degree {:?} below rank {}", deg.k, si.rank()),
                }
            }
        }
        // Every maxima size up to the rank was verified.
        Err(Error::KMaxExhausted { certified_up_to }) => CandidateStatus::Certified {
            degree: Degree::Finite(certified_up_to),
        },
        Err(Error::PreconditionViolated(reason)) => {
            CandidateStatus::PreconditionViolated { reason }
        }
        Err(Error::NoDominance(reason)) => CandidateStatus::NotCertified { reason },
        Err(e) => return Err(e),
    };
    Ok(Candidate { value, status })
}

fn is_certified(c: &Candidate) -> bool {
    matches!(c.status, CandidateStatus::Certified { .. })
}

/// Interval of values of `parameter` in `bounds` for which the two-sample
/// condition certifies X_{i:n} ≥₂ Y_{j:m}, with X drawn from `template`.
///
/// A coarse scan locates the certified run, then each open boundary is
/// bisected to `options.resolution`. When several disjoint runs appear the
/// lowest is returned.
#[allow(clippy::too_many_arguments)]
pub fn param_range_search(
    template: &Distribution,
    parameter: &str,
    dy: &Distribution,
    si: OrderStatSpec,
    sj: OrderStatSpec,
    class_of_y: ConvexityClass,
    bounds: (f64, f64),
    options: SearchOptions,
) -> Result<ParamRange> {
    let (lo, hi) = bounds;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::InvalidArgument(format!(
            "bounds must be finite with lower < upper, got [{lo}, {hi}]"
        )));
    }
    if options.coarse_points < 2 || !(options.resolution > 0.0) {
        return Err(Error::InvalidArgument(
            "need at least 2 coarse points and a positive resolution".into(),
        ));
    }
    let rank_condition = corollary1(class_of_y, si, sj);
    if !rank_condition.certified {
        return Err(Error::SearchFailed(format!(
            "empty interval: the {class_of_y} rank condition fails for {si} vs {sj} \
             ({} < {} or i < j)",
            rank_condition.lhs, rank_condition.rhs
        )));
    }

    let k = options.coarse_points;
    let eval = |v: f64| evaluate(template, parameter, v, dy, class_of_y, si, sj);
    let mut trace: Vec<Candidate> = (0..k)
        .into_par_iter()
        .map(|idx| eval(lo + (hi - lo) * idx as f64 / (k - 1) as f64))
        .collect::<Result<_>>()?;

    let Some(first) = trace.iter().position(is_certified) else {
        return Err(Error::SearchFailed(format!(
            "empty interval: no certified value of `{parameter}` among {k} points in [{lo}, {hi}]"
        )));
    };
    let run = trace[first..]
        .iter()
        .take_while(|c| is_certified(c))
        .count();
    let last = first + run - 1;
    if trace[last + 1..].iter().any(is_certified) {
        log::warn!("certified values of `{parameter}` form several runs; returning the lowest");
    }

    let lower_bracket = (first > 0).then(|| (trace[first].value, trace[first - 1].value));
    let upper_bracket = (last < k - 1).then(|| (trace[last].value, trace[last + 1].value));
    let mut refined = Vec::new();
    let mut bisect = |(mut good, mut bad): (f64, f64)| -> Result<f64> {
        while (good - bad).abs() > options.resolution {
            let mid = 0.5 * (good + bad);
            let c = eval(mid)?;
            if is_certified(&c) {
                good = mid;
            } else {
                bad = mid;
            }
            refined.push(c);
        }
        Ok(good)
    };
    let lower = lower_bracket.map_or(Ok(lo), &mut bisect)?;
    let upper = upper_bracket.map_or(Ok(hi), &mut bisect)?;
    trace.extend(refined);
    Ok(ParamRange {
        parameter: parameter.to_owned(),
        lower,
        upper,
        resolution: options.resolution,
        trace,
    })
}
