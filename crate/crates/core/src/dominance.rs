//! Numerical stochastic-order machinery: crossing counts, second-order
//! dominance through integrated CDFs, order-statistic laws and means, and
//! the fractional dominance degree.
//!
//! X dominates Y in the second order when ∫_{−∞}^x F_X ≤ ∫_{−∞}^x F_Y for
//! every x. The fractional degree `k` is the largest `h` for which the
//! maxima X_{h:h} still dominate Y_{h:h}; degree 1 is ordinary second-order
//! dominance and the limit is first-order dominance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{Distribution, Family};
use crate::error::{Error, Result};
use crate::quadrature::{gk15, integrate, integrate_with_breaks};
use crate::reference::OrderStatSpec;
use crate::special::{
    beta_cdf_unchecked, beta_pdf_unchecked, beta_quantile_unchecked, ln_gamma, Accuracy,
};

/// A continuous law exposed through its CDF, survival function and
/// quantile.
pub trait Continuous: Sync {
    fn cdf(&self, x: f64) -> f64;

    fn sf(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }

    fn quantile(&self, p: f64) -> f64;

    /// Q(1 − q) without forming 1 − q.
    fn isf(&self, q: f64) -> f64 {
        self.quantile(1.0 - q)
    }

    /// Mean; `±∞` when it diverges to one side only, an error when it is
    /// undefined or cannot be computed.
    fn expectation(&self) -> Result<f64>;
}

impl Continuous for Distribution {
    fn cdf(&self, x: f64) -> f64 {
        Distribution::cdf(self, x)
    }

    fn sf(&self, x: f64) -> f64 {
        Distribution::sf(self, x)
    }

    fn quantile(&self, p: f64) -> f64 {
        Distribution::quantile(self, p)
    }

    fn isf(&self, q: f64) -> f64 {
        Distribution::isf(self, q)
    }

    fn expectation(&self) -> Result<f64> {
        match signed_divergence(self, OrderStatSpec::new(1, 1)?) {
            Some(m) if !m.is_nan() => Ok(m),
            Some(_) => Err(Error::DivergentMean(format!("{self} has no mean"))),
            None => self
                .mean()
                .ok_or_else(|| Error::DivergentMean(format!("{self} has no mean"))),
        }
    }
}

/// The order statistic X_{i:n} of an i.i.d. sample from `parent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderStatistic {
    pub parent: Distribution,
    pub spec: OrderStatSpec,
}

impl OrderStatistic {
    pub fn new(parent: Distribution, spec: OrderStatSpec) -> Self {
        Self { parent, spec }
    }
}

impl Continuous for OrderStatistic {
    fn cdf(&self, x: f64) -> f64 {
        let (a, b) = self.spec.beta_params();
        let u = self.parent.cdf(x);
        if u > 0.5 {
            1.0 - beta_cdf_unchecked(self.parent.sf(x), b, a)
        } else {
            beta_cdf_unchecked(u, a, b)
        }
    }

    fn sf(&self, x: f64) -> f64 {
        let (a, b) = self.spec.beta_params();
        let u = self.parent.cdf(x);
        if u > 0.5 {
            beta_cdf_unchecked(self.parent.sf(x), b, a)
        } else {
            1.0 - beta_cdf_unchecked(u, a, b)
        }
    }

    fn quantile(&self, p: f64) -> f64 {
        let (a, b) = self.spec.beta_params();
        self.parent.quantile(beta_quantile_unchecked(p, a, b))
    }

    fn isf(&self, q: f64) -> f64 {
        let (a, b) = self.spec.beta_params();
        self.parent.isf(beta_quantile_unchecked(q, b, a))
    }

    fn expectation(&self) -> Result<f64> {
        if let Some(m) = signed_divergence(&self.parent, self.spec) {
            return if m.is_nan() {
                Err(Error::DivergentMean(format!(
                    "{} of {} has no mean",
                    self.spec, self.parent
                )))
            } else {
                Ok(m)
            };
        }
        order_stat_mean(&self.parent, self.spec)
    }
}

/// `None` if E X_{i:n} is finite; otherwise `+∞`, `−∞` or NaN (both tails
/// diverge).
fn signed_divergence(d: &Distribution, s: OrderStatSpec) -> Option<f64> {
    let (i, n) = (s.rank() as f64, s.size() as f64);
    let right = d
        .right_tail_index()
        .is_some_and(|a| (n - i + 1.0) * a <= 1.0);
    let left = d.left_tail_index().is_some_and(|a| i * a <= 1.0);
    match (left, right) {
        (false, false) => None,
        (false, true) => Some(f64::INFINITY),
        (true, false) => Some(f64::NEG_INFINITY),
        (true, true) => Some(f64::NAN),
    }
}

/// CDF of X_{i:n}: x ↦ I_{F(x)}(i, n−i+1).
pub fn order_stat_cdf(d: Distribution, s: OrderStatSpec) -> impl Fn(f64) -> f64 {
    let os = OrderStatistic::new(d, s);
    move |x| os.cdf(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Minus,
    Plus,
    None,
}

/// Sign changes of a function, zero values omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub count: usize,
    pub first_sign: Sign,
    #[serde(with = "crate::real::vec")]
    pub crossing_locations: Vec<f64>,
    /// A bracketing bisection failed to converge or met a NaN.
    pub unreliable: bool,
}

/// Counts sign changes of `f` over the sorted `grid`, treating
/// `|f| <= zero_tol` as zero, and locates each change by bisection to
/// within `x_tol(x)`.
fn scan(
    f: impl Fn(f64) -> f64 + Sync,
    grid: &[f64],
    zero_tol: impl Fn(f64, f64) -> bool + Sync,
    x_tol: impl Fn(f64) -> f64,
) -> CrossingReport {
    let values: Vec<f64> = grid.par_iter().map(|&x| f(x)).collect();
    let sign_of = |x: f64, v: f64| -> i8 {
        if v.is_nan() || zero_tol(x, v) {
            0
        } else if v > 0.0 {
            1
        } else {
            -1
        }
    };
    let mut first_sign = Sign::None;
    let mut last: Option<(f64, i8)> = None;
    let mut locations = Vec::new();
    let mut unreliable = values.iter().any(|v| v.is_nan());
    for (&x, &v) in grid.iter().zip(&values) {
        let s = sign_of(x, v);
        if s == 0 {
            continue;
        }
        match last {
            None => {
                first_sign = if s > 0 { Sign::Plus } else { Sign::Minus };
            }
            Some((lx, ls)) if ls != s => {
                let (mut lo, mut hi) = (lx, x);
                let mut converged = false;
                for _ in 0..200 {
                    if hi - lo <= x_tol(0.5 * (lo + hi)) {
                        converged = true;
                        break;
                    }
                    let mid = 0.5 * (lo + hi);
                    if !(mid > lo && mid < hi) {
                        converged = true;
                        break;
                    }
                    let fm = f(mid);
                    if fm.is_nan() {
                        break;
                    }
                    match sign_of(mid, fm) {
                        0 => {
                            lo = mid;
                            hi = mid;
                            converged = true;
                            break;
                        }
                        sm if sm == ls => lo = mid,
                        _ => hi = mid,
                    }
                }
                unreliable |= !converged;
                locations.push(0.5 * (lo + hi));
            }
            _ => {}
        }
        last = Some((x, s));
    }
    CrossingReport {
        count: locations.len(),
        first_sign,
        crossing_locations: locations,
        unreliable,
    }
}

/// Sign changes of `f` on a uniform grid of `grid_size` points over
/// `[a, b]`, with crossings located to 1e-6 of the interval width.
pub fn sign_changes(
    f: impl Fn(f64) -> f64 + Sync,
    a: f64,
    b: f64,
    grid_size: usize,
) -> Result<CrossingReport> {
    if grid_size < 64 {
        return Err(Error::InvalidArgument(format!(
            "grid_size must be at least 64, got {grid_size}"
        )));
    }
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(Error::InvalidArgument(format!(
            "interval must be finite with a < b, got [{a}, {b}]"
        )));
    }
    let grid: Vec<f64> = (0..grid_size)
        .map(|k| a + (b - a) * k as f64 / (grid_size - 1) as f64)
        .collect();
    let width = b - a;
    Ok(scan(f, &grid, |_, v| v == 0.0, |_| 1e-6 * width))
}

const PROBE_POINTS: usize = 2048;
const TAIL_PROBES: [f64; 16] = [
    1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12, 1e-15, 1e-20, 1e-30, 1e-50, 1e-80, 1e-120,
    1e-200, 1e-300,
];

/// Union of the two quantile grids (2048 points each) plus tail probes on
/// both sides, sorted and deduplicated. Without `deep` the tails stop at
/// 1e-12.
fn probe_grid(x: &impl Continuous, y: &impl Continuous, deep: bool) -> Vec<f64> {
    let tails = if deep {
        &TAIL_PROBES[..]
    } else {
        &TAIL_PROBES[..8]
    };
    let bulk = (0..PROBE_POINTS).map(|k| (k as f64 + 0.5) / PROBE_POINTS as f64);
    let mut grid: Vec<f64> = bulk
        .map(|p| (p, false))
        .chain(tails.iter().flat_map(|&t| [(t, false), (t, true)]))
        .collect::<Vec<_>>()
        .par_iter()
        .flat_map_iter(|&(p, upper)| {
            if upper {
                [x.isf(p), y.isf(p)]
            } else {
                [x.quantile(p), y.quantile(p)]
            }
        })
        .filter(|v| v.is_finite())
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// F_X(t) − F_Y(t), computed from survival functions in the upper half to
/// keep relative precision in the right tail. Also returns the magnitude
/// the difference should be compared against for rounding noise.
fn cdf_gap(x: &impl Continuous, y: &impl Continuous, t: f64) -> (f64, f64) {
    let (fx, fy) = (x.cdf(t), y.cdf(t));
    if fx + fy > 1.0 {
        let (sx, sy) = (x.sf(t), y.sf(t));
        (sy - sx, sx.max(sy))
    } else {
        (fx - fy, fx.max(fy))
    }
}

/// Sign changes of F_X − F_Y on the probe grid.
pub fn cdf_crossings(x: &impl Continuous, y: &impl Continuous) -> CrossingReport {
    let grid = probe_grid(x, y, true);
    let gap = |t: f64| cdf_gap(x, y, t);
    scan(
        |t| gap(t).0,
        &grid,
        |t, v| v.abs() <= 8.0 * f64::EPSILON * gap(t).1,
        |t| 1e-10 * t.abs().max(1.0),
    )
}

/// Sign of F_X − F_Y at the ends of the support from the tail laws, when
/// they decide it.
fn limiting_signs(dx: &Distribution, dy: &Distribution) -> (Option<i8>, Option<i8>) {
    // Compare c1·t^a1 with c2·t^a2 as t → 0+: +1 when the first dominates.
    let dominant = |(a1, c1): (f64, f64), (a2, c2): (f64, f64)| -> Option<i8> {
        if a1 < a2 {
            Some(1)
        } else if a1 > a2 {
            Some(-1)
        } else if a1.is_infinite() || c1 == c2 {
            None
        } else if c1 > c2 {
            Some(1)
        } else {
            Some(-1)
        }
    };
    let ((lx, ux), (ly, uy)) = (dx.support(), dy.support());
    let left = if lx < ly {
        Some(1)
    } else if lx > ly {
        Some(-1)
    } else if lx.is_finite() {
        dx.lower_tail_law()
            .zip(dy.lower_tail_law())
            .and_then(|(x, y)| dominant(x, y))
    } else {
        None
    };
    let right = if ux < uy {
        Some(1)
    } else if ux > uy {
        Some(-1)
    } else if ux.is_infinite() {
        // With t = 1/x, S ~ c·t^α; F_X − F_Y = S_Y − S_X.
        dx.upper_tail_law()
            .zip(dy.upper_tail_law())
            .and_then(|(x, y)| dominant(y, x))
    } else {
        None
    };
    (left, right)
}

/// Sign changes of F_X − F_Y for two catalog laws: the probe-grid scan,
/// completed by the tail laws where a change lies beyond the probes. Such
/// a change is reported at the outermost probe point.
pub fn distribution_crossings(dx: &Distribution, dy: &Distribution) -> CrossingReport {
    let mut r = cdf_crossings(dx, dy);
    let grid = probe_grid(dx, dy, true);
    let (left, right) = limiting_signs(dx, dy);
    let as_int = |s: Sign| match s {
        Sign::Plus => 1i8,
        Sign::Minus => -1,
        Sign::None => 0,
    };
    let to_sign = |s: i8| if s > 0 { Sign::Plus } else { Sign::Minus };
    let first = as_int(r.first_sign);
    if first == 0 {
        // Nothing resolved on the grid; only the tails speak.
        match (left, right) {
            (Some(l), Some(rs)) => {
                r.first_sign = to_sign(l);
                if l != rs {
                    r.crossing_locations.push(grid[grid.len() / 2]);
                }
            }
            (Some(s), None) | (None, Some(s)) => r.first_sign = to_sign(s),
            (None, None) => {}
        }
    } else {
        let last = if r.count.is_multiple_of(2) {
            first
        } else {
            -first
        };
        if let Some(l) = left.filter(|&l| l != first) {
            r.crossing_locations.insert(0, grid[0]);
            r.first_sign = to_sign(l);
        }
        if right.is_some_and(|rs| rs != last) {
            r.crossing_locations
                .push(*grid.last().expect("non-empty grid"));
        }
    }
    r.count = r.crossing_locations.len();
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SsdOutcome {
    Holds,
    Fails,
    Inconclusive,
}

/// Result of a numerical second-order dominance check of X over Y.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsdVerdict {
    pub outcome: SsdOutcome,
    /// Point where D(x) = ∫_{−∞}^x (F_X − F_Y) is largest; `+∞` when the
    /// maximum is the limit E Y − E X.
    #[serde(with = "crate::real")]
    pub witness: f64,
    /// max D over the probed points (and the limit, when known).
    #[serde(with = "crate::real")]
    pub sup_gap: f64,
    pub tolerance: f64,
    /// Accumulated quadrature error bound for the probed values of D.
    #[serde(with = "crate::real")]
    pub quadrature_error: f64,
    pub note: Option<String>,
}

/// E[(x0 − X)^+] = ∫_0^{F(x0)} (x0 − Q(p)) dp.
fn lower_partial_moment(d: &impl Continuous, x0: f64) -> (f64, f64) {
    let p0 = d.cdf(x0);
    if p0 <= 0.0 {
        return (0.0, 0.0);
    }
    let acc = Accuracy::new(1e-300, 1e-10).expect("valid tolerances");
    let r = integrate(|p| x0 - d.quantile(p), 0.0, p0, acc, 500);
    (r.value, r.abs_error)
}

/// Numerical second-order dominance check of X over Y.
///
/// D is accumulated segment by segment over the probe grid with one
/// Kronrod panel per segment, starting from the lower partial moments at
/// the first probe; the right limit is E Y − E X. `Holds` requires
/// max D ≤ 1e-7·max(1, |E X|, |E Y|).
pub fn ssd_numeric(x: &impl Continuous, y: &impl Continuous) -> SsdVerdict {
    let ex = x.expectation();
    let ey = y.expectation();
    let scale = [&ex, &ey]
        .iter()
        .filter_map(|m| m.as_ref().ok().copied().filter(|v| v.is_finite()))
        .fold(1.0f64, |s, m| s.max(m.abs()));
    let tolerance = 1e-7 * scale;

    let grid = probe_grid(x, y, false);
    let (lx, ex0) = lower_partial_moment(x, grid[0]);
    let (ly, ey0) = lower_partial_moment(y, grid[0]);
    let segments: Vec<(f64, f64)> = grid
        .par_windows(2)
        .map(|w| gk15(&|t| cdf_gap(x, y, t).0, w[0], w[1]))
        .collect();

    let mut d = lx - ly;
    let mut err = ex0 + ey0;
    let mut sup = d;
    let mut witness = grid[0];
    for (w, (v, e)) in grid.windows(2).zip(&segments) {
        d += v;
        err += e;
        if d > sup {
            sup = d;
            witness = w[1];
        }
    }

    let mut note = None;
    let limit = match (&ex, &ey) {
        (Ok(mx), Ok(my)) if mx.is_finite() || my.is_finite() => Some(my - mx),
        (Ok(_), Ok(_)) => {
            note = Some("both means infinite; right limit of D unknown".to_owned());
            None
        }
        (Err(e), _) | (_, Err(e)) => {
            note = Some(format!("right limit of D unknown: {e}"));
            None
        }
    };
    if let Some(l) = limit {
        if l > sup {
            sup = l;
            witness = f64::INFINITY;
        }
    }

    let outcome = if !sup.is_finite() && sup > 0.0 || sup - err > tolerance {
        SsdOutcome::Fails
    } else if sup.is_nan() || !lx.is_finite() || !ly.is_finite() {
        note.get_or_insert_with(|| "non-finite partial moments".to_owned());
        SsdOutcome::Inconclusive
    } else if sup <= tolerance && limit.is_some() {
        SsdOutcome::Holds
    } else {
        SsdOutcome::Inconclusive
    };
    SsdVerdict {
        outcome,
        witness,
        sup_gap: sup,
        tolerance,
        quadrature_error: err,
        note,
    }
}

/// E X_{i:n} = ∫_0^1 Q(p) β(p; i, n−i+1) dp, to relative error 1e-8.
pub fn order_stat_mean(d: &Distribution, s: OrderStatSpec) -> Result<f64> {
    if let Some(m) = signed_divergence(d, s) {
        return Err(Error::DivergentMean(format!(
            "E {s} of {d} is {}",
            if m.is_nan() {
                "undefined".to_owned()
            } else {
                m.to_string()
            }
        )));
    }
    let (a, b) = s.beta_params();
    let mu = a / (a + b);
    let sd = (a * b / ((a + b) * (a + b) * (a + b + 1.0))).sqrt();
    // Each half is integrated from its own end: p for the lower half and
    // q = 1 − p for the upper, so tail singularities keep full precision.
    let mut bulk = vec![mu];
    for k in [0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
        bulk.extend([mu - k * sd, mu + k * sd]);
    }
    let breaks = |centre: &[f64]| {
        let mut v: Vec<f64> = (1..=20)
            .chain((22..=300).step_by(2))
            .map(|e| 10f64.powi(-e))
            .chain(centre.iter().copied().filter(|&t| t > 0.0 && t < 0.5))
            .chain([0.0, 0.5])
            .collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    };
    let lower_breaks = breaks(&bulk);
    let upper_breaks = breaks(&bulk.iter().map(|p| 1.0 - p).collect::<Vec<_>>());
    let acc = Accuracy::new(1e-15, 1e-11).expect("valid tolerances");
    let weighted = |w: f64, x: f64| if w == 0.0 { 0.0 } else { x * w };
    let lower = integrate_with_breaks(
        |p| weighted(beta_pdf_unchecked(p, a, b), d.quantile(p)),
        &lower_breaks,
        acc,
        8000,
    );
    let upper = integrate_with_breaks(
        |q| weighted(beta_pdf_unchecked(q, b, a), d.isf(q)),
        &upper_breaks,
        acc,
        8000,
    );
    let value = lower.value + upper.value;
    let error = lower.abs_error + upper.abs_error;
    let bound = 1e-8 * value.abs().max(1e-6);
    if !value.is_finite() || error > bound {
        return Err(Error::Numerical(format!(
            "E {s} of {d}: quadrature error {error} exceeds {bound}"
        )));
    }
    Ok(value)
}

/// E X_{k:k}: closed form for the Dagum and log-logistic families,
/// quadrature otherwise.
pub fn maxima_mean(d: &Distribution, k: u32) -> Result<f64> {
    let s = OrderStatSpec::maximum(k)?;
    let closed = |a: f64, p: f64, b: f64| -> Result<f64> {
        if a <= 1.0 {
            return Err(Error::DivergentMean(format!(
                "E X({k}:{k}) of {d} is infinite"
            )));
        }
        let pk = p * k as f64;
        Ok(b * (ln_gamma(pk + 1.0 / a) + ln_gamma(1.0 - 1.0 / a) - ln_gamma(pk)).exp())
    };
    match d.family() {
        Family::Dagum { a, p, b } => closed(a, p, b),
        Family::LogLogistic { a, b } => closed(a, 1.0, b),
        _ => order_stat_mean(d, s),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Degree {
    /// Dominance of the maxima holds up to this size.
    Finite(u32),
    /// F_X ≤ F_Y pointwise: every degree holds.
    Fsd,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaximaComparison {
    pub h: u32,
    #[serde(with = "crate::real")]
    pub mean_x: f64,
    #[serde(with = "crate::real")]
    pub mean_y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceDegree {
    pub k: Degree,
    /// Largest maxima size actually compared.
    pub certified_up_to: u32,
    pub trace: Vec<MaximaComparison>,
    pub crossings: CrossingReport,
}

impl DominanceDegree {
    /// The fixed degree k, for callers that supply it directly.
    pub fn finite(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        Ok(Self {
            k: Degree::Finite(k),
            certified_up_to: k,
            trace: Vec::new(),
            crossings: CrossingReport {
                count: 0,
                first_sign: Sign::None,
                crossing_locations: Vec::new(),
                unreliable: false,
            },
        })
    }

    pub fn fsd() -> Self {
        Self {
            k: Degree::Fsd,
            ..Self::finite(1).expect("1 is a valid degree")
        }
    }

    /// Whether maxima of size `h` are covered.
    pub fn covers(&self, h: u32) -> bool {
        match self.k {
            Degree::Fsd => true,
            Degree::Finite(k) => h <= k,
        }
    }
}

/// Largest h ≤ `k_max` with E X_{h:h} ≥ E Y_{h:h}, valid when F_X − F_Y
/// changes sign at most once, from − to +. Every h up to `k_max` is
/// compared; the degree is the end of the initial run of successes.
pub fn dominance_degree(
    dx: &Distribution,
    dy: &Distribution,
    k_max: u32,
) -> Result<DominanceDegree> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let crossings = distribution_crossings(dx, dy);
    if crossings.unreliable {
        log::warn!("crossing refinement for {dx} vs {dy} did not converge");
    }
    match (crossings.count, crossings.first_sign) {
        (0, Sign::Minus | Sign::None) => {
            return Ok(DominanceDegree {
                k: Degree::Fsd,
                certified_up_to: k_max,
                trace: Vec::new(),
                crossings,
            })
        }
        (0, Sign::Plus) => {
            return Err(Error::NoDominance(format!(
                "F_X >= F_Y everywhere for {dx} vs {dy}"
            )))
        }
        (1, Sign::Minus) => {}
        (count, first) => {
            return Err(Error::PreconditionViolated(format!(
                "F_X - F_Y has {count} sign change(s) starting {first:?}; \
                 need at most one, starting with minus"
            )))
        }
    }

    let trace = (1..=k_max)
        .into_par_iter()
        .map(|h| {
            Ok(MaximaComparison {
                h,
                mean_x: maxima_mean(dx, h)?,
                mean_y: maxima_mean(dy, h)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let holds = |c: &MaximaComparison| {
        c.mean_x >= c.mean_y - 1e-10 * c.mean_x.abs().max(c.mean_y.abs()).max(1.0)
    };
    let k = trace.iter().take_while(|c| holds(c)).count() as u32;
    if k == 0 {
        return Err(Error::NoDominance(format!(
            "E X <= E Y for {dx} vs {dy}: {} < {}",
            trace[0].mean_x, trace[0].mean_y
        )));
    }
    if k == k_max {
        return Err(Error::KMaxExhausted {
            certified_up_to: k_max,
        });
    }
    if trace[k as usize..].iter().any(holds) {
        log::warn!("maxima comparison for {dx} vs {dy} is not monotone in h beyond {k}");
    }
    Ok(DominanceDegree {
        k: Degree::Finite(k),
        certified_up_to: k_max,
        trace,
        crossings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn d(s: &str) -> Distribution {
        s.parse().unwrap()
    }

    fn spec(i: u32, n: u32) -> OrderStatSpec {
        OrderStatSpec::new(i, n).unwrap()
    }

    #[test]
    fn linear_function_has_one_crossing() {
        let r = sign_changes(|x| x - 0.5, 0.0, 1.0, 101).unwrap();
        assert_eq!(r.count, 1);
        assert_eq!(r.first_sign, Sign::Minus);
        assert!((r.crossing_locations[0] - 0.5).abs() < 1e-6);
        assert!(sign_changes(|x| x, 0.0, 1.0, 10).is_err());
    }

    #[test]
    fn cubic_roots_located() {
        let r = sign_changes(|x| -(x - 0.2) * (x - 0.5) * (x - 0.9), 0.0, 1.0, 256).unwrap();
        assert_eq!(r.count, 3);
        assert_eq!(r.first_sign, Sign::Plus);
        for (got, want) in r.crossing_locations.iter().zip([0.2, 0.5, 0.9]) {
            assert!((got - want).abs() < 1e-6);
        }
        // double root: no sign change
        let r = sign_changes(|x| (x - 0.3).powi(2) * (x - 0.8), 0.0, 1.0, 64).unwrap();
        assert_eq!(r.count, 1);
    }

    #[test]
    fn dagum_and_loglogistic_cross_once() {
        let r = cdf_crossings(&d("dagum(a=3,p=2,b=3)"), &d("loglogistic(a=2,b=2)"));
        assert_eq!(r.count, 1);
        assert_eq!(r.first_sign, Sign::Minus);
        assert!((r.crossing_locations[0] - 13.5729).abs() < 1e-3);
    }

    #[test]
    fn tail_laws_expose_crossings_below_the_probes() {
        // Crossing near x = 0.126^100, far below any representable probe.
        let x = d("loglogistic(a=2.99,b=2)");
        let y = d("loglogistic(a=3,b=1)");
        let r = distribution_crossings(&x, &y);
        assert_eq!((r.count, r.first_sign), (1, Sign::Plus));
        assert!(matches!(
            dominance_degree(&x, &y, 30),
            Err(Error::PreconditionViolated(_))
        ));
        let r = distribution_crossings(&d("loglogistic(a=3.5,b=2)"), &y);
        assert_eq!((r.count, r.first_sign), (1, Sign::Minus));
    }

    #[test]
    fn order_stat_cdf_special_cases() {
        let g = d("gamma(a=2,b=1)");
        for &x in &[0.3, 1.0, 2.5, 6.0] {
            let f = g.cdf(x);
            assert_relative_eq!(order_stat_cdf(g, spec(1, 1))(x), f, max_relative = 1e-13);
            assert_relative_eq!(
                order_stat_cdf(g, spec(5, 5))(x),
                f.powi(5),
                max_relative = 1e-12
            );
            assert_relative_eq!(
                order_stat_cdf(g, spec(1, 5))(x),
                1.0 - (1.0 - f).powi(5),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn order_stat_means() {
        let u = d("uniform(a=0,b=1)");
        assert_relative_eq!(
            order_stat_mean(&u, spec(3, 7)).unwrap(),
            3.0 / 8.0,
            max_relative = 1e-9
        );
        let e = d("exponential(a=1)");
        assert_relative_eq!(
            order_stat_mean(&e, spec(3, 3)).unwrap(),
            11.0 / 6.0,
            max_relative = 1e-9
        );
        let p = d("pareto(a=1,b=1)");
        assert!(matches!(
            order_stat_mean(&p, spec(3, 3)),
            Err(Error::DivergentMean(_))
        ));
        assert!(order_stat_mean(&p, spec(2, 3)).is_ok());
    }

    #[test]
    fn gamma_example_flips_between_193_and_194() {
        let g = d("gamma(a=2,b=2)");
        let target = order_stat_mean(&g, spec(43, 44)).unwrap();
        assert!(order_stat_mean(&g, spec(193, 200)).unwrap() < target);
        assert!(order_stat_mean(&g, spec(194, 200)).unwrap() > target);
    }

    #[test]
    fn maxima_closed_forms_agree_with_quadrature() {
        for s in [
            "dagum(a=3,p=2,b=3)",
            "loglogistic(a=2,b=2)",
            "loglogistic(a=4.5,b=0.7)",
        ] {
            let dist = d(s);
            for k in [1, 2, 9, 10, 25] {
                let closed = maxima_mean(&dist, k).unwrap();
                let numeric = order_stat_mean(&dist, spec(k, k)).unwrap();
                assert_relative_eq!(closed, numeric, max_relative = 1e-6);
            }
        }
        assert_relative_eq!(
            maxima_mean(&d("loglogistic(a=2,b=2)"), 1).unwrap(),
            d("loglogistic(a=2,b=2)").mean().unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn example_degree_is_nine() {
        let deg =
            dominance_degree(&d("dagum(a=3,p=2,b=3)"), &d("loglogistic(a=2,b=2)"), 40).unwrap();
        assert_eq!(deg.k, Degree::Finite(9));
        assert_eq!(deg.certified_up_to, 40);
    }

    #[test]
    fn pointwise_domination_gives_fsd() {
        let deg =
            dominance_degree(&d("loglogistic(a=2,b=3)"), &d("loglogistic(a=2,b=2)"), 10).unwrap();
        assert_eq!(deg.k, Degree::Fsd);
        let deg = dominance_degree(&d("exponential(a=1)"), &d("exponential(a=2)"), 10).unwrap();
        assert_eq!(deg.k, Degree::Fsd);
        let g = d("gamma(a=2,b=1)");
        assert_eq!(dominance_degree(&g, &g, 5).unwrap().k, Degree::Fsd);
        assert!(matches!(
            dominance_degree(&d("exponential(a=2)"), &d("exponential(a=1)"), 10),
            Err(Error::NoDominance(_))
        ));
    }

    #[test]
    fn ssd_numeric_simple_cases() {
        let e1 = d("exponential(a=1)");
        let e2 = d("exponential(a=2)");
        assert_eq!(ssd_numeric(&e1, &e1).outcome, SsdOutcome::Holds);
        assert_eq!(ssd_numeric(&e1, &e2).outcome, SsdOutcome::Holds);
        let v = ssd_numeric(&e2, &e1);
        assert_eq!(v.outcome, SsdOutcome::Fails);
        assert_relative_eq!(v.sup_gap, 0.5, max_relative = 1e-6);
        // equal means, larger spread is dominated
        let n1 = d("normal(mu=0,sigma=1)");
        let n2 = d("normal(mu=0,sigma=2)");
        assert_eq!(ssd_numeric(&n1, &n2).outcome, SsdOutcome::Holds);
        assert_eq!(ssd_numeric(&n2, &n1).outcome, SsdOutcome::Fails);
    }

    #[test]
    fn ssd_numeric_on_order_statistics() {
        let g = d("gamma(a=2,b=2)");
        let y = OrderStatistic::new(g, spec(43, 44));
        let x194 = OrderStatistic::new(g, spec(194, 200));
        let x190 = OrderStatistic::new(g, spec(190, 200));
        assert_eq!(ssd_numeric(&x194, &y).outcome, SsdOutcome::Holds);
        assert_eq!(ssd_numeric(&x190, &y).outcome, SsdOutcome::Fails);
    }
}
