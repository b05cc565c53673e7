//! Monte Carlo test of H⁻¹-convexity of a CDF.
//!
//! The sample's empirical CDF is mapped through H⁻¹ to a set of nodes; the
//! statistic measures, relative to the node height, how far the nodes rise
//! above their greatest convex minorant. Its null law is simulated from H
//! itself, the least favourable member of the class.

mod gcm;
mod null;
mod study;

use serde::{Deserialize, Serialize};

pub use gcm::{gcm, ks_statistic, lower_hull, GcmResult};
pub use null::{NullDistribution, MIN_RUNS};
pub use study::{power_study, table2, write_table2_csv, write_table3_csv, PowerRow, Table2};

use crate::error::{Error, Result};
use crate::reference::ReferenceTransform;

/// Placement of the step-function nodes fed to the convex minorant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeConvention {
    /// Heights h_k = H⁻¹(k/(n+1)); node j sits at (x_j, h_{j−1}) with
    /// h_0 = H⁻¹(0) = 0.
    #[default]
    PlottingPosition,
    /// Heights h_k = H⁻¹(k/n); nodes (x_1, h_1) and (x_j, h_{j−1}) for
    /// j ≥ 2.
    EmpiricalStep,
}

impl NodeConvention {
    pub fn name(self) -> &'static str {
        match self {
            Self::PlottingPosition => "plotting_position",
            Self::EmpiricalStep => "empirical_step",
        }
    }
}

impl std::str::FromStr for NodeConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plotting_position" | "plotting-position" => Ok(Self::PlottingPosition),
            "empirical_step" | "empirical-step" => Ok(Self::EmpiricalStep),
            other => Err(Error::InvalidArgument(format!(
                "unknown node convention `{other}`"
            ))),
        }
    }
}

pub(crate) fn check_transform(t: ReferenceTransform) -> Result<()> {
    if t.anchored_at_zero() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "the {} transform is not anchored at zero and cannot be tested",
            t.name()
        )))
    }
}

/// Sorted sample with its transformed empirical-CDF nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedEmpirical {
    transform: ReferenceTransform,
    convention: NodeConvention,
    nodes: Vec<(f64, f64)>,
}

impl TransformedEmpirical {
    pub fn new(
        sample: &[f64],
        transform: ReferenceTransform,
        convention: NodeConvention,
    ) -> Result<Self> {
        let mut xs = sample.to_vec();
        xs.sort_by(f64::total_cmp);
        Self::from_sorted(xs, transform, convention)
    }

    fn from_sorted(
        mut xs: Vec<f64>,
        transform: ReferenceTransform,
        convention: NodeConvention,
    ) -> Result<Self> {
        check_transform(transform)?;
        if let Some(bad) = xs.iter().find(|v| !v.is_finite()) {
            return Err(Error::DegenerateSample(format!("non-finite value {bad}")));
        }
        let distinct = 1 + xs.windows(2).filter(|w| w[1] > w[0]).count();
        if xs.len() < 3 || distinct < 3 {
            return Err(Error::DegenerateSample(format!(
                "need at least 3 distinct values, got {distinct} of {}",
                xs.len()
            )));
        }
        let mut jittered = 0;
        for k in 1..xs.len() {
            if xs[k] <= xs[k - 1] {
                xs[k] = next_up(xs[k - 1]);
                jittered += 1;
            }
        }
        if jittered > 0 {
            log::warn!("{jittered} tied value(s) perturbed upward by one ulp step");
        }
        let n = xs.len();
        let denom = match convention {
            NodeConvention::PlottingPosition => (n + 1) as f64,
            NodeConvention::EmpiricalStep => n as f64,
        };
        let h = |k: usize| transform.quantile(k as f64 / denom);
        let nodes = xs
            .iter()
            .enumerate()
            .map(|(j, &x)| {
                let y = match (j, convention) {
                    (0, NodeConvention::PlottingPosition) => 0.0,
                    (0, NodeConvention::EmpiricalStep) => h(1),
                    _ => h(j),
                };
                (x, y)
            })
            .collect();
        Ok(Self {
            transform,
            convention,
            nodes,
        })
    }

    pub fn transform(&self) -> ReferenceTransform {
        self.transform
    }

    pub fn convention(&self) -> NodeConvention {
        self.convention
    }

    /// (x_j, node height) pairs in ascending x.
    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn next_up(x: f64) -> f64 {
    if x == 0.0 {
        f64::from_bits(1)
    } else if x > 0.0 {
        f64::from_bits(x.to_bits() + 1)
    } else {
        f64::from_bits(x.to_bits() - 1)
    }
}

pub(crate) fn statistic_of(
    sorted: Vec<f64>,
    transform: ReferenceTransform,
    convention: NodeConvention,
) -> Result<f64> {
    let te = TransformedEmpirical::from_sorted(sorted, transform, convention)?;
    Ok(ks_statistic(&te, &gcm(&te)))
}

/// Node, minorant and abscissa for one sample point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GcmPoint {
    pub x: f64,
    pub node: f64,
    pub gcm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityTestResult {
    pub transform: ReferenceTransform,
    pub convention: NodeConvention,
    pub n: usize,
    pub statistic: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub critical_value: f64,
    pub reject: bool,
    pub runs: usize,
    pub seed: u64,
    /// Statistic above 0.9: informal evidence against convexity. Advisory
    /// only; `reject` is the decision.
    pub advisory_large_statistic: bool,
    pub gcm: Vec<GcmPoint>,
}

/// Tests H⁻¹-convexity of the sample's parent against a null table with
/// the same n and transform. Rejects when p ≤ α.
pub fn test(
    sample: &[f64],
    transform: ReferenceTransform,
    null: &NullDistribution,
    alpha: f64,
) -> Result<ConvexityTestResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if sample.len() != null.n {
        return Err(Error::SizeMismatch {
            sample: sample.len(),
            table: null.n,
        });
    }
    if transform != null.transform {
        return Err(Error::InvalidArgument(format!(
            "null table is for the {} transform, not {}",
            null.transform.name(),
            transform.name()
        )));
    }
    let te = TransformedEmpirical::new(sample, transform, null.convention)?;
    let g = gcm(&te);
    let statistic = ks_statistic(&te, &g);
    let p_value = null.p_value(statistic);
    Ok(ConvexityTestResult {
        transform,
        convention: null.convention,
        n: null.n,
        statistic,
        p_value,
        alpha,
        critical_value: null.quantile(1.0 - alpha),
        reject: p_value <= alpha,
        runs: null.runs,
        seed: null.seed,
        advisory_large_statistic: statistic > 0.9,
        gcm: te
            .nodes()
            .iter()
            .zip(&g.values)
            .map(|(&(x, node), &gcm)| GcmPoint { x, node, gcm })
            .collect(),
    })
}
