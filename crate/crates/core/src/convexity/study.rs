use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{statistic_of, NodeConvention, NullDistribution, MIN_RUNS};
use crate::catalog::Distribution;
use crate::error::{Error, Result};
use crate::reference::ReferenceTransform;

fn null_table(
    cache_dir: Option<&Path>,
    transform: ReferenceTransform,
    convention: NodeConvention,
    n: usize,
    runs: usize,
    seed: u64,
) -> Result<NullDistribution> {
    if runs < MIN_RUNS {
        log::warn!("null table for n={n} uses only {runs} runs; quantiles are low precision");
        return NullDistribution::simulate_low_precision(transform, convention, n, runs, seed);
    }
    match cache_dir {
        Some(dir) => NullDistribution::load_or_simulate(dir, transform, convention, n, runs, seed),
        None => NullDistribution::simulate(transform, convention, n, runs, seed),
    }
}

/// Null quantiles per sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2 {
    pub probs: Vec<f64>,
    /// (n, runs, quantile at each of `probs`).
    pub columns: Vec<(usize, usize, Vec<f64>)>,
}

/// Quantiles of the simulated null law for each `(n, runs)` pair. Run
/// counts below [`MIN_RUNS`] give low-precision tables, never cached.
pub fn table2(
    sizes: &[(usize, usize)],
    probs: &[f64],
    transform: ReferenceTransform,
    convention: NodeConvention,
    seed: u64,
    cache_dir: Option<&Path>,
) -> Result<Table2> {
    let columns = sizes
        .iter()
        .map(|&(n, runs)| {
            let t = null_table(cache_dir, transform, convention, n, runs, seed)?;
            Ok((n, runs, probs.iter().map(|&p| t.quantile(p)).collect()))
        })
        .collect::<Result<_>>()?;
    Ok(Table2 {
        probs: probs.to_vec(),
        columns,
    })
}

/// One cell of the acceptance study: p-value summary of `replicates` tests on samples of
/// size `n` from `family`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerRow {
    pub family: String,
    pub n: usize,
    pub replicates: usize,
    pub mean_p: f64,
    pub sd_p: f64,
    /// Fraction of replicates with p > α.
    pub acceptance: f64,
}

/// Acceptance study: for every family and size, `replicates` samples are
/// tested at level `alpha` against a null table of `runs` runs.
///
/// Null tables use `seed`; replicate samples use seed + 1 with one ChaCha
/// stream per (family, size, replicate).
#[allow(clippy::too_many_arguments)]
pub fn power_study(
    families: &[Distribution],
    sizes: &[usize],
    replicates: usize,
    alpha: f64,
    runs: usize,
    seed: u64,
    transform: ReferenceTransform,
    convention: NodeConvention,
    cache_dir: Option<&Path>,
) -> Result<Vec<PowerRow>> {
    if replicates == 0 {
        return Err(Error::InvalidArgument("replicates must be positive".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let mut rows = Vec::new();
    for (si, &n) in sizes.iter().enumerate() {
        let null = null_table(cache_dir, transform, convention, n, runs, seed)?;
        for (fi, family) in families.iter().enumerate() {
            let ps: Vec<f64> = (0..replicates as u64)
                .into_par_iter()
                .map(|r| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
                    rng.set_stream(((fi as u64) << 48) | ((si as u64) << 32) | r);
                    let mut xs: Vec<f64> = (0..n).map(|_| family.draw(&mut rng)).collect();
                    xs.sort_by(f64::total_cmp);
                    Ok(null.p_value(statistic_of(xs, transform, convention)?))
                })
                .collect::<Result<_>>()?;
            let k = ps.len() as f64;
            let mean_p = ps.iter().sum::<f64>() / k;
            let sd_p = if ps.len() > 1 {
                (ps.iter().map(|p| (p - mean_p).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
            } else {
                0.0
            };
            rows.push(PowerRow {
                family: family.to_string(),
                n,
                replicates,
                mean_p,
                sd_p,
                acceptance: ps.iter().filter(|&&p| p > alpha).count() as f64 / k,
            });
        }
    }
    Ok(rows)
}

/// Rows are probabilities, columns sample sizes; the first row holds the
/// run counts.
pub fn write_table2_csv<W: std::io::Write>(table: &Table2, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["p".to_owned()];
    header.extend(table.columns.iter().map(|(n, _, _)| format!("n={n}")));
    w.write_record(&header)?;
    let mut runs = vec!["runs".to_owned()];
    runs.extend(table.columns.iter().map(|(_, r, _)| r.to_string()));
    w.write_record(&runs)?;
    for (k, p) in table.probs.iter().enumerate() {
        let mut rec = vec![p.to_string()];
        rec.extend(table.columns.iter().map(|(_, _, q)| format!("{:.3}", q[k])));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Rows are families, columns sample sizes; each cell is
/// `mean p;sd p;acceptance%`.
pub fn write_table3_csv<W: std::io::Write>(rows: &[PowerRow], out: W) -> Result<()> {
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let mut families: Vec<&str> = Vec::new();
    for r in rows {
        if !families.contains(&r.family.as_str()) {
            families.push(&r.family);
        }
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["family".to_owned()];
    header.extend(sizes.iter().map(|n| format!("n={n}")));
    w.write_record(&header)?;
    for f in families {
        let mut rec = vec![f.to_owned()];
        for &n in &sizes {
            rec.push(
                rows.iter()
                    .find(|r| r.family == f && r.n == n)
                    .map(|r| format!("{:.2};{:.2};{:.0}%", r.mean_p, r.sd_p, 100.0 * r.acceptance))
                    .unwrap_or_default(),
            );
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
