//! `ssdorder`: dominance checks between order statistics and the convexity
//! test, with reproducible JSON, CSV or text output.
//!
//! Exit status is 0 whenever the command ran; statistical decisions are in
//! the payload. Operational errors exit with 1, usage errors with 2.

mod input;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ssdorder_core::conditions::{
    corollary1, corollary2, min_rank, param_range_search, SearchOptions,
};
use ssdorder_core::convexity::{self, power_study, table2, NullDistribution, MIN_RUNS};
use ssdorder_core::dominance::{dominance_degree, ssd_numeric, DominanceDegree, OrderStatistic};
use ssdorder_core::{
    ConvexityClass, Distribution, Error, NodeConvention, OrderStatSpec, ReferenceTransform,
};

use report::{
    ClassVerdict, CompareReport, ConvexityReport, Format, MinRankReport, NullTableReport,
    ParamRangeReport, Report, TableData, TablesReport,
};

type AnyResult<T> = Result<T, Box<dyn std::error::Error>>;

#[derive(Parser, Debug)]
#[command(
    name = "ssdorder",
    version,
    about = "Second-order dominance of order statistics"
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct RunConfig {
    /// Seed for every stochastic step.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Monte Carlo runs for null tables [default: 3000; tables use 3000 for
    /// n <= 30 and 1000 above].
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    runs: Option<u64>,
    /// Test level, in (0, 1).
    #[arg(long, global = true, default_value_t = 0.1, value_parser = parse_alpha)]
    alpha: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory for cached null tables.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if a > 0.0 && a < 1.0 {
        Ok(a)
    } else {
        Err(format!("alpha must lie in (0, 1), got {a}"))
    }
}

fn parse_dist(s: &str) -> Result<Distribution, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_class(s: &str) -> Result<ConvexityClass, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Convention {
    PlottingPosition,
    EmpiricalStep,
}

impl From<Convention> for NodeConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::PlottingPosition => NodeConvention::PlottingPosition,
            Convention::EmpiricalStep => NodeConvention::EmpiricalStep,
        }
    }
}

/// Class under test for the convexity commands. The log-odds class cannot
/// be tested.
#[derive(Args, Debug)]
#[group(multiple = false)]
struct TestClass {
    /// Class to test: c, ifr or co [default: co].
    #[arg(long, value_parser = parse_class)]
    class: Option<ConvexityClass>,
    /// Shorthand for --class c.
    #[arg(long = "c")]
    convex: bool,
    /// Shorthand for --class ifr.
    #[arg(long)]
    ifr: bool,
    /// Shorthand for --class co.
    #[arg(long)]
    co: bool,
    #[arg(long, value_enum, default_value_t = Convention::PlottingPosition)]
    convention: Convention,
}

impl TestClass {
    fn class(&self) -> ConvexityClass {
        match (self.class, self.convex, self.ifr) {
            (Some(c), _, _) => c,
            (None, true, _) => ConvexityClass::C,
            (None, _, true) => ConvexityClass::IFR,
            _ => ConvexityClass::CO,
        }
    }
}

#[derive(Args, Debug)]
struct Ranks {
    #[arg(long)]
    i: u32,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    j: u32,
    #[arg(long)]
    m: u32,
}

impl Ranks {
    fn specs(&self) -> AnyResult<(OrderStatSpec, OrderStatSpec)> {
        Ok((
            OrderStatSpec::new(self.i, self.n)?,
            OrderStatSpec::new(self.j, self.m)?,
        ))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Checks X(i:n) >=2 Y(j:m) with the rank conditions of each class.
    ///
    /// With --x alone both order statistics come from X; with --x and --y
    /// the dominance degree of X over Y is computed as well. Classes are
    /// --class, or those the parent (Y when given) belongs to, or all four.
    Compare {
        #[arg(long, value_parser = parse_class)]
        class: Option<ConvexityClass>,
        #[arg(long, value_parser = parse_dist)]
        x: Option<Distribution>,
        #[arg(long, value_parser = parse_dist, requires = "x")]
        y: Option<Distribution>,
        #[command(flatten)]
        ranks: Ranks,
        /// Largest maxima size compared for the degree [default: max(i, 20)].
        #[arg(long)]
        k_max: Option<u32>,
        /// Also run the numerical second-order dominance check.
        #[arg(long)]
        verify: bool,
    },
    /// Tests whether a sample's parent is convex relative to a reference
    /// distribution.
    TestConvexity {
        /// Sample file, one value per line or cell; `-` reads stdin.
        #[arg(long)]
        sample: PathBuf,
        #[command(flatten)]
        class: TestClass,
        /// Writes x, node, gcm columns for plotting.
        #[arg(long)]
        gcm_out: Option<PathBuf>,
    },
    /// Simulates the null law of the test statistic.
    NullTable {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        class: TestClass,
    },
    /// Regenerates the null-quantile table or the acceptance-rate table.
    Tables {
        #[arg(value_enum)]
        which: Which,
        /// Sample sizes [default: 10..100 for table2, 25,50,75,100 for table3].
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        /// Samples per family and size (table3).
        #[arg(long, default_value_t = 100)]
        replicates: usize,
        /// Families (table3), separated by `;`.
        #[arg(long, value_delimiter = ';', value_parser = parse_dist)]
        families: Option<Vec<Distribution>>,
        #[command(flatten)]
        class: TestClass,
    },
    /// Smallest i with X(i:n) >=2 X(j:m) certified by a class condition.
    MinRank {
        #[arg(long, value_parser = parse_class)]
        class: ConvexityClass,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        m: u32,
    },
    /// Values of one parameter of X for which X(i:n) >=2 Y(j:m) is
    /// certified through the dominance degree.
    ParamRange {
        /// Template for X; the searched parameter's value is ignored.
        #[arg(long, value_parser = parse_dist)]
        x: Distribution,
        #[arg(long)]
        param: String,
        #[arg(long, value_parser = parse_dist)]
        y: Distribution,
        #[command(flatten)]
        ranks: Ranks,
        /// Class of Y's parent [default: the first of c, cl, ifr, co it belongs to].
        #[arg(long, value_parser = parse_class)]
        class: Option<ConvexityClass>,
        #[arg(long)]
        lower: f64,
        #[arg(long)]
        upper: f64,
        #[arg(long, default_value_t = 32)]
        coarse_points: usize,
        #[arg(long, default_value_t = 1e-4)]
        resolution: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Table2,
    Table3,
}

const TABLE2_SIZES: [usize; 9] = [10, 15, 20, 25, 30, 40, 50, 75, 100];
const TABLE3_SIZES: [usize; 4] = [25, 50, 75, 100];
const TABLE3_FAMILIES: [&str; 6] = [
    "gamma(a=2,b=1)",
    "gamma(a=1,b=1)",
    "gamma(a=0.5,b=1)",
    "pareto(a=2,b=1)",
    "pareto(a=1,b=1)",
    "pareto(a=0.5,b=1)",
];

fn member_classes(d: &Distribution) -> Vec<ConvexityClass> {
    ConvexityClass::ALL
        .into_iter()
        .filter(|&k| d.class_membership(k).member)
        .collect()
}

fn testable(class: ConvexityClass) -> AnyResult<ReferenceTransform> {
    let t = class.transform();
    if t.anchored_at_zero() {
        Ok(t)
    } else {
        Err(format!(
            "class {class} cannot be tested: its reference quantile is not anchored at zero"
        )
        .into())
    }
}

impl RunConfig {
    fn runs_or(&self, default: usize) -> usize {
        self.runs.map_or(default, |r| r as usize)
    }

    fn null(
        &self,
        t: ReferenceTransform,
        c: NodeConvention,
        n: usize,
        runs: usize,
    ) -> AnyResult<NullDistribution> {
        if runs < MIN_RUNS {
            log::warn!("{runs} runs is below {MIN_RUNS}; the null table is low precision");
            return Ok(NullDistribution::simulate_low_precision(
                t, c, n, runs, self.seed,
            )?);
        }
        Ok(match &self.cache_dir {
            Some(dir) => NullDistribution::load_or_simulate(dir, t, c, n, runs, self.seed)?,
            None => NullDistribution::simulate(t, c, n, runs, self.seed)?,
        })
    }
}

fn compare(
    class: Option<ConvexityClass>,
    x: Option<Distribution>,
    y: Option<Distribution>,
    ranks: &Ranks,
    k_max: Option<u32>,
    verify: bool,
) -> AnyResult<CompareReport> {
    let (si, sj) = ranks.specs()?;
    let parent_for_classes = y.or(x);
    let classes = match (class, parent_for_classes) {
        (Some(c), _) => vec![c],
        (None, Some(d)) => member_classes(&d),
        (None, None) => ConvexityClass::ALL.to_vec(),
    };
    let mut report = CompareReport {
        x: x.map(|d| d.to_string()),
        y: y.map(|d| d.to_string()),
        i: ranks.i,
        n: ranks.n,
        j: ranks.j,
        m: ranks.m,
        certified: false,
        verdicts: Vec::new(),
        degree: None,
        degree_error: None,
        numeric: None,
    };
    match (x, y) {
        (Some(dx), Some(dy)) => {
            let k_max = k_max.unwrap_or(ranks.i.max(20)).max(1);
            let degree = match dominance_degree(&dx, &dy, k_max) {
                Ok(d) => Some(d),
                Err(Error::KMaxExhausted { certified_up_to }) => {
                    Some(DominanceDegree::finite(certified_up_to)?)
                }
                Err(e @ (Error::PreconditionViolated(_) | Error::NoDominance(_))) => {
                    report.degree_error = Some(e.to_string());
                    None
                }
                Err(e) => return Err(e.into()),
            };
            for &c in &classes {
                let verdict = match &degree {
                    Some(d) => corollary2(c, d, si, sj),
                    None => {
                        let mut v = corollary1(c, si, sj);
                        v.certified = false;
                        v.condition_used = None;
                        v.degree_ok = Some(false);
                        v
                    }
                };
                report.verdicts.push(ClassVerdict { class: c, verdict });
            }
            report.degree = degree;
            if verify {
                report.numeric = Some(ssd_numeric(
                    &OrderStatistic::new(dx, si),
                    &OrderStatistic::new(dy, sj),
                ));
            }
        }
        (x, _) => {
            for &c in &classes {
                report.verdicts.push(ClassVerdict {
                    class: c,
                    verdict: corollary1(c, si, sj),
                });
            }
            if let (true, Some(d)) = (verify, x) {
                report.numeric = Some(ssd_numeric(
                    &OrderStatistic::new(d, si),
                    &OrderStatistic::new(d, sj),
                ));
            }
        }
    }
    report.certified = report.verdicts.iter().any(|v| v.verdict.certified);
    Ok(report)
}

fn test_convexity(
    cfg: &RunConfig,
    sample: &Path,
    class: &TestClass,
    gcm_out: Option<&PathBuf>,
) -> AnyResult<ConvexityReport> {
    let t = testable(class.class())?;
    let xs = input::read_sample(sample)?;
    let runs = cfg.runs_or(3000);
    let null = cfg.null(t, class.convention.into(), xs.len(), runs)?;
    let result = convexity::test(&xs, t, &null, cfg.alpha)?;
    if let Some(path) = gcm_out {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["x", "node", "gcm"])?;
        for p in &result.gcm {
            w.write_record([p.x.to_string(), p.node.to_string(), p.gcm.to_string()])?;
        }
        w.flush()?;
    }
    let advisory = result.advisory_large_statistic.then(|| {
        format!(
            "statistic {:.3} exceeds 0.9, informal evidence against convexity; the decision rests on the p-value",
            result.statistic
        )
    });
    if let Some(a) = &advisory {
        log::warn!("{a}");
    }
    Ok(ConvexityReport {
        sample: sample.display().to_string(),
        decision: if result.reject { "reject" } else { "accept" }.into(),
        low_precision: runs < MIN_RUNS,
        advisory,
        test: result,
    })
}

fn null_table(cfg: &RunConfig, n: usize, class: &TestClass) -> AnyResult<NullTableReport> {
    let t = testable(class.class())?;
    let runs = cfg.runs_or(3000);
    let null = cfg.null(t, class.convention.into(), n, runs)?;
    let probs = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99];
    Ok(NullTableReport {
        transform: t,
        convention: null.convention,
        n,
        runs,
        seed: cfg.seed,
        low_precision: runs < MIN_RUNS,
        quantiles: probs.iter().map(|&p| (p, null.quantile(p))).collect(),
        values: null.values,
    })
}

fn default_runs(n: usize) -> usize {
    if n <= 30 {
        3000
    } else {
        1000
    }
}

fn tables(
    cfg: &RunConfig,
    which: Which,
    sizes: Option<Vec<usize>>,
    replicates: usize,
    families: Option<Vec<Distribution>>,
    class: &TestClass,
) -> AnyResult<TablesReport> {
    let t = testable(class.class())?;
    let convention: NodeConvention = class.convention.into();
    let cache = cfg.cache_dir.as_deref();
    let (data, low_precision) = match which {
        Which::Table2 => {
            let sizes = sizes.unwrap_or_else(|| TABLE2_SIZES.to_vec());
            let pairs: Vec<(usize, usize)> = sizes
                .iter()
                .map(|&n| (n, cfg.runs_or(default_runs(n))))
                .collect();
            let probs = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95];
            let low = pairs.iter().any(|&(_, r)| r < MIN_RUNS);
            (
                TableData::Table2(table2(&pairs, &probs, t, convention, cfg.seed, cache)?),
                low,
            )
        }
        Which::Table3 => {
            let sizes = sizes.unwrap_or_else(|| TABLE3_SIZES.to_vec());
            let families = match families {
                Some(f) => f,
                None => TABLE3_FAMILIES
                    .iter()
                    .map(|s| s.parse())
                    .collect::<Result<_, _>>()?,
            };
            let mut rows = Vec::new();
            let mut low = false;
            for n in sizes {
                let runs = cfg.runs_or(default_runs(n));
                low |= runs < MIN_RUNS;
                rows.extend(power_study(
                    &families,
                    &[n],
                    replicates,
                    cfg.alpha,
                    runs,
                    cfg.seed,
                    t,
                    convention,
                    cache,
                )?);
            }
            (
                TableData::Table3 {
                    alpha: cfg.alpha,
                    replicates,
                    rows,
                },
                low,
            )
        }
    };
    Ok(TablesReport {
        transform: t,
        convention,
        seed: cfg.seed,
        low_precision,
        data,
    })
}

fn run(cli: Cli) -> AnyResult<Report> {
    let cfg = &cli.config;
    Ok(match cli.command {
        Command::Compare {
            class,
            x,
            y,
            ranks,
            k_max,
            verify,
        } => Report::Compare(compare(class, x, y, &ranks, k_max, verify)?),
        Command::TestConvexity {
            sample,
            class,
            gcm_out,
        } => Report::TestConvexity(test_convexity(cfg, &sample, &class, gcm_out.as_ref())?),
        Command::NullTable { n, class } => Report::NullTable(null_table(cfg, n, &class)?),
        Command::Tables {
            which,
            sizes,
            replicates,
            families,
            class,
        } => Report::Tables(tables(cfg, which, sizes, replicates, families, &class)?),
        Command::MinRank { class, n, j, m } => Report::MinRank(MinRankReport {
            class,
            n,
            j,
            m,
            result: min_rank(class, n, OrderStatSpec::new(j, m)?)?,
        }),
        Command::ParamRange {
            x,
            param,
            y,
            ranks,
            class,
            lower,
            upper,
            coarse_points,
            resolution,
        } => {
            let (si, sj) = ranks.specs()?;
            let class = match class {
                Some(c) => c,
                None => *member_classes(&y)
                    .first()
                    .ok_or_else(|| format!("{y} belongs to no tabulated class; pass --class"))?,
            };
            let options = SearchOptions {
                coarse_points,
                resolution,
            };
            let (range, failure) =
                match param_range_search(&x, &param, &y, si, sj, class, (lower, upper), options) {
                    Ok(r) => (Some(r), None),
                    Err(Error::SearchFailed(reason)) => (None, Some(reason)),
                    Err(e) => return Err(e.into()),
                };
            Report::ParamRange(ParamRangeReport {
                template: x.to_string(),
                y: y.to_string(),
                class,
                i: ranks.i,
                n: ranks.n,
                j: ranks.j,
                m: ranks.m,
                range,
                failure,
            })
        }
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let format = cli.config.format;
    let outcome = run(cli).and_then(|report| {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        report::render(&report, format, &mut lock)
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip(report: Report) {
        let s = serde_json::to_string(&report).unwrap();
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn reports_round_trip_through_json() {
        let ranks = Ranks {
            i: 7,
            n: 30,
            j: 4,
            m: 25,
        };
        let x = parse_dist("dagum(a=3,p=2,b=3)").ok();
        let y = parse_dist("loglogistic(a=2,b=2)").ok();
        let report = compare(None, x, y, &ranks, None, true).unwrap();
        assert!(report.numeric.is_some());
        round_trip(Report::Compare(report));

        let ranks = Ranks {
            i: 2,
            n: 2,
            j: 1,
            m: 1,
        };
        let report = compare(
            None,
            parse_dist("pareto(a=0.8)").ok(),
            None,
            &ranks,
            None,
            true,
        )
        .unwrap();
        // The maximum of two Pareto(0.8) draws has no mean.
        assert!(report.numeric.as_ref().unwrap().note.is_some());
        round_trip(Report::Compare(report));

        round_trip(Report::MinRank(MinRankReport {
            class: ConvexityClass::IFR,
            n: 200,
            j: 43,
            m: 44,
            result: min_rank(
                ConvexityClass::IFR,
                200,
                OrderStatSpec::new(43, 44).unwrap(),
            )
            .unwrap(),
        }));
    }
}
