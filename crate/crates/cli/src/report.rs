//! Report payloads and their JSON, CSV and text renderings.

use std::io::Write;

use serde::{Deserialize, Serialize};
use ssdorder_core::convexity::{write_table2_csv, write_table3_csv};
use ssdorder_core::{
    CandidateStatus, ConvexityClass, ConvexityTestResult, DominanceDegree, DominanceVerdict,
    MinRank, NodeConvention, ParamRange, PowerRow, ReferenceTransform, SsdVerdict, Table2,
};

/// Top-level JSON document: `{"command": ..., "result": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "result", rename_all = "kebab-case")]
pub enum Report {
    Compare(CompareReport),
    TestConvexity(ConvexityReport),
    NullTable(NullTableReport),
    Tables(TablesReport),
    MinRank(MinRankReport),
    ParamRange(ParamRangeReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassVerdict {
    pub class: ConvexityClass,
    #[serde(flatten)]
    pub verdict: DominanceVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub x: Option<String>,
    pub y: Option<String>,
    pub i: u32,
    pub n: u32,
    pub j: u32,
    pub m: u32,
    /// True when any listed condition certifies the pair.
    pub certified: bool,
    pub verdicts: Vec<ClassVerdict>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree: Option<DominanceDegree>,
    /// Why no degree is available for a two-sample request.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub numeric: Option<SsdVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub sample: String,
    pub decision: String,
    pub low_precision: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub advisory: Option<String>,
    #[serde(flatten)]
    pub test: ConvexityTestResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullTableReport {
    pub transform: ReferenceTransform,
    pub convention: NodeConvention,
    pub n: usize,
    pub runs: usize,
    pub seed: u64,
    pub low_precision: bool,
    /// (p, quantile) pairs.
    pub quantiles: Vec<(f64, f64)>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "table", rename_all = "snake_case")]
pub enum TableData {
    Table2(Table2),
    Table3 {
        alpha: f64,
        replicates: usize,
        rows: Vec<PowerRow>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TablesReport {
    pub transform: ReferenceTransform,
    pub convention: NodeConvention,
    pub seed: u64,
    pub low_precision: bool,
    #[serde(flatten)]
    pub data: TableData,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinRankReport {
    pub class: ConvexityClass,
    pub n: u32,
    pub j: u32,
    pub m: u32,
    #[serde(flatten)]
    pub result: MinRank,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamRangeReport {
    pub template: String,
    pub y: String,
    pub class: ConvexityClass,
    pub i: u32,
    pub n: u32,
    pub j: u32,
    pub m: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub range: Option<ParamRange>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

type Out<'a> = &'a mut dyn Write;
type IoResult = Result<(), Box<dyn std::error::Error>>;

pub fn render(report: &Report, format: Format, out: Out) -> IoResult {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)?;
            Ok(())
        }
        Format::Csv => csv(report, out),
        Format::Text => text(report, out),
    }
}

fn real(v: f64) -> String {
    if v.is_finite() {
        v.to_string()
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn opt_bool(b: Option<bool>) -> String {
    b.map(|b| b.to_string()).unwrap_or_default()
}

fn csv(report: &Report, out: Out) -> IoResult {
    if let Report::Tables(t) = report {
        match &t.data {
            TableData::Table2(table) => write_table2_csv(table, out)?,
            TableData::Table3 { rows, .. } => write_table3_csv(rows, out)?,
        }
        return Ok(());
    }
    let mut w = csv::Writer::from_writer(out);
    match report {
        Report::Compare(c) => {
            w.write_record(["class", "certified", "lhs", "rhs", "rank_ok", "degree_ok"])?;
            for v in &c.verdicts {
                w.write_record([
                    v.class.name().to_owned(),
                    v.verdict.certified.to_string(),
                    real(v.verdict.lhs),
                    real(v.verdict.rhs),
                    v.verdict.rank_ok.to_string(),
                    opt_bool(v.verdict.degree_ok),
                ])?;
            }
        }
        Report::TestConvexity(r) => {
            let t = &r.test;
            w.write_record([
                "transform",
                "convention",
                "n",
                "statistic",
                "p_value",
                "alpha",
                "critical_value",
                "decision",
                "runs",
                "seed",
                "low_precision",
                "advisory_large_statistic",
            ])?;
            w.write_record([
                t.transform.name().to_owned(),
                t.convention.name().to_owned(),
                t.n.to_string(),
                real(t.statistic),
                real(t.p_value),
                real(t.alpha),
                real(t.critical_value),
                r.decision.clone(),
                t.runs.to_string(),
                t.seed.to_string(),
                r.low_precision.to_string(),
                t.advisory_large_statistic.to_string(),
            ])?;
        }
        Report::NullTable(t) => {
            w.write_record(["kind", "convention", "n", "runs", "seed", "statistic"])?;
            for v in &t.values {
                w.write_record([
                    t.transform.name().to_owned(),
                    t.convention.name().to_owned(),
                    t.n.to_string(),
                    t.runs.to_string(),
                    t.seed.to_string(),
                    real(*v),
                ])?;
            }
        }
        Report::MinRank(r) => {
            w.write_record(["i", "lhs", "rhs", "certified"])?;
            for s in &r.result.trace {
                w.write_record([
                    s.i.to_string(),
                    real(s.lhs),
                    real(s.rhs),
                    s.certified.to_string(),
                ])?;
            }
        }
        Report::ParamRange(r) => {
            w.write_record(["value", "status", "detail"])?;
            for c in r.range.iter().flat_map(|range| &range.trace) {
                let (status, detail) = match &c.status {
                    CandidateStatus::Certified { degree } => ("certified", format!("{degree:?}")),
                    CandidateStatus::NotCertified { reason } => ("not_certified", reason.clone()),
                    CandidateStatus::PreconditionViolated { reason } => {
                        ("precondition_violated", reason.clone())
                    }
                };
                w.write_record([real(c.value), status.to_owned(), detail])?;
            }
        }
        Report::Tables(_) => unreachable!("handled above"),
    }
    w.flush()?;
    Ok(())
}

fn text(report: &Report, out: Out) -> IoResult {
    match report {
        Report::Compare(c) => {
            let who = match (&c.x, &c.y) {
                (Some(x), Some(y)) => format!("X ~ {x}, Y ~ {y}: "),
                (Some(x), None) => format!("X ~ {x}: "),
                _ => String::new(),
            };
            writeln!(
                out,
                "{who}X({}:{}) >=2 Y({}:{}) {}",
                c.i,
                c.n,
                c.j,
                c.m,
                if c.certified {
                    "certified"
                } else {
                    "not certified"
                }
            )?;
            if let Some(d) = &c.degree {
                writeln!(
                    out,
                    "  dominance degree: {:?} (checked up to {})",
                    d.k, d.certified_up_to
                )?;
            }
            if let Some(e) = &c.degree_error {
                writeln!(out, "  dominance degree unavailable: {e}")?;
            }
            for v in &c.verdicts {
                writeln!(
                    out,
                    "  {:<3} lhs {:<22} rhs {:<22} rank_ok {} {}{}",
                    v.class.name(),
                    real(v.verdict.lhs),
                    real(v.verdict.rhs),
                    v.verdict.rank_ok,
                    match v.verdict.degree_ok {
                        Some(d) => format!("degree_ok {d} "),
                        None => String::new(),
                    },
                    if v.verdict.certified {
                        "certified"
                    } else {
                        "-"
                    }
                )?;
            }
            if let Some(v) = &c.numeric {
                writeln!(
                    out,
                    "  numeric check: {:?} (max gap {:.3e}, tolerance {:.1e})",
                    v.outcome, v.sup_gap, v.tolerance
                )?;
            }
        }
        Report::TestConvexity(r) => {
            let t = &r.test;
            writeln!(
                out,
                "H0: parent is {}-convex ({} nodes)",
                t.transform.name(),
                t.convention.name()
            )?;
            writeln!(
                out,
                "  n = {}, statistic = {:.6}, p-value = {:.4}",
                t.n, t.statistic, t.p_value
            )?;
            writeln!(
                out,
                "  critical value at alpha = {}: {:.6} ({} runs, seed {}{})",
                t.alpha,
                t.critical_value,
                t.runs,
                t.seed,
                if r.low_precision {
                    ", low precision"
                } else {
                    ""
                }
            )?;
            writeln!(out, "  decision: {}", r.decision)?;
            if let Some(a) = &r.advisory {
                writeln!(out, "  advisory: {a}")?;
            }
        }
        Report::NullTable(t) => {
            writeln!(
                out,
                "null law of the statistic: {} transform, n = {}, {} runs, seed {}{}",
                t.transform.name(),
                t.n,
                t.runs,
                t.seed,
                if t.low_precision {
                    " (low precision)"
                } else {
                    ""
                }
            )?;
            for (p, q) in &t.quantiles {
                writeln!(out, "  p = {p:<5} {q:.3}")?;
            }
        }
        Report::Tables(t) => {
            if t.low_precision {
                writeln!(
                    out,
                    "(low precision: fewer than {} runs)",
                    ssdorder_core::convexity::MIN_RUNS
                )?;
            }
            match &t.data {
                TableData::Table2(table) => {
                    write!(out, "{:<6}", "p")?;
                    for (n, _, _) in &table.columns {
                        write!(out, "{:>8}", format!("n={n}"))?;
                    }
                    writeln!(out)?;
                    write!(out, "{:<6}", "runs")?;
                    for (_, r, _) in &table.columns {
                        write!(out, "{r:>8}")?;
                    }
                    writeln!(out)?;
                    for (k, p) in table.probs.iter().enumerate() {
                        write!(out, "{p:<6}")?;
                        for (_, _, q) in &table.columns {
                            write!(out, "{:>8.3}", q[k])?;
                        }
                        writeln!(out)?;
                    }
                }
                TableData::Table3 { alpha, rows, .. } => {
                    writeln!(out, "mean p; sd p; acceptance at alpha = {alpha}")?;
                    for r in rows {
                        writeln!(
                            out,
                            "  {:<22} n={:<4} {:.2}; {:.2}; {:.0}%",
                            r.family,
                            r.n,
                            r.mean_p,
                            r.sd_p,
                            100.0 * r.acceptance
                        )?;
                    }
                }
            }
        }
        Report::MinRank(r) => match r.result.rank {
            Some(i) => writeln!(
                out,
                "smallest i with X(i:{}) >=2 X({}:{}) under {}: {i}",
                r.n,
                r.j,
                r.m,
                r.class.name()
            )?,
            None => writeln!(
                out,
                "no i <= {} is certified for X({}:{}) under {}",
                r.n,
                r.j,
                r.m,
                r.class.name()
            )?,
        },
        Report::ParamRange(r) => match (&r.range, &r.failure) {
            (Some(range), _) => writeln!(
                out,
                "{} in [{:.6}, {:.6}] certifies X({}:{}) >=2 Y({}:{}) (resolution {})",
                range.parameter, range.lower, range.upper, r.i, r.n, r.j, r.m, range.resolution
            )?,
            (None, Some(f)) => writeln!(out, "no certified value: {f}")?,
            (None, None) => writeln!(out, "no certified value")?,
        },
    }
    Ok(())
}
