//! Oracles and generators shared by the property suites and the acceptance
//! harness.
#![allow(dead_code)]

use rand::distributions::Open01;
use rand::Rng;
use ssdorder_core::catalog::{ConvexityClass, Distribution, Family};
use ssdorder_core::conditions::{corollary1, min_rank};
use ssdorder_core::convexity::lower_hull;
use ssdorder_core::dominance::{ssd_numeric, Continuous, OrderStatistic, SsdOutcome};
use ssdorder_core::reference::{expected_transformed_beta, OrderStatSpec, ReferenceTransform};

pub fn line_at(a: (f64, f64), b: (f64, f64), x: f64) -> f64 {
    a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
}

/// g(x_j) = min(y_j, min over i < j < k of the line through points i and k
/// evaluated at x_j); endpoints keep their heights.
pub fn brute_force_gcm(pts: &[(f64, f64)]) -> Vec<f64> {
    let n = pts.len();
    (0..n)
        .map(|j| {
            let mut g = pts[j].1;
            for i in 0..j {
                for k in j + 1..n {
                    g = g.min(line_at(pts[i], pts[k], pts[j].0));
                }
            }
            g
        })
        .collect()
}

/// Strictly increasing abscissae with arbitrary heights.
pub fn random_points<R: Rng>(rng: &mut R, n: usize) -> Vec<(f64, f64)> {
    let mut x = 0.0;
    (0..n)
        .map(|_| {
            x += rng.gen_range(0.01..2.0);
            (x, rng.gen_range(-5.0..5.0))
        })
        .collect()
}

/// Minorant, exact contact at vertices, vertex convexity and chord
/// interpolation. Returns a description of the first failure.
pub fn check_gcm_invariants(pts: &[(f64, f64)]) -> Result<(), String> {
    let g = lower_hull(pts);
    if g.values.len() != pts.len() {
        return Err("length mismatch".into());
    }
    for (j, (&gj, p)) in g.values.iter().zip(pts).enumerate() {
        if gj > p.1 {
            return Err(format!("g({j}) = {gj} exceeds node {}", p.1));
        }
    }
    let c = &g.contact;
    if c.first() != Some(&0) || c.last() != Some(&(pts.len() - 1)) {
        return Err("hull does not span the points".into());
    }
    for &k in c {
        // Raising a vertex by any ε > 0 would leave the minorant.
        if g.values[k] != pts[k].1 {
            return Err(format!("vertex {k} not in contact"));
        }
    }
    for w in c.windows(3) {
        let (a, b, d) = (pts[w[0]], pts[w[1]], pts[w[2]]);
        let s1 = (b.1 - a.1) / (b.0 - a.0);
        let s2 = (d.1 - b.1) / (d.0 - b.0);
        if s2 < s1 {
            return Err(format!("slopes decrease at vertex {}: {s1} > {s2}", w[1]));
        }
    }
    for w in c.windows(2) {
        for j in w[0] + 1..w[1] {
            if g.values[j] != line_at(pts[w[0]], pts[w[1]], pts[j].0) {
                return Err(format!("point {j} off its chord"));
            }
        }
    }
    let scale = pts.iter().map(|p| p.1.abs()).fold(1.0, f64::max);
    let slopes: Vec<f64> = g
        .values
        .windows(2)
        .zip(pts.windows(2))
        .map(|(v, p)| (v[1] - v[0]) / (p[1].0 - p[0].0))
        .collect();
    for (k, s) in slopes.windows(2).enumerate() {
        let tol = 1e-9 * scale / (pts[k + 1].0 - pts[k].0).min(pts[k + 2].0 - pts[k + 1].0);
        if s[1] < s[0] - tol {
            return Err(format!("slopes decrease at point {}", k + 1));
        }
    }
    Ok(())
}

/// Monte Carlo estimate of E[H⁻¹(U_{i:n})] with U_{i:n} taken as the i-th
/// smallest of n uniforms. Returns (mean, standard error).
pub fn monte_carlo_transformed_beta<R: Rng>(
    rng: &mut R,
    t: ReferenceTransform,
    s: OrderStatSpec,
    draws: usize,
) -> (f64, f64) {
    let (i, n) = (s.rank() as usize, s.size() as usize);
    let mut buf = vec![0.0; n];
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..draws {
        for u in buf.iter_mut() {
            *u = rng.sample(Open01);
        }
        let (_, &mut u, _) = buf.select_nth_unstable_by(i - 1, f64::total_cmp);
        let v = t.quantile(u);
        sum += v;
        sq += v * v;
    }
    let k = draws as f64;
    let mean = sum / k;
    let var = (sq - k * mean * mean) / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// A spec whose transformed expectation has finite fourth moment, so the
/// standard error estimate is stable.
pub fn random_beta_spec<R: Rng>(rng: &mut R) -> (ReferenceTransform, OrderStatSpec) {
    let t = ReferenceTransform::ALL[rng.gen_range(0..4)];
    let n = rng.gen_range(5..=50u32);
    let top = if t == ReferenceTransform::Odds {
        n - 4
    } else {
        n
    };
    let i = rng.gen_range(1..=top);
    (t, OrderStatSpec::new(i, n).unwrap())
}

/// Closed form vs Monte Carlo within three standard errors.
pub fn closed_form_agrees<R: Rng>(
    rng: &mut R,
    t: ReferenceTransform,
    s: OrderStatSpec,
) -> Result<(), String> {
    let exact = expected_transformed_beta(t, s);
    let (mean, se) = monte_carlo_transformed_beta(rng, t, s, 20_000);
    if (mean - exact).abs() <= 3.0 * se {
        Ok(())
    } else {
        Err(format!(
            "{} {s}: closed form {exact}, Monte Carlo {mean} ± {se}",
            t.name()
        ))
    }
}

/// Certification by a weaker-class condition must follow from a
/// stronger-class one: CO ⇒ IFR ⇒ C and IFR ⇒ CL.
pub fn implication_chain_holds(si: OrderStatSpec, sj: OrderStatSpec) -> Result<(), String> {
    let c = |k| corollary1(k, si, sj).certified;
    let (co, ifr, conv, cl) = (
        c(ConvexityClass::CO),
        c(ConvexityClass::IFR),
        c(ConvexityClass::C),
        c(ConvexityClass::CL),
    );
    if co && !ifr {
        return Err(format!("{si} vs {sj}: CO certified, IFR not"));
    }
    if ifr && !(conv && cl) {
        return Err(format!("{si} vs {sj}: IFR certified, C={conv} CL={cl}"));
    }
    Ok(())
}

pub fn random_rank_pair<R: Rng>(rng: &mut R) -> (OrderStatSpec, OrderStatSpec) {
    let n = rng.gen_range(1..=200u32);
    let m = rng.gen_range(1..=200u32);
    let j = rng.gen_range(1..=m.min(n));
    let i = rng.gen_range(j..=n);
    (
        OrderStatSpec::new(i, n).unwrap(),
        OrderStatSpec::new(j, m).unwrap(),
    )
}

/// A random member of one of the catalog families.
pub fn random_distribution<R: Rng>(rng: &mut R) -> Distribution {
    let mut shape = |lo: f64, hi: f64| rng.gen_range(lo..hi);
    let family = match shape(0.0, 14.0) as u32 {
        0 => {
            let a = shape(-2.0, 2.0);
            Family::Uniform {
                a,
                b: a + shape(0.5, 3.0),
            }
        }
        1 => Family::PowerFunction {
            a: shape(0.3, 4.0),
            b: shape(0.5, 3.0),
        },
        2 => Family::Logistic {
            mu: shape(-2.0, 2.0),
            sigma: shape(0.3, 3.0),
        },
        3 => Family::Gumbel {
            mu: shape(-2.0, 2.0),
            sigma: shape(0.3, 3.0),
        },
        4 => Family::Exponential { a: shape(0.2, 4.0) },
        5 => Family::Normal {
            mu: shape(-2.0, 2.0),
            sigma: shape(0.3, 3.0),
        },
        6 => Family::Beta {
            a: shape(0.3, 4.0),
            b: shape(0.3, 4.0),
        },
        7 => Family::Gamma {
            a: shape(0.3, 5.0),
            b: shape(0.3, 3.0),
        },
        8 => Family::Weibull {
            a: shape(0.3, 5.0),
            b: shape(0.3, 3.0),
        },
        9 => Family::Cauchy {
            mu: shape(-2.0, 2.0),
            sigma: shape(0.3, 3.0),
        },
        10 => Family::Lognormal {
            mu: shape(-1.0, 1.0),
            sigma: shape(0.2, 1.5),
        },
        11 => Family::LogLogistic {
            a: shape(0.5, 6.0),
            b: shape(0.3, 3.0),
        },
        12 => Family::Pareto {
            a: shape(0.5, 6.0),
            b: shape(0.3, 3.0),
        },
        _ => Family::Dagum {
            a: shape(1.0, 6.0),
            p: shape(0.3, 3.0),
            b: shape(0.3, 3.0),
        },
    };
    Distribution::new(family).unwrap()
}

/// One soundness instance: a parent in `class` (by the tabulated entry and
/// the grid check), and the smallest certified rank for a random (j, m).
pub struct SoundnessCase {
    pub parent: Distribution,
    pub class: ConvexityClass,
    pub si: OrderStatSpec,
    pub sj: OrderStatSpec,
}

pub fn random_soundness_case<R: Rng>(rng: &mut R) -> SoundnessCase {
    loop {
        let parent = random_distribution(rng);
        let classes: Vec<ConvexityClass> = ConvexityClass::ALL
            .into_iter()
            .filter(|&k| parent.class_membership(k).member && parent.numerical_convexity(k))
            .collect();
        if classes.is_empty() {
            continue;
        }
        let class = classes[rng.gen_range(0..classes.len())];
        let m = rng.gen_range(2..=25u32);
        let j = rng.gen_range(1..=m);
        let n = rng.gen_range(2..=30u32);
        let sj = OrderStatSpec::new(j, m).unwrap();
        let Some(i) = min_rank(class, n, sj).unwrap().rank else {
            continue;
        };
        let i = (i + rng.gen_range(0..=1)).min(n);
        let si = OrderStatSpec::new(i, n).unwrap();
        let finite = |s| {
            OrderStatistic::new(parent, s)
                .expectation()
                .is_ok_and(f64::is_finite)
        };
        if finite(si) && finite(sj) {
            return SoundnessCase {
                parent,
                class,
                si,
                sj,
            };
        }
    }
}

/// A certified pair must not be refuted by the numerical check.
pub fn corollary_is_sound(case: &SoundnessCase) -> Result<SsdOutcome, String> {
    let v = corollary1(case.class, case.si, case.sj);
    if !v.certified {
        return Err(format!(
            "{} {} vs {} not certified",
            case.class, case.si, case.sj
        ));
    }
    let x = OrderStatistic::new(case.parent, case.si);
    let y = OrderStatistic::new(case.parent, case.sj);
    let verdict = ssd_numeric(&x, &y);
    match verdict.outcome {
        SsdOutcome::Fails => Err(format!(
            "{} under {}: {} vs {} certified but refuted (gap {:e} at {})",
            case.parent, case.class, case.si, case.sj, verdict.sup_gap, verdict.witness
        )),
        o => Ok(o),
    }
}
