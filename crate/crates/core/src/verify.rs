//! Named verification suites. Each suite emits one or more reports, one per
//! check, each with its own tolerance.
//!
//! Count-type checks (monotonicity, signs) report the number of violating
//! points as the residual against a tolerance of zero.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::calculus::FD_STEP;
use crate::elliptic::{constants, zn_oracle, EllipticConstants};
use crate::error::{Error, Result};
use crate::grid::{k_grid, linspace, Spacing};
use crate::modulus::Modulus;
use crate::par;
use crate::properties::{asymptotic_slope, classify, theta_nonmonotonicity_scan, SignSummary, Sign, Verdict};
use crate::theta::ThetaKind;

const MAX_DETAILS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: usize,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Failing points, truncated.
    pub details: Vec<String>,
}

impl VerificationReport {
    pub fn to_line(&self) -> String {
        format!(
            "{} {} cases={} worst_residual={:e} tolerance={:e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.cases,
            self.worst_residual,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Identities,
    Lemma1,
    Lemma2,
    Lemma3,
    Lemma4,
    Heat,
    Thm1Mono,
    Thm1Asym,
    Thm1Convex,
    Eq1,
    Nonmono,
    SnZnMonotone,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Identities,
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Lemma3,
        Suite::Lemma4,
        Suite::Heat,
        Suite::Thm1Mono,
        Suite::Thm1Asym,
        Suite::Thm1Convex,
        Suite::Eq1,
        Suite::Nonmono,
        Suite::SnZnMonotone,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Lemma3 => "lemma3",
            Suite::Lemma4 => "lemma4",
            Suite::Heat => "heat",
            Suite::Thm1Mono => "thm1-mono",
            Suite::Thm1Asym => "thm1-asym",
            Suite::Thm1Convex => "thm1-convex",
            Suite::Eq1 => "eq1",
            Suite::Nonmono => "nonmono",
            Suite::SnZnMonotone => "sn-zn-monotone",
        }
    }

    /// Resolves a selector; `all` expands to every suite.
    pub fn select(selector: &str) -> Result<Vec<Suite>> {
        if selector == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        selector.parse().map(|s| vec![s])
    }

    pub fn run(self, overrides: &HashMap<String, f64>) -> Vec<VerificationReport> {
        let mut out = Reports { overrides, reports: Vec::new() };
        match self {
            Suite::Identities => identities(&mut out),
            Suite::Lemma1 => lemma1(&mut out),
            Suite::Lemma2 => lemma2(&mut out),
            Suite::Lemma3 => lemma3(&mut out),
            Suite::Lemma4 => lemma4(&mut out),
            Suite::Heat => heat(&mut out),
            Suite::Thm1Mono => thm1_mono(&mut out),
            Suite::Thm1Asym => thm1_asym(&mut out),
            Suite::Thm1Convex => thm1_convex(&mut out),
            Suite::Eq1 => eq1(&mut out),
            Suite::Nonmono => nonmono(&mut out),
            Suite::SnZnMonotone => sn_zn_monotone(&mut out),
        }
        out.reports
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

/// Runs the selected suites; every override key must name a produced report.
pub fn run_suites(suites: &[Suite], overrides: &HashMap<String, f64>) -> Result<Vec<VerificationReport>> {
    let reports: Vec<VerificationReport> = suites.iter().flat_map(|s| s.run(overrides)).collect();
    if let Some(unknown) = overrides.keys().find(|key| !reports.iter().any(|r| &r.suite == *key)) {
        return Err(Error::InvalidArgument(format!("tolerance override for unknown report {unknown:?}")));
    }
    Ok(reports)
}

struct Reports<'a> {
    overrides: &'a HashMap<String, f64>,
    reports: Vec<VerificationReport>,
}

impl Reports<'_> {
    /// Folds `(residual, description)` pairs in order into one report.
    fn numeric<I>(&mut self, name: &str, tolerance: f64, results: I)
    where
        I: IntoIterator<Item = (Result<f64>, String)>,
    {
        let tolerance = self.overrides.get(name).copied().unwrap_or(tolerance);
        let mut cases = 0;
        let mut worst = 0.0_f64;
        let mut details = Vec::new();
        for (residual, what) in results {
            cases += 1;
            let r = match residual {
                Ok(r) if !r.is_nan() => r.abs(),
                Ok(_) => f64::INFINITY,
                Err(e) => {
                    if details.len() < MAX_DETAILS {
                        details.push(format!("{what}: {e}"));
                    }
                    f64::INFINITY
                }
            };
            if r > tolerance && r.is_finite() && details.len() < MAX_DETAILS {
                details.push(format!("{what}: residual {r:e}"));
            }
            worst = worst.max(r);
        }
        self.reports.push(VerificationReport {
            suite: name.to_string(),
            cases,
            worst_residual: worst,
            tolerance,
            passed: worst <= tolerance,
            details,
        });
    }

    /// Counts violations; `Ok(true)` means the point satisfies the property.
    fn counting<I>(&mut self, name: &str, results: I)
    where
        I: IntoIterator<Item = (Result<bool>, String)>,
    {
        let tolerance = self.overrides.get(name).copied().unwrap_or(0.0);
        let mut cases = 0;
        let mut violations = 0usize;
        let mut details = Vec::new();
        for (ok, what) in results {
            cases += 1;
            let failed = match ok {
                Ok(true) => None,
                Ok(false) => Some(what),
                Err(e) => Some(format!("{what}: {e}")),
            };
            if let Some(d) = failed {
                violations += 1;
                if details.len() < MAX_DETAILS {
                    details.push(d);
                }
            }
        }
        let worst = violations as f64;
        self.reports.push(VerificationReport {
            suite: name.to_string(),
            cases,
            worst_residual: worst,
            tolerance,
            passed: worst <= tolerance,
            details,
        });
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// `|a - b| / max(|b|, 1)`.
fn mixed_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn modulus(k: f64) -> EllipticConstants {
    constants(Modulus::new(k).expect("grid modulus in range"))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random moduli spread over both ends of `(1e-6, 1 - 1e-9)`.
fn random_moduli(seed: u64, n: usize) -> Vec<Modulus> {
    let mut r = rng(seed);
    (0..n)
        .map(|i| {
            if i % 2 == 0 {
                Modulus::new(r.gen_range(1e-6..1.0 - 1e-9)).expect("in range")
            } else {
                let kp = 10f64.powf(-r.gen_range(0.0..4.3));
                Modulus::from_complementary(kp.min(0.999_999)).expect("in range")
            }
        })
        .collect()
}

fn identities(out: &mut Reports) {
    let moduli = random_moduli(1, 1000);
    let legendre = par::map(&moduli, |&m| {
        let c = constants(m);
        (Ok(rel_err(c.legendre(), PI / 2.0)), format!("k={}", m.k()))
    });
    out.numeric("identities/legendre", 1e-12, legendre);

    let mut r = rng(2);
    let points: Vec<(f64, Modulus)> = moduli
        .iter()
        .map(|&m| (r.gen_range(-10.0..10.0), m))
        .collect();
    let pyth = par::map(&points, |&(u, m)| {
        let (sn, cn, dn) = constants(m).sn_cn_dn(u);
        let a = (sn * sn + cn * cn - 1.0).abs();
        let b = (dn * dn + m.k_sq() * sn * sn - 1.0).abs();
        (Ok(a.max(b)), format!("u={u}, k={}", m.k()))
    });
    out.numeric("identities/pythagorean", 1e-12, pyth);

    let mut r = rng(3);
    let zpts: Vec<(f64, f64)> = (0..200).map(|_| (r.gen_range(0.01..0.99), r.gen_range(0.0..1.0))).collect();
    let symmetry = par::map(&zpts, |&(k, x)| {
        let c = modulus(k);
        let u = x * 3.0 * c.big_k;
        let res = (|| {
            let z = c.zn(u)?;
            let odd = (c.zn(-u)? + z).abs();
            let periodic = (c.zn(u + 2.0 * c.big_k)? - z).abs();
            Ok(odd.max(periodic))
        })();
        (res, format!("u={u}, k={k}"))
    });
    out.numeric("identities/zn-symmetry", 1e-11, symmetry);

    let oracle = par::map(&zpts, |&(k, x)| {
        let c = modulus(k);
        let u = x * c.big_k;
        let res = (|| Ok((zn_oracle(u, c.modulus)? - c.zn(u)?).abs()))();
        (res, format!("u={u}, k={k}"))
    });
    out.numeric("identities/zn-oracle", 1e-10, oracle);
}

fn lemma1(out: &mut Reports) {
    let ks = [0.1, 0.3, 0.5, 0.7, 0.9];
    let rows = par::map(&ks, |&k| {
        let d = modulus(k).lemma1();
        let fd = |f: fn(&EllipticConstants) -> f64| {
            crate::finite_difference_dk(|m| Ok(f(&constants(m))), k, FD_STEP)
        };
        let checks: [(&str, Result<f64>, f64); 4] = [
            ("K", fd(|c| c.big_k), d.d_big_k),
            ("K'", fd(|c| c.big_k_prime), d.d_big_k_prime),
            ("1/K", fd(|c| 1.0 / c.big_k), d.d_inv_big_k),
            ("K'/K", fd(|c| c.big_k_prime / c.big_k), d.d_period_ratio),
        ];
        checks
            .into_iter()
            .map(|(what, fd, exact)| (fd.map(|fd| rel_err(exact, fd)), format!("d{what}/dk at k={k}")))
            .collect::<Vec<_>>()
    });
    out.numeric("lemma1/finite-difference", 1e-6, rows.into_iter().flatten());

    let chain = ks.iter().map(|&k| {
        let c = modulus(k);
        let d = c.lemma1();
        let sign_ok = if d.d_period_ratio < 0.0 { 0.0 } else { f64::INFINITY };
        (
            Ok(rel_err(d.d_inv_big_k, -d.d_big_k / (c.big_k * c.big_k)).max(sign_ok)),
            format!("k={k}"),
        )
    });
    out.numeric("lemma1/chain-rule", 1e-12, chain.collect::<Vec<_>>());
}

fn lemma2(out: &mut Reports) {
    let kp = 1e-5;
    let c = constants(Modulus::from_complementary(kp).expect("in range"));
    let a = kp / 4.0;
    out.numeric(
        "lemma2/K-log",
        1e-3,
        [(Ok(c.big_k / (4.0 / kp).ln() - 1.0), format!("k'={kp}"))],
    );
    let lambdas = [0.25, 0.5, 0.75];
    let cn_dn = lambdas.iter().map(|&l| {
        let (_, cn, dn) = c.sn_cn_dn(l * c.big_k);
        let lead = 2.0 * a.powf(l);
        (Ok((cn / lead - 1.0).abs().max((dn / lead - 1.0).abs())), format!("lambda={l}"))
    });
    out.numeric("lemma2/cn-dn", 0.02, cn_dn.collect::<Vec<_>>());
    let sn = lambdas.iter().map(|&l| {
        let (sn, _, _) = c.sn_cn_dn(l * c.big_k);
        let lead = 2.0 * a.powf(2.0 * l);
        (Ok((sn - (1.0 - lead)).abs() / lead), format!("lambda={l}"))
    });
    out.numeric("lemma2/sn", 0.05, sn.collect::<Vec<_>>());
    let zn = lambdas.iter().map(|&l| {
        (c.zn(l * c.big_k).map(|z| z - (1.0 - l)), format!("lambda={l}"))
    });
    out.numeric("lemma2/zn", 5e-3, zn.collect::<Vec<_>>());
}

fn lemma3(out: &mut Reports) {
    let mut r = rng(4);
    let pts: Vec<(f64, f64)> = (0..100).map(|_| (r.gen_range(0.05..0.95), r.gen_range(-2.0..2.0))).collect();
    let rows = par::map(&pts, |&(k, x)| {
        let c = modulus(k);
        let u = x * c.big_k;
        let res = (|| {
            let mut worst = 0.0_f64;
            for kind in ThetaKind::ALL {
                let d1 = mixed_err(c.theta_du(kind, u)?, c.theta_series_derivative(kind, u, 1)?);
                let d2 = mixed_err(c.theta_d2u(kind, u)?, c.theta_series_derivative(kind, u, 2)?);
                worst = worst.max(d1).max(d2);
            }
            Ok(worst)
        })();
        (res, format!("u={u}, k={k}"))
    });
    out.numeric("lemma3/series", 1e-10, rows);

    let mut r = rng(5);
    let qpts: Vec<(f64, f64)> = (0..200).map(|_| (r.gen_range(0.01..0.99), r.gen_range(0.05..1.95))).collect();
    let quotient = par::map(&qpts, |&(k, x)| {
        let c = modulus(k);
        let u = x * c.big_k;
        let res = (|| {
            let h = c.theta(ThetaKind::H, u)?.value;
            let t = c.theta(ThetaKind::Theta, u)?.value;
            let (sn, _, _) = c.sn_cn_dn(u);
            Ok(rel_err(h / t, k.sqrt() * sn))
        })();
        (res, format!("u={u}, k={k}"))
    });
    out.numeric("lemma3/quotient", 1e-11, quotient);

    let constants_rows = [0.1, 0.5, 0.9, 0.99].map(|k| {
        let c = modulus(k);
        let res = (|| {
            let t = c.theta(ThetaKind::Theta, 0.0)?.value;
            let t1 = c.theta(ThetaKind::Theta1, 0.0)?.value;
            let h1 = c.theta(ThetaKind::H1, 0.0)?.value;
            Ok(rel_err((h1 / t1).powi(2), k).max(rel_err((t / t1).powi(2), c.modulus.k_prime())))
        })();
        (res, format!("k={k}"))
    });
    out.numeric("lemma3/theta-constants", 1e-11, constants_rows);

    let mut r = rng(6);
    let spts: Vec<(f64, f64)> = (0..100).map(|_| (r.gen_range(0.01..0.99), r.gen_range(-2.0..2.0))).collect();
    let symmetry = par::map(&spts, |&(k, x)| {
        let c = modulus(k);
        let u = x * c.big_k;
        let res = (|| {
            let mut worst = (c.theta(ThetaKind::Theta1, u)?.value - c.theta(ThetaKind::Theta, u + c.big_k)?.value).abs();
            for kind in ThetaKind::ALL {
                let (parity, period) = match kind {
                    ThetaKind::H => (-1.0, -1.0),
                    ThetaKind::H1 => (1.0, -1.0),
                    _ => (1.0, 1.0),
                };
                let x = c.theta(kind, u)?.value;
                worst = worst
                    .max((c.theta(kind, -u)?.value - parity * x).abs())
                    .max((c.theta(kind, u + 2.0 * c.big_k)?.value - period * x).abs());
            }
            Ok(worst)
        })();
        (res, format!("u={u}, k={k}"))
    });
    out.numeric("lemma3/parity-shift", 1e-13, symmetry);
}

/// Finite-difference oracle for `d/dk ϑ(λK, k)`; the constant term of the
/// even-frequency series is dropped so the difference keeps its digits.
pub fn theta_dk_finite_difference(kind: ThetaKind, lambda: f64, k: f64) -> Result<f64> {
    crate::finite_difference_dk(
        |m| {
            let c = constants(m);
            Ok(c.theta_oscillatory(kind, lambda * c.big_k)?.value)
        },
        k,
        FD_STEP,
    )
}

fn lemma4(out: &mut Reports) {
    let mut pts = Vec::new();
    for kind in ThetaKind::ALL {
        for lambda in [0.2, 0.5, 0.8, 1.3] {
            for k in [0.2, 0.5, 0.8] {
                pts.push((kind, lambda, k));
            }
        }
    }
    let rows = par::map(&pts, |&(kind, lambda, k)| {
        let res = (|| {
            let exact = modulus(k).dtheta_dk_at(kind, lambda)?;
            Ok(rel_err(exact, theta_dk_finite_difference(kind, lambda, k)?))
        })();
        (res, format!("{kind}, lambda={lambda}, k={k}"))
    });
    out.numeric("lemma4/finite-difference", 1e-5, rows);
}

fn heat(out: &mut Reports) {
    let mut pts = Vec::new();
    for kind in ThetaKind::ALL {
        for v in linspace(0.0, 1.0, 10) {
            for t in linspace(0.3, 3.0, 10) {
                pts.push((kind, v, t));
            }
        }
    }
    let rows = par::map(&pts, |&(kind, v, t)| {
        (crate::heat_residual(kind, v, t), format!("theta{}, v={v}, t={t}", kind.theta_index()))
    });
    out.numeric("heat/residual", 1e-9, rows);
}

/// Slack allowed between adjacent grid values before a step counts as non-strict.
fn slack(x: f64) -> f64 {
    1e-14 * x.abs()
}

fn thm1_mono(out: &mut Reports) {
    let grid = k_grid(0.01, 0.99, 100, Spacing::Linear).expect("valid grid");
    let mut r = rng(7);
    let mut pairs = Vec::new();
    while pairs.len() < 40 {
        let (l, m) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
        let want_decreasing = pairs.len() < 20;
        let p = classify(l, m);
        match (p.verdict, want_decreasing) {
            (Verdict::Decreasing, true) | (Verdict::Increasing, false) => pairs.push(p),
            _ => {}
        }
    }
    let rows = par::map(&pairs, |p| {
        let sign = if p.verdict == Verdict::Decreasing { -1.0 } else { 1.0 };
        let res = grid
            .iter()
            .map(|&m| {
                let c = constants(m);
                Ok((c.ratio(p.lambda, p.mu)?, c.ratio_dk(p.lambda, p.mu)?))
            })
            .collect::<Result<Vec<_>>>();
        let what = format!("lambda={}, mu={}", p.lambda, p.mu);
        match res {
            Ok(values) => {
                let monotone = values
                    .windows(2)
                    .all(|w| sign * (w[1].0 - w[0].0) > slack(w[0].0) && w[0].0 > 0.0);
                let dk = values.iter().all(|&(_, d)| sign * d > 0.0);
                ((Ok(monotone), what.clone()), (Ok(dk), what))
            }
            Err(e) => ((Err(e.clone()), what.clone()), (Err(e), what)),
        }
    });
    let (mono, dk): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    out.counting("thm1-mono/ratio-monotone", mono);
    out.counting("thm1-mono/ratio-dk-sign", dk);

    let constant = [0.05, 0.3, 0.6, 0.95].iter().flat_map(|&k| {
        [-0.7, 0.2, 0.45].map(move |mu| {
            (modulus(k).ratio(mu + 2.0, mu).map(|x| x - 1.0), format!("mu={mu}, k={k}"))
        })
    });
    out.numeric("thm1-mono/constant", 1e-13, constant.collect::<Vec<_>>());

    let recip = pairs.iter().take(10).flat_map(|p| {
        [0.1, 0.5, 0.9].map(|k| {
            let c = modulus(k);
            let res = (|| Ok(c.ratio(p.lambda, p.mu)? * c.ratio(p.mu, p.lambda)? - 1.0))();
            (res, format!("lambda={}, mu={}, k={k}", p.lambda, p.mu))
        })
    });
    out.numeric("thm1-mono/reciprocal", 1e-13, recip.collect::<Vec<_>>());

    let ks = [0.2, 0.5, 0.8, 0.95];
    let interior: Vec<(f64, f64)> = ks
        .iter()
        .flat_map(|&k| (1..=50).map(move |i| (k, i as f64 / 51.0)))
        .collect();
    let g_rows = par::map(&interior, |&(k, x)| {
        let c = modulus(k);
        (c.g_du(x * c.big_k).map(|d| d < 0.0), format!("u={x}K, k={k}"))
    });
    out.counting("thm1-mono/g-decreasing", g_rows);
    let h_rows = par::map(&interior, |&(k, x)| {
        let c = modulus(k);
        (c.h(x * c.big_k).map(|h| h > 0.0), format!("u={x}K, k={k}"))
    });
    out.counting("thm1-mono/h-positive", h_rows);
    let h_ends = ks.iter().map(|&k| {
        let c = modulus(k);
        let res = (|| Ok(c.h(0.0)?.abs().max(c.h(c.big_k)?.abs())))();
        (res, format!("k={k}"))
    });
    out.numeric("thm1-mono/h-endpoints", 1e-12, h_ends.collect::<Vec<_>>());
    let h_curv = par::map(&interior, |&(k, x)| {
        let c = modulus(k);
        let u = x * c.big_k;
        let step = 1e-3;
        let res = (|| {
            let fd = (c.h(u + step)? - 2.0 * c.h(u)? + c.h(u - step)?) / (step * step);
            let closed = c.h_second(u)?;
            if fd >= 0.0 || closed >= 0.0 {
                return Ok(f64::INFINITY);
            }
            Ok(rel_err(closed, fd))
        })();
        (res, format!("u={x}K, k={k}"))
    });
    out.numeric("thm1-mono/h-concave", 1e-5, h_curv);
}

fn thm1_asym(out: &mut Reports) {
    let grid = [0.25, 0.5, 0.75];
    let small = grid.iter().flat_map(|&l| {
        grid.map(|m| {
            let res = (|| {
                let a = modulus(1e-2).ratio(l, m)? - 1.0;
                let b = modulus(1e-4).ratio(l, m)? - 1.0;
                // scale the k = 1e-2 bound onto the k = 1e-4 tolerance
                Ok((a.abs() * 1e-4).max(b.abs()))
            })();
            (res, format!("lambda={l}, mu={m}"))
        })
    });
    out.numeric("thm1-asym/small-k", 1e-7, small.collect::<Vec<_>>());

    let slopes = [(0.3, 0.7), (0.25, 0.5), (0.7, 0.3)].map(|(l, m)| {
        let exponent = classify(l, m).exponent;
        (
            asymptotic_slope(l, m, 1e-5).map(|s| rel_err(s, exponent)),
            format!("lambda={l}, mu={m}"),
        )
    });
    out.numeric("thm1-asym/slope", 0.01, slopes);
}

fn thm1_convex(out: &mut Reports) {
    let mut endpoints = Vec::new();
    let mut pts = Vec::new();
    for mu in [0.3, 0.5, 0.7] {
        for k in [0.3, 0.7] {
            endpoints.push((mu, k));
            for i in 1..=20 {
                pts.push((mu, i as f64 / 21.0, k));
            }
        }
    }
    let ends = endpoints.iter().map(|&(mu, k)| {
        let c = modulus(k);
        let res = (|| Ok((c.convexity_f(mu, 0.0)? - 1.0).abs().max((c.convexity_f(mu, 1.0)? - 1.0).abs())))();
        (res, format!("mu={mu}, k={k}"))
    });
    out.numeric("thm1-convex/endpoints", 1e-12, ends.collect::<Vec<_>>());

    let rows = par::map(&pts, |&(mu, lambda, k)| {
        let c = modulus(k);
        let step = 1e-4;
        let res = (|| {
            let closed = c.convexity_f_second(mu, lambda)?;
            let fd = (c.convexity_f(mu, lambda + step)? - 2.0 * c.convexity_f(mu, lambda)?
                + c.convexity_f(mu, lambda - step)?)
                / (step * step);
            Ok((closed, rel_err(closed, fd)))
        })();
        (res, format!("mu={mu}, lambda={lambda}, k={k}"))
    });
    out.counting(
        "thm1-convex/positive",
        rows.iter().map(|(r, w)| (r.clone().map(|(c, _)| c > 0.0), w.clone())).collect::<Vec<_>>(),
    );
    out.numeric(
        "thm1-convex/second-difference",
        1e-5,
        rows.into_iter().map(|(r, w)| (r.map(|(_, e)| e), w)).collect::<Vec<_>>(),
    );
}

fn eq1(out: &mut Reports) {
    let mut r = rng(8);
    let pts: Vec<(f64, f64, f64)> = (0..20)
        .map(|_| {
            let k = r.gen_range(0.05..0.95);
            // v in (0, 2K), u in (0, min(v, 2K - v))
            let v: f64 = r.gen_range(0.05..1.95);
            let u = r.gen_range(0.02..0.98) * v.min(2.0 - v);
            (k, u, v)
        })
        .collect();
    let rows = par::map(&pts, |&(k, u, v)| {
        let c = modulus(k);
        let res = c.log_h_ratio(u * c.big_k, v * c.big_k).map(|(lhs, rhs)| lhs - rhs);
        (res, format!("u={u}K, v={v}K, k={k}"))
    });
    out.numeric("eq1/identity", 1e-8, rows);

    let c = modulus(1e-4);
    let trig = [(0.3, 0.9), (0.1, 1.2), (0.5, 0.6)].map(|(u, v)| {
        let s = PI / (2.0 * c.big_k);
        let closed = ((s * (v - u)).sin() / (s * (v + u)).sin()).ln();
        let res = c.log_h_ratio(u, v).map(|(lhs, rhs)| (lhs - closed).abs().max((rhs - closed).abs()));
        (res, format!("u={u}, v={v}"))
    });
    out.numeric("eq1/trig-limit", 1e-6, trig);
}

/// The k grid used for the non-monotonicity claims.
pub fn nonmono_grid() -> Vec<Modulus> {
    k_grid(0.01, 0.99, 50, Spacing::Linear).expect("valid grid")
}

fn nonmono(out: &mut Reports) {
    let grid = nonmono_grid();
    let signs = |lambda: f64| theta_nonmonotonicity_scan(lambda, &grid);
    let fixed = |want: Sign, lambda: f64| match signs(lambda) {
        Ok(s) => s
            .iter()
            .zip(&grid)
            .map(|(&got, m)| (Ok(got == want), format!("lambda={lambda}, k={}", m.k())))
            .collect::<Vec<_>>(),
        Err(e) => vec![(Err(e), format!("lambda={lambda}"))],
    };
    out.counting("nonmono/lambda-0.5-decreasing", fixed(Sign::Negative, 0.5));
    out.counting("nonmono/lambda-0.6-increasing", fixed(Sign::Positive, 0.6));
    let lambdas: Vec<f64> = (1..10).map(|i| 0.5 + 0.01 * i as f64).collect();
    let changes = lambdas
        .iter()
        .map(|&l| signs(l).map(|s| SignSummary::from_signs(&s).map_or(0, |x| x.changes)))
        .collect::<Result<Vec<_>>>();
    let found = changes.map(|c| c.iter().any(|&n| n > 0));
    out.counting("nonmono/sign-change-in-(0.5,0.6)", [(found, "lambda in 0.51..0.59".to_string())]);
}

fn sn_zn_monotone(out: &mut Reports) {
    let grid = k_grid(0.01, 0.99, 50, Spacing::Linear).expect("valid grid");
    let lambdas = [0.2, 0.5, 0.8];
    let rows = par::map(&lambdas, |&l| {
        let values = grid
            .iter()
            .map(|&m| {
                let c = constants(m);
                let p = c.jacobi_point(l * c.big_k)?;
                Ok((p.sn, p.zn))
            })
            .collect::<Result<Vec<_>>>();
        let what = format!("lambda={l}");
        match values {
            Ok(v) => {
                let sn = v.windows(2).all(|w| w[1].0 - w[0].0 > slack(w[0].0));
                let zn = v.windows(2).all(|w| w[1].1 - w[0].1 > slack(w[0].1));
                ((Ok(sn), what.clone()), (Ok(zn), what))
            }
            Err(e) => ((Err(e.clone()), what.clone()), (Err(e), what)),
        }
    });
    let (sn, zn): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    out.counting("sn-zn-monotone/sn-increasing", sn);
    out.counting("sn-zn-monotone/zn-increasing", zn);
}
