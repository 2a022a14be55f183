//! Seeded data-generating processes and the Monte Carlo driver.
//!
//! Replication `j` draws from ChaCha8 keyed by the run seed with stream id
//! `j`, so every replication is a pure function of `(seed, j)` and the
//! summary does not depend on how replications are scheduled across threads.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{analyze, DeterministicSpec, TimeSeriesPanel};
use crate::error::{domain, Error, Result};
use crate::stats::{lr_stat, LrValue};

/// Environment variable overriding the number of Monte Carlo workers.
pub const THREADS_ENV: &str = "HDCOINT_THREADS";

/// Percentile levels reported everywhere in the summaries.
pub const PERCENTILES: [f64; 5] = [5.0, 25.0, 50.0, 75.0, 95.0];

/// Innovations are i.i.d. `N(0, I_p)` in every variant; `X_0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DgpSpec {
    /// `X_t = X_{t-1} + ε_t`.
    RandomWalk,
    /// `X_t = ρ X_{t-1} + ε_t`, `ρ ∈ [0, 1)`.
    StationaryAr1 { rho: f64 },
    /// `ΔX_t = Ψ + ε_t` with `Ψ ~ N(0, I_p)` drawn once per replication.
    RandomWalkWithConstant,
    /// First `white_noise` coordinates are `ε_t`, the rest random walks
    /// (`Π = diag(-I_k, 0)`).
    WhiteNoiseBlock { white_noise: usize },
}

impl DgpSpec {
    pub fn validate(&self, p: usize) -> Result<()> {
        if let Self::StationaryAr1 { rho } = *self {
            if !(0.0..1.0).contains(&rho) {
                return Err(domain(format!("rho = {rho} must lie in [0, 1)")));
            }
        }
        if let Self::WhiteNoiseBlock { white_noise } = *self {
            if white_noise > p {
                return Err(domain(format!(
                    "white_noise = {white_noise} exceeds p = {p}"
                )));
            }
        }
        Ok(())
    }
}

pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn gen_panel<R: Rng + ?Sized>(
    dgp: DgpSpec,
    p: usize,
    t: usize,
    rng: &mut R,
) -> Result<TimeSeriesPanel> {
    dgp.validate(p)?;
    let mut normal = || -> f64 { rng.sample(StandardNormal) };
    let drift: Vec<f64> = match dgp {
        DgpSpec::RandomWalkWithConstant => (0..p).map(|_| normal()).collect(),
        _ => vec![0.0; p],
    };
    let rho: Vec<f64> = (0..p)
        .map(|i| match dgp {
            DgpSpec::StationaryAr1 { rho } => rho,
            DgpSpec::WhiteNoiseBlock { white_noise } if i < white_noise => 0.0,
            _ => 1.0,
        })
        .collect();
    let mut x = DMatrix::<f64>::zeros(p, t + 1);
    for col in 1..=t {
        for i in 0..p {
            x[(i, col)] = rho[i] * x[(i, col - 1)] + drift[i] + normal();
        }
    }
    TimeSeriesPanel::new(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub p: usize,
    pub t: usize,
    pub reps: usize,
    pub dgp: DgpSpec,
    pub det_spec: DeterministicSpec,
    pub rank_r: usize,
    pub seed: u64,
    /// Keep every replication's ascending spectrum in the summary.
    #[serde(default)]
    pub keep_spectra: bool,
}

impl McConfig {
    pub fn new(p: usize, t: usize, reps: usize, dgp: DgpSpec) -> Self {
        Self {
            p,
            t,
            reps,
            dgp,
            det_spec: DeterministicSpec::NoDet,
            rank_r: 0,
            seed: 0,
            keep_spectra: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(domain("p must be at least 1"));
        }
        if self.reps == 0 {
            return Err(domain("reps must be at least 1"));
        }
        if self.t < self.p + 2 {
            return Err(domain(format!(
                "T = {} must be at least p + 2 = {}",
                self.t,
                self.p + 2
            )));
        }
        if self.rank_r >= self.p {
            return Err(domain(format!(
                "rank r = {} must be smaller than p = {}",
                self.rank_r, self.p
            )));
        }
        self.dgp.validate(self.p)
    }
}

/// Percentiles of one ascending-order index `i` (1-based) across
/// replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexQuantiles {
    pub index: usize,
    pub p05: f64,
    pub p25: f64,
    pub p50: f64,
    pub p75: f64,
    pub p95: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrSummary {
    pub p05: LrValue,
    pub p25: LrValue,
    pub p50: LrValue,
    pub p75: LrValue,
    pub p95: LrValue,
    pub mean: LrValue,
    pub n_infinite: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub config: McConfig,
    pub index_quantiles: Vec<IndexQuantiles>,
    /// Distribution of `LR / (2p²)` at rank `config.rank_r`.
    pub lr_scaled: LrSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectra: Option<Vec<Vec<f64>>>,
}

impl McSummary {
    /// All kept eigenvalues pooled and sorted; `None` unless the run kept
    /// spectra.
    pub fn pooled(&self) -> Option<Vec<f64>> {
        let spectra = self.spectra.as_ref()?;
        let mut all: Vec<f64> = spectra.iter().flatten().copied().collect();
        all.sort_by(f64::total_cmp);
        Some(all)
    }

    /// One row per index: `i,p05,p25,p50,p75,p95`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,p05,p25,p50,p75,p95\n");
        for q in &self.index_quantiles {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                q.index, q.p05, q.p25, q.p50, q.p75, q.p95
            ));
        }
        out
    }
}

/// Type-7 (linear interpolation) percentile of ascending `sorted`;
/// `pct` in `[0, 100]`. Infinite neighbours propagate.
pub fn percentile(sorted: &[f64], pct: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * pct / 100.0;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if frac == 0.0 || lo + 1 >= sorted.len() {
        return sorted[lo];
    }
    let (a, b) = (sorted[lo], sorted[lo + 1]);
    if !a.is_finite() || !b.is_finite() {
        return b;
    }
    a + frac * (b - a)
}

/// `sup_x |F_n(x) - F(x)|` for the empirical d.f. of ascending `sorted`.
pub fn kolmogorov_distance<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let f = cdf(x);
        d = d.max((j as f64 / n - f).abs()).max((f - i as f64 / n).abs());
        i = j;
    }
    d
}

struct Replication {
    ascending: Vec<f64>,
    lr_scaled: f64,
}

fn replicate(config: &McConfig, index: usize) -> Result<Replication> {
    let mut rng = substream(config.seed, index as u64);
    let panel = gen_panel(config.dgp, config.p, config.t, &mut rng)?;
    let spectrum = analyze(&panel, config.det_spec)?;
    let p = config.p as f64;
    let lr = lr_stat(&spectrum, config.rank_r)?;
    Ok(Replication {
        ascending: spectrum.ascending(),
        lr_scaled: lr.map(|v| v / (2.0 * p * p)).as_f64(),
    })
}

/// Worker count from `HDCOINT_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
}

/// Runs on a pool of `HDCOINT_THREADS` workers when that is set, otherwise
/// on the global rayon pool. The result does not depend on the worker count.
pub fn run_mc(config: &McConfig) -> Result<McSummary> {
    match threads_from_env() {
        Some(n) => run_mc_with_threads(config, n),
        None => run_in_current_pool(config),
    }
}

fn run_in_current_pool(config: &McConfig) -> Result<McSummary> {
    config.validate()?;
    let reps: Vec<Result<Replication>> = (0..config.reps)
        .into_par_iter()
        .map(|j| replicate(config, j))
        .collect();
    aggregate(config, reps)
}

/// Runs on a dedicated pool with `threads` workers.
pub fn run_mc_with_threads(config: &McConfig, threads: usize) -> Result<McSummary> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| domain(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_in_current_pool(config))
}

fn aggregate(config: &McConfig, reps: Vec<Result<Replication>>) -> Result<McSummary> {
    let mut spectra = Vec::with_capacity(reps.len());
    let mut lrs = Vec::with_capacity(reps.len());
    for (index, r) in reps.into_iter().enumerate() {
        let r = r.map_err(|e| Error::Replication {
            index,
            source: Box::new(e),
        })?;
        spectra.push(r.ascending);
        lrs.push(r.lr_scaled);
    }

    let index_quantiles = (0..config.p)
        .map(|i| {
            let mut col: Vec<f64> = spectra.iter().map(|s| s[i]).collect();
            col.sort_by(f64::total_cmp);
            let q = PERCENTILES.map(|pct| percentile(&col, pct));
            IndexQuantiles {
                index: i + 1,
                p05: q[0],
                p25: q[1],
                p50: q[2],
                p75: q[3],
                p95: q[4],
            }
        })
        .collect();

    let n_infinite = lrs.iter().filter(|v| !v.is_finite()).count();
    let mean = if n_infinite > 0 {
        LrValue::Infinite
    } else {
        LrValue::Finite(lrs.iter().sum::<f64>() / lrs.len() as f64)
    };
    lrs.sort_by(f64::total_cmp);
    let q = PERCENTILES.map(|pct| LrValue::from_f64(percentile(&lrs, pct)));
    let lr_scaled = LrSummary {
        p05: q[0],
        p25: q[1],
        p50: q[2],
        p75: q[3],
        p95: q[4],
        mean,
        n_infinite,
    };

    Ok(McSummary {
        config: config.clone(),
        index_quantiles,
        lr_scaled,
        spectra: config.keep_spectra.then_some(spectra),
    })
}
