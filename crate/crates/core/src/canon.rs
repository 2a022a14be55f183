//! Squared sample canonical correlations between `ΔX_t` and `X_{t-1}`.
//!
//! The pipeline is `difference_and_lag → residualize → moments →
//! squared_ccs`. The eigenvalues of `S01 S11⁻¹ S01' S00⁻¹` are obtained as
//! squared singular values of `L0⁻¹ S01 L1⁻ᵀ` (`Lᵢ` the Cholesky factors of
//! `Sᵢᵢ`), which keeps them real and inside `[0, 1]` up to rounding.

use nalgebra::{Cholesky, DMatrix, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Raw eigenvalues may stray this far outside `[0, 1]` before being treated
/// as a numerical failure.
pub const CLAMP_TOLERANCE: f64 = 1e-10;

/// Squared pivot of the correlation-scaled Cholesky factor below which a
/// moment matrix is reported as singular.
const SINGULAR_PIVOT: f64 = 1e-13;

/// Levels `X_0, …, X_T` of a `p`-variate series stored as a `p × (T+1)`
/// matrix (one row per variable).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesPanel {
    levels: DMatrix<f64>,
    names: Option<Vec<String>>,
}

impl TimeSeriesPanel {
    pub fn new(levels: DMatrix<f64>) -> Result<Self> {
        let p = levels.nrows();
        if p == 0 {
            return Err(Error::InvalidPanel("panel has no variables".into()));
        }
        let obs = levels.ncols();
        if obs < p + 3 {
            return Err(Error::InvalidPanel(format!(
                "{obs} observations for {p} variables; need at least p + 3 = {}",
                p + 3
            )));
        }
        if let Some((k, v)) = levels.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidPanel(format!(
                "non-finite value {v} at variable {}, observation {}",
                k % p,
                k / p
            )));
        }
        Ok(Self {
            levels,
            names: None,
        })
    }

    /// Builds a panel from time-ordered observation rows (row `t` holds
    /// `X_t`).
    pub fn from_observations(rows: &[Vec<f64>]) -> Result<Self> {
        let p = rows.first().map_or(0, Vec::len);
        if let Some(t) = rows.iter().position(|r| r.len() != p) {
            return Err(Error::InvalidPanel(format!(
                "observation {t} has {} values, expected {p}",
                rows[t].len()
            )));
        }
        Self::new(DMatrix::from_fn(p, rows.len(), |i, t| rows[t][i]))
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.p() {
            return Err(Error::InvalidPanel(format!(
                "{} names for {} variables",
                names.len(),
                self.p()
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn p(&self) -> usize {
        self.levels.nrows()
    }

    /// Number of differenced observations `T`.
    pub fn t(&self) -> usize {
        self.levels.ncols() - 1
    }

    pub fn levels(&self) -> &DMatrix<f64> {
        &self.levels
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// `A · X_t` for every `t`.
    pub fn premultiply(&self, a: &DMatrix<f64>) -> Result<Self> {
        if a.ncols() != self.p() || a.nrows() != self.p() {
            return Err(Error::DimensionMismatch(format!(
                "transform is {}x{}, panel has p = {}",
                a.nrows(),
                a.ncols(),
                self.p()
            )));
        }
        Self::new(a * &self.levels)
    }
}

/// Deterministic terms in the econometrician's model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeterministicSpec {
    #[serde(rename = "none")]
    NoDet,
    #[serde(rename = "const")]
    Constant,
    /// Trend restricted to the cointegrating space: `X_{t-1}` is augmented
    /// with `t`, and both sides are demeaned.
    #[serde(rename = "rtrend")]
    RestrictedTrend,
}

impl DeterministicSpec {
    /// Number of regressors projected out.
    pub fn d_d(self) -> usize {
        match self {
            Self::NoDet => 0,
            Self::Constant | Self::RestrictedTrend => 1,
        }
    }
}

impl std::str::FromStr for DeterministicSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::NoDet),
            "const" => Ok(Self::Constant),
            "rtrend" => Ok(Self::RestrictedTrend),
            other => Err(Error::Domain(format!(
                "unknown deterministic spec '{other}' (expected none, const or rtrend)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentMatrices {
    pub s00: DMatrix<f64>,
    pub s01: DMatrix<f64>,
    pub s11: DMatrix<f64>,
    /// Sample size the moments were averaged over.
    pub t: usize,
}

/// Squared canonical correlations `λ₁ ≥ … ≥ λ_p` with their sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalSpectrum {
    lambdas: Vec<f64>,
    t: usize,
}

impl CanonicalSpectrum {
    /// Validates, clamps to `[0, 1]` and sorts descending.
    pub fn from_lambdas(mut lambdas: Vec<f64>, t: usize) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::Domain("spectrum must contain at least one value".into()));
        }
        if t == 0 {
            return Err(Error::Domain("sample size T must be positive".into()));
        }
        for l in lambdas.iter_mut() {
            if !(*l >= -CLAMP_TOLERANCE && *l <= 1.0 + CLAMP_TOLERANCE) {
                return Err(Error::NumericalIntegrity { value: *l });
            }
            *l = l.clamp(0.0, 1.0);
        }
        lambdas.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { lambdas, t })
    }

    /// Descending.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn ascending(&self) -> Vec<f64> {
        self.lambdas.iter().rev().copied().collect()
    }

    pub fn p(&self) -> usize {
        self.lambdas.len()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn c_hat(&self) -> f64 {
        self.p() as f64 / self.t as f64
    }

    /// Empirical d.f. `(1/p) #{λᵢ ≤ x}`.
    pub fn edf(&self, x: f64) -> f64 {
        self.lambdas.iter().filter(|&&l| l <= x).count() as f64 / self.p() as f64
    }
}

/// Column `t` of `dx` is `X_t - X_{t-1}`, column `t` of `xlag` is `X_{t-1}`.
pub fn difference_and_lag(panel: &TimeSeriesPanel) -> (DMatrix<f64>, DMatrix<f64>) {
    let x = panel.levels();
    let (p, t) = (panel.p(), panel.t());
    let xlag = x.columns(0, t).into_owned();
    let dx = DMatrix::from_fn(p, t, |i, j| x[(i, j + 1)] - x[(i, j)]);
    (dx, xlag)
}

fn demean_rows(m: &mut DMatrix<f64>) {
    let n = m.ncols() as f64;
    for mut row in m.row_iter_mut() {
        let mean = row.sum() / n;
        row.add_scalar_mut(-mean);
    }
}

pub fn residualize(
    dx: &DMatrix<f64>,
    xlag: &DMatrix<f64>,
    spec: DeterministicSpec,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if dx.shape() != xlag.shape() {
        return Err(Error::DimensionMismatch(format!(
            "dX is {:?}, Xlag is {:?}",
            dx.shape(),
            xlag.shape()
        )));
    }
    let t = dx.ncols();
    if t <= spec.d_d() {
        return Err(Error::Domain(format!(
            "T = {t} leaves no degrees of freedom after removing {} deterministic regressor(s)",
            spec.d_d()
        )));
    }
    match spec {
        DeterministicSpec::NoDet => Ok((dx.clone(), xlag.clone())),
        DeterministicSpec::Constant => {
            let (mut r0, mut r1) = (dx.clone(), xlag.clone());
            demean_rows(&mut r0);
            demean_rows(&mut r1);
            Ok((r0, r1))
        }
        DeterministicSpec::RestrictedTrend => {
            let p = xlag.nrows();
            let mut r0 = dx.clone();
            let mut r1 = xlag.clone().insert_row(p, 0.0);
            for j in 0..t {
                r1[(p, j)] = (j + 1) as f64;
            }
            demean_rows(&mut r0);
            demean_rows(&mut r1);
            Ok((r0, r1))
        }
    }
}

pub fn moments(r0: &DMatrix<f64>, r1: &DMatrix<f64>) -> Result<MomentMatrices> {
    if r0.ncols() != r1.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "R0 has {} columns, R1 has {}",
            r0.ncols(),
            r1.ncols()
        )));
    }
    let t = r0.ncols();
    let tf = t as f64;
    let m = MomentMatrices {
        s00: (r0 * r0.transpose()) / tf,
        s01: (r0 * r1.transpose()) / tf,
        s11: (r1 * r1.transpose()) / tf,
        t,
    };
    scaled_cholesky(&m.s00, "S00")?;
    scaled_cholesky(&m.s11, "S11")?;
    Ok(m)
}

/// Cholesky factor of `D^{-1/2} S D^{-1/2}` (`D = diag S`) plus `D^{-1/2}`.
/// Canonical correlations do not see the diagonal rescaling, and working on
/// the correlation scale makes the singularity threshold unit-free.
fn scaled_cholesky(
    s: &DMatrix<f64>,
    name: &'static str,
) -> Result<(Cholesky<f64, Dyn>, Vec<f64>)> {
    let n = s.nrows();
    let mut inv_sd = Vec::with_capacity(n);
    for i in 0..n {
        let d = s[(i, i)];
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::Singular { name });
        }
        inv_sd.push(1.0 / d.sqrt());
    }
    let scaled = DMatrix::from_fn(n, n, |i, j| s[(i, j)] * inv_sd[i] * inv_sd[j]);
    let chol = Cholesky::new(scaled).ok_or(Error::Singular { name })?;
    let l = chol.l_dirty();
    if (0..n).any(|i| l[(i, i)] * l[(i, i)] < SINGULAR_PIVOT) {
        return Err(Error::Singular { name });
    }
    Ok((chol, inv_sd))
}

pub fn squared_ccs(m: &MomentMatrices) -> Result<CanonicalSpectrum> {
    let p = m.s00.nrows();
    let q = m.s11.nrows();
    if m.s01.shape() != (p, q) {
        return Err(Error::DimensionMismatch(format!(
            "S01 is {:?}, expected ({p}, {q})",
            m.s01.shape()
        )));
    }
    let (c0, d0) = scaled_cholesky(&m.s00, "S00")?;
    let (c1, d1) = scaled_cholesky(&m.s11, "S11")?;
    let s01 = DMatrix::from_fn(p, q, |i, j| m.s01[(i, j)] * d0[i] * d1[j]);
    // K = L0⁻¹ S01 L1⁻ᵀ, via Kᵀ = L1⁻¹ (L0⁻¹ S01)ᵀ
    let a = c0
        .l_dirty()
        .solve_lower_triangular(&s01)
        .ok_or(Error::Singular { name: "S00" })?;
    let kt = c1
        .l_dirty()
        .solve_lower_triangular(&a.transpose())
        .ok_or(Error::Singular { name: "S11" })?;
    let sv = kt.singular_values_unordered();
    let raw: Vec<f64> = sv.iter().take(p).map(|s| s * s).collect();
    CanonicalSpectrum::from_lambdas(raw, m.t)
}

pub fn analyze(panel: &TimeSeriesPanel, spec: DeterministicSpec) -> Result<CanonicalSpectrum> {
    let (dx, xlag) = difference_and_lag(panel);
    let (r0, r1) = residualize(&dx, &xlag, spec)?;
    let m = moments(&r0, &r1)?;
    squared_ccs(&m)
}
