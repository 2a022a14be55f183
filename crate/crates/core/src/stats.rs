//! Trace-type statistics on a canonical spectrum and their closed-form
//! centering and correction values.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::canon::CanonicalSpectrum;
use crate::dist::{mean_identity, neglog_numerator, AspectRatio};
use crate::error::{domain, Result};

/// A likelihood-ratio value that is infinite whenever some tested
/// correlation equals one. Serializes as a JSON number, or as the string
/// `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LrValue {
    Finite(f64),
    Infinite,
}

impl LrValue {
    pub fn is_finite(self) -> bool {
        matches!(self, Self::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Infinite => None,
        }
    }

    /// `+∞` for the infinite case.
    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    pub fn from_f64(v: f64) -> Self {
        if v.is_finite() {
            Self::Finite(v)
        } else {
            Self::Infinite
        }
    }

    pub fn map(self, f: impl FnOnce(f64) -> f64) -> Self {
        match self {
            Self::Finite(v) => Self::from_f64(f(v)),
            Self::Infinite => Self::Infinite,
        }
    }
}

impl fmt::Display for LrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(v) => write!(f, "{v}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for LrValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(v) => s.serialize_f64(*v),
            Self::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for LrValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = LrValue;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a finite number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<LrValue, E> {
                Ok(LrValue::Finite(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<LrValue, E> {
                Ok(LrValue::Finite(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<LrValue, E> {
                Ok(LrValue::Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<LrValue, E> {
                if v == "inf" {
                    Ok(LrValue::Infinite)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Status attached to a centering value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterStatus {
    /// Proven almost-sure limit.
    Limit,
    /// Proven lower bound, conjectured to be the limit.
    ConjecturedLimit,
    /// The aspect ratio lies outside the formula's domain.
    OutOfDomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Center {
    pub value: Option<f64>,
    pub status: CenterStatus,
}

impl Center {
    pub const OUT_OF_DOMAIN: Self = Self {
        value: None,
        status: CenterStatus::OutOfDomain,
    };

    /// `status` for a value, `OutOfDomain` for an error.
    pub fn from_result(r: Result<f64>, status: CenterStatus) -> Self {
        match r {
            Ok(v) => Self {
                value: Some(v),
                status,
            },
            Err(_) => Self::OUT_OF_DOMAIN,
        }
    }
}

fn check_rank(s: &CanonicalSpectrum, r: usize) -> Result<()> {
    if r >= s.p() {
        return Err(domain(format!("rank r = {r} must be smaller than p = {}", s.p())));
    }
    Ok(())
}

/// `-T Σ_{i>r} ln(1 - λᵢ)`.
pub fn lr_stat(s: &CanonicalSpectrum, r: usize) -> Result<LrValue> {
    check_rank(s, r)?;
    let tail = &s.lambdas()[r..];
    if tail.iter().any(|&l| l >= 1.0) {
        return Ok(LrValue::Infinite);
    }
    let sum: f64 = tail.iter().map(|&l| (-l).ln_1p()).sum();
    Ok(LrValue::from_f64(-(s.t() as f64) * sum))
}

/// `T Σ_{i>r} λᵢ`.
pub fn pb_stat(s: &CanonicalSpectrum, r: usize) -> Result<f64> {
    check_rank(s, r)?;
    Ok(s.t() as f64 * s.lambdas()[r..].iter().sum::<f64>())
}

/// Conjectured simultaneous limit of `LR / (2p²)`, valid for `0 < c < 1/2`.
pub fn lr_center_sim(c: AspectRatio) -> Result<f64> {
    let c = c.value();
    if c >= 0.5 {
        return Err(domain(format!("LR centering requires c < 1/2, got c = {c}")));
    }
    Ok(neglog_numerator(c) / (2.0 * c * c))
}

/// Almost-sure limit of `PB / (2p²)`: `1 / (1 + c)`.
pub fn pb_center_sim(c: AspectRatio) -> f64 {
    1.0 / (1.0 + c.value())
}

/// `(LR + PB) / 2`.
pub fn gp_average(lr: LrValue, pb: f64) -> LrValue {
    lr.map(|v| 0.5 * (v + pb))
}

/// Bartlett-type factor implied by the simultaneous limit, evaluated at the
/// finite-sample ratio `ĉ = p/T ∈ (0, 1/2)`.
pub fn bartlett_theoretical(c_hat: f64) -> Result<f64> {
    if !(c_hat > 0.0 && c_hat < 0.5) {
        return Err(domain(format!(
            "Bartlett factor requires 0 < c_hat < 1/2, got {c_hat}"
        )));
    }
    Ok(neglog_numerator(c_hat) / (2.0 * c_hat * c_hat))
}

/// Simulation-fitted factor `exp(0.549 ĉ + 0.552 ĉ²)`.
pub fn bartlett_jhf(c_hat: f64) -> Result<f64> {
    if !(c_hat > 0.0) || !c_hat.is_finite() {
        return Err(domain(format!("c_hat must be positive, got {c_hat}")));
    }
    Ok((0.549 * c_hat + 0.552 * c_hat * c_hat).exp())
}

pub fn bartlett_corrected_lr(lr: LrValue, c_hat: f64) -> Result<f64> {
    let lr = lr
        .finite()
        .ok_or_else(|| domain("Bartlett correction of an infinite LR statistic"))?;
    Ok(lr / bartlett_theoretical(c_hat)?)
}

/// `cv / p - 2p`, which removes the `2p²` growth of trace-test critical
/// values.
pub fn transform_cv(cv: f64, p: usize) -> Result<f64> {
    if p == 0 {
        return Err(domain("p must be at least 1"));
    }
    let p = p as f64;
    Ok(cv / p - 2.0 * p)
}

/// Unadjusted 95% asymptotic critical values of the trace test for
/// `p = 1..=12` (MacKinnon, Haug and Michelis 1999, Table II, first column),
/// paired with their `cv/p - 2p` transforms as published to two decimals.
pub const TRACE_CV_95: [(usize, f64, f64); 12] = [
    (1, 4.13, 2.13),
    (2, 12.32, 2.16),
    (3, 24.28, 2.09),
    (4, 40.17, 2.04),
    (5, 60.06, 2.01),
    (6, 83.94, 1.99),
    (7, 111.79, 1.97),
    (8, 143.64, 1.96),
    (9, 179.48, 1.94),
    (10, 219.38, 1.94),
    (11, 263.25, 1.93),
    (12, 311.09, 1.92),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub r: usize,
    pub p: usize,
    pub t: usize,
    pub c_hat: f64,
    pub lr: LrValue,
    pub pb: f64,
    pub lr_over_tp: LrValue,
    pub pb_over_tp: f64,
    pub lr_over_2p2: LrValue,
    pub pb_over_2p2: f64,
    pub lr_center_sim: Center,
    pub pb_center_sim: Center,
    pub bartlett_theoretical: Option<f64>,
    pub bartlett_jhf: f64,
    pub lr_corrected: Option<f64>,
    pub gp_average: LrValue,
}

pub fn build_report(s: &CanonicalSpectrum, r: usize) -> Result<TestReport> {
    let lr = lr_stat(s, r)?;
    let pb = pb_stat(s, r)?;
    let (p, t) = (s.p() as f64, s.t() as f64);
    let c_hat = s.c_hat();
    let ratio = AspectRatio::new(c_hat);
    let lr_center = match ratio {
        Ok(c) => Center::from_result(lr_center_sim(c), CenterStatus::ConjecturedLimit),
        Err(_) => Center::OUT_OF_DOMAIN,
    };
    let pb_center = match ratio {
        Ok(c) => {
            debug_assert!((pb_center_sim(c) - mean_identity(c) / (2.0 * c.value())).abs() < 1e-12);
            Center {
                value: Some(pb_center_sim(c)),
                status: CenterStatus::Limit,
            }
        }
        Err(_) => Center::OUT_OF_DOMAIN,
    };
    let bt = bartlett_theoretical(c_hat).ok();
    let lr_corrected = if lr.is_finite() {
        bartlett_corrected_lr(lr, c_hat).ok()
    } else {
        None
    };
    Ok(TestReport {
        r,
        p: s.p(),
        t: s.t(),
        c_hat,
        lr,
        pb,
        lr_over_tp: lr.map(|v| v / (t * p)),
        pb_over_tp: pb / (t * p),
        lr_over_2p2: lr.map(|v| v / (2.0 * p * p)),
        pb_over_2p2: pb / (2.0 * p * p),
        lr_center_sim: lr_center,
        pb_center_sim: pb_center,
        bartlett_theoretical: bt,
        bartlett_jhf: bartlett_jhf(c_hat)?,
        lr_corrected,
        gp_average: gp_average(lr, pb),
    })
}
