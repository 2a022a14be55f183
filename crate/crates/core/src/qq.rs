//! Wachter quantile–quantile plots.
//!
//! Point `i` (ascending) pairs the `(i - 1/2)/p` quantile of the Wachter
//! limit with the `i`-th smallest squared canonical correlation.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::canon::CanonicalSpectrum;
use crate::dist::{quantile, WachterParams};
use crate::error::{Error, Result};
use crate::mc::McSummary;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QqPoint {
    /// 1-based ascending index.
    pub i: usize,
    /// Plotting position `(i - 1/2) / p`.
    pub q: f64,
    pub theoretical: f64,
    pub empirical: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeBand {
    pub low5: f64,
    pub high95: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QqMeta {
    pub p: usize,
    pub t: usize,
    pub c_hat: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QQPlotSeries {
    pub points: Vec<QqPoint>,
    /// The 45° line `empirical = theoretical` is always drawn.
    pub reference_line: bool,
    pub envelope: Option<Vec<EnvelopeBand>>,
    pub meta: QqMeta,
}

pub fn build_qq(s: &CanonicalSpectrum, params: &WachterParams) -> Result<QQPlotSeries> {
    let p = s.p();
    let ascending = s.ascending();
    let points = ascending
        .iter()
        .enumerate()
        .map(|(k, &empirical)| {
            let q = (k as f64 + 0.5) / p as f64;
            Ok(QqPoint {
                i: k + 1,
                q,
                theoretical: quantile(params, q)?,
                empirical,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QQPlotSeries {
        points,
        reference_line: true,
        envelope: None,
        meta: QqMeta {
            p,
            t: s.t(),
            c_hat: s.c_hat(),
            gamma1: params.gamma1(),
            gamma2: params.gamma2(),
        },
    })
}

/// Fills the band from the per-index 5th and 95th Monte Carlo percentiles.
pub fn attach_envelope(mut series: QQPlotSeries, mc: &McSummary) -> Result<QQPlotSeries> {
    if mc.index_quantiles.len() != series.points.len() {
        return Err(Error::DimensionMismatch(format!(
            "envelope has {} indices, plot has p = {}",
            mc.index_quantiles.len(),
            series.points.len()
        )));
    }
    series.envelope = Some(
        mc.index_quantiles
            .iter()
            .map(|q| EnvelopeBand {
                low5: q.p05,
                high95: q.p95,
            })
            .collect(),
    );
    Ok(series)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotFormat {
    Svg,
    Csv,
}

impl FromStr for PlotFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svg" => Ok(Self::Svg),
            "csv" => Ok(Self::Csv),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

pub fn render(series: &QQPlotSeries, format: &str) -> Result<Vec<u8>> {
    Ok(match format.parse::<PlotFormat>()? {
        PlotFormat::Csv => render_csv(series).into_bytes(),
        PlotFormat::Svg => render_svg(series).into_bytes(),
    })
}

/// `i,q,theoretical,empirical,env_lo,env_hi`; envelope cells are empty when
/// no envelope is attached. Numbers use the shortest representation that
/// round-trips.
pub fn render_csv(series: &QQPlotSeries) -> String {
    let mut out = String::from("i,q,theoretical,empirical,env_lo,env_hi\n");
    for (k, pt) in series.points.iter().enumerate() {
        let (lo, hi) = match series.envelope.as_ref().and_then(|e| e.get(k)) {
            Some(b) => (b.low5.to_string(), b.high95.to_string()),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            pt.i, pt.q, pt.theoretical, pt.empirical, lo, hi
        );
    }
    out
}

// Fixed SVG layout. Everything below is in user units of a 480x480 canvas.
const SVG_SIZE: f64 = 480.0;
const SVG_MARGIN: f64 = 56.0;
const POINT_RADIUS: f64 = 3.0;
const REFERENCE_DASH: &str = "6,4";
const POINT_COLOR: &str = "#1f4e9a";
const BAND_COLOR: &str = "#b03a2e";
const AXIS_COLOR: &str = "#333333";
const TICKS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

fn sx(v: f64) -> f64 {
    SVG_MARGIN + v * (SVG_SIZE - 2.0 * SVG_MARGIN)
}

fn sy(v: f64) -> f64 {
    SVG_SIZE - SVG_MARGIN - v * (SVG_SIZE - 2.0 * SVG_MARGIN)
}

fn polyline(out: &mut String, pts: impl Iterator<Item = (f64, f64)>, class: &str) {
    let coords: Vec<String> = pts
        .map(|(x, y)| format!("{:.3},{:.3}", sx(x), sy(y)))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline class="{class}" points="{}" fill="none" stroke="{BAND_COLOR}" stroke-width="1.5"/>"#,
        coords.join(" ")
    );
}

/// SVG 1.1 document on the unit square with the dashed 45° line, one
/// `<circle>` per point and, when attached, the two envelope curves.
pub fn render_svg(series: &QQPlotSeries) -> String {
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>"#
    );
    let m = &series.meta;
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="28" font-family="sans-serif" font-size="14" text-anchor="middle">Wachter plot: p = {}, T = {}, c = {:.4}</text>"#,
        SVG_SIZE / 2.0,
        m.p,
        m.t,
        m.c_hat
    );
    // axes box and ticks
    let _ = writeln!(
        out,
        r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="{AXIS_COLOR}" stroke-width="1"/>"#,
        sx(0.0),
        sy(1.0),
        sx(1.0) - sx(0.0),
        sy(0.0) - sy(1.0)
    );
    for t in TICKS {
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="11" text-anchor="middle">{t:.2}</text>"#,
            sx(t),
            sy(0.0) + 16.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="11" text-anchor="end">{t:.2}</text>"#,
            sx(0.0) - 6.0,
            sy(t) + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12" text-anchor="middle">Wachter quantile</text>"#,
        SVG_SIZE / 2.0,
        SVG_SIZE - 14.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.3}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.3})">squared canonical correlation</text>"#,
        SVG_SIZE / 2.0,
        SVG_SIZE / 2.0
    );
    if series.reference_line {
        let _ = writeln!(
            out,
            r#"<line class="reference" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{AXIS_COLOR}" stroke-width="1" stroke-dasharray="{REFERENCE_DASH}"/>"#,
            sx(0.0),
            sy(0.0),
            sx(1.0),
            sy(1.0)
        );
    }
    if let Some(env) = &series.envelope {
        let xs = series.points.iter().map(|p| p.theoretical);
        polyline(
            &mut out,
            xs.clone().zip(env.iter().map(|b| b.low5)),
            "envelope-low",
        );
        polyline(&mut out, xs.zip(env.iter().map(|b| b.high95)), "envelope-high");
    }
    for pt in &series.points {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{POINT_RADIUS}" fill="{POINT_COLOR}"/>"#,
            sx(pt.theoretical),
            sy(pt.empirical)
        );
    }
    out.push_str("</svg>\n");
    out
}
