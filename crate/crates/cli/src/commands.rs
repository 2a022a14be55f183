use std::path::{Path, PathBuf};

use hdcoint::dist::{
    cdf, coint_null_params, mean_identity, mean_neglog, pdf, quantile, white_noise_params,
    AspectRatio, WachterParams,
};
use hdcoint::mc::{gen_panel, substream};
use hdcoint::qq::PlotFormat;
use hdcoint::stats::{
    bartlett_jhf, bartlett_theoretical, lr_center_sim, pb_center_sim, transform_cv, TRACE_CV_95,
};
use hdcoint::{
    analyze, attach_envelope, build_qq, build_report, render, run_mc, Center, CenterStatus,
    DeterministicSpec, DgpSpec, McConfig, QQPlotSeries, TimeSeriesPanel,
};
use serde::Serialize;

use crate::args::{
    AnalyzeArgs, CentersArgs, DgpArgs, DgpKind, DistArgs, EnvelopeArgs, Law, PlotFormatArg,
    QqArgs, SimulateArgs, TableFormat,
};
use crate::error::{CliError, CliResult, FlagContext};
use crate::grid::parse_grid;
use crate::ingest::ingest_csv;

/// One output stream; `path: None` is stdout.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub path: Option<PathBuf>,
    pub bytes: Vec<u8>,
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("serializable");
    v.push(b'\n');
    v
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn grid(flag: &'static str, s: &str) -> CliResult<Vec<f64>> {
    parse_grid(s).map_err(|m| usage(format!("{flag}: {m}")))
}

/// Checks the flag combination before anything is computed.
fn dgp_spec(a: &DgpArgs) -> CliResult<DgpSpec> {
    if a.rho.is_some() && a.dgp != DgpKind::Ar1 {
        return Err(usage("--rho is only valid with --dgp ar1"));
    }
    if a.white_noise.is_some() && a.dgp != DgpKind::Mixed {
        return Err(usage("--white-noise is only valid with --dgp mixed"));
    }
    Ok(match a.dgp {
        DgpKind::Rw => DgpSpec::RandomWalk,
        DgpKind::Rwc => DgpSpec::RandomWalkWithConstant,
        DgpKind::Ar1 => DgpSpec::StationaryAr1 {
            rho: a.rho.ok_or_else(|| usage("--dgp ar1 requires --rho"))?,
        },
        DgpKind::Mixed => DgpSpec::WhiteNoiseBlock {
            white_noise: a
                .white_noise
                .ok_or_else(|| usage("--dgp mixed requires --white-noise"))?,
        },
    })
}

fn dgp_flag(dgp: DgpSpec) -> &'static str {
    match dgp {
        DgpSpec::StationaryAr1 { .. } => "--rho",
        DgpSpec::WhiteNoiseBlock { .. } => "--white-noise",
        _ => "--dgp",
    }
}

/// Validates with the offending flag attached.
fn checked_config(c: McConfig) -> CliResult<McConfig> {
    let flag = if c.p == 0 {
        "--p"
    } else if c.reps == 0 {
        "--reps"
    } else if c.t < c.p + 2 {
        "--T"
    } else if c.rank_r >= c.p {
        "--r"
    } else {
        dgp_flag(c.dgp)
    };
    c.validate().flag(flag)?;
    Ok(c)
}

fn law_params(law: Law, c: AspectRatio) -> hdcoint::Result<WachterParams> {
    match law {
        Law::Null => coint_null_params(c),
        Law::WhiteNoise => white_noise_params(c),
    }
}

fn plot_format(explicit: Option<PlotFormatArg>, path: &Path) -> CliResult<PlotFormat> {
    match explicit {
        Some(PlotFormatArg::Svg) => Ok(PlotFormat::Svg),
        Some(PlotFormatArg::Csv) => Ok(PlotFormat::Csv),
        None => {
            let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
            ext.to_ascii_lowercase().parse().flag("--out")
        }
    }
}

fn format_name(f: PlotFormat) -> &'static str {
    match f {
        PlotFormat::Svg => "svg",
        PlotFormat::Csv => "csv",
    }
}

fn wachter_plot(
    panel: &TimeSeriesPanel,
    det: DeterministicSpec,
    law: Law,
    env: &EnvelopeArgs,
    dgp: DgpSpec,
) -> CliResult<QQPlotSeries> {
    let spectrum = analyze(panel, det)?;
    let c = AspectRatio::from_dims(panel.p(), panel.t())?;
    let series = build_qq(&spectrum, &law_params(law, c).flag("--law")?)?;
    if !env.envelope {
        return Ok(series);
    }
    let mut cfg = McConfig::new(panel.p(), panel.t(), env.reps, dgp);
    cfg.det_spec = det;
    cfg.seed = env.seed;
    let mc = run_mc(&checked_config(cfg)?)?;
    Ok(attach_envelope(series, &mc)?)
}

pub fn cmd_analyze(a: &AnalyzeArgs) -> CliResult<Vec<Output>> {
    let dgp = dgp_spec(&a.dgp)?;
    let qq_format = match &a.qq {
        Some(path) => Some(plot_format(None, path)?),
        None if a.env.envelope => return Err(usage("--envelope requires --qq")),
        None => None,
    };
    let panel = ingest_csv(&a.input)?;
    if a.r >= panel.p() {
        return Err(CliError::Flag {
            flag: "--r",
            source: hdcoint::Error::Domain(format!(
                "rank r = {} must be smaller than p = {}",
                a.r,
                panel.p()
            )),
        });
    }
    let spectrum = analyze(&panel, a.det)?;
    let report = build_report(&spectrum, a.r).flag("--r")?;
    let mut out = vec![Output {
        path: a.out.clone(),
        bytes: json(&report),
    }];
    if let (Some(path), Some(fmt)) = (&a.qq, qq_format) {
        let series = wachter_plot(&panel, a.det, Law::Null, &a.env, dgp)?;
        out.push(Output {
            path: Some(path.clone()),
            bytes: render(&series, format_name(fmt))?,
        });
    }
    Ok(out)
}

pub fn cmd_simulate(a: &SimulateArgs) -> CliResult<Vec<Output>> {
    let dgp = dgp_spec(&a.dgp)?;
    let mut cfg = McConfig::new(a.p, a.t, a.reps, dgp);
    cfg.det_spec = a.det;
    cfg.rank_r = a.r;
    cfg.seed = a.seed;
    cfg.keep_spectra = a.keep_spectra;
    let summary = run_mc(&checked_config(cfg)?)?;
    let bytes = match a.format {
        TableFormat::Json => json(&summary),
        TableFormat::Csv => summary.to_csv().into_bytes(),
    };
    Ok(vec![Output {
        path: a.out.clone(),
        bytes,
    }])
}

#[derive(Debug, Serialize)]
pub struct DistRow {
    pub q: f64,
    pub quantile: f64,
    pub pdf: f64,
    pub cdf: f64,
}

#[derive(Debug, Serialize)]
pub struct DistTable {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    pub gamma1: f64,
    pub gamma2: f64,
    pub b_minus: f64,
    pub b_plus: f64,
    pub atom0: f64,
    pub atom1: f64,
    pub mean: f64,
    pub rows: Vec<DistRow>,
}

#[derive(Debug, Serialize)]
pub struct DistOutput {
    pub distributions: Vec<DistTable>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn cmd_dist(a: &DistArgs) -> CliResult<Vec<Output>> {
    let levels = grid("--quantiles", &a.quantiles)?;
    let laws: Vec<(Option<f64>, WachterParams)> = match (&a.c, a.gamma1, a.gamma2) {
        (Some(c), _, _) => grid("--c", c)?
            .into_iter()
            .map(|c| {
                let ratio = AspectRatio::new(c).flag("--c")?;
                Ok((Some(c), law_params(a.law, ratio).flag("--c")?))
            })
            .collect::<CliResult<_>>()?,
        (None, Some(g1), Some(g2)) => vec![(None, WachterParams::new(g1, g2).flag("--gamma1")?)],
        _ => return Err(usage("give --c or both --gamma1 and --gamma2")),
    };
    let mut tables = Vec::with_capacity(laws.len());
    for (c, w) in laws {
        let rows = levels
            .iter()
            .map(|&q| {
                let x = quantile(&w, q).flag("--quantiles")?;
                Ok(DistRow {
                    q,
                    quantile: x,
                    pdf: pdf(&w, x),
                    cdf: cdf(&w, x),
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        tables.push(DistTable {
            c,
            gamma1: w.gamma1(),
            gamma2: w.gamma2(),
            b_minus: w.b_minus(),
            b_plus: w.b_plus(),
            atom0: w.atom0(),
            atom1: w.atom1(),
            mean: w.expect(|x| x),
            rows,
        });
    }
    let bytes = match a.format {
        TableFormat::Json => json(&DistOutput {
            distributions: tables,
        }),
        TableFormat::Csv => {
            let mut s = String::from("c,gamma1,gamma2,b_minus,b_plus,q,quantile,pdf,cdf\n");
            for t in &tables {
                for r in &t.rows {
                    s.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{}\n",
                        opt(t.c),
                        t.gamma1,
                        t.gamma2,
                        t.b_minus,
                        t.b_plus,
                        r.q,
                        r.quantile,
                        r.pdf,
                        r.cdf
                    ));
                }
            }
            s.into_bytes()
        }
    };
    Ok(vec![Output {
        path: a.out.clone(),
        bytes,
    }])
}

#[derive(Debug, Serialize)]
pub struct CenterRow {
    pub c: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    pub lr_center_sim: Center,
    pub pb_center_sim: Center,
    pub gp_average_center: Center,
    /// Sequential-asymptotics lower bound on LR / (2p²).
    pub lr_center_seq: f64,
    /// Limit of PB / (Tp).
    pub mean_identity: f64,
    /// Limit of LR / (Tp).
    pub mean_neglog: Option<f64>,
    pub bartlett_theoretical: Option<f64>,
    pub bartlett_jhf: f64,
}

#[derive(Debug, Serialize)]
pub struct TraceCvRow {
    pub p: usize,
    pub cv: f64,
    pub published: f64,
    pub adjusted: f64,
}

#[derive(Debug, Serialize)]
pub struct CentersOutput {
    pub rows: Vec<CenterRow>,
    pub trace_cv_95: Vec<TraceCvRow>,
}

fn center_row(c: f64, dims: Option<(usize, usize)>) -> CliResult<CenterRow> {
    let flag = if dims.is_some() { "--T" } else { "--c" };
    let ratio = AspectRatio::new(c).flag(flag)?;
    let lr = Center::from_result(lr_center_sim(ratio), CenterStatus::ConjecturedLimit);
    let pb = pb_center_sim(ratio);
    let gp = match lr.value {
        Some(v) => Center {
            value: Some(0.5 * (v + pb)),
            status: CenterStatus::ConjecturedLimit,
        },
        None => Center::OUT_OF_DOMAIN,
    };
    Ok(CenterRow {
        c,
        p: dims.map(|d| d.0),
        t: dims.map(|d| d.1),
        lr_center_sim: lr,
        pb_center_sim: Center {
            value: Some(pb),
            status: CenterStatus::Limit,
        },
        gp_average_center: gp,
        lr_center_seq: 1.0,
        mean_identity: mean_identity(ratio),
        mean_neglog: mean_neglog(ratio).ok(),
        bartlett_theoretical: bartlett_theoretical(c).ok(),
        bartlett_jhf: bartlett_jhf(c).flag(flag)?,
    })
}

pub fn cmd_centers(a: &CentersArgs) -> CliResult<Vec<Output>> {
    let rows = match (&a.c, a.p, a.t) {
        (Some(c), _, _) => grid("--c", c)?
            .into_iter()
            .map(|c| center_row(c, None))
            .collect::<CliResult<Vec<_>>>()?,
        (None, Some(p), Some(t)) => {
            if t == 0 {
                return Err(usage("--T must be positive"));
            }
            vec![center_row(p as f64 / t as f64, Some((p, t)))?]
        }
        _ => return Err(usage("give --c or both --p and --T")),
    };
    let bytes = match a.format {
        TableFormat::Json => {
            let trace_cv_95 = TRACE_CV_95
                .iter()
                .map(|&(p, cv, published)| {
                    Ok(TraceCvRow {
                        p,
                        cv,
                        published,
                        adjusted: transform_cv(cv, p)?,
                    })
                })
                .collect::<hdcoint::Result<Vec<_>>>()?;
            json(&CentersOutput { rows, trace_cv_95 })
        }
        TableFormat::Csv => {
            let mut s = String::from(
                "c,lr_center_sim,pb_center_sim,gp_average_center,lr_center_seq,mean_identity,mean_neglog,bartlett_theoretical,bartlett_jhf\n",
            );
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    r.c,
                    opt(r.lr_center_sim.value),
                    opt(r.pb_center_sim.value),
                    opt(r.gp_average_center.value),
                    r.lr_center_seq,
                    r.mean_identity,
                    opt(r.mean_neglog),
                    opt(r.bartlett_theoretical),
                    r.bartlett_jhf
                ));
            }
            s.into_bytes()
        }
    };
    Ok(vec![Output {
        path: a.out.clone(),
        bytes,
    }])
}

/// Stream id of the plotted draw when `qq` simulates its own panel; the
/// envelope uses streams `0..reps`, so the two never overlap.
pub const QQ_DRAW_STREAM: u64 = u64::MAX;

pub fn cmd_qq(a: &QqArgs) -> CliResult<Vec<Output>> {
    let dgp = dgp_spec(&a.dgp)?;
    let fmt = plot_format(a.format, &a.out)?;
    let panel = match (&a.input, a.p, a.t) {
        (Some(path), _, _) => ingest_csv(path)?,
        (None, Some(p), Some(t)) => {
            if t < p + 2 {
                return Err(CliError::Flag {
                    flag: "--T",
                    source: hdcoint::Error::Domain(format!(
                        "T = {t} must be at least p + 2 = {}",
                        p + 2
                    )),
                });
            }
            let mut rng = substream(a.env.seed, QQ_DRAW_STREAM);
            gen_panel(dgp, p, t, &mut rng).flag(dgp_flag(dgp))?
        }
        _ => return Err(usage("give an input CSV or both --p and --T")),
    };
    let series = wachter_plot(&panel, a.det, a.law, &a.env, dgp)?;
    Ok(vec![Output {
        path: Some(a.out.clone()),
        bytes: render(&series, format_name(fmt))?,
    }])
}
