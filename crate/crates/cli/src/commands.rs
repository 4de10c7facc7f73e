use crate::config::{ConfigError, RunConfig};
use cyclohc::bessel::quad::{
    cross_check, mc_bessel, t_of, torus_bessel_n1_with, McProblem, Normalization, QuadEstimate,
};
use cyclohc::bessel::series::{series_multivariate, series_n1};
use cyclohc::bessel::{c_for_big_c, series_c_for_integral_c};
use cyclohc::dunkl::{
    calibrate, i_embedding_check, j_embedding_check, kernel_check, verify_relations, Convention, DPrimeReport,
    DunklParams, RelationRecord,
};
use cyclohc::radial::{dm_identity_check, hc_identity_check};
use cyclohc::scalars::{compute_a_b, compute_c, rat_to_f64, CycRat, Field, ParamPoly, Rational, Ring};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Result of one command.
pub struct Outcome {
    pub code: i32,
    pub report: Value,
    pub csv: Option<String>,
    pub summary: Vec<String>,
}

pub type CmdResult = Result<Outcome, ConfigError>;

fn cfg_err(e: impl std::fmt::Display) -> ConfigError {
    ConfigError(e.to_string())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn code(pass: bool) -> i32 {
    if pass {
        0
    } else {
        1
    }
}

fn status(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Parameters from `k` and `c`, symbolic where absent.
fn dunkl_params(cfg: &RunConfig, n: usize, ell: u32, conv: Convention) -> Result<DunklParams, ConfigError> {
    let k = match cfg.entries.get("k").map(String::as_str) {
        None | Some("symbolic") => None,
        Some(_) => Some(cfg.rationals("k")?.unwrap()),
    };
    let c = cfg.rationals("c")?;
    if let Some(c) = &c {
        if c.len() + 1 != ell as usize {
            return Err(ConfigError(format!("c must have length ell - 1 = {}", ell - 1)));
        }
    }
    if k.is_none() && c.is_none() {
        return Ok(DunklParams::symbolic(n, ell, conv));
    }
    let sym = DunklParams::symbolic(n, ell, conv.clone());
    let k = match k {
        Some(v) if v.len() == 1 => ParamPoly::from_rat(ell, v[0].clone()),
        Some(_) => return Err(ConfigError("k must be a single value".into())),
        None => sym.k.clone(),
    };
    let c = match c {
        Some(v) => v.into_iter().map(|r| ParamPoly::from_rat(ell, r)).collect(),
        None => sym.c.clone(),
    };
    DunklParams::with_values(n, ell, k, c, conv).map_err(cfg_err)
}

fn family(id: &str) -> &'static str {
    if id.starts_with("[x") {
        "[x,x]"
    } else if id.starts_with("[y") && id.contains(",y") {
        "[y,y]"
    } else if id.starts_with("[y") {
        let inner = id.trim_start_matches('[').trim_end_matches(']');
        let (a, b) = inner.split_once(',').unwrap_or(("", ""));
        if a[1..] == b[1..] {
            "[y,x] diagonal"
        } else {
            "[y,x] off-diagonal"
        }
    } else {
        "group"
    }
}

const FAMILIES: [&str; 5] = ["[x,x]", "[y,y]", "[y,x] diagonal", "[y,x] off-diagonal", "group"];

fn family_summary(records: &[RelationRecord]) -> Vec<(String, String)> {
    FAMILIES
        .iter()
        .map(|f| {
            let mine: Vec<&RelationRecord> = records.iter().filter(|r| family(&r.relation_id) == *f).collect();
            let s = if mine.is_empty() {
                "SKIP"
            } else if mine.iter().all(|r| r.passed()) {
                "PASS"
            } else {
                "FAIL"
            };
            (f.to_string(), s.to_string())
        })
        .collect()
}

pub fn cmd_relations(cfg: &RunConfig) -> CmdResult {
    let n: usize = cfg.get("n", 2)?;
    let ell: u32 = cfg.get("ell", 2)?;
    let bound: u32 = cfg.get("degree_bound", 6)?;
    if n == 0 || ell == 0 {
        return Err(ConfigError("n and ell must be positive".into()));
    }
    let conv = cfg.convention()?.unwrap_or_else(Convention::calibrated);
    let params = dunkl_params(cfg, n, ell, conv.clone())?;
    let rel = verify_relations(&params, bound);
    let families = family_summary(&rel.records);
    let mut pass = rel.all_pass();
    let mut summary: Vec<String> = families.iter().map(|(f, s)| format!("relation {}: {}", f, s)).collect();
    let j = j_embedding_check(&params, bound.max(ell)).map_err(cfg_err)?;
    pass &= j.all_pass();
    summary.push(format!("embedding j: {}", status(j.all_pass())));
    let mut report = json!({
        "relations": to_value(&rel),
        "families": families.iter().map(|(f, s)| json!({"family": f, "status": s})).collect::<Vec<_>>(),
        "embedding_j": to_value(&j),
    });
    if n >= 2 {
        let minus = i_embedding_check(&params, bound, -1).map_err(cfg_err)?;
        let plus = i_embedding_check(&params, bound, 1).map_err(cfg_err)?;
        pass &= minus.all_pass();
        summary.push(format!(
            "embedding i (sign -1): {}; sign +1 as printed: {}",
            status(minus.all_pass()),
            status(plus.all_pass())
        ));
        report["embedding_i"] = to_value(&minus);
        report["embedding_i_plus_sign"] = to_value(&plus);
    }
    report["pass"] = json!(pass);
    Ok(Outcome {
        code: code(pass),
        report,
        csv: None,
        summary,
    })
}

pub fn cmd_calibrate(cfg: &RunConfig) -> CmdResult {
    // l = 2 alone leaves alpha_action undetermined
    let mut ells = vec![2u32, 3];
    let ell: u32 = cfg.get("ell", 2)?;
    if ell > 3 {
        ells.push(ell);
    }
    let r = calibrate(&ells).map_err(cfg_err)?;
    let summary = vec![format!(
        "calibration over ell {:?}: {} (selected {:?})",
        ells,
        if r.unique { "unique" } else { "not unique" },
        r.selected.as_ref().map(|c| (c.alpha_action, c.c_sign))
    )];
    Ok(Outcome {
        code: code(r.unique),
        report: json!({"calibration": to_value(&r), "pass": r.unique}),
        csv: None,
        summary,
    })
}

pub fn cmd_hc(cfg: &RunConfig) -> CmdResult {
    let ell_max: u32 = cfg.get("ell_max", 3)?;
    let m_max: u32 = cfg.get("m_max", 2)?;
    let mut summary = Vec::new();
    let mut report = json!({});
    let conv = match cfg.convention()? {
        Some(c) => c,
        None => {
            let r = calibrate(&[2, 3]).map_err(cfg_err)?;
            summary.push(format!(
                "calibration ran first: selected {:?}",
                r.selected.as_ref().map(|c| (c.alpha_action, c.c_sign))
            ));
            report["calibration"] = to_value(&r);
            r.selected
                .ok_or_else(|| ConfigError("calibration did not select a unique convention".into()))?
        }
    };
    report["convention"] = to_value(&conv);
    let numeric_c = cfg.has("C") || cfg.has("c");
    let mut pass = true;
    let mut entries = Vec::new();
    let ells: Vec<u32> = if numeric_c {
        vec![cfg.get("ell", 2)?]
    } else {
        (1..=ell_max).collect()
    };
    for ell in ells {
        let params = if numeric_c {
            numeric_rank_one(cfg, ell, &conv)?
        } else {
            DunklParams::symbolic(1, ell, conv.clone())
        };
        let dp = DPrimeReport::compute(&params).map_err(cfg_err)?;
        pass &= dp.agree;
        summary.push(format!("ell={} D' factorization: {}", ell, status(dp.agree)));
        let kernel_status = match degenerate_kernel(&params)? {
            Some(note) => {
                summary.push(format!("ell={} kernel: SKIP ({})", ell, note));
                json!({"status": "skip", "note": note})
            }
            None => {
                let k = kernel_check(&params).map_err(cfg_err)?;
                pass &= k.all_pass();
                summary.push(format!("ell={} kernel: {}", ell, status(k.all_pass())));
                to_value(&k)
            }
        };
        let hc = hc_identity_check(&params).map_err(cfg_err)?;
        pass &= hc.passed();
        summary.push(format!(
            "ell={} hc: {} constant {}",
            ell,
            status(hc.passed()),
            hc.proportionality_constant.clone().unwrap_or_default()
        ));
        let mut dms = Vec::new();
        for m in 1..=m_max {
            let d = dm_identity_check(m, &params).map_err(cfg_err)?;
            pass &= d.passed();
            summary.push(format!(
                "ell={} d_{}: {} constant {}",
                ell,
                m,
                status(d.passed()),
                d.proportionality_constant.clone().unwrap_or_default()
            ));
            dms.push(to_value(&d));
        }
        entries.push(
            json!({"ell": ell, "dprime": to_value(&dp), "kernel": kernel_status, "hc": to_value(&hc), "dm": dms}),
        );
    }
    report["checks"] = json!(entries);
    report["pass"] = json!(pass);
    Ok(Outcome {
        code: code(pass),
        report,
        csv: None,
        summary,
    })
}

/// Rank-one parameters from numeric `c`, or from `C` through the convention.
fn numeric_rank_one(cfg: &RunConfig, ell: u32, conv: &Convention) -> Result<DunklParams, ConfigError> {
    let c: Vec<CycRat> = if let Some(big_c) = cfg.rationals("C")? {
        if big_c.len() != ell as usize {
            return Err(ConfigError(format!("C must have length ell = {}", ell)));
        }
        c_for_big_c(&big_c, conv).map_err(cfg_err)?
    } else {
        let c = cfg.rationals("c")?.unwrap();
        if c.len() + 1 != ell as usize {
            return Err(ConfigError(format!("c must have length ell - 1 = {}", ell - 1)));
        }
        c.into_iter().map(|r| CycRat::rational(ell, r)).collect()
    };
    let zero = ParamPoly::zero(ell);
    DunklParams::with_values(
        1,
        ell,
        zero,
        c.into_iter().map(ParamPoly::constant).collect(),
        conv.clone(),
    )
    .map_err(cfg_err)
}

/// Coinciding kernel exponents (a double root of the indicial symbol).
fn degenerate_kernel(params: &DunklParams) -> Result<Option<String>, ConfigError> {
    let big_c = compute_c(params.ell, &params.c_for_constants()).map_err(cfg_err)?;
    if big_c.iter().any(|c| c.as_constant().is_none()) {
        return Ok(None);
    }
    let (a, _) = compute_a_b(&big_c).map_err(cfg_err)?;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i] == a[j] {
                return Ok(Some(format!(
                    "a_{} = a_{} = {}: double root, logarithmic solutions out of scope",
                    i, j, a[i]
                )));
            }
        }
    }
    Ok(None)
}

#[derive(Serialize)]
struct BesselRow {
    x: Vec<f64>,
    series: [f64; 2],
    quadrature: Option<QuadEstimate>,
    note: Option<String>,
}

pub fn cmd_bessel(cfg: &RunConfig, seed: u64) -> CmdResult {
    let n: usize = cfg.get("n", 1)?;
    let ell: u32 = cfg.get("ell", 2)?;
    let big_c: Vec<i64> = cfg.list("C")?.unwrap_or_else(|| vec![0; ell as usize]);
    if cfg.has("c") {
        return Err(ConfigError("bessel takes the integral-side constants C, not c".into()));
    }
    if big_c.len() != ell as usize || big_c.iter().sum::<i64>() != 0 {
        return Err(ConfigError(format!("C must have length {} and sum to zero", ell)));
    }
    let lambda: Vec<f64> = cfg
        .list("lambda")?
        .unwrap_or_else(|| (1..=n).map(|i| i as f64).collect());
    if lambda.len() != n {
        return Err(ConfigError(format!("lambda must have {} entries", n)));
    }
    let points = if n == 1 {
        cfg.list::<f64>("x")?.map(|v| v.into_iter().map(|x| vec![x]).collect())
    } else {
        cfg.points("x", n)?
    }
    .unwrap_or_else(|| vec![vec![1.0; n]]);
    let quadrature: bool = cfg.get("quadrature", true)?;
    let tol: f64 = cfg.get("tolerance", 1e-8)?;
    let conv = Convention::calibrated();
    let rat_c: Vec<Rational> = big_c.iter().map(|v| cyclohc::scalars::rat(*v, 1)).collect();
    let ser_c = series_c_for_integral_c(&rat_c);
    let mut rows = Vec::new();
    let mut series_vals = Vec::new();
    let mut quads = Vec::new();

    if n == 1 {
        let m: usize = cfg.get("M", 40)?;
        let nodes: usize = cfg.get("N", 64)?;
        let norm = match cfg.get("normalization", "factorial".to_string())?.as_str() {
            "factorial" => Normalization::Factorial,
            "leading" => Normalization::LeadingTerm,
            other => return Err(ConfigError(format!("unknown normalization '{}'", other))),
        };
        let s = series_n1(ell, &ser_c, Complex64::new(ell as f64 * lambda[0], 0.0), m).map_err(cfg_err)?;
        for p in &points {
            let x = p[0];
            let (v, _) = s.eval(Complex64::new(x, 0.0), 1e-14).map_err(cfg_err)?;
            let (q, note) = if !quadrature {
                (None, None)
            } else if x == 0.0 {
                (
                    None,
                    Some("x = 0: series value used, quadrature refuses non-regular points".to_string()),
                )
            } else {
                let q =
                    torus_bessel_n1_with(&big_c, Complex64::new(lambda[0], 0.0), x, nodes, norm).map_err(cfg_err)?;
                series_vals.push(v);
                quads.push(q.clone());
                (Some(q), None)
            };
            rows.push(BesselRow {
                x: p.clone(),
                series: [v.re, v.im],
                quadrature: q,
                note,
            });
        }
    } else {
        let k: f64 = cfg.get("k", 0.0)?;
        let d_max: u32 = cfg.get("D_max", 24)?;
        let samples: u64 = cfg.get("samples", 100_000)?;
        let c: Vec<Complex64> = c_for_big_c(&ser_c, &conv)
            .map_err(cfg_err)?
            .iter()
            .map(|v| v.to_complex())
            .collect();
        let lam: Vec<Complex64> = lambda.iter().map(|l| Complex64::new(ell as f64 * l, 0.0)).collect();
        let e = series_multivariate(n, ell, Complex64::new(k, 0.0), &c, &lam, d_max, &conv).map_err(cfg_err)?;
        for p in &points {
            let xc: Vec<Complex64> = p.iter().map(|v| Complex64::new(*v, 0.0)).collect();
            let v = e.eval(&xc, 1e-10).map_err(cfg_err)?;
            let regular = p.iter().all(|v| *v != 0.0);
            let (q, note) = if !quadrature {
                (None, None)
            } else if !regular || k < 0.0 || k.fract() != 0.0 {
                (
                    None,
                    Some("quadrature needs a regular point and integer k >= 0; series value only".to_string()),
                )
            } else {
                let prob = McProblem {
                    n,
                    ell: ell as usize,
                    k: k as u32,
                    c: big_c.clone(),
                    lambda: lambda.clone(),
                    x: p.clone(),
                };
                match mc_bessel(&prob, samples, seed) {
                    Ok(q) => {
                        series_vals.push(v);
                        quads.push(q.clone());
                        (Some(q), None)
                    }
                    Err(err) => (None, Some(format!("quadrature refused: {}", err))),
                }
            };
            rows.push(BesselRow {
                x: p.clone(),
                series: [v.re, v.im],
                quadrature: q,
                note,
            });
        }
    }

    let mut pass = true;
    let mut summary = Vec::new();
    let mut report = json!({
        "n": n, "ell": ell, "C_integral": big_c, "t": t_of(&big_c),
        "series_C": ser_c.iter().map(rat_to_f64).collect::<Vec<_>>(),
        "lambda_series_scale": ell, "rows": to_value(&rows),
    });
    if !quads.is_empty() {
        let floor = if n == 1 { tol / 3.0 } else { 0.0 };
        let cc = cross_check(&series_vals, &quads, floor).map_err(cfg_err)?;
        if n == 1 {
            let max_err = series_vals
                .iter()
                .zip(&quads)
                .map(|(s, q)| (s - q.value).norm())
                .fold(0.0, f64::max);
            pass = max_err <= tol;
            summary.push(format!(
                "bessel n=1: {} (max |series - quadrature| = {:.3e}, tol {:.0e})",
                status(pass),
                max_err,
                tol
            ));
            report["max_abs_difference"] = json!(max_err);
        } else {
            pass = cc.pass;
            summary.push(format!(
                "bessel n={}: proportionality {} (constant {:.6e}{:+.6e}i, max z {:.2})",
                n,
                status(pass),
                cc.constant.re,
                cc.constant.im,
                cc.z_scores.iter().cloned().fold(0.0, f64::max)
            ));
        }
        report["cross_check"] = to_value(&cc);
    } else {
        summary.push("bessel: series only".into());
    }
    report["pass"] = json!(pass);
    let mut csv = String::from("x,series_re,series_im,quad_re,quad_im,stderr\n");
    for r in &rows {
        let x: Vec<String> = r.x.iter().map(|v| v.to_string()).collect();
        let (qr, qi, se) = match &r.quadrature {
            Some(q) => (
                format!("{:.17e}", q.value.re),
                format!("{:.17e}", q.value.im),
                format!("{:.6e}", q.stderr),
            ),
            None => (String::new(), String::new(), String::new()),
        };
        csv.push_str(&format!(
            "{},{:.17e},{:.17e},{},{},{}\n",
            x.join(" "),
            r.series[0],
            r.series[1],
            qr,
            qi,
            se
        ));
    }
    Ok(Outcome {
        code: code(pass),
        report,
        csv: Some(csv),
        summary,
    })
}
