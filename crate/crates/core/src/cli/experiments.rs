//! One function per experiment kind. Each returns its tables, a JSON
//! summary and the curves worth plotting; file handling lives in the caller.

use rand::Rng;
use serde_json::{json, Value};

use super::config::{
    ClassifyParams, DynCurveParams, ExperimentConfig, OracleCheckParams, Params, RfgCurveParams, TimeSection, TypicalityParams,
    VarianceParams,
};
use super::table::{cell, curve_table, Table};
use crate::error::Result;
use crate::exact_oracle::compare_with_gaussian;
use crate::page_curves::{
    atypical_curve, dynamical_average, interacting_reference, model_label, moment_prediction, quasiparticle_entropy, series_curve,
    series_dyn, CurvePoint, CurveSource, PageCurve,
};
use crate::quench::conserved_occupations;
use crate::rfg::{
    concentration_report, default_epsilon_grid, rfg_page_curve, sample_observables, series_rfg, variance_scaling, EnsembleConfig,
};
use crate::rng::{stream, Domain};

/// What an experiment produced.
pub struct Outcome {
    /// `(suffix, table)`; the main table has no suffix.
    pub tables: Vec<(Option<String>, Table)>,
    pub summary: Value,
    pub curves: Vec<PageCurve>,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Outcome> {
    match &cfg.params {
        Params::RfgCurve(p) => rfg_curve(cfg, p),
        Params::DynCurve(p) => dyn_curve(cfg, p),
        Params::Typicality(p) => typicality(cfg, p),
        Params::Variance(p) => variance(cfg, p),
        Params::Moments(p) => moments(cfg, p),
        Params::Classify(p) => classify(p),
        Params::Qp(p) => qp(cfg, p),
        Params::OracleCheck(p) => oracle_check(cfg, p),
    }
}

fn half_sizes(n: usize, sizes: &[usize]) -> Vec<usize> {
    sizes.iter().copied().filter(|&k| 2 * k <= n).collect()
}

/// Analytic companion curves on the sizes where each is defined.
fn companions(n: usize, sizes: &[usize]) -> Result<Vec<PageCurve>> {
    let half = half_sizes(n, sizes);
    let mut out = Vec::new();
    if !half.is_empty() {
        out.push(series_curve(CurveSource::SeriesRfg, n, &half, series_rfg)?.with_truncation("f^4"));
        out.push(series_curve(CurveSource::SeriesDyn, n, &half, series_dyn)?.with_truncation("f^4"));
    }
    out.push(series_curve(CurveSource::InteractingReference, n, sizes, |f| interacting_reference(f, n))?);
    Ok(out)
}

fn with_companions(main: Table, curves: &[PageCurve]) -> Vec<(Option<String>, Table)> {
    let mut tables = vec![(None, main)];
    for c in curves {
        tables.push((Some(c.source.name().to_string()), curve_table(c)));
    }
    tables
}

/// Largest `|density − series_rfg|` over points with `f ≤ ½`.
fn max_gap_to_series(curve: &PageCurve) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in &curve.points {
        let f = p.n_a as f64 / curve.n as f64;
        if f <= 0.5 {
            worst = worst.max((p.mean / curve.n as f64 - series_rfg(f)?).abs());
        }
    }
    Ok(worst)
}

fn rfg_curve(cfg: &ExperimentConfig, p: &RfgCurveParams) -> Result<Outcome> {
    let ens = EnsembleConfig::new(p.n, p.m.unwrap_or(p.n / 2), p.samples, cfg.seed)?;
    let r = rfg_page_curve(&ens, &p.sizes)?;
    let mut main = curve_table(&r.curve).meta("samples", p.samples).meta("m", ens.m);
    main.columns.push("variance".into());
    for (row, st) in main.rows.iter_mut().zip(&r.stats) {
        row.push(cell(st.variance_entropy));
    }
    let comp = companions(p.n, &r.curve.points.iter().map(|q| q.n_a).collect::<Vec<_>>())?;
    let summary = json!({
        "points": r.curve.points.len(),
        "max_abs_density_gap_to_series_rfg": if 2 * ens.m == ens.n { json!(max_gap_to_series(&r.curve)?) } else { Value::Null },
    });
    let mut curves = vec![r.curve];
    curves.extend(comp.iter().cloned());
    Ok(Outcome { tables: with_companions(main, &comp), summary, curves })
}

fn dyn_curve(cfg: &ExperimentConfig, p: &DynCurveParams) -> Result<Outcome> {
    let spec = p.model.spec(None).map_err(crate::Error::Validation)?;
    let grid = TimeSection::grid(p.time.as_ref(), cfg.seed);
    let avg = dynamical_average(&spec, &grid, &p.sizes)?;
    let curve = avg.curve;
    let sizes: Vec<usize> = curve.points.iter().map(|q| q.n_a).collect();
    let profile = conserved_occupations(&spec)?;
    let mut comp = companions(spec.n, &sizes)?;
    let qp_points = sizes
        .iter()
        .map(|&k| Ok(CurvePoint { n_a: k, mean: quasiparticle_entropy(&profile, spec.n, k)?, stderr: 0.0 }))
        .collect::<Result<Vec<_>>>()?;
    comp.push(PageCurve::new(spec.n, CurveSource::Quasiparticle, model_label(&spec), qp_points)?);
    let half = half_sizes(spec.n, &sizes);
    if !half.is_empty() {
        let mut at = atypical_curve(&profile, &half)?;
        at.model = model_label(&spec);
        comp.push(at);
    }
    let main = curve_table(&curve)
        .meta("time_scheme", serde_json::to_value(grid.scheme).unwrap().as_str().unwrap_or(""))
        .meta("time_window", format!("[{}, {}]", grid.t_min, grid.t_max))
        .meta("time_samples", grid.samples);
    let gap_half = curve.point(spec.n / 2).map(|q| q.mean / spec.n as f64 - series_rfg(0.5).unwrap_or(f64::NAN));
    let summary = json!({
        "points": curve.points.len(),
        "theorem2_satisfied": profile.theorem2_satisfied,
        "max_occupation_deviation": profile.max_deviation(),
        "max_abs_density_gap_to_series_rfg": max_gap_to_series(&curve)?,
        "signed_gap_at_half": gap_half,
    });
    let mut curves = vec![curve];
    curves.extend(comp.iter().cloned());
    Ok(Outcome { tables: with_companions(main, &comp), summary, curves })
}

fn typicality(cfg: &ExperimentConfig, p: &TypicalityParams) -> Result<Outcome> {
    let ens = EnsembleConfig::half_filling(p.n, p.samples, cfg.seed)?;
    let obs = sample_observables(&ens, p.n_a)?;
    let mut t = Table::new(&["bound", "epsilon", "empirical_tail", "analytic_bound", "flagged"])
        .meta("n", p.n)
        .meta("n_a", p.n_a)
        .meta("samples", p.samples)
        .meta("note", "analytic_bound is empty where epsilon lies outside the bound's domain");
    let mut per_kind = serde_json::Map::new();
    let mut total = 0;
    for kind in p.bound.kinds() {
        let grid = p.epsilons.clone().unwrap_or_else(|| default_epsilon_grid(kind, p.n, p.n_a));
        let r = concentration_report(kind, p.n, p.n_a, &obs, &grid)?;
        for (i, eps) in grid.iter().enumerate() {
            t.push(vec![
                kind.name().to_string(),
                cell(*eps),
                cell(r.empirical_tail[i]),
                r.analytic_bound[i].map(cell).unwrap_or_default(),
                r.flagged[i].to_string(),
            ]);
        }
        total += r.violations();
        per_kind.insert(kind.name().into(), json!({ "violations": r.violations(), "binding_points": r.binding_points() }));
    }
    let summary = json!({ "violations": total, "bounds": per_kind });
    Ok(Outcome { tables: vec![(None, t)], summary, curves: vec![] })
}

fn variance(cfg: &ExperimentConfig, p: &VarianceParams) -> Result<Outcome> {
    let fit = variance_scaling(&p.n_values, p.n_a, p.samples, cfg.seed)?;
    let mut t = Table::new(&["n", "variance", "variance_stderr"]).meta("n_a", p.n_a).meta("samples", p.samples);
    for i in 0..fit.n_values.len() {
        t.push(vec![fit.n_values[i].to_string(), cell(fit.variances[i]), cell(fit.variance_stderrs[i])]);
    }
    t.set_meta("slope", cell(fit.slope));
    t.set_meta("slope_stderr", cell(fit.slope_stderr));
    let summary = json!({ "slope": fit.slope, "slope_stderr": fit.slope_stderr, "intercept": fit.intercept });
    Ok(Outcome { tables: vec![(None, t)], summary, curves: vec![] })
}

fn moments(cfg: &ExperimentConfig, p: &DynCurveParams) -> Result<Outcome> {
    let spec = p.model.spec(None).map_err(crate::Error::Validation)?;
    let grid = TimeSection::grid(p.time.as_ref(), cfg.seed);
    let avg = dynamical_average(&spec, &grid, &p.sizes)?;
    let mut cols = vec!["n_a".to_string(), "f".to_string()];
    for q in 1..=6 {
        cols.push(format!("tr_x{q}"));
        cols.push(format!("tr_x{q}_stderr"));
    }
    for q in [2, 4, 6] {
        cols.push(format!("pred_x{q}"));
        cols.push(format!("rel_err_x{q}"));
    }
    let mut t = Table { meta: vec![("model".into(), model_label(&spec))], columns: cols, rows: vec![] };
    let mut worst_rel: f64 = 0.0;
    let mut worst_odd: f64 = 0.0;
    for m in &avg.moments {
        let mut row = vec![m.n_a.to_string(), cell(m.f)];
        for q in 0..6 {
            row.push(cell(m.means[q]));
            row.push(cell(m.stderrs[q]));
        }
        for (q, order) in [(2usize, 1u32), (4, 2), (6, 3)] {
            match moment_prediction(order, spec.n, m.n_a) {
                Ok(pred) => {
                    let rel = (m.means[q - 1] - pred).abs() / pred.abs();
                    worst_rel = worst_rel.max(rel);
                    row.push(cell(pred));
                    row.push(cell(rel));
                }
                Err(_) => {
                    row.push(String::new());
                    row.push(String::new());
                }
            }
        }
        worst_odd = worst_odd.max(m.tr_x3().abs() / (m.n_a as f64 / spec.n as f64));
        t.push(row);
    }
    let summary = json!({ "max_relative_error": worst_rel, "max_tr_x3_over_f": worst_odd });
    Ok(Outcome { tables: vec![(None, t)], summary, curves: vec![] })
}

fn classify(p: &ClassifyParams) -> Result<Outcome> {
    let spec = p.model.spec(None).map_err(crate::Error::Validation)?;
    let prof = conserved_occupations(&spec)?;
    let mut t = Table::new(&["index", "k", "occupation", "eta", "degenerate"])
        .meta("model", model_label(&spec))
        .meta("theorem2_satisfied", prof.theorem2_satisfied);
    for i in 0..prof.n {
        t.push(vec![i.to_string(), cell(prof.momenta[i]), cell(prof.occupations[i]), cell(prof.eta[i]), prof.degenerate[i].to_string()]);
    }
    let summary = json!({
        "theorem2_satisfied": prof.theorem2_satisfied,
        "max_occupation_deviation": prof.max_deviation(),
        "degenerate_modes": prof.degenerate.iter().filter(|&&d| d).count(),
    });
    Ok(Outcome { tables: vec![(None, t)], summary, curves: vec![] })
}

fn qp(cfg: &ExperimentConfig, p: &DynCurveParams) -> Result<Outcome> {
    let spec = p.model.spec(None).map_err(crate::Error::Validation)?;
    let grid = TimeSection::grid(p.time.as_ref(), cfg.seed);
    let curve = dynamical_average(&spec, &grid, &p.sizes)?.curve;
    let prof = conserved_occupations(&spec)?;
    let mut t = Table::new(&["n_a", "f", "mean_entropy", "stderr", "quasiparticle", "excess"]).meta("model", model_label(&spec));
    let mut qp_points = Vec::new();
    let mut holds = true;
    let mut min_margin = f64::INFINITY;
    for q in &curve.points {
        let s = quasiparticle_entropy(&prof, spec.n, q.n_a)?;
        let excess = q.mean - s;
        holds &= q.mean >= s - 2.0 * q.stderr;
        min_margin = min_margin.min(excess / q.stderr.max(f64::MIN_POSITIVE));
        t.push(vec![q.n_a.to_string(), cell(q.n_a as f64 / spec.n as f64), cell(q.mean), cell(q.stderr), cell(s), cell(excess)]);
        qp_points.push(CurvePoint { n_a: q.n_a, mean: s, stderr: 0.0 });
    }
    let excess_half = curve.point(spec.n / 2).map(|q| q.mean - quasiparticle_entropy(&prof, spec.n, q.n_a).unwrap_or(f64::NAN));
    let qp_curve = PageCurve::new(spec.n, CurveSource::Quasiparticle, model_label(&spec), qp_points)?;
    let summary = json!({ "lower_bound_holds": holds, "excess_at_half": excess_half, "min_excess_in_stderr": min_margin });
    Ok(Outcome { tables: vec![(None, t)], summary, curves: vec![curve, qp_curve] })
}

fn oracle_check(cfg: &ExperimentConfig, p: &OracleCheckParams) -> Result<Outcome> {
    let tol = p.tolerance.unwrap_or(1e-8);
    let mut t = Table::new(&["model", "n", "t", "start", "n_a", "gaussian", "fock", "abs_diff"]).meta("tolerance", cell(tol));
    let mut worst: f64 = 0.0;
    let mut count = 0usize;
    let mut case = 0u64;
    for m in &p.models {
        for &n in &p.n_values {
            let spec = m.spec(Some(n)).map_err(crate::Error::Validation)?;
            let mut rng = stream(cfg.seed, Domain::OracleTimes, case);
            case += 1;
            let times: Vec<f64> = (0..p.times).map(|_| p.t_max * rng.random::<f64>()).collect();
            let label = model_label(&spec);
            for r in compare_with_gaussian(&spec, &times)? {
                worst = worst.max(r.abs_diff());
                count += 1;
                t.push(vec![
                    label.clone(),
                    n.to_string(),
                    cell(r.t),
                    r.start.to_string(),
                    r.n_a.to_string(),
                    cell(r.gaussian),
                    cell(r.fock),
                    cell(r.abs_diff()),
                ]);
            }
        }
    }
    let pass = worst < tol;
    t.set_meta("max_abs_diff", cell(worst));
    t.set_meta("pass", pass);
    let summary = json!({ "comparisons": count, "max_abs_diff": worst, "tolerance": tol, "pass": pass });
    Ok(Outcome { tables: vec![(None, t)], summary, curves: vec![] })
}
