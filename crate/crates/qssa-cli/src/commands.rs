use clap::Args;
use qssa::bounds::{
    envelope, verification_horizon, verification_trajectory, verify, BoundKind, BoundReport,
    Envelope, DEFAULT_SLACK,
};
use qssa::ode::{detect_transient_end, lin_grid, log_grid, reference_config, simulate, Trajectory};
use qssa::presets::{preset, PRESET_NAMES};
use qssa::reductions::{
    compare_on_grid, critical_set, normal_form_coefficients, riccati_base_point, sup_error,
    ComparisonRow, ReducedModelKind, ReducedVariable, Tfp,
};
use qssa::{
    classify_regime, dimensionless_groups, nullclines, timescales, RateParameters, Thresholds,
};

use crate::args::{ParamArgs, RunArgs};
use crate::error::{CliError, CliResult};
use crate::output::{flatten, records_to_csv, to_json, value_of, Format, Record, Sink, Table};
use crate::records::{constants_record, params_record};

const TRAJECTORY_HEADER: [&str; 5] = ["t", "s", "c", "p", "e"];
const RELERR_HEADER: [&str; 7] = [
    "t",
    "c_true",
    "c_reduced",
    "relerr_c",
    "p_true",
    "p_reduced",
    "relerr_p",
];

pub fn trajectory_table(tr: &Trajectory, params: &RateParameters) -> Table {
    let mut t = Table::new(TRAJECTORY_HEADER);
    for (time, y) in tr.times.iter().zip(&tr.states) {
        t.push(vec![*time, y[0], y[1], y[2], params.e0 - y[1]]);
    }
    t
}

/// Ten times the slower of t_C and t_D; 20·t_C when there is no slow phase.
pub fn default_horizon(params: &RateParameters) -> f64 {
    let ts = timescales(params);
    if ts.t_d.is_finite() {
        10.0 * ts.t_c.max(ts.t_d)
    } else {
        20.0 * ts.t_c
    }
}

/// t = 0 followed by a log grid reaching well inside the initial layer.
pub fn comparison_times(params: &RateParameters, t_end: f64, n: usize) -> Vec<f64> {
    let t_min = (1e-2 * timescales(params).t_c).min(1e-3 * t_end);
    let mut t = vec![0.0];
    t.extend(log_grid(t_min, t_end, n));
    t
}

fn relerr_table(rows: &[ComparisonRow]) -> Table {
    let mut t = Table::new(RELERR_HEADER);
    for r in rows {
        t.push(vec![
            r.t,
            r.c_true,
            r.c_reduced,
            r.relerr_c,
            r.p_true,
            r.p_reduced,
            r.relerr_p,
        ]);
    }
    t
}

fn reduced_table(rows: &[ComparisonRow], params: &RateParameters) -> Table {
    let mut t = Table::new(TRAJECTORY_HEADER);
    for r in rows {
        t.push(vec![
            r.t,
            r.s_reduced,
            r.c_reduced,
            r.p_reduced,
            params.e0 - r.c_reduced,
        ]);
    }
    t
}

fn truth_table(rows: &[ComparisonRow], params: &RateParameters) -> Table {
    let mut t = Table::new(TRAJECTORY_HEADER);
    for r in rows {
        t.push(vec![
            r.t,
            r.s_true,
            r.c_true,
            r.p_true,
            params.e0 - r.c_true,
        ]);
    }
    t
}

/// Largest value ignoring NaN; NaN if there is none.
fn nan_max(xs: impl Iterator<Item = f64>) -> f64 {
    xs.filter(|x| !x.is_nan()).fold(f64::NAN, f64::max)
}

fn emit_record(sink: &Sink, stem: &str, rec: &Record, format: Format) -> CliResult<()> {
    match format {
        Format::Json => sink.primary(&format!("{stem}.json"), &to_json(&rec.to_json_value())?),
        Format::Csv => sink.primary(
            &format!("{stem}.csv"),
            &records_to_csv(std::slice::from_ref(rec))?,
        ),
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ConstantsArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

pub fn constants(a: &ConstantsArgs) -> CliResult<()> {
    let p = a.params.resolve()?;
    let sink = Sink::new(a.run.out.as_deref())?;
    emit_record(
        &sink,
        "constants",
        &constants_record(&p),
        a.run.format.unwrap_or(Format::Json),
    )
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Land on t = 0 plus N log-spaced times instead of keeping every step
    #[arg(long, value_name = "N")]
    pub points: Option<usize>,
}

pub fn simulate_cmd(a: &SimulateArgs) -> CliResult<()> {
    let p = a.params.resolve()?;
    let t_end = a.run.t_end_or(default_horizon(&p))?;
    let mut cfg = a.run.config(&p);
    if let Some(n) = a.points {
        cfg = cfg
            .output_times(comparison_times(&p, t_end, n))
            .dense(false);
    }
    let tr = simulate(&p, t_end, &cfg)?;
    let sink = Sink::new(a.run.out.as_deref())?;
    sink.table(
        "trajectory",
        &trajectory_table(&tr, &p),
        a.run.format.unwrap_or(Format::Csv),
        true,
    )?;
    sink.aux("meta.json", &to_json(&tr.meta)?)
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Reduced model, e.g. SQSSA_S, TQSSA, RQSSA
    #[arg(long)]
    pub kind: ReducedModelKind,
    /// Log-spaced comparison times after t = 0
    #[arg(long, default_value_t = 400)]
    pub points: usize,
}

fn regime_verdict(kind: ReducedModelKind, p: &RateParameters) -> (&'static str, f64, String) {
    let r = classify_regime(&dimensionless_groups(p), &Thresholds::default());
    let q = match kind {
        ReducedModelKind::SqssaS | ReducedModelKind::SqssaP => &r.sqssa,
        ReducedModelKind::Rqssa => &r.rqssa,
        ReducedModelKind::Extended | ReducedModelKind::EqssaSegel => &r.extended,
        ReducedModelKind::Tqssa | ReducedModelKind::TqssaPractice => &r.tqssa,
    };
    let v = serde_json::to_value(q.verdict)
        .ok()
        .and_then(|v| v.as_str().map(String::from));
    (q.qualifier, q.value, v.unwrap_or_default())
}

fn reduction_summary(
    kind: ReducedModelKind,
    p: &RateParameters,
    rows: &[ComparisonRow],
    t_end: f64,
) -> Record {
    let mut r = Record::default();
    r.text("kind", kind.name());
    r.text(
        "variable",
        match kind.variable() {
            ReducedVariable::Substrate => "s",
            ReducedVariable::Product => "p",
        },
    );
    r.flag("historical_refuted", kind.historical_refuted());
    r.num("t_end", t_end);
    let sup = sup_error(kind, rows, (0.0, t_end));
    r.num("sup_error", sup);
    r.num("sup_error_over_s0", sup / p.s0);
    r.num("max_relerr_c", nan_max(rows.iter().map(|x| x.relerr_c)));
    r.num("max_relerr_p", nan_max(rows.iter().map(|x| x.relerr_p)));
    let (qualifier, value, verdict) = regime_verdict(kind, p);
    r.text("regime_qualifier", qualifier);
    r.num("regime_value", value);
    r.text("regime_verdict", verdict);
    r
}

pub fn reduce(a: &ReduceArgs) -> CliResult<()> {
    let p = a.params.resolve()?;
    let t_end = a.run.t_end_or(default_horizon(&p))?;
    let rows = compare_on_grid(a.kind, &p, &comparison_times(&p, t_end, a.points))?;
    let format = a.run.format.unwrap_or(Format::Csv);
    let sink = Sink::new(a.run.out.as_deref())?;
    sink.table("reduced", &reduced_table(&rows, &p), format, true)?;
    sink.table("relerr", &relerr_table(&rows), format, false)?;
    let mut summary = params_record(&p);
    summary.extend(reduction_summary(a.kind, &p, &rows, t_end));
    sink.aux("summary.json", &to_json(&summary.to_json_value())?)
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct PhaseArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Rate constants switched off for the critical set: KOFF_AND_KCAT, K1, E0 or KCAT
    #[arg(long, default_value = "KOFF_AND_KCAT")]
    pub tfp: Tfp,
    /// Nullcline samples on [0, s0]
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

pub fn phase(a: &PhaseArgs) -> CliResult<()> {
    let p = a.params.resolve()?;
    let nc = nullclines(&p);
    let mut table = Table::new(["s", "c_nullcline", "s_nullcline"]);
    for s in lin_grid(0.0, p.s0, a.points.max(2)) {
        table.push(vec![s, nc.c_nullcline(s), nc.s_nullcline(s)]);
    }
    let format = a.run.format.unwrap_or(Format::Csv);
    let sink = Sink::new(a.run.out.as_deref())?;
    sink.table("nullclines", &table, format, true)?;
    if !sink.has_dir() {
        return Ok(());
    }

    let t_end = a.run.t_end_or(default_horizon(&p))?;
    let tr = simulate(&p, t_end, &a.run.config(&p))?;
    sink.table("trajectory", &trajectory_table(&tr, &p), format, false)?;

    let mut crit = serde_json::Map::new();
    flatten("", value_of(&critical_set(&p, a.tfp))?, &mut crit);
    flatten("riccati", value_of(&riccati_base_point(&p))?, &mut crit);
    match normal_form_coefficients(&p) {
        Ok(nf) => {
            crit.insert("normal_form_available".into(), true.into());
            flatten("normal_form", value_of(&nf)?, &mut crit);
        }
        Err(_) => {
            crit.insert("normal_form_available".into(), false.into());
        }
    }
    sink.aux("critical.json", &to_json(&crit)?)
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Envelope name, or "all"
    #[arg(long, default_value = "all")]
    pub kind: String,
    #[arg(long, default_value_t = DEFAULT_SLACK)]
    pub slack: f64,
}

fn bound_record(
    kind: BoundKind,
    p: &RateParameters,
    env: Option<&Envelope>,
    rep: Option<&BoundReport>,
    t_end: f64,
    error: &str,
) -> Record {
    let nan = f64::NAN;
    let mut r = Record::default();
    r.text("kind", kind.name());
    r.num("A", env.map_or(nan, |e| e.a));
    r.num("r", env.map_or(nan, |e| e.r));
    r.num("B", env.map_or(nan, |e| e.b));
    r.flag("vacuous", env.is_some_and(|e| e.vacuous));
    r.flag("holds", rep.is_some_and(|x| x.holds));
    r.num("max_violation", rep.map_or(nan, |x| x.max_violation));
    r.num(
        "limsup_estimate",
        rep.and_then(|x| x.limsup_estimate).unwrap_or(nan),
    );
    r.num("eps_D", env.map_or(nan, |e| e.eps_d));
    r.num("eps_L", env.map_or(nan, |e| e.eps_l));
    r.num("eps_LT", env.map_or(nan, |e| e.eps_lt));
    r.num("min_margin", rep.map_or(nan, |x| x.min_margin));
    r.num(
        "unresolved_samples",
        rep.map_or(nan, |x| x.unresolved_samples as f64),
    );
    r.num(
        "offset_over_lambda",
        env.map_or(nan, |e| e.offset_over_lambda(p)),
    );
    r.num(
        "rate_in_tz_units",
        env.map_or(nan, |e| e.rate_in_tz_units(p)),
    );
    r.num("slack", rep.map_or(nan, |x| x.slack));
    r.num("t_end", t_end);
    r.text("error", error);
    r
}

fn margins_table(rep: &BoundReport) -> Table {
    let mut t = Table::new(["t", "quantity", "envelope", "margin"]);
    for m in &rep.samples {
        t.push(vec![m.t, m.quantity, m.envelope, m.margin]);
    }
    t
}

pub fn bounds(a: &BoundsArgs) -> CliResult<()> {
    let p = a.params.resolve()?;
    let all = a.kind.eq_ignore_ascii_case("all");
    let kinds: Vec<BoundKind> = if all {
        BoundKind::ALL.to_vec()
    } else {
        vec![a.kind.parse().map_err(CliError::Usage)?]
    };
    let mut envs = Vec::new();
    for &k in &kinds {
        match envelope(k, &p) {
            Ok(e) => envs.push((k, Ok(e))),
            Err(e) if all => envs.push((k, Err(e))),
            Err(e) => return Err(e.into()),
        }
    }
    let usable: Vec<Envelope> = envs
        .iter()
        .filter_map(|(_, e)| e.as_ref().ok().cloned())
        .collect();
    let t_end = a.run.t_end_or(verification_horizon(&usable))?;
    let tr = verification_trajectory(&p, t_end)?;
    let sink = Sink::new(a.run.out.as_deref())?;

    let mut records = Vec::new();
    for (k, env) in &envs {
        let rec = match env {
            Ok(env) => {
                let rep = verify(&tr, env, a.slack)?;
                let stem = if all {
                    format!("margins_{}", k.name().to_ascii_lowercase())
                } else {
                    "margins".into()
                };
                sink.table(&stem, &margins_table(&rep), Format::Csv, false)?;
                bound_record(*k, &p, Some(env), Some(&rep), t_end, "")
            }
            Err(e) => bound_record(*k, &p, None, None, t_end, &e.to_string()),
        };
        records.push(rec);
    }
    match a.run.format.unwrap_or(Format::Json) {
        Format::Csv => sink.primary("bounds.csv", &records_to_csv(&records)?),
        Format::Json if all => {
            let arr: Vec<_> = records.iter().map(Record::to_json_value).collect();
            sink.primary("bounds.json", &to_json(&arr)?)
        }
        Format::Json => sink.primary("bounds.json", &to_json(&records[0].to_json_value())?),
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FigureArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_parser = PRESET_NAMES)]
    pub preset: String,
    /// Log-spaced comparison times after t = 0
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
}

/// Reductions drawn for a preset; the first one gets `relerr.csv`.
pub fn figure_reductions(name: &str) -> &'static [ReducedModelKind] {
    use ReducedModelKind::*;
    match name {
        "fig-final" => &[Tqssa, SqssaP],
        "fig-eqssa" => &[Extended, EqssaSegel],
        _ => &[SqssaS, Extended],
    }
}

pub fn figure_horizon(name: &str, p: &RateParameters) -> f64 {
    match name {
        "fig-final" => 600.0,
        _ => 5.0 * timescales(p).t_d,
    }
}

pub fn figure(a: &FigureArgs) -> CliResult<()> {
    let fp = preset(&a.preset)
        .ok_or_else(|| CliError::Usage(format!("unknown preset '{}'", a.preset)))?;
    let p = fp.params;
    let t_end = a.run.t_end_or(figure_horizon(fp.name, &p))?;
    let times = comparison_times(&p, t_end, a.points);
    let format = a.run.format.unwrap_or(Format::Csv);
    let sink = Sink::new(a.run.out.as_deref())?;

    let g = dimensionless_groups(&p);
    let mut summary = Record::default();
    summary.text("preset", fp.name);
    summary.text("notes", fp.notes.join("; "));
    summary.extend(params_record(&p));
    summary.num("eps_t", g.eps_t);
    summary.num("eps_d", g.eps_d);
    summary.num("eps_l", g.eps_l);
    summary.num("eps_lt", g.eps_lt);
    summary.num("t_end", t_end);

    let dense = simulate(&p, t_end, &reference_config(&p))?;
    let t_star = detect_transient_end(&dense).unwrap_or(f64::NAN);
    summary.num("t_star", t_star);
    summary.num(
        "s_at_t_star",
        if t_star.is_finite() {
            dense.interpolate(t_star)[0]
        } else {
            f64::NAN
        },
    );
    summary.num("riccati_s_star", riccati_base_point(&p).s_star);

    for (i, &kind) in figure_reductions(fp.name).iter().enumerate() {
        let rows = compare_on_grid(kind, &p, &times)?;
        if i == 0 {
            sink.table("mass_action", &truth_table(&rows, &p), format, false)?;
            sink.table("relerr", &relerr_table(&rows), format, false)?;
            summary.text("primary", kind.name());
            summary.num("max_relerr_c", nan_max(rows.iter().map(|r| r.relerr_c)));
            summary.num("max_relerr_p", nan_max(rows.iter().map(|r| r.relerr_p)));
        }
        sink.table(
            &kind.name().to_ascii_lowercase(),
            &reduced_table(&rows, &p),
            format,
            false,
        )?;
        let key = kind.name().to_ascii_lowercase();
        summary.num(
            format!("{key}_sup_error"),
            sup_error(kind, &rows, (0.0, t_end)),
        );
        let window = if t_star.is_finite() {
            sup_error(kind, &rows, (t_star, t_end))
        } else {
            f64::NAN
        };
        summary.num(format!("{key}_sup_error_after_t_star"), window);
    }
    sink.primary("summary.json", &to_json(&summary.to_json_value())?)
}
