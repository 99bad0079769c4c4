use std::path::{Path, PathBuf};

use clap::Args;
use qssa::estimation::{fit, synthesize, FitSpec, ProgressCurve};
use qssa::ode::lin_grid;
use qssa::reductions::ReducedModelKind;
use qssa::timescales;

use crate::args::{ParamArgs, RunArgs};
use crate::error::{CliError, CliResult};
use crate::output::{flatten, to_json, value_of, Format, Sink, Table};

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FitArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// RQSSA, SQSSA_P, TQSSA or TQSSA_PRACTICE
    #[arg(long)]
    pub model: ReducedModelKind,
    /// CSV with columns t,p; without it a synthetic curve is drawn from the parameters
    #[arg(long, value_name = "CSV")]
    pub data: Option<PathBuf>,
    /// Free parameter as name=initial or name=initial:lower:upper
    #[arg(long = "free", value_name = "SPEC")]
    pub free: Vec<String>,
    /// Model parameter held at name=value
    #[arg(long = "fixed", value_name = "NAME=VALUE")]
    pub fixed: Vec<String>,
    /// Constant used only for the regime report, name=value
    #[arg(long = "known", value_name = "NAME=VALUE")]
    pub known: Vec<String>,
    /// Standard deviation of the synthetic noise
    #[arg(long, default_value_t = 0.0)]
    pub noise_sd: f64,
    /// Number of synthetic samples
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
}

fn number(text: &str, what: &str) -> CliResult<f64> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{what}: '{text}' is not a number")))
}

fn name_value(spec: &str) -> CliResult<(&str, &str)> {
    spec.split_once('=')
        .map(|(n, v)| (n.trim(), v))
        .ok_or_else(|| CliError::Usage(format!("expected name=value, got '{spec}'")))
}

fn apply_free(spec: FitSpec, text: &str) -> CliResult<FitSpec> {
    let (name, rest) = name_value(text)?;
    let parts: Vec<&str> = rest.split(':').collect();
    match parts.as_slice() {
        [init] => Ok(spec.free(name, number(init, name)?)),
        [init, lo, hi] => Ok(spec.free_in(
            name,
            number(init, name)?,
            number(lo, name)?,
            number(hi, name)?,
        )),
        _ => Err(CliError::Usage(format!(
            "--free {text}: expected name=init[:lo:hi]"
        ))),
    }
}

/// Product curve from a `t,p` CSV; other columns are ignored.
pub fn read_curve(path: &Path) -> CliResult<ProgressCurve> {
    let input = |message: String| CliError::Input {
        path: path.display().to_string(),
        message,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(|e| input(e.to_string()))?;
    let headers = rdr.headers().map_err(|e| input(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| input(format!("missing column '{name}'")))
    };
    let (it, ip) = (col("t")?, col("p")?);
    let (mut times, mut p) = (Vec::new(), Vec::new());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| input(e.to_string()))?;
        let get = |i: usize| -> CliResult<f64> {
            let field = rec.get(i).unwrap_or("");
            field
                .trim()
                .parse()
                .map_err(|_| input(format!("row {}: '{field}' is not a number", line + 2)))
        };
        times.push(get(it)?);
        p.push(get(ip)?);
    }
    Ok(ProgressCurve::new(times, p))
}

pub fn fit_cmd(a: &FitArgs) -> CliResult<()> {
    let spec_params = a.params.spec()?;
    let mut spec = FitSpec::new(a.model);
    for f in &a.free {
        spec = apply_free(spec, f)?;
    }
    if spec.free.is_empty() {
        return Err(CliError::Usage(
            "at least one --free parameter is required".into(),
        ));
    }
    for f in &a.fixed {
        let (n, v) = name_value(f)?;
        spec = spec.fixed(n, number(v, n)?);
    }
    for f in &a.known {
        let (n, v) = name_value(f)?;
        spec = spec.known(n, number(v, n)?);
    }

    let curve = match &a.data {
        Some(path) => {
            let mut c = read_curve(path)?;
            c.e0 = spec_params.e0;
            c.s0 = spec_params.s0;
            c
        }
        None => {
            let p = spec_params.resolve()?;
            let t_end = a.run.t_end_or(3.0 * timescales(&p).t_d)?;
            let times = lin_grid(t_end / a.samples.max(1) as f64, t_end, a.samples);
            // the truth supplies the context a real assay would record
            for (n, v) in [("k1", p.k1), ("k_off", p.k_off), ("k_m", p.k_m())] {
                if !spec.known.contains_key(n) {
                    spec = spec.known(n, v);
                }
            }
            synthesize(&p, &times, a.noise_sd, a.run.seed)?
        }
    };

    let res = fit(&curve, &spec)?;
    let sink = Sink::new(a.run.out.as_deref())?;
    let mut json = serde_json::Map::new();
    flatten("", value_of(&res)?, &mut json);
    json.remove("fitted");
    json.insert("samples".into(), curve.times.len().into());
    json.insert("noise_sd".into(), value_of(&curve.noise_sd)?);
    sink.primary("fit.json", &to_json(&json)?)?;

    let mut table = Table::new(["t", "p_data", "p_fit"]);
    for ((t, d), f) in curve.times.iter().zip(&curve.p).zip(&res.fitted) {
        table.push(vec![*t, *d, *f]);
    }
    sink.table("fitted", &table, a.run.format.unwrap_or(Format::Csv), false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_spec_forms() {
        let s = apply_free(FitSpec::new(ReducedModelKind::Rqssa), "k_cat=0.5:0.1:2").unwrap();
        assert_eq!(
            (s.free[0].initial, s.free[0].lower, s.free[0].upper),
            (0.5, 0.1, 2.0)
        );
        let s = apply_free(s, "s0=3").unwrap();
        assert_eq!(s.free[1].upper, f64::INFINITY);
        assert!(apply_free(FitSpec::new(ReducedModelKind::Rqssa), "k_cat").is_err());
        assert!(apply_free(FitSpec::new(ReducedModelKind::Rqssa), "k_cat=1:2").is_err());
    }
}
