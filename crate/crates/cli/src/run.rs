//! Command pipelines: config in, report bundle out.

use serde_json::json;

use saddle_pressure::geometry::{
    box_dimension, dimension_bound, escape_rate, expansion_rate, geometric_scales, survivor_cloud,
    CloudSource,
};
use saddle_pressure::linalg::Vector;
use saddle_pressure::oracle::{log_trace_periodic_sum, markov_equilibrium, transfer_pressure};
use saddle_pressure::orbits::OrbitConstants;
use saddle_pressure::pressure::{
    bowen_fixpoint_pressure, fallback_minimum, gap_estimate, p_sp_banded, p_sp_limit, saddle_series,
    separated_growth, volume_pressure, PressureSeries, SeparatedSettings,
};
use saddle_pressure::{Error, OrbitStatus, OrbitTable, Potential, SaddleFilter, SmoothSystem};

use crate::config::{ConfigError, ExperimentConfig};
use crate::report::{flag, int, num, ReportBundle, Table};
use crate::Command;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// 2 for anything wrong with the input, 3 for runtime status.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Core(e) => match e {
                Error::InvalidParameter { .. }
                | Error::Invalid(_)
                | Error::WindowTooSmall { .. }
                | Error::MethodUnavailable { .. }
                | Error::NoCoding { .. }
                | Error::VolumePotential(_)
                | Error::Reducible { .. } => 2,
                _ => 3,
            },
            RunError::Io(_) => 3,
        }
    }
}

type System = Box<dyn SmoothSystem<f64>>;

pub fn run_experiment(config: &ExperimentConfig, command: Command) -> Result<ReportBundle, RunError> {
    config.require(command)?;
    let system: System = config.system.build::<f64>()?;
    let mut out = ReportBundle::default();
    out.set("system", system.name());
    out.set("parameters", system.parameters());
    match command {
        Command::Orbits => orbits(config, system.as_ref(), &mut out)?,
        Command::Pressure => pressure(config, system.as_ref(), &mut out)?,
        Command::Separated => separated(config, system.as_ref(), &mut out)?,
        Command::Volume => volume(config, system.as_ref(), &mut out)?,
        Command::Escape => {
            escape(config, system.as_ref(), &mut out)?;
        }
        Command::Boxdim => {
            boxdim(config, system.as_ref(), &mut out)?;
        }
        Command::Bound => bound(config, system.as_ref(), &mut out)?,
        Command::Oracle => oracle(config, &mut out)?,
    }
    Ok(out)
}

fn table_for(config: &ExperimentConfig, system: &dyn SmoothSystem<f64>) -> Result<OrbitTable<f64>, RunError> {
    let n_max = config.orbits.as_ref().map(|o| o.n_max).unwrap_or(1);
    Ok(OrbitTable::build(system, n_max, &config.method())?)
}

fn status_name(s: OrbitStatus) -> String {
    format!("{s:?}").to_lowercase()
}

fn orbits(config: &ExperimentConfig, system: &dyn SmoothSystem<f64>, out: &mut ReportBundle) -> Result<(), RunError> {
    let table = table_for(config, system)?;
    let dim = system.dim();
    let alphas: Vec<f64> = config.filter.as_ref().map(|f| f.alpha.clone()).unwrap_or_default();
    let mut header: Vec<String> = vec!["period".into()];
    header.extend((0..dim).map(|i| format!("x{i}")));
    header.extend((0..dim).map(|i| format!("exponent{i}")));
    header.extend(["status".into(), "saddle".into()]);
    header.extend(alphas.iter().map(|a| format!("c_max_alpha_{}", num(*a))));
    header.push("residual".into());
    let refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let mut csv = Table::new("orbits", &refs);
    for o in &table.orbits {
        let mut row = vec![int(o.period)];
        row.extend((0..dim).map(|i| num(o.representative().coords[i])));
        row.extend((0..dim).map(|i| o.exponents.get(i).map(|x| num(*x)).unwrap_or_default()));
        row.push(status_name(o.status));
        row.push(flag(o.is_saddle()));
        for &a in &alphas {
            let mut f = SaddleFilter::new(a, 1.0);
            f.k_cap = config.k_cap();
            let cell = match OrbitConstants::compute(o, &f) {
                Ok(c) => num(c.lower.c_max),
                Err(_) => String::new(),
            };
            row.push(cell);
        }
        row.push(num(o.residual));
        csv.push(row);
    }
    let counts: Vec<_> = (1..=table.n_max)
        .map(|n| json!({"n": n, "fix_count": table.fix_count(n), "orbits": table.orbits.iter().filter(|o| o.period == n).count()}))
        .collect();
    out.set("n_max", table.n_max);
    out.set("fix_counts", counts);
    out.set("saddles", table.orbits.iter().filter(|o| o.is_saddle()).count());
    out.set("diagnostics", &table.diagnostics);
    out.table(csv);
    Ok(())
}

fn series_table(name: String, series: &PressureSeries<f64>) -> Table {
    let mut t = Table::new(name, &["n", "Q", "logQ_over_n", "count", "fallback"]);
    for r in &series.rows {
        t.push(vec![int(r.n), num(r.q), num(r.log_q_over_n), int(r.count), flag(r.fallback)]);
    }
    t
}

fn pressure(config: &ExperimentConfig, system: &dyn SmoothSystem<f64>, out: &mut ReportBundle) -> Result<(), RunError> {
    let filter_cfg = config.filter.as_ref().expect("checked");
    let pcfg = config.pressure.as_ref().expect("checked");
    let table = table_for(config, system)?;
    let phi: Potential<f64> = config.potential_spec().build()?;
    let min_phi = fallback_minimum(system, &table, &phi, pcfg.fallback_resolution)?;
    let window = pcfg.window;
    out.set("potential", phi.name());
    out.set("window", window);
    out.set("min_phi", min_phi);

    let bowen_series = saddle_series(system, &table, &phi, None, min_phi)?;
    out.table(series_table("bowen".into(), &bowen_series));
    let bowen = bowen_fixpoint_pressure(system, &table, &phi, window, min_phi)?;
    out.set("bowen", &bowen);
    out.set("gap", gap_estimate(system, &table, &phi, window, min_phi)?);

    let mut limits = Vec::new();
    for (ai, &alpha) in filter_cfg.alpha.iter().enumerate() {
        for (ci, &c) in filter_cfg.c.iter().enumerate() {
            let mut f = SaddleFilter::new(alpha, c);
            f.k_cap = config.k_cap();
            let s = saddle_series(system, &table, &phi, Some(&f), min_phi)?;
            out.table(series_table(format!("pressure_a{ai}_c{ci}"), &s));
        }
        let entry = match p_sp_limit(system, &table, &phi, alpha, &filter_cfg.c, window, min_phi) {
            Ok(g) => {
                let pass = g.estimate <= bowen.estimate + pcfg.slack;
                out.ledger.push(format!(
                    "p_sp_le_p_top(alpha={}): {} (p_sp {} <= p_top {} + {})",
                    num(alpha),
                    if pass { "PASS" } else { "FAIL" },
                    num(g.estimate),
                    num(bowen.estimate),
                    num(pcfg.slack)
                ));
                json!({"alpha": alpha, "status": "ok", "estimate": g})
            }
            Err(Error::NoSaddles) => json!({"alpha": alpha, "status": Error::NoSaddles.to_string()}),
            Err(e) => return Err(e.into()),
        };
        limits.push(entry);
    }
    out.set("p_sp", limits);

    if let Some(beta) = filter_cfg.beta {
        let mut banded = Vec::new();
        for (ci, &c) in filter_cfg.c.iter().enumerate() {
            let alpha = filter_cfg.alpha[filter_cfg.alpha.len() - 1];
            let mut f = SaddleFilter::banded(alpha, beta, c);
            f.k_cap = config.k_cap();
            let s = saddle_series(system, &table, &phi, Some(&f), min_phi)?;
            out.table(series_table(format!("banded_c{ci}"), &s));
            let g = p_sp_banded(system, &table, &phi, alpha, beta, c, window, min_phi)?;
            banded.push(json!({"alpha": alpha, "beta": beta, "c": c, "estimate": g}));
        }
        out.set("banded", banded);
    }
    Ok(())
}

fn separated(config: &ExperimentConfig, system: &dyn SmoothSystem<f64>, out: &mut ReportBundle) -> Result<(), RunError> {
    let s = config.separated.as_ref().expect("checked");
    let phi: Potential<f64> = config.potential_spec().build()?;
    let mut csv = Table::new("separated", &["epsilon", "n", "survivors", "set_size", "log_sum", "value"]);
    let mut estimates = Vec::new();
    for &eps in &s.epsilon {
        let settings = SeparatedSettings {
            epsilon: eps,
            grid: s.grid.clone(),
        };
        let (g, records) = separated_growth(system, &phi, s.window, &settings)?;
        for r in &records {
            csv.push(vec![num(eps), int(r.n), int(r.survivors), int(r.set_size), num(r.log_sum), num(r.value)]);
        }
        estimates.push(json!({"epsilon": eps, "estimate": g}));
    }
    out.set("potential", phi.name());
    out.set("window", s.window);
    out.set("estimates", estimates);
    out.table(csv);
    Ok(())
}

fn volume(config: &ExperimentConfig, system: &dyn SmoothSystem<f64>, out: &mut ReportBundle) -> Result<(), RunError> {
    let v = config.volume.as_ref().expect("checked");
    let table = table_for(config, system)?;
    let report = volume_pressure(system, &table, &v.alpha, &v.c, v.window)?;
    let mut csv = Table::new("volume_schedule", &["alpha", "c", "estimate", "stderr", "fallback_rows"]);
    for cell in &report.estimate.schedule {
        csv.push(vec![num(cell.alpha), num(cell.c), num(cell.estimate), num(cell.stderr), int(cell.fallback_rows)]);
    }
    out.set("window", v.window);
    out.set("volume_pressure", &report.estimate);
    out.set("oracle", report.oracle);
    out.table(csv);
    Ok(())
}

fn escape(
    config: &ExperimentConfig,
    system: &dyn SmoothSystem<f64>,
    out: &mut ReportBundle,
) -> Result<saddle_pressure::EscapeRateEstimate64, RunError> {
    let e = config.escape.as_ref().expect("checked");
    let seed = config.seed.expect("checked");
    let v = config.region_for(system)?;
    let est = escape_rate(system, &v, e.n_max, e.samples, seed)?;
    let mut csv = Table::new("escape", &["n", "survivors", "p_n"]);
    for (i, (s, p)) in est.survivors.iter().zip(&est.fractions).enumerate() {
        csv.push(vec![int(i + 1), int(*s), num(*p)]);
    }
    out.set("escape", &est);
    out.table(csv);
    Ok(est)
}

fn boxdim(
    config: &ExperimentConfig,
    system: &dyn SmoothSystem<f64>,
    out: &mut ReportBundle,
) -> Result<saddle_pressure::BoxDimension, RunError> {
    let b = config.boxdim.as_ref().expect("checked");
    let seed = config.seed.expect("checked");
    let v = config.region_for(system)?;
    let cloud = survivor_cloud(system, &v, b.depth, b.population, seed)?;
    let scales = geometric_scales(b.coarse, b.fine, b.scales);
    let d = box_dimension(&cloud.points, system.dim(), &scales, CloudSource::SurvivorSet)?;
    let mut csv = Table::new("boxdim", &["rho", "N"]);
    for (r, n) in d.scales.iter().zip(&d.counts) {
        csv.push(vec![num(*r), int(*n)]);
    }
    out.set(
        "cloud",
        json!({"points": cloud.points.len(), "depth": cloud.depth, "population": cloud.population, "survivors": cloud.survivors, "flags": cloud.flags}),
    );
    out.set("box_dimension", &d);
    out.table(csv);
    Ok(d)
}

fn bound(config: &ExperimentConfig, system: &dyn SmoothSystem<f64>, out: &mut ReportBundle) -> Result<(), RunError> {
    let x = config.expansion.as_ref().expect("checked");
    let slack = config.bound.as_ref().map(|b| b.slack).unwrap_or(0.1);
    let e = escape(config, system, out)?;
    let anchors: Vec<Vector<f64>> = if x.anchor_period > 0 {
        let table = OrbitTable::build(system, x.anchor_period, &config.method())?;
        table.points().map(|p| p.coords).collect()
    } else {
        Vec::new()
    };
    let s = expansion_rate(system, x.resolution, x.n_max, &anchors)?;
    let mut csv = Table::new("expansion", &["n", "rate", "points"]);
    for (i, (r, p)) in s.rates.iter().zip(&s.points).enumerate() {
        csv.push(vec![int(i + 1), num(*r), int(*p)]);
    }
    out.set("expansion", &s);
    out.table(csv);
    let d = boxdim(config, system, out)?;
    let b = dimension_bound(system.dim(), e.upper_rate, s.estimate)?;
    let check = b.check(d.estimate, slack);
    out.set("bound", b);
    out.set("check", check);
    out.set(
        "result",
        json!({
            "escape_rate": e.upper_rate,
            "expansion": s.estimate,
            "bound": b.bound,
            "measured_dimension": d.estimate,
            "verdict": if check.pass { "PASS" } else { "FAIL" },
        }),
    );
    out.ledger.push(check.ledger_row());
    Ok(())
}

fn oracle(config: &ExperimentConfig, out: &mut ReportBundle) -> Result<(), RunError> {
    let o = config.oracle.as_ref().expect("checked");
    let shift = o.shift.build::<f64>()?;
    let p = transfer_pressure(&shift)?;
    let mu = markov_equilibrium(&shift)?;
    let mut csv = Table::new("oracle", &["n", "log_trace", "log_trace_over_n"]);
    for n in 1..=o.n_max {
        let l = log_trace_periodic_sum(&shift, n)?;
        csv.push(vec![int(n), num(l), num(l / n as f64)]);
    }
    let free = mu.free_energy();
    let pass = (free - p).abs() <= 1e-9;
    out.ledger.push(format!(
        "variational_principle: {} (h + integral {} vs pressure {})",
        if pass { "PASS" } else { "FAIL" },
        num(free),
        num(p)
    ));
    out.set("pressure", p);
    out.set(
        "equilibrium",
        json!({"entropy": mu.entropy, "potential_integral": mu.potential_integral, "stationary": mu.stationary, "kernel": mu.kernel}),
    );
    out.table(csv);
    Ok(())
}
