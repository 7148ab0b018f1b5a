use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::experiments::config::{ExperimentConfig, ExperimentKind};
use crate::experiments::studies::{
    ensemble_study, pollution_sweep, rate_experiment, reference_distances, EnsembleResult, SweepResult,
};
use crate::operator::oracle::ColumnOracle;
use crate::operator::registry::{build_operator, parse_operator_id, spec_seed, OperatorSpec};
use crate::operator::sets::ReferenceSet;
use crate::spectra::pseudospectrum::pseudospectrum_grid;

/// Where a run wrote its artifacts, plus the JSON report.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub artifacts: Vec<PathBuf>,
    pub report: Value,
}

fn sample_seed(spec: &OperatorSpec, cfg: &ExperimentConfig, s: usize) -> u64 {
    spec_seed(spec).unwrap_or(cfg.seed).wrapping_add(s as u64)
}

/// `(description, set)`; `None` when the operator has nothing to compare against.
fn resolve_reference(t: &ColumnOracle, cfg: &ExperimentConfig) -> Result<Option<(String, ReferenceSet)>> {
    let meta = t.metadata();
    match cfg.reference.as_deref() {
        Some("pseudospectrum") => {
            let (g, eps) = match (&cfg.grid, cfg.epsilon) {
                (Some(g), Some(e)) => (g, e),
                _ => return Err(Error::Config(vec!["reference: `pseudospectrum` needs both grid and epsilon".into()])),
            };
            let grid = pseudospectrum_grid(t, g.region, (g.resolution[0], g.resolution[1]), eps, g.m)?;
            let pts: Vec<_> = grid.points().filter(|&(_, s)| s <= eps).map(|(z, _)| z).collect();
            if pts.is_empty() {
                return Err(Error::InvalidInput("pseudospectrum reference is empty on the grid".into()));
            }
            Ok(Some((format!("pseudospectrum(eps={eps}, m={})", g.m), ReferenceSet::Points(pts))))
        }
        Some(name) => match meta.and_then(|m| m.set(name)) {
            Some(set) => Ok(Some((name.to_string(), set.clone()))),
            None => Err(Error::Config(vec![format!("reference: operator `{}` has no set named `{name}`", t.name())])),
        },
        None => Ok(meta.and_then(|m| {
            m.set("spectrum").map(|s| ("spectrum".to_string(), s.clone())).or_else(|| m.analytic_sets.first().cloned())
        })),
    }
}

struct Writer {
    root: PathBuf,
    artifacts: Vec<PathBuf>,
}

impl Writer {
    fn write(&mut self, rel: &str, body: &str) -> Result<()> {
        let path = self.root.join(rel);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let mut f = fs::File::create(&path)?;
        f.write_all(body.as_bytes())?;
        self.artifacts.push(path);
        Ok(())
    }
}

fn points_csv(sweep: &SweepResult, key: (usize, usize, usize)) -> String {
    let ipr = sweep.ipr.get(&key);
    let mut s = String::from(if ipr.is_some() { "re,im,ipr\n" } else { "re,im\n" });
    for (k, z) in sweep.table[&key].points.iter().enumerate() {
        match ipr {
            Some(v) => s.push_str(&format!("{:e},{:e},{:e}\n", z.re, z.im, v[k])),
            None => s.push_str(&format!("{:e},{:e}\n", z.re, z.im)),
        }
    }
    s
}

fn write_points(w: &mut Writer, sweep: &SweepResult) -> Result<()> {
    for &(m, n, s) in sweep.table.keys() {
        w.write(&format!("sample_{s}/points_{m}_{n}_{s}.csv"), &points_csv(sweep, (m, n, s)))?;
    }
    Ok(())
}

fn distances_csv(d: &BTreeMap<(usize, usize), (f64, f64)>) -> String {
    let mut s = String::from("m,n,d_hausdorff,d_onesided\n");
    for (&(m, n), &(h, o)) in d {
        s.push_str(&format!("{m},{n},{h:e},{o:e}\n"));
    }
    s
}

fn distances_json(d: &BTreeMap<(usize, usize), (f64, f64)>) -> Value {
    Value::Array(
        d.iter().map(|(&(m, n), &(h, o))| json!({"m": m, "n": n, "d_hausdorff": h, "d_onesided": o})).collect(),
    )
}

/// Runs one configured experiment and writes its artifacts under `out_dir`.
/// Output depends only on the configuration, never on thread count or wall clock.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunSummary> {
    cfg.validate()?;
    let spec = parse_operator_id(&cfg.operator_id)?;
    let base = build_operator(&spec, Some(sample_seed(&spec, cfg, 0)))?;
    let shift = cfg.shift_c64();
    let mut w = Writer { root: out_dir.to_path_buf(), artifacts: Vec::new() };
    fs::create_dir_all(out_dir)?;
    let mut report = json!({
        "config": cfg.to_json(),
        "operator": base.name(),
    });
    match cfg.kind {
        ExperimentKind::Rate => {
            let n_max = cfg.n_values.iter().copied().max().unwrap_or(0);
            let res = rate_experiment(&base, &cfg.m_values, n_max)?;
            if cfg.wants("rates") {
                let mut s = String::from("n");
                for j in res.block_errors.keys() {
                    s.push_str(&format!(",block_{j}"));
                }
                for i in 0..res.entry_errors.len() {
                    s.push_str(&format!(",entry_{}", i + 1));
                }
                s.push('\n');
                for (k, n) in res.ns.iter().enumerate() {
                    s.push_str(&n.to_string());
                    for e in res.block_errors.values() {
                        s.push_str(&format!(",{:e}", e[k]));
                    }
                    for e in &res.entry_errors {
                        s.push_str(&format!(",{:e}", e[k]));
                    }
                    s.push('\n');
                }
                w.write("rates.csv", &s)?;
            }
            report["rates"] = serde_json::to_value(&res)?;
        }
        ExperimentKind::Sweep => {
            let reference = resolve_reference(&base, cfg)?;
            let mut all = SweepResult::default();
            for s in 0..cfg.samples {
                let t = if s == 0 { base.clone() } else { build_operator(&spec, Some(sample_seed(&spec, cfg, s)))? };
                let set = reference.as_ref().map(|r| r.1.clone()).unwrap_or(ReferenceSet::Points(Vec::new()));
                let one = pollution_sweep(&t, &cfg.m_values, &cfg.n_values, shift, &set)?;
                for ((m, n, _), est) in one.table {
                    all.table.insert((m, n, s), est);
                }
            }
            let ens = EnsembleResult { sweep: all, ..Default::default() };
            finish_cloud(cfg, &mut w, &mut report, ens, reference.as_ref())?;
        }
        ExperimentKind::Ensemble => {
            let reference = resolve_reference(&base, cfg)?;
            let ens = ensemble_study(
                |s| build_operator(&spec, Some(sample_seed(&spec, cfg, s))),
                cfg.samples,
                &cfg.m_values,
                &cfg.n_values,
                shift,
            )?;
            let mut stats = Vec::new();
            for (&(m, n), mem) in &ens.membership {
                stats.push(json!({
                    "m": m, "n": n,
                    "real_fraction": ens.real_fraction(m, n),
                    "membership": mem.iter().map(|x| json!({
                        "set": x.set, "slack": x.slack, "inside": x.inside, "total": x.total, "fraction": x.fraction(),
                    })).collect::<Vec<_>>(),
                }));
            }
            report["ensemble"] = Value::Array(stats);
            finish_cloud(cfg, &mut w, &mut report, ens, reference.as_ref())?;
        }
    }
    if cfg.wants("report") {
        let rel: Vec<String> = w
            .artifacts
            .iter()
            .map(|p| p.strip_prefix(out_dir).unwrap_or(p).to_string_lossy().into_owned())
            .chain(std::iter::once("report.json".to_string()))
            .collect();
        report["artifacts"] = json!(rel);
        w.write("report.json", &serde_json::to_string_pretty(&report)?)?;
    }
    Ok(RunSummary { out_dir: out_dir.to_path_buf(), artifacts: w.artifacts, report })
}

fn finish_cloud(
    cfg: &ExperimentConfig,
    w: &mut Writer,
    report: &mut Value,
    mut ens: EnsembleResult,
    reference: Option<&(String, ReferenceSet)>,
) -> Result<()> {
    if let Some((name, set)) = reference {
        for &m in &cfg.m_values {
            for &n in &cfg.n_values {
                let cloud = ens.pooled(m, n);
                ens.sweep.distances.insert((m, n), reference_distances(&cloud, set));
            }
        }
        report["reference"] = json!(name);
        report["distances"] = distances_json(&ens.sweep.distances);
        if cfg.wants("distances") {
            w.write("distances.csv", &distances_csv(&ens.sweep.distances))?;
        }
    }
    if cfg.wants("points") {
        write_points(w, &ens.sweep)?;
    }
    Ok(())
}
